//! Bridges, articulation points and biconnected blocks (Hopcroft–Tarjan
//! low-link, iterative so deep paths cannot overflow the call stack).

use crate::graph::Graph;

const UNSEEN: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Edge indices whose removal disconnects their component.
    pub bridges: Vec<usize>,
    /// `articulation[v]` is true when removing `v` disconnects its component.
    pub articulation: Vec<bool>,
    /// Edge indices of each biconnected block.
    pub blocks: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    pub fn articulation_count(&self) -> usize {
        self.articulation.iter().filter(|&&a| a).count()
    }

    /// Sorted vertex set of block `b`.
    pub fn block_vertices(&self, g: &Graph, b: usize) -> Vec<usize> {
        let mut vs: Vec<usize> = self.blocks[b]
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.edges()[e];
                [u, v]
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// For every vertex, the ids of the blocks it belongs to.
    pub fn vertex_blocks(&self, g: &Graph) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); g.node_count()];
        for b in 0..self.blocks.len() {
            for v in self.block_vertices(g, b) {
                out[v].push(b);
            }
        }
        out
    }
}

pub fn decompose(g: &Graph) -> BlockDecomposition {
    let n = g.node_count();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut articulation = vec![false; n];
    let mut bridges = Vec::new();
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    // (vertex, edge used to enter it, next incident position)
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    let mut clock = 0;

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        let mut root_children = 0;
        frames.push((root, UNSEEN, 0));

        while let Some(frame) = frames.last_mut() {
            let (v, parent_edge, pos) = *frame;
            if let Some(&(w, e)) = g.incident(v).get(pos) {
                frame.2 += 1;
                if e == parent_edge {
                    continue;
                }
                if disc[w] == UNSEEN {
                    edge_stack.push(e);
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    if v == root {
                        root_children += 1;
                    }
                    frames.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            frames.pop();
            let Some(&(u, _, _)) = frames.last() else {
                continue;
            };
            low[u] = low[u].min(low[v]);
            if low[v] >= disc[u] {
                if u != root {
                    articulation[u] = true;
                }
                let mut block = Vec::new();
                while let Some(e) = edge_stack.pop() {
                    block.push(e);
                    if e == parent_edge {
                        break;
                    }
                }
                block.sort_unstable();
                blocks.push(block);
            }
            if low[v] > disc[u] {
                bridges.push(parent_edge);
            }
        }
        if root_children >= 2 {
            articulation[root] = true;
        }
    }
    bridges.sort_unstable();
    BlockDecomposition {
        bridges,
        articulation,
        blocks,
    }
}

/// True for connected graphs on at least three vertices with no articulation
/// point (which also rules out bridges).
pub fn is_biconnected(g: &Graph) -> bool {
    if g.node_count() < 3 || !g.is_connected() {
        return false;
    }
    let d = decompose(g);
    d.articulation_count() == 0 && d.bridges.is_empty()
}
