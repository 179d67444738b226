//! Planarity testing by incremental face embedding
//! (Demoucron–Malgrange–Pertuiset), run independently on each biconnected
//! block. Quadratic per block, which is ample for core-network sizes.

use super::structure::decompose;
use crate::graph::Graph;

pub fn is_planar(g: &Graph) -> bool {
    let n = g.node_count();
    if n >= 3 && g.edge_count() > 3 * n - 6 {
        return false;
    }
    let blocks = decompose(g);
    (0..blocks.blocks.len()).all(|b| {
        let edges = &blocks.blocks[b];
        let vertices = blocks.block_vertices(g, b);
        // single edges and plain cycles are trivially planar
        if edges.len() <= vertices.len() {
            return true;
        }
        let mut local = vec![usize::MAX; n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut sub = Graph::new(vertices.len());
        for &e in edges {
            let (u, v) = g.edges()[e];
            sub.add_edge(local[u], local[v]);
        }
        block_is_planar(&sub)
    })
}

/// A piece of the graph not yet embedded, with the embedded vertices it
/// touches.
struct Fragment {
    attachments: Vec<usize>,
    /// Non-embedded vertices of the fragment; empty for a lone chord.
    interior: Vec<usize>,
}

struct Embedding<'g> {
    g: &'g Graph,
    vertex_in: Vec<bool>,
    edge_in: Vec<bool>,
    edge_count: usize,
    faces: Vec<Vec<usize>>,
}

impl<'g> Embedding<'g> {
    fn edge_embedded(&self, u: usize, v: usize) -> bool {
        self.edge_in[u * self.g.node_count() + v]
    }

    fn add_path(&mut self, path: &[usize]) {
        let n = self.g.node_count();
        for &v in path {
            self.vertex_in[v] = true;
        }
        for w in path.windows(2) {
            self.edge_in[w[0] * n + w[1]] = true;
            self.edge_in[w[1] * n + w[0]] = true;
            self.edge_count += 1;
        }
    }

    fn fragments(&self) -> Vec<Fragment> {
        let g = self.g;
        let n = g.node_count();
        let mut out = Vec::new();
        for &(u, v) in g.edges() {
            if self.vertex_in[u] && self.vertex_in[v] && !self.edge_embedded(u, v) {
                out.push(Fragment {
                    attachments: vec![u.min(v), u.max(v)],
                    interior: Vec::new(),
                });
            }
        }
        let mut seen = vec![false; n];
        for s in 0..n {
            if self.vertex_in[s] || seen[s] {
                continue;
            }
            let mut interior = vec![s];
            let mut attachments = Vec::new();
            seen[s] = true;
            let mut i = 0;
            while i < interior.len() {
                let v = interior[i];
                i += 1;
                for w in g.neighbors(v) {
                    if self.vertex_in[w] {
                        attachments.push(w);
                    } else if !seen[w] {
                        seen[w] = true;
                        interior.push(w);
                    }
                }
            }
            attachments.sort_unstable();
            attachments.dedup();
            out.push(Fragment {
                attachments,
                interior,
            });
        }
        out
    }

    /// Path through `frag` joining two distinct attachment vertices.
    fn fragment_path(&self, frag: &Fragment) -> Vec<usize> {
        if frag.interior.is_empty() {
            return frag.attachments.clone();
        }
        let g = self.g;
        let n = g.node_count();
        let first = frag.attachments[0];
        let mut in_frag = vec![false; n];
        for &v in &frag.interior {
            in_frag[v] = true;
        }
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for w in g.neighbors(first) {
            if in_frag[w] && parent[w] == usize::MAX {
                parent[w] = first;
                queue.push_back(w);
            }
        }
        while let Some(v) = queue.pop_front() {
            if let Some(other) = g.neighbors(v).find(|&w| w != first && self.vertex_in[w]) {
                let mut path = vec![other, v];
                let mut cur = v;
                while parent[cur] != first {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.push(first);
                path.reverse();
                return path;
            }
            for w in g.neighbors(v) {
                if in_frag[w] && parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        unreachable!("fragment of a biconnected block has two attachments")
    }

    /// Splits face `f` along `path`, whose end points both lie on it.
    fn split_face(&mut self, f: usize, path: &[usize]) {
        let face = std::mem::take(&mut self.faces[f]);
        let len = face.len();
        let a = *path.first().unwrap();
        let b = *path.last().unwrap();
        let i = face.iter().position(|&v| v == a).unwrap();
        let j = face.iter().position(|&v| v == b).unwrap();
        let inner = &path[1..path.len() - 1];

        let arc = |from: usize, to: usize| {
            let mut out = Vec::new();
            let mut k = from;
            loop {
                out.push(face[k]);
                if k == to {
                    break;
                }
                k = (k + 1) % len;
            }
            out
        };
        let mut first = arc(i, j);
        first.extend(inner.iter().rev());
        let mut second = arc(j, i);
        second.extend(inner.iter());
        self.faces[f] = first;
        self.faces.push(second);
    }
}

fn find_cycle(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut stack = vec![0usize];
    depth[0] = 0;
    while let Some(v) = stack.pop() {
        for w in g.neighbors(v) {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push(w);
            } else if w != parent[v] && parent[w] != v {
                // non-tree edge: walk both ends up to their common ancestor
                let mut left = vec![v];
                let mut right = vec![w];
                let (mut x, mut y) = (v, w);
                while depth[x] > depth[y] {
                    x = parent[x];
                    left.push(x);
                }
                while depth[y] > depth[x] {
                    y = parent[y];
                    right.push(y);
                }
                while x != y {
                    x = parent[x];
                    y = parent[y];
                    left.push(x);
                    right.push(y);
                }
                right.pop();
                left.extend(right.into_iter().rev());
                return left;
            }
        }
    }
    unreachable!("block with more edges than vertices contains a cycle")
}

fn block_is_planar(g: &Graph) -> bool {
    let n = g.node_count();
    if n >= 3 && g.edge_count() > 3 * n - 6 {
        return false;
    }
    let cycle = find_cycle(g);
    let mut emb = Embedding {
        g,
        vertex_in: vec![false; n],
        edge_in: vec![false; n * n],
        edge_count: 0,
        faces: Vec::new(),
    };
    let mut closed = cycle.clone();
    closed.push(cycle[0]);
    emb.add_path(&closed);
    emb.faces.push(cycle.clone());
    emb.faces.push(cycle.into_iter().rev().collect());

    let mut marks = vec![usize::MAX; n];
    while emb.edge_count < g.edge_count() {
        let fragments = emb.fragments();
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let mut admissible = Vec::new();
            for (face_id, face) in emb.faces.iter().enumerate() {
                for &v in face {
                    marks[v] = face_id;
                }
                if frag.attachments.iter().all(|&a| marks[a] == face_id) {
                    admissible.push(face_id);
                }
                for &v in face {
                    marks[v] = usize::MAX;
                }
            }
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face) = choice.expect("unembedded edges imply a fragment");
        let path = emb.fragment_path(&fragments[fi]);
        emb.split_face(face, &path);
        emb.add_path(&path);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::test_graphs::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
            }
        }
        out
    }

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, head);
                out.push(p);
            }
        }
        out
    }

    /// Whether the branch pairs can be realised as internally disjoint paths
    /// whose interiors come from `spare`.
    fn realisable(g: &Graph, pairs: &[(usize, usize)], spare: &[usize]) -> bool {
        let slots = pairs.len() + 1;
        let total = slots.pow(spare.len() as u32);
        'assign: for code in 0..total {
            let mut c = code;
            let mut routes: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
            for &x in spare {
                let slot = c % slots;
                c /= slots;
                if slot > 0 {
                    routes[slot - 1].push(x);
                }
            }
            for (p, route) in pairs.iter().zip(&routes) {
                let ok = permutations(route).into_iter().any(|order| {
                    let mut chain = vec![p.0];
                    chain.extend(order);
                    chain.push(p.1);
                    chain.windows(2).all(|w| g.has_edge(w[0], w[1]))
                });
                if !ok {
                    continue 'assign;
                }
            }
            return true;
        }
        false
    }

    /// Exhaustive search for a subdivided K5 or K3,3.
    fn has_kuratowski_subgraph(g: &Graph) -> bool {
        let n = g.node_count();
        for branch in subsets(n, 5) {
            let spare: Vec<usize> = (0..n).filter(|v| !branch.contains(v)).collect();
            let mut pairs = Vec::new();
            for i in 0..5 {
                for j in i + 1..5 {
                    pairs.push((branch[i], branch[j]));
                }
            }
            if realisable(g, &pairs, &spare) {
                return true;
            }
        }
        for six in subsets(n, 6) {
            let spare: Vec<usize> = (0..n).filter(|v| !six.contains(v)).collect();
            for side in subsets(5, 2) {
                let a: Vec<usize> = std::iter::once(six[0]).chain(side.iter().map(|&i| six[i + 1])).collect();
                let b: Vec<usize> = six.iter().copied().filter(|v| !a.contains(v)).collect();
                let pairs: Vec<_> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect();
                if realisable(g, &pairs, &spare) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn small_named_graphs() {
        assert!(is_planar(&cycle(5)));
        assert!(is_planar(&star(4)));
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        let k33 = Graph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert!(!is_planar(&k33));
        let mut k5_minus = complete(5);
        k5_minus = Graph::from_edges(5, &k5_minus.edges()[1..]);
        assert!(is_planar(&k5_minus));
    }

    #[test]
    fn petersen_and_grid() {
        let outer: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let spokes: Vec<_> = (0..5).map(|i| (i, i + 5)).collect();
        let inner: Vec<_> = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5)).collect();
        let petersen = Graph::from_edges(10, &[outer, spokes, inner].concat());
        assert!(!is_planar(&petersen));

        let mut grid = Graph::new(36);
        for r in 0..6 {
            for c in 0..6 {
                if c + 1 < 6 {
                    grid.add_edge(r * 6 + c, r * 6 + c + 1);
                }
                if r + 1 < 6 {
                    grid.add_edge(r * 6 + c, (r + 1) * 6 + c);
                }
            }
        }
        assert!(is_planar(&grid));
        // one long diagonal chord keeps it planar
        grid.add_edge(0, 35);
        assert!(is_planar(&grid));
    }

    #[test]
    fn agrees_with_kuratowski_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let (mut planar, mut nonplanar) = (0, 0);
        for trial in 0..400 {
            let n = rng.gen_range(3..=8);
            let p = rng.gen_range(0.2..0.9);
            let g = random_connected(n, p, &mut rng);
            let expected = !has_kuratowski_subgraph(&g);
            assert_eq!(is_planar(&g), expected, "trial {trial}: {:?}", g.edges());
            if expected {
                planar += 1;
            } else {
                nonplanar += 1;
            }
        }
        assert!(planar > 50 && nonplanar > 50, "{planar} / {nonplanar}");
    }

    #[test]
    fn never_planar_above_euler_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(3..=14);
            let g = random_connected(n, rng.gen_range(0.0..1.0), &mut rng);
            if g.edge_count() > 3 * n - 6 {
                assert!(!is_planar(&g));
            }
        }
    }
}
