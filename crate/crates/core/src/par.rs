//! Index-parallel map that falls back to a serial loop without the
//! `parallel` feature. Output order always follows the index.

pub(crate) fn map_indices<T: Send, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}
