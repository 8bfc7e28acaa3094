//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the helpers fan out over rayon's
//! global pool. Without it, or with [`Execution::Sequential`], they run on the
//! calling thread. Results are always collected in index order, so both paths
//! produce identical output for deterministic closures.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(0), f(1), ..., f(n-1)` and returns the results in order.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Maps every element of `items` and returns the results in order.
pub fn map_slice<S, T, F>(items: &[S], exec: Execution, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_indexed(items.len(), exec, |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let seq = map_indexed(1000, Execution::Sequential, |i| (i as f64).sqrt());
        let par = map_indexed(1000, Execution::Parallel, |i| (i as f64).sqrt());
        assert_eq!(seq, par);
    }

    #[test]
    fn empty_input() {
        let v: Vec<u8> = map_indexed(0, Execution::Parallel, |_| 1);
        assert!(v.is_empty());
    }
}
