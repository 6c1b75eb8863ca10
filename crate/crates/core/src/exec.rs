//! Data-parallel driver with a sequential fallback.
//!
//! Work is always split into the same fixed blocks and reduced in block
//! order, so the result of a reduction does not depend on the number of
//! worker threads or on whether rayon is compiled in.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// rayon when the `parallel` feature is enabled, otherwise sequential.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(0), …, f(n-1)` and returns the results in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
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

/// Splits `0..n` into blocks of `block` indices, folds each block
/// sequentially with `fold`, and returns the block accumulators in order.
pub fn fold_blocks<A, I, F>(exec: Execution, n: usize, block: usize, init: I, fold: F) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, usize) + Sync + Send,
{
    let block = block.max(1);
    let blocks = n.div_ceil(block);
    map_indexed(exec, blocks, |b| {
        let mut acc = init();
        for i in b * block..((b + 1) * block).min(n) {
            fold(&mut acc, i);
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let seq = map_indexed(Execution::Sequential, 1000, |i| i * i);
        let par = map_indexed(Execution::Parallel, 1000, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
    }

    #[test]
    fn blocks_cover_range_once() {
        let sums = fold_blocks(Execution::Parallel, 1003, 100, || 0usize, |a, i| *a += i);
        assert_eq!(sums.len(), 11);
        assert_eq!(sums.iter().sum::<usize>(), 1002 * 1003 / 2);
        assert!(fold_blocks(Execution::Sequential, 0, 10, || 0, |_: &mut i32, _| {}).is_empty());
    }
}
