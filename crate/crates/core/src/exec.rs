//! Execution policy for the embarrassingly parallel sweeps.
//!
//! Every sweep in this crate is written as an ordered map over independent
//! items followed by a sequential reduction, so results are bit-identical
//! whichever policy runs them. With the `parallel` feature disabled,
//! [`Exec::Parallel`] silently runs sequentially.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Whether this policy actually fans out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree_and_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = Exec::Sequential.map(&items, |x| x * x + 1);
        let par = Exec::Parallel.map(&items, |x| x * x + 1);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 101);
        assert_eq!(
            Exec::Sequential.map_range(0..50, |i| i as f64 * 0.5),
            Exec::Parallel.map_range(0..50, |i| i as f64 * 0.5)
        );
    }
}
