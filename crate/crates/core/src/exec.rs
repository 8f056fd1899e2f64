//! Execution strategy for the data-parallel inner loops (type-class
//! enumeration, Monte Carlo trials, sequence enumeration).
//!
//! With the `parallel` feature (on by default) work items are farmed out to
//! the rayon pool. Without it, [`Execution::Parallel`] quietly runs the
//! sequential path. Either way results come back in index order, so every
//! reduction downstream is performed in the same order and reports are
//! bit-identical between the two strategies.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How independent work items are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Evaluates `f(0..len)` and returns the results in index order.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }

    /// Fallible variant of [`Execution::map_indexed`]. The first error in
    /// index order is returned.
    pub fn try_map_indexed<T, E, F>(self, len: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map_indexed(len, f).into_iter().collect()
    }
}

/// Stable 64-bit FNV-1a hash of a task label.
pub fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Random stream for work item `index` of the task `label` under `seed`.
///
/// Each (seed, label) pair picks a ChaCha key and the index selects one of
/// its 2^64 independent streams.
pub fn task_rng(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ label_hash(label));
    rng.set_stream(index);
    rng
}
