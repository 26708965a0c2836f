//! Execution strategy for the data-parallel kernels.
//!
//! With the `parallel` feature the kernels run on the rayon pool that is
//! current at the call site (the global pool unless the caller installed
//! another one). Without it everything runs on the calling thread. Results
//! never depend on the choice: every reduction uses a fixed tree.

/// How a kernel distributes its work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Exec::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Evaluates `f` at `0..len` and returns the results in index order.
    pub fn map_collect<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
        }
    }

    /// Runs two closures, possibly concurrently.
    pub fn join<A, B, RA, RB>(self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        match self {
            Exec::Sequential => (a(), b()),
            #[cfg(feature = "parallel")]
            Exec::Parallel => rayon::join(a, b),
        }
    }

    /// Number of worker threads this strategy will use.
    pub fn threads(self) -> usize {
        match self {
            Exec::Sequential => 1,
            #[cfg(feature = "parallel")]
            Exec::Parallel => rayon::current_num_threads(),
        }
    }
}
