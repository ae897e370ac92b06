//! Rayon-backed executor. Results come back in index order, so reports do
//! not depend on the number of worker threads.

use anyhow::{Context, Result};
use rayon::prelude::*;
use tailsel_core::Executor;

pub const THREADS_ENV: &str = "TAILSEL_THREADS";

pub struct Pool {
    pool: rayon::ThreadPool,
}

impl Pool {
    /// `None` or `Some(0)` uses the hardware thread count.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .context("cannot start the worker pool")?;
        Ok(Pool { pool })
    }

    /// Thread count from the flag, falling back to `TAILSEL_THREADS`.
    pub fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => {
                let n = v.trim().parse().with_context(|| format!("{THREADS_ENV}={v:?} is not a thread count"))?;
                Ok(Some(n))
            }
            _ => Ok(None),
        }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Pool {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
