//! Batch driver: configuration, the verification suite, computed tables and
//! their serialisation.

pub mod compute;
pub mod config;
pub mod error;
pub mod report;
pub mod suite;

use config::RunConfig;
use error::{CliError, CliResult};
use report::Report;

/// Thread count from `BEREZIN_THREADS`, if set.
pub fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var("BEREZIN_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| {
                CliError::Config(format!("BEREZIN_THREADS = {s:?} is not a positive integer"))
            }),
        Err(_) => Ok(None),
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// `verify` on a given thread count.
pub fn cmd_verify(config: &RunConfig, threads: Option<usize>) -> CliResult<Report> {
    with_threads(threads, || suite::verify(config))?
}
