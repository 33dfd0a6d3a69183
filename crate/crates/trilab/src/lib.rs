//! File formats, experiment runner and benchmarks on top of `trilab-core`.

pub mod bench;
pub mod error;
pub mod experiment;
pub mod formats;
pub mod incidence_file;
pub mod scales;
pub mod sections;

use std::hash::Hasher;

pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentSpec, Report, RunOptions};

use trilab_core::config::SignatureSet;

/// 16-hex-digit digest of a signature set's sorted contents.
///
/// Uses `DefaultHasher::new()`, which is fixed-keyed: stable across runs and
/// thread counts of one build, not guaranteed across Rust releases.
pub fn set_digest(set: &SignatureSet) -> String {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    set.digest(&mut h);
    format!("{:016x}", h.finish())
}

/// Runs `f` inside a dedicated rayon pool of `threads` workers (0 = one per CPU).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid("thread count", e.to_string()))?;
    Ok(pool.install(f))
}
