//! Naive vs hashed triangle deduplication timings.

use std::time::Instant;

use serde::Serialize;
use trilab_core::config::{naive, triangle_set, Guard};
use trilab_core::generators::{gen_circle, gen_random};
use trilab_core::point::PointSet;

use crate::error::{Error, Result};
use crate::set_digest;

/// Largest input for which the naive path runs.
pub const NAIVE_MAX: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BenchKind {
    /// `n` uniform points in the unit square.
    Random,
    /// `n` equally spaced points on the unit circle.
    Circle,
}

impl BenchKind {
    pub fn points(self, n: usize, seed: u64) -> Result<PointSet> {
        Ok(match self {
            BenchKind::Random => gen_random(n, 2, seed)?,
            BenchKind::Circle if n == 0 => PointSet::new(2)?,
            BenchKind::Circle => gen_circle(&[0.0, 0.0], 1.0, n)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathTiming {
    pub seconds: f64,
    pub signatures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub kind: BenchKind,
    pub n: usize,
    pub quant: f64,
    pub seed: u64,
    pub threads: usize,
    pub hashed: PathTiming,
    pub naive: Option<PathTiming>,
    /// Hex digest of the hashed signature set.
    pub digest: String,
}

pub fn bench(
    kind: BenchKind,
    n: usize,
    quant: f64,
    seed: u64,
    guard: &Guard,
) -> Result<BenchReport> {
    if !(quant > 0.0 && quant.is_finite()) {
        return Err(Error::invalid(
            "quant",
            format!("must be positive, got {quant}"),
        ));
    }
    let ps = kind.points(n, seed)?;
    let t0 = Instant::now();
    let set = triangle_set(&ps, quant, guard)?;
    let hashed = PathTiming {
        seconds: t0.elapsed().as_secs_f64(),
        signatures: set.len(),
    };
    let naive = if n <= NAIVE_MAX {
        let t0 = Instant::now();
        let cells = naive::quantized_cells(&ps, 3, quant);
        let seconds = t0.elapsed().as_secs_f64();
        if set.sorted_cells().as_deref() != Some(&cells[..]) {
            return Err(Error::Mismatch(format!(
                "hashed and naive paths disagree ({} vs {} signatures)",
                set.len(),
                cells.len()
            )));
        }
        Some(PathTiming {
            seconds,
            signatures: cells.len(),
        })
    } else {
        None
    };
    Ok(BenchReport {
        kind,
        n,
        quant,
        seed,
        threads: rayon::current_num_threads(),
        hashed,
        naive,
        digest: set_digest(&set),
    })
}
