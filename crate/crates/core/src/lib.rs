//! Configuration sets of finite point sets and the covering-number machinery
//! around them.
//!
//! The crate builds distance sets, triangle sets and simplex sets of finite
//! subsets of ℝ¹, ℝ² and ℝ³, counts grid coverings of both the points and
//! the configuration sets, and turns covering profiles into dimension
//! estimates. The `lab` module carries executable versions of the counting
//! lemmas (chessboard extraction, dyadic pigeonhole, circle incidences,
//! bilinear separation and the popular-cell decomposition).
//!
//! The crate is `no_std` (with `alloc`). The `std` feature only switches the
//! error type to `std::error::Error`; `parallel` adds rayon-backed loops whose
//! results are identical to the sequential ones.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod par;

pub mod cells;
pub mod config;
pub mod dims;
pub mod generators;
pub mod grid;
pub mod lab;
pub mod metric;
pub mod net;
pub mod point;
pub mod rng;

pub use cells::{CellSet, KeyShape};
pub use config::{
    delta_covering_profile, distance_set, pinned_distance_set, simplex_set, triangle_set, Guard,
    Signature, SignatureSet,
};
pub use dims::{
    assouad_probe, box_dimension, energy_integral, verify_inequality, AssouadProbe,
    DimensionEstimate, Energy, InequalityReport,
};
pub use error::{Error, Result};
pub use generators::{gen_circle, gen_grid, gen_ifs, gen_random, IfsSpec, SimilarityMap};
pub use grid::{covering_count, covering_profile, CoveringProfile, GridIndex};
pub use metric::{hausdorff_distance, miniset};
pub use net::separated_net;
pub use point::PointSet;
