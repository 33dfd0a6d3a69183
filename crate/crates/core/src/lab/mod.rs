//! Finite, executable versions of the counting lemmas: chessboard nets, the
//! dyadic pigeonhole, incidence counting between circle families, bilinear
//! separation and the popular-cell decomposition.

mod bilinear;
mod chessboard;
mod decomposition;
mod incidence;
mod pigeonhole;

pub use bilinear::{bilinear_naive, bilinear_separation, BilinearReport};
pub use chessboard::{
    best_residue, chessboard_extract, min_index_separation, CellCollection, CHESSBOARD_MODULUS,
};
pub use decomposition::{decomposition_diagnostic, DecompositionReport};
pub use incidence::{
    annulus_constant, check_incidence_hypotheses, gen_incidence, incidence_count,
    incidence_count_naive, separated_points_bound, Hypothesis, HypothesisReport, IncidenceCount,
    IncidenceInstance, IncidenceParams, SeparatedBound, Violation,
};
pub use pigeonhole::{dyadic_pigeonhole, Pigeonhole};
