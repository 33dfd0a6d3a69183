//! Lower bound for triangle sets of subsets of a line.
//!
//! Fix a split point `x ∈ F`. Every pair `y < x < z` gives the collinear
//! triangle `(x-y, z-x, z-y)`. Distinct δ-cells of gap pairs `(x-y, z-x)`
//! bound `N_δ(Δ(F))` from below up to a factor 2, since the two gaps may
//! swap places in the sorted signature.

use alloc::vec::Vec;
use hashbrown::HashSet;

use crate::error::{Error, Result};
use crate::grid::{cell_index, check_scale};
use crate::point::PointSet;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LineSplit {
    pub split: f64,
    /// Occupied δ-cells of `F ∩ (-∞, x)`.
    pub left_cells: usize,
    /// Occupied δ-cells of `F ∩ (x, ∞)`.
    pub right_cells: usize,
    /// `N_δ(F)`.
    pub covering: usize,
    /// Distinct δ-cells of `(x-y, z-x)` over `y < x < z` in `F`.
    pub pair_cells: usize,
}

/// Chooses the `x ∈ F` maximizing `left_cells · right_cells` (smallest `x` on
/// ties) and counts the gap-pair cells at that split.
pub fn line_split_pairs(ps: &PointSet, delta: f64) -> Result<LineSplit> {
    check_scale(delta, "scale")?;
    if ps.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: ps.dim(),
        });
    }
    if ps.is_empty() {
        return Err(Error::Empty("line split needs at least one point"));
    }
    let mut xs: Vec<f64> = ps.coords().to_vec();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let cells: Vec<i64> = xs.iter().map(|&x| cell_index(x, delta)).collect();
    let n = xs.len();
    // prefix[i] = distinct cells among xs[..i]; suffix[i] = among xs[i..]
    let mut prefix = alloc::vec![0usize; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + usize::from(i == 0 || cells[i] != cells[i - 1]);
    }
    let mut suffix = alloc::vec![0usize; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + usize::from(i + 1 == n || cells[i] != cells[i + 1]);
    }
    let mut best = 0;
    let mut best_score = None;
    for i in 0..n {
        let score = prefix[i] * suffix[i + 1];
        if best_score.is_none_or(|b| score > b) {
            best = i;
            best_score = Some(score);
        }
    }
    let x = xs[best];
    let mut pairs = HashSet::new();
    for &y in &xs[..best] {
        let a = cell_index(x - y, delta);
        for &z in &xs[best + 1..] {
            pairs.insert((a, cell_index(z - x, delta)));
        }
    }
    Ok(LineSplit {
        split: x,
        left_cells: prefix[best],
        right_cells: suffix[best + 1],
        covering: prefix[n],
        pair_cells: pairs.len(),
    })
}
