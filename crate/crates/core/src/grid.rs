//! Grid-aligned δ-cells and covering counts.
//!
//! Cells are half-open `[iδ, (i+1)δ)` per axis, anchored at the origin. The
//! count of occupied cells is within a factor `2^dim` of the minimal number of
//! closed δ-cubes covering the set, so both give the same log-log slopes.

use alloc::vec::Vec;
use hashbrown::HashSet;

use crate::error::{Error, Result};
use crate::point::PointSet;

/// Relative tolerance under which a quotient `x/δ` is treated as landing
/// exactly on a cell boundary.
///
/// Scale ladders like `3^-k` and lattice coordinates like `i/(m-1)` are not
/// representable, so points that sit on a boundary in exact arithmetic come
/// out a few ulps to either side of it. Snapping sends them all to the upper
/// cell, which is what floor does in exact arithmetic.
pub const BOUNDARY_SNAP: f64 = 1e-10;

/// `⌊x/δ⌋`, with quotients within [`BOUNDARY_SNAP`] of an integer rounded to it.
#[inline]
pub fn cell_index(x: f64, delta: f64) -> i64 {
    let q = x / delta;
    let r = libm::round(q);
    if libm::fabs(q - r) <= BOUNDARY_SNAP * libm::fmax(1.0, libm::fabs(q)) {
        r as i64
    } else {
        libm::floor(q) as i64
    }
}

pub(crate) fn check_scale(delta: f64, what: &str) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!(
            "{what} must be a positive finite real, got {delta}"
        )))
    }
}

/// Checks a scale ladder: nonempty, positive, strictly decreasing.
pub fn validate_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::domain("scale list is empty"));
    }
    for &s in scales {
        check_scale(s, "scale")?;
    }
    if let Some(w) = scales.windows(2).find(|w| w[1] >= w[0]) {
        return Err(Error::domain(alloc::format!(
            "scales must be strictly decreasing, got {} then {}",
            w[0],
            w[1]
        )));
    }
    Ok(())
}

/// The δ-cell containing a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridIndex {
    pub scale: f64,
    dim: usize,
    cell: [i64; 3],
}

impl GridIndex {
    pub fn of(point: &[f64], scale: f64) -> Self {
        Self {
            scale,
            dim: point.len(),
            cell: cell_key(point, scale),
        }
    }

    pub fn cell(&self) -> &[i64] {
        &self.cell[..self.dim]
    }
}

/// Cell coordinates padded with zeros to three axes.
#[inline]
pub(crate) fn cell_key(point: &[f64], delta: f64) -> [i64; 3] {
    let mut key = [0i64; 3];
    for (k, &x) in key.iter_mut().zip(point) {
        *k = cell_index(x, delta);
    }
    key
}

/// Number of distinct δ-cells occupied by `ps`; zero for the empty set.
pub fn covering_count(ps: &PointSet, delta: f64) -> Result<usize> {
    check_scale(delta, "covering scale")?;
    let cells: HashSet<[i64; 3]> = ps.iter().map(|p| cell_key(p, delta)).collect();
    Ok(cells.len())
}

/// Covering counts over a strictly decreasing list of scales.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoveringProfile {
    entries: Vec<(f64, usize)>,
}

impl CoveringProfile {
    pub fn new(entries: Vec<(f64, usize)>) -> Result<Self> {
        let scales: Vec<f64> = entries.iter().map(|e| e.0).collect();
        validate_scales(&scales)?;
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, usize)] {
        &self.entries
    }

    pub fn scales(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn covering_profile(ps: &PointSet, scales: &[f64]) -> Result<CoveringProfile> {
    validate_scales(scales)?;
    let entries = scales
        .iter()
        .map(|&s| covering_count(ps, s).map(|n| (s, n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoveringProfile { entries })
}

/// `base^-k` for `k` in `from..=to`, decreasing.
pub fn geometric_ladder(base: f64, from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| libm::pow(base, -(k as f64))).collect()
}
