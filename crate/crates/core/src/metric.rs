//! Hausdorff distance and minisets.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::{dist_sq, PointSet};

fn directed_sq(a: &PointSet, b: &PointSet) -> f64 {
    a.iter()
        .map(|x| {
            b.iter()
                .map(|y| dist_sq(x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// `max(sup_a inf_b |a-b|, sup_b inf_a |a-b|)` for nonempty sets.
pub fn hausdorff_distance(a: &PointSet, b: &PointSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty(
            "Hausdorff distance is undefined on the empty set",
        ));
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(libm::sqrt(directed_sq(a, b).max(directed_sq(b, a))))
}

/// `(c·ps + t) ∩ [0,1]^dim`, closed cube, with `c ≥ 1`.
pub fn miniset(ps: &PointSet, c: f64, t: &[f64]) -> Result<PointSet> {
    if !(c >= 1.0 && c.is_finite()) {
        return Err(Error::domain(alloc::format!(
            "miniset scale must be a finite real >= 1, got {c}"
        )));
    }
    if t.len() != ps.dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.dim(),
            found: t.len(),
        });
    }
    let mut coords = Vec::new();
    for p in ps.iter() {
        let start = coords.len();
        coords.extend(p.iter().zip(t).map(|(x, ti)| c * x + ti));
        if !coords[start..].iter().all(|v| (0.0..=1.0).contains(v)) {
            coords.truncate(start);
        }
    }
    let out = PointSet::from_flat(ps.dim(), coords)?;
    Ok(match ps.label() {
        Some(l) => out.with_label(l),
        None => out,
    })
}
