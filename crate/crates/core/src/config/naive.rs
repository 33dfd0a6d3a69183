//! Reference enumerations: list every k-subset, then sort and deduplicate.
//!
//! These are quadratic in memory and exist to cross-check the streaming
//! paths and to serve as the baseline in benchmarks.

use alloc::vec::Vec;

use super::{for_each_subset_from, pair_count, pair_layout};
use crate::cells::MAX_ARITY;
use crate::grid::cell_index;
use crate::point::{dist_sq, PointSet};

/// Sorted, deduplicated cell vectors of `Δ_k(F)` at scale `quant > 0`.
pub fn quantized_cells(ps: &PointSet, k: usize, quant: f64) -> Vec<[u32; MAX_ARITY]> {
    let n = ps.len();
    let layout = pair_layout(k);
    let mut all = Vec::new();
    for i in 0..n {
        for_each_subset_from(i, n, k, |sub| {
            let mut sig = [0u32; MAX_ARITY];
            for (o, &(a, b)) in sig.iter_mut().zip(layout) {
                let sq = dist_sq(ps.point(sub[a]), ps.point(sub[b]));
                if sq == 0.0 {
                    return;
                }
                *o = cell_index(libm::sqrt(sq), quant) as u32;
            }
            sig[..layout.len()].sort_unstable();
            all.push(sig);
        });
    }
    all.sort_unstable();
    all.dedup();
    all
}

/// Sorted, deduplicated squared-distance signatures of `Δ_k(F)`.
pub fn exact_squared(ps: &PointSet, k: usize) -> Vec<Vec<f64>> {
    let n = ps.len();
    let m = pair_count(k);
    let mut all: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for_each_subset_from(i, n, k, |sub| {
            let mut sig = Vec::with_capacity(m);
            for &(a, b) in pair_layout(k) {
                sig.push(dist_sq(ps.point(sub[a]), ps.point(sub[b])));
            }
            if sig.contains(&0.0) {
                return;
            }
            sig.sort_by(f64::total_cmp);
            all.push(sig);
        });
    }
    all.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    all.dedup();
    all
}

/// Number of distinct ordered triples `(|x-y|², |z-y|², |x-z|²)` over ordered
/// triples of distinct points, by direct enumeration of all `n³` triples.
pub fn ordered_triangle_count(ps: &PointSet) -> usize {
    let n = ps.len();
    let mut all = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let r1 = dist_sq(ps.point(x), ps.point(y));
                let r2 = dist_sq(ps.point(z), ps.point(y));
                let r3 = dist_sq(ps.point(x), ps.point(z));
                if r1 > 0.0 && r2 > 0.0 && r3 > 0.0 {
                    all.push([r1.to_bits(), r2.to_bits(), r3.to_bits()]);
                }
            }
        }
    }
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Number of distinct `δ`-cells hit by `Δ(F)`, the baseline for covering profiles.
pub fn delta_count(ps: &PointSet, delta: f64) -> usize {
    quantized_cells(ps, 3, delta).len()
}
