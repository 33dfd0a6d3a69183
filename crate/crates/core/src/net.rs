//! Greedy separated nets.

use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::error::Result;
use crate::grid::check_scale;
use crate::point::{dist_sq, PointSet};

/// Plain floor cells of side `s`; any two points within distance `< s` lie in
/// neighbouring cells.
fn raw_cell(p: &[f64], s: f64) -> [i64; 3] {
    let mut key = [0i64; 3];
    for (k, &x) in key.iter_mut().zip(p) {
        *k = libm::floor(x / s) as i64;
    }
    key
}

pub(crate) fn for_each_neighbour_cell(dim: usize, cell: [i64; 3], mut f: impl FnMut([i64; 3])) {
    let span = |axis: usize| if axis < dim { -1..=1 } else { 0..=0 };
    for dx in span(0) {
        for dy in span(1) {
            for dz in span(2) {
                f([cell[0] + dx, cell[1] + dy, cell[2] + dz]);
            }
        }
    }
}

/// Greedy `s`-separated subset of `ps`, scanning in input order.
///
/// A point is kept when every previously kept point is at distance `≥ s`.
/// The result is maximal: each input point lies within distance `< s` of a
/// kept point (or is one).
pub fn separated_net(ps: &PointSet, s: f64) -> Result<PointSet> {
    check_scale(s, "separation")?;
    let s_sq = s * s;
    let dim = ps.dim();
    let mut buckets: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut kept = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        let cell = raw_cell(p, s);
        let mut clear = true;
        for_each_neighbour_cell(dim, cell, |c| {
            if clear {
                if let Some(b) = buckets.get(&c) {
                    clear = b.iter().all(|&j| dist_sq(ps.point(j), p) >= s_sq);
                }
            }
        });
        if clear {
            buckets.entry(cell).or_default().push(i);
            kept.push(i);
        }
    }
    Ok(ps.select(&kept))
}
