//! Popular-cell decomposition of `C₁ × C₂ × C₃`.
//!
//! Each `Cᵢ` is a chessboard net of `fᵢ` at scale `δ = 1/K`: one
//! representative point (the first in input order) per cell of the best
//! residue class. Triples are binned by the δ-cell of
//! `(|c₁-c₂|, |c₂-c₃|, |c₃-c₁|)`; `S(K)` is the heaviest bin and `S(K, c₁)`
//! its slice at fixed `c₁`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use hashbrown::HashMap;

use super::chessboard::{chessboard_extract, CellCollection};
use super::pigeonhole::dyadic_pigeonhole;
use crate::config::Guard;
use crate::error::{Error, Result};
use crate::grid::{cell_index, check_scale};
use crate::point::{dist, PointSet};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionReport {
    pub delta: f64,
    /// `#C₁, #C₂, #C₃`.
    pub net_sizes: [usize; 3],
    /// Occupied δ-cells of the ordered distance triples.
    pub occupied: usize,
    /// The popular cell `K`.
    pub cell: [i64; 3],
    pub s_k: u64,
    /// Dyadic class index of the pigeonhole over `#S(K, c₁)`.
    pub k: u32,
    /// Number of `c₁` in the chosen class.
    pub n1: usize,
    /// `2^{k-1}`, the lower end of the chosen class.
    pub n2: u64,
    /// The `c₁` of the chosen class.
    pub witnesses: Vec<Vec<f64>>,
    /// `#S(K) · occupied ≥ #C₁ #C₂ #C₃`.
    pub popular_bound: bool,
    /// `N₁ N₂ ≥ #S(K) / (2 log₂ #S(K))`, vacuous for `#S(K) < 2`.
    pub dyadic_bound: bool,
}

fn chessboard_net(ps: &PointSet, k: u32) -> Result<PointSet> {
    let cc = CellCollection::from_points(ps, k)?;
    let keep = chessboard_extract(&cc);
    let delta = 1.0 / k as f64;
    let mut chosen: BTreeMap<[u32; 3], usize> = BTreeMap::new();
    for (i, p) in ps.iter().enumerate() {
        let mut c = [0u32; 3];
        for (o, &x) in c.iter_mut().zip(p) {
            *o = (cell_index(x, delta).max(0) as u32).min(k - 1);
        }
        if keep.cells().binary_search(&c).is_ok() {
            chosen.entry(c).or_insert(i);
        }
    }
    let mut idx: Vec<usize> = chosen.into_values().collect();
    idx.sort_unstable();
    Ok(ps.select(&idx))
}

pub fn decomposition_diagnostic(
    f1: &PointSet,
    f2: &PointSet,
    f3: &PointSet,
    delta: f64,
    guard: &Guard,
) -> Result<DecompositionReport> {
    check_scale(delta, "scale")?;
    let kf = 1.0 / delta;
    let k = libm::round(kf);
    if libm::fabs(kf - k) > 1e-9 * k || k < 1.0 || k > u32::MAX as f64 {
        return Err(Error::domain(alloc::format!(
            "δ = {delta} is not 1/K for an integer K"
        )));
    }
    let k = k as u32;
    for f in [f1, f2, f3] {
        if f.is_empty() {
            return Err(Error::Empty("decomposition needs three nonempty sets"));
        }
    }
    let nets = [
        chessboard_net(f1, k)?,
        chessboard_net(f2, k)?,
        chessboard_net(f3, k)?,
    ];
    let [c1, c2, c3] = &nets;
    let total = c1.len() as u128 * c2.len() as u128 * c3.len() as u128;
    guard.check_work("triple count", total)?;

    let bin = |a: &[f64], b: &[f64], c: &[f64]| {
        [
            cell_index(dist(a, b), delta),
            cell_index(dist(b, c), delta),
            cell_index(dist(c, a), delta),
        ]
    };
    let mut hist: HashMap<[i64; 3], u64> = HashMap::new();
    for a in c1.iter() {
        for b in c2.iter() {
            for c in c3.iter() {
                *hist.entry(bin(a, b, c)).or_default() += 1;
            }
        }
    }
    let (cell, s_k) = hist
        .iter()
        .map(|(c, n)| (*c, *n))
        .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
        .expect("nets of nonempty sets are nonempty");

    let mut slices = Vec::new();
    let mut owners = Vec::new();
    for (i, a) in c1.iter().enumerate() {
        let mut n = 0u64;
        for b in c2.iter() {
            for c in c3.iter() {
                n += u64::from(bin(a, b, c) == cell);
            }
        }
        if n > 0 {
            slices.push(n);
            owners.push(i);
        }
    }
    let ph = dyadic_pigeonhole(&slices)?;
    let n1 = ph.members.len();
    let n2 = ph.class_floor();
    let m = s_k as f64;
    let dyadic_bound = s_k < 2 || (n1 as f64) * (n2 as f64) >= m / (2.0 * libm::log2(m));
    Ok(DecompositionReport {
        delta,
        net_sizes: [c1.len(), c2.len(), c3.len()],
        occupied: hist.len(),
        cell,
        s_k,
        k: ph.k,
        n1,
        n2,
        witnesses: ph
            .members
            .iter()
            .map(|&j| c1.point(owners[j]).to_vec())
            .collect(),
        popular_bound: s_k as u128 * hist.len() as u128 >= total,
        dyadic_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_random;
    use alloc::vec;

    #[test]
    fn three_singletons() {
        let a = PointSet::from_flat(2, vec![0.1, 0.1]).unwrap();
        let b = PointSet::from_flat(2, vec![0.5, 0.2]).unwrap();
        let c = PointSet::from_flat(2, vec![0.3, 0.9]).unwrap();
        let r = decomposition_diagnostic(&a, &b, &c, 1.0 / 64.0, &Guard::default()).unwrap();
        assert_eq!((r.s_k, r.n1, r.n2, r.occupied), (1, 1, 1, 1));
        assert!(r.popular_bound && r.dyadic_bound);
        assert_eq!(r.witnesses, vec![vec![0.1, 0.1]]);
    }

    #[test]
    fn rejects_non_reciprocal_scales() {
        let a = PointSet::from_flat(2, vec![0.1, 0.1]).unwrap();
        assert!(decomposition_diagnostic(&a, &a, &a, 0.3, &Guard::default()).is_err());
        let e = PointSet::new(2).unwrap();
        assert!(decomposition_diagnostic(&a, &e, &a, 0.5, &Guard::default()).is_err());
    }

    // Separated nets at δ = 1/1000 keep cells 100 apart, so the clouds are
    // spread over the unit square.
    fn translated_copies() -> [PointSet; 3] {
        let base = gen_random(8, 2, 5).unwrap().map_points(|p, o| {
            o[0] = 0.3 * p[0];
            o[1] = 0.3 * p[1];
        });
        [0.0, 0.35, 0.7].map(|t| base.translated(&[t, 0.6 - t / 2.0]).unwrap())
    }

    #[test]
    fn popular_cell_matches_exhaustive_histogram() {
        let f = translated_copies();
        let delta = 1.0 / 1000.0;
        let r = decomposition_diagnostic(&f[0], &f[1], &f[2], delta, &Guard::default()).unwrap();
        let nets: Vec<PointSet> = f.iter().map(|s| chessboard_net(s, 1000).unwrap()).collect();
        let mut hist: BTreeMap<[i64; 3], u64> = BTreeMap::new();
        for a in nets[0].iter() {
            for b in nets[1].iter() {
                for c in nets[2].iter() {
                    let key = [
                        libm::floor(dist(a, b) / delta) as i64,
                        libm::floor(dist(b, c) / delta) as i64,
                        libm::floor(dist(c, a) / delta) as i64,
                    ];
                    *hist.entry(key).or_default() += 1;
                }
            }
        }
        let best = hist.values().copied().max().unwrap();
        assert_eq!(r.s_k, best);
        assert_eq!(r.occupied, hist.len());
        assert!(r.popular_bound && r.dyadic_bound);
    }

    #[test]
    fn grid_corners() {
        let g = crate::generators::gen_grid(3, 2).unwrap();
        let r = decomposition_diagnostic(&g, &g, &g, 1.0 / 200.0, &Guard::default()).unwrap();
        assert_eq!(r.net_sizes, [4, 4, 4]);
        assert!(r.popular_bound && r.dyadic_bound);
    }

    #[test]
    fn bounds_hold_on_random_runs() {
        for seed in 0..30 {
            let f: Vec<PointSet> = (0..3)
                .map(|s| gen_random(40, 2, seed * 3 + s).unwrap())
                .collect();
            for k in [150, 400, 1000] {
                let r = decomposition_diagnostic(
                    &f[0],
                    &f[1],
                    &f[2],
                    1.0 / k as f64,
                    &Guard::default(),
                )
                .unwrap();
                assert!(r.popular_bound && r.dyadic_bound, "seed {seed} K {k}");
            }
        }
    }
}
