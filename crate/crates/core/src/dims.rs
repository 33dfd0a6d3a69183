//! Dimension estimates from covering profiles: box dimension, a localized
//! Assouad exponent and the Riesz energy diagnostic.

use core::cmp::Ordering;

use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::grid::{cell_key, validate_scales, CoveringProfile};
use crate::net::{for_each_neighbour_cell, separated_net};
use crate::par::{fold_range, map_range};
use crate::point::{dist_sq, PointSet};

/// Least-squares fit of `ln N_δ` against `-ln δ`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DimensionEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// `1 - SS_res/SS_tot`, or 1 when all counts are equal.
    pub r_squared: f64,
    /// `(δ_max, δ_min)`.
    pub scale_range: (f64, f64),
    pub n_scales: usize,
    /// Slopes between consecutive scales, coarse to fine.
    pub per_step_slopes: Vec<f64>,
}

/// OLS slope of `ln count` against `-ln scale` for positive real counts.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<DimensionEstimate> {
    if points.len() < 2 {
        return Err(Error::domain("a log-log fit needs at least two scales"));
    }
    let scales: Vec<f64> = points.iter().map(|p| p.0).collect();
    validate_scales(&scales)?;
    if let Some(p) = points.iter().find(|p| !(p.1 > 0.0 && p.1.is_finite())) {
        return Err(Error::domain(alloc::format!(
            "count {} at scale {} has no logarithm",
            p.1,
            p.0
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| -libm::log(p.0)).collect();
    let ys: Vec<f64> = points.iter().map(|p| libm::log(p.1)).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let e = y - (intercept + slope * x);
                e * e
            })
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    let per_step_slopes = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
        .collect();
    Ok(DimensionEstimate {
        slope,
        intercept,
        r_squared,
        scale_range: (scales[0], scales[scales.len() - 1]),
        n_scales: points.len(),
        per_step_slopes,
    })
}

/// Box-dimension estimate of a covering profile; zero counts are an error.
pub fn box_dimension(profile: &CoveringProfile) -> Result<DimensionEstimate> {
    let pts: Vec<(f64, f64)> = profile
        .entries()
        .iter()
        .map(|&(s, n)| (s, n as f64))
        .collect();
    fit_loglog(&pts)
}

/// Largest localized exponent `ln N_r(B(x,R)∩F) / ln(R/r)` found.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssouadProbe {
    pub best_exponent: f64,
    pub center: Vec<f64>,
    pub big_r: f64,
    pub small_r: f64,
    /// `N_r(B(x,R) ∩ F)` at the witness.
    pub count: usize,
    pub ratio_floor: f64,
    /// Number of centres examined.
    pub centers: usize,
}

/// Largest point count for which every point is used as a centre; bigger
/// sets are thinned to a net at the finest scale.
pub const ASSOUAD_FULL_CENTERS: usize = 10_000;

#[derive(Clone)]
struct Candidate {
    exponent: f64,
    center: usize,
    big: usize,
    small: usize,
    count: usize,
}

/// Witness order: larger exponent, then lexicographically smaller centre,
/// then smaller `R`, then smaller `r`.
fn better(a: &Candidate, b: &Candidate, centers: &PointSet, scales: &[f64]) -> bool {
    match a.exponent.total_cmp(&b.exponent) {
        Ordering::Greater => return true,
        Ordering::Less => return false,
        Ordering::Equal => {}
    }
    let ca = centers.point(a.center);
    let cb = centers.point(b.center);
    let by_center = ca
        .iter()
        .zip(cb)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal);
    by_center
        .then(scales[a.big].total_cmp(&scales[b.big]))
        .then(scales[a.small].total_cmp(&scales[b.small]))
        .then(a.center.cmp(&b.center))
        == Ordering::Less
}

/// Sup of `ln N_r(B(x,R)∩F)/ln(R/r)` over centres `x`, scale pairs `R > r`
/// from `scales` with `R/r ≥ ratio_floor`. Balls are closed.
pub fn assouad_probe(ps: &PointSet, scales: &[f64], ratio_floor: f64) -> Result<AssouadProbe> {
    validate_scales(scales)?;
    if !(ratio_floor > 1.0 && ratio_floor.is_finite()) {
        return Err(Error::domain(alloc::format!(
            "ratio floor must be a finite real > 1, got {ratio_floor}"
        )));
    }
    if ps.is_empty() {
        return Err(Error::Empty("Assouad probe needs at least one point"));
    }
    let pairs: Vec<(usize, usize)> = (0..scales.len())
        .flat_map(|b| (b + 1..scales.len()).map(move |s| (b, s)))
        .filter(|&(b, s)| scales[b] / scales[s] >= ratio_floor)
        .collect();
    if pairs.is_empty() {
        return Err(Error::domain(alloc::format!(
            "no scale pair reaches the ratio floor {ratio_floor}"
        )));
    }
    let centers = if ps.len() > ASSOUAD_FULL_CENTERS {
        separated_net(ps, scales[scales.len() - 1])?
    } else {
        ps.clone()
    };
    let bigs: Vec<usize> = {
        let mut b: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        b.dedup();
        b
    };
    let buckets: Vec<HashMap<[i64; 3], Vec<usize>>> = bigs
        .iter()
        .map(|&b| {
            let mut m: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
            for (i, p) in ps.iter().enumerate() {
                m.entry(raw_cell(p, scales[b])).or_default().push(i);
            }
            m
        })
        .collect();
    let dim = ps.dim();
    let best = fold_range(
        centers.len(),
        || None::<Candidate>,
        |mut best, c| {
            let x = centers.point(c);
            let mut ball = Vec::new();
            for (bi, &b) in bigs.iter().enumerate() {
                let big = scales[b];
                ball.clear();
                for_each_neighbour_cell(dim, raw_cell(x, big), |cell| {
                    if let Some(v) = buckets[bi].get(&cell) {
                        ball.extend(
                            v.iter()
                                .copied()
                                .filter(|&i| dist_sq(ps.point(i), x) <= big * big),
                        );
                    }
                });
                for &(_, s) in pairs.iter().filter(|p| p.0 == b) {
                    let small = scales[s];
                    let cells: HashSet<[i64; 3]> =
                        ball.iter().map(|&i| cell_key(ps.point(i), small)).collect();
                    let count = cells.len();
                    let cand = Candidate {
                        exponent: libm::log(count as f64) / libm::log(big / small),
                        center: c,
                        big: b,
                        small: s,
                        count,
                    };
                    if best
                        .as_ref()
                        .is_none_or(|cur| better(&cand, cur, &centers, scales))
                    {
                        best = Some(cand);
                    }
                }
            }
            best
        },
        |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(if better(&b, &a, &centers, scales) {
                b
            } else {
                a
            }),
            (a, None) => a,
            (None, b) => b,
        },
    );
    let best = best.expect("at least one centre and one admissible pair");
    Ok(AssouadProbe {
        best_exponent: best.exponent,
        center: centers.point(best.center).to_vec(),
        big_r: scales[best.big],
        small_r: scales[best.small],
        count: best.count,
        ratio_floor,
        centers: centers.len(),
    })
}

fn raw_cell(p: &[f64], s: f64) -> [i64; 3] {
    let mut key = [0i64; 3];
    for (k, &x) in key.iter_mut().zip(p) {
        *k = libm::floor(x / s) as i64;
    }
    key
}

/// Value of a discrete Riesz energy.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Energy {
    Finite(f64),
    /// Two coincident points both carry positive mass.
    Infinite,
}

impl Energy {
    pub fn value(&self) -> f64 {
        match self {
            Energy::Finite(v) => *v,
            Energy::Infinite => f64::INFINITY,
        }
    }
}

/// `Σ_{i≠j} μ_i μ_j |x_i - x_j|^{-t}` for a probability vector `μ`.
pub fn energy_integral(ps: &PointSet, weights: &[f64], t: f64) -> Result<Energy> {
    if weights.len() != ps.len() {
        return Err(Error::DimensionMismatch {
            expected: ps.len(),
            found: weights.len(),
        });
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(alloc::format!(
            "energy exponent must be > 0, got {t}"
        )));
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::domain("weights must be nonnegative and finite"));
    }
    let total: f64 = weights.iter().sum();
    if libm::fabs(total - 1.0) > 1e-12 {
        return Err(Error::domain(alloc::format!(
            "weights sum to {total}, not 1"
        )));
    }
    let n = ps.len();
    let half_t = -0.5 * t;
    // rows in parallel, summed in index order so the result is schedule-free
    let rows = map_range(n, |i| {
        let wi = weights[i];
        if wi == 0.0 {
            return Some(0.0);
        }
        let mut row = 0.0;
        for (j, &wj) in weights.iter().enumerate().skip(i + 1) {
            if wj == 0.0 {
                continue;
            }
            let sq = dist_sq(ps.point(i), ps.point(j));
            if sq == 0.0 {
                return None;
            }
            row += wj * libm::pow(sq, half_t);
        }
        Some(wi * row)
    });
    let sum = rows.into_iter().sum::<Option<f64>>();
    Ok(match sum {
        Some(s) => Energy::Finite(2.0 * s),
        None => Energy::Infinite,
    })
}

/// Outcome of checking `s_Δ ≥ factor·s_F + offset` within `tol`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InequalityReport {
    pub set: DimensionEstimate,
    pub delta: DimensionEstimate,
    pub factor: f64,
    pub offset: f64,
    pub tol: f64,
    /// `s_Δ - factor·s_F - offset`.
    pub margin: f64,
    pub pass: bool,
}

pub fn verify_inequality(
    profile_f: &CoveringProfile,
    profile_delta: &CoveringProfile,
    factor: f64,
    offset: f64,
    tol: f64,
) -> Result<InequalityReport> {
    let set = box_dimension(profile_f)?;
    let delta = box_dimension(profile_delta)?;
    let margin = delta.slope - factor * set.slope - offset;
    Ok(InequalityReport {
        pass: margin >= -tol,
        set,
        delta,
        factor,
        offset,
        tol,
        margin,
    })
}
