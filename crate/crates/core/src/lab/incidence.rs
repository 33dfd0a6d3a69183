//! Incidence counting between two concentric circle families.
//!
//! An instance has a `100δ`-separated set of centres `C` and, around each
//! centre `c`, point sets `C₁(c)` on the circle of radius `r₁` and `C₂(c)`
//! on the circle of radius `r₂`. The incidence set is
//!
//! ```text
//! I = {(Q₁, Q₂, c) ∈ F × F × C : Q₁ ⊂ T_{r₁}(c), Q₂ ⊂ T_{r₂}(c), |Q₁ - Q₂| ∈ (r₂-r₁+γ, r₂+r₁-γ)}
//! ```
//!
//! where `F` is the set of δ-cells meeting `∪_c C₁(c) ∪ C₂(c)`, a cell is
//! represented by its centre, and `Q ⊂ T_r(c)` means `||Q - c| - r| ≤ 1.5δ`
//! (the annulus of width 3δ).

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::config::Guard;
use crate::error::{Error, Result};
use crate::generators::circle_points;
use crate::grid::cell_key;
use crate::net::separated_net;
use crate::par::fold_range;
use crate::point::{dist, dist_sq, PointSet};
use crate::rng::Prng;

/// Phase redraws per centre before generation gives up.
const MAX_ATTEMPTS: usize = 64;

/// Parameters of a generated instance.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IncidenceParams {
    pub r1: f64,
    pub r2: f64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IncidenceInstance {
    pub r1: f64,
    pub r2: f64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub centers: PointSet,
    /// `(C₁(c), C₂(c))` for each centre, in centre order.
    pub circles: Vec<(PointSet, PointSet)>,
}

impl IncidenceInstance {
    /// All circle points, centre by centre, `C₁` before `C₂`.
    pub fn circle_union(&self) -> PointSet {
        let mut coords = Vec::new();
        for (a, b) in &self.circles {
            coords.extend_from_slice(a.coords());
            coords.extend_from_slice(b.coords());
        }
        PointSet::from_flat(2, coords).expect("circle points are planar and finite")
    }

    /// `F`: sorted distinct δ-cells of the circle points.
    pub fn cells(&self) -> Vec<[i64; 2]> {
        let mut cells: Vec<[i64; 2]> = self
            .circle_union()
            .iter()
            .map(|p| {
                let k = cell_key(p, self.delta);
                [k[0], k[1]]
            })
            .collect();
        cells.sort_unstable();
        cells.dedup();
        cells
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Hypothesis {
    /// `0 < 10γ < r₁ + r₂`, `r₁ ≤ r₂`, `δ > 0`, shapes consistent.
    Parameters,
    /// `C` is `100δ`-separated with `round(δ^{-α})` points.
    Centers,
    /// Circle points lie within `δ/10` of their circles, are `100δ`-separated
    /// and number `round(δ^{-β})` per circle.
    CirclePoints,
    /// At least half of `C₁(c) × C₂(c)` has distance in `(r₂-r₁+10γ, r₂+r₁-10γ)`.
    Transversality,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub hypothesis: Hypothesis,
    pub center: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HypothesisReport {
    pub violations: Vec<Violation>,
    /// No centres: everything passes vacuously.
    pub degenerate: bool,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn target_count(delta: f64, exponent: f64) -> usize {
    libm::round(libm::pow(delta, -exponent)) as usize
}

/// First pair closer than `sep`, if any.
fn separation_witness(ps: &PointSet, sep: f64) -> Option<(usize, usize, f64)> {
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            let d = dist(ps.point(i), ps.point(j));
            if d < sep {
                return Some((i, j, d));
            }
        }
    }
    None
}

fn transversal_pairs(c1: &PointSet, c2: &PointSet, lo: f64, hi: f64) -> usize {
    let mut n = 0;
    for x in c1.iter() {
        for y in c2.iter() {
            let d = dist(x, y);
            n += usize::from(d > lo && d < hi);
        }
    }
    n
}

fn parameter_problems(r1: f64, r2: f64, gamma: f64, delta: f64) -> Vec<String> {
    let mut out = Vec::new();
    if !(gamma > 0.0 && 10.0 * gamma < r1 + r2) {
        out.push(alloc::format!(
            "need 0 < 10γ < r1 + r2, got γ = {gamma}, r1 + r2 = {}",
            r1 + r2
        ));
    }
    if !(r1 > 0.0 && r1 <= r2 && r2.is_finite()) {
        out.push(alloc::format!(
            "need 0 < r1 <= r2, got r1 = {r1}, r2 = {r2}"
        ));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        out.push(alloc::format!("need δ > 0, got {delta}"));
    }
    out
}

/// Checks every hypothesis by brute force and lists each violation.
pub fn check_incidence_hypotheses(inst: &IncidenceInstance) -> HypothesisReport {
    let mut v = Vec::new();
    let mut push = |hypothesis, center, detail: String| {
        v.push(Violation {
            hypothesis,
            center,
            detail,
        })
    };
    for p in parameter_problems(inst.r1, inst.r2, inst.gamma, inst.delta) {
        push(Hypothesis::Parameters, None, p);
    }
    if inst.centers.dim() != 2 || inst.circles.len() != inst.centers.len() {
        push(
            Hypothesis::Parameters,
            None,
            alloc::format!(
                "need planar centres with one circle pair each, got dim {} with {} centres and {} pairs",
                inst.centers.dim(),
                inst.centers.len(),
                inst.circles.len()
            ),
        );
        return HypothesisReport {
            violations: v,
            degenerate: inst.centers.is_empty(),
        };
    }
    let degenerate = inst.centers.is_empty();
    let sep = 100.0 * inst.delta;
    if !degenerate {
        if let Some((i, j, d)) = separation_witness(&inst.centers, sep) {
            push(
                Hypothesis::Centers,
                Some(i),
                alloc::format!("centres {i} and {j} are {d} apart, below 100δ = {sep}"),
            );
        }
        let want = target_count(inst.delta, inst.alpha);
        if inst.centers.len() != want {
            push(
                Hypothesis::Centers,
                None,
                alloc::format!("#C = {}, expected round(δ^-α) = {want}", inst.centers.len()),
            );
        }
    }
    let want_p = target_count(inst.delta, inst.beta);
    let tol = inst.delta / 10.0;
    let lo = inst.r2 - inst.r1 + 10.0 * inst.gamma;
    let hi = inst.r2 + inst.r1 - 10.0 * inst.gamma;
    for (ci, (c1, c2)) in inst.circles.iter().enumerate() {
        let c = inst.centers.point(ci);
        for (name, set, r) in [("C1", c1, inst.r1), ("C2", c2, inst.r2)] {
            if set.dim() != 2 {
                push(
                    Hypothesis::CirclePoints,
                    Some(ci),
                    alloc::format!("{name} is not planar"),
                );
                continue;
            }
            if let Some((k, p)) = set
                .iter()
                .enumerate()
                .find(|(_, p)| libm::fabs(dist(p, c) - r) > tol)
            {
                push(
                    Hypothesis::CirclePoints,
                    Some(ci),
                    alloc::format!(
                        "{name} point {k} at {p:?} is {} from the centre, radius {r}",
                        dist(p, c)
                    ),
                );
            }
            if let Some((i, j, d)) = separation_witness(set, sep) {
                push(
                    Hypothesis::CirclePoints,
                    Some(ci),
                    alloc::format!("{name} points {i} and {j} are {d} apart, below 100δ = {sep}"),
                );
            }
            if set.len() != want_p {
                push(
                    Hypothesis::CirclePoints,
                    Some(ci),
                    alloc::format!("#{name} = {}, expected round(δ^-β) = {want_p}", set.len()),
                );
            }
        }
        if c1.dim() == 2 && c2.dim() == 2 {
            let good = transversal_pairs(c1, c2, lo, hi);
            if 2 * good < c1.len() * c2.len() {
                push(
                    Hypothesis::Transversality,
                    Some(ci),
                    alloc::format!(
                        "{good} of {} pairs in the band ({lo}, {hi})",
                        c1.len() * c2.len()
                    ),
                );
            }
        }
    }
    HypothesisReport {
        violations: v,
        degenerate,
    }
}

/// Builds an instance: `round(δ^{-α})` centres on a square grid of spacing
/// `150δ`, and around each centre `round(δ^{-β})` equally spaced points per
/// circle with random phases, redrawn until the transversality hypothesis holds.
pub fn gen_incidence(p: &IncidenceParams) -> Result<IncidenceInstance> {
    if let Some(problem) = parameter_problems(p.r1, p.r2, p.gamma, p.delta)
        .into_iter()
        .next()
    {
        return Err(Error::domain(problem));
    }
    if !(p.alpha >= 0.0 && p.beta >= 0.0) {
        return Err(Error::domain("exponents α and β must be >= 0"));
    }
    let n_c = target_count(p.delta, p.alpha);
    let n_p = target_count(p.delta, p.beta);
    let sep = 100.0 * p.delta;
    if n_p >= 2 && 2.0 * p.r1 * libm::sin(PI / n_p as f64) < sep {
        return Err(Error::Generation(alloc::format!(
            "{n_p} equally spaced points on radius {} are closer than 100δ",
            p.r1
        )));
    }
    let side = (1..).find(|s| s * s >= n_c).unwrap_or(1);
    let spacing = 150.0 * p.delta;
    let mut centers = PointSet::new(2)?;
    for idx in 0..n_c {
        centers.push(&[(idx / side) as f64 * spacing, (idx % side) as f64 * spacing])?;
    }
    let lo = p.r2 - p.r1 + 10.0 * p.gamma;
    let hi = p.r2 + p.r1 - 10.0 * p.gamma;
    let mut rng = Prng::new(p.seed);
    let arc = 2.0 * PI / n_p.max(1) as f64;
    let mut circles = Vec::with_capacity(n_c);
    for ci in 0..n_c {
        let c = centers.point(ci).to_vec();
        let mut found = None;
        for _ in 0..MAX_ATTEMPTS {
            let a = circle_points(&c, p.r1, n_p, rng.uniform(0.0, arc))?;
            let b = circle_points(&c, p.r2, n_p, rng.uniform(0.0, arc))?;
            if 2 * transversal_pairs(&a, &b, lo, hi) >= n_p * n_p {
                found = Some((a, b));
                break;
            }
        }
        circles.push(found.ok_or_else(|| {
            Error::Generation(alloc::format!(
                "centre {ci}: no phase pair met the transversality hypothesis in {MAX_ATTEMPTS} attempts"
            ))
        })?);
    }
    Ok(IncidenceInstance {
        r1: p.r1,
        r2: p.r2,
        gamma: p.gamma,
        delta: p.delta,
        alpha: p.alpha,
        beta: p.beta,
        centers,
        circles,
    })
}

/// Side, in units of δ, of each of the two squares covering
/// `T_{r₁}(x₁) ∩ T_{r₂}(x₂)` when `|x₁ - x₂|` lies in `(r₂-r₁+γ, r₂+r₁-γ)`.
///
/// The circles about `x₁`, `x₂` cross at an angle `φ` with
/// `cos φ = (r₁² + r₂² - d²) / (2 r₁ r₂)`, which is monotone in `d`, so the
/// smallest `sin φ` over the band is attained at one of its ends. Two strips
/// of half-width `h` crossing at angle `φ` meet in a rhombus whose vertices
/// lie within `2h / sin φ` of its centre. With `h = 3δ` this gives squares of
/// side `12δ / sin φ`.
pub fn annulus_constant(r1: f64, r2: f64, gamma: f64) -> Result<f64> {
    let lo = r2 - r1 + gamma;
    let hi = r2 + r1 - gamma;
    if !(lo < hi && lo > 0.0) {
        return Err(Error::domain(alloc::format!(
            "empty distance band ({lo}, {hi})"
        )));
    }
    let sin_at = |d: f64| {
        let c = (r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2);
        libm::sqrt((1.0 - c * c).max(0.0))
    };
    let s = sin_at(lo).min(sin_at(hi));
    if s <= 0.0 {
        return Err(Error::domain("circles are tangent at the band edge"));
    }
    Ok(12.0 / s)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IncidenceCount {
    pub count: u64,
    /// `⌈1000 A² #F²⌉`.
    pub upper: u128,
    /// `⌈½ Σ_c #C₁(c) #C₂(c)⌉`, which is `⌈½ δ^{-α-2β}⌉` at exact cardinalities.
    pub lower: u64,
    pub a_const: f64,
    /// `#F`.
    pub cells: usize,
    pub hypotheses: HypothesisReport,
    /// `lower ≤ count ≤ upper`, asserted only when the hypotheses hold.
    pub bounds_hold: Option<bool>,
}

#[inline]
fn cell_center(q: [i64; 2], delta: f64) -> [f64; 2] {
    [(q[0] as f64 + 0.5) * delta, (q[1] as f64 + 0.5) * delta]
}

#[inline]
fn in_annulus(q: &[f64], c: &[f64], r: f64, delta: f64) -> bool {
    libm::fabs(dist(q, c) - r) <= 1.5 * delta
}

fn finish(inst: &IncidenceInstance, count: u64, cells: usize) -> Result<IncidenceCount> {
    let hypotheses = check_incidence_hypotheses(inst);
    let a = annulus_constant(inst.r1, inst.r2, inst.gamma)?;
    let upper = libm::ceil(1000.0 * a * a * (cells as f64) * (cells as f64)) as u128;
    let pairs: u64 = inst
        .circles
        .iter()
        .map(|(x, y)| (x.len() * y.len()) as u64)
        .sum();
    let lower = pairs.div_ceil(2);
    let bounds_hold = hypotheses
        .holds()
        .then_some(lower <= count && count as u128 <= upper);
    Ok(IncidenceCount {
        count,
        upper,
        lower,
        a_const: a,
        cells,
        hypotheses,
        bounds_hold,
    })
}

fn check_shape(inst: &IncidenceInstance, guard: &Guard) -> Result<Vec<[i64; 2]>> {
    if inst.centers.dim() != 2 || inst.circles.len() != inst.centers.len() {
        return Err(Error::domain(
            "instance needs planar centres with one circle pair each",
        ));
    }
    let cells = inst.cells();
    let f = cells.len() as u128;
    guard.check_work("#F²·#C", f * f * inst.centers.len() as u128)?;
    Ok(cells)
}

/// `#I` with the two annulus filters applied per centre before pairing.
pub fn incidence_count(inst: &IncidenceInstance, guard: &Guard) -> Result<IncidenceCount> {
    let cells = check_shape(inst, guard)?;
    let centres: Vec<[f64; 2]> = cells.iter().map(|&q| cell_center(q, inst.delta)).collect();
    let lo = inst.r2 - inst.r1 + inst.gamma;
    let hi = inst.r2 + inst.r1 - inst.gamma;
    let (lo_sq, hi_sq) = (lo * lo, hi * hi);
    let count = fold_range(
        inst.centers.len(),
        || 0u64,
        |acc, ci| {
            let c = inst.centers.point(ci);
            let a1: Vec<&[f64; 2]> = centres
                .iter()
                .filter(|q| in_annulus(&q[..], c, inst.r1, inst.delta))
                .collect();
            let a2: Vec<&[f64; 2]> = centres
                .iter()
                .filter(|q| in_annulus(&q[..], c, inst.r2, inst.delta))
                .collect();
            let mut n = 0u64;
            for q1 in &a1 {
                for q2 in &a2 {
                    let d = dist_sq(&q1[..], &q2[..]);
                    n += u64::from(d > lo_sq && d < hi_sq);
                }
            }
            acc + n
        },
        |a, b| a + b,
    );
    finish(inst, count, cells.len())
}

/// `#I` by the plain loop over `F × F × C`.
pub fn incidence_count_naive(inst: &IncidenceInstance, guard: &Guard) -> Result<IncidenceCount> {
    let cells = check_shape(inst, guard)?;
    let lo = inst.r2 - inst.r1 + inst.gamma;
    let hi = inst.r2 + inst.r1 - inst.gamma;
    let mut count = 0u64;
    for &q1 in &cells {
        let p1 = cell_center(q1, inst.delta);
        for &q2 in &cells {
            let p2 = cell_center(q2, inst.delta);
            let d = dist_sq(&p1, &p2);
            if !(d > lo * lo && d < hi * hi) {
                continue;
            }
            for c in inst.centers.iter() {
                if in_annulus(&p1, c, inst.r1, inst.delta)
                    && in_annulus(&p2, c, inst.r2, inst.delta)
                {
                    count += 1;
                }
            }
        }
    }
    finish(inst, count, cells.len())
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeparatedBound {
    /// Size of a greedy δ-separated net of all circle points.
    pub net_size: usize,
    /// `δ^{-α/2-β}`.
    pub bound: f64,
    pub ratio: f64,
}

pub fn separated_points_bound(inst: &IncidenceInstance) -> Result<SeparatedBound> {
    let net_size = separated_net(&inst.circle_union(), inst.delta)?.len();
    let bound = libm::pow(inst.delta, -0.5 * inst.alpha - inst.beta);
    Ok(SeparatedBound {
        net_size,
        bound,
        ratio: net_size as f64 / bound,
    })
}

#[cfg(test)]
mod tests;
