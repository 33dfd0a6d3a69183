//! Deterministic point-set constructions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::point::PointSet;
use crate::rng::Prng;

/// Largest point count `gen_ifs` will produce.
pub const MAX_IFS_POINTS: usize = 1 << 24;

/// `x ↦ ratio·x + translation`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimilarityMap {
    pub ratio: f64,
    pub translation: Vec<f64>,
}

/// A rotation-free iterated function system evaluated to a fixed depth.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IfsSpec {
    pub dim: usize,
    pub maps: Vec<SimilarityMap>,
    pub depth: u32,
    pub seed_point: Vec<f64>,
}

impl IfsSpec {
    /// Middle-third Cantor set on `[0,1]`, seeded at 0 (left endpoints).
    pub fn cantor(depth: u32) -> Self {
        let third = 1.0 / 3.0;
        Self {
            dim: 1,
            maps: alloc::vec![
                SimilarityMap {
                    ratio: third,
                    translation: alloc::vec![0.0]
                },
                SimilarityMap {
                    ratio: third,
                    translation: alloc::vec![2.0 / 3.0]
                },
            ],
            depth,
            seed_point: alloc::vec![0.0],
        }
    }

    /// Four-corner Cantor set in `[0,1]²` (product of two middle-third sets), seeded at the origin.
    pub fn four_corner(depth: u32) -> Self {
        let third = 1.0 / 3.0;
        let two = 2.0 / 3.0;
        let maps = [[0.0, 0.0], [two, 0.0], [0.0, two], [two, two]]
            .into_iter()
            .map(|t| SimilarityMap {
                ratio: third,
                translation: t.to_vec(),
            })
            .collect();
        Self {
            dim: 2,
            maps,
            depth,
            seed_point: alloc::vec![0.0, 0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        PointSet::new(self.dim)?;
        if self.maps.is_empty() {
            return Err(Error::domain("IFS needs at least one map"));
        }
        for (i, m) in self.maps.iter().enumerate() {
            if !(m.ratio > 0.0 && m.ratio < 1.0) {
                return Err(Error::domain(alloc::format!(
                    "map {i}: ratio {} is not in (0,1)",
                    m.ratio
                )));
            }
            if m.translation.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: m.translation.len(),
                });
            }
        }
        if self.seed_point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.seed_point.len(),
            });
        }
        let total = (self.maps.len() as u128).checked_pow(self.depth);
        match total {
            Some(t) if t <= MAX_IFS_POINTS as u128 => Ok(()),
            _ => Err(Error::domain(alloc::format!(
                "{} maps at depth {} exceed {MAX_IFS_POINTS} points",
                self.maps.len(),
                self.depth
            ))),
        }
    }

    pub fn cardinality(&self) -> usize {
        self.maps.len().pow(self.depth)
    }
}

/// Images of `seed_point` under every depth-fold composition of the maps.
///
/// Word `(i₁,…,i_d)` yields `f_{i₁}∘…∘f_{i_d}(seed)`; points come out in
/// lexicographic word order.
pub fn gen_ifs(spec: &IfsSpec) -> Result<PointSet> {
    spec.validate()?;
    let dim = spec.dim;
    let mut level = spec.seed_point.clone();
    for _ in 0..spec.depth {
        let mut next = Vec::with_capacity(level.len() * spec.maps.len());
        for m in &spec.maps {
            for p in level.chunks_exact(dim) {
                next.extend(p.iter().zip(&m.translation).map(|(x, t)| m.ratio * x + t));
            }
        }
        level = next;
    }
    PointSet::from_flat(dim, level)
}

/// Uniform lattice with `m` points per axis on `[0,1]^dim`; `m = 1` gives the origin.
pub fn gen_grid(m: usize, dim: usize) -> Result<PointSet> {
    if m == 0 {
        return Err(Error::domain("grid needs m >= 1"));
    }
    let step = if m == 1 { 0.0 } else { 1.0 / (m - 1) as f64 };
    lattice(m, dim, |i| {
        if m > 1 && i + 1 == m {
            1.0
        } else {
            i as f64 * step
        }
    })
}

/// Integer lattice `{0,…,m-1}^dim`. Its distances are exact in f64, which
/// makes it the input of choice for exact-mode signature counts.
pub fn gen_integer_grid(m: usize, dim: usize) -> Result<PointSet> {
    if m == 0 {
        return Err(Error::domain("grid needs m >= 1"));
    }
    lattice(m, dim, |i| i as f64)
}

fn lattice(m: usize, dim: usize, coord: impl Fn(usize) -> f64) -> Result<PointSet> {
    let mut ps = PointSet::new(dim)?;
    let total = m.pow(dim as u32);
    let mut p = [0.0; 3];
    for idx in 0..total {
        let mut rest = idx;
        for axis in (0..dim).rev() {
            p[axis] = coord(rest % m);
            rest /= m;
        }
        ps.push(&p[..dim])?;
    }
    Ok(ps)
}

/// `m` points on the circle of the given centre and radius, at angles `2πi/m`.
pub fn gen_circle(center: &[f64], radius: f64, m: usize) -> Result<PointSet> {
    if center.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: center.len(),
        });
    }
    if !(radius > 0.0 && radius.is_finite()) || m == 0 {
        return Err(Error::domain("circle needs radius > 0 and m >= 1"));
    }
    circle_points(center, radius, m, 0.0)
}

pub(crate) fn circle_points(center: &[f64], radius: f64, m: usize, phase: f64) -> Result<PointSet> {
    let mut ps = PointSet::new(2)?;
    for i in 0..m {
        let a = phase + 2.0 * PI * i as f64 / m as f64;
        ps.push(&[
            center[0] + radius * libm::cos(a),
            center[1] + radius * libm::sin(a),
        ])?;
    }
    Ok(ps)
}

/// `n` points uniform in `[0,1)^dim` from the crate PRNG.
pub fn gen_random(n: usize, dim: usize, seed: u64) -> Result<PointSet> {
    let mut rng = Prng::new(seed);
    let coords = (0..n * dim).map(|_| rng.unit()).collect();
    PointSet::from_flat(dim, coords)
}
