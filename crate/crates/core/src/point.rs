//! Finite point sets in ℝ¹, ℝ², ℝ³.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::slice::ChunksExact;

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 3;

/// A finite list of points with a fixed ambient dimension.
///
/// Coordinates are stored flat (`dim` values per point). Duplicates are kept
/// as given; [`PointSet::dedup`] returns a copy without exact duplicates.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    label: Option<String>,
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!(
            "ambient dimension must be 1, 2 or 3, got {dim}"
        )))
    }
}

fn check_finite(coords: &[f64]) -> Result<()> {
    match coords.iter().position(|c| !c.is_finite()) {
        None => Ok(()),
        Some(i) => Err(Error::domain(alloc::format!(
            "non-finite coordinate at flat index {i}"
        ))),
    }
}

impl PointSet {
    /// An empty set in ℝ^`dim`.
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            coords: Vec::new(),
            label: None,
        })
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::domain(alloc::format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        check_finite(&coords)?;
        Ok(Self {
            dim,
            coords,
            label: None,
        })
    }

    pub fn from_points<I, P>(dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[f64]>,
    {
        let mut ps = Self::new(dim)?;
        for p in points {
            ps.push(p.as_ref())?;
        }
        Ok(ps)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        check_finite(p)?;
        self.coords.extend_from_slice(p);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Copy with exact duplicate points removed, first occurrences kept in order.
    pub fn dedup(&self) -> PointSet {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(self.coords.len());
        for p in self.iter() {
            // +0.0 normalises -0.0 so that equal coordinates share a key.
            let key: Vec<u64> = p.iter().map(|c| (c + 0.0).to_bits()).collect();
            if seen.insert(key) {
                out.extend_from_slice(p);
            }
        }
        PointSet {
            dim: self.dim,
            coords: out,
            label: self.label.clone(),
        }
    }

    /// Applies `f` to every point; the output keeps the dimension and label.
    pub fn map_points(&self, mut f: impl FnMut(&[f64], &mut [f64])) -> PointSet {
        let mut coords = alloc::vec![0.0; self.coords.len()];
        for (src, dst) in self.iter().zip(coords.chunks_exact_mut(self.dim)) {
            f(src, dst);
        }
        PointSet {
            dim: self.dim,
            coords,
            label: self.label.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> PointSet {
        self.map_points(|s, d| {
            for (o, i) in d.iter_mut().zip(s) {
                *o = factor * i;
            }
        })
    }

    pub fn translated(&self, t: &[f64]) -> Result<PointSet> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: t.len(),
            });
        }
        Ok(self.map_points(|s, d| {
            for ((o, i), ti) in d.iter_mut().zip(s).zip(t) {
                *o = i + ti;
            }
        }))
    }

    /// Zero-pads every point into ℝ^`dim` (for example a Cantor line on the x-axis of ℝ²).
    pub fn embed(&self, dim: usize) -> Result<PointSet> {
        check_dim(dim)?;
        if dim < self.dim {
            return Err(Error::domain("cannot embed into a lower dimension"));
        }
        let mut coords = Vec::with_capacity(self.len() * dim);
        for p in self.iter() {
            coords.extend_from_slice(p);
            coords.extend(core::iter::repeat_n(0.0, dim - self.dim));
        }
        Ok(PointSet {
            dim,
            coords,
            label: self.label.clone(),
        })
    }

    /// Points at the given indices, in that order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointSet {
            dim: self.dim,
            coords,
            label: self.label.clone(),
        }
    }

    /// Length of the bounding-box diagonal; an upper bound on every pairwise distance.
    pub fn diameter_bound(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let mut sq = 0.0;
        for axis in 0..self.dim {
            let (lo, hi) = self
                .iter()
                .map(|p| p[axis])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
            sq += (hi - lo) * (hi - lo);
        }
        libm::sqrt(sq)
    }
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(dist_sq(a, b))
}
