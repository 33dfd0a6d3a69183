use crate::config::Guard;
use crate::error::{Error, Result};
use crate::par::fold_range;
use crate::point::PointSet;

/// Smallest `|(x-y) × (y-z)|` over `f1 × f2 × f3`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BilinearReport {
    pub min_cross: f64,
    pub r: f64,
    /// `min_cross > r`.
    pub pass: bool,
    /// Indices `(i, j, k)` of the minimizing triple; lexicographically
    /// smallest among ties.
    pub witness: [usize; 3],
}

#[inline]
fn cross(x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    let (ax, ay) = (x[0] - y[0], x[1] - y[1]);
    let (bx, by) = (y[0] - z[0], y[1] - z[1]);
    libm::fabs(ax * by - ay * bx)
}

fn validate(f: [&PointSet; 3], r: f64) -> Result<()> {
    for s in f {
        if s.is_empty() {
            return Err(Error::Empty(
                "bilinear separation needs three nonempty sets",
            ));
        }
        if s.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: s.dim(),
            });
        }
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(alloc::format!(
            "separation threshold must be > 0, got {r}"
        )));
    }
    Ok(())
}

pub fn bilinear_separation(
    f1: &PointSet,
    f2: &PointSet,
    f3: &PointSet,
    r: f64,
    guard: &Guard,
) -> Result<BilinearReport> {
    validate([f1, f2, f3], r)?;
    guard.check_work(
        "triple count",
        f1.len() as u128 * f2.len() as u128 * f3.len() as u128,
    )?;
    let (min_cross, witness) = fold_range(
        f1.len(),
        || (f64::INFINITY, [usize::MAX; 3]),
        |mut best, i| {
            let x = f1.point(i);
            for (j, y) in f2.iter().enumerate() {
                for (k, z) in f3.iter().enumerate() {
                    let c = cross(x, y, z);
                    if c < best.0 {
                        best = (c, [i, j, k]);
                    }
                }
            }
            best
        },
        |a, b| {
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        },
    );
    Ok(BilinearReport {
        min_cross,
        r,
        pass: min_cross > r,
        witness,
    })
}

/// Plain triple loop, the reference for [`bilinear_separation`].
pub fn bilinear_naive(
    f1: &PointSet,
    f2: &PointSet,
    f3: &PointSet,
    r: f64,
) -> Result<BilinearReport> {
    validate([f1, f2, f3], r)?;
    let mut best = (f64::INFINITY, [0; 3]);
    for i in 0..f1.len() {
        for j in 0..f2.len() {
            for k in 0..f3.len() {
                let c = cross(f1.point(i), f2.point(j), f3.point(k));
                if c < best.0 {
                    best = (c, [i, j, k]);
                }
            }
        }
    }
    Ok(BilinearReport {
        min_cross: best.0,
        r,
        pass: best.0 > r,
        witness: best.1,
    })
}
