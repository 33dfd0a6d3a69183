use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::cell_index;
use crate::point::PointSet;

/// Residue modulus of the chessboard extraction.
pub const CHESSBOARD_MODULUS: u32 = 100;

/// Cells of side `1/k` inside `[0,1]^n`, stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellCollection {
    n: usize,
    k: u32,
    cells: Vec<[u32; 3]>,
}

impl CellCollection {
    pub fn new(n: usize, k: u32, cells: impl IntoIterator<Item = [u32; 3]>) -> Result<Self> {
        if !(1..=3).contains(&n) || k == 0 {
            return Err(Error::domain("cell collection needs n in 1..=3 and k >= 1"));
        }
        let mut cells: Vec<[u32; 3]> = cells.into_iter().collect();
        for c in &cells {
            if c[..n].iter().any(|&i| i >= k) || c[n..].iter().any(|&i| i != 0) {
                return Err(Error::domain(alloc::format!(
                    "cell {c:?} is outside [0,{k})^{n}"
                )));
            }
        }
        cells.sort_unstable();
        cells.dedup();
        Ok(Self { n, k, cells })
    }

    /// Cells of side `1/k` containing the points of `ps ⊂ [0,1]^n`; the
    /// right edge `1` joins the last cell.
    pub fn from_points(ps: &PointSet, k: u32) -> Result<Self> {
        let delta = 1.0 / k as f64;
        let mut cells = Vec::with_capacity(ps.len());
        for p in ps.iter() {
            if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::domain(alloc::format!(
                    "point {p:?} is outside the unit cube"
                )));
            }
            let mut c = [0u32; 3];
            for (o, &x) in c.iter_mut().zip(p) {
                *o = (cell_index(x, delta).max(0) as u32).min(k - 1);
            }
            cells.push(c);
        }
        Self::new(ps.dim(), k, cells)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.k as f64
    }

    pub fn cells(&self) -> &[[u32; 3]] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Most populated residue class mod 100 (per axis), smallest on ties.
pub fn best_residue(cc: &CellCollection) -> Option<[u32; 3]> {
    let mut counts: BTreeMap<[u32; 3], usize> = BTreeMap::new();
    for c in &cc.cells {
        *counts.entry(c.map(|i| i % CHESSBOARD_MODULUS)).or_default() += 1;
    }
    let mut best: Option<([u32; 3], usize)> = None;
    for (r, n) in counts {
        if best.is_none_or(|(_, b)| n > b) {
            best = Some((r, n));
        }
    }
    best.map(|b| b.0)
}

/// The cells of the most populated residue class. Distinct output cells
/// differ by a multiple of 100 on some axis, so their anchors are `≥ 100δ` apart.
pub fn chessboard_extract(cc: &CellCollection) -> CellCollection {
    let cells = match best_residue(cc) {
        Some(r) => cc
            .cells
            .iter()
            .copied()
            .filter(|c| c.map(|i| i % CHESSBOARD_MODULUS) == r)
            .collect(),
        None => Vec::new(),
    };
    CellCollection {
        n: cc.n,
        k: cc.k,
        cells,
    }
}

/// Smallest Chebyshev index distance between two distinct cells.
pub fn min_index_separation(cc: &CellCollection) -> Option<u32> {
    let mut best = None;
    for (i, a) in cc.cells.iter().enumerate() {
        for b in &cc.cells[..i] {
            let d = a
                .iter()
                .zip(b)
                .map(|(x, y)| x.abs_diff(*y))
                .max()
                .unwrap_or(0);
            best = Some(best.map_or(d, |m: u32| m.min(d)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Prng;

    #[test]
    fn full_line_of_a_thousand() {
        let cc = CellCollection::new(1, 1000, (0..1000).map(|i| [i, 0, 0])).unwrap();
        let out = chessboard_extract(&cc);
        assert_eq!(out.len(), 10);
        assert_eq!(min_index_separation(&out), Some(100));
        assert_eq!(out.cells()[0], [0, 0, 0]);
    }

    #[test]
    fn singleton_and_row() {
        let one = CellCollection::new(2, 7, [[3, 4, 0]]).unwrap();
        assert_eq!(chessboard_extract(&one), one);
        let row = CellCollection::new(2, 200, (0..200).map(|i| [i, 0, 0])).unwrap();
        let out = chessboard_extract(&row);
        assert_eq!(out.cells(), &[[0, 0, 0], [100, 0, 0]]);
    }

    #[test]
    fn validation_and_points() {
        assert!(CellCollection::new(1, 10, [[10, 0, 0]]).is_err());
        assert!(CellCollection::new(1, 10, [[1, 1, 0]]).is_err());
        let ps = PointSet::from_flat(2, alloc::vec![0.0, 1.0, 0.55, 0.5]).unwrap();
        let cc = CellCollection::from_points(&ps, 10).unwrap();
        assert_eq!(cc.cells(), &[[0, 9, 0], [5, 5, 0]]);
        let out = PointSet::from_flat(1, alloc::vec![1.5]).unwrap();
        assert!(CellCollection::from_points(&out, 10).is_err());
    }

    // Exhaustive over 1000 random collections in dimensions 1 and 2.
    #[test]
    fn extraction_lemma_exhaustive() {
        let mut rng = Prng::new(7);
        for trial in 0..1000 {
            let n = 1 + trial % 2;
            let k = 1 + rng.below(400) as u32;
            let count = 1 + rng.below(600) as usize;
            let cells: Vec<[u32; 3]> = (0..count)
                .map(|_| {
                    let mut c = [0; 3];
                    for v in c[..n].iter_mut() {
                        *v = rng.below(k as u64) as u32;
                    }
                    c
                })
                .collect();
            let cc = CellCollection::new(n, k, cells).unwrap();
            let out = chessboard_extract(&cc);
            let need = cc.len().div_ceil(100usize.pow(n as u32));
            assert!(out.len() >= need, "trial {trial}");
            assert!(out
                .cells()
                .iter()
                .all(|c| cc.cells().binary_search(c).is_ok()));
            if let Some(s) = min_index_separation(&out) {
                assert!(s >= CHESSBOARD_MODULUS, "trial {trial}");
            }
        }
    }
}
