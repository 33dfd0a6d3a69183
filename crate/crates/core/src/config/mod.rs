//! Distance sets, triangle sets and simplex sets.
//!
//! A k-point configuration is recorded by its *signature*: the sorted vector
//! of its `k(k-1)/2` pairwise distances. Only k-tuples of pairwise distinct
//! points contribute, so every entry is positive; collinear (degenerate)
//! triangles are kept.
//!
//! Two resolutions are supported:
//!
//! * exact (`quant == 0`): signatures are compared through the bit patterns
//!   of their squared distances. This is exact for integer or dyadic inputs
//!   and is what the exact-mode examples use;
//! * quantized (`quant > 0`): every sorted coordinate is floored to a
//!   `quant`-cell and the set records occupied cells of ℝ^{k(k-1)/2}.
//!
//! The quantized path streams over subsets and never materializes the
//! subset list; [`naive`] holds the enumerate-then-dedup reference.

mod line;
pub mod naive;

pub use line::{line_split_pairs, LineSplit};

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::cells::{CellSet, KeyShape, MAX_ARITY};
use crate::error::{Error, Result};
use crate::grid::{cell_index, validate_scales, CoveringProfile};
use crate::par::fold_range;
use crate::point::{dist_sq, PointSet};

/// Number of pairwise distances of a k-point configuration.
pub const fn pair_count(k: usize) -> usize {
    k * (k - 1) / 2
}

fn check_k(k: usize) -> Result<()> {
    if (2..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!(
            "simplex size k must be 2, 3 or 4, got {k}"
        )))
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Caps on input size for the cubic (and worse) enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    /// Point cap for triangle enumeration; higher k is capped to the same subset count.
    pub max_points: usize,
    /// Cap on brute-force work units (triples, cell pairs × centres).
    pub max_work: u64,
    pub enforce: bool,
}

impl Default for Guard {
    fn default() -> Self {
        Self {
            max_points: 5000,
            max_work: 1_000_000_000,
            enforce: true,
        }
    }
}

impl Guard {
    pub const fn off() -> Self {
        Self {
            max_points: usize::MAX,
            max_work: u64::MAX,
            enforce: false,
        }
    }

    pub fn check_subsets(&self, n: usize, k: usize) -> Result<()> {
        if !self.enforce {
            return Ok(());
        }
        if k == 3 && n > self.max_points {
            return Err(Error::Guard {
                what: "point count",
                size: n as u128,
                cap: self.max_points as u128,
            });
        }
        let cap = binom(self.max_points as u128, 3);
        let size = binom(n as u128, k as u128);
        if size > cap {
            return Err(Error::Guard {
                what: "k-subset count",
                size,
                cap,
            });
        }
        Ok(())
    }

    pub fn check_work(&self, what: &'static str, size: u128) -> Result<()> {
        if self.enforce && size > self.max_work as u128 {
            return Err(Error::Guard {
                what,
                size,
                cap: self.max_work as u128,
            });
        }
        Ok(())
    }
}

/// Sorted pairwise distances of one configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Signature {
    k: usize,
    dists: [f64; MAX_ARITY],
}

impl Signature {
    /// Builds a signature from `k(k-1)/2` distances in any order.
    pub fn new(k: usize, dists: &[f64]) -> Result<Self> {
        check_k(k)?;
        if dists.len() != pair_count(k) {
            return Err(Error::DimensionMismatch {
                expected: pair_count(k),
                found: dists.len(),
            });
        }
        let mut d = [0.0; MAX_ARITY];
        d[..dists.len()].copy_from_slice(dists);
        d[..dists.len()].sort_by(f64::total_cmp);
        Ok(Self { k, dists: d })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dists(&self) -> &[f64] {
        &self.dists[..pair_count(self.k)]
    }
}

type ExactKey = [u64; MAX_ARITY];

#[derive(Clone, Debug, PartialEq)]
enum SigStore {
    Exact(BTreeSet<ExactKey>),
    Cells(CellSet),
}

/// A deduplicated set of signatures at a fixed resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureSet {
    k: usize,
    quant: f64,
    store: SigStore,
    ordered_count: Option<u64>,
}

impl SignatureSet {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Quantization scale; `0.0` for exact sets.
    pub fn quant(&self) -> f64 {
        self.quant
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.store, SigStore::Exact(_))
    }

    pub fn len(&self) -> usize {
        match &self.store {
            SigStore::Exact(s) => s.len(),
            SigStore::Cells(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distinct ordered distance tuples over ordered k-tuples (exact sets only).
    pub fn ordered_count(&self) -> Option<u64> {
        self.ordered_count
    }

    /// Signatures in lexicographic order. Quantized sets report each cell by
    /// its lower corner `index·quant`.
    pub fn signatures(&self) -> Vec<Signature> {
        let m = pair_count(self.k);
        match &self.store {
            SigStore::Exact(s) => s
                .iter()
                .map(|key| {
                    let mut d = [0.0; MAX_ARITY];
                    for (o, b) in d[..m].iter_mut().zip(key) {
                        *o = libm::sqrt(f64::from_bits(*b));
                    }
                    Signature {
                        k: self.k,
                        dists: d,
                    }
                })
                .collect(),
            SigStore::Cells(c) => c
                .sorted_cells()
                .into_iter()
                .map(|cell| {
                    let mut d = [0.0; MAX_ARITY];
                    for (o, i) in d[..m].iter_mut().zip(cell) {
                        *o = i as f64 * self.quant;
                    }
                    Signature {
                        k: self.k,
                        dists: d,
                    }
                })
                .collect(),
        }
    }

    /// Sorted squared distances of each signature; exact sets only.
    pub fn squared_signatures(&self) -> Option<Vec<Signature>> {
        let SigStore::Exact(s) = &self.store else {
            return None;
        };
        let m = pair_count(self.k);
        Some(
            s.iter()
                .map(|key| {
                    let mut d = [0.0; MAX_ARITY];
                    for (o, b) in d[..m].iter_mut().zip(key) {
                        *o = f64::from_bits(*b);
                    }
                    Signature {
                        k: self.k,
                        dists: d,
                    }
                })
                .collect(),
        )
    }

    /// Whether an exact set holds the signature with these sorted squared distances.
    pub fn contains_squared(&self, sq: &[f64]) -> bool {
        match &self.store {
            SigStore::Exact(s) if sq.len() == pair_count(self.k) => s.contains(&exact_key(sq)),
            _ => false,
        }
    }

    pub fn cells(&self) -> Option<&CellSet> {
        match &self.store {
            SigStore::Cells(c) => Some(c),
            SigStore::Exact(_) => None,
        }
    }

    /// Occupied cells in lexicographic order, padded to six coordinates (quantized sets only).
    pub fn sorted_cells(&self) -> Option<Vec<[u32; MAX_ARITY]>> {
        self.cells().map(CellSet::sorted_cells)
    }

    /// Feeds the set's contents, in sorted order, to `h`.
    pub fn digest<H: core::hash::Hasher>(&self, h: &mut H) {
        h.write_usize(self.k);
        h.write_u64(self.quant.to_bits());
        match &self.store {
            SigStore::Exact(s) => s.iter().flatten().for_each(|b| h.write_u64(*b)),
            SigStore::Cells(c) => c.digest(h),
        }
    }

    /// `self ⊆ other` at equal k and resolution.
    pub fn is_subset(&self, other: &SignatureSet) -> bool {
        if self.k != other.k {
            return false;
        }
        match (&self.store, &other.store) {
            (SigStore::Exact(a), SigStore::Exact(b)) => a.is_subset(b),
            (SigStore::Cells(a), SigStore::Cells(b)) => {
                self.quant == other.quant
                    && a.sorted_cells()
                        .iter()
                        .all(|c| b.contains(&c[..pair_count(self.k)]))
            }
            _ => false,
        }
    }
}

fn exact_key(sorted_sq: &[f64]) -> ExactKey {
    let mut key = [0u64; MAX_ARITY];
    for (k, v) in key.iter_mut().zip(sorted_sq) {
        // Squared distances are positive, so bit order is numeric order.
        *k = v.to_bits();
    }
    key
}

fn check_quant(quant: f64) -> Result<()> {
    if quant >= 0.0 && quant.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!(
            "quantization scale must be finite and >= 0, got {quant}"
        )))
    }
}

/// Marks an exactly zero distance (coincident points) in a pair table.
const COINCIDENT: u32 = u32::MAX;

/// Row-major `n×n` table of cell indices of pairwise distances at `quant`.
struct QuantTable {
    n: usize,
    cells: Vec<u32>,
    radix: u64,
}

impl QuantTable {
    fn new(ps: &PointSet, quant: f64) -> Result<Self> {
        let n = ps.len();
        let top = cell_index(ps.diameter_bound(), quant);
        let radix = top as u64 + 2;
        if radix >= COINCIDENT as u64 {
            return Err(Error::domain(
                "quantization scale too fine for the set's diameter",
            ));
        }
        let mut cells = alloc::vec![COINCIDENT; n * n];
        for i in 0..n {
            for j in 0..i {
                let sq = dist_sq(ps.point(i), ps.point(j));
                let c = if sq == 0.0 {
                    COINCIDENT
                } else {
                    cell_index(libm::sqrt(sq), quant) as u32
                };
                cells[i * n + j] = c;
                cells[j * n + i] = c;
            }
        }
        Ok(Self { n, cells, radix })
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> u32 {
        self.cells[i * self.n + j]
    }
}

/// Row-major `n×n` table of squared distances.
struct SquareTable {
    n: usize,
    sq: Vec<f64>,
}

impl SquareTable {
    fn new(ps: &PointSet) -> Self {
        let n = ps.len();
        let mut sq = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                let d = dist_sq(ps.point(i), ps.point(j));
                sq[i * n + j] = d;
                sq[j * n + i] = d;
            }
        }
        Self { n, sq }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.sq[i * self.n + j]
    }
}

/// Calls `f` on every increasing k-subset of `0..n` whose smallest element is `first`.
pub(crate) fn for_each_subset_from(first: usize, n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if first + k > n {
        return;
    }
    let mut idx = [0usize; 4];
    idx[0] = first;
    for (s, v) in idx[1..k].iter_mut().enumerate() {
        *v = first + 1 + s;
    }
    loop {
        f(&idx[..k]);
        // advance the odometer over positions 1..k
        let mut pos = k - 1;
        loop {
            if pos == 0 {
                return;
            }
            if idx[pos] < n - (k - pos) {
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
            pos -= 1;
        }
    }
}

/// Pair positions `(a, b)` of a k-subset in signature order `(0,1),(0,2),…`.
fn pair_layout(k: usize) -> &'static [(usize, usize)] {
    match k {
        2 => &[(0, 1)],
        3 => &[(0, 1), (0, 2), (1, 2)],
        _ => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    }
}

/// Pair positions of an ordered tuple. For triangles this is
/// `(|x-y|, |z-y|, |x-z|)` on the ordered triple `(x, y, z)`.
pub(crate) fn ordered_layout(k: usize) -> &'static [(usize, usize)] {
    match k {
        3 => &[(0, 1), (2, 1), (0, 2)],
        _ => pair_layout(k),
    }
}

fn quantized_set(ps: &PointSet, k: usize, quant: f64) -> Result<SignatureSet> {
    let table = QuantTable::new(ps, quant)?;
    let shape = KeyShape::new(pair_count(k), table.radix)?;
    let n = ps.len();
    let cells = if k == 3 {
        fold_range(
            n,
            || CellSet::new(shape),
            |mut set, i| {
                stream_triangles(&table, i, |t| {
                    set.insert(&t);
                });
                set
            },
            |mut a, b| {
                a.union_with(b);
                a
            },
        )
    } else {
        let layout = pair_layout(k);
        fold_range(
            n,
            || CellSet::new(shape),
            |mut set, i| {
                let mut buf = [0u32; MAX_ARITY];
                for_each_subset_from(i, n, k, |sub| {
                    for (o, &(a, b)) in buf.iter_mut().zip(layout) {
                        *o = table.get(sub[a], sub[b]);
                    }
                    let m = layout.len();
                    if buf[..m].contains(&COINCIDENT) {
                        return;
                    }
                    buf[..m].sort_unstable();
                    set.insert(&buf[..m]);
                });
                set
            },
            |mut a, b| {
                a.union_with(b);
                a
            },
        )
    };
    Ok(SignatureSet {
        k,
        quant,
        store: SigStore::Cells(cells),
        ordered_count: None,
    })
}

/// Sorted cell triples of all triangles `i < j < l` with fixed `i`.
#[inline]
fn stream_triangles(table: &QuantTable, i: usize, mut f: impl FnMut([u32; 3])) {
    let n = table.n;
    for j in i + 1..n {
        let a = table.get(i, j);
        if a == COINCIDENT {
            continue;
        }
        for l in j + 1..n {
            let b = table.get(i, l);
            let c = table.get(j, l);
            if b == COINCIDENT || c == COINCIDENT {
                continue;
            }
            f(sort3(a, b, c));
        }
    }
}

#[inline]
fn sort3<T: Ord + Copy>(a: T, b: T, c: T) -> [T; 3] {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let (b, c) = if b <= c { (b, c) } else { (c, b) };
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    [a, b, c]
}

fn exact_set(ps: &PointSet, k: usize) -> Result<SignatureSet> {
    let table = SquareTable::new(ps);
    let n = ps.len();
    let layout = pair_layout(k);
    let m = layout.len();
    let keys = fold_range(
        n,
        BTreeSet::new,
        |mut set: BTreeSet<ExactKey>, i| {
            let mut buf = [0.0f64; MAX_ARITY];
            for_each_subset_from(i, n, k, |sub| {
                for (o, &(a, b)) in buf.iter_mut().zip(layout) {
                    *o = table.get(sub[a], sub[b]);
                }
                if buf[..m].contains(&0.0) {
                    return;
                }
                buf[..m].sort_by(f64::total_cmp);
                set.insert(exact_key(&buf[..m]));
            });
            set
        },
        |mut a, mut b| {
            if a.len() < b.len() {
                core::mem::swap(&mut a, &mut b);
            }
            a.extend(b);
            a
        },
    );
    let ordered = match k {
        2 => keys.len() as u64,
        3 => keys
            .iter()
            .map(|key| permutations3(key[0], key[1], key[2]))
            .sum(),
        _ => ordered_exact_keys(ps, k).len() as u64,
    };
    Ok(SignatureSet {
        k,
        quant: 0.0,
        store: SigStore::Exact(keys),
        ordered_count: Some(ordered),
    })
}

/// Distinct orderings of a sorted triple: 1 (equilateral), 3 (isosceles) or 6.
fn permutations3(a: u64, b: u64, c: u64) -> u64 {
    match (a == b, b == c) {
        (true, true) => 1,
        (false, false) => 6,
        _ => 3,
    }
}

fn permutations(k: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    let mut p = [0usize, 1, 2, 3];
    fn rec(p: &mut [usize; 4], pos: usize, k: usize, out: &mut Vec<[usize; 4]>) {
        if pos == k {
            out.push(*p);
            return;
        }
        for i in pos..k {
            p.swap(pos, i);
            rec(p, pos + 1, k, out);
            p.swap(pos, i);
        }
    }
    rec(&mut p, 0, k, &mut out);
    out
}

/// Squared-distance keys of every ordered k-tuple of distinct points.
fn ordered_exact_keys(ps: &PointSet, k: usize) -> BTreeSet<ExactKey> {
    let table = SquareTable::new(ps);
    let n = ps.len();
    let layout = ordered_layout(k);
    let perms = permutations(k);
    let mut out = BTreeSet::new();
    for i in 0..n {
        for_each_subset_from(i, n, k, |sub| {
            for perm in &perms {
                let mut key = [0u64; MAX_ARITY];
                let mut zero = false;
                for (o, &(a, b)) in key.iter_mut().zip(layout) {
                    let v = table.get(sub[perm[a]], sub[perm[b]]);
                    zero |= v == 0.0;
                    *o = v.to_bits();
                }
                if !zero {
                    out.insert(key);
                }
            }
        });
    }
    out
}

/// Exact ordered distance tuples (not sorted) over ordered k-tuples of distinct points.
///
/// Triangles use the layout `(|x-y|, |z-y|, |x-z|)`; other k list `r_ij` for
/// `i < j` lexicographically.
pub fn ordered_tuples(ps: &PointSet, k: usize, guard: &Guard) -> Result<Vec<Vec<f64>>> {
    check_k(k)?;
    guard.check_subsets(ps.len(), k)?;
    let m = pair_count(k);
    Ok(ordered_exact_keys(ps, k)
        .into_iter()
        .map(|key| {
            key[..m]
                .iter()
                .map(|b| libm::sqrt(f64::from_bits(*b)))
                .collect()
        })
        .collect())
}

/// `D(F)`: positive pairwise distances. `quant = 0` is exact.
pub fn distance_set(ps: &PointSet, quant: f64) -> Result<SignatureSet> {
    simplex_set(ps, 2, quant, &Guard::off())
}

/// `D_x(F)`: positive distances from `x` to the points of `ps`.
pub fn pinned_distance_set(ps: &PointSet, x: &[f64], quant: f64) -> Result<SignatureSet> {
    check_quant(quant)?;
    if x.len() != ps.dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.dim(),
            found: x.len(),
        });
    }
    let sq: Vec<f64> = ps
        .iter()
        .map(|p| dist_sq(p, x))
        .filter(|&d| d > 0.0)
        .collect();
    if quant == 0.0 {
        let keys: BTreeSet<ExactKey> = sq.iter().map(|d| exact_key(&[*d])).collect();
        let ordered = keys.len() as u64;
        return Ok(SignatureSet {
            k: 2,
            quant,
            store: SigStore::Exact(keys),
            ordered_count: Some(ordered),
        });
    }
    let far = sq.iter().copied().fold(0.0, f64::max);
    let radix = cell_index(libm::sqrt(far), quant) as u64 + 2;
    if radix >= COINCIDENT as u64 {
        return Err(Error::domain(
            "quantization scale too fine for the set's diameter",
        ));
    }
    let mut cells = CellSet::new(KeyShape::new(1, radix)?);
    for d in sq {
        cells.insert(&[cell_index(libm::sqrt(d), quant) as u32]);
    }
    Ok(SignatureSet {
        k: 2,
        quant,
        store: SigStore::Cells(cells),
        ordered_count: None,
    })
}

/// `Δ(F)`: triangle signatures. In exact mode `ordered_count` is filled in.
pub fn triangle_set(ps: &PointSet, quant: f64, guard: &Guard) -> Result<SignatureSet> {
    simplex_set(ps, 3, quant, guard)
}

/// `Δ_k(F)` for `k ∈ {2, 3, 4}`.
pub fn simplex_set(ps: &PointSet, k: usize, quant: f64, guard: &Guard) -> Result<SignatureSet> {
    check_k(k)?;
    check_quant(quant)?;
    guard.check_subsets(ps.len(), k)?;
    if quant == 0.0 {
        exact_set(ps, k)
    } else {
        quantized_set(ps, k, quant)
    }
}

/// `N_δ(Δ(F))` for each δ in `scales`: occupied δ-cells of ℝ³ hit by sorted
/// distance triples, from a single streaming pass over the triangles.
pub fn delta_covering_profile(
    ps: &PointSet,
    scales: &[f64],
    guard: &Guard,
) -> Result<CoveringProfile> {
    validate_scales(scales)?;
    guard.check_subsets(ps.len(), 3)?;
    let tables = scales
        .iter()
        .map(|&s| QuantTable::new(ps, s))
        .collect::<Result<Vec<_>>>()?;
    let shapes = tables
        .iter()
        .map(|t| KeyShape::new(3, t.radix))
        .collect::<Result<Vec<_>>>()?;
    let n = ps.len();
    let sets = fold_range(
        n,
        || shapes.iter().map(|&s| CellSet::new(s)).collect::<Vec<_>>(),
        |mut sets, i| {
            for (set, table) in sets.iter_mut().zip(&tables) {
                stream_triangles(table, i, |t| {
                    set.insert(&t);
                });
            }
            sets
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.union_with(y);
            }
            a
        },
    );
    CoveringProfile::new(
        scales
            .iter()
            .copied()
            .zip(sets.iter().map(CellSet::len))
            .collect(),
    )
}

#[cfg(test)]
mod tests;
