//! Sets of integer cells in ℝ^m (m ≤ 6) keyed by a mixed-radix packing.
//!
//! A cell `(i₀,…,i_{m-1})` with every `i_j < radix` packs to
//! `((i₀·radix + i₁)·radix + …)`, so numeric key order is lexicographic cell
//! order. When `radix^m` is small enough the set is a lazily paged bitmap;
//! otherwise it falls back to a hash set of keys.

use alloc::boxed::Box;
use alloc::vec::Vec;
use hashbrown::HashSet;

use crate::error::{Error, Result};

/// Most coordinates a key can carry (the 6 edges of a tetrahedron).
pub const MAX_ARITY: usize = 6;

const PAGE_SHIFT: u32 = 12;
const PAGE_WORDS: usize = 1 << (PAGE_SHIFT - 6);
/// Key spaces up to this many bits use the paged bitmap (page table ≤ 16 MiB).
const PAGED_LIMIT: u128 = 1 << 33;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyShape {
    arity: usize,
    radix: u64,
    space: u128,
}

impl KeyShape {
    pub fn new(arity: usize, radix: u64) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY || radix == 0 {
            return Err(Error::domain(
                "key shape needs 1..=6 coordinates and radix >= 1",
            ));
        }
        let space = (radix as u128)
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::domain("cell key space does not fit 128 bits"))?;
        Ok(Self {
            arity,
            radix,
            space,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn radix(&self) -> u64 {
        self.radix
    }

    #[inline]
    pub fn pack(&self, idx: &[u32]) -> u128 {
        debug_assert_eq!(idx.len(), self.arity);
        let r = self.radix as u128;
        idx.iter().fold(0u128, |acc, &i| {
            debug_assert!((i as u64) < self.radix);
            acc * r + i as u128
        })
    }

    pub fn unpack(&self, mut key: u128) -> [u32; MAX_ARITY] {
        let r = self.radix as u128;
        let mut out = [0u32; MAX_ARITY];
        for slot in out[..self.arity].iter_mut().rev() {
            *slot = (key % r) as u32;
            key /= r;
        }
        out
    }
}

#[derive(Clone, Debug)]
struct PagedBits {
    pages: Vec<Option<Box<[u64; PAGE_WORDS]>>>,
}

impl PagedBits {
    fn new(space: u128) -> Self {
        let n = ((space + (1 << PAGE_SHIFT) - 1) >> PAGE_SHIFT) as usize;
        let mut pages = Vec::new();
        pages.resize_with(n, || None);
        Self { pages }
    }

    #[inline]
    fn insert(&mut self, key: u64) -> bool {
        let page = self.pages[(key >> PAGE_SHIFT) as usize]
            .get_or_insert_with(|| Box::new([0u64; PAGE_WORDS]));
        let off = (key & ((1 << PAGE_SHIFT) - 1)) as usize;
        let (w, b) = (off >> 6, off & 63);
        let fresh = page[w] & (1 << b) == 0;
        page[w] |= 1 << b;
        fresh
    }

    fn contains(&self, key: u64) -> bool {
        match self.pages.get((key >> PAGE_SHIFT) as usize) {
            Some(Some(page)) => {
                let off = (key & ((1 << PAGE_SHIFT) - 1)) as usize;
                page[off >> 6] & (1 << (off & 63)) != 0
            }
            _ => false,
        }
    }

    /// ORs `other` in and returns the number of newly set bits.
    fn union_with(&mut self, other: PagedBits) -> usize {
        let mut added = 0;
        for (mine, theirs) in self.pages.iter_mut().zip(other.pages) {
            let Some(theirs) = theirs else { continue };
            match mine {
                None => {
                    added += theirs
                        .iter()
                        .map(|w| w.count_ones() as usize)
                        .sum::<usize>();
                    *mine = Some(theirs);
                }
                Some(page) => {
                    for (a, b) in page.iter_mut().zip(theirs.iter()) {
                        added += (b & !*a).count_ones() as usize;
                        *a |= b;
                    }
                }
            }
        }
        added
    }

    fn same_bits(&self, other: &PagedBits) -> bool {
        let empty = [0u64; PAGE_WORDS];
        self.pages.len() == other.pages.len()
            && self.pages.iter().zip(&other.pages).all(|(a, b)| {
                let a = a.as_deref().unwrap_or(&empty);
                let b = b.as_deref().unwrap_or(&empty);
                a == b
            })
    }

    fn keys(&self) -> impl Iterator<Item = u128> + '_ {
        self.pages.iter().enumerate().flat_map(|(pi, page)| {
            page.iter().flat_map(move |words| {
                words.iter().enumerate().flat_map(move |(wi, &word)| {
                    let base = ((pi as u128) << PAGE_SHIFT) + (wi as u128) * 64;
                    BitIter(word).map(move |b| base + b as u128)
                })
            })
        })
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

#[derive(Clone, Debug)]
enum Store {
    Paged(PagedBits),
    Hashed(HashSet<u128>),
}

/// A deduplicated set of cells sharing one [`KeyShape`].
#[derive(Clone, Debug)]
pub struct CellSet {
    shape: KeyShape,
    len: usize,
    store: Store,
}

impl CellSet {
    pub fn new(shape: KeyShape) -> Self {
        let store = if shape.space <= PAGED_LIMIT {
            Store::Paged(PagedBits::new(shape.space))
        } else {
            Store::Hashed(HashSet::new())
        };
        Self {
            shape,
            len: 0,
            store,
        }
    }

    pub fn shape(&self) -> KeyShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Whether the set uses the paged bitmap rather than hashing.
    pub fn is_paged(&self) -> bool {
        matches!(self.store, Store::Paged(_))
    }

    #[inline]
    pub fn insert_key(&mut self, key: u128) -> bool {
        let fresh = match &mut self.store {
            Store::Paged(p) => p.insert(key as u64),
            Store::Hashed(h) => h.insert(key),
        };
        self.len += fresh as usize;
        fresh
    }

    #[inline]
    pub fn insert(&mut self, idx: &[u32]) -> bool {
        let key = self.shape.pack(idx);
        self.insert_key(key)
    }

    pub fn contains(&self, idx: &[u32]) -> bool {
        if idx.len() != self.shape.arity || idx.iter().any(|&i| i as u64 >= self.shape.radix) {
            return false;
        }
        let key = self.shape.pack(idx);
        match &self.store {
            Store::Paged(p) => p.contains(key as u64),
            Store::Hashed(h) => h.contains(&key),
        }
    }

    /// Set union; both sides must share a shape.
    pub fn union_with(&mut self, other: CellSet) {
        assert_eq!(
            self.shape, other.shape,
            "union of differently shaped cell sets"
        );
        match (&mut self.store, other.store) {
            (Store::Paged(a), Store::Paged(b)) => self.len += a.union_with(b),
            (Store::Hashed(a), Store::Hashed(b)) => {
                if a.len() < b.len() {
                    let small = core::mem::replace(a, b);
                    a.extend(small);
                } else {
                    a.extend(b);
                }
                self.len = a.len();
            }
            _ => unreachable!("equal shapes always pick the same store"),
        }
    }

    /// Packed keys in increasing order.
    pub fn sorted_keys(&self) -> Vec<u128> {
        match &self.store {
            Store::Paged(p) => p.keys().collect(),
            Store::Hashed(h) => {
                let mut v: Vec<u128> = h.iter().copied().collect();
                v.sort_unstable();
                v
            }
        }
    }

    /// Feeds the packed keys, in increasing order, to `h`.
    pub fn digest<H: core::hash::Hasher>(&self, h: &mut H) {
        h.write_usize(self.shape.arity);
        h.write_u64(self.shape.radix);
        match &self.store {
            Store::Paged(p) => p.keys().for_each(|k| h.write_u128(k)),
            Store::Hashed(_) => self.sorted_keys().into_iter().for_each(|k| h.write_u128(k)),
        }
    }

    /// Cells in lexicographic order, each padded to [`MAX_ARITY`] coordinates.
    pub fn sorted_cells(&self) -> Vec<[u32; MAX_ARITY]> {
        self.sorted_keys()
            .into_iter()
            .map(|k| self.shape.unpack(k))
            .collect()
    }
}

impl PartialEq for CellSet {
    fn eq(&self, other: &Self) -> bool {
        if self.shape != other.shape || self.len != other.len {
            return false;
        }
        match (&self.store, &other.store) {
            (Store::Paged(a), Store::Paged(b)) => a.same_bits(b),
            (Store::Hashed(a), Store::Hashed(b)) => a.iter().all(|k| b.contains(k)),
            _ => false,
        }
    }
}

impl Eq for CellSet {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pack_is_lexicographic() {
        let s = KeyShape::new(3, 10).unwrap();
        assert_eq!(s.pack(&[1, 2, 3]), 123);
        assert_eq!(&s.unpack(907)[..3], &[9, 0, 7]);
        assert!(KeyShape::new(7, 2).is_err());
        assert!(KeyShape::new(6, u64::MAX).is_err());
    }

    #[test]
    fn store_choice_follows_space() {
        assert!(CellSet::new(KeyShape::new(3, 1000).unwrap()).is_paged());
        assert!(!CellSet::new(KeyShape::new(6, 1000).unwrap()).is_paged());
    }

    proptest! {
        #[test]
        fn both_stores_agree_with_a_btreeset(
            cells in proptest::collection::vec((0u32..50, 0u32..50, 0u32..50), 0..300),
            split in 0usize..300,
        ) {
            let mut model = alloc::collections::BTreeSet::new();
            // radix 50 → paged; arity 3 with a huge radix → hashed
            for radix in [50u64, 1 << 40] {
                let shape = KeyShape::new(3, radix).unwrap();
                let mut a = CellSet::new(shape);
                let mut b = CellSet::new(shape);
                for (n, &(x, y, z)) in cells.iter().enumerate() {
                    model.insert([x, y, z]);
                    if n < split { a.insert(&[x, y, z]); } else { b.insert(&[x, y, z]); }
                }
                a.union_with(b);
                prop_assert_eq!(a.len(), model.len());
                let got: alloc::vec::Vec<[u32; 3]> =
                    a.sorted_cells().iter().map(|c| [c[0], c[1], c[2]]).collect();
                let want: alloc::vec::Vec<[u32; 3]> = model.iter().copied().collect();
                prop_assert_eq!(got, want);
                for &(x, y, z) in &cells {
                    prop_assert!(a.contains(&[x, y, z]));
                }
                prop_assert!(!a.contains(&[55, 0, 0]));
            }
        }
    }
}
