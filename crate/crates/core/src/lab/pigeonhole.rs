use alloc::vec::Vec;

use crate::error::{Error, Result};

/// The heaviest dyadic class `[2^{k-1}, 2^k)` of a list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pigeonhole {
    pub k: u32,
    pub class_sum: u64,
    /// Indices of the inputs in class `k`, increasing.
    pub members: Vec<usize>,
}

impl Pigeonhole {
    /// Lower end `2^{k-1}` of the chosen class.
    pub fn class_floor(&self) -> u64 {
        1 << (self.k - 1)
    }
}

/// Dyadic class of `m ≥ 1`: the `k` with `2^{k-1} ≤ m < 2^k`.
pub fn dyadic_class(m: u64) -> u32 {
    64 - m.leading_zeros()
}

/// Picks the `k` maximizing `Σ_{m_i ∈ [2^{k-1}, 2^k)} m_i`, smallest `k` on ties.
pub fn dyadic_pigeonhole(m: &[u64]) -> Result<Pigeonhole> {
    if m.is_empty() {
        return Err(Error::Empty("dyadic pigeonhole needs at least one value"));
    }
    if m.contains(&0) {
        return Err(Error::domain("dyadic pigeonhole values must be >= 1"));
    }
    let mut sums = [0u128; 65];
    for &v in m {
        sums[dyadic_class(v) as usize] += v as u128;
    }
    let mut k = 1;
    for c in 2..=64 {
        if sums[c] > sums[k] {
            k = c;
        }
    }
    let k = k as u32;
    Ok(Pigeonhole {
        k,
        class_sum: sums[k as usize] as u64,
        members: (0..m.len()).filter(|&i| dyadic_class(m[i]) == k).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let p = dyadic_pigeonhole(&[1, 1, 1, 1]).unwrap();
        assert_eq!((p.k, p.class_sum), (1, 4));
        let p = dyadic_pigeonhole(&[1, 2, 4, 8]).unwrap();
        assert_eq!((p.k, p.class_sum, p.members.clone()), (4, 8, vec![3]));
        assert!(8.0 >= 15.0 / libm::log2(15.0));
        let p = dyadic_pigeonhole(&[3]).unwrap();
        assert_eq!((p.k, p.class_sum, p.class_floor()), (2, 3, 2));
        assert!(dyadic_pigeonhole(&[]).is_err());
        assert!(dyadic_pigeonhole(&[2, 0]).is_err());
    }

    #[test]
    fn ties_take_the_smallest_class() {
        let p = dyadic_pigeonhole(&[2, 2, 4]).unwrap();
        assert_eq!((p.k, p.members), (2, vec![0, 1]));
    }

    proptest! {
        #[test]
        fn argmax_and_bound(m in proptest::collection::vec(1u64..5000, 1..60)) {
            let p = dyadic_pigeonhole(&m).unwrap();
            let total: u64 = m.iter().sum();
            for k in 1..=20u32 {
                let s: u64 = m.iter().filter(|&&v| v >= 1 << (k - 1) && v < 1 << k).sum();
                prop_assert!(s < p.class_sum || (s == p.class_sum && k >= p.k));
            }
            if total >= 2 {
                prop_assert!(p.class_sum as f64 >= total as f64 / libm::log2(total as f64));
            }
        }
    }
}
