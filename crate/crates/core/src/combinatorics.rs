//! Exact binomial coefficients, the colexicographic (combinadic) number
//! system for k-subsets, and t-subset enumeration.
//!
//! A k-subset `c_0 < c_1 < ... < c_{k-1}` has colex rank
//! `sum_i binom(c_i, i + 1)`. Ranks enumerate the k-subsets of `0..n` as
//! `0..binom(n, k)`, independently of `n`, which is what lets the edge
//! stores address a hypergraph with `binom(n, k)` slots.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `binom(n, k)` computed exactly; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `ceil(num / den)` for `den > 0`.
pub fn ceil_div(num: &BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

fn check_increasing(subset: &[u32]) -> Result<()> {
    if subset.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::InvalidSubset(subset.to_vec()))
    }
}

/// Colex rank of a strictly increasing subset.
pub fn colex_rank(subset: &[u32]) -> Result<BigUint> {
    check_increasing(subset)?;
    Ok(subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(u64::from(c), i as u64 + 1))
        .sum())
}

/// Inverse of [`colex_rank`] for subsets of size `k`.
pub fn colex_unrank(rank: &BigUint, k: usize) -> Vec<u32> {
    let mut rest = rank.clone();
    let mut out = vec![0u32; k];
    for i in (1..=k).rev() {
        let i64_ = i as u64;
        // largest c with binom(c, i) <= rest; binom(i - 1, i) = 0 so c >= i - 1
        let mut lo = i64_ - 1;
        let mut hi = i64_.max(1);
        while binomial(hi, i64_) <= rest {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if binomial(mid, i64_) <= rest {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        rest -= binomial(lo, i64_);
        out[i - 1] = u32::try_from(lo).expect("unranked vertex id exceeds u32");
    }
    out
}

/// Table of `binom(c, j)` for `c <= n`, `j <= k` in `u64`, saturating at
/// `u64::MAX`. Backs O(k) ranking for the edge stores.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n: u32,
    k: usize,
    cells: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: u32, k: usize) -> Self {
        let width = n as usize + 1;
        let mut cells = vec![0u64; width * (k + 1)];
        cells[..width].fill(1);
        for j in 1..=k {
            for c in 1..width {
                let a = cells[(j - 1) * width + c - 1];
                let b = cells[j * width + c - 1];
                cells[j * width + c] = a.saturating_add(b);
            }
        }
        BinomialTable { n, k, cells }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, c: u32, j: usize) -> u64 {
        debug_assert!(c <= self.n && j <= self.k);
        self.cells[j * (self.n as usize + 1) + c as usize]
    }

    /// `binom(n, j)` if it is representable.
    pub fn total(&self, j: usize) -> Option<u64> {
        let v = self.get(self.n, j);
        (v != u64::MAX).then_some(v)
    }

    /// Colex rank of a strictly increasing subset of `0..=n`.
    #[inline]
    pub fn rank(&self, subset: &[u32]) -> u64 {
        subset
            .iter()
            .enumerate()
            .map(|(i, &c)| self.get(c, i + 1))
            .sum()
    }

    /// Writes the subset of size `out.len()` with the given colex rank.
    pub fn unrank_into(&self, rank: u64, out: &mut [u32]) {
        let mut rest = rank;
        let mut upper = self.n;
        for i in (1..=out.len()).rev() {
            // largest c < upper with binom(c, i) <= rest
            let (mut lo, mut hi) = (i as u32 - 1, upper);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if self.get(mid, i) <= rest {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            rest -= self.get(lo, i);
            out[i - 1] = lo;
            upper = lo;
        }
    }

    pub fn unrank(&self, rank: u64, k: usize) -> Vec<u32> {
        let mut out = vec![0; k];
        self.unrank_into(rank, &mut out);
        out
    }
}

/// Advances `subset` (strictly increasing, values `< n`) to its colex
/// successor. Returns `false` once the last subset has been passed.
#[inline]
pub fn colex_successor(subset: &mut [u32], n: u32) -> bool {
    successor_pivot(subset, n).is_some()
}

/// Same as [`colex_successor`], returning the incremented position; every
/// position below it was reset.
#[inline]
fn successor_pivot(subset: &mut [u32], n: u32) -> Option<usize> {
    let t = subset.len();
    for j in 0..t {
        let limit = if j + 1 < t { subset[j + 1] } else { n };
        if subset[j] + 1 < limit {
            subset[j] += 1;
            for (i, slot) in subset[..j].iter_mut().enumerate() {
                *slot = i as u32;
            }
            return Some(j);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CursorState {
    Fresh,
    Active,
    Done,
}

/// Enumerates the `t`-subsets of a ground list in colex order of their
/// index tuples. Each step touches only the prefix it resets, so the
/// amortized cost per emission is constant.
#[derive(Debug, Clone)]
pub struct SubsetCursor {
    ground: Vec<u32>,
    idx: Vec<u32>,
    current: Vec<u32>,
    state: CursorState,
}

/// Cursor over the `t`-subsets of `ground`.
pub fn subsets(ground: &[u32], t: usize) -> Result<SubsetCursor> {
    if t > ground.len() {
        return Err(Error::invalid(format!(
            "subset size {t} exceeds ground set size {}",
            ground.len()
        )));
    }
    Ok(SubsetCursor {
        ground: ground.to_vec(),
        idx: (0..t as u32).collect(),
        current: ground[..t].to_vec(),
        state: CursorState::Fresh,
    })
}

impl SubsetCursor {
    pub fn subset_size(&self) -> usize {
        self.idx.len()
    }

    pub fn ground(&self) -> &[u32] {
        &self.ground
    }

    /// Moves to the next subset and borrows it.
    pub fn advance(&mut self) -> Option<&[u32]> {
        match self.state {
            CursorState::Done => return None,
            CursorState::Fresh => self.state = CursorState::Active,
            CursorState::Active => {
                let Some(pivot) = successor_pivot(&mut self.idx, self.ground.len() as u32) else {
                    self.state = CursorState::Done;
                    return None;
                };
                for (slot, &i) in self.current[..=pivot].iter_mut().zip(&self.idx) {
                    *slot = self.ground[i as usize];
                }
            }
        }
        Some(&self.current)
    }
}

impl Iterator for SubsetCursor {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        self.advance().map(<[u32]>::to_vec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(binomial(65536, 2), big(65536 * 65535 / 2));
        assert_eq!(binomial(65536, 2), big(2147450880));
    }

    #[test]
    fn pascal_rule_up_to_64() {
        for n in 1..=64u64 {
            for k in 1..=n {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(colex_rank(&[0, 1]).unwrap(), big(0));
        assert_eq!(colex_rank(&[1, 2]).unwrap(), big(2));
        assert_eq!(colex_rank(&[0, 3]).unwrap(), big(3));
        assert_eq!(colex_unrank(&big(0), 2), vec![0, 1]);
        assert_eq!(colex_unrank(&big(2), 2), vec![1, 2]);
        assert_eq!(colex_unrank(&big(3), 2), vec![0, 3]);
        assert_eq!(colex_unrank(&big(0), 0), Vec::<u32>::new());
    }

    #[test]
    fn rank_rejects_unsorted() {
        assert_eq!(colex_rank(&[2, 1]), Err(Error::InvalidSubset(vec![2, 1])));
        assert!(colex_rank(&[1, 1]).is_err());
    }

    #[test]
    fn rank_matches_enumeration_order() {
        // enumerate 2-subsets of 0..4 by brute force in colex order: sort
        // by the largest element, then the next
        let mut all = Vec::new();
        for a in 0..4u32 {
            for b in a + 1..4 {
                all.push(vec![a, b]);
            }
        }
        all.sort_by_key(|s| (s[1], s[0]));
        for (r, s) in all.iter().enumerate() {
            assert_eq!(colex_rank(s).unwrap(), big(r as u64));
        }
    }

    #[test]
    fn round_trip_exhaustive_n_le_16() {
        for n in 0..=16u32 {
            let table = BinomialTable::new(n, n as usize);
            for k in 0..=n as usize {
                let total = binomial(u64::from(n), k as u64);
                let total: u64 = total.try_into().unwrap();
                for r in 0..total {
                    let s = colex_unrank(&big(r), k);
                    assert_eq!(colex_rank(&s).unwrap(), big(r));
                    assert!(s.iter().all(|&v| v < n));
                    assert_eq!(table.unrank(r, k), s);
                    assert_eq!(table.rank(&s), r);
                }
            }
        }
    }

    #[test]
    fn table_saturates_instead_of_wrapping() {
        let table = BinomialTable::new(200, 100);
        assert_eq!(table.get(200, 100), u64::MAX);
        assert_eq!(table.total(100), None);
        assert_eq!(table.total(2), Some(19900));
    }

    #[test]
    fn cursor_examples() {
        let got: Vec<_> = subsets(&[0, 1, 2], 2).unwrap().collect();
        assert_eq!(got, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);

        let got: Vec<_> = subsets(&[5, 7], 2).unwrap().collect();
        assert_eq!(got, vec![vec![5, 7]]);

        let ground: Vec<u32> = (0..12).collect();
        let mut cur = subsets(&ground, 3).unwrap();
        assert_eq!(cur.advance(), Some(&[0, 1, 2][..]));
        assert_eq!(1 + cur.count() as u64, 220);
        assert_eq!(binomial(12, 3), big(220));

        assert!(matches!(
            subsets(&[1, 2], 3),
            Err(Error::InvalidArguments(_))
        ));
        let empty: Vec<_> = subsets(&[1, 2], 0).unwrap().collect();
        assert_eq!(empty, vec![Vec::<u32>::new()]);
    }

    proptest! {
        #[test]
        fn cursor_emits_colex_sorted_distinct(
            mut ground in proptest::collection::btree_set(0u32..64, 0..=16),
            t_frac in 0.0f64..=1.0,
        ) {
            let ground: Vec<u32> = std::mem::take(&mut ground).into_iter().collect();
            let t = (t_frac * ground.len() as f64).round() as usize;
            let emitted: Vec<Vec<u32>> = subsets(&ground, t).unwrap().collect();
            prop_assert_eq!(
                BigUint::from(emitted.len()),
                binomial(ground.len() as u64, t as u64)
            );
            // positions within ground, ranked in colex order
            let ranks: Vec<BigUint> = emitted
                .iter()
                .map(|s| {
                    let pos: Vec<u32> = s
                        .iter()
                        .map(|v| ground.iter().position(|g| g == v).unwrap() as u32)
                        .collect();
                    colex_rank(&pos).unwrap()
                })
                .collect();
            prop_assert!(ranks.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn table_rank_agrees_with_bignum(
            set in proptest::collection::btree_set(0u32..500, 1..=5),
        ) {
            let s: Vec<u32> = set.into_iter().collect();
            let table = BinomialTable::new(500, s.len());
            let r = table.rank(&s);
            prop_assert_eq!(BigUint::from(r), colex_rank(&s).unwrap());
            prop_assert_eq!(table.unrank(r, s.len()), s);
        }
    }
}
