//! Immutable k-uniform hypergraphs addressed by colex rank.
//!
//! An edge `e` (a strictly increasing k-tuple) lives at slot
//! `colex_rank(e)` of a `binom(n, k)`-slot space. Two stores sit behind
//! that addressing: a dense bitset (one bit per slot) and a sorted rank
//! list with a hash index for sparse or very large slot spaces.

use std::collections::HashSet;
use std::env;
use std::fmt;

use bitvec::prelude::*;

use crate::combinatorics::{colex_successor, BinomialTable};
use crate::error::{Error, Result};
use crate::parameters::Density;

/// Default memory budget for the dense store: 2^33 bits (1 GiB).
pub const DEFAULT_BUDGET_BITS: u64 = 1 << 33;

/// Environment variable overriding [`DEFAULT_BUDGET_BITS`].
pub const BUDGET_ENV: &str = "PARTITE_MEM_BUDGET_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendPolicy {
    /// Dense bitset when `binom(n, k) <= budget_bits`, sorted index otherwise.
    Auto {
        budget_bits: u64,
    },
    RankBitset,
    SortedIndex,
}

impl Default for BackendPolicy {
    fn default() -> Self {
        BackendPolicy::Auto {
            budget_bits: DEFAULT_BUDGET_BITS,
        }
    }
}

impl BackendPolicy {
    /// `Auto` with the budget taken from `PARTITE_MEM_BUDGET_BITS` if set.
    pub fn from_env() -> Result<Self> {
        match env::var(BUDGET_ENV) {
            Ok(raw) => {
                let budget_bits = raw.trim().parse::<u64>().map_err(|_| {
                    Error::invalid(format!("{BUDGET_ENV}={raw:?} is not a bit count"))
                })?;
                Ok(BackendPolicy::Auto { budget_bits })
            }
            Err(_) => Ok(BackendPolicy::default()),
        }
    }

    fn choose(self, slots: u64) -> Backend {
        match self {
            BackendPolicy::Auto { budget_bits } if slots <= budget_bits => Backend::RankBitset,
            BackendPolicy::Auto { .. } => Backend::SortedIndex,
            BackendPolicy::RankBitset => Backend::RankBitset,
            BackendPolicy::SortedIndex => Backend::SortedIndex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    RankBitset,
    SortedIndex,
}

#[derive(Clone)]
enum EdgeStore {
    RankBitset(BitVec<u64, Lsb0>),
    SortedIndex {
        ranks: Vec<u64>,
        lookup: HashSet<u64>,
    },
}

impl EdgeStore {
    #[inline]
    fn contains(&self, rank: u64) -> bool {
        match self {
            EdgeStore::RankBitset(bits) => bits[rank as usize],
            EdgeStore::SortedIndex { lookup, .. } => lookup.contains(&rank),
        }
    }
}

/// Accepts edges in strictly increasing rank order and tracks degrees.
pub(crate) struct StoreBuilder {
    n: u32,
    k: usize,
    slots: u64,
    table: BinomialTable,
    policy: BackendPolicy,
    bits: Option<BitVec<u64, Lsb0>>,
    ranks: Vec<u64>,
    degrees: Vec<u64>,
    last: Option<u64>,
    m: u64,
}

impl StoreBuilder {
    pub(crate) fn new(n: u32, k: usize, policy: BackendPolicy) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("uniformity k must be at least 1"));
        }
        let table = BinomialTable::new(n, k);
        let slots = table.total(k).ok_or(Error::IndexOverflow { n, k })?;
        let bits = match policy.choose(slots) {
            Backend::RankBitset => Some(bitvec![u64, Lsb0; 0; slots as usize]),
            Backend::SortedIndex => None,
        };
        Ok(StoreBuilder {
            n,
            k,
            slots,
            table,
            policy,
            bits,
            ranks: Vec::new(),
            degrees: vec![0; n as usize],
            last: None,
            m: 0,
        })
    }

    pub(crate) fn slots(&self) -> u64 {
        self.slots
    }

    pub(crate) fn table(&self) -> &BinomialTable {
        &self.table
    }

    /// `edge` must be the unrank of `rank`, and ranks must increase.
    #[inline]
    pub(crate) fn push(&mut self, rank: u64, edge: &[u32]) {
        debug_assert!(self.last.is_none_or(|l| l < rank));
        debug_assert_eq!(self.table.rank(edge), rank);
        self.last = Some(rank);
        match &mut self.bits {
            Some(bits) => bits.set(rank as usize, true),
            None => self.ranks.push(rank),
        }
        for &v in edge {
            self.degrees[v as usize] += 1;
        }
        self.m += 1;
    }

    pub(crate) fn finish(self) -> Hypergraph {
        let store = match self.bits {
            Some(bits) => EdgeStore::RankBitset(bits),
            None => {
                let lookup = self.ranks.iter().copied().collect();
                EdgeStore::SortedIndex {
                    ranks: self.ranks,
                    lookup,
                }
            }
        };
        Hypergraph {
            n: self.n,
            k: self.k,
            m: self.m,
            table: self.table,
            policy: self.policy,
            store,
            degrees: self.degrees,
        }
    }
}

/// A k-uniform hypergraph on vertices `0..n`.
#[derive(Clone)]
pub struct Hypergraph {
    n: u32,
    k: usize,
    m: u64,
    table: BinomialTable,
    policy: BackendPolicy,
    store: EdgeStore,
    degrees: Vec<u64>,
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("m", &self.m)
            .field("backend", &self.backend())
            .finish()
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.k == other.k
            && self.m == other.m
            && self.edge_ranks().eq(other.edge_ranks())
    }
}

impl Eq for Hypergraph {}

/// Sorts `edge` in place and checks it is a k-set of vertices below `n`.
fn canonicalize(edge: &mut [u32], n: u32) -> Result<()> {
    edge.sort_unstable();
    if let Some(&v) = edge.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if edge.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotASet(edge.to_vec()));
    }
    Ok(())
}

impl Hypergraph {
    /// Builds from an edge list with the default backend policy. Tuples are
    /// sorted and deduplicated.
    pub fn build<I, E>(n: u32, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        Self::build_with(n, k, edges, BackendPolicy::default())
    }

    pub fn build_with<I, E>(n: u32, k: usize, edges: I, policy: BackendPolicy) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        let mut builder = StoreBuilder::new(n, k, policy)?;
        let mut keyed = Vec::new();
        let mut buf = Vec::with_capacity(k);
        for edge in edges {
            let edge = edge.as_ref();
            if edge.len() != k {
                return Err(Error::invalid(format!(
                    "edge {edge:?} has {} vertices, expected {k}",
                    edge.len()
                )));
            }
            buf.clear();
            buf.extend_from_slice(edge);
            canonicalize(&mut buf, n)?;
            keyed.push(builder.table().rank(&buf));
        }
        keyed.sort_unstable();
        keyed.dedup();
        for rank in keyed {
            builder.table().unrank_into(rank, &mut buf);
            builder.push(rank, &buf);
        }
        Ok(builder.finish())
    }

    /// Builds from strictly increasing colex ranks.
    pub fn from_sorted_ranks(
        n: u32,
        k: usize,
        ranks: &[u64],
        policy: BackendPolicy,
    ) -> Result<Self> {
        let mut builder = StoreBuilder::new(n, k, policy)?;
        if !ranks.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("edge ranks are not strictly increasing"));
        }
        if let Some(&last) = ranks.last() {
            if last >= builder.slots() {
                return Err(Error::invalid(format!(
                    "edge rank {last} outside 0..{}",
                    builder.slots()
                )));
            }
        }
        let mut buf = vec![0; k];
        for &rank in ranks {
            builder.table().unrank_into(rank, &mut buf);
            builder.push(rank, &buf);
        }
        Ok(builder.finish())
    }

    pub fn complete(n: u32, k: usize) -> Result<Self> {
        Self::complete_with(n, k, BackendPolicy::default())
    }

    pub fn complete_with(n: u32, k: usize, policy: BackendPolicy) -> Result<Self> {
        let mut builder = StoreBuilder::new(n, k, policy)?;
        if n as usize >= k {
            let mut edge: Vec<u32> = (0..k as u32).collect();
            let mut rank = 0;
            loop {
                builder.push(rank, &edge);
                rank += 1;
                if !colex_successor(&mut edge, n) {
                    break;
                }
            }
        }
        Ok(builder.finish())
    }

    pub fn empty(n: u32, k: usize) -> Result<Self> {
        Ok(StoreBuilder::new(n, k, BackendPolicy::default())?.finish())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `binom(n, k)`, the number of slots.
    pub fn slots(&self) -> u64 {
        self.table.get(self.n, self.k)
    }

    pub fn backend(&self) -> Backend {
        match self.store {
            EdgeStore::RankBitset(_) => Backend::RankBitset,
            EdgeStore::SortedIndex { .. } => Backend::SortedIndex,
        }
    }

    pub fn policy(&self) -> BackendPolicy {
        self.policy
    }

    pub(crate) fn table(&self) -> &BinomialTable {
        &self.table
    }

    /// Membership for an edge given as any permutation of a k-set.
    pub fn contains_edge(&self, edge: &[u32]) -> Result<bool> {
        if edge.len() != self.k {
            return Err(Error::invalid(format!(
                "query {edge:?} has {} vertices, expected {}",
                edge.len(),
                self.k
            )));
        }
        let mut buf = edge.to_vec();
        canonicalize(&mut buf, self.n)?;
        Ok(self.contains_sorted(&buf))
    }

    /// Membership for a strictly increasing k-tuple of valid ids.
    #[inline]
    pub fn contains_sorted(&self, edge: &[u32]) -> bool {
        debug_assert_eq!(edge.len(), self.k);
        self.store.contains(self.table.rank(edge))
    }

    #[inline]
    pub fn contains_rank(&self, rank: u64) -> bool {
        rank < self.slots() && self.store.contains(rank)
    }

    pub fn degree(&self, v: u32) -> Result<u64> {
        self.degrees
            .get(v as usize)
            .copied()
            .ok_or(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// The `w` vertices of largest degree (ties to the smaller id), sorted
    /// by id.
    pub fn top_degree_vertices(&self, w: usize) -> Result<Vec<u32>> {
        if w > self.n as usize {
            return Err(Error::invalid(format!(
                "cannot select {w} vertices out of {}",
                self.n
            )));
        }
        let mut order: Vec<u32> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degrees[v as usize]), v));
        order.truncate(w);
        order.sort_unstable();
        Ok(order)
    }

    /// Edge ranks in increasing order.
    pub fn edge_ranks(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.store {
            EdgeStore::RankBitset(bits) => Box::new(bits.iter_ones().map(|r| r as u64)),
            EdgeStore::SortedIndex { ranks, .. } => Box::new(ranks.iter().copied()),
        }
    }

    /// Edges as strictly increasing tuples, in colex order.
    pub fn edges(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.edge_ranks().map(|r| self.table.unrank(r, self.k))
    }

    /// Exact edge density `m / binom(n, k)`.
    pub fn density(&self) -> Result<Density> {
        if (self.n as usize) < self.k {
            return Err(Error::invalid(format!(
                "density undefined for n = {} < k = {}",
                self.n, self.k
            )));
        }
        Ok(Density::new(self.m.into(), self.slots().into()))
    }

    /// The (k-1)-sets `y` with `y ∪ {x}` an edge for every `x` in `t_set`.
    ///
    /// Scans every (k-1)-subset of the vertex set once and probes each
    /// member of `t_set`, i.e. `O(|T| * binom(n, k-1) * k)` work.
    pub fn link_set(&self, t_set: &[u32]) -> Result<LinkSet> {
        if self.k < 2 {
            return Err(Error::invalid("link sets need uniformity at least 2"));
        }
        if t_set.is_empty() {
            return Err(Error::invalid("link set of an empty vertex set"));
        }
        let mut anchors = t_set.to_vec();
        canonicalize(&mut anchors, self.n)?;

        let sub = self.k - 1;
        let mut ranks = Vec::new();
        if self.n as usize >= sub {
            let mut y: Vec<u32> = (0..sub as u32).collect();
            let mut rank = 0u64;
            loop {
                if anchors.iter().all(|&x| self.joins(&y, x)) {
                    ranks.push(rank);
                }
                rank += 1;
                if !colex_successor(&mut y, self.n) {
                    break;
                }
            }
        }
        Ok(LinkSet {
            n: self.n,
            k: sub,
            ranks,
        })
    }

    /// Whether `y ∪ {x}` is an edge, with `y` a sorted (k-1)-tuple.
    #[inline]
    fn joins(&self, y: &[u32], x: u32) -> bool {
        let mut rank = 0u64;
        let mut shift = 1;
        let mut placed = false;
        for (i, &c) in y.iter().enumerate() {
            if !placed && x < c {
                rank += self.table.get(x, i + 1);
                placed = true;
                shift = 2;
            } else if x == c {
                return false;
            }
            rank += self.table.get(c, i + shift);
        }
        if !placed {
            rank += self.table.get(x, y.len() + 1);
        }
        self.store.contains(rank)
    }
}

/// The link set of a vertex set: sorted colex ranks of (k-1)-subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkSet {
    n: u32,
    k: usize,
    ranks: Vec<u64>,
}

impl LinkSet {
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Uniformity of the members (one less than the host's).
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn subsets(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let table = BinomialTable::new(self.n, self.k);
        self.ranks.iter().map(move |&r| table.unrank(r, self.k))
    }

    /// The link as a hypergraph on the same vertex set.
    pub fn into_hypergraph(self, policy: BackendPolicy) -> Result<Hypergraph> {
        Hypergraph::from_sorted_ranks(self.n, self.k, &self.ranks, policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pairs_of(vs: &[u32]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                out.push(vec![a, b]);
            }
        }
        out.sort_by_key(|p| (p[1], p[0]));
        out
    }

    #[test]
    fn build_canonicalizes_and_dedups() {
        let h = Hypergraph::build(3, 2, [[0, 1], [1, 2]]).unwrap();
        assert_eq!(h.m(), 2);
        let h = Hypergraph::build(3, 2, [[1, 0], [0, 1]]).unwrap();
        assert_eq!(h.m(), 1);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![vec![0, 1]]);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            Hypergraph::build(3, 2, [[0, 3]]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 3, n: 3 }
        );
        assert_eq!(
            Hypergraph::build(3, 2, [[1, 1]]).unwrap_err(),
            Error::NotASet(vec![1, 1])
        );
        assert!(matches!(
            Hypergraph::build(3, 2, [vec![0, 1, 2]]),
            Err(Error::InvalidArguments(_))
        ));
        assert!(Hypergraph::empty(3, 0).is_err());
    }

    #[test]
    fn complete_has_all_slots() {
        let h = Hypergraph::complete(5, 3).unwrap();
        assert_eq!(h.m(), 10);
        assert_eq!(binomial(5, 3), 10u32.into());
        assert!(h.contains_edge(&[0, 2, 4]).unwrap());
        assert!(h.contains_edge(&[4, 0, 2]).unwrap());
        let e = Hypergraph::empty(5, 3).unwrap();
        assert!(!e.contains_edge(&[0, 1, 2]).unwrap());
        assert!(e.contains_edge(&[0, 1, 1]).is_err());
        assert!(e.contains_edge(&[0, 1, 5]).is_err());
    }

    #[test]
    fn contains_canonicalizes_query() {
        let h = Hypergraph::build(3, 2, [[0, 1]]).unwrap();
        assert!(!h.contains_edge(&[2, 1]).unwrap());
        assert!(h.contains_edge(&[1, 0]).unwrap());
    }

    #[test]
    fn degrees() {
        let h = Hypergraph::complete(6, 3).unwrap();
        assert!((0..6).all(|v| h.degree(v).unwrap() == 10));
        let h = Hypergraph::build(4, 2, [[0, 1], [0, 2]]).unwrap();
        assert_eq!(h.degree(0).unwrap(), 2);
        assert_eq!(h.degree(3).unwrap(), 0);
        assert_eq!(
            h.degree(4).unwrap_err(),
            Error::VertexOutOfRange { vertex: 4, n: 4 }
        );
    }

    #[test]
    fn top_degree_tie_break() {
        let h = Hypergraph::complete(5, 2).unwrap();
        assert_eq!(h.top_degree_vertices(2).unwrap(), vec![0, 1]);
        let h = Hypergraph::build(4, 2, [[0, 1], [0, 2], [1, 2]]).unwrap();
        assert_eq!(h.top_degree_vertices(2).unwrap(), vec![0, 1]);
        assert_eq!(h.top_degree_vertices(4).unwrap(), vec![0, 1, 2, 3]);
        assert!(h.top_degree_vertices(5).is_err());
        let h = Hypergraph::build(5, 2, [[3, 4], [2, 4], [1, 3]]).unwrap();
        // degrees 0,1,1,2,2
        assert_eq!(h.top_degree_vertices(3).unwrap(), vec![1, 3, 4]);
    }

    #[test]
    fn link_set_examples() {
        let h = Hypergraph::complete(5, 3).unwrap();
        let s = h.link_set(&[0]).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.subsets().collect::<Vec<_>>(), pairs_of(&[1, 2, 3, 4]));
        let s = h.link_set(&[1, 0]).unwrap();
        assert_eq!(s.subsets().collect::<Vec<_>>(), pairs_of(&[2, 3, 4]));
        assert!(Hypergraph::empty(5, 3)
            .unwrap()
            .link_set(&[0])
            .unwrap()
            .is_empty());
        assert!(h.link_set(&[]).is_err());
        assert!(h.link_set(&[7]).is_err());
    }

    #[test]
    fn density_examples() {
        let d = Hypergraph::complete(5, 2).unwrap().density().unwrap();
        assert_eq!(d, Density::new(1u32.into(), 1u32.into()));
        let h = Hypergraph::build(5, 2, pairs_of(&[0, 1, 2, 3, 4]).into_iter().take(5)).unwrap();
        assert_eq!(h.density().unwrap(), Density::new(1u32.into(), 2u32.into()));
        assert!(Hypergraph::empty(5, 3)
            .unwrap()
            .density()
            .unwrap()
            .is_zero());
        assert!(Hypergraph::empty(2, 3).unwrap().density().is_err());
    }

    fn random_edges(rng: &mut ChaCha8Rng, n: u32, k: usize) -> Vec<Vec<u32>> {
        let mut edges = Vec::new();
        let mut e: Vec<u32> = (0..k as u32).collect();
        let p: f64 = rng.gen_range(0.0..1.0);
        loop {
            if rng.gen_bool(p) {
                edges.push(e.clone());
            }
            if !colex_successor(&mut e, n) {
                break;
            }
        }
        edges
    }

    #[test]
    fn structural_invariants_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12u32);
            let k = rng.gen_range(1..=n.min(4) as usize);
            let edges = random_edges(&mut rng, n, k);
            let dense = Hypergraph::build_with(n, k, &edges, BackendPolicy::RankBitset).unwrap();
            let sparse = Hypergraph::build_with(n, k, &edges, BackendPolicy::SortedIndex).unwrap();
            assert_eq!(dense.backend(), Backend::RankBitset);
            assert_eq!(sparse.backend(), Backend::SortedIndex);
            assert_eq!(dense, sparse);
            assert_eq!(dense.m() as usize, edges.len());

            let mut e: Vec<u32> = (0..k as u32).collect();
            loop {
                assert_eq!(dense.contains_sorted(&e), sparse.contains_sorted(&e));
                assert_eq!(dense.contains_sorted(&e), edges.contains(&e));
                if !colex_successor(&mut e, n) {
                    break;
                }
            }

            let deg_sum: u64 = dense.degrees().iter().sum();
            assert_eq!(deg_sum, k as u64 * dense.m());

            let w = rng.gen_range(0..=n as usize);
            let top = dense.top_degree_vertices(w).unwrap();
            let top_sum: u64 = top.iter().map(|&v| dense.degree(v).unwrap()).sum();
            assert!(top_sum * u64::from(n) >= k as u64 * dense.m() * w as u64);

            if k >= 2 {
                let tsize = rng.gen_range(1..=n.min(3) as usize);
                let anchors: Vec<u32> = rand::seq::index::sample(&mut rng, n as usize, tsize)
                    .into_iter()
                    .map(|v| v as u32)
                    .collect();
                let link = dense.link_set(&anchors).unwrap();
                assert_eq!(link, sparse.link_set(&anchors).unwrap());
                let members: Vec<Vec<u32>> = link.subsets().collect();
                let mut y: Vec<u32> = (0..(k - 1) as u32).collect();
                loop {
                    let disjoint = y.iter().all(|v| !anchors.contains(v));
                    let all_join = disjoint
                        && anchors.iter().all(|&x| {
                            let mut e = y.clone();
                            e.push(x);
                            edges.contains(&{
                                e.sort_unstable();
                                e
                            })
                        });
                    assert_eq!(members.contains(&y), all_join, "y={y:?} T={anchors:?}");
                    if !colex_successor(&mut y, n) {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn auto_policy_respects_budget() {
        let policy = BackendPolicy::Auto { budget_bits: 10 };
        let h = Hypergraph::complete_with(5, 2, policy).unwrap();
        assert_eq!(h.backend(), Backend::RankBitset);
        let h = Hypergraph::complete_with(6, 2, policy).unwrap();
        assert_eq!(h.backend(), Backend::SortedIndex);
        assert_eq!(h.m(), 15);
    }

    #[test]
    fn link_round_trips_to_hypergraph() {
        let h = Hypergraph::complete(6, 3).unwrap();
        let link = h.link_set(&[0, 5]).unwrap();
        let hp = link.into_hypergraph(h.policy()).unwrap();
        assert_eq!(hp.k(), 2);
        assert_eq!(hp.n(), 6);
        assert_eq!(hp.m(), 6);
        assert_eq!(hp.degree(0).unwrap(), 0);
        assert_eq!(hp.degree(2).unwrap(), 3);
    }
}
