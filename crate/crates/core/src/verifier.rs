//! Witness verification and brute-force ground truth.
//!
//! Nothing here shares code paths with the finder: verification probes
//! every transversal, and the partite oracle works on a plain set of edge
//! tuples with its own subset enumeration.

use std::collections::HashSet;
use std::fmt;

use crate::combinatorics::subsets;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Why a candidate witness is not a complete k-partite subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyPart {
        part: usize,
    },
    VertexOutOfRange {
        vertex: u32,
    },
    Overlap {
        vertex: u32,
        first: usize,
        second: usize,
    },
    MissingEdge(Vec<u32>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyPart { part } => write!(f, "part {part} is empty"),
            Violation::VertexOutOfRange { vertex } => {
                write!(f, "vertex {vertex} is not in the hypergraph")
            }
            Violation::Overlap {
                vertex,
                first,
                second,
            } => write!(f, "vertex {vertex} appears in parts {first} and {second}"),
            Violation::MissingEdge(e) => {
                let ids: Vec<String> = e.iter().map(u32::to_string).collect();
                write!(f, "missing edge {}", ids.join(" "))
            }
        }
    }
}

/// First violation found, scanning disjointness before transversals.
pub fn check_witness(h: &Hypergraph, parts: &[Vec<u32>]) -> Result<Option<Violation>> {
    if parts.len() != h.k() {
        return Err(Error::invalid(format!(
            "witness has {} parts, hypergraph is {}-uniform",
            parts.len(),
            h.k()
        )));
    }
    let mut owner = vec![usize::MAX; h.n() as usize];
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Ok(Some(Violation::EmptyPart { part: i }));
        }
        for &v in part {
            let Some(slot) = owner.get_mut(v as usize) else {
                return Ok(Some(Violation::VertexOutOfRange { vertex: v }));
            };
            if *slot != usize::MAX {
                return Ok(Some(Violation::Overlap {
                    vertex: v,
                    first: *slot,
                    second: i,
                }));
            }
            *slot = i;
        }
    }

    // odometer over V_1 x ... x V_k
    let mut idx = vec![0usize; parts.len()];
    let mut tuple = vec![0u32; parts.len()];
    loop {
        for (slot, (part, &i)) in tuple.iter_mut().zip(parts.iter().zip(&idx)) {
            *slot = part[i];
        }
        tuple.sort_unstable();
        if !h.contains_sorted(&tuple) {
            return Ok(Some(Violation::MissingEdge(tuple)));
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(None);
            }
            idx[j] += 1;
            if idx[j] < parts[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Whether `parts` are nonempty, pairwise disjoint and every transversal is
/// an edge of `h`.
pub fn verify_witness(h: &Hypergraph, parts: &[Vec<u32>]) -> Result<bool> {
    Ok(check_witness(h, parts)?.is_none())
}

/// A bipartite graph between `U` (rows) and `W` (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KstInstance {
    u: usize,
    w: usize,
    /// One `u`-bit neighbourhood bitset per column.
    columns: Vec<Vec<u64>>,
    z: u64,
}

impl KstInstance {
    pub fn from_fn(u: usize, w: usize, adjacent: impl Fn(usize, usize) -> bool) -> Self {
        let words = u.div_ceil(64);
        let mut columns = vec![vec![0u64; words]; w];
        let mut z = 0;
        for (x, col) in columns.iter_mut().enumerate() {
            for y in 0..u {
                if adjacent(y, x) {
                    col[y / 64] |= 1 << (y % 64);
                    z += 1;
                }
            }
        }
        KstInstance { u, w, columns, z }
    }

    /// Columns given as bitmasks over at most 64 rows.
    pub fn from_column_masks(u: usize, masks: &[u64]) -> Self {
        assert!(u <= 64, "mask form holds at most 64 rows");
        let keep = if u == 64 { u64::MAX } else { (1u64 << u) - 1 };
        let columns: Vec<Vec<u64>> = masks.iter().map(|&m| vec![m & keep]).collect();
        let z = columns.iter().map(|c| u64::from(c[0].count_ones())).sum();
        KstInstance {
            u,
            w: masks.len(),
            columns,
            z,
        }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn adjacent(&self, y: usize, x: usize) -> bool {
        self.columns[x][y / 64] >> (y % 64) & 1 == 1
    }
}

/// `(s-1)^(1/t) (w-t+1) u^(1-1/t) + (t-1) u`: more edges than this force a
/// complete `B[S, T]` with `|S| = s`, `|T| = t`.
pub fn kst_threshold(u: u64, w: u64, s: u64, t: u64) -> Result<f64> {
    if s < 1 || t < 1 || u < s || w < t {
        return Err(Error::invalid(format!(
            "threshold needs u >= s >= 1 and w >= t >= 1, got u={u} w={w} s={s} t={t}"
        )));
    }
    let (u, w, s, t) = (u as f64, w as f64, s as f64, t as f64);
    Ok((s - 1.0).powf(1.0 / t) * (w - t + 1.0) * u.powf(1.0 - 1.0 / t) + (t - 1.0) * u)
}

/// `T ⊆ W` and `S ⊆ U` with every pair adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biclique {
    pub t_side: Vec<usize>,
    pub s_side: Vec<usize>,
}

/// Colex-first `T` of size `t` whose common neighbourhood has at least `s`
/// rows; `S` is the `s` smallest rows of it.
pub fn exists_biclique_bruteforce(b: &KstInstance, s: usize, t: usize) -> Result<Option<Biclique>> {
    if s > b.u || t > b.w {
        return Err(Error::invalid(format!(
            "need s <= u and t <= w, got s={s} u={} t={t} w={}",
            b.u, b.w
        )));
    }
    let cols: Vec<u32> = (0..b.w as u32).collect();
    let words = b.u.div_ceil(64);
    let mut common = vec![0u64; words];
    let mut cursor = subsets(&cols, t)?;
    while let Some(ts) = cursor.advance() {
        common.iter_mut().for_each(|c| *c = u64::MAX);
        for &x in ts {
            for (c, col) in common.iter_mut().zip(&b.columns[x as usize]) {
                *c &= col;
            }
        }
        if let Some(last) = common.last_mut() {
            if !b.u.is_multiple_of(64) {
                *last &= (1u64 << (b.u % 64)) - 1;
            }
        }
        let size: u32 = common.iter().map(|c| c.count_ones()).sum();
        if size as usize >= s {
            let s_side = (0..b.u)
                .filter(|&y| common[y / 64] >> (y % 64) & 1 == 1)
                .take(s)
                .collect();
            return Ok(Some(Biclique {
                t_side: ts.iter().map(|&x| x as usize).collect(),
                s_side,
            }));
        }
    }
    Ok(None)
}

/// The bipartite graph between (k-1)-sets `y` (by colex rank) and `pool`,
/// with `y ~ x` iff `y ∪ {x}` is an edge.
pub fn build_kst_instance(h: &Hypergraph, pool: &[u32]) -> Result<KstInstance> {
    if h.k() < 2 {
        return Err(Error::invalid("KST instances need uniformity at least 2"));
    }
    if let Some(&v) = pool.iter().find(|&&v| v >= h.n()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: h.n(),
        });
    }
    let sub = h.k() - 1;
    let slots = h.table().get(h.n(), sub) as usize;
    let table = h.table();
    Ok(KstInstance::from_fn(slots, pool.len(), |y, x| {
        let mut e = table.unrank(y as u64, sub);
        let v = pool[x];
        if e.contains(&v) {
            return false;
        }
        e.push(v);
        e.sort_unstable();
        h.contains_sorted(&e)
    }))
}

/// Largest `n` a brute-force partite search accepts, per uniformity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceCaps {
    pub k1: u32,
    pub k2: u32,
    pub k3: u32,
    pub higher: u32,
}

impl Default for BruteForceCaps {
    fn default() -> Self {
        BruteForceCaps {
            k1: 64,
            k2: 12,
            k3: 10,
            higher: 8,
        }
    }
}

impl BruteForceCaps {
    pub fn cap(&self, k: usize) -> u32 {
        match k {
            1 => self.k1,
            2 => self.k2,
            3 => self.k3,
            _ => self.higher,
        }
    }
}

pub fn max_balanced_partite_bruteforce(h: &Hypergraph) -> Result<u64> {
    max_balanced_partite_bruteforce_with(h, BruteForceCaps::default())
}

/// Largest `t` such that some `k` disjoint `t`-sets span a complete
/// k-partite subgraph (0 for an edgeless hypergraph).
pub fn max_balanced_partite_bruteforce_with(h: &Hypergraph, caps: BruteForceCaps) -> Result<u64> {
    let cap = caps.cap(h.k());
    if h.n() > cap {
        return Err(Error::InstanceTooLarge {
            n: h.n(),
            k: h.k(),
            cap,
        });
    }
    let edges: HashSet<Vec<u32>> = h.edges().collect();
    let mut best = 0;
    for t in 1..=(h.n() as usize / h.k()) {
        if !complete_partite_exists(&edges, h.k(), h.n(), t) {
            break;
        }
        best = t as u64;
    }
    Ok(best)
}

/// Lexicographic t-subsets of `0..n`, depth-first.
fn each_subset(n: u32, t: usize, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    fn go(
        start: u32,
        n: u32,
        t: usize,
        acc: &mut Vec<u32>,
        f: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if acc.len() == t {
            return f(acc);
        }
        for v in start..n {
            acc.push(v);
            if go(v + 1, n, t, acc, f) {
                return true;
            }
            acc.pop();
        }
        false
    }
    go(0, n, t, &mut Vec::with_capacity(t), f)
}

/// Whether `edges` (k-sets) contain k disjoint t-sets spanning a complete
/// k-partite subgraph. Chooses the last part, passes to its link, recurses.
fn complete_partite_exists(edges: &HashSet<Vec<u32>>, k: usize, n: u32, t: usize) -> bool {
    if k == 1 {
        return edges.len() >= t;
    }
    let touched: HashSet<u32> = edges.iter().flatten().copied().collect();
    each_subset(n, t, &mut |part| {
        if !part.iter().all(|v| touched.contains(v)) {
            return false;
        }
        let link: HashSet<Vec<u32>> = edges
            .iter()
            .filter(|e| e.contains(&part[0]))
            .map(|e| {
                e.iter()
                    .copied()
                    .filter(|&v| v != part[0])
                    .collect::<Vec<u32>>()
            })
            .filter(|y| {
                y.iter().all(|v| !part.contains(v))
                    && part[1..].iter().all(|&x| {
                        let mut e = y.clone();
                        e.push(x);
                        e.sort_unstable();
                        edges.contains(&e)
                    })
            })
            .collect();
        link.len() >= t && complete_partite_exists(&link, k - 1, n, t)
    })
}
