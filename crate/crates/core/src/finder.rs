//! Recursive extraction of a complete k-partite subgraph.
//!
//! Each level picks the `w` highest-degree vertices `W`, scans the
//! `t`-subsets `T` of `W` in colex order and takes the first whose link set
//! `S` has at least `s` members. `S` is a (k-1)-uniform hypergraph on the
//! same vertex set; the parts found in it, followed by `T`, span a complete
//! k-partite subgraph of the input. Uniformity 1 returns its edge set as a
//! single part.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combinatorics::subsets;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::parameters::{compute_s, compute_w, derive_params, Density, ParamSet};

/// Disjoint vertex sets `(V_1, ..., V_k)`, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteWitness {
    parts: Vec<Vec<u32>>,
    source_k: usize,
}

impl PartiteWitness {
    pub fn new(parts: Vec<Vec<u32>>) -> Self {
        let source_k = parts.len();
        PartiteWitness { parts, source_k }
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Vec<u32>> {
        self.parts
    }

    pub fn source_k(&self) -> usize {
        self.source_k
    }

    pub fn min_part_size(&self) -> usize {
        self.parts.iter().map(Vec::len).min().unwrap_or(0)
    }
}

/// What a level did after computing its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStep {
    pub t: u64,
    /// Size of the candidate pool actually used.
    pub w: usize,
    pub s: BigUint,
    pub chosen: Vec<u32>,
    pub link_size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLevel {
    pub k: usize,
    pub n: u32,
    pub m: u64,
    pub density: Density,
    /// `None` for the uniformity-1 base and for the single-edge fallback.
    pub step: Option<SearchStep>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecursionTrace {
    pub levels: Vec<TraceLevel>,
    /// Top-level `t < 2`: the witness is one edge.
    pub fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Natural,
    Forced(u64),
}

/// Runs the search with the part size derived from the input.
///
/// When that size is below 2 the witness is the lexicographically smallest
/// edge, split into singletons.
pub fn find_partite(h: &Hypergraph) -> Result<(PartiteWitness, RecursionTrace)> {
    if h.m() == 0 {
        return Err(Error::NoEdges);
    }
    let mut trace = RecursionTrace::default();
    if h.k() >= 2 {
        let params = derive_params(h)?;
        if params.t < 2 {
            let edge = h.edges().min().expect("m >= 1");
            trace.levels.push(level(h, None)?);
            trace.fallback = true;
            let parts = edge.into_iter().map(|v| vec![v]).collect();
            return Ok((PartiteWitness::new(parts), trace));
        }
    }
    let parts = search(h, Mode::Natural, None, &mut trace)?;
    Ok((PartiteWitness::new(parts), trace))
}

/// Runs the search with `forced_t` as the part size at every level. `w`
/// and `s` follow from `forced_t` and each level's density; `w` is capped
/// at `n`. Failing to find a witness is an ordinary outcome here.
pub fn find_partite_forced(
    h: &Hypergraph,
    forced_t: u64,
) -> Result<(PartiteWitness, RecursionTrace)> {
    if forced_t == 0 {
        return Err(Error::invalid("forced part size must be at least 1"));
    }
    if h.m() == 0 {
        return Err(Error::NoEdges);
    }
    let mut trace = RecursionTrace::default();
    let parts = search(h, Mode::Forced(forced_t), None, &mut trace)?;
    Ok((PartiteWitness::new(parts), trace))
}

/// Truncates every part to its `t` smallest vertices.
pub fn trim_balanced(witness: &PartiteWitness, t: usize) -> Result<PartiteWitness> {
    if let Some(small) = witness.parts.iter().find(|p| p.len() < t) {
        return Err(Error::invalid(format!(
            "part of size {} cannot be trimmed to {t}",
            small.len()
        )));
    }
    Ok(PartiteWitness {
        parts: witness.parts.iter().map(|p| p[..t].to_vec()).collect(),
        source_k: witness.source_k,
    })
}

fn level(h: &Hypergraph, step: Option<SearchStep>) -> Result<TraceLevel> {
    Ok(TraceLevel {
        k: h.k(),
        n: h.n(),
        m: h.m(),
        density: h.density()?,
        step,
    })
}

fn level_params(h: &Hypergraph, mode: Mode) -> Result<ParamSet> {
    match mode {
        Mode::Natural => derive_params(h),
        Mode::Forced(t) => {
            let d = h.density()?;
            let n = u64::from(h.n());
            Ok(ParamSet {
                n,
                m: h.m().into(),
                k: h.k(),
                w: compute_w(t, &d)?,
                s: compute_s(n, h.k(), &d, t)?,
                d,
                t,
            })
        }
    }
}

fn search(
    h: &Hypergraph,
    mode: Mode,
    parent_t: Option<u64>,
    trace: &mut RecursionTrace,
) -> Result<Vec<Vec<u32>>> {
    if h.k() == 1 {
        trace.levels.push(level(h, None)?);
        return Ok(vec![h.edge_ranks().map(|r| r as u32).collect()]);
    }

    let params = level_params(h, mode)?;
    let t = params.t;
    if let (Mode::Natural, Some(parent_t)) = (mode, parent_t) {
        if t < 2 || t < parent_t {
            return Err(Error::invariant(format!(
                "recomputed t = {t} at k = {} fell below parent t = {parent_t}",
                h.k()
            )));
        }
    }
    let not_found = || Error::WitnessNotFound { k: h.k(), t };

    let w = match (mode, params.w_usize()) {
        (Mode::Natural, Some(w)) if w <= h.n() as usize => w,
        (Mode::Natural, _) => {
            return Err(Error::invariant(format!(
                "w = {} exceeds n = {}",
                params.w,
                h.n()
            )))
        }
        (Mode::Forced(_), w) => w.map_or(h.n() as usize, |w| w.min(h.n() as usize)),
    };
    let t_usize = t.to_usize().filter(|&t| t <= w).ok_or_else(not_found)?;

    // with k = 2 the link set itself becomes a part, so it must reach t
    let mut threshold = params.s.clone();
    if h.k() == 2 && threshold < BigUint::from(t) {
        if mode == Mode::Natural {
            return Err(Error::invariant(format!(
                "s = {} is not above t = {t} at k = 2",
                params.s
            )));
        }
        threshold = BigUint::from(t);
    }

    let pool = h.top_degree_vertices(w)?;
    let mut cursor = subsets(&pool, t_usize)?;
    while let Some(anchors) = cursor.advance() {
        let link = h.link_set(anchors)?;
        if BigUint::from(link.len()) < threshold {
            continue;
        }
        let chosen = anchors.to_vec();
        trace.levels.push(level(
            h,
            Some(SearchStep {
                t,
                w,
                s: params.s.clone(),
                chosen: chosen.clone(),
                link_size: link.len() as u64,
            }),
        )?);
        let inner = link.into_hypergraph(h.policy())?;
        if !params.d.dominates_quarter_power(&inner.density()?, t) {
            return Err(Error::invariant(format!(
                "link density {} below (d/4)^{t} for d = {}",
                inner.density()?,
                params.d
            )));
        }
        let mut parts = search(&inner, mode, Some(t), trace)?;
        parts.push(chosen);
        return Ok(parts);
    }

    match mode {
        Mode::Natural => Err(Error::invariant(format!(
            "no {t}-subset of the top-{w} vertices has a link set of size >= {}",
            params.s
        ))),
        Mode::Forced(_) => Err(not_found()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::verify_witness;

    #[test]
    fn complete_4096_trace_by_hand() {
        let h = Hypergraph::complete(4096, 2).unwrap();
        let (wit, trace) = find_partite(&h).unwrap();
        let rest: Vec<u32> = (3..4096).collect();
        assert_eq!(wit.parts(), &[rest, vec![0, 1, 2]]);
        assert!(!trace.fallback);
        assert_eq!(trace.levels.len(), 2);
        let step = trace.levels[0].step.as_ref().unwrap();
        assert_eq!(step.t, 3);
        assert_eq!(step.w, 12);
        assert_eq!(step.s, 64u32.into());
        assert_eq!(step.chosen, vec![0, 1, 2]);
        assert_eq!(step.link_size, 4093);
        assert_eq!(trace.levels[1].k, 1);
        assert_eq!(trace.levels[1].m, 4093);

        let trimmed = trim_balanced(&wit, 3).unwrap();
        assert_eq!(trimmed.parts(), &[vec![3, 4, 5], vec![0, 1, 2]]);
        assert!(verify_witness(&h, trimmed.parts()).unwrap());
    }

    #[test]
    fn single_edge_falls_back() {
        let h = Hypergraph::build(4, 2, [[0, 1]]).unwrap();
        let (wit, trace) = find_partite(&h).unwrap();
        assert_eq!(wit.parts(), &[vec![0], vec![1]]);
        assert!(trace.fallback);
    }

    #[test]
    fn fallback_takes_lexicographically_smallest_edge() {
        // colex order would give {1,2} first; lexicographic gives {0,3}
        let h = Hypergraph::build(4, 2, [[1, 2], [0, 3]]).unwrap();
        let (wit, _) = find_partite(&h).unwrap();
        assert_eq!(wit.parts(), &[vec![0], vec![3]]);
    }

    #[test]
    fn uniformity_one_returns_edge_set() {
        let h = Hypergraph::build(3, 1, [[0], [2]]).unwrap();
        let (wit, trace) = find_partite(&h).unwrap();
        assert_eq!(wit.parts(), &[vec![0, 2]]);
        assert_eq!(trace.levels.len(), 1);
    }

    #[test]
    fn no_edges_is_an_error() {
        let h = Hypergraph::empty(5, 2).unwrap();
        assert_eq!(find_partite(&h).unwrap_err(), Error::NoEdges);
        assert_eq!(find_partite_forced(&h, 2).unwrap_err(), Error::NoEdges);
    }

    #[test]
    fn forced_on_complete_3_graph() {
        let h = Hypergraph::complete(60, 3).unwrap();
        let (wit, trace) = find_partite_forced(&h, 2).unwrap();
        assert_eq!(wit.parts().len(), 3);
        assert!(wit.min_part_size() >= 2);
        assert!(verify_witness(&h, wit.parts()).unwrap());
        let ks: Vec<usize> = trace.levels.iter().map(|l| l.k).collect();
        assert_eq!(ks, vec![3, 2, 1]);
    }

    #[test]
    fn forced_failure_is_reported() {
        let h = Hypergraph::build(4, 2, [[0, 1]]).unwrap();
        assert_eq!(
            find_partite_forced(&h, 2).unwrap_err(),
            Error::WitnessNotFound { k: 2, t: 2 }
        );
        assert!(find_partite_forced(&h, 0).is_err());
    }

    #[test]
    fn forced_k33_in_k8() {
        let h = Hypergraph::complete(8, 2).unwrap();
        let (wit, _) = find_partite_forced(&h, 3).unwrap();
        let wit = trim_balanced(&wit, 3).unwrap();
        assert_eq!(wit.parts(), &[vec![3, 4, 5], vec![0, 1, 2]]);
        assert!(verify_witness(&h, wit.parts()).unwrap());
    }

    #[test]
    fn trim_examples() {
        let w = PartiteWitness::new(vec![vec![3, 4, 5, 6], vec![0, 1, 2]]);
        assert_eq!(
            trim_balanced(&w, 3).unwrap().parts(),
            &[vec![3, 4, 5], vec![0, 1, 2]]
        );
        let w = PartiteWitness::new(vec![vec![0], vec![1]]);
        assert_eq!(trim_balanced(&w, 1).unwrap(), w);
        let w = PartiteWitness::new(vec![vec![0, 1], vec![2]]);
        assert!(matches!(
            trim_balanced(&w, 2),
            Err(Error::InvalidArguments(_))
        ));
    }

    #[test]
    fn runs_are_deterministic() {
        let h = Hypergraph::complete(300, 2).unwrap();
        assert_eq!(find_partite(&h).unwrap(), find_partite(&h).unwrap());
    }
}
