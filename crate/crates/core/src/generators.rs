//! Seeded instance generators.
//!
//! Binomial instances decide each slot from a counter-based hash of
//! `(seed, colex rank)`, so membership of any k-set can be recomputed in
//! isolation. Exact-count and planted instances draw from ChaCha8, which is
//! reproducible across platforms.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::colex_successor;
use crate::error::{Error, Result};
use crate::hypergraph::{BackendPolicy, Hypergraph, StoreBuilder};

/// An exact probability `num / den` with `num <= den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Probability {
    num: u64,
    den: u64,
}

impl Probability {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::invalid(format!("{num}/{den} is not a probability")));
        }
        Ok(Probability { num, den })
    }

    pub fn one() -> Self {
        Probability { num: 1, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Whether a uniform 64-bit word lands below the probability.
    #[inline]
    fn admits(&self, word: u64) -> bool {
        u128::from(word) * u128::from(self.den) < u128::from(self.num) << 64
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parses `a/b` or a decimal such as `0.35`, exactly.
impl FromStr for Probability {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse probability {raw:?}"));
        let raw = raw.trim();
        if let Some((a, b)) = raw.split_once('/') {
            let num = a.trim().parse().map_err(|_| bad())?;
            let den = b.trim().parse().map_err(|_| bad())?;
            return Probability::new(num, den);
        }
        let (int, frac) = raw.split_once('.').unwrap_or((raw, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Probability::new(num, den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenKind {
    Complete,
    Empty,
    Binomial {
        p: Probability,
    },
    ExactM {
        m: u64,
    },
    /// Complete hypergraph minus `noise_removals` random edges that are not
    /// transversals of the planted parts `[i*part_size, (i+1)*part_size)`.
    Planted {
        part_size: u32,
        noise_removals: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: u32,
    pub k: usize,
    pub seed: u64,
}

impl GenSpec {
    /// Assembles a spec from loosely typed options, rejecting options that
    /// do not belong to `kind`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_options(
        kind: &str,
        n: u32,
        k: usize,
        p: Option<Probability>,
        m: Option<u64>,
        part_size: Option<u32>,
        noise_removals: Option<u64>,
        seed: u64,
    ) -> Result<Self> {
        let given = [
            ("p", p.is_some()),
            ("m", m.is_some()),
            ("part-size", part_size.is_some()),
            ("noise", noise_removals.is_some()),
        ];
        let (kind, allowed): (GenKind, &[&str]) = match kind {
            "complete" => (GenKind::Complete, &[]),
            "empty" => (GenKind::Empty, &[]),
            "binomial" => (
                GenKind::Binomial {
                    p: p.ok_or_else(|| Error::invalid("binomial needs p"))?,
                },
                &["p"],
            ),
            "exact-m" | "exact_m" => (
                GenKind::ExactM {
                    m: m.ok_or_else(|| Error::invalid("exact-m needs m"))?,
                },
                &["m"],
            ),
            "planted" => (
                GenKind::Planted {
                    part_size: part_size
                        .ok_or_else(|| Error::invalid("planted needs part-size"))?,
                    noise_removals: noise_removals.unwrap_or(0),
                },
                &["part-size", "noise"],
            ),
            other => return Err(Error::invalid(format!("unknown generator kind {other:?}"))),
        };
        if let Some((name, _)) = given
            .iter()
            .find(|(name, set)| *set && !allowed.contains(name))
        {
            return Err(Error::invalid(format!(
                "option {name} does not apply to this kind"
            )));
        }
        Ok(GenSpec { kind, n, k, seed })
    }
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// The pseudorandom word assigned to slot `rank` under `seed`.
#[inline]
pub fn slot_word(seed: u64, rank: u64) -> u64 {
    mix64(mix64(seed ^ GOLDEN).wrapping_add(rank.wrapping_add(1).wrapping_mul(GOLDEN)))
}

fn for_each_slot(
    builder: &mut StoreBuilder,
    n: u32,
    k: usize,
    mut keep: impl FnMut(u64, &[u32]) -> bool,
) {
    if (n as usize) < k {
        return;
    }
    let mut edge: Vec<u32> = (0..k as u32).collect();
    let mut rank = 0u64;
    loop {
        if keep(rank, &edge) {
            builder.push(rank, &edge);
        }
        rank += 1;
        if !colex_successor(&mut edge, n) {
            break;
        }
    }
}

/// `count` distinct values from `0..total`, by a partial Fisher-Yates over a
/// virtual array.
fn sample_distinct(rng: &mut ChaCha8Rng, total: u64, count: u64) -> Vec<u64> {
    let mut swapped: HashMap<u64, u64> = HashMap::new();
    let mut out = Vec::with_capacity(count as usize);
    for i in 0..count {
        let j = rng.gen_range(i..total);
        let at_j = *swapped.get(&j).unwrap_or(&j);
        let at_i = *swapped.get(&i).unwrap_or(&i);
        swapped.insert(j, at_i);
        out.push(at_j);
    }
    out.sort_unstable();
    out
}

pub fn generate(spec: &GenSpec) -> Result<Hypergraph> {
    generate_with(spec, BackendPolicy::default())
}

pub fn generate_with(spec: &GenSpec, policy: BackendPolicy) -> Result<Hypergraph> {
    let GenSpec { n, k, seed, .. } = *spec;
    if k == 0 || (n as usize) < k {
        return Err(Error::invalid(format!(
            "generators need n >= k >= 1, got n={n} k={k}"
        )));
    }
    let mut builder = StoreBuilder::new(n, k, policy)?;
    let slots = builder.slots();
    match &spec.kind {
        GenKind::Complete => for_each_slot(&mut builder, n, k, |_, _| true),
        GenKind::Empty => {}
        GenKind::Binomial { p } => for_each_slot(&mut builder, n, k, |rank, _| {
            p.admits(slot_word(seed, rank))
        }),
        GenKind::ExactM { m } => {
            if *m > slots {
                return Err(Error::invalid(format!(
                    "m = {m} exceeds binom({n}, {k}) = {slots}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edge = vec![0; k];
            for rank in sample_distinct(&mut rng, slots, *m) {
                builder.table().unrank_into(rank, &mut edge);
                builder.push(rank, &edge);
            }
        }
        GenKind::Planted {
            part_size,
            noise_removals,
        } => {
            let ps = *part_size;
            if ps == 0 || u64::from(ps) * k as u64 > u64::from(n) {
                return Err(Error::invalid(format!(
                    "{k} parts of size {ps} do not fit in {n} vertices"
                )));
            }
            let planted = u64::from(ps).pow(k as u32);
            let spare = slots - planted;
            if *noise_removals > spare {
                return Err(Error::invalid(format!(
                    "cannot remove {noise_removals} of {spare} non-witness edges"
                )));
            }
            let is_transversal =
                |edge: &[u32]| edge.iter().enumerate().all(|(i, &v)| v / ps == i as u32);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut removed = HashSet::new();
            let mut probe = vec![0; k];
            while (removed.len() as u64) < *noise_removals {
                let rank = rng.gen_range(0..slots);
                builder.table().unrank_into(rank, &mut probe);
                if !is_transversal(&probe) {
                    removed.insert(rank);
                }
            }
            for_each_slot(&mut builder, n, k, |rank, _| !removed.contains(&rank));
        }
    }
    Ok(builder.finish())
}

/// The planted parts of a planted spec.
pub fn planted_parts(spec: &GenSpec) -> Option<Vec<Vec<u32>>> {
    match spec.kind {
        GenKind::Planted { part_size, .. } => Some(
            (0..spec.k as u32)
                .map(|i| (i * part_size..(i + 1) * part_size).collect())
                .collect(),
        ),
        _ => None,
    }
}
