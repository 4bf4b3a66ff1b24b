//! Target part size `t`, candidate pool size `w` and link threshold `s`.
//!
//! With density `d = m / N`, `N = binom(n, k)`:
//!
//! * `t = floor((ln n / ln(16/d))^(1/(k-1)))`
//! * `w = ceil(4t / d)`
//! * `s = ceil((d/4)^t * binom(n, k-1))`
//!
//! `w` and `s` are rational, so they are computed exactly. For `t`, the
//! condition `t^(k-1) * ln(16/d) <= ln n` is equivalent to the integer
//! inequality `(16N)^(t^(k-1)) <= n * m^(t^(k-1))`, which decides every
//! candidate exactly; floating point only proposes the starting candidate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::{binomial, ceil_div};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// An exact, unreduced ratio `edges / slots`. Equality and ordering
/// compare values, so `2/4 == 1/2`.
#[derive(Debug, Clone)]
pub struct Density {
    edges: BigUint,
    slots: BigUint,
}

impl Density {
    /// `slots` must be nonzero.
    pub fn new(edges: BigUint, slots: BigUint) -> Self {
        assert!(!slots.is_zero(), "density over zero slots");
        Density { edges, slots }
    }

    pub fn one() -> Self {
        Density::new(BigUint::one(), BigUint::one())
    }

    pub fn edges(&self) -> &BigUint {
        &self.edges
    }

    pub fn slots(&self) -> &BigUint {
        &self.slots
    }

    pub fn is_zero(&self) -> bool {
        self.edges.is_zero()
    }

    pub fn exceeds_one(&self) -> bool {
        self.edges > self.slots
    }

    pub fn to_f64(&self) -> f64 {
        ratio_f64(&self.edges, &self.slots)
    }

    /// Exact comparison against `(self / 4)^t`, i.e. `other >= (self/4)^t`.
    pub fn dominates_quarter_power(&self, other: &Density, t: u64) -> bool {
        let e = t as u32;
        let lhs = other.edges.clone() * (self.slots.clone() * 4u32).pow(e);
        let rhs = self.edges.pow(e) * &other.slots;
        lhs >= rhs
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.edges * &other.slots).cmp(&(&other.edges * &self.slots))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.edges, self.slots)
    }
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    // ln-based so that huge operands do not overflow
    (ln_big(num) - ln_big(den)).exp()
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn check_density(d: &Density) -> Result<()> {
    if d.is_zero() {
        return Err(Error::NoEdges);
    }
    if d.exceeds_one() {
        return Err(Error::InvalidDensity {
            num: d.edges.to_string(),
            den: d.slots.to_string(),
        });
    }
    Ok(())
}

/// Whether `t^(k-1) * ln(16/d) <= ln n`, decided in integers.
fn t_feasible(n: u64, d: &Density, k: usize, t: u64) -> bool {
    let Some(e) = t.checked_pow(k as u32 - 1) else {
        return false;
    };
    if e == 0 {
        return true;
    }
    // 16/d >= 16, so e > log_16 n rules the candidate out before any big power
    if (e as f64) * 16f64.ln() > (n as f64).ln() + 1.0 {
        return false;
    }
    let e = e as u32;
    let lhs = (d.slots.clone() * 16u32).pow(e);
    let rhs = d.edges.pow(e) * n;
    lhs <= rhs
}

/// Largest `t` with `t^(k-1) * ln(16/d) <= ln n`.
pub fn compute_t(n: u64, d: &Density, k: usize) -> Result<u64> {
    if k < 2 {
        return Err(Error::invalid("t is defined for uniformity k >= 2"));
    }
    if n == 0 {
        return Err(Error::invalid("t needs at least one vertex"));
    }
    check_density(d)?;
    let ln_ratio = 16f64.ln() + ln_big(&d.slots) - ln_big(&d.edges);
    let guess = ((n as f64).ln() / ln_ratio).powf(1.0 / (k - 1) as f64);
    let mut t = if guess.is_finite() && guess >= 0.0 {
        guess.floor() as u64
    } else {
        0
    };
    while t > 0 && !t_feasible(n, d, k, t) {
        t -= 1;
    }
    while t_feasible(n, d, k, t + 1) {
        t += 1;
    }
    Ok(t)
}

/// `ceil(4t / d)`.
pub fn compute_w(t: u64, d: &Density) -> Result<BigUint> {
    check_density(d)?;
    Ok(ceil_div(&(d.slots.clone() * 4u32 * t), &d.edges))
}

/// `ceil((d/4)^t * binom(n, k-1))`.
pub fn compute_s(n: u64, k: usize, d: &Density, t: u64) -> Result<BigUint> {
    if k < 1 {
        return Err(Error::invalid("s is defined for uniformity k >= 1"));
    }
    check_density(d)?;
    let e = u32::try_from(t).map_err(|_| Error::invalid("t too large"))?;
    let num = d.edges.pow(e) * binomial(n, k as u64 - 1);
    let den = (d.slots.clone() * 4u32).pow(e);
    Ok(ceil_div(&num, &den))
}

/// Parameters of one search level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    pub n: u64,
    pub m: BigUint,
    pub k: usize,
    pub d: Density,
    pub t: u64,
    pub w: BigUint,
    pub s: BigUint,
}

impl ParamSet {
    /// `w` as a machine size, if it fits.
    pub fn w_usize(&self) -> Option<usize> {
        self.w.to_usize()
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} m={} k={} d={} t={} w={} s={}",
            self.n, self.m, self.k, self.d, self.t, self.w, self.s
        )
    }
}

/// Parameters from raw counts, with `slots = binom(n, k)`.
pub fn params_for(n: u64, m: &BigUint, k: usize) -> Result<ParamSet> {
    if k < 2 {
        return Err(Error::invalid("parameters are defined for k >= 2"));
    }
    if m.is_zero() {
        return Err(Error::NoEdges);
    }
    let slots = binomial(n, k as u64);
    if slots.is_zero() {
        return Err(Error::invalid(format!("no {k}-sets among {n} vertices")));
    }
    let d = Density::new(m.clone(), slots);
    let t = compute_t(n, &d, k)?;
    let w = compute_w(t, &d)?;
    let s = compute_s(n, k, &d, t)?;
    let params = ParamSet {
        n,
        m: m.clone(),
        k,
        d,
        t,
        w,
        s,
    };
    if params.t >= 2 {
        if params.w > BigUint::from(n) {
            return Err(Error::invariant(format!(
                "w = {} exceeds n = {n} with t = {}",
                params.w, params.t
            )));
        }
        if params.s > binomial(n, k as u64 - 1) {
            return Err(Error::invariant(format!(
                "s = {} exceeds binom({n}, {})",
                params.s,
                k - 1
            )));
        }
    }
    Ok(params)
}

/// Parameters of a hypergraph with at least one edge and `k >= 2`.
pub fn derive_params(h: &Hypergraph) -> Result<ParamSet> {
    if h.m() == 0 {
        return Err(Error::NoEdges);
    }
    params_for(u64::from(h.n()), &BigUint::from(h.m()), h.k())
}

/// `(d/4)^t` as an exact density, for trace checks.
pub fn quarter_power(d: &Density, t: u64) -> Density {
    let e = t as u32;
    Density::new(d.edges.pow(e), (d.slots.clone() * 4u32).pow(e))
}
