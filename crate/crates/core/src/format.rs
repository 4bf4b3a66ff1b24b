//! Text formats for hypergraphs and witnesses.
//!
//! Hypergraph (`kuh 1`):
//!
//! ```text
//! kuh 1
//! <k> <n> <m>
//! <v_1> ... <v_k>      # m lines, ids strictly increasing, colex order
//! ```
//!
//! Witness (`kuw 1`):
//!
//! ```text
//! kuw 1
//! <k>
//! <size> <v_1> ... <v_size>   # one line per part, ids strictly increasing
//! ```
//!
//! Every line ends in `\n`; there is no trailing whitespace. Rendering is
//! canonical, so `render(parse(render(h))) == render(h)` byte for byte.
//! The parser also accepts edge lines in any order (they are re-sorted),
//! but rejects duplicates.

use std::io::{self, Write};

use thiserror::Error;

use crate::error::Error;
use crate::hypergraph::{BackendPolicy, Hypergraph};

pub const HYPERGRAPH_MAGIC: &str = "kuh 1";
pub const WITNESS_MAGIC: &str = "kuw 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: expected magic {expected:?}")]
    BadMagic { line: usize, expected: &'static str },
    #[error("line {line}: {msg}")]
    BadLine { line: usize, msg: String },
    #[error("header declares {declared} records, found {found}")]
    CountMismatch { declared: u64, found: u64 },
    #[error("line {line}: duplicate edge")]
    Duplicate { line: usize },
    #[error(transparent)]
    Graph(#[from] Error),
}

fn bad(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::BadLine {
        line,
        msg: msg.into(),
    }
}

fn numbers<T: std::str::FromStr>(line_no: usize, line: &str) -> Result<Vec<T>, FormatError> {
    line.split_ascii_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| bad(line_no, format!("{tok:?} is not a non-negative integer")))
        })
        .collect()
}

fn write_ids(out: &mut impl Write, ids: &[u32]) -> io::Result<()> {
    let mut first = true;
    for v in ids {
        if !first {
            out.write_all(b" ")?;
        }
        write!(out, "{v}")?;
        first = false;
    }
    out.write_all(b"\n")
}

pub fn write_hypergraph(out: &mut impl Write, h: &Hypergraph) -> io::Result<()> {
    writeln!(out, "{HYPERGRAPH_MAGIC}")?;
    writeln!(out, "{} {} {}", h.k(), h.n(), h.m())?;
    for edge in h.edges() {
        write_ids(out, &edge)?;
    }
    Ok(())
}

pub fn render_hypergraph(h: &Hypergraph) -> String {
    let mut buf = Vec::new();
    write_hypergraph(&mut buf, h).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn parse_hypergraph(text: &str, policy: BackendPolicy) -> Result<Hypergraph, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, HYPERGRAPH_MAGIC)) => {}
        _ => {
            return Err(FormatError::BadMagic {
                line: 1,
                expected: HYPERGRAPH_MAGIC,
            })
        }
    }
    let (hl, header) = lines
        .next()
        .ok_or_else(|| bad(2, "missing \"k n m\" header"))?;
    let [k, n, m]: [u64; 3] = numbers(hl, header)?
        .try_into()
        .map_err(|_| bad(hl, "header must be \"k n m\""))?;
    let n = u32::try_from(n).map_err(|_| bad(hl, "n does not fit in 32 bits"))?;
    let k = usize::try_from(k).map_err(|_| bad(hl, "k too large"))?;
    if k == 0 {
        return Err(bad(hl, "k must be at least 1"));
    }

    let mut edges: Vec<(Vec<u32>, usize)> = Vec::new();
    for (no, line) in lines {
        let ids: Vec<u32> = numbers(no, line)?;
        if ids.len() != k {
            return Err(bad(no, format!("expected {k} ids, found {}", ids.len())));
        }
        if !ids.windows(2).all(|w| w[0] < w[1]) {
            return Err(bad(no, "ids must be strictly increasing"));
        }
        if let Some(&v) = ids.last().filter(|&&v| v >= n) {
            return Err(bad(no, format!("vertex {v} out of range for n = {n}")));
        }
        edges.push((ids, no));
    }
    if edges.len() as u64 != m {
        return Err(FormatError::CountMismatch {
            declared: m,
            found: edges.len() as u64,
        });
    }
    // colex: compare from the largest element down
    edges.sort_by(|(a, _), (b, _)| a.iter().rev().cmp(b.iter().rev()));
    if let Some(w) = edges.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(FormatError::Duplicate {
            line: w[0].1.max(w[1].1),
        });
    }
    Ok(Hypergraph::build_with(
        n,
        k,
        edges.iter().map(|(e, _)| e),
        policy,
    )?)
}

pub fn write_witness(out: &mut impl Write, parts: &[Vec<u32>]) -> io::Result<()> {
    writeln!(out, "{WITNESS_MAGIC}")?;
    writeln!(out, "{}", parts.len())?;
    for part in parts {
        let mut line = Vec::with_capacity(part.len() + 1);
        line.push(part.len() as u32);
        line.extend_from_slice(part);
        write_ids(out, &line)?;
    }
    Ok(())
}

pub fn render_witness(parts: &[Vec<u32>]) -> String {
    let mut buf = Vec::new();
    write_witness(&mut buf, parts).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Parses a witness. Parts are not checked for mutual disjointness; that is
/// the verifier's job.
pub fn parse_witness(text: &str) -> Result<Vec<Vec<u32>>, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, WITNESS_MAGIC)) => {}
        _ => {
            return Err(FormatError::BadMagic {
                line: 1,
                expected: WITNESS_MAGIC,
            })
        }
    }
    let (kl, header) = lines.next().ok_or_else(|| bad(2, "missing part count"))?;
    let [k]: [u64; 1] = numbers(kl, header)?
        .try_into()
        .map_err(|_| bad(kl, "expected a single part count"))?;
    let mut parts = Vec::new();
    for (no, line) in lines {
        let mut ids: Vec<u32> = numbers(no, line)?;
        if ids.is_empty() {
            return Err(bad(no, "empty part line"));
        }
        let size = ids.remove(0);
        if ids.len() != size as usize {
            return Err(bad(
                no,
                format!("declared size {size}, found {} ids", ids.len()),
            ));
        }
        if !ids.windows(2).all(|w| w[0] < w[1]) {
            return Err(bad(no, "ids must be strictly increasing"));
        }
        parts.push(ids);
    }
    if parts.len() as u64 != k {
        return Err(FormatError::CountMismatch {
            declared: k,
            found: parts.len() as u64,
        });
    }
    Ok(parts)
}
