//! Constructions of k-limited-access matrices.
//!
//! Every construction returns a [`CoverScheme`]: the matrix `A_k` together
//! with, for each target, the indices of at most `k` rows of `A_k` whose sum
//! is that target.

mod branch;
mod chain;
mod scheme1;
mod scr;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Position, Result};
use crate::gf2::{content_lines, parse_header, parse_row, BitMatrix, BitVec};

pub use branch::{branch, BranchOptions, Branching, CoverGraph, Intermediate, NodeId};
pub use chain::{chain_cover, nested_chain_order};
pub use scheme1::{scheme1_adapted, scheme1_full, scheme1_full_rows, Sections};
pub use scr::{scr, scr_round};
pub use search::{brute_force_optimal, search, SearchLimits, SearchOutcome, BRUTE_FORCE_MAX_DIM};

/// A matrix `A_k` plus witnesses.
///
/// Target indices are 0-based positions in the matrix `G` the scheme was
/// built for, or, for full-space schemes, `value - 1` where `value` is the
/// target's text form read as a binary number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverScheme {
    k: usize,
    a_k: BitMatrix,
    witnesses: BTreeMap<usize, Vec<usize>>,
}

impl CoverScheme {
    pub fn new(k: usize, a_k: BitMatrix, witnesses: BTreeMap<usize, Vec<usize>>) -> Self {
        Self { k, a_k, witnesses }
    }

    /// `A_k = G` with singleton witnesses.
    pub fn uncoded(g: &BitMatrix, k: usize) -> Self {
        Self {
            k,
            a_k: g.clone(),
            witnesses: (0..g.len()).map(|i| (i, vec![i])).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a_k(&self) -> &BitMatrix {
        &self.a_k
    }

    /// Number of rows of `A_k`.
    pub fn t_k(&self) -> usize {
        self.a_k.len()
    }

    pub fn witnesses(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.witnesses
    }

    pub fn witness(&self, target: usize) -> Option<&[usize]> {
        self.witnesses.get(&target).map(Vec::as_slice)
    }

    pub fn witnesses_mut(&mut self) -> &mut BTreeMap<usize, Vec<usize>> {
        &mut self.witnesses
    }

    pub fn max_witness_size(&self) -> usize {
        self.witnesses.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Text form: `k T_k T`, the `T_k` rows, then `target: rows` lines with
    /// 1-based indices on both sides.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k, self.a_k.len(), self.a_k.dim());
        for r in self.a_k.rows() {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        for (t, w) in &self.witnesses {
            out.push_str(&(t + 1).to_string());
            out.push(':');
            for i in w {
                out.push(' ');
                out.push_str(&(i + 1).to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or_else(|| Error::Parse {
            at: Position { line: 1, column: 1 },
            message: "missing \"k T_k T\" header".into(),
        })?;
        let nums = parse_header(header, hline, 3)?;
        let (k, rows_n, dim) = (nums[0], nums[1], nums[2]);
        let mut rows = Vec::with_capacity(rows_n);
        for _ in 0..rows_n {
            let (lno, line) = lines.next().ok_or_else(|| Error::Parse {
                at: Position {
                    line: hline,
                    column: 1,
                },
                message: format!("expected {rows_n} rows, found {}", rows.len()),
            })?;
            rows.push(parse_row(line, lno, dim)?);
        }
        let a_k = BitMatrix::from_rows(dim, rows)?;
        let mut witnesses = BTreeMap::new();
        for (lno, line) in lines {
            let (target, list) = parse_witness_line(line, lno)?;
            if witnesses.insert(target, list).is_some() {
                return Err(Error::Parse {
                    at: Position {
                        line: lno,
                        column: 1,
                    },
                    message: format!("second witness for target {}", target + 1),
                });
            }
        }
        Ok(Self { k, a_k, witnesses })
    }
}

fn parse_witness_line(line: &str, lno: usize) -> Result<(usize, Vec<usize>)> {
    let err = |column: usize, message: String| Error::Parse {
        at: Position { line: lno, column },
        message,
    };
    let colon = line
        .find(':')
        .ok_or_else(|| err(1, "expected \"<target>: <rows>\"".into()))?;
    let one_based = |tok: &str, column: usize| -> Result<usize> {
        match tok.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(err(
                column,
                format!("expected a 1-based index, found {tok:?}"),
            )),
        }
    };
    let target = one_based(line[..colon].trim(), 1)?;
    let mut list = Vec::new();
    let mut col = colon + 2;
    for tok in line[colon + 1..].split(' ') {
        if !tok.is_empty() {
            list.push(one_based(tok, col)?);
        }
        col += tok.len() + 1;
    }
    Ok((target, list))
}

impl fmt::Display for CoverScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Rows of an `A_k` under construction; equal rows share one index.
#[derive(Default)]
pub(crate) struct RowPool {
    rows: Vec<BitVec>,
    index: FxHashMap<BitVec, usize>,
}

impl RowPool {
    pub(crate) fn intern(&mut self, v: BitVec) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.rows.len();
        self.index.insert(v.clone(), i);
        self.rows.push(v);
        i
    }

    pub(crate) fn into_matrix(self, dim: usize) -> BitMatrix {
        BitMatrix::from_rows(dim, self.rows).expect("pool rows share the dimension")
    }
}

/// Rows of `g` that are all independent and no more than `dim` in number are
/// already their own best scheme.
pub(crate) fn is_trivial(g: &BitMatrix) -> bool {
    g.len() <= g.dim() && g.rank() == g.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let g = BitMatrix::from_strs(&["110", "011"]);
        let mut s = CoverScheme::uncoded(&g, 2);
        s.witnesses_mut().insert(2, vec![0, 1]);
        let text = s.to_text();
        assert_eq!(text, "2 2 3\n110\n011\n1: 1\n2: 2\n3: 1 2\n");
        assert_eq!(CoverScheme::parse(&text).unwrap(), s);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let bad = "2 2 3\n110\n011\n1: 1\n2: 0\n";
        match CoverScheme::parse(bad) {
            Err(Error::Parse { at, .. }) => assert_eq!(at, Position { line: 5, column: 4 }),
            other => panic!("unexpected {other:?}"),
        }
        assert!(CoverScheme::parse("2 2 3\n110\n").is_err());
        assert!(CoverScheme::parse("2 1 3\n110\n1 1\n").is_err());
    }
}
