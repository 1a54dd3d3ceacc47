use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Position, Result};
use crate::gf2::BitVec;

/// An ordered list of GF(2) rows sharing one dimension.
///
/// Row order is significant; all indices handed out by this crate are
/// 0-based positions in `rows`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    dim: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(dim: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: bad.len(),
            });
        }
        Ok(Self { dim, rows })
    }

    /// Convenience constructor from text rows such as `["100", "011"]`.
    ///
    /// Panics on malformed input; intended for literals.
    pub fn from_strs(rows: &[&str]) -> Self {
        let parsed: Vec<BitVec> = rows
            .iter()
            .map(|s| s.parse().expect("bad row literal"))
            .collect();
        let dim = parsed.first().map_or(0, BitVec::len);
        Self::from_rows(dim, parsed).expect("rows of unequal length")
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            rows: (0..dim).map(|i| BitVec::unit(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn push(&mut self, row: BitVec) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    /// Sub-matrix of the given rows, in the order given.
    pub fn select(&self, indices: &[usize]) -> BitMatrix {
        BitMatrix {
            dim: self.dim,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// XOR of the rows at `indices`.
    pub fn sum_rows<'a, I: IntoIterator<Item = &'a usize>>(&self, indices: I) -> BitVec {
        let mut acc = BitVec::zeros(self.dim);
        for &i in indices {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    /// GF(2) row rank.
    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new(self.dim, self.len());
        self.rows
            .iter()
            .filter(|r| elim.insert(r).is_none())
            .count()
    }

    /// Whether `v` is a GF(2) combination of the rows.
    pub fn in_span(&self, v: &BitVec) -> Result<bool> {
        self.check_dim(v)?;
        let mut elim = Eliminator::new(self.dim, self.len());
        for r in &self.rows {
            elim.insert(r);
        }
        Ok(elim.express(v).is_some())
    }

    pub(crate) fn check_dim(&self, v: &BitVec) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        Ok(())
    }

    /// Fails with the first zero row or the first repeated row.
    pub fn check_nonzero_distinct(&self) -> Result<()> {
        let mut seen = rustc_hash::FxHashMap::default();
        for (i, r) in self.rows.iter().enumerate() {
            if r.is_zero() {
                return Err(Error::ZeroRow(i));
            }
            if let Some(&j) = seen.get(r) {
                return Err(Error::DuplicateRow(j, i));
            }
            seen.insert(r, i);
        }
        Ok(())
    }

    /// Parses the text format: a `<n> <T>` header followed by `n` rows of
    /// exactly `T` characters from `{0,1}`. Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or_else(|| Error::Parse {
            at: Position { line: 1, column: 1 },
            message: "missing \"<n> <T>\" header".into(),
        })?;
        let nums = parse_header(header, hline, 2)?;
        let (n, dim) = (nums[0], nums[1]);
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (lno, line) = lines.next().ok_or_else(|| Error::Parse {
                at: Position {
                    line: hline,
                    column: 1,
                },
                message: format!("expected {n} rows, found {}", rows.len()),
            })?;
            rows.push(parse_row(line, lno, dim)?);
        }
        if let Some((lno, _)) = lines.next() {
            return Err(Error::Parse {
                at: Position {
                    line: lno,
                    column: 1,
                },
                message: format!("unexpected content after {n} rows"),
            });
        }
        Ok(Self { dim, rows })
    }

    /// Inverse of [`BitMatrix::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.len(), self.dim);
        for r in &self.rows {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers, trimmed of
/// trailing whitespace.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim_start().is_empty() && !l.trim_start().starts_with('#'))
}

pub(crate) fn parse_header(line: &str, lno: usize, expected: usize) -> Result<Vec<usize>> {
    let mut nums = Vec::new();
    let mut col = 1;
    for tok in line.split(' ') {
        if !tok.is_empty() {
            let v = tok.parse::<usize>().map_err(|_| Error::Parse {
                at: Position {
                    line: lno,
                    column: col,
                },
                message: format!("expected a decimal integer, found {tok:?}"),
            })?;
            nums.push(v);
        }
        col += tok.chars().count() + 1;
    }
    if nums.len() != expected {
        return Err(Error::Parse {
            at: Position {
                line: lno,
                column: 1,
            },
            message: format!("header must hold {expected} integers, found {}", nums.len()),
        });
    }
    Ok(nums)
}

pub(crate) fn parse_row(line: &str, lno: usize, dim: usize) -> Result<BitVec> {
    let row = BitVec::parse_line(line, lno)?;
    if row.len() != dim {
        return Err(Error::Parse {
            at: Position {
                line: lno,
                column: row.len().min(dim) + 1,
            },
            message: format!("expected {dim} characters, found {}", row.len()),
        });
    }
    Ok(row)
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "BitMatrix[{}x{}]{:?}", self.len(), self.dim, rows)
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Incremental Gaussian elimination that remembers, for each stored basis
/// vector, which inserted rows it is the sum of.
pub(crate) struct Eliminator {
    basis: Vec<Pivot>,
    inserted: usize,
    capacity: usize,
    dim: usize,
}

struct Pivot {
    col: usize,
    vec: BitVec,
    combo: BitVec,
}

impl Eliminator {
    pub(crate) fn new(dim: usize, capacity: usize) -> Self {
        Self {
            basis: Vec::new(),
            inserted: 0,
            capacity,
            dim,
        }
    }

    fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut vec = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        for p in &self.basis {
            if vec.get(p.col) {
                vec.xor_assign(&p.vec);
                combo.xor_assign(&p.combo);
            }
        }
        (vec, combo)
    }

    /// Inserts the next row. Returns `None` if it raised the rank, or the
    /// sorted indices of earlier rows whose sum equals it.
    pub(crate) fn insert(&mut self, v: &BitVec) -> Option<Vec<usize>> {
        debug_assert_eq!(v.len(), self.dim);
        assert!(
            self.inserted < self.capacity,
            "eliminator capacity exceeded"
        );
        let index = self.inserted;
        self.inserted += 1;
        let (vec, mut combo) = self.reduce(v);
        match vec.first_one() {
            Some(col) => {
                combo.set(index, true);
                self.basis.push(Pivot { col, vec, combo });
                None
            }
            None => Some(ones(&combo)),
        }
    }

    /// Indices of inserted rows summing to `v`, if `v` is in their span.
    pub(crate) fn express(&self, v: &BitVec) -> Option<Vec<usize>> {
        let (vec, combo) = self.reduce(v);
        vec.is_zero().then(|| ones(&combo))
    }
}

fn ones(v: &BitVec) -> Vec<usize> {
    (0..v.len()).filter(|&i| v.get(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::from_strs(&["100", "010", "110"]).rank(), 2);
        assert_eq!(BitMatrix::new(4).rank(), 0);
    }

    #[test]
    fn span_membership() {
        let m = BitMatrix::from_strs(&["100", "010"]);
        assert!(m.in_span(&"110".parse().unwrap()).unwrap());
        assert!(!m.in_span(&"001".parse().unwrap()).unwrap());
        assert!(m.in_span(&BitVec::zeros(3)).unwrap());
        assert!(BitMatrix::new(3).in_span(&BitVec::zeros(3)).unwrap());
        assert!(matches!(
            m.in_span(&"11".parse().unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn text_round_trip_with_comments() {
        let text = "# demo\n3 4\n\n1010\n# mid\n0110\n1111\n";
        let m = BitMatrix::parse(text).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.dim(), 4);
        assert_eq!(BitMatrix::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn parse_reports_position() {
        let err = BitMatrix::parse("2 3\n101\n1a1\n").unwrap_err();
        match err {
            Error::Parse { at, .. } => assert_eq!(at, Position { line: 3, column: 2 }),
            other => panic!("unexpected {other}"),
        }
        let err = BitMatrix::parse("2 3\n101\n10\n").unwrap_err();
        match err {
            Error::Parse { at, .. } => assert_eq!(at, Position { line: 3, column: 3 }),
            other => panic!("unexpected {other}"),
        }
        assert!(BitMatrix::parse("2 x\n").is_err());
        assert!(BitMatrix::parse("2 3\n101\n").is_err());
        assert!(BitMatrix::parse("1 3\n101\n111\n").is_err());
    }

    #[test]
    fn eliminator_reports_dependency() {
        let m = BitMatrix::from_strs(&["100", "010", "110"]);
        let mut e = Eliminator::new(3, 3);
        assert!(e.insert(m.row(0)).is_none());
        assert!(e.insert(m.row(1)).is_none());
        assert_eq!(e.insert(m.row(2)), Some(vec![0, 1]));
    }

    #[test]
    fn rejects_zero_and_duplicate_rows() {
        assert!(matches!(
            BitMatrix::from_strs(&["10", "00"]).check_nonzero_distinct(),
            Err(Error::ZeroRow(1))
        ));
        assert!(matches!(
            BitMatrix::from_strs(&["10", "01", "10"]).check_nonzero_distinct(),
            Err(Error::DuplicateRow(0, 2))
        ));
    }
}
