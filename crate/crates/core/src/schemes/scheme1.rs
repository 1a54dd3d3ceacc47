use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use super::{is_trivial, CoverScheme};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::verify::FULL_SPACE_MAX_DIM;

/// Split of `t` coordinates into consecutive sections of length `ceil(t/k)`,
/// the last one holding whatever remains.
///
/// When `(k - 1) * ceil(t/k) >= t` fewer than `k` sections are needed and
/// the split simply stops once the coordinates run out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sections {
    lens: Vec<usize>,
}

impl Sections {
    pub fn new(t: usize, k: usize) -> Self {
        assert!(t >= 1 && k >= 1, "sections need t >= 1 and k >= 1");
        let width = t.div_ceil(k);
        let count = t.div_ceil(width);
        let mut lens = vec![width; count];
        lens[count - 1] = t - (count - 1) * width;
        Self { lens }
    }

    pub fn lens(&self) -> &[usize] {
        &self.lens
    }

    /// `(start, len)` for each section.
    pub fn spans(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lens.iter().scan(0, |start, &len| {
            let s = *start;
            *start += len;
            Some((s, len))
        })
    }

    /// Rows of the full block construction: `sum(2^len - 1)`.
    pub fn full_rows(&self) -> u64 {
        self.lens.iter().map(|&l| (1u64 << l) - 1).sum()
    }
}

fn check_full_range(t: usize, k: usize) -> Result<()> {
    if t < 2 || k == 0 || k >= t.div_ceil(2) {
        return Err(Error::InvalidParameter(format!(
            "block construction needs t >= 2 and 1 <= k < ceil(t/2), got t={t}, k={k}"
        )));
    }
    Ok(())
}

/// Row count of [`scheme1_full`] without building it.
pub fn scheme1_full_rows(t: usize, k: usize) -> Result<u64> {
    check_full_range(t, k)?;
    Ok(Sections::new(t, k).full_rows())
}

/// Section value read with its leftmost coordinate most significant.
fn section_value(v: &BitVec, start: usize, len: usize) -> u64 {
    (start..start + len).fold(0, |acc, i| (acc << 1) | u64::from(v.get(i)))
}

/// Block-diagonal full-space construction.
///
/// Block `i` lists every nonzero pattern of section `i` in increasing binary
/// order, zero outside the section. Any vector is the sum of the rows
/// matching its nonzero sections, so at most `k` rows are needed. Witnesses
/// are stored for all `2^t - 1` targets.
pub fn scheme1_full(t: usize, k: usize) -> Result<CoverScheme> {
    check_full_range(t, k)?;
    if t > FULL_SPACE_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "full-space construction is limited to t <= {FULL_SPACE_MAX_DIM}, got {t}"
        )));
    }
    let sections = Sections::new(t, k);
    let mut a_k = BitMatrix::new(t);
    let mut offsets = Vec::new();
    for (start, len) in sections.spans() {
        offsets.push(a_k.len());
        for value in 1..(1u64 << len) {
            let mut row = BitVec::zeros(t);
            for j in 0..len {
                if (value >> (len - 1 - j)) & 1 == 1 {
                    row.set(start + j, true);
                }
            }
            a_k.push(row)?;
        }
    }
    let mut witnesses = BTreeMap::new();
    for value in 1..(1u64 << t) {
        let v = BitVec::from_msb_value(t, value);
        let w: Vec<usize> = sections
            .spans()
            .zip(&offsets)
            .filter_map(|((start, len), &off)| {
                let p = section_value(&v, start, len);
                (p != 0).then(|| off + p as usize - 1)
            })
            .collect();
        witnesses.insert(value as usize - 1, w);
    }
    Ok(CoverScheme::new(k, a_k, witnesses))
}

/// Block construction restricted to the section patterns that occur in `g`.
///
/// Columns are first ordered by decreasing weight (ties by column index);
/// each block then holds the distinct nonzero patterns of its section in
/// order of first occurrence. The output matrix is mapped back to the
/// original column order.
pub fn scheme1_adapted(g: &BitMatrix, k: usize) -> Result<CoverScheme> {
    g.check_nonzero_distinct()?;
    let t = g.dim();
    if k == 0 || k > t {
        return Err(Error::InvalidParameter(format!(
            "adapted block construction needs 1 <= k <= t, got t={t}, k={k}"
        )));
    }
    if is_trivial(g) {
        return Ok(CoverScheme::uncoded(g, k));
    }
    let weights: Vec<usize> = (0..t)
        .map(|c| g.rows().iter().filter(|r| r.get(c)).count())
        .collect();
    let mut perm: Vec<usize> = (0..t).collect();
    perm.sort_by_key(|&c| (std::cmp::Reverse(weights[c]), c));
    let permuted: Vec<BitVec> = g.rows().iter().map(|r| r.permuted(&perm)).collect();

    let sections = Sections::new(t, k);
    let spans: Vec<(usize, usize)> = sections.spans().collect();
    // Per section: pattern -> position within its block, plus the patterns in order.
    let mut blocks: Vec<(FxHashMap<BitVec, usize>, Vec<BitVec>)> =
        vec![Default::default(); spans.len()];
    let mut positions: Vec<Vec<Option<usize>>> = Vec::with_capacity(g.len());
    for row in &permuted {
        let mut per_row = Vec::with_capacity(spans.len());
        for (&(start, len), (lookup, order)) in spans.iter().zip(blocks.iter_mut()) {
            let pattern = row.slice(start, len);
            if pattern.is_zero() {
                per_row.push(None);
                continue;
            }
            let next = order.len();
            let pos = *lookup.entry(pattern.clone()).or_insert_with(|| {
                order.push(pattern);
                next
            });
            per_row.push(Some(pos));
        }
        positions.push(per_row);
    }

    let mut a_k = BitMatrix::new(t);
    let mut offsets = Vec::with_capacity(spans.len());
    for (&(start, _), (_, order)) in spans.iter().zip(&blocks) {
        offsets.push(a_k.len());
        for pattern in order {
            let mut row = BitVec::zeros(t);
            for j in 0..pattern.len() {
                if pattern.get(j) {
                    row.set(perm[start + j], true);
                }
            }
            a_k.push(row)?;
        }
    }
    let witnesses = positions
        .into_iter()
        .enumerate()
        .map(|(i, per_row)| {
            let w = per_row
                .into_iter()
                .zip(&offsets)
                .filter_map(|(pos, &off)| pos.map(|p| off + p))
                .collect();
            (i, w)
        })
        .collect();
    Ok(CoverScheme::new(k, a_k, witnesses))
}
