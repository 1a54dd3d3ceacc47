//! Exact witness recovery and cover verification.
//!
//! [`Decomposer`] answers "which at most `k` rows of `a` sum to `v`" exactly,
//! by meet-in-the-middle: XOR-sums of up to `ceil(k/2)` rows are tabulated
//! and probed with sums of up to `floor(k/2)` rows.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use rand::Rng;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::schemes::CoverScheme;

/// Largest dimension [`verify_full_space`] will enumerate.
pub const FULL_SPACE_MAX_DIM: usize = 20;

trait Key: Clone + Eq + Hash {
    fn zero(words: usize) -> Self;
    fn of(v: &BitVec) -> Self;
    fn xor(&self, other: &Self) -> Self;
}

impl Key for u64 {
    fn zero(_: usize) -> Self {
        0
    }
    fn of(v: &BitVec) -> Self {
        v.as_word().expect("narrow key needs dim <= 64")
    }
    fn xor(&self, other: &Self) -> Self {
        self ^ other
    }
}

impl Key for Vec<u64> {
    fn zero(words: usize) -> Self {
        vec![0; words]
    }
    fn of(v: &BitVec) -> Self {
        v.words().to_vec()
    }
    fn xor(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a ^ b).collect()
    }
}

struct Mitm<K: Key> {
    rows: Vec<K>,
    k: usize,
    probe_max: usize,
    /// Flattened index sets; set `i` is `flat[start[i]..start[i + 1]]`.
    flat: Vec<u32>,
    start: Vec<usize>,
    table: FxHashMap<K, Vec<u32>>,
}

impl<K: Key> Mitm<K> {
    fn new(a: &BitMatrix, k: usize) -> Self {
        let rows: Vec<K> = a.rows().iter().map(K::of).collect();
        let words = a.dim().div_ceil(64);
        let table_max = k.div_ceil(2);
        let mut m = Mitm {
            rows,
            k,
            probe_max: k / 2,
            flat: Vec::new(),
            start: vec![0],
            table: FxHashMap::default(),
        };
        let mut stack = Vec::with_capacity(table_max);
        let zero = K::zero(words);
        m.tabulate(0, &zero, table_max, &mut stack);
        m
    }

    fn tabulate(&mut self, from: usize, acc: &K, depth: usize, stack: &mut Vec<u32>) {
        if depth == 0 {
            return;
        }
        for i in from..self.rows.len() {
            let sum = acc.xor(&self.rows[i]);
            stack.push(i as u32);
            let id = self.start.len() as u32 - 1;
            self.flat.extend_from_slice(stack);
            self.start.push(self.flat.len());
            self.table.entry(sum.clone()).or_default().push(id);
            self.tabulate(i + 1, &sum, depth - 1, stack);
            stack.pop();
        }
    }

    fn set(&self, id: u32) -> &[u32] {
        let id = id as usize;
        &self.flat[self.start[id]..self.start[id + 1]]
    }

    fn find(&self, v: &BitVec) -> Option<Vec<usize>> {
        if v.is_zero() {
            return Some(Vec::new());
        }
        let target = K::of(v);
        let mut best: Option<Vec<u32>> = None;
        let mut stack = Vec::with_capacity(self.probe_max);
        self.probe(0, &target, self.probe_max, &mut stack, &mut best);
        best.map(|b| b.into_iter().map(|i| i as usize).collect())
    }

    fn reaches(&self, v: &BitVec) -> bool {
        let mut stack = Vec::with_capacity(self.probe_max);
        v.is_zero() || self.hit(0, &K::of(v), self.probe_max, &mut stack)
    }

    /// Like `probe`, stopping at the first set of at most `k` rows.
    fn hit(&self, from: usize, key: &K, depth: usize, stack: &mut Vec<u32>) -> bool {
        if let Some(ids) = self.table.get(key) {
            let fits = |&id: &u32| {
                let half = self.set(id);
                half.len() + stack.len() <= self.k && !half.iter().any(|i| stack.contains(i))
            };
            if ids.iter().any(fits) {
                return true;
            }
        }
        depth > 0
            && (from..self.rows.len()).any(|i| {
                stack.push(i as u32);
                let found = self.hit(i + 1, &key.xor(&self.rows[i]), depth - 1, stack);
                stack.pop();
                found
            })
    }

    fn probe(
        &self,
        from: usize,
        key: &K,
        depth: usize,
        stack: &mut Vec<u32>,
        best: &mut Option<Vec<u32>>,
    ) {
        if let Some(ids) = self.table.get(key) {
            for &id in ids {
                let half = self.set(id);
                if half.len() + stack.len() > self.k || half.iter().any(|i| stack.contains(i)) {
                    continue;
                }
                let mut cand: Vec<u32> = half.iter().chain(stack.iter()).copied().collect();
                cand.sort_unstable();
                let better = match best {
                    None => true,
                    Some(b) => (cand.len(), &cand) < (b.len(), b),
                };
                if better {
                    *best = Some(cand);
                }
            }
        }
        if depth == 0 {
            return;
        }
        for i in from..self.rows.len() {
            stack.push(i as u32);
            self.probe(i + 1, &key.xor(&self.rows[i]), depth - 1, stack, best);
            stack.pop();
        }
    }
}

/// Reusable exact decomposition against one matrix and one limit `k`.
pub struct Decomposer {
    inner: Inner,
    dim: usize,
}

enum Inner {
    Narrow(Mitm<u64>),
    Wide(Mitm<Vec<u64>>),
}

impl Decomposer {
    pub fn new(a: &BitMatrix, k: usize) -> Self {
        let inner = if a.dim() <= 64 {
            Inner::Narrow(Mitm::new(a, k))
        } else {
            Inner::Wide(Mitm::new(a, k))
        };
        Self {
            inner,
            dim: a.dim(),
        }
    }

    /// Smallest set of at most `k` row indices summing to `v` (ties broken
    /// lexicographically), or `None` if no such set exists.
    pub fn find(&self, v: &BitVec) -> Result<Option<Vec<usize>>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        Ok(match &self.inner {
            Inner::Narrow(m) => m.find(v),
            Inner::Wide(m) => m.find(v),
        })
    }
    /// Whether some set of at most `k` rows sums to `v`.
    pub fn reaches(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        Ok(match &self.inner {
            Inner::Narrow(m) => m.reaches(v),
            Inner::Wide(m) => m.reaches(v),
        })
    }
}

/// One-shot form of [`Decomposer::find`].
pub fn decompose(a: &BitMatrix, v: &BitVec, k: usize) -> Result<Option<Vec<usize>>> {
    a.check_dim(v)?;
    Decomposer::new(a, k).find(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    /// `(target index, reason)`, ascending by target, 0-based.
    pub failures: Vec<(usize, String)>,
    pub max_witness_size: usize,
    pub checked: usize,
    /// Checked targets with no failure.
    pub passed: usize,
}

impl VerifyReport {
    fn from_failures(
        failures: Vec<(usize, String)>,
        max_witness_size: usize,
        checked: usize,
        passed: usize,
    ) -> Self {
        Self {
            ok: failures.is_empty(),
            failures,
            max_witness_size,
            checked,
            passed,
        }
    }

    /// Distinct targets named in `failures`, including any beyond `checked`.
    pub fn failed_targets(&self) -> usize {
        self.failures
            .iter()
            .map(|f| f.0)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Header plus one row per failure, targets 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("target,reason\n");
        for (t, reason) in &self.failures {
            out.push_str(&format!("{},{}\n", t + 1, reason.replace(',', ";")));
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}/{} ok (max witness size {})",
            self.passed, self.checked, self.max_witness_size
        )?;
        for (t, reason) in &self.failures {
            writeln!(f, "target {}: {reason}", t + 1)?;
        }
        Ok(())
    }
}

fn check_target(
    scheme: &CoverScheme,
    decomposer: &Decomposer,
    index: usize,
    target: &BitVec,
    failures: &mut Vec<(usize, String)>,
    max_size: &mut usize,
) -> bool {
    let before = failures.len();
    let a = scheme.a_k();
    match scheme.witness(index) {
        None => failures.push((index, "no stored witness".into())),
        Some(w) => {
            *max_size = (*max_size).max(w.len());
            if w.is_empty() || w.len() > scheme.k() {
                failures.push((
                    index,
                    format!("witness size {} outside 1..={}", w.len(), scheme.k()),
                ));
            } else if let Some(&bad) = w.iter().find(|&&i| i >= a.len()) {
                failures.push((index, format!("witness row {} out of range", bad + 1)));
            } else {
                let mut sorted = w.to_vec();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != w.len() {
                    failures.push((index, "witness repeats a row".into()));
                } else if &a.sum_rows(w) != target {
                    failures.push((index, "witness rows do not sum to the target".into()));
                }
            }
        }
    }
    match decomposer.reaches(target) {
        Ok(true) => {}
        Ok(false) => failures.push((
            index,
            format!(
                "no combination of at most {} rows reaches the target",
                scheme.k()
            ),
        )),
        Err(e) => failures.push((index, e.to_string())),
    }
    failures.len() == before
}

/// Checks every stored witness against `g` and independently re-derives a
/// witness for every row of `g`.
pub fn verify_cover(scheme: &CoverScheme, g: &BitMatrix) -> Result<VerifyReport> {
    if g.dim() != scheme.a_k().dim() {
        return Err(Error::DimensionMismatch {
            expected: scheme.a_k().dim(),
            actual: g.dim(),
        });
    }
    let decomposer = Decomposer::new(scheme.a_k(), scheme.k());
    let mut failures = Vec::new();
    let mut max_size = 0;
    let mut passed = 0;
    for (i, row) in g.rows().iter().enumerate() {
        passed += usize::from(check_target(
            scheme,
            &decomposer,
            i,
            row,
            &mut failures,
            &mut max_size,
        ));
    }
    for (&t, _) in scheme.witnesses().range(g.len()..) {
        failures.push((t, "witness for a target that does not exist".into()));
    }
    Ok(VerifyReport::from_failures(
        failures,
        max_size,
        g.len(),
        passed,
    ))
}

/// [`verify_cover`] against all `2^t - 1` nonzero vectors, enumerated on the
/// fly. Target `j` (0-based) is the vector whose text form read as a binary
/// number equals `j + 1`.
pub fn verify_full_space(scheme: &CoverScheme, t: usize) -> Result<VerifyReport> {
    if t == 0 || t > FULL_SPACE_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "full-space verification needs 1 <= t <= {FULL_SPACE_MAX_DIM}, got {t}"
        )));
    }
    if scheme.a_k().dim() != t {
        return Err(Error::DimensionMismatch {
            expected: scheme.a_k().dim(),
            actual: t,
        });
    }
    let decomposer = Decomposer::new(scheme.a_k(), scheme.k());
    let total = (1usize << t) - 1;
    let mut failures = Vec::new();
    let mut max_size = 0;
    let mut passed = 0;
    for j in 0..total {
        let v = BitVec::from_msb_value(t, j as u64 + 1);
        passed += usize::from(check_target(
            scheme,
            &decomposer,
            j,
            &v,
            &mut failures,
            &mut max_size,
        ));
    }
    for (&j, _) in scheme.witnesses().range(total..) {
        failures.push((j, "witness for a target that does not exist".into()));
    }
    Ok(VerifyReport::from_failures(
        failures, max_size, total, passed,
    ))
}

/// [`verify_full_space`] restricted to the distinct vectors among `samples`
/// uniform draws of nonzero vectors, with the same target numbering.
pub fn verify_sampled<R: Rng + ?Sized>(
    scheme: &CoverScheme,
    t: usize,
    samples: usize,
    rng: &mut R,
) -> Result<VerifyReport> {
    if t == 0 || t > FULL_SPACE_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "sampled verification needs 1 <= t <= {FULL_SPACE_MAX_DIM}, got {t}"
        )));
    }
    if scheme.a_k().dim() != t {
        return Err(Error::DimensionMismatch {
            expected: scheme.a_k().dim(),
            actual: t,
        });
    }
    let draws: BTreeSet<u64> = (0..samples).map(|_| rng.gen_range(1..1u64 << t)).collect();
    let decomposer = Decomposer::new(scheme.a_k(), scheme.k());
    let mut failures = Vec::new();
    let mut max_size = 0;
    let mut passed = 0;
    for &value in &draws {
        let v = BitVec::from_msb_value(t, value);
        passed += usize::from(check_target(
            scheme,
            &decomposer,
            value as usize - 1,
            &v,
            &mut failures,
            &mut max_size,
        ));
    }
    Ok(VerifyReport::from_failures(
        failures,
        max_size,
        draws.len(),
        passed,
    ))
}
