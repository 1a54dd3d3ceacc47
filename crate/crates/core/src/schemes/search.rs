use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;

use super::CoverScheme;
use crate::bounds::t_star;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::verify::Decomposer;

/// Default dimension cap for [`brute_force_optimal`].
pub const BRUTE_FORCE_MAX_DIM: usize = 5;

/// Budget for the exact searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Search nodes (partial subsets) examined before giving up.
    pub max_nodes: u64,
    pub wall_clock: Duration,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_nodes: 10_000_000,
            wall_clock: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(CoverScheme),
    /// The budget ran out while working on subsets of size `level`; every
    /// smaller size was ruled out.
    Exhausted {
        level: usize,
    },
}

impl SearchOutcome {
    pub fn scheme(&self) -> Option<&CoverScheme> {
        match self {
            Self::Found(s) => Some(s),
            Self::Exhausted { .. } => None,
        }
    }

    pub fn into_scheme(self) -> Option<CoverScheme> {
        match self {
            Self::Found(s) => Some(s),
            Self::Exhausted { .. } => None,
        }
    }
}

struct Budget {
    limits: SearchLimits,
    start: Instant,
    used: u64,
}

impl Budget {
    fn new(limits: SearchLimits) -> Self {
        Self {
            limits,
            start: Instant::now(),
            used: 0,
        }
    }

    /// Counts one node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        self.used += 1;
        if self.used > self.limits.max_nodes {
            return false;
        }
        !self.used.is_multiple_of(1024) || self.start.elapsed() <= self.limits.wall_clock
    }
}

fn rank_of(values: impl IntoIterator<Item = u64>) -> usize {
    let mut pivots = [0u64; 64];
    let mut rank = 0;
    for mut v in values {
        while v != 0 {
            let p = 63 - v.leading_zeros() as usize;
            if pivots[p] == 0 {
                pivots[p] = v;
                rank += 1;
                break;
            }
            v ^= pivots[p];
        }
    }
    rank
}

fn packed(v: &BitVec) -> u64 {
    v.as_word().expect("dimension checked to fit one word")
}

fn check_dim(g: &BitMatrix, cap: usize) -> Result<()> {
    if g.dim() > cap {
        return Err(Error::InvalidParameter(format!(
            "exact search supports t <= {cap}, got t={}",
            g.dim()
        )));
    }
    Ok(())
}

/// Distinct nonzero targets of `g` and, per row, its target index.
fn targets_of(g: &BitMatrix) -> Result<(Vec<u64>, Vec<usize>)> {
    let mut values = Vec::new();
    let mut index = FxHashMap::default();
    let mut of_row = Vec::with_capacity(g.len());
    for (i, row) in g.rows().iter().enumerate() {
        if row.is_zero() {
            return Err(Error::ZeroRow(i));
        }
        let v = packed(row);
        let t = *index.entry(v).or_insert_with(|| {
            values.push(v);
            values.len() - 1
        });
        of_row.push(t);
    }
    Ok((values, of_row))
}

/// Number of subsets of size `1..=k` that contain at least one of `m` new
/// elements added to `s` existing ones.
fn new_sums(s: usize, m: usize, k: usize) -> u128 {
    let binom = |n: usize, r: usize| -> u128 {
        if r > n {
            return 0;
        }
        (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    };
    (1..=k).map(|i| binom(s + m, i) - binom(s, i)).sum()
}

/// Subsets of size `1..=k` of `s + m` elements with at least two of the `m`.
fn multi_new_sums(s: usize, m: usize, k: usize) -> u128 {
    let binom = |n: usize, r: usize| -> u128 {
        if r > n {
            return 0;
        }
        (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    };
    (2..=k)
        .flat_map(|j| (j..=k).map(move |i| (j, i)))
        .map(|(j, i)| binom(m, j) * binom(s, i - j))
        .sum()
}

/// Most subsets of size `1..=k` that hold one given new pick, at least one
/// other of the `m` new picks, and otherwise the `s` chosen elements.
fn shared_cap(s: usize, m: usize, k: usize) -> u128 {
    let binom = |n: usize, r: usize| -> u128 {
        if r > n {
            return 0;
        }
        (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    };
    (2..=k)
        .flat_map(|i| (1..i).map(move |j| (i, j)))
        .map(|(i, j)| binom(m.saturating_sub(1), j) * binom(s, i - 1 - j))
        .sum()
}

enum Step {
    Found,
    NotFound,
    Aborted,
}

struct Dfs<'a> {
    target_count: usize,
    /// Options as candidate-index lists, with their target.
    options: &'a [(Vec<usize>, usize)],
    target_options: &'a [Vec<usize>],
    elem_options: &'a [Vec<usize>],
    values: &'a [u64],
    rank_g: usize,
    k: usize,
    missing: Vec<usize>,
    covered_by: Vec<usize>,
    uncovered: usize,
    chosen: Vec<usize>,
    in_s: Vec<bool>,
    /// Per option, how many of its elements are currently forbidden.
    blocked: Vec<usize>,
    forbidden: Vec<bool>,
    nogoods: Vec<Vec<usize>>,
    budget: Budget,
    gain: Vec<usize>,
    shared: Vec<usize>,
    mark: Vec<u64>,
    shared_mark: Vec<u64>,
    stamp: u64,
}

impl Dfs<'_> {
    fn add(&mut self, c: usize) {
        self.in_s[c] = true;
        self.chosen.push(c);
        for &o in &self.elem_options[c] {
            self.missing[o] -= 1;
            if self.missing[o] == 0 {
                let t = self.options[o].1;
                self.covered_by[t] += 1;
                if self.covered_by[t] == 1 {
                    self.uncovered -= 1;
                }
            }
        }
    }

    fn remove(&mut self, c: usize) {
        self.in_s[c] = false;
        self.chosen.pop();
        for &o in &self.elem_options[c] {
            if self.missing[o] == 0 {
                let t = self.options[o].1;
                self.covered_by[t] -= 1;
                if self.covered_by[t] == 0 {
                    self.uncovered += 1;
                }
            }
            self.missing[o] += 1;
        }
    }

    fn set_forbidden(&mut self, c: usize, on: bool) {
        self.forbidden[c] = on;
        for &o in &self.elem_options[c] {
            if on {
                self.blocked[o] += 1;
            } else {
                self.blocked[o] -= 1;
            }
        }
    }

    /// Applies the sibling nogoods: a nogood already inside the chosen set
    /// kills the node, one element short of it forbids that element.
    /// Returns the elements forbidden here, or `None` for a dead node.
    fn apply_nogoods(&mut self) -> Option<Vec<usize>> {
        let mut forbidden = Vec::new();
        for i in 0..self.nogoods.len() {
            let mut outside = self.nogoods[i].iter().filter(|&&c| !self.in_s[c]);
            match (outside.next(), outside.next()) {
                (None, _) => {
                    for &c in &forbidden {
                        self.set_forbidden(c, false);
                    }
                    return None;
                }
                (Some(&c), None) if !self.forbidden[c] => {
                    self.set_forbidden(c, true);
                    forbidden.push(c);
                }
                _ => {}
            }
        }
        Some(forbidden)
    }

    fn run(&mut self, bound: usize) -> Step {
        if !self.budget.tick() {
            return Step::Aborted;
        }
        if self.uncovered == 0 {
            return Step::Found;
        }
        let s = self.chosen.len();
        let room = bound - s;
        if room == 0 || self.uncovered as u128 > new_sums(s, room, self.k) {
            return Step::NotFound;
        }
        if rank_of(self.chosen.iter().map(|&c| self.values[c])) + room < self.rank_g {
            return Step::NotFound;
        }
        let Some(forbidden) = self.apply_nogoods() else {
            return Step::NotFound;
        };
        let step = self.explore(s, room, bound);
        for c in forbidden {
            self.set_forbidden(c, false);
        }
        step
    }

    /// Invariant: a node that returns `NotFound` has no cover within
    /// `bound` containing its chosen set. Forbidden elements rest on
    /// sibling subtrees that finished earlier.
    fn explore(&mut self, s: usize, room: usize, bound: usize) -> Step {
        // One pass over the uncovered targets: the most constrained one, and
        // per candidate the targets it would complete alone (`gain`) or
        // together with other new picks (`shared`).
        self.gain.iter_mut().for_each(|g| *g = 0);
        self.shared.iter_mut().for_each(|g| *g = 0);
        let mut best: Option<(usize, usize)> = None;
        let (mut alone_targets, mut shared_targets) = (0u128, 0u128);
        for t in 0..self.target_count {
            if self.covered_by[t] > 0 {
                continue;
            }
            self.stamp += 1;
            let mut feasible = 0;
            let (mut alone, mut together) = (false, false);
            for &o in &self.target_options[t] {
                let missing = self.missing[o];
                if missing > room || self.blocked[o] > 0 {
                    continue;
                }
                feasible += 1;
                if missing == 1 {
                    alone = true;
                    let c = *self.options[o]
                        .0
                        .iter()
                        .find(|&&c| !self.in_s[c])
                        .expect("one element is missing");
                    if self.mark[c] != self.stamp {
                        self.mark[c] = self.stamp;
                        self.gain[c] += 1;
                    }
                } else {
                    together = true;
                    for &c in &self.options[o].0 {
                        if !self.in_s[c] && self.shared_mark[c] != self.stamp {
                            self.shared_mark[c] = self.stamp;
                            self.shared[c] += 1;
                        }
                    }
                }
            }
            if feasible == 0 {
                return Step::NotFound;
            }
            alone_targets += u128::from(alone);
            shared_targets += u128::from(together);
            if best.is_none_or(|(_, f)| feasible < f) {
                best = Some((t, feasible));
            }
        }

        // A target completed by one new pick is counted in that pick's gain;
        // one completed by two or more new picks is counted in the shared
        // tally of each of them, so at least twice.
        let top = room.min(self.gain.len());
        let multi = multi_new_sums(s, room, self.k);
        let cap = shared_cap(s, room, self.k);
        let mut scores: Vec<u128> = self
            .gain
            .iter()
            .zip(&self.shared)
            .map(|(&g, &h)| 2 * g as u128 + (h as u128).min(cap))
            .collect();
        if top < scores.len() {
            scores.select_nth_unstable_by(top, |a, b| b.cmp(a));
        }
        let twice_best: u128 = scores[..top].iter().sum();
        let mut singles = self.gain.clone();
        if top < singles.len() {
            singles.select_nth_unstable_by(top, |a, b| b.cmp(a));
        }
        let singles: u128 = singles[..top].iter().map(|&g| g as u128).sum();
        let uncovered = self.uncovered as u128;
        if 2 * uncovered > twice_best
            || uncovered > singles.min(alone_targets) + multi.min(shared_targets)
        {
            return Step::NotFound;
        }

        let (target, _) = best.expect("some target is uncovered");
        let mut branches: Vec<usize> = self.target_options[target]
            .iter()
            .copied()
            .filter(|&o| self.missing[o] <= room && self.blocked[o] == 0)
            .collect();
        branches.sort_by_key(|&o| (self.missing[o], o));
        // Once a branch adding `added` has failed, later siblings and their
        // descendants may never hold all of `added`.
        let mut forbidden_here = Vec::new();
        let nogood_mark = self.nogoods.len();
        let mut outcome = Step::NotFound;
        for o in branches {
            if self.blocked[o] > 0 {
                continue;
            }
            let added: Vec<usize> = self.options[o]
                .0
                .iter()
                .copied()
                .filter(|&c| !self.in_s[c])
                .collect();
            for &c in &added {
                self.add(c);
            }
            let step = self.run(bound);
            if matches!(step, Step::Found) {
                outcome = step;
                break;
            }
            for &c in added.iter().rev() {
                self.remove(c);
            }
            if matches!(step, Step::Aborted) {
                outcome = step;
                break;
            }
            if let [c] = added[..] {
                self.set_forbidden(c, true);
                forbidden_here.push(c);
            } else {
                self.nogoods.push(added);
            }
        }
        self.nogoods.truncate(nogood_mark);
        for c in forbidden_here {
            self.set_forbidden(c, false);
        }
        outcome
    }
}

/// All index sets of size `1..=k` over `values` (ascending indices) whose
/// sum is `target`.
fn options_for(
    target: u64,
    values: &[u64],
    lookup: &FxHashMap<u64, usize>,
    k: usize,
) -> Vec<Vec<usize>> {
    fn rec(
        acc: u64,
        from: usize,
        left: usize,
        stack: &mut Vec<usize>,
        values: &[u64],
        lookup: &FxHashMap<u64, usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        // Close the set with one last element above the current ones.
        if let Some(&last) = lookup.get(&acc) {
            if last >= from {
                let mut set = stack.clone();
                set.push(last);
                out.push(set);
            }
        }
        if left <= 1 {
            return;
        }
        for i in from..values.len() {
            stack.push(i);
            rec(acc ^ values[i], i + 1, left - 1, stack, values, lookup, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    rec(target, 0, k, &mut Vec::new(), values, lookup, &mut out);
    out
}

/// Smallest subset of the rows of `r` that covers every row of `g` with at
/// most `k` additions.
///
/// Sizes are tried in increasing order starting at
/// `max(rank(g), t_star(n_distinct, k))`; each size is settled by a
/// depth-first search that always branches on the uncovered target with the
/// fewest remaining ways to be reached, pruned by rank and by a count of how
/// many new sums the remaining picks can create. Zero and repeated rows of
/// `r` are ignored. Limited to `t <= 64`.
pub fn search(
    r: &BitMatrix,
    g: &BitMatrix,
    k: usize,
    limits: SearchLimits,
) -> Result<SearchOutcome> {
    if g.dim() != r.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            actual: r.dim(),
        });
    }
    check_dim(g, 64)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let (targets, target_of_row) = targets_of(g)?;

    let mut values = Vec::new();
    let mut source = Vec::new();
    let mut lookup = FxHashMap::default();
    for (i, row) in r.rows().iter().enumerate() {
        let v = packed(row);
        if v != 0 && !lookup.contains_key(&v) {
            lookup.insert(v, values.len());
            values.push(v);
            source.push(i);
        }
    }

    let mut options = Vec::new();
    let mut target_options = vec![Vec::new(); targets.len()];
    for (t, &value) in targets.iter().enumerate() {
        let found = options_for(value, &values, &lookup, k);
        if found.is_empty() {
            let row = target_of_row
                .iter()
                .position(|&x| x == t)
                .expect("every target has a row");
            return Err(if r.in_span(g.row(row))? {
                Error::NoCover(row)
            } else {
                Error::NotInSpan(row)
            });
        }
        for set in found {
            target_options[t].push(options.len());
            options.push((set, t));
        }
    }
    let mut elem_options = vec![Vec::new(); values.len()];
    for (o, (set, _)) in options.iter().enumerate() {
        for &c in set {
            elem_options[c].push(o);
        }
    }

    let rank_g = g.rank();
    let start = rank_g.max(t_star(targets.len() as u64, k as u64) as usize);
    let mut dfs = Dfs {
        target_count: targets.len(),
        options: &options,
        target_options: &target_options,
        elem_options: &elem_options,
        values: &values,
        rank_g,
        k,
        missing: options.iter().map(|(set, _)| set.len()).collect(),
        covered_by: vec![0; targets.len()],
        uncovered: targets.len(),
        chosen: Vec::new(),
        in_s: vec![false; values.len()],
        blocked: vec![0; options.len()],
        forbidden: vec![false; values.len()],
        nogoods: Vec::new(),
        budget: Budget::new(limits),
        gain: vec![0; values.len()],
        shared: vec![0; values.len()],
        mark: vec![0; values.len()],
        shared_mark: vec![0; values.len()],
        stamp: 0,
    };
    for bound in start..=values.len() {
        match dfs.run(bound) {
            Step::Found => {
                let mut chosen = dfs.chosen.clone();
                chosen.sort_unstable();
                let rows: Vec<usize> = chosen.iter().map(|&c| source[c]).collect();
                return Ok(SearchOutcome::Found(assemble(r, &rows, g, k)?));
            }
            Step::Aborted => return Ok(SearchOutcome::Exhausted { level: bound }),
            Step::NotFound => {}
        }
    }
    unreachable!("taking every candidate covers all targets")
}

/// Scheme on rows `rows` of `r`, with a smallest witness per row of `g`.
fn assemble(r: &BitMatrix, rows: &[usize], g: &BitMatrix, k: usize) -> Result<CoverScheme> {
    let a_k = r.select(rows);
    let decomposer = Decomposer::new(&a_k, k);
    let mut witnesses = BTreeMap::new();
    for (i, row) in g.rows().iter().enumerate() {
        let w = decomposer.find(row)?.ok_or(Error::NoCover(i))?;
        witnesses.insert(i, w);
    }
    Ok(CoverScheme::new(k, a_k, witnesses))
}

/// Exact optimum over all subsets of the nonzero vectors of the space.
///
/// Subsets are enumerated by size from `max(rank(g), t_star(n_distinct, k))`
/// up, each size in lexicographic order of the vectors' integer values, so
/// the first cover found is the lexicographically smallest among the
/// smallest. The cost is doubly exponential in `t`; `max_dim` caps it
/// (see [`BRUTE_FORCE_MAX_DIM`]).
pub fn brute_force_optimal(
    g: &BitMatrix,
    k: usize,
    limits: SearchLimits,
    max_dim: usize,
) -> Result<SearchOutcome> {
    check_dim(g, max_dim.min(6))?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let t = g.dim();
    let (targets, _) = targets_of(g)?;
    let universe: Vec<BitVec> = (1..(1u64 << t))
        .map(|v| BitVec::from_msb_value(t, v))
        .collect();
    let words: Vec<u64> = universe.iter().map(packed).collect();
    let want = targets.iter().fold(0u64, |acc, &v| acc | (1 << v));
    let rank_g = g.rank();
    let start = rank_g
        .max(t_star(targets.len() as u64, k as u64) as usize)
        .max(1);
    let mut budget = Budget::new(limits);

    for size in start..=universe.len() {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            if !budget.tick() {
                return Ok(SearchOutcome::Exhausted { level: size });
            }
            let chosen: Vec<u64> = pick.iter().map(|&i| words[i]).collect();
            if rank_of(chosen.iter().copied()) >= rank_g && reachable(&chosen, k) & want == want {
                let a_k =
                    BitMatrix::from_rows(t, pick.iter().map(|&i| universe[i].clone()).collect())?;
                let all: Vec<usize> = (0..a_k.len()).collect();
                return Ok(SearchOutcome::Found(assemble(&a_k, &all, g, k)?));
            }
            if !next_combination(&mut pick, universe.len()) {
                break;
            }
        }
    }
    unreachable!("the whole space covers every target")
}

/// Bitmap (bit `v` for packed value `v`) of sums of at most `k` vectors.
fn reachable(vectors: &[u64], k: usize) -> u64 {
    let mut layers = vec![1u64];
    let mut all = 0u64;
    for _ in 0..k {
        let prev = *layers.last().expect("layers start nonempty");
        let mut next = 0u64;
        for &v in vectors {
            for s in 0..64u64 {
                if prev >> s & 1 == 1 {
                    next |= 1 << (s ^ v);
                }
            }
        }
        all |= next;
        layers.push(next);
    }
    all
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else {
        return false;
    };
    pick[i] += 1;
    for j in i + 1..k {
        pick[j] = pick[j - 1] + 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{branch, BranchOptions};
    use crate::verify::verify_cover;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn found(o: SearchOutcome) -> CoverScheme {
        o.into_scheme().expect("search should finish")
    }

    fn all_nonzero(t: usize) -> BitMatrix {
        BitMatrix::from_rows(
            t,
            (1..(1u64 << t))
                .map(|v| BitVec::from_msb_value(t, v))
                .collect(),
        )
        .unwrap()
    }

    fn random_instance(t: usize, n: usize, rng: &mut ChaCha8Rng) -> BitMatrix {
        loop {
            let mut vals: Vec<u64> = (1..(1u64 << t)).collect();
            vals.shuffle(rng);
            let g = BitMatrix::from_rows(
                t,
                vals[..n]
                    .iter()
                    .map(|&v| BitVec::from_msb_value(t, v))
                    .collect(),
            )
            .unwrap();
            if g.rank() == t {
                return g;
            }
        }
    }

    /// Minimum cover size over subsets of `r`, by plain enumeration.
    fn naive_min(r: &BitMatrix, g: &BitMatrix, k: usize) -> usize {
        let n = r.len();
        let mut masks: Vec<u64> = (1u64..1 << n).collect();
        masks.sort_by_key(|m| m.count_ones());
        masks
            .into_iter()
            .find(|mask| {
                let rows: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let a = r.select(&rows);
                g.rows()
                    .iter()
                    .all(|v| crate::verify::decompose(&a, v, k).unwrap().is_some())
            })
            .map(|mask| mask.count_ones() as usize)
            .unwrap()
    }

    #[test]
    fn two_chain_instance_from_branch() {
        let g = BitMatrix::from_strs(&[
            "100000", "010000", "001000", "000100", "000010", "000001", "111100", "110000",
            "111000",
        ]);
        let b = branch(&g, 2, BranchOptions::default()).unwrap();
        let s = found(search(&b.candidates, &g, 2, SearchLimits::default()).unwrap());
        assert_eq!(s.t_k(), 6);
        assert!(verify_cover(&s, &g).unwrap().ok);
    }

    #[test]
    fn independent_rows_come_back() {
        let g = BitMatrix::from_strs(&["1100", "0110", "0011", "0001"]);
        let s = found(search(&g, &g, 2, SearchLimits::default()).unwrap());
        assert_eq!(s.a_k(), &g);
    }

    #[test]
    fn matches_enumeration_over_candidates() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let g = random_instance(4, 8, &mut rng);
            for k in 2..=3 {
                let b = branch(
                    &g,
                    k,
                    BranchOptions {
                        include_dependents: true,
                    },
                )
                .unwrap();
                let s = found(search(&b.candidates, &g, k, SearchLimits::default()).unwrap());
                assert!(verify_cover(&s, &g).unwrap().ok);
                assert_eq!(s.t_k(), naive_min(&b.candidates, &g, k));
                let opt = found(brute_force_optimal(&g, k, SearchLimits::default(), 4).unwrap());
                assert!(opt.t_k() <= s.t_k());
                assert_eq!(opt.t_k(), naive_min(&all_nonzero(4), &g, k));
            }
        }
    }

    #[test]
    fn brute_force_small_cases() {
        let lim = SearchLimits::default();
        let all3 = all_nonzero(3);
        assert_eq!(
            found(brute_force_optimal(&all3, 1, lim, 5).unwrap()).t_k(),
            7
        );
        let s = found(brute_force_optimal(&all3, 3, lim, 5).unwrap());
        assert_eq!(s.t_k(), 3);
        assert!(verify_cover(&s, &all3).unwrap().ok);
        let tri = BitMatrix::from_strs(&["100", "010", "110"]);
        assert_eq!(
            found(brute_force_optimal(&tri, 2, lim, 5).unwrap()).t_k(),
            2
        );
    }

    #[test]
    fn exhaustion_is_reported() {
        let lim = SearchLimits {
            max_nodes: 3,
            wall_clock: Duration::from_secs(60),
        };
        let g = all_nonzero(4);
        assert!(matches!(
            brute_force_optimal(&g, 2, lim, 5).unwrap(),
            SearchOutcome::Exhausted { .. }
        ));
        assert!(matches!(
            search(&g, &g, 2, lim).unwrap(),
            SearchOutcome::Exhausted { .. }
        ));
    }

    #[test]
    fn errors() {
        let g = BitMatrix::from_strs(&["100", "010", "001"]);
        let r = BitMatrix::from_strs(&["100", "010"]);
        assert!(matches!(
            search(&r, &g, 2, SearchLimits::default()),
            Err(Error::NotInSpan(2))
        ));
        let r = BitMatrix::from_strs(&["100", "010", "111"]);
        assert!(matches!(
            search(&r, &g, 1, SearchLimits::default()),
            Err(Error::NoCover(2))
        ));
        assert!(brute_force_optimal(&all_nonzero(6), 2, SearchLimits::default(), 5).is_err());
    }

    #[test]
    fn counting_bound() {
        assert_eq!(new_sums(0, 3, 2), 6);
        assert_eq!(new_sums(2, 1, 2), 3);
        assert_eq!(multi_new_sums(5, 3, 2), 3);
        assert_eq!(multi_new_sums(2, 2, 3), 1 + 2);
        assert_eq!(shared_cap(4, 5, 2), 4);
        assert_eq!(shared_cap(2, 3, 3), 2 + 2 * 2 + 1);
    }

    #[test]
    fn combinations_in_order() {
        let mut p = vec![0, 1];
        let mut seen = vec![p.clone()];
        while next_combination(&mut p, 4) {
            seen.push(p.clone());
        }
        assert_eq!(seen, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
    }
}
