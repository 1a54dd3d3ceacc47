//! Instance generation and benchmark sweeps.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::bounds::{scr_bounds, t_star};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::schemes::{
    branch, scheme1_adapted, scr, search, BranchOptions, SearchLimits, SearchOutcome,
};

/// Rank failures tolerated before the uniform family plants a basis.
pub const REJECTION_LIMIT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    UniformFullRank,
    /// Disjoint circuits of the given size, plus independent fillers.
    PlantedCircuits(usize),
    /// A basis plus rows that are prefix sums of one fixed basis order.
    Nested,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UniformFullRank => f.write_str("uniform"),
            Self::PlantedCircuits(c) => write!(f, "planted:{c}"),
            Self::Nested => f.write_str("nested"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::UniformFullRank),
            "nested" => Ok(Self::Nested),
            _ => {
                let size = s
                    .strip_prefix("planted:")
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown family {s:?}; expected uniform, nested or planted:<size>"
                        ))
                    })?;
                Ok(Self::PlantedCircuits(size))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub t: usize,
    pub n: usize,
    pub seed: u64,
    pub family: Family,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub g: BitMatrix,
    /// The uniform family gave up on rejection sampling and planted a basis.
    pub basis_forced: bool,
}

/// `n` distinct nonzero rows of rank `t`, deterministic in the seed.
pub fn generate(spec: &InstanceSpec) -> Result<BitMatrix> {
    generate_instance(spec).map(|i| i.g)
}

pub fn generate_instance(spec: &InstanceSpec) -> Result<Instance> {
    let InstanceSpec { t, n, seed, family } = *spec;
    if t == 0 || n < t {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= t <= n, got t={t}, n={n}"
        )));
    }
    if t < 64 && n as u64 > (1u64 << t) - 1 {
        return Err(Error::InvalidParameter(format!(
            "n={n} exceeds the {} nonzero vectors of dimension {t}",
            (1u64 << t) - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::UniformFullRank => Ok(uniform(t, n, &mut rng)),
        Family::PlantedCircuits(c) => planted(t, n, c, &mut rng).map(|g| Instance {
            g,
            basis_forced: false,
        }),
        Family::Nested => nested(t, n, &mut rng).map(|g| Instance {
            g,
            basis_forced: false,
        }),
    }
}

fn nonzero<R: Rng>(t: usize, rng: &mut R) -> BitVec {
    loop {
        let v = BitVec::random(t, rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Extends `rows` with uniformly drawn distinct nonzero vectors up to `n`.
fn fill_distinct<R: Rng>(rows: &mut Vec<BitVec>, t: usize, n: usize, rng: &mut R) {
    let mut seen: FxHashSet<BitVec> = rows.iter().cloned().collect();
    while rows.len() < n {
        let v = nonzero(t, rng);
        if seen.insert(v.clone()) {
            rows.push(v);
        }
    }
}

fn uniform<R: Rng>(t: usize, n: usize, rng: &mut R) -> Instance {
    for _ in 0..REJECTION_LIMIT {
        let mut rows = Vec::with_capacity(n);
        fill_distinct(&mut rows, t, n, rng);
        let g = BitMatrix::from_rows(t, rows).expect("rows have dimension t");
        if g.rank() == t {
            return Instance {
                g,
                basis_forced: false,
            };
        }
    }
    let mut rows: Vec<BitVec> = (0..t).map(|i| BitVec::unit(t, i)).collect();
    fill_distinct(&mut rows, t, n, rng);
    rows.shuffle(rng);
    Instance {
        g: BitMatrix::from_rows(t, rows).expect("rows have dimension t"),
        basis_forced: true,
    }
}

/// `len` random independent vectors supported on `coords`.
fn random_basis<R: Rng>(t: usize, coords: &[usize], len: usize, rng: &mut R) -> Vec<BitVec> {
    loop {
        let rows: Vec<BitVec> = (0..len)
            .map(|_| {
                let mut v = BitVec::zeros(t);
                for &c in coords {
                    v.set(c, rng.gen());
                }
                v
            })
            .collect();
        let m = BitMatrix::from_rows(t, rows).expect("rows have dimension t");
        if m.rank() == len {
            return m.into_rows();
        }
    }
}

fn planted<R: Rng>(t: usize, n: usize, c: usize, rng: &mut R) -> Result<BitMatrix> {
    if c < 3 {
        return Err(Error::InvalidParameter(format!(
            "planted circuits need size >= 3, got {c}"
        )));
    }
    let m = n / c;
    let fillers = n - m * c;
    let used = m * (c - 1);
    if used > t || fillers != t - used {
        return Err(Error::Infeasible(format!(
            "{m} circuits of size {c} use {used} of {t} coordinates and leave {fillers} fillers; \
             rank {t} needs exactly {} fillers",
            t.saturating_sub(used)
        )));
    }
    let mut cols: Vec<usize> = (0..t).collect();
    cols.shuffle(rng);
    let mut rows = Vec::with_capacity(n);
    for block in cols[..used].chunks(c - 1) {
        let basis = random_basis(t, block, c - 1, rng);
        let mut sum = BitVec::zeros(t);
        for b in &basis {
            sum.xor_assign(b);
        }
        rows.extend(basis);
        rows.push(sum);
    }
    // Each filler owns one private coordinate, so it lies on no circuit.
    for &own in &cols[used..] {
        let mut v = BitVec::zeros(t);
        for &o in &cols[..used] {
            v.set(o, rng.gen());
        }
        v.set(own, true);
        rows.push(v);
    }
    rows.shuffle(rng);
    BitMatrix::from_rows(t, rows)
}

fn nested<R: Rng>(t: usize, n: usize, rng: &mut R) -> Result<BitMatrix> {
    if n > 2 * t - 1 {
        return Err(Error::Infeasible(format!(
            "nested family has at most {} rows for t={t}, got n={n}",
            2 * t - 1
        )));
    }
    let all: Vec<usize> = (0..t).collect();
    let basis = random_basis(t, &all, t, rng);
    let mut lengths: Vec<usize> = (2..=t).collect();
    lengths.shuffle(rng);
    let mut rows = basis.clone();
    for &len in &lengths[..n - t] {
        let mut v = BitVec::zeros(t);
        for b in &basis[..len] {
            v.xor_assign(b);
        }
        rows.push(v);
    }
    BitMatrix::from_rows(t, rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Lb,
    Ub,
    Scheme1,
    Scr,
    ScrBest,
    ScrWorst,
    Bs,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lb => "LB",
            Self::Ub => "UB",
            Self::Scheme1 => "Scheme1",
            Self::Scr => "SCR",
            Self::ScrBest => "SCR_best",
            Self::ScrWorst => "SCR_worst",
            Self::Bs => "BS",
        }
    }

    /// Records that come from running a construction, as opposed to bounds.
    pub fn is_construction(self) -> bool {
        matches!(self, Self::Scheme1 | Self::Scr | Self::Bs)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    LimitExhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ok => "ok",
            Self::LimitExhausted => "limit_exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub scheme: SchemeKind,
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub seed: u64,
    /// Absent when the run did not complete.
    pub t_k: Option<u64>,
    pub elapsed_ms: f64,
    pub status: Status,
    pub basis_forced: bool,
}

pub const CSV_HEADER: &str = "scheme,n,t,k,seed,t_k,elapsed_ms,status";

impl BenchRecord {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3},{}",
            self.scheme,
            self.n,
            self.t,
            self.k,
            self.seed,
            self.t_k.map(|v| v.to_string()).unwrap_or_default(),
            self.elapsed_ms,
            self.status
        )
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub t: usize,
    pub k: usize,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub seed0: u64,
    pub family: Family,
    pub limits: SearchLimits,
    /// Row orders tried per circuit search in SCR.
    pub circuit_trials: usize,
    /// Worker threads; 1 runs inline.
    pub jobs: usize,
    /// Off writes 0 for every elapsed time so output is reproducible.
    pub record_timing: bool,
}

impl SweepConfig {
    pub fn new(t: usize, k: usize, n_values: Vec<usize>, trials: usize, seed0: u64) -> Self {
        Self {
            t,
            k,
            n_values,
            trials,
            seed0,
            family: Family::UniformFullRank,
            limits: SearchLimits::default(),
            circuit_trials: 10,
            jobs: 1,
            record_timing: true,
        }
    }

    pub fn csv_file_name(&self) -> String {
        format!("sweep_T{}_k{}.csv", self.t, self.k)
    }
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    let ms = if on {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    (out, ms)
}

fn run_instance(cfg: &SweepConfig, n: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    let (t, k) = (cfg.t, cfg.k);
    let inst = generate_instance(&InstanceSpec {
        t,
        n,
        seed,
        family: cfg.family,
    })?;
    let g = &inst.g;
    let record = |scheme, t_k: Option<u64>, elapsed_ms| BenchRecord {
        scheme,
        n,
        t,
        k,
        seed,
        t_k,
        elapsed_ms,
        status: if t_k.is_some() {
            Status::Ok
        } else {
            Status::LimitExhausted
        },
        basis_forced: inst.basis_forced,
    };
    let mut out = vec![
        record(SchemeKind::Lb, Some(t_star(n as u64, k as u64)), 0.0),
        record(SchemeKind::Ub, Some(n as u64), 0.0),
    ];

    let (s1, ms) = timed(cfg.record_timing, || scheme1_adapted(g, k));
    out.push(record(SchemeKind::Scheme1, Some(s1?.t_k() as u64), ms));

    if k.is_power_of_two() {
        let q = k.trailing_zeros();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, ms) = timed(cfg.record_timing, || {
            scr(g, q, cfg.circuit_trials, &mut rng)
        });
        out.push(record(SchemeKind::Scr, Some(s?.t_k() as u64), ms));
        let b = scr_bounds(n as u64, t as u64, q);
        out.push(record(SchemeKind::ScrBest, Some(b.best), 0.0));
        out.push(record(SchemeKind::ScrWorst, Some(b.worst), 0.0));
    } else {
        for kind in [SchemeKind::Scr, SchemeKind::ScrBest, SchemeKind::ScrWorst] {
            out.push(record(kind, None, 0.0));
        }
    }

    let (bs, ms) = timed(cfg.record_timing, || -> Result<SearchOutcome> {
        let candidates = if k >= 2 {
            branch(g, k, BranchOptions::default())?.candidates
        } else {
            g.clone()
        };
        search(&candidates, g, k, cfg.limits)
    });
    out.push(record(
        SchemeKind::Bs,
        bs?.scheme().map(|s| s.t_k() as u64),
        ms,
    ));
    Ok(out)
}

/// Runs every construction on `trials` instances for each `n`.
///
/// Records come out in `(n, trial)` order whatever the number of jobs. The
/// trial with position `p` in that order uses seed `seed0 + p`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<BenchRecord>> {
    if cfg.k == 0 || cfg.trials == 0 || cfg.circuit_trials == 0 {
        return Err(Error::InvalidParameter(
            "k, trials and circuit trials must be positive".into(),
        ));
    }
    let jobs: Vec<(usize, u64)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| std::iter::repeat_n(n, cfg.trials))
        .enumerate()
        .map(|(p, n)| (n, cfg.seed0.wrapping_add(p as u64)))
        .collect();
    let results: Vec<Result<Vec<BenchRecord>>> = if cfg.jobs <= 1 {
        jobs.iter()
            .map(|&(n, seed)| run_instance(cfg, n, seed))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            jobs.par_iter()
                .map(|&(n, seed)| run_instance(cfg, n, seed))
                .collect()
        })
    };
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    Ok(records)
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

/// Writes `records` to `dir/sweep_T<t>_k<k>.csv` and returns the path.
pub fn write_csv(cfg: &SweepConfig, records: &[BenchRecord], dir: &Path) -> Result<PathBuf> {
    let path = dir.join(cfg.csv_file_name());
    std::fs::write(&path, to_csv(records))?;
    Ok(path)
}

/// Mean `t_k` of the completed records for one scheme and `n`.
pub fn mean_t_k(records: &[BenchRecord], scheme: SchemeKind, n: usize) -> Option<f64> {
    let vals: Vec<f64> = records
        .iter()
        .filter(|r| r.scheme == scheme && r.n == n)
        .filter_map(|r| r.t_k)
        .map(|v| v as f64)
        .collect();
    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::find_small_circuit;
    use crate::schemes::{chain_cover, nested_chain_order};
    use crate::verify::verify_cover;

    fn spec(t: usize, n: usize, seed: u64, family: Family) -> InstanceSpec {
        InstanceSpec { t, n, seed, family }
    }

    #[test]
    fn planted_triangles() {
        let g = generate(&spec(6, 9, 1, Family::PlantedCircuits(3))).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.rank(), 6);
        g.check_nonzero_distinct().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(find_small_circuit(&g, 10, &mut rng).unwrap().len(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = scr(&g, 1, 10, &mut rng).unwrap();
        assert_eq!(s.t_k(), 6);
    }

    #[test]
    fn square_uniform_is_invertible() {
        for seed in 0..20 {
            let g = generate(&spec(6, 6, seed, Family::UniformFullRank)).unwrap();
            assert_eq!(g.rank(), 6);
        }
    }

    #[test]
    fn nested_meets_the_chain_value() {
        let g = generate(&spec(6, 9, 1, Family::Nested)).unwrap();
        assert_eq!(g.rank(), 6);
        let order = nested_chain_order(&g).unwrap();
        let s = chain_cover(&g, &[order]).unwrap();
        assert_eq!(s.t_k(), 6);
        assert!(verify_cover(&s, &g).unwrap().ok);
    }

    #[test]
    fn infeasible_specs() {
        assert!(generate(&spec(6, 10, 1, Family::PlantedCircuits(3))).is_err());
        assert!(generate(&spec(6, 9, 1, Family::PlantedCircuits(2))).is_err());
        assert!(generate(&spec(6, 12, 1, Family::Nested)).is_err());
        assert!(generate(&spec(3, 8, 1, Family::UniformFullRank)).is_err());
        assert!(generate(&spec(4, 3, 1, Family::UniformFullRank)).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate(&spec(6, 20, 7, Family::UniformFullRank)).unwrap();
        let b = generate(&spec(6, 20, 7, Family::UniformFullRank)).unwrap();
        assert_eq!(a, b);
        a.check_nonzero_distinct().unwrap();
    }

    #[test]
    fn family_names_round_trip() {
        for f in [
            Family::UniformFullRank,
            Family::Nested,
            Family::PlantedCircuits(4),
        ] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("planted".parse::<Family>().is_err());
    }

    #[test]
    fn sweep_records_and_csv() {
        let mut cfg = SweepConfig::new(6, 2, vec![7, 21], 2, 0);
        cfg.record_timing = false;
        let records = run_sweep(&cfg).unwrap();
        assert_eq!(records.len(), 2 * 2 * 7);
        for r in records.iter().filter(|r| r.scheme.is_construction()) {
            let v = r.t_k.unwrap();
            assert!(v >= t_star(r.n as u64, 2), "{r:?}");
            if r.scheme != SchemeKind::Scheme1 {
                assert!(v <= r.n as u64, "{r:?}");
            }
        }
        let csv = to_csv(&records);
        assert!(csv.starts_with("scheme,n,t,k,seed,t_k,elapsed_ms,status\nLB,7,6,2,0,"));
        cfg.jobs = 3;
        assert_eq!(to_csv(&run_sweep(&cfg).unwrap()), csv);
        assert_eq!(cfg.csv_file_name(), "sweep_T6_k2.csv");
    }

    #[test]
    fn nested_sweep_gives_t_for_bs() {
        let mut cfg = SweepConfig::new(6, 2, vec![7], 5, 3);
        cfg.family = Family::Nested;
        let records = run_sweep(&cfg).unwrap();
        for r in records.iter().filter(|r| r.scheme == SchemeKind::Bs) {
            assert_eq!(r.t_k, Some(6));
        }
    }

    #[test]
    fn non_power_of_two_k_marks_scr() {
        let cfg = SweepConfig::new(6, 3, vec![12], 1, 0);
        let records = run_sweep(&cfg).unwrap();
        let scr = records
            .iter()
            .find(|r| r.scheme == SchemeKind::Scr)
            .unwrap();
        assert_eq!(scr.status, Status::LimitExhausted);
        assert!(scr.to_csv_line().ends_with(",,0.000,limit_exhausted"));
    }
}
