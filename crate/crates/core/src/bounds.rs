//! Closed-form bounds and reference values for the number of rows `T_k` of a
//! k-limited-access matrix, as functions of the target count `n`, the
//! dimension `t` and the access limit `k`.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// Whether `sum_{i=1..k} C(tk, i) >= n`, computed exactly.
///
/// Terms are built incrementally in `u128`; the loop stops as soon as the
/// running sum reaches `n`, so no intermediate term exceeds `n * tk`.
fn subsets_reach(tk: u64, k: u64, n: u64) -> bool {
    let n = u128::from(n);
    let mut term: u128 = 1;
    let mut sum: u128 = 0;
    for i in 1..=k.min(tk) {
        term = term * u128::from(tk - i + 1) / u128::from(i);
        sum += term;
        if sum >= n {
            return true;
        }
    }
    false
}

/// Smallest `T_k` with `sum_{i=1..k} C(T_k, i) >= n`.
pub fn t_star(n: u64, k: u64) -> u64 {
    if n <= 1 {
        return 1;
    }
    if k == 1 {
        return n;
    }
    (1..)
        .find(|&tk| subsets_reach(tk, k, n))
        .expect("sum grows without bound")
}

fn half_ceil(t: u64) -> u64 {
    t.div_ceil(2)
}

/// Analytic full-space lower bound `2^((t-1)/k) * k^((k-1)/k) / e`.
///
/// Defined for `t >= 2` and `k < ceil(t/2)`; `k = 1` is also accepted since
/// the bound then reads `2^(t-1)/e`, which never exceeds `2^t - 1`.
pub fn t_lb_analytic(t: u64, k: u64) -> Result<f64> {
    if t < 2 || k == 0 || (k != 1 && k >= half_ceil(t)) {
        return Err(Error::InvalidParameter(format!(
            "analytic lower bound needs t >= 2 and 1 <= k < ceil(t/2), got t={t}, k={k}"
        )));
    }
    let (t, k) = (t as f64, k as f64);
    Ok(2f64.powf((t - 1.0) / k) * k.powf((k - 1.0) / k) / E)
}

/// `k * 2^ceil(t/k)`, the row count guaranteed by the block construction.
pub fn theorem1_ub(t: u64, k: u64) -> Result<u64> {
    if k == 0 || k >= half_ceil(t) {
        return Err(Error::InvalidParameter(format!(
            "block construction bound needs 1 <= k < ceil(t/2), got t={t}, k={k}"
        )));
    }
    1u64.checked_shl(t.div_ceil(k) as u32)
        .and_then(|p| p.checked_mul(k))
        .ok_or_else(|| Error::InvalidParameter(format!("k*2^ceil(t/k) overflows for t={t}")))
}

/// Reference value `min(t + 1, n)` for the regime `ceil(t/2) <= k < t`.
pub fn large_k_value(t: u64, n: u64) -> u64 {
    (t + 1).min(n)
}

/// Sending `G` itself: every target reads exactly one row.
pub fn uncoded_ub(n: u64) -> u64 {
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScrBounds {
    pub best: u64,
    pub worst: u64,
}

pub fn scr_best_step(n: u64) -> u64 {
    2 * (n / 3)
}

pub fn scr_worst_step(n: u64, t: u64) -> u64 {
    t * (n / (t + 1) + 1)
}

/// Best and worst row counts of `q` successive circuit-removal rounds.
pub fn scr_bounds(n: u64, t: u64, q: u32) -> ScrBounds {
    let mut best = n;
    let mut worst = n;
    for _ in 0..q {
        best = scr_best_step(best);
        worst = scr_worst_step(worst, t);
    }
    ScrBounds { best, worst }
}

/// Every bound for one `(n, t, k)` instance. Entries that are undefined for
/// the given parameters are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub t: u64,
    pub k: u64,
    pub q: Option<u32>,
    pub t_star: u64,
    pub t_lb_analytic: Option<f64>,
    pub theorem1_ub: Option<u64>,
    pub large_k_value: u64,
    pub uncoded_ub: u64,
    pub scr: Option<ScrBounds>,
}

impl BoundReport {
    /// `q` defaults to `log2(k)` when `k` is a power of two.
    pub fn new(n: u64, t: u64, k: u64, q: Option<u32>) -> Result<Self> {
        if n == 0 || t == 0 || k == 0 || k > t {
            return Err(Error::InvalidParameter(format!(
                "need n >= 1, t >= 1, 1 <= k <= t; got n={n}, t={t}, k={k}"
            )));
        }
        let q = q.or_else(|| k.is_power_of_two().then(|| k.trailing_zeros()));
        Ok(Self {
            n,
            t,
            k,
            q,
            t_star: t_star(n, k),
            t_lb_analytic: t_lb_analytic(t, k).ok(),
            theorem1_ub: theorem1_ub(t, k).ok(),
            large_k_value: large_k_value(t, n),
            uncoded_ub: uncoded_ub(n),
            scr: q.map(|q| scr_bounds(n, t, q)),
        })
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
        }
        vec![
            ("n", self.n.to_string()),
            ("t", self.t.to_string()),
            ("k", self.k.to_string()),
            ("q", opt(self.q)),
            ("t_star", self.t_star.to_string()),
            (
                "t_lb_analytic",
                opt(self.t_lb_analytic.map(|v| format!("{v:.6}"))),
            ),
            ("theorem1_ub", opt(self.theorem1_ub)),
            ("large_k_value", self.large_k_value.to_string()),
            ("uncoded", self.uncoded_ub.to_string()),
            ("scr_best", opt(self.scr.map(|s| s.best))),
            ("scr_worst", opt(self.scr.map(|s| s.worst))),
        ]
    }

    /// One `key=value` line per entry.
    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    /// Header line plus one value line.
    pub fn to_csv(&self) -> String {
        let entries = self.entries();
        let header: Vec<&str> = entries.iter().map(|(k, _)| *k).collect();
        let values: Vec<&str> = entries.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", header.join(","), values.join(","))
    }
}
