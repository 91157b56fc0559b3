//! Exhaustive enumeration of binary sequences with bounded aperiodic
//! sidelobes, and exhaustive merit-factor record scans.
//!
//! Both searches assign `s_0, s_1, ...` left to right. Placing `s_m` adds
//! one term `s_{m-t} s_m` to every lag `t <= m` and leaves
//! `r = n - 1 - m` unassigned terms in each of those lags, so a lag with
//! partial sum `p` can still finish anywhere in `p - r ..= p + r` in steps of
//! two. The final `rho(t)` has the parity of `n - t`.
//!
//! The subtree forest at depth `min(8, n/2)` is searched in parallel; every
//! worker owns its prefixes and results are merged in prefix order and then
//! sorted, so output does not depend on the worker count.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicI64, Ordering};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::autocorr::aperiodic_binary;
use crate::error::{Error, Result};
use crate::merit::{merit_factor_binary, merit_lower_bound_exact, RationalJson};
use crate::sequence::{canonical_signs, orbit};

/// Longest length enumerated without an explicit override.
pub const DEFAULT_MAX_N: usize = 34;
/// Longest length the unpruned oracle accepts.
pub const ORACLE_MAX_N: usize = 24;
/// Longest length the record scan accepts without an override.
pub const RECORDS_MAX_N: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Enumerate,
    Count,
    /// Best merit factor among the survivors.
    Records,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSpec {
    pub n: usize,
    /// Sidelobe bound `c`; binary sidelobes are integers so only `floor(c)`
    /// matters.
    pub bound: f64,
    pub mode: SearchMode,
    pub symmetry_reduction: bool,
    /// Guard on `n`; raise it to search longer sequences.
    pub max_n: usize,
}

impl SearchSpec {
    pub fn new(n: usize, bound: f64, mode: SearchMode) -> Self {
        SearchSpec {
            n,
            bound,
            mode,
            symmetry_reduction: false,
            max_n: DEFAULT_MAX_N,
        }
    }

    pub fn with_symmetry(mut self, on: bool) -> Self {
        self.symmetry_reduction = on;
        self
    }

    pub fn with_max_n(mut self, max_n: usize) -> Self {
        self.max_n = max_n;
        self
    }

    fn integral_bound(&self) -> Result<i64> {
        if !self.bound.is_finite() || self.bound < 0.0 {
            return Err(Error::Domain(format!(
                "sidelobe bound must be a finite c >= 0, got {}",
                self.bound
            )));
        }
        Ok(self.bound.floor() as i64)
    }

    fn validate(&self) -> Result<i64> {
        if self.n < 2 {
            return Err(Error::Domain(format!(
                "search needs n >= 2, got {}",
                self.n
            )));
        }
        if self.n > self.max_n {
            return Err(Error::GuardExceeded {
                n: self.n,
                limit: self.max_n,
            });
        }
        self.integral_bound()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchRecord {
    pub merit: RationalJson,
    pub witness: Vec<i8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub bound: i64,
    /// Number of survivors, counted without symmetry reduction.
    pub count: u64,
    /// Survivors in lexicographic order, or canonical representatives when
    /// symmetry reduction is on. Empty in count mode.
    pub sequences: Vec<Vec<i8>>,
    /// Orbit size of each representative (symmetry reduction only).
    pub orbit_sizes: Vec<usize>,
    pub record: Option<SearchRecord>,
}

/// Largest admissible `|rho(t)|` given the parity of `n - t`.
fn parity_bound(c: i64, n: usize, t: usize) -> i64 {
    if (c - (n - t) as i64).rem_euclid(2) == 0 {
        c
    } else {
        c - 1
    }
}

struct BoundedDfs {
    n: usize,
    lag_bound: Vec<i64>,
    signs: Vec<i8>,
    partial: Vec<i64>,
}

impl BoundedDfs {
    fn new(n: usize, c: i64) -> Self {
        BoundedDfs {
            n,
            lag_bound: (0..n).map(|t| parity_bound(c, n, t)).collect(),
            signs: vec![0; n],
            partial: vec![0; n],
        }
    }

    /// Places `s_m = sign`; returns false (state unchanged) if some lag can no
    /// longer meet its bound.
    fn place(&mut self, m: usize, sign: i8) -> bool {
        self.signs[m] = sign;
        let remaining = (self.n - 1 - m) as i64;
        let mut ok = true;
        let mut touched = 0;
        for t in 1..=m {
            self.partial[t] += i64::from(self.signs[m - t] * sign);
            touched = t;
            if self.partial[t].abs() - remaining > self.lag_bound[t] {
                ok = false;
                break;
            }
        }
        if !ok {
            self.unplace_upto(m, touched);
        }
        ok
    }

    fn unplace_upto(&mut self, m: usize, last_lag: usize) {
        let sign = self.signs[m];
        for t in 1..=last_lag {
            self.partial[t] -= i64::from(self.signs[m - t] * sign);
        }
    }

    fn unplace(&mut self, m: usize) {
        self.unplace_upto(m, m);
    }

    fn run(&mut self, m: usize, out: &mut Vec<Vec<i8>>) {
        if m == self.n {
            out.push(self.signs.clone());
            return;
        }
        for sign in [-1i8, 1] {
            if self.place(m, sign) {
                self.run(m + 1, out);
                self.unplace(m);
            }
        }
    }
}

fn split_depth(n: usize) -> usize {
    (n / 2).clamp(1, 8)
}

/// Prefixes of length `depth`, optionally with `s_0 = +1`, in lexicographic
/// order.
fn prefixes(depth: usize, fix_first: bool) -> Vec<Vec<i8>> {
    let free = if fix_first { depth - 1 } else { depth };
    (0..1u32 << free)
        .map(|bits| {
            let mut p = Vec::with_capacity(depth);
            if fix_first {
                p.push(1);
            }
            for i in (0..free).rev() {
                p.push(if bits >> i & 1 == 0 { -1 } else { 1 });
            }
            p
        })
        .collect()
}

fn bounded_survivors(n: usize, c: i64, fix_first: bool) -> Vec<Vec<i8>> {
    let depth = split_depth(n);
    let chunks: Vec<Vec<Vec<i8>>> = prefixes(depth, fix_first)
        .into_par_iter()
        .map(|prefix| {
            let mut dfs = BoundedDfs::new(n, c);
            let mut out = Vec::new();
            for (m, &s) in prefix.iter().enumerate() {
                if !dfs.place(m, s) {
                    return out;
                }
            }
            dfs.run(depth, &mut out);
            out
        })
        .collect();
    let mut all: Vec<Vec<i8>> = chunks.into_iter().flatten().collect();
    all.sort();
    all
}

/// All binary sequences of length `spec.n` with `max_t |rho(t)| <= c`.
pub fn enumerate_bounded(spec: &SearchSpec) -> Result<SearchOutcome> {
    let c = spec.validate()?;
    let n = spec.n;
    let found = bounded_survivors(n, c, spec.symmetry_reduction);

    let (count, sequences, orbit_sizes) = if spec.symmetry_reduction {
        // Negation pairs every s_0 = -1 survivor with an s_0 = +1 one.
        let count = 2 * found.len() as u64;
        let mut reps: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
        for s in &found {
            let canon = canonical_signs(s);
            reps.entry(canon).or_insert_with_key(|c| orbit(c).len());
        }
        let total: u64 = reps.values().map(|&k| k as u64).sum();
        if total != count {
            return Err(Error::Inconsistent {
                what: "symmetry-reduced survivor count",
                left: total as f64,
                right: count as f64,
            });
        }
        let (seqs, sizes) = reps.into_iter().unzip();
        (count, seqs, sizes)
    } else {
        (found.len() as u64, found, Vec::new())
    };

    let record = match spec.mode {
        SearchMode::Records => best_of(&sequences)?,
        _ => None,
    };
    let (sequences, orbit_sizes) = match spec.mode {
        SearchMode::Count => (Vec::new(), Vec::new()),
        _ => (sequences, orbit_sizes),
    };
    Ok(SearchOutcome {
        n,
        bound: c,
        count,
        sequences,
        orbit_sizes,
        record,
    })
}

fn best_of(seqs: &[Vec<i8>]) -> Result<Option<SearchRecord>> {
    let mut best: Option<(Ratio<i64>, Vec<i8>)> = None;
    for s in seqs {
        let f = merit_factor_binary(s)?;
        let w = canonical_signs(s);
        let better = match &best {
            None => true,
            Some((bf, bw)) => f > *bf || (f == *bf && w < *bw),
        };
        if better {
            best = Some((f, w));
        }
    }
    Ok(best.map(|(f, w)| SearchRecord {
        merit: f.into(),
        witness: w,
    }))
}

/// Unpruned reference: scans all `2^n` sequences and keeps those with
/// `max_t |rho(t)| <= c`.
pub fn brute_force_oracle(n: usize, c: f64) -> Result<Vec<Vec<i8>>> {
    if n > ORACLE_MAX_N {
        return Err(Error::GuardExceeded {
            n,
            limit: ORACLE_MAX_N,
        });
    }
    let c = SearchSpec::new(n, c, SearchMode::Enumerate)
        .with_max_n(ORACLE_MAX_N)
        .validate()?;
    let mut out: Vec<Vec<i8>> = (0u32..1 << n)
        .into_par_iter()
        .filter_map(|bits| {
            let signs: Vec<i8> = (0..n)
                .map(|i| if bits >> (n - 1 - i) & 1 == 0 { -1 } else { 1 })
                .collect();
            let rho = aperiodic_binary(&signs);
            rho[1..].iter().all(|r| r.abs() <= c).then_some(signs)
        })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct MeritRecord {
    pub n: usize,
    pub merit: RationalJson,
    /// `sum_{t>=1} rho(t)^2` of the optimum.
    pub energy: i64,
    /// Lexicographically smallest canonical optimum.
    pub witness: Vec<i8>,
    /// Number of optimal canonical representatives.
    pub optimal_classes: usize,
}

struct EnergyDfs<'a> {
    n: usize,
    signs: Vec<i8>,
    partial: Vec<i64>,
    best: &'a AtomicI64,
    optima: Vec<(i64, Vec<i8>)>,
}

impl EnergyDfs<'_> {
    /// Lower bound on the final energy after `s_0..=s_m` are placed.
    fn lower_bound(&self, m: usize) -> i64 {
        let remaining = (self.n - 1 - m) as i64;
        (1..self.n)
            .map(|t| {
                let parity = ((self.n - t) % 2) as i64;
                let (p, r) = if t <= m {
                    (self.partial[t].abs(), remaining)
                } else {
                    (0, (self.n - t) as i64)
                };
                let least = (p - r).max(parity);
                least * least
            })
            .sum()
    }

    fn set(&mut self, m: usize, sign: i8, dir: i64) {
        self.signs[m] = sign;
        for t in 1..=m {
            self.partial[t] += dir * i64::from(self.signs[m - t] * sign);
        }
    }

    fn run(&mut self, m: usize) {
        for sign in [-1i8, 1] {
            self.set(m, sign, 1);
            let lb = self.lower_bound(m);
            if lb <= self.best.load(Ordering::Relaxed) {
                if m + 1 == self.n {
                    // All lags are determined, so the bound is the energy.
                    self.best.fetch_min(lb, Ordering::Relaxed);
                    self.optima.push((lb, self.signs.clone()));
                } else {
                    self.run(m + 1);
                }
            }
            self.set(m, sign, -1);
        }
    }
}

fn merit_record(n: usize) -> Result<MeritRecord> {
    let best = AtomicI64::new(i64::MAX);
    let depth = split_depth(n);
    let found: Vec<(i64, Vec<i8>)> = prefixes(depth, true)
        .into_par_iter()
        .flat_map_iter(|prefix| {
            let mut dfs = EnergyDfs {
                n,
                signs: vec![0; n],
                partial: vec![0; n],
                best: &best,
                optima: Vec::new(),
            };
            for (m, &s) in prefix.iter().enumerate() {
                dfs.set(m, s, 1);
            }
            dfs.run(depth);
            dfs.optima
        })
        .collect();
    let energy = found
        .iter()
        .map(|(e, _)| *e)
        .min()
        .expect("search space is nonempty");
    let classes: BTreeMap<Vec<i8>, ()> = found
        .into_iter()
        .filter(|(e, _)| *e == energy)
        .map(|(_, s)| (canonical_signs(&s), ()))
        .collect();
    let witness = classes.keys().next().expect("optimum exists").clone();
    let merit = merit_factor_binary(&witness)?;
    Ok(MeritRecord {
        n,
        merit: merit.into(),
        energy,
        witness,
        optimal_classes: classes.len(),
    })
}

/// Best merit factor over all binary sequences of each length `2..=n_max`.
pub fn merit_records(n_max: usize, max_n: usize) -> Result<Vec<MeritRecord>> {
    if n_max > max_n {
        return Err(Error::GuardExceeded {
            n: n_max,
            limit: max_n,
        });
    }
    (2..=n_max).map(merit_record).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheckReport {
    pub n: usize,
    pub bound: i64,
    pub survivors: u64,
    pub violations: usize,
    pub min_merit: Option<RationalJson>,
    /// `n^2 / (2 (n - 1) c^2)`; absent for `c = 0`.
    pub lower_bound: Option<RationalJson>,
}

/// Checks every survivor of `spec` against the merit lower bound for
/// sidelobes bounded by `c`.
pub fn bound_check_report(spec: &SearchSpec) -> Result<BoundCheckReport> {
    let spec = SearchSpec {
        mode: SearchMode::Enumerate,
        symmetry_reduction: false,
        ..spec.clone()
    };
    let outcome = enumerate_bounded(&spec)?;
    let c = outcome.bound;
    let lower = if c > 0 {
        Some(merit_lower_bound_exact(spec.n, c)?)
    } else {
        None
    };
    let merits = outcome
        .sequences
        .iter()
        .map(|s| merit_factor_binary(s))
        .collect::<Result<Vec<_>>>()?;
    let violations = match lower {
        Some(lb) => merits.iter().filter(|&&f| f < lb).count(),
        None => 0,
    };
    Ok(BoundCheckReport {
        n: spec.n,
        bound: c,
        survivors: outcome.count,
        violations,
        min_merit: merits.iter().min().copied().map(Into::into),
        lower_bound: lower.map(Into::into),
    })
}

/// Survivor counts for each `n` at a fixed bound.
pub fn count_trend(
    bound: f64,
    lengths: impl IntoIterator<Item = usize>,
) -> Result<Vec<(usize, u64)>> {
    lengths
        .into_iter()
        .map(|n| {
            let spec = SearchSpec::new(n, bound, SearchMode::Count).with_symmetry(true);
            enumerate_bounded(&spec).map(|o| (n, o.count))
        })
        .collect()
}
