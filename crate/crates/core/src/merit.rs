//! Merit factor and L4 norm.
//!
//! The discrete route works from the aperiodic autocorrelation,
//! `F = rho(0)^2 / (2 sum_{t>=1} |rho(t)|^2)`, in exact rational arithmetic
//! for binary input. The analytic route uses the norm identity
//! `F = ||s||_2^4 / (||s||_4^4 - ||s||_2^4)` with the L4 integral taken from
//! the quadrature module.

use num_rational::Ratio;
use serde::Serialize;

use crate::autocorr::{aperiodic_autocorrelation, aperiodic_binary};
use crate::error::{Error, Result};
use crate::quadrature::{exact_l4_integral, golden_nodes, qmc_l4_integral};
use crate::sequence::Sequence;

/// Relative agreement required between the discrete and exact-analytic routes.
pub const TOL_ROUTES: f64 = 1e-9;

/// Largest length accepted by the closed-form rational predictions; keeps
/// `2n^3` well inside `i64`.
const MAX_RATIONAL_N: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeritFactor {
    /// Exact value for binary sequences.
    Rational(Ratio<i64>),
    Real(f64),
    /// Zero sidelobe energy; only reachable off the binary alphabet.
    Infinite,
}

impl MeritFactor {
    pub fn to_f64(&self) -> f64 {
        match self {
            MeritFactor::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            MeritFactor::Real(v) => *v,
            MeritFactor::Infinite => f64::INFINITY,
        }
    }

    pub fn as_rational(&self) -> Option<Ratio<i64>> {
        match self {
            MeritFactor::Rational(r) => Some(*r),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, MeritFactor::Infinite)
    }
}

/// `2 sum_{t>=1} rho(t)^2` for a sign vector.
pub fn sidelobe_energy_binary(signs: &[i8]) -> i64 {
    2 * aperiodic_binary(signs)[1..]
        .iter()
        .map(|r| r * r)
        .sum::<i64>()
}

/// `2 sum_{t>=1} |rho(t)|^2`.
pub fn sidelobe_energy(s: &Sequence) -> f64 {
    2.0 * aperiodic_autocorrelation(s)[1..]
        .iter()
        .map(|r| r.norm_sqr())
        .sum::<f64>()
}

/// Exact merit factor `n^2 / (2 sum rho(t)^2)` of a sign vector of length >= 2.
pub fn merit_factor_binary(signs: &[i8]) -> Result<Ratio<i64>> {
    if signs.len() < 2 {
        return Err(Error::Domain("merit factor needs n >= 2".into()));
    }
    let n = signs.len() as i64;
    // |rho(n-1)| = 1, so the energy is never zero here.
    Ok(Ratio::new(n * n, sidelobe_energy_binary(signs)))
}

pub fn merit_factor_discrete(s: &Sequence) -> Result<MeritFactor> {
    if s.len() < 2 {
        return Err(Error::Domain("merit factor needs n >= 2".into()));
    }
    if let Some(signs) = s.signs() {
        return merit_factor_binary(&signs).map(MeritFactor::Rational);
    }
    let rho = aperiodic_autocorrelation(s);
    let peak = rho[0].re;
    let energy = 2.0 * rho[1..].iter().map(|r| r.norm_sqr()).sum::<f64>();
    // Sidelobes below 1e-12 of the peak are roundoff.
    if (energy / 2.0).sqrt() <= 1e-12 * peak {
        return Ok(MeritFactor::Infinite);
    }
    Ok(MeritFactor::Real(peak * peak / energy))
}

/// `||s||_4^4 = rho(0)^2 + 2 sum_{t>=1} |rho(t)|^2`.
pub fn l4_norm_fourth(s: &Sequence) -> f64 {
    let rho = aperiodic_autocorrelation(s);
    rho[0].re * rho[0].re + 2.0 * rho[1..].iter().map(|r| r.norm_sqr()).sum::<f64>()
}

pub fn l4_norm_fourth_binary(signs: &[i8]) -> i64 {
    let n = signs.len() as i64;
    n * n + sidelobe_energy_binary(signs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalyticRoute {
    /// Exact equispaced quadrature.
    Exact,
    /// Quasi-Monte Carlo over this many golden-ratio nodes.
    Qmc(usize),
}

/// Merit factor from the L2 and L4 norms of `s(z)` on the unit circle.
pub fn merit_factor_analytic(s: &Sequence, route: AnalyticRoute) -> Result<f64> {
    let rho0 = aperiodic_autocorrelation(s)[0].re;
    let l2_fourth = rho0 * rho0;
    let l4_fourth = match route {
        AnalyticRoute::Exact => exact_l4_integral(s),
        AnalyticRoute::Qmc(count) => qmc_l4_integral(s, &golden_nodes(count)?).value,
    };
    let denom = l4_fourth - l2_fourth;
    if denom <= 0.0 {
        let hint = match route {
            AnalyticRoute::Exact => "the sequence has no measurable sidelobe energy",
            AnalyticRoute::Qmc(_) => "the node set is too coarse; use the exact route",
        };
        return Err(Error::RouteFailure(format!(
            "L4^4 - L2^4 = {denom:e} is not positive: {hint}"
        )));
    }
    Ok(l2_fourth / denom)
}

fn check_n(n: usize) -> Result<i64> {
    if !(2..=MAX_RATIONAL_N).contains(&n) {
        return Err(Error::Domain(format!(
            "n must lie in 2..={MAX_RATIONAL_N}, got {n}"
        )));
    }
    Ok(n as i64)
}

/// Smallest merit factor over binary sequences of length `n`, attained by the
/// all-ones and alternating sequences: `3n^2 / (2n^3 - 3n^2 + n)`.
pub fn minimal_merit_factor(n: usize) -> Result<Ratio<i64>> {
    let n = check_n(n)?;
    Ok(Ratio::new(3 * n * n, 2 * n * n * n - 3 * n * n + n))
}

/// `n^2 + n` for even `n`, `n^2 + n - 1` for odd `n`.
pub fn barker_l4_prediction(n: usize) -> Result<i64> {
    let n = check_n(n)?;
    Ok(if n % 2 == 0 { n * n + n } else { n * n + n - 1 })
}

/// `n` for even `n`, `n^2 / (n - 1)` for odd `n`.
pub fn barker_merit_prediction(n: usize) -> Result<Ratio<i64>> {
    let n = check_n(n)?;
    Ok(if n % 2 == 0 {
        Ratio::from_integer(n)
    } else {
        Ratio::new(n * n, n - 1)
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeritLowerBound {
    /// `n^2 / (2 (n - 1) c^2)`.
    pub corrected: f64,
    /// The weaker tail `n / (2 c^2)`.
    pub tail: f64,
}

/// Lower bound on the merit factor of any sequence of length `n` whose
/// sidelobes satisfy `|rho(t)| <= c`.
pub fn merit_lower_bound(n: usize, c: f64) -> Result<MeritLowerBound> {
    if n < 2 || !c.is_finite() || c <= 0.0 {
        return Err(Error::Domain(format!(
            "merit lower bound needs n >= 2 and c > 0, got n={n}, c={c}"
        )));
    }
    let n = n as f64;
    Ok(MeritLowerBound {
        corrected: n * n / (2.0 * (n - 1.0) * c * c),
        tail: n / (2.0 * c * c),
    })
}

/// Rational form of the corrected bound for integral `c`.
pub fn merit_lower_bound_exact(n: usize, c: i64) -> Result<Ratio<i64>> {
    let n = check_n(n)?;
    if c <= 0 {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    Ok(Ratio::new(n * n, 2 * (n - 1) * c * c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
}

impl From<Ratio<i64>> for RationalJson {
    fn from(r: Ratio<i64>) -> Self {
        RationalJson {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QmcRoute {
    pub nodes: usize,
    pub l4_fourth: f64,
    pub merit_factor: Option<f64>,
    pub error_bound: f64,
    /// `|qmc - exact| / exact` for the L4 integral.
    pub l4_relative_deviation: f64,
}

/// Which route produced each number and how far the routes are apart.
#[derive(Clone, Debug, Serialize)]
pub struct RouteReport {
    pub l4_discrete: f64,
    pub l4_exact_quadrature: f64,
    pub l4_relative_deviation: f64,
    pub merit_discrete: Option<f64>,
    pub merit_analytic_exact: Option<f64>,
    pub merit_relative_deviation: Option<f64>,
    pub qmc: Option<QmcRoute>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeritReport {
    pub n: usize,
    /// `None` when undefined (n = 1) or infinite.
    pub merit_factor: Option<f64>,
    pub merit_factor_exact: Option<RationalJson>,
    pub infinite_merit: bool,
    pub l4_fourth: f64,
    pub sidelobe_energy: f64,
    pub routes: RouteReport,
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

impl MeritReport {
    /// Computes every route; `qmc_nodes` adds the quasi-Monte Carlo route.
    ///
    /// Fails with [`Error::Inconsistent`] if the discrete and exact-analytic
    /// routes disagree by more than [`TOL_ROUTES`].
    pub fn compute(s: &Sequence, qmc_nodes: Option<usize>) -> Result<Self> {
        let n = s.len();
        let l4_discrete = l4_norm_fourth(s);
        let l4_exact = exact_l4_integral(s);
        let l4_dev = relative(l4_discrete, l4_exact);
        if l4_dev > TOL_ROUTES {
            return Err(Error::Inconsistent {
                what: "L4 norm",
                left: l4_discrete,
                right: l4_exact,
            });
        }
        let rho0 = aperiodic_autocorrelation(s)[0].re;
        let sidelobe = l4_discrete - rho0 * rho0;

        let discrete = if n >= 2 {
            Some(merit_factor_discrete(s)?)
        } else {
            None
        };
        let infinite_merit = discrete.is_some_and(|m| m.is_infinite());
        let finite = discrete.filter(|m| !m.is_infinite());

        let (analytic, merit_dev) = match finite {
            Some(m) => {
                let a = merit_factor_analytic(s, AnalyticRoute::Exact)?;
                let dev = relative(m.to_f64(), a);
                if dev > TOL_ROUTES {
                    return Err(Error::Inconsistent {
                        what: "merit factor",
                        left: m.to_f64(),
                        right: a,
                    });
                }
                (Some(a), Some(dev))
            }
            None => (None, None),
        };

        let qmc = match qmc_nodes {
            Some(count) => {
                let q = qmc_l4_integral(s, &golden_nodes(count)?);
                let denom = q.value - rho0 * rho0;
                Some(QmcRoute {
                    nodes: count,
                    l4_fourth: q.value,
                    merit_factor: (denom > 0.0).then(|| rho0 * rho0 / denom),
                    error_bound: q.error_bound,
                    l4_relative_deviation: relative(q.value, l4_exact),
                })
            }
            None => None,
        };

        Ok(MeritReport {
            n,
            merit_factor: finite.map(|m| m.to_f64()),
            merit_factor_exact: finite.and_then(|m| m.as_rational()).map(Into::into),
            infinite_merit,
            l4_fourth: l4_discrete,
            sidelobe_energy: sidelobe,
            routes: RouteReport {
                l4_discrete,
                l4_exact_quadrature: l4_exact,
                l4_relative_deviation: l4_dev,
                merit_discrete: finite.map(|m| m.to_f64()),
                merit_analytic_exact: analytic,
                merit_relative_deviation: merit_dev,
                qmc,
            },
        })
    }

    /// Flat row for CSV batch output.
    pub fn csv_row(&self, sequence: &str) -> MeritRow {
        MeritRow {
            sequence: sequence.to_string(),
            n: self.n,
            merit_factor: self.merit_factor,
            merit_num: self.merit_factor_exact.map(|r| r.num),
            merit_den: self.merit_factor_exact.map(|r| r.den),
            l4_fourth: self.l4_fourth,
            sidelobe_energy: self.sidelobe_energy,
            merit_analytic_exact: self.routes.merit_analytic_exact,
            l4_relative_deviation: self.routes.l4_relative_deviation,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeritRow {
    pub sequence: String,
    pub n: usize,
    pub merit_factor: Option<f64>,
    pub merit_num: Option<i64>,
    pub merit_den: Option<i64>,
    pub l4_fourth: f64,
    pub sidelobe_energy: f64,
    pub merit_analytic_exact: Option<f64>,
    pub l4_relative_deviation: f64,
}
