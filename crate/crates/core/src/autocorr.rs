//! Aperiodic and periodic autocorrelation, Fourier evaluation on the unit
//! circle and the power-spectrum expansion in terms of autocorrelations.
//!
//! With `rho(t) = sum_{k < n-t} s_k conj(s_{k+t})` and the cyclic
//! `theta(t) = sum_k s_k conj(s_{(k+t) mod n})`:
//!
//! * `theta(0) = rho(0) = sum |s_k|^2`
//! * `theta(t) = rho(t) + conj(rho(n - t))` for `0 < t < n`
//! * `|s(z)|^2 = rho(0) + 2 Re sum_{t>=1} rho(t) conj(z)^t` on `|z| = 1`
//!
//! The complex form of the second identity conjugates the wrapped part; for
//! real sequences it reduces to `theta(t) = rho(t) + rho(n - t)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// Relative tolerance (scaled by `rho(0)`) between the two spectrum routes.
pub const TOL_SPECTRUM: f64 = 1e-9;

pub fn aperiodic_autocorrelation(s: &Sequence) -> Vec<Complex64> {
    let e = s.entries();
    let n = e.len();
    (0..n)
        .map(|t| (0..n - t).map(|k| e[k] * e[k + t].conj()).sum())
        .collect()
}

pub fn periodic_autocorrelation(s: &Sequence) -> Vec<Complex64> {
    let e = s.entries();
    let n = e.len();
    (0..n)
        .map(|t| (0..n).map(|k| e[k] * e[(k + t) % n].conj()).sum())
        .collect()
}

/// Integer aperiodic autocorrelation of a sign vector.
pub fn aperiodic_binary(signs: &[i8]) -> Vec<i64> {
    let n = signs.len();
    (0..n)
        .map(|t| {
            signs[..n - t]
                .iter()
                .zip(&signs[t..])
                .map(|(&a, &b)| i64::from(a * b))
                .sum()
        })
        .collect()
}

/// Integer periodic autocorrelation of a sign vector.
pub fn periodic_binary(signs: &[i8]) -> Vec<i64> {
    let n = signs.len();
    (0..n)
        .map(|t| {
            (0..n)
                .map(|k| i64::from(signs[k] * signs[(k + t) % n]))
                .sum()
        })
        .collect()
}

/// `e^{i 2 pi x}`, reducing `x` modulo 1 first to keep the phase accurate.
pub fn unit_root(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x.rem_euclid(1.0))
}

/// Evaluates `s(z) = sum_k s_k z^k` at `z = e^{i 2 pi x}` (Horner).
pub fn fourier_eval(s: &Sequence, x: f64) -> Complex64 {
    horner(s.entries(), unit_root(x))
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Power spectrum `|s(z)|^2` rebuilt from the aperiodic autocorrelation.
pub fn spectrum_from_autocorrelation(rho: &[Complex64], x: f64) -> f64 {
    let tail: f64 = rho
        .iter()
        .enumerate()
        .skip(1)
        .map(|(t, r)| (r * unit_root(t as f64 * x).conj()).re)
        .sum();
    rho[0].re + 2.0 * tail
}

/// `|s(e^{i 2 pi x})|^2`, computed directly and through the autocorrelation
/// expansion. The routes must agree to `TOL_SPECTRUM * rho(0)`; the direct
/// value is returned.
pub fn spectrum_at(s: &Sequence, x: f64) -> Result<f64> {
    let rho = aperiodic_autocorrelation(s);
    spectrum_checked(s, &rho, x)
}

pub(crate) fn spectrum_checked(s: &Sequence, rho: &[Complex64], x: f64) -> Result<f64> {
    let direct = fourier_eval(s, x).norm_sqr();
    let expanded = spectrum_from_autocorrelation(rho, x);
    if (direct - expanded).abs() > TOL_SPECTRUM * rho[0].re {
        return Err(Error::Inconsistent {
            what: "power spectrum",
            left: direct,
            right: expanded,
        });
    }
    Ok(direct)
}

/// `max_{1 <= t < n} |rho(t)|`.
pub fn max_sidelobe(s: &Sequence) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::UndefinedSidelobe);
    }
    Ok(aperiodic_autocorrelation(s)[1..]
        .iter()
        .map(|r| r.norm())
        .fold(0.0, f64::max))
}

pub fn max_sidelobe_binary(signs: &[i8]) -> Result<i64> {
    if signs.len() < 2 {
        return Err(Error::UndefinedSidelobe);
    }
    Ok(aperiodic_binary(signs)[1..]
        .iter()
        .map(|r| r.abs())
        .max()
        .unwrap_or(0))
}

/// Aperiodic and periodic autocorrelations of one sequence, materialized
/// together.
#[derive(Clone, Debug, Serialize)]
pub struct AutocorrelationProfile {
    pub aperiodic: Vec<Complex64>,
    pub periodic: Vec<Complex64>,
    pub peak: f64,
    /// `None` for length-1 sequences.
    pub max_sidelobe: Option<f64>,
}

impl AutocorrelationProfile {
    pub fn new(s: &Sequence) -> Self {
        let aperiodic = aperiodic_autocorrelation(s);
        let periodic = periodic_autocorrelation(s);
        let peak = aperiodic[0].re;
        let max_sidelobe = (aperiodic.len() > 1)
            .then(|| aperiodic[1..].iter().map(|r| r.norm()).fold(0.0, f64::max));
        AutocorrelationProfile {
            aperiodic,
            periodic,
            peak,
            max_sidelobe,
        }
    }

    /// Rows `(t, re rho, im rho, re theta, im theta)` for CSV export.
    pub fn rows(&self) -> Vec<ProfileRow> {
        self.aperiodic
            .iter()
            .zip(&self.periodic)
            .enumerate()
            .map(|(t, (r, th))| ProfileRow {
                t,
                rho_re: r.re,
                rho_im: r.im,
                theta_re: th.re,
                theta_im: th.im,
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub t: usize,
    pub rho_re: f64,
    pub rho_im: f64,
    pub theta_re: f64,
    pub theta_im: f64,
}
