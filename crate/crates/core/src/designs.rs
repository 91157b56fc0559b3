//! Cyclic difference sets, two-level periodic autocorrelation, Menon
//! parameters and circulant Hadamard rows.
//!
//! The multiplicity of each nonzero difference is written `lambda`. A binary
//! sequence with `k` entries equal to +1 has two-level periodic
//! autocorrelation exactly when its +1 support is a cyclic `(v, k, lambda)`
//! difference set, and then the off-peak value is `v - 4(k - lambda)`.
//! Mapping membership to +1 or to -1 differs only by a global sign, which
//! leaves `theta` unchanged.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::autocorr::{aperiodic_binary, periodic_autocorrelation, periodic_binary};
use crate::error::{Error, Result};
use crate::families::barker;
use crate::sequence::{render_pm, Sequence};

/// Off-peak tolerance for [`is_perfect`], relative to `theta(0)`.
pub const TOL_PERFECT: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceSet {
    pub v: usize,
    pub members: Vec<usize>,
    pub k: usize,
    pub lambda: usize,
}

impl DifferenceSet {
    /// `k(k - 1) = lambda (v - 1)`.
    pub fn counting_identity_holds(&self) -> bool {
        self.k * self.k.saturating_sub(1) == self.lambda * (self.v - 1)
    }

    pub fn gamma(&self) -> i64 {
        gamma_from_parameters(self.v, self.k, self.lambda)
    }
}

/// `v - 4(k - lambda)`.
pub fn gamma_from_parameters(v: usize, k: usize, lambda: usize) -> i64 {
    v as i64 - 4 * (k as i64 - lambda as i64)
}

/// Accepts `members` as a cyclic difference set mod `v` iff every nonzero
/// residue occurs equally often among the differences `a - b`, `a != b`.
pub fn verify_difference_set(members: &[usize], v: usize) -> Result<DifferenceSet> {
    if v < 2 {
        return Err(Error::Domain(format!(
            "modulus must be at least 2, got {v}"
        )));
    }
    if let Some(bad) = members.iter().find(|&&d| d >= v) {
        return Err(Error::Domain(format!("{bad} is not a residue mod {v}")));
    }
    let set: BTreeSet<usize> = members.iter().copied().collect();
    if set.len() != members.len() {
        return Err(Error::Domain("members must be distinct".into()));
    }
    let mut counts = vec![0usize; v];
    for &a in &set {
        for &b in &set {
            if a != b {
                counts[(a + v - b) % v] += 1;
            }
        }
    }
    let lambda = counts[1];
    if let Some(r) = (2..v).find(|&r| counts[r] != lambda) {
        return Err(Error::NotDifferenceSet {
            v,
            first: 1,
            first_count: lambda,
            second: r,
            second_count: counts[r],
        });
    }
    Ok(DifferenceSet {
        v,
        k: set.len(),
        members: set.into_iter().collect(),
        lambda,
    })
}

/// Binary sequence of length `v` with `s_i = +1` iff `i` is a member.
pub fn characteristic_sequence(ds: &DifferenceSet) -> Sequence {
    let mut signs = vec![-1i8; ds.v];
    for &m in &ds.members {
        signs[m] = 1;
    }
    Sequence::binary(&signs).expect("v >= 2")
}

/// The common off-peak periodic autocorrelation of a binary sequence, if
/// there is one.
pub fn two_level_gamma(s: &Sequence) -> Result<i64> {
    let signs = s.require_signs("two_level_gamma")?;
    if signs.len() < 2 {
        return Err(Error::UndefinedSidelobe);
    }
    let theta = periodic_binary(&signs);
    let gamma = theta[1];
    if let Some(t) = (2..theta.len()).find(|&t| theta[t] != gamma) {
        return Err(Error::NotTwoLevel {
            lag_a: 1,
            value_a: gamma,
            lag_b: t,
            value_b: theta[t],
        });
    }
    Ok(gamma)
}

/// Two-level value of the characteristic sequence, cross-checked against
/// `v - 4(k - lambda)`.
pub fn difference_set_gamma(ds: &DifferenceSet) -> Result<i64> {
    let measured = two_level_gamma(&characteristic_sequence(ds))?;
    let predicted = ds.gamma();
    if measured != predicted {
        return Err(Error::Inconsistent {
            what: "two-level gamma",
            left: measured as f64,
            right: predicted as f64,
        });
    }
    Ok(measured)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MenonSign {
    Plus,
    Minus,
}

/// Menon (Hadamard) parameters `(4u^2, 2u^2 ± u, u^2 ± u)`.
pub fn menon_params(u: usize, sign: MenonSign) -> Result<(usize, usize, usize)> {
    if u < 1 {
        return Err(Error::Domain("u must be at least 1".into()));
    }
    let sq = u * u;
    Ok(match sign {
        MenonSign::Plus => (4 * sq, 2 * sq + u, sq + u),
        MenonSign::Minus => (4 * sq, 2 * sq - u, sq - u),
    })
}

/// `theta(0) != 0` and every off-peak `|theta(t)| <= TOL_PERFECT * theta(0)`.
pub fn is_perfect(s: &Sequence) -> bool {
    if let Some(signs) = s.signs() {
        return periodic_binary(&signs)[1..].iter().all(|&t| t == 0);
    }
    let theta = periodic_autocorrelation(s);
    let peak = theta[0].re;
    peak != 0.0 && theta[1..].iter().all(|t| t.norm() <= TOL_PERFECT * peak)
}

/// Whether the circulant matrix generated by `row` satisfies `H H^T = n I`.
///
/// Entry `(i, j)` of `H H^T` is `theta(j - i)`, so this is perfection of the
/// row.
pub fn circulant_hadamard_check(row: &Sequence) -> Result<bool> {
    let signs = row.require_signs("circulant_hadamard_check")?;
    Ok(periodic_binary(&signs)[1..].iter().all(|&t| t == 0))
}

/// Explicit `H H^T` for the circulant matrix with first row `row`
/// (`H[i][j] = row[(j - i) mod n]`).
pub fn circulant_gram(row: &[i8]) -> Vec<Vec<i64>> {
    let n = row.len();
    let h: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(row[(j + n - i) % n])).collect())
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|c| h[i][c] * h[j][c]).sum())
                .collect()
        })
        .collect()
}

/// Whether every aperiodic sidelobe lies in `{0, ±1}`.
pub fn aperiodic_sidelobes_within_one(s: &Sequence) -> Result<bool> {
    let signs = s.require_signs("aperiodic_sidelobes_within_one")?;
    Ok(aperiodic_binary(&signs)[1..].iter().all(|r| r.abs() <= 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct HadamardScan {
    pub n: usize,
    pub rows_scanned: u64,
    pub perfect_rows: Vec<String>,
}

/// Exhaustive scan of all `2^n` binary rows of length `n` for circulant
/// Hadamard rows. Uses `theta(t) = n - 2 popcount(x ^ rot(x, t))`.
pub fn hadamard_scan(n: usize) -> Result<HadamardScan> {
    if !(1..=32).contains(&n) {
        return Err(Error::Domain(format!(
            "hadamard scan supports 1 <= n <= 32, got {n}"
        )));
    }
    let mask: u64 = (1u64 << n) - 1;
    let rotate = |x: u64, t: usize| ((x >> t) | (x << (n - t))) & mask;
    let mut found: Vec<u64> = (0..=mask)
        .into_par_iter()
        .filter(|&x| (1..n).all(|t| 2 * (x ^ rotate(x, t)).count_ones() as usize == n))
        .collect();
    found.sort_unstable();
    let perfect_rows = found
        .into_iter()
        .map(|x| {
            let signs: Vec<i8> = (0..n)
                .map(|i| if x >> i & 1 == 0 { 1 } else { -1 })
                .collect();
            render_pm(&signs)
        })
        .collect();
    Ok(HadamardScan {
        n,
        rows_scanned: mask + 1,
        perfect_rows,
    })
}

/// Parameters of the difference sets carried by the odd Barker sequences.
pub const BARKER_DIFFERENCE_SETS: [(usize, (usize, usize, usize)); 3] =
    [(7, (7, 4, 2)), (11, (11, 5, 2)), (13, (13, 9, 6))];

/// Extracts the difference set carried by the odd Barker sequence of length
/// `n`, trying the +1 support and then the -1 support.
pub fn barker_difference_set_link(n: usize) -> Result<DifferenceSet> {
    let (_, expected) = BARKER_DIFFERENCE_SETS
        .iter()
        .find(|(len, _)| *len == n)
        .ok_or_else(|| Error::Domain(format!("no Barker difference set listed for n = {n}")))?;
    let signs = barker(n)?.require_signs("barker_difference_set_link")?;
    for sign in [1i8, -1] {
        let support: Vec<usize> = (0..n).filter(|&i| signs[i] == sign).collect();
        if let Ok(ds) = verify_difference_set(&support, n) {
            if (ds.v, ds.k, ds.lambda) == *expected {
                return Ok(ds);
            }
        }
    }
    Err(Error::Inconsistent {
        what: "Barker difference set",
        left: n as f64,
        right: expected.1 as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{all_ones, legendre, turyn_perfect};
    use crate::sequence::parse_pm_string;

    fn seq(text: &str) -> Sequence {
        parse_pm_string(text).unwrap()
    }

    /// Independent tally: count pairs (a, b) with a - b = r for each r.
    fn tally(members: &[usize], v: usize, r: usize) -> usize {
        members
            .iter()
            .flat_map(|&a| members.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a != b && (v + a - b) % v == r)
            .count()
    }

    #[test]
    fn verify_examples() {
        let qr = verify_difference_set(&[1, 2, 4], 7).unwrap();
        assert_eq!((qr.v, qr.k, qr.lambda), (7, 3, 1));
        assert!((1..7).all(|r| tally(&[1, 2, 4], 7, r) == 1));

        let ds = verify_difference_set(&[0, 1, 2, 4], 7).unwrap();
        assert_eq!((ds.v, ds.k, ds.lambda), (7, 4, 2));
        assert!((1..7).all(|r| tally(&[0, 1, 2, 4], 7, r) == 2));
        assert!(ds.counting_identity_holds());

        match verify_difference_set(&[0, 1], 4) {
            Err(Error::NotDifferenceSet {
                first,
                first_count,
                second,
                second_count,
                ..
            }) => {
                assert_eq!((first, first_count), (1, 1));
                assert_eq!((second, second_count), (2, 0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(verify_difference_set(&[0, 7], 7).is_err());
        assert!(verify_difference_set(&[0], 1).is_err());
    }

    #[test]
    fn characteristic_examples() {
        let ds = verify_difference_set(&[0, 1, 2, 4], 7).unwrap();
        assert_eq!(
            characteristic_sequence(&ds).signs().unwrap(),
            legendre(7).unwrap().signs().unwrap()
        );
        let qr = verify_difference_set(&[1, 2, 4], 7).unwrap();
        assert_eq!(
            characteristic_sequence(&qr).signs().unwrap(),
            vec![-1, 1, 1, -1, 1, -1, -1]
        );
    }

    #[test]
    fn gamma_examples() {
        let ds = verify_difference_set(&[0, 1, 2, 4], 7).unwrap();
        assert_eq!(difference_set_gamma(&ds).unwrap(), -1);
        assert_eq!(two_level_gamma(&seq("+++-")).unwrap(), 0);
        assert_eq!(two_level_gamma(&all_ones(4).unwrap()).unwrap(), 4);
        assert!(matches!(
            two_level_gamma(&seq("++-+-")),
            Err(Error::NotTwoLevel { .. })
        ));
    }

    #[test]
    fn menon_examples() {
        assert_eq!(menon_params(2, MenonSign::Minus).unwrap(), (16, 6, 2));
        assert_eq!(menon_params(1, MenonSign::Minus).unwrap(), (4, 1, 0));
        assert_eq!(menon_params(2, MenonSign::Plus).unwrap(), (16, 10, 6));
        for u in 1..50 {
            for sign in [MenonSign::Plus, MenonSign::Minus] {
                let (v, k, l) = menon_params(u, sign).unwrap();
                assert_eq!(k * (k - 1), l * (v - 1));
                assert_eq!(gamma_from_parameters(v, k, l), 0);
            }
        }
    }

    #[test]
    fn perfect_examples() {
        assert!(is_perfect(&seq("+++-")));
        assert!(is_perfect(&turyn_perfect(5).unwrap()));
        assert!(!is_perfect(&all_ones(4).unwrap()));
        assert!(circulant_hadamard_check(&seq("+++-")).unwrap());
        assert!(!circulant_hadamard_check(&seq("++++")).unwrap());
    }

    #[test]
    fn gram_matches_periodic_autocorrelation() {
        for text in ["+++-", "++++", "+-+--+", "+++--+-"] {
            let signs = seq(text).signs().unwrap();
            let n = signs.len();
            let gram = circulant_gram(&signs);
            let theta = periodic_binary(&signs);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(gram[i][j], theta[(j + n - i) % n]);
                }
            }
            let hadamard =
                (0..n).all(|i| (0..n).all(|j| gram[i][j] == if i == j { n as i64 } else { 0 }));
            assert_eq!(hadamard, circulant_hadamard_check(&seq(text)).unwrap());
        }
    }

    #[test]
    fn no_circulant_hadamard_row_of_length_8() {
        let scan = hadamard_scan(8).unwrap();
        assert_eq!(scan.rows_scanned, 256);
        assert!(scan.perfect_rows.is_empty());
        let four = hadamard_scan(4).unwrap();
        assert_eq!(four.perfect_rows.len(), 8);
        assert!(four.perfect_rows.contains(&"+++-".to_string()));
    }

    #[test]
    fn barker_links() {
        for (n, params) in BARKER_DIFFERENCE_SETS {
            let ds = barker_difference_set_link(n).unwrap();
            assert_eq!((ds.v, ds.k, ds.lambda), params);
            assert_eq!(difference_set_gamma(&ds).unwrap(), ds.gamma());
        }
        assert!(barker_difference_set_link(5).is_err());
    }

    #[test]
    fn four_level_checker() {
        assert!(aperiodic_sidelobes_within_one(&seq("+++++--++-+-+")).unwrap());
        // Legendre sequences have two-level theta but large aperiodic sidelobes.
        assert!(!aperiodic_sidelobes_within_one(&legendre(19).unwrap()).unwrap());
        assert!(two_level_gamma(&legendre(19).unwrap()).is_ok());
    }
}
