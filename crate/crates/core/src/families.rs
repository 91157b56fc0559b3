//! Generators for the named sequence families.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{parse_pm_string, Sequence};

/// Catalog of Barker sequences, `s_0` first. Every other Barker sequence of
/// these lengths lies in the symmetry orbit of the listed one.
pub const BARKER_CATALOG: [(usize, &str); 7] = [
    (2, "++"),
    (3, "++-"),
    (4, "+++-"),
    (5, "+++-+"),
    (7, "+++--+-"),
    (11, "+++---+--+-"),
    (13, "+++++--++-+-+"),
];

pub const BARKER_LENGTHS: [usize; 7] = [2, 3, 4, 5, 7, 11, 13];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    AllOnes,
    Alternating,
    Barker,
    Legendre,
    Chirp,
    TurynPerfect,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::AllOnes,
        Family::Alternating,
        Family::Barker,
        Family::Legendre,
        Family::Chirp,
        Family::TurynPerfect,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::AllOnes => "all-ones",
            Family::Alternating => "alternating",
            Family::Barker => "barker",
            Family::Legendre => "legendre",
            Family::Chirp => "chirp",
            Family::TurynPerfect => "turyn-perfect",
        }
    }

    pub fn is_binary(&self) -> bool {
        !matches!(self, Family::Chirp | Family::TurynPerfect)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyDescriptor {
    pub family: Family,
    /// Length, prime or odd length depending on the family.
    pub parameter: usize,
}

impl FamilyDescriptor {
    pub fn new(family: Family, parameter: usize) -> Self {
        FamilyDescriptor { family, parameter }
    }

    pub fn generate(&self) -> Result<Sequence> {
        let p = self.parameter;
        match self.family {
            Family::AllOnes => all_ones(p),
            Family::Alternating => alternating(p),
            Family::Barker => barker(p),
            Family::Legendre => legendre(p),
            Family::Chirp => chirp(p),
            Family::TurynPerfect => turyn_perfect(p),
        }
    }
}

pub fn all_ones(n: usize) -> Result<Sequence> {
    if n < 1 {
        return Err(Error::Domain("length must be at least 1".into()));
    }
    Sequence::binary(&vec![1; n])
}

/// `1, -1, 1, -1, ...`
pub fn alternating(n: usize) -> Result<Sequence> {
    if n < 1 {
        return Err(Error::Domain("length must be at least 1".into()));
    }
    let signs: Vec<i8> = (0..n).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
    Sequence::binary(&signs)
}

pub fn barker(n: usize) -> Result<Sequence> {
    BARKER_CATALOG
        .iter()
        .find(|(len, _)| *len == n)
        .map(|(_, pm)| parse_pm_string(pm))
        .unwrap_or(Err(Error::NoKnownBarker(n)))
}

pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    (2..)
        .take_while(|d| d * d <= p)
        .all(|d| !p.is_multiple_of(d))
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol `(a / p)` for an odd prime `p` via Euler's criterion.
pub fn legendre_symbol(a: u64, p: u64) -> i8 {
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Legendre sequence of odd prime length `p`: `s_k = (k / p)` for `k > 0`
/// and `s_0 = +1`.
pub fn legendre(p: usize) -> Result<Sequence> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let signs: Vec<i8> = (0..p as u64)
        .map(|k| {
            if k == 0 {
                1
            } else {
                legendre_symbol(k, p as u64)
            }
        })
        .collect();
    Sequence::binary(&signs)
}

/// `e^{i pi k(k+1) / n}`. Since `k(k+1)` is even this is the n-th root of
/// unity `xi^{k(k+1)/2}`; the exponent is reduced mod `n` exactly before
/// leaving integer arithmetic.
fn quadratic_phase(n: usize) -> Vec<Complex64> {
    let n = n as u64;
    (0..n)
        .map(|k| {
            let e = (k * (k + 1) / 2) % n;
            Complex64::from_polar(1.0, 2.0 * PI * e as f64 / n as f64)
        })
        .collect()
}

/// Quadratic-phase chirp `s_k = e^{i pi k(k+1)/n}`.
pub fn chirp(n: usize) -> Result<Sequence> {
    if n < 1 {
        return Err(Error::Domain("length must be at least 1".into()));
    }
    Sequence::roots_of_unity(quadratic_phase(n), n as u32)
}

/// Perfect sequence over the n-th roots of unity for odd `n >= 3`: the
/// quadratic phase `xi^{k(k+1)/2}` has `theta(t) = 0` for every `t != 0`.
pub fn turyn_perfect(n: usize) -> Result<Sequence> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "perfect root-of-unity construction needs odd n > 1, got {n}"
        )));
    }
    Sequence::roots_of_unity(quadratic_phase(n), n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autocorr::{max_sidelobe_binary, periodic_autocorrelation};

    fn signs(s: &Sequence) -> Vec<i8> {
        s.signs().unwrap()
    }

    #[test]
    fn simple_families() {
        assert_eq!(signs(&all_ones(3).unwrap()), vec![1, 1, 1]);
        assert_eq!(signs(&alternating(4).unwrap()), vec![1, -1, 1, -1]);
        assert_eq!(signs(&alternating(1).unwrap()), vec![1]);
        assert!(all_ones(0).is_err());
        assert!(alternating(0).is_err());
    }

    #[test]
    fn barker_catalog() {
        assert_eq!(signs(&barker(3).unwrap()), vec![1, 1, -1]);
        for n in BARKER_LENGTHS {
            let b = signs(&barker(n).unwrap());
            assert_eq!(b.len(), n);
            assert!(max_sidelobe_binary(&b).unwrap() <= 1);
        }
        assert!(matches!(barker(6), Err(Error::NoKnownBarker(6))));
        assert!(matches!(barker(14), Err(Error::NoKnownBarker(14))));
    }

    #[test]
    fn legendre_examples() {
        // Quadratic residues mod 7: {1, 2, 4}; mod 5: {1, 4}.
        assert_eq!(signs(&legendre(7).unwrap()), vec![1, 1, 1, -1, 1, -1, -1]);
        assert_eq!(signs(&legendre(5).unwrap()), vec![1, 1, -1, -1, 1]);
        assert!(legendre(4).is_err());
        assert!(legendre(2).is_err());
        assert!(legendre(1).is_err());
    }

    #[test]
    fn legendre_symbol_matches_residue_table() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            let squares: std::collections::BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p {
                let expected = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(legendre_symbol(a, p), expected, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn chirp_examples() {
        let c1 = chirp(1).unwrap();
        assert!((c1.entries()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let c2 = chirp(2).unwrap();
        assert!((c2.entries()[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let c16 = chirp(16).unwrap();
        let l4 = crate::merit::l4_norm_fourth(&c16);
        assert!((l4 - 256.0).abs() / 256.0 <= 0.25);
    }

    #[test]
    fn turyn_examples() {
        let xi = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let t3 = turyn_perfect(3).unwrap();
        let expected = [Complex64::new(1.0, 0.0), xi, Complex64::new(1.0, 0.0)];
        for (a, b) in t3.entries().iter().zip(expected) {
            assert!((a - b).norm() < 1e-12);
        }
        let theta = periodic_autocorrelation(&t3);
        assert!(theta[1].norm() < 1e-12);

        let theta5 = periodic_autocorrelation(&turyn_perfect(5).unwrap());
        assert!(theta5[1..].iter().all(|v| v.norm() <= 1e-9));
        assert!(turyn_perfect(4).is_err());
        assert!(turyn_perfect(1).is_err());
    }

    #[test]
    fn descriptors() {
        for family in Family::ALL {
            assert_eq!(family.name().parse::<Family>().unwrap(), family);
        }
        let d = FamilyDescriptor::new(Family::Legendre, 11);
        assert_eq!(d.generate().unwrap().len(), 11);
        assert!("golay".parse::<Family>().is_err());
    }
}
