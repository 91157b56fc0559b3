//! Sequence representation, alphabet validation and the eight-element
//! symmetry group (negation, reversal, alternation) acting on sequences.
//!
//! Entries are 0-indexed and stored as double-precision complex numbers
//! whatever the alphabet. Binary sequences additionally expose their signs
//! as `i8` so that correlation sums stay in exact integer arithmetic.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for `|e^m - 1|` when validating m-th roots of unity.
pub const TOL_ALPHABET: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// Entries are exactly +1 or -1.
    Binary,
    /// Entries are m-th roots of unity.
    RootsOfUnity(u32),
    Complex,
}

impl Alphabet {
    /// Tag used by the JSON sequence schema: `pm1`, `roots:m` or `complex`.
    pub fn tag(&self) -> String {
        match self {
            Alphabet::Binary => "pm1".to_string(),
            Alphabet::RootsOfUnity(m) => format!("roots:{m}"),
            Alphabet::Complex => "complex".to_string(),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "pm1" => Ok(Alphabet::Binary),
            "complex" => Ok(Alphabet::Complex),
            other => {
                let m = other
                    .strip_prefix("roots:")
                    .and_then(|m| m.parse::<u32>().ok())
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| Error::Domain(format!("unknown alphabet tag {other:?}")))?;
                Ok(Alphabet::RootsOfUnity(m))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    entries: Vec<Complex64>,
    alphabet: Alphabet,
}

impl Sequence {
    /// Builds a binary sequence from signs; every sign must be +1 or -1.
    pub fn binary(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::EmptySequence);
        }
        let entries = signs
            .iter()
            .enumerate()
            .map(|(index, &s)| match s {
                1 | -1 => Ok(Complex64::new(f64::from(s), 0.0)),
                _ => Err(Error::Alphabet {
                    index,
                    reason: format!("{s} is not +1 or -1"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence {
            entries,
            alphabet: Alphabet::Binary,
        })
    }

    pub fn roots_of_unity(entries: Vec<Complex64>, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("roots of unity need m >= 1".into()));
        }
        Self::with_alphabet(entries, Alphabet::RootsOfUnity(m))
    }

    pub fn complex(entries: Vec<Complex64>) -> Result<Self> {
        Self::with_alphabet(entries, Alphabet::Complex)
    }

    /// Validates `entries` against `alphabet`.
    pub fn with_alphabet(entries: Vec<Complex64>, alphabet: Alphabet) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySequence);
        }
        for (index, e) in entries.iter().enumerate() {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::Alphabet {
                    index,
                    reason: "entry is not finite".into(),
                });
            }
            match alphabet {
                Alphabet::Binary => {
                    if e.im != 0.0 || (e.re != 1.0 && e.re != -1.0) {
                        return Err(Error::Alphabet {
                            index,
                            reason: format!("{e} is not +1 or -1"),
                        });
                    }
                }
                Alphabet::RootsOfUnity(m) => {
                    let dev = (e.powu(m) - Complex64::new(1.0, 0.0)).norm();
                    if dev > TOL_ALPHABET {
                        return Err(Error::Alphabet {
                            index,
                            reason: format!("|e^{m} - 1| = {dev:e} exceeds {TOL_ALPHABET:e}"),
                        });
                    }
                }
                Alphabet::Complex => {}
            }
        }
        Ok(Sequence { entries, alphabet })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_binary(&self) -> bool {
        self.alphabet == Alphabet::Binary
    }

    /// The entries as signs, if the sequence is binary.
    pub fn signs(&self) -> Option<Vec<i8>> {
        self.is_binary()
            .then(|| self.entries.iter().map(|e| e.re as i8).collect())
    }

    pub fn require_signs(&self, op: &'static str) -> Result<Vec<i8>> {
        self.signs().ok_or(Error::UnsupportedAlphabet { op })
    }

    /// Compact `+`/`-` rendering of a binary sequence.
    pub fn to_pm_string(&self) -> Option<String> {
        self.signs().map(|s| render_pm(&s))
    }

    /// Serializes to the JSON sequence schema.
    pub fn to_json(&self) -> SequenceJson {
        let values = match self.signs() {
            Some(signs) => JsonValues::Signs(signs),
            None => JsonValues::Complex(self.entries.iter().map(|e| [e.re, e.im]).collect()),
        };
        SequenceJson {
            alphabet: self.alphabet.tag(),
            values,
        }
    }

    pub fn from_json(json: &SequenceJson) -> Result<Self> {
        let alphabet = Alphabet::from_tag(&json.alphabet)?;
        match (&json.values, alphabet) {
            (JsonValues::Signs(signs), Alphabet::Binary) => Sequence::binary(signs),
            (JsonValues::Signs(signs), other) => Sequence::with_alphabet(
                signs
                    .iter()
                    .map(|&s| Complex64::new(f64::from(s), 0.0))
                    .collect(),
                other,
            ),
            (JsonValues::Complex(pairs), other) => Sequence::with_alphabet(
                pairs
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect(),
                other,
            ),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: SequenceJson = serde_json::from_str(text)?;
        Sequence::from_json(&json)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_pm_string() {
            Some(pm) => f.write_str(&pm),
            None => {
                let parts: Vec<String> = self.entries.iter().map(|e| format!("{e}")).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// JSON sequence schema:
/// `{"alphabet": "pm1" | "roots:m" | "complex", "values": [±1,…] or [[re,im],…]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub alphabet: String,
    pub values: JsonValues,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonValues {
    Signs(Vec<i8>),
    Complex(Vec<[f64; 2]>),
}

/// Parses a string of `+`/`-` characters into a binary sequence.
///
/// The typographic minus sign U+2212 is accepted as an alias for `-`.
pub fn parse_pm_string(text: &str) -> Result<Sequence> {
    if text.is_empty() {
        return Err(Error::EmptySequence);
    }
    let signs = text
        .chars()
        .enumerate()
        .map(|(index, c)| match c {
            '+' => Ok(1),
            '-' | '\u{2212}' => Ok(-1),
            found => Err(Error::Parse { index, found }),
        })
        .collect::<Result<Vec<i8>>>()?;
    Sequence::binary(&signs)
}

pub fn render_pm(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|&s| if s > 0 { '+' } else { '-' })
        .collect()
}

/// Accepts either a JSON sequence document or a `+`/`-` string.
pub fn parse_sequence(text: &str) -> Result<Sequence> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        Sequence::from_json_str(trimmed)
    } else {
        parse_pm_string(trimmed)
    }
}

/// An element of the group generated by negation, reversal and alternation
/// (entrywise multiplication by (-1)^k).
///
/// Applied in the fixed order reverse, then alternate, then negate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetryElement {
    pub negate: bool,
    pub reverse: bool,
    pub alternate: bool,
}

impl SymmetryElement {
    pub const IDENTITY: SymmetryElement = SymmetryElement {
        negate: false,
        reverse: false,
        alternate: false,
    };

    pub fn all() -> [SymmetryElement; 8] {
        let mut out = [SymmetryElement::IDENTITY; 8];
        for (bits, slot) in out.iter_mut().enumerate() {
            *slot = SymmetryElement {
                negate: bits & 1 != 0,
                reverse: bits & 2 != 0,
                alternate: bits & 4 != 0,
            };
        }
        out
    }

    fn apply_slice<T: Copy>(&self, values: &[T], neg: impl Fn(T) -> T) -> Vec<T> {
        let mut out: Vec<T> = values.to_vec();
        if self.reverse {
            out.reverse();
        }
        if self.alternate {
            for v in out.iter_mut().skip(1).step_by(2) {
                *v = neg(*v);
            }
        }
        if self.negate {
            for v in out.iter_mut() {
                *v = neg(*v);
            }
        }
        out
    }

    pub fn apply_to_signs(&self, signs: &[i8]) -> Vec<i8> {
        self.apply_slice(signs, |s| -s)
    }
}

pub fn apply_symmetry(s: &Sequence, g: SymmetryElement) -> Sequence {
    let entries = g.apply_slice(&s.entries, |e| -e);
    // Multiplying by -1 leaves the m-th roots only when m is even.
    let alphabet = match s.alphabet {
        Alphabet::RootsOfUnity(m) if (g.negate || g.alternate) && m % 2 == 1 => {
            Alphabet::RootsOfUnity(2 * m)
        }
        other => other,
    };
    Sequence { entries, alphabet }
}

/// All distinct images of `signs` under the symmetry group.
pub fn orbit(signs: &[i8]) -> BTreeSet<Vec<i8>> {
    SymmetryElement::all()
        .iter()
        .map(|g| g.apply_to_signs(signs))
        .collect()
}

/// Lexicographic minimum (with -1 < +1) over the symmetry orbit.
pub fn canonical_signs(signs: &[i8]) -> Vec<i8> {
    SymmetryElement::all()
        .iter()
        .map(|g| g.apply_to_signs(signs))
        .min()
        .expect("orbit is nonempty")
}

pub fn canonical_form(s: &Sequence) -> Result<Sequence> {
    let signs = s.require_signs("canonical_form")?;
    Sequence::binary(&canonical_signs(&signs))
}
