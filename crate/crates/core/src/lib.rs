//! Autocorrelation, merit factor and L4-norm computations for binary and
//! polyphase sequences.
//!
//! Every headline quantity is available through at least two independent
//! routes: merit factors from the autocorrelation and from the L4 integral,
//! L4 norms from sidelobe sums and from exact or quasi-Monte Carlo
//! quadrature, bounded-sidelobe sets from a pruned search and from an
//! unpruned scan. Binary quantities are computed in exact integer or rational
//! arithmetic.
//!
//! Modules:
//! * [`sequence`]: sequences, alphabets and the symmetry group.
//! * [`autocorr`]: aperiodic/periodic autocorrelation and the power spectrum.
//! * [`merit`]: merit factor and L4 norm, with closed-form predictions.
//! * [`quadrature`]: L4 integrals, node sets, discrepancy and inequality checks.
//! * [`families`]: all-ones, alternating, Barker, Legendre, chirp and perfect
//!   polyphase generators.
//! * [`designs`]: cyclic difference sets, two-level autocorrelation and
//!   circulant Hadamard rows.
//! * [`search`]: bounded-sidelobe enumeration and merit-factor records.

pub mod autocorr;
pub mod designs;
pub mod error;
pub mod families;
pub mod merit;
pub mod quadrature;
pub mod search;
pub mod sequence;

pub use error::{Error, Result};
pub use sequence::{Alphabet, Sequence, SymmetryElement};
