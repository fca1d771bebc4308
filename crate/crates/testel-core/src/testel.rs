//! Test-element constructions: Frattini-layer calculus, the net projections
//! for free and surface groups, coset-targeted constructions against finite
//! quotients, and one-sided certification by endomorphism search.
//!
//! Certificates are one-sided by design: positive ones name a construction,
//! negative ones carry a re-checkable witness endomorphism, and everything
//! else stays unknown at the recorded search bound.

pub mod coset;
pub mod endo;
pub mod frattini;
pub mod net;

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::stallings::{Endomorphism, StallingsError};
use crate::surface::SurfaceError;
use crate::word::Word;

pub use coset::{CosetProjector, CosetResult, CosetTrace, QuotientSpec};
pub use endo::endo_fixer_search;
pub use frattini::{frattini_adjust, in_frattini, in_frattini2, AdjustResult, FrattiniLayer};
pub use net::{
    net_project_free, net_project_free_with, net_project_nonorientable, net_project_orientable,
    AdjustBranch, NetResult, NetTrace, NonOrientableNet, OrientableNet,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestelError {
    Surface(SurfaceError),
    Stallings(StallingsError),
    /// The word must lie in the mod-p Frattini layer first.
    NotInFrattini,
    /// A desk-scale resource cap was exceeded.
    ResourceCap {
        what: &'static str,
        limit: usize,
    },
    /// Quotient images do not satisfy the surface relator.
    RelatorNotSatisfied,
    /// No admissible prime below the search cap.
    PrimeSearchExhausted {
        cap: u32,
    },
    /// No appended subset survived vetting; the construction guarantees one,
    /// so this indicates an internal invariant violation.
    SubsetSearchExhausted,
    BadParameter(&'static str),
    /// A defining contract failed to re-verify.
    Internal(&'static str),
}

impl fmt::Display for TestelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestelError::Surface(e) => write!(f, "{e}"),
            TestelError::Stallings(e) => write!(f, "{e}"),
            TestelError::NotInFrattini => write!(f, "word is not in the mod-p Frattini layer"),
            TestelError::ResourceCap { what, limit } => {
                write!(f, "resource cap exceeded: {what} > {limit}")
            }
            TestelError::RelatorNotSatisfied => {
                write!(f, "quotient images do not satisfy the relator")
            }
            TestelError::PrimeSearchExhausted { cap } => {
                write!(f, "no admissible prime below {cap}")
            }
            TestelError::SubsetSearchExhausted => {
                write!(f, "no appended subset survived vetting")
            }
            TestelError::BadParameter(what) => write!(f, "bad parameter: {what}"),
            TestelError::Internal(what) => write!(f, "internal invariant violated: {what}"),
        }
    }
}

impl From<SurfaceError> for TestelError {
    fn from(e: SurfaceError) -> TestelError {
        TestelError::Surface(e)
    }
}

impl From<StallingsError> for TestelError {
    fn from(e: StallingsError) -> TestelError {
        TestelError::Stallings(e)
    }
}

/// How a positive certificate was constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// Power word passing Turner's criterion.
    TurnerPower { exponents: Vec<i64> },
    /// The canonical test word `x1^p ... xn^p`.
    CanonicalPower { prime: u32 },
    /// Equals a net-construction output vetted to the given bound.
    NetOutput { vetted: usize },
}

/// One-sided evidence about test-element status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Test element by construction.
    Positive { construction: Construction },
    /// Witness endomorphism that fixes the word without being an
    /// automorphism.
    Negative {
        witness: Endomorphism,
        search_bound: usize,
    },
    /// The search found nothing up to the bound.
    Unknown { search_bound: usize },
}

impl Certificate {
    pub fn is_negative(&self) -> bool {
        matches!(self, Certificate::Negative { .. })
    }
}

/// The canonical test word `x1^p x2^p ... xn^p` of the rank-`n` free group.
pub fn canonical_test_word(rank: usize, p: u32) -> Word {
    assert!(rank >= 2, "rank must be at least 2");
    let mut acc = Word::identity(rank);
    for i in 1..=rank {
        acc = acc.multiply(&Word::generator(rank, i).pow(p as i64));
    }
    acc
}

/// Turner's power criterion: `x1^k1 ... xn^kn` is a test element exactly
/// when every exponent is nonzero and their gcd is not 1.
pub fn turner_power_criterion(exponents: &[i64]) -> bool {
    if exponents.contains(&0) {
        return false;
    }
    let gcd = exponents.iter().fold(0i64, |acc, &k| acc.gcd(&k));
    gcd.abs() != 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_words_are_plain_power_words() {
        assert_eq!(
            canonical_test_word(2, 2),
            Word::parse(2, "x1 x1 x2 x2").unwrap()
        );
        assert_eq!(
            canonical_test_word(3, 3).as_power_word().unwrap(),
            alloc::vec![3, 3, 3]
        );
        assert_eq!(canonical_test_word(2, 5).len(), 10);
    }

    #[test]
    fn turner_criterion_matches_the_characterization() {
        assert!(turner_power_criterion(&[2, 2]));
        assert!(!turner_power_criterion(&[1, 2]));
        assert!(!turner_power_criterion(&[2, 0]));
        assert!(turner_power_criterion(&[-2, 4]));
        assert!(!turner_power_criterion(&[-1, 1]));
        assert!(!turner_power_criterion(&[6, 10, 15])); // gcd 1
        assert!(turner_power_criterion(&[6, 10, 14]));
    }
}
