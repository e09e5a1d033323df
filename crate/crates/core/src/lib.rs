//! Words over finite alphabets with quantitative aperiodicity gauges.
//!
//! The crate provides:
//!
//! * exact evaluation of non-decreasing gauges `phi` and their discrete
//!   right-inverses ([`profile`]),
//! * recurrence times and gauge verification for finite words
//!   ([`recurrence`], [`verify`]),
//! * exact enumeration of gauge-respecting ("good") words, the recurrence
//!   lower bound on their count and backtracking construction of witnesses
//!   ([`counting`]),
//! * the Morse-Thue sequence and continued-fraction rotation checks
//!   ([`classics`]),
//! * the dictionary between shift-gauges `phi` and metric-gauges `F`
//!   ([`conversions`]),
//! * certified interval evaluation of the hyperbolic horosphere constants
//!   and the geodesic parameter pipeline ([`hyperbolic`], [`interval`]).
//!
//! All combinatorial decisions are made in exact integer/rational
//! arithmetic; the hyperbolic constants are certified `f64` intervals.

pub mod classics;
pub mod conversions;
pub mod counting;
pub mod hyperbolic;
pub mod interval;
pub mod profile;
pub mod recurrence;
pub mod verify;
pub mod word;

pub use profile::{Profile, ProfileError, RightInverse};
pub use verify::Verdict;
pub use word::{Alphabet, CenteredWindow, FiniteWord, WordDistance};

/// Exact rational scalar used throughout the combinatorial side.
pub type Rational = num::rational::BigRational;
/// Exact unsigned integer (counts, gauge floors).
pub type Natural = num::BigUint;
