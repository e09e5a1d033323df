//! The dictionary between metric-side bounds `F(eps)` and shift-side gauges
//! `phi(l)`, plus the distance criterion separating a word from every
//! periodic word of a given period.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::profile::{Profile, ProfileError, TableExtension};
use crate::word::{word_metric, CenteredWindow, FiniteWord, WordError};
use crate::{Natural, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConversionError {
    #[error("sample time {center} needs radius {radius} but the word has length {len}")]
    WindowTooSmall {
        center: usize,
        radius: usize,
        len: usize,
    },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Smallest integer `e` with `2^e >= r`, exact for positive rationals.
pub fn ceil_log2(r: &Rational) -> i64 {
    assert!(r.is_positive(), "log of a non-positive rational");
    let u = r.numer().magnitude();
    let v = r.denom().magnitude();
    // 2^e >= u/v within +-2 of the bit-length difference.
    let guess = u.bits() as i64 - v.bits() as i64 - 1;
    for e in guess..=guess + 3 {
        let ge = if e >= 0 {
            u <= &(v.clone() << e as usize)
        } else {
            &(u.clone() << (-e) as usize) <= v
        };
        if ge {
            return e;
        }
    }
    unreachable!("bit-length bracket always contains ceil(log2)");
}

/// A non-increasing bound `F : (0, infinity) -> [0, infinity)` on return
/// times at scale `eps`.
#[derive(Debug, Clone, PartialEq)]
pub enum AperiodicityBound {
    /// `F(eps) = floor(phi(-2 ceil(log2 eps)))` for `eps <= 1`, `0` above
    /// (negative arguments clamped to 0).
    DerivedFromProfile(Profile),
    /// Breakpoints `(eps, value)` with eps ascending and values
    /// non-increasing; evaluation uses the tightest breakpoint at or above
    /// the queried scale.
    Table(Vec<(Rational, Rational)>),
}

impl AperiodicityBound {
    pub fn eval(&self, eps: &Rational) -> Rational {
        assert!(eps.is_positive(), "scale must be positive");
        match self {
            AperiodicityBound::DerivedFromProfile(profile) => {
                if eps > &Rational::one() {
                    return Rational::zero();
                }
                let arg = (-2 * ceil_log2(eps)).max(0) as u64;
                Rational::from_integer(BigInt::from(profile.floor_eval(arg)))
            }
            AperiodicityBound::Table(breakpoints) => breakpoints
                .iter()
                .find(|(bp, _)| bp >= eps)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Rational::zero),
        }
    }
}

/// The metric-side bound induced by a shift gauge.
pub fn phi_to_f(profile: &Profile) -> AperiodicityBound {
    AperiodicityBound::DerivedFromProfile(profile.clone())
}

/// The shift gauge induced by a metric-side bound, tabulated for
/// `l = 0 ..= l_max`: `phi(l) = F(2^{-e})` with `e = floor(l/2) - 1` (odd
/// lengths round down to the even case of the proof).
pub fn f_to_phi(bound: &AperiodicityBound, l_max: u64) -> Result<Profile, ProfileError> {
    let mut values = Vec::with_capacity(l_max as usize + 1);
    for l in 0..=l_max {
        let e = (l / 2) as i64 - 1;
        let eps = power_of_two(-e);
        values.push(bound.eval(&eps));
    }
    Profile::table(values, TableExtension::FinalValue)
}

fn power_of_two(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Outcome of [`periodic_distance_check`].
#[derive(Debug, Clone, PartialEq)]
pub enum PeriodicCheckOutcome {
    Passed { comparisons: u64 },
    Failed(PeriodicCheckFailure),
}

impl PeriodicCheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, PeriodicCheckOutcome::Passed { .. })
    }
}

/// First failing comparison: at the sampled center, the word came within
/// `2^{-(s + ell(s))/2}` of the periodic word repeating `pattern`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCheckFailure {
    pub center: usize,
    pub pattern: Vec<u8>,
    /// Agreement radius realized, `None` when the windows were identical to
    /// the full radius.
    pub agreement: Option<usize>,
}

/// How the period-`s` comparison words are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternSource {
    /// All `k^s` patterns (used automatically for small `s`).
    Exhaustive,
    /// Every length-`s` block of the word itself, in every phase.
    BlocksOfWord,
}

/// Checks that around every sampled center the word stays farther than
/// `2^{-(s + ell(s))/2}` from every periodic word of period `s`. All `k^s`
/// patterns are tried when `s <= exhaustive_cap`, otherwise the patterns are
/// the word's own length-`s` blocks (the construction the separation
/// argument uses); every phase of each pattern is covered either way.
pub fn periodic_distance_check(
    w: &FiniteWord,
    s: u64,
    profile: &Profile,
    sample_centers: &[usize],
    exhaustive_cap: u64,
) -> Result<PeriodicCheckOutcome, ConversionError> {
    assert!(s >= 1, "period must be positive");
    let ell = profile.right_inverse(s)?;
    let threshold_exponent = s + ell; // compare d > 2^{-(s + ell)/2}
    let radius = ((threshold_exponent + 1) / 2 + 1) as usize;
    let k = w.alphabet().size();

    let source = if s <= exhaustive_cap && (k as u64).pow(s.min(32) as u32) <= 1 << 20 {
        PatternSource::Exhaustive
    } else {
        PatternSource::BlocksOfWord
    };
    let patterns = match source {
        PatternSource::Exhaustive => all_patterns(k, s as usize),
        PatternSource::BlocksOfWord => word_blocks(w, s as usize),
    };

    let mut comparisons = 0u64;
    for &center in sample_centers {
        let window = w.centered_window(center, radius).map_err(|_| {
            ConversionError::WindowTooSmall {
                center,
                radius,
                len: w.len(),
            }
        })?;
        for pattern in &patterns {
            for phase in 0..s as usize {
                let periodic = CenteredWindow::from_rule(w.alphabet(), radius, |j| {
                    let idx = (j + phase as i64).rem_euclid(s as i64) as usize;
                    pattern[idx]
                })?;
                comparisons += 1;
                let d = word_metric(&window, &periodic)?;
                let ok = d
                    .exceeds_half_exponent(threshold_exponent)
                    // Radius was chosen so resolution-limited cases decide.
                    .expect("radius exceeds the threshold scale");
                if !ok {
                    let agreement = match d {
                        crate::word::WordDistance::Exact { agreement } => Some(agreement),
                        crate::word::WordDistance::BelowResolution { .. } => None,
                    };
                    return Ok(PeriodicCheckOutcome::Failed(PeriodicCheckFailure {
                        center,
                        pattern: pattern.clone(),
                        agreement,
                    }));
                }
            }
        }
    }
    Ok(PeriodicCheckOutcome::Passed { comparisons })
}

fn all_patterns(k: u32, s: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; s];
    loop {
        out.push(cur.clone());
        let mut pos = s;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if (cur[pos] as u32) < k {
                break;
            }
            cur[pos] = 0;
        }
    }
}

fn word_blocks(w: &FiniteWord, s: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = Vec::new();
    for start in 1..=w.len().saturating_sub(s - 1) {
        let block = w.window(start, s - 1).expect("block in range").to_vec();
        if !out.contains(&block) {
            out.push(block);
        }
    }
    out
}

/// The exact floor of the derived bound, convenient for integer
/// comparisons in tests: `F(eps)` is always an integer for derived bounds.
pub fn derived_bound_floor(profile: &Profile, eps: &Rational) -> Natural {
    if eps > &Rational::one() {
        return Natural::zero();
    }
    let arg = (-2 * ceil_log2(eps)).max(0) as u64;
    profile.floor_eval(arg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn ceil_log2_exact_cases() {
        assert_eq!(ceil_log2(&rat(1, 1)), 0);
        assert_eq!(ceil_log2(&rat(1, 8)), -3);
        assert_eq!(ceil_log2(&rat(1, 3)), -1);
        assert_eq!(ceil_log2(&rat(5, 1)), 3);
        assert_eq!(ceil_log2(&rat(4, 1)), 2);
        assert_eq!(ceil_log2(&rat(3, 8)), -1);
    }

    #[test]
    fn derived_bound_values() {
        let f = phi_to_f(&Profile::Linear);
        assert_eq!(f.eval(&rat(1, 8)), rat(6, 1));
        assert_eq!(f.eval(&rat(1, 1)), rat(0, 1));
        assert_eq!(f.eval(&rat(2, 1)), rat(0, 1));
        // 1/4 < 1/3 <= 1/2: ceil(log2(1/3)) = -1, argument 2.
        let f = phi_to_f(&Profile::PowerOfTwo);
        assert_eq!(f.eval(&rat(1, 3)), rat(4, 1));
    }

    #[test]
    fn table_bound_round_trip_shape() {
        // F(eps) = 1/eps sampled at dyadics.
        let breakpoints: Vec<(Rational, Rational)> = (0..12)
            .map(|e| (power_of_two(-e), power_of_two(e)))
            .rev()
            .collect();
        let f = AperiodicityBound::Table(breakpoints);
        assert_eq!(f.eval(&rat(1, 2)), rat(2, 1));
        let phi = f_to_phi(&f, 10).unwrap();
        assert_eq!(phi.floor_eval(4), Natural::from(2u32)); // F(2^{-1})
        // non-decreasing in l
        for l in 1..=10 {
            assert!(phi.floor_eval(l) >= phi.floor_eval(l - 1));
        }
    }

    #[test]
    fn zero_bound_gives_zero_gauge() {
        let f = AperiodicityBound::Table(vec![]);
        let phi = f_to_phi(&f, 6).unwrap();
        for l in 0..=6 {
            assert_eq!(phi.floor_eval(l), Natural::zero());
        }
    }

    #[test]
    fn constant_word_fails_period_one() {
        let w = FiniteWord::parse(Alphabet::new(2).unwrap(), &"0".repeat(40)).unwrap();
        let out = periodic_distance_check(&w, 1, &Profile::Linear, &[20], 6).unwrap();
        match out {
            PeriodicCheckOutcome::Failed(f) => assert_eq!(f.pattern, vec![0]),
            PeriodicCheckOutcome::Passed { .. } => panic!("constant word is its own period-1 word"),
        }
    }

    #[test]
    fn window_too_small_is_reported() {
        let w = FiniteWord::parse(Alphabet::new(2).unwrap(), "0110").unwrap();
        assert!(matches!(
            periodic_distance_check(&w, 2, &Profile::Linear, &[2], 6),
            Err(ConversionError::WindowTooSmall { .. })
        ));
    }
}
