//! The two classical worked examples: the Morse-Thue sequence and circle
//! rotations by badly approximable numbers.
//!
//! Morse-Thue is generated by the substitution `a -> ab`, `b -> ba` and
//! extended to negative indices by the mirror rule `w(-n) = w(n-1)`; an
//! independent characterization (parity of the binary digit sum) serves as
//! cross-check. Rotation quality `q * dist(q*alpha, Z)` is decided exactly
//! through rational brackets refined from continued-fraction convergents.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::word::{Alphabet, FiniteWord};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicsError {
    #[error("requested depth {requested} exceeds the {available} available terms")]
    DepthExceeded { requested: usize, available: usize },
    #[error("continued fraction terms insufficient to decide a comparison (cap {0} terms)")]
    PrecisionExhausted(usize),
    #[error("continued fraction parse error: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// Morse-Thue
// ---------------------------------------------------------------------------

/// `w(i)` of the two-sided Morse-Thue word: for `i >= 0` the parity of the
/// binary digit sum of `i`; for `i < 0` the mirror rule `w(-n) = w(n-1)`.
pub fn morse_thue_symbol(i: i64) -> u8 {
    let n = if i >= 0 { i as u64 } else { (-i - 1) as u64 };
    (n.count_ones() & 1) as u8
}

/// The Morse-Thue word restricted to `[from, to]` (inclusive).
pub fn morse_thue_window(from: i64, to: i64) -> FiniteWord {
    assert!(from <= to, "empty index range");
    let alphabet = Alphabet::new(2).expect("binary alphabet");
    let symbols = (from..=to).map(morse_thue_symbol).collect();
    FiniteWord::new(alphabet, symbols).expect("binary symbols")
}

/// The one-sided prefix of length `2^n`, built by the substitution rule
/// (repeated appending of the complement). Used as an independent generator
/// against [`morse_thue_symbol`].
pub fn morse_thue_prefix_by_substitution(n: u32) -> FiniteWord {
    let alphabet = Alphabet::new(2).expect("binary alphabet");
    let mut symbols: Vec<u8> = vec![0];
    for _ in 0..n {
        let complement: Vec<u8> = symbols.iter().map(|&s| 1 - s).collect();
        symbols.extend(complement);
    }
    FiniteWord::new(alphabet, symbols).expect("binary symbols")
}

// ---------------------------------------------------------------------------
// Continued fractions
// ---------------------------------------------------------------------------

/// A continued fraction `[a0; a1, a2, ...]` with finitely many explicit
/// terms and an optional periodic tail. Finite expansions denote rationals;
/// a periodic tail denotes a quadratic irrational and supplies arbitrarily
/// many terms on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    initial: Vec<u64>,
    period: Option<Vec<u64>>,
}

impl ContinuedFraction {
    pub fn new(initial: Vec<u64>, period: Option<Vec<u64>>) -> Result<Self, ClassicsError> {
        if initial.is_empty() {
            return Err(ClassicsError::Parse("missing integer part".into()));
        }
        if initial.iter().skip(1).any(|&a| a == 0)
            || period.as_deref().is_some_and(|p| p.iter().any(|&a| a == 0))
        {
            return Err(ClassicsError::Parse(
                "partial quotients past a0 must be positive".into(),
            ));
        }
        if period.as_deref().is_some_and(|p| p.is_empty()) {
            return Err(ClassicsError::Parse("empty period".into()));
        }
        Ok(ContinuedFraction { initial, period })
    }

    pub fn term(&self, n: usize) -> Option<u64> {
        if n < self.initial.len() {
            return Some(self.initial[n]);
        }
        let period = self.period.as_ref()?;
        Some(period[(n - self.initial.len()) % period.len()])
    }

    /// Number of terms, `None` when the periodic tail makes it infinite.
    pub fn available_terms(&self) -> Option<usize> {
        match self.period {
            Some(_) => None,
            None => Some(self.initial.len()),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.period.is_none()
    }
}

impl FromStr for ContinuedFraction {
    type Err = ClassicsError;

    /// Parses `"a0;a1,a2,(p1,p2)"`; the parenthesized suffix is the
    /// periodic tail. Examples: `"1;(1)"` (golden ratio), `"0;2,(2)"`
    /// (sqrt(2) - 1), `"3;7,15,1"` (a rational).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| ClassicsError::Parse(m.to_string());
        let (head, rest) = match s.split_once(';') {
            Some((h, r)) => (h, r),
            None => (s, ""),
        };
        let a0: u64 = head
            .trim()
            .parse()
            .map_err(|_| err("invalid integer part"))?;
        let mut initial = vec![a0];
        let mut period = None;
        let rest = rest.trim();
        let (plain, periodic) = match rest.find('(') {
            Some(pos) => {
                let tail = rest[pos..]
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| err("unclosed period"))?;
                (rest[..pos].trim_end_matches(','), Some(tail))
            }
            None => (rest, None),
        };
        for part in plain.split(',').filter(|p| !p.trim().is_empty()) {
            initial.push(
                part.trim()
                    .parse()
                    .map_err(|_| err("invalid partial quotient"))?,
            );
        }
        if let Some(tail) = periodic {
            let terms = tail
                .split(',')
                .map(|p| p.trim().parse().map_err(|_| err("invalid period term")))
                .collect::<Result<Vec<u64>, _>>()?;
            period = Some(terms);
        }
        ContinuedFraction::new(initial, period)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.initial[0])?;
        write!(f, ";")?;
        for (i, a) in self.initial.iter().enumerate().skip(1) {
            if i > 1 {
                write!(f, ",")?;
            }
            write!(f, "{}", a)?;
        }
        if let Some(period) = &self.period {
            if self.initial.len() > 1 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (i, a) in period.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", a)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The first `depth` convergents `p_n / q_n` by the standard recurrence.
pub fn convergents(
    cf: &ContinuedFraction,
    depth: usize,
) -> Result<Vec<(BigInt, BigInt)>, ClassicsError> {
    if let Some(available) = cf.available_terms() {
        if depth > available {
            return Err(ClassicsError::DepthExceeded {
                requested: depth,
                available,
            });
        }
    }
    let mut out = Vec::with_capacity(depth);
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::from(cf.term(0).expect("a0 exists")), BigInt::one());
    out.push((p.clone(), q.clone()));
    for n in 1..depth {
        let a = BigInt::from(cf.term(n).expect("depth checked"));
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Exact-decision brackets for alpha
// ---------------------------------------------------------------------------

/// The value of a continued fraction as a shrinking rational bracket
/// `[lo, hi]` (consecutive convergents), collapsing to an exact rational for
/// finite expansions. Deepening the expansion refines the bracket; a term
/// cap bounds the work and surfaces as [`ClassicsError::PrecisionExhausted`].
pub struct AlphaBracket {
    cf: ContinuedFraction,
    depth: usize,
    lo: Rational,
    hi: Rational,
    exact: bool,
}

const TERM_CAP: usize = 4096;

impl AlphaBracket {
    pub fn new(cf: &ContinuedFraction) -> Self {
        let mut bracket = AlphaBracket {
            cf: cf.clone(),
            depth: 0,
            lo: Rational::zero(),
            hi: Rational::zero(),
            exact: false,
        };
        bracket.extend_to(2);
        bracket
    }

    fn extend_to(&mut self, depth: usize) {
        let depth = match self.cf.available_terms() {
            Some(available) => depth.min(available),
            None => depth,
        };
        if self.exact || depth <= self.depth {
            return;
        }
        let convs = convergents(&self.cf, depth).expect("depth clamped to available");
        let last = &convs[convs.len() - 1];
        let value = Rational::new(last.0.clone(), last.1.clone());
        if Some(depth) == self.cf.available_terms() && self.cf.is_rational() {
            self.lo = value.clone();
            self.hi = value;
            self.exact = true;
        } else if convs.len() >= 2 {
            let prev = &convs[convs.len() - 2];
            let prev_value = Rational::new(prev.0.clone(), prev.1.clone());
            // Consecutive convergents straddle the value.
            if prev_value <= value {
                self.lo = prev_value;
                self.hi = value;
            } else {
                self.lo = value;
                self.hi = prev_value;
            }
        } else {
            // Single term available but not rational: cannot happen (a
            // periodic tail always supplies a second term).
            unreachable!("periodic tails provide at least two terms");
        }
        self.depth = depth;
    }

    /// Shrinks the bracket below `width`; errors when the term cap is hit
    /// first (only possible for rationals, which collapse exactly anyway).
    fn refine_below(&mut self, width: &Rational) -> Result<(), ClassicsError> {
        while !self.exact && &(self.hi.clone() - self.lo.clone()) > width {
            if self.depth >= TERM_CAP {
                return Err(ClassicsError::PrecisionExhausted(TERM_CAP));
            }
            self.extend_to(self.depth + 8);
            if self.exact {
                break;
            }
            if Some(self.depth) == self.cf.available_terms() {
                // Finite but bracket not yet tight enough: final extension
                // made it exact above, so this is unreachable.
                return Err(ClassicsError::PrecisionExhausted(self.depth));
            }
        }
        Ok(())
    }

    /// Bracket of `q * dist(q * alpha, Z)`.
    pub fn scaled_dist(&self, q: u64) -> (Rational, Rational) {
        let qr = Rational::from_integer(BigInt::from(q));
        let a = qr.clone() * self.lo.clone();
        let b = qr.clone() * self.hi.clone();
        let (dlo, dhi) = dist_to_integers_bracket(&a, &b);
        (qr.clone() * dlo, qr * dhi)
    }
}

fn nearest_int_dist(x: &Rational) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    let rounded = (x.clone() + half).floor();
    (x.clone() - rounded).abs()
}

/// Range of `dist(x, Z)` over `x in [a, b]`.
fn dist_to_integers_bracket(a: &Rational, b: &Rational) -> (Rational, Rational) {
    debug_assert!(a <= b);
    let half = Rational::new(1.into(), 2.into());
    let da = nearest_int_dist(a);
    let db = nearest_int_dist(b);
    // An integer inside [a, b] pulls the minimum to 0.
    let contains_integer = a.ceil() <= b.floor();
    let lo = if contains_integer {
        Rational::zero()
    } else {
        da.clone().min(db.clone())
    };
    // A half-integer inside [a, b] pushes the maximum to 1/2: equivalent to
    // an odd integer inside [2a, 2b].
    let contains_half = {
        let two = Rational::from_integer(2.into());
        let lo2 = (a.clone() * two.clone()).ceil().to_integer();
        let hi2 = (b.clone() * two).floor().to_integer();
        if lo2 > hi2 {
            false
        } else if lo2 == hi2 {
            lo2.magnitude().bit(0)
        } else {
            true // two or more consecutive integers include an odd one
        }
    };
    let hi = if contains_half { half } else { da.max(db) };
    (lo, hi)
}

// ---------------------------------------------------------------------------
// Badness and the rotation aperiodicity check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct BadnessReport {
    /// Certified bracket for `min_{1 <= q <= horizon} q * dist(q alpha, Z)`.
    pub min_lo: Rational,
    pub min_hi: Rational,
    /// The `q` attaining the minimum (decided exactly).
    pub argmin_q: u64,
    pub horizon: u64,
}

/// The minimum of `q * dist(q alpha, Z)` over `1 <= q <= q_max`, with the
/// attaining `q`, decided by interval refinement (never by floating point).
pub fn badness_profile(
    cf: &ContinuedFraction,
    q_max: u64,
) -> Result<BadnessReport, ClassicsError> {
    assert!(q_max >= 1);
    let mut alpha = AlphaBracket::new(cf);
    // Initial width: enough that q * [lo, hi] usually pins the nearest
    // integer (q^2 * width small).
    let init = Rational::new(
        1.into(),
        BigInt::from(q_max) * BigInt::from(q_max) * BigInt::from(1u64 << 20),
    );
    alpha.refine_below(&init)?;

    // Candidate set: every q whose interval could still be the minimum.
    let mut candidates: Vec<u64> = (1..=q_max).collect();
    loop {
        let mut best_hi: Option<(Rational, u64)> = None;
        let mut intervals = Vec::with_capacity(candidates.len());
        for &q in &candidates {
            let (lo, hi) = alpha.scaled_dist(q);
            if best_hi.as_ref().is_none_or(|(bh, _)| &hi < bh) {
                best_hi = Some((hi.clone(), q));
            }
            intervals.push((q, lo, hi));
        }
        let (best_hi, best_q) = best_hi.expect("nonempty candidate set");
        // Anything whose lower end reaches below the best upper end could
        // still win; the current best always stays in (ties go to the
        // smallest q, which the ascending scan picks first).
        let survivors: Vec<u64> = intervals
            .iter()
            .filter(|(q, lo, _)| *q == best_q || lo < &best_hi)
            .map(|(q, _, _)| *q)
            .collect();
        if survivors == [best_q] {
            let (lo, hi) = alpha.scaled_dist(best_q);
            return Ok(BadnessReport {
                min_lo: lo,
                min_hi: hi,
                argmin_q: best_q,
                horizon: q_max,
            });
        }
        // Ambiguous: tighten alpha and re-examine only the survivors.
        let width = alpha.hi.clone() - alpha.lo.clone();
        let quarter = width / Rational::from_integer(1024.into());
        if alpha.exact {
            // Exact alpha with a genuine tie: smallest q wins by convention.
            let q = *survivors.iter().min().expect("nonempty");
            let (lo, hi) = alpha.scaled_dist(q);
            return Ok(BadnessReport {
                min_lo: lo,
                min_hi: hi,
                argmin_q: q,
                horizon: q_max,
            });
        }
        alpha.refine_below(&quarter)?;
        candidates = survivors;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcVerdict {
    /// `true` iff no `q <= horizon` has `q * dist(q alpha, Z) < c`. A
    /// bounded-horizon check: `true` is evidence, `false` is proof.
    pub holds: bool,
    pub witness_q: Option<u64>,
    pub horizon: u64,
}

/// Checks `q * dist(q alpha, Z) >= c` for every `q <= q_max`, reporting the
/// first violating `q` otherwise. Each comparison is decided exactly.
pub fn is_fc_aperiodic_at_zero(
    cf: &ContinuedFraction,
    c: &Rational,
    q_max: u64,
) -> Result<FcVerdict, ClassicsError> {
    let mut alpha = AlphaBracket::new(cf);
    let init = Rational::new(
        1.into(),
        BigInt::from(q_max) * BigInt::from(q_max) * BigInt::from(1u64 << 20),
    );
    alpha.refine_below(&init)?;
    for q in 1..=q_max {
        loop {
            let (lo, hi) = alpha.scaled_dist(q);
            if &hi < c {
                return Ok(FcVerdict {
                    holds: false,
                    witness_q: Some(q),
                    horizon: q_max,
                });
            }
            if &lo >= c {
                break;
            }
            if alpha.exact {
                // Exact value equal to c counts as satisfying >= c.
                break;
            }
            let width = alpha.hi.clone() - alpha.lo.clone();
            alpha.refine_below(&(width / Rational::from_integer(1024.into())))?;
        }
    }
    Ok(FcVerdict {
        holds: true,
        witness_q: None,
        horizon: q_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn morse_thue_window_matches_substitution() {
        let w = morse_thue_window(0, 15);
        assert_eq!(w.to_string(), "0110100110010110");
        assert_eq!(w, morse_thue_prefix_by_substitution(4));
    }

    #[test]
    fn morse_thue_mirror_rule() {
        assert_eq!(morse_thue_window(-4, -1).to_string(), "0110");
        for n in 1..200 {
            assert_eq!(morse_thue_symbol(-n), morse_thue_symbol(n - 1));
        }
    }

    #[test]
    fn golden_ratio_convergents_are_fibonacci() {
        let cf: ContinuedFraction = "1;(1)".parse().unwrap();
        let convs = convergents(&cf, 6).unwrap();
        let expected = [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8)];
        for ((p, q), (ep, eq)) in convs.iter().zip(expected) {
            assert_eq!((p, q), (&BigInt::from(ep), &BigInt::from(eq)));
        }
    }

    #[test]
    fn sqrt2_minus_one_convergents() {
        let cf: ContinuedFraction = "0;(2)".parse().unwrap();
        let convs = convergents(&cf, 3).unwrap();
        assert_eq!(convs[0], (BigInt::zero(), BigInt::one()));
        assert_eq!(convs[1], (BigInt::one(), BigInt::from(2)));
        assert_eq!(convs[2], (BigInt::from(2), BigInt::from(5)));
    }

    #[test]
    fn convergent_determinants_alternate() {
        let cf: ContinuedFraction = "3;7,15,1,(292,1,1,1,2,1,3,1)".parse().unwrap();
        let convs = convergents(&cf, 20).unwrap();
        for pair in convs.windows(2) {
            let det = &pair[1].0 * &pair[0].1 - &pair[0].0 * &pair[1].1;
            assert!(det == BigInt::one() || det == -BigInt::one());
        }
        // strictly increasing denominators
        for pair in convs.windows(2) {
            assert!(pair[1].1 > pair[0].1);
        }
    }

    #[test]
    fn depth_errors_on_finite_cf() {
        let cf: ContinuedFraction = "1;2,3".parse().unwrap();
        assert!(convergents(&cf, 3).is_ok());
        assert!(matches!(
            convergents(&cf, 4),
            Err(ClassicsError::DepthExceeded { .. })
        ));
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["1;(1)", "0;(2)", "3;7,15,1", "0;2,(2,1)"] {
            let cf: ContinuedFraction = s.parse().unwrap();
            assert_eq!(cf.to_string(), s);
        }
        assert!("".parse::<ContinuedFraction>().is_err());
        assert!("1;0".parse::<ContinuedFraction>().is_err());
        assert!("1;(“".parse::<ContinuedFraction>().is_err());
    }

    #[test]
    fn golden_badness_at_one() {
        let cf: ContinuedFraction = "1;(1)".parse().unwrap();
        let report = badness_profile(&cf, 1).unwrap();
        assert_eq!(report.argmin_q, 1);
        // (3 - sqrt(5)) / 2 = 0.38196601...
        assert!(report.min_lo > rat(38196, 100000));
        assert!(report.min_hi < rat(38197, 100000));
    }

    #[test]
    fn golden_badness_small_horizon() {
        let cf: ContinuedFraction = "1;(1)".parse().unwrap();
        let report = badness_profile(&cf, 100).unwrap();
        assert_eq!(report.argmin_q, 1);
    }

    #[test]
    fn rational_alpha_hits_zero_exactly() {
        // alpha = 3/8 = [0; 2, 1, 2]: q = 8 gives dist 0.
        let cf: ContinuedFraction = "0;2,1,2".parse().unwrap();
        let report = badness_profile(&cf, 10).unwrap();
        assert_eq!(report.argmin_q, 8);
        assert_eq!(report.min_lo, Rational::zero());
        assert_eq!(report.min_hi, Rational::zero());
    }

    #[test]
    fn fc_check_golden() {
        let cf: ContinuedFraction = "1;(1)".parse().unwrap();
        let v = is_fc_aperiodic_at_zero(&cf, &rat(7, 20), 1000).unwrap();
        assert!(v.holds);
        let v = is_fc_aperiodic_at_zero(&cf, &rat(2, 5), 10).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness_q, Some(1));
    }

    #[test]
    fn huge_partial_quotient_forces_small_badness() {
        // [0; 1, 1000, ...]: the convergent before the big term approximates
        // alpha to quality better than 1/1000.
        let cf: ContinuedFraction = "0;1,1000,(1)".parse().unwrap();
        let report = badness_profile(&cf, 10).unwrap();
        assert!(report.min_hi < rat(1, 500));
    }
}
