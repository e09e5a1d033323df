//! Non-decreasing aperiodicity gauges `phi : N0 -> [0, oo)` with exact
//! integer floor evaluation, and the discrete right-inverse
//! `ell(s) = min { j : phi(j) >= s }`.
//!
//! Everything here is exact: `floor(k^{dl})` for rational `d = p/q` is the
//! integer q-th root of `k^{lp}`, never a float.

use std::fmt;
use std::str::FromStr;

use num::traits::Pow;
use num::{BigUint, One, Signed, Zero};
use thiserror::Error;

use crate::{Natural, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("profile is bounded by {sup} which is below the requested level {level}")]
    BoundedProfile { sup: Natural, level: Natural },
    #[error("table values must be non-negative and non-decreasing (offending index {0})")]
    NotMonotone(usize),
    #[error("delta must be a rational strictly between 0 and 1, got {0}")]
    DeltaOutOfRange(Rational),
    #[error("base must be at least 2, got {0}")]
    BaseTooSmall(u32),
}

/// What a [`Profile::Table`] evaluates to beyond its last entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableExtension {
    /// Repeat the final value forever (bounded gauge).
    FinalValue,
    /// Grow by one per step past the end (unbounded gauge).
    UnitSlope,
}

/// A non-decreasing gauge `phi : N0 -> [0, oo)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Profile {
    /// Finite list of non-negative, non-decreasing rationals with an
    /// extension rule past the end.
    Table {
        values: Vec<Rational>,
        extension: TableExtension,
    },
    /// `phi(l) = l`.
    Linear,
    /// `phi(l) = 2^l`.
    PowerOfTwo,
    /// `phi(l) = base^{delta * l}` with `delta` rational in (0, 1).
    ExponentialBase { base: u32, delta: Rational },
    /// `phi(l) = 0` for `l <= l0`, `inner(l)` for `l > l0`.
    Thresholded { inner: Box<Profile>, l0: u64 },
}

impl Profile {
    pub fn table(values: Vec<Rational>, extension: TableExtension) -> Result<Self, ProfileError> {
        if values.is_empty() {
            return Err(ProfileError::NotMonotone(0));
        }
        for (i, v) in values.iter().enumerate() {
            if v.is_negative() {
                return Err(ProfileError::NotMonotone(i));
            }
            if i > 0 && v < &values[i - 1] {
                return Err(ProfileError::NotMonotone(i));
            }
        }
        Ok(Profile::Table { values, extension })
    }

    pub fn exponential(base: u32, delta: Rational) -> Result<Self, ProfileError> {
        if base < 2 {
            return Err(ProfileError::BaseTooSmall(base));
        }
        if !delta.is_positive() || delta >= Rational::one() {
            return Err(ProfileError::DeltaOutOfRange(delta));
        }
        Ok(Profile::ExponentialBase { base, delta })
    }

    pub fn thresholded(inner: Profile, l0: u64) -> Self {
        Profile::Thresholded {
            inner: Box::new(inner),
            l0,
        }
    }

    /// `floor(phi(l))`, computed exactly.
    pub fn floor_eval(&self, l: u64) -> Natural {
        match self {
            Profile::Table { values, extension } => {
                let idx = l as usize;
                if idx < values.len() {
                    rational_floor(&values[idx])
                } else {
                    let last = values.last().unwrap();
                    match extension {
                        TableExtension::FinalValue => rational_floor(last),
                        TableExtension::UnitSlope => {
                            let overshoot = l - (values.len() as u64 - 1);
                            rational_floor(last) + Natural::from(overshoot)
                        }
                    }
                }
            }
            Profile::Linear => Natural::from(l),
            Profile::PowerOfTwo => Natural::one() << l.try_into().unwrap_or(usize::MAX),
            Profile::ExponentialBase { base, delta } => {
                let (p, q) = delta_parts(delta);
                let exponent = l.checked_mul(p).expect("gauge exponent overflow");
                let power: BigUint = Pow::pow(BigUint::from(*base), exponent);
                power.nth_root(q.try_into().expect("delta denominator too large"))
            }
            Profile::Thresholded { inner, l0 } => {
                if l <= *l0 {
                    Natural::zero()
                } else {
                    inner.floor_eval(l)
                }
            }
        }
    }

    /// `phi(l) >= s` for an integer level `s` (equivalent to
    /// `floor(phi(l)) >= s`).
    pub fn reaches(&self, l: u64, s: &Natural) -> bool {
        &self.floor_eval(l) >= s
    }

    /// `sup_l floor(phi(l))` for bounded gauges, `None` when unbounded.
    pub fn floor_sup(&self) -> Option<Natural> {
        match self {
            Profile::Table { values, extension } => match extension {
                TableExtension::FinalValue => Some(rational_floor(values.last().unwrap())),
                TableExtension::UnitSlope => None,
            },
            Profile::Linear | Profile::PowerOfTwo | Profile::ExponentialBase { .. } => None,
            Profile::Thresholded { inner, .. } => inner.floor_sup(),
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.floor_sup().is_none()
    }

    /// `ell(s) = min { j : phi(j) >= s }` for `s >= 1`, or an error when the
    /// gauge never reaches `s`.
    pub fn right_inverse(&self, s: u64) -> Result<u64, ProfileError> {
        assert!(s >= 1, "right inverse is defined for s >= 1");
        let level = Natural::from(s);
        if let Some(sup) = self.floor_sup() {
            if sup < level {
                return Err(ProfileError::BoundedProfile { sup, level });
            }
        }
        if self.reaches(0, &level) {
            return Ok(0);
        }
        // Exponential probe, then bisect in (lo, hi].
        let mut lo = 0u64;
        let mut hi = 1u64;
        while !self.reaches(hi, &level) {
            lo = hi;
            hi = hi.checked_mul(2).expect("right inverse out of range");
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.reaches(mid, &level) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// An unbounded gauge together with its right-inverse `ell`.
#[derive(Debug, Clone)]
pub struct RightInverse {
    profile: Profile,
}

impl RightInverse {
    pub fn new(profile: Profile) -> Result<Self, ProfileError> {
        if let Some(sup) = profile.floor_sup() {
            return Err(ProfileError::BoundedProfile {
                sup,
                level: Natural::zero(),
            });
        }
        Ok(RightInverse { profile })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn ell(&self, s: u64) -> u64 {
        self.profile
            .right_inverse(s)
            .expect("unbounded gauge always reaches s")
    }
}

/// Incremental `ell(s)` lookup for `s = 1, 2, 3, ...` in ascending order.
///
/// `ell` is non-decreasing, so a single forward pointer over `j` suffices;
/// every gauge floor is evaluated once. Works for bounded gauges too, in
/// which case levels past the supremum yield `None`.
pub struct EllScan<'a> {
    profile: &'a Profile,
    sup: Option<Natural>,
    j: u64,
    floor_at_j: Natural,
}

impl<'a> EllScan<'a> {
    pub fn new(profile: &'a Profile) -> Self {
        EllScan {
            profile,
            sup: profile.floor_sup(),
            j: 0,
            floor_at_j: profile.floor_eval(0),
        }
    }

    /// `ell(s)`; `s` must not decrease between calls.
    pub fn ell(&mut self, s: u64) -> Option<u64> {
        let level = Natural::from(s);
        if let Some(sup) = &self.sup {
            if sup < &level {
                return None;
            }
        }
        while self.floor_at_j < level {
            self.j += 1;
            self.floor_at_j = self.profile.floor_eval(self.j);
        }
        Some(self.j)
    }
}

pub(crate) fn rational_floor(v: &Rational) -> Natural {
    debug_assert!(!v.is_negative());
    v.floor().to_integer().to_biguint().unwrap()
}

pub(crate) fn delta_parts(delta: &Rational) -> (u64, u64) {
    let p = delta
        .numer()
        .to_biguint()
        .and_then(|n| n.try_into().ok())
        .expect("delta numerator must fit u64");
    let q = delta
        .denom()
        .to_biguint()
        .and_then(|n| n.try_into().ok())
        .expect("delta denominator must fit u64");
    (p, q)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("profile spec error at byte {pos}: {msg}")]
pub struct ProfileParseError {
    pub pos: usize,
    pub msg: String,
}

fn parse_rational(s: &str, offset: usize) -> Result<Rational, ProfileParseError> {
    let err = |msg: &str| ProfileParseError {
        pos: offset,
        msg: msg.to_string(),
    };
    if let Some((num, den)) = s.split_once('/') {
        let n: num::BigInt = num.parse().map_err(|_| err("invalid numerator"))?;
        let d: num::BigInt = den.parse().map_err(|_| err("invalid denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        Ok(Rational::new(n, d))
    } else {
        let n: num::BigInt = s.parse().map_err(|_| err("invalid integer"))?;
        Ok(Rational::from_integer(n))
    }
}

impl FromStr for Profile {
    type Err = ProfileParseError;

    /// Grammar:
    /// `linear` | `pow2` | `exp:k=<int>,delta=<p/q>` |
    /// `thresh:l0=<int>;<profile>` | `table:<v>,<v>,...[,+]`
    /// where `<v>` is an integer or `p/q` and a trailing `+` selects the
    /// unit-slope (unbounded) extension.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos: usize, msg: &str| ProfileParseError {
            pos,
            msg: msg.to_string(),
        };
        match s {
            "linear" => return Ok(Profile::Linear),
            "pow2" => return Ok(Profile::PowerOfTwo),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("exp:") {
            let base_off = 4;
            let mut base = None;
            let mut delta = None;
            let mut off = base_off;
            for part in rest.split(',') {
                if let Some(v) = part.strip_prefix("k=") {
                    base = Some(
                        v.parse::<u32>()
                            .map_err(|_| err(off + 2, "invalid alphabet size"))?,
                    );
                } else if let Some(v) = part.strip_prefix("delta=") {
                    delta = Some(parse_rational(v, off + 6)?);
                } else {
                    return Err(err(off, "expected k=<int> or delta=<p/q>"));
                }
                off += part.len() + 1;
            }
            let base = base.ok_or_else(|| err(base_off, "missing k="))?;
            let delta = delta.ok_or_else(|| err(base_off, "missing delta="))?;
            return Profile::exponential(base, delta).map_err(|e| err(base_off, &e.to_string()));
        }
        if let Some(rest) = s.strip_prefix("thresh:") {
            let (head, inner) = rest
                .split_once(';')
                .ok_or_else(|| err(7, "expected thresh:l0=<int>;<profile>"))?;
            let l0 = head
                .strip_prefix("l0=")
                .ok_or_else(|| err(7, "expected l0=<int>"))?
                .parse::<u64>()
                .map_err(|_| err(10, "invalid l0"))?;
            let inner_profile: Profile = inner.parse().map_err(|e: ProfileParseError| {
                ProfileParseError {
                    pos: e.pos + 8 + head.len(),
                    msg: e.msg,
                }
            })?;
            return Ok(Profile::thresholded(inner_profile, l0));
        }
        if let Some(rest) = s.strip_prefix("table:") {
            let mut values = Vec::new();
            let mut extension = TableExtension::FinalValue;
            let mut off = 6;
            let parts: Vec<&str> = rest.split(',').collect();
            for (idx, part) in parts.iter().enumerate() {
                if *part == "+" {
                    if idx + 1 != parts.len() {
                        return Err(err(off, "'+' must be the final table entry"));
                    }
                    extension = TableExtension::UnitSlope;
                } else {
                    values.push(parse_rational(part, off)?);
                }
                off += part.len() + 1;
            }
            return Profile::table(values, extension).map_err(|e| err(6, &e.to_string()));
        }
        Err(err(0, "unknown profile kind"))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Linear => write!(f, "linear"),
            Profile::PowerOfTwo => write!(f, "pow2"),
            Profile::ExponentialBase { base, delta } => {
                write!(f, "exp:k={},delta={}", base, delta)
            }
            Profile::Thresholded { inner, l0 } => write!(f, "thresh:l0={};{}", l0, inner),
            Profile::Table { values, extension } => {
                write!(f, "table:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", v)?;
                }
                if matches!(extension, TableExtension::UnitSlope) {
                    write!(f, ",+")?;
                }
                Ok(())
            }
        }
    }
}
