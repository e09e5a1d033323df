//! Certified numeric instantiation of the horosphere-geometry parameter
//! machinery: the covering constants, the two feasibility conditions on a
//! discrete gauge, the minimal-shift search, the discrete/continuous gauge
//! translation, and the full parameter pipeline producing a report.
//!
//! Nothing geometric is constructed; every output is an interval or an
//! integer ceiling taken on the safe side, so a "satisfied" verdict is a
//! machine-checked inequality.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Pow;
use num::{BigUint, FromPrimitive, One, Signed, Zero};
use thiserror::Error;

use crate::counting::{root_ge, root_lower_bound, root_upper_bound_below, Feasibility};
use crate::interval::Interval;
use crate::profile::{Profile, ProfileError, RightInverse};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("parameter ordering violated: {0}")]
    ParameterOrderViolated(String),
    #[error("shift lower bound {s} has ell({s}) = {ell} >= {s}; the growth condition fails below it")]
    Condition43Violated { s: u64, ell: u64 },
    #[error("constant c = {c} must lie strictly between 1 and 2^(n-1) = {limit}")]
    COutOfRange { c: Rational, limit: u64 },
    #[error("no certified tail bound for a tabulated gauge")]
    NoTailBound,
    #[error("shift search exceeded the cap {cap}")]
    SearchBudgetExceeded { cap: u64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

// ---------------------------------------------------------------------------
// Horosphere basics
// ---------------------------------------------------------------------------

/// Scale factor of a horosphere pushed a (signed) time `t` along its
/// geodesic normal: `e^t`.
pub fn horosphere_scale(t: f64) -> Interval {
    Interval::point(t).exp()
}

/// Chordal (horospherical) distance from hyperbolic distance:
/// `h = 2 sinh(d/2)`.
pub fn horo_chord(d: f64) -> Interval {
    assert!(d >= 0.0, "distances are non-negative");
    Interval::point(d).scale(0.5).sinh().scale(2.0)
}

/// Inverse of [`horo_chord`]: `d = 2 asinh(h/2)`.
pub fn chord_to_distance(h: f64) -> Interval {
    assert!(h >= 0.0, "distances are non-negative");
    Interval::point(h).scale(0.5).asinh().scale(2.0)
}

/// `int_0^r sinh^m t dt` by the closed-form reduction
/// `m I_m = sinh^{m-1}(r) cosh(r) - (m-1) I_{m-2}`, `I_0 = r`,
/// `I_1 = cosh r - 1`. Ball volumes in constant curvature are proportional
/// to this with the (cancelling) sphere-area factor.
pub fn sinh_power_integral(m: u32, r: &Interval) -> Interval {
    assert!(r.lo() >= 0.0, "integration radius must be non-negative");
    match m {
        0 => *r,
        1 => r.cosh().sub(&Interval::point(1.0)),
        _ => {
            let boundary = r.sinh().powi(m - 1).mul(&r.cosh());
            let lower = sinh_power_integral(m - 2, r);
            boundary
                .sub(&lower.scale((m - 1) as f64))
                .scale(1.0 / m as f64)
        }
    }
}

// ---------------------------------------------------------------------------
// Parameters and covering constants
// ---------------------------------------------------------------------------

/// The full parameter set: dimension, injectivity radius, the discrete and
/// continuous distance constants, the discretization step, the minimal
/// shifts, the reference edge length, and the exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicParams {
    pub n: u32,
    pub i_m: f64,
    /// Discrete-side distance constant (must exceed `r0`).
    pub eps_bar0: f64,
    /// Continuous-side distance constant `eps_bar0 - r0`.
    pub eps0: f64,
    /// Discretization step (must exceed `ln 2`).
    pub r0: f64,
    /// Discrete minimal shift.
    pub s_bar0: u64,
    /// Continuous minimal shift `(s_bar0 + 1) r0`.
    pub s0: f64,
    /// Reference cube edge length.
    pub edge: f64,
    pub delta: Rational,
}

impl HyperbolicParams {
    /// Enforces `ln 2 < r0 < eps_bar0 < i_m`, `0 < delta < 1`, and sane
    /// dimension / edge values. The first chain is decided with certified
    /// arithmetic for the `ln 2` endpoint.
    pub fn validate(&self) -> Result<(), HyperbolicError> {
        if self.n < 2 {
            return Err(HyperbolicError::ParameterOrderViolated(format!(
                "dimension must be at least 2, got {}",
                self.n
            )));
        }
        if !(self.edge > 0.0) {
            return Err(HyperbolicError::ParameterOrderViolated(
                "edge length must be positive".into(),
            ));
        }
        let ln2 = Interval::point(2.0).ln();
        let chain_ok = ln2.definitely_lt(&Interval::point(self.r0))
            && self.r0 < self.eps_bar0
            && self.eps_bar0 < self.i_m;
        if !chain_ok {
            return Err(HyperbolicError::ParameterOrderViolated(format!(
                "need ln 2 < r0 < eps_bar0 < i_m, got r0 = {}, eps_bar0 = {}, i_m = {}",
                self.r0, self.eps_bar0, self.i_m
            )));
        }
        if !self.delta.is_positive() || self.delta >= Rational::one() {
            return Err(HyperbolicError::ParameterOrderViolated(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// First covering radius at shift `s`:
/// `2 sinh(eps_bar0 + asinh(e^{-(s-1-ell) r0} sqrt(n-1) edge / 2))` where
/// `ell = ell_bar(s)`; requires `ell < s`.
pub fn r1_at(p: &HyperbolicParams, ell: u64, s: u64) -> Result<Interval, HyperbolicError> {
    if ell + 1 > s {
        return Err(HyperbolicError::Condition43Violated { s, ell });
    }
    let decay = Interval::point(-((s - 1 - ell) as f64))
        .mul(&Interval::point(p.r0))
        .exp();
    let half_diag = Interval::point(((p.n - 1) as f64).sqrt())
        .mul(&Interval::point(p.edge))
        .scale(0.5);
    let inner = decay.mul(&half_diag).asinh();
    Ok(inner.add(&Interval::point(p.eps_bar0)).sinh().scale(2.0))
}

/// Second covering radius at shift `s`:
/// `2 asinh(e^{-(s-1) r0} sqrt(n-1) edge / 4)`.
pub fn r2_at(p: &HyperbolicParams, s: u64) -> Interval {
    assert!(s >= 1, "shift must be positive");
    let decay = Interval::point(-((s - 1) as f64))
        .mul(&Interval::point(p.r0))
        .exp();
    let quarter_diag = Interval::point(((p.n - 1) as f64).sqrt())
        .mul(&Interval::point(p.edge))
        .scale(0.25);
    decay.mul(&quarter_diag).asinh().scale(2.0)
}

/// First covering count: `ceil((r1 + sqrt(n-1) edge)^{n-1} / edge^{n-1})`,
/// the ceiling taken on the interval's upper bound (the safe direction).
pub fn c1_at(p: &HyperbolicParams, ell: u64, s: u64) -> Result<(u64, bool), HyperbolicError> {
    let r1 = r1_at(p, ell, s)?;
    let diag = Interval::point(((p.n - 1) as f64).sqrt()).mul(&Interval::point(p.edge));
    let ratio = r1
        .add(&diag)
        .powi(p.n - 1)
        .div(&Interval::point(p.edge).powi(p.n - 1));
    Ok(ratio.ceil_upper())
}

/// Second covering count: the ratio of ball volumes
/// `vol B(2 asinh(e^{r0} sqrt(n-1) edge / 4) + r2(s) + eps_bar0)` over
/// `vol B(i_m / 2)`, rounded up.
pub fn c2_at(p: &HyperbolicParams, s: u64) -> (u64, bool) {
    let quarter_diag = Interval::point(((p.n - 1) as f64).sqrt())
        .mul(&Interval::point(p.edge))
        .scale(0.25);
    let base = Interval::point(p.r0).exp().mul(&quarter_diag).asinh().scale(2.0);
    let outer = base.add(&r2_at(p, s)).add(&Interval::point(p.eps_bar0));
    let ratio = sinh_power_integral(p.n - 1, &outer)
        .div(&sinh_power_integral(p.n - 1, &Interval::point(p.i_m / 2.0)));
    ratio.ceil_upper()
}

/// The covering constants evaluated at `s = s_bar0 + 1`, together with the
/// crude a-priori bound for comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryConstants {
    /// Evaluation shift `s_bar0 + 1`.
    pub s: u64,
    pub r1: Interval,
    pub r2: Interval,
    pub c1: u64,
    pub c2: u64,
    /// Either ceiling sat on an integer boundary (the true constant could
    /// be one lower).
    pub ceiling_straddle: bool,
    pub cbar: u64,
    pub cbar_rough: u64,
}

pub fn geometry_constants(
    p: &HyperbolicParams,
    ell_bar: &RightInverse,
) -> Result<GeometryConstants, HyperbolicError> {
    p.validate()?;
    let s = p.s_bar0 + 1;
    let ell = ell_bar.ell(s);
    if ell >= s {
        return Err(HyperbolicError::Condition43Violated { s, ell });
    }
    let r1 = r1_at(p, ell, s)?;
    let r2 = r2_at(p, s);
    let (c1, st1) = c1_at(p, ell, s)?;
    let (c2, st2) = c2_at(p, s);
    Ok(GeometryConstants {
        s,
        r1,
        r2,
        c1,
        c2,
        ceiling_straddle: st1 || st2,
        cbar: c1
            .checked_mul(c2)
            .expect("covering constant overflow"),
        cbar_rough: rough_cbar_bound(p.n, p.i_m),
    })
}

/// The crude covering bound, evaluated verbatim:
/// `ceil((3 cosh(i_m) sqrt(n+1))^{n-1})` times the ceiling of the ratio of
/// `int_0^r sinh^{n-1}` at `r = sqrt(5 i_m + 4 ln(sqrt(n+1)/2))` over the
/// same integral at `i_m / 2`.
pub fn rough_cbar_bound(n: u32, i_m: f64) -> u64 {
    assert!(n >= 2 && i_m > 0.0);
    let root_np1 = Interval::point((n + 1) as f64).sqrt();
    let first = Interval::point(3.0)
        .mul(&Interval::point(i_m).cosh())
        .mul(&root_np1)
        .powi(n - 1)
        .ceil_upper()
        .0;
    let arg = Interval::point(5.0 * i_m).add(&root_np1.scale(0.5).ln().scale(4.0));
    assert!(
        arg.lo() > 0.0,
        "injectivity radius too small for the crude bound"
    );
    let second = sinh_power_integral(n - 1, &arg.sqrt())
        .div(&sinh_power_integral(n - 1, &Interval::point(i_m / 2.0)))
        .ceil_upper()
        .0;
    first.checked_mul(second).expect("crude bound overflow")
}

// ---------------------------------------------------------------------------
// The two feasibility conditions on the discrete gauge
// ---------------------------------------------------------------------------

/// Smallest `l_start` with `floor(phibar(l)) > l` for every `l >= l_start`,
/// certified for closed-form gauges: an exact check up to a point past which
/// `phibar(l) >= 2l` is maintained by induction on the growth ratio.
/// `None` means the inequality never stabilizes (e.g. the linear gauge).
pub fn first_good_length(phibar: &Profile) -> Result<Option<u64>, HyperbolicError> {
    match phibar {
        Profile::Linear => Ok(None),
        // 2^l > l for every l >= 0.
        Profile::PowerOfTwo => Ok(Some(0)),
        Profile::ExponentialBase { base, delta } => {
            let (pp, q) = crate::profile::delta_parts(delta);
            let b = BigUint::from(*base);
            // Find l* with base^{delta l*} >= 2 l* and growth ratio
            // base^delta >= (l*+1)/l*; from there phibar(l) >= 2l holds by
            // induction and floor(phibar(l)) >= 2l - 1 > l for l >= 2.
            let mut stable = None;
            for cand in 2u64..=1_000_000 {
                let value_ok = Pow::pow(b.clone(), pp * cand) >= Pow::pow(BigUint::from(2 * cand), q);
                let ratio_ok = Pow::pow(b.clone(), pp) * Pow::pow(BigUint::from(cand), q)
                    >= Pow::pow(BigUint::from(cand + 1), q);
                if value_ok && ratio_ok {
                    stable = Some(cand);
                    break;
                }
            }
            let stable = stable.ok_or_else(|| {
                HyperbolicError::Infeasible("growth certificate not found below 10^6".into())
            })?;
            let mut start = 0;
            for l in 0..stable {
                if phibar.floor_eval(l) <= crate::Natural::from(l) {
                    start = l + 1;
                }
            }
            Ok(Some(start))
        }
        Profile::Table { .. } => Err(HyperbolicError::NoTailBound),
        Profile::Thresholded { inner, l0 } => Ok(first_good_length(inner)?
            // The gauge is zero through l0, so nothing below l0 + 1 works.
            .map(|start| start.max(l0 + 1))),
    }
}

/// Report of the two conditions at a candidate minimal shift.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub s_bar0: u64,
    /// `floor(phibar(l)) > l` for all `l >= s_bar0`, and `ell(s_bar0) >= 1`.
    pub growth_holds: bool,
    /// First `l >= s_bar0` violating the growth inequality, when one exists
    /// below the certified stabilization point.
    pub failing_l: Option<u64>,
    pub ell_at_s_bar0: u64,
    /// The subtracted-sum condition
    /// `2^{n-1} - cbar * sum_{l >= ell(s_bar0)} (floor inc)/c^l >= c`.
    pub sum_condition: Feasibility,
    /// Margin of the sum condition (left side minus `c`); `None` when the
    /// increment series diverges against this `c`.
    pub margin: Option<Interval>,
    pub terms: u64,
}

fn rational_from_f64(x: f64) -> Rational {
    BigRational::from_f64(x).expect("finite float")
}

/// Envelope base `a >= base^delta` for the geometric tail, or `None` when
/// the increments outgrow `c`.
fn tail_envelope(phibar: &Profile, c: &Rational) -> Result<Option<Rational>, HyperbolicError> {
    match phibar {
        Profile::ExponentialBase { base, delta } => {
            let (p, q) = crate::profile::delta_parts(delta);
            if root_ge(*base, p, q, c) {
                return Ok(None);
            }
            Ok(Some(root_upper_bound_below(*base, p, q, c)))
        }
        Profile::PowerOfTwo => {
            let two = Rational::from_integer(2.into());
            if c <= &two {
                return Ok(None);
            }
            Ok(Some(two))
        }
        Profile::Thresholded { inner, .. } => tail_envelope(inner, c),
        Profile::Linear | Profile::Table { .. } => Err(HyperbolicError::NoTailBound),
    }
}

fn irregular_until(phibar: &Profile) -> u64 {
    match phibar {
        Profile::Thresholded { inner, l0 } => (l0 + 1).max(irregular_until(inner)),
        _ => 0,
    }
}

/// Checks both feasibility conditions at `s_bar0` for alphabet size
/// `2^{n-1}`, with the covering constant given as a certified interval. The
/// sum condition is decided from an exact partial sum plus a geometric tail
/// bound, escalating the truncation until the verdict is conclusive.
pub fn check_conditions_4_3_4_4(
    n: u32,
    s_bar0: u64,
    phibar: &Profile,
    c: &Rational,
    cbar: &Interval,
) -> Result<FeasibilityReport, HyperbolicError> {
    assert!(n >= 2 && n <= 32, "dimension out of range");
    let k_limit = 1u64 << (n - 1);
    let k_rat = Rational::from_integer(BigInt::from(k_limit));
    if c <= &Rational::one() || c >= &k_rat {
        return Err(HyperbolicError::COutOfRange {
            c: c.clone(),
            limit: k_limit,
        });
    }
    if !phibar.is_unbounded() {
        return Err(HyperbolicError::NoTailBound);
    }

    // Growth condition.
    let start = first_good_length(phibar)?;
    let (mut growth_holds, mut failing_l) = match start {
        Some(start) if s_bar0 >= start => (true, None),
        Some(start) => {
            // Pinpoint the first violation in [s_bar0, start).
            let first = (s_bar0..start)
                .find(|&l| phibar.floor_eval(l) <= crate::Natural::from(l));
            (false, first)
        }
        None => (false, Some(s_bar0)),
    };
    let ell_at = if s_bar0 >= 1 {
        phibar.right_inverse(s_bar0)?
    } else {
        0
    };
    if ell_at == 0 {
        growth_holds = false;
        failing_l = failing_l.or(Some(s_bar0));
    }

    // Sum condition.
    if s_bar0 == 0 {
        return Ok(FeasibilityReport {
            s_bar0,
            growth_holds,
            failing_l,
            ell_at_s_bar0: 0,
            sum_condition: Feasibility::Unknown,
            margin: None,
            terms: 0,
        });
    }
    let envelope = tail_envelope(phibar, c)?;
    let Some(envelope) = envelope else {
        return Ok(FeasibilityReport {
            s_bar0,
            growth_holds,
            failing_l,
            ell_at_s_bar0: ell_at,
            sum_condition: Feasibility::Unsatisfied,
            margin: None,
            terms: 0,
        });
    };
    let ratio = envelope / c.clone();
    let sum_from = ell_at.max(1);
    let cbar_lo = rational_from_f64(cbar.lo());
    let cbar_hi = rational_from_f64(cbar.hi());

    let mut report = None;
    for &extra in &[64u64, 256, 1024] {
        let truncate_at = (sum_from + extra).max(irregular_until(phibar) + 1);
        let mut partial = Rational::zero();
        let mut prev = phibar.floor_eval(sum_from - 1);
        let mut c_pow = Pow::pow(
            c.clone(),
            (sum_from - 1).try_into().unwrap_or(u32::MAX as usize),
        );
        for l in sum_from..=truncate_at {
            let cur = phibar.floor_eval(l);
            c_pow *= c.clone();
            if cur != prev {
                let inc = BigInt::from(cur.clone()) - BigInt::from(prev.clone());
                partial += Rational::new(inc, 1.into()) / c_pow.clone();
            }
            prev = cur;
        }
        // Increments past the truncation are below envelope^l, so the tail
        // is at most sum_{l > M} ratio^l.
        let tail = Pow::pow(
            ratio.clone(),
            (truncate_at + 1).try_into().unwrap_or(u32::MAX as usize),
        ) / (Rational::one() - ratio.clone());
        let margin_hi = k_rat.clone() - cbar_lo.clone() * partial.clone() - c.clone();
        let margin_lo =
            k_rat.clone() - cbar_hi.clone() * (partial + tail) - c.clone();
        let verdict = if margin_lo >= Rational::zero() {
            Feasibility::Satisfied
        } else if margin_hi < Rational::zero() {
            Feasibility::Unsatisfied
        } else {
            Feasibility::Unknown
        };
        let margin = Interval::new(
            Interval::from_rational(&margin_lo).lo(),
            Interval::from_rational(&margin_hi).hi(),
        );
        report = Some(FeasibilityReport {
            s_bar0,
            growth_holds,
            failing_l,
            ell_at_s_bar0: ell_at,
            sum_condition: verdict,
            margin: Some(margin),
            terms: truncate_at - sum_from + 1,
        });
        if verdict != Feasibility::Unknown {
            break;
        }
    }
    Ok(report.expect("at least one truncation attempted"))
}

// ---------------------------------------------------------------------------
// Minimal shift search
// ---------------------------------------------------------------------------

/// Minimal `s_bar0` satisfying both conditions, by exponential probing and
/// bisection. Valid because the verdict is monotone in `s_bar0`: the sum
/// starts later (`ell` non-decreasing) and the covering constant shrinks.
/// An `Unknown` sum verdict counts as failing, so the result is minimal for
/// the decision procedure actually run.
pub fn minimal_shift_search<F>(
    n: u32,
    phibar: &Profile,
    c: &Rational,
    mut cbar_fn: F,
    cap: u64,
) -> Result<u64, HyperbolicError>
where
    F: FnMut(u64) -> Result<Interval, HyperbolicError>,
{
    let start = first_good_length(phibar)?
        .ok_or_else(|| HyperbolicError::Infeasible("the growth condition never holds".into()))?;
    let mut passes = |s: u64| -> Result<bool, HyperbolicError> {
        if s < start.max(1) {
            return Ok(false);
        }
        if phibar.right_inverse(s)? == 0 {
            return Ok(false);
        }
        let cbar = cbar_fn(s)?;
        let report = check_conditions_4_3_4_4(n, s, phibar, c, &cbar)?;
        Ok(report.growth_holds && report.sum_condition == Feasibility::Satisfied)
    };

    let mut hi = 1u64;
    while !passes(hi)? {
        hi = hi
            .checked_mul(2)
            .filter(|&h| h <= cap)
            .ok_or(HyperbolicError::SearchBudgetExceeded { cap })?;
    }
    let mut lo = hi / 2; // fails (or zero)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    debug_assert!(hi == 1 || !passes(hi - 1)?);
    Ok(hi)
}

// ---------------------------------------------------------------------------
// Discrete <-> continuous translation
// ---------------------------------------------------------------------------

/// Continuous extension of a gauge to real arguments (exponentials by the
/// closed formula, tables as step functions), used by the translation.
fn eval_continuous(profile: &Profile, x: &Interval) -> Interval {
    match profile {
        Profile::Linear => *x,
        Profile::PowerOfTwo => x.mul(&Interval::point(2.0).ln()).exp(),
        Profile::ExponentialBase { base, delta } => x
            .mul(&Interval::from_rational(delta))
            .mul(&Interval::point(*base as f64).ln())
            .exp(),
        Profile::Table { .. } => {
            let idx_lo = x.lo().floor().max(0.0) as u64;
            let idx_hi = x.hi().floor().max(0.0) as u64;
            let lo = Interval::from_rational(&Rational::from_integer(BigInt::from(
                profile.floor_eval(idx_lo),
            )));
            let hi = Interval::from_rational(&Rational::from_integer(BigInt::from(
                profile.floor_eval(idx_hi),
            )));
            Interval::new(lo.lo(), hi.hi())
        }
        Profile::Thresholded { inner, l0 } => {
            if x.hi() <= *l0 as f64 {
                Interval::point(0.0)
            } else {
                let above = eval_continuous(inner, x);
                if x.lo() > *l0 as f64 {
                    above
                } else {
                    Interval::new(0.0, above.hi())
                }
            }
        }
    }
}

/// A continuous gauge `phi(l) = r0 * phibar((l - r0)/r0) - r0`, clamped at
/// zero (gauges are non-negative; the clamp only affects small arguments).
#[derive(Debug, Clone)]
pub struct ContinuousGauge {
    phibar: Profile,
    r0: f64,
}

impl ContinuousGauge {
    pub fn eval(&self, l: f64) -> Interval {
        let r0 = Interval::point(self.r0);
        let arg = Interval::point(l).sub(&r0).div(&r0);
        let raw = r0.mul(&eval_continuous(&self.phibar, &arg)).sub(&r0);
        if raw.hi() < 0.0 {
            Interval::point(0.0)
        } else {
            Interval::new(raw.lo().max(0.0), raw.hi())
        }
    }
}

/// Output of the forward (discrete to continuous) translation.
#[derive(Debug, Clone)]
pub struct ForwardTranslation {
    pub gauge: ContinuousGauge,
    /// `(s_bar0 + 1) r0`.
    pub s0: Interval,
    /// `eps_bar0 - r0`.
    pub eps0: Interval,
}

pub fn lemma_4_5_forward(
    phibar: &Profile,
    s_bar0: u64,
    eps_bar0: f64,
    r0: f64,
) -> Result<ForwardTranslation, HyperbolicError> {
    if !(r0 > 0.0 && r0 < eps_bar0) {
        return Err(HyperbolicError::ParameterOrderViolated(format!(
            "need 0 < r0 < eps_bar0, got r0 = {r0}, eps_bar0 = {eps_bar0}"
        )));
    }
    Ok(ForwardTranslation {
        gauge: ContinuousGauge {
            phibar: phibar.clone(),
            r0,
        },
        s0: Interval::point((s_bar0 + 1) as f64).mul(&Interval::point(r0)),
        eps0: Interval::point(eps_bar0).sub(&Interval::point(r0)),
    })
}

/// Discrete gauge recovered from a continuous one:
/// `phibar(l) = phi(l * r0) / r0`.
#[derive(Debug, Clone)]
pub struct DiscretizedGauge {
    phi: ContinuousGauge,
    r0: f64,
}

impl DiscretizedGauge {
    pub fn eval(&self, l: u64) -> Interval {
        self.phi
            .eval(l as f64 * self.r0)
            .div(&Interval::point(self.r0))
    }
}

/// Output of the converse (continuous to discrete) translation.
#[derive(Debug, Clone)]
pub struct ConverseTranslation {
    pub gauge: DiscretizedGauge,
    /// `ceil(s0 / r0)`, with a flag when the ceiling sat on an integer
    /// boundary.
    pub s_bar0: u64,
    pub s_bar0_straddle: bool,
    pub eps_bar0_is: f64,
}

pub fn lemma_4_5_converse(
    phi: &ContinuousGauge,
    s0: f64,
    eps0: f64,
    r0: f64,
) -> Result<ConverseTranslation, HyperbolicError> {
    if !(r0 > 0.0 && r0 < eps0) {
        return Err(HyperbolicError::ParameterOrderViolated(format!(
            "need 0 < r0 < eps0, got r0 = {r0}, eps0 = {eps0}"
        )));
    }
    let (s_bar0, straddle) = Interval::point(s0).div(&Interval::point(r0)).ceil_upper();
    Ok(ConverseTranslation {
        gauge: DiscretizedGauge {
            phi: phi.clone(),
            r0,
        },
        s_bar0,
        s_bar0_straddle: straddle,
        eps_bar0_is: eps0,
    })
}

// ---------------------------------------------------------------------------
// The full parameter pipeline
// ---------------------------------------------------------------------------

/// Everything the parameter pipeline produces. The growth function on the
/// continuous side is `psi(l) = (a - r0 e^{-dt (n-1) l}) e^{dt (n-1) l}`
/// with `a = r0 / 2^{delta_bar (n-1)}` and `dt = delta_tilde`.
#[derive(Debug, Clone)]
pub struct Theorem43Report {
    pub params: HyperbolicParams,
    /// Selected exponent in `[delta, 1)`, a dyadic-over-`denom(delta)`
    /// rational so the discrete gauge stays exact.
    pub delta_bar: Rational,
    pub delta_tilde: Interval,
    pub r0: Interval,
    /// Rational stand-in for `(2^{n-1} + 2^{delta_bar (n-1)}) / 2`, rounded
    /// down (the safe side) but still strictly above `2^{delta_bar (n-1)}`.
    pub c: Rational,
    pub phibar: Profile,
    pub s0: Interval,
    /// `ceil(s0 / (2 i_m))`, rounded up.
    pub big_n: u64,
    /// Leading coefficient `a` of `psi`.
    pub psi_coeff: Interval,
    /// Least grid multiple of 1/64 where the `psi` coefficient is certified
    /// positive.
    pub l1: f64,
    pub coeff_at_l1: Interval,
    /// `ln c0` (the constant itself underflows every float format).
    pub ln_c0: Interval,
    pub l0: f64,
    /// Threshold past which `c0 e^{dt (n-1) l} >= e^{delta (n-1) l}`.
    pub l_tilde0: f64,
    pub geometry: GeometryConstants,
    pub condition: FeasibilityReport,
}

/// Rational stand-in for `(2^{n-1} + 2^{e}) / 2` with `e = delta_bar (n-1)`
/// written as `base^{delta_bar}` for `base = 2^{n-1}`: rounded down, but
/// verified to stay strictly above `base^{delta_bar}`.
fn safe_c(n: u32, delta_bar: &Rational) -> Rational {
    let base = 1u32 << (n - 1);
    let (p, q) = crate::profile::delta_parts(delta_bar);
    let mut bits = 48;
    loop {
        let low = root_lower_bound(base, p, q, bits);
        let c = (Rational::from_integer(BigInt::from(base)) + low)
            / Rational::from_integer(2.into());
        if !root_ge(base, p, q, &c) {
            return c;
        }
        bits *= 2;
        assert!(bits <= 1024, "midpoint constant did not separate from the root");
    }
}

pub fn theorem_4_3_pipeline(
    n: u32,
    delta: &Rational,
    i_m: f64,
    eps0: f64,
) -> Result<Theorem43Report, HyperbolicError> {
    assert!((2..=16).contains(&n), "dimension out of supported range");
    if !delta.is_positive() || delta >= &Rational::one() {
        return Err(HyperbolicError::ParameterOrderViolated(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let ln2 = Interval::point(2.0).ln();
    if eps0 <= 0.0
        || !ln2
            .add(&Interval::point(eps0))
            .definitely_lt(&Interval::point(i_m))
    {
        return Err(HyperbolicError::Infeasible(format!(
            "need ln 2 + eps0 < i_m, got eps0 = {eps0}, i_m = {i_m}"
        )));
    }
    let delta_iv = Interval::from_rational(delta);

    // Select delta_bar in [delta, 1): r0 = ln(3 - delta_bar) must leave
    // delta_tilde = delta_bar ln 2 / r0 above delta and r0 + eps0 below
    // i_m. Both constraints are monotone in delta_bar, so bisection finds
    // (nearly) the smallest workable value; endpoints stay rational.
    let derived = |db: &Rational| -> (Interval, Interval) {
        let r0 = Interval::from_rational(&(Rational::from_integer(3.into()) - db.clone())).ln();
        let dt = Interval::from_rational(db).mul(&ln2).div(&r0);
        (r0, dt)
    };
    let feasible = |db: &Rational| -> bool {
        let (r0, dt) = derived(db);
        dt.definitely_gt(&delta_iv)
            && dt.definitely_lt(&Interval::point(1.0))
            && r0
                .add(&Interval::point(eps0))
                .definitely_lt(&Interval::point(i_m))
    };
    let one = Rational::one();
    let half = Rational::new(1.into(), 2.into());
    let mut hi = None;
    let mut probe = delta.clone();
    for _ in 0..50 {
        probe = (&probe + &one) * &half;
        if feasible(&probe) {
            hi = Some(probe.clone());
            break;
        }
    }
    let mut hi = hi.ok_or_else(|| {
        HyperbolicError::Infeasible("no exponent in [delta, 1) satisfies the selection constraints".into())
    })?;
    let mut lo = delta.clone();
    let grid = Rational::new(1.into(), 64.into());
    while &hi - &lo > grid {
        let mid = (&lo + &hi) * &half;
        if feasible(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let delta_bar = hi;
    let (r0, delta_tilde) = derived(&delta_bar);

    let base = 1u32 << (n - 1);
    let phibar = Profile::exponential(base, delta_bar.clone())?;
    let c = safe_c(n, &delta_bar);

    let r0_mid = r0.midpoint();
    let eps_bar0 = r0_mid + eps0;
    let nm1 = (n - 1) as f64;
    let make_params = |s_bar0: u64| HyperbolicParams {
        n,
        i_m,
        eps_bar0,
        eps0,
        r0: r0_mid,
        s_bar0,
        s0: (s_bar0 + 1) as f64 * r0_mid,
        edge: 1.0,
        delta: delta.clone(),
    };
    let phibar_for_ell = phibar.clone();
    let cbar_fn = |s_bar0: u64| -> Result<Interval, HyperbolicError> {
        let p = make_params(s_bar0);
        let ell = phibar_for_ell.right_inverse(s_bar0 + 1)?;
        let (c1, _) = c1_at(&p, ell, s_bar0 + 1)?;
        let (c2, _) = c2_at(&p, s_bar0 + 1);
        Ok(Interval::from_u64(
            c1.checked_mul(c2).expect("covering constant overflow"),
        ))
    };
    let s_bar0 = minimal_shift_search(n, &phibar, &c, cbar_fn, 1 << 40)?;
    let params = make_params(s_bar0);
    params.validate()?;
    let ell_bar = RightInverse::new(phibar.clone())?;
    let geometry = geometry_constants(&params, &ell_bar)?;
    let condition = check_conditions_4_3_4_4(
        n,
        s_bar0,
        &phibar,
        &c,
        &Interval::from_u64(geometry.cbar),
    )?;

    let s0 = Interval::point((s_bar0 + 1) as f64).mul(&r0);
    let big_n = s0.div(&Interval::point(2.0 * i_m)).ceil_upper().0;

    // psi(l) = (a - r0 e^{-dt (n-1) l}) e^{dt (n-1) l} with
    // a = r0 / 2^{delta_bar (n-1)}.
    let pow2_db = Interval::from_rational(&(delta_bar.clone() * Rational::from_integer(BigInt::from(n - 1))))
        .mul(&ln2)
        .exp();
    let psi_coeff = r0.div(&pow2_db);
    let coeff_at = |l: f64| -> Interval {
        let decay = delta_tilde
            .scale(-nm1)
            .mul(&Interval::point(l))
            .exp()
            .mul(&r0);
        psi_coeff.sub(&decay)
    };
    let mut l1 = None;
    for step in 0..=64_000u32 {
        let l = step as f64 / 64.0;
        if coeff_at(l).definitely_positive() {
            l1 = Some(l);
            break;
        }
    }
    let l1 = l1.ok_or_else(|| {
        HyperbolicError::Infeasible("psi coefficient never certified positive".into())
    })?;
    let coeff_at_l1 = coeff_at(l1);

    // c0 = coeff(l1) / e^{dt (n-1) (2 s' + 2 N s0)} with s' = 2 i_m; the
    // exponent is astronomically large, so only ln c0 is representable.
    let s_prime = 2.0 * i_m;
    let exponent = delta_tilde.scale(nm1).mul(
        &Interval::point(2.0 * s_prime).add(&s0.scale(2.0 * big_n as f64)),
    );
    let ln_c0 = coeff_at_l1.ln().sub(&exponent);

    let l0 = l1.max(s0.scale(3.0 * big_n as f64).add(&Interval::point(2.0 * i_m)).hi());
    // c0 e^{dt (n-1) l} >= e^{delta (n-1) l}  iff  l >= -ln c0 / ((dt - delta)(n-1)).
    let threshold = ln_c0
        .neg()
        .div(&delta_tilde.sub(&delta_iv).scale(nm1));
    let l_tilde0 = l0.max(threshold.hi());

    Ok(Theorem43Report {
        params,
        delta_bar,
        delta_tilde,
        r0,
        c,
        phibar,
        s0,
        big_n,
        psi_coeff,
        l1,
        coeff_at_l1,
        ln_c0,
        l0,
        l_tilde0,
        geometry,
        condition,
    })
}
