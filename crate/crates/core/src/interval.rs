//! Certified `f64` interval arithmetic.
//!
//! Every operation returns an interval guaranteed to contain the true real
//! result: arithmetic rounds outward by one ulp per endpoint, and library
//! transcendentals (documented to within 1 ulp) are widened by two. Used by
//! the hyperbolic parameter computations, where decisions must never rest
//! on an unqualified floating-point comparison.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, ToPrimitive};

use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

/// Two ulps outward: covers a correctly-rounded result plus 1 ulp of
/// documented library error.
fn down2(x: f64) -> f64 {
    x.next_down().next_down()
}

fn up2(x: f64) -> f64 {
    x.next_up().next_up()
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo.is_finite() && hi.is_finite() && lo <= hi, "bad interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    /// Encloses an exact rational; the enclosure is verified by exact
    /// comparison, not trusted from the conversion.
    pub fn from_rational(r: &Rational) -> Interval {
        let approx = r.to_f64().expect("rational in f64 range");
        let mut lo = down(approx);
        let mut hi = up(approx);
        while &BigRational::from_f64(lo).expect("finite") > r {
            lo = down(lo);
        }
        while &BigRational::from_f64(hi).expect("finite") < r {
            hi = up(hi);
        }
        Interval::new(lo, hi)
    }

    pub fn from_u64(v: u64) -> Interval {
        Interval::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    /// Width below `tol * max(1, |midpoint|)` — tolerances are relative for
    /// large magnitudes, absolute below 1.
    pub fn rel_width_within(&self, tol: f64) -> bool {
        self.width() <= tol * self.midpoint().abs().max(1.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    // -- order ------------------------------------------------------------

    /// The entire interval is strictly below the other.
    pub fn definitely_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn definitely_gt(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }

    pub fn definitely_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn definitely_ge(&self, other: &Interval) -> bool {
        self.lo >= other.hi
    }

    pub fn definitely_positive(&self) -> bool {
        self.lo > 0.0
    }

    // -- arithmetic -------------------------------------------------------

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(down(self.lo + o.lo), up(self.hi + o.hi))
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(down(self.lo - o.hi), up(self.hi - o.lo))
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let products = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = products.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = products.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }

    pub fn div(&self, o: &Interval) -> Interval {
        assert!(
            o.lo > 0.0 || o.hi < 0.0,
            "division by an interval containing zero"
        );
        self.mul(&Interval::new(down(1.0 / o.hi), up(1.0 / o.lo)))
    }

    pub fn scale(&self, c: f64) -> Interval {
        self.mul(&Interval::point(c))
    }

    /// Integer power by repeated squaring-free multiplication (exponents
    /// here are small dimension counts).
    pub fn powi(&self, e: u32) -> Interval {
        let mut out = Interval::point(1.0);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    // -- monotone transcendentals ----------------------------------------

    pub fn exp(&self) -> Interval {
        // exp underflows to 0 for very negative arguments: 0 is a sound
        // lower bound, and up2 keeps the upper end positive.
        Interval::new(down2(self.lo.exp()).max(0.0), up2(self.hi.exp()))
    }

    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0.0, "log of an interval reaching zero");
        Interval::new(down2(self.lo.ln()), up2(self.hi.ln()))
    }

    pub fn sqrt(&self) -> Interval {
        assert!(self.lo >= 0.0, "sqrt of a negative interval");
        Interval::new(down2(self.lo.sqrt()).max(0.0), up2(self.hi.sqrt()))
    }

    pub fn sinh(&self) -> Interval {
        Interval::new(down2(self.lo.sinh()), up2(self.hi.sinh()))
    }

    pub fn asinh(&self) -> Interval {
        Interval::new(down2(self.lo.asinh()), up2(self.hi.asinh()))
    }

    pub fn cosh(&self) -> Interval {
        // Even and minimized at 0.
        if self.lo <= 0.0 && self.hi >= 0.0 {
            let m = self.lo.abs().max(self.hi.abs());
            Interval::new(1.0, up2(m.cosh()))
        } else {
            let a = self.lo.abs().min(self.hi.abs());
            let b = self.lo.abs().max(self.hi.abs());
            Interval::new(down2(a.cosh()).max(1.0), up2(b.cosh()))
        }
    }

    /// Exact-integer ceiling of the upper bound together with a flag that
    /// is `true` when the interval straddles an integer boundary (so the
    /// true ceiling might be lower).
    pub fn ceil_upper(&self) -> (u64, bool) {
        assert!(self.lo >= 0.0 && self.hi < 9.0e15, "ceiling out of exact range");
        let c_lo = self.lo.ceil();
        let c_hi = self.hi.ceil();
        (c_hi as u64, c_lo != c_hi)
    }
}
