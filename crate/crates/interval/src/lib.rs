//! Interval arithmetic with outward rounding on IEEE doubles, and the
//! rigorous enclosure of the gamma positivity certificate.
//!
//! Every operation returns an interval containing the exact result applied to
//! any members of the operands. Directed rounding is implemented with exact
//! residuals (TwoSum for addition, fused multiply-add for products, quotients
//! and square roots): the rounded result is kept when the residual proves it
//! already sits on the correct side, otherwise the endpoint is nudged one ulp
//! outward. A domain violation (division through zero, log of a
//! non-positive interval) is a hard error, never a silent clamp.

mod certificate;
mod ln;

pub use certificate::{certify, gamma_partial_interval, tail_bound, CertProfile, Certificate, Verdict};
pub use ln::ln_enclosure;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IntervalError {
    #[error("endpoints out of order or NaN: [{0}, {1}]")]
    InvalidEndpoints(f64, f64),
    #[error("division by an interval containing zero: [{0}, {1}]")]
    DivByZero(f64, f64),
    #[error("sqrt of an interval with negative part: [{0}, {1}]")]
    SqrtNegative(f64, f64),
    #[error("log of an interval not strictly positive: [{0}, {1}]")]
    LogNonPositive(f64, f64),
    #[error("unsupported weight exponent: s = {0} (4s must be an integer)")]
    UnsupportedS(f64),
    #[error("certified tail bound requires the power-log profile at s = 1/2")]
    UnsupportedTail,
    #[error("tail bound requires N >= 2, got {0}")]
    TailRadius(i64),
}

/// A closed real interval `[lo, hi]` of IEEE doubles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

// Directed rounding primitives: `s` is the round-to-nearest result, `err` the
// exact residual `true - s` (or a quantity with its sign). Near the extremes
// of the exponent range the residual itself can be inexact, so anything
// non-normal falls back to an unconditional one-ulp widening.

fn trustworthy(s: f64) -> bool {
    s == 0.0 || (s.is_finite() && s.abs() >= 1e-290)
}

fn round_down(s: f64, err: f64) -> f64 {
    if s.is_infinite() {
        return if s > 0.0 { f64::MAX } else { s };
    }
    if !trustworthy(s) && s != 0.0 {
        return s.next_down();
    }
    if err >= 0.0 {
        s
    } else {
        s.next_down()
    }
}

fn round_up(s: f64, err: f64) -> f64 {
    if s.is_infinite() {
        return if s < 0.0 { f64::MIN } else { s };
    }
    if !trustworthy(s) && s != 0.0 {
        return s.next_up();
    }
    if err <= 0.0 {
        s
    } else {
        s.next_up()
    }
}

/// Exact residual of `x + y` (Knuth's TwoSum); valid whenever `s` is finite.
fn two_sum_err(x: f64, y: f64, s: f64) -> f64 {
    let bp = s - x;
    let ap = s - bp;
    (x - ap) + (y - bp)
}

fn add_down(x: f64, y: f64) -> f64 {
    let s = x + y;
    if s.is_nan() {
        return f64::NEG_INFINITY;
    }
    round_down(s, if s.is_finite() { two_sum_err(x, y, s) } else { 0.0 })
}

fn add_up(x: f64, y: f64) -> f64 {
    let s = x + y;
    if s.is_nan() {
        return f64::INFINITY;
    }
    round_up(s, if s.is_finite() { two_sum_err(x, y, s) } else { 0.0 })
}

fn mul_err(x: f64, y: f64, p: f64) -> f64 {
    if p == 0.0 {
        // exact iff one factor is zero
        return if x == 0.0 || y == 0.0 { 0.0 } else { f64::NAN };
    }
    f64::mul_add(x, y, -p)
}

fn mul_down(x: f64, y: f64) -> f64 {
    let p = x * y;
    if p.is_nan() {
        return f64::NEG_INFINITY;
    }
    let e = mul_err(x, y, p);
    if e.is_nan() {
        return p.next_down();
    }
    round_down(p, e)
}

fn mul_up(x: f64, y: f64) -> f64 {
    let p = x * y;
    if p.is_nan() {
        return f64::INFINITY;
    }
    let e = mul_err(x, y, p);
    if e.is_nan() {
        return p.next_up();
    }
    round_up(p, e)
}

/// Sign of `x/y - q` from the exact residual `q*y - x`.
fn div_correction(x: f64, y: f64, q: f64) -> f64 {
    let r = f64::mul_add(q, y, -x);
    if r == 0.0 {
        0.0
    } else {
        -r * y.signum()
    }
}

fn div_down(x: f64, y: f64) -> f64 {
    let q = x / y;
    if q.is_nan() {
        return f64::NEG_INFINITY;
    }
    if !q.is_finite() || !trustworthy(q) && q != 0.0 {
        return round_down(q, 0.0).next_down();
    }
    round_down(q, div_correction(x, y, q))
}

fn div_up(x: f64, y: f64) -> f64 {
    let q = x / y;
    if q.is_nan() {
        return f64::INFINITY;
    }
    if !q.is_finite() || !trustworthy(q) && q != 0.0 {
        return round_up(q, 0.0).next_up();
    }
    round_up(q, div_correction(x, y, q))
}

fn sqrt_down(x: f64) -> f64 {
    let s = x.sqrt();
    // residual s^2 - x is exact under fma; correction has sign x - s^2
    round_down(s, -f64::mul_add(s, s, -x))
}

fn sqrt_up(x: f64) -> f64 {
    let s = x.sqrt();
    round_up(s, -f64::mul_add(s, s, -x))
}

// The arithmetic suite keeps plain method names (`add`, `div`, ...) because
// `div`, `sqrt` and `ln` return `Result`, which the std operator traits cannot.
#[allow(clippy::should_implement_trait)]
impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Degenerate interval holding one exactly-representable value.
    pub fn exact(x: f64) -> Interval {
        assert!(!x.is_nan());
        Interval { lo: x, hi: x }
    }

    /// Exact integer endpoint; integers up to 2^53 are representable.
    pub fn from_int(k: i64) -> Interval {
        assert!(k.abs() <= (1i64 << 53), "{k} not exactly representable");
        Interval::exact(k as f64)
    }

    pub fn new(lo: f64, hi: f64) -> Result<Interval, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(IntervalError::InvalidEndpoints(lo, hi));
        }
        Ok(Interval { lo, hi })
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
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, rhs.lo), hi: add_up(self.hi, rhs.hi) }
    }

    pub fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, -rhs.hi), hi: add_up(self.hi, -rhs.lo) }
    }

    pub fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn mul(self, rhs: Interval) -> Interval {
        let candidates = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in candidates {
            lo = lo.min(mul_down(a, b));
            hi = hi.max(mul_up(a, b));
        }
        Interval { lo, hi }
    }

    pub fn div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.lo <= 0.0 && rhs.hi >= 0.0 {
            return Err(IntervalError::DivByZero(rhs.lo, rhs.hi));
        }
        let candidates = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in candidates {
            lo = lo.min(div_down(a, b));
            hi = hi.max(div_up(a, b));
        }
        Ok(Interval { lo, hi })
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::SqrtNegative(self.lo, self.hi));
        }
        Ok(Interval { lo: sqrt_down(self.lo).max(0.0), hi: sqrt_up(self.hi) })
    }

    /// `x^{1/2}`; alias of [`Interval::sqrt`].
    pub fn pow_half(self) -> Result<Interval, IntervalError> {
        self.sqrt()
    }

    /// Natural log; requires a strictly positive interval.
    pub fn ln(self) -> Result<Interval, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::LogNonPositive(self.lo, self.hi));
        }
        Ok(Interval {
            lo: ln_enclosure(self.lo).lo,
            hi: ln_enclosure(self.hi).hi,
        })
    }

    /// `x^k` by binary exponentiation with interval products; sound for all
    /// sign configurations.
    pub fn integer_pow(self, k: u32) -> Interval {
        let mut result = Interval::ONE;
        let mut base = self;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        result
    }

    /// Hull of the union.
    pub fn hull(self, rhs: Interval) -> Interval {
        Interval { lo: self.lo.min(rhs.lo), hi: self.hi.max(rhs.hi) }
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

/// Pairwise interval sum over a slice; containment holds in any order, the
/// tree order keeps widths small on long sums.
pub fn pairwise_interval_sum(xs: &[Interval]) -> Interval {
    match xs.len() {
        0 => Interval::ZERO,
        1 => xs[0],
        2 => xs[0].add(xs[1]),
        n => {
            let mid = n / 2;
            pairwise_interval_sum(&xs[..mid]).add(pairwise_interval_sum(&xs[mid..]))
        }
    }
}
