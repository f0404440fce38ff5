//! Validated natural-log kernel: argument reduction to `[sqrt(2)/2, sqrt(2))`
//! followed by the atanh series with an explicit remainder enclosure. The
//! standard library log carries no rounding guarantee, so it is never used
//! on the certified path.

use crate::Interval;

/// `ln 2` enclosed around the correctly rounded double.
fn ln2() -> Interval {
    let c = std::f64::consts::LN_2;
    Interval { lo: c.next_down(), hi: c.next_up() }
}

const SERIES_TERMS: u32 = 12;

/// Rigorous enclosure of `ln v` for a positive finite double `v`.
///
/// `v = m 2^e` with `m` in `[sqrt(2)/2, sqrt(2))` (halving/doubling is
/// exact), then `ln m = 2 atanh(u)` with `u = (m-1)/(m+1)`, `|u| < 0.1716`.
/// The truncated odd series is evaluated in interval arithmetic and the
/// remainder `|R| <= |u|^{2K+1} / ((2K+1)(1 - u^2))` is added as a symmetric
/// enclosure.
pub fn ln_enclosure(v: f64) -> Interval {
    assert!(v > 0.0 && v.is_finite(), "ln requires a positive finite argument");
    let mut m = v;
    let mut e: i64 = 0;
    while m >= std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    while m < std::f64::consts::FRAC_1_SQRT_2 {
        m *= 2.0;
        e -= 1;
    }
    let m = Interval::exact(m);
    let u = m.sub(Interval::ONE).div(m.add(Interval::ONE)).expect("m + 1 > 0");
    let u2 = u.mul(u);

    let mut term = u;
    let mut sum = u;
    for k in 1..SERIES_TERMS {
        term = term.mul(u2);
        sum = sum.add(term.div(Interval::from_int(2 * k as i64 + 1)).expect("odd constant"));
    }
    // |u| <= 0.1716 so 1 - u^2 >= 0.97; remainder bound evaluated outward.
    let u_abs_hi = Interval::exact(u.lo().abs().max(u.hi().abs()));
    let numer = u_abs_hi.integer_pow(2 * SERIES_TERMS + 1);
    let denom = Interval::from_int(2 * SERIES_TERMS as i64 + 1)
        .mul(Interval::ONE.sub(u2))
        .lo()
        .max(f64::MIN_POSITIVE);
    let r = numer.hi() / denom * (1.0 + 1e-10);
    let remainder = Interval { lo: -r, hi: r };

    Interval::from_int(e)
        .mul(ln2())
        .add(Interval::exact(2.0).mul(sum.add(remainder)))
}
