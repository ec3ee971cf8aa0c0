//! Thin layer over `dashu-float` binary floats plus upward-rounded `f64`
//! helpers for radii.

use std::str::FromStr;

use dashu_base::Approximation;
use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::{Context, DBig, FBig, Repr};
use dashu_int::IBig;

pub(crate) type Float = FBig<HalfEven, 2>;

/// Largest supported working precision in bits. Radii are kept as `f64`, so
/// relative errors below roughly `2^-1022` cannot be represented.
pub const MAX_PRECISION: usize = 1024;

/// Smallest supported working precision in bits.
pub const MIN_PRECISION: usize = 24;

const UP: f64 = 1.0 + 1.0 / (1u64 << 50) as f64;

/// Round a non-negative `f64` bound upward past any single rounding error.
#[inline]
pub(crate) fn up(x: f64) -> f64 {
    x * UP
}

#[inline]
pub(crate) fn radd(a: f64, b: f64) -> f64 {
    up(a + b)
}

#[inline]
pub(crate) fn rmul(a: f64, b: f64) -> f64 {
    up(a * b)
}

pub(crate) fn clamp_precision(prec: usize) -> usize {
    prec.clamp(MIN_PRECISION, MAX_PRECISION)
}

pub(crate) fn zero(prec: usize) -> Float {
    Float::from_repr(Repr::zero(), Context::new(prec))
}

pub(crate) fn is_zero(x: &Float) -> bool {
    x.repr().is_zero()
}

pub(crate) fn to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

/// Upper bound on `|x|` as an `f64`.
pub(crate) fn abs_up(x: &Float) -> f64 {
    if is_zero(x) {
        return 0.0;
    }
    let f = to_f64(x).abs();
    up(f).max(f64::MIN_POSITIVE)
}

/// Lower bound on `|x|` as an `f64`.
pub(crate) fn abs_low(x: &Float) -> f64 {
    let f = to_f64(x).abs();
    f / UP / UP
}

/// Bound on the rounding error committed when `v` was produced at `prec` bits.
pub(crate) fn rounding_error(v: &Float, prec: usize) -> f64 {
    if is_zero(v) {
        0.0
    } else {
        rmul(abs_up(v), 2f64.powi(2 - prec as i32))
    }
}

/// Round to `prec` bits, reporting the error bound (zero when exact).
pub(crate) fn round(x: Float, prec: usize) -> (Float, f64) {
    // with_precision only rounds when the context is wider than `prec`, and
    // a quotient can carry more digits than its context
    let digits = x.repr().digits();
    let x = if digits > prec {
        Float::from_repr(x.into_repr(), Context::new(digits))
    } else {
        x
    };
    match x.with_precision(prec) {
        Approximation::Exact(v) => (v, 0.0),
        Approximation::Inexact(v, _) => {
            let e = rounding_error(&v, prec);
            (v, e)
        }
    }
}

fn settle(r: Approximation<Float, dashu_float::round::Rounding>, prec: usize) -> (Float, f64) {
    match r {
        Approximation::Exact(v) => (v, 0.0),
        Approximation::Inexact(v, _) => {
            let e = rounding_error(&v, prec);
            (v, e)
        }
    }
}

/// `a + b` rounded to `prec` bits, with its rounding error bound.
pub(crate) fn add(a: &Float, b: &Float, prec: usize) -> (Float, f64) {
    settle(Context::new(prec).add(a.repr(), b.repr()), prec)
}

pub(crate) fn sub(a: &Float, b: &Float, prec: usize) -> (Float, f64) {
    settle(Context::new(prec).sub(a.repr(), b.repr()), prec)
}

pub(crate) fn mul(a: &Float, b: &Float, prec: usize) -> (Float, f64) {
    settle(Context::new(prec).mul(a.repr(), b.repr()), prec)
}

/// Re-tag an exact value with a context of `prec` bits (never loses digits
/// when `prec` is large enough; otherwise rounds and reports the error).
pub(crate) fn with_context(x: Float, prec: usize) -> (Float, f64) {
    if x.repr().digits() <= prec {
        (Float::from_repr(x.into_repr(), Context::new(prec)), 0.0)
    } else {
        round(x, prec)
    }
}

pub(crate) fn from_f64(x: f64, prec: usize) -> (Float, f64) {
    assert!(x.is_finite(), "non-finite input {x}");
    if x == 0.0 {
        return (zero(prec), 0.0);
    }
    let v = Float::try_from(x).expect("finite f64 converts");
    with_context(v, prec)
}

pub(crate) fn from_parts(significand: IBig, exponent: isize, prec: usize) -> (Float, f64) {
    if significand == IBig::ZERO {
        return (zero(prec), 0.0);
    }
    with_context(Float::from_parts(significand, exponent), prec)
}

pub(crate) fn sqrt_nonneg(x: &Float) -> Float {
    if is_zero(x) {
        return x.clone();
    }
    x.sqrt()
}

pub(crate) fn is_negative(x: &Float) -> bool {
    !is_zero(x) && x.repr().significand() < &IBig::ZERO
}

/// Parse a real literal.
///
/// Accepts exact binary literals `[-]0x<hex>p<exp>` (value `hex * 2^exp`) and
/// ordinary decimal literals, which are rounded to `prec` bits.
pub(crate) fn parse_real(s: &str, prec: usize) -> Option<(Float, f64)> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        let (mantissa, exp) = match hex.find(['p', 'P']) {
            Some(i) => (&hex[..i], hex[i + 1..].parse::<isize>().ok()?),
            None => (hex, 0),
        };
        let mut m = IBig::from_str_radix(mantissa, 16).ok()?;
        if neg {
            m = -m;
        }
        return Some(from_parts(m, exp, prec));
    }
    let d = DBig::from_str(body).ok()?;
    let d = if neg { -d } else { d };
    let v = match d.with_base_and_precision::<2>(prec) {
        Approximation::Exact(v) => return Some((v.with_rounding(), 0.0)),
        Approximation::Inexact(v, _) => v.with_rounding::<HalfEven>(),
    };
    // The conversion is correctly rounded to within one unit in the last
    // place; report that as the input error.
    let e = rounding_error(&v, prec);
    let (v, e2) = with_context(v, prec);
    Some((v, radd(e, e2)))
}

/// Exact binary literal for `x`, readable by [`parse_real`].
pub(crate) fn to_hex_literal(x: &Float) -> String {
    if is_zero(x) {
        return "0".to_string();
    }
    let sig = x.repr().significand();
    let exp = x.repr().exponent();
    let (neg, mag) = if sig < &IBig::ZERO {
        (true, -sig.clone())
    } else {
        (false, sig.clone())
    };
    let hex = format!("{:x}", mag);
    if exp == 0 {
        format!("{}0x{}", if neg { "-" } else { "" }, hex)
    } else {
        format!("{}0x{}p{}", if neg { "-" } else { "" }, hex, exp)
    }
}
