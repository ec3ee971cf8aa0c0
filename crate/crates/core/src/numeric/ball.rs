use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::float::{self, radd, rmul, up, Float};
use crate::error::{Error, Result};

/// A complex disc `value ± radius` that is guaranteed to contain the exact
/// quantity it approximates.
///
/// The midpoint is a pair of binary floats carrying `precision` bits; every
/// operation rounds at the larger precision of its operands and folds the
/// rounding error into the radius.
#[derive(Clone)]
pub struct CertNumber {
    re: Float,
    im: Float,
    rad: f64,
    prec: usize,
}

impl CertNumber {
    pub fn zero(prec: usize) -> Self {
        let prec = float::clamp_precision(prec);
        CertNumber {
            re: float::zero(prec),
            im: float::zero(prec),
            rad: 0.0,
            prec,
        }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_f64(1.0, prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::from_c64(Complex64::new(x, 0.0), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        let prec = float::clamp_precision(prec);
        let (re, e) = float::from_parts(x.into(), 0, prec);
        CertNumber {
            re,
            im: float::zero(prec),
            rad: e,
            prec,
        }
    }

    pub fn from_c64(z: Complex64, prec: usize) -> Self {
        let prec = float::clamp_precision(prec);
        let (re, e1) = float::from_f64(z.re, prec);
        let (im, e2) = float::from_f64(z.im, prec);
        CertNumber {
            re,
            im,
            rad: radd(e1, e2),
            prec,
        }
    }

    pub(crate) fn from_floats(re: Float, im: Float, rad: f64, prec: usize) -> Self {
        let (re, e1) = float::with_context(re, prec);
        let (im, e2) = float::with_context(im, prec);
        CertNumber {
            re,
            im,
            rad: radd(rad, radd(e1, e2)),
            prec,
        }
    }

    /// Parse `re` or `re,im`, each component a decimal or exact `0x..p..`
    /// literal.
    pub fn parse(s: &str, prec: usize) -> Option<Self> {
        let prec = float::clamp_precision(prec);
        let (a, b) = match s.split_once(',') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let (re, e1) = float::parse_real(a, prec)?;
        let (im, e2) = match b {
            Some(b) => float::parse_real(b, prec)?,
            None => (float::zero(prec), 0.0),
        };
        Some(CertNumber {
            re,
            im,
            rad: radd(e1, e2),
            prec,
        })
    }

    /// Exact textual form of the midpoint, readable by [`CertNumber::parse`].
    pub fn to_literal(&self) -> String {
        if float::is_zero(&self.im) {
            float::to_hex_literal(&self.re)
        } else {
            format!(
                "{},{}",
                float::to_hex_literal(&self.re),
                float::to_hex_literal(&self.im)
            )
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn radius(&self) -> f64 {
        self.rad
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(float::to_f64(&self.re), float::to_f64(&self.im))
    }

    pub fn re_f64(&self) -> f64 {
        float::to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        float::to_f64(&self.im)
    }

    /// The midpoint as an exact ball (radius dropped).
    pub fn midpoint(&self) -> Self {
        CertNumber {
            rad: 0.0,
            ..self.clone()
        }
    }

    /// Same midpoint with the radius enlarged by `extra`.
    pub fn inflate(&self, extra: f64) -> Self {
        CertNumber {
            rad: radd(self.rad, extra.abs()),
            ..self.clone()
        }
    }

    /// The same midpoint with radius `rad`, used when reading back a stored
    /// ball. The caller vouches for the radius.
    pub fn with_radius(&self, rad: f64) -> Self {
        assert!(rad >= 0.0, "radius must be a nonnegative number");
        CertNumber {
            rad,
            ..self.clone()
        }
    }

    /// Re-round the midpoint to `prec` bits.
    pub fn with_precision(&self, prec: usize) -> Self {
        let prec = float::clamp_precision(prec);
        let (re, e1) = float::round(self.re.clone(), prec);
        let (im, e2) = float::round(self.im.clone(), prec);
        let (re, _) = float::with_context(re, prec);
        let (im, _) = float::with_context(im, prec);
        CertNumber {
            re,
            im,
            rad: radd(self.rad, radd(e1, e2)),
            prec,
        }
    }

    /// Upper bound on `|mid|`.
    pub fn mid_abs_upper(&self) -> f64 {
        let a = float::abs_up(&self.re);
        let b = float::abs_up(&self.im);
        up(a.hypot(b))
    }

    /// Lower bound on `|mid|`.
    pub fn mid_abs_lower(&self) -> f64 {
        let a = float::abs_low(&self.re);
        let b = float::abs_low(&self.im);
        a.hypot(b) / up(1.0) / up(1.0)
    }

    /// Upper bound on `|z|` over the whole disc.
    pub fn abs_upper(&self) -> f64 {
        radd(self.mid_abs_upper(), self.rad)
    }

    /// Lower bound on `|z|` over the whole disc (zero if the disc contains 0).
    pub fn abs_lower(&self) -> f64 {
        let l = self.mid_abs_lower() - self.rad;
        if l > 0.0 {
            l / up(1.0)
        } else {
            0.0
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower() == 0.0
    }

    pub fn is_exact(&self) -> bool {
        self.rad == 0.0
    }

    /// Whether the disc is contained in `|z| < tol`.
    pub fn is_below(&self, tol: f64) -> bool {
        self.abs_upper() < tol
    }

    /// Lower bound on `Re z` over the disc.
    pub fn re_lower(&self) -> f64 {
        let r = float::to_f64(&self.re);
        let slack = radd(float::rounding_error(&self.re, 53), self.rad);
        r - up(slack)
    }

    /// Upper bound on `Re z` over the disc.
    pub fn re_upper(&self) -> f64 {
        let r = float::to_f64(&self.re);
        let slack = radd(float::rounding_error(&self.re, 53), self.rad);
        r + up(slack)
    }

    pub fn conj(&self) -> Self {
        CertNumber {
            im: -self.im.clone(),
            ..self.clone()
        }
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn scale(&self, k: f64) -> Self {
        // powers of two scale midpoint and radius exactly
        let exact = k.is_normal() && k.to_bits() & ((1u64 << 52) - 1) == 0;
        let rad = self.rad * k.abs();
        if exact && (rad == 0.0 || rad.is_normal()) {
            let kf = CertNumber::from_f64(k, self.prec);
            let (re, e1) = float::mul(&self.re, &kf.re, self.prec);
            let (im, e2) = float::mul(&self.im, &kf.re, self.prec);
            if e1 == 0.0 && e2 == 0.0 {
                return CertNumber {
                    re,
                    im,
                    rad,
                    prec: self.prec,
                };
            }
        }
        self * &CertNumber::from_f64(k, self.prec)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = CertNumber::one(self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.sqr();
            n >>= 1;
        }
        acc
    }

    /// Approximate quotient of the midpoints, not certified.
    fn mid_quotient(&self, other: &Self, prec: usize) -> (Float, Float) {
        let (a, b) = (&self.re, &self.im);
        let (c, d) = (&other.re, &other.im);
        let den = c * c + d * d;
        let re = (a * c + b * d) / &den;
        let im = (b * c - a * d) / &den;
        (float::round(re, prec).0, float::round(im, prec).0)
    }

    /// Quotient of the midpoints with radius zero, for iterations whose
    /// accuracy is checked afterwards. `None` if the divisor midpoint is 0.
    pub(crate) fn approx_div(&self, other: &Self) -> Option<Self> {
        if float::is_zero(&other.re) && float::is_zero(&other.im) {
            return None;
        }
        let prec = self.prec.max(other.prec);
        let (qr, qi) = self.mid_quotient(other, prec);
        Some(CertNumber::from_floats(qr, qi, 0.0, prec).midpoint())
    }

    /// Certified quotient. Fails when the divisor disc contains zero.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let prec = self.prec.max(other.prec);
        let low = other.abs_lower();
        if low == 0.0 {
            return Err(Error::undecidable("division by a disc containing zero", prec));
        }
        let (qr, qi) = self.mid_quotient(other, prec);
        let q = CertNumber::from_floats(qr, qi, 0.0, prec);
        // |a/b - q| = |a - q b| / |b|
        let resid = self - &(&q * other);
        let bound = resid.abs_upper() / low;
        Ok(q.inflate(up(up(bound))))
    }

    pub fn try_inv(&self) -> Result<Self> {
        CertNumber::one(self.prec).try_div(self)
    }

    /// A disc containing, for every `a` in `self`, the square root of `a`
    /// nearest to the principal square root of the midpoint.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec;
        let (wr, wi) = principal_sqrt(&self.re, &self.im, prec);
        let w = CertNumber::from_floats(wr, wi, 0.0, prec);
        let w_abs_up = w.mid_abs_upper();
        // crude bound: both roots lie within sqrt(|a|) of the origin
        let crude = radd(w_abs_up, up(self.abs_upper().sqrt()));
        let w_low = w.mid_abs_lower();
        let bound = if w_low > 0.0 {
            // (w' - w)(w' + w) = a - w^2 and |w' + w| >= |w| for the nearer root
            let resid = &w.sqr() - self;
            up(up(resid.abs_upper() / w_low))
        } else {
            f64::INFINITY
        };
        w.inflate(bound.min(crude))
    }

    /// Whether the two discs intersect.
    pub fn overlaps(&self, other: &Self) -> bool {
        (self - other).contains_zero()
    }

    /// Upper bound on `|self - other|` over both discs.
    pub fn dist_upper(&self, other: &Self) -> f64 {
        (self - other).abs_upper()
    }
}

fn principal_sqrt(re: &Float, im: &Float, prec: usize) -> (Float, Float) {
    let work = prec + 8;
    let (re, _) = float::with_context(re.clone(), work);
    let (im, _) = float::with_context(im.clone(), work);
    if float::is_zero(&re) && float::is_zero(&im) {
        return (float::zero(prec), float::zero(prec));
    }
    let r = float::sqrt_nonneg(&(&re * &re + &im * &im));
    let two = float::from_f64(2.0, work).0;
    let (x, y) = if !float::is_negative(&re) {
        let x = float::sqrt_nonneg(&((&r + &re) / &two));
        let y = &im / (&two * &x);
        (x, y)
    } else {
        let mut y = float::sqrt_nonneg(&((&r - &re) / &two));
        if float::is_negative(&im) {
            y = -y;
        }
        let x = &im / (&two * &y);
        (x, y)
    };
    (float::round(x, prec).0, float::round(y, prec).0)
}

impl fmt::Debug for CertNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.mid();
        write!(f, "({:e}{:+e}i ± {:.1e})", z.re, z.im, self.rad)
    }
}

impl fmt::Display for CertNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Add<&'a CertNumber> for &'a CertNumber {
    type Output = CertNumber;
    fn add(self, rhs: &CertNumber) -> CertNumber {
        let prec = self.prec.max(rhs.prec);
        let (re, e1) = float::add(&self.re, &rhs.re, prec);
        let (im, e2) = float::add(&self.im, &rhs.im, prec);
        CertNumber {
            re,
            im,
            rad: radd(radd(self.rad, rhs.rad), radd(e1, e2)),
            prec,
        }
    }
}

impl<'a> Sub<&'a CertNumber> for &'a CertNumber {
    type Output = CertNumber;
    fn sub(self, rhs: &CertNumber) -> CertNumber {
        let prec = self.prec.max(rhs.prec);
        let (re, e1) = float::sub(&self.re, &rhs.re, prec);
        let (im, e2) = float::sub(&self.im, &rhs.im, prec);
        CertNumber {
            re,
            im,
            rad: radd(radd(self.rad, rhs.rad), radd(e1, e2)),
            prec,
        }
    }
}

impl<'a> Mul<&'a CertNumber> for &'a CertNumber {
    type Output = CertNumber;
    fn mul(self, rhs: &CertNumber) -> CertNumber {
        let prec = self.prec.max(rhs.prec);
        let (a, b) = (&self.re, &self.im);
        let (c, d) = (&rhs.re, &rhs.im);
        let mut err = 0.0;
        let mut prod = |x: &Float, y: &Float| {
            let (p, e) = float::mul(x, y, prec);
            err = radd(err, e);
            p
        };
        let (ac, bd, ad, bc) = (prod(a, c), prod(b, d), prod(a, d), prod(b, c));
        let (re, e1) = float::sub(&ac, &bd, prec);
        let (im, e2) = float::add(&ad, &bc, prec);
        err = radd(err, radd(e1, e2));
        // (x + dx)(y + dy) - xy = x dy + y dx + dx dy
        let spread = radd(
            radd(
                rmul(self.mid_abs_upper(), rhs.rad),
                rmul(rhs.mid_abs_upper(), self.rad),
            ),
            rmul(self.rad, rhs.rad),
        );
        CertNumber {
            re,
            im,
            rad: radd(spread, err),
            prec,
        }
    }
}

impl Neg for &CertNumber {
    type Output = CertNumber;
    fn neg(self) -> CertNumber {
        CertNumber {
            re: -self.re.clone(),
            im: -self.im.clone(),
            rad: self.rad,
            prec: self.prec,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CertNumber> for CertNumber {
            type Output = CertNumber;
            fn $m(self, rhs: CertNumber) -> CertNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CertNumber> for CertNumber {
            type Output = CertNumber;
            fn $m(self, rhs: &CertNumber) -> CertNumber {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CertNumber> for &'a CertNumber {
            type Output = CertNumber;
            fn $m(self, rhs: CertNumber) -> CertNumber {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CertNumber {
    type Output = CertNumber;
    fn neg(self) -> CertNumber {
        -&self
    }
}
