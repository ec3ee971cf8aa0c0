//! Certified arithmetic: complex balls, sign certification, polynomials.

mod ball;
pub(crate) mod float;
mod poly;
mod roots;

pub use ball::CertNumber;
pub use float::{MAX_PRECISION, MIN_PRECISION};
pub use poly::{poly_sqrt, CertPoly};
pub use roots::poly_roots;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of [`certify_sign`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
    Undecidable,
}

/// Tolerances shared across the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative threshold below which a quantity is treated as zero.
    pub zero: f64,
    /// Closure defect accepted when validating a Poncelet pair.
    pub closure: f64,
    /// Target defect of the bisection search.
    pub search: f64,
    /// Relative singular-value threshold for rank decisions.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: 1e-12,
            closure: 1e-10,
            search: 1e-13,
            rank: 1e-10,
        }
    }
}

impl Tolerances {
    /// Distance below which two root approximations are merged into a
    /// cluster. A root of multiplicity `k` perturbed by `eps` splits by about
    /// `eps^(1/k)`, so the square root of the zero tolerance covers doubles.
    pub fn cluster(&self) -> f64 {
        self.zero.sqrt()
    }

    /// Distance below which two projective points are identified.
    pub fn point(&self) -> f64 {
        (self.zero * 1e4).min(1e-6)
    }
}

/// Working precision and refinement budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Starting precision in bits.
    pub precision: usize,
    /// Number of precision doublings allowed on top of `precision`.
    pub max_doublings: u32,
    pub tol: Tolerances,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision: 128,
            max_doublings: 10,
            tol: Tolerances::default(),
        }
    }
}

impl Config {
    pub fn with_precision(mut self, precision: usize) -> Self {
        self.precision = precision;
        self
    }

    /// The sequence of precisions tried by [`Config::refine`].
    pub fn precisions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = float::clamp_precision(self.precision);
        for _ in 0..=self.max_doublings {
            if out.last() == Some(&p) {
                break;
            }
            out.push(p);
            p = float::clamp_precision(p.saturating_mul(2));
        }
        out
    }

    /// Run `f` at increasing precision until it succeeds or fails for a
    /// reason more precision cannot fix. Returns the value and the precision
    /// at which it was obtained.
    pub fn refine<T>(&self, mut f: impl FnMut(usize) -> Result<T>) -> Result<(T, usize)> {
        let mut last = None;
        for p in self.precisions() {
            match f(p) {
                Ok(v) => return Ok((v, p)),
                Err(e) if e.is_precision_related() => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(Error::PrecisionExhausted(match last {
            Some(e) => e.to_string(),
            None => "empty precision schedule".into(),
        }))
    }
}

/// Something that can be evaluated to a ball at any requested precision.
pub trait Approximable {
    fn approx(&self, precision: usize) -> CertNumber;
}

impl Approximable for CertNumber {
    fn approx(&self, _precision: usize) -> CertNumber {
        self.clone()
    }
}

impl<F: Fn(usize) -> CertNumber> Approximable for F {
    fn approx(&self, precision: usize) -> CertNumber {
        self(precision)
    }
}

/// Certify the sign of the real part of `x`.
///
/// `Zero` is returned only when the whole disc lies within `zero_tolerance`
/// of the origin; `Positive`/`Negative` only when the disc lies strictly in
/// the corresponding half-plane. Otherwise precision is doubled up to the
/// budget of `cfg`, and `Undecidable` is reported when it runs out or stops
/// helping.
pub fn certify_sign(x: &impl Approximable, zero_tolerance: f64, cfg: &Config) -> Sign {
    assert!(zero_tolerance > 0.0, "zero tolerance must be positive");
    let mut prev_rad = f64::INFINITY;
    for p in cfg.precisions() {
        let v = x.approx(p);
        if v.is_below(zero_tolerance) {
            return Sign::Zero;
        }
        if v.re_lower() > 0.0 {
            return Sign::Positive;
        }
        if v.re_upper() < 0.0 {
            return Sign::Negative;
        }
        if !(v.radius() < prev_rad) {
            break;
        }
        prev_rad = v.radius();
    }
    Sign::Undecidable
}
