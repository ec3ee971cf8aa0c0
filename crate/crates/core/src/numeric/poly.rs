use std::fmt;

use num_complex::Complex64;

use super::ball::CertNumber;
use crate::error::{Error, Result};

/// Univariate polynomial with ball coefficients, lowest degree first.
#[derive(Clone)]
pub struct CertPoly {
    coeffs: Vec<CertNumber>,
}

impl CertPoly {
    pub fn new(coeffs: Vec<CertNumber>) -> Self {
        CertPoly { coeffs }
    }

    pub fn zero() -> Self {
        CertPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: CertNumber) -> Self {
        CertPoly { coeffs: vec![c] }
    }

    pub fn from_f64(coeffs: &[f64], prec: usize) -> Self {
        CertPoly::new(coeffs.iter().map(|&c| CertNumber::from_f64(c, prec)).collect())
    }

    pub fn from_c64(coeffs: &[Complex64], prec: usize) -> Self {
        CertPoly::new(coeffs.iter().map(|&c| CertNumber::from_c64(c, prec)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[CertNumber], prec: usize) -> Self {
        let mut p = CertPoly::constant(CertNumber::one(prec));
        for r in roots {
            p = p.mul(&CertPoly::new(vec![-r, CertNumber::one(prec)]));
        }
        p
    }

    pub fn coeffs(&self) -> &[CertNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&CertNumber> {
        self.coeffs.get(i)
    }

    /// Length of the coefficient list minus one (no trimming).
    pub fn formal_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.iter().map(|c| c.precision()).max().unwrap_or(0)
    }

    /// Largest upper bound on a coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_upper()).fold(0.0, f64::max)
    }

    /// Drop leading coefficients whose discs lie below `rel_tol` times the
    /// coefficient scale. The result has a leading coefficient above that
    /// threshold, or is empty.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let thresh = rel_tol * self.scale();
        let mut coeffs = self.coeffs.clone();
        while let Some(c) = coeffs.last() {
            if c.is_below(thresh) || c.abs_upper() == 0.0 {
                coeffs.pop();
            } else {
                break;
            }
        }
        CertPoly { coeffs }
    }

    /// Whether every coefficient is within `rel_tol` of zero relative to
    /// `reference`.
    pub fn is_negligible(&self, rel_tol: f64, reference: f64) -> bool {
        let thresh = rel_tol * reference;
        self.coeffs.iter().all(|c| c.is_below(thresh) || c.abs_upper() == 0.0)
    }

    pub fn eval(&self, z: &CertNumber) -> CertNumber {
        let mut acc = CertNumber::zero(z.precision().max(self.precision()));
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Evaluate the degree-`degree` homogenization at `(t : w)`.
    pub fn eval_projective(&self, t: &CertNumber, w: &CertNumber, degree: usize) -> CertNumber {
        let prec = t.precision().max(w.precision());
        let mut acc = CertNumber::zero(prec);
        for i in (0..=degree).rev() {
            let c = self
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(|| CertNumber::zero(prec));
            acc = &(&acc * t) + &(&c * &w.pow((degree - i) as u32));
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.mid())
    }

    pub fn derivative(&self) -> Self {
        CertPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(i as f64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let prec = self.precision().max(other.precision());
        let z = CertNumber::zero(prec);
        CertPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&z);
                    let b = other.coeffs.get(i).unwrap_or(&z);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CertPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return CertPoly::zero();
        }
        let prec = self.precision().max(other.precision());
        let mut out = vec![CertNumber::zero(prec); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        CertPoly::new(out)
    }

    pub fn scale_by(&self, k: &CertNumber) -> Self {
        CertPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        CertPoly::new(self.coeffs.iter().map(|c| c.with_precision(prec)).collect())
    }
}

impl fmt::Debug for CertPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

/// Square root of a polynomial of even degree `2k`.
///
/// The leading coefficient of the result is the principal square root of the
/// leading coefficient of `p` (positive real part, ties to positive imaginary
/// part). The top `k + 1` coefficients of the root are solved for directly;
/// the remaining `k` coefficients of `q^2 - p` are residuals that must vanish
/// within `rel_tol` of the coefficient scale.
pub fn poly_sqrt(p: &CertPoly, rel_tol: f64) -> Result<CertPoly> {
    let p = p.trimmed(rel_tol);
    let n = match p.formal_degree() {
        Some(n) => n,
        None => return Err(Error::InvalidInput("square root of the zero polynomial".into())),
    };
    let prec = p.precision();
    if n % 2 == 1 {
        return Err(Error::NotASquare { index: n });
    }
    let k = n / 2;
    let c = p.coeffs();
    let mut q = vec![CertNumber::zero(prec); k + 1];
    q[k] = c[n].sqrt();
    let two_lead = q[k].scale(2.0);
    for i in (0..k).rev() {
        // coefficient of t^(k+i) in q^2 is 2 q_k q_i + sum over a in (i, k) of q_a q_(k+i-a)
        let mut acc = c[k + i].clone();
        for a in (i + 1)..k {
            acc = &acc - &(&q[a] * &q[k + i - a]);
        }
        q[i] = acc.try_div(&two_lead)?;
    }
    let q = CertPoly::new(q);
    let resid = q.mul(&q).sub(&p);
    let thresh = rel_tol * p.scale();
    let mut undecided = None;
    for (idx, r) in resid.coeffs().iter().enumerate().take(k) {
        if r.abs_upper() <= thresh {
            continue;
        }
        if r.abs_lower() > thresh {
            return Err(Error::NotASquare { index: idx });
        }
        undecided = Some(idx);
    }
    if let Some(idx) = undecided {
        return Err(Error::undecidable(
            format!("square-root residual at coefficient {idx}"),
            prec,
        ));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_square() {
        let p = CertPoly::from_f64(&[1.0, 0.0, -2.0, 0.0, 1.0], 128);
        let q = poly_sqrt(&p, 1e-12).unwrap();
        let want = [-1.0, 0.0, 1.0];
        for (c, w) in q.coeffs().iter().zip(want) {
            assert!((c.mid() - Complex64::new(w, 0.0)).norm() < 1e-30);
        }
    }

    #[test]
    fn non_square_is_rejected() {
        let p = CertPoly::from_f64(&[1.0, 0.0, 1.0], 128);
        assert_eq!(poly_sqrt(&p, 1e-12).unwrap_err(), Error::NotASquare { index: 0 });
    }

    #[test]
    fn negative_leading_coefficient_uses_imaginary_branch() {
        // -(t + 1)^2 = (i (t + 1))^2
        let p = CertPoly::from_f64(&[-1.0, -2.0, -1.0], 128);
        let q = poly_sqrt(&p, 1e-12).unwrap();
        assert!((q.coeffs()[1].mid() - Complex64::new(0.0, 1.0)).norm() < 1e-30);
        assert!((q.coeffs()[0].mid() - Complex64::new(0.0, 1.0)).norm() < 1e-30);
    }

    #[test]
    fn trimming_drops_negligible_leading_terms() {
        let p = CertPoly::from_f64(&[1.0, 2.0, 1e-20], 128);
        assert_eq!(p.trimmed(1e-12).formal_degree(), Some(1));
    }

    #[test]
    fn derivative_and_eval() {
        let p = CertPoly::from_f64(&[1.0, -3.0, 0.0, 2.0], 128);
        let d = p.derivative();
        let x = CertNumber::from_f64(1.5, 128);
        assert!((d.eval(&x).mid().re - (-3.0 + 6.0 * 2.25)).abs() < 1e-30);
        assert!((p.eval(&x).mid().re - (1.0 - 4.5 + 2.0 * 3.375)).abs() < 1e-30);
    }
}
