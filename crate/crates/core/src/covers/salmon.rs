use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{Bitangent, ProjPoint};
use crate::numeric::Tolerances;

/// Singular values of the conic-monomial matrix at the eight bitangent
/// tangency points, with the rank decision.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SalmonReport {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Bound on the perturbation of every singular value from input radii
    /// and floating point.
    pub perturbation: f64,
    /// `sigma_6 + perturbation` is below `tol.rank * sigma_1`.
    pub smallest_negligible: bool,
    /// `sigma_5 - perturbation` exceeds `tol.rank * sigma_1`.
    pub next_nonzero: bool,
}

impl SalmonReport {
    /// The points lie on a unique conic: rank exactly 5.
    pub fn certified_rank_five(&self) -> bool {
        self.smallest_negligible && self.next_nonzero
    }

    pub fn relative_smallest(&self) -> f64 {
        self.singular_values[5] / self.singular_values[0]
    }
}

fn monomials(p: &ProjPoint) -> ([Complex64; 6], f64) {
    let q = p.normalized();
    let c = q.coords();
    let (x, y, z) = (&c[0], &c[1], &c[2]);
    let m = [x.sqr(), x * y, y.sqr(), x * z, y * z, z.sqr()];
    let rad = m.iter().map(|v| v.radius()).fold(0.0, f64::max);
    (m.map(|v| v.mid()), rad)
}

/// Check that the eight tangency points of four bitangents lie on a conic.
///
/// Each entry of the 8x6 matrix is known to within its ball radius plus the
/// `f64` conversion error, and singular values move by at most the
/// Frobenius norm of the perturbation. An allowance for the backward error
/// of the SVD itself is added on top.
pub fn salmon_check(bitangents: &[Bitangent], tol: &Tolerances) -> SalmonReport {
    let pts: Vec<&ProjPoint> = bitangents.iter().flat_map(|b| b.tangency.iter()).collect();
    let rows = pts.len();
    let mut m = DMatrix::<Complex64>::zeros(rows, 6);
    let mut frob = 0.0f64;
    for (r, p) in pts.iter().enumerate() {
        let (vals, rad) = monomials(p);
        for (j, v) in vals.iter().enumerate() {
            m[(r, j)] = *v;
            let e = rad + v.norm() * f64::EPSILON;
            frob += e * e;
        }
    }
    let sv = m.svd(false, false).singular_values;
    let mut s: Vec<f64> = sv.iter().cloned().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let perturbation = frob.sqrt() + 64.0 * f64::EPSILON * s[0];
    let thresh = tol.rank * s[0];
    SalmonReport {
        smallest_negligible: s.len() == 6 && s[5] + perturbation < thresh,
        next_nonzero: s.len() >= 5 && s[4] - perturbation > thresh,
        perturbation,
        singular_values: s,
    }
}
