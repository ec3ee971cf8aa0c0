use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::linalg::{self, Mat3, Vec3};
use crate::error::{Error, Result};
use crate::numeric::{CertNumber, CertPoly};

macro_rules! homogeneous_triple {
    ($name:ident) => {
        impl $name {
            pub fn new(coords: Vec3) -> Result<Self> {
                if coords.iter().all(|c| c.contains_zero()) {
                    return Err(Error::InvalidInput(
                        concat!(stringify!($name), " with all coordinates zero").into(),
                    ));
                }
                Ok($name { c: coords })
            }

            /// Construct without the nonvanishing check.
            pub fn from_vec(coords: Vec3) -> Self {
                $name { c: coords }
            }

            pub fn from_f64(v: [f64; 3], prec: usize) -> Self {
                $name {
                    c: linalg::vec3_f64(v, prec),
                }
            }

            pub fn from_c64(v: [Complex64; 3], prec: usize) -> Self {
                $name {
                    c: linalg::vec3_c64(v, prec),
                }
            }

            pub fn coords(&self) -> &Vec3 {
                &self.c
            }

            pub fn mid(&self) -> [Complex64; 3] {
                linalg::mid3(&self.c)
            }

            pub fn precision(&self) -> usize {
                linalg::precision3(&self.c)
            }

            /// Scaled so the coordinate of largest modulus is 1.
            pub fn normalized(&self) -> Self {
                $name {
                    c: linalg::normalize3(&self.c),
                }
            }

            /// Projective distance: the largest 2x2 minor of the normalized
            /// coordinates.
            pub fn distance(&self, other: &Self) -> f64 {
                linalg::proj_distance(&self.c, &other.c)
            }

            pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
                self.distance(other) < tol
            }

            /// Whether all coordinates are real up to `tol` after normalizing.
            pub fn is_real(&self, tol: f64) -> bool {
                self.normalized().c.iter().all(|x| x.im_f64().abs() < tol)
            }

            /// Complex conjugate.
            pub fn conj(&self) -> Self {
                $name {
                    c: linalg::conj3(&self.c),
                }
            }

            /// Deterministic order on normalized coordinates; differences
            /// below `tol` count as ties.
            pub fn lex_cmp(&self, other: &Self, tol: f64) -> Ordering {
                let a = self.normalized().mid();
                let b = other.normalized().mid();
                for i in 0..3 {
                    for (x, y) in [(a[i].re, b[i].re), (a[i].im, b[i].im)] {
                        if (x - y).abs() > tol {
                            return x.partial_cmp(&y).unwrap_or(Ordering::Equal);
                        }
                    }
                }
                Ordering::Equal
            }

            pub fn with_precision(&self, prec: usize) -> Self {
                $name {
                    c: self.c.clone().map(|x| x.with_precision(prec)),
                }
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let n = self.normalized().mid();
                write!(f, "{}(", stringify!($name))?;
                for (i, z) in n.iter().enumerate() {
                    if i > 0 {
                        write!(f, " : ")?;
                    }
                    if z.im.abs() < 1e-14 {
                        write!(f, "{:.6}", z.re)?;
                    } else {
                        write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
                    }
                }
                write!(f, ")")
            }
        }
    };
}

/// A point of the complex projective plane.
#[derive(Clone)]
pub struct ProjPoint {
    c: Vec3,
}

/// A line of the complex projective plane, `c . x = 0`.
#[derive(Clone)]
pub struct ProjLine {
    c: Vec3,
}

homogeneous_triple!(ProjPoint);
homogeneous_triple!(ProjLine);

impl ProjPoint {
    /// The line through two points.
    pub fn join(&self, other: &ProjPoint) -> ProjLine {
        ProjLine::from_vec(linalg::cross(&self.c, &other.c))
    }
}

impl ProjLine {
    /// The intersection point of two lines.
    pub fn meet(&self, other: &ProjLine) -> ProjPoint {
        ProjPoint::from_vec(linalg::cross(&self.c, &other.c))
    }

    /// `l . p`, zero iff `p` lies on the line.
    pub fn eval(&self, p: &ProjPoint) -> CertNumber {
        linalg::dot(&self.c, &p.c)
    }

    /// Relative incidence defect of `p` on `self`.
    pub fn incidence(&self, p: &ProjPoint) -> f64 {
        let a = self.normalized();
        let b = p.normalized();
        a.eval(&b).abs_upper()
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        self.incidence(p) < tol
    }

    /// The linear form as a homogeneous polynomial.
    pub fn form(&self) -> HomPoly {
        let mut h = HomPoly::zero(1);
        for (i, c) in self.c.iter().enumerate() {
            let mut e = [0u32; 3];
            e[i] = 1;
            h.add_term(e, c.clone());
        }
        h
    }
}

/// A smooth conic `x^T A x = 0` with symmetric `A`.
///
/// Coefficients are listed in the order `(x^2, xy, y^2, xz, yz, z^2)`.
#[derive(Clone)]
pub struct Conic {
    m: Mat3,
}

impl Conic {
    /// Build from the six coefficients, failing if the determinant is
    /// certified to vanish at the relative tolerance `tol`.
    pub fn new(coeffs: [CertNumber; 6], tol: f64) -> Result<Self> {
        let c = Conic::from_coeffs_unchecked(coeffs);
        if c.is_singular(tol) {
            return Err(Error::SingularConic);
        }
        Ok(c)
    }

    pub fn from_coeffs_unchecked(k: [CertNumber; 6]) -> Self {
        let [a, b, c, d, e, f] = k;
        let h = |x: &CertNumber| x.scale(0.5);
        let m = [
            [a, h(&b), h(&d)],
            [h(&b), c, h(&e)],
            [h(&d), h(&e), f],
        ];
        Conic { m }
    }

    pub fn from_f64(k: [f64; 6], prec: usize) -> Self {
        Conic::from_coeffs_unchecked(k.map(|x| CertNumber::from_f64(x, prec)))
    }

    pub fn from_matrix(m: Mat3) -> Self {
        Conic { m }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn coeffs(&self) -> [CertNumber; 6] {
        let m = &self.m;
        [
            m[0][0].clone(),
            m[0][1].scale(2.0),
            m[1][1].clone(),
            m[0][2].scale(2.0),
            m[1][2].scale(2.0),
            m[2][2].clone(),
        ]
    }

    pub fn precision(&self) -> usize {
        self.m.iter().map(linalg::precision3).max().unwrap_or(0)
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        Conic {
            m: self.m.clone().map(|r| r.map(|x| x.with_precision(prec))),
        }
    }

    /// Largest upper bound on a matrix entry.
    pub fn scale(&self) -> f64 {
        linalg::mat_norm_upper(&self.m)
    }

    pub fn det(&self) -> CertNumber {
        linalg::det3(&self.m)
    }

    /// Whether the determinant is below `tol` relative to the entry scale.
    pub fn is_singular(&self, tol: f64) -> bool {
        let s = self.scale();
        self.det().abs_upper() < tol * s * s * s
    }

    /// `p^T A q`.
    pub fn bilinear(&self, p: &ProjPoint, q: &ProjPoint) -> CertNumber {
        linalg::dot(&p.c, &linalg::mat_vec(&self.m, &q.c))
    }

    pub fn eval(&self, p: &ProjPoint) -> CertNumber {
        self.bilinear(p, p)
    }

    /// Relative defect of `p` on the conic.
    pub fn incidence(&self, p: &ProjPoint) -> f64 {
        let p = p.normalized();
        self.eval(&p).abs_upper() / self.scale()
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        self.incidence(p) < tol
    }

    /// The polar line `A p`; the tangent line when `p` is on the conic.
    pub fn polar(&self, p: &ProjPoint) -> ProjLine {
        ProjLine::from_vec(linalg::mat_vec(&self.m, &p.c))
    }

    /// The pole `adj(A) l` of a line; the tangency point of a tangent line.
    pub fn pole(&self, l: &ProjLine) -> ProjPoint {
        ProjPoint::from_vec(linalg::mat_vec(&linalg::adjugate(&self.m), &l.c))
    }

    /// The dual conic `adj(A)`, whose points are the tangent lines.
    pub fn dual(&self) -> Conic {
        Conic {
            m: linalg::adjugate(&self.m),
        }
    }

    /// `l^T adj(A) l`, zero iff `l` is tangent.
    pub fn dual_eval(&self, l: &ProjLine) -> CertNumber {
        let adj = linalg::adjugate(&self.m);
        linalg::dot(&l.c, &linalg::mat_vec(&adj, &l.c))
    }

    /// Relative tangency defect of `l`.
    pub fn tangency(&self, l: &ProjLine) -> f64 {
        let l = l.normalized();
        let s = self.scale();
        self.dual_eval(&l).abs_upper() / (s * s)
    }

    pub fn is_tangent(&self, l: &ProjLine, tol: f64) -> bool {
        self.tangency(l) < tol
    }

    /// Whether the two conics agree up to scale within `tol`.
    pub fn proportional(&self, other: &Conic, tol: f64) -> bool {
        let a = self.normalized_coeffs();
        let b = other.normalized_coeffs();
        for i in 0..6 {
            for j in (i + 1)..6 {
                let minor = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
                if minor.abs_upper() >= tol {
                    return false;
                }
            }
        }
        true
    }

    fn normalized_coeffs(&self) -> [CertNumber; 6] {
        let k = self.coeffs();
        let i = (0..6)
            .max_by(|&a, &b| k[a].mid().norm().partial_cmp(&k[b].mid().norm()).unwrap())
            .unwrap();
        let d = k[i].clone();
        k.map(|x| x.try_div(&d).unwrap_or(x))
    }

    /// The quadratic form as a homogeneous polynomial.
    pub fn form(&self) -> HomPoly {
        let k = self.coeffs();
        let exps = [[2, 0, 0], [1, 1, 0], [0, 2, 0], [1, 0, 1], [0, 1, 1], [0, 0, 2]];
        let mut h = HomPoly::zero(2);
        for (e, c) in exps.into_iter().zip(k) {
            h.add_term(e, c);
        }
        h
    }

    pub fn mid_coeffs(&self) -> [Complex64; 6] {
        self.coeffs().map(|c| c.mid())
    }
}

impl fmt::Debug for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.mid_coeffs();
        write!(f, "Conic{:?}", k.map(|z| (z.re, z.im)))
    }
}

/// Homogeneous polynomial in `x, y, z`.
#[derive(Clone, Debug)]
pub struct HomPoly {
    degree: u32,
    terms: BTreeMap<[u32; 3], CertNumber>,
}

impl HomPoly {
    pub fn zero(degree: u32) -> Self {
        HomPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CertNumber) -> Self {
        let mut h = HomPoly::zero(0);
        h.add_term([0, 0, 0], c);
        h
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &CertNumber)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: [u32; 3], c: CertNumber) {
        assert_eq!(e.iter().sum::<u32>(), self.degree, "term degree mismatch");
        let v = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        self.terms.insert(e, v);
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let mut out = HomPoly::zero(self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }

    /// Product of linear forms.
    pub fn product_of_lines<'a>(lines: impl IntoIterator<Item = &'a ProjLine>, prec: usize) -> Self {
        let mut h = HomPoly::constant(CertNumber::one(prec));
        for l in lines {
            h = h.mul(&l.form());
        }
        h
    }

    pub fn eval(&self, p: &ProjPoint) -> CertNumber {
        let prec = p.precision();
        let c = p.coords();
        let mut acc = CertNumber::zero(prec);
        for (e, k) in &self.terms {
            let m = &(&c[0].pow(e[0]) * &c[1].pow(e[1])) * &c[2].pow(e[2]);
            acc = &acc + &(k * &m);
        }
        acc
    }

    /// Upper bound on `sum |coefficient|`, the scale for relative tests at
    /// normalized points.
    pub fn scale(&self) -> f64 {
        self.terms.values().map(|c| c.abs_upper()).sum()
    }

    /// Relative value at the normalized point.
    pub fn relative_value(&self, p: &ProjPoint) -> f64 {
        self.eval(&p.normalized()).abs_upper() / self.scale()
    }

    /// Substitute univariate polynomials for `x, y, z`.
    pub fn compose(&self, x: &[CertPoly; 3]) -> CertPoly {
        let prec = x.iter().map(|p| p.precision()).max().unwrap_or(64);
        let mut powers: [Vec<CertPoly>; 3] = std::array::from_fn(|_| vec![CertPoly::constant(CertNumber::one(prec))]);
        for (i, pw) in powers.iter_mut().enumerate() {
            for k in 1..=self.degree as usize {
                let next = pw[k - 1].mul(&x[i]);
                pw.push(next);
            }
        }
        let mut out = CertPoly::zero();
        for (e, c) in &self.terms {
            let m = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize]);
            out = out.add(&m.scale_by(c));
        }
        out
    }
}

/// A projective change of coordinates `p -> M p`.
#[derive(Clone, Debug)]
pub struct Projectivity {
    m: Mat3,
    /// `adj(M)^T`, which maps lines and is `M^{-T}` up to scale.
    cof: Mat3,
}

impl Projectivity {
    pub fn new(m: Mat3) -> Self {
        let cof = linalg::transpose(&linalg::adjugate(&m));
        Projectivity { m, cof }
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::from_vec(linalg::mat_vec(&self.m, p.coords()))
    }

    pub fn apply_line(&self, l: &ProjLine) -> ProjLine {
        ProjLine::from_vec(linalg::mat_vec(&self.cof, l.coords()))
    }

    /// The image conic `adj(M)^T A adj(M)`.
    pub fn apply_conic(&self, c: &Conic) -> Conic {
        let adj = linalg::transpose(&self.cof);
        Conic::from_matrix(linalg::mat_mul(&self.cof, &linalg::mat_mul(c.matrix(), &adj)))
    }
}

/// Sort and compare helper for deterministic output order.
pub(crate) fn sort_points<T>(items: &mut [T], key: impl Fn(&T) -> &ProjPoint) {
    items.sort_by(|a, b| key(a).lex_cmp(key(b), 1e-9));
}

pub(crate) fn sort_lines<T>(items: &mut [T], key: impl Fn(&T) -> &ProjLine) {
    items.sort_by(|a, b| key(a).lex_cmp(key(b), 1e-9));
}
