use super::linalg::{self, Vec3};
use super::primitives::{Conic, HomPoly, ProjLine, ProjPoint};
use crate::error::{Error, Result};
use crate::numeric::{CertNumber, CertPoly, Tolerances};

/// A polynomial map from the projective line onto a curve, written
/// dehomogenized in `t` (the point `t = infinity` is the leading coefficient
/// vector).
pub trait CurveParam {
    /// Coordinate polynomials `x(t), y(t), z(t)`.
    fn coords(&self) -> &[CertPoly; 3];

    /// Degree of the map (1 for lines, 2 for conics).
    fn degree(&self) -> usize;

    /// Parameter of a point on the curve, `None` for the point at infinity.
    fn param_of(&self, p: &ProjPoint) -> Option<CertNumber>;

    fn point_at(&self, t: &CertNumber) -> ProjPoint {
        ProjPoint::from_vec(self.coords().clone().map(|c| c.eval(t)))
    }

    /// Point at `(t : w)`.
    fn point_at_projective(&self, t: &CertNumber, w: &CertNumber) -> ProjPoint {
        let d = self.degree();
        ProjPoint::from_vec(self.coords().clone().map(|c| c.eval_projective(t, w, d)))
    }

    fn point_at_infinity(&self) -> ProjPoint {
        let d = self.degree();
        ProjPoint::from_vec(self.coords().clone().map(|c| {
            c.coeff(d)
                .cloned()
                .unwrap_or_else(|| CertNumber::zero(c.precision()))
        }))
    }
}

/// Rational parametrization of a conic by the pencil of lines through a
/// base point. `t = infinity` maps to the base point.
#[derive(Clone, Debug)]
pub struct ConicParam {
    conic: Conic,
    base: ProjPoint,
    u: Vec3,
    v: Vec3,
    map: [CertPoly; 3],
}

impl ConicParam {
    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    pub fn base_point(&self) -> &ProjPoint {
        &self.base
    }
}

impl CurveParam for ConicParam {
    fn coords(&self) -> &[CertPoly; 3] {
        &self.map
    }

    fn degree(&self) -> usize {
        2
    }

    fn param_of(&self, p: &ProjPoint) -> Option<CertNumber> {
        if p.approx_eq(&self.base, 1e-9) {
            return None;
        }
        let chord = linalg::cross(self.base.coords(), p.coords());
        let uv = linalg::cross(&self.u, &self.v);
        let x = linalg::cross(&chord, &uv);
        solve_pencil_coordinate(&x, &self.u, &self.v, &uv)
    }
}

/// `t` with `x = alpha (u + t v)`, given `uv = u x v`.
fn solve_pencil_coordinate(x: &Vec3, u: &Vec3, v: &Vec3, uv: &Vec3) -> Option<CertNumber> {
    let w = linalg::conj3(uv);
    let alpha = linalg::dot(&linalg::cross(x, v), &w);
    let beta = linalg::dot(&linalg::cross(u, x), &w);
    beta.try_div(&alpha).ok()
}

/// Affine parametrization `p0 + t p1` of a line.
#[derive(Clone, Debug)]
pub struct LineParam {
    line: ProjLine,
    p0: Vec3,
    p1: Vec3,
    map: [CertPoly; 3],
}

impl LineParam {
    pub fn new(line: &ProjLine) -> Self {
        let l = line.coords();
        let prec = line.precision();
        let j = linalg::dominant_index(l);
        let (a, b) = ((j + 1) % 3, (j + 2) % 3);
        let p0 = linalg::cross(l, &linalg::basis(a, prec));
        let p1 = linalg::cross(l, &linalg::basis(b, prec));
        LineParam::from_points(line.clone(), p0, p1)
    }

    /// Parametrize the line through two distinct points.
    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Self {
        LineParam::from_points(p.join(q), p.coords().clone(), q.coords().clone())
    }

    fn from_points(line: ProjLine, p0: Vec3, p1: Vec3) -> Self {
        let map = std::array::from_fn(|i| CertPoly::new(vec![p0[i].clone(), p1[i].clone()]));
        LineParam { line, p0, p1, map }
    }

    pub fn line(&self) -> &ProjLine {
        &self.line
    }
}

impl CurveParam for LineParam {
    fn coords(&self) -> &[CertPoly; 3] {
        &self.map
    }

    fn degree(&self) -> usize {
        1
    }

    fn param_of(&self, p: &ProjPoint) -> Option<CertNumber> {
        let uv = linalg::cross(&self.p0, &self.p1);
        if ProjPoint::from_vec(self.p1.clone()).approx_eq(p, 1e-9) {
            return None;
        }
        solve_pencil_coordinate(p.coords(), &self.p0, &self.p1, &uv)
    }
}

/// The second intersection of the line through `k` and `p` with the conic:
/// `(p^T A p) k - 2 (k^T A p) p`, exact when `k` is on the conic.
pub(crate) fn second_point(c: &Conic, k: &Vec3, p: &Vec3) -> Vec3 {
    let kp = ProjPoint::from_vec(k.clone());
    let pp = ProjPoint::from_vec(p.clone());
    let a = c.eval(&pp);
    let b = c.bilinear(&kp, &pp).scale(2.0);
    linalg::sub3(&linalg::scale3(k, &a), &linalg::scale3(p, &b))
}

/// Parametrize `c` from a point `base` on it.
pub fn parametrize(c: &Conic, base: &ProjPoint, tol: &Tolerances) -> Result<ConicParam> {
    if !c.contains(base, tol.point()) {
        return Err(Error::IncidenceViolation(format!(
            "base point {:?} is not on the conic (defect {:.3e})",
            base,
            c.incidence(base)
        )));
    }
    let base = base.normalized();
    let prec = c.precision().max(base.precision());
    let polar = c.polar(&base).normalized();
    let pl = polar.coords();
    let ju = linalg::dominant_index(pl);
    let u = linalg::basis(ju, prec);
    let v = (0..3)
        .map(|j| linalg::normalize3(&linalg::cross(pl, &linalg::basis(j, prec))))
        .filter(|v| linalg::norm_upper(v) > 0.0)
        .max_by(|a, b| {
            let da = linalg::proj_distance(a, base.coords());
            let db = linalg::proj_distance(b, base.coords());
            da.partial_cmp(&db).unwrap()
        })
        .expect("a polar line has points other than its pole");
    // X(t) = u + t v, phi(t) = (X^T A X) B - 2 (B^T A X) X
    let x: [CertPoly; 3] = std::array::from_fn(|i| CertPoly::new(vec![u[i].clone(), v[i].clone()]));
    let q = c.form().compose(&x);
    let bax: CertPoly = {
        let row = linalg::mat_vec(c.matrix(), base.coords());
        let mut acc = CertPoly::zero();
        for i in 0..3 {
            acc = acc.add(&x[i].scale_by(&row[i]));
        }
        acc.scale_by(&CertNumber::from_f64(2.0, prec))
    };
    let b = base.coords();
    let map: [CertPoly; 3] = std::array::from_fn(|i| {
        q.scale_by(&b[i]).sub(&x[i].mul(&bax))
    });
    Ok(ConicParam {
        conic: c.clone(),
        base,
        u,
        v,
        map,
    })
}

/// Restrict a homogeneous polynomial to a parametrized curve. The result has
/// formal degree `deg(F) * deg(param)`; a drop of the true degree by `k`
/// means `F` vanishes to order `k` at the point `t = infinity`.
pub fn restrict_poly(f: &HomPoly, param: &(impl CurveParam + ?Sized)) -> CertPoly {
    let r = f.compose(param.coords());
    let n = f.degree() as usize * param.degree() + 1;
    let mut coeffs = r.coeffs().to_vec();
    let prec = r.precision().max(64);
    coeffs.resize(n, CertNumber::zero(prec));
    coeffs.truncate(n);
    CertPoly::new(coeffs)
}

/// Roots of the binary quadratic `a t^2 + b t w + c w^2` as points `(t : w)`
/// with multiplicities, or `None` if the form vanishes identically.
pub(crate) fn binary_quadratic_roots(
    a: &CertNumber,
    b: &CertNumber,
    c: &CertNumber,
    tol: f64,
) -> Option<Vec<((CertNumber, CertNumber), usize)>> {
    let scale = a.abs_upper().max(b.abs_upper()).max(c.abs_upper());
    if scale == 0.0 || (a.is_below(tol * scale) && b.is_below(tol * scale) && c.is_below(tol * scale)) {
        return None;
    }
    let disc = &b.sqr() - &(a * c).scale(4.0);
    if disc.is_below(tol * scale * scale) {
        // double root at (-b : 2a) or equivalently (2c : -b)
        let r1 = (-b, a.scale(2.0));
        let r2 = (c.scale(2.0), -b);
        let pick = if r1.1.abs_upper() + r1.0.abs_upper() >= r2.0.abs_upper() + r2.1.abs_upper() {
            r1
        } else {
            r2
        };
        return Some(vec![(pick, 2)]);
    }
    let s = disc.sqrt();
    let plus = &(b + &s).scale(-0.5);
    let minus = &(b - &s).scale(-0.5);
    let q = if plus.mid_abs_upper() >= minus.mid_abs_upper() {
        plus.clone()
    } else {
        minus.clone()
    };
    Some(vec![((q.clone(), a.clone()), 1), ((c.clone(), q), 1)])
}

/// Intersection of a line with a conic, with multiplicities.
pub fn line_conic_intersection(
    l: &ProjLine,
    c: &Conic,
    tol: &Tolerances,
) -> Result<Vec<(ProjPoint, usize)>> {
    let lp = LineParam::new(l);
    let q = restrict_poly(&c.form(), &lp);
    let k = q.coeffs();
    match binary_quadratic_roots(&k[2], &k[1], &k[0], tol.zero) {
        None => Err(Error::UnexpectedDegeneracy("line lies on the conic".into())),
        Some(roots) => Ok(roots
            .into_iter()
            .map(|((t, w), m)| (lp.point_at_projective(&t, &w).normalized(), m))
            .collect()),
    }
}

/// Probe lines for base-point selection: coordinate axes first, then
/// diagonals, then a spread of generic lines.
pub(crate) fn probe_lines(prec: usize) -> Vec<ProjLine> {
    let mut out = Vec::new();
    for v in [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, -1.0, 0.0],
        [1.0, 1.0, 0.0],
        [1.0, 0.0, -1.0],
        [1.0, 0.0, 1.0],
        [0.0, 1.0, -1.0],
        [0.0, 1.0, 1.0],
        [1.0, 2.0, 3.0],
        [3.0, -1.0, 2.0],
        [2.0, 3.0, -5.0],
    ] {
        out.push(ProjLine::from_f64(v, prec));
    }
    // low-discrepancy fallbacks for arrangements that crowd the fixed lines
    let (a, b) = (0.618_033_988_749_895_f64, 0.414_213_562_373_095_f64);
    for i in 1..=36 {
        let i = i as f64;
        out.push(ProjLine::from_f64([2.0 * (i * a).fract() - 1.0, 2.0 * (i * b).fract() - 1.0, 1.0], prec));
    }
    out
}

/// A point of `c` found on the probe lines, accepted only if every `avoid`
/// polynomial is at least `margin` (relative) away from zero there.
pub fn choose_base_point(
    c: &Conic,
    avoid: &[&HomPoly],
    margin: f64,
    tol: &Tolerances,
) -> Result<ProjPoint> {
    choose_base_point_nth(c, avoid, margin, 0, tol)
}

/// As [`choose_base_point`], passing over the first `skip` acceptable
/// points.
pub fn choose_base_point_nth(
    c: &Conic,
    avoid: &[&HomPoly],
    margin: f64,
    skip: usize,
    tol: &Tolerances,
) -> Result<ProjPoint> {
    let prec = c.precision();
    let mut best: Option<(f64, ProjPoint)> = None;
    let mut left = skip;
    for l in probe_lines(prec) {
        let pts = match line_conic_intersection(&l, c, tol) {
            Ok(p) => p,
            Err(_) => continue,
        };
        for (p, _) in pts {
            let score = avoid
                .iter()
                .map(|f| f.relative_value(&p))
                .fold(f64::INFINITY, f64::min);
            if score > margin {
                if left == 0 {
                    return Ok(p);
                }
                left -= 1;
                continue;
            }
            if best.as_ref().map_or(true, |(s, _)| score > *s) {
                best = Some((score, p));
            }
        }
    }
    Err(Error::UnexpectedDegeneracy(format!(
        "no probe point of the conic avoids the given curves (best margin {:.3e})",
        best.map_or(0.0, |b| b.0)
    )))
}

/// A parametrization of `l` whose point at infinity avoids every `avoid`
/// polynomial, passing over the first `skip` acceptable choices.
pub fn line_param_avoiding(l: &ProjLine, avoid: &[&HomPoly], margin: f64, skip: usize) -> Result<LineParam> {
    let prec = l.precision();
    let cands: Vec<ProjPoint> = probe_lines(prec)
        .iter()
        .map(|m| l.meet(m))
        .filter(|p| linalg::norm_upper(p.coords()) > 1e-6 * linalg::norm_upper(l.coords()))
        .map(|p| p.normalized())
        .collect();
    let mut left = skip;
    for (i, p1) in cands.iter().enumerate() {
        let score = avoid
            .iter()
            .map(|f| f.relative_value(p1))
            .fold(f64::INFINITY, f64::min);
        if score <= margin {
            continue;
        }
        if left > 0 {
            left -= 1;
            continue;
        }
        if let Some(p0) = cands.iter().skip(i + 1).chain(cands.iter()).find(|q| q.distance(p1) > 1e-3) {
            let mut lp = LineParam::through(p0, p1);
            lp.line = l.clone();
            return Ok(lp);
        }
    }
    Err(Error::UnexpectedDegeneracy("no probe point of the line avoids the given curves".into()))
}

/// Parametrize `c` from an automatically chosen base point avoiding `avoid`.
pub fn parametrize_avoiding(c: &Conic, avoid: &[&HomPoly], tol: &Tolerances) -> Result<ConicParam> {
    // curves close to `c` are small everywhere on it, so relax the margin
    // while staying well clear of the zero tolerance
    let mut last = None;
    for margin in [1e-3, 1e-5, 1e-7] {
        match choose_base_point(c, avoid, margin, tol) {
            Ok(base) => return parametrize(c, &base, tol),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn pullback_vanishes() {
        let c = Conic::from_f64([2.0, 0.5, 1.0, -1.0, 0.3, -3.0], 128);
        let base = choose_base_point(&c, &[], 0.0, &tol()).unwrap();
        let p = parametrize(&c, &base, &tol()).unwrap();
        let r = restrict_poly(&c.form(), &p);
        assert!(r.is_negligible(1e-25, c.scale()));
        assert!(p.point_at_infinity().approx_eq(&base, 1e-25));
    }

    #[test]
    fn unit_circle_from_west_pole() {
        let c = Conic::from_f64([1.0, 0.0, 1.0, 0.0, 0.0, -1.0], 128);
        let base = ProjPoint::from_f64([-1.0, 0.0, 1.0], 128);
        let p = parametrize(&c, &base, &tol()).unwrap();
        // every parameter lands on the circle and inverts
        for t in [-2.0, -0.5, 0.0, 0.3, 1.7] {
            let tt = CertNumber::from_f64(t, 128);
            let q = p.point_at(&tt);
            assert!(c.contains(&q, 1e-25));
            let back = p.param_of(&q).unwrap();
            assert!((back.mid() - Complex64::new(t, 0.0)).norm() < 1e-20);
        }
    }

    #[test]
    fn off_conic_base_is_rejected() {
        let c = Conic::from_f64([1.0, 0.0, 1.0, 0.0, 0.0, -1.0], 128);
        let base = ProjPoint::from_f64([0.0, 0.0, 1.0], 128);
        assert!(matches!(parametrize(&c, &base, &tol()), Err(Error::IncidenceViolation(_))));
    }

    #[test]
    fn tangent_line_restricts_to_double_root() {
        let c = Conic::from_f64([1.0, 0.0, 1.0, 0.0, 0.0, -1.0], 128);
        let l = ProjLine::from_f64([0.0, 1.0, -1.0], 128);
        let pts = line_conic_intersection(&l, &c, &tol()).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].1, 2);
        assert!(pts[0].0.approx_eq(&ProjPoint::from_f64([0.0, 1.0, 1.0], 128), 1e-12));
    }
}
