use super::linalg;
use super::param::{
    line_conic_intersection, parametrize_avoiding, restrict_poly, second_point, CurveParam, LineParam,
};
use super::primitives::{sort_lines, sort_points, Conic, ProjLine, ProjPoint};
use crate::error::{Error, Result};
use crate::numeric::{poly_roots, Tolerances};

/// Intersection points of two conics with multiplicities (summing to 4).
pub fn intersect_conics(c1: &Conic, c2: &Conic, tol: &Tolerances) -> Result<Vec<(ProjPoint, usize)>> {
    if c1.proportional(c2, tol.zero) {
        return Err(Error::IdenticalConics);
    }
    let f2 = c2.form();
    let param = parametrize_avoiding(c1, &[&f2], tol)?;
    let quartic = restrict_poly(&f2, &param);
    if quartic.is_negligible(tol.zero, c2.scale()) {
        return Err(Error::IdenticalConics);
    }
    let roots = poly_roots(&quartic, tol)?;
    let mut out: Vec<(ProjPoint, usize)> = roots
        .into_iter()
        .map(|(t, m)| (param.point_at(&t.midpoint()).normalized(), m))
        .collect();
    // a degree drop would mean the base point is on c2, which it avoids
    let total: usize = out.iter().map(|p| p.1).sum();
    if total != 4 {
        return Err(Error::PrecisionExhausted(format!(
            "conic intersection multiplicities sum to {total}"
        )));
    }
    sort_points(&mut out, |p| &p.0);
    Ok(out)
}

/// Whether every intersection point is simple.
pub fn is_transversal(points: &[(ProjPoint, usize)]) -> bool {
    points.len() == 4 && points.iter().all(|p| p.1 == 1)
}

/// Tangent lines to `c` through `p`: one (the polar) if `p` is on `c`,
/// otherwise two, possibly with complex coefficients.
pub fn tangent_lines_from_point(p: &ProjPoint, c: &Conic, tol: &Tolerances) -> Vec<ProjLine> {
    if c.contains(p, tol.point()) {
        return vec![c.polar(p).normalized()];
    }
    // lines through p are the points of the dual-plane line p; tangent lines
    // are where it meets the dual conic
    let pencil = ProjLine::from_vec(p.coords().clone());
    match line_conic_intersection(&pencil, &c.dual(), tol) {
        Ok(pts) => {
            let mut out: Vec<ProjLine> = pts
                .into_iter()
                .map(|(q, _)| ProjLine::from_vec(q.coords().clone()).normalized())
                .collect();
            sort_lines(&mut out, |l| l);
            out
        }
        Err(_) => vec![c.polar(p).normalized()],
    }
}

/// The second point where `l` meets `c`, given one intersection `known`.
pub fn other_intersection(l: &ProjLine, c: &Conic, known: &ProjPoint, tol: &Tolerances) -> Result<ProjPoint> {
    if !l.contains(known, tol.point()) || !c.contains(known, tol.point()) {
        return Err(Error::IncidenceViolation(format!(
            "{known:?} is not on both the line and the conic (defects {:.3e}, {:.3e})",
            l.incidence(known),
            c.incidence(known)
        )));
    }
    let lp = LineParam::new(l);
    let cands = [lp.point_at_infinity(), ProjPoint::from_vec(lp.coords().clone().map(|c| c.coeffs()[0].clone()))];
    let far = cands
        .into_iter()
        .max_by(|a, b| a.distance(known).partial_cmp(&b.distance(known)).unwrap())
        .unwrap();
    let k = known.normalized();
    let q = second_point(c, k.coords(), far.normalized().coords());
    if linalg::norm_upper(&q) == 0.0 {
        return Ok(k);
    }
    Ok(ProjPoint::from_vec(q).normalized())
}

/// A common tangent of two conics with its tangency points on each.
#[derive(Clone, Debug)]
pub struct Bitangent {
    pub line: ProjLine,
    pub tangency: [ProjPoint; 2],
}

/// The four common tangent lines, as intersections of the dual conics.
pub fn bitangents(c1: &Conic, c2: &Conic, tol: &Tolerances) -> Result<Vec<Bitangent>> {
    let d1 = c1.dual();
    let d2 = c2.dual();
    let pts = intersect_conics(&d1, &d2, tol)?;
    if !is_transversal(&pts) {
        return Err(Error::DegenerateDuals);
    }
    let mut out: Vec<Bitangent> = pts
        .into_iter()
        .map(|(q, _)| {
            let line = ProjLine::from_vec(q.coords().clone()).normalized();
            let t1 = c1.pole(&line).normalized();
            let t2 = c2.pole(&line).normalized();
            Bitangent {
                line,
                tangency: [t1, t2],
            }
        })
        .collect();
    sort_lines(&mut out, |b| &b.line);
    Ok(out)
}
