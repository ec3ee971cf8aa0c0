use std::sync::Arc;

use super::arrangement::{Component, NodalArrangement};
use super::gf2::Gf2Vec;
use super::gluing::GluingData;
use crate::error::{Error, Result};
use crate::geometry::{
    choose_base_point_nth, line_param_avoiding, linalg, parametrize, restrict_poly, ConicParam, CurveParam, HomPoly,
    LineParam, ProjLine, ProjPoint,
};
use crate::numeric::{poly_sqrt, CertNumber, CertPoly, Config, Tolerances};

/// A reduced union of lines used as the branch curve of a double cover of
/// the plane.
///
/// A double cover exists only for even degree. Odd degrees are still
/// accepted here so that [`induced_gluing`] can report the component the
/// divisor meets with odd multiplicity.
#[derive(Clone, Debug)]
pub struct BranchDivisor {
    lines: Vec<ProjLine>,
    poly: HomPoly,
}

impl BranchDivisor {
    pub fn new(lines: Vec<ProjLine>) -> Self {
        let prec = lines.iter().map(|l| l.precision()).max().unwrap_or(64);
        let poly = HomPoly::product_of_lines(&lines, prec);
        BranchDivisor { lines, poly }
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn defining_poly(&self) -> &HomPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.lines.len()
    }

    pub fn is_even(&self) -> bool {
        self.lines.len() % 2 == 0
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        BranchDivisor::new(self.lines.iter().map(|l| l.with_precision(prec)).collect())
    }

    /// Union with the lines of `other`.
    pub fn plus(&self, other: &BranchDivisor) -> Self {
        BranchDivisor::new(self.lines.iter().chain(&other.lines).cloned().collect())
    }
}

/// Choices that must not change the class of [`induced_gluing`]: they exist
/// so the invariance can be exercised.
#[derive(Clone, Debug, Default)]
pub struct InducedOptions {
    /// Pass over this many acceptable parametrization base points.
    pub base_offset: usize,
    /// Components whose square root is replaced by its negative.
    pub negate: Vec<usize>,
}

/// Parametrization of one component.
enum Param {
    Conic(ConicParam),
    Line(LineParam),
}

impl Param {
    fn get(&self) -> &dyn CurveParam {
        match self {
            Param::Conic(p) => p,
            Param::Line(p) => p,
        }
    }
}

const BASE_MARGIN: f64 = 1e-3;

fn component_param(c: &Component, f: &HomPoly, skip: usize, tol: &Tolerances) -> Result<Param> {
    Ok(match c {
        Component::Conic(q) => {
            let base = choose_base_point_nth(q, &[f], BASE_MARGIN, skip, tol)?;
            Param::Conic(parametrize(q, &base, tol)?)
        }
        Component::Line(l) => Param::Line(line_param_avoiding(l, &[f], BASE_MARGIN, skip)?),
    })
}

/// `s(t : w) / lambda^(D/2)` where `(t : w)` maps to `lambda * q`. Its square
/// is `F(q)` for the normalized node `q`.
fn node_value(param: &dyn CurveParam, s: &CertPoly, q: &ProjPoint, half_degree: u32) -> Result<CertNumber> {
    let prec = s.precision().max(q.precision());
    let one = CertNumber::one(prec);
    let (t, w) = match param.param_of(q) {
        None => (one, CertNumber::zero(prec)),
        Some(t) if t.mid_abs_upper() > 1.0 => (one, t.try_inv()?),
        Some(t) => (t, one),
    };
    let phi = param.point_at_projective(&t, &w);
    let qn = q.normalized();
    let k = linalg::dominant_index(qn.coords());
    let lambda = phi.coords()[k].try_div(&qn.coords()[k])?;
    let sv = s.eval_projective(&t, &w, s.formal_degree().unwrap_or(0));
    sv.try_div(&lambda.pow(half_degree))
}

fn attempt(
    b: &BranchDivisor,
    a: &NodalArrangement,
    prec: usize,
    opts: &InducedOptions,
    tol: &Tolerances,
) -> Result<Gf2Vec> {
    let b = b.with_precision(prec);
    let f = b.defining_poly();
    let d = b.degree();
    let mut params = Vec::new();
    let mut roots = Vec::new();
    for (i, comp) in a.components().iter().enumerate() {
        let comp = comp.with_precision(prec);
        let param = component_param(&comp, f, opts.base_offset, tol)?;
        let r = restrict_poly(f, param.get());
        let s = poly_sqrt(&r, tol.zero).map_err(|e| match e {
            Error::NotASquare { .. } => Error::OddMultiplicity { component: i },
            e => e,
        })?;
        roots.push(if opts.negate.contains(&i) { s.neg() } else { s });
        params.push(param);
    }
    if d % 2 == 1 {
        return Err(Error::OddMultiplicity { component: 0 });
    }
    let half = (d / 2) as u32;
    let mut signs = Gf2Vec::zeros(a.node_count());
    for (k, node) in a.nodes().iter().enumerate() {
        let q = node.point.with_precision(prec);
        if f.relative_value(&q) < tol.point() {
            return Err(Error::SupportHitsNode { node: k });
        }
        let [i, j] = node.components;
        let si = node_value(params[i].get(), &roots[i], &q, half)?;
        let sj = node_value(params[j].get(), &roots[j], &q, half)?;
        let ratio = si.try_div(&sj).map_err(|_| Error::SignUncertified { node: k })?;
        let one = CertNumber::one(prec);
        if (&ratio - &one).abs_upper() < 0.25 {
            signs.set(k, false);
        } else if (&ratio + &one).abs_upper() < 0.25 {
            signs.set(k, true);
        } else {
            return Err(Error::SignUncertified { node: k });
        }
    }
    Ok(signs)
}

/// Gluing data of the unramified double cover of `a` cut out by the double
/// cover of the plane branched along `b`.
///
/// On every component the restriction of the branch polynomial is a square
/// `s_i^2`; the sign at a node on `Ci` and `Cj` is that of `s_i / s_j`
/// there, which is `+1` or `-1`.
pub fn induced_gluing(b: &BranchDivisor, a: &Arc<NodalArrangement>, cfg: &Config) -> Result<GluingData> {
    induced_gluing_with(b, a, cfg, &InducedOptions::default())
}

pub fn induced_gluing_with(
    b: &BranchDivisor,
    a: &Arc<NodalArrangement>,
    cfg: &Config,
    opts: &InducedOptions,
) -> Result<GluingData> {
    induced_gluing_traced(b, a, cfg, opts).map(|r| r.0)
}

/// As [`induced_gluing_with`], also returning the precision at which every
/// sign certified.
pub fn induced_gluing_traced(
    b: &BranchDivisor,
    a: &Arc<NodalArrangement>,
    cfg: &Config,
    opts: &InducedOptions,
) -> Result<(GluingData, usize)> {
    let mut last = None;
    for prec in cfg.precisions() {
        match attempt(b, a, prec, opts, &cfg.tol) {
            Ok(signs) => return Ok((GluingData::new(a.clone(), signs)?, prec)),
            Err(e) if e.is_precision_related() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::PrecisionExhausted("empty precision schedule".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::gluing::tests::two_conics;
    use crate::covers::{canonical_form, equivalent};
    use crate::geometry::{bitangents, Conic};

    fn fixture() -> (Arc<NodalArrangement>, Vec<ProjLine>) {
        let c1 = Conic::from_f64([1.0, 0.0, 1.0, 0.0, 0.0, -1.0], 128);
        let c2 = Conic::from_f64([0.25, 0.0, 4.0, 0.0, 0.0, -1.0], 128);
        let ts = bitangents(&c1, &c2, &Tolerances::default()).unwrap();
        (two_conics(), ts.into_iter().map(|b| b.line).collect())
    }

    #[test]
    fn two_bitangents_give_two_signs_of_each_kind() {
        let (a, ts) = fixture();
        let cfg = Config::default();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let b = BranchDivisor::new(vec![ts[i].clone(), ts[j].clone()]);
                let g = induced_gluing(&b, &a, &cfg).unwrap();
                assert_eq!(g.plus_count(), 2, "T{}T{}: {g}", i + 1, j + 1);
                let c = canonical_form(&g).canonical.to_text();
                assert!(c.starts_with('+') && c.matches('-').count() == 2);
            }
        }
    }

    #[test]
    fn a_single_line_has_odd_multiplicity() {
        let (a, _) = fixture();
        let b = BranchDivisor::new(vec![ProjLine::from_f64([1.0, 0.3, -0.2], 128)]);
        assert!(!b.is_even());
        assert_eq!(
            induced_gluing(&b, &a, &Config::default()).unwrap_err(),
            Error::OddMultiplicity { component: 0 }
        );
    }

    #[test]
    fn a_doubled_line_through_a_node_hits_the_node() {
        let (a, _) = fixture();
        let q = &a.nodes()[1].point;
        let l = q.join(&ProjPoint::from_f64([0.1, 0.2, 1.0], 128)).normalized();
        let b = BranchDivisor::new(vec![l.clone(), l]);
        assert_eq!(
            induced_gluing(&b, &a, &Config::default()).unwrap_err(),
            Error::SupportHitsNode { node: 1 }
        );
    }

    #[test]
    fn class_is_independent_of_choices() {
        let (a, ts) = fixture();
        let cfg = Config::default();
        let b = BranchDivisor::new(vec![ts[0].clone(), ts[2].clone()]);
        let g = induced_gluing(&b, &a, &cfg).unwrap();
        for opts in [
            InducedOptions { base_offset: 1, negate: vec![] },
            InducedOptions { base_offset: 3, negate: vec![0] },
            InducedOptions { base_offset: 0, negate: vec![1] },
        ] {
            let h = induced_gluing_with(&b, &a, &cfg, &opts).unwrap();
            assert!(equivalent(&g, &h).unwrap(), "{opts:?}: {g} vs {h}");
        }
        let perm = [3, 2, 1, 0];
        let rev = Arc::new(a.with_node_order(&perm).unwrap());
        let h = induced_gluing(&b, &rev, &cfg).unwrap();
        let mut back = Gf2Vec::zeros(4);
        for (k, &old) in perm.iter().enumerate() {
            back.set(old, h.signs().get(k));
        }
        assert!(equivalent(&g, &GluingData::new(a.clone(), back).unwrap()).unwrap());
    }
}
