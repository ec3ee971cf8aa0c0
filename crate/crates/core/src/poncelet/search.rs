use std::f64::consts::TAU;

use super::{trace, transverse_step, origin_at, PonceletPair};
use crate::error::{Error, Result};
use crate::geometry::{other_intersection, tangent_lines_from_point, Conic, ProjLine, ProjPoint};
use crate::numeric::{CertNumber, Config, Tolerances};

/// A one-parameter family of real conic pairs `(C1(s), C2)` for the closure
/// search.
pub trait PairFamily {
    fn conics(&self, s: &CertNumber) -> (Conic, Conic);

    /// A real point of `C1(s)` from which the defect is measured.
    fn reference_origin(&self, s: &CertNumber) -> ProjPoint;

    /// Affine center around which angles are measured (inside `C2`).
    fn center(&self) -> (f64, f64);

    /// Smallest parameter for which the family is in the intended regime.
    fn lower_limit(&self) -> f64;

    fn describe(&self) -> String;
}

/// `C2` the unit circle and `C1(s): x^2 + k y^2 - 2h xz + (h^2 - s^2) z^2`, an
/// ellipse with semi-axes `s` and `s / sqrt(k)` centered at `(h, 0)`.
///
/// For `s` above [`PairFamily::lower_limit`] the ellipse contains the
/// circle, so the real Poncelet map is conjugate to a rotation and the
/// angular closure defect increases with `s`. The two conics then meet in
/// four non-real points and all four bitangents are non-real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NestedEllipseFamily {
    pub k: f64,
    pub h: f64,
}

impl Default for NestedEllipseFamily {
    fn default() -> Self {
        NestedEllipseFamily { k: 1.125, h: 0.0625 }
    }
}

impl PairFamily for NestedEllipseFamily {
    fn conics(&self, s: &CertNumber) -> (Conic, Conic) {
        let p = s.precision();
        let one = CertNumber::one(p);
        let zero = CertNumber::zero(p);
        let h = CertNumber::from_f64(self.h, p);
        let f = &h.sqr() - &s.sqr();
        let c1 = Conic::from_coeffs_unchecked([
            one.clone(),
            zero.clone(),
            CertNumber::from_f64(self.k, p),
            h.scale(-2.0),
            zero.clone(),
            f,
        ]);
        let c2 = Conic::from_coeffs_unchecked([one.clone(), zero.clone(), one.clone(), zero.clone(), zero, -&one]);
        (c1, c2)
    }

    fn reference_origin(&self, s: &CertNumber) -> ProjPoint {
        let p = s.precision();
        let x = s + &CertNumber::from_f64(self.h, p);
        ProjPoint::from_vec([x, CertNumber::zero(p), CertNumber::one(p)])
    }

    fn center(&self) -> (f64, f64) {
        (0.0, 0.0)
    }

    fn lower_limit(&self) -> f64 {
        // largest value of (x - h)^2 + k y^2 on the unit circle
        let (k, h) = (self.k, self.h);
        let f = |c: f64| (1.0 - k) * c * c - 2.0 * h * c + h * h + k;
        let mut best = f(-1.0).max(f(1.0));
        if (k - 1.0).abs() > 0.0 {
            let c = -h / (k - 1.0);
            if c.abs() <= 1.0 {
                best = best.max(f(c));
            }
        }
        best.sqrt()
    }

    fn describe(&self) -> String {
        format!(
            "C2: x^2 + y^2 - z^2; C1(s): x^2 + {} y^2 - {} xz + ({} - s^2) z^2",
            self.k,
            2.0 * self.h,
            self.h * self.h
        )
    }
}

/// Outcome of [`find_periodic_pair`].
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub pair: PonceletPair,
    pub parameter: CertNumber,
    pub defect: f64,
    pub iterations: usize,
    /// Largest closure defect seen over the validation origins.
    pub validation_defect: f64,
}

fn affine(p: &ProjPoint, center: (f64, f64)) -> (CertNumber, CertNumber) {
    let c = p.coords();
    let prec = p.precision();
    let x = c[0].try_div(&c[2]).unwrap_or_else(|_| c[0].clone());
    let y = c[1].try_div(&c[2]).unwrap_or_else(|_| c[1].clone());
    (
        &x - &CertNumber::from_f64(center.0, prec),
        &y - &CertNumber::from_f64(center.1, prec),
    )
}

fn angle_f64(a: &(CertNumber, CertNumber), b: &(CertNumber, CertNumber)) -> f64 {
    let (ax, ay) = (a.0.re_f64(), a.1.re_f64());
    let (bx, by) = (b.0.re_f64(), b.1.re_f64());
    (ax * by - ay * bx).atan2(ax * bx + ay * by)
}

/// `atan(r)` for `|r| < 1/4` by its alternating series with a tail bound.
fn atan_small(r: &CertNumber) -> CertNumber {
    let prec = r.precision();
    let r2 = r.sqr();
    let mut term = r.clone();
    let mut acc = CertNumber::zero(prec);
    let mut k = 0i64;
    let eps = 2f64.powi(-(prec as i32) - 4);
    loop {
        let t = term.try_div(&CertNumber::from_i64(2 * k + 1, prec)).unwrap_or_else(|_| term.clone());
        acc = if k % 2 == 0 { &acc + &t } else { &acc - &t };
        term = &term * &r2;
        k += 1;
        if term.abs_upper() < eps || k > 4 * prec as i64 {
            break;
        }
    }
    // alternating tail is bounded by the first omitted term
    acc.inflate(term.abs_upper())
}

/// Signed angular defect, around the family's center, of the `n`th vertex of
/// the transverse from the reference origin, minus one full turn.
///
/// Far from closure the value comes from an `f64` sum of vertex angles; near
/// closure it is `atan` of the cross/dot ratio of the first and last vertex
/// in ball arithmetic at the working precision.
pub fn closure_defect(family: &dyn PairFamily, s: &CertNumber, n: usize, tol: &Tolerances) -> Result<CertNumber> {
    let (c1, c2) = family.conics(s);
    let pair = PonceletPair::bare(c1, c2, n, *tol);
    let center = family.center();
    let p0 = family.reference_origin(s).normalized();
    let a0 = affine(&p0, center);

    // choose the counterclockwise tangent
    let ls = tangent_lines_from_point(&p0, &pair.c2, tol);
    let mut start: Option<ProjLine> = None;
    for l in &ls {
        let q = other_intersection(l, &pair.c1, &p0, tol)?;
        if angle_f64(&a0, &affine(&q, center)) > 0.0 {
            start = Some(l.clone());
        }
    }
    let mut l = start.ok_or_else(|| Error::ValidationFailed("no counterclockwise tangent from the reference origin".into()))?;
    let mut p = p0.clone();
    let mut total = 0.0;
    let mut prev = a0.clone();
    for _ in 0..n {
        let (q, m) = transverse_step(&pair, &p, &l)?;
        let aq = affine(&q, center);
        total += angle_f64(&prev, &aq);
        prev = aq;
        p = q;
        l = m;
    }
    let theta = total - TAU;
    let prec = s.precision();
    if theta.abs() > 0.05 {
        return Ok(CertNumber::from_f64(theta, prec));
    }
    let (ax, ay) = &a0;
    let (bx, by) = &prev;
    let cross = &(ax * by) - &(ay * bx);
    let dot = &(ax * bx) + &(ay * by);
    let r = cross
        .try_div(&dot)
        .map_err(|_| Error::ValidationFailed("degenerate angle at closure".into()))?;
    Ok(atan_small(&r))
}

/// Pick a sign-change bracket by scanning the family upward from its lower
/// limit.
pub fn default_bracket(family: &dyn PairFamily, n: usize, tol: &Tolerances) -> Result<(f64, f64)> {
    let lo = family.lower_limit() + 1e-3;
    let mut prev: Option<(f64, f64)> = None;
    let mut s = lo;
    while s < 20.0 {
        let d = closure_defect(family, &CertNumber::from_f64(s, 64), n, tol)?.re_f64();
        if let Some((ps, pd)) = prev {
            if pd < 0.0 && d >= 0.0 {
                return Ok((ps, s));
            }
        }
        prev = Some((s, d));
        s += 0.01 * s;
    }
    Err(Error::NoSignChange { lo, hi: 20.0 })
}

/// Bisect the family parameter until the closure defect of period `n` is
/// below `tol`, then validate the pair: simple nodes, four distinct
/// bitangents, and closure with period `n` from three origins.
pub fn find_periodic_pair(
    n: usize,
    family: &dyn PairFamily,
    bracket: (f64, f64),
    tol: f64,
    cfg: &Config,
) -> Result<SearchResult> {
    assert!(n >= 3, "a Poncelet polygon has at least three sides");
    let prec = crate::numeric::float::clamp_precision(cfg.precision);
    let t = &cfg.tol;
    let mut lo = CertNumber::from_f64(bracket.0, prec);
    let mut hi = CertNumber::from_f64(bracket.1, prec);
    let d_lo = closure_defect(family, &lo, n, t)?;
    let d_hi = closure_defect(family, &hi, n, t)?;
    let (slo, shi) = (d_lo.re_f64(), d_hi.re_f64());
    if slo.signum() == shi.signum() {
        return Err(Error::NoSignChange { lo: slo, hi: shi });
    }
    let increasing = slo < 0.0;
    let half = CertNumber::from_f64(0.5, prec);
    let mut iterations = 0;
    let (s, defect) = loop {
        iterations += 1;
        let mid = (&(&lo + &hi) * &half).midpoint();
        let d = closure_defect(family, &mid, n, t)?;
        if d.abs_upper() < tol {
            break (mid, d);
        }
        let width = (&hi - &lo).abs_upper();
        if width < 2f64.powi(8 - prec as i32) || iterations > 4 * prec {
            return Err(Error::PrecisionExhausted(format!(
                "bisection stalled at defect {:.3e}",
                d.re_f64()
            )));
        }
        let below = d.re_f64() < 0.0;
        if below == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    };

    let (c1, c2) = family.conics(&s);
    let pair = PonceletPair::new(c1, c2, n, *t)
        .map_err(|e| Error::ValidationFailed(format!("pair at the found parameter: {e}")))?;
    let mut worst = 0.0f64;
    for origin_t in [0.37, -1.3, 2.6] {
        let origin = origin_at(&pair, origin_t)?;
        let tr = trace(&pair, &origin, 2 * n + 2)
            .map_err(|e| Error::ValidationFailed(format!("closure from origin t = {origin_t}: {e}")))?;
        if tr.period != Some(n) || tr.closure_defect >= t.closure {
            return Err(Error::ValidationFailed(format!(
                "origin t = {origin_t}: period {:?}, defect {:.3e}",
                tr.period, tr.closure_defect
            )));
        }
        worst = worst.max(tr.closure_defect);
    }
    Ok(SearchResult {
        pair,
        parameter: s,
        defect: defect.re_f64(),
        iterations,
        validation_defect: worst,
    })
}

impl PonceletPair {
    /// A pair without nodes or bitangents, enough for stepping.
    pub(crate) fn bare(c1: Conic, c2: Conic, period: usize, tol: Tolerances) -> Self {
        PonceletPair {
            c1,
            c2,
            period,
            nodes: Vec::new(),
            bitangents: Vec::new(),
            pairing: None,
            tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atan_series_matches_f64() {
        for r in [-0.2, -0.01, 0.0, 1e-9, 0.07, 0.24] {
            let a = atan_small(&CertNumber::from_f64(r, 128));
            assert!((a.re_f64() - f64::atan(r)).abs() < 1e-16);
            assert!(a.radius() < 1e-30);
        }
    }

    #[test]
    fn lower_limit_bounds_the_circle() {
        let fam = NestedEllipseFamily::default();
        let s = fam.lower_limit();
        for k in 0..360 {
            let a = (k as f64).to_radians();
            let (x, y) = (a.cos(), a.sin());
            assert!((x - fam.h).powi(2) + fam.k * y * y <= s * s + 1e-12);
        }
    }

    #[test]
    fn bracket_without_sign_change_is_rejected() {
        let cfg = Config::default();
        let fam = NestedEllipseFamily::default();
        let r = find_periodic_pair(4, &fam, (10.0, 12.0), 1e-13, &cfg);
        assert!(matches!(r, Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn defect_increases_through_the_root() {
        let fam = NestedEllipseFamily::default();
        let tol = Tolerances::default();
        let (lo, hi) = default_bracket(&fam, 3, &tol).unwrap();
        let dl = closure_defect(&fam, &CertNumber::from_f64(lo, 64), 3, &tol).unwrap();
        let dh = closure_defect(&fam, &CertNumber::from_f64(hi, 64), 3, &tol).unwrap();
        assert!(dl.re_f64() < 0.0 && dh.re_f64() >= 0.0);
    }
}
