use num_complex::Complex64;

use super::ball::CertNumber;
use super::poly::CertPoly;
use super::Tolerances;
use crate::error::{Error, Result};

/// All complex roots of `p` with multiplicities.
///
/// Approximations come from Aberth iteration, first in `f64` and then at the
/// precision of `p`. Approximations closer than the cluster tolerance are
/// merged when the Taylor coefficients of `p` at their mean vanish to the
/// zero tolerance; every root is then enclosed in a Weierstrass disc
/// `D(z_i, n |W_i|)`, and the discs of distinct roots must be pairwise
/// disjoint.
pub fn poly_roots(p: &CertPoly, tol: &Tolerances) -> Result<Vec<(CertNumber, usize)>> {
    let p = p.trimmed(tol.zero);
    let n = match p.formal_degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::InvalidInput("root finding needs degree at least 1".into())),
    };
    let prec = p.precision();
    let lead = &p.coeffs()[n];
    if lead.contains_zero() {
        return Err(Error::PrecisionExhausted("leading coefficient not certified nonzero".into()));
    }

    let guesses = aberth_f64(&p, n);
    let z = polish(&p, guesses, prec);

    let scale = |z: &CertNumber| z.mid().norm().max(1.0);
    let mut groups = cluster(&z, tol.cluster(), scale);

    // Weierstrass corrections for every approximation
    let mut w_rad = Vec::with_capacity(n);
    for i in 0..n {
        let mut den = lead.clone();
        for j in 0..n {
            if j != i {
                den = &den * &(&z[i] - &z[j]);
            }
        }
        let r = match p.eval(&z[i]).try_div(&den) {
            Ok(w) => w.abs_upper() * n as f64,
            Err(_) => f64::INFINITY,
        };
        w_rad.push(r);
    }

    let mut discs: Vec<(CertNumber, f64, usize)> = Vec::new();
    let mut split = Vec::new();
    for g in groups.drain(..) {
        if g.len() == 1 {
            discs.push((z[g[0]].midpoint(), w_rad[g[0]], 1));
            continue;
        }
        let k = g.len();
        let mut c = CertNumber::zero(prec);
        for &i in &g {
            c = &c + &z[i];
        }
        let c = c.scale(1.0 / k as f64).midpoint();
        if vanishes_to_order(&p, &c, k, tol.zero) {
            let spread = g.iter().map(|&i| (&z[i] - &c).abs_upper()).fold(0.0, f64::max);
            let mut rad = g
                .iter()
                .map(|&i| (&z[i] - &c).abs_upper() + w_rad[i])
                .fold(0.0, f64::max);
            if !rad.is_finite() {
                rad = (2.0 * spread).max(tol.cluster() * scale(&c));
            }
            discs.push((c, rad, k));
        } else {
            split.extend(g);
        }
    }
    for i in split {
        discs.push((z[i].midpoint(), w_rad[i], 1));
    }

    for a in 0..discs.len() {
        if !discs[a].1.is_finite() {
            return Err(Error::PrecisionExhausted("root disc unbounded".into()));
        }
        for b in (a + 1)..discs.len() {
            let d = (&discs[a].0 - &discs[b].0).abs_lower();
            if d <= discs[a].1 + discs[b].1 {
                return Err(Error::PrecisionExhausted(format!(
                    "root discs overlap at {} bits",
                    prec
                )));
            }
        }
    }

    discs.sort_by(|a, b| order_key(&a.0).partial_cmp(&order_key(&b.0)).unwrap());
    Ok(discs
        .into_iter()
        .map(|(c, r, k)| (c.inflate(r), k))
        .collect())
}

fn order_key(z: &CertNumber) -> (f64, f64) {
    let m = z.mid();
    (m.re, m.im)
}

/// Whether `p(c + x)` has its first `k` Taylor coefficients below `rel_tol`
/// times the matching coefficients of `|p|(|c| + x)`.
fn vanishes_to_order(p: &CertPoly, c: &CertNumber, k: usize, rel_tol: f64) -> bool {
    let shifted = taylor_shift(p, c);
    let mags: Vec<f64> = p.coeffs().iter().map(|a| a.abs_upper()).collect();
    let cabs = c.abs_upper();
    let bounds = taylor_shift_f64(&mags, cabs);
    (0..k).all(|j| shifted[j].mid().norm() <= rel_tol * bounds[j])
}

fn taylor_shift(p: &CertPoly, c: &CertNumber) -> Vec<CertNumber> {
    let mut a: Vec<CertNumber> = p.coeffs().to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &a[j + 1] * c;
            a[j] = &a[j] + &t;
        }
    }
    a
}

fn taylor_shift_f64(p: &[f64], c: f64) -> Vec<f64> {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            a[j] += a[j + 1] * c;
        }
    }
    a
}

fn cluster(z: &[CertNumber], tol: f64, scale: impl Fn(&CertNumber) -> f64) -> Vec<Vec<usize>> {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (z[i].mid() - z[j].mid()).norm();
            if d < tol * scale(&z[i]).max(scale(&z[j])) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_of[r] == usize::MAX {
            root_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_of[r]].push(i);
    }
    groups
}

fn aberth_f64(p: &CertPoly, n: usize) -> Vec<Complex64> {
    let lead = p.coeffs()[n].mid();
    let a: Vec<Complex64> = p.coeffs().iter().map(|c| c.mid() / lead).collect();
    let radius = (0..n)
        .map(|i| a[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn polish(p: &CertPoly, guesses: Vec<Complex64>, prec: usize) -> Vec<CertNumber> {
    let n = guesses.len();
    let mid = CertPoly::new(p.coeffs().iter().map(|c| c.midpoint()).collect());
    let dp = mid.derivative();
    let mut z: Vec<CertNumber> = guesses
        .into_iter()
        .map(|g| CertNumber::from_c64(g, prec))
        .collect();
    let target = 2f64.powi(4 - prec as i32);
    for _ in 0..40 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let v = mid.eval(&z[k]).midpoint();
            let d = dp.eval(&z[k]).midpoint();
            let ratio = match v.approx_div(&d) {
                Some(r) => r,
                None => continue,
            };
            let mut s = CertNumber::zero(prec);
            let mut ok = true;
            for j in 0..n {
                if j != k {
                    match CertNumber::one(prec).approx_div(&(&z[k] - &z[j])) {
                        Some(inv) => s = &s + &inv,
                        None => ok = false,
                    }
                }
            }
            if !ok {
                continue;
            }
            let den = &CertNumber::one(prec) - &(&ratio * &s);
            let step = match ratio.approx_div(&den.midpoint()) {
                Some(st) => st,
                None => continue,
            };
            let size = step.mid().norm();
            if !size.is_finite() {
                continue;
            }
            z[k] = (&z[k] - &step).midpoint();
            moved = moved.max(size / z[k].mid().norm().max(1.0));
        }
        if moved < target {
            break;
        }
    }
    z
}
