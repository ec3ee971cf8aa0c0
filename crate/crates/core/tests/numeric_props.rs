mod common;

use common::{encloses, midpoint_q, Q};
use conic_zariski::numeric::{poly_roots, poly_sqrt, CertNumber, CertPoly, Tolerances};
use num_complex::Complex64;
use proptest::prelude::*;

fn ball(re: f64, im: f64, rad: f64, prec: usize) -> CertNumber {
    CertNumber::from_c64(Complex64::new(re, im), prec).inflate(rad)
}

/// An exact point of the disc of `x`: its midpoint moved by `frac` of the
/// radius along the real axis.
fn inside(x: &CertNumber, frac: f64) -> Q {
    let mut q = midpoint_q(x);
    let r = num_rational::BigRational::from_float(x.radius() * frac).unwrap();
    q.re += r;
    q
}

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3f64..1e3, -1.0f64..1.0, (-1e6f64..1e6).prop_map(|x| x.round())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arithmetic_encloses_exact_values(
        a in (coord(), coord(), 0.0f64..1e-6),
        b in (coord(), coord(), 0.0f64..1e-6),
        fa in -1.0f64..1.0,
        fb in -1.0f64..1.0,
        prec in prop_oneof![Just(53usize), Just(128), Just(300)],
    ) {
        let x = ball(a.0, a.1, a.2, prec);
        let y = ball(b.0, b.1, b.2, prec);
        let (qx, qy) = (inside(&x, fa), inside(&y, fb));
        prop_assert!(encloses(&(&x + &y), &qx.add(&qy)));
        prop_assert!(encloses(&(&x - &y), &qx.sub(&qy)));
        prop_assert!(encloses(&(&x * &y), &qx.mul(&qy)));
        prop_assert!(encloses(&x.sqr(), &qx.mul(&qx)));
        prop_assert!(encloses(&x.pow(3), &qx.mul(&qx).mul(&qx)));
        if let Ok(q) = x.try_div(&y) {
            prop_assert!(encloses(&q, &qx.div(&qy)));
        }
    }

    #[test]
    fn square_root_squares_back(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let x = CertNumber::from_c64(Complex64::new(re, im), 128);
        let s = x.sqrt();
        // the exact square of the exact midpoint of s lies within the
        // square of the disc
        let qs = midpoint_q(&s);
        prop_assert!(encloses(&s.sqr(), &qs.mul(&qs)));
        prop_assert!(encloses(&s.sqr(), &Q::new(re, im)));
        prop_assert!(s.re_f64() >= 0.0);
    }

    #[test]
    fn poly_sqrt_recovers_normalized_root(
        coeffs in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..6),
    ) {
        let c: Vec<Complex64> = coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let lead = *c.last().unwrap();
        prop_assume!(lead.norm() > 1e-2);
        let q = CertPoly::from_c64(&c, 128);
        let s = poly_sqrt(&q.mul(&q), 1e-12).unwrap();
        let sign = if lead.re > 0.0 || (lead.re == 0.0 && lead.im > 0.0) { 1.0 } else { -1.0 };
        prop_assert_eq!(s.coeffs().len(), c.len());
        for (a, b) in s.coeffs().iter().zip(&c) {
            prop_assert!((a.mid() - b * sign).norm() < 1e-20 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn real_polynomial_roots_are_closed_under_conjugation(
        coeffs in proptest::collection::vec(-5.0f64..5.0, 3..8),
    ) {
        prop_assume!(coeffs.last().unwrap().abs() > 1e-2);
        let p = CertPoly::from_f64(&coeffs, 128);
        let roots = poly_roots(&p, &Tolerances::default()).unwrap();
        let total: usize = roots.iter().map(|r| r.1).sum();
        prop_assert_eq!(total, coeffs.len() - 1);
        for (r, m) in &roots {
            let partner = roots.iter().find(|(s, k)| {
                k == m && (s.mid() - r.mid().conj()).norm() <= s.radius() + r.radius() + 1e-9
            });
            prop_assert!(partner.is_some(), "no conjugate for {:?}", r.mid());
        }
    }
}
