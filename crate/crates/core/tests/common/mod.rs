#![allow(dead_code)]

use std::sync::OnceLock;

use conic_zariski::numeric::{CertNumber, Config};
use conic_zariski::poncelet::{default_bracket, find_periodic_pair, NestedEllipseFamily, PonceletPair};
use conic_zariski::splitting::MainTheorem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn search(n: usize) -> PonceletPair {
    let cfg = Config::default();
    let fam = NestedEllipseFamily::default();
    let br = default_bracket(&fam, n, &cfg.tol).expect("bracket");
    find_periodic_pair(n, &fam, br, cfg.tol.search, &cfg).expect("search").pair
}

/// Pairs of period 4, 5 and 6 found in the default family, computed once.
pub fn pair(n: usize) -> &'static PonceletPair {
    static P4: OnceLock<PonceletPair> = OnceLock::new();
    static P5: OnceLock<PonceletPair> = OnceLock::new();
    static P6: OnceLock<PonceletPair> = OnceLock::new();
    let cell = match n {
        4 => &P4,
        5 => &P5,
        6 => &P6,
        _ => panic!("no fixture for period {n}"),
    };
    cell.get_or_init(|| search(n))
}

pub fn theorem(n: usize) -> &'static MainTheorem {
    static T4: OnceLock<MainTheorem> = OnceLock::new();
    static T6: OnceLock<MainTheorem> = OnceLock::new();
    let cell = match n {
        4 => &T4,
        6 => &T6,
        _ => panic!("no theorem fixture for period {n}"),
    };
    cell.get_or_init(|| MainTheorem::build(pair(n), &Config::default()).expect("construction"))
}

/// Exact complex rational.
#[derive(Clone, Debug, PartialEq)]
pub struct Q {
    pub re: BigRational,
    pub im: BigRational,
}

impl Q {
    pub fn real(x: f64) -> Q {
        Q {
            re: BigRational::from_float(x).expect("finite"),
            im: BigRational::zero(),
        }
    }

    pub fn new(re: f64, im: f64) -> Q {
        Q {
            re: BigRational::from_float(re).expect("finite"),
            im: BigRational::from_float(im).expect("finite"),
        }
    }

    pub fn add(&self, o: &Q) -> Q {
        Q {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &Q) -> Q {
        Q {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &Q) -> Q {
        Q {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn div(&self, o: &Q) -> Q {
        let den = &o.re * &o.re + &o.im * &o.im;
        Q {
            re: (&self.re * &o.re + &self.im * &o.im) / &den,
            im: (&self.im * &o.re - &self.re * &o.im) / &den,
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn hex_to_q(s: &str) -> BigRational {
    if s == "0" {
        return BigRational::zero();
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let body = body.strip_prefix("0x").expect("hex literal");
    let (m, e) = match body.split_once('p') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap()),
        None => (body, 0),
    };
    let m = BigInt::parse_bytes(m.as_bytes(), 16).unwrap();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut v = BigRational::from_integer(m);
    let scale = num_traits::pow(two, e.unsigned_abs() as usize);
    if e >= 0 {
        v *= scale;
    } else {
        v /= scale;
    }
    if neg {
        -v
    } else {
        v
    }
}

/// The exact midpoint of a ball.
pub fn midpoint_q(x: &CertNumber) -> Q {
    let lit = x.to_literal();
    let (a, b) = match lit.split_once(',') {
        Some((a, b)) => (a.to_string(), b.to_string()),
        None => (lit.clone(), "0".to_string()),
    };
    Q {
        re: hex_to_q(&a),
        im: hex_to_q(&b),
    }
}

/// Whether the exact value lies in the closed disc.
pub fn encloses(x: &CertNumber, v: &Q) -> bool {
    let d = midpoint_q(x).sub(v).norm_sqr();
    let r = BigRational::from_float(x.radius()).unwrap();
    d <= &r * &r
}

pub fn sign_of(v: &BigRational) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

pub fn one() -> BigRational {
    BigRational::one()
}
