//! 3-vectors and 3x3 matrices of balls.

use num_complex::Complex64;

use crate::numeric::CertNumber;

pub type Vec3 = [CertNumber; 3];
pub type Mat3 = [[CertNumber; 3]; 3];

pub fn zero3(prec: usize) -> Vec3 {
    std::array::from_fn(|_| CertNumber::zero(prec))
}

pub fn vec3_f64(v: [f64; 3], prec: usize) -> Vec3 {
    v.map(|x| CertNumber::from_f64(x, prec))
}

pub fn vec3_c64(v: [Complex64; 3], prec: usize) -> Vec3 {
    v.map(|x| CertNumber::from_c64(x, prec))
}

pub fn basis(i: usize, prec: usize) -> Vec3 {
    std::array::from_fn(|j| {
        if i == j {
            CertNumber::one(prec)
        } else {
            CertNumber::zero(prec)
        }
    })
}

pub fn precision3(v: &Vec3) -> usize {
    v.iter().map(|c| c.precision()).max().unwrap_or(0)
}

pub fn dot(a: &Vec3, b: &Vec3) -> CertNumber {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn scale3(a: &Vec3, k: &CertNumber) -> Vec3 {
    std::array::from_fn(|i| &a[i] * k)
}

pub fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    std::array::from_fn(|i| &a[i] + &b[i])
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    std::array::from_fn(|i| &a[i] - &b[i])
}

pub fn conj3(a: &Vec3) -> Vec3 {
    std::array::from_fn(|i| a[i].conj())
}

pub fn mid3(a: &Vec3) -> [Complex64; 3] {
    std::array::from_fn(|i| a[i].mid())
}

/// Upper bound on the max-norm.
pub fn norm_upper(a: &Vec3) -> f64 {
    a.iter().map(|c| c.abs_upper()).fold(0.0, f64::max)
}

/// Index of the coordinate of largest modulus; the first index within a
/// relative `1e-6` of the maximum wins ties.
pub fn dominant_index(a: &Vec3) -> usize {
    let m: Vec<f64> = a.iter().map(|c| c.mid().norm()).collect();
    let max = m.iter().cloned().fold(0.0, f64::max);
    (0..3).find(|&i| m[i] >= max * (1.0 - 1e-6)).unwrap_or(0)
}

/// Scale so the dominant coordinate becomes exactly 1.
pub fn normalize3(a: &Vec3) -> Vec3 {
    let i = dominant_index(a);
    let d = a[i].clone();
    let mut out: Vec3 = std::array::from_fn(|j| match a[j].try_div(&d) {
        Ok(q) => q,
        Err(_) => a[j].clone(),
    });
    out[i] = CertNumber::one(precision3(a));
    out
}

/// Largest 2x2 minor of two normalized vectors, an upper bound: zero iff the
/// vectors are projectively equal.
pub fn proj_distance(a: &Vec3, b: &Vec3) -> f64 {
    let a = normalize3(a);
    let b = normalize3(b);
    let c = cross(&a, &b);
    norm_upper(&c)
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    std::array::from_fn(|i| dot(&m[i], v))
}

pub fn transpose(m: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let bt = transpose(b);
    std::array::from_fn(|i| std::array::from_fn(|j| dot(&a[i], &bt[j])))
}

pub fn det3(m: &Mat3) -> CertNumber {
    dot(&m[0], &cross(&m[1], &m[2]))
}

/// Adjugate: `adj(M) M = det(M) I`.
pub fn adjugate(m: &Mat3) -> Mat3 {
    // columns of adj(M)^T are cross products of rows
    let c0 = cross(&m[1], &m[2]);
    let c1 = cross(&m[2], &m[0]);
    let c2 = cross(&m[0], &m[1]);
    transpose(&[c0, c1, c2])
}

pub fn mat_f64(m: [[f64; 3]; 3], prec: usize) -> Mat3 {
    m.map(|r| vec3_f64(r, prec))
}

pub fn mat_norm_upper(m: &Mat3) -> f64 {
    m.iter().map(norm_upper).fold(0.0, f64::max)
}
