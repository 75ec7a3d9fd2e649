//! Small fixed-size vector helpers shared by the solvers.

use crate::ratpoly::{rational_to_f64, Coeff, ComplexValue, Rational};

pub type V3<C> = [C; 3];

pub fn dot<C: Coeff>(a: &[C], b: &[C]) -> C {
    a.iter()
        .zip(b)
        .fold(C::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn cross<C: Coeff>(a: &[C], b: &[C]) -> V3<C> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn det3<C: Coeff>(a: &[C], b: &[C], c: &[C]) -> C {
    dot(a, &cross(b, c))
}

pub fn to_complex(a: &[Rational]) -> Vec<ComplexValue> {
    a.iter().map(|x| ComplexValue::new(rational_to_f64(x), 0.0)).collect()
}

pub fn norm_f64(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn cross_f64(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Index of the coordinate axis least aligned with `n` (ties go to the
/// lowest index).
pub fn least_aligned_axis(n: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..n.len() {
        if n[i].abs() < n[best].abs() {
            best = i;
        }
    }
    best
}

pub fn axis<C: Coeff>(k: usize) -> V3<C> {
    let mut e = [C::zero(), C::zero(), C::zero()];
    e[k] = C::one();
    e
}

/// Real part of a complex vector when its imaginary parts are negligible.
pub fn real_part(a: &[ComplexValue], tol: f64) -> Option<Vec<f64>> {
    let s = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    if a.iter().all(|z| z.im.abs() <= tol * s) {
        Some(a.iter().map(|z| z.re).collect())
    } else {
        None
    }
}
