use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratpoly::{rational_to_f64, ComplexValue, Rational};

const MAX_ITER: usize = 500;
const RESIDUAL_TOL: f64 = 1e-12;
const CLUSTER_TOL: f64 = 1e-8;
const CONJ_TOL: f64 = 1e-9;

/// Univariate polynomial with complex coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<ComplexValue>,
}

impl UniPoly {
    /// Drops trailing zero coefficients; fails on the zero polynomial.
    pub fn new(mut coeffs: Vec<ComplexValue>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(UniPoly { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| ComplexValue::new(c, 0.0)).collect())
    }

    pub fn from_rational(coeffs: &[Rational]) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|c| ComplexValue::new(rational_to_f64(c), 0.0))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: ComplexValue) -> ComplexValue {
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexValue::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// Rounding noise of Horner evaluation at `z`.
    fn noise_floor(&self, z: ComplexValue) -> f64 {
        let r = z.norm();
        let mag = self
            .coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm());
        4.0 * f64::EPSILON * mag * self.coeffs.len() as f64
    }

    fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Value and first derivative at `z`.
    fn eval_with_derivative(&self, z: ComplexValue) -> (ComplexValue, ComplexValue) {
        let mut p = ComplexValue::new(0.0, 0.0);
        let mut dp = ComplexValue::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Taylor coefficients of p(c + u), lowest `count` of them.
    fn taylor_at(&self, c: ComplexValue, count: usize) -> Vec<ComplexValue> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(count);
        // repeated synthetic division by (z - c)
        for k in 0..count.min(n) {
            for i in (k..n - 1).rev() {
                let hi = work[i + 1];
                work[i] += hi * c;
            }
            out.push(work[k]);
        }
        out
    }
}

/// A root with its multiplicity. `exact` holds the value when the root was
/// verified to be rational.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: ComplexValue,
    pub multiplicity: u32,
    pub exact: Option<Rational>,
}

impl Root {
    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }
}

fn residual_bound(p: &UniPoly, z: ComplexValue) -> f64 {
    RESIDUAL_TOL * p.norm1() * z.norm().max(1.0).powi(p.degree() as i32)
}

/// All complex roots of `p` with multiplicities.
///
/// Simultaneous Aberth iteration; roots closer than 1e-8 (relative), or
/// loose clusters at which the low Taylor coefficients all vanish, are
/// merged. For real input, conjugate pairs are made exactly symmetric and
/// near-real roots are snapped to the real axis.
pub fn roots_all(p: &UniPoly) -> Result<Vec<Root>> {
    if p.degree() == 0 {
        return Err(Error::InvalidInput(
            "root finding needs a polynomial of degree at least 1".into(),
        ));
    }
    let mut out = Vec::new();
    let zeros = p.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    if zeros > 0 {
        out.push(Root {
            value: ComplexValue::new(0.0, 0.0),
            multiplicity: zeros as u32,
            exact: Some(Rational::zero()),
        });
    }
    let q = UniPoly {
        coeffs: p.coeffs[zeros..].to_vec(),
    };
    if q.degree() > 0 {
        let raw = aberth(&q)?;
        out.extend(cluster(&q, raw));
    }
    if p.is_real() {
        symmetrize(&mut out);
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Root approximations without any grouping: `p.degree()` values, close
/// roots kept apart (multiple roots come back as tight clusters).
pub fn roots_simple(p: &UniPoly) -> Result<Vec<ComplexValue>> {
    let zeros = p.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let mut out = vec![ComplexValue::new(0.0, 0.0); zeros];
    let q = UniPoly {
        coeffs: p.coeffs[zeros..].to_vec(),
    };
    if q.degree() > 0 {
        out.extend(aberth(&q)?);
    }
    Ok(out)
}

fn aberth(p: &UniPoly) -> Result<Vec<ComplexValue>> {
    let n = p.degree();
    let lead = p.coeffs[n];
    if n == 1 {
        return Ok(vec![-p.coeffs[0] / lead]);
    }
    // Fujiwara-style radius for the initial circle
    let radius = (0..n)
        .map(|k| (p.coeffs[k] / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3)
        * 1.1;
    let mut z: Vec<ComplexValue> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            ComplexValue::from_polar(radius, th)
        })
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (pv, dv) = p.eval_with_derivative(z[i]);
            if pv.norm() <= p.noise_floor(z[i]) {
                done[i] = true;
                continue;
            }
            all = false;
            let ratio = pv / dv;
            let mut s = ComplexValue::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let denom = ComplexValue::new(1.0, 0.0) - ratio * s;
            let w = if denom.norm() > 0.0 && ratio.is_finite() {
                ratio / denom
            } else {
                ComplexValue::new(1e-8 * radius, 1e-8 * radius)
            };
            if !w.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(1e-300) {
                done[i] = true;
            }
        }
        if all {
            break;
        }
    }
    let worst = z
        .iter()
        .map(|&zi| p.eval(zi).norm() / residual_bound(p, zi))
        .fold(0.0, f64::max);
    if !worst.is_finite() || worst > 1.0 {
        let best = z.iter().map(|&zi| p.eval(zi).norm()).fold(0.0, f64::max);
        return Err(Error::NoConvergence {
            iterations: MAX_ITER,
            residual: best,
        });
    }
    Ok(z)
}

fn cluster(p: &UniPoly, raw: Vec<ComplexValue>) -> Vec<Root> {
    // single-link groups at a loose radius, then confirm each group
    let n = raw.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = raw[i].norm().max(raw[j].norm()).max(1.0);
            if (raw[i] - raw[j]).norm() <= 1e-4 * scale {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a] = b;
            }
        }
    }
    let mut buckets: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut group, i);
        buckets.entry(r).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in buckets.into_values() {
        let k = members.len();
        let centroid = members
            .iter()
            .map(|&i| raw[i])
            .fold(ComplexValue::new(0.0, 0.0), |a, b| a + b)
            / k as f64;
        let tight = members.iter().all(|&i| {
            (raw[i] - centroid).norm() <= CLUSTER_TOL * centroid.norm().max(1.0)
        });
        if k == 1 || tight || is_multiple_root(p, centroid, k) {
            out.push(Root {
                value: centroid,
                multiplicity: k as u32,
                exact: None,
            });
        } else {
            for i in members {
                out.push(Root {
                    value: raw[i],
                    multiplicity: 1,
                    exact: None,
                });
            }
        }
    }
    out
}

/// True when the first `k` Taylor coefficients at `c` are negligible next to
/// the `k`-th one.
fn is_multiple_root(p: &UniPoly, c: ComplexValue, k: usize) -> bool {
    let t = p.taylor_at(c, k + 1);
    if t.len() <= k {
        return false;
    }
    let scale = p.norm1() * c.norm().max(1.0).powi(p.degree() as i32);
    let lead = t[k].norm();
    if lead <= 1e-10 * scale {
        return false;
    }
    // root spread of a k-fold root under perturbation e is ~ e^(1/k)
    t[..k].iter().enumerate().all(|(j, tj)| {
        let allowed = lead * 1e-4f64.powi((k - j) as i32) + 1e-9 * scale;
        tj.norm() <= allowed
    })
}

fn symmetrize(roots: &mut Vec<Root>) {
    for r in roots.iter_mut() {
        // a k-fold root is only resolved to about tol^(1/k)
        let tol = CONJ_TOL.powf(1.0 / r.multiplicity as f64);
        if r.value.im.abs() <= tol * r.value.norm().max(1.0) {
            r.value.im = 0.0;
        }
    }
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || roots[i].value.im <= 0.0 {
            continue;
        }
        let target = roots[i].value.conj();
        let best = (0..n)
            .filter(|&j| !used[j] && j != i && roots[j].value.im < 0.0)
            .filter(|&j| roots[j].multiplicity == roots[i].multiplicity)
            .filter(|&j| {
                (roots[j].value - target).norm() <= 1e-6 * target.norm().max(1.0)
            })
            .min_by(|&a, &b| {
                (roots[a].value - target)
                    .norm()
                    .total_cmp(&(roots[b].value - target).norm())
            });
        if let Some(j) = best {
            let avg = (roots[i].value + roots[j].value.conj()) / 2.0;
            roots[i].value = avg;
            roots[j].value = avg.conj();
            used[i] = true;
            used[j] = true;
        }
    }
}

fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| {
        let ka = (a.value.im != 0.0, a.value.re, a.value.im);
        let kb = (b.value.im != 0.0, b.value.re, b.value.im);
        ka.0.cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(ka.2.total_cmp(&kb.2))
    });
}

// Dense univariate arithmetic over Q, ascending coefficients.

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
        .collect()
}

fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    let lb = b[db].clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap().clone() / lb.clone();
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].clone() - f.clone() * bi.clone();
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (q, r)
}

fn monic(p: Vec<Rational>) -> Vec<Rational> {
    let lead = p.last().cloned().unwrap_or_else(Rational::one);
    p.into_iter().map(|c| c / lead.clone()).collect()
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Square-free decomposition: returns `(factor, multiplicity)` pairs whose
/// product (with multiplicities) equals `p` up to a constant.
fn yun(p: &[Rational]) -> Vec<(Vec<Rational>, u32)> {
    let p = monic(trim(p.to_vec()));
    let dp = derivative(&p);
    let mut a = gcd(&p, &dp);
    let mut b = divrem(&p, &a).0;
    let mut c = divrem(&dp, &a).0;
    let mut d = trim(sub(&c, &derivative(&b)));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        a = gcd(&b, &d);
        b = divrem(&b, &a).0;
        c = divrem(&d, &a).0;
        if a.len() > 1 {
            out.push((a.clone(), i));
        }
        i += 1;
        d = trim(sub(&c, &derivative(&b)));
    }
    out
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Rational::zero)
                - b.get(i).cloned().unwrap_or_else(Rational::zero)
        })
        .collect()
}

fn horner(p: &[Rational], x: &Rational) -> Rational {
    p.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Integer leading coefficient of the primitive integer multiple of `p`.
fn integer_leading(p: &[Rational]) -> BigInt {
    let l = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
    if content.is_zero() {
        lead
    } else {
        (lead / content).abs()
    }
}

/// All roots of a rational polynomial with exact multiplicities.
///
/// Multiplicities come from an exact square-free decomposition; each
/// square-free factor is solved numerically and every real root is tested
/// as a rational candidate `round(a*z)/a` (with `a` the primitive leading
/// coefficient) by exact evaluation.
pub fn roots_all_exact(coeffs: &[Rational]) -> Result<Vec<Root>> {
    let p = trim(coeffs.to_vec());
    if p.len() < 2 {
        return Err(Error::InvalidInput(
            "root finding needs a polynomial of degree at least 1".into(),
        ));
    }
    let mut out = Vec::new();
    for (factor, mult) in yun(&p) {
        let mut rest = factor;
        // peel verified rational roots, re-solving the deflated quotient
        loop {
            let num = UniPoly::from_rational(&rest)?;
            let approx = roots_all(&num)?;
            let lead = integer_leading(&rest);
            let lead_f = rational_to_f64(&Rational::from_integer(lead.clone()));
            let mut found = Vec::new();
            for r in &approx {
                if r.value.im.abs() > 1e-6 * r.value.norm().max(1.0) {
                    continue;
                }
                let Some(g) = Rational::from_float((r.value.re * lead_f).round()) else {
                    continue;
                };
                let cand = g / Rational::from_integer(lead.clone());
                if !found.contains(&cand) && horner(&rest, &cand).is_zero() {
                    found.push(cand);
                }
            }
            if found.is_empty() {
                out.extend(approx.into_iter().map(|r| Root {
                    multiplicity: r.multiplicity * mult,
                    ..r
                }));
                break;
            }
            for c in found {
                rest = divrem(&rest, &[-c.clone(), Rational::one()]).0;
                out.push(Root {
                    value: ComplexValue::new(rational_to_f64(&c), 0.0),
                    multiplicity: mult,
                    exact: Some(c),
                });
            }
            if rest.len() < 2 {
                break;
            }
        }
    }
    sort_roots(&mut out);
    Ok(out)
}
