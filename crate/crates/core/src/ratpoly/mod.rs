//! Sparse multivariate polynomials.
//!
//! A [`Poly`] is a map from [`Monomial`] to a nonzero coefficient over an
//! ordered list of variable names (its *ring*). Terms are kept in graded
//! lexicographic order, so two equal polynomials always serialize
//! identically. The default coefficient field is [`Rational`]; the same code
//! also runs over [`ComplexValue`] for computations that involve irrational
//! tangent directions.

mod coeff;
mod display;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

pub use coeff::{
    f64_to_rational, rat, rat_int, rational_to_f64, Coeff, ComplexValue, Rational, FLOAT_ZERO_TOL,
};

use crate::error::{Error, Result};

/// Polynomial with exact rational coefficients.
pub type RatPoly = Poly<Rational>;

/// Polynomial with complex floating point coefficients.
pub type ComplexPoly = Poly<ComplexValue>;

/// Exponent vector, one entry per ring variable.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the coefficient field `C`.
#[derive(Clone, Debug)]
pub struct Poly<C: Coeff = Rational> {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

/// Builds a shared variable list from anything string-like.
pub fn ring<S: AsRef<str>>(names: &[S]) -> Arc<[String]> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

impl<C: Coeff> Poly<C> {
    pub fn zero(vars: Arc<[String]>) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<[String]>, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Poly { vars, terms }
    }

    pub fn one(vars: Arc<[String]>) -> Self {
        Self::constant(vars, C::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: Arc<[String]>, name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var_at(vars, idx))
    }

    pub fn var_at(vars: Arc<[String]>, idx: usize) -> Self {
        let n = vars.len();
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(n, idx), C::one());
        Poly { vars, terms }
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(vars: Arc<[String]>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, Vec<u32>)>,
    {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            if e.len() != p.vars.len() {
                return Err(Error::ArityMismatch {
                    expected: p.vars.len(),
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> C {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Lowest total degree of a nonzero term; this is the multiplicity of the
    /// origin on the zero set.
    pub fn min_degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .next()
            .map(Monomial::degree)
            .ok_or(Error::ZeroPolynomial)
    }

    /// All terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Degree in the given subset of variables (max over terms of the sum of
    /// their exponents).
    pub fn degree_in_vars(&self, vars: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|&v| m.0[v]).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    /// Splits by powers of `var`: entry `k` is the coefficient of `var^k`,
    /// kept in the same ring.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.vars.clone()); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficient of `var^k` (same ring, `var` eliminated).
    pub fn coefficient_of(&self, var: usize, k: u32) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[var] == k)
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[var] = 0;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    fn unify<'a>(&'a self, other: &'a Self) -> Result<Arc<[String]>> {
        if self.same_ring(other) {
            Ok(self.vars.clone())
        } else if other.is_constant() {
            Ok(self.vars.clone())
        } else if self.is_constant() {
            Ok(other.vars.clone())
        } else {
            Err(Error::MixedRings {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    /// Re-expresses a constant polynomial in another ring; non-constants must
    /// already live there.
    fn in_ring(&self, vars: &Arc<[String]>) -> Self {
        if self.vars == *vars {
            return Poly {
                vars: vars.clone(),
                terms: self.terms.clone(),
            };
        }
        debug_assert!(self.is_constant());
        Self::constant(vars.clone(), self.constant_term())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let vars = self.unify(other)?;
        let mut out = self.in_ring(&vars);
        let other = other.in_ring(&vars);
        for (m, c) in other.terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let vars = self.unify(other)?;
        let mut out = self.in_ring(&vars);
        let other = other.in_ring(&vars);
        for (m, c) in other.terms {
            out.add_term(m, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let vars = self.unify(other)?;
        let a = self.in_ring(&vars);
        let b = other.in_ring(&vars);
        Ok(a.mul_same_ring(&b, None))
    }

    /// Product, dropping every term whose exponent of `trunc.0` exceeds
    /// `trunc.1`.
    fn mul_same_ring(&self, other: &Self, trunc: Option<(usize, u32)>) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((v, d)) = trunc {
                    if ma.0[v] + mb.0[v] > d {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        self.pow_truncated(n, None)
    }

    fn pow_truncated(&self, mut n: u32, trunc: Option<(usize, u32)>) -> Self {
        let mut result = Self::one(self.vars.clone());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_same_ring(&base, trunc);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_same_ring(&base, trunc);
            }
        }
        result
    }

    /// Drops all terms whose exponent of `var` exceeds `max_deg`.
    pub fn truncate_in(&self, var: usize, max_deg: u32) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[var] <= max_deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c.clone() * C::from_i64(e as i64));
        }
        out
    }

    pub fn partial_derivative(&self, name: &str) -> Result<Self> {
        Ok(self.derivative(self.var_index(name)?))
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars()).map(|i| self.derivative(i)).collect()
    }

    /// Taylor shift: returns `G` with `G(u) = F(point + u)`.
    ///
    /// Shifts one variable at a time, expanding `(u + a)^e` binomially, so the
    /// result is exact for rational input.
    pub fn shift_to_point(&self, point: &[C]) -> Result<Self> {
        if point.len() != self.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        let mut current = self.clone();
        for (var, a) in point.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let maxe = current.degree_in(var) as usize;
            // powers of a and binomial rows up to the maximal exponent
            let mut apow = vec![C::one()];
            for k in 1..=maxe {
                apow.push(apow[k - 1].clone() * a.clone());
            }
            let mut next = Self::zero(current.vars.clone());
            for (m, c) in &current.terms {
                let e = m.0[var] as usize;
                let mut binom = C::one();
                for k in (0..=e).rev() {
                    // coefficient of u^k in (u+a)^e is C(e,k) a^(e-k)
                    let j = e - k;
                    if j > 0 {
                        binom = binom * C::from_i64((k + 1) as i64) / C::from_i64(j as i64);
                    }
                    let mut exps = m.0.clone();
                    exps[var] = k as u32;
                    next.add_term(Monomial(exps), c.clone() * binom.clone() * apow[j].clone());
                }
            }
            current = next;
        }
        Ok(current)
    }

    /// Substitutes `map[i]` for variable `i`. The result lives in the ring of
    /// the (non-constant) map entries.
    pub fn compose(&self, map: &[Poly<C>]) -> Result<Poly<C>> {
        self.compose_impl(map, None)
    }

    /// Like [`compose`](Self::compose) but discards every term of degree
    /// greater than `max_deg` in the target variable `var`.
    pub fn compose_truncated(&self, map: &[Poly<C>], var: usize, max_deg: u32) -> Result<Poly<C>> {
        self.compose_impl(map, Some((var, max_deg)))
    }

    fn compose_impl(&self, map: &[Poly<C>], trunc: Option<(usize, u32)>) -> Result<Poly<C>> {
        if map.len() != self.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.nvars(),
                got: map.len(),
            });
        }
        let target = match map.iter().find(|p| !p.is_constant()) {
            Some(p) => p.vars.clone(),
            None => map
                .first()
                .map(|p| p.vars.clone())
                .unwrap_or_else(|| self.vars.clone()),
        };
        for p in map {
            if !p.is_constant() && p.vars != target {
                return Err(Error::MixedRings {
                    left: target.to_vec(),
                    right: p.vars.to_vec(),
                });
            }
        }
        let map: Vec<Poly<C>> = map.iter().map(|p| p.in_ring(&target)).collect();
        if let Some((v, _)) = trunc {
            if v >= target.len() {
                return Err(Error::ArityMismatch {
                    expected: target.len(),
                    got: v + 1,
                });
            }
        }
        // cache powers of each map entry
        let mut powers: Vec<Vec<Poly<C>>> = map
            .iter()
            .map(|p| vec![Poly::one(target.clone()), p.clone()])
            .collect();
        let mut out = Poly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let last = powers[i].last().unwrap().mul_same_ring(&map[i], trunc);
                    powers[i].push(last);
                }
                term = term.mul_same_ring(&powers[i][e as usize], trunc);
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Exact evaluation in the coefficient field.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Floating point evaluation at a complex point.
    ///
    /// Terms are accumulated in Horner fashion in the last variable, so each
    /// monomial costs one multiplication per unit of degree step.
    pub fn evaluate(&self, point: &[ComplexValue]) -> Result<ComplexValue> {
        if point.len() != self.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        let n = self.nvars();
        if n == 0 {
            return Ok(self.constant_term().to_complex());
        }
        // group by all-but-last exponents, Horner in the last variable
        let mut groups: BTreeMap<&[u32], Vec<(u32, ComplexValue)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(&m.0[..n - 1])
                .or_default()
                .push((m.0[n - 1], c.to_complex()));
        }
        let last = point[n - 1];
        let mut total = ComplexValue::new(0.0, 0.0);
        for (head, mut coeffs) in groups {
            coeffs.sort_by(|a, b| b.0.cmp(&a.0));
            let mut acc = ComplexValue::new(0.0, 0.0);
            let mut deg = coeffs[0].0;
            for (e, c) in coeffs {
                while deg > e {
                    acc *= last;
                    deg -= 1;
                }
                acc += c;
            }
            for _ in 0..deg {
                acc *= last;
            }
            let mut mono = ComplexValue::new(1.0, 0.0);
            for (x, &e) in point.iter().zip(head) {
                mono *= x.powu(e);
            }
            total += acc * mono;
        }
        Ok(total)
    }

    pub fn evaluate_real(&self, point: &[f64]) -> Result<f64> {
        let z: Vec<ComplexValue> = point.iter().map(|&x| ComplexValue::new(x, 0.0)).collect();
        Ok(self.evaluate(&z)?.re)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::<D>::zero(self.vars.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_complex(&self) -> ComplexPoly {
        self.map_coeffs(|c| c.to_complex())
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Removes terms negligible relative to `scale` (no-op for exact
    /// coefficients).
    pub fn prune(&self, scale: f64) -> Self {
        if C::EXACT {
            return self.clone();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.negligible(scale))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Moves the polynomial into a ring with more (or reordered) variables,
    /// matching by name.
    pub fn embed(&self, vars: Arc<[String]>) -> Result<Self> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        let n = vars.len();
        let mut out = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (k, &i) in idx.iter().enumerate() {
                e[i] += m.0[k];
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }
}

impl RatPoly {
    /// Univariate dense coefficients (ascending) of a polynomial that only
    /// involves variable `var`.
    pub fn univariate_coeffs(&self, var: usize) -> Option<Vec<Rational>> {
        if self.support_vars().iter().any(|&v| v != var) {
            return None;
        }
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            out[m.0[var] as usize] = c.clone();
        }
        Some(out)
    }
}

impl ComplexPoly {
    pub fn univariate_coeffs(&self, var: usize) -> Option<Vec<ComplexValue>> {
        if self.support_vars().iter().any(|&v| v != var) {
            return None;
        }
        let deg = self.degree_in(var) as usize;
        let mut out = vec![ComplexValue::new(0.0, 0.0); deg + 1];
        for (m, c) in &self.terms {
            out[m.0[var] as usize] = *c;
        }
        Some(out)
    }
}

// Operator impls panic on mixed rings; the `try_*` methods report them.

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        self.try_add(rhs).expect("polynomial ring mismatch in addition")
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Poly<C> {
        self.try_sub(rhs).expect("polynomial ring mismatch in subtraction")
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Poly<C> {
        self.try_mul(rhs).expect("polynomial ring mismatch in multiplication")
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Poly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Poly<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}
