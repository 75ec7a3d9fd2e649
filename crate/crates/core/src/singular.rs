//! Multiplicity of a point, tangent directions of plane curves, and tangent
//! planes of surfaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geom;
use crate::numkit::{roots_all_exact, Root};
use crate::ratpoly::{
    rat_int, rational_to_f64, ring, ComplexPoly, ComplexValue, RatPoly, Rational,
};

const NEGLIGIBLE: f64 = 1e-12;
const FLOAT_VERIFY_TOL: f64 = 1e-10;

/// A projective direction with a multiplicity.
///
/// Real directions are stored as unit vectors whose first nonzero component
/// is positive; non-real directions are scaled so that their first
/// non-negligible component is exactly 1. When the direction has a rational
/// representative it is kept in `exact` (not normalized to unit length).
#[derive(Clone, Debug, PartialEq)]
pub struct ProjDirection {
    pub components: Vec<ComplexValue>,
    pub multiplicity: u32,
    pub is_real: bool,
    pub exact: Option<Vec<Rational>>,
}

impl ProjDirection {
    pub fn from_rational(v: Vec<Rational>, multiplicity: u32) -> Self {
        assert!(v.iter().any(|c| !c.is_zero()), "zero direction");
        let lead = v.iter().find(|c| !c.is_zero()).unwrap().clone();
        let sign = if lead < Rational::zero() {
            -Rational::one()
        } else {
            Rational::one()
        };
        let exact = primitive(v.into_iter().map(|c| c * sign.clone()).collect());
        let mut d = Self::from_complex(geom::to_complex(&exact), multiplicity);
        d.exact = Some(exact);
        d
    }

    pub fn from_complex(v: Vec<ComplexValue>, multiplicity: u32) -> Self {
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(scale > 0.0, "zero direction");
        let v: Vec<ComplexValue> = v
            .into_iter()
            .map(|z| {
                let re = if z.re.abs() <= NEGLIGIBLE * scale { 0.0 } else { z.re };
                let im = if z.im.abs() <= NEGLIGIBLE * scale { 0.0 } else { z.im };
                ComplexValue::new(re, im)
            })
            .collect();
        match geom::real_part(&v, NEGLIGIBLE) {
            Some(re) => {
                let n = geom::norm_f64(&re);
                let lead = re.iter().find(|x| x.abs() > NEGLIGIBLE * n).copied().unwrap_or(1.0);
                let s = lead.signum() / n;
                ProjDirection {
                    components: re.iter().map(|x| ComplexValue::new(x * s, 0.0)).collect(),
                    multiplicity,
                    is_real: true,
                    exact: None,
                }
            }
            None => {
                let lead = *v.iter().find(|z| z.norm() > NEGLIGIBLE * scale).unwrap();
                let mut comps: Vec<ComplexValue> = v.iter().map(|z| z / lead).collect();
                let k = v.iter().position(|z| z.norm() > NEGLIGIBLE * scale).unwrap();
                comps[k] = ComplexValue::new(1.0, 0.0);
                ProjDirection {
                    components: comps,
                    multiplicity,
                    is_real: false,
                    exact: None,
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Unit real vector, for real directions.
    pub fn real_vector(&self) -> Option<Vec<f64>> {
        self.is_real
            .then(|| self.components.iter().map(|z| z.re).collect())
    }

    /// True when both describe the same projective direction.
    pub fn same_direction(&self, other: &ProjDirection, tol: f64) -> bool {
        self.dim() == other.dim()
            && self.is_real == other.is_real
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Complex representative: the exact vector when known, else the
    /// normalized components.
    pub fn representative(&self) -> Vec<ComplexValue> {
        match &self.exact {
            Some(e) => geom::to_complex(e),
            None => self.components.clone(),
        }
    }

    pub fn with_multiplicity(mut self, m: u32) -> Self {
        self.multiplicity = m;
        self
    }
}

/// Scales a nonzero rational vector to coprime integers.
fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let den = v
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter()
        .map(|c| Rational::from_integer(c / g.clone()))
        .collect()
}

/// A tangent plane through the point, given by its normal.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentPlane {
    pub normal: ProjDirection,
    pub multiplicity: u32,
}

/// `F(P + u)` after checking that `F(P) = 0` exactly.
pub fn shifted(f: &RatPoly, p: &[Rational]) -> Result<RatPoly> {
    if p.len() != f.nvars() {
        return Err(Error::ArityMismatch {
            expected: f.nvars(),
            got: p.len(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let value = f.eval(p)?;
    if !value.is_zero() {
        return Err(Error::PointNotOnVariety {
            residual: value.to_string(),
        });
    }
    f.shift_to_point(p)
}

/// Order of the lowest nonvanishing derivative of `f` at `p`.
pub fn multiplicity(f: &RatPoly, p: &[Rational]) -> Result<u32> {
    shifted(f, p)?.min_degree()
}

/// Lowest homogeneous form of `f` at `p` together with its degree.
pub fn lowest_form(f: &RatPoly, p: &[Rational]) -> Result<(RatPoly, u32)> {
    let g = shifted(f, p)?;
    let r = g.min_degree()?;
    Ok((g.homogeneous_part(r), r))
}

fn direction_from_root(root: &Root) -> ProjDirection {
    match &root.exact {
        Some(m) => ProjDirection::from_rational(vec![Rational::one(), m.clone()], root.multiplicity),
        None => ProjDirection::from_complex(
            vec![ComplexValue::new(1.0, 0.0), root.value],
            root.multiplicity,
        ),
    }
}

/// Roots of a binary form `T(a, b)` as projective directions `(a, b)`.
pub fn binary_form_roots(t: &RatPoly) -> Result<Vec<ProjDirection>> {
    let r = t.total_degree().ok_or(Error::ZeroPolynomial)?;
    // coefficient of a^(r-j) b^j
    let mut slope = vec![Rational::zero(); r as usize + 1];
    for (m, c) in t.terms() {
        slope[m.exponents()[1] as usize] = c.clone();
    }
    while slope.last().is_some_and(|c| c.is_zero()) {
        slope.pop();
    }
    let d = slope.len() as u32 - 1;
    let mut out = Vec::new();
    if d >= 1 {
        for root in roots_all_exact(&slope)? {
            out.push(direction_from_root(&root));
        }
    }
    if d < r {
        out.push(ProjDirection::from_rational(
            vec![Rational::zero(), Rational::one()],
            r - d,
        ));
    }
    sort_directions(&mut out);
    Ok(out)
}

/// Tangent directions with multiplicity of the plane curve `f = 0` at `p`.
pub fn plane_tangent_directions(f: &RatPoly, p: &[Rational]) -> Result<Vec<ProjDirection>> {
    if f.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: f.nvars(),
        });
    }
    let (t, _) = lowest_form(f, p)?;
    binary_form_roots(&t)
}

/// Real directions first, then by descending components.
pub(crate) fn cmp_directions(a: &ProjDirection, b: &ProjDirection) -> std::cmp::Ordering {
    (!a.is_real).cmp(&!b.is_real).then_with(|| {
        for (x, y) in a.components.iter().zip(&b.components) {
            let o = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
            if o.is_ne() && (x - y).norm() > 1e-12 {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

pub(crate) fn sort_directions(dirs: &mut [ProjDirection]) {
    dirs.sort_by(cmp_directions);
}

/// Point on the cone: exact when available.
#[derive(Clone, Debug)]
enum ConePoint {
    Exact(Vec<Rational>),
    Approx(Vec<ComplexValue>),
}

impl ConePoint {
    fn complex(&self) -> Vec<ComplexValue> {
        match self {
            ConePoint::Exact(v) => geom::to_complex(v),
            ConePoint::Approx(v) => v.clone(),
        }
    }
}

fn rvec(v: [i64; 3]) -> Vec<Rational> {
    v.iter().map(|&x| rat_int(x)).collect()
}

/// Fixed lines `A + sB` used to slice the cone; chosen with no special
/// relation to coordinate planes.
fn slicing_lines() -> Vec<(Vec<Rational>, Vec<Rational>)> {
    vec![
        (rvec([1, 2, -3]), rvec([-2, 3, 5])),
        (rvec([3, -1, 2]), rvec([1, 4, -1])),
        (rvec([-1, 5, 1]), rvec([2, -3, 4])),
        (rvec([2, 1, 7]), rvec([5, -2, 1])),
        (rvec([-4, 1, 3]), rvec([1, 6, 2])),
    ]
}

/// Intersections of the cone `t = 0` with the projective line through
/// `a` and `b`, with multiplicity. `None` if the line lies in the cone.
fn slice_cone(t: &RatPoly, a: &[Rational], b: &[Rational]) -> Result<Option<Vec<(ConePoint, u32)>>> {
    let sr = ring(&["s"]);
    let s = RatPoly::var_at(sr.clone(), 0);
    let map: Vec<RatPoly> = (0..3)
        .map(|i| {
            &RatPoly::constant(sr.clone(), a[i].clone()) + &s.scale(&b[i])
        })
        .collect();
    let u = t.compose(&map)?;
    if u.is_zero() {
        return Ok(None);
    }
    let coeffs = u.univariate_coeffs(0).expect("univariate by construction");
    let r = t.total_degree().unwrap_or(0);
    let d = coeffs.len() as u32 - 1;
    let mut out = Vec::new();
    if d >= 1 {
        for root in roots_all_exact(&coeffs)? {
            let p = match &root.exact {
                Some(sv) => ConePoint::Exact(
                    (0..3).map(|i| a[i].clone() + sv.clone() * b[i].clone()).collect(),
                ),
                None => ConePoint::Approx(
                    (0..3)
                        .map(|i| {
                            ComplexValue::new(rational_to_f64(&a[i]), 0.0)
                                + root.value * rational_to_f64(&b[i])
                        })
                        .collect(),
                ),
            };
            out.push((p, root.multiplicity));
        }
    }
    if d < r {
        out.push((ConePoint::Exact(b.to_vec()), r - d));
    }
    Ok(Some(out))
}

/// Checks whether the plane spanned by `p`, `q` lies in the cone, exactly
/// or within tolerance.
fn plane_in_cone(t: &RatPoly, p: &ConePoint, q: &ConePoint) -> Result<bool> {
    if let (ConePoint::Exact(p), ConePoint::Exact(q)) = (p, q) {
        let uw = ring(&["u", "w"]);
        let u = RatPoly::var_at(uw.clone(), 0);
        let w = RatPoly::var_at(uw.clone(), 1);
        let map: Vec<RatPoly> = (0..3).map(|i| &u.scale(&p[i]) + &w.scale(&q[i])).collect();
        return Ok(t.compose(&map)?.is_zero());
    }
    let pc = unit(&p.complex());
    let qc = unit(&q.complex());
    let uw = ring(&["u", "w"]);
    let u = ComplexPoly::var_at(uw.clone(), 0);
    let w = ComplexPoly::var_at(uw.clone(), 1);
    let map: Vec<ComplexPoly> = (0..3).map(|i| &u.scale(&pc[i]) + &w.scale(&qc[i])).collect();
    let tc = t.to_complex();
    let out = tc.compose(&map)?;
    let scale = tc.max_coeff().max(1e-300);
    let flat = out.terms().all(|(_, c)| c.norm() <= FLOAT_VERIFY_TOL * scale);
    Ok(flat)
}

fn unit(v: &[ComplexValue]) -> Vec<ComplexValue> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

/// Order of vanishing of `t` across the plane with normal `n`, measured
/// along `n` from the generic plane point `u p + w q`.
fn plane_multiplicity(t: &RatPoly, p: &ConePoint, q: &ConePoint, n: &ConePoint) -> Result<u32> {
    let uwe = ring(&["u", "w", "e"]);
    if let (ConePoint::Exact(p), ConePoint::Exact(q), ConePoint::Exact(n)) = (p, q, n) {
        let u = RatPoly::var_at(uwe.clone(), 0);
        let w = RatPoly::var_at(uwe.clone(), 1);
        let e = RatPoly::var_at(uwe.clone(), 2);
        let map: Vec<RatPoly> = (0..3)
            .map(|i| &(&u.scale(&p[i]) + &w.scale(&q[i])) + &e.scale(&n[i]))
            .collect();
        let out = t.compose(&map)?;
        return Ok(out.terms().map(|(m, _)| m.exponents()[2]).min().unwrap_or(0));
    }
    // probe along conj(n): n itself can lie in an isotropic complex plane
    let nc: Vec<ComplexValue> = unit(&n.complex()).iter().map(|z| z.conj()).collect();
    let (pc, qc) = (unit(&p.complex()), unit(&q.complex()));
    let u = ComplexPoly::var_at(uwe.clone(), 0);
    let w = ComplexPoly::var_at(uwe.clone(), 1);
    let e = ComplexPoly::var_at(uwe.clone(), 2);
    let map: Vec<ComplexPoly> = (0..3)
        .map(|i| &(&u.scale(&pc[i]) + &w.scale(&qc[i])) + &e.scale(&nc[i]))
        .collect();
    let tc = t.to_complex();
    let out = tc.compose(&map)?;
    let scale = tc.max_coeff().max(1e-300);
    let lowest = out
        .terms()
        .filter(|(_, c)| c.norm() > FLOAT_VERIFY_TOL * scale)
        .map(|(m, _)| m.exponents()[2])
        .min()
        .unwrap_or(0);
    Ok(lowest)
}

fn normal_of(p: &ConePoint, q: &ConePoint) -> Option<ConePoint> {
    match (p, q) {
        (ConePoint::Exact(p), ConePoint::Exact(q)) => {
            let n = geom::cross(p, q);
            (!n.iter().all(|c| c.is_zero())).then(|| ConePoint::Exact(n.to_vec()))
        }
        _ => {
            let (pc, qc) = (unit(&p.complex()), unit(&q.complex()));
            let n = geom::cross(&pc, &qc);
            let mag = n.iter().map(|z| z.norm()).fold(0.0, f64::max);
            (mag > 1e-8).then(|| ConePoint::Approx(n.to_vec()))
        }
    }
}

fn direction_of(n: &ConePoint, multiplicity: u32) -> ProjDirection {
    match n {
        ConePoint::Exact(v) => ProjDirection::from_rational(v.clone(), multiplicity),
        ConePoint::Approx(v) => ProjDirection::from_complex(v.clone(), multiplicity),
    }
}

/// Linear factors of a ternary form, as tangent planes with multiplicity.
/// Fails with `NonLinearTangentCone` when the factors found do not account
/// for the full degree.
pub fn ternary_form_planes(t: &RatPoly) -> Result<Vec<TangentPlane>> {
    let r = t.total_degree().ok_or(Error::ZeroPolynomial)?;
    if r == 1 {
        let n: Vec<Rational> = (0..3)
            .map(|i| t.coeff(&crate::ratpoly::Monomial::var(3, i)))
            .collect();
        return Ok(vec![TangentPlane {
            normal: ProjDirection::from_rational(n, 1),
            multiplicity: 1,
        }]);
    }
    let mut slices = Vec::new();
    for (a, b) in slicing_lines() {
        if let Some(pts) = slice_cone(t, &a, &b)? {
            slices.push(pts);
        }
    }
    let mut planes: Vec<TangentPlane> = Vec::new();
    let mut total = 0;
    'pairs: for i in 0..slices.len() {
        for j in i + 1..slices.len() {
            for (p, _) in &slices[i] {
                for (q, _) in &slices[j] {
                    let Some(n) = normal_of(p, q) else { continue };
                    let dir = direction_of(&n, 1);
                    if planes
                        .iter()
                        .any(|pl| pl.normal.same_direction(&dir, 1e-8))
                    {
                        continue;
                    }
                    if !plane_in_cone(t, p, q)? {
                        continue;
                    }
                    let m = plane_multiplicity(t, p, q, &n)?;
                    if m == 0 {
                        continue;
                    }
                    total += m;
                    planes.push(TangentPlane {
                        normal: dir.with_multiplicity(m),
                        multiplicity: m,
                    });
                    if total >= r {
                        break 'pairs;
                    }
                }
            }
        }
    }
    if total < r {
        return Err(Error::NonLinearTangentCone { degree: r - total });
    }
    planes.sort_by(|a, b| cmp_directions(&a.normal, &b.normal));
    Ok(planes)
}

/// Tangent planes with multiplicity of the surface `f = 0` at `p`.
pub fn surface_tangent_planes(f: &RatPoly, p: &[Rational]) -> Result<Vec<TangentPlane>> {
    if f.nvars() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            got: f.nvars(),
        });
    }
    let (t, _) = lowest_form(f, p)?;
    ternary_form_planes(&t)
}

/// Exact gradient of `f` at `p`.
pub fn gradient_at(f: &RatPoly, p: &[Rational]) -> Result<Vec<Rational>> {
    f.gradient().iter().map(|g| g.eval(p)).collect()
}

/// Exact Hessian of `f` at `p`.
pub fn hessian_at(f: &RatPoly, p: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    let n = f.nvars();
    let grad = f.gradient();
    (0..n)
        .map(|i| (0..n).map(|j| grad[i].derivative(j).eval(p)).collect())
        .collect()
}
