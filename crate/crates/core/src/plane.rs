//! Branch-wise curvature of plane algebraic curves.
//!
//! For every tangent direction `v` at `P` the curve is probed with the jet
//! `r(t) = P + v t + (s/2) n t^2`, `n = (-v_y, v_x)`, so that the normal
//! acceleration `s` is the only unknown. The first series coefficient of
//! `F(r(t))` past the multiplicity that does not vanish identically is a
//! polynomial in `s`; its roots give the branches, with curvature
//! `|s| / |v|`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numkit::{roots_all, roots_all_exact, UniPoly};
use crate::ratpoly::{
    rat, rational_to_f64, ring, Coeff, ComplexPoly, ComplexValue, Poly, RatPoly, Rational,
};
use crate::singular::{self, ProjDirection};

/// Curvature of a branch; cusps and complex tangents are infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curvature {
    Finite(f64),
    Infinite,
}

impl Curvature {
    pub fn value(&self) -> Option<f64> {
        match self {
            Curvature::Finite(k) => Some(*k),
            Curvature::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Curvature::Finite(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneDiagnostic {
    Regular,
    Node,
    Cusp,
    ComplexTangent,
}

impl PlaneDiagnostic {
    pub fn name(&self) -> &'static str {
        match self {
            PlaneDiagnostic::Regular => "Regular",
            PlaneDiagnostic::Node => "Node",
            PlaneDiagnostic::Cusp => "Cusp",
            PlaneDiagnostic::ComplexTangent => "ComplexTangent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneBranch {
    pub tangent: ProjDirection,
    pub branch_multiplicity: u32,
    pub curvature: Curvature,
    /// First series order whose coefficient does not vanish identically.
    pub contact_order: u32,
    pub diagnostics: PlaneDiagnostic,
    /// Tangent multiplicity minus the multiplicities of all branches found
    /// on that tangent (zero when the split is complete).
    pub deficit: i64,
}

/// Branches of `F = 0` at `P` with their curvatures. `max_order` defaults to
/// the multiplicity plus 10.
pub fn plane_branch_curvatures(
    f: &RatPoly,
    p: &[Rational],
    max_order: Option<u32>,
) -> Result<Vec<PlaneBranch>> {
    plane_branch_curvatures_with_gauge(f, p, max_order, &Rational::zero())
}

/// As [`plane_branch_curvatures`], with an added tangential acceleration
/// `lambda * v` in the probing jet. The result does not depend on `lambda`.
pub fn plane_branch_curvatures_with_gauge(
    f: &RatPoly,
    p: &[Rational],
    max_order: Option<u32>,
    lambda: &Rational,
) -> Result<Vec<PlaneBranch>> {
    if f.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: f.nvars(),
        });
    }
    let g = singular::shifted(f, p)?;
    let r = g.min_degree()?;
    let max_order = max_order.unwrap_or(r + 10);
    let tangents = singular::binary_form_roots(&g.homogeneous_part(r))?;
    let mut out = Vec::new();
    for v in tangents {
        let branches = if !v.is_real {
            complex_tangent(&g, &v, r, max_order)?
        } else if let Some(e) = v.exact.clone() {
            real_tangent(&g, &v, &e, lambda, r, max_order)?
        } else {
            let vc = v.components.clone();
            let lc = ComplexValue::new(rational_to_f64(lambda), 0.0);
            real_tangent(&g.to_complex(), &v, &vc, &lc, r, max_order)?
        };
        out.extend(branches);
    }
    Ok(out)
}

/// `g(v t + (s/2) n t^2 + (lambda/2) v t^2)` truncated at `t^max_order`, in
/// the ring `(t, s)`.
fn gauge_series<C: Coeff>(g: &Poly<C>, v: &[C], lambda: &C, max_order: u32) -> Result<Poly<C>> {
    let ts = ring(&["t", "s"]);
    let t = Poly::<C>::var_at(ts.clone(), 0);
    let s = Poly::<C>::var_at(ts.clone(), 1);
    let t2 = t.pow(2);
    let half = C::from_rational(&rat(1, 2));
    let n = [-v[1].clone(), v[0].clone()];
    let map: Vec<Poly<C>> = (0..2)
        .map(|i| {
            let lin = t.scale(&v[i]);
            let normal = (&s * &t2).scale(&(n[i].clone() * half.clone()));
            let tangential = t2.scale(&(v[i].clone() * lambda.clone() * half.clone()));
            &(&lin + &normal) + &tangential
        })
        .collect();
    let series = g.compose_truncated(&map, 0, max_order)?;
    Ok(series.prune(series.max_coeff()))
}

/// First order `l > r` with a coefficient not identically zero.
fn first_nonvanishing<C: Coeff>(series: &Poly<C>, r: u32, max_order: u32) -> Result<(u32, Poly<C>)> {
    for l in r + 1..=max_order {
        let c = series.coefficient_of(0, l);
        if !c.is_zero() {
            return Ok((l, c));
        }
    }
    Err(Error::OrderExhausted { max_order })
}

fn real_tangent<C: Coeff>(
    g: &Poly<C>,
    v: &ProjDirection,
    vrep: &[C],
    lambda: &C,
    r: u32,
    max_order: u32,
) -> Result<Vec<PlaneBranch>>
where
    Poly<C>: SeriesRoots,
{
    let series = gauge_series(g, vrep, lambda, max_order)?;
    let (l, cl) = first_nonvanishing(&series, r, max_order)?;
    let m = v.multiplicity;
    let vlen = vrep
        .iter()
        .map(|c| c.to_complex().norm_sqr())
        .sum::<f64>()
        .sqrt();
    if cl.is_constant() {
        return Ok(vec![PlaneBranch {
            tangent: v.clone(),
            branch_multiplicity: m,
            curvature: Curvature::Infinite,
            contact_order: l,
            diagnostics: PlaneDiagnostic::Cusp,
            deficit: 0,
        }]);
    }
    let roots = cl.series_roots()?;
    let found: u32 = roots.iter().map(|(_, k)| *k).sum();
    let deficit = m as i64 - found as i64;
    let diag = if r == 1 {
        PlaneDiagnostic::Regular
    } else {
        PlaneDiagnostic::Node
    };
    Ok(roots
        .into_iter()
        .map(|(s, k)| {
            let (curvature, diagnostics) = if s.im == 0.0 {
                (Curvature::Finite(s.re.abs() / vlen), diag)
            } else {
                (Curvature::Infinite, PlaneDiagnostic::ComplexTangent)
            };
            PlaneBranch {
                tangent: v.clone(),
                branch_multiplicity: k,
                curvature,
                contact_order: l,
                diagnostics,
                deficit,
            }
        })
        .collect())
}

/// Root extraction for the univariate coefficient `C_l(s)`.
pub(crate) trait SeriesRoots {
    fn series_roots(&self) -> Result<Vec<(ComplexValue, u32)>>;
}

impl SeriesRoots for RatPoly {
    fn series_roots(&self) -> Result<Vec<(ComplexValue, u32)>> {
        let coeffs = self.univariate_coeffs(1).expect("polynomial in s only");
        Ok(roots_all_exact(&coeffs)?
            .into_iter()
            .map(|r| (r.value, r.multiplicity))
            .collect())
    }
}

impl SeriesRoots for ComplexPoly {
    fn series_roots(&self) -> Result<Vec<(ComplexValue, u32)>> {
        let coeffs = self.univariate_coeffs(1).expect("polynomial in s only");
        Ok(roots_all(&UniPoly::new(coeffs)?)?
            .into_iter()
            .map(|r| (r.value, r.multiplicity))
            .collect())
    }
}

/// Non-real tangents: the curvature denominator `|v|^2` is not a positive
/// real, so the branch is reported with infinite curvature. The contact
/// order is still found, with a free acceleration vector.
fn complex_tangent(g: &RatPoly, v: &ProjDirection, r: u32, max_order: u32) -> Result<Vec<PlaneBranch>> {
    let gc = g.to_complex();
    let vars = ring(&["t", "p", "q"]);
    let t = ComplexPoly::var_at(vars.clone(), 0);
    let t2 = t.pow(2);
    let half = ComplexValue::new(0.5, 0.0);
    let map: Vec<ComplexPoly> = (0..2)
        .map(|i| {
            let acc = ComplexPoly::var_at(vars.clone(), i + 1);
            &t.scale(&v.components[i]) + &(&acc * &t2).scale(&half)
        })
        .collect();
    let series = gc.compose_truncated(&map, 0, max_order)?;
    let series = series.prune(series.max_coeff());
    let (l, _) = first_nonvanishing(&series, r, max_order)?;
    Ok(vec![PlaneBranch {
        tangent: v.clone(),
        branch_multiplicity: v.multiplicity,
        curvature: Curvature::Infinite,
        contact_order: l,
        diagnostics: PlaneDiagnostic::ComplexTangent,
        deficit: 0,
    }])
}

/// Curvature at a regular point from the gradient and Hessian:
/// `|t H t^T| / |grad F|^3` with `t = (-F_y, F_x)`.
pub fn regular_curvature_implicit(f: &RatPoly, p: &[Rational]) -> Result<f64> {
    singular::shifted(f, p)?;
    let grad = singular::gradient_at(f, p)?;
    if grad.iter().all(|c| c.is_zero()) {
        return Err(Error::SingularPoint);
    }
    let h = singular::hessian_at(f, p)?;
    let t = [-grad[1].clone(), grad[0].clone()];
    let mut num = Rational::zero();
    for i in 0..2 {
        for j in 0..2 {
            num += t[i].clone() * h[i][j].clone() * t[j].clone();
        }
    }
    let g2 = rational_to_f64(&(grad[0].clone() * grad[0].clone() + grad[1].clone() * grad[1].clone()));
    Ok(rational_to_f64(&num).abs() / g2.powf(1.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ratpoly::rat_int;

    fn curve(s: &str) -> RatPoly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    fn origin() -> Vec<Rational> {
        vec![rat_int(0), rat_int(0)]
    }

    fn finite(b: &PlaneBranch) -> f64 {
        b.curvature.value().expect("finite curvature")
    }

    #[test]
    fn node_with_two_tangents() {
        let bs = plane_branch_curvatures(&curve("x^3-x^2+y^2"), &origin(), None).unwrap();
        assert_eq!(bs.len(), 2);
        for b in &bs {
            assert!((finite(b) - 2f64.sqrt() / 4.0).abs() < 1e-12);
            assert_eq!(b.diagnostics, PlaneDiagnostic::Node);
            assert_eq!(b.contact_order, 3);
        }
    }

    #[test]
    fn double_tangent_splits_into_two_curvatures() {
        let bs = plane_branch_curvatures(&curve("2x^4-3x^2y+y^2-2y^3+y^4"), &origin(), None).unwrap();
        let mut ks: Vec<f64> = bs.iter().map(finite).collect();
        ks.sort_by(f64::total_cmp);
        assert_eq!(ks, vec![2.0, 4.0]);
        assert!(bs.iter().all(|b| b.contact_order == 4 && b.deficit == 0));
    }

    #[test]
    fn cusp_is_infinite() {
        let bs = plane_branch_curvatures(&curve("x^3-y^2"), &origin(), None).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].curvature, Curvature::Infinite);
        assert_eq!(bs[0].diagnostics, PlaneDiagnostic::Cusp);
        assert_eq!(bs[0].branch_multiplicity, 2);
    }

    #[test]
    fn circle_through_origin() {
        let bs = plane_branch_curvatures(&curve("(x-y)*(x^2+y^2-2x)"), &origin(), None).unwrap();
        assert_eq!(bs.len(), 2);
        assert_eq!(finite(&bs[0]), 0.0);
        assert_eq!(finite(&bs[1]), 1.0);
    }

    #[test]
    fn irrational_tangents_use_float_path() {
        let bs = plane_branch_curvatures(&curve("(x^2+y^2)^2+3x^2y-y^3"), &origin(), None).unwrap();
        assert_eq!(bs.len(), 3);
        for b in &bs {
            assert!((finite(b) - 2.0 / 3.0).abs() < 1e-12, "{b:?}");
        }
    }

    #[test]
    fn gauge_does_not_change_curvature() {
        let f = curve("x^4+x^2y^2-2x^2y-xy^2+y^2");
        let base = plane_branch_curvatures(&f, &origin(), None).unwrap();
        for lam in [rat(1, 3), rat_int(-2), rat(7, 5)] {
            let other = plane_branch_curvatures_with_gauge(&f, &origin(), None, &lam).unwrap();
            assert_eq!(base.len(), other.len());
            for (a, b) in base.iter().zip(&other) {
                assert!((finite(a) - finite(b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn implicit_formula_examples() {
        assert_eq!(regular_curvature_implicit(&curve("x^2+y^2-1"), &[rat_int(1), rat_int(0)]).unwrap(), 1.0);
        assert_eq!(regular_curvature_implicit(&curve("x-y"), &origin()).unwrap(), 0.0);
        assert_eq!(regular_curvature_implicit(&curve("y-x^2"), &origin()).unwrap(), 2.0);
        assert_eq!(
            regular_curvature_implicit(&curve("x^2-y^2"), &origin()),
            Err(Error::SingularPoint)
        );
    }

    #[test]
    fn non_reduced_curve_gives_one_double_branch() {
        let bs = plane_branch_curvatures(&curve("(y-x^2)^2"), &origin(), None).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].branch_multiplicity, 2);
        assert_eq!(finite(&bs[0]), 2.0);
    }

    #[test]
    fn order_exhaustion() {
        let r = plane_branch_curvatures(&curve("x^3-y^2"), &origin(), Some(2));
        assert_eq!(r, Err(Error::OrderExhausted { max_order: 2 }));
    }

    #[test]
    fn complex_tangents_are_reported() {
        let bs = plane_branch_curvatures(&curve("x^2+y^2+x^3"), &origin(), None).unwrap();
        assert_eq!(bs.len(), 2);
        for b in &bs {
            assert_eq!(b.diagnostics, PlaneDiagnostic::ComplexTangent);
            assert_eq!(b.curvature, Curvature::Infinite);
            assert_eq!(b.contact_order, 3);
        }
    }
}
