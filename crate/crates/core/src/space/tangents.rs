//! Tangent candidates of `F = G = 0`: intersections of tangent-plane pairs,
//! with pencil refinement when the two surfaces share a tangent plane.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{axis, cross, least_aligned_axis};
use crate::ratpoly::{rat, rational_to_f64, ring, ComplexValue, RatPoly, Rational};
use crate::singular::{self, ProjDirection, TangentPlane};

const PARALLEL_TOL: f64 = 1e-10;
const SAME_DIRECTION_TOL: f64 = 1e-8;

/// Candidate tangents with accumulated multiplicities, before any check
/// against higher-order equations.
pub(crate) fn tangent_candidates(f: &RatPoly, g: &RatPoly, p: &[Rational]) -> Result<Vec<ProjDirection>> {
    let pf = singular::surface_tangent_planes(f, p)?;
    let pg = singular::surface_tangent_planes(g, p)?;
    let gf = singular::shifted(f, p)?;
    let gg = singular::shifted(g, p)?;
    let mut cands: Vec<ProjDirection> = Vec::new();
    for a in &pf {
        for b in &pg {
            let m = a.multiplicity * b.multiplicity;
            if let Some(d) = transversal(a, b, m) {
                cands.push(d);
            } else {
                for d in pencil(&gf, &gg, &a.normal)? {
                    let k = d.multiplicity * m;
                    cands.push(d.with_multiplicity(k));
                }
            }
        }
    }
    Ok(merge(cands))
}

/// `n_F x n_G` when the normals are independent.
fn transversal(a: &TangentPlane, b: &TangentPlane, m: u32) -> Option<ProjDirection> {
    if let (Some(x), Some(y)) = (&a.normal.exact, &b.normal.exact) {
        let c = cross(x, y);
        return (!c.iter().all(|z| z.is_zero())).then(|| ProjDirection::from_rational(c.to_vec(), m));
    }
    let x = a.normal.representative();
    let y = b.normal.representative();
    let c = cross(&x, &y);
    let size = |v: &[ComplexValue]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (size(&c) > PARALLEL_TOL * size(&x) * size(&y)).then(|| ProjDirection::from_complex(c.to_vec(), m))
}

pub(crate) fn merge(cands: Vec<ProjDirection>) -> Vec<ProjDirection> {
    let mut out: Vec<ProjDirection> = Vec::new();
    for c in cands {
        match out.iter_mut().find(|d| d.same_direction(&c, SAME_DIRECTION_TOL)) {
            Some(d) => d.multiplicity += c.multiplicity,
            None => out.push(c),
        }
    }
    singular::sort_directions(&mut out);
    out
}

/// Tangents inside a plane shared by both surfaces. In-plane directions
/// `v = p e1 + q e2` are substituted with a free acceleration `(a, b, c)`;
/// the first coefficient past each multiplicity is affine in `(a, b, c)`,
/// and the system of the two is solvable exactly where the bordered minors
/// of `[A(p,q) | b(p,q)]` vanish.
fn pencil(gf: &RatPoly, gg: &RatPoly, normal: &ProjDirection) -> Result<Vec<ProjDirection>> {
    let Some(n) = normal.exact.clone() else {
        return Err(Error::PencilUnresolved(
            "shared tangent plane has no rational normal".into(),
        ));
    };
    let nf: Vec<f64> = normal.components.iter().map(|z| z.re).collect();
    let e: [Rational; 3] = axis(least_aligned_axis(&nf));
    let e2 = cross(&n, &e);
    let e1 = cross(&e2, &n);

    let vars = ring(&["t", "p", "q", "a", "b", "c"]);
    let var = |i| RatPoly::var_at(vars.clone(), i);
    let (t, pp, qq) = (var(0), var(1), var(2));
    let t2 = t.pow(2);
    let half = rat(1, 2);
    let map: Vec<RatPoly> = (0..3)
        .map(|i| {
            let v = &pp.scale(&e1[i]) + &qq.scale(&e2[i]);
            &(&v * &t) + &(&var(3 + i) * &t2).scale(&half)
        })
        .collect();

    let mut rows = Vec::new();
    for g in [gf, gg] {
        let r = g.min_degree()?;
        let series = g.compose_truncated(&map, 0, r + 1)?;
        let eq = series.coefficient_of(0, r + 1);
        if eq.degree_in_vars(&[3, 4, 5]) > 1 {
            return Err(Error::PencilUnresolved(
                "next-order equation is not affine in the acceleration".into(),
            ));
        }
        let a: Vec<RatPoly> = (3..6).map(|j| eq.coefficient_of(j, 1)).collect();
        let b = eq.coefficient_of(3, 0).coefficient_of(4, 0).coefficient_of(5, 0);
        rows.push((a, b));
    }
    let (af, bf) = &rows[0];
    let (ag, bg) = &rows[1];
    for i in 0..3 {
        for j in i + 1..3 {
            if !(&(&af[i] * &ag[j]) - &(&af[j] * &ag[i])).is_zero() {
                return Err(Error::PencilUnresolved(
                    "acceleration equations are independent at this order".into(),
                ));
            }
        }
    }
    let minors: Vec<RatPoly> = (0..3)
        .map(|j| &(&af[j] * bg) - &(&ag[j] * bf))
        .filter(|m| !m.is_zero())
        .collect();
    let Some(first) = minors.first() else {
        return Err(Error::PencilUnresolved(
            "solvability form vanishes identically".into(),
        ));
    };
    let form = binary(first)?;
    let mut out = Vec::new();
    for root in singular::binary_form_roots(&form)? {
        let pq = root.representative();
        let holds = minors.iter().all(|m| {
            let mut pt = [ComplexValue::new(0.0, 0.0); 6];
            pt[1] = pq[0];
            pt[2] = pq[1];
            let val = m.evaluate(&pt).map(|z| z.norm()).unwrap_or(f64::INFINITY);
            val <= 1e-9 * m.max_coeff()
        });
        if !holds {
            continue;
        }
        let d = match &root.exact {
            Some(x) => {
                let v: Vec<Rational> = (0..3)
                    .map(|i| x[0].clone() * e1[i].clone() + x[1].clone() * e2[i].clone())
                    .collect();
                ProjDirection::from_rational(v, root.multiplicity)
            }
            None => {
                let v: Vec<ComplexValue> = (0..3)
                    .map(|i| pq[0] * rational_to_f64(&e1[i]) + pq[1] * rational_to_f64(&e2[i]))
                    .collect();
                ProjDirection::from_complex(v, root.multiplicity)
            }
        };
        out.push(d);
    }
    Ok(out)
}

/// Moves a form in `p, q` (variables 1, 2 of the pencil ring) into its own
/// bivariate ring.
fn binary(m: &RatPoly) -> Result<RatPoly> {
    let pq = ring(&["p", "q"]);
    RatPoly::from_terms(
        pq,
        m.terms().map(|(mono, c)| {
            let e = mono.exponents();
            (c.clone(), vec![e[1], e[2]])
        }),
    )
}
