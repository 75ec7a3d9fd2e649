//! Curvature and torsion of the branches of a space curve `F = G = 0`.
//!
//! Tangents come from pairs of tangent planes of the two surfaces (see
//! [`space_tangents`]); along each tangent the jet is fixed order by order
//! by a staged elimination, branching over the roots of univariate
//! equations.

mod staged;
mod tangents;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{cross, dot};
use crate::plane::Curvature;
use crate::ratpoly::{rational_to_f64, ComplexValue, RatPoly, Rational};
use crate::singular::{self, ProjDirection};

use staged::{Outcome, Problem};

pub const DEFAULT_MAX_ORDER: u32 = 10;
const MERGE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Torsion {
    Value(f64),
    Undetermined,
}

impl Torsion {
    pub fn value(&self) -> Option<f64> {
        match self {
            Torsion::Value(t) => Some(*t),
            Torsion::Undetermined => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceDiagnostic {
    /// Both surfaces regular and transversal at the point.
    Regular,
    Singular,
    /// No jet with a finite second derivative exists along the tangent.
    Cusp,
    ComplexTangent,
    /// The jet along a real tangent needs non-real coefficients.
    ComplexBranch,
}

impl SpaceDiagnostic {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceDiagnostic::Regular => "Regular",
            SpaceDiagnostic::Singular => "Singular",
            SpaceDiagnostic::Cusp => "Cusp",
            SpaceDiagnostic::ComplexTangent => "ComplexTangent",
            SpaceDiagnostic::ComplexBranch => "ComplexBranch",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceBranch {
    pub tangent: ProjDirection,
    pub curvature: Curvature,
    pub torsion: Torsion,
    pub branch_multiplicity: u32,
    pub diagnostics: SpaceDiagnostic,
}

/// Tangent directions of `F = G = 0` at `P` with multiplicities. Candidates
/// along which the staged solver finds no branch at all are dropped.
pub fn space_tangents(f: &RatPoly, g: &RatPoly, p: &[Rational]) -> Result<Vec<ProjDirection>> {
    check(f, g, p)?;
    let mut out = Vec::new();
    for d in tangents::tangent_candidates(f, g, p)? {
        match space_branch_frenet_along(f, g, p, &d, None) {
            Ok(bs) if bs.is_empty() => {}
            Ok(_) | Err(Error::OrderExhausted { .. }) => out.push(d),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Branches with curvature and torsion. `max_order` defaults to 10.
pub fn space_branch_frenet(
    f: &RatPoly,
    g: &RatPoly,
    p: &[Rational],
    max_order: Option<u32>,
) -> Result<Vec<SpaceBranch>> {
    check(f, g, p)?;
    let mut out = Vec::new();
    for d in tangents::tangent_candidates(f, g, p)? {
        out.extend(space_branch_frenet_along(f, g, p, &d, max_order)?);
    }
    Ok(out)
}

/// Branches along one given tangent direction.
pub fn space_branch_frenet_along(
    f: &RatPoly,
    g: &RatPoly,
    p: &[Rational],
    tangent: &ProjDirection,
    max_order: Option<u32>,
) -> Result<Vec<SpaceBranch>> {
    check(f, g, p)?;
    if tangent.dim() != 3 {
        return Err(Error::InvalidInput("tangent must have 3 components".into()));
    }
    let max_order = max_order.unwrap_or(DEFAULT_MAX_ORDER);
    let gf = singular::shifted(f, p)?;
    let gg = singular::shifted(g, p)?;
    if !tangent.is_real {
        return Ok(vec![SpaceBranch {
            tangent: tangent.clone(),
            curvature: Curvature::Infinite,
            torsion: Torsion::Undetermined,
            branch_multiplicity: tangent.multiplicity,
            diagnostics: SpaceDiagnostic::ComplexTangent,
        }]);
    }
    let outcomes = match &tangent.exact {
        Some(v) => staged::solve(&Problem::new(gf.clone(), gg.clone(), v.clone(), max_order))?,
        None => {
            let v: Vec<ComplexValue> = tangent.components.clone();
            staged::solve(&Problem::new(gf.to_complex(), gg.to_complex(), v, max_order))?
        }
    };
    let regular = is_regular(f, g, p)?;
    Ok(merge_outcomes(outcomes)
        .into_iter()
        .map(|o| to_branch(tangent, o, regular))
        .collect())
}

fn check(f: &RatPoly, g: &RatPoly, p: &[Rational]) -> Result<()> {
    for h in [f, g] {
        if h.nvars() != 3 {
            return Err(Error::ArityMismatch {
                expected: 3,
                got: h.nvars(),
            });
        }
    }
    if !f.same_ring(g) {
        return Err(Error::MixedRings {
            left: f.vars().to_vec(),
            right: g.vars().to_vec(),
        });
    }
    singular::shifted(f, p)?;
    singular::shifted(g, p)?;
    Ok(())
}

fn is_regular(f: &RatPoly, g: &RatPoly, p: &[Rational]) -> Result<bool> {
    let a = singular::gradient_at(f, p)?;
    let b = singular::gradient_at(g, p)?;
    Ok(!cross(&a, &b).iter().all(|c| c.is_zero()))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= MERGE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Sums the weights of outcomes with equal curvature and torsion.
fn merge_outcomes(outcomes: Vec<Outcome>) -> Vec<Outcome> {
    let mut out: Vec<Outcome> = Vec::new();
    for o in outcomes {
        let slot = out.iter_mut().find(|x| match (&**x, &o) {
            (Outcome::Finite { k: k1, torsion: t1, .. }, Outcome::Finite { k: k2, torsion: t2, .. }) => {
                close(*k1, *k2)
                    && match (t1, t2) {
                        (Some(a), Some(b)) => close(*a, *b),
                        (None, None) => true,
                        _ => false,
                    }
            }
            (Outcome::Cusp { .. }, Outcome::Cusp { .. }) => true,
            (Outcome::Complex { .. }, Outcome::Complex { .. }) => true,
            _ => false,
        });
        match slot {
            Some(x) => *weight_mut(x) += weight(&o),
            None => out.push(o),
        }
    }
    out
}

fn weight(o: &Outcome) -> u32 {
    match o {
        Outcome::Finite { weight, .. } | Outcome::Cusp { weight } | Outcome::Complex { weight } => *weight,
    }
}

fn weight_mut(o: &mut Outcome) -> &mut u32 {
    match o {
        Outcome::Finite { weight, .. } | Outcome::Cusp { weight } | Outcome::Complex { weight } => weight,
    }
}

fn to_branch(tangent: &ProjDirection, o: Outcome, regular: bool) -> SpaceBranch {
    let (curvature, torsion, diagnostics) = match o {
        Outcome::Finite { k, torsion, .. } => (
            Curvature::Finite(k),
            torsion.map_or(Torsion::Undetermined, Torsion::Value),
            if regular {
                SpaceDiagnostic::Regular
            } else {
                SpaceDiagnostic::Singular
            },
        ),
        Outcome::Cusp { .. } => (Curvature::Infinite, Torsion::Undetermined, SpaceDiagnostic::Cusp),
        Outcome::Complex { .. } => (
            Curvature::Infinite,
            Torsion::Undetermined,
            SpaceDiagnostic::ComplexBranch,
        ),
    };
    SpaceBranch {
        tangent: tangent.clone(),
        curvature,
        torsion,
        branch_multiplicity: weight(&o),
        diagnostics,
    }
}

/// `(k, tau)` at a regular point of `F = G = 0` from the field
/// `T = grad F x grad G` and its derivatives along itself. `tau` is `None`
/// when `k = 0`.
pub fn regular_space_frenet_implicit(f: &RatPoly, g: &RatPoly, p: &[Rational]) -> Result<(f64, Option<f64>)> {
    check(f, g, p)?;
    let gf = f.gradient();
    let gg = g.gradient();
    let field: Vec<RatPoly> = (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            &(&gf[j] * &gg[k]) - &(&gf[k] * &gg[j])
        })
        .collect();
    let along = |h: &[RatPoly]| -> Vec<RatPoly> {
        h.iter()
            .map(|hc| {
                (0..3).fold(RatPoly::zero(hc.vars().clone()), |acc, j| {
                    &acc + &(&hc.derivative(j) * &field[j])
                })
            })
            .collect()
    };
    let second = along(&field);
    let third = along(&second);
    let at = |h: &[RatPoly]| -> Result<Vec<Rational>> { h.iter().map(|c| c.eval(p)).collect() };
    let (a, b, c) = (at(&field)?, at(&second)?, at(&third)?);
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::SingularPoint);
    }
    let cr = cross(&a, &b);
    let cr2 = dot(&cr, &cr);
    let a2 = rational_to_f64(&dot(&a, &a));
    let k = rational_to_f64(&cr2).sqrt() / a2.powf(1.5);
    if cr2.is_zero() {
        return Ok((k, None));
    }
    let tau = rational_to_f64(&(dot(&cr, &c) / cr2));
    Ok((k, Some(tau)))
}
