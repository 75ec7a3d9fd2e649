//! Gaussian and mean curvature per tangent plane of an algebraic surface.
//!
//! Each real tangent plane with normal `n` gets a frame `u, w` (orthogonal,
//! not normalized, so that rational normals keep rational frames) and the
//! patch `r(s,t) = P + s u + t w + (s^2/2) a n + s t b n + (t^2/2) c n`.
//! The first nontrivial homogeneous part of `F(r(s,t))` is affine in
//! `(a, b, c)`; its solution gives the second fundamental form.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{axis, cross, dot, least_aligned_axis};
use crate::numkit::{affine_system, solve_affine, Solution};
use crate::ratpoly::{rat, rational_to_f64, ring, Coeff, ComplexValue, Poly, RatPoly, Rational};
use crate::singular::{self, ProjDirection, TangentPlane};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceDiagnostic {
    Regular,
    Sheet,
    /// The patch equations are inconsistent: no smooth sheet is tangent to
    /// this plane, curvatures are infinite.
    CuspSheet,
    /// Still underdetermined (or no longer affine) at the last order tried.
    DegeneratePlane,
    /// Non-real tangent plane, no curvature computed.
    ComplexPlane,
}

impl SurfaceDiagnostic {
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceDiagnostic::Regular => "Regular",
            SurfaceDiagnostic::Sheet => "Sheet",
            SurfaceDiagnostic::CuspSheet => "CuspSheet",
            SurfaceDiagnostic::DegeneratePlane => "DegeneratePlane",
            SurfaceDiagnostic::ComplexPlane => "ComplexPlane",
        }
    }
}

/// Curvatures of one sheet. `gauss` and `mean_signed` are `None` unless the
/// diagnostics are `Regular` or `Sheet`; the sign of `mean_signed` refers to
/// the stored normal.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceBranch {
    pub normal: ProjDirection,
    pub multiplicity: u32,
    pub gauss: Option<f64>,
    pub mean_signed: Option<f64>,
    pub mean_abs: Option<f64>,
    pub contact_order: u32,
    pub diagnostics: SurfaceDiagnostic,
}

/// Fundamental forms of the patch in the frame actually used.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl FundamentalForms {
    pub fn gauss(&self) -> f64 {
        (self.l * self.n - self.m * self.m) / (self.e * self.g - self.f * self.f)
    }

    pub fn mean(&self) -> f64 {
        (self.e * self.n - 2.0 * self.f * self.m + self.g * self.l)
            / (2.0 * (self.e * self.g - self.f * self.f))
    }
}

/// One branch per tangent plane of `F = 0` at `P`. `max_order` defaults to
/// the multiplicity plus 10.
pub fn surface_branch_curvatures(
    f: &RatPoly,
    p: &[Rational],
    max_order: Option<u32>,
) -> Result<Vec<SurfaceBranch>> {
    check_arity(f)?;
    let g = singular::shifted(f, p)?;
    let r = g.min_degree()?;
    let max_order = max_order.unwrap_or(r + 10);
    let planes = singular::surface_tangent_planes(f, p)?;
    planes
        .iter()
        .map(|plane| plane_branch(&g, plane, r, max_order))
        .collect()
}

/// Curvatures of the sheet tangent to the plane with rational normal `n`,
/// computed in the given frame. `u`, `w` must be nonzero, orthogonal to each
/// other and to `n`.
pub fn surface_curvatures_in_frame(
    f: &RatPoly,
    p: &[Rational],
    n: &[Rational],
    u: &[Rational],
    w: &[Rational],
    max_order: Option<u32>,
) -> Result<SurfaceBranch> {
    check_arity(f)?;
    if [n, u, w].iter().any(|v| v.len() != 3) {
        return Err(Error::InvalidInput("frame vectors must have 3 components".into()));
    }
    if [n, u, w].iter().any(|v| v.iter().all(|c| c.is_zero())) {
        return Err(Error::InvalidInput("frame vectors must be nonzero".into()));
    }
    if !dot(u, w).is_zero() || !dot(u, n).is_zero() || !dot(w, n).is_zero() {
        return Err(Error::InvalidInput("frame is not orthogonal".into()));
    }
    let g = singular::shifted(f, p)?;
    let r = g.min_degree()?;
    let max_order = max_order.unwrap_or(r + 10);
    let frame = Frame {
        n: n.to_vec(),
        u: u.to_vec(),
        w: w.to_vec(),
    };
    let normal = ProjDirection::from_rational(n.to_vec(), 1);
    solve_sheet(&g, &frame, r, max_order, normal, 1)
}

fn check_arity(f: &RatPoly) -> Result<()> {
    if f.nvars() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            got: f.nvars(),
        });
    }
    Ok(())
}

struct Frame<C> {
    n: Vec<C>,
    u: Vec<C>,
    w: Vec<C>,
}

impl<C: Coeff> Frame<C> {
    /// `w = n x e_k` with `e_k` the axis least aligned with `n`, `u = w x n`.
    fn standard(n: Vec<C>) -> Self {
        let nf: Vec<f64> = n.iter().map(|c| c.to_complex().re).collect();
        let e: [C; 3] = axis(least_aligned_axis(&nf));
        let w = cross(&n, &e).to_vec();
        let u = cross(&w, &n).to_vec();
        Frame { n, u, w }
    }
}

fn plane_branch(g: &RatPoly, plane: &TangentPlane, r: u32, max_order: u32) -> Result<SurfaceBranch> {
    let normal = plane.normal.clone();
    let m = plane.multiplicity;
    if !normal.is_real {
        return Ok(SurfaceBranch {
            normal,
            multiplicity: m,
            gauss: None,
            mean_signed: None,
            mean_abs: None,
            contact_order: r + 1,
            diagnostics: SurfaceDiagnostic::ComplexPlane,
        });
    }
    match normal.exact.clone() {
        Some(n) => solve_sheet(g, &Frame::standard(n), r, max_order, normal, m),
        None => {
            let n: Vec<ComplexValue> = normal.components.clone();
            solve_sheet(&g.to_complex(), &Frame::standard(n), r, max_order, normal, m)
        }
    }
}

fn solve_sheet<C: Coeff>(
    g: &Poly<C>,
    frame: &Frame<C>,
    r: u32,
    max_order: u32,
    normal: ProjDirection,
    multiplicity: u32,
) -> Result<SurfaceBranch> {
    // ring: h (homogenizing), s, t, a, b, c
    let vars = ring(&["h", "s", "t", "a", "b", "c"]);
    let v = |i| Poly::<C>::var_at(vars.clone(), i);
    let (h, s, t) = (v(0), v(1), v(2));
    let (a, b, c) = (v(3), v(4), v(5));
    let half = C::from_rational(&rat(1, 2));
    let quad = &(&(&(&s * &s) * &a).scale(&half) + &(&(&s * &t) * &b))
        + &(&(&t * &t) * &c).scale(&half);
    let h2 = h.pow(2);
    let map: Vec<Poly<C>> = (0..3)
        .map(|i| {
            let lin = &s.scale(&frame.u[i]) + &t.scale(&frame.w[i]);
            &(&h * &lin) + &(&h2 * &quad).scale(&frame.n[i])
        })
        .collect();
    let series = g.compose_truncated(&map, 0, max_order)?;
    let series = series.prune(series.max_coeff());

    let mut equations: Vec<Poly<C>> = Vec::new();
    let mut outcome = None;
    for d in r + 1..=max_order {
        let part = series.coefficient_of(0, d);
        for i in 0..=d {
            let eq = part.coefficient_of(1, i).coefficient_of(2, d - i);
            if !eq.is_zero() {
                equations.push(eq);
            }
        }
        let Some(sys) = affine_system(&equations, &[3, 4, 5]) else {
            outcome = Some((d, None));
            break;
        };
        match solve_affine(&sys) {
            Solution::Unique(x) => {
                outcome = Some((d, Some(Some(x))));
                break;
            }
            Solution::Inconsistent => {
                outcome = Some((d, Some(None)));
                break;
            }
            Solution::Underdetermined { .. } => {}
        }
    }
    let regular = r == 1;
    let branch = |gauss, mean_signed: Option<f64>, contact_order, diagnostics| SurfaceBranch {
        normal: normal.clone(),
        multiplicity,
        gauss,
        mean_signed,
        mean_abs: mean_signed.map(f64::abs),
        contact_order,
        diagnostics,
    };
    Ok(match outcome {
        Some((d, Some(Some(x)))) => {
            let forms = fundamental_forms(frame, &x);
            let diag = if regular {
                SurfaceDiagnostic::Regular
            } else {
                SurfaceDiagnostic::Sheet
            };
            branch(Some(forms.gauss()), Some(forms.mean()), d, diag)
        }
        Some((d, Some(None))) => branch(None, None, d, SurfaceDiagnostic::CuspSheet),
        Some((d, None)) => branch(None, None, d, SurfaceDiagnostic::DegeneratePlane),
        None => branch(None, None, max_order, SurfaceDiagnostic::DegeneratePlane),
    })
}

/// Forms of the patch `s u + t w + (quadratic) n` with unit normal `n/|n|`.
/// `K_G` is assembled from exact squared lengths where possible.
fn fundamental_forms<C: Coeff>(frame: &Frame<C>, x: &[C]) -> FundamentalForms {
    let re = |c: &C| c.to_complex().re;
    let nn = re(&dot(&frame.n, &frame.n)).sqrt();
    FundamentalForms {
        e: re(&dot(&frame.u, &frame.u)),
        f: re(&dot(&frame.u, &frame.w)),
        g: re(&dot(&frame.w, &frame.w)),
        l: re(&x[0]) * nn,
        m: re(&x[1]) * nn,
        n: re(&x[2]) * nn,
    }
}

/// `(K_G, K_M)` at a regular point from gradient and Hessian; the sign of
/// `K_M` refers to the normal `grad F / |grad F|`.
pub fn regular_surface_curvatures_implicit(f: &RatPoly, p: &[Rational]) -> Result<(f64, f64)> {
    check_arity(f)?;
    singular::shifted(f, p)?;
    let grad = singular::gradient_at(f, p)?;
    if grad.iter().all(|c| c.is_zero()) {
        return Err(Error::SingularPoint);
    }
    let h = singular::hessian_at(f, p)?;
    let adj = adjugate(&h);
    let quad = |m: &[Vec<Rational>]| {
        let mut acc = Rational::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += grad[i].clone() * m[i][j].clone() * grad[j].clone();
            }
        }
        acc
    };
    let g2 = dot(&grad, &grad);
    let trace = h[0][0].clone() + h[1][1].clone() + h[2][2].clone();
    let gauss = rational_to_f64(&(quad(&adj) / (g2.clone() * g2.clone())));
    let mean_num = rational_to_f64(&(quad(&h) - g2.clone() * trace));
    let mean = mean_num / (2.0 * rational_to_f64(&g2).powf(1.5));
    Ok((gauss, mean))
}

fn adjugate(h: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let minor = |r0: usize, c0: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r0).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c0).collect();
        h[rows[0]][cols[0]].clone() * h[rows[1]][cols[1]].clone()
            - h[rows[0]][cols[1]].clone() * h[rows[1]][cols[0]].clone()
    };
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let c = minor(j, i);
                    if (i + j) % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect()
}
