//! Numeric branch tracing near a point, used as an independent check on the
//! symbolic solvers.
//!
//! Plane branches are sampled on circles `|x - P| = h_j`, `h_j = h0 2^-j`:
//! the circle is parametrized by the half-angle tangent, the restriction
//! of `F` becomes a univariate polynomial, and its real roots within 30
//! degrees of the requested direction are polished by Newton's method in the
//! angle. Space branches are sampled on spheres by Newton's method on
//! `F = G = 0, |x - P| = h`. Curvature and torsion are extrapolated as
//! `h -> 0`.
//!
//! Nothing here depends on the plane, surface or space solvers.

use crate::error::{Error, Result};
use crate::geom::{cross_f64, dot_f64, least_aligned_axis, norm_f64};
use crate::numkit::{roots_simple, UniPoly};
use crate::ratpoly::{rational_to_f64, ring, ComplexPoly, ComplexValue, RatPoly, Rational};

/// Half-width of the accepted cone around the traced direction.
pub const CONE_ANGLE: f64 = std::f64::consts::PI / 6.0;
/// Curvature estimates above this are reported as infinite.
pub const INFINITE_THRESHOLD: f64 = 1e6;

const NEWTON_ITER: usize = 60;
const DISTANCE_TOL: f64 = 1e-8;
const REAL_TOL: f64 = 1e-6;
const SECTION_OFFSET: f64 = 0.4;

/// One point of a traced branch. `offset` is `point - P`, kept separately
/// so that small radii do not lose precision.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSample {
    pub point: Vec<f64>,
    pub offset: Vec<f64>,
    pub h: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub infinite: bool,
}

impl Estimate {
    fn new(value: f64) -> Self {
        Estimate {
            value,
            infinite: !(value.abs() <= INFINITE_THRESHOLD),
        }
    }
}

fn c(x: f64) -> ComplexValue {
    ComplexValue::new(x, 0.0)
}

fn unit(v: &[f64]) -> Result<Vec<f64>> {
    let n = norm_f64(v);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidInput("direction must be a nonzero finite vector".into()));
    }
    Ok(v.iter().map(|x| x / n).collect())
}

fn check_steps(h0: f64, steps: usize) -> Result<()> {
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::InvalidInput("h0 must be positive".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be positive".into()));
    }
    Ok(())
}

/// `F(P + u)` in floating point, with its gradient.
struct Local {
    f: ComplexPoly,
    grad: Vec<ComplexPoly>,
}

impl Local {
    fn new(f: ComplexPoly) -> Self {
        let grad = f.gradient();
        Local { f, grad }
    }

    fn shifted(f: &RatPoly, p: &[Rational]) -> Result<Self> {
        if p.len() != f.nvars() {
            return Err(Error::ArityMismatch {
                expected: f.nvars(),
                got: p.len(),
            });
        }
        Ok(Local::new(f.shift_to_point(p)?.to_complex()))
    }

    fn value(&self, u: &[f64]) -> f64 {
        let z: Vec<ComplexValue> = u.iter().map(|&x| c(x)).collect();
        self.f.evaluate(&z).map(|v| v.re).unwrap_or(f64::NAN)
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let z: Vec<ComplexValue> = u.iter().map(|&x| c(x)).collect();
        self.grad
            .iter()
            .map(|g| g.evaluate(&z).map(|v| v.re).unwrap_or(f64::NAN))
            .collect()
    }

    /// `|F| / |grad F|`, a first-order distance to the zero set.
    fn distance(&self, u: &[f64]) -> f64 {
        let g = norm_f64(&self.gradient(u));
        let v = self.value(u).abs();
        if v == 0.0 {
            0.0
        } else {
            v / g
        }
    }
}

/// Angles (relative to `d`) at which the curve crosses the circle of radius
/// `h`, restricted to the cone.
fn circle_angles(local: &Local, d: &[f64], h: f64) -> Result<Vec<f64>> {
    let dp = [-d[1], d[0]];
    let at = |phi: f64| -> Vec<f64> {
        (0..2)
            .map(|i| h * (phi.cos() * d[i] + phi.sin() * dp[i]))
            .collect()
    };
    let deg = local.f.total_degree().unwrap_or(0);
    let low = local.f.min_degree().unwrap_or(0);
    let tr = ring(&["t"]);
    let t = ComplexPoly::var_at(tr.clone(), 0);
    let one = ComplexPoly::one(tr.clone());
    let t2 = t.pow(2);
    let arc: Vec<ComplexPoly> = (0..2)
        .map(|i| &(&one - &t2).scale(&c(d[i])) + &t.scale(&c(2.0 * dp[i])))
        .collect();
    let w = &one + &t2;
    let mut q = ComplexPoly::zero(tr);
    for k in low..=deg {
        let part = local.f.homogeneous_part(k);
        if part.is_zero() {
            continue;
        }
        let term = part.compose(&arc)?.scale(&c(h.powi((k - low) as i32)));
        q = &q + &(&term * &w.pow(deg - k));
    }
    let coeffs = q.univariate_coeffs(0).unwrap_or_default();
    let Ok(uq) = UniPoly::new(coeffs) else {
        return Ok(Vec::new());
    };
    if uq.degree() == 0 {
        return Ok(Vec::new());
    }
    let tmax = (CONE_ANGLE / 2.0).tan() * 1.05;
    let mut out: Vec<f64> = Vec::new();
    for z in roots_simple(&uq)? {
        if z.im.abs() > REAL_TOL * (1.0 + z.norm()) || z.re.abs() > tmax {
            continue;
        }
        let mut phi = 2.0 * z.re.atan();
        for _ in 0..NEWTON_ITER {
            let u = at(phi);
            let g = local.gradient(&u);
            let du = [
                h * (-phi.sin() * d[0] + phi.cos() * dp[0]),
                h * (-phi.sin() * d[1] + phi.cos() * dp[1]),
            ];
            let slope = dot_f64(&g, &du);
            if slope == 0.0 || !slope.is_finite() {
                break;
            }
            let step = (local.value(&u) / slope).clamp(-0.05, 0.05);
            phi -= step;
            if step.abs() <= 1e-15 * phi.abs().max(1e-300) {
                break;
            }
        }
        let u = at(phi);
        if phi.abs() <= CONE_ANGLE
            && local.distance(&u) <= DISTANCE_TOL * h
            && !out.iter().any(|&o| (o - phi).abs() <= 1e-12 * h.max(phi.abs()))
        {
            out.push(phi);
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn plane_sample(local: &Local, base: &[f64], d: &[f64], h: f64, phi: f64) -> TraceSample {
    let offset = vec![
        h * (phi.cos() * d[0] - phi.sin() * d[1]),
        h * (phi.cos() * d[1] + phi.sin() * d[0]),
    ];
    TraceSample {
        point: base.iter().zip(&offset).map(|(b, o)| b + o).collect(),
        residual: local.value(&offset).abs(),
        offset,
        h,
    }
}

fn trace_local(local: &Local, base: &[f64], d: &[f64], h0: f64, steps: usize, all: bool) -> Result<Vec<Vec<TraceSample>>> {
    check_steps(h0, steps)?;
    if local.f.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: local.f.nvars(),
        });
    }
    let d = unit(d)?;
    // (samples, last angle)
    let mut traces: Vec<(Vec<TraceSample>, f64)> = Vec::new();
    for j in 0..steps {
        let h = h0 / 2f64.powi(j as i32);
        let angles = circle_angles(local, &d, h)?;
        if traces.is_empty() {
            if angles.is_empty() {
                if j >= 2 {
                    return Err(Error::NoBranch);
                }
                continue;
            }
            let starts: Vec<f64> = if all {
                angles.clone()
            } else {
                let best = angles
                    .iter()
                    .copied()
                    .min_by(|a, b| a.abs().total_cmp(&b.abs()))
                    .unwrap();
                vec![best]
            };
            for phi in starts {
                traces.push((vec![plane_sample(local, base, &d, h, phi)], phi));
            }
            continue;
        }
        for (samples, last) in traces.iter_mut() {
            let predicted = *last / 2.0;
            if let Some(phi) = angles
                .iter()
                .copied()
                .min_by(|a, b| (a - predicted).abs().total_cmp(&(b - predicted).abs()))
            {
                samples.push(plane_sample(local, base, &d, h, phi));
                *last = phi;
            }
        }
    }
    Ok(traces.into_iter().map(|(s, _)| s).collect())
}

fn base_point(p: &[Rational]) -> Vec<f64> {
    p.iter().map(rational_to_f64).collect()
}

/// Samples of the branch of `F = 0` leaving `P` closest to `direction`.
pub fn trace_plane_branch(
    f: &RatPoly,
    p: &[Rational],
    direction: &[f64],
    h0: f64,
    steps: usize,
) -> Result<Vec<TraceSample>> {
    let local = Local::shifted(f, p)?;
    let mut traces = trace_local(&local, &base_point(p), direction, h0, steps, false)?;
    Ok(traces.pop().unwrap_or_default())
}

/// Samples of every branch of `F = 0` leaving `P` within the cone around
/// `direction`, one trace per branch.
pub fn trace_plane_branches(
    f: &RatPoly,
    p: &[Rational],
    direction: &[f64],
    h0: f64,
    steps: usize,
) -> Result<Vec<Vec<TraceSample>>> {
    let local = Local::shifted(f, p)?;
    trace_local(&local, &base_point(p), direction, h0, steps, true)
}

fn menger(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let area2 = if a.len() == 2 {
        (a[0] * b[1] - a[1] * b[0]).abs()
    } else {
        norm_f64(&cross_f64(a, b))
    };
    2.0 * area2 / (norm_f64(a) * norm_f64(b) * norm_f64(&d))
}

/// Curvature at the base point from samples of one branch: Menger
/// curvature of the base point and consecutive samples, extrapolated to
/// `h = 0` by one Richardson step.
pub fn estimate_curvature(samples: &[TraceSample]) -> Result<Estimate> {
    if samples.len() < 4 {
        return Err(Error::InsufficientSamples {
            needed: 4,
            got: samples.len(),
        });
    }
    let ks: Vec<f64> = samples
        .windows(2)
        .map(|w| menger(&w[0].offset, &w[1].offset))
        .collect();
    let n = ks.len();
    Ok(Estimate::new(2.0 * ks[n - 1] - ks[n - 2]))
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| dot_f64(&m[0], &cross_f64(&m[1], &m[2]));
    let d = det(&m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *xk = det(&mk) / d;
    }
    Some(x)
}

fn sphere_point(lf: &Local, lg: &Local, guess: &[f64], d: &[f64], h: f64) -> Option<Vec<f64>> {
    let mut u = guess.to_vec();
    for _ in 0..NEWTON_ITER {
        let gf = lf.gradient(&u);
        let gg = lg.gradient(&u);
        let m = [
            [gf[0], gf[1], gf[2]],
            [gg[0], gg[1], gg[2]],
            [u[0] / h, u[1] / h, u[2] / h],
        ];
        let b = [
            -lf.value(&u),
            -lg.value(&u),
            -(dot_f64(&u, &u) - h * h) / (2.0 * h),
        ];
        let mut step = solve3(m, b)?;
        let sn = norm_f64(&step);
        if sn > 0.5 * h {
            step.iter_mut().for_each(|s| *s *= 0.5 * h / sn);
        }
        for i in 0..3 {
            u[i] += step[i];
        }
        if sn <= 1e-15 * h {
            break;
        }
    }
    let cosang = dot_f64(&u, d) / norm_f64(&u);
    let ok = cosang >= CONE_ANGLE.cos()
        && lf.distance(&u) <= DISTANCE_TOL * h
        && lg.distance(&u) <= DISTANCE_TOL * h
        && ((norm_f64(&u) - h).abs() <= 1e-10 * h);
    ok.then_some(u)
}

/// `h d`, then the same tilted slightly off `d`; the straight guess can
/// sit where the Newton system is singular.
fn start_guesses(d: &[f64], h: f64) -> Vec<Vec<f64>> {
    let mut axis = [0.0; 3];
    axis[least_aligned_axis(d)] = 1.0;
    let p1 = cross_f64(d, &axis);
    let p1n = norm_f64(&p1);
    let p1: Vec<f64> = p1.iter().map(|x| x / p1n).collect();
    let p2 = cross_f64(d, &p1);
    let mut out = vec![d.iter().map(|x| x * h).collect()];
    for (e, sign) in [(&p1[..], 1.0), (&p2[..], 1.0), (&p1[..], -1.0), (&p2[..], -1.0)] {
        out.push((0..3).map(|i| h * (d[i] + 0.1 * sign * e[i])).collect());
    }
    out
}

/// Samples of the branch of `F = G = 0` leaving `P` along `direction`.
pub fn trace_space_branch(
    f: &RatPoly,
    g: &RatPoly,
    p: &[Rational],
    direction: &[f64],
    h0: f64,
    steps: usize,
) -> Result<Vec<TraceSample>> {
    check_steps(h0, steps)?;
    if f.nvars() != 3 || g.nvars() != 3 || direction.len() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            got: f.nvars().min(g.nvars()).min(direction.len()),
        });
    }
    let lf = Local::shifted(f, p)?;
    let lg = Local::shifted(g, p)?;
    let base = base_point(p);
    let d = unit(direction)?;
    let mut out: Vec<TraceSample> = Vec::new();
    for j in 0..steps {
        let h = h0 / 2f64.powi(j as i32);
        let guesses: Vec<Vec<f64>> = match out.last() {
            Some(s) => vec![s.offset.iter().map(|x| x * h / s.h).collect()],
            None => start_guesses(&d, h),
        };
        let found = guesses.iter().find_map(|g| sphere_point(&lf, &lg, g, &d, h));
        match found {
            Some(u) => out.push(TraceSample {
                point: base.iter().zip(&u).map(|(b, o)| b + o).collect(),
                residual: lf.value(&u).abs().max(lg.value(&u).abs()),
                offset: u,
                h,
            }),
            None if out.is_empty() && j >= 2 => return Err(Error::NoBranch),
            None => {}
        }
    }
    if out.is_empty() {
        return Err(Error::NoBranch);
    }
    Ok(out)
}

/// Derivatives at `s = 0` of the degree-4 interpolant through the base
/// point and four samples, parametrized by distance from the base point.
fn window_derivatives(w: &[TraceSample]) -> [[f64; 3]; 3] {
    let s0 = w[0].h;
    let s: Vec<f64> = w.iter().map(|x| x.h / s0).collect();
    // Vandermonde rows (s, s^2, s^3, s^4), solved by Gaussian elimination
    let mut out = [[0.0; 3]; 3];
    for comp in 0..3 {
        let mut a: Vec<[f64; 5]> = (0..4)
            .map(|i| [s[i], s[i].powi(2), s[i].powi(3), s[i].powi(4), w[i].offset[comp]])
            .collect();
        for col in 0..4 {
            let piv = (col..4)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap();
            a.swap(col, piv);
            for r in 0..4 {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    for k in col..5 {
                        a[r][k] -= f * a[col][k];
                    }
                }
            }
        }
        let coef: Vec<f64> = (0..4).map(|i| a[i][4] / a[i][i]).collect();
        out[0][comp] = coef[0] / s0;
        out[1][comp] = 2.0 * coef[1] / (s0 * s0);
        out[2][comp] = 6.0 * coef[2] / (s0 * s0 * s0);
    }
    out
}

fn frenet_of(d: &[[f64; 3]; 3]) -> (f64, f64) {
    let cr = cross_f64(&d[0], &d[1]);
    let crn = norm_f64(&cr);
    let k = crn / norm_f64(&d[0]).powi(3);
    let tau = if crn > 0.0 { dot_f64(&cr, &d[2]) / (crn * crn) } else { 0.0 };
    (k, tau)
}

/// Curvature and torsion at the base point from samples of one space
/// branch: derivatives of degree-4 interpolants over the first two windows
/// of four samples, combined by a Richardson step.
pub fn estimate_frenet(samples: &[TraceSample]) -> Result<(Estimate, f64)> {
    if samples.len() < 5 || samples.iter().any(|s| s.offset.len() != 3) {
        return Err(Error::InsufficientSamples {
            needed: 5,
            got: samples.len(),
        });
    }
    let (k0, t0) = frenet_of(&window_derivatives(&samples[0..4]));
    let (k1, t1) = frenet_of(&window_derivatives(&samples[1..5]));
    Ok((Estimate::new((4.0 * k1 - k0) / 3.0), (4.0 * t1 - t0) / 3.0))
}

/// Signed normal curvature of the surface `F = 0` at `P` along the unit
/// tangent `tangent`, traced on the normal section through `P`. Positive
/// when the section bends towards `normal`.
pub fn normal_curvature(
    f: &RatPoly,
    p: &[Rational],
    normal: &[f64],
    tangent: &[f64],
    h0: f64,
    steps: usize,
) -> Result<f64> {
    if f.nvars() != 3 || normal.len() != 3 || tangent.len() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            got: f.nvars(),
        });
    }
    let n = unit(normal)?;
    let e = unit(tangent)?;
    let local = Local::shifted(f, p)?;
    let sec = ring(&["a", "b"]);
    let a = ComplexPoly::var_at(sec.clone(), 0);
    let b = ComplexPoly::var_at(sec, 1);
    let map: Vec<ComplexPoly> = (0..3)
        .map(|i| &a.scale(&c(e[i])) + &b.scale(&c(n[i])))
        .collect();
    let section = Local::new(local.f.compose(&map)?);
    let traces = trace_local(&section, &[0.0, 0.0], &[1.0, 0.0], h0, steps, false)?;
    let samples = traces.into_iter().next().unwrap_or_default();
    let k = estimate_curvature(&samples)?;
    let side = samples.last().map(|s| s.offset[1]).unwrap_or(0.0);
    Ok(if side < 0.0 { -k.value } else { k.value })
}

/// `(K_G, K_M)` of the sheet tangent to the plane with the given normal,
/// from three normal sections 60 degrees apart; the sign of `K_M` refers to
/// `normal`. The first section is turned off the frame axis so that it is
/// unlikely to run along a line shared with another sheet.
pub fn surface_curvatures(
    f: &RatPoly,
    p: &[Rational],
    normal: &[f64],
    h0: f64,
    steps: usize,
) -> Result<(f64, f64)> {
    let n = unit(normal)?;
    let mut axis = [0.0; 3];
    axis[least_aligned_axis(&n)] = 1.0;
    let e1 = unit(&cross_f64(&n, &axis))?;
    let e2 = cross_f64(&n, &e1);
    let (mut mean, mut ca, mut sa) = (0.0, 0.0, 0.0);
    for i in 0..3 {
        let th = SECTION_OFFSET + i as f64 * std::f64::consts::PI / 3.0;
        let dir: Vec<f64> = (0..3).map(|j| th.cos() * e1[j] + th.sin() * e2[j]).collect();
        let k = normal_curvature(f, p, &n, &dir, h0, steps)?;
        mean += k / 3.0;
        ca += 2.0 * k * (2.0 * th).cos() / 3.0;
        sa += 2.0 * k * (2.0 * th).sin() / 3.0;
    }
    // k(th) = mean + ca cos 2th + sa sin 2th, so the principal curvatures
    // are mean +- |(ca, sa)|
    Ok((mean * mean - ca * ca - sa * sa, mean))
}
