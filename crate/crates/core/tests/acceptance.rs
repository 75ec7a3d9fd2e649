//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line straight to
//! stdout, so the lines show up even when test output is captured.

mod common;

use std::io::Write;
use std::process::Command;

use common::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use singcurv::oracle;
use singcurv::plane::{self, Curvature, PlaneBranch};
use singcurv::ratpoly::{rat, rat_int};
use singcurv::singular;
use singcurv::space::{self, SpaceBranch};
use singcurv::surface;
use singcurv::{Error, ProjDirection, RatPoly, Rational};

type Check = Result<String, String>;

fn verdict(n: u32, title: &str, r: Check) {
    let line = match &r {
        Ok(d) => format!("criterion {n} ({title}): PASS  {d}\n"),
        Err(d) => format!("criterion {n} ({title}): FAIL  {d}\n"),
    };
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    if let Err(d) = r {
        panic!("criterion {n} failed: {d}");
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn branches(f: &RatPoly) -> Vec<PlaneBranch> {
    plane::plane_branch_curvatures(f, &origin(2), None).unwrap()
}

/// Branches on `tangent`; also checks that their multiplicities add up to the
/// tangent multiplicity.
fn on_tangent(bs: &[PlaneBranch], tangent: &[(f64, f64)], mult: u32) -> Result<Vec<PlaneBranch>, String> {
    let d = dir(tangent);
    let got: Vec<PlaneBranch> = bs.iter().filter(|b| same_dir(&b.tangent, &d)).cloned().collect();
    ensure(!got.is_empty(), || format!("no branch on tangent {tangent:?}"))?;
    ensure(got.iter().all(|b| b.tangent.multiplicity == mult), || {
        format!("tangent {tangent:?} has multiplicity {}, want {mult}", got[0].tangent.multiplicity)
    })?;
    let total: u32 = got.iter().map(|b| b.branch_multiplicity).sum();
    ensure(total == mult, || format!("branch multiplicities on {tangent:?} add to {total}, want {mult}"))?;
    Ok(got)
}

fn ks(bs: &[PlaneBranch]) -> Vec<Curvature> {
    bs.iter().map(|b| b.curvature).collect()
}

fn criterion_1() -> Check {
    let e: Vec<RatPoly> = PLANE_EXAMPLES.iter().map(|s| plane(s)).collect();
    let s3 = 3f64.sqrt();
    let root2_4 = 2f64.sqrt() / 4.0;

    let b = branches(&e[0]);
    ensure(b.len() == 2, || format!("ex1: {} branches", b.len()))?;
    for t in [[(1.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (-1.0, 0.0)]] {
        let g = on_tangent(&b, &t, 1)?;
        let k = g[0].curvature.value().ok_or("ex1: infinite")?;
        ensure((k - root2_4).abs() <= 1e-12, || format!("ex1: k = {k}"))?;
    }

    let b = branches(&e[1]);
    for t in [[(1.0, 0.0), (0.0, 1.0)], [(1.0, 0.0), (0.0, -1.0)]] {
        let g = on_tangent(&b, &t, 1)?;
        ensure(ks(&g) == [Curvature::Infinite], || "ex2: finite curvature".into())?;
    }

    let b = branches(&e[2]);
    let g = on_tangent(&b, &[(1.0, 0.0), (0.0, 0.0)], 2)?;
    ensure(ks(&g).iter().all(|k| *k == Curvature::Infinite), || "ex3: finite".into())?;

    let b = branches(&e[3]);
    let g = on_tangent(&b, &[(1.0, 0.0), (0.0, 0.0)], 2)?;
    let mut k4: Vec<f64> = g.iter().filter_map(|b| b.curvature.value()).collect();
    k4.sort_by(f64::total_cmp);
    ensure(k4 == [2.0, 4.0], || format!("ex4: {k4:?}"))?;

    let b = branches(&e[4]);
    let g = on_tangent(&b, &[(1.0, 0.0), (0.0, 0.0)], 2)?;
    ensure(ks(&g).iter().all(|k| *k == Curvature::Finite(2.0)), || format!("ex5: {:?}", ks(&g)))?;

    let b = branches(&e[5]);
    ensure(b.len() == 3, || format!("ex6: {} branches", b.len()))?;
    for t in [[(1.0, 0.0), (0.0, 0.0)], [(1.0, 0.0), (s3, 0.0)], [(1.0, 0.0), (-s3, 0.0)]] {
        let g = on_tangent(&b, &t, 1)?;
        let k = g[0].curvature.value().ok_or("ex6: infinite")?;
        ensure((k - 2.0 / 3.0).abs() <= 1e-12, || format!("ex6: k = {k}"))?;
    }
    let g = on_tangent(&b, &[(1.0, 0.0), (0.0, 0.0)], 1)?;
    ensure(g[0].curvature == Curvature::Finite(2.0 / 3.0), || "ex6: rational tangent not exact".into())?;

    let b = branches(&e[6]);
    for t in [[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 0.0)]] {
        let g = on_tangent(&b, &t, 2)?;
        ensure(ks(&g).iter().all(|k| *k == Curvature::Finite(1.0)), || format!("ex7: {:?}", ks(&g)))?;
    }

    let b = branches(&e[7]);
    let g = on_tangent(&b, &[(1.0, 0.0), (0.0, 0.0)], 3)?;
    ensure(ks(&g).iter().all(|k| *k == Curvature::Infinite), || "ex8: finite on (1,0)".into())?;
    for t in [[(1.0, 0.0), (0.0, 1.0)], [(1.0, 0.0), (0.0, -1.0)]] {
        let g = on_tangent(&b, &t, 1)?;
        ensure(ks(&g) == [Curvature::Infinite], || "ex8: finite on complex tangent".into())?;
    }
    Ok("eight examples match".into())
}

fn criterion_2() -> Check {
    let b = branches(&ex9(1));
    let line = on_tangent(&b, &[(1.0, 0.0), (1.0, 0.0)], 1)?;
    ensure(line[0].curvature == Curvature::Finite(0.0), || format!("line: {:?}", line[0].curvature))?;
    let circ = on_tangent(&b, &[(0.0, 0.0), (1.0, 0.0)], 1)?;
    ensure(circ[0].curvature == Curvature::Finite(1.0), || format!("circle: {:?}", circ[0].curvature))?;
    let b = branches(&ex9(3));
    let circ = on_tangent(&b, &[(0.0, 0.0), (1.0, 0.0)], 1)?;
    let k = circ[0].curvature.value().ok_or("R=3: infinite")?;
    ensure((k - 1.0 / 3.0).abs() <= 1e-12, || format!("R=3: k = {k}"))?;
    Ok(format!("R=1: 0 and 1; R=3: {k}"))
}

fn criterion_3() -> Check {
    let bs = surface::surface_branch_curvatures(&s1(1), &origin(3), None).map_err(|e| e.to_string())?;
    ensure(bs.len() == 2, || format!("S1: {} branches", bs.len()))?;
    for b in &bs {
        let is_plane = same_dir(&b.normal, &dir(&[(1.0, 0.0), (-1.0, 0.0), (0.0, 0.0)]));
        let want = if is_plane { (0.0, 0.0) } else { (1.0, 1.0) };
        ensure(b.gauss == Some(want.0) && b.mean_abs == Some(want.1), || {
            format!("S1 branch {:?}: K_G {:?} |K_M| {:?}", b.normal.components, b.gauss, b.mean_abs)
        })?;
    }
    let bs = surface::surface_branch_curvatures(&s2(), &origin(3), None).map_err(|e| e.to_string())?;
    ensure(bs.len() == 2, || format!("S2: {} branches", bs.len()))?;
    for b in &bs {
        let kg = b.gauss.ok_or("S2: no K_G")?;
        let km = b.mean_abs.ok_or("S2: no K_M")?;
        ensure(kg.abs() <= 1e-12 && (km - 2f64.sqrt() / 8.0).abs() <= 1e-10, || {
            format!("S2: K_G {kg} |K_M| {km}")
        })?;
    }
    Ok("S1 exact, S2 within tolerance".into())
}

fn frenet(f: &RatPoly, g: &RatPoly) -> Result<Vec<SpaceBranch>, String> {
    space::space_branch_frenet(f, g, &origin(3), None).map_err(|e| e.to_string())
}

fn kt(b: &SpaceBranch) -> Result<(f64, f64), String> {
    Ok((
        b.curvature.value().ok_or("infinite curvature")?,
        b.torsion.value().ok_or("undetermined torsion")?,
    ))
}

fn criterion_4() -> Check {
    let (f, g) = ex11();
    let bs = frenet(&f, &g)?;
    ensure(bs.len() == 1, || format!("ex11: {} branches", bs.len()))?;
    let (k, t) = kt(&bs[0])?;
    ensure(
        (k - (141f64 / 125.0).sqrt()).abs() <= 1e-10 && (t + 36.0 / 141.0).abs() <= 1e-10,
        || format!("ex11: k {k} tau {t}"),
    )?;

    let (f, g) = ex12(1, 1);
    let bs = frenet(&f, &g)?;
    ensure(bs.len() == 2, || format!("ex12a: {} branches", bs.len()))?;
    for b in &bs {
        let (k, t) = kt(b)?;
        ensure((k - 0.5).abs() <= 1e-10 && t.abs() <= 1e-10, || format!("ex12a: k {k} tau {t}"))?;
    }

    let (f, g) = ex12(1, 2);
    let bs = frenet(&f, &g)?;
    ensure(bs.len() == 2, || format!("ex12b: {} branches", bs.len()))?;
    let want = 1.0 / (4.0 * 2f64.sqrt());
    let (k0, t0) = kt(&bs[0])?;
    let (k1, t1) = kt(&bs[1])?;
    ensure(
        (k0 - 1.0 / 3.0).abs() <= 1e-10
            && (k1 - 1.0 / 3.0).abs() <= 1e-10
            && (t0.abs() - want).abs() <= 1e-10
            && (t0 + t1).abs() <= 1e-10,
        || format!("ex12b: ({k0}, {t0}) ({k1}, {t1})"),
    )?;

    let (f, g) = ex13();
    let bs = frenet(&f, &g)?;
    ensure(bs.len() == 2, || format!("ex13: {} branches", bs.len()))?;
    let (k0, t0) = kt(&bs[0])?;
    let (k1, t1) = kt(&bs[1])?;
    let kw = 3f64.sqrt() / (2.0 * 2f64.sqrt());
    ensure(
        (k0 - kw).abs() <= 1e-10 && (k1 - kw).abs() <= 1e-10 && (t0.abs() - 0.75).abs() <= 1e-10 && (t0 + t1).abs() <= 1e-10,
        || format!("ex13: ({k0}, {t0}) ({k1}, {t1})"),
    )?;

    let (f, g) = ex14();
    let bs = frenet(&f, &g)?;
    ensure(bs.len() == 3, || format!("ex14: {} branches", bs.len()))?;
    for b in &bs {
        let (k, t) = kt(b)?;
        if same_dir(&b.tangent, &dir(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)])) {
            ensure(k == 2.0 && t == 0.0 && b.branch_multiplicity == 2, || {
                format!("ex14 (1,0,0): k {k} tau {t} mult {}", b.branch_multiplicity)
            })?;
        } else {
            let ok_dir = [1.0, -1.0]
                .iter()
                .any(|s| same_dir(&b.tangent, &dir(&[(0.0, 0.0), (1.0, 0.0), (*s, 0.0)])));
            ensure(ok_dir && (k - 1.0 / (2.0 * 2f64.sqrt())).abs() <= 1e-12 && t == 0.0, || {
                format!("ex14 {:?}: k {k} tau {t}", b.tangent.components)
            })?;
        }
    }
    Ok("examples 11-14 match".into())
}

fn random_point(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng, -2, 2)).collect()
}

fn criterion_5() -> Check {
    let mut rng = StdRng::seed_from_u64(5);
    let (mut worst, mut counts) = (0f64, [0usize; 3]);
    let mut note = |a: f64, b: f64, what: &str| -> Result<(), String> {
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-300));
        ensure(close(a, b, 1e-8), || format!("{what}: {a} vs {b}"))
    };
    while counts[0] < 100 {
        let p = random_point(&mut rng, 2);
        let f = through(&random_poly(&mut rng, &["x", "y"], 4), &p);
        if singular::gradient_at(&f, &p).unwrap().iter().all(|c| *c == rat_int(0)) {
            continue;
        }
        let implicit = plane::regular_curvature_implicit(&f, &p).map_err(|e| e.to_string())?;
        let bs = plane::plane_branch_curvatures(&f, &p, None).map_err(|e| format!("{f}: {e}"))?;
        ensure(bs.len() == 1, || format!("{f} at {p:?}: {} branches", bs.len()))?;
        let k = bs[0].curvature.value().ok_or("infinite at regular point")?;
        note(k, implicit, &format!("curve {f} at {p:?}"))?;
        counts[0] += 1;
    }
    while counts[1] < 100 {
        let p = random_point(&mut rng, 3);
        let f = through(&random_poly(&mut rng, &["x", "y", "z"], 4), &p);
        if singular::gradient_at(&f, &p).unwrap().iter().all(|c| *c == rat_int(0)) {
            continue;
        }
        let (kg, km) = surface::regular_surface_curvatures_implicit(&f, &p).map_err(|e| e.to_string())?;
        let bs = surface::surface_branch_curvatures(&f, &p, None).map_err(|e| format!("{f}: {e}"))?;
        ensure(bs.len() == 1, || format!("{f}: {} branches", bs.len()))?;
        note(bs[0].gauss.ok_or("no K_G")?, kg, &format!("K_G of {f} at {p:?}"))?;
        note(bs[0].mean_abs.ok_or("no K_M")?, km.abs(), &format!("K_M of {f} at {p:?}"))?;
        counts[1] += 1;
    }
    while counts[2] < 100 {
        let p = random_point(&mut rng, 3);
        let f = through(&random_poly(&mut rng, &["x", "y", "z"], 4), &p);
        let g = through(&random_poly(&mut rng, &["x", "y", "z"], 4), &p);
        let (Ok((k, tau)), true) = (
            space::regular_space_frenet_implicit(&f, &g, &p),
            f.total_degree().unwrap_or(0) > 0 && g.total_degree().unwrap_or(0) > 0,
        ) else {
            continue;
        };
        let bs = space::space_branch_frenet(&f, &g, &p, None).map_err(|e| format!("{f}, {g}: {e}"))?;
        ensure(bs.len() == 1, || format!("{f}, {g}: {} branches", bs.len()))?;
        note(bs[0].curvature.value().ok_or("infinite")?, k, &format!("k of {f}, {g} at {p:?}"))?;
        match (bs[0].torsion.value(), tau) {
            (Some(a), Some(b)) => note(a, b, &format!("tau of {f}, {g} at {p:?}"))?,
            (a, b) => ensure(a.is_none() == b.is_none() || k == 0.0, || format!("torsion {a:?} vs {b:?}"))?,
        }
        counts[2] += 1;
    }
    Ok(format!("300 random regular points, worst relative gap {worst:.1e}"))
}

fn finite_plane(f: &RatPoly, p: &[Rational]) -> Vec<f64> {
    let mut v: Vec<f64> = plane::plane_branch_curvatures(f, p, None)
        .unwrap()
        .iter()
        .filter_map(|b| b.curvature.value())
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

fn surface_pairs(f: &RatPoly, p: &[Rational]) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = surface::surface_branch_curvatures(f, p, None)
        .unwrap()
        .iter()
        .filter_map(|b| Some((b.gauss?, b.mean_abs?)))
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    v
}

fn space_pairs(f: &RatPoly, g: &RatPoly, p: &[Rational]) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = space::space_branch_frenet(f, g, p, None)
        .unwrap()
        .iter()
        .filter_map(|b| Some((b.curvature.value()?, b.torsion.value()?)))
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    v
}

fn same_lists(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(*x, *y, tol))
}

fn same_pairs(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(x.0, y.0, tol) && close(x.1, y.1, tol))
}

fn criterion_6() -> Check {
    let curves: Vec<RatPoly> = [0, 3, 4, 5, 6].iter().map(|&i| plane(PLANE_EXAMPLES[i])).chain([ex9(1), ex9(2)]).collect();
    let o2 = origin(2);
    let o3 = origin(3);
    let c = rat(-7, 3);
    let s = rat(3, 2);
    let s_f = 1.5;
    let rot = rot2(rat(1, 2));
    let shift = vec![rat(1, 2), rat(-2, 1)];
    for f in &curves {
        let base = finite_plane(f, &o2);
        let scaled_f = finite_plane(&f.scale(&c), &o2);
        ensure(same_lists(&scaled_f, &base, 1e-12), || format!("scaling changes {f}: {scaled_f:?} vs {base:?}"))?;
        let (g, q) = move_rigid(f, &o2, &rot, &shift);
        ensure(same_lists(&finite_plane(&g, &q), &base, 1e-9), || format!("rotation changes {f}"))?;
        let (g, q) = dilate(f, &o2, &s);
        let scaled: Vec<f64> = base.iter().map(|k| k / s_f).collect();
        ensure(same_lists(&finite_plane(&g, &q), &scaled, 1e-9), || format!("dilation of {f}"))?;
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..5 {
            let lambda = random_rational(&mut rng, -4, 4);
            let mut v: Vec<f64> = plane::plane_branch_curvatures_with_gauge(f, &o2, None, &lambda)
                .unwrap()
                .iter()
                .filter_map(|b| b.curvature.value())
                .collect();
            v.sort_by(f64::total_cmp);
            ensure(same_lists(&v, &base, 1e-12), || format!("gauge {lambda} changes {f}: {v:?} vs {base:?}"))?;
        }
    }

    let r3 = mat_mul(&rot3(2, rat(1, 2)), &rot3(0, rat(1, 3)));
    let t3 = vec![rat(1, 3), rat(-1, 1), rat(2, 1)];
    for f in [s1(1), s2(), space("x^2+y^2+z^2-2z")] {
        let base = surface_pairs(&f, &o3);
        ensure(same_pairs(&surface_pairs(&f.scale(&c), &o3), &base, 1e-12), || format!("scaling changes {f}"))?;
        let (g, q) = move_rigid(&f, &o3, &r3, &t3);
        ensure(same_pairs(&surface_pairs(&g, &q), &base, 1e-9), || format!("rotation changes {f}"))?;
        let (g, q) = dilate(&f, &o3, &s);
        let scaled: Vec<(f64, f64)> = base.iter().map(|(kg, km)| (kg / (s_f * s_f), km / s_f)).collect();
        ensure(same_pairs(&surface_pairs(&g, &q), &scaled, 1e-9), || format!("dilation of {f}"))?;
    }
    // normal flip on S2's sheet with normal (0, 1, 1)
    let n = vec![rat_int(0), rat_int(1), rat_int(1)];
    let u = vec![rat_int(1), rat_int(0), rat_int(0)];
    let w = vec![rat_int(0), rat_int(1), rat_int(-1)];
    let neg = |v: &[Rational]| -> Vec<Rational> { v.iter().map(|x| -x).collect() };
    let up = surface::surface_curvatures_in_frame(&s2(), &o3, &n, &u, &w, None).map_err(|e| e.to_string())?;
    let down = surface::surface_curvatures_in_frame(&s2(), &o3, &neg(&n), &u, &w, None).map_err(|e| e.to_string())?;
    let (a, b) = (up.mean_signed.ok_or("no K_M")?, down.mean_signed.ok_or("no K_M")?);
    ensure(a != 0.0 && close(a, -b, 1e-12) && up.gauss == down.gauss, || format!("normal flip: {a} vs {b}"))?;

    for (f, g) in [ex11(), ex12(1, 2), ex13(), ex14()] {
        let base = space_pairs(&f, &g, &o3);
        ensure(same_pairs(&space_pairs(&g, &f, &o3), &base, 1e-12), || format!("swap changes {f}, {g}"))?;
        ensure(same_pairs(&space_pairs(&f.scale(&c), &g, &o3), &base, 1e-12), || format!("scaling {f}"))?;
        let (f2, q) = move_rigid(&f, &o3, &r3, &t3);
        let (g2, _) = move_rigid(&g, &o3, &r3, &t3);
        ensure(same_pairs(&space_pairs(&f2, &g2, &q), &base, 1e-9), || format!("rotation of {f}, {g}"))?;
        let (f2, q) = dilate(&f, &o3, &s);
        let (g2, _) = dilate(&g, &o3, &s);
        let scaled: Vec<(f64, f64)> = base.iter().map(|(k, t)| (k / s_f, t / s_f)).collect();
        ensure(same_pairs(&space_pairs(&f2, &g2, &q), &scaled, 1e-9), || format!("dilation of {f}, {g}"))?;
        for b in space::space_branch_frenet(&f, &g, &o3, None).unwrap() {
            let rev = ProjDirection {
                exact: b.tangent.exact.as_ref().map(|v| neg(v)),
                ..b.tangent.clone()
            };
            let again = space::space_branch_frenet_along(&f, &g, &o3, &rev, None).unwrap();
            let (k, t) = kt(&b)?;
            ensure(
                again.iter().any(|x| kt(x).is_ok_and(|(k2, t2)| close(k, k2, 1e-12) && close(t, t2, 1e-12))),
                || format!("reversing {:?} changes k, tau", b.tangent.components),
            )?;
        }
    }
    Ok("scaling, isometries, dilations, gauge, orientation, swap".into())
}

fn criterion_7() -> Check {
    let mut worst: f64 = 0.0;
    let curves: Vec<RatPoly> = [0, 3, 4, 5, 6].iter().map(|&i| plane(PLANE_EXAMPLES[i])).chain([ex9(1)]).collect();
    for f in &curves {
        for b in branches(f) {
            let (Some(d), Some(k)) = (b.tangent.real_vector(), b.curvature.value()) else {
                continue;
            };
            let back: Vec<f64> = d.iter().map(|x| -x).collect();
            let traces = oracle::trace_plane_branches(f, &origin(2), &d, 1e-2, 12)
                .or_else(|_| oracle::trace_plane_branches(f, &origin(2), &back, 1e-2, 12))
                .map_err(|e| format!("{f}: {e}"))?;
            let best = traces
                .iter()
                .filter_map(|t| oracle::estimate_curvature(t).ok())
                .map(|e| (e.value - k).abs() / k.max(1e-300))
                .fold(f64::INFINITY, f64::min);
            let gap = if k == 0.0 {
                traces
                    .iter()
                    .filter_map(|t| oracle::estimate_curvature(t).ok())
                    .map(|e| e.value.abs())
                    .fold(f64::INFINITY, f64::min)
            } else {
                best
            };
            ensure(gap <= 1e-2, || format!("{f} along {d:?}: solver {k}, oracle off by {gap:e}"))?;
            worst = worst.max(gap);
        }
    }
    for (f, g) in [ex12(1, 1), ex12(1, 2), ex13()] {
        for b in frenet(&f, &g)? {
            let d = b.tangent.real_vector().ok_or("complex tangent")?;
            let (k, t) = kt(&b)?;
            let samples = oracle::trace_space_branch(&f, &g, &origin(3), &d, 1e-2, 12).map_err(|e| e.to_string())?;
            let (ko, to) = oracle::estimate_frenet(&samples).map_err(|e| e.to_string())?;
            ensure(close(ko.value, k, 1e-2) && (to - t).abs() <= 5e-2, || {
                format!("{f}, {g}: solver ({k}, {t}), oracle ({}, {to})", ko.value)
            })?;
            worst = worst.max((ko.value - k).abs() / k);
        }
    }
    let cusp = oracle::trace_plane_branch(&plane(PLANE_EXAMPLES[2]), &origin(2), &[1.0, 0.0], 1e-2, 30)
        .map_err(|e| e.to_string())?;
    let est = oracle::estimate_curvature(&cusp).map_err(|e| e.to_string())?;
    ensure(est.value > 1e4, || format!("cusp estimate {}", est.value))?;
    Ok(format!("worst relative curvature gap {worst:.1e}; cusp estimate {:.3e}", est.value))
}

fn criterion_8() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..1000 {
        let vars = ["x", "y", "z"];
        let mut f = random_poly(&mut rng, &vars, 5);
        let c = random_rational(&mut rng, -9, 9);
        if c != rat_int(0) {
            f = f.scale(&c);
        }
        let text = f.to_string();
        let back = singcurv::parse_poly(&text, &vars).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == f, || format!("round trip of {text} gives {back}"))?;
    }
    let want = [2, 2, 2, 2, 2, 3, 4, 5];
    for (s, r) in PLANE_EXAMPLES.iter().zip(want) {
        let m = singular::multiplicity(&plane(s), &origin(2)).map_err(|e| e.to_string())?;
        ensure(m == r, || format!("{s}: multiplicity {m}, want {r}"))?;
    }
    Ok("1000 round trips; example multiplicities 2,2,2,2,2,3,4,5".into())
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_singcurv")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_9() -> Check {
    let r = surface::surface_branch_curvatures(&space("x^2+y^2-z^2"), &origin(3), None);
    ensure(matches!(r, Err(Error::NonLinearTangentCone { .. })), || format!("cone: {r:?}"))?;
    let r = plane::plane_branch_curvatures(&plane("x^2+y^2-1"), &[rat_int(2), rat_int(0)], None);
    ensure(matches!(r, Err(Error::PointNotOnVariety { .. })), || format!("off variety: {r:?}"))?;
    let (code, out) = cli(&["surface", "--f", "x^2+y^2-z^2", "--point", "0,0,0", "--json"]);
    ensure(code == 3 && out.contains("NonLinearTangentCone"), || format!("cone via cli: exit {code}"))?;
    let (code, out) = cli(&["plane", "--f", "x^2+y^2-1", "--point", "2,0", "--json"]);
    ensure(code == 2 && out.contains("PointNotOnVariety"), || format!("off variety via cli: exit {code}"))?;
    let (code, _) = cli(&["trace", "--f", PLANE_EXAMPLES[1], "--point", "0,0", "--direction", "1,0"]);
    ensure(code == 3, || format!("isolated point trace: exit {code}"))?;
    let (code, _) = cli(&["plane", "--f", "x^^2", "--point", "0,0"]);
    ensure(code == 2, || format!("syntax error: exit {code}"))?;
    Ok("library errors and exit codes 2/3".into())
}

#[test]
fn criterion_1_plane_table() {
    verdict(1, "plane table", criterion_1());
}

#[test]
fn criterion_2_reducible_curve() {
    verdict(2, "reducible curve", criterion_2());
}

#[test]
fn criterion_3_surfaces() {
    verdict(3, "surfaces", criterion_3());
}

#[test]
fn criterion_4_space_curves() {
    verdict(4, "space curves", criterion_4());
}

#[test]
fn criterion_5_regular_equivalence() {
    verdict(5, "regular-point equivalence", criterion_5());
}

#[test]
fn criterion_6_invariance() {
    verdict(6, "invariance", criterion_6());
}

#[test]
fn criterion_7_oracle() {
    verdict(7, "oracle cross-checks", criterion_7());
}

#[test]
fn criterion_8_parser() {
    verdict(8, "parser", criterion_8());
}

#[test]
fn criterion_9_errors() {
    verdict(9, "error paths", criterion_9());
}
