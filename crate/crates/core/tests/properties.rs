mod common;

use common::*;
use proptest::prelude::*;
use singcurv::oracle;
use singcurv::plane;
use singcurv::ratpoly::{rat, rat_int, ring};
use singcurv::singular;
use singcurv::space;
use singcurv::surface;
use singcurv::{parse_poly, RatPoly, Rational};

fn term() -> impl Strategy<Value = ((i64, i64), Vec<u32>)> {
    ((-30i64..=30, 1i64..=7), proptest::collection::vec(0u32..=3, 3))
}

fn poly_from(terms: &[((i64, i64), Vec<u32>)], vars: &[&str]) -> RatPoly {
    let n = vars.len();
    RatPoly::from_terms(
        ring(vars),
        terms.iter().map(|((a, b), e)| (rat(*a, *b), e[..n].to_vec())),
    )
    .unwrap()
}

fn point(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|(a, b)| rat(*a, *b)).collect()
}

fn coords(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-6i64..=6, 1i64..=3), n)
}

fn regular(f: &RatPoly, p: &[Rational]) -> bool {
    !singular::gradient_at(f, p).unwrap().iter().all(|c| *c == rat_int(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_then_parse_is_identity(terms in proptest::collection::vec(term(), 0..8)) {
        let vars = ["x", "y", "z"];
        let f = poly_from(&terms, &vars);
        let back = parse_poly(&f.to_string(), &vars).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn plane_solver_matches_implicit_formula(
        terms in proptest::collection::vec(term(), 1..7),
        p in coords(2),
    ) {
        let p = point(&p);
        let f = through(&poly_from(&terms, &["x", "y"]), &p);
        prop_assume!(regular(&f, &p));
        let k = plane::regular_curvature_implicit(&f, &p).unwrap();
        let bs = plane::plane_branch_curvatures(&f, &p, None).unwrap();
        prop_assert_eq!(bs.len(), 1);
        prop_assert!(close(bs[0].curvature.value().unwrap(), k, 1e-9));
    }

    #[test]
    fn surface_solver_matches_implicit_formula(
        terms in proptest::collection::vec(term(), 1..7),
        p in coords(3),
    ) {
        let p = point(&p);
        let f = through(&poly_from(&terms, &["x", "y", "z"]), &p);
        prop_assume!(regular(&f, &p));
        let (kg, km) = surface::regular_surface_curvatures_implicit(&f, &p).unwrap();
        let bs = surface::surface_branch_curvatures(&f, &p, None).unwrap();
        prop_assert_eq!(bs.len(), 1);
        prop_assert!(close(bs[0].gauss.unwrap(), kg, 1e-9));
        prop_assert!(close(bs[0].mean_abs.unwrap(), km.abs(), 1e-9));
    }

    #[test]
    fn space_results_survive_swapping_the_surfaces(
        tf in proptest::collection::vec(term(), 1..5),
        tg in proptest::collection::vec(term(), 1..5),
        p in coords(3),
    ) {
        let p = point(&p);
        let vars = ["x", "y", "z"];
        let f = through(&poly_from(&tf, &vars), &p);
        let g = through(&poly_from(&tg, &vars), &p);
        let implicit = space::regular_space_frenet_implicit(&f, &g, &p);
        prop_assume!(implicit.is_ok());
        let (k, tau) = implicit.unwrap();
        let a = space::space_branch_frenet(&f, &g, &p, None).unwrap();
        let b = space::space_branch_frenet(&g, &f, &p, None).unwrap();
        prop_assert_eq!(a.len(), 1);
        prop_assert_eq!(b.len(), 1);
        for br in [&a[0], &b[0]] {
            prop_assert!(close(br.curvature.value().unwrap(), k, 1e-9));
            if let (Some(x), Some(y)) = (br.torsion.value(), tau) {
                prop_assert!(close(x, y, 1e-9));
            }
        }
    }

    #[test]
    fn plane_curvatures_do_not_depend_on_the_gauge(
        ex in 0usize..8,
        num in -20i64..=20,
        den in 1i64..=6,
    ) {
        let f = plane(PLANE_EXAMPLES[ex]);
        let lambda = rat(num, den);
        let base = plane::plane_branch_curvatures(&f, &origin(2), None).unwrap();
        let other = plane::plane_branch_curvatures_with_gauge(&f, &origin(2), None, &lambda).unwrap();
        prop_assert_eq!(base.len(), other.len());
        for (x, y) in base.iter().zip(&other) {
            prop_assert_eq!(x.curvature.is_finite(), y.curvature.is_finite());
            if let (Some(a), Some(b)) = (x.curvature.value(), y.curvature.value()) {
                prop_assert!(close(a, b, 1e-12));
            }
        }
    }

    #[test]
    fn rotations_and_dilations_of_plane_examples(
        ex in prop::sample::select(vec![0usize, 3, 4, 5, 6]),
        m in (-9i64..=9, 1i64..=5),
        s in (1i64..=9, 1i64..=5),
        t in coords(2),
    ) {
        let f = plane(PLANE_EXAMPLES[ex]);
        let o = origin(2);
        let ks = |f: &RatPoly, p: &[Rational]| -> Vec<f64> {
            let mut v: Vec<f64> = plane::plane_branch_curvatures(f, p, None)
                .unwrap()
                .iter()
                .filter_map(|b| b.curvature.value())
                .collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let base = ks(&f, &o);
        let (g, q) = move_rigid(&f, &o, &rot2(rat(m.0, m.1)), &point(&t));
        let moved = ks(&g, &q);
        prop_assert_eq!(moved.len(), base.len());
        for (a, b) in moved.iter().zip(&base) {
            prop_assert!(close(*a, *b, 1e-9));
        }
        let sf = s.0 as f64 / s.1 as f64;
        let (g, q) = dilate(&f, &o, &rat(s.0, s.1));
        let scaled = ks(&g, &q);
        for (a, b) in scaled.iter().zip(&base) {
            prop_assert!(close(*a, b / sf, 1e-9));
        }
    }

    #[test]
    fn flipping_the_normal_flips_mean_curvature(
        terms in proptest::collection::vec(term(), 1..6),
        p in coords(3),
    ) {
        let p = point(&p);
        let f = through(&poly_from(&terms, &["x", "y", "z"]), &p);
        prop_assume!(regular(&f, &p));
        let n = singular::gradient_at(&f, &p).unwrap();
        let k = n.iter().map(|c| c.clone() * c.clone()).enumerate()
            .min_by(|a, b| a.1.cmp(&b.1)).unwrap().0;
        let mut e = vec![rat_int(0); 3];
        e[k] = rat_int(1);
        let cross = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            (0..3).map(|i| {
                let (j, l) = ((i + 1) % 3, (i + 2) % 3);
                a[j].clone() * b[l].clone() - a[l].clone() * b[j].clone()
            }).collect()
        };
        let w = cross(&n, &e);
        let u = cross(&w, &n);
        let neg: Vec<Rational> = n.iter().map(|c| -c.clone()).collect();
        let up = surface::surface_curvatures_in_frame(&f, &p, &n, &u, &w, None).unwrap();
        let down = surface::surface_curvatures_in_frame(&f, &p, &neg, &u, &w, None).unwrap();
        prop_assert!(close(up.mean_signed.unwrap(), -down.mean_signed.unwrap(), 1e-12));
        prop_assert!(close(up.gauss.unwrap(), down.gauss.unwrap(), 1e-12));
    }

    #[test]
    fn traced_circle_samples_satisfy_the_equation(r in 1i64..=20, den in 1i64..=4) {
        let radius = rat(r, den);
        let f = plane(&format!("x^2+y^2-2*({radius})*x"));
        let s = oracle::trace_plane_branch(&f, &origin(2), &[0.0, 1.0], 1e-2, 12).unwrap();
        let scale = 1.0 + 2.0 * r as f64 / den as f64;
        prop_assert_eq!(s.len(), 12);
        prop_assert!(s.iter().all(|x| x.residual <= 1e-10 * scale));
        let k = oracle::estimate_curvature(&s).unwrap();
        let want = den as f64 / r as f64;
        prop_assert!(close(k.value, want, 1e-3));
    }
}
