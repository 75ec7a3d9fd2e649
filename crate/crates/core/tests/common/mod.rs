#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use singcurv::ratpoly::{rat, rat_int, ring};
use singcurv::{parse_poly, ComplexValue, ProjDirection, RatPoly, Rational};

pub const PLANE_EXAMPLES: [&str; 8] = [
    "x^3-x^2+y^2",
    "x^3+x^2+y^2",
    "x^3-y^2",
    "2x^4-3x^2y+y^2-2y^3+y^4",
    "x^4+x^2y^2-2x^2y-xy^2+y^2",
    "(x^2+y^2)^2+3x^2y-y^3",
    "(x^2+y^2)^3-4x^2y^2",
    "x^6-x^2y^3-y^5",
];

pub fn plane(s: &str) -> RatPoly {
    parse_poly(s, &["x", "y"]).unwrap()
}

pub fn space(s: &str) -> RatPoly {
    parse_poly(s, &["x", "y", "z"]).unwrap()
}

pub fn origin(n: usize) -> Vec<Rational> {
    vec![rat_int(0); n]
}

pub fn ex9(r: i64) -> RatPoly {
    plane(&format!("(x-y)*(x^2+y^2-2*{r}x)"))
}

pub fn s1(r: i64) -> RatPoly {
    space(&format!("(x-y)*(x^2+y^2+z^2-2*{r}x)"))
}

pub fn s2() -> RatPoly {
    space("x^4+y^2+y*z^2-z^2")
}

pub fn ex11() -> (RatPoly, RatPoly) {
    (space("x^2+y^2+z^2-2x"), space("x^2+2y-y*z+z"))
}

pub fn ex12(r1: i64, r2: i64) -> (RatPoly, RatPoly) {
    (space(&format!("x^2+y^2-2*{r1}x")), space(&format!("x^2+z^2-2*{r2}x")))
}

pub fn ex13() -> (RatPoly, RatPoly) {
    (s2(), space("x^2+y^2-2x"))
}

pub fn ex14() -> (RatPoly, RatPoly) {
    (s2(), space("x*y"))
}

/// Direction from (re, im) pairs.
pub fn dir(v: &[(f64, f64)]) -> ProjDirection {
    ProjDirection::from_complex(v.iter().map(|&(a, b)| ComplexValue::new(a, b)).collect(), 1)
}

pub fn same_dir(a: &ProjDirection, b: &ProjDirection) -> bool {
    a.same_direction(b, 1e-9)
}

/// `F(A y + b)`.
pub fn pullback(f: &RatPoly, a: &[Vec<Rational>], b: &[Rational]) -> RatPoly {
    let vars = f.vars().clone();
    let n = f.nvars();
    let map: Vec<RatPoly> = (0..n)
        .map(|i| {
            (0..n).fold(RatPoly::constant(vars.clone(), b[i].clone()), |acc, j| {
                &acc + &RatPoly::var_at(vars.clone(), j).scale(&a[i][j])
            })
        })
        .collect();
    f.compose(&map).unwrap()
}

pub fn mat_vec(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..a.len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let bt = transpose(b);
    a.iter().map(|r| mat_vec(&bt, r)).collect()
}

/// Rational rotation by the angle with cosine `(1-m^2)/(1+m^2)`.
pub fn rot2(m: Rational) -> Vec<Vec<Rational>> {
    let one = rat_int(1);
    let d = &one + &m * &m;
    let c = (&one - &m * &m) / &d;
    let s = (rat_int(2) * m) / d;
    vec![vec![c.clone(), -s.clone()], vec![s, c]]
}

/// Rotation about axis `k` of 3-space.
pub fn rot3(k: usize, m: Rational) -> Vec<Vec<Rational>> {
    let r = rot2(m);
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let mut out = vec![vec![rat_int(0); 3]; 3];
    out[k][k] = rat_int(1);
    out[i][i] = r[0][0].clone();
    out[i][j] = r[0][1].clone();
    out[j][i] = r[1][0].clone();
    out[j][j] = r[1][1].clone();
    out
}

/// Image of the variety under `x -> R x + t` and the image of `p`.
pub fn move_rigid(f: &RatPoly, p: &[Rational], r: &[Vec<Rational>], t: &[Rational]) -> (RatPoly, Vec<Rational>) {
    let rt = transpose(r);
    let b: Vec<Rational> = mat_vec(&rt, t).into_iter().map(|x| -x).collect();
    let q: Vec<Rational> = mat_vec(r, p).iter().zip(t).map(|(x, y)| x + y).collect();
    (pullback(f, &rt, &b), q)
}

/// Image of the variety under `x -> s x` and the image of `p`.
pub fn dilate(f: &RatPoly, p: &[Rational], s: &Rational) -> (RatPoly, Vec<Rational>) {
    let n = f.nvars();
    let inv = rat_int(1) / s;
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { inv.clone() } else { rat_int(0) }).collect())
        .collect();
    (pullback(f, &a, &origin(n)), p.iter().map(|x| x * s).collect())
}

pub fn random_rational(rng: &mut StdRng, lo: i64, hi: i64) -> Rational {
    let den = rng.gen_range(1..=3);
    rat(rng.gen_range(lo * den..=hi * den), den)
}

/// Random polynomial of total degree at most `deg` with integer
/// coefficients in [-5, 5].
pub fn random_poly(rng: &mut StdRng, vars: &[&str], deg: u32) -> RatPoly {
    let r = ring(vars);
    let nterms = rng.gen_range(2..=8);
    let terms = (0..nterms).map(|_| {
        let mut e = vec![0u32; vars.len()];
        let total = rng.gen_range(0..=deg);
        for _ in 0..total {
            e[rng.gen_range(0..vars.len())] += 1;
        }
        (rat_int(rng.gen_range(-5..=5)), e)
    });
    RatPoly::from_terms(r, terms).unwrap()
}

/// `F - F(P)`, so that `P` lies on the zero set.
pub fn through(f: &RatPoly, p: &[Rational]) -> RatPoly {
    let c = f.eval(p).unwrap();
    f - &RatPoly::constant(f.vars().clone(), c)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-12
}
