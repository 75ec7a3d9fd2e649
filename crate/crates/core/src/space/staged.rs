//! Order-by-order elimination for the jet of a space-curve branch along a
//! fixed tangent `v`.
//!
//! Jet: `r(t) = P + v t + (m1 n1 + m2 n2) t^2/2 + sum_k (r_k0 v + r_k1 n1 +
//! r_k2 n2) t^k/k!` with `n1 = e x v`, `n2 = v x n1`. Unknowns live in one
//! ring; every elimination is recorded as a substitution `subst[var]`, so a
//! variable is fixed once its substitution is constant.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{axis, cross, cross_f64, det3, least_aligned_axis, norm_f64};
use crate::numkit::{affine_system, roots_all, roots_all_exact, solve_affine, Solution, UniPoly};
use crate::ratpoly::{rat, ring, Coeff, ComplexValue, Poly, Rational};

const M1: usize = 1;
const M2: usize = 2;
const REDUCE_LIMIT: usize = 200;

fn rho(k: u32, j: usize) -> usize {
    3 + 3 * (k as usize - 3) + j
}

fn jet_ring(max_order: u32) -> Arc<[String]> {
    let mut names = vec!["t".to_string(), "m1".to_string(), "m2".to_string()];
    for k in 3..=max_order {
        for j in 0..3 {
            names.push(format!("r{k}_{j}"));
        }
    }
    ring(&names)
}

/// Result of one branch of the elimination.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Outcome {
    Finite {
        k: f64,
        torsion: Option<f64>,
        weight: u32,
    },
    Cusp {
        weight: u32,
    },
    Complex {
        weight: u32,
    },
}

pub(crate) struct Problem<C: Coeff> {
    f: Poly<C>,
    g: Poly<C>,
    v: Vec<C>,
    n1: Vec<C>,
    n2: Vec<C>,
    vars: Arc<[String]>,
    max_order: u32,
    scale: f64,
}

impl<C: Coeff> Problem<C> {
    /// `f`, `g` are already shifted so that the point is the origin.
    pub(crate) fn new(f: Poly<C>, g: Poly<C>, v: Vec<C>, max_order: u32) -> Self {
        let vf: Vec<f64> = v.iter().map(|c| c.to_complex().re).collect();
        let e: [C; 3] = axis(least_aligned_axis(&vf));
        let n1 = cross(&e, &v).to_vec();
        let n2 = cross(&v, &n1).to_vec();
        let scale = f.max_coeff().max(g.max_coeff());
        Problem {
            f,
            g,
            v,
            n1,
            n2,
            vars: jet_ring(max_order.max(2)),
            max_order,
            scale,
        }
    }

    fn complexify(&self) -> Problem<ComplexValue> {
        let cv = |v: &[C]| v.iter().map(Coeff::to_complex).collect();
        Problem {
            f: self.f.to_complex(),
            g: self.g.to_complex(),
            v: cv(&self.v),
            n1: cv(&self.n1),
            n2: cv(&self.n2),
            vars: self.vars.clone(),
            max_order: self.max_order,
            scale: self.scale,
        }
    }

    fn var(&self, i: usize) -> Poly<C> {
        Poly::var_at(self.vars.clone(), i)
    }

    fn constant(&self, c: C) -> Poly<C> {
        Poly::constant(self.vars.clone(), c)
    }

    fn basis(&self) -> [&[C]; 3] {
        [&self.v, &self.n1, &self.n2]
    }

    /// Coefficient of `t^order` in `h(r(t))` under the current substitution.
    fn order_coefficient(&self, h: &Poly<C>, subst: &[Poly<C>], order: u32) -> Result<Poly<C>> {
        let t = self.var(0);
        let half = C::from_rational(&rat(1, 2));
        let mut map = Vec::with_capacity(3);
        for c in 0..3 {
            let mut x = t.scale(&self.v[c]);
            let acc = &subst[M1].scale(&self.n1[c]) + &subst[M2].scale(&self.n2[c]);
            x = &x + &(&acc * &t.pow(2)).scale(&half);
            let mut fact = Rational::from_integer(2.into());
            for k in 3..=order {
                fact *= Rational::from_integer(k.into());
                let mut block = Poly::zero(self.vars.clone());
                for (j, b) in self.basis().iter().enumerate() {
                    block = &block + &subst[rho(k, j)].scale(&b[c]);
                }
                let w = C::from_rational(&(Rational::from_integer(1.into()) / fact.clone()));
                x = &x + &(&block * &t.pow(k)).scale(&w);
            }
            map.push(x);
        }
        Ok(h.compose_truncated(&map, 0, order)?.coefficient_of(0, order))
    }
}

#[derive(Clone)]
struct State<C: Coeff> {
    subst: Vec<Poly<C>>,
    pending: Vec<Poly<C>>,
    weight: u32,
    order: u32,
}

impl<C: Coeff> State<C> {
    fn complexify(&self) -> State<ComplexValue> {
        State {
            subst: self.subst.iter().map(Poly::to_complex).collect(),
            pending: self.pending.iter().map(Poly::to_complex).collect(),
            weight: self.weight,
            order: self.order,
        }
    }

    fn fixed(&self, var: usize) -> Option<C> {
        let s = &self.subst[var];
        s.is_constant().then(|| s.constant_term())
    }

    /// Applies `var -> value` (or a whole elimination map) everywhere. In
    /// floating point, round-off terms are dropped from the substitutions so
    /// that fixed variables show up as constants.
    fn apply(&mut self, map: &[Poly<C>]) -> Result<()> {
        for s in self.subst.iter_mut() {
            let next = s.compose(map)?;
            *s = next.prune(next.max_coeff().max(1.0));
        }
        for e in self.pending.iter_mut() {
            *e = e.compose(map)?;
        }
        Ok(())
    }
}

enum Step<C: Coeff> {
    Contradiction,
    Branch(usize, Poly<C>),
    Stuck,
}

/// All branch outcomes along the problem's tangent.
pub(crate) fn solve<C: Coeff>(prob: &Problem<C>) -> Result<Vec<Outcome>> {
    let n = prob.vars.len();
    let st = State {
        subst: (0..n).map(|i| prob.var(i)).collect(),
        pending: Vec::new(),
        weight: 1,
        order: 1,
    };
    let mut out = Vec::new();
    run(prob, st, &mut out)?;
    Ok(out)
}

fn run<C: Coeff>(prob: &Problem<C>, mut st: State<C>, out: &mut Vec<Outcome>) -> Result<()> {
    while st.order <= prob.max_order {
        let i = st.order;
        for h in [&prob.f, &prob.g] {
            let e = prob.order_coefficient(h, &st.subst, i)?;
            st.pending.push(e);
        }
        st.order += 1;
        match reduce(prob, &mut st)? {
            Step::Contradiction => {
                out.push(finish(prob, &st, false).unwrap_or(Outcome::Cusp { weight: st.weight }));
                return Ok(());
            }
            Step::Branch(var, poly) => return branch(prob, st, var, &poly, out),
            Step::Stuck => {}
        }
        if let Some(o) = finish(prob, &st, true) {
            out.push(o);
            return Ok(());
        }
    }
    match finish(prob, &st, false) {
        Some(o) => {
            out.push(o);
            Ok(())
        }
        None => Err(Error::OrderExhausted {
            max_order: prob.max_order,
        }),
    }
}

fn reduce<C: Coeff>(prob: &Problem<C>, st: &mut State<C>) -> Result<Step<C>> {
    let n = prob.vars.len();
    for _ in 0..REDUCE_LIMIT {
        st.pending = st
            .pending
            .iter()
            .map(|e| e.prune(e.max_coeff().max(prob.scale)))
            .filter(|e| !e.is_zero())
            .collect();
        if st.pending.iter().any(Poly::is_constant) {
            return Ok(Step::Contradiction);
        }
        let affine: Vec<Poly<C>> = st
            .pending
            .iter()
            .filter(|e| e.total_degree() <= Some(1))
            .cloned()
            .collect();
        if !affine.is_empty() {
            // highest blocks first, so that pivots eliminate them in terms of
            // lower-order unknowns
            let unknowns: Vec<usize> = (1..n).rev().collect();
            let sys = affine_system(&affine, &unknowns).expect("affine equations");
            let mut map: Vec<Poly<C>> = (0..n).map(|i| prob.var(i)).collect();
            match solve_affine(&sys) {
                Solution::Inconsistent => return Ok(Step::Contradiction),
                Solution::Unique(x) => {
                    for (k, &u) in unknowns.iter().enumerate() {
                        map[u] = prob.constant(x[k].clone());
                    }
                }
                Solution::Underdetermined {
                    free,
                    particular,
                    nullspace,
                } => {
                    for (k, &u) in unknowns.iter().enumerate() {
                        if free.contains(&k) {
                            continue;
                        }
                        let mut expr = prob.constant(particular[k].clone());
                        for (fi, &fk) in free.iter().enumerate() {
                            let c = nullspace[fi][k].clone();
                            if !c.is_zero() {
                                expr = &expr + &prob.var(unknowns[fk]).scale(&c);
                            }
                        }
                        map[u] = expr;
                    }
                }
            }
            st.apply(&map)?;
            continue;
        }
        if let Some(e) = st.pending.iter().find(|e| e.support_vars().len() == 1) {
            let var = e.support_vars()[0];
            return Ok(Step::Branch(var, e.clone()));
        }
        return Ok(Step::Stuck);
    }
    Ok(Step::Stuck)
}

fn branch<C: Coeff>(
    prob: &Problem<C>,
    st: State<C>,
    var: usize,
    poly: &Poly<C>,
    out: &mut Vec<Outcome>,
) -> Result<()> {
    let deg = poly.degree_in(var);
    let coeffs: Vec<C> = (0..=deg)
        .map(|k| poly.coefficient_of(var, k).constant_term())
        .collect();
    let roots: Vec<(ComplexValue, u32, Option<C>)> = if C::EXACT {
        let rc: Vec<Rational> = coeffs.iter().map(|c| c.as_rational().expect("exact")).collect();
        roots_all_exact(&rc)?
            .into_iter()
            .map(|r| {
                let val = r.exact.as_ref().map(C::from_rational);
                (r.value, r.multiplicity, val)
            })
            .collect()
    } else {
        let zc: Vec<ComplexValue> = coeffs.iter().map(Coeff::to_complex).collect();
        roots_all(&UniPoly::new(zc)?)?
            .into_iter()
            .map(|r| (r.value, r.multiplicity, C::from_complex(r.value)))
            .collect()
    };
    for (z, m, val) in roots {
        let weight = st.weight * m;
        if z.im != 0.0 {
            out.push(Outcome::Complex { weight });
            continue;
        }
        match val {
            Some(c) => {
                let mut next = st.clone();
                next.weight = weight;
                let mut map: Vec<Poly<C>> = (0..prob.vars.len()).map(|i| prob.var(i)).collect();
                map[var] = prob.constant(c);
                next.apply(&map)?;
                run(prob, next, out)?;
            }
            None => {
                // irrational root: continue this branch in floating point
                let cp = prob.complexify();
                let mut next = st.complexify();
                next.weight = weight;
                let mut map: Vec<Poly<ComplexValue>> = (0..cp.vars.len()).map(|i| cp.var(i)).collect();
                map[var] = cp.constant(z);
                next.apply(&map)?;
                run(&cp, next, out)?;
            }
        }
    }
    Ok(())
}

/// Curvature (and torsion when determined) once the second-order block is
/// fixed. With `need_torsion`, returns `None` until the torsion is known.
fn finish<C: Coeff>(prob: &Problem<C>, st: &State<C>, need_torsion: bool) -> Option<Outcome> {
    let m1 = st.fixed(M1)?;
    let m2 = st.fixed(M2)?;
    let weight = st.weight;
    let acc: Vec<C> = (0..3)
        .map(|c| prob.n1[c].clone() * m1.clone() + prob.n2[c].clone() * m2.clone())
        .collect();
    let accz: Vec<ComplexValue> = acc.iter().map(Coeff::to_complex).collect();
    let asize = accz.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if accz.iter().any(|z| z.im.abs() > 1e-9 * asize) {
        return Some(Outcome::Complex { weight });
    }
    let vf: Vec<f64> = prob.v.iter().map(|c| c.to_complex().re).collect();
    let af: Vec<f64> = accz.iter().map(|z| z.re).collect();
    let vn = norm_f64(&vf);
    let cr = norm_f64(&cross_f64(&vf, &af));
    let k = cr / vn.powi(3);
    let straight = if C::EXACT {
        acc.iter().all(|c| c.is_zero())
    } else {
        norm_f64(&af) <= 1e-12 * vn * vn
    };
    if straight {
        return Some(Outcome::Finite {
            k: 0.0,
            torsion: Some(0.0),
            weight,
        });
    }
    let torsion = if prob.max_order >= 3 {
        let mut det = Poly::zero(prob.vars.clone());
        for (j, b) in prob.basis().iter().enumerate() {
            let d = det3(&prob.v, &acc, b);
            det = &det + &st.subst[rho(3, j)].scale(&d);
        }
        let det = det.prune(det.max_coeff().max(prob.scale));
        det.is_constant()
            .then(|| det.constant_term().to_complex().re / (cr * cr))
    } else {
        None
    };
    if need_torsion && torsion.is_none() {
        return None;
    }
    Some(Outcome::Finite { k, torsion, weight })
}
