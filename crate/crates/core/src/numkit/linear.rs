use crate::ratpoly::{Coeff, Poly};

/// Dense system `rows * x = rhs` with labelled unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<C: Coeff> {
    pub rows: Vec<Vec<C>>,
    pub rhs: Vec<C>,
    pub labels: Vec<String>,
}

impl<C: Coeff> LinearSystem<C> {
    pub fn new(labels: Vec<String>) -> Self {
        LinearSystem {
            rows: Vec::new(),
            rhs: Vec::new(),
            labels,
        }
    }

    pub fn push(&mut self, row: Vec<C>, rhs: C) {
        assert_eq!(row.len(), self.labels.len(), "row width");
        self.rows.push(row);
        self.rhs.push(rhs);
    }
}

/// Classification of an affine system.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<C> {
    Unique(Vec<C>),
    /// `x = particular + sum_k t_k * nullspace[k]`, one basis vector per free
    /// unknown (listed in `free`).
    Underdetermined {
        free: Vec<usize>,
        particular: Vec<C>,
        nullspace: Vec<Vec<C>>,
    },
    Inconsistent,
}

const RANK_TOL: f64 = 1e-10;

/// Solves an affine system by Gauss-Jordan elimination.
///
/// Rational systems are reduced exactly (first nonzero pivot). Float
/// systems use partial pivoting; entries below `1e-10` times the largest
/// entry count as zero.
pub fn solve_affine<C: Coeff>(sys: &LinearSystem<C>) -> Solution<C> {
    let n = sys.labels.len();
    let mut m: Vec<Vec<C>> = sys
        .rows
        .iter()
        .zip(&sys.rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .map(Coeff::magnitude)
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let zero = |c: &C| {
        if C::EXACT {
            c.is_zero()
        } else {
            c.magnitude() <= RANK_TOL * scale
        }
    };
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row >= m.len() {
            break;
        }
        let pick = if C::EXACT {
            (row..m.len()).find(|&i| !m[i][col].is_zero())
        } else {
            (row..m.len())
                .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()))
                .filter(|&i| !zero(&m[i][col]))
        };
        let Some(p) = pick else { continue };
        m.swap(row, p);
        let inv = C::one() / m[row][col].clone();
        for v in m[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i == row || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..=n {
                let t = m[row][j].clone() * f.clone();
                m[i][j] = m[i][j].clone() - t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    for r in &m[row..] {
        if !zero(&r[n]) {
            return Solution::Inconsistent;
        }
    }
    let mut particular = vec![C::zero(); n];
    for (k, &c) in pivots.iter().enumerate() {
        particular[c] = m[k][n].clone();
    }
    if pivots.len() == n {
        return Solution::Unique(particular);
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![C::zero(); n];
            v[f] = C::one();
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = -m[k][f].clone();
            }
            v
        })
        .collect();
    Solution::Underdetermined {
        free,
        particular,
        nullspace,
    }
}

/// Reads `polys` (each meant as `p = 0`) as an affine system in the
/// variables `unknowns`. Returns `None` if some polynomial is not affine in
/// them or involves any other variable.
pub fn affine_system<C: Coeff>(polys: &[Poly<C>], unknowns: &[usize]) -> Option<LinearSystem<C>> {
    let first = polys.first()?;
    let labels = unknowns
        .iter()
        .map(|&u| first.vars()[u].clone())
        .collect();
    let mut sys = LinearSystem::new(labels);
    for p in polys {
        let mut row = vec![C::zero(); unknowns.len()];
        let mut constant = C::zero();
        for (m, c) in p.terms() {
            let e = m.exponents();
            let nz: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
            match nz.as_slice() {
                [] => constant = c.clone(),
                [i] if e[*i] == 1 => {
                    let k = unknowns.iter().position(|u| u == i)?;
                    row[k] = c.clone();
                }
                _ => return None,
            }
        }
        sys.push(row, -constant);
    }
    Some(sys)
}
