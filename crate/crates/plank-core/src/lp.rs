//! Dense two-phase primal simplex over any [`Scalar`] backend.
//!
//! Problems are tiny (tens of rows), so the solver favors simplicity and
//! determinism: full tableau, Bland's entering/leaving rule, free
//! variables split into positive and negative parts, artificials only for
//! rows with negative right-hand sides. With an exact backend the optimum
//! is exact and termination is guaranteed; with floats a fixed pivot
//! tolerance is used.

use crate::num::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult<S> {
    Optimal { value: S, point: Vec<S> },
    Infeasible,
    Unbounded,
}

/// A constraint `coeffs . x <= rhs` over free variables.
#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub rhs: S,
}

impl<S> Constraint<S> {
    pub fn new(coeffs: Vec<S>, rhs: S) -> Self {
        Constraint { coeffs, rhs }
    }
}

const PIVOT_CAP: usize = 20_000;

fn pivot_eps<S: Scalar>() -> S {
    if S::EXACT {
        S::zero()
    } else {
        S::from_f64(1e-9)
    }
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    cols: usize,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, row: usize, col: usize, red: &mut Vec<S>, obj: &mut S) {
        let piv = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        self.rhs[row] = self.rhs[row].clone() / piv.clone();
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                let delta = factor.clone() * self.rows[row][c].clone();
                self.rows[r][c] = self.rows[r][c].clone() - delta;
            }
            let delta = factor.clone() * self.rhs[row].clone();
            self.rhs[r] = self.rhs[r].clone() - delta;
        }
        let factor = red[col].clone();
        if !factor.is_zero() {
            for c in 0..self.cols {
                let delta = factor.clone() * self.rows[row][c].clone();
                red[c] = red[c].clone() - delta;
            }
            *obj = obj.clone() + factor * self.rhs[row].clone();
        }
        self.basis[row] = col;
    }

    /// Maximizes `costs . y` from the current basis. Returns the objective
    /// value, or None when unbounded.
    fn run(&mut self, costs: &[S], banned: usize) -> Option<S> {
        let eps = pivot_eps::<S>();
        // Reduced costs relative to the current basis.
        let mut red: Vec<S> = costs.to_vec();
        let mut obj = S::zero();
        for r in 0..self.rows.len() {
            let cb = costs[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                let delta = cb.clone() * self.rows[r][c].clone();
                red[c] = red[c].clone() - delta;
            }
            obj = obj + cb * self.rhs[r].clone();
        }
        for _ in 0..PIVOT_CAP {
            // Bland: smallest improving column.
            let enter = (0..self.cols - banned).find(|&c| red[c] > eps);
            let enter = match enter {
                Some(c) => c,
                None => return Some(obj),
            };
            let mut leave: Option<usize> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][enter] <= eps {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ratio_r = self.rhs[r].clone() / self.rows[r][enter].clone();
                        let ratio_l = self.rhs[l].clone() / self.rows[l][enter].clone();
                        ratio_r < ratio_l
                            || (ratio_r == ratio_l && self.basis[r] < self.basis[l])
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
            match leave {
                Some(r) => self.pivot(r, enter, &mut red, &mut obj),
                None => return None,
            }
        }
        panic!("simplex did not terminate within {PIVOT_CAP} pivots");
    }
}

/// Maximizes `objective . x` over free `x` subject to `constraints`.
pub fn maximize<S: Scalar>(
    num_vars: usize,
    constraints: &[Constraint<S>],
    objective: &[S],
) -> LpResult<S> {
    assert_eq!(objective.len(), num_vars);
    let m = constraints.len();
    let structural = 2 * num_vars;
    let base_cols = structural + m;
    let eps = pivot_eps::<S>();

    let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut rhs: Vec<S> = Vec::with_capacity(m);
    let mut negated: Vec<bool> = Vec::with_capacity(m);
    for con in constraints {
        assert_eq!(con.coeffs.len(), num_vars);
        let flip = con.rhs < S::zero();
        let sign = if flip { -S::one() } else { S::one() };
        let mut row = Vec::with_capacity(base_cols);
        for j in 0..num_vars {
            row.push(sign.clone() * con.coeffs[j].clone());
        }
        for j in 0..num_vars {
            row.push(-(sign.clone() * con.coeffs[j].clone()));
        }
        for i in 0..m {
            row.push(if i == rows.len() { sign.clone() } else { S::zero() });
        }
        rows.push(row);
        rhs.push(sign * con.rhs.clone());
        negated.push(flip);
    }

    let art_rows: Vec<usize> = (0..m).filter(|&i| negated[i]).collect();
    let cols = base_cols + art_rows.len();
    let mut basis = vec![0usize; m];
    for (k, row) in rows.iter_mut().enumerate() {
        row.resize(cols, S::zero());
        basis[k] = structural + k;
    }
    for (j, &r) in art_rows.iter().enumerate() {
        rows[r][base_cols + j] = S::one();
        basis[r] = base_cols + j;
    }

    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        cols,
    };

    if !art_rows.is_empty() {
        let mut phase1 = vec![S::zero(); cols];
        for j in 0..art_rows.len() {
            phase1[base_cols + j] = -S::one();
        }
        let opt = tab
            .run(&phase1, art_rows.len())
            .expect("phase 1 objective is bounded above by zero");
        let feas = eps.clone() * S::from_int(10);
        if opt < -feas {
            return LpResult::Infeasible;
        }
        // Drive leftover artificials out of the basis; rows that cannot
        // pivot are redundant and dropped. Their values are zero at the
        // phase 1 optimum, so feasibility is preserved.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= base_cols {
                let col = (0..base_cols).find(|&c| tab.rows[r][c].clone().abs() > eps);
                match col {
                    Some(c) => {
                        let mut dummy_red = vec![S::zero(); tab.cols];
                        let mut dummy_obj = S::zero();
                        tab.pivot(r, c, &mut dummy_red, &mut dummy_obj);
                        r += 1;
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        for row in tab.rows.iter_mut() {
            row.truncate(base_cols);
        }
        tab.cols = base_cols;
    }

    let mut costs = vec![S::zero(); tab.cols];
    for j in 0..num_vars {
        costs[j] = objective[j].clone();
        costs[num_vars + j] = -objective[j].clone();
    }
    match tab.run(&costs, 0) {
        None => LpResult::Unbounded,
        Some(value) => {
            let mut split = vec![S::zero(); structural];
            for r in 0..tab.rows.len() {
                if tab.basis[r] < structural {
                    split[tab.basis[r]] = tab.rhs[r].clone();
                }
            }
            let point: Vec<S> = (0..num_vars)
                .map(|j| split[j].clone() - split[num_vars + j].clone())
                .collect();
            LpResult::Optimal { value, point }
        }
    }
}
