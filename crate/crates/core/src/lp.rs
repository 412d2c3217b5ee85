//! Exact simplex for packing-type linear programs
//! `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`.
//!
//! The all-slack basis is feasible, so a single phase suffices. The entering
//! column is the one with the largest reduced cost until a run of degenerate
//! pivots is seen; from then on Bland's rule is used, which cannot cycle.

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpSolution {
    #[serde(with = "crate::rational::pq_vec")]
    pub x: Vec<Rational>,
    #[serde(with = "crate::rational::pq")]
    pub value: Rational,
    /// Optimal dual prices, one per row.
    #[serde(with = "crate::rational::pq_vec")]
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

/// Solves the program exactly. `a` is given row by row.
pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Invalid("LP dimensions do not agree".into()));
    }
    if b.iter().any(|v| v.is_negative()) {
        return Err(Error::Invalid("LP right-hand side must be non-negative".into()));
    }
    let width = n + m;
    // rows[i] = [A | I | b]
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width + 1);
            row.extend(a[i].iter().cloned());
            row.extend((0..m).map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    // reduced costs c_j - z_j, and the current objective value in the last slot
    let mut cost: Vec<Rational> = c.iter().cloned().chain((0..=m).map(|_| Rational::zero())).collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut pivots = 0;
    let mut degenerate_run = 0;
    let mut bland = false;

    loop {
        let enter = if bland {
            (0..width).find(|&j| cost[j].is_positive())
        } else {
            (0..width)
                .filter(|&j| cost[j].is_positive())
                .max_by(|&x, &y| cost[x].cmp(&cost[y]).then(y.cmp(&x)))
        };
        let Some(enter) = enter else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if rows[i][enter].is_positive() {
                let ratio = &rows[i][width] / &rows[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, step)) = leave else {
            return Err(Error::Invalid("LP is unbounded".into()));
        };
        if step.is_zero() {
            degenerate_run += 1;
            bland |= degenerate_run > m;
        } else {
            degenerate_run = 0;
        }
        pivot(&mut rows, &mut cost, r, enter);
        basis[r] = enter;
        pivots += 1;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = rows[i][width].clone();
        }
    }
    let dual = (0..m).map(|i| -cost[n + i].clone()).collect();
    let value = -cost[width].clone();
    Ok(LpSolution {
        x,
        value,
        dual,
        pivots,
    })
}

fn pivot(rows: &mut [Vec<Rational>], cost: &mut [Rational], r: usize, col: usize) {
    let p = rows[r][col].clone();
    for v in rows[r].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    let pivot_row = rows[r].clone();
    let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    for (i, row) in rows.iter_mut().enumerate() {
        if i == r || row[col].is_zero() {
            continue;
        }
        let factor = row[col].clone();
        for &j in &nonzero {
            row[j] -= &factor * &pivot_row[j];
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for &j in &nonzero {
            cost[j] -= &factor * &pivot_row[j];
        }
    }
}

/// Independent optimality check: primal and dual feasibility, equal objective
/// values, and complementary slackness, all in exact arithmetic.
pub fn certify(c: &[Rational], a: &[Vec<Rational>], b: &[Rational], sol: &LpSolution) -> bool {
    let m = a.len();
    let n = c.len();
    if sol.x.len() != n || sol.dual.len() != m {
        return false;
    }
    if sol.x.iter().chain(sol.dual.iter()).any(|v| v.is_negative()) {
        return false;
    }
    let mut primal = Rational::zero();
    for j in 0..n {
        primal += &c[j] * &sol.x[j];
    }
    let mut dual_value = Rational::zero();
    for i in 0..m {
        let load: Rational = (0..n).map(|j| &a[i][j] * &sol.x[j]).sum();
        if load > b[i] {
            return false;
        }
        if sol.dual[i].is_positive() && load != b[i] {
            return false;
        }
        dual_value += &b[i] * &sol.dual[i];
    }
    for j in 0..n {
        let price: Rational = (0..m).map(|i| &a[i][j] * &sol.dual[i]).sum();
        if price < c[j] {
            return false;
        }
        if sol.x[j].is_positive() && price != c[j] {
            return false;
        }
    }
    primal == sol.value && dual_value == sol.value
}
