//! Exact rational linear algebra: Gaussian elimination and a phase-one
//! simplex for `A x = b, x >= 0`.

use num_traits::{One, Signed, Zero};

use crate::semiring::Rational;

/// Dense row-major matrix.
pub type Matrix = Vec<Vec<Rational>>;

/// Solves `A x = b` exactly by reduced row echelon form.
///
/// Pivot columns are taken left to right, pivot rows top to bottom; free
/// variables are set to zero. Returns `None` when the system is inconsistent.
pub fn solve_exact(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|i| !aug[*i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for v in aug[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_zero() {
                let factor = aug[i][c].clone();
                let (pivot_row, target) = if i < r {
                    let (lo, hi) = aug.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = aug.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for k in c..=cols {
                    if !pivot_row[k].is_zero() {
                        target[k] -= &factor * &pivot_row[k];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if aug[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, c) in pivots.iter().enumerate() {
        x[*c] = aug[i][cols].clone();
    }
    Some(x)
}

/// Phase-one simplex with Bland's rule: finds `x >= 0` with `A x = b`, or
/// `None` if the system is infeasible. Deterministic and terminating.
pub fn phase_one(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let width = n + m;
    // Tableau rows: [A | I | b], with rows flipped so that b >= 0.
    let mut tab: Matrix = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<Rational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        r.extend((0..m).map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        r.push(if flip { -rhs.clone() } else { rhs.clone() });
        tab.push(r);
    }
    let mut basis: Vec<usize> = (n..width).collect();
    // Reduced costs of minimising the sum of artificials; last entry holds
    // minus the objective value.
    let mut cost = vec![Rational::zero(); width + 1];
    for row in &tab {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }
    while let Some(enter) = (0..width).find(|j| cost[*j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so a pivot row always exists.
        let (p, _) = leave.expect("phase one cannot be unbounded");
        let inv = tab[p][enter].recip();
        for v in tab[p].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = tab[p].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let factor = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &factor * pv;
                    }
                }
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        basis[p] = enter;
    }
    if !cost[width].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, var) in basis.iter().enumerate() {
        if *var < n {
            x[*var] = tab[i][width].clone();
        }
    }
    Some(x)
}
