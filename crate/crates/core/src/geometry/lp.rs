//! Phase-one simplex for `A x = b, x >= 0`.
//!
//! Bland's rule throughout, so the exact path terminates without cycling.
//! In float mode pivot and feasibility tests use the arithmetic tolerance.

use std::cmp::Ordering;

use crate::scalar::{Arith, Scalar};

/// Returns a nonnegative solution of `rows * x = rhs` if one exists.
///
/// `rows` is dense, one entry per constraint, each of length `cols`.
pub(crate) fn feasible_point(rows: &[Vec<Scalar>], rhs: &[Scalar], cols: usize, arith: &Arith) -> Option<Vec<Scalar>> {
    let m = rows.len();
    let width = cols + m + 1;
    let zero = arith.zero();
    let one = arith.one();

    // rhs >= 0 by row negation, then an artificial per row
    let mut tab: Vec<Vec<Scalar>> = Vec::with_capacity(m + 1);
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        let flip = b.signum() == Ordering::Less;
        let mut r = Vec::with_capacity(width);
        for a in row {
            r.push(if flip { -a } else { a.clone() });
        }
        for k in 0..m {
            r.push(if k == i { one.clone() } else { zero.clone() });
        }
        r.push(if flip { -b } else { b.clone() });
        tab.push(r);
    }
    // objective: minimize the artificial sum, written as reduced costs
    let mut obj = vec![zero.clone(); width];
    for r in &tab {
        for j in 0..cols {
            obj[j] = &obj[j] - &r[j];
        }
        obj[width - 1] = &obj[width - 1] - &r[width - 1];
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (cols..cols + m).collect();

    loop {
        let Some(enter) = (0..cols + m).find(|&j| arith.is_negative(&tab[m][j])) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !arith.is_positive(&tab[i][enter]) {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let lhs = &tab[i][width - 1] * &tab[l][enter];
                    let rhs = &tab[l][width - 1] * &tab[i][enter];
                    match lhs.cmp(&rhs) {
                        Ordering::Less => Some(i),
                        Ordering::Equal if basis[i] < basis[l] => Some(i),
                        _ => Some(l),
                    }
                }
            };
        }
        // phase one is bounded below by zero, so a ratio row always exists
        let leave = leave?;
        pivot(&mut tab, leave, enter);
        basis[leave] = enter;
    }

    let infeasibility = -&tab[m][width - 1];
    if !arith.is_zero(&infeasibility) {
        return None;
    }
    let mut x = vec![zero; cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            x[b] = tab[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Scalar>], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = &*v / &p;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].signum().is_eq() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.signum().is_eq() {
                *v = &*v - &(&f * pv);
            }
        }
    }
}
