//! Dense Gaussian elimination over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Row-reduced echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][col].clone();
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// Solves `A x = b`. `None` when inconsistent or not uniquely solvable.
pub fn solve_unique(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) || pivots.len() != ncols {
        return None;
    }
    Some(
        aug.iter()
            .take(ncols)
            .map(|row| row[ncols].clone())
            .collect(),
    )
}
