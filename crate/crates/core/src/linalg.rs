//! Small dense linear algebra over fields.

use crate::exactnum::Field;

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref<S: Field>(rows: Vec<Vec<S>>) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut rows: Vec<Vec<S>> = rows;
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].try_inv().expect("nonzero field element");
        rows[r] = rows[r].iter().map(|x| x.clone() * &inv).collect();
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - &(f.clone() * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn row_basis<S: Field>(rows: Vec<Vec<S>>) -> Vec<Vec<S>> {
    rref(rows).0
}

pub fn rank<S: Field>(rows: Vec<Vec<S>>) -> usize {
    rref(rows).0.len()
}

/// Coefficients x with Σ x_k vectors[k] = target, if the target is in the span.
pub fn express<S: Field>(vectors: &[Vec<S>], target: &[S]) -> Option<Vec<S>> {
    let k = vectors.len();
    let dim = target.len();
    // augmented system: one row per coordinate, columns = vectors then target
    let rows: Vec<Vec<S>> = (0..dim)
        .map(|t| {
            let mut row: Vec<S> = vectors.iter().map(|v| v[t].clone()).collect();
            row.push(target[t].clone());
            row
        })
        .collect();
    if rows.is_empty() {
        return Some(vec![S::zero(); k]);
    }
    let (red, pivots) = rref(rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![S::zero(); k];
    for (row, &c) in red.iter().zip(&pivots) {
        x[c] = row[k].clone();
    }
    Some(x)
}
