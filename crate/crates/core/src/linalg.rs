//! Dense Gaussian elimination over K.

use crate::scalar::Scalar;

/// Row-reduced echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{v : A v = 0}` for `A` given by rows with `ncols` columns.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize, nparams: usize) -> Vec<Vec<Scalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(nparams); ncols];
            v[f] = Scalar::one(nparams);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m[r][f].neg();
            }
            v
        })
        .collect()
}

/// Solution of `A v = b`: a particular solution and the nullity, or `None` if inconsistent.
pub fn solve(rows: &[Vec<Scalar>], b: &[Scalar], ncols: usize, nparams: usize) -> Option<(Vec<Scalar>, usize)> {
    let mut aug: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut v = vec![Scalar::zero(nparams); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        v[p] = aug[r][ncols].clone();
    }
    Some((v, ncols - pivots.len()))
}
