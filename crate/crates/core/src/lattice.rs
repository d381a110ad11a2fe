//! Integer lattice algebra: Hermite and Smith normal forms, integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Z = BigInt;

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<Z>> {
    rows.iter().map(|r| r.iter().map(|&x| Z::from(x)).collect()).collect()
}

fn to_small(rows: Vec<Vec<Z>>) -> Vec<Vec<i64>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(|x| x.to_i64().expect("lattice entry fits in i64")).collect())
        .collect()
}

fn axpy(dst: &mut [Z], f: &Z, src: &[Z]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= f * s;
    }
}

/// Echelonises `rows` over Z on the first `key` columns using unimodular row
/// operations; returns the number of pivot rows (they come first).
fn echelon(rows: &mut [Vec<Z>], key: usize) -> usize {
    let mut r = 0;
    for c in 0..key {
        if r == rows.len() {
            break;
        }
        loop {
            let Some(p) = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
            else {
                break;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            let mut done = true;
            for row in rows.iter_mut().skip(r + 1) {
                if row[c].is_zero() {
                    continue;
                }
                let f = row[c].div_floor(&pivot[c]);
                axpy(row, &f, &pivot);
                if !row[c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let f = row[c].div_floor(&pivot[c]);
            axpy(row, &f, &pivot);
        }
        r += 1;
    }
    r
}

fn pivot_count_full(rows: &mut [Vec<Z>]) -> usize {
    let key = rows.first().map_or(0, Vec::len);
    echelon(rows, key)
}

/// Hermite normal form basis of the row lattice.
pub fn row_basis(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m = to_big(rows);
    let r = pivot_count_full(&mut m);
    m.truncate(r);
    to_small(m)
}

/// Rank over Q.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    row_basis(rows).len()
}

/// Z-basis (in Hermite form) of `{f in Z^ncols : A f = 0}`.
pub fn kernel_basis(a: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let nrows = a.len();
    let mut m: Vec<Vec<Z>> = (0..ncols)
        .map(|i| {
            let mut row: Vec<Z> = a.iter().map(|r| Z::from(r[i])).collect();
            row.extend((0..ncols).map(|j| if i == j { Z::one() } else { Z::zero() }));
            row
        })
        .collect();
    let r = echelon(&mut m, nrows);
    let kernel: Vec<Vec<i64>> = to_small(m.into_iter().skip(r).map(|row| row[nrows..].to_vec()).collect());
    row_basis(&kernel)
}

/// Nonzero invariant factors of the matrix, in divisibility order.
pub fn smith_diagonal(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut m = to_big(rows);
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let Some((pi, pj)) = (t..nr)
            .flat_map(|i| (t..nc).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()))
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nr {
            if !m[i][t].is_zero() {
                let f = m[i][t].div_floor(&m[t][t]);
                let pivot = m[t].clone();
                axpy(&mut m[i], &f, &pivot);
                clean &= m[i][t].is_zero();
            }
        }
        for j in t + 1..nc {
            if !m[t][j].is_zero() {
                let f = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let v = &f * &row[t];
                    row[j] -= v;
                }
                clean &= m[t][j].is_zero();
            }
        }
        if !clean {
            continue;
        }
        let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
        if let Some(i) = bad {
            let src = m[i].clone();
            for (d, s) in m[t].iter_mut().zip(&src) {
                *d += s;
            }
            continue;
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// True when `Z^n / L` is torsionfree for the row lattice `L`.
pub fn quotient_torsionfree(rows: &[Vec<i64>]) -> bool {
    smith_diagonal(rows).iter().all(One::is_one)
}
