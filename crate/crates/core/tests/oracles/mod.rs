//! Brute-force reference computations that share no code with the library's
//! module constructions.
#![allow(dead_code)]

use vertex_algebroid::identities::mode_matrix;
use vertex_algebroid::module::GradedModule;
use vertex_algebroid::rational::{one, zero, Rational};

/// Number of multisets of colored positive integers summing to `n`, found by
/// listing every non-increasing sequence of (part, color) pairs.
pub fn colored_partitions(colors: usize, n: usize) -> usize {
    fn go(rest: usize, max: (usize, usize), colors: usize) -> usize {
        if rest == 0 {
            return 1;
        }
        let mut total = 0;
        for part in (1..=rest.min(max.0)).rev() {
            for color in 0..colors {
                if (part, color) <= max {
                    total += go(rest - part, (part, color), colors);
                }
            }
        }
        total
    }
    go(n, (n, colors), colors)
}

/// Partitions of `n / 2` into parts from `1/2 + N`, i.e. partitions of `n`
/// into odd parts, listed explicitly.
pub fn half_odd_partitions(n: usize) -> usize {
    fn go(rest: usize, max: usize) -> usize {
        if rest == 0 {
            return 1;
        }
        (1..=rest.min(max)).filter(|p| p % 2 == 1).map(|p| go(rest - p, p)).sum()
    }
    go(n, n)
}

type Matrix = Vec<Vec<Rational>>;

fn matmul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && rows[i][c] != zero() {
                let f = &rows[i][c] / &pivot;
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// `dim J(d)` for the largest graded submodule meeting degree 0 trivially:
/// `w ∈ J(d)` iff every composite of basis modes carrying `w` to degree 0
/// kills it. The composites are accumulated to a fixed point over all mode
/// words that stay inside the truncation.
pub fn radical_dims_by_closure(m: &GradedModule) -> Vec<usize> {
    let n = m.cutoff();
    let lie = &m.induced.lie;
    let dims: Vec<usize> = (0..=n).map(|d| m.dim(d)).collect();
    let d0 = dims[0];
    // phi[d]: spanning set of maps M(d) -> M(0), each stored as a d0 × dims[d] matrix
    let mut phi: Vec<Vec<Matrix>> = vec![Vec::new(); dims.len()];
    phi[0] = vec![(0..d0)
        .map(|i| (0..d0).map(|j| if i == j { one() } else { zero() }).collect())
        .collect()];
    let flat = |maps: &[Matrix]| -> Vec<Vec<Rational>> { maps.iter().map(|a| a.concat()).collect() };
    let mut ranks: Vec<usize> = phi.iter().map(|p| rank(flat(p))).collect();
    let mats: Vec<Vec<(usize, Matrix)>> = (0..=n)
        .map(|d| {
            (0..lie.dim())
                .filter(|&x| (0..=n).contains(&(d + lie.degree(x))))
                .map(|x| {
                    let t = d + lie.degree(x);
                    let lm = mode_matrix(m, x, d).unwrap();
                    let mut a = vec![vec![zero(); dims[d as usize]]; dims[t as usize]];
                    for (j, col) in lm.columns().iter().enumerate() {
                        for (i, v) in col.iter() {
                            a[i][j] = v.clone();
                        }
                    }
                    (t as usize, a)
                })
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for d in 0..=n as usize {
            for (t, x) in &mats[d] {
                for f in phi[*t].clone() {
                    let g = matmul(&f, x, dims[*t], dims[d]);
                    let mut trial = phi[d].clone();
                    trial.push(g);
                    let r = rank(flat(&trial));
                    if r > ranks[d] {
                        phi[d] = trial;
                        ranks[d] = r;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // J(d) is the common kernel of all maps in phi[d]
    (0..=n as usize)
        .map(|d| {
            let rows: Vec<Vec<Rational>> = phi[d].iter().flat_map(|a| a.iter().cloned()).collect();
            dims[d] - if rows.is_empty() { 0 } else { rank(rows) }
        })
        .collect()
}
