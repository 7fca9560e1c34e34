//! Dense exact Gaussian elimination: ranks, kernels, pivot columns and solves.

use crate::rational::Rational;

pub type DenseMat = Vec<Vec<Rational>>;

/// Reduced row echelon form. Returns the reduced rows and the pivot column of each.
pub fn rref(mut m: DenseMat, ncols: usize) -> (DenseMat, Vec<usize>) {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(m: &DenseMat, ncols: usize) -> usize {
    rref(m.clone(), ncols).1.len()
}

/// A basis of `{x : m x = 0}`, one vector per free column.
pub fn kernel_basis(m: &DenseMat, ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m.clone(), ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = b` when the solution exists; free variables are set to zero.
pub fn solve(m: &DenseMat, ncols: usize, b: &[Rational]) -> Option<Vec<Rational>> {
    let aug: DenseMat = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Transposes a dense matrix with `ncols` columns.
pub fn transpose(m: &DenseMat, ncols: usize) -> DenseMat {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}
