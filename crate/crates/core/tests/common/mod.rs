#![allow(dead_code)]

use ubcfill::exactlp::dense;
use ubcfill::prng::XorShift64Star;
use ubcfill::simplicial::SimplicialComplex;
use ubcfill::{Rational, SparseMat, SparseVec};

/// Minimal `|x|₁` with `Dx = b` by enumerating supports with independent
/// columns. `None` when `b` is outside the column space.
pub fn brute_force_min_l1(d: &[Vec<i64>], b: &[i64]) -> Option<Rational> {
    let rows = d.len();
    let cols = d.first().map_or(0, Vec::len);
    let b: Vec<Rational> = b.iter().map(|&v| Rational::from_int(v)).collect();
    if b.iter().all(Rational::is_zero) {
        return Some(Rational::zero());
    }
    let mut best: Option<Rational> = None;
    for mask in 1u32..(1 << cols) {
        let support: Vec<usize> = (0..cols).filter(|j| mask & (1 << j) != 0).collect();
        if support.len() > rows {
            continue;
        }
        let sub: Vec<Vec<Rational>> = (0..rows)
            .map(|i| support.iter().map(|&j| Rational::from_int(d[i][j])).collect())
            .collect();
        if dense::rank(&sub, support.len()) != support.len() {
            continue;
        }
        if let Some(x) = dense::solve(&sub, support.len(), &b) {
            let norm: Rational = x.iter().map(Rational::abs).sum();
            if best.as_ref().is_none_or(|cur| norm < *cur) {
                best = Some(norm);
            }
        }
    }
    best
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn int_matrix(d: &[Vec<i64>]) -> SparseMat {
    let rows = d.len();
    let cols = d.first().map_or(0, Vec::len);
    let mut m = SparseMat::zeros(labels("r", rows), labels("c", cols)).unwrap();
    for (i, row) in d.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0 {
                m.add_at(i, j, &Rational::from_int(v));
            }
        }
    }
    m
}

pub fn int_vector(prefix: &str, v: &[i64]) -> SparseVec {
    SparseVec::from_pairs(
        v.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (format!("{prefix}{i}"), Rational::from_int(x))),
    )
}

/// An LP instance with `rows ≤ 6`, `cols ≤ 8` and entries in `-3..=3`. Half
/// of the right-hand sides lie in the column space by construction.
pub fn random_instance(rng: &mut XorShift64Star) -> (Vec<Vec<i64>>, Vec<i64>) {
    let rows = 1 + rng.below(6) as usize;
    let cols = 1 + rng.below(8) as usize;
    let entry = |rng: &mut XorShift64Star| rng.below(7) as i64 - 3;
    let d: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| entry(rng)).collect()).collect();
    let b = if rng.below(2) == 0 {
        let x: Vec<i64> = (0..cols).map(|_| entry(rng)).collect();
        d.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum()).collect()
    } else {
        (0..rows).map(|_| entry(rng)).collect()
    };
    (d, b)
}

/// Simplicial boundary of a labeled chain.
pub fn simplicial_boundary(x: &SimplicialComplex, c: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (label, a) in c.iter() {
        let s = x.parse_simplex_label(label).unwrap();
        for (f, sign) in x.boundary_of(&s) {
            out.add_to(x.label(&f), &(a * &Rational::from_int(sign)));
        }
    }
    out
}

/// A random complex on at most `n` vertices generated by a few simplices of
/// dimension at most `max_dim`.
pub fn random_complex(rng: &mut XorShift64Star, n: usize, max_dim: usize) -> SimplicialComplex {
    let gens = 1 + rng.below(4) as usize;
    let mut generators = Vec::new();
    for _ in 0..gens {
        let size = 1 + rng.below((max_dim + 1).min(n) as u64) as usize;
        let mut verts = rng.sample_distinct(n, size);
        verts.sort_unstable();
        generators.push(verts.into_iter().map(|v| v.to_string()).collect::<Vec<_>>());
    }
    SimplicialComplex::from_generators(generators).unwrap()
}

/// A random integral chain on the simplices of dimension `dim`.
pub fn random_chain(rng: &mut XorShift64Star, x: &SimplicialComplex, dim: usize) -> SparseVec {
    let mut c = SparseVec::new();
    for s in x.simplices_of_dim(dim) {
        let v = rng.below(7) as i64 - 3;
        if v != 0 {
            c.set(x.label(s), Rational::from_int(v));
        }
    }
    c
}
