//! The prism operator `C_{n-1}(X) → C_n(X × [0,1])`.
//!
//! The cylinder has vertices `v-0` and `v-1` for every vertex `v` of `X`,
//! ordered by (vertex, level). Over `σ = [v₀…v_m]` it contains the simplices
//! `[v₀⁰…vᵢ⁰ vᵢ¹…v_m¹]`, and the prism of `σ` is their sum with sign `(-1)^i`.

use crate::exactlp::SparseVec;
use crate::rational::Rational;
use crate::simplicial::{Simplex, SimplicialComplex};

use super::{ComplexError, NormedComplex};

fn level_label(v: &str, level: u8) -> String {
    format!("{v}-{level}")
}

/// Vertex index of `(v, level)` in the cylinder.
fn lifted(v: usize, level: u8) -> usize {
    2 * v + level as usize
}

/// The signed top simplices of the prism over `s`, in cylinder indices.
pub fn prism_simplices(s: &[usize]) -> Vec<(Simplex, i64)> {
    (0..s.len())
        .map(|i| {
            let mut t: Vec<usize> = s[..=i].iter().map(|&v| lifted(v, 0)).collect();
            t.extend(s[i..].iter().map(|&v| lifted(v, 1)));
            (t, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// The triangulated product `X × [0,1]`.
pub fn cylinder(x: &SimplicialComplex) -> SimplicialComplex {
    let vertices: Vec<String> = x
        .vertices()
        .iter()
        .flat_map(|v| [level_label(v, 0), level_label(v, 1)])
        .collect();
    let generators: Vec<Vec<String>> = x
        .maximal_simplices()
        .into_iter()
        .flat_map(|s| prism_simplices(s))
        .map(|(t, _)| t.into_iter().map(|v| vertices[v].clone()).collect())
        .collect();
    SimplicialComplex::new(vertices, generators).expect("cylinder labels are valid")
}

/// The chain `ι_level(c)` in the cylinder.
pub fn end_inclusion(x: &SimplicialComplex, c: &SparseVec, level: u8) -> Result<SparseVec, ComplexError> {
    let mut out = SparseVec::new();
    for (label, a) in c.iter() {
        let s = x
            .parse_simplex_label(label)
            .map_err(|e| ComplexError::Input(e.to_string()))?;
        let t: Vec<String> = s.iter().map(|&v| level_label(&x.vertices()[v], level)).collect();
        out.add_to(t.join("."), a);
    }
    Ok(out)
}

/// `P(c)` for a chain `c` of degree `n - 1`, together with the cylinder's chain complex.
pub fn prism(
    c: &SparseVec,
    n: usize,
    x: &SimplicialComplex,
) -> Result<(SparseVec, NormedComplex), ComplexError> {
    if n == 0 {
        return Err(ComplexError::Input("prism needs n ≥ 1".into()));
    }
    let cyl = cylinder(x);
    let mut out = SparseVec::new();
    for (label, a) in c.iter() {
        let s = x
            .parse_simplex_label(label)
            .map_err(|e| ComplexError::Input(e.to_string()))?;
        if s.len() != n {
            return Err(ComplexError::Input(format!(
                "`{label}` is not a simplex of degree {}",
                n - 1
            )));
        }
        for (t, sign) in prism_simplices(&s) {
            out.add_to(cyl.label(&t), &(a * &Rational::from_int(sign)));
        }
    }
    Ok((out, cyl.chain_complex("cylinder")))
}
