//! Finite abstract simplicial complexes with ordered vertices.
//!
//! A simplex is stored as a strictly increasing list of vertex indices; the
//! orientation convention is the one induced by the vertex order. Simplex
//! labels are the vertex labels joined by `.`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exactlp::SparseMat;
use crate::normcx::{Direction, NormFlavor, NormedComplex};
use crate::rational::Rational;

pub type Simplex = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("invalid vertex label `{0}` (allowed: letters, digits, `_`, `-`)")]
    BadLabel(String),
    #[error("simplex repeats vertex `{0}`")]
    RepeatedVertex(String),
    #[error("`{0}` is not a simplex of the complex")]
    NotASimplex(String),
}

pub fn valid_vertex_label(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|c| c.is_ascii_alphanumeric() || c == b'_' || c == b'-')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    index: BTreeMap<String, usize>,
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    /// Builds the face closure of `generators` over the given vertex order.
    pub fn new(
        vertices: Vec<String>,
        generators: impl IntoIterator<Item = Vec<String>>,
    ) -> Result<Self, SimplicialError> {
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !valid_vertex_label(v) {
                return Err(SimplicialError::BadLabel(v.clone()));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(SimplicialError::DuplicateVertex(v.clone()));
            }
        }
        let mut complex = SimplicialComplex {
            vertices,
            index,
            simplices: BTreeSet::new(),
        };
        for i in 0..complex.vertices.len() {
            complex.simplices.insert(vec![i]);
        }
        for g in generators {
            let mut s = Vec::with_capacity(g.len());
            for v in &g {
                s.push(
                    *complex
                        .index
                        .get(v)
                        .ok_or_else(|| SimplicialError::UnknownVertex(v.clone()))?,
                );
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                let dup = s.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                return Err(SimplicialError::RepeatedVertex(complex.vertices[dup].clone()));
            }
            complex.insert_closed(s);
        }
        Ok(complex)
    }

    /// Vertices sorted by label; generators are lists of vertex labels.
    pub fn from_generators<I, S>(generators: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = Vec<S>>,
        S: Into<String>,
    {
        let gens: Vec<Vec<String>> = generators
            .into_iter()
            .map(|g| g.into_iter().map(Into::into).collect())
            .collect();
        let vertices: BTreeSet<String> = gens.iter().flatten().cloned().collect();
        Self::new(vertices.into_iter().collect(), gens)
    }

    fn insert_closed(&mut self, s: Simplex) {
        if s.is_empty() || self.simplices.contains(&s) {
            return;
        }
        for i in 0..s.len() {
            let mut face = s.clone();
            face.remove(i);
            self.insert_closed(face);
        }
        self.simplices.insert(s);
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// All `k`-simplices, ordered lexicographically by vertex index.
    pub fn simplices_of_dim(&self, k: usize) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| s.len() == k + 1).collect()
    }

    /// Simplices that are not a proper face of another simplex.
    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .collect()
    }

    pub fn label(&self, s: &[usize]) -> String {
        s.iter()
            .map(|&v| self.vertices[v].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse_simplex_label(&self, label: &str) -> Result<Simplex, SimplicialError> {
        let mut s = Vec::new();
        for v in label.split('.') {
            s.push(
                self.vertex_index(v)
                    .ok_or_else(|| SimplicialError::UnknownVertex(v.to_string()))?,
            );
        }
        if s.windows(2).any(|w| w[0] >= w[1]) || !self.contains(&s) {
            return Err(SimplicialError::NotASimplex(label.to_string()));
        }
        Ok(s)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.simplices
            .iter()
            .filter(|s| s.len() == 2)
            .map(|s| (s[0], s[1]))
    }

    /// The full subcomplex spanned by a vertex subset (indices into this complex).
    pub fn induced(&self, subset: &BTreeSet<usize>) -> SimplicialComplex {
        let keep: Vec<usize> = subset.iter().copied().collect();
        let renumber: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertices: Vec<String> = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let simplices = self
            .simplices
            .iter()
            .filter(|s| s.iter().all(|v| subset.contains(v)))
            .map(|s| s.iter().map(|v| renumber[v]).collect())
            .collect();
        SimplicialComplex {
            vertices,
            index,
            simplices,
        }
    }

    /// Simplicial boundary `∂[v₀…v_k] = Σ(-1)^i [v₀…v̂ᵢ…v_k]` as labeled chains.
    pub fn boundary_of(&self, s: &[usize]) -> Vec<(Simplex, i64)> {
        if s.len() <= 1 {
            return Vec::new();
        }
        (0..s.len())
            .map(|i| {
                let mut face = s.to_vec();
                face.remove(i);
                (face, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// The simplicial chain complex with ℓ¹ norm, degrees `0..=dim`.
    pub fn chain_complex(&self, name: &str) -> NormedComplex {
        let dim = self.dim().unwrap_or(0);
        let mut bases = BTreeMap::new();
        for k in 0..=dim {
            bases.insert(
                k as i64,
                self.simplices_of_dim(k)
                    .into_iter()
                    .map(|s| self.label(s))
                    .collect::<Vec<_>>(),
            );
        }
        let mut maps = BTreeMap::new();
        for k in 1..=dim {
            let rows = bases[&(k as i64 - 1)].clone();
            let cols = bases[&(k as i64)].clone();
            let row_pos: BTreeMap<&String, usize> =
                rows.iter().enumerate().map(|(i, l)| (l, i)).collect();
            let columns = self
                .simplices_of_dim(k)
                .into_iter()
                .map(|s| {
                    let mut col: Vec<(usize, Rational)> = self
                        .boundary_of(s)
                        .into_iter()
                        .map(|(f, sign)| (row_pos[&self.label(&f)], Rational::from_int(sign)))
                        .collect();
                    col.sort_by_key(|(i, _)| *i);
                    col
                })
                .collect();
            let mat = SparseMat::from_index_columns(rows, cols, columns)
                .expect("simplicial boundary labels are consistent");
            maps.insert(k as i64, mat);
        }
        NormedComplex::from_parts(name, Direction::Chain, NormFlavor::L1, bases, maps)
            .expect("simplicial chain complex is well-formed")
    }
}
