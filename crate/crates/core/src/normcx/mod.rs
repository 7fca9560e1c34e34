//! Finite normed chain and cochain complexes.
//!
//! A complex lives on a contiguous range of degrees. Each degree carries an
//! ordered list of basis labels and the norm is either ℓ¹ or ℓ∞ with respect
//! to that basis. The map stored under degree `k` starts in degree `k` and
//! ends in `k - 1` (chain direction) or `k + 1` (cochain direction).

mod maps;
mod prism;
mod ubc;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::exactlp::{self, dense, FillResult, LpError, MatrixError, Norm, SparseMat, SparseVec};
use crate::rational::Rational;

pub use maps::{bounded_product, dual_complex, inherited_ubc_constant, CochainMap};
pub use prism::{cylinder, end_inclusion, prism, prism_simplices};
pub use ubc::{
    ubc_constant, uubc_constant, ConstantEstimate, EstimateMode, UbcMode, Witness,
    DEFAULT_SAMPLES, EXACT_DIMENSION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Chain,
    Cochain,
}

impl Direction {
    /// Degree step of the differential: -1 for chains, +1 for cochains.
    pub fn step(self) -> i64 {
        match self {
            Direction::Chain => -1,
            Direction::Cochain => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Chain => "chain",
            Direction::Cochain => "cochain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormFlavor {
    L1,
    Linf,
}

impl NormFlavor {
    pub fn as_str(self) -> &'static str {
        match self {
            NormFlavor::L1 => "l1",
            NormFlavor::Linf => "linf",
        }
    }

    pub fn norm(self) -> Norm {
        match self {
            NormFlavor::L1 => Norm::L1,
            NormFlavor::Linf => Norm::Linf,
        }
    }

    pub fn of(self, v: &SparseVec) -> Rational {
        match self {
            NormFlavor::L1 => v.l1_norm(),
            NormFlavor::Linf => v.linf_norm(),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for NormFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("degrees must form a contiguous range")]
    NonContiguous,
    #[error("degree {0} is outside the complex")]
    UnknownDegree(i64),
    #[error("duplicate basis label `{label}` in degree {degree}")]
    DuplicateLabel { degree: i64, label: String },
    #[error("map in degree {degree} does not match the bases: {reason}")]
    MapShape { degree: i64, reason: String },
    #[error("not a complex: composite through degree {degree} has entry {value} at ({row}, {col})")]
    NonComplex {
        degree: i64,
        row: String,
        col: String,
        value: Rational,
    },
    #[error("chain is not a cycle: its differential is {0}")]
    NotACycle(SparseVec),
    #[error("label `{label}` is not a basis element of degree {degree}")]
    UnknownLabel { degree: i64, label: String },
    #[error("exact mode needs image dimension at most {cap}, got {dim}")]
    ExactModeUnavailable { dim: usize, cap: usize },
    #[error("empty family")]
    EmptyFamily,
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct NormedComplex {
    name: String,
    direction: Direction,
    flavor: NormFlavor,
    bases: BTreeMap<i64, Vec<String>>,
    // keyed by source degree; present whenever the target degree exists
    maps: BTreeMap<i64, SparseMat>,
}

impl fmt::Debug for NormedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormedComplex")
            .field("name", &self.name)
            .field("direction", &self.direction)
            .field("flavor", &self.flavor)
            .field(
                "ranks",
                &self.bases.iter().map(|(k, b)| (*k, b.len())).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl NormedComplex {
    /// Assembles a complex. Missing maps are zero; supplied maps must use the
    /// exact basis lists of their source (columns) and target (rows).
    pub fn from_parts(
        name: impl Into<String>,
        direction: Direction,
        flavor: NormFlavor,
        bases: BTreeMap<i64, Vec<String>>,
        mut maps: BTreeMap<i64, SparseMat>,
    ) -> Result<Self, ComplexError> {
        let degrees: Vec<i64> = bases.keys().copied().collect();
        if degrees.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(ComplexError::NonContiguous);
        }
        for (k, labels) in &bases {
            let mut seen = HashSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(ComplexError::DuplicateLabel {
                        degree: *k,
                        label: l.clone(),
                    });
                }
            }
        }
        for k in maps.keys() {
            let target = k + direction.step();
            if !bases.contains_key(k) || !bases.contains_key(&target) {
                return Err(ComplexError::MapShape {
                    degree: *k,
                    reason: "source or target degree missing".into(),
                });
            }
        }
        for (&k, cols) in &bases {
            let target = k + direction.step();
            let Some(rows) = bases.get(&target) else {
                continue;
            };
            match maps.get(&k) {
                Some(m) => {
                    if m.rows() != rows.as_slice() || m.cols() != cols.as_slice() {
                        return Err(ComplexError::MapShape {
                            degree: k,
                            reason: "row/column labels differ from the bases".into(),
                        });
                    }
                }
                None => {
                    maps.insert(k, SparseMat::zeros(rows.clone(), cols.clone())?);
                }
            }
        }
        Ok(NormedComplex {
            name: name.into(),
            direction,
            flavor,
            bases,
            maps,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn flavor(&self) -> NormFlavor {
        self.flavor
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.bases.keys().copied()
    }

    pub fn has_degree(&self, k: i64) -> bool {
        self.bases.contains_key(&k)
    }

    pub fn basis(&self, k: i64) -> &[String] {
        self.bases.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn bases(&self) -> &BTreeMap<i64, Vec<String>> {
        &self.bases
    }

    pub fn maps(&self) -> &BTreeMap<i64, SparseMat> {
        &self.maps
    }

    /// The differential leaving degree `k`, if its target degree exists.
    pub fn map_from(&self, k: i64) -> Option<&SparseMat> {
        self.maps.get(&k)
    }

    /// The differential leaving degree `k`, as a (possibly empty) matrix.
    pub fn differential_from(&self, k: i64) -> SparseMat {
        match self.maps.get(&k) {
            Some(m) => m.clone(),
            None => SparseMat::zeros(Vec::new(), self.basis(k).to_vec())
                .expect("basis labels are unique"),
        }
    }

    /// The differential whose image lies in degree `k`: `∂_{k+1}` for chains,
    /// `δ^{k-1}` for cochains. Empty-column matrix when no such map exists.
    pub fn differential_into(&self, k: i64) -> SparseMat {
        let source = k - self.direction.step();
        match self.maps.get(&source) {
            Some(m) => m.clone(),
            None => SparseMat::zeros(self.basis(k).to_vec(), Vec::new())
                .expect("basis labels are unique"),
        }
    }

    pub fn norm_of(&self, v: &SparseVec) -> Rational {
        self.flavor.of(v)
    }

    fn check_labels(&self, k: i64, v: &SparseVec) -> Result<(), ComplexError> {
        if !self.has_degree(k) {
            return Err(ComplexError::UnknownDegree(k));
        }
        let basis: HashSet<&String> = self.basis(k).iter().collect();
        if let Some(l) = v.labels().find(|l| !basis.contains(l)) {
            return Err(ComplexError::UnknownLabel {
                degree: k,
                label: l.clone(),
            });
        }
        Ok(())
    }

    /// Applies the differential leaving degree `k`.
    pub fn differential(&self, k: i64, v: &SparseVec) -> Result<SparseVec, ComplexError> {
        self.check_labels(k, v)?;
        Ok(self.differential_from(k).apply(v)?)
    }

    /// Checks that consecutive differentials compose to zero, exactly.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for (&k, first) in &self.maps {
            let Some(second) = self.maps.get(&(k + self.direction.step())) else {
                continue;
            };
            let composite = second.matmul(first)?;
            let entry = composite.triples().next().map(|(i, j, v)| (i, j, v.clone()));
            if let Some((i, j, value)) = entry {
                return Err(ComplexError::NonComplex {
                    degree: k,
                    row: composite.rows()[i].clone(),
                    col: composite.cols()[j].clone(),
                    value,
                });
            }
        }
        Ok(())
    }

    /// Minimal-norm filling of `b` in degree `k` by the differential into degree `k`.
    pub fn fill_norm(&self, k: i64, b: &SparseVec) -> Result<FillResult, ComplexError> {
        self.check_labels(k, b)?;
        let d = self.differential_into(k);
        Ok(exactlp::solve_min(&d, b, self.flavor.norm())?)
    }

    /// `inf |z - dc|` over all `c`: the norm of the homology class of the cycle `z`.
    pub fn homology_seminorm(&self, k: i64, z: &SparseVec) -> Result<Rational, ComplexError> {
        self.check_labels(k, z)?;
        let dz = self.differential(k, z)?;
        if !dz.is_empty() {
            return Err(ComplexError::NotACycle(dz));
        }
        if z.is_empty() {
            return Ok(Rational::zero());
        }
        let d = self.differential_into(k);
        // columns: one error coordinate per basis element, then the free differential columns
        let err_labels: Vec<String> = self.basis(k).iter().map(|l| format!("e:{l}")).collect();
        let free_labels: Vec<String> = d.cols().iter().map(|l| format!("f:{l}")).collect();
        let mut columns: Vec<Vec<(usize, Rational)>> =
            (0..d.nrows()).map(|i| vec![(i, Rational::one())]).collect();
        columns.extend((0..d.ncols()).map(|j| d.column(j).to_vec()));
        let mut cols = err_labels;
        cols.extend(free_labels);
        let regression = SparseMat::from_index_columns(d.rows().to_vec(), cols, columns)?;
        let mut weights = vec![Rational::one(); d.nrows()];
        weights.extend(std::iter::repeat_n(Rational::zero(), d.ncols()));
        let result = match self.flavor {
            NormFlavor::L1 => exactlp::solve_weighted_l1(&regression, z, &weights)?,
            NormFlavor::Linf => exactlp::solve_weighted_linf(&regression, z, &weights)?,
        };
        if !result.is_optimal() {
            return Err(LpError::Internal("regression problem is always feasible".into()).into());
        }
        Ok(result.objective)
    }

    /// Exact rank of the differential leaving degree `k`.
    pub fn differential_rank(&self, k: i64) -> usize {
        match self.maps.get(&k) {
            Some(m) => dense::rank(&m.to_dense(), m.ncols()),
            None => 0,
        }
    }

    /// Dimension of (co)homology in degree `k`: `dim ker d_k - rank d_{into k}`.
    pub fn homology_dimension(&self, k: i64) -> usize {
        let n = self.basis(k).len();
        let out = self.differential_rank(k);
        let into = self.differential_rank(k - self.direction.step());
        n - out - into
    }
}
