use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::rational::Rational;

/// A finitely supported vector keyed by basis labels. Zero entries are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: BTreeMap<String, Rational>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut v = Self::new();
        for (k, x) in pairs {
            v.add_to(k.into(), &x);
        }
        v
    }

    pub fn unit(label: impl Into<String>) -> Self {
        Self::from_pairs([(label.into(), Rational::one())])
    }

    pub fn get(&self, label: &str) -> Rational {
        self.entries.get(label).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, label: impl Into<String>, value: Rational) {
        let label = label.into();
        if value.is_zero() {
            self.entries.remove(&label);
        } else {
            self.entries.insert(label, value);
        }
    }

    pub fn add_to(&mut self, label: impl Into<String>, value: &Rational) {
        if value.is_zero() {
            return;
        }
        let label = label.into();
        let slot = self.entries.entry(label.clone()).or_default();
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&label);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.entries.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l1_norm(&self) -> Rational {
        self.entries.values().map(Rational::abs).sum()
    }

    pub fn linf_norm(&self) -> Rational {
        self.entries
            .values()
            .map(Rational::abs)
            .fold(Rational::zero(), Rational::max)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::new();
        }
        Self {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_to(k.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn dot(&self, other: &Self) -> Rational {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .iter()
            .filter_map(|(k, v)| large.entries.get(k).map(|w| v * w))
            .sum()
    }

    /// Relabels every entry; entries mapped onto the same label are summed.
    pub fn map_labels(&self, mut f: impl FnMut(&str) -> String) -> Self {
        Self::from_pairs(self.iter().map(|(k, v)| (f(k), v.clone())))
    }

    pub fn restrict(&self, mut keep: impl FnMut(&str) -> bool) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.entries {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{k}:{v}")?;
        }
        Ok(())
    }
}

/// A sparse matrix with labeled rows and columns, stored column-major.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: Vec<String>,
    cols: Vec<String>,
    row_index: HashMap<String, usize>,
    col_index: HashMap<String, usize>,
    // per column: (row index, value), sorted by row index, no zeros
    columns: Vec<Vec<(usize, Rational)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("duplicate {axis} label `{label}`")]
    DuplicateLabel { axis: &'static str, label: String },
    #[error("unknown {axis} label `{label}`")]
    UnknownLabel { axis: &'static str, label: String },
    #[error("dimension mismatch: {0}")]
    Mismatch(String),
}

fn index_of(labels: &[String], axis: &'static str) -> Result<HashMap<String, usize>, MatrixError> {
    let mut idx = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if idx.insert(l.clone(), i).is_some() {
            return Err(MatrixError::DuplicateLabel {
                axis,
                label: l.clone(),
            });
        }
    }
    Ok(idx)
}

impl SparseMat {
    pub fn zeros(rows: Vec<String>, cols: Vec<String>) -> Result<Self, MatrixError> {
        let row_index = index_of(&rows, "row")?;
        let col_index = index_of(&cols, "column")?;
        let columns = vec![Vec::new(); cols.len()];
        Ok(Self {
            rows,
            cols,
            row_index,
            col_index,
            columns,
        })
    }

    /// Builds from `(row, col, value)` triples; duplicate positions are summed.
    pub fn from_triples<'a, I>(rows: Vec<String>, cols: Vec<String>, triples: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (&'a str, &'a str, Rational)>,
    {
        let mut m = Self::zeros(rows, cols)?;
        for (r, c, v) in triples {
            let ri = *m.row_index.get(r).ok_or_else(|| MatrixError::UnknownLabel {
                axis: "row",
                label: r.to_string(),
            })?;
            let ci = *m.col_index.get(c).ok_or_else(|| MatrixError::UnknownLabel {
                axis: "column",
                label: c.to_string(),
            })?;
            m.add_at(ri, ci, &v);
        }
        Ok(m)
    }

    /// Builds from per-column index lists. Entries must be nonzero with distinct rows.
    pub fn from_index_columns(
        rows: Vec<String>,
        cols: Vec<String>,
        columns: Vec<Vec<(usize, Rational)>>,
    ) -> Result<Self, MatrixError> {
        let mut m = Self::zeros(rows, cols)?;
        if columns.len() != m.cols.len() {
            return Err(MatrixError::Mismatch(format!(
                "{} columns declared, {} supplied",
                m.cols.len(),
                columns.len()
            )));
        }
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col {
                if i >= m.rows.len() {
                    return Err(MatrixError::Mismatch(format!("row index {i} out of range")));
                }
                m.add_at(i, j, &v);
            }
        }
        Ok(m)
    }

    pub fn identity(labels: Vec<String>) -> Result<Self, MatrixError> {
        let n = labels.len();
        let columns = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        Self::from_index_columns(labels.clone(), labels, columns)
    }

    pub fn add_at(&mut self, row: usize, col: usize, v: &Rational) {
        if v.is_zero() {
            return;
        }
        let column = &mut self.columns[col];
        match column.binary_search_by_key(&row, |(r, _)| *r) {
            Ok(pos) => {
                column[pos].1 += v;
                if column[pos].1.is_zero() {
                    column.remove(pos);
                }
            }
            Err(pos) => column.insert(pos, (row, v.clone())),
        }
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_position(&self, label: &str) -> Option<usize> {
        self.row_index.get(label).copied()
    }

    pub fn col_position(&self, label: &str) -> Option<usize> {
        self.col_index.get(label).copied()
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.columns[j].binary_search_by_key(&i, |(r, _)| *r) {
            Ok(pos) => self.columns[j][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Iterates `(row, col, value)` over the stored entries in column-major order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows.len()];
        for (i, j, v) in self.triples() {
            columns[i].push((j, v.clone()));
        }
        Self {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            row_index: self.col_index.clone(),
            col_index: self.row_index.clone(),
            columns,
        }
    }

    /// Matrix-vector product. Labels of `x` not among the columns are an error.
    pub fn apply(&self, x: &SparseVec) -> Result<SparseVec, MatrixError> {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (label, v) in x.iter() {
            let j = self.col_position(label).ok_or_else(|| MatrixError::UnknownLabel {
                axis: "column",
                label: label.clone(),
            })?;
            for (i, a) in &self.columns[j] {
                *acc.entry(*i).or_default() += a * v;
            }
        }
        Ok(SparseVec::from_pairs(
            acc.into_iter().map(|(i, v)| (self.rows[i].clone(), v)),
        ))
    }

    /// `self * rhs`; the column labels of `self` must equal the row labels of `rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Mismatch(format!(
                "inner bases differ ({} vs {} labels)",
                self.cols.len(),
                rhs.rows.len()
            )));
        }
        let mut columns = Vec::with_capacity(rhs.ncols());
        for col in &rhs.columns {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, b) in col {
                for (i, a) in &self.columns[*k] {
                    *acc.entry(*i).or_default() += a * b;
                }
            }
            columns.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(Self {
            rows: self.rows.clone(),
            cols: rhs.cols.clone(),
            row_index: self.row_index.clone(),
            col_index: rhs.col_index.clone(),
            columns,
        })
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<(), MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::Mismatch("operands have different bases".into()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.check_same_shape(rhs)?;
        let mut out = self.clone();
        for (i, j, v) in rhs.triples() {
            out.add_at(i, j, v);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.add(&rhs.scale(&-Rational::one()))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = self.clone();
        for col in &mut out.columns {
            if factor.is_zero() {
                col.clear();
            } else {
                for (_, v) in col.iter_mut() {
                    *v = &*v * factor;
                }
            }
        }
        out
    }

    /// Maximum column ℓ¹-norm: the ℓ¹→ℓ¹ operator norm.
    pub fn max_column_l1(&self) -> Rational {
        self.columns
            .iter()
            .map(|c| c.iter().map(|(_, v)| v.abs()).sum::<Rational>())
            .fold(Rational::zero(), Rational::max)
    }

    /// Maximum row ℓ¹-norm: the ℓ∞→ℓ∞ operator norm.
    pub fn max_row_l1(&self) -> Rational {
        let mut sums = vec![Rational::zero(); self.rows.len()];
        for (i, _, v) in self.triples() {
            sums[i] += v.abs();
        }
        sums.into_iter().fold(Rational::zero(), Rational::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut d = vec![vec![Rational::zero(); self.ncols()]; self.nrows()];
        for (i, j, v) in self.triples() {
            d[i][j] = v.clone();
        }
        d
    }
}

impl fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMat {}x{}", self.nrows(), self.ncols())?;
        for (i, j, v) in self.triples() {
            writeln!(f, "  {} {} {}", self.rows[i], self.cols[j], v)?;
        }
        Ok(())
    }
}
