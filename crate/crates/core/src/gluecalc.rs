//! Glueing estimates and glued relative cycles on finite chain models.
//!
//! Pieces are ℓ¹ chain complexes with a relative `n`-cycle each. Identified
//! `(n-1)`-faces are merged under an orientation-reversing identification:
//! the face of the first piece keeps its sign, the face of the second piece
//! is replaced by the negative of the first.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exactlp::{FillStatus, SparseMat, SparseVec};
use crate::normcx::{
    ubc_constant, ComplexError, Direction, EstimateMode, NormFlavor, NormedComplex, UbcMode,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlueError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn check_nonnegative(name: &str, v: &Rational) -> Result<(), GlueError> {
    if v.is_negative() {
        return Err(GlueError::Input(format!("{name} must be nonnegative, got {v}")));
    }
    Ok(())
}

/// `(1 + K·(n+1))·Σ volumes`.
pub fn glue_upper_bound(k: &Rational, n: u32, volumes: &[Rational]) -> Result<Rational, GlueError> {
    check_nonnegative("K", k)?;
    if n < 1 {
        return Err(GlueError::Input("n must be at least 1".into()));
    }
    for v in volumes {
        check_nonnegative("volume", v)?;
    }
    let total: Rational = volumes.iter().sum();
    Ok((Rational::one() + k * &Rational::from(n as i64 + 1)) * total)
}

/// `(K·(n+1) + 1)·relative_volume`.
pub fn interior_bound(k: &Rational, n: u32, relative_volume: &Rational) -> Result<Rational, GlueError> {
    glue_upper_bound(k, n, std::slice::from_ref(relative_volume))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub name: String,
    pub complex: NormedComplex,
    pub cycle: SparseVec,
    /// Boundary faces left unglued.
    pub free: BTreeSet<String>,
}

/// A face of a piece: `(piece index, label)`.
pub type FaceRef = (usize, String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueingInstance {
    n: i64,
    pieces: Vec<Piece>,
    identifications: Vec<(FaceRef, FaceRef)>,
    // face -> (merged label, sign)
    glue_map: BTreeMap<FaceRef, (String, i64)>,
}

fn piece_label(piece: &str, label: &str) -> String {
    format!("{piece}:{label}")
}

impl GlueingInstance {
    /// Validates pieces and identifications. Every relative cycle must have
    /// boundary supported on identified faces and declared free faces.
    pub fn new(
        n: i64,
        pieces: Vec<Piece>,
        identifications: Vec<(FaceRef, FaceRef)>,
    ) -> Result<Self, GlueError> {
        if n < 1 {
            return Err(GlueError::Input("n must be at least 1".into()));
        }
        let mut names = BTreeSet::new();
        for p in &pieces {
            if !names.insert(p.name.as_str()) {
                return Err(GlueError::Input(format!("duplicate piece `{}`", p.name)));
            }
            let c = &p.complex;
            if c.direction() != Direction::Chain || c.flavor() != NormFlavor::L1 {
                return Err(GlueError::Input(format!("piece `{}` must be an l1 chain complex", p.name)));
            }
            if !c.has_degree(n) || !c.has_degree(n - 1) {
                return Err(GlueError::Input(format!(
                    "piece `{}` lacks degree {} or {}",
                    p.name,
                    n,
                    n - 1
                )));
            }
            c.validate()?;
            let basis: BTreeSet<&String> = c.basis(n).iter().collect();
            if let Some(l) = p.cycle.labels().find(|l| !basis.contains(l)) {
                return Err(GlueError::Input(format!("cycle of `{}` uses unknown label `{l}`", p.name)));
            }
            let faces: BTreeSet<&String> = c.basis(n - 1).iter().collect();
            if let Some(l) = p.free.iter().find(|l| !faces.contains(l)) {
                return Err(GlueError::Input(format!("free face `{l}` of `{}` is unknown", p.name)));
            }
        }
        let mut glue_map = BTreeMap::new();
        for (a, b) in &identifications {
            if a == b {
                return Err(GlueError::Input(format!(
                    "face `{}` of `{}` is identified with itself",
                    a.1, pieces[a.0].name
                )));
            }
            for f in [a, b] {
                let p = pieces
                    .get(f.0)
                    .ok_or_else(|| GlueError::Input(format!("unknown piece index {}", f.0)))?;
                if !p.complex.basis(n - 1).contains(&f.1) {
                    return Err(GlueError::Input(format!("`{}` is not a face of `{}`", f.1, p.name)));
                }
                if p.free.contains(&f.1) {
                    return Err(GlueError::Input(format!("face `{}` of `{}` is both free and glued", f.1, p.name)));
                }
                if glue_map.contains_key(f) {
                    return Err(GlueError::Input(format!("face `{}` of `{}` is glued twice", f.1, p.name)));
                }
            }
            let merged = piece_label(&pieces[a.0].name, &a.1);
            glue_map.insert(a.clone(), (merged.clone(), 1));
            glue_map.insert(b.clone(), (merged, -1));
        }
        let inst = GlueingInstance {
            n,
            pieces,
            identifications,
            glue_map,
        };
        for (i, p) in inst.pieces.iter().enumerate() {
            let dz = p.complex.differential(n, &p.cycle)?;
            let stray = dz
                .labels()
                .find(|l| !p.free.contains(*l) && !inst.glue_map.contains_key(&(i, (*l).clone())))
                .cloned();
            if let Some(l) = stray {
                return Err(GlueError::Input(format!(
                    "cycle of `{}` is not relative: boundary meets `{l}`",
                    p.name
                )));
            }
        }
        Ok(inst)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn identifications(&self) -> &[(FaceRef, FaceRef)] {
        &self.identifications
    }

    pub fn piece_index(&self, name: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.name == name)
    }

    /// Image of a degree-`(n-1)` face chain of piece `i` in the glued complex.
    fn map_faces(&self, i: usize, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (l, a) in v.iter() {
            match self.glue_map.get(&(i, l.clone())) {
                Some((merged, sign)) => out.add_to(merged.clone(), &(a * &Rational::from(*sign))),
                None => out.add_to(piece_label(&self.pieces[i].name, l), a),
            }
        }
        out
    }

    fn map_cells(&self, i: usize, v: &SparseVec) -> SparseVec {
        v.map_labels(|l| piece_label(&self.pieces[i].name, l))
    }

    fn is_glue_label(&self, merged: &str) -> bool {
        self.glue_map.values().any(|(m, _)| m == merged)
    }

    /// The glue locus `N`: merged glued faces in degree `n-1` and the piece
    /// `n`-cells whose boundary lies entirely on glued faces in degree `n`.
    pub fn glue_locus(&self) -> Result<NormedComplex, GlueError> {
        let n = self.n;
        let rows: Vec<String> = self
            .glue_map
            .values()
            .map(|(m, _)| m.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut cols = Vec::new();
        let mut columns: Vec<SparseVec> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let d = p.complex.differential_from(n);
            for (j, cell) in d.cols().iter().enumerate() {
                let boundary = SparseVec::from_pairs(
                    d.column(j).iter().map(|(r, v)| (d.rows()[*r].clone(), v.clone())),
                );
                if boundary.is_empty()
                    || !boundary.labels().all(|l| self.glue_map.contains_key(&(i, l.clone())))
                {
                    continue;
                }
                cols.push(piece_label(&p.name, cell));
                columns.push(self.map_faces(i, &boundary));
            }
        }
        let row_pos: BTreeMap<&String, usize> = rows.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let index_columns = columns
            .iter()
            .map(|c| c.iter().map(|(l, v)| (row_pos[l], v.clone())).collect())
            .collect();
        let m = SparseMat::from_index_columns(rows.clone(), cols.clone(), index_columns)
            .map_err(ComplexError::from)?;
        let mut bases = BTreeMap::new();
        bases.insert(n - 1, rows);
        bases.insert(n, cols);
        let mut maps = BTreeMap::new();
        maps.insert(n, m);
        Ok(NormedComplex::from_parts("N", Direction::Chain, NormFlavor::L1, bases, maps)?)
    }

    /// `b = Σ ∂z_i` restricted to glued faces, in merged labels.
    pub fn glue_boundary(&self) -> Result<SparseVec, GlueError> {
        let mut b = SparseVec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let dz = p.complex.differential(self.n, &p.cycle)?;
            let glued = dz.restrict(|l| self.glue_map.contains_key(&(i, l.to_string())));
            b = b.add(&self.map_faces(i, &glued));
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueReport {
    pub boundary: SparseVec,
    pub boundary_norm: Rational,
    pub filler_norm: Rational,
    pub cycles_norm: Rational,
    /// `|c|₁ / |b|₁`, 0 when `b = 0`.
    pub measured_ratio: Rational,
    /// `|b|₁ ≤ (n+1)·Σ|z_i|₁`.
    pub boundary_bound_ok: bool,
    /// `|c|₁ ≤ K_declared·|b|₁`.
    pub declared_ok: bool,
    /// Exact UBC constant of `N` in degree `n-1`, when exact mode applies.
    pub locus_constant: Option<Rational>,
    /// `|c|₁ ≤ K_N·(n+1)·Σ|z_i|₁`, when the constant is known.
    pub locus_bound_ok: Option<bool>,
    /// `∂z` lies on free faces only.
    pub free_support_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlueOutcome {
    Glued {
        cycle: SparseVec,
        filler: SparseVec,
        report: GlueReport,
    },
    /// `b` does not bound in the glue locus; `certificate` is a Farkas vector.
    Inconsistent {
        boundary: SparseVec,
        certificate: SparseVec,
    },
}

/// Glues the relative cycles: fills `b` minimally in `N` by `c` and returns
/// `z = Σ z_i - c` in the glued complex together with the norm report.
pub fn glue_cycle(inst: &GlueingInstance, k_declared: &Rational) -> Result<GlueOutcome, GlueError> {
    check_nonnegative("K", k_declared)?;
    let n = inst.n;
    let locus = inst.glue_locus()?;
    let b = inst.glue_boundary()?;
    let fill = locus.fill_norm(n - 1, &b)?;
    if fill.status == FillStatus::Infeasible {
        return Ok(GlueOutcome::Inconsistent {
            boundary: b,
            certificate: fill.dual_certificate,
        });
    }
    let c = fill.solution;
    let mut z = SparseVec::new();
    let mut cycles_norm = Rational::zero();
    for (i, p) in inst.pieces.iter().enumerate() {
        z = z.add(&inst.map_cells(i, &p.cycle));
        cycles_norm += p.cycle.l1_norm();
    }
    let z = z.sub(&c);

    // ∂z in the glued complex, through each piece's boundary map
    let mut dz = SparseVec::new();
    for (i, p) in inst.pieces.iter().enumerate() {
        let prefix = format!("{}:", p.name);
        let local = SparseVec::from_pairs(
            z.iter()
                .filter_map(|(l, v)| l.strip_prefix(&prefix).map(|s| (s.to_string(), v.clone()))),
        );
        let d = p.complex.differential(n, &local)?;
        dz = dz.add(&inst.map_faces(i, &d));
    }
    let free_support_ok = dz.labels().all(|l| !inst.is_glue_label(l))
        && inst.pieces.iter().enumerate().all(|(i, p)| {
            let prefix = format!("{}:", p.name);
            dz.labels()
                .filter_map(|l| l.strip_prefix(&prefix))
                .all(|l| p.free.contains(l) || inst.glue_map.contains_key(&(i, l.to_string())))
        });

    let boundary_norm = b.l1_norm();
    let filler_norm = c.l1_norm();
    let measured_ratio = if boundary_norm.is_zero() {
        Rational::zero()
    } else {
        &filler_norm / &boundary_norm
    };
    let n_plus_one = Rational::from(n + 1);
    let locus_constant = match ubc_constant(&locus, n - 1, UbcMode::Exact) {
        Ok(e) if e.mode == EstimateMode::ExactOnFiniteComplex => Some(e.value),
        Ok(_) | Err(ComplexError::ExactModeUnavailable { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let locus_bound_ok = locus_constant
        .as_ref()
        .map(|k| filler_norm <= k * &n_plus_one * &cycles_norm);
    let report = GlueReport {
        boundary_bound_ok: boundary_norm <= &n_plus_one * &cycles_norm,
        declared_ok: filler_norm <= k_declared * &boundary_norm,
        boundary: b,
        boundary_norm,
        filler_norm,
        cycles_norm,
        measured_ratio,
        locus_constant,
        locus_bound_ok,
        free_support_ok,
    };
    Ok(GlueOutcome::Glued {
        cycle: z,
        filler: c,
        report,
    })
}
