//! Maps between complexes, duals and finite bounded products.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactlp::{operator_norm, OperatorNorm, SparseMat, SparseVec};
use crate::rational::Rational;

use super::{ComplexError, Direction, NormFlavor, NormedComplex};

/// A degree-wise family of matrices between two complexes.
///
/// The component stored under `k` maps source degree `k` to target degree
/// `k + shift`. Shift 0 gives (co)chain maps; a homotopy has shift `+1` in
/// the chain direction and `-1` in the cochain direction.
#[derive(Debug, Clone)]
pub struct CochainMap {
    source: Arc<NormedComplex>,
    target: Arc<NormedComplex>,
    shift: i64,
    components: BTreeMap<i64, SparseMat>,
    declared: BTreeMap<i64, Rational>,
}

impl CochainMap {
    pub fn new(
        source: Arc<NormedComplex>,
        target: Arc<NormedComplex>,
        components: BTreeMap<i64, SparseMat>,
    ) -> Result<Self, ComplexError> {
        Self::with_shift(source, target, 0, components)
    }

    /// A homotopy-shaped map, raising chain degree or lowering cochain degree by one.
    pub fn homotopy(
        source: Arc<NormedComplex>,
        target: Arc<NormedComplex>,
        components: BTreeMap<i64, SparseMat>,
    ) -> Result<Self, ComplexError> {
        let shift = -source.direction().step();
        Self::with_shift(source, target, shift, components)
    }

    pub fn with_shift(
        source: Arc<NormedComplex>,
        target: Arc<NormedComplex>,
        shift: i64,
        components: BTreeMap<i64, SparseMat>,
    ) -> Result<Self, ComplexError> {
        if source.direction() != target.direction() {
            return Err(ComplexError::Input("source and target directions differ".into()));
        }
        for (&k, m) in &components {
            if m.cols() != source.basis(k) || m.rows() != target.basis(k + shift) {
                return Err(ComplexError::MapShape {
                    degree: k,
                    reason: "component labels differ from the bases".into(),
                });
            }
        }
        Ok(CochainMap {
            source,
            target,
            shift,
            components,
            declared: BTreeMap::new(),
        })
    }

    /// The identity of a complex.
    pub fn identity(c: Arc<NormedComplex>) -> Self {
        let components = c
            .degrees()
            .map(|k| (k, SparseMat::identity(c.basis(k).to_vec()).expect("unique labels")))
            .collect();
        CochainMap {
            source: c.clone(),
            target: c,
            shift: 0,
            components,
            declared: BTreeMap::new(),
        }
    }

    pub fn declare_norm_bound(&mut self, k: i64, bound: Rational) {
        self.declared.insert(k, bound);
    }

    pub fn declared_norm_bound(&self, k: i64) -> Option<&Rational> {
        self.declared.get(&k)
    }

    pub fn source(&self) -> &Arc<NormedComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<NormedComplex> {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Component at source degree `k`; zero when not supplied.
    pub fn component(&self, k: i64) -> SparseMat {
        match self.components.get(&k) {
            Some(m) => m.clone(),
            None => SparseMat::zeros(
                self.target.basis(k + self.shift).to_vec(),
                self.source.basis(k).to_vec(),
            )
            .expect("unique labels"),
        }
    }

    pub fn apply(&self, k: i64, v: &SparseVec) -> Result<SparseVec, ComplexError> {
        Ok(self.component(k).apply(v)?)
    }

    /// `self ∘ first`, both shifts added.
    pub fn compose(&self, first: &CochainMap) -> Result<CochainMap, ComplexError> {
        if !Arc::ptr_eq(&first.target, &self.source) && *first.target != *self.source {
            return Err(ComplexError::Input("maps are not composable".into()));
        }
        let mut components = BTreeMap::new();
        for k in first.source.degrees() {
            let m = self.component(k + first.shift).matmul(&first.component(k))?;
            components.insert(k, m);
        }
        Self::with_shift(
            first.source.clone(),
            self.target.clone(),
            self.shift + first.shift,
            components,
        )
    }

    /// Exact operator norm of the component at degree `k`.
    pub fn measured_norm(&self, k: i64) -> Result<Rational, ComplexError> {
        let flavor = match (self.source.flavor(), self.target.flavor()) {
            (NormFlavor::L1, NormFlavor::L1) => OperatorNorm::L1ToL1,
            (NormFlavor::Linf, NormFlavor::Linf) => OperatorNorm::LinfToLinf,
            _ => return Err(ComplexError::Input("mixed norm flavors".into())),
        };
        Ok(operator_norm(&self.component(k), flavor))
    }

    /// Checks `d ∘ f = f ∘ d` in every degree. Only meaningful for shift 0.
    pub fn check_commutes(&self) -> Result<(), ComplexError> {
        if self.shift != 0 {
            return Err(ComplexError::Input("only degree-preserving maps commute".into()));
        }
        for k in self.source.degrees() {
            let step = self.source.direction().step();
            if !self.source.has_degree(k + step) && !self.target.has_degree(k + step) {
                continue;
            }
            let left = match self.target.map_from(k) {
                Some(d) => d.matmul(&self.component(k))?,
                None => SparseMat::zeros(
                    self.target.basis(k + step).to_vec(),
                    self.source.basis(k).to_vec(),
                )?,
            };
            let right = match self.source.map_from(k) {
                Some(d) => self.component(k + step).matmul(d)?,
                None => SparseMat::zeros(
                    self.target.basis(k + step).to_vec(),
                    self.source.basis(k).to_vec(),
                )?,
            };
            if let Some(diff) = nonzero_entry(&left, &right)? {
                return Err(ComplexError::NonComplex {
                    degree: k,
                    row: diff.0,
                    col: diff.1,
                    value: diff.2,
                });
            }
        }
        Ok(())
    }

    /// Checks every declared bound against the measured operator norm.
    pub fn check_declared_bounds(&self) -> Result<(), ComplexError> {
        for (&k, bound) in &self.declared {
            let measured = self.measured_norm(k)?;
            if &measured > bound {
                return Err(ComplexError::Input(format!(
                    "degree {k}: measured norm {measured} exceeds declared bound {bound}"
                )));
            }
        }
        Ok(())
    }

    /// Whether `d h + h d = a - b` holds exactly in every degree, with `self` as `h`.
    pub fn is_homotopy_between(&self, a: &CochainMap, b: &CochainMap) -> Result<bool, ComplexError> {
        Ok(self.homotopy_failures(a, b)?.is_empty())
    }

    /// Source degrees where `d h + h d = a - b` fails.
    ///
    /// On a truncated complex the identity usually fails in the outermost
    /// degree, where the differential leaving it is missing.
    pub fn homotopy_failures(&self, a: &CochainMap, b: &CochainMap) -> Result<Vec<i64>, ComplexError> {
        let step = self.source.direction().step();
        if self.shift != -step || a.shift != 0 || b.shift != 0 {
            return Err(ComplexError::Input("degree shifts do not match a homotopy".into()));
        }
        let mut failures = Vec::new();
        for k in self.source.degrees() {
            let dh = match self.target.map_from(k + self.shift) {
                Some(d) => d.matmul(&self.component(k))?,
                None => SparseMat::zeros(
                    self.target.basis(k).to_vec(),
                    self.source.basis(k).to_vec(),
                )?,
            };
            let hd = self
                .component(k + step)
                .matmul(&self.source.differential_from(k))?;
            let lhs = dh.add(&hd)?;
            let rhs = a.component(k).sub(&b.component(k))?;
            if nonzero_entry(&lhs, &rhs)?.is_some() {
                failures.push(k);
            }
        }
        Ok(failures)
    }
}

fn nonzero_entry(
    a: &SparseMat,
    b: &SparseMat,
) -> Result<Option<(String, String, Rational)>, ComplexError> {
    let diff = a.sub(b)?;
    let entry = diff
        .triples()
        .next()
        .map(|(i, j, v)| (diff.rows()[i].clone(), diff.cols()[j].clone(), v.clone()));
    Ok(entry)
}

/// `‖f‖·‖g‖·K + ‖h‖`: a UBC constant for a complex homotopy equivalent to
/// one with constant `K`, through maps `f`, `g` and homotopy `h` of the given norms.
pub fn inherited_ubc_constant(
    norm_f: &Rational,
    norm_g: &Rational,
    k: &Rational,
    norm_h: &Rational,
) -> Result<Rational, ComplexError> {
    for (name, v) in [("‖f‖", norm_f), ("‖g‖", norm_g), ("K", k), ("‖h‖", norm_h)] {
        if v.is_negative() {
            return Err(ComplexError::Input(format!("{name} must be nonnegative, got {v}")));
        }
    }
    Ok(norm_f * norm_g * k + norm_h)
}

/// Degree-wise direct sum with the sup norm, truncated above `k_max`.
///
/// Labels of member `i` are prefixed with `i.`. Members must share a
/// direction and carry the ℓ∞ flavor, so the sup-combined norm is again ℓ∞.
pub fn bounded_product(family: &[NormedComplex], k_max: i64) -> Result<NormedComplex, ComplexError> {
    let first = family.first().ok_or(ComplexError::EmptyFamily)?;
    let direction = first.direction();
    if family.iter().any(|c| c.direction() != direction) {
        return Err(ComplexError::Input("members have mixed directions".into()));
    }
    if family.iter().any(|c| c.flavor() != NormFlavor::Linf) {
        return Err(ComplexError::Input(
            "bounded products are formed from linf members".into(),
        ));
    }
    let lo = family.iter().filter_map(|c| c.degrees().next()).min();
    let hi = family.iter().filter_map(|c| c.degrees().last()).max();
    let mut bases = BTreeMap::new();
    let mut maps = BTreeMap::new();
    let (Some(lo), Some(hi)) = (lo, hi.map(|h| h.min(k_max))) else {
        return NormedComplex::from_parts("product", direction, NormFlavor::Linf, bases, maps);
    };
    let prefixed = |i: usize, l: &str| format!("{i}.{l}");
    for k in lo..=hi {
        let labels: Vec<String> = family
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.basis(k).iter().map(move |l| prefixed(i, l)))
            .collect();
        bases.insert(k, labels);
    }
    for k in lo..=hi {
        let target = k + direction.step();
        let Some(rows) = bases.get(&target) else {
            continue;
        };
        let mut m = SparseMat::zeros(rows.clone(), bases[&k].clone())?;
        for (i, c) in family.iter().enumerate() {
            let Some(d) = c.map_from(k) else { continue };
            for (r, col, v) in d.triples() {
                let ri = m.row_position(&prefixed(i, &d.rows()[r])).expect("row present");
                let ci = m.col_position(&prefixed(i, &d.cols()[col])).expect("col present");
                m.add_at(ri, ci, v);
            }
        }
        maps.insert(k, m);
    }
    NormedComplex::from_parts("product", direction, NormFlavor::Linf, bases, maps)
}

/// The dual complex with transposed differentials.
///
/// A chain complex with ℓ¹ norm dualizes to a cochain complex with ℓ∞ norm
/// and vice versa.
pub fn dual_complex(c: &NormedComplex) -> NormedComplex {
    let (direction, flavor) = match c.direction() {
        Direction::Chain => (Direction::Cochain, NormFlavor::Linf),
        Direction::Cochain => (Direction::Chain, NormFlavor::L1),
    };
    let maps = c
        .maps()
        .iter()
        .map(|(&k, m)| (k + c.direction().step(), m.transpose()))
        .collect();
    NormedComplex::from_parts(
        format!("{}*", c.name()),
        direction,
        flavor,
        c.bases().clone(),
        maps,
    )
    .expect("transposed maps fit the same bases")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::simplicial::SimplicialComplex;

    fn triangle() -> NormedComplex {
        SimplicialComplex::from_generators([vec!["0", "1", "2"]])
            .unwrap()
            .chain_complex("t")
    }

    #[test]
    fn inherited_formula() {
        let k = q(7, 3);
        assert_eq!(
            inherited_ubc_constant(&q(1, 1), &q(1, 1), &k, &Rational::zero()).unwrap(),
            k
        );
        assert_eq!(
            inherited_ubc_constant(&q(1, 1), &q(1, 1), &q(1, 1), &q(4, 1)).unwrap(),
            q(5, 1)
        );
        assert_eq!(
            inherited_ubc_constant(&q(2, 1), &q(3, 1), &q(1, 2), &q(1, 1)).unwrap(),
            q(4, 1)
        );
        assert!(inherited_ubc_constant(&q(-1, 1), &q(1, 1), &q(1, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn dual_transposes_and_double_dual_returns() {
        let t = triangle();
        let d = dual_complex(&t);
        d.validate().unwrap();
        assert_eq!(d.direction(), Direction::Cochain);
        assert_eq!(d.flavor(), NormFlavor::Linf);
        assert_eq!(d.map_from(0).unwrap(), &t.map_from(1).unwrap().transpose());
        assert_eq!(d.map_from(1).unwrap(), &t.map_from(2).unwrap().transpose());
        let dd = dual_complex(&d);
        assert_eq!(dd.maps(), t.maps());
        let empty = NormedComplex::from_parts(
            "z",
            Direction::Chain,
            NormFlavor::L1,
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(dual_complex(&empty).bases().is_empty());
    }

    #[test]
    fn product_adds_cohomology() {
        let d = dual_complex(&triangle());
        let p = bounded_product(&[d.clone(), d.clone()], 2).unwrap();
        p.validate().unwrap();
        assert_eq!(p.homology_dimension(0), 2);
        assert_eq!(p.basis(1).len(), 6);
        let single = bounded_product(std::slice::from_ref(&d), 2).unwrap();
        assert_eq!(single.homology_dimension(0), 1);
        assert!(bounded_product(&[d, triangle()], 2).is_err());
    }

    #[test]
    fn identity_commutes_and_homotopy_zero() {
        let t = Arc::new(triangle());
        let id = CochainMap::identity(t.clone());
        id.check_commutes().unwrap();
        assert_eq!(id.measured_norm(1).unwrap(), q(1, 1));
        let h = CochainMap::homotopy(t.clone(), t.clone(), BTreeMap::new()).unwrap();
        assert!(h.is_homotopy_between(&id, &id).unwrap());
        let zero = CochainMap::new(t.clone(), t, BTreeMap::new()).unwrap();
        assert!(!h.is_homotopy_between(&id, &zero).unwrap());
    }
}
