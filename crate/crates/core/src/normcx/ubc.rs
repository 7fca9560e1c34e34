//! Uniform boundary condition constants of finite complexes.
//!
//! The filling norm `b ↦ min{|c| : dc = b}` is convex and positively
//! homogeneous on the image `V = im d`, so its maximum over the unit ball
//! `{b ∈ V : |b| ≤ 1}` is attained at a vertex of that polytope.
//!
//! For the ℓ¹ norm the vertices are the normalized elementary vectors
//! (minimal-support vectors) of `V`: for `b ∈ V` the smallest face of the
//! cross-polytope containing `b` meets `V` in a set of dimension
//! `dim{v ∈ V : supp v ⊆ supp b} - 1`. Every elementary vector arises as the
//! generator of `V ∩ {x_Z = 0}` for a set `Z` of `dim V - 1` coordinates
//! that are independent on `V`. For the ℓ∞ norm the vertices are the points
//! of `V` where `dim V` independent coordinates are `±1` and none exceeds 1.

use std::collections::BTreeSet;

use crate::exactlp::{dense, SparseMat, SparseVec};
use crate::prng::XorShift64Star;
use crate::rational::Rational;

use super::{ComplexError, NormFlavor, NormedComplex};

/// Largest image dimension for which exact vertex enumeration is offered.
pub const EXACT_DIMENSION_CAP: usize = 8;
pub const DEFAULT_SAMPLES: usize = 200;
const SAMPLE_SUPPORT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UbcMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
    /// Exact when the image dimension is within the cap, sampled otherwise.
    Auto { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimateMode {
    ExactOnFiniteComplex,
    SampledLowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub boundary: SparseVec,
    pub fill_norm: Rational,
    pub boundary_norm: Rational,
}

impl Witness {
    pub fn ratio(&self) -> Rational {
        if self.boundary_norm.is_zero() {
            Rational::zero()
        } else {
            &self.fill_norm / &self.boundary_norm
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantEstimate {
    pub value: Rational,
    pub mode: EstimateMode,
    pub witnesses: Vec<Witness>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Column basis of the image of `d` as dense vectors of length `nrows`.
fn image_basis(d: &SparseMat) -> Vec<Vec<Rational>> {
    let dm = d.to_dense();
    let (_, pivots) = dense::rref(dm.clone(), d.ncols());
    pivots
        .into_iter()
        .map(|j| dm.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Scales to unit norm with the first nonzero entry positive.
fn normalize(v: Vec<Rational>, flavor: NormFlavor) -> Vec<Rational> {
    let norm = match flavor {
        NormFlavor::L1 => v.iter().map(Rational::abs).sum::<Rational>(),
        NormFlavor::Linf => v.iter().map(Rational::abs).fold(Rational::zero(), Rational::max),
    };
    let first = v.iter().find(|x| !x.is_zero()).expect("nonzero vector");
    let scale = if first.is_negative() { -norm.recip() } else { norm.recip() };
    v.into_iter().map(|x| &x * &scale).collect()
}

/// Vertices of `{b ∈ im d : |b| ≤ 1}` up to sign.
pub(crate) fn unit_ball_vertices(d: &SparseMat, flavor: NormFlavor) -> Vec<Vec<Rational>> {
    let basis = image_basis(d);
    let dim = basis.len();
    let n = d.nrows();
    if dim == 0 {
        return Vec::new();
    }
    // row i of `coords` is coordinate i of the image, as a functional on basis coefficients
    let coords: Vec<Vec<Rational>> = (0..n)
        .map(|i| basis.iter().map(|v| v[i].clone()).collect())
        .collect();
    let embed = |x: &[Rational]| -> Vec<Rational> {
        (0..n)
            .map(|i| coords[i].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    };
    let mut out = BTreeSet::new();
    match flavor {
        NormFlavor::L1 => {
            for zeros in combinations(n, dim - 1) {
                let sub: Vec<Vec<Rational>> = zeros.iter().map(|&i| coords[i].clone()).collect();
                if dense::rank(&sub, dim) != dim - 1 {
                    continue;
                }
                let kernel = dense::kernel_basis(&sub, dim);
                debug_assert_eq!(kernel.len(), 1);
                out.insert(normalize(embed(&kernel[0]), flavor));
            }
        }
        NormFlavor::Linf => {
            for active in combinations(n, dim) {
                let sub: Vec<Vec<Rational>> = active.iter().map(|&i| coords[i].clone()).collect();
                if dense::rank(&sub, dim) != dim {
                    continue;
                }
                // first sign fixed to +1: vertices come in ± pairs
                for mask in 0..(1u64 << (dim - 1)) {
                    let rhs: Vec<Rational> = (0..dim)
                        .map(|t| {
                            if t > 0 && mask & (1 << (t - 1)) != 0 {
                                -Rational::one()
                            } else {
                                Rational::one()
                            }
                        })
                        .collect();
                    let x = dense::solve(&sub, dim, &rhs).expect("square nonsingular system");
                    let v = embed(&x);
                    if v.iter().all(|c| c.abs() <= Rational::one()) {
                        out.insert(normalize(v, flavor));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

fn to_sparse(labels: &[String], v: &[Rational]) -> SparseVec {
    SparseVec::from_pairs(labels.iter().cloned().zip(v.iter().cloned()))
}

fn exact(c: &NormedComplex, k: i64) -> Result<ConstantEstimate, ComplexError> {
    let d = c.differential_into(k);
    let dim = dense::rank(&d.to_dense(), d.ncols());
    if dim > EXACT_DIMENSION_CAP {
        return Err(ComplexError::ExactModeUnavailable {
            dim,
            cap: EXACT_DIMENSION_CAP,
        });
    }
    let mut witnesses = Vec::new();
    let mut value = Rational::zero();
    for v in unit_ball_vertices(&d, c.flavor()) {
        let b = to_sparse(d.rows(), &v);
        let fill = c.fill_norm(k, &b)?;
        debug_assert!(fill.is_optimal());
        value = value.max(fill.objective.clone());
        witnesses.push(Witness {
            boundary_norm: c.norm_of(&b),
            boundary: b,
            fill_norm: fill.objective,
        });
    }
    Ok(ConstantEstimate {
        value,
        mode: EstimateMode::ExactOnFiniteComplex,
        witnesses,
    })
}

fn sampled(c: &NormedComplex, k: i64, samples: usize, seed: u64) -> Result<ConstantEstimate, ComplexError> {
    let d = c.differential_into(k);
    let mut rng = XorShift64Star::new(seed);
    let mut witnesses = Vec::new();
    let mut value = Rational::zero();
    if d.ncols() == 0 {
        return Ok(ConstantEstimate {
            value,
            mode: EstimateMode::SampledLowerBound,
            witnesses,
        });
    }
    for _ in 0..samples {
        let support = rng.sample_distinct(d.ncols(), SAMPLE_SUPPORT);
        let chain = SparseVec::from_pairs(
            support
                .into_iter()
                .map(|j| (d.cols()[j].clone(), Rational::from_int(rng.coefficient()))),
        );
        let b = d.apply(&chain)?;
        if b.is_empty() {
            continue;
        }
        let fill = c.fill_norm(k, &b)?;
        let w = Witness {
            boundary_norm: c.norm_of(&b),
            boundary: b,
            fill_norm: fill.objective,
        };
        value = value.max(w.ratio());
        witnesses.push(w);
    }
    Ok(ConstantEstimate {
        value,
        mode: EstimateMode::SampledLowerBound,
        witnesses,
    })
}

/// The best UBC constant in degree `k`: the smallest `K` with a filling of
/// norm at most `K·|b|` for every `b` in the image of the differential into `k`.
///
/// Exact mode enumerates unit-ball vertices of the image; sampled mode fills
/// boundaries of pseudorandom chains and only yields a lower bound. An image
/// of dimension zero has constant 0.
pub fn ubc_constant(c: &NormedComplex, k: i64, mode: UbcMode) -> Result<ConstantEstimate, ComplexError> {
    if !c.has_degree(k) {
        return Err(ComplexError::UnknownDegree(k));
    }
    match mode {
        UbcMode::Exact => exact(c, k),
        UbcMode::Sampled { samples, seed } => sampled(c, k, samples, seed),
        UbcMode::Auto { samples, seed } => match exact(c, k) {
            Err(ComplexError::ExactModeUnavailable { .. }) => sampled(c, k, samples, seed),
            other => other,
        },
    }
}

/// A common UBC constant for a finite family: the maximum of the members'
/// constants, flagged as a lower bound if any member was only sampled.
pub fn uubc_constant(
    family: &[NormedComplex],
    k: i64,
    mode: UbcMode,
) -> Result<ConstantEstimate, ComplexError> {
    if family.is_empty() {
        return Err(ComplexError::EmptyFamily);
    }
    let mut value = Rational::zero();
    let mut est_mode = EstimateMode::ExactOnFiniteComplex;
    let mut witnesses = Vec::new();
    for member in family {
        let e = ubc_constant(member, k, mode)?;
        if e.mode == EstimateMode::SampledLowerBound {
            est_mode = EstimateMode::SampledLowerBound;
        }
        value = value.max(e.value);
        witnesses.extend(e.witnesses);
    }
    Ok(ConstantEstimate {
        value,
        mode: est_mode,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::normcx::Direction;
    use crate::rational::q;
    use crate::simplicial::SimplicialComplex;

    fn one_column(v: Rational) -> NormedComplex {
        let mut bases = BTreeMap::new();
        bases.insert(0, vec!["b".to_string()]);
        bases.insert(1, vec!["c".to_string()]);
        let mut maps = BTreeMap::new();
        maps.insert(
            1,
            SparseMat::from_triples(vec!["b".into()], vec!["c".into()], [("b", "c", v)]).unwrap(),
        );
        NormedComplex::from_parts("one", Direction::Chain, NormFlavor::L1, bases, maps).unwrap()
    }

    #[test]
    fn zero_map_has_constant_zero() {
        let e = ubc_constant(&one_column(Rational::zero()), 0, UbcMode::Exact).unwrap();
        assert!(e.value.is_zero());
        assert!(e.witnesses.is_empty());
    }

    #[test]
    fn one_third_column_needs_three() {
        let c = one_column(q(1, 3));
        let e = ubc_constant(&c, 0, UbcMode::Exact).unwrap();
        assert_eq!(e.value, q(3, 1));
        assert_eq!(e.mode, EstimateMode::ExactOnFiniteComplex);
        let s = ubc_constant(&c, 0, UbcMode::Sampled { samples: 20, seed: 1 }).unwrap();
        assert_eq!(s.mode, EstimateMode::SampledLowerBound);
        assert!(s.value <= e.value);
    }

    #[test]
    fn uubc_takes_the_max() {
        let fam = [one_column(q(1, 2)), one_column(q(1, 5))];
        let e = uubc_constant(&fam, 0, UbcMode::Exact).unwrap();
        assert_eq!(e.value, q(5, 1));
        assert_eq!(uubc_constant(&[], 0, UbcMode::Exact), Err(ComplexError::EmptyFamily));
        let single = uubc_constant(&fam[..1], 0, UbcMode::Exact).unwrap();
        assert_eq!(single.value, ubc_constant(&fam[0], 0, UbcMode::Exact).unwrap().value);
    }

    #[test]
    fn filled_triangle_constant_is_one() {
        let t = SimplicialComplex::from_generators([vec!["0", "1", "2"]])
            .unwrap()
            .chain_complex("t");
        let e = ubc_constant(&t, 1, UbcMode::Exact).unwrap();
        // the unit-norm boundary is ∂t/3, filled by t/3
        assert_eq!(e.value, q(1, 3));
        assert_eq!(e.witnesses.len(), 1);
    }

    #[test]
    fn vertex_enumeration_on_a_plane() {
        // V = span{(1,1,0), (0,1,1)} in ℓ¹: elementary vectors are the
        // minimal-support vectors (1,1,0), (0,1,1), (1,0,-1) up to sign.
        let d = SparseMat::from_triples(
            vec!["x".into(), "y".into(), "z".into()],
            vec!["u".into(), "v".into()],
            [("x", "u", q(1, 1)), ("y", "u", q(1, 1)), ("y", "v", q(1, 1)), ("z", "v", q(1, 1))],
        )
        .unwrap();
        let vs = unit_ball_vertices(&d, NormFlavor::L1);
        assert_eq!(vs.len(), 3);
        let half = q(1, 2);
        assert!(vs.contains(&vec![half.clone(), half.clone(), Rational::zero()]));
        assert!(vs.contains(&vec![half.clone(), Rational::zero(), -half.clone()]));
        // ℓ∞: the cube section is a hexagon, three vertices up to sign
        let vs = unit_ball_vertices(&d, NormFlavor::Linf);
        assert_eq!(vs.len(), 3);
    }
}
