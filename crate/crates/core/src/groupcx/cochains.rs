//! Invariant bounded cochains `ℓ∞(X^{*+1})^Γ` of finite Γ-sets with the
//! homogeneous coboundary, the Shapiro maps and the alternating projection.
//!
//! Cochains are written in the basis of orbit indicator functions, so the
//! sup norm of a cochain is the largest absolute coefficient.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::exactlp::SparseMat;
use crate::normcx::{CochainMap, Direction, NormFlavor, NormedComplex};
use crate::rational::Rational;

use super::finite::FiniteGroupData;
use super::GroupError;

/// The complex together with the orbit lookup of every tuple.
#[derive(Debug, Clone)]
pub struct InvariantCochains {
    pub complex: Arc<NormedComplex>,
    orbit: Vec<HashMap<Vec<usize>, usize>>,
    reps: Vec<Vec<Vec<usize>>>,
}

fn all_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |p| {
                    let mut u = t.clone();
                    u.push(p);
                    u
                })
            })
            .collect();
    }
    out
}

fn face(t: &[usize], i: usize) -> Vec<usize> {
    let mut f = t.to_vec();
    f.remove(i);
    f
}

impl InvariantCochains {
    /// `names` label the points; `action` lists the acting elements as
    /// permutations of the points. Degrees run over `0..=top`.
    pub fn build(
        name: &str,
        names: &[String],
        action: &[Vec<usize>],
        top: usize,
    ) -> Result<Self, GroupError> {
        let n = names.len();
        let mut orbit = Vec::new();
        let mut reps = Vec::new();
        let mut bases = BTreeMap::new();
        for k in 0..=top {
            let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut rk: Vec<Vec<usize>> = Vec::new();
            // lexicographic enumeration: the first tuple met in an orbit is its minimum
            for t in all_tuples(n, k + 1) {
                if index.contains_key(&t) {
                    continue;
                }
                let id = rk.len();
                for g in action {
                    index.insert(t.iter().map(|&p| g[p]).collect(), id);
                }
                index.insert(t.clone(), id);
                rk.push(t);
            }
            let labels: Vec<String> = rk
                .iter()
                .map(|t| t.iter().map(|&p| names[p].as_str()).collect::<Vec<_>>().join(","))
                .collect();
            bases.insert(k as i64, labels);
            orbit.push(index);
            reps.push(rk);
        }
        let mut maps = BTreeMap::new();
        for k in 0..top {
            let mut m = SparseMat::zeros(bases[&(k as i64 + 1)].clone(), bases[&(k as i64)].clone())?;
            for (row, t) in reps[k + 1].iter().enumerate() {
                for i in 0..t.len() {
                    let col = orbit[k][&face(t, i)];
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    m.add_at(row, col, &Rational::from_int(sign));
                }
            }
            maps.insert(k as i64, m);
        }
        let complex =
            NormedComplex::from_parts(name, Direction::Cochain, NormFlavor::Linf, bases, maps)?;
        complex.validate()?;
        Ok(InvariantCochains {
            complex: Arc::new(complex),
            orbit,
            reps,
        })
    }

    pub fn top(&self) -> usize {
        self.reps.len() - 1
    }

    pub fn orbit_of(&self, t: &[usize]) -> usize {
        self.orbit[t.len() - 1][t]
    }

    pub fn representatives(&self, k: usize) -> &[Vec<usize>] {
        &self.reps[k]
    }
}

fn left_action(g: &FiniteGroupData, acting: &[usize]) -> Vec<Vec<usize>> {
    acting
        .iter()
        .map(|&h| (0..g.order()).map(|x| g.mul(h, x)).collect())
        .collect()
}

/// `C_b^*(G; R) = ℓ∞(G^{*+1})^G` in degrees `0..=k_max + 1`.
///
/// The extra top degree makes the cohomology of degree `k_max` the true one.
pub fn finite_group_bounded_cochains(g: &FiniteGroupData, k_max: usize) -> Result<NormedComplex, GroupError> {
    let all: Vec<usize> = (0..g.order()).collect();
    let cx = InvariantCochains::build("Cb(G)", g.names(), &left_action(g, &all), k_max + 1)?;
    Ok(Arc::try_unwrap(cx.complex).unwrap_or_else(|a| (*a).clone()))
}

/// The Shapiro comparison between `ℓ∞(H^{*+1})^H` and `ℓ∞(G^{*+1})^H ≅ ℓ∞((J×H)^{*+1})^H`.
#[derive(Debug, Clone)]
pub struct ShapiroMaps {
    /// `ℓ∞(H^{*+1})^H`.
    pub small: Arc<NormedComplex>,
    /// `ℓ∞(G^{*+1})^H`.
    pub large: Arc<NormedComplex>,
    pub phi: CochainMap,
    pub psi: CochainMap,
    pub homotopy: CochainMap,
    pub k_max: usize,
}

/// Builds `φ`, `ψ` and the homotopy `h` in degrees `0..=k_max + 1`.
///
/// Every `g ∈ G` is written `g = h·j` with `j` the representative of `Hg`;
/// `π(g) = h` is its `H`-coordinate and the basepoint of `J` is the identity coset.
/// `φ(f)(g₀…g_k) = f(π g₀…π g_k)`, `ψ(f)(h₀…h_k) = f(h₀…h_k)` and
/// `(hf)(g₀…g_{k-1}) = Σ_j (-1)^j f(g₀…g_j, π g_j, …, π g_{k-1})`.
pub fn shapiro_maps(g: &FiniteGroupData, subgroup: &[usize], k_max: usize) -> Result<ShapiroMaps, GroupError> {
    let mut h_elems = subgroup.to_vec();
    h_elems.sort_unstable();
    h_elems.dedup();
    if h_elems.is_empty() || h_elems.iter().any(|&x| x >= g.order()) || !g.is_subgroup(&h_elems) {
        return Err(GroupError::NotASubgroup);
    }
    let top = k_max + 1;
    let local: HashMap<usize, usize> = h_elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let h_names: Vec<String> = h_elems.iter().map(|&x| g.name(x).to_string()).collect();
    let h_action: Vec<Vec<usize>> = h_elems
        .iter()
        .map(|&a| h_elems.iter().map(|&x| local[&g.mul(a, x)]).collect())
        .collect();
    let small = InvariantCochains::build("Cb(H)", &h_names, &h_action, top)?;
    let large = InvariantCochains::build("Cb(G;H)", g.names(), &left_action(g, &h_elems), top)?;

    let reps = g.right_coset_representatives(&h_elems);
    let pi: Vec<usize> = (0..g.order()).map(|x| g.mul(x, g.inv(reps[x]))).collect();

    let mut phi = BTreeMap::new();
    let mut psi = BTreeMap::new();
    let mut hom = BTreeMap::new();
    for k in 0..=top {
        let ki = k as i64;
        let mut m = SparseMat::zeros(large.complex.basis(ki).to_vec(), small.complex.basis(ki).to_vec())?;
        for (row, t) in large.representatives(k).iter().enumerate() {
            let image: Vec<usize> = t.iter().map(|&x| local[&pi[x]]).collect();
            m.add_at(row, small.orbit_of(&image), &Rational::one());
        }
        phi.insert(ki, m);

        let mut m = SparseMat::zeros(small.complex.basis(ki).to_vec(), large.complex.basis(ki).to_vec())?;
        for (row, t) in small.representatives(k).iter().enumerate() {
            let image: Vec<usize> = t.iter().map(|&i| h_elems[i]).collect();
            m.add_at(row, large.orbit_of(&image), &Rational::one());
        }
        psi.insert(ki, m);

        if k >= 1 {
            let mut m = SparseMat::zeros(
                large.complex.basis(ki - 1).to_vec(),
                large.complex.basis(ki).to_vec(),
            )?;
            for (row, t) in large.representatives(k - 1).iter().enumerate() {
                for j in 0..k {
                    let mut arg: Vec<usize> = t[..=j].to_vec();
                    arg.extend(t[j..].iter().map(|&x| pi[x]));
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    m.add_at(row, large.orbit_of(&arg), &Rational::from_int(sign));
                }
            }
            hom.insert(ki, m);
        }
    }
    let phi = CochainMap::new(small.complex.clone(), large.complex.clone(), phi)?;
    let psi = CochainMap::new(large.complex.clone(), small.complex.clone(), psi)?;
    let homotopy = CochainMap::homotopy(large.complex.clone(), large.complex.clone(), hom)?;
    Ok(ShapiroMaps {
        small: small.complex,
        large: large.complex,
        phi,
        psi,
        homotopy,
        k_max,
    })
}

/// Exact checks of the Shapiro identities and norm bounds in degrees `0..=k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapiroReport {
    pub psi_phi_is_identity: bool,
    pub homotopy_identity: bool,
    pub phi_norms: Vec<Rational>,
    pub psi_norms: Vec<Rational>,
    pub homotopy_norms: Vec<Rational>,
}

impl ShapiroReport {
    /// All identities hold, `‖φ^k‖, ‖ψ^k‖ ≤ 1` and `‖h^k‖ ≤ k`.
    pub fn all_ok(&self) -> bool {
        let one = Rational::one();
        self.psi_phi_is_identity
            && self.homotopy_identity
            && self.phi_norms.iter().all(|n| n <= &one)
            && self.psi_norms.iter().all(|n| n <= &one)
            && self
                .homotopy_norms
                .iter()
                .enumerate()
                .all(|(k, n)| n <= &Rational::from(k))
    }
}

impl ShapiroMaps {
    pub fn check(&self) -> Result<ShapiroReport, GroupError> {
        let k_max = self.k_max as i64;
        let id_small = CochainMap::identity(self.small.clone());
        let id_large = CochainMap::identity(self.large.clone());
        let psi_phi = self.psi.compose(&self.phi)?;
        let phi_psi = self.phi.compose(&self.psi)?;
        let psi_phi_is_identity = (0..=k_max).all(|k| psi_phi.component(k) == id_small.component(k));
        let homotopy_identity = self
            .homotopy
            .homotopy_failures(&phi_psi, &id_large)?
            .iter()
            .all(|&k| k > k_max);
        let norms = |m: &CochainMap| -> Result<Vec<Rational>, GroupError> {
            (0..=k_max).map(|k| Ok(m.measured_norm(k)?)).collect()
        };
        Ok(ShapiroReport {
            psi_phi_is_identity,
            homotopy_identity,
            phi_norms: norms(&self.phi)?,
            psi_norms: norms(&self.psi)?,
            homotopy_norms: norms(&self.homotopy)?,
        })
    }
}

fn permutation_signs(len: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    fn rec(p: &mut Vec<usize>, start: usize, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if start == p.len() {
            out.push((p.clone(), sign));
            return;
        }
        for i in start..p.len() {
            p.swap(start, i);
            rec(p, start + 1, if i == start { sign } else { -sign }, out);
            p.swap(start, i);
        }
    }
    rec(&mut (0..len).collect(), 0, 1, &mut out);
    out
}

/// The projection onto alternating cochains on `ℓ∞(S^{*+1})`, `|S| = s_size`,
/// in degrees `0..=k + 1`:
/// `alt(f)(s₀…s_j) = (1/(j+1)!) Σ_σ sign(σ) f(s_{σ(0)}…s_{σ(j)})`.
pub fn alternating_projection(s_size: usize, k: usize) -> Result<CochainMap, GroupError> {
    if s_size == 0 {
        return Err(GroupError::Input("the set must be nonempty".into()));
    }
    let names: Vec<String> = (0..s_size).map(|i| i.to_string()).collect();
    let identity: Vec<usize> = (0..s_size).collect();
    let cx = InvariantCochains::build("linf(S)", &names, &[identity], k + 1)?;
    let mut components = BTreeMap::new();
    for j in 0..=k + 1 {
        let ji = j as i64;
        let perms = permutation_signs(j + 1);
        let scale = Rational::from_int(perms.len() as i64).recip();
        let mut m = SparseMat::zeros(cx.complex.basis(ji).to_vec(), cx.complex.basis(ji).to_vec())?;
        for (row, s) in cx.representatives(j).iter().enumerate() {
            for (sigma, sign) in &perms {
                let t: Vec<usize> = sigma.iter().map(|&i| s[i]).collect();
                m.add_at(row, cx.orbit_of(&t), &(&scale * &Rational::from_int(*sign)));
            }
        }
        components.insert(ji, m);
    }
    Ok(CochainMap::new(cx.complex.clone(), cx.complex, components)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn trivial_group_is_acyclic() {
        let g = FiniteGroupData::cyclic(1).unwrap();
        let c = finite_group_bounded_cochains(&g, 3).unwrap();
        assert_eq!(c.homology_dimension(0), 1);
        for k in 1..=3 {
            assert_eq!(c.basis(k).len(), 1);
            assert_eq!(c.homology_dimension(k), 0);
        }
        assert!(c.map_from(0).unwrap().is_zero());
        assert_eq!(c.map_from(1).unwrap().get(0, 0), q(1, 1));
    }

    #[test]
    fn z2_orbits_and_vanishing() {
        let g = FiniteGroupData::cyclic(2).unwrap();
        let c = finite_group_bounded_cochains(&g, 3).unwrap();
        assert_eq!(c.basis(1).len(), 2);
        for k in 1..=3 {
            assert_eq!(c.homology_dimension(k), 0);
        }
    }

    #[test]
    fn shapiro_with_full_subgroup() {
        let g = FiniteGroupData::cyclic(3).unwrap();
        let s = shapiro_maps(&g, &[0, 1, 2], 2).unwrap();
        let id_small = CochainMap::identity(s.small.clone());
        let id_large = CochainMap::identity(s.large.clone());
        let phi_psi = s.phi.compose(&s.psi).unwrap();
        for k in 0..=3 {
            assert_eq!(s.phi.measured_norm(k).unwrap(), q(1, 1));
            assert_eq!(phi_psi.component(k), id_large.component(k));
        }
        assert_eq!(s.psi.compose(&s.phi).unwrap().component(2), id_small.component(2));
        // φψ = id, so the homotopy is a cocycle-valued map: δh + hδ = 0
        let failures = s.homotopy.homotopy_failures(&phi_psi, &id_large).unwrap();
        assert!(failures.iter().all(|&k| k > 2));
        assert!(shapiro_maps(&g, &[1], 2).is_err());
    }

    #[test]
    fn alternating_small_cases() {
        let alt = alternating_projection(2, 1).unwrap();
        let a1 = alt.component(1);
        let cx = alt.source();
        let diag = cx.basis(1).iter().position(|l| l == "0,0").unwrap();
        assert!((0..a1.ncols()).all(|j| a1.get(diag, j).is_zero()));
        let a0 = alt.component(0);
        assert_eq!(a0, SparseMat::identity(cx.basis(0).to_vec()).unwrap());
    }
}
