//! Covers of finite simplicial pairs by full subcomplexes, their nerves and
//! the connectivity conditions on relative covers.
//!
//! A cover member is a vertex subset and stands for the full subcomplex it
//! spans. Intersections are intersections of vertex sets, and a set counts as
//! connected when the 1-skeleton of its full subcomplex is connected.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::simplicial::{valid_vertex_label, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid member name `{0}`")]
    BadName(String),
    #[error("duplicate member `{0}`")]
    DuplicateMember(String),
    #[error("member `{0}` is empty")]
    EmptyMember(String),
    #[error("member `{0}` is not connected")]
    Disconnected(String),
    #[error("simplex `{0}` lies in no member")]
    Uncovered(String),
    #[error("a cover needs at least one member")]
    NoMembers,
}

/// Connected components of the full subcomplex on `subset`, each sorted,
/// ordered by smallest vertex index.
pub fn components(x: &SimplicialComplex, subset: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let n = x.vertices().len();
    let mut uf = UnionFind::<usize>::new(n);
    for (a, b) in x.edges() {
        if subset.contains(&a) && subset.contains(&b) {
            uf.union(a, b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in subset {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// `components` on vertex labels; components are ordered by their smallest
/// vertex in the complex's vertex order.
pub fn components_by_label(
    x: &SimplicialComplex,
    subset: &[&str],
) -> Result<Vec<Vec<String>>, CoverError> {
    let set = vertex_set(x, subset.iter().copied())?;
    Ok(components(x, &set)
        .into_iter()
        .map(|c| c.into_iter().map(|v| x.vertices()[v].clone()).collect())
        .collect())
}

fn vertex_set<'a>(
    x: &SimplicialComplex,
    labels: impl IntoIterator<Item = &'a str>,
) -> Result<BTreeSet<usize>, CoverError> {
    labels
        .into_iter()
        .map(|l| x.vertex_index(l).ok_or_else(|| CoverError::UnknownVertex(l.to_string())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverData {
    ambient: SimplicialComplex,
    subspace: BTreeSet<usize>,
    members: Vec<(String, BTreeSet<usize>)>,
    /// The π₁ condition of relative covers is not checked; callers may assert it.
    pub rc2_user_asserted: bool,
}

impl CoverData {
    /// Validates that every member is nonempty and connected and that every
    /// simplex of the ambient complex lies in some member. Members are kept
    /// sorted by name.
    pub fn new(
        ambient: SimplicialComplex,
        subspace: &[&str],
        members: &[(&str, Vec<&str>)],
    ) -> Result<Self, CoverError> {
        if members.is_empty() {
            return Err(CoverError::NoMembers);
        }
        let subspace = vertex_set(&ambient, subspace.iter().copied())?;
        let mut named = Vec::with_capacity(members.len());
        let mut seen = BTreeSet::new();
        for (name, verts) in members {
            if !valid_vertex_label(name) {
                return Err(CoverError::BadName(name.to_string()));
            }
            if !seen.insert(*name) {
                return Err(CoverError::DuplicateMember(name.to_string()));
            }
            let set = vertex_set(&ambient, verts.iter().copied())?;
            if set.is_empty() {
                return Err(CoverError::EmptyMember(name.to_string()));
            }
            if components(&ambient, &set).len() != 1 {
                return Err(CoverError::Disconnected(name.to_string()));
            }
            named.push((name.to_string(), set));
        }
        named.sort_by(|a, b| a.0.cmp(&b.0));
        for s in ambient.simplices() {
            if !named.iter().any(|(_, m)| s.iter().all(|v| m.contains(v))) {
                return Err(CoverError::Uncovered(ambient.label(s)));
            }
        }
        Ok(CoverData {
            ambient,
            subspace,
            members: named,
            rc2_user_asserted: false,
        })
    }

    pub fn ambient(&self) -> &SimplicialComplex {
        &self.ambient
    }

    pub fn subspace(&self) -> &BTreeSet<usize> {
        &self.subspace
    }

    pub fn members(&self) -> &[(String, BTreeSet<usize>)] {
        &self.members
    }

    /// Every nonempty set of members (as increasing index lists) with a
    /// nonempty common intersection, together with that intersection.
    pub fn intersections(&self) -> Vec<(Vec<usize>, BTreeSet<usize>)> {
        let mut out = Vec::new();
        fn rec(
            members: &[(String, BTreeSet<usize>)],
            start: usize,
            cur: &mut Vec<usize>,
            inter: &BTreeSet<usize>,
            out: &mut Vec<(Vec<usize>, BTreeSet<usize>)>,
        ) {
            for i in start..members.len() {
                let next: BTreeSet<usize> = if cur.is_empty() {
                    members[i].1.clone()
                } else {
                    inter.intersection(&members[i].1).copied().collect()
                };
                if next.is_empty() {
                    continue;
                }
                cur.push(i);
                out.push((cur.clone(), next.clone()));
                rec(members, i + 1, cur, &next, out);
                cur.pop();
            }
        }
        rec(&self.members, 0, &mut Vec::new(), &BTreeSet::new(), &mut out);
        out
    }

    fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.members[i].0.clone()).collect()
    }

    fn labels(&self, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| self.ambient.vertices()[v].clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NervePair {
    pub nerve: SimplicialComplex,
    /// Simplices whose members have a common point in the subspace.
    pub relative_nerve: SimplicialComplex,
    pub mult: usize,
    pub mult_a: usize,
}

impl NervePair {
    /// Dimension of the pair: the largest dimension of a simplex outside the relative nerve.
    pub fn relative_dim(&self) -> Option<usize> {
        let names = self.nerve.vertices();
        self.nerve
            .simplices()
            .filter(|s| {
                let labels: Vec<String> = s.iter().map(|&v| names[v].clone()).collect();
                let idx: Option<Vec<usize>> = labels
                    .iter()
                    .map(|l| self.relative_nerve.vertex_index(l))
                    .collect();
                match idx {
                    Some(mut idx) => {
                        idx.sort_unstable();
                        !self.relative_nerve.contains(&idx)
                    }
                    None => true,
                }
            })
            .map(|s| s.len() - 1)
            .max()
    }
}

pub fn nerve_pair(cover: &CoverData) -> NervePair {
    let inters = cover.intersections();
    let names: Vec<String> = cover.members.iter().map(|(n, _)| n.clone()).collect();
    let meets_a = |set: &BTreeSet<usize>| set.iter().any(|v| cover.subspace.contains(v));
    let nerve = SimplicialComplex::new(
        names.clone(),
        inters.iter().map(|(idx, _)| cover.names(idx)),
    )
    .expect("member names are valid and distinct");
    let relative_vertices: Vec<String> = cover
        .members
        .iter()
        .filter(|(_, m)| meets_a(m))
        .map(|(n, _)| n.clone())
        .collect();
    let relative_nerve = SimplicialComplex::new(
        relative_vertices,
        inters
            .iter()
            .filter(|(_, set)| meets_a(set))
            .map(|(idx, _)| cover.names(idx)),
    )
    .expect("relative simplices use members meeting the subspace");
    let mult = inters.iter().map(|(idx, _)| idx.len()).max().unwrap_or(0);
    let mult_a = inters
        .iter()
        .filter(|(_, set)| !meets_a(set))
        .map(|(idx, _)| idx.len())
        .max()
        .unwrap_or(0);
    NervePair {
        nerve,
        relative_nerve,
        mult,
        mult_a,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoverCondition {
    Rc1,
    WeaklyConvex,
    Convex,
}

/// A member set and the component that violates a condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverWitness {
    pub condition: CoverCondition,
    pub members: Vec<String>,
    pub component: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeCoverReport {
    pub rc1: bool,
    pub weakly_convex: bool,
    pub convex: bool,
    pub rc2_user_asserted: bool,
    pub witnesses: Vec<CoverWitness>,
}

/// Checks that members meet the subspace in a connected set, weak
/// convexity (every component of an intersection meeting the subspace meets
/// it) and convexity (every nonempty intersection is connected).
pub fn check_relative_cover(cover: &CoverData) -> RelativeCoverReport {
    let x = &cover.ambient;
    let a = &cover.subspace;
    let mut witnesses = Vec::new();
    for (name, m) in &cover.members {
        let trace: BTreeSet<usize> = m.intersection(a).copied().collect();
        let comps = components(x, &trace);
        if comps.len() > 1 {
            witnesses.push(CoverWitness {
                condition: CoverCondition::Rc1,
                members: vec![name.clone()],
                component: cover.labels(&comps[1]),
            });
        }
    }
    for (idx, set) in cover.intersections() {
        let comps = components(x, &set);
        let meets = set.iter().any(|v| a.contains(v));
        if meets {
            if let Some(c) = comps.iter().find(|c| !c.iter().any(|v| a.contains(v))) {
                witnesses.push(CoverWitness {
                    condition: CoverCondition::WeaklyConvex,
                    members: cover.names(&idx),
                    component: cover.labels(c),
                });
            }
        }
        if comps.len() > 1 {
            witnesses.push(CoverWitness {
                condition: CoverCondition::Convex,
                members: cover.names(&idx),
                component: cover.labels(&comps[1]),
            });
        }
    }
    let holds = |c: CoverCondition| !witnesses.iter().any(|w| w.condition == c);
    RelativeCoverReport {
        rc1: holds(CoverCondition::Rc1),
        weakly_convex: holds(CoverCondition::WeaklyConvex),
        convex: holds(CoverCondition::Convex),
        rc2_user_asserted: cover.rc2_user_asserted,
        witnesses,
    }
}

/// `max(mult, mult_boundary + 1)`: the multiplicity of the cover extended over a collar.
pub fn collar_multiplicity_bound(mult: usize, mult_boundary: usize) -> usize {
    mult.max(mult_boundary + 1)
}
