//! Finite groups given by multiplication tables.

use std::collections::{BTreeSet, HashMap};

use super::GroupError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupData {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroupData {
    /// Validates closure, associativity, identity and inverses of `table`,
    /// where `table[a][b]` is the index of `a·b`.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty element list".into()));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(GroupError::NotAGroup("duplicate element name".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::NotAGroup("table is not n×n over the elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| GroupError::NotAGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("`{}` has no inverse", names[g])))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroupData {
            names,
            table,
            identity,
            inverses,
        })
    }

    /// `Z/m` with elements `0..m`.
    pub fn cyclic(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::Input("cyclic group order must be positive".into()));
        }
        let names = (0..m).map(|i| i.to_string()).collect();
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        Self::from_table(names, table)
    }

    /// The symmetric group on `0..n` in one-line notation, elements sorted
    /// lexicographically; `(σ·τ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if !(1..=6).contains(&n) {
            return Err(GroupError::Input("symmetric groups are supported for 1 ≤ n ≤ 6".into()));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        perms.sort();
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let names = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
            .collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index[&t.iter().map(|&i| s[i]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        Self::from_table(names, table)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        set.contains(&self.identity)
            && set.iter().all(|&a| {
                set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
            })
    }

    /// Representative of the right coset `Hg` for every `g`: the identity for
    /// `H` itself and the smallest index otherwise.
    pub fn right_coset_representatives(&self, h: &[usize]) -> Vec<usize> {
        let mut rep = vec![usize::MAX; self.order()];
        for g in 0..self.order() {
            if rep[g] != usize::MAX {
                continue;
            }
            let coset: Vec<usize> = h.iter().map(|&x| self.mul(x, g)).collect();
            let r = if coset.contains(&self.identity) {
                self.identity
            } else {
                *coset.iter().min().expect("nonempty coset")
            };
            for x in coset {
                rep[x] = r;
            }
        }
        rep
    }
}

fn permutations(p: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == p.len() {
        out.push(p.clone());
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permutations(p, start + 1, out);
        p.swap(start, i);
    }
}
