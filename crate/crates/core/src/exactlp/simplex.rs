//! Two-phase revised primal simplex over exact rationals.
//!
//! Solves `min cᵀx` subject to `Ax = b`, `x ≥ 0`. The basis inverse is kept
//! dense (the row counts here are small) while columns stay sparse, so
//! pricing a wide problem costs one pass over its nonzeros. Entering and
//! leaving variables follow Bland's rule on variable indices; callers order
//! variables so that index order is the intended tie-break order.

use crate::rational::Rational;

/// A problem in equality standard form with sparse columns.
#[derive(Debug, Clone)]
pub struct StandardLp {
    pub rows: usize,
    pub columns: Vec<Vec<(usize, Rational)>>,
    pub costs: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    /// `y` are the row duals: `cⱼ - yᵀAⱼ ≥ 0` for every column and `yᵀb = objective`.
    Optimal {
        x: Vec<Rational>,
        y: Vec<Rational>,
        objective: Rational,
    },
    /// Farkas ray: `yᵀA ≤ 0` on every column and `yᵀb > 0`.
    Infeasible { y: Vec<Rational> },
    Unbounded,
}

struct Tableau {
    // original columns with row signs applied, followed by artificial unit columns
    columns: Vec<Vec<(usize, Rational)>>,
    n_real: usize,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
}

impl Tableau {
    fn new(lp: &StandardLp, signs: &[bool]) -> Self {
        let m = lp.rows;
        let n = lp.columns.len();
        let mut columns: Vec<Vec<(usize, Rational)>> = lp
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(i, v)| (*i, if signs[*i] { -v } else { v.clone() }))
                    .collect()
            })
            .collect();
        let xb: Vec<Rational> = lp
            .rhs
            .iter()
            .zip(signs)
            .map(|(b, &neg)| if neg { -b } else { b.clone() })
            .collect();

        // Reuse existing unit columns as the starting basis where possible.
        let mut basis = vec![usize::MAX; m];
        for (j, col) in columns.iter().enumerate() {
            if let [(i, v)] = col.as_slice() {
                if *v == Rational::one() && basis[*i] == usize::MAX {
                    basis[*i] = j;
                }
            }
        }
        for (i, slot) in basis.iter_mut().enumerate() {
            if *slot == usize::MAX {
                *slot = columns.len();
                columns.push(vec![(i, Rational::one())]);
            }
        }
        let mut is_basic = vec![false; columns.len()];
        for &j in &basis {
            is_basic[j] = true;
        }
        let binv = (0..m)
            .map(|i| {
                let mut row = vec![Rational::zero(); m];
                row[i] = Rational::one();
                row
            })
            .collect();
        Tableau {
            columns,
            n_real: n,
            binv,
            xb,
            basis,
            is_basic,
        }
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn duals(&self, costs: &[Rational]) -> Vec<Rational> {
        let m = self.m();
        let mut y = vec![Rational::zero(); m];
        for (i, &j) in self.basis.iter().enumerate() {
            let c = &costs[j];
            if c.is_zero() {
                continue;
            }
            for (k, b) in self.binv[i].iter().enumerate() {
                if !b.is_zero() {
                    y[k] += c * b;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, costs: &[Rational], y: &[Rational], j: usize) -> Rational {
        let mut d = costs[j].clone();
        for (i, a) in &self.columns[j] {
            if !y[*i].is_zero() {
                d -= &y[*i] * a;
            }
        }
        d
    }

    fn entering_column(&self, j: usize) -> Vec<Rational> {
        let m = self.m();
        let mut u = vec![Rational::zero(); m];
        for (k, a) in &self.columns[j] {
            for (i, ui) in u.iter_mut().enumerate() {
                let b = &self.binv[i][*k];
                if !b.is_zero() {
                    *ui += b * a;
                }
            }
        }
        u
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[Rational]) {
        let inv = u[r].recip();
        for x in self.binv[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.xb[r] = &self.xb[r] * &inv;
        let pivot_row = self.binv[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&k| !pivot_row[k].is_zero()).collect();
        let xr = self.xb[r].clone();
        for (i, ui) in u.iter().enumerate() {
            if i == r || ui.is_zero() {
                continue;
            }
            for &k in &nz {
                let delta = ui * &pivot_row[k];
                self.binv[i][k] -= delta;
            }
            if !xr.is_zero() {
                self.xb[i] -= ui * &xr;
            }
        }
        self.is_basic[self.basis[r]] = false;
        self.basis[r] = j;
        self.is_basic[j] = true;
    }

    /// Runs Bland-rule iterations until optimal. Returns false on unboundedness.
    fn optimize(&mut self, costs: &[Rational], allow_artificial: bool) -> bool {
        let limit = if allow_artificial {
            self.columns.len()
        } else {
            self.n_real
        };
        loop {
            let y = self.duals(costs);
            let entering = (0..limit)
                .find(|&j| !self.is_basic[j] && self.reduced_cost(costs, &y, j).is_negative());
            let Some(j) = entering else {
                return true;
            };
            let u = self.entering_column(j);
            let mut best: Option<(usize, Rational)> = None;
            for (i, ui) in u.iter().enumerate() {
                if !ui.is_positive() {
                    continue;
                }
                let ratio = &self.xb[i] / ui;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, j, &u);
        }
    }

    /// Pivots zero-valued artificials out of the basis where a real column allows it.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m() {
            if self.basis[r] < self.n_real {
                continue;
            }
            let candidate = (0..self.n_real).find(|&j| {
                !self.is_basic[j]
                    && !self.columns[j]
                        .iter()
                        .map(|(k, a)| &self.binv[r][*k] * a)
                        .sum::<Rational>()
                        .is_zero()
            });
            if let Some(j) = candidate {
                let u = self.entering_column(j);
                self.pivot(r, j, &u);
            }
        }
    }
}

/// Solves the standard-form problem exactly.
pub fn solve(lp: &StandardLp) -> LpOutcome {
    assert_eq!(lp.columns.len(), lp.costs.len());
    assert_eq!(lp.rhs.len(), lp.rows);
    let signs: Vec<bool> = lp.rhs.iter().map(Rational::is_negative).collect();
    let mut t = Tableau::new(lp, &signs);
    let total = t.columns.len();
    let n = t.n_real;
    let flip = |y: Vec<Rational>| -> Vec<Rational> {
        y.into_iter()
            .zip(&signs)
            .map(|(v, &neg)| if neg { -v } else { v })
            .collect()
    };

    if total > n {
        let mut phase1 = vec![Rational::zero(); total];
        for c in phase1.iter_mut().skip(n) {
            *c = Rational::one();
        }
        let bounded = t.optimize(&phase1, true);
        debug_assert!(bounded, "phase one is bounded below by zero");
        let infeasibility: Rational = t
            .basis
            .iter()
            .zip(&t.xb)
            .filter(|(j, _)| **j >= n)
            .map(|(_, x)| x.clone())
            .sum();
        if infeasibility.is_positive() {
            let y = t.duals(&phase1);
            return LpOutcome::Infeasible { y: flip(y) };
        }
        t.drive_out_artificials();
    }

    let mut costs = lp.costs.clone();
    costs.resize(total, Rational::zero());
    if !t.optimize(&costs, false) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &j) in t.basis.iter().enumerate() {
        if j < n {
            x[j] = t.xb[i].clone();
        }
    }
    let objective = x.iter().zip(&lp.costs).map(|(a, c)| a * c).sum();
    let y = flip(t.duals(&costs));
    LpOutcome::Optimal { x, y, objective }
}
