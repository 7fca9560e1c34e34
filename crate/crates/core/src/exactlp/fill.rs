use crate::rational::Rational;

use super::simplex::{self, LpOutcome, StandardLp};
use super::sparse::{SparseMat, SparseVec};
use super::LpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FillStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    Linf,
}

/// Outcome of a minimal-norm filling problem `min |c|` subject to `Dc = b`.
///
/// For `Optimal` results `dual_certificate` is a row vector `y` with
/// `yᵀb = objective` that is feasible for the dual norm problem; for
/// `Infeasible` results it is a Farkas vector with `yᵀD = 0` and `yᵀb ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillResult {
    pub status: FillStatus,
    pub solution: SparseVec,
    pub objective: Rational,
    pub dual_certificate: SparseVec,
}

impl FillResult {
    pub fn is_optimal(&self) -> bool {
        self.status == FillStatus::Optimal
    }

    /// Re-checks the certificate from scratch against `D` and `b`.
    pub fn verify(&self, d: &SparseMat, b: &SparseVec, norm: Norm) -> bool {
        let weights = vec![Rational::one(); d.ncols()];
        verify_weighted(self, d, b, norm, &weights)
    }
}

/// Column weights of a generalized filling problem. A zero weight leaves a
/// column unpenalized (free); for the ℓ∞ objective only zero/nonzero matters.
pub(crate) fn verify_weighted(
    r: &FillResult,
    d: &SparseMat,
    b: &SparseVec,
    norm: Norm,
    weights: &[Rational],
) -> bool {
    let y = &r.dual_certificate;
    let dty = match d.transpose().apply(y) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let yb = y.dot(b);
    match r.status {
        FillStatus::Infeasible => dty.is_empty() && !yb.is_zero(),
        FillStatus::Optimal => {
            let Ok(image) = d.apply(&r.solution) else {
                return false;
            };
            if image != *b || yb != r.objective {
                return false;
            }
            let weight = |label: &str| {
                d.col_position(label)
                    .map(|j| weights[j].clone())
                    .unwrap_or_default()
            };
            match norm {
                Norm::L1 => {
                    let primal: Rational = r
                        .solution
                        .iter()
                        .map(|(k, v)| v.abs() * weight(k))
                        .sum();
                    primal == r.objective && dty.iter().all(|(k, v)| v.abs() <= weight(k))
                }
                Norm::Linf => {
                    let primal = r
                        .solution
                        .iter()
                        .filter(|(k, _)| !weight(k).is_zero())
                        .map(|(_, v)| v.abs())
                        .fold(Rational::zero(), Rational::max);
                    let free_ok = dty.iter().all(|(k, _)| !weight(k).is_zero());
                    let mass: Rational = dty.iter().map(|(_, v)| v.abs()).sum();
                    primal == r.objective && free_ok && mass <= Rational::one()
                }
            }
        }
    }
}

fn rhs_for(d: &SparseMat, b: &SparseVec) -> Result<Vec<Rational>, LpError> {
    let mut rhs = vec![Rational::zero(); d.nrows()];
    for (label, v) in b.iter() {
        let i = d
            .row_position(label)
            .ok_or_else(|| LpError::LabelMismatch(label.clone()))?;
        rhs[i] = v.clone();
    }
    Ok(rhs)
}

/// Column indices of `d` sorted by label; this fixes the pivoting order.
fn label_order(d: &SparseMat) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.ncols()).collect();
    order.sort_by(|&a, &b| d.cols()[a].cmp(&d.cols()[b]));
    order
}

fn negated(col: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    col.iter().map(|(i, v)| (*i, -v)).collect()
}

fn certificate(d: &SparseMat, y: Vec<Rational>) -> SparseVec {
    SparseVec::from_pairs(
        y.into_iter()
            .take(d.nrows())
            .enumerate()
            .map(|(i, v)| (d.rows()[i].clone(), v)),
    )
}

fn finish(
    d: &SparseMat,
    b: &SparseVec,
    norm: Norm,
    weights: &[Rational],
    outcome: LpOutcome,
    extract: impl Fn(&[Rational]) -> SparseVec,
) -> Result<FillResult, LpError> {
    let result = match outcome {
        LpOutcome::Optimal { x, y, objective } => FillResult {
            status: FillStatus::Optimal,
            solution: extract(&x),
            objective,
            dual_certificate: certificate(d, y),
        },
        LpOutcome::Infeasible { y } => FillResult {
            status: FillStatus::Infeasible,
            solution: SparseVec::new(),
            objective: Rational::zero(),
            dual_certificate: certificate(d, y),
        },
        LpOutcome::Unbounded => {
            return Err(LpError::Internal("filling problem reported unbounded".into()))
        }
    };
    if !verify_weighted(&result, d, b, norm, weights) {
        return Err(LpError::Internal("certificate failed verification".into()));
    }
    Ok(result)
}

/// `min Σ wⱼ|cⱼ|` subject to `Dc = b`, via the split `c = c⁺ - c⁻`.
pub(crate) fn solve_weighted_l1(
    d: &SparseMat,
    b: &SparseVec,
    weights: &[Rational],
) -> Result<FillResult, LpError> {
    assert_eq!(weights.len(), d.ncols());
    if weights.iter().any(Rational::is_negative) {
        return Err(LpError::Input("negative column weight".into()));
    }
    let rhs = rhs_for(d, b)?;
    let order = label_order(d);
    let mut columns = Vec::with_capacity(2 * order.len());
    let mut costs = Vec::with_capacity(2 * order.len());
    for &j in &order {
        columns.push(d.column(j).to_vec());
        columns.push(negated(d.column(j)));
        costs.push(weights[j].clone());
        costs.push(weights[j].clone());
    }
    let lp = StandardLp {
        rows: d.nrows(),
        columns,
        costs,
        rhs,
    };
    let outcome = simplex::solve(&lp);
    finish(d, b, Norm::L1, weights, outcome, |x| {
        SparseVec::from_pairs(
            order
                .iter()
                .enumerate()
                .map(|(k, &j)| (d.cols()[j].clone(), &x[2 * k] - &x[2 * k + 1])),
        )
    })
}

/// `min max_{j bounded} |cⱼ|` subject to `Dc = b`. Columns with zero weight are
/// left free; the others share one bound variable `t` through `±cⱼ - t ≤ 0`.
pub(crate) fn solve_weighted_linf(
    d: &SparseMat,
    b: &SparseVec,
    weights: &[Rational],
) -> Result<FillResult, LpError> {
    assert_eq!(weights.len(), d.ncols());
    let rhs_eq = rhs_for(d, b)?;
    let m = d.nrows();
    let order = label_order(d);
    let bounded: Vec<usize> = order.iter().copied().filter(|&j| !weights[j].is_zero()).collect();
    let rows = m + 2 * bounded.len();
    // row of the upper/lower bound constraint for column j
    let mut bound_row = vec![usize::MAX; d.ncols()];
    for (k, &j) in bounded.iter().enumerate() {
        bound_row[j] = m + 2 * k;
    }

    let mut columns = Vec::new();
    let mut costs = Vec::new();
    for &j in &order {
        let mut plus = d.column(j).to_vec();
        let mut minus = negated(d.column(j));
        if bound_row[j] != usize::MAX {
            let r = bound_row[j];
            plus.push((r, Rational::one()));
            plus.push((r + 1, -Rational::one()));
            minus.push((r, -Rational::one()));
            minus.push((r + 1, Rational::one()));
        }
        columns.push(plus);
        columns.push(minus);
        costs.push(Rational::zero());
        costs.push(Rational::zero());
    }
    columns.push((m..rows).map(|r| (r, -Rational::one())).collect());
    costs.push(Rational::one());
    for r in m..rows {
        columns.push(vec![(r, Rational::one())]);
        costs.push(Rational::zero());
    }
    let mut rhs = rhs_eq;
    rhs.resize(rows, Rational::zero());
    let lp = StandardLp {
        rows,
        columns,
        costs,
        rhs,
    };
    let outcome = simplex::solve(&lp);
    finish(d, b, Norm::Linf, weights, outcome, |x| {
        SparseVec::from_pairs(
            order
                .iter()
                .enumerate()
                .map(|(k, &j)| (d.cols()[j].clone(), &x[2 * k] - &x[2 * k + 1])),
        )
    })
}

/// Exact minimum of `|c|₁` over `{c : Dc = b}` with an optimality or Farkas certificate.
pub fn solve_min_l1(d: &SparseMat, b: &SparseVec) -> Result<FillResult, LpError> {
    solve_weighted_l1(d, b, &vec![Rational::one(); d.ncols()])
}

/// Exact minimum of `|c|∞` over `{c : Dc = b}` with an optimality or Farkas certificate.
pub fn solve_min_linf(d: &SparseMat, b: &SparseVec) -> Result<FillResult, LpError> {
    solve_weighted_linf(d, b, &vec![Rational::one(); d.ncols()])
}

pub fn solve_min(d: &SparseMat, b: &SparseVec, norm: Norm) -> Result<FillResult, LpError> {
    match norm {
        Norm::L1 => solve_min_l1(d, b),
        Norm::Linf => solve_min_linf(d, b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorNorm {
    L1ToL1,
    LinfToLinf,
}

/// Exact operator norm: max column ℓ¹ sum for ℓ¹→ℓ¹, max row ℓ¹ sum for ℓ∞→ℓ∞.
pub fn operator_norm(m: &SparseMat, flavor: OperatorNorm) -> Rational {
    match flavor {
        OperatorNorm::L1ToL1 => m.max_column_l1(),
        OperatorNorm::LinfToLinf => m.max_row_l1(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn mat(rows: &[&str], cols: &[&str], entries: &[(&str, &str, Rational)]) -> SparseMat {
        SparseMat::from_triples(
            labels(rows),
            labels(cols),
            entries.iter().map(|(r, c, v)| (*r, *c, v.clone())),
        )
        .unwrap()
    }

    fn triangle() -> SparseMat {
        // ∂[0,1,2] = [1,2] - [0,2] + [0,1]
        mat(
            &["e01", "e02", "e12"],
            &["t"],
            &[("e01", "t", q(1, 1)), ("e02", "t", q(-1, 1)), ("e12", "t", q(1, 1))],
        )
    }

    #[test]
    fn zero_boundary_fills_with_zero() {
        let d = triangle();
        for norm in [Norm::L1, Norm::Linf] {
            let r = solve_min(&d, &SparseVec::new(), norm).unwrap();
            assert!(r.is_optimal());
            assert!(r.objective.is_zero());
            assert!(r.solution.is_empty());
        }
    }

    #[test]
    fn triangle_boundary_has_unique_filler() {
        let d = triangle();
        let b = d.apply(&SparseVec::unit("t")).unwrap();
        let r = solve_min_l1(&d, &b).unwrap();
        assert_eq!(r.objective, q(1, 1));
        assert_eq!(r.solution, SparseVec::unit("t"));
        assert!(r.verify(&d, &b, Norm::L1));
    }

    #[test]
    fn one_by_two_prefers_cheaper_column() {
        let d = mat(&["r"], &["x", "y"], &[("r", "x", q(1, 1)), ("r", "y", q(1, 2))]);
        let b = SparseVec::unit("r");
        let r = solve_min_l1(&d, &b).unwrap();
        assert_eq!(r.objective, q(1, 1));
        assert_eq!(r.solution, SparseVec::unit("x"));
    }

    #[test]
    fn linf_examples() {
        let d = mat(&["r"], &["x", "y"], &[("r", "x", q(1, 1)), ("r", "y", q(1, 1))]);
        let r = solve_min_linf(&d, &SparseVec::from_pairs([("r", q(2, 1))])).unwrap();
        assert_eq!(r.objective, q(1, 1));
        assert_eq!(r.solution, SparseVec::from_pairs([("x", q(1, 1)), ("y", q(1, 1))]));

        let id = SparseMat::identity(labels(&["a", "b", "c"])).unwrap();
        let b = SparseVec::from_pairs([("a", q(1, 1)), ("b", q(-2, 1)), ("c", q(1, 2))]);
        let r = solve_min_linf(&id, &b).unwrap();
        assert_eq!(r.objective, q(2, 1));
        assert!(r.verify(&id, &b, Norm::Linf));
    }

    #[test]
    fn infeasible_circle_gets_farkas_certificate() {
        // a single column cannot produce e01 alone
        let d = triangle();
        let b = SparseVec::unit("e01");
        for norm in [Norm::L1, Norm::Linf] {
            let r = solve_min(&d, &b, norm).unwrap();
            assert_eq!(r.status, FillStatus::Infeasible);
            assert!(r.verify(&d, &b, norm));
        }
    }

    #[test]
    fn label_mismatch_is_input_error() {
        let d = triangle();
        let b = SparseVec::unit("nope");
        assert!(matches!(solve_min_l1(&d, &b), Err(LpError::LabelMismatch(_))));
    }

    #[test]
    fn empty_problem() {
        let d = SparseMat::zeros(vec![], vec![]).unwrap();
        let r = solve_min_l1(&d, &SparseVec::new()).unwrap();
        assert!(r.is_optimal() && r.objective.is_zero());
        let r = solve_min_linf(&d, &SparseVec::new()).unwrap();
        assert!(r.is_optimal() && r.objective.is_zero());
    }

    #[test]
    fn operator_norms() {
        let m = mat(
            &["r0", "r1"],
            &["c0", "c1"],
            &[("r0", "c0", q(1, 1)), ("r0", "c1", q(-2, 1)), ("r1", "c0", q(3, 1))],
        );
        assert_eq!(operator_norm(&m, OperatorNorm::L1ToL1), q(4, 1));
        assert_eq!(operator_norm(&m, OperatorNorm::LinfToLinf), q(3, 1));
        let z = SparseMat::zeros(labels(&["r"]), labels(&["c"])).unwrap();
        assert!(operator_norm(&z, OperatorNorm::L1ToL1).is_zero());
    }
}
