//! Truncated normalized bar complexes of free groups and the filling experiment.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::exactlp::{FillStatus, SparseMat, SparseVec};
use crate::normcx::{Direction, NormFlavor, NormedComplex};
use crate::prng::XorShift64Star;
use crate::rational::Rational;

use super::words::{ball, Word};
use super::GroupError;

pub type BarTuple = Vec<Word>;

pub fn tuple_label(t: &[Word]) -> String {
    if t.is_empty() {
        return "()".to_string();
    }
    t.iter().map(Word::to_string).collect::<Vec<_>>().join("|")
}

/// Degree-`k` basis at radius `radius`: tuples of nonidentity words such that
/// the product of every run of consecutive entries has length at most `radius`.
///
/// These bases are closed under all bar faces, so they span a subcomplex.
pub fn bar_basis(rank: u8, k: usize, radius: usize) -> Vec<BarTuple> {
    let words: Vec<Word> = ball(rank, radius).into_iter().skip(1).collect();
    let mut out = Vec::new();
    // each partial tuple carries the products of all its suffixes
    fn extend(
        words: &[Word],
        k: usize,
        radius: usize,
        cur: &mut Vec<Word>,
        suffixes: &[Word],
        out: &mut Vec<BarTuple>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for w in words {
            let mut next: Vec<Word> = Vec::with_capacity(suffixes.len() + 1);
            let mut ok = true;
            for s in suffixes {
                let p = s.mul(w);
                if p.len() > radius {
                    ok = false;
                    break;
                }
                next.push(p);
            }
            if !ok {
                continue;
            }
            next.push(w.clone());
            cur.push(w.clone());
            extend(words, k, radius, cur, &next, out);
            cur.pop();
        }
    }
    extend(&words, k, radius, &mut Vec::new(), &[], &mut out);
    out
}

/// Faces of the inhomogeneous bar boundary with their signs; faces with an
/// identity entry are omitted.
pub fn bar_faces(t: &[Word]) -> Vec<(BarTuple, i64)> {
    let k = t.len();
    if k == 0 {
        return Vec::new();
    }
    let mut out = vec![(t[1..].to_vec(), 1)];
    for i in 1..k {
        let p = t[i - 1].mul(&t[i]);
        if p.is_identity() {
            continue;
        }
        let mut f = t[..i - 1].to_vec();
        f.push(p);
        f.extend_from_slice(&t[i + 1..]);
        out.push((f, if i % 2 == 0 { 1 } else { -1 }));
    }
    out.push((t[..k - 1].to_vec(), if k.is_multiple_of(2) { 1 } else { -1 }));
    out
}

/// The radius-truncated normalized bar complex of the free group of rank
/// `rank`, degrees `0..=k_max`, with ℓ¹ norm and no augmentation.
pub fn bar_complex(rank: u8, k_max: usize, radius: usize) -> Result<NormedComplex, GroupError> {
    if k_max < 1 {
        return Err(GroupError::Input("k_max must be at least 1".into()));
    }
    if !(1..=26).contains(&rank) {
        return Err(GroupError::Input("rank must lie in 1..=26".into()));
    }
    let bases: Vec<Vec<BarTuple>> = (0..=k_max).map(|k| bar_basis(rank, k, radius)).collect();
    let mut label_bases = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for (k, basis) in bases.iter().enumerate() {
        label_bases.insert(k as i64, basis.iter().map(|t| tuple_label(t)).collect::<Vec<_>>());
    }
    for k in 1..=k_max {
        let index: HashMap<&BarTuple, usize> =
            bases[k - 1].iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut columns = Vec::with_capacity(bases[k].len());
        for t in &bases[k] {
            let mut col: BTreeMap<usize, i64> = BTreeMap::new();
            for (f, sign) in bar_faces(t) {
                let i = *index
                    .get(&f)
                    .ok_or_else(|| GroupError::Closure(tuple_label(t), tuple_label(&f)))?;
                *col.entry(i).or_default() += sign;
            }
            columns.push(
                col.into_iter()
                    .filter(|(_, v)| *v != 0)
                    .map(|(i, v)| (i, Rational::from_int(v)))
                    .collect(),
            );
        }
        let m = SparseMat::from_index_columns(
            label_bases[&(k as i64 - 1)].clone(),
            label_bases[&(k as i64)].clone(),
            columns,
        )?;
        maps.insert(k as i64, m);
    }
    let c = NormedComplex::from_parts(
        format!("bar-F{rank}-r{radius}"),
        Direction::Chain,
        NormFlavor::L1,
        label_bases,
        maps,
    )?;
    c.validate()?;
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Config {
    pub seed: u64,
    pub k: usize,
    pub l_cycle: usize,
    pub l_fill: usize,
    pub trials: usize,
    /// Number of basis tuples in the support of each random chain.
    pub support: usize,
    pub rank: u8,
}

impl F2Config {
    pub fn new(seed: u64, k: usize, l_cycle: usize, l_fill: usize, trials: usize) -> Self {
        F2Config {
            seed,
            k,
            l_cycle,
            l_fill,
            trials,
            support: 8,
            rank: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRecord {
    pub seed: u64,
    pub trial: usize,
    pub k: usize,
    pub l_cycle: usize,
    pub l_fill: usize,
    pub boundary_norm: Rational,
    pub fill_norm: Option<Rational>,
    pub ratio: Option<Rational>,
    pub status: FillStatus,
    pub certificate_ok: bool,
}

pub const CSV_HEADER: &str = "seed,trial,k,L_cycle,L_fill,boundary_norm,fill_norm,ratio,status";

/// For random integral chains `c` on the `l_cycle` basis in degree `k`,
/// fills `∂c` with minimal ℓ¹ norm over the degree-`k` basis of radius `l_fill`.
///
/// Trial `i` draws from its own stream, so records do not depend on how
/// trials are scheduled. A zero boundary is recorded with ratio 0.
pub fn f2_experiment(config: &F2Config) -> Result<Vec<ExperimentRecord>, GroupError> {
    if config.k < 2 {
        return Err(GroupError::Input("k must be at least 2".into()));
    }
    if config.l_fill < config.l_cycle {
        return Err(GroupError::Input("L_fill must be at least L_cycle".into()));
    }
    if config.support == 0 {
        return Err(GroupError::Input("support size must be positive".into()));
    }
    let complex = bar_complex(config.rank, config.k, config.l_fill)?;
    let cycle_basis: Vec<String> = bar_basis(config.rank, config.k, config.l_cycle)
        .iter()
        .map(|t| tuple_label(t))
        .collect();
    let k = config.k as i64;
    let d = complex.differential_into(k - 1);
    let mut records = Vec::with_capacity(config.trials);
    for trial in 0..config.trials {
        let mut rng = XorShift64Star::for_job(config.seed, trial as u64);
        let mut c = SparseVec::new();
        if !cycle_basis.is_empty() {
            for j in rng.sample_distinct(cycle_basis.len(), config.support) {
                c.set(cycle_basis[j].clone(), Rational::from_int(rng.coefficient()));
            }
        }
        let b = complex.differential(k, &c)?;
        let fill = complex.fill_norm(k - 1, &b)?;
        let certificate_ok = fill.verify(&d, &b, crate::exactlp::Norm::L1);
        if !certificate_ok {
            return Err(GroupError::Certificate(trial));
        }
        let boundary_norm = b.l1_norm();
        let (fill_norm, ratio) = match fill.status {
            FillStatus::Optimal => {
                let ratio = if boundary_norm.is_zero() {
                    Rational::zero()
                } else {
                    &fill.objective / &boundary_norm
                };
                (Some(fill.objective), Some(ratio))
            }
            FillStatus::Infeasible => (None, None),
        };
        records.push(ExperimentRecord {
            seed: config.seed,
            trial,
            k: config.k,
            l_cycle: config.l_cycle,
            l_fill: config.l_fill,
            boundary_norm,
            fill_norm,
            ratio,
            status: fill.status,
            certificate_ok,
        });
    }
    Ok(records)
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let opt = |v: &Option<Rational>| v.as_ref().map(Rational::to_string).unwrap_or_default();
    for r in records {
        let status = match r.status {
            FillStatus::Optimal => "optimal",
            FillStatus::Infeasible => "infeasible",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.seed,
            r.trial,
            r.k,
            r.l_cycle,
            r.l_fill,
            r.boundary_norm,
            opt(&r.fill_norm),
            opt(&r.ratio),
            status
        )
        .expect("writing to a String");
    }
    out
}
