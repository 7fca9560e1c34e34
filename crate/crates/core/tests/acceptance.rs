mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{
    brute_force_min_l1, int_matrix, int_vector, random_chain, random_complex, random_instance,
    simplicial_boundary,
};
use ubcfill::exactlp::solve_min_l1;
use ubcfill::gluecalc::{glue_cycle, glue_upper_bound, GlueOutcome, GlueingInstance, Piece};
use ubcfill::groupcx::{
    f2_experiment, finite_group_bounded_cochains, records_to_csv, shapiro_maps, F2Config,
    FiniteGroupData,
};
use ubcfill::nervekit::{nerve_pair, CoverData};
use ubcfill::normcx::{
    bounded_product, end_inclusion, inherited_ubc_constant, prism, ubc_constant, CochainMap,
    Direction, EstimateMode, NormFlavor, NormedComplex, UbcMode,
};
use ubcfill::prng::XorShift64Star;
use ubcfill::simplicial::SimplicialComplex;
use ubcfill::{q, FillStatus, Norm, Rational, SparseMat, SparseVec};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn lp_oracle() -> Check {
    let start = Instant::now();
    let mut rng = XorShift64Star::new(2024);
    let mut infeasible = 0;
    for i in 0..100 {
        let (d, b) = random_instance(&mut rng);
        let m = int_matrix(&d);
        let rhs = int_vector("r", &b);
        let r = solve_min_l1(&m, &rhs).map_err(|e| e.to_string())?;
        ensure(r.verify(&m, &rhs, Norm::L1), || format!("instance {i}: certificate"))?;
        match brute_force_min_l1(&d, &b) {
            Some(best) => ensure(r.is_optimal() && r.objective == best, || {
                format!("instance {i}: solver {} vs enumeration {best}", r.objective)
            })?,
            None => {
                infeasible += 1;
                ensure(r.status == FillStatus::Infeasible, || format!("instance {i}: expected infeasible"))?
            }
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("100 instances agree ({infeasible} infeasible)"))
}

fn amenable_constants() -> Check {
    let start = Instant::now();
    let mut values = Vec::new();
    for m in [2, 3] {
        let g = FiniteGroupData::cyclic(m).map_err(|e| e.to_string())?;
        let c = finite_group_bounded_cochains(&g, 2).map_err(|e| e.to_string())?;
        for k in [1, 2] {
            let est = ubc_constant(&c, k, UbcMode::Auto { samples: 200, seed: 0 })
                .map_err(|e| e.to_string())?;
            ensure(est.mode == EstimateMode::ExactOnFiniteComplex, || {
                format!("Z/{m}, k = {k}: exact mode not used")
            })?;
            ensure(est.value <= Rational::one(), || format!("Z/{m}, k = {k}: K = {}", est.value))?;
            values.push(format!("Z/{m} k={k}: {}", est.value));
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(values.join(", "))
}

fn shapiro_norms() -> Check {
    let mut out = Vec::new();
    for (g, gens, label) in [
        (FiniteGroupData::cyclic(4), vec!["2"], "(Z/4, Z/2)"),
        (FiniteGroupData::symmetric(3), vec!["120"], "(S3, Z/3)"),
    ] {
        let g = g.map_err(|e| e.to_string())?;
        let gens: Vec<usize> = gens.iter().map(|s| g.element(s).unwrap()).collect();
        let h = g.generated(&gens);
        let maps = shapiro_maps(&g, &h, 3).map_err(|e| e.to_string())?;
        let r = maps.check().map_err(|e| e.to_string())?;
        ensure(r.psi_phi_is_identity, || format!("{label}: ψφ ≠ id"))?;
        ensure(r.homotopy_identity, || format!("{label}: δh + hδ ≠ φψ - id"))?;
        ensure(r.all_ok(), || format!("{label}: norm bound fails: {:?}", r.homotopy_norms))?;
        let hn: Vec<String> = r.homotopy_norms.iter().map(|v| v.to_string()).collect();
        out.push(format!("{label} ‖h‖ = [{}]", hn.join(", ")));
    }
    Ok(out.join("; "))
}

fn check_prism(x: &SimplicialComplex, c: &SparseVec, n: usize) -> Result<SparseVec, String> {
    let (p, cyl) = prism(c, n, x).map_err(|e| e.to_string())?;
    ensure(p.l1_norm() <= &Rational::from(n) * &c.l1_norm(), || "norm bound fails".into())?;
    let lhs = cyl.differential(n as i64, &p).map_err(|e| e.to_string())?;
    let mut rhs = end_inclusion(x, c, 1)
        .and_then(|a| Ok(a.sub(&end_inclusion(x, c, 0)?)))
        .map_err(|e| e.to_string())?;
    if n > 1 {
        let (pd, _) = prism(&simplicial_boundary(x, c), n - 1, x).map_err(|e| e.to_string())?;
        rhs = rhs.sub(&pd);
    }
    ensure(lhs == rhs, || format!("∂P(c) ≠ ι₁(c) - ι₀(c) - P(∂c) for n = {n}"))?;
    Ok(p)
}

fn prism_identity() -> Check {
    for n in 1..=4 {
        let verts: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let x = SimplicialComplex::from_generators([verts]).map_err(|e| e.to_string())?;
        let top = x.simplices_of_dim(n - 1)[0].clone();
        let p = check_prism(&x, &SparseVec::unit(x.label(&top)), n)?;
        ensure(p.len() == n, || format!("prism over Δ^{} has {} simplices", n - 1, p.len()))?;
    }
    let mut rng = XorShift64Star::new(44);
    let mut checked = 0;
    while checked < 50 {
        let x = random_complex(&mut rng, 5, 3);
        let dim = x.dim().unwrap_or(0);
        let d = rng.below(dim as u64 + 1) as usize;
        let c = random_chain(&mut rng, &x, d);
        check_prism(&x, &c, d + 1)?;
        checked += 1;
    }
    Ok("single simplices n ≤ 4 and 50 random chains".into())
}

fn nerve_pairs() -> Check {
    let hexagon = SimplicialComplex::from_generators([
        vec!["a", "b"],
        vec!["b", "c"],
        vec!["c", "d"],
        vec!["d", "e"],
        vec!["e", "f"],
        vec!["f", "a"],
    ])
    .map_err(|e| e.to_string())?;
    let cover = CoverData::new(
        hexagon,
        &[],
        &[
            ("U", vec!["a", "b", "c"]),
            ("V", vec!["c", "d", "e"]),
            ("W", vec!["e", "f", "a"]),
        ],
    )
    .map_err(|e| e.to_string())?;
    let pair = nerve_pair(&cover);
    let boundary_triangle =
        SimplicialComplex::from_generators([vec!["U", "V"], vec!["V", "W"], vec!["U", "W"]]).unwrap();
    ensure(pair.nerve == boundary_triangle, || "nerve is not the boundary of a triangle".into())?;
    ensure(pair.mult == 2, || format!("mult = {}", pair.mult))?;
    ensure(pair.nerve.dim() == Some(pair.mult - 1), || "dim ≠ mult - 1".into())?;

    let path = SimplicialComplex::from_generators([vec!["a", "b"], vec!["b", "c"]]).unwrap();
    let cover = CoverData::new(path, &["b"], &[("U", vec!["a", "b"]), ("V", vec!["b", "c"])])
        .map_err(|e| e.to_string())?;
    let pair = nerve_pair(&cover);
    ensure(pair.mult_a == 0, || format!("mult_A = {}", pair.mult_a))?;
    ensure(pair.mult == 2, || format!("mult = {}", pair.mult))?;
    Ok("hexagon nerve = ∂Δ², mult = 2; relative multiplicity 0".into())
}

fn glue_arithmetic() -> Check {
    let v = glue_upper_bound(&q(1, 1), 3, &[q(3, 1), q(3, 1)]).map_err(|e| e.to_string())?;
    ensure(v == q(30, 1), || format!("got {v}"))?;
    let z = glue_upper_bound(&q(1, 1), 3, &[q(0, 1), q(0, 1)]).map_err(|e| e.to_string())?;
    ensure(z.is_zero(), || format!("zero volumes gave {z}"))?;
    Ok("30 and 0".into())
}

/// A triangulated annulus with inner circle `a*` and outer circle `b*`,
/// and an oriented fundamental cycle.
fn annulus() -> (SimplicialComplex, SparseVec) {
    let mut gens = Vec::new();
    for i in 0..3 {
        let j = (i + 1) % 3;
        gens.push(vec![format!("a{i}"), format!("a{j}"), format!("b{i}")]);
        gens.push(vec![format!("a{j}"), format!("b{i}"), format!("b{j}")]);
    }
    let x = SimplicialComplex::from_generators(gens).unwrap();
    let triangles: Vec<String> = x.simplices_of_dim(2).into_iter().map(|s| x.label(s)).collect();
    let is_outer_or_inner = |l: &str| {
        let s: Vec<&str> = l.split('.').collect();
        s.len() == 2 && s[0].as_bytes()[0] == s[1].as_bytes()[0]
    };
    for mask in 0..(1u32 << triangles.len()) {
        let z = SparseVec::from_pairs(triangles.iter().enumerate().map(|(i, t)| {
            (t.clone(), if mask & (1 << i) == 0 { q(1, 1) } else { q(-1, 1) })
        }));
        let dz = simplicial_boundary(&x, &z);
        if dz.labels().all(|l| is_outer_or_inner(l)) {
            return (x, z);
        }
    }
    unreachable!("an annulus is orientable")
}

fn constructive_glueing() -> Check {
    let (x, z) = annulus();
    let outer: Vec<String> = ["b0.b1", "b1.b2", "b0.b2"].iter().map(|s| s.to_string()).collect();
    let inner: BTreeSet<String> = ["a0.a1", "a1.a2", "a0.a2"].iter().map(|s| s.to_string()).collect();
    let piece = |name: &str| Piece {
        name: name.into(),
        complex: x.chain_complex(name),
        cycle: z.clone(),
        free: inner.clone(),
    };
    let idents = outer.iter().map(|e| ((0, e.clone()), (1, e.clone()))).collect();
    let inst = GlueingInstance::new(2, vec![piece("P"), piece("Q")], idents).map_err(|e| e.to_string())?;
    let circle = SimplicialComplex::from_generators([vec!["0", "1"], vec!["1", "2"], vec!["0", "2"]])
        .unwrap()
        .chain_complex("circle");
    let k_circle = ubc_constant(&circle, 1, UbcMode::Exact).map_err(|e| e.to_string())?.value;
    match glue_cycle(&inst, &q(1, 1)).map_err(|e| e.to_string())? {
        GlueOutcome::Glued { filler, report, .. } => {
            ensure(report.free_support_ok, || "∂z leaves the free boundary".into())?;
            ensure(report.locus_constant.as_ref() == Some(&k_circle), || {
                format!("K_N = {:?}, circle constant {k_circle}", report.locus_constant)
            })?;
            let bound = &(&k_circle * &q(3, 1)) * &report.cycles_norm;
            ensure(filler.l1_norm() <= bound, || format!("|c| = {} > {bound}", filler.l1_norm()))?;
            ensure(report.locus_bound_ok == Some(true), || "locus bound not confirmed".into())?;
            Ok(format!("|c|₁ = {}, K_N = {k_circle}, Σ|z_i|₁ = {}", filler.l1_norm(), report.cycles_norm))
        }
        GlueOutcome::Inconsistent { .. } => Err("annuli did not glue".into()),
    }
}

fn complex(name: &str, d: &SparseMat) -> NormedComplex {
    let bases = BTreeMap::from([(0, d.rows().to_vec()), (1, d.cols().to_vec())]);
    NormedComplex::from_parts(name, Direction::Chain, NormFlavor::L1, bases, BTreeMap::from([(1, d.clone())]))
        .unwrap()
}

fn random_matrix(rng: &mut XorShift64Star, rows: usize, cols: usize) -> SparseMat {
    loop {
        let d: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.below(5) as i64 - 2).collect())
            .collect();
        let m = int_matrix(&d);
        if !m.is_zero() {
            return m;
        }
    }
}

fn scalar_map(source: &Arc<NormedComplex>, target: &Arc<NormedComplex>, scales: [Rational; 2]) -> CochainMap {
    let mut comps = BTreeMap::new();
    for (k, s) in scales.iter().enumerate() {
        let labels = source.basis(k as i64).to_vec();
        let m = SparseMat::identity(labels).unwrap().scale(s);
        comps.insert(k as i64, m);
    }
    CochainMap::new(source.clone(), target.clone(), comps).unwrap()
}

/// Checks the homotopy data and compares the target's exact constant with the inherited bound.
fn inherit_case(
    c: &Arc<NormedComplex>,
    d: &Arc<NormedComplex>,
    f: &CochainMap,
    g: &CochainMap,
    h: &CochainMap,
) -> Result<(Rational, Rational), String> {
    let e = |e: ubcfill::normcx::ComplexError| e.to_string();
    f.check_commutes().map_err(e)?;
    g.check_commutes().map_err(e)?;
    let gf = g.compose(f).map_err(e)?;
    let id = CochainMap::identity(c.clone());
    ensure((0..=1).all(|k| gf.component(k) == id.component(k)), || "gf ≠ id".into())?;
    let fg = f.compose(g).map_err(e)?;
    let fails = h.homotopy_failures(&CochainMap::identity(d.clone()), &fg).map_err(e)?;
    ensure(fails.is_empty(), || format!("∂h + h∂ ≠ id - fg in degrees {fails:?}"))?;
    let k_c = ubc_constant(c, 0, UbcMode::Exact).map_err(e)?.value;
    let k_d = ubc_constant(d, 0, UbcMode::Exact).map_err(e)?.value;
    let bound = inherited_ubc_constant(
        &f.measured_norm(1).map_err(e)?,
        &g.measured_norm(0).map_err(e)?,
        &k_c,
        &h.measured_norm(0).map_err(e)?,
    )
    .map_err(e)?;
    Ok((k_d, bound))
}

fn homotopy_inheritance() -> Check {
    let mut rng = XorShift64Star::new(8);
    let lambdas = [q(1, 1), q(2, 1), q(3, 1), q(1, 2), q(-1, 3)];
    let scales = [(q(1, 1), q(2, 1)), (q(3, 1), q(1, 1)), (q(1, 2), q(5, 1)), (q(2, 3), q(2, 3)), (q(4, 1), q(1, 3))];
    let mut tight = 0;
    for case in 0..20 {
        let dc = random_matrix(&mut rng, 2, 3);
        let c = Arc::new(complex("C", &dc));
        let (k_d, bound) = if case % 2 == 0 {
            // C ⊕ E with E contractible: ∂e1 = λ·e0
            let lambda = &lambdas[(case / 2) % lambdas.len()];
            let mut rows = dc.rows().to_vec();
            rows.push("e0".into());
            let mut cols = dc.cols().to_vec();
            cols.push("e1".into());
            let mut dd = SparseMat::zeros(rows.clone(), cols.clone()).unwrap();
            for (i, j, v) in dc.triples() {
                dd.add_at(i, j, v);
            }
            dd.add_at(rows.len() - 1, cols.len() - 1, lambda);
            let d = Arc::new(complex("D", &dd));
            let inc = |k: i64| {
                let mut m = SparseMat::zeros(d.basis(k).to_vec(), c.basis(k).to_vec()).unwrap();
                for j in 0..c.basis(k).len() {
                    m.add_at(j, j, &Rational::one());
                }
                m
            };
            let f = CochainMap::new(c.clone(), d.clone(), BTreeMap::from([(0, inc(0)), (1, inc(1))])).unwrap();
            let g = CochainMap::new(
                d.clone(),
                c.clone(),
                BTreeMap::from([(0, inc(0).transpose()), (1, inc(1).transpose())]),
            )
            .unwrap();
            let mut h0 = SparseMat::zeros(d.basis(1).to_vec(), d.basis(0).to_vec()).unwrap();
            h0.add_at(cols.len() - 1, rows.len() - 1, &lambda.recip());
            let h = CochainMap::homotopy(d.clone(), d.clone(), BTreeMap::from([(0, h0)])).unwrap();
            inherit_case(&c, &d, &f, &g, &h)?
        } else {
            // degree-wise scalings f_k = s_k, g_k = 1/s_k
            let (s0, s1) = &scales[(case / 2) % scales.len()];
            let d = Arc::new(complex("D", &dc.scale(&(s0 / s1))));
            let f = scalar_map(&c, &d, [s0.clone(), s1.clone()]);
            let g = scalar_map(&d, &c, [s0.recip(), s1.recip()]);
            let h = CochainMap::homotopy(d.clone(), d.clone(), BTreeMap::new()).unwrap();
            let (k_d, bound) = inherit_case(&c, &d, &f, &g, &h)?;
            if k_d == bound {
                tight += 1;
            }
            (k_d, bound)
        };
        ensure(k_d <= bound, || format!("case {case}: K_D = {k_d} > {bound}"))?;
    }
    Ok(format!("20 pairs, {tight} scaling cases attain the bound"))
}

fn f2_determinism() -> Check {
    let start = Instant::now();
    let cfg = F2Config::new(0, 2, 2, 3, 50);
    let first = f2_experiment(&cfg).map_err(|e| e.to_string())?;
    let second = f2_experiment(&cfg).map_err(|e| e.to_string())?;
    let (a, b) = (records_to_csv(&first), records_to_csv(&second));
    ensure(a.as_bytes() == b.as_bytes(), || "CSV differs between runs".into())?;
    ensure(first.len() == 50, || format!("{} records", first.len()))?;
    ensure(first.iter().all(|r| r.certificate_ok), || "a certificate failed".into())?;
    within(start, Duration::from_secs(300))?;
    let max = first.iter().filter_map(|r| r.ratio.clone()).max().unwrap_or_default();
    Ok(format!("50 trials, max ratio {max}, {:?}", start.elapsed()))
}

fn bounded_products() -> Check {
    let z2 = finite_group_bounded_cochains(&FiniteGroupData::cyclic(2).unwrap(), 2).map_err(|e| e.to_string())?;
    let z3 = finite_group_bounded_cochains(&FiniteGroupData::cyclic(3).unwrap(), 2).map_err(|e| e.to_string())?;
    // a cochain complex with cohomology in degrees 0 and 1
    let mut d0 = SparseMat::zeros(vec!["e".into(), "f".into()], vec!["v".into(), "w".into()]).unwrap();
    d0.add_at(0, 0, &q(1, 1));
    d0.add_at(0, 1, &q(-1, 1));
    let bases = BTreeMap::from([
        (0, vec!["v".to_string(), "w".to_string()]),
        (1, vec!["e".to_string(), "f".to_string()]),
        (2, vec![]),
        (3, vec![]),
    ]);
    let hand = NormedComplex::from_parts("hand", Direction::Cochain, NormFlavor::Linf, bases, BTreeMap::from([(0, d0)]))
        .map_err(|e| e.to_string())?;
    let family = [z2, z3, hand];
    let product = bounded_product(&family, 3).map_err(|e| e.to_string())?;
    product.validate().map_err(|e| e.to_string())?;
    let mut dims = Vec::new();
    // degree 3 is the truncation top of the members
    for k in 0..=2 {
        let sum: usize = family.iter().map(|c| c.homology_dimension(k)).sum();
        let got = product.homology_dimension(k);
        ensure(got == sum, || format!("degree {k}: product {got}, sum {sum}"))?;
        dims.push(got.to_string());
    }
    Ok(format!("dimensions [{}]", dims.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("LP oracle equivalence", lp_oracle),
        ("amenable UBC constants", amenable_constants),
        ("Shapiro norms", shapiro_norms),
        ("prism identity", prism_identity),
        ("nerve pairs", nerve_pairs),
        ("glueing arithmetic", glue_arithmetic),
        ("constructive glueing", constructive_glueing),
        ("homotopy inheritance", homotopy_inheritance),
        ("F2 determinism and certificates", f2_determinism),
        ("bounded product cohomology", bounded_products),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
