mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{random_chain, random_complex, simplicial_boundary};
use ubcfill::exactlp::dense;
use ubcfill::format;
use ubcfill::groupcx::{alternating_projection, bar_complex};
use ubcfill::nervekit::{check_relative_cover, components, nerve_pair, CoverData};
use ubcfill::normcx::{end_inclusion, prism, ubc_constant, UbcMode};
use ubcfill::prng::XorShift64Star;
use ubcfill::simplicial::SimplicialComplex;
use ubcfill::{q, Rational, SparseVec};

fn complex_with_top(rng: &mut XorShift64Star) -> (SimplicialComplex, usize) {
    loop {
        let x = random_complex(rng, 5, 2);
        if let Some(d) = x.dim() {
            if d >= 1 {
                return (x, d);
            }
        }
    }
}

/// A random boundary in degree `top - 1`.
fn random_boundary(rng: &mut XorShift64Star, x: &SimplicialComplex, top: usize) -> SparseVec {
    simplicial_boundary(x, &random_chain(rng, x, top))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed vertex stars cover every simplex and are connected.
fn star_cover(rng: &mut XorShift64Star, x: &SimplicialComplex) -> CoverData {
    let n = x.vertices().len();
    let mut members: Vec<(String, Vec<String>)> = Vec::new();
    for v in 0..n {
        let mut set = BTreeSet::from([v]);
        for (a, b) in x.edges() {
            if a == v {
                set.insert(b);
            } else if b == v {
                set.insert(a);
            }
        }
        members.push((format!("U{v}"), set.into_iter().map(|i| x.vertices()[i].clone()).collect()));
    }
    let size = rng.below(n as u64 + 1) as usize;
    let sub: Vec<String> = rng
        .sample_distinct(n, size)
        .into_iter()
        .map(|i| x.vertices()[i].clone())
        .collect();
    let sub_refs: Vec<&str> = sub.iter().map(String::as_str).collect();
    let member_refs: Vec<(&str, Vec<&str>)> = members
        .iter()
        .map(|(name, vs)| (name.as_str(), vs.iter().map(String::as_str).collect()))
        .collect();
    CoverData::new(x.clone(), &sub_refs, &member_refs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fill_norm_is_homogeneous(seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let (x, top) = complex_with_top(&mut rng);
        let c = x.chain_complex("x");
        let b = random_boundary(&mut rng, &x, top);
        let k = top as i64 - 1;
        let base = c.fill_norm(k, &b).unwrap();
        prop_assert!(base.is_optimal());
        for lambda in [q(-2, 1), q(1, 3), q(5, 1)] {
            let r = c.fill_norm(k, &b.scale(&lambda)).unwrap();
            prop_assert_eq!(r.objective, &lambda.abs() * &base.objective);
        }
    }

    #[test]
    fn fill_norm_is_subadditive(seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let (x, top) = complex_with_top(&mut rng);
        let c = x.chain_complex("x");
        let k = top as i64 - 1;
        let b1 = random_boundary(&mut rng, &x, top);
        let b2 = random_boundary(&mut rng, &x, top);
        let f1 = c.fill_norm(k, &b1).unwrap().objective;
        let f2 = c.fill_norm(k, &b2).unwrap().objective;
        let f12 = c.fill_norm(k, &b1.add(&b2)).unwrap().objective;
        prop_assert!(f12 <= &f1 + &f2);
    }

    #[test]
    fn sampled_constant_is_a_lower_bound(seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let (x, top) = complex_with_top(&mut rng);
        let c = x.chain_complex("x");
        let k = top as i64 - 1;
        let exact = ubc_constant(&c, k, UbcMode::Exact).unwrap();
        let sampled = ubc_constant(&c, k, UbcMode::Sampled { samples: 20, seed }).unwrap();
        prop_assert!(sampled.value <= exact.value);
        for w in &exact.witnesses {
            prop_assert!(w.ratio() <= exact.value);
        }
    }

    #[test]
    fn seminorm_is_bounded_by_norm(seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let (x, top) = complex_with_top(&mut rng);
        let c = x.chain_complex("x");
        let k = top as i64 - 1;
        let b = random_boundary(&mut rng, &x, top);
        prop_assert_eq!(c.homology_seminorm(k, &b).unwrap(), Rational::zero());
        prop_assert_eq!(c.homology_seminorm(k, &SparseVec::new()).unwrap(), Rational::zero());
        if let Some(tri) = x.simplices_of_dim(2).first() {
            let z = simplicial_boundary(&x, &SparseVec::unit(x.label(tri)));
            prop_assert!(c.homology_seminorm(1, &z).unwrap() <= z.l1_norm());
        }
    }

    #[test]
    fn prism_identity_on_random_chains(seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let (x, top) = complex_with_top(&mut rng);
        for dim in 0..=top {
            let n = dim + 1;
            let c = random_chain(&mut rng, &x, dim);
            let (p, cyl) = prism(&c, n, &x).unwrap();
            prop_assert!(p.l1_norm() <= &Rational::from(n) * &c.l1_norm());
            let lhs = cyl.differential(n as i64, &p).unwrap();
            let mut rhs = end_inclusion(&x, &c, 1).unwrap().sub(&end_inclusion(&x, &c, 0).unwrap());
            if dim > 0 {
                let (pd, _) = prism(&simplicial_boundary(&x, &c), n - 1, &x).unwrap();
                rhs = rhs.sub(&pd);
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cover_invariants(seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let x = random_complex(&mut rng, 6, 2);
        let cover = star_cover(&mut rng, &x);
        let report = check_relative_cover(&cover);
        if report.convex {
            prop_assert!(report.weakly_convex);
        }
        let pair = nerve_pair(&cover);
        prop_assert!(pair.mult_a <= pair.mult);
        prop_assert_eq!(pair.nerve.dim().map(|d| d + 1), Some(pair.mult));
        for (_, set) in cover.intersections() {
            for comp in components(&x, &set) {
                let inner: BTreeSet<usize> = comp.iter().copied().collect();
                prop_assert_eq!(components(&x, &inner), vec![comp]);
            }
        }
    }

    #[test]
    fn complex_files_round_trip(seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let x = random_complex(&mut rng, 6, 3);
        let c = x.chain_complex("random");
        let text = format::serialize_complex(&c);
        let back = format::parse_complex(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(format::serialize_complex(&back), text);
        let sx = format::serialize_simplicial(&x);
        prop_assert_eq!(format::parse_simplicial(&sx).unwrap(), x);
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = q(n, d);
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bar_differentials_square_to_zero(rank in 1u8..=2, k_max in 1usize..=3, radius in 1usize..=2) {
        let c = bar_complex(rank, k_max, radius).unwrap();
        prop_assert!(c.validate().is_ok());
    }

    #[test]
    fn alternation_rank_is_binomial(s in 1usize..=4, k in 0usize..=2) {
        let alt = alternating_projection(s, k).unwrap();
        let m = alt.component(k as i64);
        prop_assert_eq!(dense::rank(&m.to_dense(), m.ncols()), binomial(s, k + 1));
        let twice = m.matmul(&m).unwrap();
        prop_assert_eq!(twice, m);
        prop_assert!(alt.check_commutes().is_ok());
    }
}
