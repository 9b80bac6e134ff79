mod support;

use qhsing::families::{
    chain_data, cycle_divisor, cycle_weights, d_odd, orlik_randell_check, saito_family,
    thom_sebastiani, ChainSpec, CycleSpec,
};
use qhsing::scan::{enumerate_weight_systems, ScanConfig};
use qhsing::weight_systems::{
    check_conditions, divisor_d, rho_poly, semigroup_member, Semigroup, WeightSystem,
};
use qhsing::{Divisor, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use support::*;

#[test]
fn semigroup_matches_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let k = rng.gen_range(1..=4);
        let gens: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=40)).collect();
        let sg = Semigroup::new(&gens);
        for t in 0..=300 {
            assert_eq!(sg.contains(t), semigroup_dp(t, &gens), "{t} in {gens:?}");
        }
        let t = rng.gen_range(0..=300);
        assert_eq!(semigroup_member(t, &gens), semigroup_dp(t, &gens));
    }
}

fn all_tuples(n: usize, d: u64, mut f: impl FnMut(&[u64])) {
    let mut v = vec![1u64; n];
    loop {
        f(&v);
        let mut i = 0;
        while i < n && v[i] == d - 1 {
            v[i] = 1;
            i += 1;
        }
        if i == n {
            return;
        }
        v[i] += 1;
    }
}

#[test]
fn conditions_match_definition() {
    for n in 1..=3 {
        for d in 2..=if n == 3 { 22 } else { 40 } {
            all_tuples(n, d, |v| {
                let ws = WeightSystem::new(v.to_vec(), d).unwrap();
                let r = check_conditions(&ws).unwrap();
                assert_eq!(r.c1, c1_brute(v, d), "C1 of {ws}");
                assert_eq!(r.c1_bar, c1_bar_brute(v, d), "C1bar of {ws}");
                // the three formulations are equivalent
                assert_eq!(r.c1, r.c1_prime, "{ws}");
                assert_eq!(r.c1, r.c2, "{ws}");
                assert_eq!(r.c1_bar, r.c1_prime_bar, "{ws}");
                assert_eq!(r.c1_bar, r.c2_bar, "{ws}");
                if r.c1 {
                    assert!(r.c1_bar);
                }
            });
        }
    }
}

#[test]
fn enumeration_is_complete_for_two_variables() {
    for n in 1..=2 {
        let mut want: BTreeSet<(u64, Vec<u64>)> = BTreeSet::new();
        for d in 2..=30 {
            all_tuples(n, d, |v| {
                if c1_brute(v, d) {
                    let ws = WeightSystem::new(v.to_vec(), d).unwrap().reduce().sorted();
                    want.insert((ws.d(), ws.v().to_vec()));
                }
            });
        }
        let cfg = ScanConfig {
            n: Some(n),
            d_max: Some(30),
            ..Default::default()
        };
        let got: Vec<(u64, Vec<u64>)> = enumerate_weight_systems(&cfg)
            .unwrap()
            .into_iter()
            .map(|ws| (ws.d(), ws.v().to_vec()))
            .collect();
        let want: Vec<_> = want.into_iter().collect();
        assert_eq!(got, want, "n = {n}");
    }
}

#[test]
fn single_variable_systems_are_a_series() {
    let cfg = ScanConfig {
        n: Some(1),
        d_max: Some(10),
        ..Default::default()
    };
    let keys: Vec<String> = enumerate_weight_systems(&cfg)
        .unwrap()
        .iter()
        .map(|w| w.canonical_key())
        .collect();
    assert_eq!(keys, (2..=10).map(|d| format!("1:{d}")).collect::<Vec<_>>());
}

#[test]
fn rho_matches_rational_function() {
    let cfg = ScanConfig {
        n: Some(3),
        d_max: Some(18),
        ..Default::default()
    };
    for ws in enumerate_weight_systems(&cfg).unwrap() {
        let rho = rho_poly(&ws).unwrap();
        for t in [2, 3, -2] {
            assert_eq!(eval_poly(&rho, t), rho_at(ws.v(), ws.d(), t), "{ws} at {t}");
        }
        assert!(rho.all_nonnegative(), "{ws}");
    }
}

#[test]
fn rho_reports_non_polynomial_case() {
    let ws = WeightSystem::new(vec![2, 3], 7).unwrap();
    assert!(!check_conditions(&ws).unwrap().c1);
    match rho_poly(&ws) {
        Err(Error::RhoNotPolynomial { remainder_degree }) => assert!(remainder_degree < 3),
        other => panic!("expected a remainder, got {other:?}"),
    }
}

#[test]
fn expansion_matches_cyclotomic_product() {
    for text in ["1/4,1/6,5/12", "1/5,2/5,1/6,5/12", "2/15,1/5,1/3", "1/6,1/10,1/15"] {
        let ws: WeightSystem = text.parse().unwrap();
        let d = divisor_d(&ws);
        let nu = d.nonnegative_multiplicities().unwrap();
        let got = int_poly_to_i128(&d.expand().unwrap());
        assert_eq!(got, poly_from_nu(&nu), "{text}");
    }
}

#[test]
fn ivlev_expansion_has_milnor_degree() {
    let ws: WeightSystem = "1,24,33,58:265".parse().unwrap();
    let p = divisor_d(&ws).expand().unwrap();
    assert_eq!(p.degree(), Some(66516));
    assert!(p.is_monic());
}

#[test]
fn divisor_from_weights_matches_lefschetz_count() {
    // L(k) = (-1)^{n-|M(k)|}·∏_{t_j | k}(1/w_j - 1), counted directly
    let cfg = ScanConfig {
        n: Some(3),
        d_max: Some(24),
        ..Default::default()
    };
    for ws in enumerate_weight_systems(&cfg).unwrap() {
        let d = divisor_d(&ws);
        let nu = nu_ints(&d);
        for k in 1..=ws.d() {
            let mut prod = rat(1);
            let mut outside = 0;
            for (s, t) in ws.st_pairs() {
                if k % t == 0 {
                    prod *= rat(t as i64) / rat(s as i64) - rat(1);
                } else {
                    outside += 1;
                }
            }
            if outside % 2 == 1 {
                prod = -prod;
            }
            assert_eq!(rat(lefschetz_from_nu(&nu, k)), prod, "{ws} k={k}");
        }
    }
}

#[test]
fn cycles_and_chains_match_general_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..400 {
        let n = rng.gen_range(1..=6);
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=7)).collect();
        if let Ok(spec) = CycleSpec::new(a.clone()) {
            let ws = cycle_weights(&spec).unwrap();
            assert!(check_conditions(&ws).unwrap().c1, "cycle {a:?}");
            assert_eq!(cycle_divisor(&spec).unwrap(), divisor_d(&ws), "cycle {a:?}");
        }
        let spec = ChainSpec::chain(a.clone()).unwrap();
        let data = chain_data(&spec).unwrap();
        assert!(check_conditions(&data.weights).unwrap().c1, "chain {a:?}");
        assert_eq!(data.divisor, divisor_d(&data.weights), "chain {a:?}");
        assert!(orlik_randell_check(&spec).unwrap(), "chain {a:?}");
    }
}

#[test]
fn join_multiplies_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let pick = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(1..=2);
            let d = rng.gen_range(2..=16u64);
            let v: Vec<u64> = (0..n).map(|_| rng.gen_range(1..d)).collect();
            WeightSystem::new(v, d).unwrap()
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let joined = thom_sebastiani(&a, &b).unwrap();
        assert_eq!(divisor_d(&joined), divisor_d(&a).tensor(&divisor_d(&b)), "{a} + {b}");
    }
    let d7 = divisor_d(&d_odd(3).unwrap());
    let d11 = divisor_d(&d_odd(5).unwrap());
    assert_eq!(divisor_d(&saito_family(1, 3, 5).unwrap()), d7.tensor(&d11));
}

#[test]
fn tensor_matches_eigenvalue_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..500 {
        let mut draw = || {
            let mut nu: BTreeMap<u64, u64> = BTreeMap::new();
            for _ in 0..rng.gen_range(1..=3) {
                *nu.entry(rng.gen_range(1..=30)).or_default() += rng.gen_range(1..=2);
            }
            nu
        };
        let (a, b) = (draw(), draw());
        let to_div = |m: &BTreeMap<u64, u64>| {
            Divisor::from_psi(m.iter().map(|(&k, &c)| (k, rat(c as i64))))
        };
        let want = nu_of_roots(&tensor_roots(&roots_of(&a), &roots_of(&b)));
        assert_eq!(to_div(&a).tensor(&to_div(&b)), to_div(&want));
    }
}

#[test]
fn joining_with_quadratic_terms() {
    let a1 = WeightSystem::new(vec![1], 2).unwrap();
    let a1_twice = WeightSystem::new(vec![1, 1], 2).unwrap();
    let sign = &Divisor::lambda(2) - &Divisor::lambda(1);
    assert_eq!(divisor_d(&a1), sign);
    assert_eq!(divisor_d(&a1_twice), Divisor::one());
    for text in ["1,24,33,58:265", "2,1:5", "1,2:7"] {
        let ws: WeightSystem = text.parse().unwrap();
        let d = divisor_d(&ws);
        let once = divisor_d(&thom_sebastiani(&ws, &a1).unwrap());
        let twice = divisor_d(&thom_sebastiani(&ws, &a1_twice).unwrap());
        assert_eq!(once, d.tensor(&sign), "{text}");
        assert_eq!(twice, d, "{text}");
        assert_eq!(once.degree(), d.degree(), "{text}");
    }
}
