//! Cross-checks of each computation against an independent, slower route.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use gauss_periods::arith::{self, FactorBudget};
use gauss_periods::cyclo::{self, CycloContext, CycloElem};
use gauss_periods::experiments::{self, ScanRecord};
use gauss_periods::quadratic::{self, QuadRing};

/// Order by repeated multiplication.
fn naive_order(a: &CycloElem) -> u64 {
    let one = CycloElem::one(a.context());
    let mut x = a.clone();
    let mut k = 1;
    while x != one {
        x = x.mul(a).unwrap();
        k += 1;
    }
    k
}

#[test]
fn gauss_period_order_matches_naive_iteration() {
    let pairs: Vec<(u64, u64)> = [2u64, 3, 5, 7, 11]
        .iter()
        .flat_map(|&q| experiments::theorem_primes(q, 40).into_iter().map(move |p| (p, q)))
        .filter(|&(p, q)| (q as f64).powi(((p - 1) / 2) as i32) < 1e6)
        .collect();
    assert!(pairs.len() >= 6);
    for (p, q) in pairs {
        let ctx = CycloContext::new(p, q).unwrap();
        let alpha = cyclo::gauss_period(&ctx);
        let fact = arith::factorize(ctx.group_order(), FactorBudget::default()).unwrap();
        let ord = cyclo::full_order(&ctx, &alpha, &fact).unwrap();
        assert_eq!(ord.to_u64().unwrap(), naive_order(&alpha), "p={p} q={q}");
    }
}

#[test]
fn index_gcd_matches_full_index() {
    for q in [2u64, 3, 5, 7] {
        for p in experiments::theorem_primes(q, 200) {
            let ctx = CycloContext::new(p, q).unwrap();
            if ctx.group_order().bits() > 90 {
                continue;
            }
            let alpha = cyclo::gauss_period(&ctx);
            let group = arith::factorize(ctx.group_order(), FactorBudget::default()).unwrap();
            let index = cyclo::index_of(&ctx, &alpha, &group).unwrap();
            let m = BigUint::from(q * q - 1);
            let m_fact = arith::factorize(&m, FactorBudget::default()).unwrap();
            let g = cyclo::index_gcd(&ctx, &alpha, &m_fact).unwrap();
            assert_eq!(g, index.gcd(&m), "p={p} q={q}");
        }
    }
}

#[test]
fn fundamental_unit_is_least_pell_solution() {
    let bound = 100_000u64;
    for p in arith::primes_up_to(500).into_iter().filter(|p| p % 4 == 1) {
        let unit = quadratic::fundamental_unit(p).unwrap();
        match quadratic::pell_brute_force(p, bound) {
            Some((x, y)) => assert_eq!((x, y), (unit.x.clone(), unit.y.clone()), "p={p}"),
            None => assert!(unit.y > BigUint::from(bound), "p={p}"),
        }
    }
}

#[test]
fn modular_unit_matches_reduced_unit() {
    for p in arith::primes_up_to(2000).into_iter().filter(|p| p % 4 == 1) {
        let unit = quadratic::fundamental_unit(p).unwrap();
        for m in [2u64, 3, 4, 10, 22] {
            let want = (
                (&unit.x % m).to_u64().unwrap(),
                (&unit.y % m).to_u64().unwrap(),
            );
            assert_eq!(quadratic::fundamental_unit_mod(p, m).unwrap(), want, "p={p} m={m}");
        }
    }
}

#[test]
fn unit_mod_q_has_norm_minus_one() {
    for q in [3u64, 5, 7, 11, 13] {
        for p in arith::primes_up_to(3000)
            .into_iter()
            .filter(|&p| p % 4 == 1 && quadratic::is_inert(p, q))
        {
            let e = quadratic::unit_mod_q(p, q).unwrap();
            assert_eq!(e.norm(), q - 1, "p={p} q={q}");
        }
    }
}

#[test]
fn imaginary_class_number_two_ways() {
    for p in arith::primes_up_to(2000).into_iter().filter(|p| p % 4 == 1) {
        let (h, _) = quadratic::class_number_imag(p).unwrap();
        assert_eq!(h, quadratic::class_number_imag_forms(p).unwrap(), "p={p}");
    }
}

#[test]
fn real_class_number_small_precision_agrees() {
    for p in arith::primes_up_to(1500).into_iter().filter(|p| p % 4 == 1) {
        let auto = quadratic::class_number_real_auto(p).unwrap();
        assert_eq!(quadratic::class_number_real(p, 256).unwrap(), auto, "p={p}");
        assert_eq!(auto % 2, 1);
    }
}

#[test]
fn theorem_lhs_equals_rhs_for_small_pairs() {
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19] {
        for p in experiments::theorem_primes(q, 300) {
            let r = experiments::check_main_theorem(p, q).unwrap();
            assert!(r.equal, "{r:?}");
        }
    }
}

/// For `q = 3` the unit always has index 1, so the gcd side is odd.
#[test]
fn q3_index_is_one() {
    for p in experiments::theorem_primes(3, 400) {
        assert_eq!(experiments::check_main_theorem(p, 3).unwrap().lhs, 1);
    }
}

#[test]
fn prediction_counts_match_enumeration_by_norm() {
    // Candidates are the norm -1 elements: q + 1 per field.
    for q in [3u64, 5, 7, 11, 13, 17, 19] {
        let classes: Vec<u64> = (1..q).filter(|&r| arith::jacobi(r as i64, q) == -1).collect();
        let mut by_norm = std::collections::BTreeMap::new();
        for &class in &classes {
            let ring = QuadRing::for_residue(class, q).unwrap();
            for e in ring.elements().filter(|e| e.norm() == q - 1) {
                *by_norm.entry(quadratic::quad_index(&e, q).unwrap()).or_insert(0u64) += 1;
            }
        }
        let total: u64 = by_norm.values().sum();
        assert_eq!(total, (q + 1) * classes.len() as u64);
        let predicted = experiments::predict_distribution(q).unwrap();
        for (index, count) in by_norm {
            assert_eq!(predicted[&index], num_rational::Ratio::new(count, total), "q={q}");
        }
    }
}

#[test]
fn algebraic_period_relations() {
    use gauss_periods::ducci;
    for p in ducci::corollary_primes(61) {
        let beta = ducci::order_of_zeta_plus_one(p).unwrap();
        let group = BigUint::from(2u8).pow((p - 1) as u32) - BigUint::one();
        assert!(group.is_multiple_of(&beta));
        assert_eq!(beta, ducci::algebraic_period(p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scanned_index_divides_group_order(i in 0usize..4000, qi in 0usize..8) {
        let q = [2u64, 3, 5, 7, 11, 13, 17, 19][qi];
        let primes: Vec<u64> = arith::primes_up_to(200_000)
            .into_iter()
            .filter(|&p| p % 4 == 1 && quadratic::is_inert(p, q))
            .collect();
        let p = primes[i % primes.len()];
        let rec: ScanRecord = experiments::scan_one(p, q).unwrap();
        prop_assert_eq!((q * q - 1) % rec.index_unit, 0);
        prop_assert!(experiments::predict_distribution(q).unwrap().contains_key(&rec.index_unit));
        if q > 2 {
            prop_assert!(experiments::ik_holds(&rec));
        }
    }

    #[test]
    fn frobenius_exponentiation_matches_binary(p_idx in 0usize..4, e in 1u64..1_000_000) {
        let (p, q) = [(13u64, 2u64), (29, 2), (29, 3), (53, 5)][p_idx];
        let ctx = CycloContext::new(p, q).unwrap();
        let a = cyclo::gauss_period(&ctx).add(&CycloElem::one(&ctx)).unwrap();
        let e = BigUint::from(e);
        prop_assert_eq!(a.pow_frobenius(&e), a.pow(&e));
    }
}
