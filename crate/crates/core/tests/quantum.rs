mod common;

use std::sync::Arc;

use brstq_core::classical::{brst_diff, ce_codifferential, classical_charge};
use brstq_core::koszul::koszul_diff;
use brstq_core::quantum::*;
use brstq_core::superalg::{all_masks, BrstAlgebra, CliffordConvention};
use brstq_core::{probe, Series, SuperElement, VarContext};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 4;

fn scenarios() -> Vec<(&'static str, Model)> {
    vec![("am", am_m2()), ("s1", s1_c4()), ("t2", t2_c4()), ("n2", commuting(2)), ("n3", commuting(3))]
}

fn probes(ctx: &Arc<VarContext>, ell: usize, order: usize, count: usize, seed: u64) -> Vec<SuperElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks = all_masks(ell);
    (0..count).map(|_| probe::element_series(&mut rng, ctx, ell, order, &masks, 3, 2)).collect()
}

#[test]
fn abelian_quantum_charge_is_classical() {
    let (_, poisson, j) = s1_c4();
    let alg = BrstAlgebra::new(poisson, 1, N);
    assert_eq!(quantum_charge(&alg, &j), classical_charge(&alg, &j));
}

#[test]
fn so3_is_unimodular_and_keeps_cubic_term() {
    let (_, poisson, j) = commuting(3);
    assert!(j.lie.is_unimodular());
    let alg = BrstAlgebra::new(poisson, 3, N);
    let theta = quantum_charge(&alg, &j);
    assert_eq!(theta, classical_charge(&alg, &j));
    assert!(theta.coeff(0b100_011).is_some());
    assert!(op_u(&alg, &j, &alg.ghost(0)).is_zero());
}

#[test]
fn koszul_operators_on_generators() {
    let (ctx, poisson, j) = t2_c4();
    let alg = BrstAlgebra::new(poisson, 2, N);
    for a in 0..2 {
        let ja = alg.poly(j.components[a].clone());
        assert_eq!(op_r(&alg, &j, &alg.antighost(a)), ja);
        assert_eq!(quantum_koszul(&alg, &j, &alg.antighost(a)), ja);
    }
    // Abelian: ∂_ν(f e_a) = f ∗ J_a.
    let f = probe::poly(&mut ChaCha8Rng::seed_from_u64(3), &ctx, 3, 3);
    let fe = alg.element(0b0100, f.clone());
    let want = alg.poly(f).mul(&alg.zero().add(&alg.one()));
    let want = alg.star(&want, &alg.poly(j.components[0].clone()));
    assert_eq!(quantum_koszul(&alg, &j, &fe), want);
    assert!(op_q(&alg, &j, &fe).is_zero() && op_u(&alg, &j, &fe).is_zero());
}

#[test]
fn splitting_holds_in_all_scenarios() {
    for (k, (name, (ctx, poisson, j))) in scenarios().into_iter().enumerate() {
        let ell = j.dim();
        let alg = BrstAlgebra::new(poisson, ell, N);
        let theta = quantum_charge(&alg, &j);
        let split = check_quantum_splitting(&alg, &j, &theta, &probes(&ctx, ell, N, 12, 40 + k as u64));
        for (label, o) in split.outcomes() {
            assert!(o.passed, "{name}: {label}: {:?}", o.witness);
        }
    }
}

#[test]
fn broken_clifford_sign_is_detected() {
    let (ctx, poisson, j) = commuting(3);
    let alg = BrstAlgebra::new(poisson, 3, N).with_clifford(CliffordConvention::BrokenSign);
    let theta = quantum_charge(&alg, &j);
    let split = check_quantum_splitting(&alg, &j, &theta, &probes(&ctx, 3, N, 4, 50));
    assert!(!split.passed());
}

#[test]
fn classical_limits() {
    for (k, (name, (ctx, poisson, j))) in scenarios().into_iter().enumerate() {
        let ell = j.dim();
        let alg = BrstAlgebra::new(poisson, ell, N);
        let classical = alg.at_order(0);
        let theta = quantum_charge(&alg, &j);
        let theta0 = classical_charge(&classical, &j);
        for x in probes(&ctx, ell, N, 6, 60 + k as u64) {
            let x0 = x.nu_coeff(0).with_order(0);
            let lim = |y: SuperElement| y.nu_coeff(0).with_order(0);
            assert_eq!(lim(quantum_koszul(&alg, &j, &x)), koszul_diff(&j, &x0), "{name}");
            assert_eq!(lim(quantum_ce(&alg, &j, &x).unwrap()), ce_codifferential(&classical, &j, &x0), "{name}");
            assert_eq!(lim(quantum_brst_diff(&alg, &theta, &x).unwrap()), brst_diff(&classical, &theta0, &x0), "{name}");
        }
    }
}

#[test]
fn strong_invariance_makes_quantum_ce_classical() {
    for (k, (name, (ctx, poisson, j))) in scenarios().into_iter().enumerate() {
        let ell = j.dim();
        let alg = BrstAlgebra::new(poisson, ell, N);
        for x in probes(&ctx, ell, N, 6, 70 + k as u64) {
            assert_eq!(quantum_ce(&alg, &j, &x).unwrap(), ce_codifferential(&alg, &j, &x), "{name}");
        }
        assert!(quantum_ce(&alg, &j, &alg.one()).unwrap().is_zero());
    }
}

#[test]
fn quantum_koszul_is_left_module_map() {
    for (k, (name, (ctx, poisson, j))) in scenarios().into_iter().enumerate() {
        let ell = j.dim();
        let alg = BrstAlgebra::new(poisson, ell, N);
        let mut rng = ChaCha8Rng::seed_from_u64(80 + k as u64);
        for x in probes(&ctx, ell, N, 6, 90 + k as u64) {
            let f = alg.series(probe::series(&mut rng, &ctx, 3, N, 2));
            let lhs = quantum_koszul(&alg, &j, &alg.star(&f, &x));
            let rhs = alg.star(&f, &quantum_koszul(&alg, &j, &x));
            assert_eq!(lhs, rhs, "{name}");
        }
    }
}

#[test]
fn brst_differential_of_antighost_has_expected_classical_limit() {
    let (_, poisson, j) = commuting(3);
    let alg = BrstAlgebra::new(poisson, 3, N);
    let theta = quantum_charge(&alg, &j);
    let d = quantum_brst_diff(&alg, &theta, &alg.antighost(0)).unwrap();
    let d0 = d.nu_coeff(0).with_order(0);
    let classical = alg.at_order(0);
    assert_eq!(d0, brst_diff(&classical, &classical_charge(&classical, &j), &classical.antighost(0)));
    assert_eq!(d0.coeff(0), Some(&Series::from_poly(j.components[0].scale(&s(2)), 0)));
}
