mod common;

use std::sync::Arc;

use brstq_core::classical::{classical_reduction, reduced_poisson};
use brstq_core::koszul::Koszul;
use brstq_core::operator::SideConditions;
use brstq_core::poisson::{MomentMap, PoissonData};
use brstq_core::reduction::*;
use brstq_core::superalg::{all_masks, BrstAlgebra};
use brstq_core::{probe, Error, Poly, Series, SuperElement, VarContext};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 4;

struct Fixture {
    ctx: Arc<VarContext>,
    poisson: PoissonData,
    alg: BrstAlgebra,
    kz: Arc<Koszul>,
    xs: Vec<SuperElement>,
    ys: Vec<SuperElement>,
}

fn fixture((ctx, poisson, j): (Arc<VarContext>, PoissonData, MomentMap), bound: u32, seed: u64) -> Fixture {
    let ell = j.dim();
    let alg = BrstAlgebra::new(poisson.clone(), ell, N);
    let kz = Arc::new(Koszul::new(&j, bound).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ghost_masks: Vec<u32> = (0..1u32 << ell).collect();
    let ys = (0..20).map(|_| probe::element_series(&mut rng, &ctx, ell, N, &all_masks(ell), 3, 2)).collect();
    let xs = (0..20)
        .map(|_| kz.res(&probe::element_series(&mut rng, &ctx, ell, N, &ghost_masks, 3, 2)).unwrap())
        .collect();
    Fixture { ctx, poisson, alg, kz, xs, ys }
}

fn torus() -> Vec<(&'static str, Model)> {
    vec![("am", am_m2()), ("s1", s1_c4()), ("t2", t2_c4())]
}

fn ghost_free_part(x: &SuperElement) -> SuperElement {
    x.filter(|m| m == 0)
}

#[test]
fn deformed_restriction_matches_closed_form() {
    for (k, (name, sc)) in torus().into_iter().enumerate() {
        let ell = sc.2.dim() as u32;
        let f = fixture(sc, 3 + 2 * ell, 100 + k as u64);
        let def = deformed_restriction(&f.alg, &f.kz, &f.xs, &f.ys).unwrap();
        let checks = def.contraction.check(&f.xs, &f.ys);
        assert!(checks.passed(SideConditions::all()), "{name}: {checks:?}");
        for y in &f.ys {
            let r = def.res(y).unwrap();
            assert_eq!(r, def.closed_res.apply(y).unwrap(), "{name}");
            assert_eq!(r.nu_coeff(0), f.kz.res(&y.nu_coeff(0)).unwrap().nu_coeff(0), "{name}");
        }
        for a in 0..f.kz.ell() {
            let ja = f.alg.poly(f.kz.moment().component(a).clone());
            assert!(def.res(&ja).unwrap().is_zero(), "{name}");
        }
    }
}

#[test]
fn deformation_is_nontrivial() {
    let f = fixture(s1_c4(), 5, 7);
    let def = deformed_restriction(&f.alg, &f.kz, &f.xs, &f.ys).unwrap();
    // z1 J is classically in the ideal; quantum mechanically z1 ∗ J is.
    let j = f.kz.moment().component(0).clone();
    let z1 = Poly::var(&f.ctx, 0);
    let y = f.alg.poly(&z1 * &j);
    assert!(f.kz.res(&y).unwrap().is_zero());
    let r = def.res(&y).unwrap();
    assert!(!r.is_zero());
    assert!(def.res(&f.alg.star(&f.alg.poly(z1), &f.alg.poly(j))).unwrap().is_zero());
    assert!(r.nu_coeff(0).is_zero());
}

#[test]
fn quantized_representation_is_classical_on_torus_scenarios() {
    for (k, (name, sc)) in torus().into_iter().enumerate() {
        let ell = sc.2.dim() as u32;
        let f = fixture(sc, 3 + 2 * ell, 110 + k as u64);
        let def = deformed_restriction(&f.alg, &f.kz, &f.xs, &f.ys).unwrap();
        for x in &f.xs {
            let x = ghost_free_part(x);
            for a in 0..f.kz.ell() {
                let q = quantized_action(&f.alg, &f.kz, &def, a, &x).unwrap();
                assert_eq!(q, classical_action(&f.alg, &f.kz, a, &x).unwrap(), "{name}");
                // Abelian: the actions commute.
                for b in 0..f.kz.ell() {
                    let ab = quantized_action(&f.alg, &f.kz, &def, a, &quantized_action(&f.alg, &f.kz, &def, b, &x).unwrap());
                    let ba = quantized_action(&f.alg, &f.kz, &def, b, &quantized_action(&f.alg, &f.kz, &def, a, &x).unwrap());
                    assert_eq!(ab.unwrap(), ba.unwrap());
                }
            }
        }
        let inv = f.alg.poly(f.kz.normal_form(&Poly::term(&f.ctx, probe::weight_zero_monomials(&f.ctx, 2)[0].clone(), s(1))).unwrap());
        for a in 0..f.kz.ell() {
            assert!(quantized_action(&f.alg, &f.kz, &def, a, &inv).unwrap().is_zero());
        }
    }
}

#[test]
fn quantum_transfer_on_torus_scenarios() {
    for (k, (name, sc)) in torus().into_iter().enumerate() {
        let ell = sc.2.dim() as u32;
        let f = fixture(sc, 3 + 2 * ell, 120 + k as u64);
        let red = quantum_reduction(&f.alg, &f.kz, &f.xs, &f.ys).unwrap();
        let c = &red.contraction;
        let checks = c.check(&f.xs, &f.ys);
        assert!(checks.passed(SideConditions::all()), "{name}: {checks:?}");
        let classical = classical_reduction(&f.alg.at_order(0), &f.kz, &[], &[]).unwrap();
        let half = brstq_core::Scalar::ratio(1, 2);
        for y in &f.ys {
            let hy = c.h.apply(y).unwrap();
            assert_eq!(hy, red.closed_h.apply(y).unwrap(), "{name}");
            assert_eq!(hy, red.deformed.h(y).unwrap().scale(&half), "{name}");
            assert!(c.h.apply(&hy).unwrap().is_zero());
            let y0 = y.nu_coeff(0).with_order(0);
            assert_eq!(hy.nu_coeff(0).with_order(0), classical.contraction.h.apply(&y0).unwrap(), "{name}");
        }
        for x in &f.xs {
            let phi = red.phi(x).unwrap();
            assert_eq!(phi, red.closed_phi.apply(x).unwrap(), "{name}");
            assert_eq!(phi, f.kz.prol(x).unwrap(), "{name}");
            assert!(c.h.apply(&phi).unwrap().is_zero());
        }
    }
}

fn s1_pipeline() -> (Fixture, QuantumReduction, Vec<Series>) {
    let f = fixture(s1_c4(), 6, 130);
    let red = quantum_reduction(&f.alg, &f.kz, &f.xs, &f.ys).unwrap();
    let gens = invariant_generators(&f.kz, 4).unwrap().into_iter().map(|p| Series::from_poly(p, N)).collect();
    (f, red, gens)
}

#[test]
fn invariant_generators_of_s1() {
    let (ctx, _, j) = s1_c4();
    let kz = Koszul::new(&j, 6).unwrap();
    let gens = invariant_generators(&kz, 4).unwrap();
    assert_eq!(gens.len(), 17);
    assert!(gens[0] == Poly::one(&ctx));
    assert!(gens.iter().all(|g| g.is_weight_zero() && g.degree().unwrap_or(0) <= 2));
    // z1 zb1 is weight zero, z1 z2 is not.
    let z1zb1 = &Poly::var(&ctx, 0) * &Poly::var(&ctx, 4);
    assert!(gens.contains(&kz.normal_form(&z1zb1).unwrap()));
    let z1z2 = &Poly::var(&ctx, 0) * &Poly::var(&ctx, 1);
    assert!(!z1z2.is_weight_zero());
}

#[test]
fn reduced_star_basic_properties() {
    let (f, red, gens) = s1_pipeline();
    let one = Series::one(&f.ctx, N);
    for g in &gens {
        assert_eq!(red.reduced_star(g, &one).unwrap(), *g);
        assert_eq!(red.reduced_star(&one, g).unwrap(), *g);
    }
    let calg = f.alg.at_order(0);
    let phi = classical_reduction(&calg, &f.kz, &[], &[]).unwrap().closed_phi;
    for a in &gens {
        for b in &gens {
            let ab = red.reduced_star(a, b).unwrap();
            assert_eq!(ab, red.reduced_star_generic(a, b).unwrap());
            let (pa, pb) = (a.coeff(0), b.coeff(0));
            assert_eq!(*ab.coeff(0), quotient_product(&f.alg, &f.kz, pa, pb).unwrap());
            let ba = red.reduced_star(b, a).unwrap();
            let bracket = reduced_poisson(&calg, &f.kz, &phi, pa, pb).unwrap();
            assert_eq!(ab.coeff(1) - ba.coeff(1), bracket);
        }
    }
}

#[test]
fn reduced_star_is_associative_on_sample_triples() {
    let (_, red, gens) = s1_pipeline();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let t: Vec<_> = (0..3).map(|_| &gens[rng.gen_range(0..gens.len())]).collect();
        let left = red.reduced_star(&red.reduced_star(t[0], t[1]).unwrap(), t[2]).unwrap();
        let right = red.reduced_star(t[0], &red.reduced_star(t[1], t[2]).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn reduced_star_ignores_ideal_elements() {
    let (f, red, gens) = s1_pipeline();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let j = f.alg.poly(f.kz.moment().component(0).clone());
    for k in 0..20 {
        let (a, b) = (&gens[1 + k % 16], &gens[1 + (5 * k + 3) % 16]);
        let (pa, pb) = (f.kz.prol(&f.alg.series(a.clone())).unwrap(), f.kz.prol(&f.alg.series(b.clone())).unwrap());
        let u = f.alg.series(probe::series(&mut rng, &f.ctx, 2, N, 2));
        let ideal = f.alg.star(&u, &j);
        let base = red.star_of_representatives(&pa, &pb).unwrap();
        assert_eq!(red.star_of_representatives(&pa.add(&ideal), &pb).unwrap(), base);
        assert_eq!(red.star_of_representatives(&pa, &pb.add(&ideal)).unwrap(), base);
    }
}

#[test]
fn reduced_star_rejects_non_invariants() {
    let (f, red, gens) = s1_pipeline();
    let z1 = Series::from_poly(Poly::var(&f.ctx, 0), N);
    assert!(matches!(red.reduced_star(&z1, &gens[1]), Err(Error::Invariance(_))));
    assert!(matches!(red.reduced_star(&gens[1], &z1), Err(Error::Invariance(_))));
}

#[test]
fn cohomology_product() {
    let (f, red, gens) = s1_pipeline();
    let ghost = f.alg.ghost(0);
    let one = f.alg.one();
    let (a, b) = (f.alg.series(gens[2].clone()), f.alg.series(gens[5].clone()));
    assert_eq!(ghost_free_part(&red.reduced_star_cohomology(&a, &b).unwrap()), f.alg.series(red.reduced_star(&gens[2], &gens[5]).unwrap()));
    assert_eq!(red.reduced_star_cohomology(&one, &a).unwrap(), a);
    assert_eq!(red.reduced_star_cohomology(&a, &one).unwrap(), a);
    // e^1 times an invariant is closed in the abelian case.
    let ea = ghost.mul(&a);
    let prod = red.reduced_star_cohomology(&ea, &b).unwrap();
    assert!(red.d.apply(&prod).unwrap().is_zero());
    // Adding an exact term changes the product by an exact term.
    for x in f.xs.iter().take(20) {
        let c = ghost_free_part(x);
        let dc = red.d.apply(&c).unwrap();
        let shifted = red.reduced_star_cohomology(&a, &dc.add(&b)).unwrap();
        let diff = shifted.sub(&red.reduced_star_cohomology(&a, &b).unwrap());
        let w = red.exactness_witness(&a, &c).unwrap();
        assert_eq!(diff, red.d.apply(&w).unwrap());
        let shifted = red.reduced_star_cohomology(&ea, &dc.add(&b)).unwrap();
        let diff = shifted.sub(&red.reduced_star_cohomology(&ea, &b).unwrap());
        assert_eq!(diff, red.d.apply(&red.exactness_witness(&ea, &c).unwrap()).unwrap());
    }
    let z1 = f.alg.poly(Poly::var(&f.ctx, 0));
    assert!(matches!(red.reduced_star_cohomology(&z1, &b), Err(Error::Closedness(_))));
    let _ = f.poisson;
}

