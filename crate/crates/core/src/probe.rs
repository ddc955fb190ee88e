//! Seeded random inputs for identity checks.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::poly::{Monomial, Poly, VarContext};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::superalg::{Mask, SuperElement};

/// Small nonzero rational, occasionally with an imaginary part.
pub fn scalar<R: Rng>(rng: &mut R) -> Scalar {
    let mut re = 0;
    while re == 0 {
        re = rng.gen_range(-4..=4);
    }
    let re = Scalar::ratio(re, rng.gen_range(1..=3));
    if rng.gen_ratio(1, 5) {
        &re + &(&Scalar::i() * &Scalar::from_i64(rng.gen_range(-2..=2)))
    } else {
        re
    }
}

/// Random monomial of exactly the given degree.
pub fn monomial<R: Rng>(rng: &mut R, n: usize, degree: u32) -> Monomial {
    let mut exps = alloc::vec![0u16; n];
    for _ in 0..degree {
        exps[rng.gen_range(0..n)] += 1;
    }
    Monomial::new(exps)
}

/// Homogeneous polynomial with up to `terms` terms.
pub fn homogeneous<R: Rng>(rng: &mut R, ctx: &Arc<VarContext>, degree: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(ctx);
    for _ in 0..terms {
        p.add_term(monomial(rng, ctx.len(), degree), &scalar(rng));
    }
    p
}

/// Polynomial with terms of every degree up to `max_degree`.
pub fn poly<R: Rng>(rng: &mut R, ctx: &Arc<VarContext>, max_degree: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(ctx);
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_degree);
        p.add_term(monomial(rng, ctx.len(), d), &scalar(rng));
    }
    p
}

/// Weight-zero monomials of a degree (all monomials without weights).
pub fn weight_zero_monomials(ctx: &Arc<VarContext>, degree: u32) -> Vec<Monomial> {
    Monomial::of_degree(ctx.len(), degree).into_iter().filter(|m| ctx.weight(m).iter().all(|&w| w == 0)).collect()
}

/// Homogeneous weight-zero polynomial; zero when no such monomial exists.
pub fn weight_zero<R: Rng>(rng: &mut R, ctx: &Arc<VarContext>, degree: u32, terms: usize) -> Poly {
    let pool = weight_zero_monomials(ctx, degree);
    let mut p = Poly::zero(ctx);
    for _ in 0..terms {
        if let Some(m) = pool.choose(rng) {
            p.add_term(m.clone(), &scalar(rng));
        }
    }
    p
}

/// Series whose `ν^k` coefficient is a random polynomial of degree `≤ max_degree − 2k`.
pub fn series<R: Rng>(rng: &mut R, ctx: &Arc<VarContext>, max_degree: u32, order: usize, terms: usize) -> Series {
    let coeffs = (0..=order)
        .map(|k| match max_degree.checked_sub(2 * k as u32) {
            Some(d) if rng.gen_bool(0.7) => poly(rng, ctx, d, terms),
            _ => Poly::zero(ctx),
        })
        .collect();
    Series::from_coeffs(ctx, coeffs, order)
}

/// Element with random polynomial coefficients of degree `≤ max_degree` on
/// the given masks (ν-free).
pub fn element<R: Rng>(
    rng: &mut R,
    ctx: &Arc<VarContext>,
    ell: usize,
    order: usize,
    masks: &[Mask],
    max_degree: u32,
    terms: usize,
) -> SuperElement {
    let mut x = SuperElement::zero(ctx, ell, order);
    for &m in masks {
        if rng.gen_bool(0.6) {
            x.add_term(m, &Series::from_poly(poly(rng, ctx, max_degree, terms), order), &Scalar::one());
        }
    }
    x
}

/// Like [`element`] with series coefficients.
pub fn element_series<R: Rng>(
    rng: &mut R,
    ctx: &Arc<VarContext>,
    ell: usize,
    order: usize,
    masks: &[Mask],
    max_degree: u32,
    terms: usize,
) -> SuperElement {
    let mut x = SuperElement::zero(ctx, ell, order);
    for &m in masks {
        if rng.gen_bool(0.6) {
            x.add_term(m, &series(rng, ctx, max_degree, order, terms), &Scalar::one());
        }
    }
    x
}
