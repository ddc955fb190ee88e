#![allow(dead_code)]

use std::sync::Arc;

use brstq_core::lie::LieAlgebraData;
use brstq_core::poisson::{MomentMap, PoissonData};
use brstq_core::{Poly, Scalar, VarContext};

/// Coordinates, Poisson structure and moment map of one example.
pub type Model = (Arc<VarContext>, PoissonData, MomentMap);

pub fn s(n: i64) -> Scalar {
    Scalar::from_i64(n)
}

pub fn r(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

/// `(q, p)` with `{q, p} = 1` and the given linear moment map components.
pub fn plane(components: &[usize]) -> Model {
    let ctx = VarContext::new(["q", "p"]);
    let poisson = PoissonData::from_pairs(&ctx, &[(0, 1, s(1))]).unwrap();
    let j = components.iter().map(|&i| Poly::var(&ctx, i)).collect::<Vec<_>>();
    let lie = LieAlgebraData::abelian(j.len());
    (ctx, poisson, MomentMap::new(lie, j).unwrap())
}

/// `ℂ^4` with coordinates `z1..z4, zb1..zb4`, `{z_k, zb_k} = −2i` and one
/// weight row per torus factor (weights of `zb` are the negatives).
pub fn c4(z_weights: &[[i64; 4]], components: &[[Scalar; 4]]) -> Model {
    let names = ["z1", "z2", "z3", "z4", "zb1", "zb2", "zb3", "zb4"];
    let rows = z_weights.iter().map(|w| w.iter().copied().chain(w.iter().map(|x| -x)).collect()).collect();
    let ctx = VarContext::with_weights(names, rows).unwrap();
    let pairs: Vec<_> = (0..4).map(|k| (k, k + 4, &s(-2) * &Scalar::i())).collect();
    let poisson = PoissonData::from_pairs(&ctx, &pairs).unwrap();
    let j = components
        .iter()
        .map(|cs| {
            let mut p = Poly::zero(&ctx);
            for (k, c) in cs.iter().enumerate() {
                p.add_scaled(&(&Poly::var(&ctx, k) * &Poly::var(&ctx, k + 4)), c);
            }
            p
        })
        .collect::<Vec<_>>();
    let lie = LieAlgebraData::abelian(j.len());
    (ctx.clone(), poisson, MomentMap::new(lie, j).unwrap())
}

/// S¹ acting with weights (1, 1, −1, −1).
pub fn s1_c4() -> Model {
    c4(&[[1, 1, -1, -1]], &[[r(-1, 2), r(-1, 2), r(1, 2), r(1, 2)]])
}

/// T² with α = −1, β = 1.
pub fn t2_c4() -> Model {
    c4(
        &[[-1, 0, 1, 0], [1, -1, 0, 1]],
        &[[r(1, 2), s(0), r(-1, 2), s(0)], [r(-1, 2), r(1, 2), s(0), r(-1, 2)]],
    )
}

/// Pairs of symmetric `n×n` matrices `(Q, P)` with the trace pairing and the
/// `so(n)` moment map `J(X) = −tr(X[Q, P])`; for `n = 3` the basis
/// `E_23 − E_32, E_31 − E_13, E_12 − E_21` has `f_ab^c = ε_abc`.
pub fn commuting(n: usize) -> Model {
    let mut names = Vec::new();
    let mut idx = std::collections::BTreeMap::new();
    for (prefix, off) in [("q", 0), ("p", 1)] {
        for i in 0..n {
            for k in i..n {
                idx.insert((off, i, k), names.len());
                names.push(format!("{prefix}{}{}", i + 1, k + 1));
            }
        }
    }
    let ctx = VarContext::new(names);
    let half = n * (n + 1) / 2;
    let pairs: Vec<_> = idx
        .iter()
        .filter(|((off, _, _), _)| *off == 0)
        .map(|(&(_, i, k), &v)| (v, v + half, if i == k { s(1) } else { r(1, 2) }))
        .collect();
    let poisson = PoissonData::from_pairs(&ctx, &pairs).unwrap();
    let entry = |off: usize, i: usize, k: usize| Poly::var(&ctx, idx[&(off, i.min(k), i.max(k))]);
    let comm: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    (0..n).fold(Poly::zero(&ctx), |acc, m| {
                        &acc + &(&(&entry(0, i, m) * &entry(1, m, k)) - &(&entry(1, i, m) * &entry(0, m, k)))
                    })
                })
                .collect()
        })
        .collect();
    // X = E_ik − E_ki gives −tr(X C) = −(C_ki − C_ik).
    let gen = |i: usize, k: usize| &comm[i][k] - &comm[k][i];
    let (j, lie) = if n == 2 {
        (vec![gen(0, 1)], LieAlgebraData::abelian(1))
    } else {
        (vec![gen(1, 2), gen(2, 0), gen(0, 1)], LieAlgebraData::so3())
    };
    (ctx, poisson, MomentMap::new(lie, j).unwrap())
}

/// Zero total angular momentum of two planar particles in the coordinates
/// `a = q¹ + i q²`, `b = p₁ + i p₂` (and conjugates `ab`, `bb`), where the
/// rotation is diagonal: `J = (i/2) Σ (a_k bb_k − ab_k b_k)`.
pub fn am_m2() -> Model {
    let names = ["a1", "a2", "b1", "b2", "ab1", "ab2", "bb1", "bb2"];
    let ctx = VarContext::with_weights(names, vec![vec![1, 1, 1, 1, -1, -1, -1, -1]]).unwrap();
    let pairs: Vec<_> = (0..2).flat_map(|k| [(k, k + 6, s(2)), (k + 4, k + 2, s(2))]).collect();
    let poisson = PoissonData::from_pairs(&ctx, &pairs).unwrap();
    let v = |i: usize| Poly::var(&ctx, i);
    let mut j = Poly::zero(&ctx);
    for k in 0..2 {
        j = &j + &(&(&v(k) * &v(k + 6)) - &(&v(k + 4) * &v(k + 2)));
    }
    let j = j.scale(&(&Scalar::i() * &r(1, 2)));
    (ctx, poisson, MomentMap::new(LieAlgebraData::abelian(1), vec![j]).unwrap())
}
