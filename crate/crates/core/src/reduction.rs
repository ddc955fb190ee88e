//! Quantum reduction: the deformed restriction `res_ν`, the quantized
//! representation on the constraint surface, the transfer to the full quantum
//! BRST complex and the reduced star product on invariants.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::classical::{closed_forms, degree_zero_part, rep_action};
use crate::error::{Error, Result};
use crate::hpt::{perturb_v1, perturb_v2};
use crate::koszul::Koszul;
use crate::operator::{Contraction, Operator};
use crate::poly::{Monomial, Poly};
use crate::quantum::{quantum_operators, quantum_rep_action};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::superalg::{BrstAlgebra, SuperElement};

type Op = Operator<SuperElement, SuperElement>;

/// `(res_ν, prol, ĥ)`: the Koszul contraction perturbed by `∂_ν − ∂`.
#[derive(Clone, Debug)]
pub struct DeformedKoszul {
    pub contraction: Contraction<SuperElement, SuperElement>,
    /// `res Σ_k (−(∂_ν − ∂) h)^k`, evaluated directly.
    pub closed_res: Op,
}

impl DeformedKoszul {
    pub fn res(&self, x: &SuperElement) -> Result<SuperElement> {
        self.contraction.p.apply(x)
    }

    pub fn h(&self, x: &SuperElement) -> Result<SuperElement> {
        self.contraction.h.apply(x)
    }
}

/// Second perturbation lemma on `(𝒜[[ν]], ∂)` with `t = ∂_ν − ∂` and zero
/// perturbation downstairs.
pub fn deformed_restriction(
    alg: &BrstAlgebra,
    kz: &Arc<Koszul>,
    xs: &[SuperElement],
    ys: &[SuperElement],
) -> Result<DeformedKoszul> {
    let base = kz.contraction();
    let t = quantum_operators(alg, kz.moment()).koszul_correction;
    let zero = Operator::new("0", 1, |x: &SuperElement| Ok(x.filter(|_| false)));
    let contraction = perturb_v2(&base, &t, &zero, xs, ys)?;
    let (kz2, t2, order) = (kz.clone(), t.clone(), alg.order);
    let closed_res = Operator::new("res(id + (∂_ν - ∂)h)^-1", 0, move |x: &SuperElement| {
        let mut acc = x.clone();
        let mut term = x.clone();
        for _ in 0..order {
            term = t2.apply(&kz2.h(&term)?)?.neg();
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        kz2.res(&acc)
    });
    Ok(DeformedKoszul { contraction, closed_res })
}

/// `𝕃^z_a f = res_ν 𝕃_a prol f`.
pub fn quantized_action(
    alg: &BrstAlgebra,
    kz: &Koszul,
    def: &DeformedKoszul,
    a: usize,
    f: &SuperElement,
) -> Result<SuperElement> {
    def.res(&quantum_rep_action(alg, kz.moment(), a, &kz.prol(f)?)?)
}

/// `L^z_a f = res L_a prol f`, coefficientwise in `ν`.
pub fn classical_action(alg: &BrstAlgebra, kz: &Koszul, a: usize, f: &SuperElement) -> Result<SuperElement> {
    kz.res(&rep_action(alg, kz.moment(), a, &kz.prol(f)?))
}

/// Fails with an invariance error naming the first nonzero `𝕃^z_a f`.
pub fn certify_quantum_invariant(alg: &BrstAlgebra, kz: &Koszul, def: &DeformedKoszul, f: &SuperElement) -> Result<()> {
    for a in 0..kz.ell() {
        let r = quantized_action(alg, kz, def, a, f)?;
        if !r.is_zero() {
            return Err(Error::Invariance(format!("quantized L_{} ({}) = {r}", a + 1, f.to_source())));
        }
    }
    Ok(())
}

/// The full pipeline for one scenario.
#[derive(Clone, Debug)]
pub struct QuantumReduction {
    pub alg: BrstAlgebra,
    pub koszul: Arc<Koszul>,
    pub deformed: DeformedKoszul,
    /// Contraction of `(C(𝔤, C(Z)[[ν]]), 𝔡)` and `(𝒜[[ν]], D_ν)`.
    pub contraction: Contraction<SuperElement, SuperElement>,
    pub closed_h: Op,
    pub closed_phi: Op,
    /// `𝔡 = res_ν δ_ν prol`.
    pub d: Op,
}

/// Builds `res_ν` and then perturbs `(res_ν, prol, ĥ/2)` of `(𝒜[[ν]], 2∂_ν)` by
/// `δ_ν` with the first lemma.
pub fn quantum_reduction(
    alg: &BrstAlgebra,
    kz: &Arc<Koszul>,
    xs: &[SuperElement],
    ys: &[SuperElement],
) -> Result<QuantumReduction> {
    let deformed = deformed_restriction(alg, kz, xs, ys)?;
    let ops = quantum_operators(alg, kz.moment());
    let dc = &deformed.contraction;
    let base = Contraction {
        p: dc.p.clone(),
        i: dc.i.clone(),
        h: dc.h.scaled(Scalar::ratio(1, 2)).named("ĥ/2"),
        d_x: dc.d_x.clone(),
        d_y: ops.koszul.scaled(Scalar::from_i64(2)).named("2∂_ν"),
        side: dc.side,
    };
    let (p, i, delta) = (dc.p.clone(), dc.i.clone(), ops.ce.clone());
    let d = Operator::new("𝔡", 1, move |x: &SuperElement| p.apply(&delta.apply(&i.apply(x)?)?)).raising(kz.ell());
    let contraction = perturb_v1(&base, &ops.ce, &d, xs, ys)?;
    let (closed_h, closed_phi) = closed_forms(kz, &base.h, &ops.ce, &d);
    Ok(QuantumReduction { alg: alg.clone(), koszul: kz.clone(), deformed, contraction, closed_h, closed_phi, d })
}

impl QuantumReduction {
    pub fn phi(&self, x: &SuperElement) -> Result<SuperElement> {
        self.contraction.i.apply(x)
    }

    pub fn res(&self, x: &SuperElement) -> Result<SuperElement> {
        self.deformed.res(x)
    }

    /// `res_ν(F ∗ G)` for ambient representatives.
    pub fn star_of_representatives(&self, f: &SuperElement, g: &SuperElement) -> Result<SuperElement> {
        self.res(&self.alg.star(f, g))
    }

    /// `f ∗ g = res_ν(prol f ∗ prol g)` on certified invariants.
    pub fn reduced_star(&self, f: &Series, g: &Series) -> Result<Series> {
        let (x, y) = (self.alg.series(f.clone()), self.alg.series(g.clone()));
        for z in [&x, &y] {
            certify_quantum_invariant(&self.alg, &self.koszul, &self.deformed, z)?;
        }
        let r = self.star_of_representatives(&self.koszul.prol(&x)?, &self.koszul.prol(&y)?)?;
        Ok(ghost_free(&r))
    }

    /// `res_ν(Φ_ν f ∗ Φ_ν g)`, the same product through the transferred
    /// contraction.
    pub fn reduced_star_generic(&self, f: &Series, g: &Series) -> Result<Series> {
        let (x, y) = (self.alg.series(f.clone()), self.alg.series(g.clone()));
        for z in [&x, &y] {
            certify_quantum_invariant(&self.alg, &self.koszul, &self.deformed, z)?;
        }
        Ok(ghost_free(&self.star_of_representatives(&self.phi(&x)?, &self.phi(&y)?)?))
    }

    /// `[a] ∗ [b] = [res_ν(Φ_ν a ∗ Φ_ν b)]` on `𝔡`-closed cochains.
    pub fn reduced_star_cohomology(&self, a: &SuperElement, b: &SuperElement) -> Result<SuperElement> {
        for (name, z) in [("left", a), ("right", b)] {
            let dz = self.d.apply(z)?;
            if !dz.is_zero() {
                return Err(Error::Closedness(format!("{name} factor {}: d = {dz}", z.to_source())));
            }
        }
        self.star_of_representatives(&self.phi(a)?, &self.phi(b)?)
    }

    /// For closed `a`: `w` with `[a] ∗ [𝔡c] = 𝔡w`, namely
    /// `w = (−1)^{|a|} res_ν(Φ_ν a ∗ Φ_ν c)`.
    pub fn exactness_witness(&self, a: &SuperElement, c: &SuperElement) -> Result<SuperElement> {
        let w = self.star_of_representatives(&self.phi(a)?, &self.phi(c)?)?;
        Ok(if a.degree().unwrap_or(0) % 2 != 0 { w.neg() } else { w })
    }
}

/// The ghost-free part of a cochain.
pub fn ghost_free(x: &SuperElement) -> Series {
    x.coeff(0).cloned().unwrap_or_else(|| Series::zero(x.ctx(), x.order()))
}

/// `1` together with normal forms of weight-zero monomials of degree
/// `1..=max_degree` that are not products of two lower weight-zero monomials.
/// Zero normal forms are dropped.
pub fn invariant_generators(kz: &Koszul, max_degree: u32) -> Result<Vec<Poly>> {
    let ctx = kz.ctx();
    let zero_weight = |m: &Monomial| ctx.weight(m).iter().all(|&w| w == 0);
    let mut found: Vec<Monomial> = Vec::new();
    let mut out = alloc::vec![Poly::constant(ctx, Scalar::one())];
    for deg in 1..=max_degree {
        for m in Monomial::of_degree(ctx.len(), deg).into_iter().filter(|m| zero_weight(m)) {
            if found.iter().any(|g| m.div(g).is_some()) {
                continue;
            }
            found.push(m.clone());
            let nf = kz.normal_form(&Poly::term(ctx, m, Scalar::one()))?;
            if !nf.is_zero() {
                out.push(nf);
            }
        }
    }
    Ok(out)
}

/// `res(fg)`: the commutative product in the quotient model.
pub fn quotient_product(alg: &BrstAlgebra, kz: &Koszul, f: &Poly, g: &Poly) -> Result<Poly> {
    Ok(degree_zero_part(&kz.res(&alg.poly(f * g))?))
}
