//! The ghost/antighost super algebra over truncated series.
//!
//! A ghost/antighost monomial is a bit mask: bit `a` is the ghost `e^a`
//! (degree +1), bit `ℓ + a` the antighost `e_a` (degree −1).  Stored terms
//! are always in canonical order, ascending bit index (ghosts before
//! antighosts); reordering signs live in the coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::check::{Measure, ResidualSummary};
use crate::poisson::PoissonData;
use crate::poly::{same_ctx, Poly, VarContext};
use crate::scalar::Scalar;
use crate::series::Series;

pub use crate::lie::LieAlgebraData;

pub type Mask = u32;

fn below(mask: Mask, bit: u32) -> u32 {
    (mask & ((1u32 << bit) - 1)).count_ones()
}

fn above(mask: Mask, bit: u32) -> u32 {
    (mask >> (bit + 1)).count_ones()
}

fn sign(odd: bool) -> Scalar {
    if odd {
        Scalar::from_i64(-1)
    } else {
        Scalar::one()
    }
}

/// Sign of `x·y` brought to canonical order, `None` when they share a generator.
pub fn mask_product_sign(x: Mask, y: Mask) -> Option<bool> {
    if x & y != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = y;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += above(x, j);
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// Left derivation removing `bit`: sign `(−1)^{#generators before it}`.
pub fn left_remove(mask: Mask, bit: u32) -> Option<(Mask, bool)> {
    (mask & (1 << bit) != 0).then(|| (mask & !(1 << bit), below(mask, bit) % 2 == 1))
}

/// Right derivation removing `bit`: sign `(−1)^{#generators after it}`.
pub fn right_remove(mask: Mask, bit: u32) -> Option<(Mask, bool)> {
    (mask & (1 << bit) != 0).then(|| (mask & !(1 << bit), above(mask, bit) % 2 == 1))
}

/// Element of the BRST algebra: series coefficients on canonical
/// ghost/antighost monomials.
#[derive(Clone, Debug)]
pub struct SuperElement {
    ctx: Arc<VarContext>,
    ell: usize,
    order: usize,
    terms: BTreeMap<Mask, Series>,
}

impl PartialEq for SuperElement {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.order == other.order && same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for SuperElement {}

impl SuperElement {
    pub fn zero(ctx: &Arc<VarContext>, ell: usize, order: usize) -> Self {
        assert!(2 * ell <= 30, "Lie algebra dimension too large");
        SuperElement { ctx: ctx.clone(), ell, order, terms: BTreeMap::new() }
    }

    /// `s · monomial(mask)`.
    pub fn term(ctx: &Arc<VarContext>, ell: usize, mask: Mask, s: Series) -> Self {
        let order = s.order();
        let mut x = SuperElement::zero(ctx, ell, order);
        x.add_term(mask, &s, &Scalar::one());
        x
    }

    pub fn from_series(s: Series, ell: usize) -> Self {
        let ctx = s.ctx().clone();
        SuperElement::term(&ctx, ell, 0, s)
    }

    pub fn from_poly(p: Poly, ell: usize, order: usize) -> Self {
        SuperElement::from_series(Series::from_poly(p, order), ell)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Mask, Series> {
        &self.terms
    }

    pub fn coeff(&self, mask: Mask) -> Option<&Series> {
        self.terms.get(&mask)
    }

    pub fn ghost_bit(&self, a: usize) -> Mask {
        1 << a
    }

    pub fn antighost_bit(&self, a: usize) -> Mask {
        1 << (self.ell + a)
    }

    pub fn ghost_mask(&self) -> Mask {
        (1 << self.ell) - 1
    }

    /// Number of ghosts and antighosts in a monomial.
    pub fn mask_bidegree(&self, mask: Mask) -> (u32, u32) {
        ((mask & self.ghost_mask()).count_ones(), (mask >> self.ell).count_ones())
    }

    pub fn mask_degree(&self, mask: Mask) -> i32 {
        let (g, a) = self.mask_bidegree(mask);
        g as i32 - a as i32
    }

    /// Total degree if homogeneous (zero counts as degree 0).
    pub fn degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|&m| self.mask_degree(m));
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Series::is_zero)
    }

    /// Component of total degree `deg`.
    pub fn degree_part(&self, deg: i32) -> SuperElement {
        self.filter(|m| self.mask_degree(m) == deg)
    }

    pub fn filter(&self, keep: impl Fn(Mask) -> bool) -> SuperElement {
        SuperElement {
            ctx: self.ctx.clone(),
            ell: self.ell,
            order: self.order,
            terms: self.terms.iter().filter(|(m, _)| keep(**m)).map(|(m, s)| (*m, s.clone())).collect(),
        }
    }

    pub fn same_shape(&self, other: &SuperElement) -> bool {
        self.ell == other.ell && self.order == other.order && same_ctx(&self.ctx, &other.ctx)
    }

    fn empty_like(&self) -> SuperElement {
        SuperElement::zero(&self.ctx, self.ell, self.order)
    }

    /// `self += c · s · monomial(mask)`.
    pub fn add_term(&mut self, mask: Mask, s: &Series, c: &Scalar) {
        assert_eq!(s.order(), self.order, "truncation orders differ");
        if c.is_zero() || s.is_identically_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(t) => {
                t.add_scaled(s, c);
                if t.is_identically_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, s.scale(c));
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SuperElement, c: &Scalar) {
        assert!(self.same_shape(other), "incompatible super elements");
        for (m, s) in &other.terms {
            self.add_term(*m, s, c);
        }
    }

    pub fn add(&self, other: &SuperElement) -> SuperElement {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &SuperElement) -> SuperElement {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_i64(-1));
        out
    }

    pub fn neg(&self) -> SuperElement {
        self.scale(&Scalar::from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> SuperElement {
        let mut out = self.empty_like();
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, s)| (*m, s.scale(c))).collect();
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Series) -> Series) -> SuperElement {
        let mut out = self.empty_like();
        for (m, s) in &self.terms {
            out.add_term(*m, &f(s), &Scalar::one());
        }
        out
    }

    pub fn try_map_coeffs<E>(&self, f: impl Fn(&Series) -> Result<Series, E>) -> Result<SuperElement, E> {
        let mut out = self.empty_like();
        for (m, s) in &self.terms {
            out.add_term(*m, &f(s)?, &Scalar::one());
        }
        Ok(out)
    }

    /// Same element truncated (or zero-padded) to another ν-order.
    pub fn with_order(&self, order: usize) -> SuperElement {
        let mut out = SuperElement::zero(&self.ctx, self.ell, order);
        for (m, s) in &self.terms {
            out.add_term(*m, &s.with_order(order), &Scalar::one());
        }
        out
    }

    /// Coefficient of ν^k as an element with only that ν-power (kept in slot 0).
    pub fn nu_coeff(&self, k: usize) -> SuperElement {
        self.map_coeffs(|s| Series::from_poly(s.coeff(k).clone(), self.order))
    }

    /// Smallest reliable ν-order among the coefficients.
    pub fn reliable_order(&self) -> usize {
        self.terms.values().map(Series::reliable_order).min().unwrap_or(self.order)
    }

    /// Supercommutative product μ.
    pub fn mul(&self, other: &SuperElement) -> SuperElement {
        assert!(self.same_shape(other), "incompatible super elements");
        let mut out = self.empty_like();
        for (mx, f) in &self.terms {
            for (my, g) in &other.terms {
                let Some(odd) = mask_product_sign(*mx, *my) else { continue };
                out.add_term(mx | my, &(f * g), &sign(odd));
            }
        }
        out
    }

    /// Left multiplication by a (canonical) generator monomial.
    pub fn left_mul_mask(&self, mask: Mask, c: &Scalar) -> SuperElement {
        let mut out = self.empty_like();
        for (m, s) in &self.terms {
            let Some(odd) = mask_product_sign(mask, *m) else { continue };
            out.add_term(mask | m, s, &(c * &sign(odd)));
        }
        out
    }

    fn derive(&self, bit: u32, right: bool) -> SuperElement {
        let mut out = self.empty_like();
        for (m, s) in &self.terms {
            let hit = if right { right_remove(*m, bit) } else { left_remove(*m, bit) };
            if let Some((rest, odd)) = hit {
                out.add_term(rest, s, &sign(odd));
            }
        }
        out
    }

    /// `i^a`: left derivation removing the antighost `e_a`.
    pub fn i_anti(&self, a: usize) -> SuperElement {
        self.derive((self.ell + a) as u32, false)
    }

    /// `i_a`: left derivation removing the ghost `e^a`.
    pub fn i_ghost(&self, a: usize) -> SuperElement {
        self.derive(a as u32, false)
    }

    /// Right derivative with respect to the antighost `e_a`.
    pub fn ri_anti(&self, a: usize) -> SuperElement {
        self.derive((self.ell + a) as u32, true)
    }

    /// Right derivative with respect to the ghost `e^a`.
    pub fn ri_ghost(&self, a: usize) -> SuperElement {
        self.derive(a as u32, true)
    }

    /// Applies a coefficient-wise linear map.
    pub fn map_polys(&self, f: impl Fn(&Poly) -> Poly) -> SuperElement {
        self.map_coeffs(|s| s.map(&f))
    }

    pub fn mask_name(&self, mask: Mask) -> String {
        if mask == 0 {
            return "1".into();
        }
        let mut out = String::new();
        for bit in 0..(2 * self.ell) as u32 {
            if mask & (1 << bit) != 0 {
                let a = bit as usize;
                if a < self.ell {
                    out.push_str(&alloc::format!("e^{}", a + 1));
                } else {
                    out.push_str(&alloc::format!("e_{}", a - self.ell + 1));
                }
            }
        }
        out
    }

    pub fn to_source(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(m, s)| alloc::format!("[{}]*{}", s, self.mask_name(*m))).collect();
        parts.join(" + ")
    }
}

impl fmt::Display for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_source())
    }
}

impl Measure for SuperElement {
    fn is_null(&self) -> bool {
        self.is_zero()
    }

    fn summary(&self) -> ResidualSummary {
        let mut s = ResidualSummary::default();
        for c in self.terms.values() {
            s.merge(c.summary());
        }
        s
    }

    fn describe(&self) -> String {
        for (m, s) in &self.terms {
            if !s.is_zero() {
                return alloc::format!("{} term, {}", self.mask_name(*m), s.describe());
            }
        }
        "0".into()
    }
}

/// Sign convention of the graded tensor product in the Clifford exponential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CliffordConvention {
    /// `(i^a ⊗ i_a)(u ⊗ v) = (−1)^{|u|} i^a u ⊗ i_a v`.
    #[default]
    Koszul,
    /// Drops the Koszul sign; only used to show that the checks detect it.
    BrokenSign,
}

/// Ambient data for products on the BRST algebra.
#[derive(Clone, Debug)]
pub struct BrstAlgebra {
    pub poisson: PoissonData,
    pub ell: usize,
    pub order: usize,
    pub clifford: CliffordConvention,
}

/// Normalization of the ghost pairing: `{e^a, e_b} = 2δ^a_b`.
const GHOST_PAIRING: i64 = 2;

impl BrstAlgebra {
    pub fn new(poisson: PoissonData, ell: usize, order: usize) -> Self {
        BrstAlgebra { poisson, ell, order, clifford: CliffordConvention::Koszul }
    }

    pub fn with_clifford(mut self, clifford: CliffordConvention) -> Self {
        self.clifford = clifford;
        self
    }

    /// Same algebra truncated at another order.
    pub fn at_order(&self, order: usize) -> BrstAlgebra {
        BrstAlgebra { order, ..self.clone() }
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        self.poisson.ctx()
    }

    pub fn zero(&self) -> SuperElement {
        SuperElement::zero(self.ctx(), self.ell, self.order)
    }

    pub fn one(&self) -> SuperElement {
        self.poly(Poly::one(self.ctx()))
    }

    pub fn poly(&self, p: Poly) -> SuperElement {
        SuperElement::from_poly(p, self.ell, self.order)
    }

    pub fn series(&self, s: Series) -> SuperElement {
        SuperElement::from_series(s, self.ell)
    }

    /// `p · monomial(mask)`.
    pub fn element(&self, mask: Mask, p: Poly) -> SuperElement {
        SuperElement::term(self.ctx(), self.ell, mask, Series::from_poly(p, self.order))
    }

    pub fn ghost(&self, a: usize) -> SuperElement {
        self.element(1 << a, Poly::one(self.ctx()))
    }

    pub fn antighost(&self, a: usize) -> SuperElement {
        self.element(1 << (self.ell + a), Poly::one(self.ctx()))
    }

    /// Pairing part of the graded Poisson bracket on generator monomials.
    fn ghost_bracket(&self, x: Mask, y: Mask) -> Vec<(Mask, Scalar)> {
        let mut out = Vec::new();
        let k = Scalar::from_i64(GHOST_PAIRING);
        for a in 0..self.ell {
            let g = a as u32;
            let t = (self.ell + a) as u32;
            for (bx, by) in [(g, t), (t, g)] {
                let (Some((rx, sx)), Some((ry, sy))) = (right_remove(x, bx), left_remove(y, by)) else { continue };
                let Some(sp) = mask_product_sign(rx, ry) else { continue };
                out.push((rx | ry, &k * &sign(sx ^ sy ^ sp)));
            }
        }
        out
    }

    /// Even graded Poisson bracket: the Poisson bracket on coefficients plus
    /// the ghost/antighost pairing.
    pub fn graded_poisson(&self, x: &SuperElement, y: &SuperElement) -> SuperElement {
        let mut out = x.empty_like();
        for (mx, f) in &x.terms {
            for (my, g) in &y.terms {
                if let Some(odd) = mask_product_sign(*mx, *my) {
                    let fg = f.convolve(g, |a, b| self.poisson.bracket(a, b));
                    out.add_term(mx | my, &fg, &sign(odd));
                }
                let pairs = self.ghost_bracket(*mx, *my);
                if !pairs.is_empty() {
                    let prod = f * g;
                    for (m, c) in pairs {
                        out.add_term(m, &prod, &c);
                    }
                }
            }
        }
        out
    }

    /// Expansion of `μ ∘ exp(−2ν Σ_a i^a ⊗ i_a)` on two generator monomials:
    /// `(monomial, coefficient, ν-power)` triples.
    pub fn clifford_pairs(&self, x: Mask, y: Mask) -> Vec<(Mask, Scalar, usize)> {
        let mut out = Vec::new();
        let mut state: BTreeMap<(Mask, Mask), Scalar> = BTreeMap::new();
        state.insert((x, y), Scalar::one());
        let mut k = 0usize;
        let mut factor = Scalar::one();
        while !state.is_empty() && k <= self.order {
            for ((u, v), c) in &state {
                if let Some(odd) = mask_product_sign(*u, *v) {
                    out.push((u | v, &(c * &factor) * &sign(odd), k));
                }
            }
            k += 1;
            factor = &factor * &Scalar::ratio(-2, k as i64);
            let mut next: BTreeMap<(Mask, Mask), Scalar> = BTreeMap::new();
            for ((u, v), c) in &state {
                let parity = u.count_ones() % 2 == 1 && self.clifford == CliffordConvention::Koszul;
                for a in 0..self.ell {
                    let Some((u2, s1)) = left_remove(*u, (self.ell + a) as u32) else { continue };
                    let Some((v2, s2)) = left_remove(*v, a as u32) else { continue };
                    let e = next.entry((u2, v2)).or_insert_with(Scalar::zero);
                    *e += &(c * &sign(parity ^ s1 ^ s2));
                }
            }
            next.retain(|_, c| !c.is_zero());
            state = next;
        }
        out.retain(|(_, c, _)| !c.is_zero());
        out
    }

    /// Clifford product of coefficient-free parts, coefficients multiplied pointwise.
    pub fn clifford_mul(&self, x: &SuperElement, y: &SuperElement) -> SuperElement {
        self.combine(x, y, |f, g| f * g)
    }

    /// Graded star product `(f x) ∗ (g y) = (f ⋆ g)(x · y)`.
    pub fn star(&self, x: &SuperElement, y: &SuperElement) -> SuperElement {
        self.combine(x, y, |f, g| self.poisson.star_series(f, g))
    }

    fn combine(&self, x: &SuperElement, y: &SuperElement, coeff: impl Fn(&Series, &Series) -> Series) -> SuperElement {
        assert!(x.same_shape(y), "incompatible super elements");
        let mut out = x.empty_like();
        for (mx, f) in &x.terms {
            for (my, g) in &y.terms {
                let pairs = self.clifford_pairs(*mx, *my);
                if pairs.is_empty() {
                    continue;
                }
                let fg = coeff(f, g);
                for (m, c, k) in pairs {
                    let shifted = if k == 0 { fg.clone() } else { fg.shift_up(k) };
                    out.add_term(m, &shifted, &c);
                }
            }
        }
        out
    }

    /// Graded commutator `x ∗ y − (−1)^{|x||y|} y ∗ x`, evaluated termwise by parity.
    pub fn supercommutator(&self, x: &SuperElement, y: &SuperElement) -> SuperElement {
        let mut out = self.star(x, y);
        for (mx, f) in &x.terms {
            for (my, g) in &y.terms {
                let odd = mx.count_ones() % 2 == 1 && my.count_ones() % 2 == 1;
                let xt = SuperElement::term(x.ctx(), x.ell, *mx, f.clone());
                let yt = SuperElement::term(y.ctx(), y.ell, *my, g.clone());
                let c = if odd { Scalar::one() } else { Scalar::from_i64(-1) };
                out.add_scaled(&self.star(&yt, &xt), &c);
            }
        }
        out
    }

    /// `ν^{-1}[x, y]_∗` with full reliability: the commutator is computed one
    /// order higher and its (vanishing) ν⁰ part is divided out exactly.
    pub fn nu_inverse_commutator(&self, x: &SuperElement, y: &SuperElement) -> crate::Result<SuperElement> {
        let up = self.at_order(self.order + 1);
        let c = up.supercommutator(&x.with_order(self.order + 1), &y.with_order(self.order + 1));
        let mut out = self.zero();
        for (m, s) in &c.terms {
            let q = s.div_nu_exact().map_err(|e| match e {
                crate::Error::Divisibility(w) => crate::Error::Divisibility(alloc::format!("{} term: {w}", c.mask_name(*m))),
                other => other,
            })?;
            out.add_term(*m, &q, &Scalar::one());
        }
        Ok(out)
    }
}

/// Enumerates all canonical masks for `ell` ghost/antighost pairs.
pub fn all_masks(ell: usize) -> Vec<Mask> {
    (0..(1u32 << (2 * ell))).collect()
}

/// Masks with exactly the given ghost and antighost counts.
pub fn masks_with(ell: usize, ghosts: u32, antighosts: u32) -> Vec<Mask> {
    let gm = (1u32 << ell) - 1;
    all_masks(ell)
        .into_iter()
        .filter(|m| (m & gm).count_ones() == ghosts && (m >> ell).count_ones() == antighosts)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(ell: usize, order: usize) -> (BrstAlgebra, Poly, Poly) {
        let ctx = VarContext::new(["q", "p"]);
        let pd = PoissonData::from_pairs(&ctx, &[(0, 1, Scalar::one())]).unwrap();
        let q = Poly::var(&ctx, 0);
        let p = Poly::var(&ctx, 1);
        (BrstAlgebra::new(pd, ell, order), q, p)
    }

    #[test]
    fn odd_generators_anticommute() {
        let (a, q, p) = alg(2, 2);
        let e1 = a.ghost(0);
        let e2 = a.ghost(1);
        let e12 = a.element(0b0011, Poly::one(a.ctx()));
        assert_eq!(e1.mul(&e2), e12);
        assert_eq!(e2.mul(&e1), e12.neg());
        assert!(e1.mul(&e1).is_zero());
        // (q e_1)·(p e^2) = qp e_1 e^2 = −qp e^2 e_1 in canonical order.
        let x = a.element(0b0100, q.clone());
        let y = a.element(0b0010, p.clone());
        assert_eq!(x.mul(&y), a.element(0b0110, (&q * &p).scale(&Scalar::from_i64(-1))));
    }

    #[test]
    fn contraction_derivations() {
        let (a, _, _) = alg(2, 1);
        let anti12 = a.antighost(0).mul(&a.antighost(1));
        assert_eq!(anti12.i_anti(0), a.antighost(1));
        assert!(a.antighost(1).i_anti(0).is_zero());
        // i_2(e^1 e^2) = −e^1 by the graded Leibniz rule.
        let g12 = a.ghost(0).mul(&a.ghost(1));
        assert_eq!(g12.i_ghost(1), a.ghost(0).neg());
        // Anticommuting derivations.
        let x = anti12.mul(&a.ghost(0));
        assert_eq!(x.i_anti(0).i_anti(1), x.i_anti(1).i_anti(0).neg());
    }

    #[test]
    fn graded_poisson_defining_relations() {
        let (a, q, _) = alg(1, 1);
        let two = a.one().scale(&Scalar::from_i64(2));
        assert_eq!(a.graded_poisson(&a.ghost(0), &a.antighost(0)), two);
        assert_eq!(a.graded_poisson(&a.antighost(0), &a.ghost(0)), two);
        assert!(a.graded_poisson(&a.poly(q), &a.antighost(0)).is_zero());
    }

    #[test]
    fn clifford_examples() {
        let (a, q, p) = alg(2, 2);
        let x = a.element(0b0110, &q * &p);
        assert_eq!(a.clifford_mul(&a.one(), &x), x);
        assert_eq!(a.clifford_mul(&a.antighost(0), &a.ghost(1)), a.antighost(0).mul(&a.ghost(1)));
        let nu = a.series(Series::nu_power(Poly::constant(a.ctx(), Scalar::from_i64(2)), 1, 2));
        assert_eq!(a.clifford_mul(&a.antighost(0), &a.ghost(0)), a.antighost(0).mul(&a.ghost(0)).add(&nu));
        assert_eq!(a.clifford_mul(&a.ghost(0), &a.antighost(0)), a.ghost(0).mul(&a.antighost(0)));
    }

    #[test]
    fn star_restricts_to_factors() {
        let (a, q, p) = alg(2, 2);
        let expected = a.series(a.poisson.star(&q, &p, 2));
        assert_eq!(a.star(&a.poly(q), &a.poly(p)), expected);
        assert_eq!(a.star(&a.ghost(0), &a.ghost(1)), a.ghost(0).mul(&a.ghost(1)));
    }

    #[test]
    fn mask_signs() {
        assert_eq!(mask_product_sign(0b01, 0b10), Some(false));
        assert_eq!(mask_product_sign(0b10, 0b01), Some(true));
        assert_eq!(mask_product_sign(0b11, 0b01), None);
        assert_eq!(masks_with(2, 1, 1).len(), 4);
    }
}
