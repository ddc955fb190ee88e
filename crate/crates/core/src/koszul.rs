//! Koszul complex of a homogeneous moment map.
//!
//! Chains are [`SuperElement`]s: antighosts `e_a` carry the homological
//! degree and any ghost part is a passive left factor.  Restriction,
//! prolongation and the contracting homotopy are computed by exact linear
//! algebra in finite slices: with `k` the common degree of the components
//! `J_a`, the *total degree* of `f·e_A` is `deg f + k|A|`, which `∂`
//! preserves together with the torus weight of `f`.  Every slice is put in
//! reduced echelon form once, with the largest monomial as pivot, so the
//! complement of the ideal is spanned by the non-pivot ("standard")
//! monomials and all maps are canonical.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{axpy, Echelon, GradedSlice, Matrix, SparseVec};
use crate::operator::{Contraction, Operator, SideConditions};
use crate::poisson::MomentMap;
use crate::poly::{Monomial, Poly, VarContext};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::superalg::{left_remove, masks_with, Mask, SuperElement};

/// Basis element of a slice: antighost mask (in [`SuperElement`] bit layout)
/// and coefficient monomial.
pub type BasisKey = (Mask, Monomial);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceKey {
    /// Total degree.
    pub degree: u32,
    /// Torus weight of the coefficient monomials (empty without weights).
    pub weight: Vec<i64>,
}

#[derive(Clone, Debug, Default)]
struct Level {
    basis: Vec<BasisKey>,
    index: BTreeMap<BasisKey, usize>,
}

#[derive(Clone, Debug)]
struct Slice {
    levels: Vec<Level>,
    /// `diffs[i][j]`: `∂` of basis element `j` of level `i + 1`, in level `i`.
    diffs: Vec<Vec<SparseVec>>,
    /// Row echelon form of `diffs[i]`, tracking combinations.
    images: Vec<Echelon>,
}

/// `∂ = Σ_a J_a i^a` on arbitrary elements.
pub fn koszul_diff(j: &MomentMap, x: &SuperElement) -> SuperElement {
    let mut out = x.filter(|_| false);
    for a in 0..j.dim() {
        let ja = j.component(a);
        out = out.add(&x.i_anti(a).map_polys(|p| p * ja));
    }
    out
}

/// Homology dimensions of one slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceHomology {
    pub key: SliceKey,
    /// `dim K_i` for `i = 0..=ℓ`.
    pub chain_dims: Vec<usize>,
    /// `dim H_i` for `i = 0..=ℓ`.
    pub homology: Vec<usize>,
}

/// Bounded-degree acyclicity data for a Koszul complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Acyclicity {
    pub bound: u32,
    pub slices: Vec<SliceHomology>,
}

impl Acyclicity {
    /// True when `H_i = 0` for all `i ≥ 1` in every slice.
    pub fn passed(&self) -> bool {
        self.slices.iter().all(|s| s.homology[1..].iter().all(|&h| h == 0))
    }

    /// `dim H_i` summed over weights, indexed `[degree][i]`.
    pub fn by_degree(&self) -> Vec<Vec<usize>> {
        let ell = self.slices.first().map_or(0, |s| s.homology.len());
        let mut out = alloc::vec![alloc::vec![0; ell]; self.bound as usize + 1];
        for s in &self.slices {
            for (i, h) in s.homology.iter().enumerate() {
                out[s.key.degree as usize][i] += h;
            }
        }
        out
    }

    /// First slice with nonvanishing higher homology: `(i, degree)`.
    pub fn first_failure(&self) -> Option<(usize, u32)> {
        self.slices.iter().find_map(|s| {
            s.homology.iter().enumerate().skip(1).find(|(_, &h)| h > 0).map(|(i, _)| (i, s.key.degree))
        })
    }
}

/// Koszul complex of a moment map, tabulated up to a total degree bound.
#[derive(Clone, Debug)]
pub struct Koszul {
    moment: MomentMap,
    ell: usize,
    k: u32,
    bound: u32,
    slices: BTreeMap<SliceKey, Slice>,
}

impl Koszul {
    /// Builds every slice of total degree `≤ bound`.
    ///
    /// The components must be nonzero, homogeneous of one common degree and,
    /// when the context has weights, of weight zero.
    pub fn new(moment: &MomentMap, bound: u32) -> Result<Koszul> {
        let ell = moment.dim();
        let ctx = moment.ctx().clone();
        let mut k = None;
        for (a, ja) in moment.components.iter().enumerate() {
            let slices = ja.slices();
            let (&deg, _) = match slices.iter().next() {
                Some(s) if slices.len() == 1 => s,
                _ => return Err(Error::Invalid(alloc::format!("component {} is not homogeneous", a + 1))),
            };
            if deg == 0 || k.is_some_and(|k| k != deg) {
                return Err(Error::Invalid("components must share a positive degree".into()));
            }
            if !ja.is_weight_zero() {
                return Err(Error::Invalid(alloc::format!("component {} has nonzero weight", a + 1)));
            }
            k = Some(deg);
        }
        let k = k.ok_or_else(|| Error::Invalid("empty moment map".into()))?;
        let n = ctx.len();
        let mut slices: BTreeMap<SliceKey, Slice> = BTreeMap::new();
        let monomials: Vec<Vec<Monomial>> = (0..=bound).map(|d| Monomial::of_degree(n, d)).collect();
        for i in 0..=ell {
            let masks = masks_with(ell, 0, i as u32);
            for t in (k * i as u32)..=bound {
                for m in &monomials[(t - k * i as u32) as usize] {
                    let key = SliceKey { degree: t, weight: ctx.weight(m) };
                    let slice = slices.entry(key).or_insert_with(|| Slice {
                        levels: alloc::vec![Level::default(); ell + 1],
                        diffs: alloc::vec![Vec::new(); ell],
                        images: (0..ell).map(|_| Echelon::new(true)).collect(),
                    });
                    for &mask in &masks {
                        slice.levels[i].basis.push((mask, m.clone()));
                    }
                }
            }
        }
        let kz = Koszul { moment: moment.clone(), ell, k, bound, slices: BTreeMap::new() };
        for slice in slices.values_mut() {
            for level in &mut slice.levels {
                level.basis.sort_unstable_by(|a, b| b.cmp(a));
                level.index = level.basis.iter().cloned().enumerate().map(|(j, key)| (key, j)).collect();
            }
            for i in 0..ell {
                let (lower, upper) = slice.levels.split_at(i + 1);
                let (target, source) = (&lower[i], &upper[0]);
                for (mask, m) in &source.basis {
                    let mut v = SparseVec::new();
                    for (rest, c, mono) in kz.diff_basis(*mask, m) {
                        let col = target.index[&(rest, mono)];
                        axpy(&mut v, &Scalar::one(), &[(col, c)].into_iter().collect());
                    }
                    slice.images[i].insert(v.clone());
                    slice.diffs[i].push(v);
                }
                slice.images[i].reduce_fully();
            }
        }
        Ok(Koszul { slices, ..kz })
    }

    /// Terms of `∂(m·e_A)` as `(mask, coefficient, monomial)`.
    fn diff_basis(&self, mask: Mask, m: &Monomial) -> Vec<(Mask, Scalar, Monomial)> {
        let mut out = Vec::new();
        for a in 0..self.ell {
            let Some((rest, odd)) = left_remove(mask, (self.ell + a) as u32) else { continue };
            for (mj, c) in self.moment.component(a).terms() {
                let c = if odd { -c } else { c.clone() };
                out.push((rest, c, m.mul(mj)));
            }
        }
        out
    }

    pub fn moment(&self) -> &MomentMap {
        &self.moment
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        self.moment.ctx()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Degree of the moment map components.
    pub fn component_degree(&self) -> u32 {
        self.k
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn slice_keys(&self) -> impl Iterator<Item = &SliceKey> {
        self.slices.keys()
    }

    fn slice_of(&self, mask: Mask, m: &Monomial) -> Result<(SliceKey, &Slice)> {
        let t = m.degree() + self.k * (mask >> self.ell).count_ones();
        if t > self.bound {
            return Err(Error::DegreeBound { degree: t, bound: self.bound });
        }
        let key = SliceKey { degree: t, weight: self.ctx().weight(m) };
        let slice = &self.slices[&key];
        Ok((key, slice))
    }

    /// Splits a chain of homological degree `i` into slice coordinates.
    fn coords(&self, i: usize, chain: &BTreeMap<Mask, Poly>) -> Result<BTreeMap<SliceKey, SparseVec>> {
        let mut out: BTreeMap<SliceKey, SparseVec> = BTreeMap::new();
        for (&mask, p) in chain {
            for (m, c) in p.terms() {
                let (key, slice) = self.slice_of(mask, m)?;
                let col = slice.levels[i].index[&(mask, m.clone())];
                out.entry(key).or_default().insert(col, c.clone());
            }
        }
        Ok(out)
    }

    fn chain_of(&self, key: &SliceKey, i: usize, v: &SparseVec, out: &mut BTreeMap<Mask, Poly>) {
        let level = &self.slices[key].levels[i];
        for (&j, c) in v {
            let (mask, m) = &level.basis[j];
            out.entry(*mask).or_insert_with(|| Poly::zero(self.ctx())).add_term(m.clone(), c);
        }
    }

    /// `h_i` on one slice vector of level `i`, in level `i + 1` coordinates.
    fn h_vec(&self, key: &SliceKey, slice: &Slice, i: usize, v: &SparseVec) -> Result<SparseVec> {
        let mut w = v.clone();
        if i > 0 {
            let mut dv = SparseVec::new();
            for (&j, c) in v {
                axpy(&mut dv, c, &slice.diffs[i - 1][j]);
            }
            let hdv = self.h_vec(key, slice, i - 1, &dv)?;
            axpy(&mut w, &Scalar::from_i64(-1), &hdv);
        }
        let failure = Error::Acyclicity { homological: i, degree: key.degree };
        if i == self.ell {
            return if w.is_empty() { Ok(w) } else { Err(failure) };
        }
        let (rem, coeffs) = slice.images[i].reduce(&w);
        if i > 0 && !rem.is_empty() {
            return Err(failure);
        }
        let mut out = SparseVec::new();
        for (col, c) in &coeffs {
            axpy(&mut out, c, slice.images[i].combo(*col).expect("tracked"));
        }
        Ok(out)
    }

    /// Contracting homotopy on an antighost chain (any homological degrees).
    pub fn h_chain(&self, chain: &BTreeMap<Mask, Poly>) -> Result<BTreeMap<Mask, Poly>> {
        let mut out = BTreeMap::new();
        for i in 0..=self.ell {
            let part: BTreeMap<Mask, Poly> =
                chain.iter().filter(|(m, _)| m.count_ones() as usize == i).map(|(m, p)| (*m, p.clone())).collect();
            for (key, v) in self.coords(i, &part)? {
                let hv = self.h_vec(&key, &self.slices[&key], i, &v)?;
                if !hv.is_empty() {
                    self.chain_of(&key, i + 1, &hv, &mut out);
                }
            }
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Normal form of a polynomial modulo the ideal generated by `J`.
    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        let mut out = BTreeMap::new();
        for (key, v) in self.coords(0, &[(0, f.clone())].into_iter().collect())? {
            let rem = match self.slices[&key].images.first() {
                Some(e) => e.reduce(&v).0,
                None => v,
            };
            self.chain_of(&key, 0, &rem, &mut out);
        }
        Ok(out.remove(&0).unwrap_or_else(|| Poly::zero(self.ctx())))
    }

    /// True when `m` is a standard monomial (not a leading term of the ideal).
    pub fn is_standard(&self, m: &Monomial) -> Result<bool> {
        let (_, slice) = self.slice_of(0, m)?;
        let col = slice.levels[0].index[&(0, m.clone())];
        Ok(slice.images.first().is_none_or(|e| e.row(col).is_none()))
    }

    /// Standard monomials of a given degree (the quotient model basis).
    pub fn standard_monomials(&self, degree: u32) -> Result<Vec<Monomial>> {
        Monomial::of_degree(self.ctx().len(), degree)
            .into_iter()
            .filter_map(|m| self.is_standard(&m).map(|s| s.then_some(m)).transpose())
            .collect()
    }

    fn lift<F>(&self, x: &SuperElement, ghost_sign: bool, f: F) -> Result<SuperElement>
    where
        F: Fn(usize, &BTreeMap<Mask, Poly>) -> Result<BTreeMap<Mask, Poly>>,
    {
        let gm = x.ghost_mask();
        let order = x.order();
        let mut groups: BTreeMap<(Mask, usize), BTreeMap<Mask, Poly>> = BTreeMap::new();
        for (&mask, s) in x.terms() {
            for (n, p) in s.coeffs().iter().enumerate() {
                if !p.is_zero() {
                    groups.entry((mask & gm, n)).or_default().insert(mask & !gm, p.clone());
                }
            }
        }
        let mut coeffs: BTreeMap<Mask, Vec<Poly>> = BTreeMap::new();
        for ((g, n), chain) in groups {
            let neg = ghost_sign && g.count_ones() % 2 == 1;
            for (a, p) in f(n, &chain)? {
                let slot = coeffs.entry(g | a).or_insert_with(|| alloc::vec![Poly::zero(self.ctx()); order + 1]);
                slot[n] = if neg { -&p } else { p };
            }
        }
        let reliable = Some(x.reliable_order());
        let mut out = x.filter(|_| false);
        for (mask, cs) in coeffs {
            let s = Series::from_coeffs(self.ctx(), cs, order).with_reliable(reliable);
            out.add_term(mask, &s, &Scalar::one());
        }
        Ok(out)
    }

    /// `h` extended to ghost-valued chains: `h(α·k) = (−1)^{|α|} α·h(k)`.
    pub fn h(&self, x: &SuperElement) -> Result<SuperElement> {
        self.lift(x, true, |_, c| self.h_chain(c))
    }

    /// `∂` on arbitrary elements.
    pub fn diff(&self, x: &SuperElement) -> SuperElement {
        koszul_diff(&self.moment, x)
    }

    /// Restriction: drops antighost terms and reduces coefficients to normal form.
    pub fn res(&self, x: &SuperElement) -> Result<SuperElement> {
        self.lift(x, false, |_, c| {
            Ok(match c.get(&0) {
                Some(p) => [(0, self.normal_form(p)?)].into_iter().filter(|(_, p)| !p.is_zero()).collect(),
                None => BTreeMap::new(),
            })
        })
    }

    /// Prolongation: the inclusion of normal forms; rejects anything else.
    pub fn prol(&self, x: &SuperElement) -> Result<SuperElement> {
        let gm = x.ghost_mask();
        for (&mask, s) in x.terms() {
            for p in s.coeffs() {
                if p.is_zero() {
                    continue;
                }
                if mask & !gm != 0 {
                    return Err(Error::Invalid("prolongation of an element with antighosts".into()));
                }
                for m in p.terms().keys() {
                    if !self.is_standard(m)? {
                        let name = Poly::term(self.ctx(), m.clone(), Scalar::one());
                        return Err(Error::Invalid(alloc::format!("{name} is not a standard monomial")));
                    }
                }
            }
        }
        Ok(x.clone())
    }

    /// Matrix of `∂_i: K_i → K_{i−1}` on one slice.
    pub fn differential_slice(&self, i: usize, key: &SliceKey) -> Result<GradedSlice<BasisKey>> {
        if i == 0 || i > self.ell {
            return Err(Error::Shape(alloc::format!("no differential out of homological degree {i}")));
        }
        let slice = self.slices.get(key).ok_or_else(|| Error::Shape("unknown slice".into()))?;
        let (dom, cod) = (&slice.levels[i].basis, &slice.levels[i - 1].basis);
        let mut m = Matrix::zeros(cod.len(), dom.len());
        for (j, col) in slice.diffs[i - 1].iter().enumerate() {
            for (&r, c) in col {
                m.set(r, j, c.clone());
            }
        }
        GradedSlice::new(key.degree, dom.clone(), cod.clone(), m)
    }

    /// Homology dimensions in every slice.
    pub fn acyclicity(&self) -> Acyclicity {
        let slices = self
            .slices
            .iter()
            .map(|(key, s)| {
                let dims: Vec<usize> = s.levels.iter().map(|l| l.basis.len()).collect();
                let rank = |i: usize| if i == 0 || i > self.ell { 0 } else { s.images[i - 1].rank() };
                let homology = (0..=self.ell).map(|i| dims[i] - rank(i) - rank(i + 1)).collect();
                SliceHomology { key: key.clone(), chain_dims: dims, homology }
            })
            .collect();
        Acyclicity { bound: self.bound, slices }
    }

    /// Contraction of `(𝒜, ∂)` onto ghost-valued normal forms with zero differential.
    pub fn contraction(self: &Arc<Self>) -> Contraction<SuperElement, SuperElement> {
        let (a, b, c, d) = (self.clone(), self.clone(), self.clone(), self.clone());
        Contraction {
            p: Operator::new("res", 0, move |x: &SuperElement| a.res(x)),
            i: Operator::new("prol", 0, move |x: &SuperElement| b.prol(x)),
            h: Operator::new("h", -1, move |x: &SuperElement| c.h(x)),
            d_x: Operator::new("0", 1, |x: &SuperElement| Ok(x.filter(|_| false))),
            d_y: Operator::new("∂", 1, move |x: &SuperElement| Ok(d.diff(x))),
            side: SideConditions::all(),
        }
    }
}

/// Label of a slice, for reports.
pub fn slice_label(key: &SliceKey) -> String {
    if key.weight.is_empty() {
        alloc::format!("degree {}", key.degree)
    } else {
        alloc::format!("degree {} weight {:?}", key.degree, key.weight)
    }
}
