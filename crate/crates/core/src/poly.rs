//! Sparse multivariate polynomials over [`Scalar`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered variable list plus an optional torus weight matrix
/// (`weights[r][v]` is the weight of variable `v` under generator `r`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
    weights: Vec<Vec<i64>>,
}

impl VarContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        Arc::new(VarContext { names: names.into_iter().map(Into::into).collect(), weights: Vec::new() })
    }

    pub fn with_weights<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        weights: Vec<Vec<i64>>,
    ) -> Result<Arc<Self>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if let Some(row) = weights.iter().find(|row| row.len() != names.len()) {
            return Err(Error::Shape(alloc::format!(
                "weight row has {} entries for {} variables",
                row.len(),
                names.len()
            )));
        }
        Ok(Arc::new(VarContext { names, weights }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weight_rows(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn has_weights(&self) -> bool {
        !self.weights.is_empty()
    }

    /// Multi-weight of a monomial: weight matrix times exponent vector.
    pub fn weight(&self, m: &Monomial) -> Vec<i64> {
        self.weights
            .iter()
            .map(|row| row.iter().zip(m.exps()).map(|(w, &e)| w * i64::from(e)).sum())
            .collect()
    }
}

pub(crate) fn same_ctx(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Exponent vector with cached total degree.  Ordered graded-lexicographically:
/// first by degree, then lexicographically with a larger exponent of an
/// earlier variable ranking higher.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n], degree: 0 }
    }

    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| u32::from(e)).sum();
        Monomial { exps, degree }
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, degree: self.degree + other.degree }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial { exps, degree: self.degree - other.degree })
    }

    /// Partial derivative: `(exponent, m / x_i)`, or `None` when `x_i` is absent.
    pub fn diff(&self, i: usize) -> Option<(u16, Monomial)> {
        let e = self.exps[i];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] -= 1;
        Some((e, Monomial { exps, degree: self.degree - 1 }))
    }

    /// All monomials in `n` variables of total degree `d`, descending.
    pub fn of_degree(n: usize, d: u32) -> Vec<Monomial> {
        fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i + 1 == n {
                cur[i] = left as u16;
                out.push(Monomial::new(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u16;
                rec(n, i + 1, left - e, cur, out);
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(n, 0, d, &mut vec![0; n], &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Poly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Poly::constant(ctx, Scalar::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Scalar) -> Self {
        Poly::term(ctx, Monomial::one(ctx.len()), c)
    }

    pub fn var(ctx: &Arc<VarContext>, i: usize) -> Self {
        Poly::term(ctx, Monomial::var(ctx.len(), i), Scalar::one())
    }

    pub fn term(ctx: &Arc<VarContext>, m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero(ctx);
        p.add_term(m, &c);
        p
    }

    pub fn from_terms(ctx: &Arc<VarContext>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.ctx.len()))
    }

    /// Highest total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        assert!(same_ctx(&self.ctx, &other.ctx), "variable contexts differ");
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), &(a * c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect() }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::Context);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::Context);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::Context);
        }
        let mut out = Poly::zero(&self.ctx);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), &(a * b));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn diff(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.diff(i) {
                out.add_term(dm, &(c * &Scalar::from_i64(i64::from(e))));
            }
        }
        out
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Decomposition into homogeneous components keyed by degree.
    pub fn slices(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_insert_with(|| Poly::zero(&self.ctx)).terms.insert(m.clone(), c.clone());
        }
        out
    }

    /// Part of `self` with total degree at most `d`.
    pub fn truncate_degree(&self, d: u32) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// True when every term has multi-weight zero.
    pub fn is_weight_zero(&self) -> bool {
        self.terms.keys().all(|m| self.ctx.weight(m).iter().all(|&w| w == 0))
    }

    /// Substitutes `values[i]` for variable `i`.
    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in values.iter().zip(m.exps()) {
                if e > 0 {
                    t = &t * &v.pow(u32::from(e));
                }
            }
            acc += &t;
        }
        acc
    }

    /// Grammar-compatible rendering, highest monomial first.
    pub fn to_source(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.leads_negative();
            let mag = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors = monomial_factors(&self.ctx, m);
            if factors.is_empty() {
                out.push_str(&mag.to_source());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_source());
                    out.push('*');
                }
                out.push_str(&factors);
            }
        }
        out
    }
}

fn monomial_factors(ctx: &VarContext, m: &Monomial) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ctx.names[i].clone()),
            _ => parts.push(alloc::format!("{}^{}", ctx.names[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_source())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("variable contexts differ")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("variable contexts differ")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("variable contexts differ")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp() -> (Poly, Poly) {
        let ctx = VarContext::new(["q", "p"]);
        (Poly::var(&ctx, 0), Poly::var(&ctx, 1))
    }

    #[test]
    fn arithmetic_examples() {
        let (q, p) = qp();
        assert_eq!(&(&q + &p) + &(&q - &p), q.scale(&Scalar::from_i64(2)));
        assert_eq!(&(&q + &p) * &(&q - &p), &(&q * &q) - &(&p * &p));
        let lhs = (&(&q * &q) + &p.scale(&Scalar::from_i64(2))).scale(&Scalar::ratio(1, 2));
        assert_eq!(lhs, &(&q * &q).scale(&Scalar::ratio(1, 2)) + &p);
    }

    #[test]
    fn derivatives() {
        let (q, p) = qp();
        let q2p = &(&q * &q) * &p;
        assert_eq!(q2p.diff(0), (&q * &p).scale(&Scalar::from_i64(2)));
        assert!((&q * &q).diff(1).is_zero());
        assert_eq!((&q * &p).diff(1).diff(0), Poly::one(q.ctx()));
    }

    #[test]
    fn context_mismatch() {
        let (q, _) = qp();
        let other = Poly::var(&VarContext::new(["x"]), 0);
        assert_eq!(q.try_add(&other), Err(Error::Context));
        assert_eq!(q.try_mul(&other), Err(Error::Context));
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a > b && c > a);
        let all = Monomial::of_degree(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn rendering() {
        let (q, p) = qp();
        let f = &(&q * &q).scale(&Scalar::ratio(-1, 2)) + &(&p - &Poly::constant(q.ctx(), Scalar::from_i64(3)));
        assert_eq!(f.to_source(), "-1/2*q^2 + p - 3");
        assert_eq!(Poly::zero(q.ctx()).to_source(), "0");
        assert_eq!(q.scale(&Scalar::i()).to_source(), "I*q");
    }
}
