//! Linear operator handles and contractions between complexes.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::check::{CheckOutcome, Measure};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::Series;
use crate::superalg::SuperElement;

/// Vector-space operations needed by the generic constructions.
pub trait Linear: Clone + Measure + Send + Sync + 'static {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    fn zero_like(&self) -> Self;

    fn neg(&self) -> Self {
        self.scale(&Scalar::from_i64(-1))
    }
}

impl Linear for SuperElement {
    fn add(&self, other: &Self) -> Self {
        SuperElement::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        SuperElement::sub(self, other)
    }

    fn scale(&self, c: &Scalar) -> Self {
        SuperElement::scale(self, c)
    }

    fn zero_like(&self) -> Self {
        self.filter(|_| false)
    }
}

impl Linear for Series {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn scale(&self, c: &Scalar) -> Self {
        Series::scale(self, c)
    }

    fn zero_like(&self) -> Self {
        Series::zero(self.ctx(), self.order())
    }
}

impl Linear for Poly {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn scale(&self, c: &Scalar) -> Self {
        Poly::scale(self, c)
    }

    fn zero_like(&self) -> Self {
        Poly::zero(self.ctx())
    }
}

/// How an operator interacts with the filtration used by the perturbation lemmas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filtration {
    Preserving,
    /// Raises a complete filtration; any `bound + 1` fold composite vanishes.
    Raising { bound: usize },
}

type Map<A, B> = Arc<dyn Fn(&A) -> Result<B> + Send + Sync>;

/// Named linear map with a declared degree shift.
pub struct Operator<A, B = A> {
    map: Map<A, B>,
    name: String,
    degree: i32,
    filtration: Filtration,
}

impl<A, B> Clone for Operator<A, B> {
    fn clone(&self) -> Self {
        Operator { map: self.map.clone(), name: self.name.clone(), degree: self.degree, filtration: self.filtration }
    }
}

impl<A, B> core::fmt::Debug for Operator<A, B> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Operator")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("filtration", &self.filtration)
            .finish()
    }
}

impl<A: 'static, B: 'static> Operator<A, B> {
    pub fn new(name: impl Into<String>, degree: i32, map: impl Fn(&A) -> Result<B> + Send + Sync + 'static) -> Self {
        Operator { map: Arc::new(map), name: name.into(), degree, filtration: Filtration::Preserving }
    }

    pub fn raising(mut self, bound: usize) -> Self {
        self.filtration = Filtration::Raising { bound };
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn apply(&self, x: &A) -> Result<B> {
        (self.map)(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn filtration(&self) -> Filtration {
        self.filtration
    }

    /// `next ∘ self`.
    pub fn then<C: 'static>(&self, next: &Operator<B, C>) -> Operator<A, C> {
        let (f, g) = (self.map.clone(), next.map.clone());
        let filtration = match (self.filtration, next.filtration) {
            (Filtration::Raising { bound: a }, Filtration::Raising { bound: b }) => Filtration::Raising { bound: a.min(b) },
            (r @ Filtration::Raising { .. }, _) | (_, r @ Filtration::Raising { .. }) => r,
            _ => Filtration::Preserving,
        };
        Operator {
            map: Arc::new(move |x| g(&f(x)?)),
            name: alloc::format!("{} {}", next.name, self.name),
            degree: self.degree + next.degree,
            filtration,
        }
    }
}

impl<A: 'static, B: Linear> Operator<A, B> {
    pub fn zero(name: impl Into<String>, degree: i32, template: B) -> Self {
        Operator::new(name, degree, move |_| Ok(template.zero_like()))
    }

    pub fn plus(&self, other: &Operator<A, B>) -> Operator<A, B> {
        self.combine(other, Scalar::one(), "+")
    }

    pub fn minus(&self, other: &Operator<A, B>) -> Operator<A, B> {
        self.combine(other, Scalar::from_i64(-1), "-")
    }

    fn combine(&self, other: &Operator<A, B>, c: Scalar, op: &str) -> Operator<A, B> {
        let (f, g) = (self.map.clone(), other.map.clone());
        let filtration = match (self.filtration, other.filtration) {
            (Filtration::Raising { bound: a }, Filtration::Raising { bound: b }) => Filtration::Raising { bound: a.max(b) },
            _ => Filtration::Preserving,
        };
        Operator {
            map: Arc::new(move |x| Ok(f(x)?.add(&g(x)?.scale(&c)))),
            name: alloc::format!("({} {op} {})", self.name, other.name),
            degree: self.degree,
            filtration,
        }
    }

    pub fn scaled(&self, c: Scalar) -> Operator<A, B> {
        let f = self.map.clone();
        let name = alloc::format!("{c}*{}", self.name);
        Operator {
            map: Arc::new(move |x| Ok(f(x)?.scale(&c))),
            name,
            degree: self.degree,
            filtration: self.filtration,
        }
    }
}

impl<A: Linear> Operator<A, A> {
    pub fn identity() -> Self {
        Operator::new("id", 0, |x: &A| Ok(x.clone()))
    }
}

/// `(id + T)^{-1} = Σ_k (−T)^k`, summed until a term vanishes or the
/// filtration bound of `T` is reached.
pub fn neumann_inverse<A: Linear>(t: &Operator<A, A>) -> Result<Operator<A, A>> {
    let Filtration::Raising { bound } = t.filtration else {
        return Err(Error::Filtration(t.name.clone()));
    };
    let f = t.map.clone();
    Ok(Operator::new(alloc::format!("(id + {})^-1", t.name), 0, move |x: &A| {
        let mut acc = x.clone();
        let mut term = x.clone();
        for _ in 0..bound {
            term = f(&term)?.neg();
            if term.is_null() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }))
}

/// Which of `h² = 0`, `h i = 0`, `p h = 0` hold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SideConditions {
    pub sc1: bool,
    pub sc2: bool,
    pub sc3: bool,
}

impl SideConditions {
    pub fn all() -> Self {
        SideConditions { sc1: true, sc2: true, sc3: true }
    }

    /// Flags of `self` are a subset of `other`'s.
    pub fn subset_of(&self, other: &SideConditions) -> bool {
        (!self.sc1 || other.sc1) && (!self.sc2 || other.sc2) && (!self.sc3 || other.sc3)
    }
}

/// Contraction `(X, d_X) ⇄ (Y, d_Y)` with projection `p`, inclusion `i` and
/// homotopy `h` on `Y`: `p i = id`, `d_Y h + h d_Y = id − i p`.
#[derive(Clone, Debug)]
pub struct Contraction<X, Y> {
    pub p: Operator<Y, X>,
    pub i: Operator<X, Y>,
    pub h: Operator<Y, Y>,
    pub d_x: Operator<X, X>,
    pub d_y: Operator<Y, Y>,
    pub side: SideConditions,
}

/// Per-identity outcomes of a contraction check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionChecks {
    pub pi_identity: CheckOutcome,
    pub homotopy: CheckOutcome,
    pub chain_p: CheckOutcome,
    pub chain_i: CheckOutcome,
    pub sc1: CheckOutcome,
    pub sc2: CheckOutcome,
    pub sc3: CheckOutcome,
}

impl ContractionChecks {
    /// Axioms plus the side conditions that are flagged.
    pub fn passed(&self, side: SideConditions) -> bool {
        self.pi_identity.passed
            && self.homotopy.passed
            && self.chain_p.passed
            && self.chain_i.passed
            && (!side.sc1 || self.sc1.passed)
            && (!side.sc2 || self.sc2.passed)
            && (!side.sc3 || self.sc3.passed)
    }

    /// Side conditions that actually hold on the probes.
    pub fn observed(&self) -> SideConditions {
        SideConditions { sc1: self.sc1.passed, sc2: self.sc2.passed, sc3: self.sc3.passed }
    }
}

fn record<M: Measure>(out: &mut CheckOutcome, label: &str, k: usize, r: Result<M>) {
    match r {
        Ok(m) => out.record(|| alloc::format!("{label} probe {k}"), &m),
        Err(e) => out.fail(alloc::format!("{label} probe {k}: {e}")),
    }
}

impl<X: Linear, Y: Linear> Contraction<X, Y> {
    /// Evaluates every axiom and side condition on the given probes.
    pub fn check(&self, xs: &[X], ys: &[Y]) -> ContractionChecks {
        let mut c = ContractionChecks {
            pi_identity: CheckOutcome::start(),
            homotopy: CheckOutcome::start(),
            chain_p: CheckOutcome::start(),
            chain_i: CheckOutcome::start(),
            sc1: CheckOutcome::start(),
            sc2: CheckOutcome::start(),
            sc3: CheckOutcome::start(),
        };
        for (k, x) in xs.iter().enumerate() {
            record(&mut c.pi_identity, "X", k, self.i.apply(x).and_then(|y| self.p.apply(&y)).map(|z| z.sub(x)));
            record(
                &mut c.chain_i,
                "X",
                k,
                (|| Ok(self.d_y.apply(&self.i.apply(x)?)?.sub(&self.i.apply(&self.d_x.apply(x)?)?)))(),
            );
            record(&mut c.sc2, "X", k, self.i.apply(x).and_then(|y| self.h.apply(&y)));
        }
        for (k, y) in ys.iter().enumerate() {
            record(
                &mut c.homotopy,
                "Y",
                k,
                (|| {
                    let lhs = self.d_y.apply(&self.h.apply(y)?)?.add(&self.h.apply(&self.d_y.apply(y)?)?);
                    let rhs = y.sub(&self.i.apply(&self.p.apply(y)?)?);
                    Ok(lhs.sub(&rhs))
                })(),
            );
            record(
                &mut c.chain_p,
                "Y",
                k,
                (|| Ok(self.p.apply(&self.d_y.apply(y)?)?.sub(&self.d_x.apply(&self.p.apply(y)?)?)))(),
            );
            record(&mut c.sc1, "Y", k, self.h.apply(y).and_then(|z| self.h.apply(&z)));
            record(&mut c.sc3, "Y", k, self.h.apply(y).and_then(|z| self.p.apply(&z)));
        }
        c
    }
}

/// Replaces `h` by `h′ = (dh + hd) h (dh + hd)` and then `h″ = h′ d h′`,
/// which yields all three side conditions.
pub fn enforce_side_conditions<X: Linear, Y: Linear>(c: &Contraction<X, Y>) -> Contraction<X, Y> {
    let dh = c.h.then(&c.d_y).plus(&c.d_y.then(&c.h));
    let h1 = dh.then(&c.h).then(&dh).named(alloc::format!("h'({})", c.h.name()));
    let h2 = h1.then(&c.d_y).then(&h1).named(alloc::format!("h''({})", c.h.name()));
    Contraction { h: h2, side: SideConditions::all(), ..c.clone() }
}

/// Applies `op` to every probe, collecting results.
pub fn apply_all<A: 'static, B: 'static>(op: &Operator<A, B>, xs: &[A]) -> Result<Vec<B>> {
    xs.iter().map(|x| op.apply(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarContext;
    use alloc::vec;

    #[test]
    fn geometric_series() {
        let ctx = VarContext::new(["q", "p"]);
        let q = Poly::var(&ctx, 0);
        let nu_q = Series::nu_power(q.clone(), 1, 2);
        let t = Operator::new("nu q", 0, move |x: &Series| x.try_mul(&nu_q)).raising(2);
        let inv = neumann_inverse(&t).unwrap();
        let got = inv.apply(&Series::one(&ctx, 2)).unwrap();
        let want = Series::from_coeffs(&ctx, vec![Poly::one(&ctx), -&q, &q * &q], 2);
        assert_eq!(got, want);
        let zero = Operator::zero("0", 0, Series::zero(&ctx, 2)).raising(0);
        let x = Series::from_poly(q.clone(), 2);
        assert_eq!(neumann_inverse(&zero).unwrap().apply(&x).unwrap(), x);
    }

    #[test]
    fn neumann_needs_raising_flag() {
        let t: Operator<Poly> = Operator::identity();
        assert!(matches!(neumann_inverse(&t), Err(Error::Filtration(_))));
    }

    #[test]
    fn composition_names_and_degrees() {
        let a: Operator<Poly> = Operator::new("a", -1, |x: &Poly| Ok(x.clone()));
        let b: Operator<Poly> = Operator::new("b", 2, |x: &Poly| Ok(x.clone()));
        let ab = a.then(&b);
        assert_eq!(ab.name(), "b a");
        assert_eq!(ab.degree(), 1);
        assert_eq!(a.scaled(Scalar::from_i64(3)).name(), "3*a");
    }
}
