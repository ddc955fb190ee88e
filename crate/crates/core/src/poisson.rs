//! Constant Poisson structures, the Moyal–Weyl star product and the
//! compatibility checks between a moment map and the star product.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::check::CheckOutcome;
use crate::error::{Error, Result};
use crate::lie::LieAlgebraData;
use crate::linalg::Matrix;
use crate::poly::{Monomial, Poly, VarContext};
use crate::scalar::Scalar;
use crate::series::Series;

/// Constant antisymmetric invertible bivector Λ in the coordinates of a context.
#[derive(Clone, Debug)]
pub struct PoissonData {
    ctx: Arc<VarContext>,
    lambda: Matrix,
    entries: Vec<(usize, usize, Scalar)>,
}

impl PoissonData {
    pub fn new(ctx: &Arc<VarContext>, lambda: Matrix) -> Result<Self> {
        let n = ctx.len();
        if lambda.rows() != n || lambda.cols() != n {
            return Err(Error::Shape(alloc::format!("Poisson matrix must be {n}x{n}")));
        }
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if lambda.get(i, j) != &-lambda.get(j, i) {
                    return Err(Error::Invalid(alloc::format!("Poisson matrix is not antisymmetric at ({i},{j})")));
                }
                if !lambda.get(i, j).is_zero() {
                    entries.push((i, j, lambda.get(i, j).clone()));
                }
            }
        }
        if lambda.rank() != n {
            return Err(Error::Invalid("Poisson matrix is degenerate".into()));
        }
        Ok(PoissonData { ctx: ctx.clone(), lambda, entries })
    }

    /// Sets `Λ^{ij} = c` and `Λ^{ji} = −c` for each listed pair.
    pub fn from_pairs(ctx: &Arc<VarContext>, pairs: &[(usize, usize, Scalar)]) -> Result<Self> {
        let n = ctx.len();
        let mut m = Matrix::zeros(n, n);
        for (i, j, c) in pairs {
            if *i >= n || *j >= n || i == j {
                return Err(Error::Invalid(alloc::format!("invalid Poisson pair ({i},{j})")));
            }
            m.set(*i, *j, c.clone());
            m.set(*j, *i, -c);
        }
        PoissonData::new(ctx, m)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn matrix(&self) -> &Matrix {
        &self.lambda
    }

    /// `{f, g} = Σ Λ^{ij} ∂_i f ∂_j g`.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        for (i, j, c) in &self.entries {
            let df = f.diff(*i);
            if df.is_zero() {
                continue;
            }
            let dg = g.diff(*j);
            if !dg.is_zero() {
                out.add_scaled(&(&df * &dg), c);
            }
        }
        out
    }

    /// The bidifferential terms `B_0 … B_kmax` of the Moyal product,
    /// `B_k(f,g) = (1/2)^k/k! Λ^{i₁j₁}…Λ^{i_kj_k} (∂_{i₁…i_k} f)(∂_{j₁…j_k} g)`.
    pub fn star_terms(&self, f: &Poly, g: &Poly, kmax: usize) -> Vec<Poly> {
        let mut out = Vec::with_capacity(kmax + 1);
        let mut pairs: BTreeMap<(Monomial, Monomial), Scalar> = BTreeMap::new();
        for (m, a) in f.terms() {
            for (n, b) in g.terms() {
                pairs.insert((m.clone(), n.clone()), a * b);
            }
        }
        let mut factor = Scalar::one();
        for k in 0..=kmax {
            if k > 0 {
                pairs = self.apply_bivector(&pairs);
                factor = &factor * &Scalar::ratio(1, 2 * k as i64);
            }
            let mut term = Poly::zero(&self.ctx);
            for ((m, n), c) in &pairs {
                term.add_term(m.mul(n), &(c * &factor));
            }
            out.push(term);
            if pairs.is_empty() {
                break;
            }
        }
        while out.len() < kmax + 1 {
            out.push(Poly::zero(&self.ctx));
        }
        out
    }

    fn apply_bivector(
        &self,
        pairs: &BTreeMap<(Monomial, Monomial), Scalar>,
    ) -> BTreeMap<(Monomial, Monomial), Scalar> {
        let mut next: BTreeMap<(Monomial, Monomial), Scalar> = BTreeMap::new();
        for ((m, n), c) in pairs {
            for (i, j, l) in &self.entries {
                let Some((ei, dm)) = m.diff(*i) else { continue };
                let Some((ej, dn)) = n.diff(*j) else { continue };
                let t = &(c * l) * &Scalar::from_i64(i64::from(ei) * i64::from(ej));
                let e = next.entry((dm, dn)).or_insert_with(Scalar::zero);
                *e += &t;
            }
        }
        next.retain(|_, c| !c.is_zero());
        next
    }

    /// `f ⋆ g` truncated at ν^order.
    pub fn star(&self, f: &Poly, g: &Poly, order: usize) -> Series {
        Series::from_coeffs(&self.ctx, self.star_terms(f, g, order), order)
    }

    /// Star product of truncated series.
    pub fn star_series(&self, a: &Series, b: &Series) -> Series {
        let n = a.order();
        let mut out = Series::zero(&self.ctx, n);
        for (i, ai) in a.coeffs().iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs().iter().enumerate().take(n + 1 - i) {
                if bj.is_zero() {
                    continue;
                }
                for (k, t) in self.star_terms(ai, bj, n - i - j).into_iter().enumerate() {
                    out.coeff_mut(i + j + k).add_scaled(&t, &Scalar::one());
                }
            }
        }
        let rel = a.reliable_order().min(b.reliable_order());
        out.with_reliable(Some(rel))
    }

    /// `f ⋆ g − g ⋆ f`.
    pub fn star_commutator(&self, f: &Poly, g: &Poly, order: usize) -> Series {
        &self.star(f, g, order) - &self.star(g, f, order)
    }
}

/// Equivariant moment map: components `J_a` with Lie data.
#[derive(Clone, Debug)]
pub struct MomentMap {
    pub lie: LieAlgebraData,
    pub components: Vec<Poly>,
    /// Why the components generate the vanishing ideal of the zero set.
    pub justification: String,
}

impl MomentMap {
    pub fn new(lie: LieAlgebraData, components: Vec<Poly>) -> Result<Self> {
        if components.len() != lie.dim() {
            return Err(Error::Shape(alloc::format!(
                "{} moment map components for a {}-dimensional Lie algebra",
                components.len(),
                lie.dim()
            )));
        }
        if components.windows(2).any(|w| !crate::poly::same_ctx(w[0].ctx(), w[1].ctx())) {
            return Err(Error::Context);
        }
        Ok(MomentMap { lie, components, justification: String::new() })
    }

    pub fn with_justification(mut self, text: impl Into<String>) -> Self {
        self.justification = text.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        self.components[0].ctx()
    }

    pub fn component(&self, a: usize) -> &Poly {
        &self.components[a]
    }

    /// `Σ_c f_ab^c J_c`.
    pub fn bracket_image(&self, a: usize, b: usize) -> Poly {
        let mut out = Poly::zero(self.ctx());
        for c in 0..self.dim() {
            out.add_scaled(&self.components[c], self.lie.f(a, b, c));
        }
        out
    }
}

/// `{J_a, J_b} − Σ_c f_ab^c J_c` for all pairs.
pub fn check_equivariance(j: &MomentMap, poisson: &PoissonData) -> CheckOutcome {
    let mut out = CheckOutcome::start();
    for a in 0..j.dim() {
        for b in 0..j.dim() {
            let r = &poisson.bracket(j.component(a), j.component(b)) - &j.bracket_image(a, b);
            out.record(|| alloc::format!("(J_{}, J_{})", a + 1, b + 1), &r);
        }
    }
    out
}

/// Infinitesimal torus action on coordinates: `X_a · x_k = −i w_a(x_k) x_k`.
pub fn torus_action(ctx: &Arc<VarContext>) -> Vec<Vec<Poly>> {
    let minus_i = -Scalar::i();
    ctx.weight_rows()
        .iter()
        .map(|row| {
            (0..ctx.len()).map(|k| Poly::var(ctx, k).scale(&(&minus_i * &Scalar::from_i64(row[k])))).collect()
        })
        .collect()
}

/// `{J_a, x_k}` against the declared generator `action[a][k]`.
pub fn check_calibration(j: &MomentMap, poisson: &PoissonData, action: &[Vec<Poly>]) -> CheckOutcome {
    let mut out = CheckOutcome::start();
    if action.len() != j.dim() {
        out.fail(alloc::format!("action has {} generators, moment map has {}", action.len(), j.dim()));
        return out;
    }
    let ctx = j.ctx().clone();
    for (a, row) in action.iter().enumerate() {
        for (k, gen) in row.iter().enumerate() {
            let r = &poisson.bracket(j.component(a), &Poly::var(&ctx, k)) - gen;
            out.record(|| alloc::format!("generator {a} on {}", ctx.names()[k]), &r);
        }
    }
    out
}

/// `J_a ⋆ J_b − J_b ⋆ J_a − ν Σ_c f_ab^c J_c` for all pairs.
pub fn check_quantum_covariance(j: &MomentMap, poisson: &PoissonData, order: usize) -> CheckOutcome {
    let mut out = CheckOutcome::start();
    for a in 0..j.dim() {
        for b in 0..j.dim() {
            let lhs = poisson.star_commutator(j.component(a), j.component(b), order);
            let rhs = Series::nu_power(j.bracket_image(a, b), 1, order);
            out.record(|| alloc::format!("(J_{}, J_{})", a + 1, b + 1), &(&lhs - &rhs));
        }
    }
    out
}

/// `J_a ⋆ f − f ⋆ J_a − ν{J_a, f}` on probes.
pub fn check_strong_invariance(j: &MomentMap, poisson: &PoissonData, order: usize, probes: &[Poly]) -> CheckOutcome {
    let mut out = CheckOutcome::start();
    for (p, f) in probes.iter().enumerate() {
        for a in 0..j.dim() {
            let lhs = poisson.star_commutator(j.component(a), f, order);
            let rhs = Series::nu_power(poisson.bracket(j.component(a), f), 1, order);
            out.record(|| alloc::format!("J_{} against probe {p} = {f}", a + 1), &(&lhs - &rhs));
        }
    }
    out
}
