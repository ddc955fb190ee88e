//! Classical BRST: charge, differential, Chevalley–Eilenberg part and the
//! transfer of the Koszul contraction to the full BRST complex.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::check::CheckOutcome;
use crate::error::{Error, Result};
use crate::hpt::perturb_v1;
use crate::koszul::{koszul_diff, Koszul};
use crate::operator::{Contraction, Operator};
use crate::poisson::MomentMap;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::superalg::{BrstAlgebra, SuperElement};

/// `−¼ Σ f_ab^c e^a e^b e_c`.
pub fn cubic_ghost_term(alg: &BrstAlgebra, j: &MomentMap) -> SuperElement {
    let mut out = alg.zero();
    for (a, b, c, f) in j.lie.nonzero() {
        let t = alg.ghost(a).mul(&alg.ghost(b)).mul(&alg.antighost(c));
        out.add_scaled(&t, &(f * &Scalar::ratio(-1, 4)));
    }
    out
}

/// `θ = −¼ Σ f_ab^c e^a e^b e_c + Σ J_a e^a`.
pub fn classical_charge(alg: &BrstAlgebra, j: &MomentMap) -> SuperElement {
    let mut out = cubic_ghost_term(alg, j);
    for a in 0..j.dim() {
        out = out.add(&alg.element(1 << a, j.component(a).clone()));
    }
    out
}

/// `D = {θ, ·}`.
pub fn brst_diff(alg: &BrstAlgebra, theta: &SuperElement, x: &SuperElement) -> SuperElement {
    alg.graded_poisson(theta, x)
}

/// `L_a(F) = {J_a, F} + Σ f_ab^c e_c i^b(F)`: the action on coefficients and
/// antighosts.
pub fn rep_action(alg: &BrstAlgebra, j: &MomentMap, a: usize, x: &SuperElement) -> SuperElement {
    let ja = alg.poly(j.component(a).clone());
    let mut out = alg.graded_poisson(&ja, x);
    for (a2, b, c, f) in j.lie.nonzero() {
        if a2 == a {
            out.add_scaled(&alg.antighost(c).mul(&x.i_anti(b)), f);
        }
    }
    out
}

/// Chevalley–Eilenberg differential of the module of coefficients and
/// antighosts: `δ = Σ e^a L_a − ½ Σ f_ab^c e^a e^b i_c`.
pub fn ce_codifferential(alg: &BrstAlgebra, j: &MomentMap, x: &SuperElement) -> SuperElement {
    let mut out = alg.zero();
    for a in 0..j.dim() {
        out = out.add(&alg.ghost(a).mul(&rep_action(alg, j, a, x)));
    }
    for (a, b, c, f) in j.lie.nonzero() {
        let t = alg.ghost(a).mul(&alg.ghost(b)).mul(&x.i_ghost(c));
        out.add_scaled(&t, &(f * &Scalar::ratio(-1, 2)));
    }
    out
}

/// Residuals of the classical splitting `D = δ + 2∂` on probes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub charge_square: CheckOutcome,
    pub d_squared: CheckOutcome,
    pub split: CheckOutcome,
    pub delta_squared: CheckOutcome,
    pub koszul_squared: CheckOutcome,
    pub anticommutator: CheckOutcome,
}

impl Splitting {
    pub fn passed(&self) -> bool {
        self.outcomes().iter().all(|(_, o)| o.passed)
    }

    pub fn outcomes(&self) -> [(&'static str, &CheckOutcome); 6] {
        [
            ("{theta, theta} = 0", &self.charge_square),
            ("D^2 = 0", &self.d_squared),
            ("D - delta - 2 del = 0", &self.split),
            ("delta^2 = 0", &self.delta_squared),
            ("del^2 = 0", &self.koszul_squared),
            ("delta del + del delta = 0", &self.anticommutator),
        ]
    }
}

/// Evaluates `{θ,θ}` and the splitting identities on the probes.
pub fn check_classical_splitting(alg: &BrstAlgebra, j: &MomentMap, theta: &SuperElement, probes: &[SuperElement]) -> Splitting {
    let mut s = Splitting {
        charge_square: CheckOutcome::start(),
        d_squared: CheckOutcome::start(),
        split: CheckOutcome::start(),
        delta_squared: CheckOutcome::start(),
        koszul_squared: CheckOutcome::start(),
        anticommutator: CheckOutcome::start(),
    };
    s.charge_square.record(|| "theta".into(), &alg.graded_poisson(theta, theta));
    let two = Scalar::from_i64(2);
    for (k, x) in probes.iter().enumerate() {
        let name = || format!("probe {k} ({})", x.to_source());
        let d = brst_diff(alg, theta, x);
        let delta = ce_codifferential(alg, j, x);
        let del = koszul_diff(j, x);
        s.d_squared.record(name, &brst_diff(alg, theta, &d));
        s.split.record(name, &d.sub(&delta).sub(&del.scale(&two)));
        s.delta_squared.record(name, &ce_codifferential(alg, j, &delta));
        s.koszul_squared.record(name, &koszul_diff(j, &del));
        s.anticommutator.record(name, &koszul_diff(j, &delta).add(&ce_codifferential(alg, j, &del)));
    }
    s
}

/// The transferred contraction together with the closed-form maps.
#[derive(Clone, Debug)]
pub struct ClassicalReduction {
    /// Contraction of `(C(𝔤, C(Z)), d)` and `(𝒜, D)` from the first lemma.
    pub contraction: Contraction<SuperElement, SuperElement>,
    /// `H = ½h Σ_{j≤ℓ} (−½)^j (hδ + δh)^j`.
    pub closed_h: Operator<SuperElement, SuperElement>,
    /// `Φ = prol − H(δ prol − prol d)`.
    pub closed_phi: Operator<SuperElement, SuperElement>,
    /// `d = res δ prol`.
    pub d: Operator<SuperElement, SuperElement>,
}

/// The Koszul contraction rescaled to `(𝒜, 2∂)`: `h/2`.
pub fn doubled_koszul(kz: &Arc<Koszul>) -> Contraction<SuperElement, SuperElement> {
    let c = kz.contraction();
    Contraction {
        h: c.h.scaled(Scalar::ratio(1, 2)).named("h/2"),
        d_y: c.d_y.scaled(Scalar::from_i64(2)).named("2∂"),
        ..c
    }
}

/// `δ` and `d = res δ prol` as operators.
pub fn ce_operators(
    alg: &BrstAlgebra,
    kz: &Arc<Koszul>,
) -> (Operator<SuperElement, SuperElement>, Operator<SuperElement, SuperElement>) {
    let (a1, j1) = (alg.clone(), kz.moment().clone());
    let delta = Operator::new("δ", 1, move |x: &SuperElement| Ok(ce_codifferential(&a1, &j1, x))).raising(kz.ell());
    let (kz2, d2) = (kz.clone(), delta.clone());
    let d = Operator::new("d", 1, move |x: &SuperElement| kz2.res(&d2.apply(&kz2.prol(x)?)?)).raising(kz.ell());
    (delta, d)
}

/// Builds the classical transfer with the first perturbation lemma and the
/// closed forms for cross-checking.
pub fn classical_reduction(
    alg: &BrstAlgebra,
    kz: &Arc<Koszul>,
    xs: &[SuperElement],
    ys: &[SuperElement],
) -> Result<ClassicalReduction> {
    let base = doubled_koszul(kz);
    let (delta, d) = ce_operators(alg, kz);
    let contraction = perturb_v1(&base, &delta, &d, xs, ys)?;
    let (closed_h, closed_phi) = closed_forms(kz, &base.h, &delta, &d);
    Ok(ClassicalReduction { contraction, closed_h, closed_phi, d })
}

/// `H = h′ Σ_{j≤ℓ} (−(h′t + t h′))^j` and `Φ = prol − H(t prol − prol t_X)`
/// for a homotopy `h′` and a perturbation `t`.
pub fn closed_forms(
    kz: &Arc<Koszul>,
    h: &Operator<SuperElement, SuperElement>,
    t: &Operator<SuperElement, SuperElement>,
    t_x: &Operator<SuperElement, SuperElement>,
) -> (Operator<SuperElement, SuperElement>, Operator<SuperElement, SuperElement>) {
    let ell = kz.ell();
    let (h1, t1) = (h.clone(), t.clone());
    let big_h = Operator::new("H", -1, move |x: &SuperElement| {
        let mut acc = x.clone();
        let mut term = x.clone();
        for _ in 0..ell {
            term = h1.apply(&t1.apply(&term)?)?.add(&t1.apply(&h1.apply(&term)?)?).neg();
            acc = acc.add(&term);
        }
        h1.apply(&acc)
    });
    let (kz2, hh, t2, tx) = (kz.clone(), big_h.clone(), t.clone(), t_x.clone());
    let phi = Operator::new("Φ", 0, move |x: &SuperElement| {
        let px = kz2.prol(x)?;
        let inner = t2.apply(&px)?.sub(&kz2.prol(&tx.apply(x)?)?);
        Ok(px.sub(&hh.apply(&inner)?))
    });
    (big_h, phi)
}

/// `L^z_a f = res L_a prol f` for every `a`; an invariant has all of them zero.
pub fn reduced_action(alg: &BrstAlgebra, kz: &Koszul, f: &Poly) -> Result<Vec<Poly>> {
    let x = kz.prol(&alg.poly(f.clone()))?;
    (0..kz.ell())
        .map(|a| {
            let y = kz.res(&rep_action(alg, kz.moment(), a, &x))?;
            Ok(y.coeff(0).map(|s| s.coeff(0).clone()).unwrap_or_else(|| Poly::zero(alg.ctx())))
        })
        .collect()
}

/// Fails with an invariance error naming the first nonzero `L^z_a f`.
pub fn certify_invariant(alg: &BrstAlgebra, kz: &Koszul, f: &Poly) -> Result<()> {
    for (a, r) in reduced_action(alg, kz, f)?.into_iter().enumerate() {
        if !r.is_zero() {
            return Err(Error::Invariance(format!("L_{} ({f}) = {r}", a + 1)));
        }
    }
    Ok(())
}

/// `{f, g}_red = res{Φ f, Φ g}` for invariant normal forms.
pub fn reduced_poisson(
    alg: &BrstAlgebra,
    kz: &Koszul,
    phi: &Operator<SuperElement, SuperElement>,
    f: &Poly,
    g: &Poly,
) -> Result<Poly> {
    certify_invariant(alg, kz, f)?;
    certify_invariant(alg, kz, g)?;
    let (pf, pg) = (phi.apply(&alg.poly(f.clone()))?, phi.apply(&alg.poly(g.clone()))?);
    let r = kz.res(&alg.graded_poisson(&pf, &pg))?;
    Ok(degree_zero_part(&r))
}

/// The ghost-free, ν⁰ coefficient.
pub fn degree_zero_part(x: &SuperElement) -> Poly {
    x.coeff(0).map(|s| s.coeff(0).clone()).unwrap_or_else(|| Poly::zero(x.ctx()))
}
