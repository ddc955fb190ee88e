//! Quantum BRST: the charge `θ_ν`, the operators `R`, `q`, `u`, the quantum
//! Koszul differential `∂_ν`, the quantum Chevalley–Eilenberg differential
//! `δ_ν`, and the splitting `D_ν = δ_ν + 2∂_ν`.

use alloc::format;

use crate::check::CheckOutcome;
use crate::error::Result;
use crate::operator::Operator;
use crate::poisson::MomentMap;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::Series;
use crate::superalg::{BrstAlgebra, SuperElement};

use crate::classical::cubic_ghost_term;

/// `θ_ν = −¼ Σ f_ab^c e^a e^b e_c + Σ J_a e^a + ½ν Σ f_ab^b e^a`.
pub fn quantum_charge(alg: &BrstAlgebra, j: &MomentMap) -> SuperElement {
    let mut out = cubic_ghost_term(alg, j);
    for a in 0..j.dim() {
        out = out.add(&alg.element(1 << a, j.component(a).clone()));
        let tr = j.lie.trace(a);
        if !tr.is_zero() && alg.order >= 1 {
            let c = Poly::constant(alg.ctx(), &tr * &Scalar::ratio(1, 2));
            out = out.add(&SuperElement::term(alg.ctx(), alg.ell, 1 << a, Series::nu_power(c, 1, alg.order)));
        }
    }
    out
}

/// `D_ν = ν^{-1} ad_∗ θ_ν`.
pub fn quantum_brst_diff(alg: &BrstAlgebra, theta: &SuperElement, x: &SuperElement) -> Result<SuperElement> {
    alg.nu_inverse_commutator(theta, x)
}

/// `R(F) = Σ_a i^a(F) ∗ J_a`.
pub fn op_r(alg: &BrstAlgebra, j: &MomentMap, x: &SuperElement) -> SuperElement {
    let mut out = alg.zero();
    for a in 0..j.dim() {
        out = out.add(&alg.star(&x.i_anti(a), &alg.poly(j.component(a).clone())));
    }
    out
}

/// `q(F) = −½ Σ f_ab^c e_c i^a i^b(F)`.
pub fn op_q(alg: &BrstAlgebra, j: &MomentMap, x: &SuperElement) -> SuperElement {
    let mut out = alg.zero();
    for (a, b, c, f) in j.lie.nonzero() {
        let t = alg.antighost(c).mul(&x.i_anti(b).i_anti(a));
        out.add_scaled(&t, &(f * &Scalar::ratio(-1, 2)));
    }
    out
}

/// `u(F) = Σ f_ab^b i^a(F)`.
pub fn op_u(alg: &BrstAlgebra, j: &MomentMap, x: &SuperElement) -> SuperElement {
    let mut out = alg.zero();
    for a in 0..j.dim() {
        let tr = j.lie.trace(a);
        if !tr.is_zero() {
            out.add_scaled(&x.i_anti(a), &tr);
        }
    }
    out
}

/// `∂_ν = R + ν(½u − q)`.
pub fn quantum_koszul(alg: &BrstAlgebra, j: &MomentMap, x: &SuperElement) -> SuperElement {
    let corr = op_u(alg, j, x).scale(&Scalar::ratio(1, 2)).sub(&op_q(alg, j, x));
    op_r(alg, j, x).add(&corr.map_coeffs(|s| s.shift_up(1)))
}

/// `𝕃_a(F) = ν^{-1}[J_a, F]_∗ + Σ f_ab^c e_c i^b(F)`.
pub fn quantum_rep_action(alg: &BrstAlgebra, j: &MomentMap, a: usize, x: &SuperElement) -> Result<SuperElement> {
    let mut out = alg.nu_inverse_commutator(&alg.poly(j.component(a).clone()), x)?;
    for (a2, b, c, f) in j.lie.nonzero() {
        if a2 == a {
            out.add_scaled(&alg.antighost(c).mul(&x.i_anti(b)), f);
        }
    }
    Ok(out)
}

/// `δ_ν = Σ e^a 𝕃_a − ½ Σ f_ab^c e^a e^b i_c`.
pub fn quantum_ce(alg: &BrstAlgebra, j: &MomentMap, x: &SuperElement) -> Result<SuperElement> {
    let mut out = alg.zero();
    for a in 0..j.dim() {
        out = out.add(&alg.ghost(a).mul(&quantum_rep_action(alg, j, a, x)?));
    }
    for (a, b, c, f) in j.lie.nonzero() {
        let t = alg.ghost(a).mul(&alg.ghost(b)).mul(&x.i_ghost(c));
        out.add_scaled(&t, &(f * &Scalar::ratio(-1, 2)));
    }
    Ok(out)
}

/// `∂_ν`, `∂_ν − ∂` and `δ_ν` as operators.
pub struct QuantumOperators {
    pub koszul: Operator<SuperElement, SuperElement>,
    pub koszul_correction: Operator<SuperElement, SuperElement>,
    pub ce: Operator<SuperElement, SuperElement>,
}

pub fn quantum_operators(alg: &BrstAlgebra, j: &MomentMap) -> QuantumOperators {
    let (a1, j1) = (alg.clone(), j.clone());
    let koszul = Operator::new("∂_ν", 1, move |x: &SuperElement| Ok(quantum_koszul(&a1, &j1, x)));
    let (a2, j2) = (alg.clone(), j.clone());
    let koszul_correction = Operator::new("(∂_ν - ∂)", 1, move |x: &SuperElement| {
        Ok(quantum_koszul(&a2, &j2, x).sub(&crate::koszul::koszul_diff(&j2, x)))
    })
    .raising(alg.order);
    let (a3, j3) = (alg.clone(), j.clone());
    let ce = Operator::new("δ_ν", 1, move |x: &SuperElement| quantum_ce(&a3, &j3, x)).raising(j.dim());
    QuantumOperators { koszul, koszul_correction, ce }
}

/// Residuals of `θ_ν ∗ θ_ν = 0` and of `D_ν = δ_ν + 2∂_ν` with both parts
/// differentials that anticommute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumSplitting {
    pub charge_square: CheckOutcome,
    pub d_squared: CheckOutcome,
    pub split: CheckOutcome,
    pub delta_squared: CheckOutcome,
    pub koszul_squared: CheckOutcome,
    pub anticommutator: CheckOutcome,
}

impl QuantumSplitting {
    pub fn passed(&self) -> bool {
        self.outcomes().iter().all(|(_, o)| o.passed)
    }

    pub fn outcomes(&self) -> [(&'static str, &CheckOutcome); 6] {
        [
            ("theta_nu * theta_nu = 0", &self.charge_square),
            ("D_nu^2 = 0", &self.d_squared),
            ("D_nu - delta_nu - 2 del_nu = 0", &self.split),
            ("delta_nu^2 = 0", &self.delta_squared),
            ("del_nu^2 = 0", &self.koszul_squared),
            ("delta_nu del_nu + del_nu delta_nu = 0", &self.anticommutator),
        ]
    }
}

pub fn check_quantum_splitting(
    alg: &BrstAlgebra,
    j: &MomentMap,
    theta: &SuperElement,
    probes: &[SuperElement],
) -> QuantumSplitting {
    let mut s = QuantumSplitting {
        charge_square: CheckOutcome::start(),
        d_squared: CheckOutcome::start(),
        split: CheckOutcome::start(),
        delta_squared: CheckOutcome::start(),
        koszul_squared: CheckOutcome::start(),
        anticommutator: CheckOutcome::start(),
    };
    s.charge_square.record(|| "theta_nu".into(), &alg.star(theta, theta));
    let two = Scalar::from_i64(2);
    for (k, x) in probes.iter().enumerate() {
        let name = || format!("probe {k} ({})", x.to_source());
        let del = quantum_koszul(alg, j, x);
        s.koszul_squared.record(name, &quantum_koszul(alg, j, &del));
        let eval = || -> Result<[SuperElement; 4]> {
            let d = quantum_brst_diff(alg, theta, x)?;
            let delta = quantum_ce(alg, j, x)?;
            Ok([
                quantum_brst_diff(alg, theta, &d)?,
                d.sub(&delta).sub(&del.scale(&two)),
                quantum_ce(alg, j, &delta)?,
                quantum_koszul(alg, j, &delta).add(&quantum_ce(alg, j, &del)?),
            ])
        };
        let slots = [&mut s.d_squared, &mut s.split, &mut s.delta_squared, &mut s.anticommutator];
        match eval() {
            Ok(res) => {
                for (slot, r) in slots.into_iter().zip(&res) {
                    slot.record(name, r);
                }
            }
            Err(e) => {
                for slot in slots {
                    slot.fail(format!("{}: {e}", name()));
                }
            }
        }
    }
    s
}
