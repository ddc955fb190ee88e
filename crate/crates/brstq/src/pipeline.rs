//! Runs every check of a scenario in order and assembles the report.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use brstq_core::check::{CheckOutcome, ResidualSummary};
use brstq_core::classical::{
    certify_invariant, check_classical_splitting, classical_charge, classical_reduction, reduced_poisson, ClassicalReduction,
};
use brstq_core::koszul::{slice_label, Koszul};
use brstq_core::lie::LieAlgebraData;
use brstq_core::operator::ContractionChecks;
use brstq_core::poisson::{
    check_calibration, check_equivariance, check_quantum_covariance, check_strong_invariance, torus_action, MomentMap,
    PoissonData,
};
use brstq_core::quantum::{check_quantum_splitting, quantum_charge};
use brstq_core::reduction::{
    certify_quantum_invariant, classical_action, deformed_restriction, ghost_free, invariant_generators, quantized_action,
    quantum_reduction, quotient_product, QuantumReduction,
};
use brstq_core::superalg::{all_masks, masks_with, BrstAlgebra, SuperElement};
use brstq_core::{probe, Poly, Scalar, Series, VarContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ConfigError, Scenario, ScenarioConfig, Stage};
use crate::report::{CheckRecord, Report, Status, Verdict};

struct CheckDef {
    id: &'static str,
    stage: Stage,
    anchor: &'static str,
}

const fn def(id: &'static str, stage: Stage, anchor: &'static str) -> CheckDef {
    CheckDef { id, stage, anchor }
}

const CHECKS: &[CheckDef] = &[
    def("load.poisson", Stage::Load, "Poisson matrix antisymmetric and invertible"),
    def("load.jacobi", Stage::Load, "structure constants satisfy Jacobi"),
    def("load.equivariance", Stage::Load, "{J_a, J_b} = f_ab^c J_c"),
    def("load.calibration", Stage::Load, "{J_a, x} = torus generator applied to x"),
    def("invariance.covariance", Stage::Invariance, "J_a * J_b - J_b * J_a = nu f_ab^c J_c"),
    def("invariance.strong", Stage::Invariance, "J_a * f - f * J_a = nu {J_a, f}"),
    def("koszul.acyclicity", Stage::Acyclicity, "H_i(Koszul) = 0 for i >= 1 up to degree d"),
    def("contraction.res-prol", Stage::Contraction, "res prol = id"),
    def("contraction.homotopy", Stage::Contraction, "del h + h del = id - prol res"),
    def("contraction.chain", Stage::Contraction, "res del = 0 and del prol = 0"),
    def("contraction.side", Stage::Contraction, "h h = 0, h prol = 0, res h = 0"),
    def("classical.charge", Stage::Classical, "{theta, theta} = 0"),
    def("classical.d-squared", Stage::Classical, "D D = 0"),
    def("classical.split", Stage::Classical, "D = delta + 2 del"),
    def("classical.delta-squared", Stage::Classical, "delta delta = 0"),
    def("classical.del-squared", Stage::Classical, "del del = 0"),
    def("classical.anticommutator", Stage::Classical, "delta del + del delta = 0"),
    def("classical.reduction", Stage::Classical, "transferred contraction, closed forms, Phi = prol"),
    def("quantum.charge", Stage::Quantum, "theta_nu * theta_nu = 0"),
    def("quantum.d-squared", Stage::Quantum, "D_nu D_nu = 0"),
    def("quantum.split", Stage::Quantum, "D_nu = delta_nu + 2 del_nu"),
    def("quantum.delta-squared", Stage::Quantum, "delta_nu delta_nu = 0"),
    def("quantum.del-squared", Stage::Quantum, "del_nu del_nu = 0"),
    def("quantum.anticommutator", Stage::Quantum, "delta_nu del_nu + del_nu delta_nu = 0"),
    def("quantum.associativity", Stage::Quantum, "(x * y) * z = x * (y * z) on the super algebra"),
    def("deformed.closed-form", Stage::Deformed, "perturbed res = res (id + (del_nu - del) h)^-1"),
    def("deformed.contraction", Stage::Deformed, "(res_nu, prol, h_nu) contracts (A[[nu]], del_nu)"),
    def("deformed.classical-limit", Stage::Deformed, "res_nu = res at nu = 0"),
    def("deformed.constraints", Stage::Deformed, "res_nu(J_a) = 0"),
    def("deformed.representation", Stage::Deformed, "res_nu L_nu prol = res L prol"),
    def("reduction.contraction", Stage::Reduction, "contraction of (C(g, C(Z)[[nu]]), d) and (A[[nu]], D_nu)"),
    def("reduction.closed-forms", Stage::Reduction, "H_nu and Phi_nu equal their closed forms"),
    def("reduction.equivariant", Stage::Reduction, "Phi_nu = prol and H_nu = h_nu / 2"),
    def("reduction.classical-limit", Stage::Reduction, "H_nu = classical H at nu = 0"),
    def("star.generators", Stage::Star, "generators are invariant"),
    def("star.unit", Stage::Star, "f * 1 = f = 1 * f"),
    def("star.classical-limit", Stage::Star, "nu^0 part of f * g = res(f g)"),
    def("star.first-order", Stage::Star, "f * g - g * f = nu {f, g}_red + O(nu^2)"),
    def("star.associativity", Stage::Star, "(f * g) * h = f * (g * h) mod nu^(N+1)"),
    def("star.generic-route", Stage::Star, "res_nu(prol f * prol g) = res_nu(Phi_nu f * Phi_nu g)"),
    def("star.invariant-output", Stage::Star, "quantized action kills f * g"),
    def("star.ideal", Stage::Star, "f * g unchanged by adding u * J_a to a representative"),
    def("star.cohomology", Stage::Star, "[a] * [d c + b] - [a] * [b] is exact; [1] is the unit"),
];

/// Checks that need the equivariant reduction.
fn needs_reduction(id: &str) -> bool {
    id == "classical.reduction" || CHECKS.iter().any(|c| c.id == id && c.stage.needs_reduction())
}

/// Probes for the identities evaluated on deformed data and products.
const SMALL_PROBES: usize = 20;
const TRIPLES: usize = 100;
const MIXED_MASKS: usize = 3;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub order: Option<usize>,
    pub degree: Option<u32>,
    /// Report only this stage (earlier stages still run as prerequisites).
    pub only: Option<Stage>,
}

enum Entry {
    Ran(CheckOutcome, u64),
    Not(Status, String),
}

#[derive(Default)]
struct StageOut {
    entries: BTreeMap<&'static str, Entry>,
}

impl StageOut {
    /// Runs `f` unless a check of this stage has already failed.
    fn run(&mut self, id: &'static str, f: impl FnOnce() -> CheckOutcome) {
        if self.first_failure().is_some() {
            return;
        }
        let t = Instant::now();
        let o = f();
        self.entries.insert(id, Entry::Ran(o, t.elapsed().as_millis() as u64));
    }

    /// Several outcomes produced together; the time is split evenly.
    fn group(&mut self, ids: &[&'static str], f: impl FnOnce() -> Vec<CheckOutcome>) {
        let t = Instant::now();
        let outs = f();
        let ms = t.elapsed().as_millis() as u64 / ids.len().max(1) as u64;
        for (id, o) in ids.iter().zip(outs) {
            self.entries.insert(id, Entry::Ran(o, ms));
        }
    }

    fn not(&mut self, id: &'static str, status: Status, note: impl Into<String>) {
        self.entries.insert(id, Entry::Not(status, note.into()));
    }

    fn first_failure(&self) -> Option<&'static str> {
        self.entries.iter().find(|(_, e)| matches!(e, Entry::Ran(o, _) if !o.passed)).map(|(id, _)| *id)
    }
}

fn failed(witness: impl Into<String>) -> CheckOutcome {
    let mut o = CheckOutcome::start();
    o.fail(witness.into());
    o
}

fn passed_once() -> CheckOutcome {
    CheckOutcome { probes: 1, ..CheckOutcome::start() }
}

struct State {
    sc: Scenario,
    rng: ChaCha8Rng,
    poisson: Option<PoissonData>,
    moment: Option<MomentMap>,
    kz: Option<Arc<Koszul>>,
    classical: Option<ClassicalReduction>,
    red: Option<QuantumReduction>,
}

impl State {
    fn cfg(&self) -> &ScenarioConfig {
        &self.sc.config
    }

    fn ctx(&self) -> Arc<VarContext> {
        self.sc.ctx.clone()
    }

    fn ell(&self) -> usize {
        self.cfg().lie.dim
    }

    fn poisson(&self) -> &PoissonData {
        self.poisson.as_ref().expect("load stage ran")
    }

    fn moment(&self) -> &MomentMap {
        self.moment.as_ref().expect("load stage ran")
    }

    fn kz(&self) -> &Arc<Koszul> {
        self.kz.as_ref().expect("acyclicity stage ran")
    }

    fn classical_alg(&self) -> BrstAlgebra {
        BrstAlgebra::new(self.poisson().clone(), self.ell(), 0)
    }

    fn quantum_alg(&self) -> BrstAlgebra {
        BrstAlgebra::new(self.poisson().clone(), self.ell(), self.cfg().order).with_clifford(self.cfg().clifford.into())
    }

    /// Element with series coefficients on every mask, coefficient degree
    /// capped at `cap` and so that the Koszul total degree stays within `d`.
    fn element(&mut self, order: usize, cap: u32, ghosts_only: bool) -> SuperElement {
        let ell = self.ell();
        let ctx = self.ctx();
        let k = self.moment().components.iter().filter_map(|p| p.degree()).max().unwrap_or(1);
        let d = self.cfg().degree;
        let mut x = SuperElement::zero(&ctx, ell, order);
        let anti = if ghosts_only { 0 } else { ell as u32 };
        for i in 0..=anti {
            let Some(room) = d.checked_sub(k * i) else { continue };
            let masks: Vec<u32> = (0..=ell as u32).flat_map(|g| masks_with(ell, g, i)).collect();
            x = x.add(&probe::element_series(&mut self.rng, &ctx, ell, order, &masks, cap.min(room), 2));
        }
        x
    }

    /// Sparse element on a few random masks of mixed ghost content.
    fn mixed(&mut self, order: usize) -> SuperElement {
        let ell = self.ell();
        let ctx = self.ctx();
        let masks = all_masks(ell);
        let mut x = SuperElement::zero(&ctx, ell, order);
        for _ in 0..MIXED_MASKS {
            let m = masks[self.rng.gen_range(0..masks.len())];
            x.add_term(m, &probe::series(&mut self.rng, &ctx, 2, order, 2), &Scalar::one());
        }
        x
    }

    fn elements(&mut self, count: usize, order: usize, cap: u32) -> Vec<SuperElement> {
        (0..count).map(|_| self.element(order, cap, false)).collect()
    }

    /// Ghost-valued normal forms.
    fn cochains(&mut self, count: usize, order: usize, cap: u32) -> Vec<SuperElement> {
        (0..count)
            .map(|_| {
                let x = self.element(order, cap, true);
                self.kz().res(&x).expect("probe within the degree bound")
            })
            .collect()
    }
}

fn contraction_outcomes(c: ContractionChecks) -> Vec<CheckOutcome> {
    let mut chain = c.chain_p;
    chain.absorb(c.chain_i);
    let mut side = c.sc1;
    side.absorb(c.sc2);
    side.absorb(c.sc3);
    vec![c.pi_identity, c.homotopy, chain, side]
}

/// All axioms and side conditions in one outcome.
fn contraction_outcome(c: ContractionChecks) -> CheckOutcome {
    let mut out = CheckOutcome::start();
    for o in contraction_outcomes(c) {
        out.absorb(o);
    }
    out
}

fn stage_load(st: &mut State, out: &mut StageOut) {
    let ctx = st.ctx();
    match PoissonData::new(&ctx, st.sc.lambda.clone()) {
        Ok(p) => {
            out.run("load.poisson", passed_once);
            st.poisson = Some(p);
        }
        Err(e) => out.run("load.poisson", || failed(e.to_string())),
    }
    let lie = match LieAlgebraData::from_entries(st.ell(), &st.sc.structure) {
        Ok(lie) => {
            out.run("load.jacobi", passed_once);
            lie
        }
        Err(e) => {
            out.run("load.jacobi", || failed(e.to_string()));
            return;
        }
    };
    let Some(poisson) = st.poisson.clone() else { return };
    let moment = match MomentMap::new(lie, st.sc.moment.clone()) {
        Ok(m) => m.with_justification(st.cfg().justification.clone()),
        Err(e) => {
            out.run("load.equivariance", || failed(e.to_string()));
            return;
        }
    };
    out.run("load.equivariance", || check_equivariance(&moment, &poisson));
    if ctx.has_weights() {
        out.run("load.calibration", || check_calibration(&moment, &poisson, &torus_action(&ctx)));
    } else {
        out.not("load.calibration", Status::Skipped, "no torus weights declared");
    }
    st.moment = Some(moment);
}

fn stage_invariance(st: &mut State, out: &mut StageOut) {
    let ctx = st.ctx();
    let mut probes: Vec<Poly> = (0..ctx.len()).map(|i| Poly::var(&ctx, i)).collect();
    probes.extend((0..SMALL_PROBES).map(|_| probe::poly(&mut st.rng, &ctx, 3, 3)));
    let order = st.cfg().order;
    out.run("invariance.covariance", || check_quantum_covariance(st.moment(), st.poisson(), order));
    out.run("invariance.strong", || check_strong_invariance(st.moment(), st.poisson(), order, &probes));
}

fn stage_acyclicity(st: &mut State, out: &mut StageOut) {
    let d = st.cfg().degree;
    let t = Instant::now();
    let kz = match Koszul::new(st.moment(), d) {
        Ok(kz) => kz,
        Err(e) => {
            out.run("koszul.acyclicity", || failed(e.to_string()));
            return;
        }
    };
    let acyc = kz.acyclicity();
    let mut o = CheckOutcome::start();
    o.probes = acyc.slices.len();
    for s in &acyc.slices {
        for (i, &h) in s.homology.iter().enumerate().skip(1) {
            if h > 0 {
                o.passed = false;
                o.residual.merge(ResidualSummary { nonzero_coefficients: h, max_degree: s.key.degree });
                if o.witness.is_none() {
                    o.witness = Some(format!(
                        "complete intersection hypothesis failed: dim H_{i} = {h} in slice {}",
                        slice_label(&s.key)
                    ));
                }
            }
        }
    }
    out.entries.insert("koszul.acyclicity", Entry::Ran(o, t.elapsed().as_millis() as u64));
    st.kz = Some(Arc::new(kz));
}

fn stage_contraction(st: &mut State, out: &mut StageOut) {
    let n = st.cfg().probes;
    let ell = st.ell();
    let ctx = st.ctx();
    let k = st.kz().component_degree();
    let d = st.cfg().degree;
    let mut ys = Vec::new();
    for i in 0..=ell as u32 {
        let Some(room) = d.checked_sub(k * i) else { continue };
        let masks: Vec<u32> = (0..=ell as u32).flat_map(|g| masks_with(ell, g, i)).collect();
        for _ in 0..n {
            ys.push(probe::element(&mut st.rng, &ctx, ell, 0, &masks, room.min(4), 3));
        }
    }
    let xs = st.cochains(n, 0, 4);
    let c = st.kz().contraction();
    out.group(&["contraction.res-prol", "contraction.homotopy", "contraction.chain", "contraction.side"], || {
        contraction_outcomes(c.check(&xs, &ys))
    });
}

fn stage_classical(st: &mut State, out: &mut StageOut) {
    let alg = st.classical_alg();
    let theta = classical_charge(&alg, st.moment());
    let probes = st.elements(st.cfg().probes, 0, 3);
    let ids = [
        "classical.charge",
        "classical.d-squared",
        "classical.split",
        "classical.delta-squared",
        "classical.del-squared",
        "classical.anticommutator",
    ];
    out.group(&ids, || {
        let s = check_classical_splitting(&alg, st.moment(), &theta, &probes);
        s.outcomes().into_iter().map(|(_, o)| o.clone()).collect()
    });
    if !st.cfg().reduction {
        return;
    }
    let ys = st.elements(SMALL_PROBES, 0, 3);
    let xs = st.cochains(SMALL_PROBES, 0, 3);
    let kz = st.kz().clone();
    let mut built = None;
    out.run("classical.reduction", || {
        let red = match classical_reduction(&alg, &kz, &xs, &ys) {
            Ok(r) => r,
            Err(e) => return failed(e.to_string()),
        };
        let mut o = contraction_outcome(red.contraction.check(&xs, &ys));
        for (k, y) in ys.iter().enumerate() {
            let r = red.contraction.h.apply(y).and_then(|h| Ok(h.sub(&red.closed_h.apply(y)?)));
            record(&mut o, || format!("H on probe {k}"), r);
        }
        for (k, x) in xs.iter().enumerate() {
            let phi = red.contraction.i.apply(x);
            let r = phi.as_ref().map_err(Clone::clone).and_then(|p| Ok(p.sub(&red.closed_phi.apply(x)?)));
            record(&mut o, || format!("Phi closed form on cochain {k}"), r);
            let r = phi.and_then(|p| Ok(p.sub(&kz.prol(x)?)));
            record(&mut o, || format!("Phi - prol on cochain {k}"), r);
        }
        built = Some(red);
        o
    });
    st.classical = built;
}

fn record(o: &mut CheckOutcome, input: impl FnOnce() -> String, r: brstq_core::Result<SuperElement>) {
    match r {
        Ok(x) => o.record(input, &x),
        Err(e) => o.fail(format!("{}: {e}", input())),
    }
}

fn stage_quantum(st: &mut State, out: &mut StageOut) {
    let alg = st.quantum_alg();
    let theta = quantum_charge(&alg, st.moment());
    let order = st.cfg().order;
    let probes = st.elements(st.cfg().probes, order, 3);
    let ids = [
        "quantum.charge",
        "quantum.d-squared",
        "quantum.split",
        "quantum.delta-squared",
        "quantum.del-squared",
        "quantum.anticommutator",
    ];
    out.group(&ids, || {
        let s = check_quantum_splitting(&alg, st.moment(), &theta, &probes);
        s.outcomes().into_iter().map(|(_, o)| o.clone()).collect()
    });
    let triples: Vec<[SuperElement; 3]> =
        (0..TRIPLES).map(|_| [st.mixed(order), st.mixed(order), st.mixed(order)]).collect();
    out.run("quantum.associativity", || {
        let residuals: Vec<SuperElement> = triples
            .par_iter()
            .map(|[x, y, z]| alg.star(&alg.star(x, y), z).sub(&alg.star(x, &alg.star(y, z))))
            .collect();
        let mut o = CheckOutcome::start();
        for (k, r) in residuals.iter().enumerate() {
            o.record(|| format!("triple {k} ({})", triples[k][0].to_source()), r);
        }
        o
    });
}

fn stage_deformed(st: &mut State, out: &mut StageOut) {
    let alg = st.quantum_alg();
    let order = st.cfg().order;
    let kz = st.kz().clone();
    let ys = st.elements(SMALL_PROBES, order, 3);
    let xs = st.cochains(SMALL_PROBES, order, 3);
    let t = Instant::now();
    let def = match deformed_restriction(&alg, &kz, &xs, &ys) {
        Ok(d) => d,
        Err(e) => {
            out.run("deformed.contraction", || failed(e.to_string()));
            return;
        }
    };
    let build_ms = t.elapsed().as_millis() as u64;
    out.run("deformed.closed-form", || {
        let mut o = CheckOutcome::start();
        for (k, y) in ys.iter().enumerate() {
            record(&mut o, || format!("probe {k}"), def.res(y).and_then(|r| Ok(r.sub(&def.closed_res.apply(y)?))));
        }
        o
    });
    out.run("deformed.contraction", || contraction_outcome(def.contraction.check(&xs, &ys)));
    if let Some(Entry::Ran(_, ms)) = out.entries.get_mut("deformed.contraction") {
        *ms += build_ms;
    }
    out.run("deformed.classical-limit", || {
        let mut o = CheckOutcome::start();
        for (k, y) in ys.iter().enumerate() {
            let r = def.res(y).and_then(|r| Ok(r.nu_coeff(0).sub(&kz.res(&y.nu_coeff(0))?.nu_coeff(0))));
            record(&mut o, || format!("probe {k}"), r);
        }
        o
    });
    out.run("deformed.constraints", || {
        let mut o = CheckOutcome::start();
        for a in 0..kz.ell() {
            let ja = alg.poly(kz.moment().component(a).clone());
            record(&mut o, || format!("J_{}", a + 1), def.res(&ja));
        }
        o
    });
    let fs: Vec<SuperElement> = st.cochains(SMALL_PROBES, order, 3).iter().map(|x| x.filter(|m| m == 0)).collect();
    out.run("deformed.representation", || {
        let mut o = CheckOutcome::start();
        for (k, f) in fs.iter().enumerate() {
            for a in 0..kz.ell() {
                let r = quantized_action(&alg, &kz, &def, a, f).and_then(|q| Ok(q.sub(&classical_action(&alg, &kz, a, f)?)));
                record(&mut o, || format!("L_{} on probe {k} ({})", a + 1, f.to_source()), r);
            }
        }
        o
    });
}

fn stage_reduction(st: &mut State, out: &mut StageOut) {
    let alg = st.quantum_alg();
    let order = st.cfg().order;
    let kz = st.kz().clone();
    let ys = st.elements(SMALL_PROBES, order, 3);
    let xs = st.cochains(SMALL_PROBES, order, 3);
    let t = Instant::now();
    let red = match quantum_reduction(&alg, &kz, &xs, &ys) {
        Ok(r) => r,
        Err(e) => {
            out.run("reduction.contraction", || failed(e.to_string()));
            return;
        }
    };
    let build_ms = t.elapsed().as_millis() as u64;
    let c = &red.contraction;
    out.run("reduction.contraction", || contraction_outcome(c.check(&xs, &ys)));
    if let Some(Entry::Ran(_, ms)) = out.entries.get_mut("reduction.contraction") {
        *ms += build_ms;
    }
    out.run("reduction.closed-forms", || {
        let mut o = CheckOutcome::start();
        for (k, y) in ys.iter().enumerate() {
            record(&mut o, || format!("H on probe {k}"), c.h.apply(y).and_then(|h| Ok(h.sub(&red.closed_h.apply(y)?))));
        }
        for (k, x) in xs.iter().enumerate() {
            record(&mut o, || format!("Phi on cochain {k}"), red.phi(x).and_then(|p| Ok(p.sub(&red.closed_phi.apply(x)?))));
        }
        o
    });
    let half = Scalar::ratio(1, 2);
    out.run("reduction.equivariant", || {
        let mut o = CheckOutcome::start();
        for (k, x) in xs.iter().enumerate() {
            record(&mut o, || format!("Phi - prol on cochain {k}"), red.phi(x).and_then(|p| Ok(p.sub(&kz.prol(x)?))));
        }
        for (k, y) in ys.iter().enumerate() {
            let r = c.h.apply(y).and_then(|h| Ok(h.sub(&red.deformed.h(y)?.scale(&half))));
            record(&mut o, || format!("H - h/2 on probe {k}"), r);
        }
        o
    });
    if st.classical.is_none() {
        st.classical = classical_reduction(&st.classical_alg(), &kz, &[], &[]).ok();
    }
    let classical = st.classical.clone();
    out.run("reduction.classical-limit", || {
        let Some(cl) = classical else { return failed("classical transfer unavailable") };
        let mut o = CheckOutcome::start();
        for (k, y) in ys.iter().enumerate() {
            let y0 = y.nu_coeff(0).with_order(0);
            let r = c.h.apply(y).and_then(|h| Ok(h.nu_coeff(0).with_order(0).sub(&cl.contraction.h.apply(&y0)?)));
            record(&mut o, || format!("probe {k}"), r);
        }
        o
    });
    st.red = Some(red);
}

fn stage_star(st: &mut State, out: &mut StageOut) {
    let order = st.cfg().order;
    let kz = st.kz().clone();
    let ctx = st.ctx();
    let calg = st.classical_alg();
    let Some(red) = st.red.clone() else {
        out.run("star.generators", || failed("quantum reduction unavailable"));
        return;
    };
    let alg = red.alg.clone();
    let gens: Vec<Poly> = match &st.sc.generators {
        Some(list) => list.iter().map(|g| kz.normal_form(g)).collect::<Result<_, _>>().unwrap_or_default(),
        None => invariant_generators(&kz, st.cfg().generator_degree).unwrap_or_default(),
    };
    let mut ok = !gens.is_empty();
    out.run("star.generators", || {
        let mut o = CheckOutcome::start();
        if gens.is_empty() {
            o.fail("no invariant generators".into());
        }
        for g in &gens {
            o.probes += 1;
            let res = certify_invariant(&calg, &kz, g)
                .and_then(|_| certify_quantum_invariant(&alg, &kz, &red.deformed, &alg.poly(g.clone())));
            if let Err(e) = res {
                o.fail(e.to_string());
                o.probes -= 1;
            }
        }
        ok &= o.passed;
        o
    });
    if !ok {
        return;
    }
    let gs: Vec<Series> = gens.iter().map(|g| Series::from_poly(g.clone(), order)).collect();
    let prols: Vec<SuperElement> = gs.iter().map(|g| alg.series(g.clone())).collect();
    let n = gs.len();
    let t = Instant::now();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let products: Vec<brstq_core::Result<Series>> =
        pairs.par_iter().map(|&(i, j)| red.star_of_representatives(&prols[i], &prols[j]).map(|r| ghost_free(&r))).collect();
    let products: Vec<Series> = match products.into_iter().collect() {
        Ok(p) => p,
        Err(e) => {
            out.run("star.unit", || failed(e.to_string()));
            return;
        }
    };
    let pair_ms = t.elapsed().as_millis() as u64;
    let prod = |i: usize, j: usize| &products[i * n + j];
    let one = gens.iter().position(|g| *g == Poly::one(&ctx));
    out.run("star.unit", || {
        let mut o = CheckOutcome::start();
        match one {
            Some(u) => {
                for i in 0..n {
                    o.record(|| format!("{} * 1", gens[i]), &(prod(i, u) - &gs[i]));
                    o.record(|| format!("1 * {}", gens[i]), &(prod(u, i) - &gs[i]));
                }
            }
            None => o.fail("1 is not among the generators".into()),
        }
        o
    });
    if let Some(Entry::Ran(_, ms)) = out.entries.get_mut("star.unit") {
        *ms += pair_ms;
    }
    out.run("star.classical-limit", || {
        let mut o = CheckOutcome::start();
        for &(i, j) in &pairs {
            match quotient_product(&calg, &kz, &gens[i], &gens[j]) {
                Ok(p) => o.record(|| format!("({}) * ({})", gens[i], gens[j]), &(prod(i, j).coeff(0) - &p)),
                Err(e) => o.fail(e.to_string()),
            }
        }
        o
    });
    let phi0 = st.classical.as_ref().map(|c| c.closed_phi.clone());
    out.run("star.first-order", || {
        let Some(phi0) = phi0 else { return failed("classical transfer unavailable") };
        let mut o = CheckOutcome::start();
        for &(i, j) in &pairs {
            match reduced_poisson(&calg, &kz, &phi0, &gens[i], &gens[j]) {
                Ok(b) => {
                    let r = &(prod(i, j).coeff(1) - prod(j, i).coeff(1)) - &b;
                    o.record(|| format!("({}, {})", gens[i], gens[j]), &r);
                }
                Err(e) => o.fail(e.to_string()),
            }
        }
        o
    });
    out.run("star.associativity", || {
        let triples: Vec<(usize, usize, usize)> =
            (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect();
        let residuals: Vec<brstq_core::Result<Series>> = triples
            .par_iter()
            .map(|&(i, j, k)| {
                let left = red.star_of_representatives(&alg.series(prod(i, j).clone()), &prols[k])?;
                let right = red.star_of_representatives(&prols[i], &alg.series(prod(j, k).clone()))?;
                Ok(ghost_free(&left.sub(&right)))
            })
            .collect();
        let mut o = CheckOutcome::start();
        for (&(i, j, k), r) in triples.iter().zip(residuals) {
            let label = || format!("({}, {}, {})", gens[i], gens[j], gens[k]);
            match r {
                Ok(r) => o.record(label, &r),
                Err(e) => o.fail(format!("{}: {e}", label())),
            }
        }
        o
    });
    out.run("star.generic-route", || {
        let residuals: Vec<brstq_core::Result<Series>> = pairs
            .par_iter()
            .map(|&(i, j)| Ok(&red.reduced_star_generic(&gs[i], &gs[j])? - prod(i, j)))
            .collect();
        let mut o = CheckOutcome::start();
        for (&(i, j), r) in pairs.iter().zip(residuals) {
            match r {
                Ok(r) => o.record(|| format!("({}) * ({})", gens[i], gens[j]), &r),
                Err(e) => o.fail(e.to_string()),
            }
        }
        o
    });
    out.run("star.invariant-output", || {
        let mut o = CheckOutcome::start();
        for &(i, j) in &pairs {
            for a in 0..kz.ell() {
                let r = quantized_action(&alg, &kz, &red.deformed, a, &alg.series(prod(i, j).clone()));
                record(&mut o, || format!("L_{} (({}) * ({}))", a + 1, gens[i], gens[j]), r);
            }
        }
        o
    });
    let picks: Vec<(usize, usize, usize, Series)> = (0..SMALL_PROBES)
        .map(|_| {
            let (i, j, a) = (st.rng.gen_range(0..n), st.rng.gen_range(0..n), st.rng.gen_range(0..kz.ell()));
            (i, j, a, probe::series(&mut st.rng, &ctx, 2, order, 2))
        })
        .collect();
    out.run("star.ideal", || {
        let mut o = CheckOutcome::start();
        for (i, j, a, u) in &picks {
            let ideal = alg.star(&alg.series(u.clone()), &alg.poly(kz.moment().component(*a).clone()));
            let base = alg.series(prod(*i, *j).clone());
            let left = red.star_of_representatives(&prols[*i].add(&ideal), &prols[*j]).map(|r| r.sub(&base));
            record(&mut o, || format!("(({}) + u * J_{}) * ({})", gens[*i], a + 1, gens[*j]), left);
            let right = red.star_of_representatives(&prols[*i], &prols[*j].add(&ideal)).map(|r| r.sub(&base));
            record(&mut o, || format!("({}) * (({}) + u * J_{})", gens[*i], gens[*j], a + 1), right);
        }
        o
    });
    let cs: Vec<SuperElement> = st.cochains(SMALL_PROBES, order, 3).iter().map(|x| x.filter(|m| m == 0)).collect();
    let pick: Vec<(usize, usize)> = (0..SMALL_PROBES).map(|_| (st.rng.gen_range(0..n), st.rng.gen_range(0..n))).collect();
    out.run("star.cohomology", || {
        let mut o = CheckOutcome::start();
        let unit = alg.one();
        for (k, (c, &(i, j))) in cs.iter().zip(&pick).enumerate() {
            let (a, b) = (&prols[i], &prols[j]);
            // Degree 0 and degree 1 classes.
            for a in [a.clone(), alg.ghost(k % kz.ell()).mul(a)] {
                let r = (|| {
                    let dc = red.d.apply(c)?;
                    let diff = red.reduced_star_cohomology(&a, &dc.add(b))?.sub(&red.reduced_star_cohomology(&a, b)?);
                    Ok(diff.sub(&red.d.apply(&red.exactness_witness(&a, c)?)?))
                })();
                record(&mut o, || format!("[{}] * [d c{k} + {}]", a.to_source(), gens[j]), r);
                let r = red.reduced_star_cohomology(&unit, &a).map(|x| x.sub(&a));
                record(&mut o, || format!("[1] * [{}]", a.to_source()), r);
            }
        }
        // A non-closed cochain must be rejected.
        let z = alg.poly(Poly::var(&ctx, 0));
        o.probes += 1;
        if red.d.apply(&z).is_ok_and(|dz| !dz.is_zero()) && red.reduced_star_cohomology(&z, &unit).is_ok() {
            o.fail(format!("non-closed cochain {} accepted", z.to_source()));
        }
        o
    });
}

/// Runs the enabled stages of a scenario and reports every enabled check.
pub fn run_scenario(config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, ConfigError> {
    let mut cfg = config.clone();
    if let Some(n) = opts.order {
        cfg.order = n;
    }
    if let Some(d) = opts.degree {
        cfg.degree = d;
    }
    let sc = cfg.validate()?;
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut st = State { sc, rng, poisson: None, moment: None, kz: None, classical: None, red: None };
    let last = opts.only.unwrap_or(Stage::Star);
    let mut halted: Option<String> = None;
    let mut prerequisite_failed = false;
    let mut checks = Vec::new();
    for stage in Stage::ALL.into_iter().filter(|s| *s <= last) {
        let emit = cfg.stage_enabled(stage) && opts.only.is_none_or(|o| o == stage);
        let scoped = stage.needs_reduction() && !cfg.reduction;
        let mut out = StageOut::default();
        if halted.is_none() && !scoped {
            match stage {
                Stage::Load => stage_load(&mut st, &mut out),
                Stage::Invariance => stage_invariance(&mut st, &mut out),
                Stage::Acyclicity => stage_acyclicity(&mut st, &mut out),
                Stage::Contraction => stage_contraction(&mut st, &mut out),
                Stage::Classical => stage_classical(&mut st, &mut out),
                Stage::Quantum => stage_quantum(&mut st, &mut out),
                Stage::Deformed => stage_deformed(&mut st, &mut out),
                Stage::Reduction => stage_reduction(&mut st, &mut out),
                Stage::Star => stage_star(&mut st, &mut out),
            }
            if let Some(id) = out.first_failure() {
                halted = Some(format!("skipped: check `{id}` failed"));
                if !emit {
                    prerequisite_failed = true;
                }
            }
        }
        if !emit {
            continue;
        }
        for d in CHECKS.iter().filter(|d| d.stage == stage) {
            let rec = match out.entries.remove(d.id) {
                Some(Entry::Ran(o, ms)) => CheckRecord::from_outcome(d.id, stage, d.anchor, o, ms),
                Some(Entry::Not(status, note)) => CheckRecord::without_run(d.id, stage, d.anchor, status, note),
                None if !cfg.reduction && needs_reduction(d.id) => CheckRecord::without_run(
                    d.id,
                    stage,
                    d.anchor,
                    Status::NotAttempted,
                    "not attempted (scoped out): no equivariant contracting homotopy for this scenario".into(),
                ),
                None => CheckRecord::without_run(
                    d.id,
                    stage,
                    d.anchor,
                    Status::Skipped,
                    halted.clone().unwrap_or_else(|| "skipped: an earlier check in this stage failed".into()),
                ),
            };
            checks.push(rec);
        }
    }
    let failed = prerequisite_failed || checks.iter().any(|c| c.status == Status::Fail);
    Ok(Report {
        scenario: cfg.name.clone(),
        engine_version: env!("CARGO_PKG_VERSION").into(),
        verdict: if failed { Verdict::Fail } else { Verdict::Pass },
        config: cfg,
        checks,
    })
}
