//! Outcome of an identity check evaluated on probes.

use alloc::string::String;

use crate::poly::Poly;
use crate::series::Series;

/// Size of a residual: nonzero coefficient count and highest total degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ResidualSummary {
    pub nonzero_coefficients: usize,
    pub max_degree: u32,
}

impl ResidualSummary {
    pub fn merge(&mut self, other: ResidualSummary) {
        self.nonzero_coefficients += other.nonzero_coefficients;
        self.max_degree = self.max_degree.max(other.max_degree);
    }
}

/// Anything that can be a residual of an identity.
pub trait Measure {
    /// True when the residual vanishes (within the reliable ν-order).
    fn is_null(&self) -> bool;
    fn summary(&self) -> ResidualSummary;
    /// Short human-readable description of one offending coefficient.
    fn describe(&self) -> String;
}

impl Measure for Poly {
    fn is_null(&self) -> bool {
        self.is_zero()
    }

    fn summary(&self) -> ResidualSummary {
        ResidualSummary { nonzero_coefficients: self.len(), max_degree: self.degree().unwrap_or(0) }
    }

    fn describe(&self) -> String {
        match self.terms().iter().next_back() {
            Some((m, c)) => alloc::format!("coefficient {} at {}", c, Poly::term(self.ctx(), m.clone(), crate::Scalar::one())),
            None => "0".into(),
        }
    }
}

impl Measure for Series {
    fn is_null(&self) -> bool {
        self.is_zero()
    }

    fn summary(&self) -> ResidualSummary {
        let mut s = ResidualSummary::default();
        for c in &self.coeffs()[..=self.reliable_order()] {
            s.merge(c.summary());
        }
        s
    }

    fn describe(&self) -> String {
        for (k, c) in self.coeffs()[..=self.reliable_order()].iter().enumerate() {
            if !c.is_zero() {
                return alloc::format!("nu^{k}: {}", c.describe());
            }
        }
        "0".into()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub probes: usize,
    pub residual: ResidualSummary,
    /// First failing input and one of its nonzero residual coefficients.
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn start() -> Self {
        CheckOutcome { passed: true, probes: 0, residual: ResidualSummary::default(), witness: None }
    }

    /// Records one probe: `input` is only rendered when the residual is nonzero.
    pub fn record<M: Measure + ?Sized>(&mut self, input: impl FnOnce() -> String, residual: &M) {
        self.probes += 1;
        if residual.is_null() {
            return;
        }
        self.passed = false;
        self.residual.merge(residual.summary());
        if self.witness.is_none() {
            self.witness = Some(alloc::format!("{}: {}", input(), residual.describe()));
        }
    }

    /// Records a failure that has no algebraic residual.
    pub fn fail(&mut self, witness: String) {
        self.probes += 1;
        self.passed = false;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    pub fn absorb(&mut self, other: CheckOutcome) {
        self.passed &= other.passed;
        self.probes += other.probes;
        self.residual.merge(other.residual);
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarContext;

    #[test]
    fn records_first_witness() {
        let ctx = VarContext::new(["q", "p"]);
        let mut out = CheckOutcome::start();
        out.record(|| "a".into(), &Poly::zero(&ctx));
        assert!(out.passed);
        let r = &Poly::var(&ctx, 0) * &Poly::var(&ctx, 1);
        out.record(|| "b".into(), &r);
        out.record(|| "c".into(), &Poly::var(&ctx, 0));
        assert!(!out.passed);
        assert_eq!(out.probes, 3);
        assert_eq!(out.residual, ResidualSummary { nonzero_coefficients: 2, max_degree: 2 });
        assert_eq!(out.witness.as_deref(), Some("b: coefficient 1 at q*p"));
    }
}
