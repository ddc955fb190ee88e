//! Structure constants of a finite-dimensional Lie algebra.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `[e_a, e_b] = Σ_c f_ab^c e_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    dim: usize,
    f: Vec<Scalar>,
}

impl LieAlgebraData {
    pub fn abelian(dim: usize) -> Self {
        LieAlgebraData { dim, f: vec![Scalar::zero(); dim * dim * dim] }
    }

    /// Builds from `(a, b, c, f_ab^c)` entries; `f_ba^c = −f_ab^c` is filled in.
    /// Conflicting entries, antisymmetry breaks and Jacobi failures are rejected.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, Scalar)]) -> Result<Self> {
        let mut lie = LieAlgebraData::abelian(dim);
        for (a, b, c, x) in entries {
            let (a, b, c) = (*a, *b, *c);
            if a >= dim || b >= dim || c >= dim {
                return Err(Error::Invalid(alloc::format!("structure constant index ({a},{b},{c}) out of range")));
            }
            if a == b && !x.is_zero() {
                return Err(Error::Invalid(alloc::format!("f_{a}{a}^{c} must vanish")));
            }
            let i = lie.idx(a, b, c);
            let j = lie.idx(b, a, c);
            let neg = -x;
            if (!lie.f[i].is_zero() && &lie.f[i] != x) || (!lie.f[j].is_zero() && lie.f[j] != neg) {
                return Err(Error::Invalid(alloc::format!("conflicting entries for f_{a}{b}^{c}")));
            }
            lie.f[i] = x.clone();
            lie.f[j] = neg;
        }
        if let Some((a, b, c, e)) = lie.jacobi_violation() {
            return Err(Error::Invalid(alloc::format!("Jacobi identity fails for ({a},{b},{c}) in component {e}")));
        }
        Ok(lie)
    }

    /// 𝔰𝔬(3) with `f_ab^c = ε_abc`.
    pub fn so3() -> Self {
        let one = Scalar::one;
        LieAlgebraData::from_entries(3, &[(0, 1, 2, one()), (1, 2, 0, one()), (2, 0, 1, one())])
            .expect("so(3) satisfies Jacobi")
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dim + b) * self.dim + c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.f[self.idx(a, b, c)]
    }

    /// Nonzero `(a, b, c, f_ab^c)`, ordered.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> + '_ {
        let n = self.dim;
        (0..n * n * n).filter(|&i| !self.f[i].is_zero()).map(move |i| (i / (n * n), (i / n) % n, i % n, &self.f[i]))
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().all(Scalar::is_zero)
    }

    /// `Σ_b f_ab^b`, the trace of `ad(e_a)`.
    pub fn trace(&self, a: usize) -> Scalar {
        let mut t = Scalar::zero();
        for b in 0..self.dim {
            t += self.f(a, b, b);
        }
        t
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|a| self.trace(a).is_zero())
    }

    fn jacobi_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut s = Scalar::zero();
                        for d in 0..n {
                            s += &(self.f(a, b, d) * self.f(d, c, e));
                            s += &(self.f(b, c, d) * self.f(d, a, e));
                            s += &(self.f(c, a, d) * self.f(d, b, e));
                        }
                        if !s.is_zero() {
                            return Some((a, b, c, e));
                        }
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so3_is_unimodular_and_nonabelian() {
        let so3 = LieAlgebraData::so3();
        assert!(!so3.is_abelian());
        assert!(so3.is_unimodular());
        assert_eq!(so3.f(1, 0, 2), &Scalar::from_i64(-1));
        assert_eq!(so3.nonzero().count(), 6);
    }

    #[test]
    fn rejects_jacobi_failure() {
        // [e0,e1] = e2, [e1,e2] = e1: the Jacobiator of (e0, e1, e2) is -e2.
        let bad = LieAlgebraData::from_entries(3, &[(0, 1, 2, Scalar::one()), (1, 2, 1, Scalar::one())]);
        assert!(matches!(bad, Err(Error::Invalid(_))));
    }

    #[test]
    fn affine_line_is_not_unimodular() {
        let ax_b = LieAlgebraData::from_entries(2, &[(0, 1, 1, Scalar::one())]).unwrap();
        assert_eq!(ax_b.trace(0), Scalar::one());
        assert!(!ax_b.is_unimodular());
    }
}
