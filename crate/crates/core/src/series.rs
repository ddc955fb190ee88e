//! Truncated power series in the formal parameter ν with polynomial
//! coefficients.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{same_ctx, Poly, VarContext};
use crate::scalar::Scalar;

/// `c₀ + c₁ν + … + c_Nν^N`, everything above ν^N discarded.
///
/// `reliable` records the highest ν-power known to be exact after a division
/// by ν; `None` means all `N + 1` coefficients are exact.
#[derive(Clone, Debug)]
pub struct Series {
    ctx: Arc<VarContext>,
    coeffs: Vec<Poly>,
    reliable: Option<usize>,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero(ctx: &Arc<VarContext>, order: usize) -> Self {
        Series { ctx: ctx.clone(), coeffs: (0..=order).map(|_| Poly::zero(ctx)).collect(), reliable: None }
    }

    pub fn one(ctx: &Arc<VarContext>, order: usize) -> Self {
        Series::from_poly(Poly::one(ctx), order)
    }

    pub fn from_poly(p: Poly, order: usize) -> Self {
        Series::nu_power(p, 0, order)
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Scalar, order: usize) -> Self {
        Series::from_poly(Poly::constant(ctx, c), order)
    }

    /// `ν^k · p`, zero when `k > order`.
    pub fn nu_power(p: Poly, k: usize, order: usize) -> Self {
        let mut s = Series::zero(p.ctx(), order);
        if k <= order {
            s.coeffs[k] = p;
        }
        s
    }

    /// Builds from coefficients `c₀, c₁, …`; extra entries beyond `order` are dropped.
    pub fn from_coeffs(ctx: &Arc<VarContext>, coeffs: Vec<Poly>, order: usize) -> Self {
        let mut s = Series::zero(ctx, order);
        for (k, c) in coeffs.into_iter().enumerate().take(order + 1) {
            assert!(same_ctx(ctx, c.ctx()), "variable contexts differ");
            s.coeffs[k] = c;
        }
        s
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest ν-power whose coefficient is exact.
    pub fn reliable_order(&self) -> usize {
        self.reliable.unwrap_or(self.order())
    }

    pub fn is_exact(&self) -> bool {
        self.reliable.is_none()
    }

    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut Poly {
        &mut self.coeffs[k]
    }

    /// True when every reliable coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs[..=self.reliable_order()].iter().all(Poly::is_zero)
    }

    /// True when every stored coefficient vanishes, reliable or not.
    pub fn is_identically_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Lowest ν-power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &Series) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::Truncation { left: self.order(), right: other.order() });
        }
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::Context);
        }
        Ok(())
    }

    fn joint_reliable(&self, other: &Series) -> Option<usize> {
        match (self.reliable, other.reliable) {
            (None, r) | (r, None) => r,
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        Ok(Series {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            reliable: self.joint_reliable(other),
        })
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        Ok(Series {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
            reliable: self.joint_reliable(other),
        })
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        Ok(self.convolve(other, |a, b| a * b))
    }

    /// Cauchy product with an arbitrary bilinear coefficient pairing.
    pub fn convolve(&self, other: &Series, pair: impl Fn(&Poly, &Poly) -> Poly) -> Series {
        let n = self.order();
        let mut out = Series::zero(&self.ctx, n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    let t = pair(a, b);
                    out.coeffs[i + j].add_scaled(&t, &Scalar::one());
                }
            }
        }
        out.reliable = self.joint_reliable(other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        Series { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(), reliable: self.reliable }
    }

    pub fn mul_poly(&self, p: &Poly) -> Series {
        Series { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c * p).collect(), reliable: self.reliable }
    }

    /// Multiplication by ν^k (shifting up; the top coefficients are dropped).
    pub fn shift_up(&self, k: usize) -> Series {
        let n = self.order();
        let mut out = Series::zero(&self.ctx, n);
        for i in 0..=n {
            if i + k <= n {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out.reliable = self.reliable.map(|r| (r + k).min(n));
        out
    }

    /// Division by ν.  The top coefficient becomes unknown (stored as zero) and
    /// the reliable order drops by one.
    pub fn div_nu(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Divisibility(alloc::format!("nu^0 coefficient is {}", self.coeffs[0])));
        }
        let n = self.order();
        let mut out = Series::zero(&self.ctx, n);
        for i in 1..=n {
            out.coeffs[i - 1] = self.coeffs[i].clone();
        }
        out.reliable = Some(self.reliable_order().saturating_sub(1));
        Ok(out)
    }

    /// Exact division by ν of a series computed one order higher: the result
    /// keeps the full reliability at `order - 1`.
    pub fn div_nu_exact(&self) -> Result<Series> {
        let mut out = self.div_nu()?;
        out.coeffs.pop();
        out.reliable = self.reliable.map(|r| r.saturating_sub(1));
        Ok(out)
    }

    /// Re-truncates to a different order (padding with zeros when raising).
    pub fn with_order(&self, order: usize) -> Series {
        let mut out = Series::zero(&self.ctx, order);
        for (k, c) in self.coeffs.iter().enumerate().take(order + 1) {
            out.coeffs[k] = c.clone();
        }
        out.reliable = if order <= self.order() {
            self.reliable.filter(|&r| r < order)
        } else {
            Some(self.reliable_order())
        };
        out
    }

    /// Marks the reliable order explicitly.
    pub fn with_reliable(mut self, reliable: Option<usize>) -> Series {
        self.reliable = reliable.filter(|&r| r < self.order());
        self
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Series {
        Series { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(f).collect(), reliable: self.reliable }
    }

    pub fn try_map(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<Series> {
        Ok(Series {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
            reliable: self.reliable,
        })
    }

    pub fn add_assign(&mut self, other: &Series) {
        self.check(other).expect("incompatible series");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_scaled(b, &Scalar::one());
        }
        self.reliable = self.joint_reliable(other);
    }

    pub fn add_scaled(&mut self, other: &Series, c: &Scalar) {
        self.check(other).expect("incompatible series");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_scaled(b, c);
        }
        self.reliable = self.joint_reliable(other);
    }

    /// Number of nonzero coefficients and highest total degree over all ν-powers.
    pub fn size_summary(&self) -> (usize, u32) {
        let count = self.coeffs.iter().map(Poly::len).sum();
        let deg = self.coeffs.iter().filter_map(Poly::degree).max().unwrap_or(0);
        (count, deg)
    }

    pub fn to_source(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => alloc::format!("({c})"),
                1 => alloc::format!("nu*({c})"),
                _ => alloc::format!("nu^{k}*({c})"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_source())
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("incompatible series")
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.try_sub(rhs).expect("incompatible series")
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("incompatible series")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.map(|c| -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(order: usize) -> (Series, Series, Series) {
        let ctx = VarContext::new(["q", "p"]);
        let q = Poly::var(&ctx, 0);
        let p = Poly::var(&ctx, 1);
        (Series::one(&ctx, order), Series::nu_power(q, 1, order), Series::nu_power(p, 1, order))
    }

    #[test]
    fn product_truncation() {
        let (one, nq, _) = setup(2);
        let prod = &(&one + &nq) * &(&one - &nq);
        let q2 = nq.coeff(1) * nq.coeff(1);
        assert_eq!(prod, &one - &Series::nu_power(q2, 2, 2));
        let (one, nq, _) = setup(1);
        assert_eq!(&(&one + &nq) * &(&one - &nq), one);
    }

    #[test]
    fn addition_cancels() {
        let (_, nq, np) = setup(3);
        let q = Series::from_poly(nq.coeff(1).clone(), 3);
        let p = Series::from_poly(np.coeff(1).clone(), 3);
        assert_eq!(&(&q + &np) + &(&p - &np), &q + &p);
    }

    #[test]
    fn division_by_nu() {
        let (_, nq, np) = setup(3);
        let a = &nq + &np.shift_up(1);
        let b = a.div_nu().unwrap();
        assert_eq!(b.coeff(0), nq.coeff(1));
        assert_eq!(b.coeff(1), np.coeff(1));
        assert_eq!(b.reliable_order(), 2);
        let c = Series::from_poly(nq.coeff(1).clone(), 3);
        assert!(matches!((&c + &np).div_nu(), Err(Error::Divisibility(_))));
    }

    #[test]
    fn order_mismatch() {
        let (one2, _, _) = setup(2);
        let (one3, _, _) = setup(3);
        assert_eq!(one2.try_add(&one3), Err(Error::Truncation { left: 2, right: 3 }));
    }

    #[test]
    fn neumann_series() {
        let (one, nq, np) = setup(4);
        let t = &nq + &(&np * &nq);
        let mut inv = Series::zero(one.ctx(), 4);
        let mut power = one.clone();
        for _ in 0..=4 {
            inv.add_assign(&power);
            power = &-&power * &t;
        }
        assert_eq!(&(&one + &t) * &inv, one);
    }
}
