//! Truncated one-variable Taylor series over [`GaussScalar`].
//!
//! A series of order `N` stores exactly the coefficients `c_0 … c_N`; every
//! operation agrees with the untruncated computation through that order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussScalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncSeries {
    coeffs: Vec<GaussScalar>,
}

impl TruncSeries {
    /// Builds a series from `c_0 … c_N`; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<GaussScalar>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![GaussScalar::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(GaussScalar::one(), order)
    }

    pub fn constant(c: GaussScalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c·t^k`, which is zero when `k > order`.
    pub fn monomial(c: GaussScalar, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The formal variable `t`.
    pub fn var(order: usize) -> Self {
        Self::monomial(GaussScalar::one(), 1, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[GaussScalar] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; panics above the truncation order.
    pub fn coeff(&self, k: usize) -> &GaussScalar {
        &self.coeffs[k]
    }

    pub(crate) fn coeff_mut(&mut self, k: usize) -> &mut GaussScalar {
        &mut self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Number of nonzero coefficients.
    pub fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn try_truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Precision { needed: order, have: self.order() });
        }
        Ok(Self { coeffs: self.coeffs[..=order].to_vec() })
    }

    /// Drops coefficients above `order`. Panics if `order` exceeds the stored order.
    pub fn truncate(&self, order: usize) -> Self {
        self.try_truncate(order).expect("cannot truncate a series upwards")
    }

    fn check_orders(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        Ok(Self { coeffs: mul_truncated(&self.coeffs, &other.coeffs, self.order()) })
    }

    /// Cauchy product truncated at `order`, which may be below either input order.
    pub fn mul_to(&self, other: &Self, order: usize) -> Self {
        assert!(order <= self.order() && order <= other.order());
        Self { coeffs: mul_truncated(&self.coeffs, &other.coeffs, order) }
    }

    pub(crate) fn add_assign_truncating(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub(crate) fn sub_assign_truncating(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplies by `t^k`; the known order grows by `k`.
    pub fn mul_by_t(&self, k: usize) -> Self {
        let mut coeffs = vec![GaussScalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divides by `t^k`. The lowest `k` coefficients must vanish and the
    /// result is known only through order `N - k`.
    pub fn div_by_t(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k > self.order() {
            return Err(Error::SeriesPrecondition(format!(
                "cannot divide an order-{} series by t^{k}",
                self.order()
            )));
        }
        if let Some(j) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::SeriesPrecondition(format!(
                "coefficient of t^{j} is {} so the series is not divisible by t^{k}",
                self.coeffs[j]
            )));
        }
        Ok(Self { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse; requires `c_0 != 0`.
    pub fn recip(&self) -> Result<Self> {
        let inv0 = self.coeffs[0]
            .inv()
            .ok_or_else(|| Error::SeriesPrecondition("reciprocal of a series with zero constant term".into()))?;
        let n = self.order();
        let mut out = vec![GaussScalar::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = GaussScalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out[k] = -(&acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// Term-wise derivative, known through order `N - 1`.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=self.order()).map(|k| self.coeffs[k].scale_int(k as i128)).collect(),
        }
    }

    /// Antiderivative with zero constant of integration, kept at order `N`.
    pub fn integrate(&self) -> Self {
        let n = self.order();
        let mut out = vec![GaussScalar::zero(); n + 1];
        for k in 1..=n {
            out[k] = &self.coeffs[k - 1] / &GaussScalar::from_int(k as i64);
        }
        Self { coeffs: out }
    }

    /// `exp(a)`; requires `c_0 = 0`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesPrecondition("exp requires a zero constant term".into()));
        }
        let n = self.order();
        let mut out = vec![GaussScalar::zero(); n + 1];
        out[0] = GaussScalar::one();
        // k e_k = sum_j j a_j e_{k-j}
        for k in 1..=n {
            let mut acc = GaussScalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[k - j]).scale_int(j as i128);
                }
            }
            out[k] = &acc / &GaussScalar::from_int(k as i64);
        }
        Ok(Self { coeffs: out })
    }

    /// `log(a)`; requires `c_0 = 1`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesPrecondition("log requires constant term 1".into()));
        }
        let n = self.order();
        // log(a)' = a'/a, integrated back to order n.
        let recip = self.recip()?;
        let da = self.derivative();
        let mut quotient = vec![GaussScalar::zero(); n];
        if n > 0 {
            quotient = mul_truncated(da.coeffs(), recip.coeffs(), n - 1);
        }
        let mut out = vec![GaussScalar::zero(); n + 1];
        for k in 1..=n {
            out[k] = &quotient[k - 1] / &GaussScalar::from_int(k as i64);
        }
        Ok(Self { coeffs: out })
    }

    /// Principal square root; requires `c_0 = 1`.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesPrecondition("sqrt requires constant term 1".into()));
        }
        let n = self.order();
        let mut out = vec![GaussScalar::zero(); n + 1];
        out[0] = GaussScalar::one();
        let half = GaussScalar::from_ratio(1, 2);
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                if !out[j].is_zero() && !out[k - j].is_zero() {
                    acc -= &(&out[j] * &out[k - j]);
                }
            }
            out[k] = &acc * &half;
        }
        Ok(Self { coeffs: out })
    }

    /// Composition `self(inner(t))`; requires `inner` to have zero constant term.
    /// The result has the smaller of the two orders.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::SeriesPrecondition("composition needs an inner series with zero constant term".into()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse; requires `c_0 = 0` and `c_1 != 0`.
    pub fn comp_inverse(&self) -> Result<Self> {
        let n = self.order();
        if !self.coeffs[0].is_zero() || n == 0 || self.coeffs[1].is_zero() {
            return Err(Error::SeriesPrecondition(
                "compositional inverse needs c_0 = 0 and c_1 != 0".into(),
            ));
        }
        let inv1 = self.coeffs[1].inv().expect("checked nonzero");
        let mut b = Self::monomial(inv1.clone(), 1, n);
        // Fix one coefficient at a time: the t^k coefficient of a(b) is
        // linear in b_k with slope c_1.
        for k in 2..=n {
            let composed = self.compose(&b)?;
            let err = composed.coeffs[k].clone();
            b.coeffs[k] = -(&err * &inv1);
        }
        Ok(b)
    }

    /// Renders as `c0 + c1*var + c2*var^2 …`, omitting zero terms.
    pub fn render(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
            parts.push(if k == 0 {
                c.to_string()
            } else if c.is_one() {
                power
            } else if (-c.clone()).is_one() {
                format!("-{power}")
            } else if c.is_simple() {
                format!("{c}*{power}")
            } else {
                format!("({c})*{power}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub(crate) fn mul_truncated(a: &[GaussScalar], b: &[GaussScalar], order: usize) -> Vec<GaussScalar> {
    let mut out = vec![GaussScalar::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += &(ai * bj);
        }
    }
    out
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

// Operator forms panic on an order mismatch; use the `try_*` methods for the
// checked contract.
impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        self.try_add(rhs).expect("series order mismatch")
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self.try_sub(rhs).expect("series order mismatch")
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        self.try_mul(rhs).expect("series order mismatch")
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(coeffs: &[(i64, i64)]) -> TruncSeries {
        TruncSeries::from_coeffs(coeffs.iter().map(|&(p, q)| GaussScalar::from_ratio(p, q)).collect())
    }

    fn ints(coeffs: &[i64]) -> TruncSeries {
        TruncSeries::from_coeffs(coeffs.iter().map(|&c| GaussScalar::from_int(c)).collect())
    }

    #[test]
    fn difference_of_squares() {
        let a = ints(&[1, 1, 0, 0]);
        let b = ints(&[1, -1, 0, 0]);
        assert_eq!(&a * &b, ints(&[1, 0, -1, 0]));
    }

    #[test]
    fn additive_identity() {
        let a = ints(&[3, -2, 7]);
        assert_eq!(&a + &TruncSeries::zero(2), a);
    }

    #[test]
    fn square_drops_beyond_order() {
        let a = ints(&[1, 1]);
        assert_eq!(&a * &a, ints(&[1, 2]));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let err = ints(&[1, 1]).try_mul(&ints(&[1, 1, 1])).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 1, right: 2 });
    }

    #[test]
    fn geometric_reciprocals() {
        assert_eq!(ints(&[1, 1, 0, 0]).recip().unwrap(), ints(&[1, -1, 1, -1]));
        assert_eq!(ints(&[1, 0, 0]).recip().unwrap(), ints(&[1, 0, 0]));
        assert_eq!(ints(&[1, -1, 0, 0]).recip().unwrap(), ints(&[1, 1, 1, 1]));
        assert!(ints(&[0, 1]).recip().is_err());
    }

    #[test]
    fn analytic_functions() {
        assert_eq!(TruncSeries::var(3).exp().unwrap(), s(&[(1, 1), (1, 1), (1, 2), (1, 6)]));
        assert_eq!(ints(&[1, 1, 0, 0]).sqrt().unwrap(), s(&[(1, 1), (1, 2), (-1, 8), (1, 16)]));
        assert_eq!(ints(&[1, 1, 0, 0]).log().unwrap(), s(&[(0, 1), (1, 1), (-1, 2), (1, 3)]));
        assert!(ints(&[1, 1]).exp().is_err());
        assert!(ints(&[2, 1]).log().is_err());
        assert!(ints(&[0, 1]).sqrt().is_err());
    }

    #[test]
    fn calculus() {
        assert_eq!(ints(&[1, 0, 1]).derivative(), ints(&[0, 2]));
        assert_eq!(ints(&[1, 0, 0]).integrate(), ints(&[0, 1, 0]));
    }

    #[test]
    fn div_by_t_cases() {
        let q = ints(&[0, 1, 1, 0]).div_by_t(1).unwrap();
        assert_eq!(q, ints(&[1, 1, 0]));
        let err = ints(&[0, 1, 0]).div_by_t(2);
        assert!(err.is_err());
    }

    #[test]
    fn identity_is_its_own_inverse() {
        assert_eq!(TruncSeries::var(5).comp_inverse().unwrap(), TruncSeries::var(5));
        assert!(ints(&[0, 0, 1]).comp_inverse().is_err());
    }

    #[test]
    fn render_format() {
        let a = TruncSeries::from_coeffs(vec![
            GaussScalar::from_int(1),
            GaussScalar::zero(),
            GaussScalar::from_ratio(-1, 2),
            GaussScalar::new(GaussScalar::from_ratio(1, 2).re().clone(), GaussScalar::from_int(1).re().clone()),
        ]);
        assert_eq!(a.to_string(), "1 + -1/2*t^2 + (1/2+i)*t^3");
        assert_eq!(TruncSeries::zero(2).to_string(), "0");
    }
}
