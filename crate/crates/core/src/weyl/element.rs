use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussScalar;
use crate::series::TruncSeries;
use crate::weyl::context::Context;
use crate::weyl::monomial::NormalMonomial;

/// A normal-ordered element of the truncated super-Weyl algebra: a finite
/// sum of [`NormalMonomial`]s with coefficients that are series in `a0`.
///
/// All coefficients share the element's `order`, which is the number of
/// `a0` powers known exactly. Binary operations return the smaller of the two
/// orders. No zero coefficient is ever stored, so equality of term maps is
/// equality of elements.
#[derive(Clone, Debug)]
pub struct AlgElement {
    ctx: Context,
    order: usize,
    terms: BTreeMap<NormalMonomial, TruncSeries>,
}

impl PartialEq for AlgElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.compatible(&other.ctx) && self.order == other.order && self.terms == other.terms
    }
}

/// Parity of a homogeneous element.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl AlgElement {
    pub fn zero(ctx: &Context) -> Self {
        Self::zero_at(ctx, ctx.order())
    }

    pub fn zero_at(ctx: &Context, order: usize) -> Self {
        Self { ctx: ctx.clone(), order, terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::scalar(ctx, GaussScalar::one())
    }

    pub fn scalar(ctx: &Context, c: GaussScalar) -> Self {
        Self::from_series(ctx, TruncSeries::constant(c, ctx.order()))
    }

    /// `f(a0)·1`.
    pub fn from_series(ctx: &Context, f: TruncSeries) -> Self {
        Self::term(ctx, NormalMonomial::ONE, f)
    }

    /// A single term `f(a0)·m`.
    pub fn term(ctx: &Context, m: NormalMonomial, f: TruncSeries) -> Self {
        let order = f.order();
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(m, f);
        }
        Self { ctx: ctx.clone(), order, terms }
    }

    pub fn monomial(ctx: &Context, m: NormalMonomial) -> Self {
        Self::term(ctx, m, TruncSeries::one(ctx.order()))
    }

    pub fn x(ctx: &Context, mu: usize) -> Self {
        Self::monomial(ctx, NormalMonomial::x(mu))
    }

    /// The derivative generator `∂_μ`.
    pub fn d(ctx: &Context, mu: usize) -> Self {
        Self::monomial(ctx, NormalMonomial::d(mu))
    }

    pub fn dx(ctx: &Context, mu: usize) -> Self {
        Self::monomial(ctx, NormalMonomial::dx(mu))
    }

    /// `a0^k · c`, exact.
    pub fn a0_pow(ctx: &Context, c: GaussScalar, k: usize) -> Self {
        Self::from_series(ctx, TruncSeries::monomial(c, k, ctx.order()))
    }

    #[cfg(test)]
    pub(crate) fn from_terms(ctx: &Context, order: usize, terms: BTreeMap<NormalMonomial, TruncSeries>) -> Self {
        debug_assert!(terms.values().all(|s| s.order() == order && !s.is_zero()));
        Self { ctx: ctx.clone(), order, terms }
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<NormalMonomial, TruncSeries> {
        &self.terms
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

    pub fn coeff(&self, m: &NormalMonomial) -> Option<&TruncSeries> {
        self.terms.get(m)
    }

    /// Coefficient of the unit monomial, zero if absent.
    pub fn unit_coeff(&self) -> TruncSeries {
        self.terms.get(&NormalMonomial::ONE).cloned().unwrap_or_else(|| TruncSeries::zero(self.order))
    }

    /// Rebinds to another compatible context (typically one with a different
    /// default order).
    pub fn with_ctx(&self, ctx: &Context) -> Self {
        assert!(self.ctx.compatible(ctx), "incompatible context");
        Self { ctx: ctx.clone(), order: self.order, terms: self.terms.clone() }
    }

    pub fn try_truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::Precision { needed: order, have: self.order });
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, s)| {
                let t = s.truncate(order);
                (!t.is_zero()).then_some((*m, t))
            })
            .collect();
        Ok(Self { ctx: self.ctx.clone(), order, terms })
    }

    /// Drops `a0` powers above `order`; panics if that would raise precision.
    pub fn truncate(&self, order: usize) -> Self {
        self.try_truncate(order).expect("cannot truncate an element upwards")
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if !self.ctx.compatible(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let order = self.order.min(other.order);
        let mut terms: BTreeMap<NormalMonomial, TruncSeries> =
            self.terms.iter().map(|(m, s)| (*m, s.truncate(order))).collect();
        for (m, s) in &other.terms {
            let entry = terms.entry(*m).or_insert_with(|| TruncSeries::zero(order));
            if subtract {
                entry.sub_assign_truncating(s);
            } else {
                entry.add_assign_truncating(s);
            }
        }
        terms.retain(|_, s| !s.is_zero());
        Self { ctx: self.ctx.clone(), order, terms }
    }

    /// Normal-ordered product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let order = self.order.min(other.order);
        let dim = self.ctx.dim();
        let mut acc: HashMap<NormalMonomial, TruncSeries> = HashMap::new();
        let mut buf = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                buf.clear();
                m1.product_into(m2, dim, &mut buf);
                if buf.is_empty() {
                    continue;
                }
                let prod = c1.mul_to(c2, order).truncate(order);
                if prod.is_zero() {
                    continue;
                }
                for &(m, factor) in &buf {
                    let entry = acc.entry(m).or_insert_with(|| TruncSeries::zero(order));
                    if factor == 1 {
                        entry.add_assign_truncating(&prod);
                    } else if factor == -1 {
                        entry.sub_assign_truncating(&prod);
                    } else {
                        entry.add_assign_truncating(&prod.scale(&GaussScalar::from_int(factor as i64)));
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        Ok(Self { ctx: self.ctx.clone(), order, terms })
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        if c.is_zero() {
            return Self::zero_at(&self.ctx, self.order);
        }
        let terms = self.terms.iter().map(|(m, s)| (*m, s.scale(c))).collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&GaussScalar::from_int(k))
    }

    /// Multiplies every coefficient by the series `f(a0)`.
    pub fn scale_series(&self, f: &TruncSeries) -> Self {
        let order = self.order.min(f.order());
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, s)| {
                let p = s.mul_to(f, order);
                (!p.is_zero()).then_some((*m, p))
            })
            .collect();
        Self { ctx: self.ctx.clone(), order, terms }
    }

    /// Exact multiplication by `a0^k`: precision grows by `k`.
    pub fn mul_a0_pow(&self, k: usize) -> Self {
        let terms = self.terms.iter().map(|(m, s)| (*m, s.mul_by_t(k))).collect();
        Self { ctx: self.ctx.clone(), order: self.order + k, terms }
    }

    /// Divides by `a0^k`; every coefficient must have its `k` lowest
    /// coefficients zero. Precision drops by `k`.
    pub fn divide_by_a0(&self, k: usize) -> Result<Self> {
        if k > self.order {
            return Err(Error::Precision { needed: k, have: self.order });
        }
        let mut terms = BTreeMap::new();
        for (m, s) in &self.terms {
            let q = s.div_by_t(k).map_err(|_| Error::NotDivisible {
                k,
                detail: format!("term {m} has coefficient {}", s.render("a0")),
            })?;
            if !q.is_zero() {
                terms.insert(*m, q);
            }
        }
        Ok(Self { ctx: self.ctx.clone(), order: self.order - k, terms })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ctx).truncate_or_keep(self.order);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn truncate_or_keep(&self, order: usize) -> Self {
        if order <= self.order {
            self.truncate(order)
        } else {
            let terms = self
                .terms
                .iter()
                .map(|(m, s)| {
                    let mut c = s.coeffs().to_vec();
                    c.resize(order + 1, GaussScalar::zero());
                    (*m, TruncSeries::from_coeffs(c))
                })
                .collect();
            // Only valid for exact elements such as the unit.
            Self { ctx: self.ctx.clone(), order, terms }
        }
    }

    /// Parity if every term has the same one-form degree mod 2. The zero
    /// element counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(p) => p,
        };
        if it.all(|p| p == first) {
            Some(if first == 0 { Parity::Even } else { Parity::Odd })
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parity().is_some()
    }

    pub fn is_momentum_only(&self) -> bool {
        self.terms.keys().all(|m| !m.has_x() && !m.has_dx())
    }

    pub fn is_derivative_free(&self) -> bool {
        self.terms.keys().all(|m| !m.has_d())
    }

    /// Smallest `a0` power appearing in any coefficient.
    pub fn min_a0_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(|s| s.valuation()).min()
    }

    /// Plain commutator `ab - ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        &(a * b) - &(b * a)
    }

    /// `ab - (-1)^{|a||b|} ba` for homogeneous `a`, `b`.
    pub fn graded_commutator(a: &Self, b: &Self) -> Result<Self> {
        let pa = a.parity().ok_or(Error::MixedParity)?;
        let pb = b.parity().ok_or(Error::MixedParity)?;
        let ab = a.try_mul(b)?;
        let ba = b.try_mul(a)?;
        if pa == Parity::Odd && pb == Parity::Odd {
            ab.try_add(&ba)
        } else {
            ab.try_sub(&ba)
        }
    }

    /// `Σ_k f_k (-i a0 ∂_0)^k`, the series `f` evaluated at `A = -i a0 ∂_0`.
    pub fn lift_series_in_a(ctx: &Context, f: &TruncSeries) -> Self {
        let order = f.order();
        let mut terms = BTreeMap::new();
        for (k, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = TruncSeries::monomial(c * &GaussScalar::i_pow(-(k as i64)), k, order);
            terms.insert(NormalMonomial::d_pow(0, k as u16), coeff);
        }
        Self { ctx: ctx.clone(), order, terms }
    }

    /// `Σ_k f_k E^k` for a momentum-only `E` whose coefficients all vanish at
    /// `a0 = 0`, so that the sum is finite under truncation.
    pub fn substitute_series(f: &TruncSeries, e: &Self) -> Result<Self> {
        if !e.is_momentum_only() {
            return Err(Error::ElementPrecondition(
                "series substitution needs a momentum-only argument".into(),
            ));
        }
        if e.terms.values().any(|s| !s.coeff(0).is_zero()) {
            return Err(Error::ElementPrecondition(
                "series substitution needs an argument of a0-degree at least 1".into(),
            ));
        }
        let order = f.order().min(e.order);
        let e = e.truncate(order);
        let mut acc = Self::from_series(&e.ctx, TruncSeries::constant(f.coeff(order).clone(), order));
        for k in (0..order).rev() {
            acc = &acc * &e;
            acc = &acc + &Self::from_series(&e.ctx, TruncSeries::constant(f.coeff(k).clone(), order));
        }
        Ok(acc)
    }

    /// Keeps the derivative-free terms: the image of the element acting on 1.
    pub fn vacuum_project(&self) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| !m.has_d()).map(|(m, s)| (*m, s.clone())).collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    /// The module action `a ▷ f` on a derivative-free `f`.
    pub fn act_on(&self, f: &Self) -> Result<Self> {
        if !f.is_derivative_free() {
            return Err(Error::ElementPrecondition("act_on needs a derivative-free operand".into()));
        }
        Ok(self.try_mul(f)?.vacuum_project())
    }

    /// Every coefficient replaced by its value at `a0 = 0`.
    pub fn classical_limit(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, s)| !s.coeff(0).is_zero())
            .map(|(m, s)| (*m, TruncSeries::constant(s.coeff(0).clone(), self.order)))
            .collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    /// Formal partial derivative with respect to the generator `∂_β` of a
    /// momentum-only element.
    pub fn d_by_d(&self, beta: usize) -> Result<Self> {
        if !self.is_momentum_only() {
            return Err(Error::ElementPrecondition("d_by_d needs a momentum-only element".into()));
        }
        let mut terms = BTreeMap::new();
        for (m, s) in &self.terms {
            let e = m.dexp()[beta];
            if e == 0 {
                continue;
            }
            terms.insert(m.with_d(beta, e - 1), s.scale(&GaussScalar::from_int(e as i64)));
        }
        Ok(Self { ctx: self.ctx.clone(), order: self.order, terms })
    }

    /// For an element linear in `x` (and free of one-forms), the momentum
    /// coefficient of `x_α`.
    pub fn x_coefficient(&self, alpha: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| !m.has_dx() && m.x_degree() == 1 && m.xexp()[alpha] == 1)
            .map(|(m, s)| (m.d_part(), s.clone()))
            .collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    /// For a one-form `Σ_α dx_α h_α(∂)`, the momentum coefficient of `dx_α`.
    pub fn dx_coefficient(&self, alpha: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| !m.has_x() && m.dxmask() == 1 << alpha)
            .map(|(m, s)| (m.d_part(), s.clone()))
            .collect();
        Self { ctx: self.ctx.clone(), order: self.order, terms }
    }

    /// Canonical text with coefficients as polynomials in `a0`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, s)| render_term(m, s)).collect();
        parts.join(" + ")
    }
}

/// One `coeff*monomial` summand as it appears in [`AlgElement::render`].
pub fn render_term(m: &NormalMonomial, s: &TruncSeries) -> String {
    let coeff = s.render("a0");
    let coeff = if s.support_len() == 1 && !coeff.contains(" + ") {
        coeff
    } else {
        format!("({coeff})")
    };
    if m.is_one() {
        coeff
    } else if coeff == "1" {
        m.to_string()
    } else if coeff == "-1" {
        format!("-{m}")
    } else {
        format!("{coeff}*{m}")
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// Operator forms panic on context mismatch; the `try_*` methods are the
// checked contract.
impl Add for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        self.try_add(rhs).expect("context mismatch")
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        self.try_sub(rhs).expect("context mismatch")
    }
}

impl Mul for &AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        self.try_mul(rhs).expect("context mismatch")
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        self.scale(&-GaussScalar::one())
    }
}

impl Add for AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: AlgElement) -> AlgElement {
        &self + &rhs
    }
}

impl Sub for AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: AlgElement) -> AlgElement {
        &self - &rhs
    }
}

impl Mul for AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: AlgElement) -> AlgElement {
        &self * &rhs
    }
}

impl Neg for AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        -&self
    }
}

/// Sums `terms` starting from zero at the context's default order.
pub fn sum<'a>(ctx: &Context, items: impl IntoIterator<Item = &'a AlgElement>) -> AlgElement {
    let mut acc: Option<AlgElement> = None;
    for it in items {
        acc = Some(match acc {
            None => it.clone(),
            Some(a) => &a + it,
        });
    }
    acc.unwrap_or_else(|| AlgElement::zero(ctx))
}
