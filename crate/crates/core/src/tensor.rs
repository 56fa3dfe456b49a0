//! Tensor powers of the (one-form free) Weyl algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::GaussScalar;
use crate::series::TruncSeries;
use crate::weyl::{AlgElement, Context, MomentumTarget, NormalMonomial};

/// An element of `W ⊗ … ⊗ W` (`legs` factors) with coefficients in `a0`.
#[derive(Clone, Debug)]
pub struct TensorElement {
    ctx: Context,
    legs: usize,
    order: usize,
    terms: BTreeMap<Vec<NormalMonomial>, TruncSeries>,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.compatible(&other.ctx) && self.legs == other.legs && self.order == other.order && self.terms == other.terms
    }
}

impl TensorElement {
    pub fn zero(ctx: &Context, legs: usize, order: usize) -> Self {
        Self { ctx: ctx.clone(), legs, order, terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Context, legs: usize, order: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![NormalMonomial::ONE; legs], TruncSeries::one(order));
        Self { ctx: ctx.clone(), legs, order, terms }
    }

    /// A single-leg tensor.
    pub fn from_element(e: &AlgElement) -> Result<Self> {
        if e.terms().keys().any(NormalMonomial::has_dx) {
            return Err(Error::ElementPrecondition("tensor legs cannot carry one-forms".into()));
        }
        let terms = e.terms().iter().map(|(m, s)| (vec![*m], s.clone())).collect();
        Ok(Self { ctx: e.ctx().clone(), legs: 1, order: e.order(), terms })
    }

    /// `e_1 ⊗ e_2 ⊗ …`.
    pub fn from_legs(es: &[&AlgElement]) -> Result<Self> {
        let mut acc = Self::from_element(es[0])?;
        for e in &es[1..] {
            acc = acc.kron(&Self::from_element(e)?)?;
        }
        Ok(acc)
    }

    /// `1 ⊗ … ⊗ e ⊗ … ⊗ 1` with `e` in position `pos`.
    pub fn embed(e: &AlgElement, pos: usize, legs: usize) -> Result<Self> {
        let one = AlgElement::one(e.ctx());
        let parts: Vec<&AlgElement> = (0..legs).map(|k| if k == pos { e } else { &one }).collect();
        Self::from_legs(&parts)
    }

    /// Outer product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if !self.ctx.compatible(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let order = self.order.min(other.order);
        let mut terms = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let c = c1.mul_to(c2, order);
                if c.is_zero() {
                    continue;
                }
                let mut key = k1.clone();
                key.extend_from_slice(k2);
                terms.insert(key, c);
            }
        }
        Ok(Self { ctx: self.ctx.clone(), legs: self.legs + other.legs, order, terms })
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Vec<NormalMonomial>, TruncSeries> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !self.ctx.compatible(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.legs != other.legs {
            return Err(Error::ElementPrecondition(format!("leg count mismatch: {} vs {}", self.legs, other.legs)));
        }
        Ok(())
    }

    pub fn try_truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::Precision { needed: order, have: self.order });
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, s)| {
                let t = s.truncate(order);
                (!t.is_zero()).then(|| (k.clone(), t))
            })
            .collect();
        Ok(Self { ctx: self.ctx.clone(), legs: self.legs, order, terms })
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.try_truncate(order).expect("cannot truncate a tensor upwards")
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let order = self.order.min(other.order);
        let mut terms: BTreeMap<_, _> = self.terms.iter().map(|(k, s)| (k.clone(), s.truncate(order))).collect();
        for (k, s) in &other.terms {
            let entry = terms.entry(k.clone()).or_insert_with(|| TruncSeries::zero(order));
            if subtract {
                entry.sub_assign_truncating(s);
            } else {
                entry.add_assign_truncating(s);
            }
        }
        terms.retain(|_, s| !s.is_zero());
        Self { ctx: self.ctx.clone(), legs: self.legs, order, terms }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.combine(other, true))
    }

    /// Legwise product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order.min(other.order);
        let dim = self.ctx.dim();
        let mut acc: HashMap<Vec<NormalMonomial>, TruncSeries> = HashMap::new();
        let mut leg_buf = Vec::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let coeff = c1.mul_to(c2, order);
                if coeff.is_zero() {
                    continue;
                }
                // expand leg by leg
                let mut partial: Vec<(Vec<NormalMonomial>, i128)> = vec![(Vec::with_capacity(self.legs), 1)];
                for leg in 0..self.legs {
                    leg_buf.clear();
                    k1[leg].product_into(&k2[leg], dim, &mut leg_buf);
                    let mut next = Vec::with_capacity(partial.len() * leg_buf.len());
                    for (key, f) in &partial {
                        for &(m, g) in &leg_buf {
                            let mut k = key.clone();
                            k.push(m);
                            next.push((k, f * g));
                        }
                    }
                    partial = next;
                }
                for (key, f) in partial {
                    let entry = acc.entry(key).or_insert_with(|| TruncSeries::zero(order));
                    match f {
                        1 => entry.add_assign_truncating(&coeff),
                        -1 => entry.sub_assign_truncating(&coeff),
                        _ => entry.add_assign_truncating(&coeff.scale(&GaussScalar::from_int(f as i64))),
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        Ok(Self { ctx: self.ctx.clone(), legs: self.legs, order, terms })
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx, self.legs, self.order);
        }
        let terms = self.terms.iter().map(|(k, s)| (k.clone(), s.scale(c))).collect();
        Self { ctx: self.ctx.clone(), legs: self.legs, order: self.order, terms }
    }

    pub fn scale_series(&self, f: &TruncSeries) -> Self {
        let order = self.order.min(f.order());
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, s)| {
                let p = s.mul_to(f, order);
                (!p.is_zero()).then(|| (k.clone(), p))
            })
            .collect();
        Self { ctx: self.ctx.clone(), legs: self.legs, order, terms }
    }

    pub fn mul_a0_pow(&self, k: usize) -> Self {
        let terms = self.terms.iter().map(|(key, s)| (key.clone(), s.mul_by_t(k))).collect();
        Self { ctx: self.ctx.clone(), legs: self.legs, order: self.order + k, terms }
    }

    pub fn divide_by_a0(&self, k: usize) -> Result<Self> {
        if k > self.order {
            return Err(Error::Precision { needed: k, have: self.order });
        }
        let mut terms = BTreeMap::new();
        for (key, s) in &self.terms {
            let q = s.div_by_t(k).map_err(|_| Error::NotDivisible { k, detail: format!("tensor coefficient {}", s.render("a0")) })?;
            if !q.is_zero() {
                terms.insert(key.clone(), q);
            }
        }
        Ok(Self { ctx: self.ctx.clone(), legs: self.legs, order: self.order - k, terms })
    }

    fn is_momentum_only(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|m| !m.has_x() && !m.has_dx()))
    }

    /// `Σ_k f_k T^k` for a momentum-only `T` vanishing at `a0 = 0`.
    pub fn substitute_series(f: &TruncSeries, t: &Self) -> Result<Self> {
        if !t.is_momentum_only() {
            return Err(Error::ElementPrecondition("series substitution needs a momentum-only tensor".into()));
        }
        if t.terms.values().any(|s| !s.coeff(0).is_zero()) {
            return Err(Error::ElementPrecondition("series substitution needs a tensor of a0-degree at least 1".into()));
        }
        let order = f.order().min(t.order);
        let t = t.truncate(order);
        let unit = |c: &GaussScalar| Self::one(&t.ctx, t.legs, order).scale(c);
        let mut acc = unit(f.coeff(order));
        for k in (0..order).rev() {
            acc = acc.try_mul(&t)?;
            acc = acc.try_add(&unit(f.coeff(k)))?;
        }
        Ok(acc)
    }

    /// Multiplies all legs together in order.
    pub fn multiply_legs(&self) -> AlgElement {
        let mut acc = AlgElement::zero_at(&self.ctx, self.order);
        for (key, s) in &self.terms {
            let mut prod = AlgElement::term(&self.ctx, key[0], s.clone());
            for m in &key[1..] {
                prod = &prod * &AlgElement::term(&self.ctx, *m, TruncSeries::one(self.order));
            }
            acc = &acc + &prod;
        }
        acc
    }

    /// Applies `f` to the monomial in leg `pos` and contracts, giving a
    /// tensor with one leg fewer. `f` returns a coefficient series.
    pub fn contract_leg(&self, pos: usize, f: impl Fn(&NormalMonomial) -> TruncSeries) -> Self {
        let mut terms: BTreeMap<Vec<NormalMonomial>, TruncSeries> = BTreeMap::new();
        for (key, s) in &self.terms {
            let c = f(&key[pos]);
            let p = s.mul_to(&c, self.order.min(c.order()));
            if p.is_zero() {
                continue;
            }
            let mut k = key.clone();
            k.remove(pos);
            let order = p.order();
            let entry = terms.entry(k).or_insert_with(|| TruncSeries::zero(order));
            entry.add_assign_truncating(&p);
        }
        terms.retain(|_, s| !s.is_zero());
        let order = terms.values().map(TruncSeries::order).min().unwrap_or(self.order).min(self.order);
        let terms = terms.into_iter().map(|(k, s)| (k, s.truncate(order))).collect();
        Self { ctx: self.ctx.clone(), legs: self.legs - 1, order, terms }
    }

    /// Collapses a one-leg tensor back to an element.
    pub fn into_element(&self) -> Result<AlgElement> {
        if self.legs != 1 {
            return Err(Error::ElementPrecondition(format!("expected one leg, found {}", self.legs)));
        }
        Ok(self.multiply_legs())
    }

    /// Terms whose legs all equal the classical part: coefficients at `a0 = 0`.
    pub fn classical_limit(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, s)| !s.coeff(0).is_zero())
            .map(|(k, s)| (k.clone(), TruncSeries::constant(s.coeff(0).clone(), self.order)))
            .collect();
        Self { ctx: self.ctx.clone(), legs: self.legs, order: self.order, terms }
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(key, s)| render_tensor_term(key, s))
            .collect();
        parts.join(" + ")
    }
}

/// One summand as it appears in [`TensorElement::render`].
pub fn render_tensor_term(key: &[NormalMonomial], s: &TruncSeries) -> String {
    let legs: Vec<String> = key.iter().map(|m| m.to_string()).collect();
    format!("({})*[{}]", s.render("a0"), legs.join(" (x) "))
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl MomentumTarget for TensorElement {
    fn one_like(&self) -> Self {
        Self::one(&self.ctx, self.legs, self.order)
    }

    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx, self.legs, self.order)
    }

    fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("compatible tensors")
    }

    fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("compatible tensors")
    }

    fn scaled_series(&self, f: &TruncSeries) -> Self {
        self.scale_series(f)
    }
}

impl Add for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: Self) -> TensorElement {
        self.try_add(rhs).expect("compatible tensors")
    }
}

impl Sub for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: Self) -> TensorElement {
        self.try_sub(rhs).expect("compatible tensors")
    }
}

impl Mul for &TensorElement {
    type Output = TensorElement;
    fn mul(self, rhs: Self) -> TensorElement {
        self.try_mul(rhs).expect("compatible tensors")
    }
}

impl Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        self.scale(&-GaussScalar::from_int(1))
    }
}
