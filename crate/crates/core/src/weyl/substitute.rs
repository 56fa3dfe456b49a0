use crate::error::{Error, Result};
use crate::series::TruncSeries;
use crate::weyl::element::AlgElement;

/// An algebra that momentum-only elements can be mapped into by sending each
/// `∂_μ` to a chosen image. Used for coproducts and antipodes of momentum
/// functions, which are algebra (anti)morphisms on the commutative momentum
/// subalgebra.
pub trait MomentumTarget: Clone {
    fn one_like(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn scaled_series(&self, f: &TruncSeries) -> Self;
}

impl MomentumTarget for AlgElement {
    fn one_like(&self) -> Self {
        AlgElement::from_series(self.ctx(), TruncSeries::one(self.order()))
    }

    fn zero_like(&self) -> Self {
        AlgElement::zero_at(self.ctx(), self.order())
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn scaled_series(&self, f: &TruncSeries) -> Self {
        self.scale_series(f)
    }
}

/// Evaluates a momentum-only element at `∂_μ ↦ images[μ]`.
pub fn substitute_momentum<T: MomentumTarget>(e: &AlgElement, images: &[T]) -> Result<T> {
    if !e.is_momentum_only() {
        return Err(Error::ElementPrecondition(
            "momentum substitution needs a momentum-only element".into(),
        ));
    }
    let dim = e.ctx().dim();
    if images.len() != dim {
        return Err(Error::ElementPrecondition(format!("expected {dim} images, got {}", images.len())));
    }
    let mut powers: Vec<Vec<T>> = images.iter().map(|img| vec![img.one_like(), img.clone()]).collect();
    let mut acc = images[0].zero_like();
    for (m, coeff) in e.terms() {
        let mut prod: Option<T> = None;
        for mu in 0..dim {
            let k = m.dexp()[mu] as usize;
            if k == 0 {
                continue;
            }
            while powers[mu].len() <= k {
                let next = powers[mu].last().unwrap().times(&images[mu]);
                powers[mu].push(next);
            }
            prod = Some(match prod {
                None => powers[mu][k].clone(),
                Some(p) => p.times(&powers[mu][k]),
            });
        }
        let prod = prod.unwrap_or_else(|| images[0].one_like());
        acc = acc.plus(&prod.scaled_series(coeff));
    }
    Ok(acc)
}
