use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, GaussScalar};
use crate::weyl::monomial::MAX_DIM;

/// Dimension, truncation order and deformation direction shared by a family
/// of elements.
///
/// The deformation vector is `a_μ = a0·e_μ`; the metric is always
/// `diag(-1, 1, …, 1)`. Two contexts are compatible when their dimension and
/// direction agree. The order is only the default precision of freshly built
/// elements; each element tracks its own precision.
#[derive(Clone)]
pub struct Context(Arc<ContextData>);

struct ContextData {
    dim: usize,
    order: usize,
    direction: Vec<BigRational>,
}

impl Context {
    pub fn new(dim: usize, order: usize, direction: Vec<BigRational>) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::Config(format!("dimension must be between 2 and {MAX_DIM}, got {dim}")));
        }
        if order == 0 {
            return Err(Error::Config("truncation order must be at least 1".into()));
        }
        if direction.len() != dim {
            return Err(Error::Config(format!(
                "direction has {} components but the dimension is {dim}",
                direction.len()
            )));
        }
        if direction.iter().all(|c| c.is_zero()) {
            return Err(Error::Config("direction must be nonzero".into()));
        }
        Ok(Self(Arc::new(ContextData { dim, order, direction })))
    }

    /// `e = (1, 0, …, 0)`.
    pub fn timelike(dim: usize, order: usize) -> Result<Self> {
        let mut e = vec![BigRational::zero(); dim];
        if let Some(first) = e.first_mut() {
            *first = BigRational::one();
        }
        Self::new(dim, order, e)
    }

    /// Same dimension and direction, different default order.
    pub fn with_order(&self, order: usize) -> Self {
        Self(Arc::new(ContextData { dim: self.0.dim, order, direction: self.0.direction.clone() }))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn direction(&self) -> &[BigRational] {
        &self.0.direction
    }

    /// Component `e_μ` of the direction as a scalar.
    pub fn e(&self, mu: usize) -> GaussScalar {
        GaussScalar::real(self.0.direction[mu].clone())
    }

    /// Diagonal metric entry `η_μμ`.
    pub fn eta(&self, mu: usize) -> i64 {
        if mu == 0 {
            -1
        } else {
            1
        }
    }

    /// `η_μν`.
    pub fn eta2(&self, mu: usize, nu: usize) -> i64 {
        if mu == nu {
            self.eta(mu)
        } else {
            0
        }
    }

    pub fn is_timelike(&self) -> bool {
        self.0.direction.iter().enumerate().all(|(k, c)| if k == 0 { c.is_one() } else { c.is_zero() })
    }

    /// Minkowski square `e·e`.
    pub fn e_squared(&self) -> BigRational {
        self.0
            .direction
            .iter()
            .enumerate()
            .map(|(k, c)| c * c * BigRational::from_integer(self.eta(k).into()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.dim == other.0.dim && self.0.direction == other.0.direction)
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other)
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.0.direction.iter().map(format_rational).collect();
        write!(f, "Context(n={}, N={}, e=({}))", self.0.dim, self.0.order, e.join(","))
    }
}
