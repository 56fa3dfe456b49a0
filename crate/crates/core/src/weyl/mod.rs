//! The truncated `a0`-adic super-Weyl algebra generated by `x_μ`, `∂_μ` and
//! the anticommuting one-forms `dx_μ`, with `[∂_μ, x_ν] = η_μν`.

mod context;
mod element;
mod monomial;
mod substitute;

pub use context::Context;
pub use element::{render_term, sum, AlgElement, Parity};
pub use monomial::{NormalMonomial, MAX_DIM};
pub use substitute::{substitute_momentum, MomentumTarget};

#[cfg(test)]
mod tests;
