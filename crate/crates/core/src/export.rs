//! Machine-readable forms of elements and tensors.

use num_traits::Zero;
use serde::Serialize;

use crate::series::TruncSeries;
use crate::tensor::{render_tensor_term, TensorElement};
use crate::weyl::{render_term, AlgElement};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExportedTerm {
    /// One normal-ordered monomial per tensor leg.
    pub factors: Vec<String>,
    /// Coefficient of `a0^k` at index `k`, trailing zeros dropped.
    pub coefficients: Vec<String>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExportedElement {
    pub legs: usize,
    pub order: usize,
    pub terms: Vec<ExportedTerm>,
    pub text: String,
}

fn coefficients(s: &TruncSeries) -> Vec<String> {
    let last = s.coeffs().iter().rposition(|c| !c.is_zero()).map_or(0, |k| k + 1);
    s.coeffs()[..last].iter().map(ToString::to_string).collect()
}

impl From<&AlgElement> for ExportedElement {
    fn from(e: &AlgElement) -> Self {
        let terms = e
            .terms()
            .iter()
            .map(|(m, s)| ExportedTerm { factors: vec![m.to_string()], coefficients: coefficients(s), text: render_term(m, s) })
            .collect();
        Self { legs: 1, order: e.order(), terms, text: e.render() }
    }
}

impl From<&TensorElement> for ExportedElement {
    fn from(t: &TensorElement) -> Self {
        let terms = t
            .terms()
            .iter()
            .map(|(key, s)| ExportedTerm {
                factors: key.iter().map(ToString::to_string).collect(),
                coefficients: coefficients(s),
                text: render_tensor_term(key, s),
            })
            .collect();
        Self { legs: t.legs(), order: t.order(), terms, text: t.render() }
    }
}
