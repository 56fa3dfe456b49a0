//! Named `(φ, ψ)` bases.

use num_rational::BigRational;
use serde::Serialize;

use crate::dsl::{eval_source, Bindings};
use crate::error::{Error, Result};
use crate::realization::NoncovParams;
use crate::scalar::format_rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisEntry {
    pub name: &'static str,
    pub phi: &'static str,
    pub psi: &'static str,
    /// Default parameter values, as `(name, rational)`.
    pub params: Vec<(&'static str, &'static str)>,
}

pub const CONSTANT_GAMMA: &str = "constant-gamma";

pub fn catalog() -> Vec<BasisEntry> {
    let e = |name, phi, psi| BasisEntry { name, phi, psi, params: vec![] };
    vec![
        e("bicrossproduct", "1", "1"),
        e("left", "exp(-A)", "1"),
        e("weyl-symmetric", "A/(exp(A)-1)", "1"),
        e("left-covariant", "1-A", "1-A"),
        e("right-covariant", "1", "1+A"),
        BasisEntry {
            name: CONSTANT_GAMMA,
            phi: "exp((c-1)/r*log(1+r*A))",
            psi: "1+r*A",
            params: vec![("r", "1"), ("c", "2")],
        },
    ]
}

/// The five fixed bases, without the parametric family.
pub fn fixed_basis_names() -> Vec<&'static str> {
    catalog().into_iter().filter(|b| b.params.is_empty()).map(|b| b.name).collect()
}

pub fn find(name: &str) -> Result<BasisEntry> {
    catalog().into_iter().find(|b| b.name == name).ok_or_else(|| Error::UnknownName(name.into()))
}

impl BasisEntry {
    /// The entry's defaults overridden by `overrides`.
    pub fn bindings(&self, overrides: &Bindings) -> Result<Bindings> {
        let mut b = Bindings::new();
        for (k, v) in &self.params {
            b.insert((*k).to_string(), crate::scalar::parse_rational(v)?);
        }
        for (k, v) in overrides {
            b.insert(k.clone(), v.clone());
        }
        Ok(b)
    }

    pub fn params_at(&self, order: usize, overrides: &Bindings) -> Result<NoncovParams> {
        let b = self.bindings(overrides)?;
        if self.name == CONSTANT_GAMMA && b.get("r").is_some_and(|r| *r == BigRational::from_integer(0.into())) {
            return Err(Error::Config("constant-gamma needs r != 0".into()));
        }
        let phi = eval_source(self.phi, order, &b)?;
        let psi = eval_source(self.psi, order, &b)?;
        NoncovParams::new(phi, psi)
    }
}

/// `(φ, ψ)` of a named basis at the given series order.
pub fn named_basis_table(name: &str, order: usize) -> Result<NoncovParams> {
    find(name)?.params_at(order, &Bindings::new())
}

/// `ψ = 1 + rA` with constant `γ = c`.
pub fn constant_gamma(r: &BigRational, c: &BigRational, order: usize) -> Result<NoncovParams> {
    let mut b = Bindings::new();
    b.insert("r".into(), r.clone());
    b.insert("c".into(), c.clone());
    find(CONSTANT_GAMMA)?.params_at(order, &b)
}

/// Human-readable one-line description.
pub fn describe(entry: &BasisEntry) -> String {
    let mut s = format!("{:<16} phi = {:<26} psi = {}", entry.name, entry.phi, entry.psi);
    if !entry.params.is_empty() {
        let ps: Vec<String> = entry
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", crate::scalar::parse_rational(v).map(|r| format_rational(&r)).unwrap_or_default()))
            .collect();
        s.push_str(&format!("  [{}]", ps.join(", ")));
    }
    s
}
