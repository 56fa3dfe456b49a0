//! Run configuration: TOML file plus command-line overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::dsl::{eval_source, parse_dsl, Bindings};
use crate::error::{Error, Result};
use crate::realization::{required_param_order, NoncovParams};
use crate::scalar::{format_rational, parse_rational};
use crate::weyl::{Context, MAX_DIM};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Actions,
    Box,
    Calculus,
    Frames,
    Hopf,
    Lorentz,
    Shift,
    Space,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Actions,
        Suite::Box,
        Suite::Calculus,
        Suite::Frames,
        Suite::Hopf,
        Suite::Lorentz,
        Suite::Shift,
        Suite::Space,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Actions => "actions",
            Suite::Box => "box",
            Suite::Calculus => "calculus",
            Suite::Frames => "frames",
            Suite::Hopf => "hopf",
            Suite::Lorentz => "lorentz",
            Suite::Shift => "shift",
            Suite::Space => "space",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown check suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealizationKind {
    #[default]
    Noncovariant,
    Natural,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Deliberate corruption of the calculus input for negative testing.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultInjection {
    /// Expression in `A` added to `K₁`.
    pub k1: Option<String>,
}

/// The on-disk form. Every rational is a string.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: Option<u32>,
    pub dimension: Option<usize>,
    pub order: Option<usize>,
    pub direction: Option<Vec<String>>,
    pub basis: Option<String>,
    pub phi: Option<String>,
    pub psi: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    pub s: Option<String>,
    pub realization: Option<RealizationKind>,
    pub checks: Option<Vec<String>>,
    pub output: Option<OutputFormat>,
    pub fault_injection: Option<FaultInjection>,
}

impl ConfigFile {
    pub fn parse(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&src)
    }
}

/// Where `(φ, ψ)` come from.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisSpec {
    Named(String),
    Custom { phi: String, psi: String },
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub dimension: usize,
    pub order: usize,
    pub direction: Vec<BigRational>,
    pub basis: BasisSpec,
    pub bindings: Bindings,
    pub s: BigRational,
    pub realization: RealizationKind,
    pub checks: Vec<Suite>,
    pub output: OutputFormat,
    pub fault_k1: Option<String>,
    params: Option<NoncovParams>,
}

impl RunConfig {
    /// Validates a file-form config; all errors are reported before any
    /// algebra is built.
    pub fn from_file(file: &ConfigFile) -> Result<Self> {
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(Error::Config(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}")));
            }
        }
        let dimension = file.dimension.unwrap_or(4);
        if !(2..=MAX_DIM).contains(&dimension) {
            return Err(Error::Config(format!("dimension must be in 2..={MAX_DIM}, got {dimension}")));
        }
        let order = file.order.unwrap_or(3);
        if order < 1 {
            return Err(Error::Config("order must be at least 1".into()));
        }
        let direction = match &file.direction {
            None => {
                let mut d = vec![BigRational::zero(); dimension];
                d[0] = BigRational::from_integer(1.into());
                d
            }
            Some(v) => {
                if v.len() != dimension {
                    return Err(Error::Config(format!("direction has {} entries, dimension is {dimension}", v.len())));
                }
                v.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?
            }
        };
        let basis = match (&file.basis, &file.phi, &file.psi) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(Error::Config("give either basis or phi/psi, not both".into()))
            }
            (Some(name), None, None) => {
                catalog::find(name)?;
                BasisSpec::Named(name.clone())
            }
            (None, phi, psi) => BasisSpec::Custom {
                phi: phi.clone().unwrap_or_else(|| "1".into()),
                psi: psi.clone().unwrap_or_else(|| "1".into()),
            },
        };
        let bindings = file
            .params
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_rational(v)?)))
            .collect::<Result<Bindings>>()?;
        let s = match &file.s {
            Some(v) => parse_rational(v)?,
            None => BigRational::from_integer(1.into()),
        };
        let checks = match &file.checks {
            None => Suite::ALL.to_vec(),
            Some(v) => {
                let mut c = v.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>>>()?;
                c.sort();
                c.dedup();
                c
            }
        };
        let fault_k1 = file.fault_injection.as_ref().and_then(|f| f.k1.clone());
        if let Some(src) = &fault_k1 {
            parse_dsl(src)?;
        }
        let mut cfg = Self {
            dimension,
            order,
            direction,
            basis,
            bindings,
            s,
            realization: file.realization.unwrap_or_default(),
            checks,
            output: file.output.unwrap_or_default(),
            fault_k1,
            params: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Re-checks the invariants and evaluates `(φ, ψ)`.
    pub fn validate(&mut self) -> Result<()> {
        let ctx = self.context()?;
        let params = match &self.basis {
            BasisSpec::Named(name) => catalog::find(name)?.params_at(self.param_order(), &self.bindings)?,
            BasisSpec::Custom { phi, psi } => {
                let phi = eval_source(phi, self.param_order(), &self.bindings)?;
                let psi = eval_source(psi, self.param_order(), &self.bindings)?;
                NoncovParams::new(phi, psi)?
            }
        };
        if self.realization == RealizationKind::Noncovariant && !ctx.is_timelike() {
            return Err(Error::Config("the noncovariant realization needs direction (1, 0, ..., 0)".into()));
        }
        self.params = Some(params);
        Ok(())
    }

    pub fn param_order(&self) -> usize {
        required_param_order(self.order)
    }

    pub fn context(&self) -> Result<Context> {
        Context::new(self.dimension, self.order, self.direction.clone())
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn params(&self) -> &NoncovParams {
        self.params.as_ref().expect("validated config")
    }

    pub fn basis_label(&self) -> String {
        match &self.basis {
            BasisSpec::Named(n) => n.clone(),
            BasisSpec::Custom { phi, psi } => format!("phi = {phi}, psi = {psi}"),
        }
    }

    /// `K₁` corruption series, if fault injection is on.
    pub fn fault_series(&self, order: usize) -> Result<Option<crate::series::TruncSeries>> {
        self.fault_k1.as_ref().map(|src| eval_source(src, order, &self.bindings)).transpose()
    }

    /// A JSON-friendly echo of the effective configuration.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "dimension": self.dimension,
            "order": self.order,
            "direction": self.direction.iter().map(format_rational).collect::<Vec<_>>(),
            "basis": self.basis_label(),
            "params": self.bindings.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect::<BTreeMap<_, _>>(),
            "s": format_rational(&self.s),
            "realization": self.realization,
            "checks": self.checks,
            "fault_injection": self.fault_k1,
        })
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::from_file(&ConfigFile::default()).expect("default config is valid")
    }
}
