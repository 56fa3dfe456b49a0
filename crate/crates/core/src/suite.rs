//! The verification driver: a realized session, named objects and the
//! check suites.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{self, build_calculus_unchecked, CalcParams, CalculusSet};
use crate::catalog;
use crate::config::{RealizationKind, RunConfig, Suite, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::hopf::{self, Generator, HopfData};
use crate::realization::{
    build_natural, build_noncov, check_h_g, crosscheck_frames, verify_box, verify_lorentz_and_mixed, verify_shift,
    verify_space, Frame, RealizationSet,
};
use crate::report::Report;
use crate::series::TruncSeries;
use crate::tensor::TensorElement;
use crate::weyl::AlgElement;

/// Exit code for a run in which every identity holds.
pub const EXIT_PASS: i32 = 0;
/// Exit code when at least one identity fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for configuration, parse and lookup errors.
pub const EXIT_INPUT: i32 = 2;

/// A configuration together with its realization and lazily built
/// calculus and Hopf data.
pub struct Session {
    pub cfg: RunConfig,
    pub r: RealizationSet,
    calc: OnceLock<Result<CalculusSet>>,
    hopf: OnceLock<Result<HopfData>>,
}

impl Session {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        let ctx = cfg.context()?;
        let r = match cfg.realization {
            RealizationKind::Noncovariant => build_noncov(&ctx, cfg.params())?,
            RealizationKind::Natural => build_natural(&ctx)?,
        };
        Ok(Self { cfg, r, calc: OnceLock::new(), hopf: OnceLock::new() })
    }

    fn noncov_only(&self, what: &str) -> Result<()> {
        match self.r.frame {
            Frame::Noncovariant => Ok(()),
            Frame::Natural => Err(Error::Realization(format!("{what} needs the noncovariant realization"))),
        }
    }

    /// `K₁` and `K₂` from the config, with any fault injected into `K₁`.
    pub fn calc_params(&self) -> Result<CalcParams> {
        self.noncov_only("the differential calculus")?;
        let p = self.r.noncov_params()?;
        let cp = CalcParams::new(self.cfg.s.clone(), p)?;
        Ok(match self.cfg.fault_series(p.order())? {
            Some(f) => {
                let k1 = &cp.k1 + &f.truncate(cp.k1.order());
                cp.with_k1(k1)
            }
            None => cp,
        })
    }

    pub fn calculus(&self) -> Result<&CalculusSet> {
        self.calc
            .get_or_init(|| build_calculus_unchecked(&self.r, &self.calc_params()?))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn hopf(&self) -> Result<&HopfData> {
        self.hopf.get_or_init(|| HopfData::new(&self.r)).as_ref().map_err(Clone::clone)
    }

    fn index(&self, name: &str, rest: &str) -> Result<usize> {
        let k: usize = rest.parse().map_err(|_| Error::UnknownName(name.into()))?;
        if k < self.r.dim() {
            Ok(k)
        } else {
            Err(Error::UnknownName(name.into()))
        }
    }

    fn atom(&self, name: &str) -> Result<AlgElement> {
        let wc = self.r.p[0].ctx().clone();
        let r = &self.r;
        let pick = |prefix: &str| name.strip_prefix(prefix).map(|rest| self.index(name, rest));
        Ok(match name {
            "Z" => r.z.clone(),
            "Zinv" => r.zinv.clone(),
            "box" => r.boxop.clone(),
            "dhat" => self.calculus()?.dhat.clone(),
            "1" => AlgElement::one(&wc),
            _ => {
                if let Some(k) = pick("xhat") {
                    r.xhat[k?].clone()
                } else if let Some(k) = pick("xi") {
                    self.calculus()?.xi[k?].clone()
                } else if let Some(k) = pick("dx") {
                    AlgElement::dx(&wc, k?)
                } else if let Some(k) = pick("x") {
                    AlgElement::x(&wc, k?)
                } else if let Some(k) = pick("p") {
                    r.p[k?].clone()
                } else if let Some(k) = pick("d") {
                    AlgElement::d(&wc, k?)
                } else if let Some(k) = pick("D") {
                    r.d[k?].clone()
                } else if let Some(k) = pick("X") {
                    r.x[k?].clone()
                } else if let Some(rest) = name.strip_prefix('M') {
                    if rest.len() != 2 {
                        return Err(Error::UnknownName(name.into()));
                    }
                    let (a, b) = (self.index(name, &rest[..1])?, self.index(name, &rest[1..])?);
                    if a == b {
                        return Err(Error::UnknownName(name.into()));
                    }
                    r.m[a][b].clone()
                } else {
                    return Err(Error::UnknownName(name.into()));
                }
            }
        })
    }

    /// A named object or a `*`-separated product of them, cut to the
    /// session order.
    pub fn object(&self, expr: &str) -> Result<AlgElement> {
        self.full(expr)?.try_truncate(self.r.order)
    }

    pub fn commutator(&self, a: &str, b: &str) -> Result<AlgElement> {
        let (x, y) = (self.full(a)?, self.full(b)?);
        AlgElement::graded_commutator(&x, &y)?.try_truncate(self.r.order)
    }

    /// `op ▷ (f ▷ 1)`.
    pub fn act(&self, op: &str, f: &str) -> Result<AlgElement> {
        let (o, g) = (self.full(op)?, self.full(f)?);
        o.act_on(&g.vacuum_project())?.try_truncate(self.r.order)
    }

    fn full(&self, expr: &str) -> Result<AlgElement> {
        let mut acc: Option<AlgElement> = None;
        for name in expr.split('*').map(str::trim) {
            if name.is_empty() {
                return Err(Error::UnknownName(expr.into()));
            }
            let e = self.atom(name)?;
            acc = Some(match acc {
                None => e,
                Some(a) => a.try_mul(&e)?,
            });
        }
        acc.ok_or_else(|| Error::UnknownName(expr.into()))
    }

    pub fn generator(&self, name: &str) -> Result<Generator> {
        Generator::parse(name, self.r.dim())
    }

    pub fn coproduct(&self, g: &str) -> Result<TensorElement> {
        self.noncov_only("coproduct")?;
        hopf::coproduct(self.generator(g)?, self.hopf()?)
    }

    pub fn antipode(&self, g: &str) -> Result<AlgElement> {
        self.noncov_only("antipode")?;
        hopf::antipode(self.generator(g)?, self.hopf()?)
    }

    fn is_bicrossproduct(&self) -> bool {
        self.r.params.as_ref().is_some_and(|p| {
            let one = TruncSeries::one(p.order());
            *p.phi() == one && *p.psi() == one
        })
    }

    fn run(&self, suite: Suite) -> Result<Report> {
        let r = &self.r;
        match suite {
            Suite::Space => verify_space(r),
            Suite::Lorentz => verify_lorentz_and_mixed(r),
            Suite::Shift => verify_shift(r),
            Suite::Box => verify_box(r),
            Suite::Frames => {
                let mut rep = check_h_g(r)?;
                if let Some(p) = &r.params {
                    rep.extend(crosscheck_frames(&r.ctx, p)?);
                }
                Ok(rep)
            }
            Suite::Hopf => {
                let hd = self.hopf()?;
                let mut rep = Report::new();
                for g in Generator::all(r.dim()) {
                    rep.extend(hopf::check_hopf_axioms(g, hd)?);
                }
                rep.extend(hopf::check_morphism_compat(hd)?);
                rep.extend(hopf::check_shift_grouplike(hd)?);
                if self.is_bicrossproduct() {
                    rep.extend(hopf::check_bicrossproduct_table(hd)?);
                }
                Ok(rep)
            }
            Suite::Calculus => {
                let c = self.calculus()?;
                let mut rep = calculus::check_closed_forms(c, r)?;
                rep.extend(calculus::check_d_properties(c, r, 3)?);
                rep.extend(calculus::check_closure_and_k(c, r)?.1);
                rep.extend(calculus::check_compatibility(c, r)?);
                rep.extend(calculus::decompose_k(c, r)?);
                rep.extend(calculus::commutators_m_xi(c, r)?);
                let delta = calculus::check_compatibility_of(&calculus::trivial_one_forms(r), r, r.order)?;
                rep.check("calculus", "delta one-forms violate compatibility", !delta.passed(), || {
                    "dx_mu passed the compatibility condition".into()
                });
                Ok(rep)
            }
            Suite::Actions => {
                let c = self.calculus()?;
                let mut rep = calculus::check_action_table(c, r)?;
                rep.extend(calculus::check_module_property(c, r, 3, 2)?);
                rep.extend(calculus::check_adjoint(self.hopf()?, 3, 2)?);
                let other = if self.is_bicrossproduct() { "weyl-symmetric" } else { "bicrossproduct" };
                let p2 = catalog::named_basis_table(other, self.cfg.param_order())?;
                let r2 = build_noncov(&r.ctx, &p2)?;
                let c2 = calculus::build_calculus(&r2, &CalcParams::new(self.cfg.s.clone(), &p2)?)?;
                rep.extend(calculus::check_realization_independence(c, r, &c2, &r2, 3)?);
                Ok(rep)
            }
        }
    }
}

/// Suites that make sense for a realization kind.
pub fn applicable(kind: RealizationKind, suite: Suite) -> bool {
    match kind {
        RealizationKind::Noncovariant => true,
        RealizationKind::Natural => matches!(suite, Suite::Space | Suite::Lorentz | Suite::Shift | Suite::Box | Suite::Frames),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub schema_version: u32,
    pub config: serde_json::Value,
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub skipped: Vec<String>,
    pub checks: Vec<crate::report::CheckResult>,
}

impl SuiteOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("basis: {}\n", self.config["basis"].as_str().unwrap_or_default());
        let rep = Report { checks: self.checks.clone() };
        for s in &self.skipped {
            out.push_str(&format!("SKIP [{s}] not applicable to this realization\n"));
        }
        out.push_str(&rep.render_text());
        out
    }
}

/// Runs the configured suites in parallel; the report is ordered by suite
/// then identity name.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let session = Session::new(cfg.clone())?;
    run_session(&session)
}

pub fn run_session(session: &Session) -> Result<SuiteOutcome> {
    let cfg = &session.cfg;
    let (todo, skipped): (Vec<Suite>, Vec<Suite>) =
        cfg.checks.iter().partition(|s| applicable(cfg.realization, **s));
    let reports: Vec<Report> = todo
        .par_iter()
        .map(|&s| {
            session.run(s).unwrap_or_else(|e| {
                let mut rep = Report::new();
                rep.error(s.name(), "suite aborted", &e);
                rep
            })
        })
        .collect();
    let mut all = Report::new();
    for r in reports {
        all.extend(r);
    }
    all.sort();
    let failed = all.failures().count();
    Ok(SuiteOutcome {
        schema_version: SCHEMA_VERSION,
        config: cfg.summary(),
        passed: failed == 0,
        total: all.len(),
        failed,
        skipped: skipped.iter().map(|s| s.name().to_string()).collect(),
        checks: all.checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigFile;

    fn cfg(src: &str) -> RunConfig {
        RunConfig::from_file(&ConfigFile::parse(src).unwrap()).unwrap()
    }

    #[test]
    fn quick_run_passes() {
        let c = cfg("dimension = 3\norder = 2\nbasis = \"left\"\nchecks = [\"space\", \"lorentz\", \"calculus\"]");
        let out = run_suite(&c).unwrap();
        assert!(out.passed, "{}", out.render_text());
        assert_eq!(out.exit_code(), EXIT_PASS);
        let names: Vec<&str> = out.checks.iter().map(|c| c.suite.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn fault_injection_fails() {
        let c = cfg("dimension = 2\norder = 2\nchecks = [\"calculus\"]\n[fault_injection]\nk1 = \"A\"");
        let out = run_suite(&c).unwrap();
        assert_eq!(out.exit_code(), EXIT_FAIL);
        assert!(out.checks.iter().any(|c| !c.passed && c.name.contains("closed form")));
    }

    #[test]
    fn natural_skips_noncovariant_suites() {
        let c = cfg("dimension = 3\norder = 2\nrealization = \"natural\"");
        let out = run_suite(&c).unwrap();
        assert!(out.passed, "{}", out.render_text());
        assert_eq!(out.skipped, vec!["actions", "calculus", "hopf"]);
    }

    #[test]
    fn objects_resolve() {
        let s = Session::new(cfg("dimension = 4\norder = 2\nbasis = \"bicrossproduct\"")).unwrap();
        let x = s.object("xhat0").unwrap();
        assert_eq!(x.render(), "x0 + i*a0*x1*d1 + i*a0*x2*d2 + i*a0*x3*d3");
        assert!(s.object("xhat4").is_err());
        assert!(s.object("M11").is_err());
        assert!(s.object("nope").is_err());
        let c = s.commutator("xhat0", "xhat1").unwrap();
        assert_eq!(c, s.object("xhat1").unwrap().mul_a0_pow(1).scale(&crate::GaussScalar::i()).truncate(2));
        let a = s.act("p1", "xhat1").unwrap();
        assert_eq!(a.render(), "-i");
        let dp0 = s.coproduct("p0").unwrap();
        assert_eq!(dp0.render(), "(-i)*[1 (x) d0] + (-i)*[d0 (x) 1]");
    }
}
