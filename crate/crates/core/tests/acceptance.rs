//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use kappa_core::calculus::{
    self, build_calculus, check_closed_forms, check_closure_and_k, check_compatibility_of, decompose_k, trivial_one_forms,
    CalcParams,
};
use kappa_core::catalog::{self, fixed_basis_names, named_basis_table};
use kappa_core::config::{ConfigFile, RunConfig};
use kappa_core::hopf::{check_bicrossproduct_table, check_hopf_axioms, Generator, HopfData};
use kappa_core::realization::{
    build_natural, build_noncov, crosscheck_frames, required_param_order, verify_box, verify_lorentz_and_mixed,
    verify_shift, verify_space, NoncovParams, RealizationSet,
};
use kappa_core::report::Report;
use kappa_core::suite::{run_suite, EXIT_FAIL};
use kappa_core::{AlgElement, Context, GaussScalar, NormalMonomial, Parity, TruncSeries};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, TestRunner};

const DIM: usize = 4;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[Report]) -> Self {
        let total: usize = reports.iter().map(Report::len).sum();
        let first = reports.iter().flat_map(|r| r.failures()).next();
        match first {
            None => Outcome { passed: total > 0, detail: format!("{total} identities") },
            Some(f) => Outcome {
                passed: false,
                detail: format!("[{}] {}: {}", f.suite, f.name, f.residual.clone().or(f.detail.clone()).unwrap_or_default()),
            },
        }
    }

    fn within(mut self, took: Duration, limit: Duration) -> Self {
        if took > limit {
            self.passed = false;
            self.detail = format!("{}; took {:.1}s, limit {}s", self.detail, took.as_secs_f64(), limit.as_secs());
        }
        self
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The five fixed bases plus the constant-γ family at (r, c) = (1, 2).
fn bases(order: usize) -> Vec<(String, NoncovParams)> {
    let mut out: Vec<(String, NoncovParams)> = fixed_basis_names()
        .into_iter()
        .map(|n| (n.to_string(), named_basis_table(n, required_param_order(order)).unwrap()))
        .collect();
    out.push((
        "constant-gamma(1,2)".into(),
        catalog::constant_gamma(&rat(1, 1), &rat(2, 1), required_param_order(order)).unwrap(),
    ));
    out
}

fn realize(order: usize) -> Vec<(String, NoncovParams, RealizationSet)> {
    let ctx = Context::timelike(DIM, order).unwrap();
    bases(order)
        .into_iter()
        .map(|(n, p)| {
            let r = build_noncov(&ctx, &p).unwrap();
            (n, p, r)
        })
        .collect()
}

fn collect(f: impl FnOnce() -> kappa_core::Result<Vec<Report>>) -> Outcome {
    match f() {
        Ok(reps) => Outcome::from_reports(&reps),
        Err(e) => Outcome { passed: false, detail: format!("error: {e}") },
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = collect(|| realize(5).iter().map(|(_, _, r)| verify_space(r)).collect());
    out.within(start.elapsed(), Duration::from_secs(60))
}

fn criterion_2() -> Outcome {
    collect(|| {
        let mut reps: Vec<Report> = realize(5).iter().map(|(_, _, r)| verify_lorentz_and_mixed(r)).collect::<Result<_, _>>()?;
        let dir = [1, 1, 0, 0].iter().map(|&k| rat(k, 1)).collect();
        let nat = build_natural(&Context::new(DIM, 4, dir)?)?;
        reps.push(verify_space(&nat)?);
        reps.push(verify_lorentz_and_mixed(&nat)?);
        Ok(reps)
    })
}

fn criterion_3() -> Outcome {
    collect(|| {
        let mut reps = Vec::new();
        for (_, _, r) in realize(5) {
            reps.push(verify_shift(&r)?);
            reps.push(verify_box(&r)?);
        }
        Ok(reps)
    })
}

fn criterion_4() -> Outcome {
    collect(|| {
        let ctx = Context::timelike(DIM, 4)?;
        bases(4).iter().map(|(_, p)| crosscheck_frames(&ctx, p)).collect()
    })
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let out = collect(|| {
        let mut reps = Vec::new();
        for (name, _, r) in realize(4) {
            let hd = HopfData::new(&r)?;
            for g in Generator::all(DIM) {
                reps.push(check_hopf_axioms(g, &hd)?);
            }
            if name == "bicrossproduct" {
                reps.push(check_bicrossproduct_table(&hd)?);
            }
        }
        Ok(reps)
    });
    out.within(start.elapsed(), Duration::from_secs(180))
}

fn s_values() -> Vec<BigRational> {
    vec![rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1)]
}

fn criterion_6() -> Outcome {
    collect(|| {
        let mut reps = Vec::new();
        for (_, p, r) in realize(5) {
            for s in s_values() {
                let c = build_calculus(&r, &CalcParams::new(s, &p)?)?;
                let mut rep = Report::new();
                rep.identity("calculus", "dhat^2", &(&c.dhat * &c.dhat).try_truncate(5)?);
                reps.push(rep);
                reps.push(check_closed_forms(&c, &r)?);
                reps.push(check_closure_and_k(&c, &r)?.1);
            }
        }
        Ok(reps)
    })
}

fn criterion_7() -> Outcome {
    collect(|| {
        let mut reps = Vec::new();
        for (_, p, r) in realize(4) {
            for s in s_values() {
                let c = build_calculus(&r, &CalcParams::new(s, &p)?)?;
                reps.push(decompose_k(&c, &r)?);
            }
        }
        Ok(reps)
    })
}

fn criterion_8() -> Outcome {
    collect(|| {
        let mut reps = Vec::new();
        let all = realize(4);
        for (_, p, r) in &all {
            let c = build_calculus(r, &CalcParams::new(rat(1, 1), p)?)?;
            reps.push(calculus::check_action_table(&c, r)?);
            reps.push(calculus::check_module_property(&c, r, 3, 2)?);
            reps.push(calculus::check_adjoint(&HopfData::new(r)?, 3, 2)?);
        }
        let (_, p1, r1) = &all[0];
        let c1 = build_calculus(r1, &CalcParams::new(rat(1, 1), p1)?)?;
        for (_, p2, r2) in &all[1..] {
            let c2 = build_calculus(r2, &CalcParams::new(rat(1, 1), p2)?)?;
            reps.push(calculus::check_realization_independence(&c1, r1, &c2, r2, 3)?);
        }
        Ok(reps)
    })
}

const CASES: u32 = 500;

fn element_strategy(parity: Option<Parity>) -> impl Strategy<Value = AlgElement> {
    let ctx = Context::timelike(3, 3).unwrap();
    let term = (
        proptest::collection::vec(0u16..3, 3),
        proptest::collection::vec(0u16..3, 3),
        0u16..8,
        -4i64..=4,
        -4i64..=4,
        0usize..3,
    );
    proptest::collection::vec(term, 1..5).prop_map(move |terms| {
        let mut acc = AlgElement::zero(&ctx);
        for (x, d, mut mask, re, im, k) in terms {
            if let Some(p) = parity {
                let odd = mask.count_ones() % 2 == 1;
                if odd != (p == Parity::Odd) {
                    mask ^= 1;
                }
            }
            let dx: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
            let c = GaussScalar::new(rat(re, 1), rat(im, 2));
            let s = TruncSeries::monomial(c, k, 3);
            acc = &acc + &AlgElement::term(&ctx, NormalMonomial::new(&x, &dx, &d), s);
        }
        acc
    })
}

fn parity_strategy() -> impl Strategy<Value = AlgElement> {
    prop_oneof![element_strategy(Some(Parity::Even)), element_strategy(Some(Parity::Odd))]
}

fn run_property<S: Strategy>(name: &str, strat: S, test: impl Fn(S::Value) -> bool) -> Result<(), String> {
    let mut runner = TestRunner::new(PtConfig { cases: CASES, failure_persistence: None, ..PtConfig::default() });
    runner
        .run(&strat, |v| {
            prop_assert!(test(v));
            Ok(())
        })
        .map_err(|e| format!("{name}: {e}"))
}

fn criterion_9() -> Outcome {
    let el = || element_strategy(None);
    let results = [
        run_property("associativity", (el(), el(), el()), |(a, b, c)| &(&a * &b) * &c == &a * &(&b * &c)),
        run_property("graded Jacobi", (parity_strategy(), parity_strategy(), parity_strategy()), |(a, b, c)| {
            calculus::graded_jacobi(&a, &b, &c).map(|j| j.is_zero()).unwrap_or(false)
        }),
        run_property("parity multiplicativity", (parity_strategy(), parity_strategy()), |(a, b)| {
            let prod = &a * &b;
            let expect = if a.parity() == b.parity() { Parity::Even } else { Parity::Odd };
            prod.is_zero() || prod.parity() == Some(expect)
        }),
        run_property("truncation functoriality", (el(), el(), 0usize..3), |(a, b, k)| {
            (&a * &b).truncate(k) == &a.truncate(k) * &b.truncate(k)
                && (&a + &b).truncate(k) == &a.truncate(k) + &b.truncate(k)
        }),
    ];
    match results.iter().find_map(|r| r.as_ref().err()) {
        None => Outcome { passed: true, detail: format!("4 properties x {CASES} cases") },
        Some(e) => Outcome { passed: false, detail: e.clone() },
    }
}

fn criterion_10() -> Outcome {
    let ctx = Context::timelike(DIM, 4).unwrap();
    let r = build_noncov(&ctx, &named_basis_table("bicrossproduct", required_param_order(4)).unwrap()).unwrap();
    let delta = check_compatibility_of(&trivial_one_forms(&r), &r, 4).unwrap();
    let delta_rejected = !delta.passed();

    let src = "dimension = 4\norder = 4\nbasis = \"bicrossproduct\"\nchecks = [\"calculus\"]\n[fault_injection]\nk1 = \"A\"";
    let cfg = RunConfig::from_file(&ConfigFile::parse(src).unwrap()).unwrap();
    let out = run_suite(&cfg).unwrap();
    let exits_one = out.exit_code() == EXIT_FAIL;
    let dsq_broken = out.checks.iter().any(|c| c.name == "dhat^2 = 0" && !c.passed);
    let first = out.checks.iter().find(|c| !c.passed).map(|c| c.name.clone()).unwrap_or_default();
    Outcome {
        passed: delta_rejected && exits_one && dsq_broken,
        detail: format!(
            "delta one-forms rejected: {delta_rejected}; fault run exit 1: {exits_one} (first failure: {first}); \
             dhat^2 residual under fault: {dsq_broken}"
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    // libtest flags such as --nocapture or a filter are accepted and ignored
    let criteria: [Criterion; 10] = [
        ("kappa-Minkowski relations, 6 bases, n=4, N=5", criterion_1),
        ("Lorentz and mixed sector, plus natural frame at e=(1,1,0,0)", criterion_2),
        ("shift operator and Laplacian, N=5", criterion_3),
        ("natural/noncovariant frame cross-check, N=4", criterion_4),
        ("Hopf axioms at N=4, n=4, bicrossproduct table", criterion_5),
        ("calculus: dhat^2, one-form closed forms, closure constants", criterion_6),
        ("closure constants decompose as A + S with constant S", criterion_7),
        ("Lorentz action on forms and coordinates", criterion_8),
        ("structural properties on randomized elements", criterion_9),
        ("negative controls", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        if !out.passed {
            failed += 1;
        }
        println!("criterion {:>2} {tag} ({:.1}s) {name}: {}", k + 1, start.elapsed().as_secs_f64(), out.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
