use kappa_core::calculus::{build_calculus, check_d_properties, CalcParams};
use kappa_core::catalog::{catalog, named_basis_table};
use kappa_core::config::{ConfigFile, RunConfig};
use kappa_core::dsl::{eval_source, Bindings};
use kappa_core::export::ExportedElement;
use kappa_core::hopf::{check_hopf_axioms, Generator, HopfData};
use kappa_core::realization::{build_noncov, required_param_order, verify_space, NoncovParams};
use kappa_core::suite::{run_suite, Session, EXIT_FAIL, EXIT_PASS};
use kappa_core::{AlgElement, Context, Error};
use num_rational::BigRational;

fn ctx(dim: usize, order: usize) -> Context {
    let mut e = vec![BigRational::from_integer(0.into()); dim];
    e[0] = BigRational::from_integer(1.into());
    Context::new(dim, order, e).unwrap()
}

fn config(src: &str) -> RunConfig {
    RunConfig::from_file(&ConfigFile::parse(src).unwrap()).unwrap()
}

#[test]
fn every_catalog_basis_passes_every_suite_in_three_dimensions() {
    for entry in catalog() {
        let out = run_suite(&config(&format!("basis = \"{}\"\ndimension = 3\norder = 2", entry.name))).unwrap();
        let failed: Vec<_> = out.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        assert!(failed.is_empty(), "{}: {failed:?}", entry.name);
        assert_eq!(out.exit_code(), EXIT_PASS);
    }
}

#[test]
fn custom_dsl_basis_matches_named_basis() {
    let a = Session::new(config("basis = \"weyl-symmetric\"\ndimension = 2\norder = 4")).unwrap();
    let b = Session::new(config("phi = \"A/(exp(A)-1)\"\npsi = \"1\"\ndimension = 2\norder = 4")).unwrap();
    for obj in ["xhat0", "xhat1", "M10", "Z", "box", "xi1"] {
        assert_eq!(a.object(obj).unwrap(), b.object(obj).unwrap(), "{obj}");
    }
}

#[test]
fn realization_built_by_hand_satisfies_the_algebra() {
    let c = ctx(3, 3);
    let phi = eval_source("exp(-A)", required_param_order(3), &Bindings::new()).unwrap();
    let psi = eval_source("1", required_param_order(3), &Bindings::new()).unwrap();
    let r = build_noncov(&c, &NoncovParams::new(phi, psi).unwrap()).unwrap();
    assert!(verify_space(&r).unwrap().passed());

    let hd = HopfData::new(&r).unwrap();
    for g in Generator::all(3) {
        assert!(check_hopf_axioms(g, &hd).unwrap().passed(), "{g:?}");
    }

    let calc = build_calculus(&r, &CalcParams::new(BigRational::new(1.into(), 2.into()), r.noncov_params().unwrap()).unwrap()).unwrap();
    assert!(check_d_properties(&calc, &r, 2).unwrap().passed());
}

#[test]
fn fault_injection_fails_the_run() {
    let out = run_suite(&config("basis = \"left\"\ndimension = 2\norder = 2\nchecks = [\"calculus\"]\n[fault_injection]\nk1 = \"A^2\"")).unwrap();
    assert_eq!(out.exit_code(), EXIT_FAIL);
}

#[test]
fn export_agrees_with_rendering() {
    let s = Session::new(config("basis = \"right-covariant\"\ndimension = 3\norder = 3")).unwrap();
    let e = s.object("xhat0*xhat1").unwrap();
    let x: ExportedElement = (&e).into();
    assert_eq!(x.text, e.render());
    assert_eq!(x.terms.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" + "), x.text);
    let t: ExportedElement = (&s.coproduct("M10").unwrap()).into();
    assert_eq!(t.legs, 2);
}

#[test]
fn precondition_errors() {
    let c = ctx(2, 2);
    let one = eval_source("1", 4, &Bindings::new()).unwrap();
    let two = eval_source("2", 4, &Bindings::new()).unwrap();
    assert!(NoncovParams::new(two, one).is_err());
    let mixed = &AlgElement::x(&c, 0) + &AlgElement::dx(&c, 0);
    assert!(matches!(AlgElement::graded_commutator(&mixed, &mixed), Err(Error::MixedParity)));
    assert!(Context::new(2, 2, vec![BigRational::from_integer(0.into()); 2]).is_err());
    assert!(named_basis_table("no-such-basis", 3).is_err());
    assert!(eval_source("1/A", 4, &Bindings::new()).is_err());
    assert!(eval_source("A/A", 4, &Bindings::new()).is_ok());
}
