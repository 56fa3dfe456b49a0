//! Browser bindings. Every entry point takes a TOML run configuration
//! (the same format `kappa --config` reads) and returns a JSON string of
//! the form `{"ok": true, ...}` or `{"ok": false, "error": "..."}`.

use kappa_core::catalog;
use kappa_core::config::{ConfigFile, RunConfig, SCHEMA_VERSION};
use kappa_core::export::ExportedElement;
use kappa_core::suite::{run_session, Session};
use kappa_core::{Error, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Keeps a single click under a few seconds in the browser.
pub const MAX_WEB_DIMENSION: usize = 4;
pub const MAX_WEB_ORDER: usize = 5;

fn session(config: &str) -> Result<Session> {
    let cfg = RunConfig::from_file(&ConfigFile::parse(config)?)?;
    if cfg.dimension > MAX_WEB_DIMENSION || cfg.order > MAX_WEB_ORDER {
        return Err(Error::Config(format!(
            "the demo is limited to dimension <= {MAX_WEB_DIMENSION} and order <= {MAX_WEB_ORDER}; use the CLI for larger runs"
        )));
    }
    Session::new(cfg)
}

fn respond(result: Result<Value>) -> String {
    let v = match result {
        Ok(Value::Object(mut m)) => {
            m.insert("ok".into(), Value::Bool(true));
            m.insert("schema_version".into(), SCHEMA_VERSION.into());
            Value::Object(m)
        }
        Ok(other) => json!({ "ok": true, "schema_version": SCHEMA_VERSION, "value": other }),
        Err(e) => json!({ "ok": false, "error": e.to_string() }),
    };
    v.to_string()
}

fn element(config: &str, f: impl FnOnce(&Session) -> Result<ExportedElement>) -> String {
    respond(session(config).and_then(|s| {
        let value = f(&s)?;
        Ok(json!({ "config": s.cfg.summary(), "value": value }))
    }))
}

/// The named bases with their `(φ, ψ)` expressions.
#[wasm_bindgen]
pub fn bases() -> String {
    respond(Ok(json!({ "bases": catalog::catalog() })))
}

/// Realizes an object such as `xhat0`, `M10`, `xi1` or `xhat0*xhat1`.
#[wasm_bindgen]
pub fn show(config: &str, object: &str) -> String {
    element(config, |s| Ok((&s.object(object)?).into()))
}

/// Graded commutator of two objects.
#[wasm_bindgen]
pub fn commutator(config: &str, a: &str, b: &str) -> String {
    element(config, |s| Ok((&s.commutator(a, b)?).into()))
}

/// Coproduct of a generator (`p0`, `M10`, `Z`, ...).
#[wasm_bindgen]
pub fn coproduct(config: &str, generator: &str) -> String {
    element(config, |s| Ok((&s.coproduct(generator)?).into()))
}

/// Runs the check suites named in the configuration.
#[wasm_bindgen]
pub fn verify(config: &str) -> String {
    respond(session(config).and_then(|s| {
        let outcome = run_session(&s)?;
        serde_json::to_value(outcome).map_err(|e| Error::Config(e.to_string()))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    const LEFT: &str = "basis = \"left\"\ndimension = 2\norder = 2";

    #[test]
    fn lists_bases() {
        let v = parse(&bases());
        assert_eq!(v["ok"], true);
        assert_eq!(v["bases"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn show_and_commutator() {
        let v = parse(&show(LEFT, "xhat1"));
        assert_eq!(v["ok"], true);
        assert_eq!(v["config"]["basis"], "left");
        assert!(v["value"]["text"].as_str().unwrap().starts_with("x1"));
        let v = parse(&commutator("basis = \"bicrossproduct\"\ndimension = 2\norder = 2", "xhat0", "xhat1"));
        assert_eq!(v["value"]["text"], "i*a0*x1");
    }

    #[test]
    fn coproduct_is_two_legged() {
        let v = parse(&coproduct("basis = \"bicrossproduct\"\ndimension = 2\norder = 2", "p0"));
        assert_eq!(v["value"]["legs"], 2);
    }

    #[test]
    fn verify_reports_checks() {
        let v = parse(&verify("basis = \"weyl-symmetric\"\ndimension = 2\norder = 2\nchecks = [\"space\", \"hopf\"]"));
        assert_eq!(v["ok"], true);
        assert_eq!(v["passed"], true);
        assert!(v["total"].as_u64().unwrap() > 0);
    }

    #[test]
    fn errors_are_reported_not_thrown() {
        for (cfg, obj) in [("phi = \"2\"", "xhat0"), ("dimension = 6", "xhat0"), (LEFT, "nothing"), ("order = [", "xhat0")] {
            let v = parse(&show(cfg, obj));
            assert_eq!(v["ok"], false, "{cfg} {obj}");
            assert!(!v["error"].as_str().unwrap().is_empty());
        }
    }
}
