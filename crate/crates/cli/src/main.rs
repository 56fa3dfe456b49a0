use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kappa_core::catalog;
use kappa_core::config::{ConfigFile, FaultInjection, OutputFormat, RealizationKind, RunConfig, SCHEMA_VERSION};
use kappa_core::export::ExportedElement;
use kappa_core::suite::{run_session, Session, EXIT_INPUT};
use kappa_core::Error;
use serde_json::json;

/// Exact verification of kappa-Minkowski realizations, the kappa-Poincare
/// Hopf structure and the deformed differential calculus.
#[derive(Parser, Debug)]
#[command(name = "kappa", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// TOML run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Catalog basis name (see `kappa catalog`).
    #[arg(long, global = true)]
    basis: Option<String>,
    /// Custom phi(A), in the expression language.
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Custom psi(A).
    #[arg(long, global = true, allow_hyphen_values = true)]
    psi: Option<String>,
    /// Parameter bindings such as `r=1,c=2`.
    #[arg(long, global = true)]
    params: Option<String>,
    /// Truncation order N in a0.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Spacetime dimension n.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// One-form parameter s, as a rational.
    #[arg(long, global = true, allow_hyphen_values = true)]
    s: Option<String>,
    /// Use the natural realization.
    #[arg(long, global = true)]
    natural: bool,
    /// Deformation direction, comma-separated rationals.
    #[arg(long, global = true, allow_hyphen_values = true)]
    direction: Option<String>,
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run check suites; exit 0 if all identities hold, 1 otherwise.
    Verify {
        /// Comma-separated suites: actions, box, calculus, frames, hopf,
        /// lorentz, shift, space.
        #[arg(long)]
        checks: Option<String>,
        /// Add this expression in A to K1 (negative testing).
        #[arg(long, allow_hyphen_values = true)]
        fault_k1: Option<String>,
    },
    /// Print a realized object, e.g. xhat0, M10, Z, D1, box, dhat, xi0,
    /// or a product such as xhat0*xhat1.
    Show { object: String },
    /// Graded commutator of two objects.
    Commutator { a: String, b: String },
    /// Coproduct of p0..p(n-1), Mij or Z.
    Coproduct { generator: String },
    /// Antipode of a generator.
    Antipode { generator: String },
    /// `op ▷ (f ▷ 1)`.
    Act { op: String, target: String },
    /// List the named bases.
    Catalog,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

fn load_config(opts: &Opts, cmd: &Command) -> Result<RunConfig, Error> {
    let mut file = match &opts.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    if opts.basis.is_some() || opts.phi.is_some() || opts.psi.is_some() {
        file.basis = opts.basis.clone();
        file.phi = opts.phi.clone();
        file.psi = opts.psi.clone();
    }
    if let Some(p) = &opts.params {
        for (k, v) in split_list(p).iter().map(|kv| kv.split_once('=').unwrap_or((kv, ""))) {
            file.params.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    file.order = opts.order.or(file.order);
    file.dimension = opts.dim.or(file.dimension);
    file.s = opts.s.clone().or(file.s);
    if opts.natural {
        file.realization = Some(RealizationKind::Natural);
    }
    if let Some(d) = &opts.direction {
        file.direction = Some(split_list(d));
    }
    if opts.json {
        file.output = Some(OutputFormat::Json);
    }
    if let Command::Verify { checks, fault_k1 } = cmd {
        if let Some(c) = checks {
            file.checks = Some(split_list(c));
        }
        if let Some(k1) = fault_k1 {
            file.fault_injection = Some(FaultInjection { k1: Some(k1.clone()) });
        }
    }
    RunConfig::from_file(&file)
}

// A closed pipe on stdout is not an error worth reporting.
fn out(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_json(v: &serde_json::Value) {
    out(&serde_json::to_string_pretty(v).expect("serializable"));
}

fn emit(cfg: &RunConfig, what: &str, name: &str, value: ExportedElement) {
    match cfg.output {
        OutputFormat::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "config": cfg.summary(),
            what: name,
            "value": value,
        })),
        OutputFormat::Text => out(&value.text),
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    if let Command::Catalog = cli.cmd {
        let entries = catalog::catalog();
        if cli.opts.json {
            print_json(&json!({ "schema_version": SCHEMA_VERSION, "bases": entries }));
        } else {
            for e in &entries {
                out(&catalog::describe(e));
            }
        }
        return Ok(0);
    }
    let cfg = load_config(&cli.opts, &cli.cmd)?;
    let session = Session::new(cfg.clone())?;
    match &cli.cmd {
        Command::Verify { .. } => {
            let outcome = run_session(&session)?;
            match cfg.output {
                OutputFormat::Json => print_json(&serde_json::to_value(&outcome).expect("serializable")),
                OutputFormat::Text => out(outcome.render_text().trim_end()),
            }
            Ok(outcome.exit_code())
        }
        Command::Show { object } => {
            emit(&cfg, "object", object, (&session.object(object)?).into());
            Ok(0)
        }
        Command::Commutator { a, b } => {
            emit(&cfg, "commutator", &format!("[{a}, {b}]"), (&session.commutator(a, b)?).into());
            Ok(0)
        }
        Command::Coproduct { generator } => {
            emit(&cfg, "coproduct", generator, (&session.coproduct(generator)?).into());
            Ok(0)
        }
        Command::Antipode { generator } => {
            emit(&cfg, "antipode", generator, (&session.antipode(generator)?).into());
            Ok(0)
        }
        Command::Act { op, target } => {
            emit(&cfg, "action", &format!("{op} > {target}"), (&session.act(op, target)?).into());
            Ok(0)
        }
        Command::Catalog => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
