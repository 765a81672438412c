use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use tvar_core::commute::criterion;
use tvar_core::lnd::DEFAULT_CAP;
use tvar_core::oracle::{enumerate_derivations, oracle_commutes};
use tvar_core::pdivisor::PolyDivisor;
use tvar_core::{Rational, SymExpr};
use tvar_lnd::action::{action, render_numeric, render_symbolic};
use tvar_lnd::format::parse_divisor;
use tvar_lnd::report::{self, generator_names};
use tvar_lnd::spec::parse_derivation;

/// Locally nilpotent derivations on complexity-one T-varieties over the affine line.
#[derive(Parser)]
#[command(name = "tvar-lnd", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// Divisor file (JSON).
    file: PathBuf,
    /// Enumeration bound on weight coordinates.
    #[arg(long = "box", default_value_t = 8)]
    bound: i64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Demazure roots of sigma and the horizontal families with their systems.
    Roots(Input),
    /// Homogeneous generators and the relations among them.
    Generators {
        #[command(flatten)]
        input: Input,
        /// Largest total degree of a relation.
        #[arg(long, default_value_t = 16)]
        deg_bound: u32,
    },
    /// Every vertical and horizontal derivation in the box.
    Lnds(Input),
    /// Whether two derivations commute.
    Commute {
        #[command(flatten)]
        input: Input,
        first: String,
        second: String,
        /// Also evaluate the commutator on generators.
        #[arg(long)]
        oracle: bool,
    },
    /// Criterion against commutator oracle on every pair in the box.
    Crosscheck(Input),
    /// The action exp(lambda D1) exp(mu D2) on the generators.
    Action {
        #[command(flatten)]
        input: Input,
        first: String,
        second: String,
        /// Parameter names, or two rationals to substitute.
        #[arg(long, default_value = "lambda,mu")]
        params: String,
        /// Largest total degree used when writing coefficients in the generators.
        #[arg(long, default_value_t = 16)]
        deg_bound: u32,
        /// Largest nilpotency order tried.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
    },
}

enum Failure {
    /// Unreadable or invalid input: exit 2.
    Input(anyhow::Error),
    /// Disagreement or refusal: exit 1.
    Refused(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn load(input: &Input) -> Result<PolyDivisor, Failure> {
    let text = std::fs::read_to_string(&input.file).with_context(|| format!("reading {}", input.file.display()))?;
    Ok(parse_divisor(&text).with_context(|| format!("in {}", input.file.display()))?)
}

fn generator_exprs(d: &PolyDivisor, bound: i64) -> Vec<SymExpr> {
    d.find_generators(bound.max(1)).into_iter().map(|g| g.expr).collect()
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(json: bool, value: serde_json::Value, text: String) {
    let out = if json { serde_json::to_string_pretty(&value).expect("serializable") + "\n" } else { text };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    match cli.cmd {
        Cmd::Roots(input) => {
            let d = load(&input)?;
            emit(json, report::roots_json(&d, input.bound), report::roots_text(&d, input.bound));
        }
        Cmd::Generators { input, deg_bound } => {
            let d = load(&input)?;
            let gens = d.find_generators(input.bound);
            let rels = d.find_relations(&gens, deg_bound);
            emit(json, report::generators_json(&gens, &rels), report::generators_text(&gens, &rels));
        }
        Cmd::Lnds(input) => {
            let d = load(&input)?;
            let ders = enumerate_derivations(&d, input.bound);
            emit(json, report::lnds_json(&d, &ders, input.bound), report::lnds_text(&d, &ders));
        }
        Cmd::Commute { input, first, second, oracle } => {
            let d = load(&input)?;
            let a = parse_derivation(&d, &first).map_err(anyhow::Error::from)?;
            let b = parse_derivation(&d, &second).map_err(anyhow::Error::from)?;
            let v = criterion(&a, &b).map_err(|e| Failure::Refused(format!("criterion failed: {}", e)))?;
            let o = oracle.then(|| oracle_commutes(&a, &b, &generator_exprs(&d, input.bound)));
            emit(json, report::verdict_json(&v, o.as_ref()), report::verdict_text(&v, o.as_ref()));
            if o.is_some_and(|o| o.commutes != v.criterion) {
                return Err(Failure::Refused("criterion and oracle disagree".into()));
            }
        }
        Cmd::Crosscheck(input) => {
            let d = load(&input)?;
            let ders = enumerate_derivations(&d, input.bound);
            let r = report::cross_check_parallel(&ders, &generator_exprs(&d, input.bound));
            emit(json, report::crosscheck_json(&r), report::crosscheck_text(&r));
            if !r.is_clean() {
                return Err(Failure::Refused("criterion and oracle disagree".into()));
            }
        }
        Cmd::Action { input, first, second, params, deg_bound, cap } => {
            let d = load(&input)?;
            let a = parse_derivation(&d, &first).map_err(anyhow::Error::from)?;
            let b = parse_derivation(&d, &second).map_err(anyhow::Error::from)?;
            let (p1, p2) = params
                .split_once(',')
                .map(|(x, y)| (x.trim(), y.trim()))
                .ok_or_else(|| Failure::Input(anyhow::anyhow!("--params expects two comma-separated values")))?;
            let gens = d.find_generators(input.bound);
            let exprs: Vec<SymExpr> = gens.iter().map(|g| g.expr.clone()).collect();
            let o = oracle_commutes(&a, &b, &exprs);
            if !o.commutes {
                let w = o.witness.map(|w| format!(": [D1, D2]({}) = {}", w.element, w.value)).unwrap_or_default();
                return Err(Failure::Refused(format!(
                    "the derivations do not commute{}, so exp(lambda D1) exp(mu D2) is not an action of the two-dimensional additive group",
                    w
                )));
            }
            let rels = d.find_relations(&gens, deg_bound);
            let names = generator_names(gens.len());
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let imgs = action(&d, &a, &b, &gens, &rels, &names, deg_bound, cap)
                .map_err(|e| Failure::Refused(e.to_string()))?;
            let numeric = match (p1.parse::<Rational>(), p2.parse::<Rational>()) {
                (Ok(l), Ok(m)) => Some((l, m)),
                _ => None,
            };
            let lines: Vec<String> = imgs
                .iter()
                .map(|img| match numeric {
                    Some((l, m)) => render_numeric(img, &names, l, m),
                    None => render_symbolic(img, &names, (p1, p2)),
                })
                .collect();
            let value = serde_json::json!({
                "generators": gens.iter().zip(&names).map(|(g, n)| serde_json::json!({"name": n, "weight": g.weight, "expr": g.expr.to_string()})).collect::<Vec<_>>(),
                "action": lines,
            });
            let mut text = String::new();
            for (g, n) in gens.iter().zip(&names) {
                text.push_str(&format!("{} = {}\n", n, g.expr));
            }
            for l in &lines {
                text.push_str(l);
                text.push('\n');
            }
            emit(json, value, text);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Refused(msg)) => {
            eprintln!("tvar-lnd: {}", msg);
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("tvar-lnd: {:#}", e);
            ExitCode::from(2)
        }
    }
}
