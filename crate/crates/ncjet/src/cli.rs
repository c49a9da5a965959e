//! Command-line front end. Every command prints one JSON document.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{Algebra, Module};
use crate::calculus::Calculus;
use crate::diffops::{first_order_criterion, order};
use crate::error::{Error, Result};
use crate::exterior::{maximal_exterior, SymmetricForms};
use crate::homology::{free_resolution, tor_all, Generators};
use crate::io::{read_json, resolve_module, to_json, AlgebraSpec, CalculusSpec, OperatorSpec};
use crate::jets::{d2_obstruction, Flavor, JetTowers};
use crate::report;

#[derive(Debug, Parser)]
#[command(name = "ncjet", version, about = "Jets, exterior algebras and differential operators over finite-dimensional algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Algebra file
    #[arg(long)]
    pub algebra: PathBuf,
    /// Calculus file
    #[arg(long)]
    pub calculus: PathBuf,
    /// Module file, or one of `regular`, `point` (default: regular)
    #[arg(long)]
    pub module: Option<String>,
    /// Highest exterior grade
    #[arg(long, default_value_t = report::TRUNCATION)]
    pub truncate: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebra, calculus, module and exterior algebra axioms
    Validate {
        /// Algebra file
        #[arg(long)]
        algebra: PathBuf,
        /// Calculus file
        #[arg(long)]
        calculus: Option<PathBuf>,
        /// Module file, or one of `regular`, `point`
        #[arg(long)]
        module: Option<String>,
        /// Highest exterior grade
        #[arg(long, default_value_t = report::TRUNCATION)]
        truncate: usize,
        /// Write the JSON here instead of stdout
        #[arg(long, alias = "report")]
        out: Option<PathBuf>,
    },
    /// Jet dimensions and exact sequences
    Jets {
        #[command(flatten)]
        inputs: Inputs,
        /// nonholonomic, semiholonomic, sesquiholonomic or holonomic
        #[arg(long, default_value = "holonomic")]
        flavor: Flavor,
        /// Highest jet order
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Write the JSON here instead of stdout
        #[arg(long, alias = "report")]
        out: Option<PathBuf>,
    },
    /// Symmetric forms and Spencer cohomology
    Spencer {
        #[command(flatten)]
        inputs: Inputs,
        /// Highest symmetric degree (default: truncation + 1)
        #[arg(long)]
        order: Option<usize>,
        /// Write the JSON here instead of stdout
        #[arg(long, alias = "report")]
        out: Option<PathBuf>,
    },
    /// Tor groups from a minimal free resolution
    Tor {
        /// Algebra file
        #[arg(long)]
        algebra: PathBuf,
        /// Right module (file, `regular` or `point`)
        #[arg(long = "M")]
        m: String,
        /// Left module (file, `regular` or `point`)
        #[arg(long = "N")]
        n: String,
        /// Highest Tor degree
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Write the JSON here instead of stdout
        #[arg(long, alias = "report")]
        out: Option<PathBuf>,
    },
    /// Order of a linear map as a differential operator
    Diffop {
        #[command(flatten)]
        inputs: Inputs,
        /// Operator file
        #[arg(long)]
        op: PathBuf,
        /// nonholonomic, semiholonomic, sesquiholonomic or holonomic
        #[arg(long, default_value = "holonomic")]
        flavor: Flavor,
        /// Highest order to try
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        /// Write the JSON here instead of stdout
        #[arg(long, alias = "report")]
        out: Option<PathBuf>,
    },
    /// Full report for a built-in example: quaternion or infinitesimal
    Report {
        /// `quaternion` or `infinitesimal`
        example: String,
        /// Write the JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit code for an error: 2 for malformed input, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) | Error::Dimension(_) => 2,
        _ => 1,
    }
}

fn base_dir(p: &Path) -> &Path {
    p.parent().unwrap_or(Path::new("."))
}

pub fn load_algebra(path: &Path) -> Result<Algebra> {
    let alg = read_json::<AlgebraSpec>(path)?.build()?;
    let rep = alg.validate();
    if !rep.ok() {
        return Err(Error::Validation(format!("{}: {}", path.display(), rep.failures.join("; "))));
    }
    Ok(alg)
}

pub fn load_calculus(path: &Path, alg: &Algebra) -> Result<Calculus> {
    let calc = read_json::<CalculusSpec>(path)?.build(alg)?;
    let rep = calc.validate();
    if !rep.ok() {
        return Err(Error::Validation(format!("{}: {}", path.display(), rep.failures.join("; "))));
    }
    Ok(calc)
}

fn load_module(r: Option<&str>, alg: &Algebra, calc: Option<&Calculus>) -> Result<Module> {
    resolve_module(r.unwrap_or("regular"), alg, calc, Path::new("."))
}

fn load_inputs(inp: &Inputs) -> Result<(Calculus, Module)> {
    let alg = load_algebra(&inp.algebra)?;
    let calc = load_calculus(&inp.calculus, &alg)?;
    let e = load_module(inp.module.as_deref(), &alg, Some(&calc))?;
    Ok((calc, e))
}

/// Result of `validate`: the report and whether everything holds.
pub fn cmd_validate(algebra: &Path, calculus: Option<&Path>, module: Option<&str>, truncate: usize) -> Result<(Value, bool)> {
    let alg = read_json::<AlgebraSpec>(algebra)?.build()?;
    let ar = alg.validate();
    let mut ok = ar.ok();
    let mut out = json!({"algebra": ar});
    if !ok {
        out["ok"] = json!(false);
        return Ok((out, false));
    }
    let calc = match calculus {
        Some(p) => {
            let calc = read_json::<CalculusSpec>(p)?.build(&alg)?;
            let cr = calc.validate();
            ok &= cr.ok();
            out["calculus"] = json!(cr);
            if cr.ok() {
                out["omega1"] = json!(calc.dim());
                out["left_free_basis"] = json!(calc
                    .find_free_basis()
                    .map(|b| b.iter().map(|&i| format!("d{}", alg.labels()[i])).collect::<Vec<_>>()));
                if truncate >= 2 {
                    let er = maximal_exterior(&calc, truncate)?.validate();
                    ok &= er.ok();
                    out["exterior"] = json!(er);
                }
            }
            Some(calc)
        }
        None => None,
    };
    if let Some(r) = module {
        let failures = match load_module(Some(r), &alg, calc.as_ref()) {
            Ok(_) => Vec::new(),
            Err(Error::Validation(w)) => vec![w],
            Err(e) => return Err(e),
        };
        ok &= failures.is_empty();
        out["module"] = json!({"failures": failures});
    }
    out["ok"] = json!(ok);
    Ok((out, ok))
}

pub fn cmd_jets(inp: &Inputs, flavor: Flavor, n: usize) -> Result<Value> {
    let (calc, e) = load_inputs(inp)?;
    let ext = maximal_exterior(&calc, inp.truncate)?;
    let mut towers = JetTowers::for_flavor(&ext, &e, n, flavor)?;
    let holonomic = matches!(flavor, Flavor::Holonomic | Flavor::Sesquiholonomic);
    if holonomic {
        towers.sym = Some(SymmetricForms::new(&ext, &e, n)?);
    }
    let mut out = json!(towers.report(&calc, flavor)?);
    let regular = e == Module::regular(calc.algebra());
    if holonomic && regular && n >= 2 && inp.truncate >= 2 {
        out["obstruction"] = json!(d2_obstruction(&ext, towers.symmetric()?)?);
    }
    Ok(out)
}

pub fn cmd_spencer(inp: &Inputs, top: Option<usize>) -> Result<Value> {
    let (calc, e) = load_inputs(inp)?;
    let ext = maximal_exterior(&calc, inp.truncate)?;
    let sym = SymmetricForms::new(&ext, &e, top.unwrap_or(inp.truncate + 1))?;
    Ok(json!(report::spencer_report(&ext, &sym)))
}

pub fn cmd_tor(algebra: &Path, m: &str, n: &str, depth: usize) -> Result<Value> {
    let alg = load_algebra(algebra)?;
    let base = Path::new(".");
    let mut m = resolve_module(m, &alg, None, base)?;
    if m.right().is_none() {
        if !alg.is_commutative() {
            return Err(Error::Validation("M must carry a right action".into()));
        }
        m = Module::new(m.dim(), m.left().to_vec(), Some(m.left().to_vec()))?;
    }
    let n = resolve_module(n, &alg, None, base)?;
    let groups = tor_all(&alg, &m, &n, depth, Generators::Greedy)?;
    let res = free_resolution(&alg.opposite(), &m.opposite()?, depth, Generators::Greedy)?;
    Ok(json!({
        "depth": depth,
        "dims": groups.iter().map(|g| g.dim).collect::<Vec<_>>(),
        "resolution_ranks": res.ranks(),
    }))
}

pub fn cmd_diffop(inp: &Inputs, op: &Path, flavor: Flavor, max_order: usize) -> Result<Value> {
    let alg = load_algebra(&inp.algebra)?;
    let calc = load_calculus(&inp.calculus, &alg)?;
    let spec: OperatorSpec = read_json(op)?;
    let (e, f, delta) = spec.resolve(&calc, base_dir(op))?;
    let ext = maximal_exterior(&calc, inp.truncate)?;
    let towers = JetTowers::for_flavor(&ext, &e, max_order, flavor)?;
    let scan = order(&towers, &alg, flavor, &f, &delta)?;
    Ok(json!({
        "flavor": flavor,
        "domain": e.dim(),
        "codomain": f.dim(),
        "order": scan.order,
        "max_order": scan.max,
        "stabilized": scan.stabilized,
        "lift_freedom": scan.certificate.as_ref().map(|c| c.freedom),
        "first_order_criterion": first_order_criterion(&calc, &e, &f, &delta)?,
    }))
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = to_json(value)?;
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Validate {
            algebra,
            calculus,
            module,
            truncate,
            out,
        } => cmd_validate(algebra, calculus.as_deref(), module.as_deref(), *truncate)
            .and_then(|(v, ok)| emit(&v, out.as_deref()).map(|_| if ok { 0 } else { 1 })),
        Command::Jets {
            inputs,
            flavor,
            order,
            out,
        } => cmd_jets(inputs, *flavor, *order).and_then(|v| emit(&v, out.as_deref()).map(|_| 0)),
        Command::Spencer { inputs, order, out } => {
            cmd_spencer(inputs, *order).and_then(|v| emit(&v, out.as_deref()).map(|_| 0))
        }
        Command::Tor { algebra, m, n, depth, out } => {
            cmd_tor(algebra, m, n, *depth).and_then(|v| emit(&v, out.as_deref()).map(|_| 0))
        }
        Command::Diffop {
            inputs,
            op,
            flavor,
            max_order,
            out,
        } => cmd_diffop(inputs, op, *flavor, *max_order).and_then(|v| emit(&v, out.as_deref()).map(|_| 0)),
        Command::Report { example, out } => report::by_name(example).and_then(|v| emit(&v, out.as_deref()).map(|_| 0)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

