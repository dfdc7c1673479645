//! Command-line front end: `solve`, `bound`, `join`, `verify` and `gen`.
//!
//! Documents go to the output stream, diagnostics and trace lines to the
//! error stream. Exit codes: 0 ok, 1 input error, 2 precondition violated,
//! 3 verification failed, 4 internal invariant failure.

pub mod document;
pub mod generate;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use insp_core::verify::{fractional_lower_bound, verify_feasible_capacity, verify_realization};
use insp_core::{
    check_preconditions, min_cost_ij_join, optimal_cost_formula, solve_with, Capacity, Instance,
    JoinError, NodeId, ParityInstance, Realization, SolveError, SplitEvent,
};

use crate::document::{
    format_rational, instance_hash, join_entry, parse_instance, parse_rational,
    parse_realization_document, result_document,
};
use crate::generate::{default_lengths, generate, GenOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "insp",
    version,
    about = "Minimum-cost integer network synthesis on tree metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print the result document.
    Solve {
        file: PathBuf,
        /// Print one `split s u w t` line per split to the error stream.
        #[arg(long)]
        trace: bool,
        /// Re-verify the realization and the optimal value before printing.
        #[arg(long)]
        check: bool,
    },
    /// Print the fractional lower bound and, when defined, the integer optimum.
    Bound { file: PathBuf },
    /// Minimum-cost parity join over the instance's tree.
    Join {
        file: PathBuf,
        /// Nodes that must meet an even number of join edges.
        #[arg(long, value_delimiter = ',')]
        even: Vec<String>,
        /// Nodes that must meet an odd number of join edges.
        #[arg(long, value_delimiter = ',')]
        odd: Vec<String>,
    },
    /// Check a realization (or a solve result document) against an instance.
    Verify {
        instance: PathBuf,
        realization: PathBuf,
    },
    /// Print a random instance document.
    Gen {
        #[arg(long)]
        terminals: usize,
        #[arg(long, default_value_t = 0)]
        inner: usize,
        #[arg(long, default_value_t = 2)]
        rmin: Capacity,
        #[arg(long)]
        rmax: Capacity,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated length set, e.g. `0,1/2,1,2,7/3`.
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<String>,
    },
}

/// A failed command: exit code plus a diagnostic line.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve { file, trace, check } => cmd_solve(&file, trace, check, out, err),
        Command::Bound { file } => cmd_bound(&file, out),
        Command::Join { file, even, odd } => cmd_join(&file, &even, &odd, out),
        Command::Verify {
            instance,
            realization,
        } => cmd_verify(&instance, &realization, out, err),
        Command::Gen {
            terminals,
            inner,
            rmin,
            rmax,
            seed,
            lengths,
        } => cmd_gen(terminals, inner, rmin, rmax, seed, &lengths, out),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "insp: {message}");
            code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("documents serialize");
    writeln!(out, "{text}").map_err(|e| Failure::input(format!("writing output: {e}")))
}

fn edge_label(instance: &Instance, e: usize) -> (String, String) {
    let tree = instance.tree();
    let edge = &tree.edges()[e];
    (tree.name(edge.u).to_string(), tree.name(edge.v).to_string())
}

fn cmd_solve(
    path: &Path,
    trace: bool,
    check: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let instance = load(path)?;
    let tree = instance.tree();
    let mut trace_lines = Vec::new();
    let mut observer = |ev: &SplitEvent<'_>| {
        if let SplitEvent::Split {
            node, u, w, amount, ..
        } = ev
        {
            trace_lines.push(format!(
                "split {} {} {} {}",
                tree.name(*node),
                tree.name(*u),
                tree.name(*w),
                amount
            ));
        }
    };
    let result = if trace {
        solve_with(&instance, &mut observer)
    } else {
        solve_with(&instance, &mut ())
    };
    for line in &trace_lines {
        let _ = writeln!(err, "{line}");
    }
    let solution = match result {
        Ok(s) => s,
        Err(SolveError::PreconditionViolated(report)) => {
            let violations: Vec<_> = report
                .violations
                .iter()
                .map(|v| {
                    let (a, b) = edge_label(&instance, v.edge);
                    let _ = writeln!(
                        err,
                        "insp: precondition violated: edge {a}-{b} has R = {} (needs at least 2)",
                        v.requirement
                    );
                    json!({ "u": a, "v": b, "requirement": v.requirement })
                })
                .collect();
            emit(
                out,
                &json!({
                    "status": "precondition_violated",
                    "violations": violations,
                    "instance_hash": instance_hash(&instance),
                }),
            )?;
            return Ok(EXIT_PRECONDITION);
        }
        Err(e) => return Err(Failure::internal(e.to_string())),
    };

    if check {
        if let Err(violations) = verify_realization(&instance, &solution.realization) {
            return Err(Failure::internal(format!(
                "check failed: {} requirement(s) not met",
                violations.len()
            )));
        }
        if let Err(violations) = verify_feasible_capacity(&instance, &solution.capacity) {
            return Err(Failure::internal(format!(
                "check failed: capacity infeasible: {violations:?}"
            )));
        }
        let formula =
            optimal_cost_formula(&instance).map_err(|e| Failure::internal(e.to_string()))?;
        if formula != solution.cost {
            return Err(Failure::internal(format!(
                "check failed: cost {} but optimum {}",
                format_rational(&solution.cost),
                format_rational(&formula)
            )));
        }
    }
    emit(out, &result_document(&instance, &solution))?;
    Ok(EXIT_OK)
}

fn cmd_bound(path: &Path, out: &mut dyn Write) -> Outcome {
    let instance = load(path)?;
    let lower = fractional_lower_bound(&instance);
    let (preconditions, formula) = match check_preconditions(&instance) {
        Ok(()) => {
            let f =
                optimal_cost_formula(&instance).map_err(|e| Failure::internal(e.to_string()))?;
            ("ok", Some(format_rational(&f)))
        }
        Err(_) => ("violated", None),
    };
    emit(
        out,
        &json!({
            "lower_bound": format_rational(&lower),
            "formula_cost": formula,
            "preconditions": preconditions,
            "instance_hash": instance_hash(&instance),
        }),
    )?;
    Ok(EXIT_OK)
}

fn node_set(instance: &Instance, names: &[String]) -> Result<BTreeSet<NodeId>, Failure> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| {
            instance
                .tree()
                .node_id(n)
                .map_err(|e| Failure::input(e.to_string()))
        })
        .collect()
}

fn cmd_join(path: &Path, even: &[String], odd: &[String], out: &mut dyn Write) -> Outcome {
    let instance = load(path)?;
    let parity = ParityInstance::new(
        instance.tree(),
        node_set(&instance, even)?,
        node_set(&instance, odd)?,
    )
    .map_err(|e| Failure::input(e.to_string()))?;
    match min_cost_ij_join(&parity) {
        Ok(join) => {
            let entry = join_entry(&instance, &join);
            emit(
                out,
                &json!({ "status": "ok", "cost": entry.cost, "edges": entry.edges }),
            )?;
        }
        Err(JoinError::Infeasible) => emit(out, &json!({ "status": "infeasible" }))?,
        Err(e) => return Err(Failure::internal(e.to_string())),
    }
    Ok(EXIT_OK)
}

fn cmd_verify(
    instance_path: &Path,
    realization_path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let instance = load(instance_path)?;
    let doc = parse_realization_document(&read(realization_path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", realization_path.display())))?;
    let hash = instance_hash(&instance);
    if let Some(claimed) = &doc.instance_hash {
        if *claimed != hash {
            return Err(Failure::input(format!(
                "{} was produced for a different instance",
                realization_path.display()
            )));
        }
    }
    let terminal = |name: &str| {
        instance
            .tree()
            .node_id(name)
            .ok()
            .filter(|&x| instance.tree().is_terminal(x))
            .ok_or_else(|| Failure::input(format!("`{name}` is not a terminal")))
    };
    let mut y = Realization::new();
    let mut seen = BTreeMap::new();
    for entry in &doc.realization {
        let (s, t) = (terminal(&entry.s)?, terminal(&entry.t)?);
        if s == t {
            return Err(Failure::input(format!(
                "entry joins `{}` to itself",
                entry.s
            )));
        }
        if seen.insert((s.min(t), s.max(t)), ()).is_some() {
            return Err(Failure::input(format!(
                "duplicate entry for {}-{}",
                entry.s, entry.t
            )));
        }
        y.set(s, t, entry.y);
    }
    let cost = instance
        .realization_cost(&y)
        .map_err(|e| Failure::input(e.to_string()))?;
    let name = |x: NodeId| instance.tree().name(x).to_string();
    match verify_realization(&instance, &y) {
        Ok(()) => {
            emit(
                out,
                &json!({
                    "status": "ok",
                    "cost": format_rational(&cost),
                    "violations": [],
                    "instance_hash": hash,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Err(violations) => {
            let listed: Vec<_> = violations
                .iter()
                .map(|v| {
                    let _ = writeln!(
                        err,
                        "insp: {}-{} needs {} but gets {}",
                        name(v.s),
                        name(v.t),
                        v.required,
                        v.achieved
                    );
                    json!({
                        "s": name(v.s),
                        "t": name(v.t),
                        "required": v.required,
                        "achieved": v.achieved,
                        "deficit": v.deficit(),
                    })
                })
                .collect();
            emit(
                out,
                &json!({
                    "status": "violated",
                    "cost": format_rational(&cost),
                    "violations": listed,
                    "instance_hash": hash,
                }),
            )?;
            Ok(EXIT_VERIFICATION)
        }
    }
}

fn cmd_gen(
    terminals: usize,
    inner: usize,
    rmin: Capacity,
    rmax: Capacity,
    seed: u64,
    lengths: &[String],
    out: &mut dyn Write,
) -> Outcome {
    let lengths = if lengths.is_empty() {
        default_lengths()
    } else {
        lengths
            .iter()
            .map(|s| parse_rational(s).map_err(|e| Failure::input(format!("--lengths: {e}"))))
            .collect::<Result<_, _>>()?
    };
    let doc = generate(&GenOptions {
        terminals,
        inner,
        rmin,
        rmax,
        seed,
        lengths,
    })
    .map_err(|e| Failure::input(e.to_string()))?;
    emit(out, &doc)?;
    Ok(EXIT_OK)
}
