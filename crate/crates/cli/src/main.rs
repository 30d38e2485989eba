//! `relkit`: validate, evaluate, query, model-check and transpile
//! relational programs.
//!
//! Exit status: 0 success, 1 diagnostics (or an empty answer / a failed
//! check), 2 usage or file-format error, 3 resource budget exhausted.

mod load;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use relkit::fixpoint::{is_model, lfp_from, EvaluatorKind, FixpointConfig, FixpointResult, Status};
use relkit::parser::{parse_atom, parse_call, parse_interpretation, print_relation_data};
use relkit::semantics::{Assignment, Interpretation};
use relkit::transpile::{
    execute, lower, mode_check, render_with, ExecConfig, ExecError, Mode, Outcome, RenderOptions,
    TranspileError,
};
use relkit::{validate, Term};

use load::Inputs;
use output::{assignment_json, diagnostics_json, relations_json, show_assignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Evaluator {
    Naive,
    Binding,
}

#[derive(Parser)]
#[command(
    name = "relkit",
    version,
    about = "Relational programs: evaluation, model checking, transpilation"
)]
struct Cli {
    /// Output format for machine-readable results.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a program.
    Validate {
        /// A `.rel` file or an example directory containing `program.rel`.
        program: PathBuf,
    },
    /// Compute the least fixpoint and print the resulting relations.
    Eval {
        program: PathBuf,
        /// Domain description; defaults to `domain.dom` next to the program.
        domain: Option<PathBuf>,
        /// Round budget; defaults to `RELKIT_MAX_ITER` or 1000.
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long, value_enum, default_value = "binding")]
        evaluator: Evaluator,
        /// Print per-round counts on standard error.
        #[arg(long)]
        trace: bool,
        /// Write the relations here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Relation data for extern predicates.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Print every assignment satisfying an atom in the least fixpoint.
    Query {
        program: PathBuf,
        /// For example `sort(cons(b, cons(a, nil)), W)`.
        atom: String,
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Check whether the relations in a `.rdata` file form a model.
    CheckModel {
        program: PathBuf,
        rdata: PathBuf,
        #[arg(long)]
        domain: Option<PathBuf>,
    },
    /// Mode-check, lower and render a program; optionally run an entry point.
    Transpile {
        program: PathBuf,
        /// Mode file; defaults to `modes.modes` next to the program.
        modes: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Entry call with values for the input positions, e.g. `q(10, 3)`.
        #[arg(long)]
        run: Option<String>,
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Leave out the `// disjunct` comments.
        #[arg(long)]
        no_provenance: bool,
        #[arg(long, default_value_t = ExecConfig::default().max_depth)]
        max_depth: usize,
    },
}

/// Why a command stopped short of success.
enum Exit {
    Diagnostics(Vec<String>),
    Usage(String),
    Budget(String),
}

impl Exit {
    fn code(&self) -> u8 {
        match self {
            Exit::Diagnostics(_) => 1,
            Exit::Usage(_) => 2,
            Exit::Budget(_) => 3,
        }
    }
}

type CmdResult = Result<(), Exit>;

struct Ctx {
    format: Format,
}

impl Ctx {
    fn emit(&self, text: &str, doc: serde_json::Value) {
        match self.format {
            Format::Text => print!("{text}"),
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("json values serialize")
            ),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx { format: cli.format };
    match run(&ctx, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                Exit::Diagnostics(lines) => lines.iter().for_each(|l| eprintln!("{l}")),
                Exit::Usage(msg) => eprintln!("relkit: {msg}"),
                Exit::Budget(msg) => eprintln!("{msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn budget(flag: Option<usize>) -> Result<usize, Exit> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("RELKIT_MAX_ITER") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Exit::Usage(format!(
                "RELKIT_MAX_ITER must be a natural number, got `{v}`"
            ))
        }),
        Err(_) => Ok(FixpointConfig::default().max_iterations),
    }
}

fn status_line(r: &FixpointResult) -> String {
    match r.status {
        Status::ReachedFixpoint => format!("fixpoint reached in {} rounds", r.iterations),
        Status::IterationBudgetExhausted => {
            format!("iteration budget exhausted after {} rounds", r.iterations)
        }
        Status::SizeBudgetExhausted => {
            format!("size budget exhausted after {} rounds", r.iterations)
        }
    }
}

fn run(ctx: &Ctx, cmd: Command) -> CmdResult {
    match cmd {
        Command::Validate { program } => cmd_validate(ctx, program),
        Command::Eval {
            program,
            domain,
            max_iter,
            evaluator,
            trace,
            out,
            data,
        } => {
            let cfg = FixpointConfig {
                max_iterations: budget(max_iter)?,
                evaluator: match evaluator {
                    Evaluator::Naive => EvaluatorKind::Naive,
                    Evaluator::Binding => EvaluatorKind::Binding,
                },
                trace,
                ..FixpointConfig::default()
            };
            cmd_eval(ctx, Inputs::resolve(program, domain, None)?, cfg, out, data)
        }
        Command::Query {
            program,
            atom,
            domain,
            max_iter,
            data,
        } => {
            let cfg = FixpointConfig {
                max_iterations: budget(max_iter)?,
                ..FixpointConfig::default()
            };
            cmd_query(
                ctx,
                Inputs::resolve(program, domain, None)?,
                &atom,
                cfg,
                data,
            )
        }
        Command::CheckModel {
            program,
            rdata,
            domain,
        } => cmd_check_model(ctx, Inputs::resolve(program, domain, None)?, rdata),
        Command::Transpile {
            program,
            modes,
            out,
            run,
            domain,
            no_provenance,
            max_depth,
        } => {
            let opts = RenderOptions {
                provenance: !no_provenance,
            };
            let inputs = Inputs::resolve(program, domain, modes)?;
            cmd_transpile(
                ctx,
                inputs,
                out,
                run.as_deref(),
                opts,
                ExecConfig { max_depth },
            )
        }
    }
}

fn cmd_validate(ctx: &Ctx, program: PathBuf) -> CmdResult {
    let inputs = Inputs::resolve(program, None, None)?;
    let text = inputs.read_program()?;
    let diags = match relkit::parser::parse_program_named(&text, Some(&inputs.program_name())) {
        Ok(p) => validate(&p),
        Err(d) => d,
    };
    let lines: Vec<String> = diags.iter().map(ToString::to_string).collect();
    ctx.emit(
        if diags.is_empty() { "ok\n" } else { "" },
        json!({ "ok": diags.is_empty(), "diagnostics": diagnostics_json(&diags) }),
    );
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Exit::Diagnostics(lines))
    }
}

fn load_data(
    data: Option<PathBuf>,
    p: &relkit::Program,
    s: &relkit::semantics::Structure,
) -> Result<Interpretation, Exit> {
    match data {
        None => Ok(Interpretation::default()),
        Some(path) => {
            let text = load::read(&path)?;
            parse_interpretation(&text, p, s)
                .map_err(|e| Exit::Usage(e.with_file(&path.display().to_string()).to_string()))
        }
    }
}

fn fixpoint_of(
    p: &relkit::Program,
    s: &relkit::semantics::Structure,
    base: &Interpretation,
    cfg: &FixpointConfig,
) -> Result<FixpointResult, Exit> {
    lfp_from(p, s, base, cfg).map_err(|e| Exit::Diagnostics(vec![e.to_string()]))
}

fn cmd_eval(
    ctx: &Ctx,
    inputs: Inputs,
    cfg: FixpointConfig,
    out: Option<PathBuf>,
    data: Option<PathBuf>,
) -> CmdResult {
    let p = inputs.program()?;
    let s = inputs.structure(&p)?;
    let base = load_data(data, &p, &s)?;
    let r = fixpoint_of(&p, &s, &base, &cfg)?;
    for line in &r.trace {
        eprintln!("{line}");
    }
    let rdata = print_relation_data(&r.interpretation);
    let status = status_line(&r);
    let text = match &out {
        Some(path) => {
            fs::write(path, &rdata)
                .map_err(|e| Exit::Usage(format!("cannot write {}: {e}", path.display())))?;
            format!("{status}\n")
        }
        None => format!("{rdata}# {status}\n"),
    };
    ctx.emit(
        &text,
        json!({
            "status": r.status.to_string(),
            "rounds": r.iterations,
            "evaluator": cfg.evaluator.name(),
            "relations": relations_json(&r.interpretation),
            "trace": r.trace,
        }),
    );
    if r.reached_fixpoint() {
        Ok(())
    } else {
        Err(Exit::Budget(status))
    }
}

fn is_ground(t: &Term) -> bool {
    let mut ground = true;
    t.for_each_var(&mut |_| ground = false);
    ground
}

/// Assignments to the variables of `atom` that make it true in `i`.
fn answers(
    atom: &relkit::Atom,
    i: &Interpretation,
    s: &relkit::semantics::Structure,
) -> Result<Vec<Assignment>, Exit> {
    let simple = atom
        .args
        .iter()
        .all(|t| matches!(t, Term::Var(_)) || is_ground(t));
    if !simple || i.relation(&atom.pred).is_none() {
        let found = relkit::semantics::relation_of(atom, i, s)
            .map_err(|e| Exit::Diagnostics(vec![e.to_string()]))?;
        return Ok(found.into_iter().collect());
    }
    let mut ground = Vec::with_capacity(atom.args.len());
    for t in &atom.args {
        ground.push(match t {
            Term::Var(_) => None,
            t => match s.eval_ground(t).map_err(|e| Exit::Usage(e.to_string()))? {
                Some(v) => Some(v),
                None => return Ok(Vec::new()),
            },
        });
    }
    let mut out = Vec::new();
    'tuples: for t in i.relation(&atom.pred).expect("checked above") {
        let mut alpha = Assignment::new();
        for ((arg, g), v) in atom.args.iter().zip(&ground).zip(t) {
            match (arg, g) {
                (_, Some(g)) if g != v => continue 'tuples,
                (Term::Var(x), None) => {
                    if alpha.get(x).is_some_and(|w| w != v) {
                        continue 'tuples;
                    }
                    alpha.insert(x.clone(), v.clone());
                }
                _ => {}
            }
        }
        out.push(alpha);
    }
    Ok(out)
}

fn cmd_query(
    ctx: &Ctx,
    inputs: Inputs,
    atom_text: &str,
    cfg: FixpointConfig,
    data: Option<PathBuf>,
) -> CmdResult {
    let p = inputs.program()?;
    let s = inputs.structure(&p)?;
    let atom = parse_atom(atom_text, &p.signature)
        .map_err(|e| Exit::Usage(format!("malformed query: {e}")))?;
    let base = load_data(data, &p, &s)?;
    let r = fixpoint_of(&p, &s, &base, &cfg)?;
    if !r.reached_fixpoint() {
        return Err(Exit::Budget(status_line(&r)));
    }
    let found = answers(&atom, &r.interpretation, &s)?;
    let mut text = String::new();
    for alpha in &found {
        text.push_str(&if alpha.is_empty() {
            "true".to_string()
        } else {
            show_assignment(alpha)
        });
        text.push('\n');
    }
    if found.is_empty() {
        text.push_str("false\n");
    }
    ctx.emit(
        &text,
        json!({
            "query": atom_text,
            "satisfiable": !found.is_empty(),
            "answers": found.iter().map(assignment_json).collect::<Vec<_>>(),
        }),
    );
    if found.is_empty() {
        Err(Exit::Diagnostics(Vec::new()))
    } else {
        Ok(())
    }
}

fn cmd_check_model(ctx: &Ctx, inputs: Inputs, rdata: PathBuf) -> CmdResult {
    let p = inputs.program()?;
    let s = inputs.structure(&p)?;
    let text = load::read(&rdata)?;
    let i = parse_interpretation(&text, &p, &s)
        .map_err(|e| Exit::Usage(e.with_file(&rdata.display().to_string()).to_string()))?;
    let v = is_model(&p, &i, &s).map_err(|e| Exit::Diagnostics(vec![e.to_string()]))?;
    let (text, witness) = match &v.witness {
        None => ("model\n".to_string(), serde_json::Value::Null),
        Some((q, alpha)) => (
            format!(
                "not a model: body of {q} holds but its head does not at {}\n",
                show_assignment(alpha)
            ),
            json!({ "predicate": q, "assignment": assignment_json(alpha) }),
        ),
    };
    ctx.emit(&text, json!({ "model": v.holds, "witness": witness }));
    if v.holds {
        Ok(())
    } else {
        Err(Exit::Diagnostics(Vec::new()))
    }
}

fn cmd_transpile(
    ctx: &Ctx,
    inputs: Inputs,
    out: Option<PathBuf>,
    run: Option<&str>,
    opts: RenderOptions,
    exec: ExecConfig,
) -> CmdResult {
    let p = inputs.program()?;
    let s = inputs.structure_or_open(&p)?;
    let modes = inputs.modes()?;
    let diags = mode_check(&p, &modes, &s);
    if !diags.is_empty() {
        return Err(Exit::Diagnostics(
            diags.iter().map(ToString::to_string).collect(),
        ));
    }
    let unit = lower(&p, &modes, &s).map_err(|e| match e {
        TranspileError::Modes(d) => Exit::Diagnostics(d.iter().map(ToString::to_string).collect()),
        other => Exit::Diagnostics(vec![other.to_string()]),
    })?;
    let rendered = render_with(&unit, opts);
    let mut text = String::new();
    match &out {
        Some(path) => fs::write(path, &rendered)
            .map_err(|e| Exit::Usage(format!("cannot write {}: {e}", path.display())))?,
        None if run.is_none() => text.push_str(&rendered),
        None => {}
    }
    let Some(call) = run else {
        ctx.emit(&text, json!({ "code": rendered }));
        return Ok(());
    };
    let (entry, args) =
        parse_call(call, &s).map_err(|e| Exit::Usage(format!("malformed --run call: {e}")))?;
    let f = unit
        .function(&entry)
        .ok_or_else(|| Exit::Usage(format!("no procedure named `{entry}`")))?;
    let out_names: Vec<String> = f
        .params
        .iter()
        .filter(|(_, m)| *m == Mode::Out)
        .map(|(n, _)| n.clone())
        .collect();
    let result = match execute(&unit, &entry, &args, &s, exec) {
        Ok(r) => r,
        Err(e @ ExecError::ResourceLimit(_)) => return Err(Exit::Budget(e.to_string())),
        Err(e @ ExecError::InputCount { .. }) => return Err(Exit::Usage(e.to_string())),
        Err(e) => return Err(Exit::Diagnostics(vec![e.to_string()])),
    };
    let (line, outs) = match &result.outcome {
        Outcome::Success(vals) => {
            let pairs: Vec<String> = out_names
                .iter()
                .zip(vals)
                .map(|(n, v)| format!("{n}={v}"))
                .collect();
            let map: serde_json::Map<String, serde_json::Value> = out_names
                .iter()
                .zip(vals)
                .map(|(n, v)| (n.clone(), json!(v.to_string())))
                .collect();
            (
                if pairs.is_empty() {
                    "true".to_string()
                } else {
                    pairs.join(" ")
                },
                serde_json::Value::Object(map),
            )
        }
        Outcome::Failure => ("fails".to_string(), serde_json::Value::Null),
    };
    text.push_str(&format!(
        "{line}\ndepth={} calls={}\n",
        result.max_depth, result.calls
    ));
    ctx.emit(
        &text,
        json!({
            "code": rendered,
            "run": { "call": call, "outputs": outs, "depth": result.max_depth, "calls": result.calls },
        }),
    );
    match result.outcome {
        Outcome::Success(_) => Ok(()),
        Outcome::Failure => Err(Exit::Diagnostics(Vec::new())),
    }
}
