//! Command definitions and their implementations.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use penaltykit_core::gates::{gate_by_name, GateSpec, GATE_NAMES};
use penaltykit_core::hamiltonian::{apply_clamps, MatrixStyle, QuboMatrix};
use penaltykit_core::logic::{render_binary_table, BoolOp};
use penaltykit_core::penalty::{
    builtin_penalty, builtin_vars, compile_constraint, penalty_for_op, prove_no_quadratic, verify_gap, AncillaWeight,
    CompileOptions, SlackMode, BUILTIN_OPS,
};
use penaltykit_core::pipeline::{compile_circuit, evaluate_classically, run_pipeline, ClampMode, CompileConfig, PipelineError};
use penaltykit_core::poly::{int, VarId};
use penaltykit_core::solver::{AnnealParams, Annealer, Exhaustive, DEFAULT_EXHAUSTIVE_LIMIT};
use penaltykit_core::{Penalty, Solver};
use serde::Serialize;
use thiserror::Error;

use crate::circuit::parse_circuit;
use crate::formats::{FormatError, HamiltonianDoc};
use crate::parse::{parse_assignments, parse_constraint, parse_name_list, ParseError};
use crate::report;

/// Process exit codes. Each failure mode has its own.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const COMPILE: i32 = 4;
    pub const SOLVER: i32 = 5;
    pub const NON_UNIQUE: i32 = 6;
    pub const IO: i32 = 7;
    pub const FORMAT: i32 = 8;
    pub const ORACLE_MISMATCH: i32 = 9;
    pub const QUADRATIC_EXISTS: i32 = 10;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Compile(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    NonUnique(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("verification failed")]
    VerifyFailed,
    #[error("{0} input assignment(s) disagree with the classical oracle")]
    OracleMismatch(usize),
    #[error("a quadratic penalty exists over the given variables")]
    QuadraticExists,
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Parse(_) => exit::PARSE,
            CliError::Compile(_) => exit::COMPILE,
            CliError::Solver(_) => exit::SOLVER,
            CliError::NonUnique(_) => exit::NON_UNIQUE,
            CliError::Io { .. } => exit::IO,
            CliError::Format { .. } => exit::FORMAT,
            CliError::VerifyFailed => exit::VERIFY_FAILED,
            CliError::OracleMismatch(_) => exit::ORACLE_MISMATCH,
            CliError::QuadraticExists => exit::QUADRATIC_EXISTS,
        }
    }
}

fn compile_err(e: impl std::fmt::Display) -> CliError {
    CliError::Compile(e.to_string())
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io { path: path.display().to_string(), message: e.to_string() }
}

fn pipeline_err(e: PipelineError) -> CliError {
    match e {
        PipelineError::NonUnique { stage, count, ref states } => {
            CliError::NonUnique(format!("stage {stage}: {count} distinct output assignments {states:?}; the stage is under-constrained"))
        }
        PipelineError::StageSolver { .. } | PipelineError::Solver(_) | PipelineError::ClampViolated { .. } => {
            CliError::Solver(e.to_string())
        }
        PipelineError::MissingInput(_) => CliError::Usage(e.to_string()),
        other => compile_err(other),
    }
}

#[derive(Debug, Parser)]
#[command(name = "penaltykit", version, about = "Compile, verify and solve penalty Hamiltonians for annealing")]
pub struct Cli {
    /// Most free variables the exhaustive solver will enumerate.
    #[arg(long, global = true, env = "PENALTYKIT_EXHAUSTIVE_LIMIT", default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
    pub exhaustive_limit: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a constraint, operation or gate into a penalty and Hamiltonian.
    Compile(CompileArgs),
    /// Print the assignment table and check the gap.
    Verify(VerifyArgs),
    /// Find the ground states of a Hamiltonian file or target.
    Solve(SolveArgs),
    /// Run a circuit file stage by stage.
    Pipeline(PipelineArgs),
    /// Re-emit a Hamiltonian file in another format.
    Emit(EmitArgs),
    /// List built-in operations and gates.
    Catalog(CatalogArgs),
    /// Decide whether any quadratic penalty over given variables exists.
    Prove(ProveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SlackArg {
    /// One slack fewer than the inequality has variables.
    VarsMinusOne,
    /// Only as many slacks as the bound needs.
    Minimal,
}

#[derive(Debug, Args)]
pub struct TargetOpts {
    /// Constraint text (`z = x + y + 1`, `k = i XOR j`, `x + y + z <= 2`),
    /// `op:NAME` for a built-in penalty, or `gate:NAME`.
    pub target: String,
    #[arg(long, value_enum, default_value_t = SlackArg::VarsMinusOne)]
    pub slack: SlackArg,
    /// Ancilla binding weight; default is the number of replaced terms.
    #[arg(long)]
    pub ancilla_weight: Option<i64>,
    /// Multiply the whole penalty.
    #[arg(long, default_value_t = 1)]
    pub scale: i64,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub target: TargetOpts,
    /// Print the coefficient matrix only.
    #[arg(long)]
    pub matrix: bool,
    /// With --matrix, print each coupling once above the diagonal.
    #[arg(long)]
    pub upper: bool,
    /// Print the structured document only.
    #[arg(long)]
    pub json: bool,
    /// Leave the dropped constant out of the Hamiltonian.
    #[arg(long)]
    pub drop_offset: bool,
    /// Write PREFIX.coo and PREFIX.json.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub target: TargetOpts,
    /// Check this Hamiltonian file against the target's relation instead.
    #[arg(long)]
    pub penalty: Option<PathBuf>,
    /// Also decide whether a quadratic penalty over these variables exists.
    #[arg(long, value_name = "VARS")]
    pub prove_no_quadratic: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Use simulated annealing instead of exhaustive search.
    #[arg(long, requires = "seed")]
    pub anneal: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = AnnealParams::default().sweeps)]
    pub sweeps: usize,
    #[arg(long, default_value_t = AnnealParams::default().restarts)]
    pub restarts: usize,
    #[arg(long, default_value_t = AnnealParams::default().t_initial)]
    pub t_initial: f64,
    #[arg(long, default_value_t = AnnealParams::default().t_final)]
    pub t_final: f64,
    /// Impose inputs through dominating local fields instead of fixing them.
    #[arg(long)]
    pub field_clamp: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// A Hamiltonian file, or a target as for `compile`.
    pub input: String,
    /// Clamps, `a=1,b=0`.
    #[arg(long, default_value = "")]
    pub clamp: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub drop_offset: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    pub circuit: PathBuf,
    /// Input bits, `a=1,b=0`; overrides defaults in the file.
    #[arg(long, default_value = "")]
    pub inputs: String,
    /// Input bits in declaration order, e.g. `110`.
    #[arg(long, conflicts_with = "inputs")]
    pub bits: Option<String>,
    /// Run every input assignment and compare with classical evaluation.
    #[arg(long, conflicts_with_all = ["inputs", "bits"])]
    pub sweep: bool,
    /// Reuse qubits freed by earlier stages.
    #[arg(long)]
    pub reuse: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitFormat {
    Coo,
    Json,
    Matrix,
    Upper,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = EmitFormat::Coo)]
    pub format: EmitFormat,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Show one gate in full.
    #[arg(long)]
    pub gate: Option<String>,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    #[command(flatten)]
    pub target: TargetOpts,
    /// Variables the quadratic penalty may use, `i,j,k`.
    #[arg(long)]
    pub vars: String,
    #[arg(long)]
    pub json: bool,
}

/// What a target resolved to.
pub enum Resolved {
    Gate(Box<GateSpec>),
    Penalty { penalty: Box<Penalty>, source: String },
}

impl Resolved {
    pub fn penalty(&self) -> &Penalty {
        match self {
            Resolved::Gate(g) => &g.penalty,
            Resolved::Penalty { penalty, .. } => penalty,
        }
    }

    pub fn source(&self) -> String {
        match self {
            Resolved::Gate(g) => format!("gate:{}", g.name),
            Resolved::Penalty { source, .. } => source.clone(),
        }
    }

    pub fn doc(&self, drop_offset: bool) -> HamiltonianDoc {
        match self {
            Resolved::Gate(g) => HamiltonianDoc::from_gate(g),
            Resolved::Penalty { penalty, source } => HamiltonianDoc::from_penalty(penalty, source, drop_offset),
        }
    }
}

pub fn options(t: &TargetOpts) -> Result<CompileOptions, CliError> {
    if t.scale < 1 {
        return Err(CliError::Usage(format!("--scale must be at least 1, got {}", t.scale)));
    }
    let ancilla_weight = match t.ancilla_weight {
        None => AncillaWeight::PerReplacedTerm,
        Some(w) if w >= 1 => AncillaWeight::Fixed(int(w)),
        Some(w) => return Err(CliError::Usage(format!("--ancilla-weight must be at least 1, got {w}"))),
    };
    let slack_mode = match t.slack {
        SlackArg::VarsMinusOne => SlackMode::VarsMinusOne,
        SlackArg::Minimal => SlackMode::Minimal,
    };
    Ok(CompileOptions { slack_mode, ancilla_weight, scale: int(t.scale) })
}

pub fn resolve(t: &TargetOpts) -> Result<Resolved, CliError> {
    let opts = options(t)?;
    if let Some(name) = t.target.strip_prefix("gate:") {
        return gate_by_name(name).map(|g| Resolved::Gate(Box::new(g))).map_err(|_| {
            CliError::Usage(format!("unknown gate `{name}`; known gates: {}", GATE_NAMES.join(", ")))
        });
    }
    if let Some(name) = t.target.strip_prefix("op:") {
        let op = BoolOp::from_name(name).ok_or_else(|| CliError::Usage(format!("unknown operation `{name}`")))?;
        let p = match builtin_penalty(op) {
            Ok(p) if t.scale == 1 => p,
            Ok(p) => p.scaled(opts.scale).map_err(compile_err)?,
            Err(_) => {
                let [i, j, k, _] = builtin_vars();
                let inputs = [i, j];
                penalty_for_op(op, &k, &inputs[..op.arity()], &opts).map_err(compile_err)?
            }
        };
        return Ok(Resolved::Penalty { penalty: Box::new(p), source: format!("op:{}", op.name()) });
    }
    let c = parse_constraint(&t.target)?;
    let p = compile_constraint(&c, &opts).map_err(compile_err)?;
    if !p.is_satisfiable() {
        return Err(CliError::Compile(format!("`{}` has no satisfying assignment", t.target)));
    }
    Ok(Resolved::Penalty { penalty: Box::new(p), source: t.target.clone() })
}

fn exhaustive(limit: usize) -> Exhaustive {
    Exhaustive { limit, ..Exhaustive::default() }
}

fn build_solver(a: &SolverArgs, limit: usize) -> Result<Box<dyn Solver>, CliError> {
    if !a.anneal {
        return Ok(Box::new(exhaustive(limit)));
    }
    let seed = a.seed.ok_or_else(|| CliError::Usage("--anneal needs --seed".into()))?;
    if !(a.t_final > 0.0 && a.t_initial.is_finite() && (a.sweeps <= 1 || a.t_final < a.t_initial)) {
        return Err(CliError::Usage("temperatures must be positive with --t-final below --t-initial".into()));
    }
    let params = AnnealParams { sweeps: a.sweeps, t_initial: a.t_initial, t_final: a.t_final, restarts: a.restarts, seed };
    Ok(Box::new(Annealer { params }))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn load_doc(path: &Path) -> Result<HamiltonianDoc, CliError> {
    HamiltonianDoc::load(&read(path)?).map_err(|source| CliError::Format { path: path.display().to_string(), source })
}

struct Out<'a>(&'a mut dyn Write);

impl Out<'_> {
    fn put(&mut self, s: &str) -> Result<(), CliError> {
        self.0.write_all(s.as_bytes()).map_err(|e| io_err(Path::new("<stdout>"), e))
    }

    fn json(&mut self, v: &impl Serialize) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io { path: "<json>".into(), message: e.to_string() })?;
        s.push('\n');
        self.put(&s)
    }
}

fn matrix_text(q: &QuboMatrix, style: MatrixStyle) -> String {
    let mut s = q.emit(style);
    if q.offset() != int(0) {
        s.push_str(&format!("offset\t{}\n", q.offset()));
    }
    s
}

/// Runs a parsed command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut out = Out(out);
    let limit = cli.exhaustive_limit;
    match &cli.command {
        Command::Compile(a) => compile(a, &mut out),
        Command::Verify(a) => verify(a, &mut out, limit),
        Command::Solve(a) => solve(a, &mut out, limit),
        Command::Pipeline(a) => pipeline(a, &mut out, limit),
        Command::Emit(a) => emit(a, &mut out),
        Command::Catalog(a) => catalog(a, &mut out, limit),
        Command::Prove(a) => prove(a, &mut out),
    }
}

fn compile(a: &CompileArgs, out: &mut Out) -> Result<(), CliError> {
    if a.upper && !a.matrix {
        return Err(CliError::Usage("--upper only applies with --matrix".into()));
    }
    let r = resolve(&a.target)?;
    let doc = r.doc(a.drop_offset);
    if let Some(prefix) = &a.out {
        write_file(&prefix.with_extension("coo"), &doc.to_coordinate())?;
        write_file(&prefix.with_extension("json"), &doc.to_json())?;
    }
    if a.matrix {
        let style = if a.upper { MatrixStyle::Upper } else { MatrixStyle::Symmetric };
        return out.put(&matrix_text(&doc.qubo, style));
    }
    if a.json {
        return out.put(&doc.to_json());
    }
    let p = r.penalty();
    let mut s = String::new();
    s.push_str(&format!("source: {}\n", r.source()));
    let vars: Vec<String> =
        doc.qubo.vars().iter().zip(&doc.roles).map(|(v, role)| format!("{}:{role}", v.name())).collect();
    s.push_str(&format!("variables: {}\n", vars.join(" ")));
    s.push_str(&format!("penalty: {}\n", p.poly()));
    s.push_str(&format!("offset: {}\n", p.dropped_offset()));
    s.push_str(&format!("valid value: {}\n", p.valid_value().map_or_else(|| "none".into(), |v| v.to_string())));
    for d in p.ancillas() {
        s.push_str(&format!("ancilla: {} = {}*{}\n", d.ancilla.name(), d.factors.0.name(), d.factors.1.name()));
    }
    if let Resolved::Gate(g) = &r {
        s.push_str(&format!("coefficient range: {}\n", g.coefficient_range()));
        for n in &g.notes {
            s.push_str(&format!("note: {n}\n"));
        }
    }
    if let Some(prefix) = &a.out {
        s.push_str(&format!("wrote {} and {}\n", prefix.with_extension("coo").display(), prefix.with_extension("json").display()));
    }
    out.put(&s)
}

#[derive(Serialize)]
struct VerifyJson {
    source: String,
    gap: report::GapJson,
    semantics: Option<Vec<SemanticsRow>>,
    certificate: Option<report::CertificateJson>,
    pass: bool,
}

#[derive(Serialize)]
struct SemanticsRow {
    input: Vec<u8>,
    got: Option<Vec<u8>>,
    value: String,
    pass: bool,
}

fn lookup_vars(valid: &[VarId], names: &str) -> Result<Vec<VarId>, CliError> {
    parse_name_list(names)
        .iter()
        .map(|n| {
            valid.iter().find(|v| v.name() == n).cloned().ok_or_else(|| {
                let known: Vec<&str> = valid.iter().map(VarId::name).collect();
                CliError::Usage(format!("variable `{n}` is not in the relation ({})", known.join(", ")))
            })
        })
        .collect()
}

fn verify(a: &VerifyArgs, out: &mut Out, limit: usize) -> Result<(), CliError> {
    let r = resolve(&a.target)?;
    let p = r.penalty();
    let (poly, valid, source) = match &a.penalty {
        None => (p.poly().clone(), p.valid_set().clone(), r.source()),
        Some(path) => {
            let doc = load_doc(path)?;
            let mut file_names: Vec<&str> = doc.qubo.vars().iter().map(VarId::name).collect();
            let mut rel_names: Vec<&str> = p.valid_set().vars().iter().map(VarId::name).collect();
            file_names.sort_unstable();
            rel_names.sort_unstable();
            if file_names != rel_names {
                return Err(CliError::Compile(format!(
                    "{} has variables {{{}}} but the relation is over {{{}}}",
                    path.display(),
                    file_names.join(", "),
                    rel_names.join(", ")
                )));
            }
            let valid = p.valid_set().reordered(doc.qubo.vars()).map_err(compile_err)?;
            (doc.qubo.to_poly(), valid, format!("{} against {}", path.display(), r.source()))
        }
    };
    let gap = verify_gap(&poly, &valid).map_err(compile_err)?;
    let semantics = match (&r, &a.penalty) {
        (Resolved::Gate(g), None) => Some(g.check_semantics(&exhaustive(limit)).map_err(compile_err)?),
        _ => None,
    };
    let cert = match &a.prove_no_quadratic {
        Some(names) => {
            let vars = lookup_vars(valid.vars(), names)?;
            Some(prove_no_quadratic(&valid, &vars).map_err(compile_err)?)
        }
        None => None,
    };
    let pass = gap.pass && semantics.as_ref().is_none_or(|rows| rows.iter().all(|r| r.pass));
    if a.json {
        let bits = |xs: &[bool]| xs.iter().map(|b| *b as u8).collect::<Vec<u8>>();
        out.json(&VerifyJson {
            source,
            gap: report::gap_json(&gap),
            semantics: semantics.as_ref().map(|rows| {
                rows.iter()
                    .map(|r| SemanticsRow {
                        input: bits(&r.input),
                        got: r.got.as_deref().map(bits),
                        value: r.value.to_string(),
                        pass: r.pass,
                    })
                    .collect()
            }),
            certificate: cert.as_ref().map(report::certificate_json),
            pass,
        })?;
    } else {
        let mut s = format!("source: {source}\n");
        s.push_str(&report::gap_table(&gap));
        s.push_str(&report::gap_summary(&gap));
        if let (Some(rows), Resolved::Gate(g)) = (&semantics, &r) {
            s.push_str("clamped inputs:\n");
            s.push_str(&report::semantics_text(g, rows));
        }
        if let Some(c) = &cert {
            s.push_str(&report::certificate(c));
        }
        out.put(&s)?;
    }
    if cert.as_ref().is_some_and(|c| !c.recheck()) {
        return Err(CliError::Compile("certificate failed its recheck".into()));
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

fn prove(a: &ProveArgs, out: &mut Out) -> Result<(), CliError> {
    let r = resolve(&a.target)?;
    let valid = r.penalty().valid_set();
    let vars = lookup_vars(valid.vars(), &a.vars)?;
    let c = prove_no_quadratic(valid, &vars).map_err(compile_err)?;
    if a.json {
        out.json(&report::certificate_json(&c))?;
    } else {
        out.put(&format!("relation: {}\n{}", r.source(), report::certificate(&c)))?;
    }
    if !c.recheck() {
        Err(CliError::Compile("certificate failed its recheck".into()))
    } else if c.is_feasible() {
        Err(CliError::QuadraticExists)
    } else {
        Ok(())
    }
}

fn solve(a: &SolveArgs, out: &mut Out, limit: usize) -> Result<(), CliError> {
    let path = Path::new(&a.input);
    let doc = if path.is_file() {
        load_doc(path)?
    } else {
        let t = TargetOpts { target: a.input.clone(), slack: SlackArg::VarsMinusOne, ancilla_weight: None, scale: 1 };
        resolve(&t)?.doc(a.drop_offset)
    };
    let clamps = parse_assignments(&a.clamp)?;
    let pins: Vec<(&str, bool)> = clamps.iter().map(|(n, b)| (n.as_str(), *b)).collect();
    let solver = build_solver(&a.solver, limit)?;
    let result = if a.solver.field_clamp {
        let ising = apply_clamps(&doc.qubo.to_ising(), &pins).map_err(|e| CliError::Usage(e.to_string()))?;
        solver.solve_ising(&ising, &[])
    } else {
        solver.solve(&doc.qubo, &pins)
    }
    .map_err(|e| CliError::Solver(e.to_string()))?;
    if a.json {
        out.json(&report::solve_json(&result, &doc.roles))
    } else {
        out.put(&format!("source: {}\n{}", doc.source, report::solve_text(&result, &doc.roles)))
    }
}

fn pipeline(a: &PipelineArgs, out: &mut Out, limit: usize) -> Result<(), CliError> {
    let file = parse_circuit(&read(&a.circuit)?)?;
    let options = CompileOptions::default();
    let cfg = CompileConfig { reuse: a.reuse, options: options.clone() };
    let compiled = compile_circuit(&file.circuit, &cfg).map_err(pipeline_err)?;
    let solver = build_solver(&a.solver, limit)?;
    let mode = if a.solver.field_clamp { ClampMode::Field } else { ClampMode::Hard };
    let wires = &file.circuit.inputs;

    if a.sweep {
        if wires.len() > 16 {
            return Err(CliError::Usage(format!("--sweep over {} inputs is too many", wires.len())));
        }
        let mut bad = 0;
        let mut s = String::new();
        let mut rows = Vec::new();
        for m in 0..1u64 << wires.len() {
            // first declared input is the most significant bit
            let inputs: Vec<(&str, bool)> =
                wires.iter().enumerate().map(|(k, w)| (w.as_str(), m >> (wires.len() - 1 - k) & 1 == 1)).collect();
            let trace = run_pipeline(&compiled, &inputs, solver.as_ref(), mode).map_err(pipeline_err)?;
            let oracle = evaluate_classically(&file.circuit, &inputs, &options).map_err(pipeline_err)?;
            let ok = trace.outputs == oracle;
            bad += usize::from(!ok);
            let fmt = |xs: &[(String, bool)]| xs.iter().map(|(w, b)| format!("{w}={}", *b as u8)).collect::<Vec<_>>().join(" ");
            let ins: Vec<(String, bool)> = inputs.iter().map(|(w, b)| (w.to_string(), *b)).collect();
            s.push_str(&format!("{} -> {}\t{}\n", fmt(&ins), fmt(&trace.outputs), if ok { "ok" } else { "MISMATCH" }));
            if !ok {
                s.push_str(&format!("  oracle: {}\n", fmt(&oracle)));
            }
            rows.push(SweepRow {
                inputs: ins.iter().map(|(w, b)| (w.clone(), *b as u8)).collect(),
                outputs: trace.outputs.iter().map(|(w, b)| (w.clone(), *b as u8)).collect(),
                oracle: oracle.iter().map(|(w, b)| (w.clone(), *b as u8)).collect(),
                ok,
            });
        }
        if a.json {
            out.json(&SweepJson { rows, mismatches: bad })?;
        } else {
            s.push_str(&format!("{} of {} input assignments match the classical oracle\n", (1usize << wires.len()) - bad, 1usize << wires.len()));
            out.put(&s)?;
        }
        return if bad == 0 { Ok(()) } else { Err(CliError::OracleMismatch(bad)) };
    }

    let mut values = file.defaults.clone();
    if let Some(bits) = &a.bits {
        if bits.len() != wires.len() || !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(CliError::Usage(format!("--bits needs {} binary digits, got `{bits}`", wires.len())));
        }
        values = wires.iter().zip(bits.chars()).map(|(w, c)| (w.clone(), c == '1')).collect();
    }
    for (w, b) in parse_assignments(&a.inputs)? {
        if !wires.contains(&w) {
            return Err(CliError::Usage(format!("`{w}` is not an input wire")));
        }
        values.retain(|(n, _)| *n != w);
        values.push((w, b));
    }
    let inputs: Vec<(&str, bool)> = values.iter().map(|(w, b)| (w.as_str(), *b)).collect();
    let trace = run_pipeline(&compiled, &inputs, solver.as_ref(), mode).map_err(pipeline_err)?;
    if a.json {
        out.json(&report::trace_json(&compiled, &trace))
    } else {
        out.put(&report::trace_text(&compiled, &trace))
    }
}

#[derive(Serialize)]
struct SweepRow {
    inputs: Vec<(String, u8)>,
    outputs: Vec<(String, u8)>,
    oracle: Vec<(String, u8)>,
    ok: bool,
}

#[derive(Serialize)]
struct SweepJson {
    rows: Vec<SweepRow>,
    mismatches: usize,
}

fn emit(a: &EmitArgs, out: &mut Out) -> Result<(), CliError> {
    let doc = load_doc(&a.file)?;
    let text = match a.format {
        EmitFormat::Coo => doc.to_coordinate(),
        EmitFormat::Json => doc.to_json(),
        EmitFormat::Matrix => matrix_text(&doc.qubo, MatrixStyle::Symmetric),
        EmitFormat::Upper => matrix_text(&doc.qubo, MatrixStyle::Upper),
    };
    match &a.out {
        Some(p) => write_file(p, &text),
        None => out.put(&text),
    }
}

fn catalog(a: &CatalogArgs, out: &mut Out, limit: usize) -> Result<(), CliError> {
    let mut s = String::new();
    if let Some(name) = &a.gate {
        let g = gate_by_name(name)
            .map_err(|_| CliError::Usage(format!("unknown gate `{name}`; known gates: {}", GATE_NAMES.join(", "))))?;
        s.push_str(&format!("gate {}: {} qubits\n", g.name, g.roles.len()));
        for (v, role) in &g.roles {
            s.push_str(&format!("  {}\t{}\n", v.name(), role.as_str()));
        }
        s.push_str(&format!("penalty: {}\n", g.penalty.poly()));
        s.push_str(&format!("coefficient range: {}\n", g.coefficient_range()));
        s.push_str(&format!("information after execution: {}\n", g.carriers.join(" ")));
        s.push_str(&format!("free for reuse: {}\n", g.freed.join(" ")));
        for n in &g.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s.push_str(&matrix_text(&g.qubo(), MatrixStyle::Symmetric));
        let rows = g.check_semantics(&exhaustive(limit)).map_err(compile_err)?;
        s.push_str(&report::semantics_text(&g, &rows));
        return out.put(&s);
    }
    s.push_str("truth tables:\n");
    s.push_str(&render_binary_table(&BoolOp::BINARY));
    s.push_str("\nbuilt-in penalties (variables i, j, output k, ancilla a = i*j):\n");
    for op in BUILTIN_OPS {
        let p = builtin_penalty(op).map_err(compile_err)?;
        let v = p.valid_value().map_or_else(|| "none".into(), |v| v.to_string());
        s.push_str(&format!("  op:{}\tv = {v}\t{}\n", op.name(), p.poly()));
    }
    s.push_str("\ngates:\n");
    for name in GATE_NAMES {
        let g = gate_by_name(name).map_err(compile_err)?;
        s.push_str(&format!(
            "  gate:{}\t{} qubits\tinputs {}\toutputs {}\trange {}\n",
            g.name,
            g.roles.len(),
            g.inputs.join(" "),
            g.outputs.join(" "),
            g.coefficient_range()
        ));
    }
    s.push_str("  hadamard\tfield transform between stages, 2 qubits with reuse, 4 without\n");
    out.put(&s)
}
