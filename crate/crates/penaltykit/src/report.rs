//! Human-readable reports and their JSON counterparts.
//!
//! Every text report has a serializable twin built from the same data, so
//! `--json` output carries exactly what the table shows.

use std::fmt::Write as _;

use penaltykit_core::gates::{GateSpec, RowCheck};
use penaltykit_core::penalty::{Feasibility, GapReport, InfeasibilityCertificate, Violation};
use penaltykit_core::pipeline::{CompiledCircuit, PipelineTrace};
use penaltykit_core::poly::{Coeff, VarId};
use penaltykit_core::solver::{Method, SolveResult};
use num_traits::Zero;
use serde::Serialize;

fn bits(vars: &[VarId], mask: u64) -> String {
    vars.iter().enumerate().map(|(k, v)| format!("{}={}", v.name(), mask >> k & 1)).collect::<Vec<_>>().join(" ")
}

fn opt(c: Option<Coeff>) -> String {
    c.map_or_else(|| "none".into(), |c| c.to_string())
}

/// The assignment table: one row per assignment, first variable most
/// significant, rows from all-ones down to all-zeros.
pub fn gap_table(r: &GapReport) -> String {
    let mut s = String::new();
    for v in &r.vars {
        let _ = write!(s, "{}\t", v.name());
    }
    s.push_str("valid\tvalue\n");
    if r.rows.is_empty() && !r.vars.is_empty() {
        let _ = writeln!(s, "({} variables: table omitted)", r.vars.len());
    }
    for row in r.rows_descending() {
        for k in 0..r.vars.len() {
            let _ = write!(s, "{}\t", r.bit(row, k) as u8);
        }
        let _ = writeln!(s, "{}\t{}", if row.valid { "true" } else { "false" }, row.value);
    }
    s
}

pub fn gap_summary(r: &GapReport) -> String {
    let mut s = format!(
        "v = {}; lowest invalid = {}; gap = {}; {}\n",
        opt(r.v),
        opt(r.min_invalid),
        opt(r.gap),
        if r.pass { "PASS" } else { "FAIL" }
    );
    match &r.violation {
        None => {}
        Some(Violation::NoValidAssignment) => s.push_str("violation: no assignment satisfies the relation\n"),
        Some(Violation::ValidMismatch { mask, value, expected }) => {
            let _ = writeln!(s, "violation: valid assignment {} scores {value}, expected {expected}", bits(&r.vars, *mask));
        }
        Some(Violation::InvalidTooLow { mask, value, threshold }) => {
            let _ = writeln!(
                s,
                "violation: invalid assignment {} scores {value}, below v + 1 = {threshold}",
                bits(&r.vars, *mask)
            );
        }
    }
    s
}

#[derive(Debug, Serialize)]
pub struct GapJson {
    pub variables: Vec<String>,
    /// Descending order, as in the text table.
    pub rows: Vec<GapRowJson>,
    pub v: Option<String>,
    pub lowest_invalid: Option<String>,
    pub gap: Option<String>,
    pub pass: bool,
    pub violation: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct GapRowJson {
    pub bits: Vec<u8>,
    pub valid: bool,
    pub value: String,
}

pub fn gap_json(r: &GapReport) -> GapJson {
    GapJson {
        variables: r.vars.iter().map(|v| v.name().to_string()).collect(),
        rows: r
            .rows_descending()
            .into_iter()
            .map(|row| GapRowJson {
                bits: (0..r.vars.len()).map(|k| r.bit(row, k) as u8).collect(),
                valid: row.valid,
                value: row.value.to_string(),
            })
            .collect(),
        v: r.v.map(|c| c.to_string()),
        lowest_invalid: r.min_invalid.map(|c| c.to_string()),
        gap: r.gap.map(|c| c.to_string()),
        pass: r.pass,
        violation: r.violation.as_ref().and_then(Violation::mask).map(|m| bits(&r.vars, m)),
    }
}

pub fn certificate(c: &InfeasibilityCertificate) -> String {
    let names: Vec<&str> = c.vars.iter().map(VarId::name).collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "system: {} unknowns ({}), {} assignment rows",
        c.system.columns.len(),
        c.system.columns.join(", "),
        c.system.rows.len()
    );
    match &c.outcome {
        Feasibility::Infeasible { multipliers } => {
            let _ = writeln!(s, "INFEASIBLE: no quadratic penalty over {{{}}} exists", names.join(", "));
            s.push_str("Farkas multipliers (row weight, row):\n");
            for (row, l) in c.system.rows.iter().zip(multipliers) {
                if !l.is_zero() {
                    let _ = writeln!(s, "  {l}\t{}", row.label);
                }
            }
            s.push_str("weighted rows cancel every unknown and leave 0 >= positive\n");
        }
        Feasibility::Feasible { .. } => {
            let _ = writeln!(s, "FEASIBLE: a quadratic penalty over {{{}}} exists", names.join(", "));
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "witness: {w}");
            }
        }
    }
    let _ = writeln!(s, "recheck by substitution: {}", if c.recheck() { "ok" } else { "FAILED" });
    s
}

#[derive(Debug, Serialize)]
pub struct CertificateJson {
    pub variables: Vec<String>,
    pub feasible: bool,
    pub columns: Vec<String>,
    /// Nonzero multipliers by row label, for an infeasible system.
    pub multipliers: Vec<(String, String)>,
    pub witness: Option<String>,
    pub recheck: bool,
}

pub fn certificate_json(c: &InfeasibilityCertificate) -> CertificateJson {
    let multipliers = match &c.outcome {
        Feasibility::Infeasible { multipliers } => c
            .system
            .rows
            .iter()
            .zip(multipliers)
            .filter(|(_, l)| !l.is_zero())
            .map(|(r, l)| (r.label.clone(), l.to_string()))
            .collect(),
        Feasibility::Feasible { .. } => Vec::new(),
    };
    CertificateJson {
        variables: c.vars.iter().map(|v| v.name().to_string()).collect(),
        feasible: c.is_feasible(),
        columns: c.system.columns.clone(),
        multipliers,
        witness: c.witness.as_ref().map(|w| w.to_string()),
        recheck: c.recheck(),
    }
}

#[derive(Debug, Serialize)]
pub struct SolveJson {
    pub method: &'static str,
    pub ground_value: String,
    pub minimizers: Vec<Vec<(String, String, u8)>>,
    pub states_visited: u64,
    pub sweeps: u64,
    pub restarts: u64,
    pub hits: u64,
}

/// `roles[k]` labels variable `k`.
pub fn solve_json(r: &SolveResult, roles: &[String]) -> SolveJson {
    SolveJson {
        method: r.method.as_str(),
        ground_value: r.value.to_string(),
        minimizers: r
            .ground_states
            .iter()
            .map(|&s| {
                r.vars
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let role = roles.get(k).cloned().unwrap_or_else(|| v.kind().as_str().into());
                        (v.name().to_string(), role, (s >> k & 1) as u8)
                    })
                    .collect()
            })
            .collect(),
        states_visited: r.stats.states_visited,
        sweeps: r.stats.sweeps,
        restarts: r.stats.restarts,
        hits: r.stats.hits,
    }
}

pub fn solve_text(r: &SolveResult, roles: &[String]) -> String {
    let j = solve_json(r, roles);
    let mut s = String::new();
    let _ = writeln!(s, "method: {}", j.method);
    let _ = writeln!(s, "ground value: {}", j.ground_value);
    let _ = writeln!(s, "minimizers: {}", j.minimizers.len());
    for m in &j.minimizers {
        let cells: Vec<String> = m.iter().map(|(n, role, b)| format!("{n}={b} ({role})")).collect();
        let _ = writeln!(s, "  {}", cells.join(" "));
    }
    match r.method {
        Method::Exhaustive => {
            let _ = writeln!(s, "states visited: {}", j.states_visited);
        }
        Method::Anneal => {
            let _ = writeln!(
                s,
                "sweeps: {}; restarts: {}; hits: {} ({:.1}%)",
                j.sweeps,
                j.restarts,
                j.hits,
                100.0 * j.hits as f64 / j.restarts.max(1) as f64
            );
        }
    }
    s
}

#[derive(Debug, Serialize)]
pub struct StageJson {
    pub index: usize,
    pub qubits: Vec<String>,
    pub penalties: Vec<String>,
    pub clamps: Vec<(String, String, u8)>,
    pub ground_value: String,
    pub ground_states: usize,
    pub outputs: Vec<(String, u8)>,
    pub freed: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TraceJson {
    pub qubits: usize,
    pub stages: Vec<StageJson>,
    pub outputs: Vec<(String, u8)>,
}

pub fn trace_json(c: &CompiledCircuit, t: &PipelineTrace) -> TraceJson {
    TraceJson {
        qubits: c.qubits,
        stages: c
            .stages
            .iter()
            .zip(&t.stages)
            .map(|(s, st)| StageJson {
                index: st.index,
                qubits: s.hamiltonian.vars().iter().map(|v| v.name().to_string()).collect(),
                penalties: s.penalties.iter().map(|p| format!("{} [{}]", p.source, p.qubits.join(" "))).collect(),
                clamps: st.clamps.iter().map(|(q, w, b)| (q.clone(), w.clone(), *b as u8)).collect(),
                ground_value: st.value.to_string(),
                ground_states: st.ground_states,
                outputs: st.outputs.iter().map(|(w, b)| (w.clone(), *b as u8)).collect(),
                freed: st.freed.clone(),
            })
            .collect(),
        outputs: t.outputs.iter().map(|(w, b)| (w.clone(), *b as u8)).collect(),
    }
}

pub fn trace_text(c: &CompiledCircuit, t: &PipelineTrace) -> String {
    let j = trace_json(c, t);
    let mut s = String::new();
    let _ = writeln!(s, "{} stage(s), {} physical qubit(s)", j.stages.len(), j.qubits);
    let pairs = |xs: &[(String, u8)]| xs.iter().map(|(w, b)| format!("{w}={b}")).collect::<Vec<_>>().join(" ");
    for st in &j.stages {
        let _ = writeln!(s, "stage {}: qubits {}", st.index, st.qubits.join(" "));
        for p in &st.penalties {
            let _ = writeln!(s, "  penalty: {p}");
        }
        let clamps: Vec<String> = st.clamps.iter().map(|(q, w, b)| format!("{q}<-{w}={b}")).collect();
        let _ = writeln!(s, "  clamps: {}", clamps.join(" "));
        let _ = writeln!(s, "  ground value: {} ({} ground state(s))", st.ground_value, st.ground_states);
        let _ = writeln!(s, "  outputs: {}", pairs(&st.outputs));
        let _ = writeln!(s, "  freed: {}", st.freed.join(" "));
    }
    let _ = writeln!(s, "outputs: {}", pairs(&j.outputs));
    s
}

pub fn semantics_text(g: &GateSpec, rows: &[RowCheck]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}\t->\t{}\tvalue\tstates\tresult", g.inputs.join(" "), g.outputs.join(" "));
    let b = |xs: &[bool]| xs.iter().map(|x| if *x { "1" } else { "0" }).collect::<Vec<_>>().join(" ");
    for r in rows {
        let got = r.got.as_deref().map_or_else(|| "?".into(), b);
        let _ = writeln!(
            s,
            "{}\t->\t{}\t{}\t{}\t{}",
            b(&r.input),
            got,
            r.value,
            r.ground_states,
            if r.pass { "ok" } else { "MISMATCH" }
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use penaltykit_core::penalty::{builtin_penalty, prove_no_quadratic};
    use penaltykit_core::BoolOp;

    #[test]
    fn not_table_matches_worked_example() {
        // z = NOT x with penalty 2xz - x - z, rows (1,0), (0,1), (1,1), (0,0) valid first
        let p = builtin_penalty(BoolOp::Not).unwrap();
        let r = p.report().unwrap();
        let t = gap_table(&r);
        assert_eq!(t, "i\tk\tvalid\tvalue\n1\t1\tfalse\t0\n1\t0\ttrue\t-1\n0\t1\ttrue\t-1\n0\t0\tfalse\t0\n");
        assert!(gap_summary(&r).starts_with("v = -1; lowest invalid = 0; gap = 1; PASS"));
    }

    #[test]
    fn certificate_text() {
        let xor = builtin_penalty(BoolOp::Xor).unwrap();
        let vars: Vec<VarId> = xor.valid_set().vars()[..3].to_vec();
        let c = prove_no_quadratic(xor.valid_set(), &vars).unwrap();
        let s = certificate(&c);
        assert!(s.contains("INFEASIBLE"));
        assert!(s.ends_with("recheck by substitution: ok\n"));
        let j = certificate_json(&c);
        assert!(!j.feasible && j.recheck && !j.multipliers.is_empty());
    }
}
