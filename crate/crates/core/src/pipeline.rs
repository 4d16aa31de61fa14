//! Staged execution of circuits.
//!
//! A circuit is a list of gate applications and constraints over named
//! wires. Compilation groups them into stages; each stage is a single
//! Hamiltonian over physical qubits `q0, q1, ...`. Running a stage clamps
//! its input qubits to the wire values read from earlier stages, minimizes,
//! and reads the produced wires from the ground state.
//!
//! Stage boundaries fall at explicit `Step` ops and whenever a gate reads a
//! wire produced in the current stage or a qubit the stage already uses.
//! Constraints always join the current stage, and may not touch a qubit
//! owned by a gate of that stage.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::gates::{gate_by_name, hadamard_apply, FieldPair, GateError, HadamardLayout};
use crate::hamiltonian::{apply_clamps, HamiltonianError, QuboMatrix};
use crate::penalty::{compile_constraint, CompileOptions, Constraint, PenaltyError};
use crate::poly::{combine, int, Coeff, Domain, Poly, VarId, VarKind};
use crate::solver::{SolveResult, Solver, SolverError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Penalty(#[from] PenaltyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("stage {stage}: {source}")]
    StageSolver { stage: usize, source: SolverError },
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error("wire `{0}` is not defined")]
    UnknownWire(String),
    #[error("wire `{wire}` was consumed by stage {stage}")]
    ConsumedWire { wire: String, stage: usize },
    #[error("wire `{0}` is defined twice")]
    DuplicateWire(String),
    #[error("gate `{gate}` expects {expected} {what}, got {got}")]
    Arity { gate: String, what: &'static str, expected: usize, got: usize },
    #[error("qubit {qubit} (`{name}`) belongs to a gate in stage {stage} and cannot be shared with another penalty")]
    Exclusivity { qubit: String, name: String, stage: usize },
    #[error("stage {stage} has {count} distinct ground-state outputs")]
    NonUnique { stage: usize, count: usize, states: Vec<u64> },
    #[error("no value given for input wire `{0}`")]
    MissingInput(String),
    #[error("stage {stage}: ground state does not respect the clamp on {qubit}")]
    ClampViolated { stage: usize, qubit: String },
    #[error("constraint over {0:?} has no solution for the given inputs")]
    Unsatisfied(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateOp {
    pub gate: String,
    /// Wires for the gate's inputs, in the gate's input order.
    pub inputs: Vec<String>,
    /// Names for outputs that are not carried-through inputs.
    pub results: Vec<String>,
    /// Optional names for the gate's ancilla qubits, visible within the stage.
    pub ancillas: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitOp {
    Gate(GateOp),
    Constraint(Constraint),
    Step,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitDescription {
    pub inputs: Vec<String>,
    pub ops: Vec<CircuitOp>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompileConfig {
    /// Hand freed qubits to later stages instead of always allocating new ones.
    pub reuse: bool,
    pub options: CompileOptions,
}

/// One penalty placed in a stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagePenalty {
    pub source: String,
    pub label: String,
    pub qubits: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub index: usize,
    pub hamiltonian: QuboMatrix,
    pub penalties: Vec<StagePenalty>,
    /// `(qubit, wire)`: qubit clamped to the wire's value from earlier stages.
    pub wiring: Vec<(String, String)>,
    /// `(wire, qubit)`: wires whose value this stage determines.
    pub produces: Vec<(String, String)>,
    /// Qubits owned by gates.
    pub exclusive: Vec<String>,
    /// Qubits released after the stage.
    pub freed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledCircuit {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub stages: Vec<Stage>,
    /// Distinct physical qubits touched.
    pub qubits: usize,
}

#[derive(Debug, Clone)]
struct Wire {
    qubit: usize,
    live: bool,
    consumed_at: usize,
}

#[derive(Default)]
struct StageBuilder {
    polys: Vec<Poly>,
    penalties: Vec<StagePenalty>,
    wiring: Vec<(usize, String)>,
    produces: Vec<(String, usize)>,
    exclusive: BTreeSet<usize>,
    used: BTreeSet<usize>,
    freed: Vec<usize>,
    local: BTreeMap<String, usize>,
    kinds: BTreeMap<usize, VarKind>,
}

impl StageBuilder {
    fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn clamp(&mut self, q: usize, wire: &str) {
        if !self.wiring.iter().any(|(x, _)| *x == q) {
            self.wiring.push((q, wire.into()));
        }
        self.kinds.insert(q, VarKind::Input);
    }
}

struct Allocator {
    reuse: bool,
    pool: BTreeSet<usize>,
    next: usize,
}

impl Allocator {
    fn alloc(&mut self) -> usize {
        if self.reuse {
            if let Some(q) = self.pool.pop_first() {
                return q;
            }
        }
        self.next += 1;
        self.next - 1
    }
}

fn qname(q: usize) -> String {
    format!("q{q}")
}

/// Groups the circuit into stages and allocates qubits.
pub fn compile_circuit(c: &CircuitDescription, cfg: &CompileConfig) -> Result<CompiledCircuit, PipelineError> {
    let mut alloc = Allocator { reuse: cfg.reuse, pool: BTreeSet::new(), next: 0 };
    let mut wires: BTreeMap<String, Wire> = BTreeMap::new();
    for w in &c.inputs {
        if wires.contains_key(w) {
            return Err(PipelineError::DuplicateWire(w.clone()));
        }
        wires.insert(w.clone(), Wire { qubit: alloc.alloc(), live: true, consumed_at: 0 });
    }
    let mut stages: Vec<Stage> = Vec::new();
    let mut cur = StageBuilder::default();

    let live = |wires: &BTreeMap<String, Wire>, w: &str| -> Result<usize, PipelineError> {
        match wires.get(w) {
            None => Err(PipelineError::UnknownWire(w.into())),
            Some(x) if !x.live => Err(PipelineError::ConsumedWire { wire: w.into(), stage: x.consumed_at }),
            Some(x) => Ok(x.qubit),
        }
    };

    for op in &c.ops {
        match op {
            CircuitOp::Step => {
                if !cur.is_empty() {
                    stages.push(flush(&mut cur, stages.len(), &mut alloc)?);
                }
            }
            CircuitOp::Gate(g) => {
                let spec = gate_by_name(&g.gate)?;
                if g.inputs.len() != spec.inputs.len() {
                    return Err(PipelineError::Arity {
                        gate: g.gate.clone(),
                        what: "input wires",
                        expected: spec.inputs.len(),
                        got: g.inputs.len(),
                    });
                }
                let result_vars: Vec<&String> = spec.outputs.iter().filter(|o| !spec.inputs.contains(o)).collect();
                if g.results.len() != result_vars.len() {
                    return Err(PipelineError::Arity {
                        gate: g.gate.clone(),
                        what: "result wires",
                        expected: result_vars.len(),
                        got: g.results.len(),
                    });
                }
                let anc_vars: Vec<String> = spec
                    .roles
                    .iter()
                    .filter(|(_, r)| *r == crate::gates::GateRole::Ancilla)
                    .map(|(v, _)| v.name().into())
                    .collect();
                if g.ancillas.len() > anc_vars.len() {
                    return Err(PipelineError::Arity {
                        gate: g.gate.clone(),
                        what: "ancilla names",
                        expected: anc_vars.len(),
                        got: g.ancillas.len(),
                    });
                }
                let mut in_q = Vec::with_capacity(g.inputs.len());
                for w in &g.inputs {
                    in_q.push(live(&wires, w)?);
                }
                let mut seen = BTreeSet::new();
                if let Some(w) = g.inputs.iter().find(|w| !seen.insert(w.as_str())) {
                    return Err(PipelineError::DuplicateWire(w.clone()));
                }
                for w in g.results.iter().chain(&g.ancillas) {
                    if wires.contains_key(w) || cur.local.contains_key(w) {
                        return Err(PipelineError::DuplicateWire(w.clone()));
                    }
                }
                let depends = g.inputs.iter().any(|w| cur.produces.iter().any(|(p, _)| p == w))
                    || in_q.iter().any(|q| cur.used.contains(q));
                if depends {
                    stages.push(flush(&mut cur, stages.len(), &mut alloc)?);
                }

                // Gate variable -> qubit.
                let mut map: Vec<(String, usize)> = Vec::new();
                for (k, v) in spec.inputs.iter().enumerate() {
                    map.push((v.clone(), in_q[k]));
                    cur.clamp(in_q[k], &g.inputs[k]);
                }
                for (v, _) in &spec.roles {
                    if !map.iter().any(|(n, _)| n == v.name()) {
                        let q = alloc.alloc();
                        cur.kinds.insert(q, v.kind());
                        map.push((v.name().into(), q));
                    }
                }
                let q_of = |n: &str| map.iter().find(|(m, _)| m == n).map(|(_, q)| *q).unwrap_or_else(|| unreachable!());
                let renames: Vec<(&str, VarId)> = map
                    .iter()
                    .map(|(n, q)| (n.as_str(), VarId::new(qname(*q), cur.kinds.get(q).copied().unwrap_or(VarKind::Ancilla))))
                    .collect();
                cur.polys.push(spec.penalty.poly().rename_map(&renames));
                cur.penalties.push(StagePenalty {
                    source: format!("gate:{}", spec.name),
                    label: format!("{} {}", spec.name, g.inputs.join(" ")),
                    qubits: map.iter().map(|(_, q)| qname(*q)).collect(),
                });
                for (_, q) in &map {
                    cur.exclusive.insert(*q);
                    cur.used.insert(*q);
                }
                for (k, r) in g.results.iter().enumerate() {
                    let q = q_of(result_vars[k]);
                    cur.produces.push((r.clone(), q));
                    wires.insert(r.clone(), Wire { qubit: q, live: true, consumed_at: 0 });
                }
                for (k, name) in g.ancillas.iter().enumerate() {
                    cur.local.insert(name.clone(), q_of(&anc_vars[k]));
                }
                for (k, v) in spec.inputs.iter().enumerate() {
                    if !spec.outputs.contains(v) {
                        if let Some(w) = wires.get_mut(&g.inputs[k]) {
                            w.live = false;
                            w.consumed_at = stages.len();
                        }
                    }
                }
                cur.freed.extend(spec.freed.iter().map(|f| q_of(f)));
            }
            CircuitOp::Constraint(con) => {
                let penalty = compile_constraint(con, &cfg.options)?;
                let names: Vec<String> = con.vars().iter().map(|v| v.name().into()).collect();
                let mut map: Vec<(String, usize)> = Vec::new();
                for n in &names {
                    let q = if let Some(&q) = cur.local.get(n) {
                        return Err(PipelineError::Exclusivity { qubit: qname(q), name: n.clone(), stage: stages.len() });
                    } else if wires.contains_key(n) {
                        let q = live(&wires, n)?;
                        if cur.exclusive.contains(&q) {
                            return Err(PipelineError::Exclusivity { qubit: qname(q), name: n.clone(), stage: stages.len() });
                        }
                        if !cur.produces.iter().any(|(p, _)| p == n) {
                            cur.clamp(q, n);
                        }
                        q
                    } else {
                        let q = alloc.alloc();
                        cur.kinds.insert(q, VarKind::Output);
                        cur.produces.push((n.clone(), q));
                        wires.insert(n.clone(), Wire { qubit: q, live: true, consumed_at: 0 });
                        q
                    };
                    cur.used.insert(q);
                    map.push((n.clone(), q));
                }
                for v in penalty.poly().vars() {
                    if !map.iter().any(|(n, _)| n == v.name()) {
                        let q = alloc.alloc();
                        cur.kinds.insert(q, v.kind());
                        cur.used.insert(q);
                        cur.freed.push(q);
                        map.push((v.name().into(), q));
                    }
                }
                let renames: Vec<(&str, VarId)> = map
                    .iter()
                    .map(|(n, q)| (n.as_str(), VarId::new(qname(*q), cur.kinds.get(q).copied().unwrap_or(VarKind::Ancilla))))
                    .collect();
                cur.polys.push(penalty.poly().rename_map(&renames));
                cur.penalties.push(StagePenalty {
                    source: String::from("constraint"),
                    label: String::from(penalty.label()),
                    qubits: map.iter().map(|(_, q)| qname(*q)).collect(),
                });
            }
        }
    }
    if !cur.is_empty() {
        stages.push(flush(&mut cur, stages.len(), &mut alloc)?);
    }
    for o in &c.outputs {
        live(&wires, o)?;
    }
    let qubits = stages
        .iter()
        .flat_map(|s| s.hamiltonian.vars().iter().map(|v| String::from(v.name())))
        .chain(c.inputs.iter().map(|w| qname(wires[w].qubit)))
        .collect::<BTreeSet<String>>()
        .len();
    Ok(CompiledCircuit { inputs: c.inputs.clone(), outputs: c.outputs.clone(), stages, qubits })
}

fn flush(cur: &mut StageBuilder, index: usize, alloc: &mut Allocator) -> Result<Stage, PipelineError> {
    let b = core::mem::take(cur);
    let terms: Vec<(Coeff, &Poly)> = b.polys.iter().map(|p| (int(1), p)).collect();
    let mut qubits: Vec<usize> = b.kinds.keys().copied().collect();
    qubits.sort_unstable();
    let order: Vec<VarId> = qubits.iter().map(|q| VarId::new(qname(*q), b.kinds[q])).collect();
    let poly = if terms.is_empty() { Poly::with_vars(Domain::Boolean, &order) } else { combine(&terms).reordered(&order) };
    let hamiltonian = QuboMatrix::from_poly(&poly)?;
    let mut freed = b.freed.clone();
    freed.sort_unstable();
    freed.dedup();
    alloc.pool.extend(freed.iter().copied());
    Ok(Stage {
        index,
        hamiltonian,
        penalties: b.penalties,
        wiring: b.wiring.into_iter().map(|(q, w)| (qname(q), w)).collect(),
        produces: b.produces.into_iter().map(|(w, q)| (w, qname(q))).collect(),
        exclusive: b.exclusive.into_iter().map(qname).collect(),
        freed: freed.into_iter().map(qname).collect(),
    })
}

/// How stage inputs are imposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClampMode {
    /// Clamped qubits are fixed in the solver.
    #[default]
    Hard,
    /// Clamped qubits get a dominating local field; the solve is unclamped.
    Field,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageTrace {
    pub index: usize,
    /// `(qubit, wire, value)`.
    pub clamps: Vec<(String, String, bool)>,
    pub value: Coeff,
    pub ground_states: usize,
    pub outputs: Vec<(String, bool)>,
    pub freed: Vec<String>,
    pub result: SolveResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineTrace {
    pub stages: Vec<StageTrace>,
    pub outputs: Vec<(String, bool)>,
}

impl PipelineTrace {
    pub fn output(&self, wire: &str) -> Option<bool> {
        self.outputs.iter().find(|(w, _)| w == wire).map(|(_, b)| *b)
    }
}

/// Executes stages in order. A stage must determine its produced wires
/// uniquely: every ground state has to agree on them.
pub fn run_pipeline(
    c: &CompiledCircuit,
    inputs: &[(&str, bool)],
    solver: &dyn Solver,
    mode: ClampMode,
) -> Result<PipelineTrace, PipelineError> {
    let mut values: BTreeMap<String, bool> = BTreeMap::new();
    for w in &c.inputs {
        let v = inputs
            .iter()
            .find(|(n, _)| n == w)
            .map(|(_, b)| *b)
            .ok_or_else(|| PipelineError::MissingInput(w.clone()))?;
        values.insert(w.clone(), v);
    }
    let mut traces = Vec::with_capacity(c.stages.len());
    for s in &c.stages {
        let clamps: Vec<(String, String, bool)> = s
            .wiring
            .iter()
            .map(|(q, w)| values.get(w).map(|b| (q.clone(), w.clone(), *b)).ok_or_else(|| PipelineError::UnknownWire(w.clone())))
            .collect::<Result<_, _>>()?;
        let pins: Vec<(&str, bool)> = clamps.iter().map(|(q, _, b)| (q.as_str(), *b)).collect();
        let at_stage = |source| PipelineError::StageSolver { stage: s.index, source };
        let result = match mode {
            ClampMode::Hard => solver.solve(&s.hamiltonian, &pins).map_err(at_stage)?,
            ClampMode::Field => {
                let ising = apply_clamps(&s.hamiltonian.to_ising(), &pins)?;
                let r = solver.solve_ising(&ising, &[]).map_err(at_stage)?;
                for st in &r.ground_states {
                    if let Some((q, _)) = pins.iter().find(|(q, b)| r.bit(*st, q) != Some(*b)) {
                        return Err(PipelineError::ClampViolated { stage: s.index, qubit: String::from(*q) });
                    }
                }
                r
            }
        };
        let produced: Vec<&str> = s.produces.iter().map(|(_, q)| q.as_str()).collect();
        let projections = result.projected(&produced);
        if projections.len() != 1 {
            return Err(PipelineError::NonUnique { stage: s.index, count: projections.len(), states: projections });
        }
        let outputs: Vec<(String, bool)> =
            s.produces.iter().enumerate().map(|(k, (w, _))| (w.clone(), projections[0] >> k & 1 == 1)).collect();
        for (w, b) in &outputs {
            values.insert(w.clone(), *b);
        }
        let value = result.ground_states.first().map(|&g| s.hamiltonian.value(g)).unwrap_or(result.value);
        traces.push(StageTrace {
            index: s.index,
            clamps,
            value,
            ground_states: result.ground_states.len(),
            outputs,
            freed: s.freed.clone(),
            result,
        });
    }
    let outputs = c
        .outputs
        .iter()
        .map(|w| values.get(w).map(|b| (w.clone(), *b)).ok_or_else(|| PipelineError::UnknownWire(w.clone())))
        .collect::<Result<_, _>>()?;
    Ok(PipelineTrace { stages: traces, outputs })
}

/// Evaluates the circuit directly from truth tables and constraint
/// relations, without any Hamiltonian. Used as an oracle for
/// [`run_pipeline`].
pub fn evaluate_classically(
    c: &CircuitDescription,
    inputs: &[(&str, bool)],
    options: &CompileOptions,
) -> Result<Vec<(String, bool)>, PipelineError> {
    let mut values: BTreeMap<String, bool> = BTreeMap::new();
    for w in &c.inputs {
        let v = inputs.iter().find(|(n, _)| n == w).map(|(_, b)| *b).ok_or_else(|| PipelineError::MissingInput(w.clone()))?;
        values.insert(w.clone(), v);
    }
    let get = |values: &BTreeMap<String, bool>, w: &str| values.get(w).copied().ok_or_else(|| PipelineError::UnknownWire(w.into()));
    for op in &c.ops {
        match op {
            CircuitOp::Step => {}
            CircuitOp::Gate(g) => {
                let spec = gate_by_name(&g.gate)?;
                let input: Vec<bool> = g.inputs.iter().map(|w| get(&values, w)).collect::<Result<_, _>>()?;
                let out = spec.expected(&input).ok_or(PipelineError::Arity {
                    gate: g.gate.clone(),
                    what: "input wires",
                    expected: spec.inputs.len(),
                    got: input.len(),
                })?;
                let mut results = g.results.iter();
                for (k, o) in spec.outputs.iter().enumerate() {
                    if let Some(pos) = spec.inputs.iter().position(|i| i == o) {
                        values.insert(g.inputs[pos].clone(), out[k]);
                    } else if let Some(r) = results.next() {
                        values.insert(r.clone(), out[k]);
                    }
                }
            }
            CircuitOp::Constraint(con) => {
                let penalty = compile_constraint(con, options)?;
                let names: Vec<String> = con.vars().iter().map(|v| v.name().into()).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let rel = penalty.valid_set().project(&refs).map_err(|e| PipelineError::Penalty(e.into()))?;
                let matches: Vec<u64> = rel
                    .masks()
                    .filter(|m| names.iter().enumerate().all(|(k, n)| values.get(n).is_none_or(|&b| (m >> k & 1 == 1) == b)))
                    .collect();
                let free: Vec<usize> = (0..names.len()).filter(|&k| !values.contains_key(&names[k])).collect();
                let mut proj: Vec<u64> = matches.iter().map(|m| free.iter().fold(0, |a, &k| a << 1 | (m >> k & 1))).collect();
                proj.sort_unstable();
                proj.dedup();
                match proj.len() {
                    0 => return Err(PipelineError::Unsatisfied(names)),
                    1 => {}
                    n => return Err(PipelineError::NonUnique { stage: usize::MAX, count: n, states: proj }),
                }
                for &k in &free {
                    values.insert(names[k].clone(), matches[0] >> k & 1 == 1);
                }
            }
        }
    }
    c.outputs.iter().map(|w| get(&values, w).map(|b| (w.clone(), b))).collect()
}

/// Result of a between-stage Hadamard transform.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardStage {
    pub input: FieldPair,
    pub output: FieldPair,
    pub layout: HadamardLayout,
}

/// Applies the Hadamard transform to the fields carried between two
/// stages. This is classical pre-processing of the next stage's `h`
/// values, not a Hamiltonian of its own.
pub fn hadamard_stage(f: FieldPair, reuse: bool) -> Result<HadamardStage, PipelineError> {
    Ok(HadamardStage { input: f, output: hadamard_apply(f)?, layout: HadamardLayout::new(reuse) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::BoolOp;
    use crate::solver::Exhaustive;
    use alloc::vec;

    fn gate(name: &str, inputs: &[&str], results: &[&str]) -> CircuitOp {
        CircuitOp::Gate(GateOp {
            gate: name.into(),
            inputs: inputs.iter().map(|s| String::from(*s)).collect(),
            results: results.iter().map(|s| String::from(*s)).collect(),
            ancillas: Vec::new(),
        })
    }

    fn circuit(inputs: &[&str], ops: Vec<CircuitOp>, outputs: &[&str]) -> CircuitDescription {
        CircuitDescription {
            inputs: inputs.iter().map(|s| String::from(*s)).collect(),
            ops,
            outputs: outputs.iter().map(|s| String::from(*s)).collect(),
        }
    }

    #[test]
    fn single_cnot() {
        let c = circuit(&["a", "b"], vec![gate("cnot", &["a", "b"], &["r"])], &["a", "r"]);
        let cc = compile_circuit(&c, &CompileConfig::default()).unwrap();
        assert_eq!(cc.stages.len(), 1);
        assert_eq!(cc.stages[0].hamiltonian.len(), 4);
        assert_eq!(cc.stages[0].wiring.len(), 2);
        let t = run_pipeline(&cc, &[("a", true), ("b", false)], &Exhaustive::default(), ClampMode::Hard).unwrap();
        assert_eq!(t.output("r"), Some(true));
    }

    #[test]
    fn double_cnot_is_identity() {
        let c = circuit(
            &["a", "b"],
            vec![gate("cnot", &["a", "b"], &["r1"]), gate("cnot", &["a", "r1"], &["r2"])],
            &["a", "r2"],
        );
        for reuse in [false, true] {
            let cc = compile_circuit(&c, &CompileConfig { reuse, ..CompileConfig::default() }).unwrap();
            assert_eq!(cc.stages.len(), 2);
            assert!(cc.stages[1].wiring.iter().any(|(_, w)| w == "r1"));
            for m in 0..4u8 {
                let (a, b) = (m & 1 == 1, m & 2 == 2);
                for mode in [ClampMode::Hard, ClampMode::Field] {
                    let t = run_pipeline(&cc, &[("a", a), ("b", b)], &Exhaustive::default(), mode).unwrap();
                    assert_eq!(t.outputs, vec![("a".into(), a), ("r2".into(), b)]);
                }
            }
        }
    }

    #[test]
    fn reuse_shrinks_qubit_count() {
        let c = circuit(
            &["a", "b"],
            vec![gate("cnot", &["a", "b"], &["r1"]), gate("cnot", &["a", "r1"], &["r2"])],
            &["r2"],
        );
        let fresh = compile_circuit(&c, &CompileConfig::default()).unwrap();
        let reused = compile_circuit(&c, &CompileConfig { reuse: true, ..CompileConfig::default() }).unwrap();
        assert!(reused.qubits < fresh.qubits);
    }

    #[test]
    fn constraint_on_gate_ancilla_is_rejected() {
        let c = circuit(
            &["a", "b", "z"],
            vec![
                CircuitOp::Gate(GateOp {
                    gate: "cnot".into(),
                    inputs: vec!["a".into(), "b".into()],
                    results: vec!["r".into()],
                    ancillas: vec!["anc".into()],
                }),
                CircuitOp::Constraint(Constraint::Logic {
                    output: VarId::output("y"),
                    op: BoolOp::And,
                    inputs: vec![VarId::input("anc"), VarId::input("z")],
                }),
            ],
            &["r"],
        );
        assert!(matches!(compile_circuit(&c, &CompileConfig::default()), Err(PipelineError::Exclusivity { .. })));
    }

    #[test]
    fn constraint_feeds_gate() {
        let c = circuit(
            &["x", "y", "t"],
            vec![
                CircuitOp::Constraint(Constraint::Logic {
                    output: VarId::output("k"),
                    op: BoolOp::Or,
                    inputs: vec![VarId::input("x"), VarId::input("y")],
                }),
                gate("cnot", &["k", "t"], &["r"]),
            ],
            &["r"],
        );
        let cc = compile_circuit(&c, &CompileConfig::default()).unwrap();
        assert_eq!(cc.stages.len(), 2);
        for m in 0..8u8 {
            let ins = [("x", m & 1 == 1), ("y", m & 2 == 2), ("t", m & 4 == 4)];
            let t = run_pipeline(&cc, &ins, &Exhaustive::default(), ClampMode::Hard).unwrap();
            assert_eq!(t.outputs, evaluate_classically(&c, &ins, &CompileOptions::default()).unwrap());
        }
    }

    #[test]
    fn wire_errors() {
        let c = circuit(&["a", "b"], vec![gate("cnot", &["a", "b"], &["r"]), gate("cnot", &["a", "b"], &["s"])], &[]);
        assert!(matches!(compile_circuit(&c, &CompileConfig::default()), Err(PipelineError::ConsumedWire { .. })));
        let c = circuit(&["a"], vec![gate("cnot", &["a", "q"], &["r"])], &[]);
        assert_eq!(compile_circuit(&c, &CompileConfig::default()), Err(PipelineError::UnknownWire("q".into())));
        let c = circuit(&["a", "b"], vec![gate("cnot", &["a"], &["r"])], &[]);
        assert!(matches!(compile_circuit(&c, &CompileConfig::default()), Err(PipelineError::Arity { .. })));
    }

    #[test]
    fn hadamard_stages() {
        let s = hadamard_stage(FieldPair::new(1.0, 0.0).unwrap(), false).unwrap();
        assert_eq!(s.layout.qubits(), 4);
        let back = hadamard_stage(s.output, true).unwrap();
        assert_eq!(back.layout.qubits(), 2);
        assert!(back.output.distance(&FieldPair::new(1.0, 0.0).unwrap()) < 1e-12);
    }
}
