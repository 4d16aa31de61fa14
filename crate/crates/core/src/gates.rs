//! Reversible gates as verified quadratic penalties, and the Hadamard
//! transform on local-field pairs.
//!
//! Every gate penalty has ground value 0: for each clamped input row the
//! unique minimizer over the free variables carries the gate's output.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_traits::Zero;
use thiserror::Error;

use crate::hamiltonian::QuboMatrix;
use crate::logic::{AncillaDef, ValidSet};
use crate::penalty::{
    builtin_penalty, escalate, quadratize_with_plan, AncillaWeight, Penalty, PenaltyError,
};
use crate::poly::{combine, int, Coeff, Domain, Expr, Poly, VarId};
use crate::solver::{SolveResult, Solver, SolverError};
use crate::BoolOp;

/// Tolerance for `h_i^2 + h_j^2 = 1`.
pub const FIELD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    #[error(transparent)]
    Penalty(#[from] PenaltyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("gate `{gate}` takes {expected} input bits, got {got}")]
    Arity { gate: String, expected: usize, got: usize },
    #[error("gate `{gate}` has {count} ground states for input {input:?}")]
    NotUnique { gate: String, input: Vec<bool>, count: usize },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("field pair ({0}, {1}) is not normalized")]
    NotNormalized(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateRole {
    Control,
    Target,
    Result,
    Ancilla,
}

impl GateRole {
    pub fn as_str(self) -> &'static str {
        match self {
            GateRole::Control => "control",
            GateRole::Target => "target",
            GateRole::Result => "result",
            GateRole::Ancilla => "ancilla",
        }
    }
}

/// One truth-table row: input bits to output bits, in `inputs`/`outputs` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthRow {
    pub input: Vec<bool>,
    pub output: Vec<bool>,
}

/// A gate: its qubits, truth table and verified penalty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateSpec {
    pub name: String,
    /// Qubits in matrix order with their roles.
    pub roles: Vec<(VarId, GateRole)>,
    /// Clamped qubits, in truth-table column order.
    pub inputs: Vec<String>,
    /// Qubits read after minimizing, in truth-table column order. Output `k`
    /// feeds input `k` when the gate is run in reverse.
    pub outputs: Vec<String>,
    pub truth_table: Vec<TruthRow>,
    pub penalty: Penalty,
    /// Qubits that hold all the information after execution.
    pub carriers: Vec<String>,
    /// Qubits available for other purposes in the next step.
    pub freed: Vec<String>,
    /// Construction notes (weights, ranges).
    pub notes: Vec<String>,
}

/// Outcome of running a gate on one input row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateRun {
    pub input: Vec<bool>,
    pub output: Vec<bool>,
    pub value: Coeff,
    pub result: SolveResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub input: Vec<bool>,
    pub expected: Vec<bool>,
    pub got: Option<Vec<bool>>,
    pub value: Coeff,
    pub ground_states: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReverseRow {
    pub input: Vec<bool>,
    pub forward: Vec<bool>,
    pub back: Vec<bool>,
    pub pass: bool,
}

impl GateSpec {
    pub fn vars(&self) -> Vec<VarId> {
        self.roles.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn role(&self, name: &str) -> Option<GateRole> {
        self.roles.iter().find(|(v, _)| v.name() == name).map(|(_, r)| *r)
    }

    pub fn qubo(&self) -> QuboMatrix {
        QuboMatrix::from_poly(self.penalty.poly()).unwrap_or_else(|_| unreachable!("gate penalties are quadratic"))
    }

    /// Largest coefficient magnitude in the Hamiltonian.
    pub fn coefficient_range(&self) -> Coeff {
        self.penalty.poly().max_abs_coeff()
    }

    pub fn expected(&self, input: &[bool]) -> Option<&[bool]> {
        self.truth_table.iter().find(|r| r.input == input).map(|r| r.output.as_slice())
    }

    /// Clamps `input`, minimizes, and reads the outputs from the unique
    /// ground state.
    pub fn run(&self, input: &[bool], solver: &dyn Solver) -> Result<GateRun, GateError> {
        if input.len() != self.inputs.len() {
            return Err(GateError::Arity { gate: self.name.clone(), expected: self.inputs.len(), got: input.len() });
        }
        let clamps: Vec<(&str, bool)> = self.inputs.iter().map(String::as_str).zip(input.iter().copied()).collect();
        let result = solver.solve(&self.qubo(), &clamps)?;
        let Some(state) = result.unique() else {
            return Err(GateError::NotUnique {
                gate: self.name.clone(),
                input: input.to_vec(),
                count: result.ground_states.len(),
            });
        };
        let output = self.outputs.iter().map(|o| result.bit(state, o).unwrap_or(false)).collect();
        Ok(GateRun { input: input.to_vec(), output, value: result.value, result })
    }

    /// Solves every truth-table row and compares against the table.
    pub fn check_semantics(&self, solver: &dyn Solver) -> Result<Vec<RowCheck>, GateError> {
        let mut rows = Vec::with_capacity(self.truth_table.len());
        for row in &self.truth_table {
            let clamps: Vec<(&str, bool)> =
                self.inputs.iter().map(String::as_str).zip(row.input.iter().copied()).collect();
            let result = solver.solve(&self.qubo(), &clamps)?;
            let got = result
                .unique()
                .map(|s| self.outputs.iter().map(|o| result.bit(s, o).unwrap_or(false)).collect::<Vec<bool>>());
            let pass = got.as_deref() == Some(row.output.as_slice()) && result.value.is_zero();
            rows.push(RowCheck {
                input: row.input.clone(),
                expected: row.output.clone(),
                got,
                value: result.value,
                ground_states: result.ground_states.len(),
                pass,
            });
        }
        Ok(rows)
    }

    /// True when the truth table is a bijection between input and output rows.
    pub fn is_reversible(&self) -> bool {
        let mut outs: Vec<&Vec<bool>> = self.truth_table.iter().map(|r| &r.output).collect();
        outs.sort();
        outs.dedup();
        outs.len() == self.truth_table.len() && outs.len() == 1 << self.inputs.len()
    }
}

/// Runs every row forward, then feeds the outputs back in as inputs and
/// checks that the original inputs come back.
pub fn reverse_check(gate: &GateSpec, solver: &dyn Solver) -> Result<Vec<ReverseRow>, GateError> {
    gate.truth_table
        .iter()
        .map(|row| {
            let fwd = gate.run(&row.input, solver)?;
            let back = gate.run(&fwd.output, solver)?;
            Ok(ReverseRow {
                input: row.input.clone(),
                pass: back.output == row.input,
                forward: fwd.output,
                back: back.output,
            })
        })
        .collect()
}

fn rows(n: usize, f: impl Fn(&[bool]) -> Vec<bool>) -> Vec<TruthRow> {
    // First column most significant, as tables are usually printed.
    (0..1u32 << n)
        .map(|m| {
            let input: Vec<bool> = (0..n).map(|k| m >> (n - 1 - k) & 1 == 1).collect();
            TruthRow { output: f(&input), input }
        })
        .collect()
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| String::from(*s)).collect()
}

fn x(name: &str) -> Expr {
    Expr::var(&VarId::input(name))
}

/// CNOT on target `i`, control `j`, result `k`, ancilla `a = i j`.
pub fn cnot_gate() -> GateSpec {
    let roles = vec![
        (VarId::input("i"), GateRole::Target),
        (VarId::input("j"), GateRole::Control),
        (VarId::output("k"), GateRole::Result),
        (VarId::ancilla("a"), GateRole::Ancilla),
    ];
    let penalty = builtin_penalty(BoolOp::Xor).unwrap_or_else(|_| unreachable!()).with_label("cnot");
    GateSpec {
        name: "cnot".into(),
        roles,
        inputs: names(&["j", "i"]),
        outputs: names(&["j", "k"]),
        truth_table: rows(2, |b| vec![b[0], b[0] ^ b[1]]),
        penalty,
        carriers: names(&["j", "k"]),
        freed: names(&["i", "a"]),
        notes: Vec::new(),
    }
}

/// The CNOT penalty as printed: target i, control j, result k, ancilla a.
pub fn cnot_literal() -> Poly {
    let (i, j, k, a) = (x("i"), x("j"), x("k"), x("a"));
    let e = 2 * i.clone() * j.clone() - 2 * (i.clone() + j.clone()) * k.clone() - 4 * (i.clone() + j.clone()) * a.clone()
        + 4 * k.clone() * a.clone()
        + i
        + j
        + k
        + 4 * a;
    e.expand(Domain::Boolean)
}

fn toffoli_vars() -> Vec<(VarId, GateRole)> {
    vec![
        (VarId::input("c_1"), GateRole::Control),
        (VarId::input("c_2"), GateRole::Control),
        (VarId::input("t"), GateRole::Target),
        (VarId::output("r"), GateRole::Result),
        (VarId::ancilla("a"), GateRole::Ancilla),
        (VarId::ancilla("b"), GateRole::Ancilla),
    ]
}

/// Toffoli from a CNOT on (b, t) plus the binding `b = c_1 c_2`.
pub fn toffoli_gate() -> GateSpec {
    let roles = toffoli_vars();
    let vars: Vec<VarId> = roles.iter().map(|(v, _)| v.clone()).collect();
    let xor = builtin_penalty(BoolOp::Xor).unwrap_or_else(|_| unreachable!());
    let and = builtin_penalty(BoolOp::And).unwrap_or_else(|_| unreachable!());
    let cnot_part = xor.poly().rename_map(&[
        ("i", VarId::ancilla("b")),
        ("j", VarId::input("t")),
        ("k", VarId::output("r")),
        ("a", VarId::ancilla("a")),
    ]);
    let and_part = and.poly().rename_map(&[
        ("i", VarId::input("c_1")),
        ("j", VarId::input("c_2")),
        ("k", VarId::ancilla("b")),
    ]);
    let poly = combine(&[(int(1), &cnot_part), (int(1), &and_part)]).reordered(&vars);
    let valid = ValidSet::from_predicate(vars.clone(), |b| {
        let bb = b.bit("c_1") && b.bit("c_2");
        b.bit("b") == bb && b.bit("a") == (bb && b.bit("t")) && b.bit("r") == (b.bit("t") ^ bb)
    })
    .unwrap_or_else(|_| unreachable!());
    let ancillas = vec![
        AncillaDef::new(VarId::ancilla("a"), VarId::ancilla("b"), VarId::input("t")),
        AncillaDef::new(VarId::ancilla("b"), VarId::input("c_1"), VarId::input("c_2")),
    ];
    let penalty = Penalty::new(poly, valid, Coeff::zero(), ancillas)
        .unwrap_or_else(|e| panic!("toffoli construction is sound: {e}"))
        .with_label("toffoli");
    GateSpec {
        name: "toffoli".into(),
        roles,
        inputs: names(&["c_1", "c_2", "t"]),
        outputs: names(&["c_1", "c_2", "r"]),
        truth_table: rows(3, |b| vec![b[0], b[1], b[2] ^ (b[0] && b[1])]),
        penalty,
        carriers: names(&["c_1", "c_2", "r"]),
        freed: names(&["t", "a", "b"]),
        notes: Vec::new(),
    }
}

/// The Toffoli penalty as printed.
pub fn toffoli_literal() -> Poly {
    let (a, b, c1, c2, r, t) = (x("a"), x("b"), x("c_1"), x("c_2"), x("r"), x("t"));
    let e = -4 * a.clone() * b.clone() + 4 * a.clone() * r.clone() - 4 * a.clone() * t.clone()
        - 2 * b.clone() * c1.clone()
        - 2 * b.clone() * c2.clone()
        - 2 * b.clone() * r.clone()
        + 2 * b.clone() * t.clone()
        + c1 * c2
        - 2 * r.clone() * t.clone()
        + 4 * a
        + 4 * b
        + r
        + t;
    e.expand(Domain::Boolean)
}

/// `((1-c)i + cj - m)^2 + (ci + (1-c)j - p)^2`, fully expanded (cubic).
pub fn fredkin_squares() -> Poly {
    let (c, i, j, m, p) = (x("c"), x("i"), x("j"), x("m"), x("p"));
    let m_eq = (1 - c.clone()) * i.clone() + c.clone() * j.clone() - m;
    let p_eq = c.clone() * i.clone() + (1 - c) * j.clone() - p;
    let order: Vec<VarId> = ["c", "i", "j", "m", "p"].iter().map(|n| VarId::input(*n)).collect();
    (m_eq.pow(2) + p_eq.pow(2)).expand_over(&order)
}

fn fredkin_roles(ancillas: &[&str]) -> Vec<(VarId, GateRole)> {
    let mut roles = vec![
        (VarId::input("c"), GateRole::Control),
        (VarId::input("i"), GateRole::Target),
        (VarId::input("j"), GateRole::Target),
        (VarId::output("m"), GateRole::Result),
        (VarId::output("p"), GateRole::Result),
    ];
    roles.extend(ancillas.iter().map(|a| (VarId::ancilla(*a), GateRole::Ancilla)));
    roles
}

/// Valid assignments of a Fredkin gate over `vars`, ancillas bound by `defs`.
pub fn fredkin_valid_set(vars: &[VarId], defs: &[AncillaDef]) -> ValidSet {
    let base: Vec<VarId> = vars[..5].to_vec();
    ValidSet::from_predicate(base, |b| {
        let (c, i, j) = (b.bit("c"), b.bit("i"), b.bit("j"));
        b.bit("m") == if c { j } else { i } && b.bit("p") == if c { i } else { j }
    })
    .and_then(|v| v.with_ancillas(defs))
    .and_then(|v| v.reordered(vars))
    .unwrap_or_else(|_| unreachable!())
}

fn fredkin_plan(pairs: &[(&str, &str, &str)]) -> Vec<AncillaDef> {
    let role = |n: &str| if matches!(n, "m" | "p") { VarId::output(n) } else { VarId::input(n) };
    pairs.iter().map(|(a, u, w)| AncillaDef::new(VarId::ancilla(*a), role(u), role(w))).collect()
}

/// The 7-qubit Fredkin construction with a chosen binding weight; the
/// default per-replaced-term weight is 2 for both ancillas.
pub fn fredkin_poly(weight: AncillaWeight) -> Poly {
    let plan = fredkin_plan(&[("a", "c", "m"), ("b", "c", "p")]);
    let vars: Vec<VarId> = fredkin_roles(&["a", "b"]).into_iter().map(|(v, _)| v).collect();
    quadratize_with_plan(&fredkin_squares(), &plan, weight)
        .unwrap_or_else(|_| unreachable!("both ancillas replace cubic terms"))
        .poly
        .reordered(&vars)
}

/// Fredkin with ancillas `a = c m`, `b = c p`.
pub fn fredkin_gate() -> GateSpec {
    let roles = fredkin_roles(&["a", "b"]);
    let vars: Vec<VarId> = roles.iter().map(|(v, _)| v.clone()).collect();
    let plan = fredkin_plan(&[("a", "c", "m"), ("b", "c", "p")]);
    let poly = fredkin_poly(AncillaWeight::PerReplacedTerm);
    let valid = fredkin_valid_set(&vars, &plan);
    let penalty = Penalty::new(poly, valid, Coeff::zero(), plan)
        .unwrap_or_else(|e| panic!("fredkin construction is sound: {e}"))
        .with_label("fredkin");
    fredkin_spec("fredkin", roles, penalty, &["a", "b"], Vec::new())
}

/// Fredkin with ancillas `d = i m`, `e = j m`, `f = i p`, `g = j p`.
///
/// Each ancilla replaces a single cubic term, so the default weight is 1;
/// that is not sound and the weights are raised until the gap check
/// passes. The notes record the final weight and the coefficient range
/// against the 7-qubit version.
pub fn fredkin_gate_9x9() -> GateSpec {
    let anc = ["d", "e", "f", "g"];
    let roles = fredkin_roles(&anc);
    let vars: Vec<VarId> = roles.iter().map(|(v, _)| v.clone()).collect();
    let plan = fredkin_plan(&[("d", "i", "m"), ("e", "j", "m"), ("f", "i", "p"), ("g", "j", "p")]);
    let valid = fredkin_valid_set(&vars, &plan);
    let q = quadratize_with_plan(&fredkin_squares(), &plan, AncillaWeight::PerReplacedTerm)
        .unwrap_or_else(|_| unreachable!("every ancilla replaces a cubic term"));
    let default_weight = q.weights[0];
    let (q, boost) = escalate(q, &valid).unwrap_or_else(|e| panic!("fredkin9 weights converge: {e}"));
    let poly = q.poly.reordered(&vars);
    let seven = fredkin_poly(AncillaWeight::PerReplacedTerm).max_abs_coeff();
    let notes = vec![
        format!("binding weight {} (default {default_weight}, raised by {boost})", q.weights[0]),
        format!("coefficient range {} versus {seven} for the 7-qubit form", poly.max_abs_coeff()),
    ];
    let penalty = Penalty::new(poly, valid, Coeff::zero(), plan)
        .unwrap_or_else(|e| panic!("escalated weights are sound: {e}"))
        .with_label("fredkin9");
    fredkin_spec("fredkin9", roles, penalty, &anc, notes)
}

fn fredkin_spec(name: &str, roles: Vec<(VarId, GateRole)>, penalty: Penalty, anc: &[&str], notes: Vec<String>) -> GateSpec {
    let mut freed = names(&["i", "j"]);
    freed.extend(anc.iter().map(|a| String::from(*a)));
    GateSpec {
        name: name.into(),
        roles,
        inputs: names(&["c", "i", "j"]),
        outputs: names(&["c", "m", "p"]),
        truth_table: rows(3, |b| if b[0] { vec![true, b[2], b[1]] } else { b.to_vec() }),
        penalty,
        carriers: names(&["c", "m", "p"]),
        freed,
        notes,
    }
}

/// The 7-qubit Fredkin penalty as printed.
pub fn fredkin_literal() -> Poly {
    let (a, b, c, i, j, m, p) = (x("a"), x("b"), x("c"), x("i"), x("j"), x("m"), x("p"));
    let e = -4 * a.clone() * c.clone() + 2 * a.clone() * i.clone() - 2 * a.clone() * j.clone() - 4 * a.clone() * m.clone()
        - 4 * b.clone() * c.clone()
        - 2 * b.clone() * i.clone()
        + 2 * b.clone() * j.clone()
        - 4 * b.clone() * p.clone()
        + 2 * c.clone() * m.clone()
        + 2 * c * p.clone()
        - 2 * i.clone() * m.clone()
        - 2 * j.clone() * p.clone()
        + 6 * a
        + 6 * b
        + i
        + j
        + m
        + p;
    e.expand(Domain::Boolean)
}

/// Gate catalog by name. `hadamard` is not a penalty gate; see [`FieldPair`].
pub fn gate_by_name(name: &str) -> Result<GateSpec, GateError> {
    match name {
        "cnot" => Ok(cnot_gate()),
        "toffoli" => Ok(toffoli_gate()),
        "fredkin" => Ok(fredkin_gate()),
        "fredkin9" => Ok(fredkin_gate_9x9()),
        _ => Err(GateError::UnknownGate(name.into())),
    }
}

pub const GATE_NAMES: [&str; 4] = ["cnot", "toffoli", "fredkin", "fredkin9"];

/// Local fields `(h_i, h_j)` of a qubit pair, with `h_i^2 + h_j^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPair {
    pub h_i: f64,
    pub h_j: f64,
}

impl FieldPair {
    pub fn new(h_i: f64, h_j: f64) -> Result<Self, GateError> {
        let f = FieldPair { h_i, h_j };
        if f.is_normalized() {
            Ok(f)
        } else {
            Err(GateError::NotNormalized(h_i, h_j))
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.h_i * self.h_i + self.h_j * self.h_j
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= FIELD_TOLERANCE
    }

    pub fn distance(&self, other: &FieldPair) -> f64 {
        (self.h_i - other.h_i).abs().max((self.h_j - other.h_j).abs())
    }
}

/// `(h_i, h_j) -> ((h_i + h_j)/sqrt 2, (h_i - h_j)/sqrt 2)`. Its own inverse.
pub fn hadamard_apply(f: FieldPair) -> Result<FieldPair, GateError> {
    if !f.is_normalized() {
        return Err(GateError::NotNormalized(f.h_i, f.h_j));
    }
    Ok(FieldPair { h_i: (f.h_i + f.h_j) * FRAC_1_SQRT_2, h_j: (f.h_i - f.h_j) * FRAC_1_SQRT_2 })
}

/// Penalty `-x` rewarding `x = 1`, used to put a qubit in state 1 so its
/// local field takes effect.
pub fn activation_penalty(var: &VarId) -> Penalty {
    let mut p = Poly::with_vars(Domain::Boolean, core::slice::from_ref(var));
    p.add_term(core::slice::from_ref(var), int(-1));
    let valid = ValidSet::from_masks(vec![var.clone()], [1]).unwrap_or_else(|_| unreachable!());
    Penalty::new(p, valid, Coeff::zero(), Vec::new())
        .unwrap_or_else(|_| unreachable!())
        .with_label(format!("activate {}", var.name()))
}

/// Qubits used by one Hadamard step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardLayout {
    pub inputs: [String; 2],
    pub outputs: [String; 2],
}

impl HadamardLayout {
    /// Input qubits `i`, `j`; outputs `p`, `q`, or the inputs again when
    /// `reuse` is set.
    pub fn new(reuse: bool) -> Self {
        let inputs = [String::from("i"), String::from("j")];
        let outputs = if reuse { inputs.clone() } else { [String::from("p"), String::from("q")] };
        Self { inputs, outputs }
    }

    pub fn qubits(&self) -> usize {
        let mut all: Vec<&String> = self.inputs.iter().chain(self.outputs.iter()).collect();
        all.sort();
        all.dedup();
        all.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalty::verify_gap;
    use crate::solver::Exhaustive;

    #[test]
    fn constructions_match_printed_forms() {
        assert_eq!(*cnot_gate().penalty.poly(), cnot_literal());
        assert_eq!(*toffoli_gate().penalty.poly(), toffoli_literal());
        assert_eq!(*fredkin_gate().penalty.poly(), fredkin_literal());
    }

    #[test]
    fn cnot_rows() {
        let g = cnot_gate();
        let run = g.run(&[true, false], &Exhaustive::default()).unwrap();
        assert_eq!(run.output, vec![true, true]);
        assert_eq!(run.value, int(0));
        let run = g.run(&[false, false], &Exhaustive::default()).unwrap();
        assert_eq!(run.output, vec![false, false]);
    }

    #[test]
    fn all_gates_hold_their_truth_tables() {
        for name in GATE_NAMES {
            let g = gate_by_name(name).unwrap();
            assert!(g.is_reversible(), "{name}");
            let rows = g.check_semantics(&Exhaustive::default()).unwrap();
            assert!(rows.iter().all(|r| r.pass), "{name}: {rows:?}");
            assert!(reverse_check(&g, &Exhaustive::default()).unwrap().iter().all(|r| r.pass), "{name}");
        }
    }

    #[test]
    fn fredkin_single_binding_fails() {
        let vars: Vec<VarId> = fredkin_roles(&["a", "b"]).into_iter().map(|(v, _)| v).collect();
        let plan = fredkin_plan(&[("a", "c", "m"), ("b", "c", "p")]);
        let valid = fredkin_valid_set(&vars, &plan);
        assert!(verify_gap(&fredkin_poly(AncillaWeight::PerReplacedTerm), &valid).unwrap().pass);
        assert!(!verify_gap(&fredkin_poly(AncillaWeight::Fixed(int(1))), &valid).unwrap().pass);
    }

    #[test]
    fn fredkin9_reports_weight_and_range() {
        let g = fredkin_gate_9x9();
        assert_eq!(g.vars().len(), 9);
        assert_eq!(g.notes.len(), 2);
        assert!(g.notes[0].starts_with("binding weight"));
    }

    #[test]
    fn hadamard_basis_and_involution() {
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let p = hadamard_apply(FieldPair::new(1.0, 0.0).unwrap()).unwrap();
        assert!(p.distance(&FieldPair { h_i: r, h_j: r }) < 1e-15);
        let q = hadamard_apply(FieldPair::new(0.0, 1.0).unwrap()).unwrap();
        assert!(q.distance(&FieldPair { h_i: r, h_j: -r }) < 1e-15);
        let f = FieldPair::new(0.6, -0.8).unwrap();
        assert!(hadamard_apply(hadamard_apply(f).unwrap()).unwrap().distance(&f) < 1e-12);
        assert!(matches!(hadamard_apply(FieldPair { h_i: 1.0, h_j: 1.0 }), Err(GateError::NotNormalized(..))));
    }

    #[test]
    fn layouts_and_activation() {
        assert_eq!(HadamardLayout::new(true).qubits(), 2);
        assert_eq!(HadamardLayout::new(false).qubits(), 4);
        assert_eq!(activation_penalty(&VarId::input("x")).valid_value(), Some(int(-1)));
    }

    #[test]
    fn wrong_arity() {
        assert!(matches!(
            cnot_gate().run(&[true], &Exhaustive::default()),
            Err(GateError::Arity { expected: 2, got: 1, .. })
        ));
    }
}
