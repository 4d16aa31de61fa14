//! Line-oriented circuit files.
//!
//! ```text
//! # two CNOTs, the second undoes the first
//! input a b
//! cnot control=a target=b -> r
//! step
//! cnot control=a target=r -> back
//! output a back
//! ```
//!
//! Gate arguments name the gate's input qubits, by qubit name (`c_1` may be
//! written `c1`) or by role when the role is unambiguous (`control`,
//! `target`). Names after `->` label the gate's new outputs; an optional
//! `ancilla=x,y` names its ancillas. `constraint <text>` adds a penalty in
//! the constraint grammar, `step` starts a new stage, and `input a=1 b=0`
//! records default input bits.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use penaltykit_core::gates::{gate_by_name, GATE_NAMES};
use penaltykit_core::logic::BoolOp;
use penaltykit_core::penalty::{Constraint, Sense};
use penaltykit_core::pipeline::{CircuitDescription, CircuitOp, GateOp};
use penaltykit_core::GateSpec;

use crate::parse::{parse_constraint_at, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitFile {
    pub circuit: CircuitDescription,
    /// Input bits given in the file, in declaration order.
    pub defaults: Vec<(String, bool)>,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, word: &str, message: impl Into<String>) -> ParseError {
        ParseError { line: self.no, column: self.col(word), message: message.into() }
    }

    /// Column of a word that is a subslice of the line.
    fn col(&self, word: &str) -> usize {
        let base = self.text.as_ptr() as usize;
        let at = word.as_ptr() as usize;
        if at >= base && at <= base + self.text.len() {
            self.text[..at - base].chars().count() + 1
        } else {
            1
        }
    }
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

pub fn parse_circuit(src: &str) -> Result<CircuitFile, ParseError> {
    let mut circuit = CircuitDescription { inputs: Vec::new(), ops: Vec::new(), outputs: Vec::new() };
    let mut defaults = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let line = Line { no: k + 1, text: raw };
        let mut words = text.split_whitespace();
        let Some(head) = words.next() else { continue };
        match head {
            "input" => {
                for w in words {
                    let (name, bit) = match w.split_once('=') {
                        Some((n, "0")) => (n, Some(false)),
                        Some((n, "1")) => (n, Some(true)),
                        Some(_) => return Err(line.err(w, format!("`{w}`: an input default must be 0 or 1"))),
                        None => (w, None),
                    };
                    if !valid_name(name) {
                        return Err(line.err(w, format!("`{name}` is not a valid wire name")));
                    }
                    circuit.inputs.push(name.to_string());
                    if let Some(b) = bit {
                        defaults.push((name.to_string(), b));
                    }
                }
            }
            "output" => {
                for w in words {
                    if !valid_name(w) {
                        return Err(line.err(w, format!("`{w}` is not a valid wire name")));
                    }
                    circuit.outputs.push(w.to_string());
                }
            }
            "step" => {
                if let Some(w) = words.next() {
                    return Err(line.err(w, "`step` takes no arguments"));
                }
                circuit.ops.push(CircuitOp::Step);
            }
            "constraint" => {
                let rest = &text[line.col(head) - 1 + head.len()..];
                let col0 = line.col(rest);
                let c = parse_constraint_at(rest, line.no, col0)?;
                circuit.ops.push(CircuitOp::Constraint(c));
            }
            gate => {
                let spec = gate_by_name(gate).map_err(|_| {
                    line.err(head, format!("unknown statement `{gate}`; expected input, output, step, constraint or one of {}", GATE_NAMES.join(", ")))
                })?;
                circuit.ops.push(CircuitOp::Gate(gate_line(&line, &spec, words.collect())?));
            }
        }
    }
    Ok(CircuitFile { circuit, defaults })
}

/// Gate input the argument key refers to, as an index into `spec.inputs`.
fn input_slot(spec: &GateSpec, key: &str) -> Option<usize> {
    if let Some(k) = spec.inputs.iter().position(|n| n == key || n.replace('_', "") == key) {
        return Some(k);
    }
    let by_role: Vec<usize> =
        (0..spec.inputs.len()).filter(|&k| spec.role(&spec.inputs[k]).is_some_and(|r| r.as_str() == key)).collect();
    match by_role.as_slice() {
        [k] => Some(*k),
        _ => None,
    }
}

fn gate_line(line: &Line, spec: &GateSpec, words: Vec<&str>) -> Result<GateOp, ParseError> {
    let mut slots: Vec<Option<String>> = vec![None; spec.inputs.len()];
    let mut results = Vec::new();
    let mut ancillas = Vec::new();
    let mut after_arrow = false;
    for w in &words {
        if *w == "->" {
            if after_arrow {
                return Err(line.err(w, "second `->`"));
            }
            after_arrow = true;
            continue;
        }
        match w.split_once('=') {
            Some(("ancilla" | "ancillas", names)) => {
                for n in names.split(',').filter(|n| !n.is_empty()) {
                    if !valid_name(n) {
                        return Err(line.err(n, format!("`{n}` is not a valid qubit name")));
                    }
                    ancillas.push(n.to_string());
                }
            }
            Some((key, wire)) if !after_arrow => {
                let k = input_slot(spec, key).ok_or_else(|| {
                    let keys: Vec<String> = spec.inputs.iter().map(|n| n.replace('_', "")).collect();
                    line.err(w, format!("`{}` has no input `{key}`; its inputs are {}", spec.name, keys.join(", ")))
                })?;
                if slots[k].is_some() {
                    return Err(line.err(w, format!("input `{key}` given twice")));
                }
                if !valid_name(wire) {
                    return Err(line.err(wire, format!("`{wire}` is not a valid wire name")));
                }
                slots[k] = Some(wire.to_string());
            }
            Some(_) => return Err(line.err(w, format!("unexpected `{w}` after `->`"))),
            None if after_arrow => {
                if !valid_name(w) {
                    return Err(line.err(w, format!("`{w}` is not a valid wire name")));
                }
                results.push(w.to_string());
            }
            None => return Err(line.err(w, format!("expected `input=wire`, found `{w}`"))),
        }
    }
    let missing: Vec<String> =
        slots.iter().zip(&spec.inputs).filter(|(s, _)| s.is_none()).map(|(_, n)| n.replace('_', "")).collect();
    if !missing.is_empty() {
        let at = words.last().copied().unwrap_or(line.text.trim_end());
        return Err(ParseError {
            line: line.no,
            column: line.col(at) + at.len(),
            message: format!("`{}` is missing input(s) {}", spec.name, missing.join(", ")),
        });
    }
    Ok(GateOp { gate: spec.name.clone(), inputs: slots.into_iter().flatten().collect(), results, ancillas })
}

fn constraint_text(c: &Constraint) -> String {
    match c {
        Constraint::Logic { output, op, inputs } => match (op, inputs.as_slice()) {
            (_, [a, b]) => format!("{output} = {a} {} {b}", op.name()),
            (_, [a]) => format!("{output} = {} {a}", op.name()),
            _ => format!("{output} = {}", op.name()),
        },
        Constraint::Equation { lhs, rhs } => format!("{lhs} = {rhs}"),
        Constraint::Inequality { lhs, sense, bound } => {
            format!("{lhs} {} {bound}", if *sense == Sense::Le { "<=" } else { ">=" })
        }
    }
}

/// Canonical text for a circuit; [`parse_circuit`] reads it back.
pub fn render_circuit(c: &CircuitDescription, defaults: &[(String, bool)]) -> String {
    let mut out = String::new();
    let input: Vec<String> = c
        .inputs
        .iter()
        .map(|w| match defaults.iter().find(|(n, _)| n == w) {
            Some((_, b)) => format!("{w}={}", *b as u8),
            None => w.clone(),
        })
        .collect();
    let _ = writeln!(out, "input {}", input.join(" "));
    for op in &c.ops {
        match op {
            CircuitOp::Step => out.push_str("step\n"),
            CircuitOp::Constraint(k) => {
                let _ = writeln!(out, "constraint {}", constraint_text(k));
            }
            CircuitOp::Gate(g) => {
                let keys: Vec<String> = match gate_by_name(&g.gate) {
                    Ok(spec) => spec.inputs.iter().map(|n| n.replace('_', "")).collect(),
                    Err(_) => (0..g.inputs.len()).map(|k| format!("in{k}")).collect(),
                };
                let args: Vec<String> = keys.iter().zip(&g.inputs).map(|(k, w)| format!("{k}={w}")).collect();
                let _ = write!(out, "{} {} -> {}", g.gate, args.join(" "), g.results.join(" "));
                if !g.ancillas.is_empty() {
                    let _ = write!(out, " ancilla={}", g.ancillas.join(","));
                }
                out.push('\n');
            }
        }
    }
    let _ = writeln!(out, "output {}", c.outputs.join(" "));
    out
}

/// Wires the circuit reads before writing, for diagnostics.
pub fn undeclared_wires(c: &CircuitDescription) -> Vec<String> {
    let mut known: BTreeSet<&str> = c.inputs.iter().map(String::as_str).collect();
    let mut out = Vec::new();
    for op in &c.ops {
        if let CircuitOp::Gate(g) = op {
            for w in &g.inputs {
                if !known.contains(w.as_str()) {
                    out.push(w.clone());
                }
            }
            known.extend(g.results.iter().map(String::as_str));
        }
    }
    out
}

/// `true` when the constraint is a plain logic gate over wires.
pub fn is_logic(c: &Constraint) -> Option<BoolOp> {
    match c {
        Constraint::Logic { op, .. } => Some(*op),
        _ => None,
    }
}
