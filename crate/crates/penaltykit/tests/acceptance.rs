//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p penaltykit --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use penaltykit::cli::{resolve, SlackArg, TargetOpts};
use penaltykit_core::gates::{
    cnot_gate, fredkin_gate, fredkin_gate_9x9, fredkin_literal, fredkin_poly, hadamard_apply, toffoli_gate,
    toffoli_literal, FieldPair,
};
use penaltykit_core::hamiltonian::{apply_clamps, IsingModel, MatrixStyle, QuboMatrix};
use penaltykit_core::penalty::{builtin_penalty, prove_no_quadratic, verify_gap, AncillaWeight, GapReport};
use penaltykit_core::pipeline::{
    compile_circuit, run_pipeline, CircuitDescription, CircuitOp, ClampMode, CompileConfig, GateOp,
};
use penaltykit_core::solver::{AnnealParams, Annealer, Exhaustive, Solver};
use penaltykit_core::{Assignment, BoolOp, Coeff, Domain, GateSpec, Poly, ValidSet, VarId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// A named model with the clamps it is solved under.
type TestModel = (String, QuboMatrix, Vec<(String, bool)>);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, format!("{what} took {t:?}, limit {limit:?}"))
}

fn c(n: i64) -> Coeff {
    Coeff::from(n)
}

// 1. Boolean-logic penalties

/// The printed penalties, transcribed as integer arithmetic.
fn printed(op: BoolOp, i: i64, j: i64, k: i64, a: i64) -> i64 {
    match op {
        BoolOp::Copy => -2 * i * k + i + k,
        BoolOp::Not => 2 * i * k - i - k,
        BoolOp::And => i * j - 2 * (i + j) * k + 3 * k,
        BoolOp::Or => i * j + (i + j) * (1 - 2 * k) + k,
        BoolOp::Implies => 4 * i * j + 2 * i * k - 6 * (i + j) * a - 2 * k * a - i - k + 9 * a,
        BoolOp::Xor => 2 * i * j - 2 * (i + j) * k - 4 * (i + j) * a + 4 * k * a + i + j + k + 4 * a,
        BoolOp::Equiv => 2 * i * j + 2 * (i + j) * k - 4 * (i + j) * a - 4 * k * a - i - j - k + 8 * a,
        _ => unreachable!(),
    }
}

fn truth(op: BoolOp, i: bool, j: bool) -> bool {
    match op {
        BoolOp::Copy => i,
        BoolOp::Not => !i,
        BoolOp::And => i && j,
        BoolOp::Or => i || j,
        BoolOp::Implies => !i || j,
        BoolOp::Xor => i != j,
        BoolOp::Equiv => i == j,
        _ => unreachable!(),
    }
}

fn c1_boolean_penalties() -> Outcome {
    let start = Instant::now();
    let ops = [
        (BoolOp::Copy, false, false),
        (BoolOp::Not, false, false),
        (BoolOp::And, true, false),
        (BoolOp::Or, true, false),
        (BoolOp::Implies, true, true),
        (BoolOp::Xor, true, true),
        (BoolOp::Equiv, true, true),
    ];
    let mut summary = Vec::new();
    for (op, uses_j, uses_a) in ops {
        // Brute-force oracle over the printed formula.
        let mut valid_vals = BTreeSet::new();
        let mut min_invalid: Option<i64> = None;
        for m in 0..16u32 {
            let (i, j, k, a) = (m & 1 == 1, m >> 1 & 1 == 1, m >> 2 & 1 == 1, m >> 3 & 1 == 1);
            if (!uses_j && j) || (!uses_a && a) {
                continue;
            }
            let val = printed(op, i as i64, j as i64, k as i64, a as i64);
            let ok = k == truth(op, i, j) && (!uses_a || a == (i && j));
            if ok {
                valid_vals.insert(val);
            } else {
                min_invalid = Some(min_invalid.map_or(val, |x| x.min(val)));
            }
        }
        check(valid_vals.len() == 1, format!("{}: printed penalty is not constant on valid rows", op.name()))?;
        let v = *valid_vals.iter().next().unwrap();
        let lo = min_invalid.unwrap();
        check(lo > v, format!("{}: oracle gap {} < 1", op.name(), lo - v))?;

        let p = builtin_penalty(op).map_err(|e| e.to_string())?;
        for m in 0..16u32 {
            let bits = [m & 1 == 1, m >> 1 & 1 == 1, m >> 2 & 1 == 1, m >> 3 & 1 == 1];
            let a = Assignment::from_bits(["i", "j", "k", "a"].into_iter().zip(bits));
            let got = p.poly().eval(&a).map_err(|e| e.to_string())?;
            let want = printed(op, bits[0] as i64, bits[1] as i64, bits[2] as i64, bits[3] as i64);
            check(got == c(want), format!("{}: builtin penalty differs from the printed one", op.name()))?;
        }
        let r = p.report().map_err(|e| e.to_string())?;
        check(r.pass, format!("{}: gap check failed: {:?}", op.name(), r.violation))?;
        check(r.v == Some(c(v)), format!("{}: v = {:?}, oracle {v}", op.name(), r.v))?;
        check(r.min_invalid == Some(c(lo)), format!("{}: lowest invalid differs from oracle", op.name()))?;
        summary.push(format!("{} v={v} gap={}", op.name(), lo - v));
    }
    within(Duration::from_secs(1), start, "gap checks")?;
    Ok(format!(
        "{}; COPY's valid rows (0,0) and (1,1) both score 0, so v = 0 there, not -1",
        summary.join(", ")
    ))
}

// 2. Worked tables

fn target(t: &str) -> TargetOpts {
    TargetOpts { target: t.into(), slack: SlackArg::VarsMinusOne, ancilla_weight: None, scale: 1 }
}

fn golden_rows(table: &str) -> Vec<(Vec<bool>, bool, Coeff)> {
    table
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            let n = f.len() - 2;
            (f[..n].iter().map(|b| *b == "1").collect(), f[n].ends_with("is true"), c(f[n + 1].parse().unwrap()))
        })
        .collect()
}

fn report_rows(r: &GapReport, order: Vec<&penaltykit_core::penalty::GapRow>) -> Vec<(Vec<bool>, bool, Coeff)> {
    order.into_iter().map(|row| ((0..r.vars.len()).map(|k| r.bit(row, k)).collect(), row.valid, row.value)).collect()
}

fn c2_worked_tables() -> Outcome {
    let not = resolve(&target("z = NOT x")).map_err(|e| e.to_string())?.penalty().report().map_err(|e| e.to_string())?;
    check(
        report_rows(&not, not.rows_valid_first()) == golden_rows(include_str!("golden/not_table.txt")),
        "NOT table differs from golden",
    )?;
    let sum = resolve(&target("z = x + y + 1")).map_err(|e| e.to_string())?.penalty().report().map_err(|e| e.to_string())?;
    let ours = report_rows(&sum, sum.rows_descending());
    check(ours == golden_rows(include_str!("golden/sum_table.txt")), "z = x + y + 1 table differs from golden")?;
    let values: Vec<String> = ours.iter().map(|r| r.2.to_string()).collect();
    Ok(format!("NOT rows -1,-1,0,0; z rows {}", values.join(",")))
}

// 3. Gate matrices

fn c3_gate_matrices() -> Outcome {
    let cases = [
        (cnot_gate(), include_str!("golden/cnot.matrix")),
        (toffoli_gate(), include_str!("golden/toffoli.matrix")),
        (fredkin_gate(), include_str!("golden/fredkin.matrix")),
    ];
    for (g, golden) in &cases {
        let ours = g.qubo().emit(MatrixStyle::Symmetric);
        check(ours == *golden, format!("{} matrix differs from golden", g.name))?;
    }
    Ok("cnot 4x4, toffoli 6x6, fredkin 7x7 byte-identical".into())
}

// 4. Gate semantics

fn c4_gate_semantics() -> Outcome {
    let start = Instant::now();
    let solver = Exhaustive::default();
    let mut counts = Vec::new();
    for g in [cnot_gate(), toffoli_gate(), fredkin_gate()] {
        let rows = g.check_semantics(&solver).map_err(|e| e.to_string())?;
        check(rows.len() == 1 << g.inputs.len(), format!("{}: {} rows", g.name, rows.len()))?;
        for r in &rows {
            check(
                r.pass && r.ground_states == 1 && r.value == c(0) && r.got.as_deref() == Some(&r.expected[..]),
                format!("{} row {:?}: {:?}", g.name, r.input, r),
            )?;
        }
        counts.push(rows.len().to_string());
    }
    within(Duration::from_secs(1), start, "semantic checks")?;
    Ok(format!("{} rows, each a unique ground state at value 0", counts.join(" + ")))
}

// 5. Construction equality

fn terms(p: &Poly) -> BTreeMap<Vec<String>, Coeff> {
    let mut out: BTreeMap<Vec<String>, Coeff> = p
        .monomials()
        .into_iter()
        .map(|m| {
            let mut names: Vec<String> = m.vars.iter().map(|v| v.name().to_string()).collect();
            names.sort();
            (names, m.coeff)
        })
        .collect();
    if p.offset() != c(0) {
        out.insert(Vec::new(), p.offset());
    }
    out
}

fn c5_construction_equality() -> Outcome {
    check(terms(toffoli_gate().penalty.poly()) == terms(&toffoli_literal()), "toffoli construction differs")?;
    check(terms(fredkin_gate().penalty.poly()) == terms(&fredkin_literal()), "fredkin construction differs")?;
    let gate = fredkin_gate();
    let weak = fredkin_poly(AncillaWeight::Fixed(c(1)));
    let r = verify_gap(&weak, gate.penalty.valid_set()).map_err(|e| e.to_string())?;
    check(!r.pass, "fredkin with binding weight 1 passed the gap check")?;
    let mask = r.violation.as_ref().and_then(|v| v.mask()).ok_or("no violating assignment reported")?;
    let at: Vec<String> =
        r.vars.iter().enumerate().map(|(k, v)| format!("{}={}", v.name(), mask >> k & 1)).collect();
    Ok(format!(
        "toffoli {} terms, fredkin {} terms equal; weight-1 fredkin fails at {}",
        terms(&toffoli_literal()).len(),
        terms(&fredkin_literal()).len(),
        at.join(" ")
    ))
}

// 6. Non-existence proofs

fn c6_proofs() -> Outcome {
    let start = Instant::now();
    let v = |n: &str| VarId::input(n);
    let xor = ValidSet::from_predicate(vec![v("i"), v("j"), v("k")], |b| b.bit("k") == (b.bit("i") != b.bit("j")))
        .map_err(|e| e.to_string())?;
    let and = ValidSet::from_predicate(vec![v("i"), v("j"), v("k")], |b| b.bit("k") == (b.bit("i") && b.bit("j")))
        .map_err(|e| e.to_string())?;
    let m = ValidSet::from_predicate(vec![v("c"), v("i"), v("j"), v("m")], |b| {
        b.bit("m") == if b.bit("c") { b.bit("j") } else { b.bit("i") }
    })
    .map_err(|e| e.to_string())?;
    let cases = [("XOR over i,j,k", &xor, false), ("fredkin m over c,i,j,m", &m, false), ("AND over i,j,k", &and, true)];
    let mut out = Vec::new();
    for (name, set, feasible) in cases {
        let cert = prove_no_quadratic(set, set.vars()).map_err(|e| e.to_string())?;
        check(cert.is_feasible() == feasible, format!("{name}: feasibility {}", cert.is_feasible()))?;
        check(cert.recheck(), format!("{name}: certificate does not recheck"))?;
        out.push(format!("{name} {}", if feasible { "feasible" } else { "infeasible" }));
    }
    within(Duration::from_secs(1), start, "proofs")?;
    Ok(format!("{}; all certificates recheck", out.join(", ")))
}

// 7. QUBO and Ising agree

fn names(n: usize) -> Vec<VarId> {
    (0..n).map(|i| VarId::input(format!("x{i}"))).collect()
}

fn rational(rng: &mut ChaCha8Rng) -> Coeff {
    Coeff::new(rng.gen_range(-12..=12), rng.gen_range(1..=3))
}

fn c7_qubo_ising() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut assignments = 0u64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=10);
        let vars = names(n);
        // independent term list, evaluated directly
        let mut list: Vec<(Vec<usize>, Coeff)> = vec![(vec![], rational(&mut rng))];
        for i in 0..n {
            list.push((vec![i], rational(&mut rng)));
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    list.push((vec![i, j], rational(&mut rng)));
                }
            }
        }
        let mut p = Poly::with_vars(Domain::Boolean, &vars);
        for (idx, k) in &list {
            let vs: Vec<VarId> = idx.iter().map(|&i| vars[i].clone()).collect();
            p.add_term(&vs, *k);
        }
        let q = QuboMatrix::from_poly(&p).map_err(|e| e.to_string())?;
        let ising = q.to_ising();
        for mask in 0..1u64 << n {
            let want: Coeff =
                list.iter().filter(|(idx, _)| idx.iter().all(|&i| mask >> i & 1 == 1)).map(|(_, k)| *k).sum();
            check(q.value(mask) == want, format!("qubo value differs at {mask:b}"))?;
            check(ising.value(mask) == want, format!("ising value differs at {mask:b}"))?;
            assignments += 1;
        }
    }
    Ok(format!("100 polynomials, {assignments} assignments, offsets included"))
}

// 8. Clamp dominance

fn c8_clamps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let solver = Exhaustive::default();
    let mut clamped = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let h: Vec<Coeff> = (0..n).map(|_| rational(&mut rng)).collect();
        let mut j = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.6) {
                    j.insert((a, b), rational(&mut rng));
                }
            }
        }
        let model = IsingModel::new(names(n), h, j, rational(&mut rng)).map_err(|e| e.to_string())?;
        let k = rng.gen_range(1..=n.min(4));
        let mut picked: Vec<usize> = (0..n).collect();
        for s in 0..k {
            let t = rng.gen_range(s..n);
            picked.swap(s, t);
        }
        let vars: Vec<String> = model.vars().iter().map(|v| v.name().to_string()).collect();
        let clamps: Vec<(&str, bool)> = picked[..k].iter().map(|&i| (vars[i].as_str(), rng.gen_bool(0.5))).collect();
        let hard = solver.solve_ising(&model, &clamps).map_err(|e| e.to_string())?;
        let field = solver.solve_ising(&apply_clamps(&model, &clamps).map_err(|e| e.to_string())?, &[]).map_err(|e| e.to_string())?;
        for &s in &field.ground_states {
            for (name, bit) in &clamps {
                check(field.bit(s, name) == Some(*bit), format!("field ground state breaks clamp {name}"))?;
            }
        }
        check(field.ground_states == hard.ground_states, "field and hard clamping disagree")?;
        clamped += k;
    }
    Ok(format!("100 models, {clamped} clamps, ground states identical"))
}

// 9. Random circuits

/// Classical semantics written out per gate: `(inputs, consumed, results)`.
fn apply_gate(gate: &str, x: &[bool]) -> Vec<bool> {
    match gate {
        "cnot" => vec![x[0] != x[1]],
        "toffoli" => vec![x[2] != (x[0] && x[1])],
        "fredkin" => {
            if x[0] {
                vec![x[2], x[1]]
            } else {
                vec![x[1], x[2]]
            }
        }
        _ => unreachable!(),
    }
}

/// Input wires that stay live; the rest are consumed by the gate.
fn kept(gate: &str) -> usize {
    match gate {
        "cnot" => 1,
        "toffoli" => 2,
        _ => 1,
    }
}

fn size(gate: &str) -> usize {
    match gate {
        "cnot" => 4,
        "toffoli" => 6,
        _ => 7,
    }
}

struct RandomCircuit {
    desc: CircuitDescription,
    /// `(gate, input wires, result wires)`.
    gates: Vec<(String, Vec<String>, Vec<String>)>,
}

fn random_circuit(rng: &mut ChaCha8Rng, id: usize) -> RandomCircuit {
    let n = rng.gen_range(2..=6);
    let inputs: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut live = inputs.clone();
    let mut ops = Vec::new();
    let mut gates = Vec::new();
    let mut stage_size = 0;
    let mut stage_wires: BTreeSet<String> = BTreeSet::new();
    let count = rng.gen_range(1..=4);
    for g in 0..count {
        let options: Vec<&str> = ["cnot", "toffoli", "fredkin"].into_iter().filter(|name| {
            let arity = if *name == "cnot" { 2 } else { 3 };
            arity <= live.len()
        }).collect();
        let gate = options[rng.gen_range(0..options.len())];
        let arity = if gate == "cnot" { 2 } else { 3 };
        let mut pool = live.clone();
        let mut args = Vec::new();
        for _ in 0..arity {
            args.push(pool.remove(rng.gen_range(0..pool.len())));
        }
        let depends = args.iter().any(|w| stage_wires.contains(w));
        if !ops.is_empty() && (depends || stage_size + size(gate) > 14 || rng.gen_bool(0.5)) {
            ops.push(CircuitOp::Step);
            stage_size = 0;
            stage_wires.clear();
        }
        let results: Vec<String> = (0..arity - kept(gate)).map(|r| format!("c{id}g{g}r{r}")).collect();
        live.retain(|w| !args[kept(gate)..].contains(w));
        live.extend(results.iter().cloned());
        stage_size += size(gate);
        stage_wires.extend(results.iter().cloned());
        stage_wires.extend(args[..kept(gate)].iter().cloned());
        ops.push(CircuitOp::Gate(GateOp {
            gate: gate.into(),
            inputs: args.clone(),
            results: results.clone(),
            ancillas: Vec::new(),
        }));
        gates.push((gate.to_string(), args, results));
    }
    RandomCircuit { desc: CircuitDescription { inputs, ops, outputs: live }, gates }
}

fn oracle(rc: &RandomCircuit, input: &BTreeMap<String, bool>) -> Vec<(String, bool)> {
    let mut vals = input.clone();
    for (gate, args, results) in &rc.gates {
        let x: Vec<bool> = args.iter().map(|w| vals[w]).collect();
        for (r, b) in results.iter().zip(apply_gate(gate, &x)) {
            vals.insert(r.clone(), b);
        }
    }
    rc.desc.outputs.iter().map(|w| (w.clone(), vals[w])).collect()
}

fn c9_random_circuits() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let solver = Exhaustive::default();
    let mut rows = 0;
    let mut slowest = Duration::ZERO;
    const CIRCUITS: usize = 40;
    for id in 0..CIRCUITS {
        let start = Instant::now();
        let rc = random_circuit(&mut rng, id);
        let reuse = rng.gen_bool(0.5);
        let mode = if rng.gen_bool(0.5) { ClampMode::Hard } else { ClampMode::Field };
        let compiled = compile_circuit(&rc.desc, &CompileConfig { reuse, ..Default::default() })
            .map_err(|e| format!("circuit {id}: {e}"))?;
        let n = rc.desc.inputs.len();
        for m in 0..1u32 << n {
            let input: BTreeMap<String, bool> =
                rc.desc.inputs.iter().enumerate().map(|(k, w)| (w.clone(), m >> k & 1 == 1)).collect();
            let pairs: Vec<(&str, bool)> = input.iter().map(|(w, b)| (w.as_str(), *b)).collect();
            let trace = run_pipeline(&compiled, &pairs, &solver, mode).map_err(|e| format!("circuit {id}: {e}"))?;
            check(trace.outputs == oracle(&rc, &input), format!("circuit {id} input {m:b}: pipeline differs from oracle"))?;
            rows += 1;
        }
        slowest = slowest.max(start.elapsed());
        within(Duration::from_secs(10), start, &format!("circuit {id}"))?;
    }
    Ok(format!("{CIRCUITS} circuits, {rows} input assignments, slowest {slowest:.0?}"))
}

// 10. Hadamard fields

fn c10_hadamard() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let f = FieldPair::new(t.cos(), t.sin()).map_err(|e| e.to_string())?;
        let once = hadamard_apply(f).map_err(|e| e.to_string())?;
        check(once.is_normalized(), "normalization lost")?;
        let twice = hadamard_apply(once).map_err(|e| e.to_string())?;
        worst = worst.max(twice.distance(&f));
    }
    check(worst <= 1e-12, format!("double application off by {worst:e}"))?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let a = hadamard_apply(FieldPair::new(1.0, 0.0).unwrap()).unwrap();
    let b = hadamard_apply(FieldPair::new(0.0, 1.0).unwrap()).unwrap();
    check(a.distance(&FieldPair { h_i: r, h_j: r }) <= 1e-12, "(1,0) maps wrongly")?;
    check(b.distance(&FieldPair { h_i: r, h_j: -r }) <= 1e-12, "(0,1) maps wrongly")?;
    Ok(format!("1000 pairs, worst round trip {worst:.1e}; (1,0) and (0,1) as expected"))
}

// 11. Nine-qubit Fredkin

fn c11_fredkin9() -> Outcome {
    let g = fredkin_gate_9x9();
    let r = g.penalty.report().map_err(|e| e.to_string())?;
    check(r.pass, "fredkin9 fails the gap check")?;
    let rows = g.check_semantics(&Exhaustive::default()).map_err(|e| e.to_string())?;
    check(rows.iter().all(|r| r.pass), "fredkin9 fails a truth-table row")?;
    Ok(format!(
        "gap check passes; range {} versus {} for the 7-qubit form; {}",
        g.coefficient_range(),
        fredkin_gate().coefficient_range(),
        g.notes.first().map_or("", String::as_str)
    ))
}

// 12. Annealer sanity

fn test_models() -> Vec<TestModel> {
    let mut out = Vec::new();
    let gates: Vec<GateSpec> = vec![cnot_gate(), toffoli_gate(), fredkin_gate(), fredkin_gate_9x9()];
    for g in &gates {
        out.push((g.name.clone(), g.qubo(), Vec::new()));
        for row in &g.truth_table {
            let clamps = g.inputs.iter().cloned().zip(row.input.iter().copied()).collect();
            out.push((g.name.clone(), g.qubo(), clamps));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..20 {
        let n = rng.gen_range(2..=10);
        let linear = (0..n).map(|_| rational(&mut rng)).collect();
        let mut quad = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                quad.insert((a, b), rational(&mut rng));
            }
        }
        out.push((format!("random{i}"), QuboMatrix::new(names(n), linear, quad, c(0)).unwrap(), Vec::new()));
    }
    out
}

fn c12_annealer() -> Outcome {
    let models = test_models();
    let exact: Vec<Coeff> = models
        .iter()
        .map(|(_, q, cl)| {
            let cl: Vec<(&str, bool)> = cl.iter().map(|(n, b)| (n.as_str(), *b)).collect();
            Exhaustive::default().solve(q, &cl).map(|r| r.value)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for seed in 0..4u64 {
        let params = AnnealParams { sweeps: 200, restarts: 20, seed, ..AnnealParams::default() };
        let solver = Annealer { params };
        let (mut reached, mut hits, mut restarts) = (0, 0, 0);
        for ((name, q, cl), best) in models.iter().zip(&exact) {
            let cl: Vec<(&str, bool)> = cl.iter().map(|(n, b)| (n.as_str(), *b)).collect();
            let r = solver.solve(q, &cl).map_err(|e| e.to_string())?;
            check(r.value >= *best, format!("{name}: annealer {} below exact {best}", r.value))?;
            restarts += r.stats.restarts;
            if r.value == *best {
                reached += 1;
                hits += r.stats.hits;
            }
        }
        lines.push(format!(
            "seed {seed}: exact on {reached}/{} models, hit rate {:.1}%",
            models.len(),
            100.0 * hits as f64 / restarts as f64
        ));
    }
    Ok(lines.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("boolean-logic penalties pass the gap check", c1_boolean_penalties),
        ("worked penalty tables", c2_worked_tables),
        ("gate matrices", c3_gate_matrices),
        ("gate semantics", c4_gate_semantics),
        ("construction equality and weight ablation", c5_construction_equality),
        ("quadratic non-existence proofs", c6_proofs),
        ("QUBO/Ising identity", c7_qubo_ising),
        ("clamp dominance", c8_clamps),
        ("pipeline equivalence on random circuits", c9_random_circuits),
        ("Hadamard field transform", c10_hadamard),
        ("nine-qubit Fredkin", c11_fredkin9),
        ("annealer sanity", c12_annealer),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({t:.0?}): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({t:.0?}): {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
