//! Outputs compared against tables transcribed verbatim into tests/golden.

use penaltykit::cli::{resolve, SlackArg, TargetOpts};
use penaltykit::formats::HamiltonianDoc;
use penaltykit::report::gap_table;
use penaltykit_core::gates::{cnot_gate, fredkin_gate, toffoli_gate};
use penaltykit_core::hamiltonian::MatrixStyle;
use penaltykit_core::penalty::{GapReport, GapRow};
use penaltykit_core::poly::Coeff;

const CNOT: &str = include_str!("golden/cnot.matrix");
const TOFFOLI: &str = include_str!("golden/toffoli.matrix");
const FREDKIN: &str = include_str!("golden/fredkin.matrix");
const NOT_TABLE: &str = include_str!("golden/not_table.txt");
const SUM_TABLE: &str = include_str!("golden/sum_table.txt");

fn target(t: &str) -> TargetOpts {
    TargetOpts { target: t.into(), slack: SlackArg::VarsMinusOne, ancilla_weight: None, scale: 1 }
}

/// `(bits, valid, value)` per data row of a transcribed table.
fn rows(table: &str) -> Vec<(Vec<bool>, bool, Coeff)> {
    table
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            let n = f.len() - 2;
            let bits = f[..n].iter().map(|b| *b == "1").collect();
            let valid = f[n].ends_with("is true");
            let value: i64 = f[n + 1].parse().unwrap();
            (bits, valid, Coeff::from(value))
        })
        .collect()
}

fn ours(r: &GapReport, order: Vec<&GapRow>) -> Vec<(Vec<bool>, bool, Coeff)> {
    order.into_iter().map(|row| ((0..r.vars.len()).map(|k| r.bit(row, k)).collect(), row.valid, row.value)).collect()
}

#[test]
fn gate_matrices_match_printed_tables() {
    for (g, text) in [(cnot_gate(), CNOT), (toffoli_gate(), TOFFOLI), (fredkin_gate(), FREDKIN)] {
        assert_eq!(g.qubo().emit(MatrixStyle::Symmetric), text, "{}", g.name);
        assert_eq!(HamiltonianDoc::from_gate(&g).qubo.emit(MatrixStyle::Symmetric), text);
    }
}

#[test]
fn not_table() {
    let r = resolve(&target("z = NOT x")).unwrap();
    let report = r.penalty().report().unwrap();
    let names: Vec<&str> = report.vars.iter().map(|v| v.name()).collect();
    assert_eq!(names, ["x", "z"]);
    // printed with the true rows first
    assert_eq!(ours(&report, report.rows_valid_first()), rows(NOT_TABLE));
    assert_eq!(report.v, Some(Coeff::from(-1)));
}

#[test]
fn sum_table_in_printed_order() {
    let r = resolve(&target("z = x + y + 1")).unwrap();
    let p = r.penalty();
    assert_eq!(p.dropped_offset(), Coeff::from(1));
    let report = p.report().unwrap();
    assert_eq!(ours(&report, report.rows_descending()), rows(SUM_TABLE));
    let values: Vec<String> = gap_table(&report).lines().skip(1).map(|l| l.rsplit('\t').next().unwrap().to_string()).collect();
    assert_eq!(values, ["3", "8", "0", "3", "0", "3", "-1", "0"]);
}

#[test]
fn sum_penalty_coefficients() {
    // 2(xy - xz - yz) + 3(x + y) - z
    let r = resolve(&target("z = x + y + 1")).unwrap();
    let poly = r.penalty().poly();
    let c = |names: &[&str]| poly.coeff(names);
    assert_eq!(c(&["x", "y"]), 2.into());
    assert_eq!(c(&["x", "z"]), (-2).into());
    assert_eq!(c(&["y", "z"]), (-2).into());
    assert_eq!(c(&["x"]), 3.into());
    assert_eq!(c(&["y"]), 3.into());
    assert_eq!(c(&["z"]), (-1).into());
    assert_eq!(poly.offset(), 0.into());
}
