//! Boolean operations on one or two bits and the relations they induce.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::poly::{Assignment, Expr, VarId};

/// Largest variable count that is enumerated exhaustively.
pub const MAX_ENUM_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("{op} takes {expected} input(s), got {got}")]
    ArityMismatch { op: BoolOp, expected: usize, got: usize },
    #[error("variable `{0}` appears more than once")]
    DuplicateVariable(String),
    #[error("{count} variables exceed the enumeration limit of {limit}")]
    TooManyVariables { count: usize, limit: usize },
    #[error("variable `{0}` is not part of the relation")]
    UnknownVariable(String),
}

/// The unary and binary Boolean operations.
///
/// `A` through `E` are the five binary columns that complete the set of
/// non-degenerate two-input functions next to the named ones. They are
/// identified by their rows only (row order `(1,1), (1,0), (0,1), (0,0)`):
///
/// | op | rows      |
/// |----|-----------|
/// | A  | 0 0 0 1   |
/// | B  | 0 1 1 1   |
/// | C  | 1 1 0 1   |
/// | D  | 0 0 1 0   |
/// | E  | 0 1 0 0   |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolOp {
    And,
    Or,
    Implies,
    Xor,
    Equiv,
    A,
    B,
    C,
    D,
    E,
    Copy,
    Not,
    Const0,
    Const1,
}

impl BoolOp {
    /// The ten two-input columns, in table order.
    pub const BINARY: [BoolOp; 10] = [
        BoolOp::And,
        BoolOp::Or,
        BoolOp::Implies,
        BoolOp::Xor,
        BoolOp::Equiv,
        BoolOp::A,
        BoolOp::B,
        BoolOp::C,
        BoolOp::D,
        BoolOp::E,
    ];

    pub const ALL: [BoolOp; 14] = [
        BoolOp::And,
        BoolOp::Or,
        BoolOp::Implies,
        BoolOp::Xor,
        BoolOp::Equiv,
        BoolOp::A,
        BoolOp::B,
        BoolOp::C,
        BoolOp::D,
        BoolOp::E,
        BoolOp::Copy,
        BoolOp::Not,
        BoolOp::Const0,
        BoolOp::Const1,
    ];

    pub fn arity(self) -> usize {
        match self {
            BoolOp::Const0 | BoolOp::Const1 => 0,
            BoolOp::Copy | BoolOp::Not => 1,
            _ => 2,
        }
    }

    /// Output column in descending-row order.
    ///
    /// Two inputs: rows `(1,1), (1,0), (0,1), (0,0)`. One input: `1, 0`.
    pub fn column(self) -> &'static [bool] {
        const T: bool = true;
        const F: bool = false;
        match self {
            BoolOp::And => &[T, F, F, F],
            BoolOp::Or => &[T, T, T, F],
            BoolOp::Implies => &[T, F, T, T],
            BoolOp::Xor => &[F, T, T, F],
            BoolOp::Equiv => &[T, F, F, T],
            BoolOp::A => &[F, F, F, T],
            BoolOp::B => &[F, T, T, T],
            BoolOp::C => &[T, T, F, T],
            BoolOp::D => &[F, F, T, F],
            BoolOp::E => &[F, T, F, F],
            BoolOp::Copy => &[T, F],
            BoolOp::Not => &[F, T],
            BoolOp::Const0 => &[F],
            BoolOp::Const1 => &[T],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoolOp::And => "AND",
            BoolOp::Or => "OR",
            BoolOp::Implies => "IMPLIES",
            BoolOp::Xor => "XOR",
            BoolOp::Equiv => "EQUIV",
            BoolOp::A => "A",
            BoolOp::B => "B",
            BoolOp::C => "C",
            BoolOp::D => "D",
            BoolOp::E => "E",
            BoolOp::Copy => "COPY",
            BoolOp::Not => "NOT",
            BoolOp::Const0 => "CONST0",
            BoolOp::Const1 => "CONST1",
        }
    }

    pub fn from_name(s: &str) -> Option<BoolOp> {
        BoolOp::ALL.iter().copied().find(|op| op.name().eq_ignore_ascii_case(s))
    }

    /// Evaluates the operation on `inputs` (first input is the table's `x_i`).
    pub fn eval(self, inputs: &[bool]) -> Result<bool, LogicError> {
        if inputs.len() != self.arity() {
            return Err(LogicError::ArityMismatch {
                op: self,
                expected: self.arity(),
                got: inputs.len(),
            });
        }
        Ok(self.column()[row_index(inputs)])
    }

    /// The unique multilinear polynomial agreeing with the operation on bits.
    pub fn multilinear(self, inputs: &[VarId]) -> Result<Expr, LogicError> {
        let n = self.arity();
        if inputs.len() != n {
            return Err(LogicError::ArityMismatch { op: self, expected: n, got: inputs.len() });
        }
        let f = |mask: u32| -> i64 {
            let bits: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
            self.column()[row_index(&bits)] as i64
        };
        let mut terms: Vec<Expr> = Vec::new();
        for s in 0u32..(1 << n) {
            // Moebius inversion over subsets of s.
            let mut c = 0i64;
            let mut t = s;
            loop {
                let sign = if (s.count_ones() - t.count_ones()) % 2 == 0 { 1 } else { -1 };
                c += sign * f(t);
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            if c == 0 {
                continue;
            }
            let mut term = Expr::int(c);
            for (k, v) in inputs.iter().enumerate() {
                if s >> k & 1 == 1 {
                    term = term * Expr::var(v);
                }
            }
            terms.push(term);
        }
        Ok(match terms.len() {
            0 => Expr::int(0),
            1 => terms.pop().unwrap_or_else(|| Expr::int(0)),
            _ => Expr::Sum(terms),
        })
    }
}

impl fmt::Display for BoolOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// Descending order: (1,1) is row 0, (0,0) is row 3.
fn row_index(inputs: &[bool]) -> usize {
    inputs.iter().fold(0usize, |acc, &b| (acc << 1) | (!b) as usize)
}

/// Rows of an operation's truth table in descending input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub op: BoolOp,
    pub rows: Vec<(Vec<bool>, bool)>,
}

impl TruthTable {
    pub fn of(op: BoolOp) -> TruthTable {
        let n = op.arity();
        let rows = (0..(1usize << n))
            .map(|r| {
                let inputs: Vec<bool> = (0..n).map(|k| r >> (n - 1 - k) & 1 == 0).collect();
                (inputs, op.column()[r])
            })
            .collect();
        TruthTable { op, rows }
    }
}

/// Renders two-input operations side by side, one tab-separated row per
/// input pair, starting with the header `x_i x_j AND OR ...`.
pub fn render_binary_table(ops: &[BoolOp]) -> String {
    let mut out = String::from("x_i\tx_j");
    for op in ops {
        out.push('\t');
        out.push_str(op.name());
    }
    out.push('\n');
    for row in [[true, true], [true, false], [false, true], [false, false]] {
        out.push_str(&format!("{}\t{}", row[0] as u8, row[1] as u8));
        for op in ops {
            let v = op.eval(&row).map(|b| b as u8).map(|b| format!("{b}")).unwrap_or_default();
            out.push('\t');
            out.push_str(&v);
        }
        out.push('\n');
    }
    out
}

/// An ancilla bound to the product of two variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncillaDef {
    pub ancilla: VarId,
    pub factors: (VarId, VarId),
}

impl AncillaDef {
    pub fn new(ancilla: VarId, u: VarId, w: VarId) -> Self {
        Self { ancilla, factors: (u, w) }
    }
}

/// Read access to one enumerated assignment.
#[derive(Debug, Clone, Copy)]
pub struct BitView<'a> {
    vars: &'a [VarId],
    mask: u64,
}

impl<'a> BitView<'a> {
    pub fn new(vars: &'a [VarId], mask: u64) -> Self {
        Self { vars, mask }
    }

    /// # Panics
    /// If `name` is not one of the enumerated variables.
    pub fn bit(&self, name: &str) -> bool {
        let k = self
            .vars
            .iter()
            .position(|v| v.name() == name)
            .unwrap_or_else(|| panic!("unknown variable `{name}`"));
        self.mask >> k & 1 == 1
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }
}

/// The assignments that satisfy a relation, over an ordered variable list.
///
/// Bit `k` of a stored mask is the value of `vars[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidSet {
    vars: Vec<VarId>,
    valid: BTreeSet<u64>,
}

impl ValidSet {
    pub fn from_predicate(
        vars: Vec<VarId>,
        pred: impl Fn(&BitView<'_>) -> bool,
    ) -> Result<ValidSet, LogicError> {
        check_vars(&vars)?;
        let valid = (0..(1u64 << vars.len()))
            .filter(|&m| pred(&BitView::new(&vars, m)))
            .collect();
        Ok(ValidSet { vars, valid })
    }

    pub fn from_masks(
        vars: Vec<VarId>,
        masks: impl IntoIterator<Item = u64>,
    ) -> Result<ValidSet, LogicError> {
        check_vars(&vars)?;
        let full = (1u64 << vars.len()) - 1;
        Ok(ValidSet { valid: masks.into_iter().map(|m| m & full).collect(), vars })
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.valid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valid.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.valid.contains(&mask)
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.valid.iter().copied()
    }

    pub fn assignment(&self, mask: u64) -> Assignment {
        Assignment::from_bits(self.vars.iter().enumerate().map(|(k, v)| (v.name(), mask >> k & 1 == 1)))
    }

    /// Adds each ancilla as a new variable fixed to the product of its factors.
    pub fn with_ancillas(&self, defs: &[AncillaDef]) -> Result<ValidSet, LogicError> {
        let mut vars = self.vars.clone();
        for d in defs {
            vars.push(d.ancilla.clone());
        }
        check_vars(&vars)?;
        let pos = |name: &str| vars.iter().position(|v| v.name() == name);
        let mut slots = Vec::with_capacity(defs.len());
        for (k, d) in defs.iter().enumerate() {
            let u = pos(d.factors.0.name()).ok_or_else(|| LogicError::UnknownVariable(d.factors.0.name().into()))?;
            let w = pos(d.factors.1.name()).ok_or_else(|| LogicError::UnknownVariable(d.factors.1.name().into()))?;
            slots.push((self.vars.len() + k, u, w));
        }
        let valid = self
            .valid
            .iter()
            .map(|&m| {
                let mut m = m;
                // Factors may themselves be earlier ancillas, so fill in order.
                for &(a, u, w) in &slots {
                    if (m >> u & 1 == 1) && (m >> w & 1 == 1) {
                        m |= 1 << a;
                    }
                }
                m
            })
            .collect();
        Ok(ValidSet { vars, valid })
    }

    /// Existential projection onto the named variables, in the given order.
    pub fn project(&self, names: &[&str]) -> Result<ValidSet, LogicError> {
        let mut idx = Vec::with_capacity(names.len());
        for n in names {
            idx.push(
                self.vars
                    .iter()
                    .position(|v| v.name() == *n)
                    .ok_or_else(|| LogicError::UnknownVariable((*n).into()))?,
            );
        }
        let vars: Vec<VarId> = idx.iter().map(|&i| self.vars[i].clone()).collect();
        let valid = self
            .valid
            .iter()
            .map(|&m| idx.iter().enumerate().fold(0u64, |acc, (k, &i)| acc | ((m >> i & 1) << k)))
            .collect();
        Ok(ValidSet { vars, valid })
    }

    /// Re-expresses the set over `order`, which must name exactly the same variables.
    pub fn reordered(&self, order: &[VarId]) -> Result<ValidSet, LogicError> {
        let names: Vec<&str> = order.iter().map(VarId::name).collect();
        if names.len() != self.vars.len() {
            let missing = self
                .vars
                .iter()
                .find(|v| !names.contains(&v.name()))
                .map(|v| String::from(v.name()))
                .unwrap_or_default();
            return Err(LogicError::UnknownVariable(missing));
        }
        self.project(&names)
    }
}

fn check_vars(vars: &[VarId]) -> Result<(), LogicError> {
    if vars.len() > MAX_ENUM_VARS {
        return Err(LogicError::TooManyVariables { count: vars.len(), limit: MAX_ENUM_VARS });
    }
    for (k, v) in vars.iter().enumerate() {
        if vars[..k].iter().any(|w| w.name() == v.name()) {
            return Err(LogicError::DuplicateVariable(v.name().into()));
        }
    }
    Ok(())
}

/// Valid set of `output = op(inputs)` together with the ancilla definitions.
///
/// Variables are ordered inputs, output, then ancillas.
pub fn relation_of(
    op: BoolOp,
    output: &VarId,
    inputs: &[VarId],
    ancillas: &[AncillaDef],
) -> Result<ValidSet, LogicError> {
    if inputs.len() != op.arity() {
        return Err(LogicError::ArityMismatch { op, expected: op.arity(), got: inputs.len() });
    }
    let mut vars: Vec<VarId> = inputs.to_vec();
    vars.push(output.clone());
    let n = inputs.len();
    let base = ValidSet::from_predicate(vars, |b| {
        let ins: Vec<bool> = (0..n).map(|k| b.mask() >> k & 1 == 1).collect();
        op.eval(&ins).map(|v| v == (b.mask() >> n & 1 == 1)).unwrap_or(false)
    })?;
    base.with_ancillas(ancillas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn table_rows() {
        assert!(!BoolOp::Xor.eval(&[true, true]).unwrap());
        assert!(BoolOp::A.eval(&[false, false]).unwrap());
        assert!(!BoolOp::A.eval(&[true, true]).unwrap());
        assert!(BoolOp::Not.eval(&[false]).unwrap());
        assert!(BoolOp::Const1.eval(&[]).unwrap());
    }

    #[test]
    fn arity_mismatch() {
        assert_eq!(
            BoolOp::And.eval(&[true]),
            Err(LogicError::ArityMismatch { op: BoolOp::And, expected: 2, got: 1 })
        );
    }

    #[test]
    fn binary_columns_are_distinct_and_algebraic() {
        for (k, a) in BoolOp::BINARY.iter().enumerate() {
            for b in &BoolOp::BINARY[k + 1..] {
                assert_ne!(a.column(), b.column(), "{a} and {b}");
            }
        }
        for x in [false, true] {
            for y in [false, true] {
                let (xi, yi) = (x as i64, y as i64);
                let xor = BoolOp::Xor.eval(&[x, y]).unwrap() as i64;
                assert_eq!(xor, (xi + yi) % 2);
                assert_eq!(BoolOp::And.eval(&[x, y]).unwrap() as i64, xi * yi);
                assert_eq!(BoolOp::Or.eval(&[x, y]).unwrap() as i64, xi + yi - xi * yi);
                assert_eq!(BoolOp::Implies.eval(&[x, y]).unwrap() as i64, 1 - xi + xi * yi);
                assert_eq!(BoolOp::Equiv.eval(&[x, y]).unwrap() as i64, 1 - xi - yi + 2 * xi * yi);
            }
        }
    }

    #[test]
    fn multilinear_matches_column() {
        let (i, j) = (VarId::input("i"), VarId::input("j"));
        for op in BoolOp::ALL {
            let ins: Vec<VarId> = [i.clone(), j.clone()][..op.arity()].to_vec();
            let e = op.multilinear(&ins).unwrap();
            for m in 0u64..(1 << op.arity()) {
                let bits: Vec<bool> = (0..op.arity()).map(|k| m >> k & 1 == 1).collect();
                let v = e
                    .eval(&|v: &VarId| {
                        let k = ins.iter().position(|w| w == v)?;
                        Some(crate::poly::int(bits[k] as i64))
                    })
                    .unwrap();
                assert_eq!(v, crate::poly::int(op.eval(&bits).unwrap() as i64), "{op}");
            }
        }
    }

    #[test]
    fn xor_relation_with_ancilla() {
        let (i, j, k, a) = (VarId::input("i"), VarId::input("j"), VarId::output("k"), VarId::ancilla("a"));
        let vs = relation_of(BoolOp::Xor, &k, &[i.clone(), j.clone()], &[AncillaDef::new(a, i, j)]).unwrap();
        assert_eq!(vs.vars().len(), 4);
        assert_eq!(vs.len(), 4);
    }

    #[test]
    fn copy_and_and_relations() {
        let (i, j, k) = (VarId::input("i"), VarId::input("j"), VarId::output("k"));
        let copy = relation_of(BoolOp::Copy, &k, core::slice::from_ref(&i), &[]).unwrap();
        // (i, k) in {(0,0), (1,1)}
        assert_eq!(copy.masks().collect::<Vec<_>>(), vec![0b00, 0b11]);
        let and = relation_of(BoolOp::And, &k, &[i, j], &[]).unwrap();
        let rows: BTreeSet<(bool, bool, bool)> = and
            .masks()
            .map(|m| (m & 1 == 1, m >> 1 & 1 == 1, m >> 2 & 1 == 1))
            .collect();
        let expected: BTreeSet<_> =
            [(true, true, true), (true, false, false), (false, true, false), (false, false, false)].into();
        assert_eq!(rows, expected);
    }

    #[test]
    fn relation_size_is_two_to_the_inputs() {
        let (i, j, k) = (VarId::input("i"), VarId::input("j"), VarId::output("k"));
        for op in BoolOp::ALL {
            let ins = &[i.clone(), j.clone()][..op.arity()];
            let vs = relation_of(op, &k, ins, &[]).unwrap();
            assert_eq!(vs.len(), 1 << op.arity(), "{op}");
        }
    }

    #[test]
    fn duplicate_variables_rejected() {
        let i = VarId::input("i");
        let err = relation_of(BoolOp::And, &i, &[i.clone(), VarId::input("j")], &[]).unwrap_err();
        assert_eq!(err, LogicError::DuplicateVariable("i".into()));
    }

    #[test]
    fn projection_and_table_layout() {
        let (i, j, k) = (VarId::input("i"), VarId::input("j"), VarId::output("k"));
        let vs = relation_of(BoolOp::And, &k, &[i, j], &[]).unwrap();
        let p = vs.project(&["i", "k"]).unwrap();
        assert_eq!(p.len(), 3);
        let t = render_binary_table(&[BoolOp::And, BoolOp::A]);
        assert_eq!(t, "x_i\tx_j\tAND\tA\n1\t1\t1\t0\n1\t0\t0\t0\n0\t1\t0\t0\n0\t0\t0\t1\n");
        let tt = TruthTable::of(BoolOp::Xor);
        assert_eq!(tt.rows[0], (vec![true, true], false));
        assert_eq!(tt.rows[3], (vec![false, false], false));
    }
}
