//! Penalty functions: construction, degree reduction and verification.
//!
//! A [`Penalty`] is a quadratic polynomial paired with the relation it
//! encodes. It can only be built through a constructor that runs
//! [`verify_gap`], so every value of this type has been checked over all
//! assignments: valid assignments share one value `v`, every other
//! assignment scores at least `v + 1`.

mod constraint;
mod feasibility;
mod gap;
mod quadratize;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::logic::{relation_of, AncillaDef, BoolOp, LogicError, ValidSet};
use crate::poly::{Coeff, Domain, Expr, Poly, PolyError, VarId};

pub use constraint::{
    compile_constraint, equation_to_penalty, inequality_to_equation, penalty_for_op, CompileOptions,
    Constraint, Sense, SlackEquation, SlackMode,
};
pub use feasibility::{
    decide, prove_no_quadratic, Feasibility, InfeasibilityCertificate, LinearRow, LinearSystem, RowSense,
    MAX_PROOF_VARS,
};
pub use gap::{verify_gap, verify_gap_partitioned, GapReport, GapRow, Violation, TABLE_LIMIT};
pub use quadratize::{quadratize, quadratize_with_plan, AncillaWeight, Quadratized};
pub(crate) use constraint::escalate;


#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PenaltyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("penalty fails the gap check")]
    GapViolation(Box<GapReport>),
    #[error("{0} has no built-in penalty")]
    NotBuiltin(BoolOp),
    #[error("constraint coefficients must be integers, found {0}")]
    NonIntegerCoefficient(Coeff),
    #[error("inequality cannot be satisfied for any assignment: {0}")]
    InfeasibleInequality(String),
    #[error("unsupported inequality: {0}")]
    UnsupportedInequality(String),
    #[error("ancilla `{0}` does not replace any term of degree 3 or more")]
    UnusedAncilla(String),
    #[error("{count} variables exceed the limit of {limit}")]
    TooManyVariables { count: usize, limit: usize },
    #[error("variable `{0}` is not part of the relation")]
    UnknownVariable(String),
    #[error("penalty multiplier must be at least 1, got {0}")]
    ScaleBelowOne(Coeff),
    #[error("raising ancilla weights {0} times did not produce a sound penalty")]
    WeightEscalationExhausted(usize),
}

/// A verified quadratic penalty and the relation it rewards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Penalty {
    poly: Poly,
    valid: ValidSet,
    valid_value: Option<Coeff>,
    dropped_offset: Coeff,
    ancillas: Vec<AncillaDef>,
    label: String,
}

impl Penalty {
    /// Verifies `poly` against `valid` and wraps it.
    ///
    /// `dropped_offset` is the constant removed from `poly` during
    /// compilation; `poly + dropped_offset` is the unnormalised form.
    pub fn new(
        poly: Poly,
        valid: ValidSet,
        dropped_offset: Coeff,
        ancillas: Vec<AncillaDef>,
    ) -> Result<Penalty, PenaltyError> {
        if poly.domain() != Domain::Boolean {
            return Err(PolyError::WrongDomain { expected: Domain::Boolean }.into());
        }
        let degree = poly.degree();
        if degree > 2 {
            return Err(PolyError::DegreeTooHigh { degree, max: 2 }.into());
        }
        let report = verify_gap(&poly, &valid)?;
        if !report.pass {
            return Err(PenaltyError::GapViolation(Box::new(report)));
        }
        Ok(Penalty { poly, valid, valid_value: report.v, dropped_offset, ancillas, label: String::new() })
    }

    /// A penalty for a relation with no solutions. Nothing can be verified,
    /// so callers get the polynomial together with this flag.
    pub(crate) fn unsatisfiable(poly: Poly, valid: ValidSet, dropped_offset: Coeff, ancillas: Vec<AncillaDef>) -> Penalty {
        Penalty { poly, valid, valid_value: None, dropped_offset, ancillas, label: String::new() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn valid_set(&self) -> &ValidSet {
        &self.valid
    }

    /// Shared value `v` of every valid assignment, `None` when unsatisfiable.
    pub fn valid_value(&self) -> Option<Coeff> {
        self.valid_value
    }

    pub fn dropped_offset(&self) -> Coeff {
        self.dropped_offset
    }

    pub fn ancillas(&self) -> &[AncillaDef] {
        &self.ancillas
    }

    pub fn is_satisfiable(&self) -> bool {
        self.valid_value.is_some()
    }

    pub fn report(&self) -> Result<GapReport, PenaltyError> {
        verify_gap(&self.poly, &self.valid)
    }

    /// Multiplies the whole penalty by `m >= 1`; the gap threshold stays 1.
    pub fn scaled(&self, m: Coeff) -> Result<Penalty, PenaltyError> {
        if m < Coeff::one() {
            return Err(PenaltyError::ScaleBelowOne(m));
        }
        let poly = self.poly.scaled(m);
        if !self.is_satisfiable() {
            return Ok(Penalty::unsatisfiable(poly, self.valid.clone(), self.dropped_offset * m, self.ancillas.clone())
                .with_label(self.label.clone()));
        }
        Ok(Penalty::new(poly, self.valid.clone(), self.dropped_offset * m, self.ancillas.clone())?
            .with_label(self.label.clone()))
    }

    /// Renames variables by `(from, to)` pairs and re-verifies.
    pub fn renamed(&self, map: &[(&str, VarId)]) -> Result<Penalty, PenaltyError> {
        let rn = |v: &VarId| {
            map.iter()
                .find(|(from, _)| *from == v.name())
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| v.clone())
        };
        let poly = self.poly.rename(rn);
        let vars: Vec<VarId> = self.valid.vars().iter().map(rn).collect();
        let valid = ValidSet::from_masks(vars, self.valid.masks())?;
        let ancillas = self
            .ancillas
            .iter()
            .map(|d| AncillaDef::new(rn(&d.ancilla), rn(&d.factors.0), rn(&d.factors.1)))
            .collect();
        let out = if self.is_satisfiable() {
            Penalty::new(poly, valid, self.dropped_offset, ancillas)?
        } else {
            Penalty::unsatisfiable(poly, valid, self.dropped_offset, ancillas)
        };
        Ok(out.with_label(self.label.clone()))
    }

    /// Same penalty with both the polynomial registry and the relation's
    /// variables in `order`, which must list every relation variable.
    pub fn reordered(&self, order: &[VarId]) -> Result<Penalty, PenaltyError> {
        let mut out = self.clone();
        out.poly = self.poly.reordered(order);
        out.valid = self.valid.reordered(order)?;
        Ok(out)
    }
}

/// `i`, `j`, `k`, `a`: the variable names used by the built-in penalties.
pub fn builtin_vars() -> [VarId; 4] {
    [VarId::input("i"), VarId::input("j"), VarId::output("k"), VarId::ancilla("a")]
}

/// The quadratic penalty for `k = op(i, j)` (or `k = op(i)`) as tabulated
/// for the seven named operations. `IMPLIES`, `XOR` and `EQUIV` use the
/// ancilla `a = i*j`.
pub fn builtin_penalty(op: BoolOp) -> Result<Penalty, PenaltyError> {
    let [i, j, k, a] = builtin_vars();
    let (x_i, x_j, x_k, x_a) = (Expr::var(&i), Expr::var(&j), Expr::var(&k), Expr::var(&a));
    let (expr, vars, ancillas): (Expr, Vec<VarId>, Vec<AncillaDef>) = match op {
        BoolOp::Copy => (-2 * x_i.clone() * x_k.clone() + x_i + x_k, alloc::vec![i.clone(), k.clone()], Vec::new()),
        BoolOp::Not => (2 * x_i.clone() * x_k.clone() - x_i - x_k, alloc::vec![i.clone(), k.clone()], Vec::new()),
        BoolOp::And => (
            x_i.clone() * x_j.clone() - 2 * (x_i + x_j) * x_k.clone() + 3 * x_k,
            alloc::vec![i.clone(), j.clone(), k.clone()],
            Vec::new(),
        ),
        BoolOp::Or => (
            x_i.clone() * x_j.clone() + (x_i + x_j) * (1 - 2 * x_k.clone()) + x_k,
            alloc::vec![i.clone(), j.clone(), k.clone()],
            Vec::new(),
        ),
        BoolOp::Implies => (
            4 * x_i.clone() * x_j.clone() + 2 * x_i.clone() * x_k.clone()
                - 6 * (x_i.clone() + x_j) * x_a.clone()
                - 2 * x_k.clone() * x_a.clone()
                - x_i
                - x_k
                + 9 * x_a,
            alloc::vec![i.clone(), j.clone(), k.clone(), a.clone()],
            alloc::vec![AncillaDef::new(a.clone(), i.clone(), j.clone())],
        ),
        BoolOp::Xor => (
            2 * x_i.clone() * x_j.clone()
                - 2 * (x_i.clone() + x_j.clone()) * x_k.clone()
                - 4 * (x_i.clone() + x_j.clone()) * x_a.clone()
                + 4 * x_k.clone() * x_a.clone()
                + x_i
                + x_j
                + x_k
                + 4 * x_a,
            alloc::vec![i.clone(), j.clone(), k.clone(), a.clone()],
            alloc::vec![AncillaDef::new(a.clone(), i.clone(), j.clone())],
        ),
        BoolOp::Equiv => (
            2 * x_i.clone() * x_j.clone()
                + 2 * (x_i.clone() + x_j.clone()) * x_k.clone()
                - 4 * (x_i.clone() + x_j.clone()) * x_a.clone()
                - 4 * x_k.clone() * x_a.clone()
                - x_i
                - x_j
                - x_k
                + 8 * x_a,
            alloc::vec![i.clone(), j.clone(), k.clone(), a.clone()],
            alloc::vec![AncillaDef::new(a.clone(), i.clone(), j.clone())],
        ),
        other => return Err(PenaltyError::NotBuiltin(other)),
    };
    let inputs = &vars[..op.arity()];
    let valid = relation_of(op, &k, inputs, &ancillas)?;
    let poly = expr.expand_over(&vars);
    Ok(Penalty::new(poly, valid, Coeff::zero(), ancillas)?.with_label(op.name()))
}

/// Operations with a built-in penalty.
pub const BUILTIN_OPS: [BoolOp; 7] =
    [BoolOp::Copy, BoolOp::Not, BoolOp::And, BoolOp::Or, BoolOp::Implies, BoolOp::Xor, BoolOp::Equiv];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;
    use alloc::format;

    #[test]
    fn builtin_valid_values_match_enumeration() {
        // Brute force over the relation's assignments, independent of verify_gap.
        let expected = [
            (BoolOp::Copy, 0),
            (BoolOp::Not, -1),
            (BoolOp::And, 0),
            (BoolOp::Or, 0),
            (BoolOp::Implies, -1),
            (BoolOp::Xor, 0),
            (BoolOp::Equiv, -1),
        ];
        for (op, v) in expected {
            let p = builtin_penalty(op).unwrap();
            let vs = p.valid_set();
            let values: Vec<Coeff> = vs.masks().map(|m| p.poly().eval(&vs.assignment(m)).unwrap()).collect();
            assert!(values.iter().all(|x| *x == int(v)), "{op}: {values:?}");
            assert_eq!(p.valid_value(), Some(int(v)), "{op}");
        }
    }

    #[test]
    fn builtin_text() {
        let and = builtin_penalty(BoolOp::And).unwrap();
        assert_eq!(format!("{}", and.poly()), "i*j - 2*i*k - 2*j*k + 3*k");
        let xor = builtin_penalty(BoolOp::Xor).unwrap();
        assert_eq!(format!("{}", xor.poly()), "2*i*j - 2*i*k - 4*i*a - 2*j*k - 4*j*a + 4*k*a + i + j + k + 4*a");
    }

    #[test]
    fn equivalence_is_negated_xor_plus_four_and() {
        let xor = builtin_penalty(BoolOp::Xor).unwrap();
        let and_a = builtin_penalty(BoolOp::And).unwrap().poly().rename_map(&[("k", VarId::ancilla("a"))]);
        let built = crate::poly::combine(&[(int(-1), xor.poly()), (int(4), &and_a)]);
        assert_eq!(&built, builtin_penalty(BoolOp::Equiv).unwrap().poly());
    }

    #[test]
    fn non_builtin_is_rejected() {
        assert_eq!(builtin_penalty(BoolOp::A).unwrap_err(), PenaltyError::NotBuiltin(BoolOp::A));
    }

    #[test]
    fn scaling_keeps_soundness() {
        let p = builtin_penalty(BoolOp::Or).unwrap();
        let s = p.scaled(int(3)).unwrap();
        assert_eq!(s.valid_value(), Some(int(0)));
        assert_eq!(s.report().unwrap().gap, Some(int(3)));
        assert_eq!(p.scaled(Coeff::new(1, 2)).unwrap_err(), PenaltyError::ScaleBelowOne(Coeff::new(1, 2)));
    }

    #[test]
    fn corrupted_xor_is_caught() {
        let xor = builtin_penalty(BoolOp::Xor).unwrap();
        let mut poly = xor.poly().clone();
        // Flip the sign of 4*k*a.
        poly.add_term(&[VarId::output("k"), VarId::ancilla("a")], int(-8));
        let r = verify_gap(&poly, xor.valid_set()).unwrap();
        assert!(!r.pass);
        let viol = r.violation.unwrap();
        let m = viol.mask().unwrap();
        assert!(!xor.valid_set().contains(m));
        assert!(r.rows[m as usize].value < int(1));
        assert!(matches!(
            Penalty::new(poly, xor.valid_set().clone(), int(0), Vec::new()),
            Err(PenaltyError::GapViolation(_))
        ));
    }
}
