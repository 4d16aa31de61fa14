use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::logic::{relation_of, BoolOp, ValidSet};
use crate::poly::{int, Coeff, Domain, Expr, Poly, VarId, VarKind};

use super::quadratize::{quadratize_with_plan, substituted_base, AncillaWeight, Quadratized};
use super::{builtin_penalty, verify_gap, Penalty, PenaltyError};

/// Upper bound on automatic ancilla-weight increases.
const MAX_WEIGHT_BOOST: usize = 16;

/// How many slack variables an inequality receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlackMode {
    /// One less than the number of variables in the inequality.
    #[default]
    VarsMinusOne,
    /// Exactly as many unit slacks as the bound requires.
    Minimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileOptions {
    pub slack_mode: SlackMode,
    pub ancilla_weight: AncillaWeight,
    /// Whole-penalty multiplier, at least 1.
    pub scale: Coeff,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { slack_mode: SlackMode::default(), ancilla_weight: AncillaWeight::PerReplacedTerm, scale: Coeff::one() }
    }
}

/// A constraint that can be compiled into a penalty.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    /// `lhs = rhs` over binary variables with integer coefficients.
    Equation { lhs: Expr, rhs: Expr },
    /// `lhs <= bound` or `lhs >= bound`, `lhs` a sum of distinct variables.
    Inequality { lhs: Expr, sense: Sense, bound: i64 },
    /// `output = op(inputs)`.
    Logic { output: VarId, op: BoolOp, inputs: Vec<VarId> },
}

impl Constraint {
    /// Variables mentioned by the constraint, in order of appearance.
    pub fn vars(&self) -> Vec<VarId> {
        match self {
            Constraint::Equation { lhs, rhs } => {
                let mut vs = lhs.vars();
                for v in rhs.vars() {
                    if !vs.iter().any(|w| w.name() == v.name()) {
                        vs.push(v);
                    }
                }
                vs
            }
            Constraint::Inequality { lhs, .. } => lhs.vars(),
            Constraint::Logic { output, inputs, .. } => {
                let mut vs = inputs.clone();
                vs.push(output.clone());
                vs
            }
        }
    }
}

/// Compiles any [`Constraint`] and applies the multiplier in `opts`.
pub fn compile_constraint(c: &Constraint, opts: &CompileOptions) -> Result<Penalty, PenaltyError> {
    let p = match c {
        Constraint::Equation { lhs, rhs } => equation_to_penalty(lhs, rhs, opts)?,
        Constraint::Inequality { lhs, sense, bound } => {
            let eq = inequality_to_equation(lhs, *sense, *bound, opts.slack_mode)?;
            if eq.vacuous {
                let vars = lhs.vars();
                let valid = ValidSet::from_predicate(vars.clone(), |_| true)?;
                Penalty::new(Poly::with_vars(Domain::Boolean, &vars), valid, Coeff::zero(), Vec::new())?
            } else {
                equation_to_penalty(&eq.lhs, &eq.rhs, opts)?
            }
        }
        Constraint::Logic { output, op, inputs } => penalty_for_op(*op, output, inputs, opts)?,
    };
    if opts.scale.is_one() {
        Ok(p)
    } else {
        p.scaled(opts.scale)
    }
}

/// Penalty for `output = op(inputs)`.
///
/// Uses the built-in table entry when there is one, renamed onto the given
/// variables; every other operation goes through [`equation_to_penalty`]
/// on the operation's multilinear form.
pub fn penalty_for_op(op: BoolOp, output: &VarId, inputs: &[VarId], opts: &CompileOptions) -> Result<Penalty, PenaltyError> {
    if inputs.len() != op.arity() {
        return Err(crate::logic::LogicError::ArityMismatch { op, expected: op.arity(), got: inputs.len() }.into());
    }
    match builtin_penalty(op) {
        Ok(p) => {
            let mut taken: Vec<&str> = inputs.iter().map(VarId::name).collect();
            taken.push(output.name());
            let anc = fresh(&taken, "a", VarKind::Ancilla);
            let mut map: Vec<(&str, VarId)> = Vec::new();
            for (from, to) in ["i", "j"].iter().zip(inputs) {
                map.push((from, to.clone()));
            }
            map.push(("k", output.clone()));
            map.push(("a", anc));
            Ok(p.renamed(&map)?.with_label(format!("{output} = {op}")))
        }
        Err(PenaltyError::NotBuiltin(_)) => {
            let rhs = op.multilinear(inputs)?;
            let p = equation_to_penalty(&Expr::var(output), &rhs, opts)?;
            // The valid set of the equation and of the operation coincide.
            let relation = relation_of(op, output, inputs, p.ancillas())?;
            debug_assert_eq!(relation.len(), p.valid_set().len());
            Ok(p.with_label(format!("{output} = {op}")))
        }
        Err(e) => Err(e),
    }
}

/// Squares `lhs - rhs`, reduces powers, and drops the constant.
///
/// The result's minimisers are exactly the binary solutions of the
/// equation. Cubic and higher terms are quadratized; if the default ancilla
/// weights do not yield a sound penalty, all weights are raised by one
/// until it does. An equation without binary solutions still compiles,
/// flagged through [`Penalty::is_satisfiable`].
pub fn equation_to_penalty(lhs: &Expr, rhs: &Expr, opts: &CompileOptions) -> Result<Penalty, PenaltyError> {
    let diff = lhs.clone() - rhs.clone();
    let linear = diff.expand(Domain::Boolean);
    for (_, c) in linear.index_terms() {
        if !c.is_integer() {
            return Err(PenaltyError::NonIntegerCoefficient(c));
        }
    }
    if !linear.offset().is_integer() {
        return Err(PenaltyError::NonIntegerCoefficient(linear.offset()));
    }
    // A lone variable on the left is the one being defined; list it last,
    // like the output of a logic constraint.
    let (first, second) = match lhs {
        Expr::Var(_) => (rhs, lhs),
        _ => (lhs, rhs),
    };
    let mut vars = first.vars();
    for v in second.vars() {
        if !vars.iter().any(|w| w.name() == v.name()) {
            vars.push(v);
        }
    }
    let squared = diff.clone().pow(2).expand_over(&vars);
    let (poly, constant) = squared.split_offset();

    let valid = ValidSet::from_predicate(vars.clone(), |b| {
        let value = |v: &VarId| Some(int(b.bit(v.name()) as i64));
        diff.eval(&value).map(|x| x.is_zero()).unwrap_or(false)
    })?;

    let label = format!("{lhs} = {rhs}");
    if poly.degree() <= 2 {
        if valid.is_empty() {
            return Ok(Penalty::unsatisfiable(poly, valid, constant, Vec::new()).with_label(label));
        }
        return Ok(Penalty::new(poly, valid, constant, Vec::new())?.with_label(label));
    }

    let q = quadratize_with_plan(&poly, &[], opts.ancilla_weight)?;
    let valid = valid.with_ancillas(&q.ancillas)?;
    if valid.is_empty() {
        return Ok(Penalty::unsatisfiable(q.poly, valid, constant, q.ancillas).with_label(label));
    }
    let (q, _) = escalate(q, &valid)?;
    Ok(Penalty::new(q.poly, valid, constant, q.ancillas)?.with_label(label))
}

/// Raises every ancilla weight by one until the gap check passes.
/// Returns the sound quadratization and the total increase applied.
pub(crate) fn escalate(q: Quadratized, valid: &ValidSet) -> Result<(Quadratized, usize), PenaltyError> {
    let base = substituted_base(&q);
    for boost in 0..=MAX_WEIGHT_BOOST {
        let candidate = if boost == 0 { q.clone() } else { q.boosted(&base, int(boost as i64)) };
        if verify_gap(&candidate.poly, valid)?.pass {
            return Ok((candidate, boost));
        }
    }
    Err(PenaltyError::WeightEscalationExhausted(MAX_WEIGHT_BOOST))
}

/// An inequality rewritten as an equation with slack variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SlackEquation {
    pub lhs: Expr,
    pub rhs: Expr,
    pub slacks: Vec<VarId>,
    /// Every assignment satisfies the inequality; no equation is needed.
    pub vacuous: bool,
}

/// Adds binary slack variables to `sum(x) <= bound` or `sum(x) >= bound`.
///
/// `<=` becomes `sum(x) + sum(s) = bound`, `>=` becomes
/// `sum(x) - sum(s) = bound`. With [`SlackMode::VarsMinusOne`] the slack
/// count is one less than the number of variables; [`SlackMode::Minimal`]
/// uses the smallest count that still covers every satisfying assignment.
pub fn inequality_to_equation(lhs: &Expr, sense: Sense, bound: i64, mode: SlackMode) -> Result<SlackEquation, PenaltyError> {
    let poly = lhs.expand(Domain::Boolean);
    let shown = format!("{poly} {} {bound}", if sense == Sense::Le { "<=" } else { ">=" });
    if poly.degree() > 1 || poly.index_terms().any(|(_, c)| !c.is_one()) || !poly.offset().is_integer() {
        return Err(PenaltyError::UnsupportedInequality(shown));
    }
    let bound = bound - poly.offset().to_integer();
    let vars: Vec<VarId> = poly.pruned().vars().to_vec();
    let n = vars.len() as i64;

    let (infeasible, vacuous) = match sense {
        Sense::Le => (bound < 0, bound >= n),
        Sense::Ge => (bound > n, bound <= 0),
    };
    if infeasible {
        return Err(PenaltyError::InfeasibleInequality(shown));
    }
    let sum = Expr::Sum(vars.iter().map(Expr::var).collect());
    if vacuous {
        return Ok(SlackEquation { lhs: sum, rhs: Expr::int(bound), slacks: Vec::new(), vacuous: true });
    }
    let count = match (mode, sense) {
        (SlackMode::VarsMinusOne, _) => n - 1,
        (SlackMode::Minimal, Sense::Le) => bound,
        (SlackMode::Minimal, Sense::Ge) => n - bound,
    };
    let mut taken: Vec<String> = vars.iter().map(|v| String::from(v.name())).collect();
    let mut slacks = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let names: Vec<&str> = taken.iter().map(String::as_str).collect();
        let s = slack_name(&names);
        taken.push(s.clone());
        slacks.push(VarId::slack(s));
    }
    let Expr::Sum(mut terms) = sum else { unreachable!() };
    terms.extend(slacks.iter().map(|s| match sense {
        Sense::Le => Expr::var(s),
        Sense::Ge => -Expr::var(s),
    }));
    let lhs = Expr::Sum(terms);
    Ok(SlackEquation { lhs, rhs: Expr::int(bound), slacks, vacuous: false })
}

fn slack_name(taken: &[&str]) -> String {
    for n in ["s", "t"] {
        if !taken.contains(&n) {
            return n.into();
        }
    }
    (2..).map(|k| format!("s{k}")).find(|n| !taken.contains(&n.as_str())).unwrap_or_default()
}

fn fresh(taken: &[&str], base: &str, kind: VarKind) -> VarId {
    if !taken.contains(&base) {
        return VarId::new(base, kind);
    }
    let name = (1..).map(|k| format!("{base}{k}")).find(|n| !taken.contains(&n.as_str())).unwrap_or_default();
    VarId::new(name, kind)
}
