//! Exact linear feasibility, used to decide whether a relation admits a
//! quadratic penalty over a fixed variable set.
//!
//! The system `A_eq y = b_eq, A_ge y >= b_ge` (all `y` free) is decided by a
//! phase-one simplex over arbitrary-precision rationals with Bland's rule.
//! An infeasible system yields Farkas multipliers `λ` (non-negative on the
//! `>=` rows) with `λᵀA = 0` and `λᵀb > 0`, which anyone can re-check by
//! substitution.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::logic::ValidSet;
use crate::poly::{Coeff, Domain, Poly, VarId};

use super::{verify_gap, PenaltyError};

/// Largest variable count accepted by [`prove_no_quadratic`].
pub const MAX_PROOF_VARS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    pub label: String,
    pub coeffs: Vec<BigRational>,
    pub sense: RowSense,
    pub rhs: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub columns: Vec<String>,
    pub rows: Vec<LinearRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible { solution: Vec<BigRational> },
    Infeasible { multipliers: Vec<BigRational> },
}

impl LinearSystem {
    pub fn satisfied_by(&self, y: &[BigRational]) -> bool {
        if y.len() != self.columns.len() {
            return false;
        }
        self.rows.iter().all(|r| {
            let lhs: BigRational = r.coeffs.iter().zip(y).map(|(a, b)| a * b).sum();
            match r.sense {
                RowSense::Eq => lhs == r.rhs,
                RowSense::Ge => lhs >= r.rhs,
            }
        })
    }

    /// True when `lambda` proves the system has no solution.
    pub fn refuted_by(&self, lambda: &[BigRational]) -> bool {
        if lambda.len() != self.rows.len() {
            return false;
        }
        let signs_ok = self
            .rows
            .iter()
            .zip(lambda)
            .all(|(r, l)| r.sense == RowSense::Eq || !l.is_negative());
        let combination_zero = (0..self.columns.len()).all(|j| {
            self.rows.iter().zip(lambda).map(|(r, l)| &r.coeffs[j] * l).sum::<BigRational>().is_zero()
        });
        let rhs: BigRational = self.rows.iter().zip(lambda).map(|(r, l)| &r.rhs * l).sum();
        signs_ok && combination_zero && rhs.is_positive()
    }
}

/// Decides feasibility of `system`.
pub fn decide(system: &LinearSystem) -> Feasibility {
    let m = system.rows.len();
    let n = system.columns.len();
    let ge_rows: Vec<usize> = (0..m).filter(|&r| system.rows[r].sense == RowSense::Ge).collect();
    // Columns: y+ (n), y- (n), surplus (one per >= row), artificials (m).
    let n_struct = 2 * n + ge_rows.len();
    let width = n_struct + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut sigma: Vec<BigRational> = Vec::with_capacity(m);
    for (r, row) in system.rows.iter().enumerate() {
        let mut line = vec![BigRational::zero(); width + 1];
        for j in 0..n {
            line[j] = row.coeffs[j].clone();
            line[n + j] = -row.coeffs[j].clone();
        }
        if let Some(s) = ge_rows.iter().position(|&g| g == r) {
            line[2 * n + s] = -BigRational::one();
        }
        line[width] = row.rhs.clone();
        let s = if row.rhs.is_negative() { -BigRational::one() } else { BigRational::one() };
        for x in line.iter_mut() {
            *x = &*x * &s;
        }
        line[n_struct + r] = BigRational::one();
        sigma.push(s);
        t.push(line);
    }
    let mut basis: Vec<usize> = (0..m).map(|r| n_struct + r).collect();

    loop {
        // Reduced costs of structural columns: -(sum of rows with an artificial basic).
        let entering = (0..n_struct).find(|&j| {
            let d: BigRational = (0..m)
                .filter(|&r| basis[r] >= n_struct)
                .map(|r| t[r][j].clone())
                .sum();
            d.is_positive() && !basis.contains(&j)
        });
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            if t[r][j].is_positive() {
                let ratio = &t[r][width] / &t[r][j];
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => ratio < *lv || (ratio == *lv && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so a pivot row always exists.
        let Some((r, _)) = leave else { break };
        pivot(&mut t, r, j);
        basis[r] = j;
    }

    let objective: BigRational = (0..m).filter(|&r| basis[r] >= n_struct).map(|r| t[r][width].clone()).sum();
    if objective.is_zero() {
        let mut y = vec![BigRational::zero(); n];
        for (r, &b) in basis.iter().enumerate() {
            if b < n {
                y[b] += &t[r][width];
            } else if b < 2 * n {
                y[b - n] -= &t[r][width];
            }
        }
        Feasibility::Feasible { solution: y }
    } else {
        // pi = c_B^T B^-1; B^-1 sits in the artificial columns.
        let multipliers = (0..m)
            .map(|row| {
                let pi: BigRational = (0..m)
                    .filter(|&r| basis[r] >= n_struct)
                    .map(|r| t[r][n_struct + row].clone())
                    .sum();
                pi * &sigma[row]
            })
            .collect();
        Feasibility::Infeasible { multipliers }
    }
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, j: usize) {
    let p = t[r][j].clone();
    for x in t[r].iter_mut() {
        *x = &*x / &p;
    }
    let pivot_row = t[r].clone();
    for (k, row) in t.iter_mut().enumerate() {
        if k == r || row[j].is_zero() {
            continue;
        }
        let f = row[j].clone();
        for (x, pv) in row.iter_mut().zip(&pivot_row) {
            *x -= &f * pv;
        }
    }
}

/// Result of asking whether a quadratic penalty over a variable set exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub vars: Vec<VarId>,
    /// The relation restricted to `vars`.
    pub valid: ValidSet,
    pub system: LinearSystem,
    pub outcome: Feasibility,
    /// For a feasible system: the penalty read off the solution.
    pub witness: Option<Poly>,
}

impl InfeasibilityCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self.outcome, Feasibility::Feasible { .. })
    }

    /// Re-checks the outcome by direct substitution.
    pub fn recheck(&self) -> bool {
        match &self.outcome {
            Feasibility::Feasible { solution } => {
                self.system.satisfied_by(solution)
                    && self
                        .witness
                        .as_ref()
                        .and_then(|w| verify_gap(w, &self.valid).ok())
                        .is_some_and(|r| r.pass)
            }
            Feasibility::Infeasible { multipliers } => self.system.refuted_by(multipliers),
        }
    }
}

/// Sets up the coefficient system for a quadratic penalty over `allowed`
/// (linear and pairwise terms plus the valid value `v`) and decides it.
///
/// `valid` is projected onto `allowed` first, so ancilla columns of a
/// larger relation are existentially dropped.
pub fn prove_no_quadratic(valid: &ValidSet, allowed: &[VarId]) -> Result<InfeasibilityCertificate, PenaltyError> {
    if allowed.len() > MAX_PROOF_VARS {
        return Err(PenaltyError::TooManyVariables { count: allowed.len(), limit: MAX_PROOF_VARS });
    }
    let names: Vec<&str> = allowed.iter().map(VarId::name).collect();
    let valid = valid.project(&names)?;
    let n = allowed.len();

    let mut columns: Vec<String> = names.iter().map(|s| String::from(*s)).collect();
    let mut pairs = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            pairs.push((u, w));
            columns.push(format!("{}*{}", names[u], names[w]));
        }
    }
    columns.push(String::from("v"));

    let one = BigRational::one();
    let rows = (0..1u64 << n)
        .map(|m| {
            let bit = |k: usize| m >> k & 1 == 1;
            let mut coeffs: Vec<BigRational> = (0..n)
                .map(|k| if bit(k) { one.clone() } else { BigRational::zero() })
                .collect();
            coeffs.extend(pairs.iter().map(|&(u, w)| if bit(u) && bit(w) { one.clone() } else { BigRational::zero() }));
            coeffs.push(-one.clone());
            let assignment: Vec<String> = (0..n).map(|k| format!("{}={}", names[k], bit(k) as u8)).collect();
            let (sense, rhs, tag) = if valid.contains(m) {
                (RowSense::Eq, BigRational::zero(), "valid")
            } else {
                (RowSense::Ge, one.clone(), "invalid")
            };
            LinearRow { label: format!("{tag} {}", assignment.join(" ")), coeffs, sense, rhs }
        })
        .collect();
    let system = LinearSystem { columns, rows };
    let outcome = decide(&system);
    let witness = match &outcome {
        Feasibility::Feasible { solution } => {
            let mut p = Poly::with_vars(Domain::Boolean, allowed);
            for (k, v) in allowed.iter().enumerate() {
                p.add_term(core::slice::from_ref(v), to_coeff(&solution[k])?);
            }
            for (x, &(u, w)) in pairs.iter().enumerate() {
                p.add_term(&[allowed[u].clone(), allowed[w].clone()], to_coeff(&solution[n + x])?);
            }
            Some(p)
        }
        Feasibility::Infeasible { .. } => None,
    };
    Ok(InfeasibilityCertificate { vars: allowed.to_vec(), valid, system, outcome, witness })
}

fn to_coeff(x: &BigRational) -> Result<Coeff, PenaltyError> {
    let convert = |b: &BigInt| b.to_i64();
    match (convert(x.numer()), convert(x.denom())) {
        (Some(n), Some(d)) => Ok(Coeff::new(n, d)),
        _ => Err(PenaltyError::TooManyVariables { count: 0, limit: 0 }),
    }
}
