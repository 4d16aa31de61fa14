use alloc::vec::Vec;

use num_traits::One;

use crate::logic::{ValidSet, MAX_ENUM_VARS};
use crate::poly::{Coeff, Poly, VarId};

use super::PenaltyError;

/// Per-assignment values are kept only up to this many variables.
pub const TABLE_LIMIT: usize = 20;

/// One enumerated assignment in a [`GapReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRow {
    pub mask: u64,
    pub value: Coeff,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// No assignment satisfies the relation.
    NoValidAssignment,
    /// A valid assignment evaluates to something other than `v`.
    ValidMismatch { mask: u64, value: Coeff, expected: Coeff },
    /// An invalid assignment evaluates below `v + 1`.
    InvalidTooLow { mask: u64, value: Coeff, threshold: Coeff },
}

impl Violation {
    pub fn mask(&self) -> Option<u64> {
        match self {
            Violation::NoValidAssignment => None,
            Violation::ValidMismatch { mask, .. } | Violation::InvalidTooLow { mask, .. } => Some(*mask),
        }
    }
}

/// Outcome of checking a penalty against its relation over every assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub vars: Vec<VarId>,
    /// All `2^n` rows in mask order; empty above [`TABLE_LIMIT`] variables.
    pub rows: Vec<GapRow>,
    /// Value of the first valid assignment.
    pub v: Option<Coeff>,
    pub min_invalid: Option<Coeff>,
    pub gap: Option<Coeff>,
    pub pass: bool,
    /// Lowest-mask violation, when the check fails.
    pub violation: Option<Violation>,
}

impl GapReport {
    /// Rows in descending binary order, first variable most significant.
    pub fn rows_descending(&self) -> Vec<&GapRow> {
        let n = self.vars.len();
        let mut rows: Vec<&GapRow> = self.rows.iter().collect();
        rows.sort_by_key(|r| core::cmp::Reverse(msb_first(r.mask, n)));
        rows
    }

    /// Descending rows with the valid ones moved to the front.
    pub fn rows_valid_first(&self) -> Vec<&GapRow> {
        let mut rows = self.rows_descending();
        rows.sort_by_key(|r| !r.valid);
        rows
    }

    pub fn bit(&self, row: &GapRow, var: usize) -> bool {
        row.mask >> var & 1 == 1
    }
}

fn msb_first(mask: u64, n: usize) -> u64 {
    (0..n).fold(0u64, |acc, k| (acc << 1) | (mask >> k & 1))
}

#[derive(Debug, Clone, Default)]
struct Partial {
    min_invalid: Option<(Coeff, u64)>,
    violation: Option<(u64, Violation)>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.min_invalid = match (self.min_invalid, other.min_invalid) {
            (Some(a), Some(b)) => Some(if (b.0, b.1) < (a.0, a.1) { b } else { a }),
            (a, b) => a.or(b),
        };
        self.violation = match (self.violation, other.violation) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Checks that every valid assignment shares one value `v` and every other
/// assignment scores at least `v + 1`.
pub fn verify_gap(poly: &Poly, valid: &ValidSet) -> Result<GapReport, PenaltyError> {
    verify_gap_partitioned(poly, valid, 1)
}

/// [`verify_gap`] with the mask space split into `parts` contiguous ranges
/// that are checked independently and merged. The result does not depend
/// on `parts`.
pub fn verify_gap_partitioned(poly: &Poly, valid: &ValidSet, parts: usize) -> Result<GapReport, PenaltyError> {
    let vars = valid.vars().to_vec();
    let n = vars.len();
    if n > MAX_ENUM_VARS {
        return Err(PenaltyError::TooManyVariables { count: n, limit: MAX_ENUM_VARS });
    }
    let eval = poly_on(poly, &vars)?;
    let total = 1u64 << n;

    let v = valid.masks().next().map(&eval);
    let Some(v) = v else {
        let rows = if n <= TABLE_LIMIT {
            (0..total).map(|m| GapRow { mask: m, value: eval(m), valid: false }).collect()
        } else {
            Vec::new()
        };
        let min_invalid = (0..total).map(&eval).min();
        return Ok(GapReport {
            vars,
            rows,
            v: None,
            min_invalid,
            gap: None,
            pass: false,
            violation: Some(Violation::NoValidAssignment),
        });
    };
    let threshold = v + Coeff::one();

    let scan = |lo: u64, hi: u64| -> Partial {
        let mut part = Partial::default();
        for m in lo..hi {
            let value = eval(m);
            if valid.contains(m) {
                if value != v && part.violation.is_none() {
                    part.violation = Some((m, Violation::ValidMismatch { mask: m, value, expected: v }));
                }
            } else {
                if part.min_invalid.is_none_or(|(best, _)| value < best) {
                    part.min_invalid = Some((value, m));
                }
                if value < threshold && part.violation.is_none() {
                    part.violation = Some((m, Violation::InvalidTooLow { mask: m, value, threshold }));
                }
            }
        }
        part
    };

    let parts = parts.clamp(1, total as usize);
    let step = total.div_ceil(parts as u64);
    let ranges: Vec<(u64, u64)> = (0..parts as u64)
        .map(|p| (p * step, ((p + 1) * step).min(total)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    let merged = run_ranges(&ranges, &scan);

    let rows = if n <= TABLE_LIMIT {
        (0..total).map(|m| GapRow { mask: m, value: eval(m), valid: valid.contains(m) }).collect()
    } else {
        Vec::new()
    };
    let min_invalid = merged.min_invalid.map(|(c, _)| c);
    let violation = merged.violation.map(|(_, viol)| viol);
    Ok(GapReport {
        vars,
        rows,
        v: Some(v),
        min_invalid,
        gap: min_invalid.map(|mi| mi - v),
        pass: violation.is_none(),
        violation,
    })
}

#[cfg(feature = "parallel")]
fn run_ranges(ranges: &[(u64, u64)], scan: &(dyn Fn(u64, u64) -> Partial + Sync)) -> Partial {
    use rayon::prelude::*;
    ranges
        .par_iter()
        .map(|&(lo, hi)| scan(lo, hi))
        .reduce(Partial::default, Partial::merge)
}

#[cfg(not(feature = "parallel"))]
fn run_ranges(ranges: &[(u64, u64)], scan: &dyn Fn(u64, u64) -> Partial) -> Partial {
    ranges
        .iter()
        .map(|&(lo, hi)| scan(lo, hi))
        .fold(Partial::default(), Partial::merge)
}

/// Exact evaluator of `poly` over masks of `vars` (bit k = `vars[k]`).
///
/// Coefficients are scaled to integers so the inner loop avoids rational
/// normalisation.
pub(crate) fn poly_on(poly: &Poly, vars: &[VarId]) -> Result<impl Fn(u64) -> Coeff + Sync, PenaltyError> {
    let mut pos = Vec::with_capacity(poly.vars().len());
    for v in poly.vars() {
        pos.push(vars.iter().position(|w| w.name() == v.name()));
    }
    let denom = poly
        .index_terms()
        .map(|(_, c)| *c.denom())
        .chain(core::iter::once(*poly.offset().denom()))
        .fold(1i64, num_integer::lcm);
    let mut terms: Vec<(u64, i128)> = Vec::with_capacity(poly.num_terms());
    for (key, c) in poly.index_terms() {
        let mut mask = 0u64;
        for &i in key {
            match pos[i] {
                Some(p) => mask |= 1 << p,
                None => return Err(PenaltyError::UnknownVariable(poly.vars()[i].name().into())),
            }
        }
        terms.push((mask, scale(c, denom)));
    }
    let offset = scale(poly.offset(), denom);
    let spin = poly.domain() == crate::poly::Domain::Spin;
    Ok(move |m: u64| {
        let mut total = offset;
        for &(t, c) in &terms {
            if spin {
                if (t & !m).count_ones().is_multiple_of(2) {
                    total += c;
                } else {
                    total -= c;
                }
            } else if t & m == t {
                total += c;
            }
        }
        Coeff::new(total as i64, denom)
    })
}

fn scale(c: Coeff, denom: i64) -> i128 {
    *c.numer() as i128 * (denom / *c.denom()) as i128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{relation_of, BoolOp};
    use crate::poly::{int, Domain, Expr};
    use alloc::vec;

    #[test]
    fn not_penalty_table() {
        let (x, z) = (VarId::input("x"), VarId::output("z"));
        let p = (2 * Expr::var(&x) * Expr::var(&z) - Expr::var(&x) - Expr::var(&z)).expand(Domain::Boolean);
        let valid = relation_of(BoolOp::Not, &z, core::slice::from_ref(&x), &[]).unwrap();
        let r = verify_gap(&p, &valid).unwrap();
        assert!(r.pass);
        assert_eq!(r.v, Some(int(-1)));
        assert_eq!(r.min_invalid, Some(int(0)));
        let values: Vec<Coeff> = r.rows_valid_first().iter().map(|row| row.value).collect();
        assert_eq!(values, vec![int(-1), int(-1), int(0), int(0)]);
    }

    #[test]
    fn empty_valid_set_fails() {
        let x = VarId::input("x");
        let p = Expr::var(&x).expand(Domain::Boolean);
        let vs = ValidSet::from_predicate(vec![x], |_| false).unwrap();
        let r = verify_gap(&p, &vs).unwrap();
        assert!(!r.pass);
        assert_eq!(r.violation, Some(Violation::NoValidAssignment));
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let p = Expr::var(&VarId::input("q")).expand(Domain::Boolean);
        let vs = ValidSet::from_predicate(vec![VarId::input("x")], |_| true).unwrap();
        assert!(matches!(verify_gap(&p, &vs), Err(PenaltyError::UnknownVariable(_))));
    }

    #[test]
    fn partitioning_does_not_change_the_report() {
        let (i, j, k) = (VarId::input("i"), VarId::input("j"), VarId::output("k"));
        let e = Expr::var(&i) * Expr::var(&j) - 2 * (Expr::var(&i) + Expr::var(&j)) * Expr::var(&k) + 3 * Expr::var(&k);
        let p = e.expand(Domain::Boolean);
        let vs = relation_of(BoolOp::And, &k, &[i, j], &[]).unwrap();
        let base = verify_gap(&p, &vs).unwrap();
        for parts in [2, 3, 5, 8, 64] {
            assert_eq!(verify_gap_partitioned(&p, &vs, parts).unwrap(), base);
        }
        // And a failing one: the reported violation is the lowest mask.
        let bad = p.scaled(int(-1));
        let base = verify_gap(&bad, &vs).unwrap();
        assert!(!base.pass);
        for parts in [2, 3, 8] {
            assert_eq!(verify_gap_partitioned(&bad, &vs, parts).unwrap(), base);
        }
    }
}
