use alloc::vec::Vec;

use super::{EnergyModel, Method, Reduced, SolveResult, SolveStats, Solver, SolverError};
use crate::hamiltonian::QuboMatrix;

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;

/// Complete enumeration of the free variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhaustive {
    pub limit: usize,
    /// Number of independent ranges (rounded down to a power of two). The
    /// result does not depend on it.
    pub parts: usize,
}

impl Default for Exhaustive {
    fn default() -> Self {
        Self { limit: DEFAULT_EXHAUSTIVE_LIMIT, parts: 16 }
    }
}

impl Solver for Exhaustive {
    fn solve(&self, model: &QuboMatrix, clamps: &[(&str, bool)]) -> Result<SolveResult, SolverError> {
        let r = Reduced::new(model, clamps)?;
        let nf = r.nf();
        if nf > self.limit {
            return Err(SolverError::TooManyFreeVariables { count: nf, limit: self.limit });
        }
        let high = (usize::BITS - 1 - self.parts.max(1).leading_zeros()) as usize;
        let high = high.min(nf);
        let low = nf - high;
        let parts: Vec<u64> = (0..1u64 << high).collect();
        let best = run_parts(&parts, &|p| scan(&r, p << low, low)).ok_or(SolverError::Overflow)?;
        let mut states: Vec<u64> = best.1.iter().map(|&m| r.expand(m)).collect();
        states.sort_unstable();
        Ok(SolveResult {
            vars: model.vars().to_vec(),
            value: r.exact(best.0)?,
            ground_states: states,
            method: Method::Exhaustive,
            stats: SolveStats { states_visited: 1u64 << nf, ..SolveStats::default() },
        })
    }
}

pub fn solve_exhaustive(model: &impl EnergyModel, clamps: &[(&str, bool)]) -> Result<SolveResult, SolverError> {
    Exhaustive::default().solve(&model.to_qubo_form(), clamps)
}

type Best = (i128, Vec<u64>);

fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(match a.0.cmp(&b.0) {
            core::cmp::Ordering::Less => a,
            core::cmp::Ordering::Greater => b,
            core::cmp::Ordering::Equal => {
                let mut s = a.1;
                s.extend(b.1);
                (a.0, s)
            }
        }),
    }
}

#[cfg(feature = "parallel")]
fn run_parts(parts: &[u64], f: &(dyn Fn(u64) -> Best + Sync)) -> Option<Best> {
    use rayon::prelude::*;
    parts.par_iter().map(|&p| Some(f(p))).reduce(|| None, merge)
}

#[cfg(not(feature = "parallel"))]
fn run_parts(parts: &[u64], f: &dyn Fn(u64) -> Best) -> Option<Best> {
    parts.iter().map(|&p| Some(f(p))).fold(None, merge)
}

/// Gray-code walk over the low `low` bits with the high bits fixed by
/// `base`. Local fields make each step O(degree).
fn scan(r: &Reduced, base: u64, low: usize) -> Best {
    let nf = r.nf();
    let mut x: Vec<bool> = (0..nf).map(|k| base >> k & 1 == 1).collect();
    let mut field: Vec<i128> = (0..nf)
        .map(|k| r.lin[k] + r.nbr[k].iter().filter(|&&(w, _)| x[w]).map(|&(_, c)| c).sum::<i128>())
        .collect();
    let mut mask = base;
    let mut e = r.energy(base);
    let mut best = (e, alloc::vec![mask]);
    for g in 1..1u64 << low {
        let k = g.trailing_zeros() as usize;
        let d: i128 = if x[k] { -1 } else { 1 };
        e += d * field[k];
        x[k] = !x[k];
        mask ^= 1 << k;
        for &(w, c) in &r.nbr[k] {
            field[w] += d * c;
        }
        if e < best.0 {
            best.0 = e;
            best.1.clear();
            best.1.push(mask);
        } else if e == best.0 {
            best.1.push(mask);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::IsingModel;
    use crate::penalty::builtin_penalty;
    use crate::poly::{int, VarId};
    use crate::BoolOp;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn cnot() -> QuboMatrix {
        QuboMatrix::from_poly(builtin_penalty(BoolOp::Xor).unwrap().poly()).unwrap()
    }

    #[test]
    fn single_spin() {
        let m = IsingModel::new(vec![VarId::input("s")], vec![int(-1)], BTreeMap::new(), int(0)).unwrap();
        let r = solve_exhaustive(&m, &[]).unwrap();
        assert_eq!(r.value, int(-1));
        assert_eq!(r.ground_states, vec![1]);
    }

    #[test]
    fn cnot_clamped() {
        // target i = 0, control j = 1 -> result k = 1, a = 0
        let r = solve_exhaustive(&cnot(), &[("i", false), ("j", true)]).unwrap();
        assert_eq!(r.value, int(0));
        let s = r.unique().unwrap();
        assert_eq!(r.bit(s, "k"), Some(true));
        assert_eq!(r.bit(s, "a"), Some(false));
        assert_eq!(r.stats.states_visited, 4);
    }

    #[test]
    fn unclamped_cnot_has_four_ground_states() {
        let r = solve_exhaustive(&cnot(), &[]).unwrap();
        assert_eq!(r.value, int(0));
        assert_eq!(r.ground_states.len(), 4);
    }

    #[test]
    fn partitioning_is_invisible() {
        let q = cnot();
        let base = Exhaustive { limit: 24, parts: 1 }.solve(&q, &[]).unwrap();
        for parts in [2, 3, 4, 16, 64] {
            assert_eq!(Exhaustive { limit: 24, parts }.solve(&q, &[]).unwrap(), base);
        }
    }

    #[test]
    fn clamp_errors() {
        let q = cnot();
        assert_eq!(solve_exhaustive(&q, &[("zz", true)]), Err(SolverError::UnknownVariable("zz".into())));
        assert_eq!(
            solve_exhaustive(&q, &[("i", true), ("i", false)]),
            Err(SolverError::ConflictingClamp("i".into()))
        );
        assert!(matches!(
            Exhaustive { limit: 2, parts: 1 }.solve(&q, &[]),
            Err(SolverError::TooManyFreeVariables { count: 4, limit: 2 })
        ));
    }

    #[test]
    fn all_clamped() {
        let r = solve_exhaustive(&cnot(), &[("i", true), ("j", true), ("k", false), ("a", true)]).unwrap();
        assert_eq!(r.ground_states, vec![0b1011]);
        assert_eq!(r.value, cnot().value(0b1011));
    }
}
