//! Ground-state search over QUBO / Ising models.
//!
//! Both solvers work on the QUBO form (an Ising model is converted first,
//! which preserves every energy exactly) and report states as masks over
//! the model's variable order, bit `k` = variable `k` = spin `+1`.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::hamiltonian::{IsingModel, QuboMatrix};
use crate::poly::{Coeff, VarId};

mod anneal;
mod exhaustive;

pub use anneal::{solve_anneal, AnnealParams, Annealer};
pub use exhaustive::{solve_exhaustive, Exhaustive, DEFAULT_EXHAUSTIVE_LIMIT};

/// Largest model the annealer accepts (states are `u64` masks).
pub const MAX_MODEL_VARS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{count} free variables exceed the exhaustive limit of {limit}; use the annealer")]
    TooManyFreeVariables { count: usize, limit: usize },
    #[error("model has {count} variables, at most {limit} are supported")]
    ModelTooLarge { count: usize, limit: usize },
    #[error("clamped variable `{0}` is not in the model")]
    UnknownVariable(String),
    #[error("variable `{0}` is clamped to both 0 and 1")]
    ConflictingClamp(String),
    #[error("coefficient magnitude overflows the integer energy form")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Anneal,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Anneal => "anneal",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub states_visited: u64,
    pub sweeps: u64,
    pub restarts: u64,
    /// Restarts whose best state reached the reported value.
    pub hits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub vars: Vec<VarId>,
    /// Exact energy of the reported states, offset included.
    pub value: Coeff,
    /// Sorted minimizers. Complete for exhaustive search.
    pub ground_states: Vec<u64>,
    pub method: Method,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn unique(&self) -> Option<u64> {
        match self.ground_states.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn bit(&self, state: u64, name: &str) -> Option<bool> {
        self.vars.iter().position(|v| v.name() == name).map(|k| state >> k & 1 == 1)
    }

    /// Distinct values of `names` over all ground states, as masks over
    /// `names` (bit `k` = `names[k]`).
    pub fn projected(&self, names: &[&str]) -> Vec<u64> {
        let idx: Vec<Option<usize>> =
            names.iter().map(|n| self.vars.iter().position(|v| v.name() == *n)).collect();
        let mut out: Vec<u64> = self
            .ground_states
            .iter()
            .map(|&s| {
                idx.iter()
                    .enumerate()
                    .filter(|(_, i)| i.is_some_and(|i| s >> i & 1 == 1))
                    .fold(0u64, |m, (k, _)| m | 1 << k)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Anything that can be minimized: converted to its QUBO form.
pub trait EnergyModel {
    fn to_qubo_form(&self) -> QuboMatrix;
}

impl EnergyModel for QuboMatrix {
    fn to_qubo_form(&self) -> QuboMatrix {
        self.clone()
    }
}

impl EnergyModel for IsingModel {
    fn to_qubo_form(&self) -> QuboMatrix {
        self.to_qubo()
    }
}

/// A ground-state search strategy. Clamps are hard: clamped variables are
/// fixed, not biased.
pub trait Solver {
    fn solve(&self, model: &QuboMatrix, clamps: &[(&str, bool)]) -> Result<SolveResult, SolverError>;

    fn solve_ising(&self, model: &IsingModel, clamps: &[(&str, bool)]) -> Result<SolveResult, SolverError> {
        self.solve(&model.to_qubo(), clamps)
    }
}

/// Integer form of a QUBO with clamped variables folded in.
///
/// Energy = (offset + sum lin_k x_k + sum_{k<w} b x_k x_w) / denom over the
/// free variables.
#[derive(Debug, Clone)]
pub(crate) struct Reduced {
    /// Model index of free variable `k`.
    pub free: Vec<usize>,
    pub fixed_mask: u64,
    pub lin: Vec<i128>,
    pub nbr: Vec<Vec<(usize, i128)>>,
    pub offset: i128,
    pub denom: i64,
}

impl Reduced {
    pub fn new(q: &QuboMatrix, clamps: &[(&str, bool)]) -> Result<Self, SolverError> {
        let n = q.len();
        if n > MAX_MODEL_VARS {
            return Err(SolverError::ModelTooLarge { count: n, limit: MAX_MODEL_VARS });
        }
        let mut fixed: Vec<Option<bool>> = alloc::vec![None; n];
        for &(name, bit) in clamps {
            let i = q.index_of(name).map_err(|_| SolverError::UnknownVariable(name.into()))?;
            match fixed[i] {
                Some(b) if b != bit => return Err(SolverError::ConflictingClamp(name.into())),
                _ => fixed[i] = Some(bit),
            }
        }
        let denom = q
            .linear()
            .iter()
            .chain(q.quadratic().values())
            .chain(core::iter::once(&q.offset()))
            .try_fold(1i64, |acc, c| {
                let l = num_integer::lcm(acc, *c.denom());
                (l > 0).then_some(l)
            })
            .ok_or(SolverError::Overflow)?;
        let scale = |c: &Coeff| *c.numer() as i128 * (denom / *c.denom()) as i128;

        let free: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
        let mut pos = alloc::vec![usize::MAX; n];
        for (k, &i) in free.iter().enumerate() {
            pos[i] = k;
        }
        let on = |i: usize| fixed[i] == Some(true);
        let fixed_mask = (0..n).filter(|&i| on(i)).fold(0u64, |m, i| m | 1 << i);

        let mut offset = scale(&q.offset());
        let mut lin: Vec<i128> = free.iter().map(|&i| scale(&q.linear()[i])).collect();
        for i in (0..n).filter(|&i| on(i)) {
            offset += scale(&q.linear()[i]);
        }
        let mut nbr = alloc::vec![Vec::new(); free.len()];
        for (&(u, w), c) in q.quadratic() {
            let c = scale(c);
            match (fixed[u], fixed[w]) {
                (None, None) => {
                    nbr[pos[u]].push((pos[w], c));
                    nbr[pos[w]].push((pos[u], c));
                }
                (None, Some(true)) => lin[pos[u]] += c,
                (Some(true), None) => lin[pos[w]] += c,
                (Some(true), Some(true)) => offset += c,
                _ => {}
            }
        }
        Ok(Self { free, fixed_mask, lin, nbr, offset, denom })
    }

    pub fn nf(&self) -> usize {
        self.free.len()
    }

    /// Full-model mask for a free-variable mask.
    pub fn expand(&self, free_mask: u64) -> u64 {
        self.free
            .iter()
            .enumerate()
            .filter(|(k, _)| free_mask >> k & 1 == 1)
            .fold(self.fixed_mask, |m, (_, &i)| m | 1 << i)
    }

    /// Scaled energy of a free-variable mask, from scratch.
    pub fn energy(&self, free_mask: u64) -> i128 {
        let bit = |k: usize| free_mask >> k & 1 == 1;
        let mut e = self.offset;
        for k in (0..self.nf()).filter(|&k| bit(k)) {
            e += self.lin[k];
            e += self.nbr[k].iter().filter(|&&(w, _)| w > k && bit(w)).map(|&(_, c)| c).sum::<i128>();
        }
        e
    }

    pub fn exact(&self, scaled: i128) -> Result<Coeff, SolverError> {
        i64::try_from(scaled).map(|n| Coeff::new(n, self.denom)).map_err(|_| SolverError::Overflow)
    }
}
