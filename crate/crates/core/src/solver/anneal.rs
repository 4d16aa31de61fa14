use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EnergyModel, Method, Reduced, SolveResult, SolveStats, Solver, SolverError};
use crate::hamiltonian::QuboMatrix;

/// Metropolis single-flip annealing on a geometric temperature schedule.
///
/// Restart `k` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `k`,
/// so results depend only on the parameters, not on thread scheduling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealParams {
    pub sweeps: usize,
    pub t_initial: f64,
    pub t_final: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self { sweeps: 500, t_initial: 4.0, t_final: 0.05, restarts: 100, seed: 0 }
    }
}

impl AnnealParams {
    /// Ratio between consecutive sweep temperatures.
    pub fn factor(&self) -> f64 {
        if self.sweeps <= 1 {
            1.0
        } else {
            libm::pow(self.t_final / self.t_initial, 1.0 / (self.sweeps - 1) as f64)
        }
    }

    /// Temperature of sweep `k`. A single sweep runs at `t_final`.
    pub fn temperature(&self, k: usize) -> f64 {
        if self.sweeps <= 1 {
            self.t_final
        } else {
            self.t_initial * libm::pow(self.factor(), k as f64)
        }
    }

    fn valid(&self) -> bool {
        self.t_initial.is_finite() && self.t_final > 0.0 && (self.sweeps <= 1 || self.t_final < self.t_initial)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Annealer {
    pub params: AnnealParams,
}

impl Solver for Annealer {
    fn solve(&self, model: &QuboMatrix, clamps: &[(&str, bool)]) -> Result<SolveResult, SolverError> {
        let p = self.params;
        assert!(p.valid(), "annealing temperatures must be positive and strictly decreasing");
        let r = Reduced::new(model, clamps)?;
        let restarts: Vec<u64> = (0..p.restarts.max(1) as u64).collect();
        let mut bests: Vec<(i128, u64)> = run_restarts(&restarts, &|k| restart(&r, &p, k));
        bests.sort_unstable();
        let value = bests[0].0;
        let mut states: Vec<u64> = bests.iter().filter(|b| b.0 == value).map(|b| r.expand(b.1)).collect();
        let hits = states.len() as u64;
        states.sort_unstable();
        states.dedup();
        Ok(SolveResult {
            vars: model.vars().to_vec(),
            value: r.exact(value)?,
            ground_states: states,
            method: Method::Anneal,
            stats: SolveStats {
                states_visited: 0,
                sweeps: (p.sweeps as u64) * restarts.len() as u64,
                restarts: restarts.len() as u64,
                hits,
            },
        })
    }
}

pub fn solve_anneal(
    model: &impl EnergyModel,
    clamps: &[(&str, bool)],
    params: AnnealParams,
) -> Result<SolveResult, SolverError> {
    Annealer { params }.solve(&model.to_qubo_form(), clamps)
}

#[cfg(feature = "parallel")]
fn run_restarts(ks: &[u64], f: &(dyn Fn(u64) -> (i128, u64) + Sync)) -> Vec<(i128, u64)> {
    use rayon::prelude::*;
    ks.par_iter().map(|&k| f(k)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_restarts(ks: &[u64], f: &dyn Fn(u64) -> (i128, u64)) -> Vec<(i128, u64)> {
    ks.iter().map(|&k| f(k)).collect()
}

/// One annealing run followed by a greedy quench; returns the best state
/// seen, re-scored exactly.
fn restart(r: &Reduced, p: &AnnealParams, k: u64) -> (i128, u64) {
    let nf = r.nf();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(k);
    if nf == 0 {
        return (r.energy(0), 0);
    }
    let scale = r.denom as f64;
    let mut x: Vec<bool> = (0..nf).map(|_| rng.gen()).collect();
    let mut field: Vec<f64> = (0..nf)
        .map(|k| (r.lin[k] + r.nbr[k].iter().filter(|&&(w, _)| x[w]).map(|&(_, c)| c).sum::<i128>()) as f64 / scale)
        .collect();
    let to_mask = |x: &[bool]| x.iter().enumerate().filter(|(_, b)| **b).fold(0u64, |m, (k, _)| m | 1 << k);
    let flip = |x: &mut [bool], field: &mut [f64], k: usize| {
        let d = if x[k] { -1.0 } else { 1.0 };
        x[k] = !x[k];
        for &(w, c) in &r.nbr[k] {
            field[w] += d * c as f64 / scale;
        }
    };
    let mut energy = r.energy(to_mask(&x)) as f64 / scale;
    let mut best = (energy, to_mask(&x));

    for sweep in 0..p.sweeps {
        let t = p.temperature(sweep);
        for k in 0..nf {
            let delta = if x[k] { -field[k] } else { field[k] };
            if delta <= 0.0 || rng.gen::<f64>() < libm::exp(-delta / t) {
                flip(&mut x, &mut field, k);
                energy += delta;
                if energy < best.0 {
                    best = (energy, to_mask(&x));
                }
            }
        }
    }

    // Quench from the best state: take strictly improving flips until none remain.
    let mut x: Vec<bool> = (0..nf).map(|k| best.1 >> k & 1 == 1).collect();
    let mut field: Vec<f64> = (0..nf)
        .map(|k| (r.lin[k] + r.nbr[k].iter().filter(|&&(w, _)| x[w]).map(|&(_, c)| c).sum::<i128>()) as f64 / scale)
        .collect();
    let mut exact = r.energy(best.1);
    loop {
        let mut improved = false;
        for k in 0..nf {
            let delta = if x[k] { -field[k] } else { field[k] };
            if delta < 0.0 {
                let m = to_mask(&x) ^ 1 << k;
                let e = r.energy(m);
                if e < exact {
                    flip(&mut x, &mut field, k);
                    exact = e;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    (exact, to_mask(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::IsingModel;
    use crate::penalty::builtin_penalty;
    use crate::poly::{int, VarId};
    use crate::solver::solve_exhaustive;
    use crate::BoolOp;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn cnot() -> QuboMatrix {
        QuboMatrix::from_poly(builtin_penalty(BoolOp::Xor).unwrap().poly()).unwrap()
    }

    #[test]
    fn schedule_is_geometric_and_decreasing() {
        let p = AnnealParams { sweeps: 5, t_initial: 16.0, t_final: 1.0, restarts: 1, seed: 0 };
        assert!((p.factor() - 0.5).abs() < 1e-12);
        assert!((p.temperature(4) - 1.0).abs() < 1e-12);
        assert!((0..4).all(|k| p.temperature(k + 1) < p.temperature(k)));
    }

    #[test]
    fn independent_spins_in_one_sweep() {
        let vars: Vec<VarId> = (0..6).map(|k| VarId::input(alloc::format!("s{k}"))).collect();
        let h = vec![int(-1), int(2), int(-3), int(1), int(-1), int(5)];
        let m = IsingModel::new(vars, h, BTreeMap::new(), int(0)).unwrap();
        let params = AnnealParams { sweeps: 1, t_initial: 1.0, t_final: 1e-9, restarts: 1, seed: 7 };
        let r = solve_anneal(&m, &[], params).unwrap();
        assert_eq!(r.ground_states, vec![0b010101]);
        assert_eq!(r.value, int(-13));
    }

    #[test]
    fn never_beats_exhaustive_and_is_reproducible() {
        let q = cnot();
        let exact = solve_exhaustive(&q, &[("i", true)]).unwrap();
        let p = AnnealParams { restarts: 8, sweeps: 50, ..AnnealParams::default() };
        let a = solve_anneal(&q, &[("i", true)], p).unwrap();
        assert!(a.value >= exact.value);
        assert_eq!(a, solve_anneal(&q, &[("i", true)], p).unwrap());
        assert!(a.ground_states.iter().all(|s| s & 1 == 1));
    }

    #[test]
    #[should_panic(expected = "strictly decreasing")]
    fn rising_schedule_rejected() {
        let p = AnnealParams { t_initial: 1.0, t_final: 2.0, ..AnnealParams::default() };
        let _ = solve_anneal(&cnot(), &[], p);
    }
}
