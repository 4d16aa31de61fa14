//! Penalty-function compiler and verifier for quadratic binary optimization.
//!
//! The crate turns Boolean operations, integer constraint equations and
//! inequalities, and reversible gates (CNOT, Toffoli, Fredkin) into quadratic
//! penalty functions, lays them out as QUBO / Ising Hamiltonians, and checks
//! every construction by exhaustive ground-state analysis.
//!
//! All penalty arithmetic is exact ([`Coeff`] is a 64-bit rational). Floating
//! point only appears in the Hadamard field transform and inside the
//! simulated annealer, whose results are re-scored exactly before they are
//! reported.
//!
//! The crate is `no_std` and only needs `alloc`. Enable the `parallel`
//! feature to spread exhaustive enumeration and annealing restarts over a
//! rayon thread pool; results are identical either way.

#![no_std]

extern crate alloc;

pub mod gates;
pub mod hamiltonian;
pub mod logic;
pub mod penalty;
pub mod pipeline;
pub mod poly;
pub mod solver;

pub use gates::{FieldPair, GateRole, GateSpec};
pub use hamiltonian::{IsingModel, QuboMatrix};
pub use logic::{BoolOp, ValidSet};
pub use penalty::{GapReport, Penalty};
pub use poly::{Assignment, Coeff, Domain, Expr, Poly, VarId, VarKind};
pub use solver::{SolveResult, Solver};
