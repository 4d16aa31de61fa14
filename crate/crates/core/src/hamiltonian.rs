//! QUBO and Ising coefficient forms.
//!
//! Both forms store each coupling once, keyed by `(row, col)` with
//! `row < col`. The symmetric display used for printed Hamiltonians writes
//! every coupling into both mirror positions, but the energy counts it once:
//!
//! ```text
//! E(x) = offset + sum_i q_ii x_i + sum_{i<j} q_ij x_i x_j          (QUBO)
//! E(s) = offset + sum_i h_i s_i  + sum_{i<j} J_ij s_i s_j          (Ising)
//! ```
//!
//! with `s = 2x - 1`. Masks use bit `k` for variable `k`; in the Ising view
//! a set bit means spin `+1`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::poly::{int, Coeff, Domain, Poly, PolyError, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamiltonianError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` appears twice")]
    DuplicateVariable(String),
    #[error("coupling ({0}, {1}) is not an upper-triangular pair of distinct variables")]
    BadCoupling(usize, usize),
}

/// QUBO over `{0,1}` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuboMatrix {
    vars: Vec<VarId>,
    linear: Vec<Coeff>,
    quad: BTreeMap<(usize, usize), Coeff>,
    offset: Coeff,
}

/// Ising model over `{-1,+1}` spins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingModel {
    vars: Vec<VarId>,
    h: Vec<Coeff>,
    j: BTreeMap<(usize, usize), Coeff>,
    offset: Coeff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixStyle {
    /// Each coupling mirrored into both positions.
    Symmetric,
    /// Each coupling once, above the diagonal.
    Upper,
}

fn check_vars(vars: &[VarId]) -> Result<(), HamiltonianError> {
    for (k, v) in vars.iter().enumerate() {
        if vars[..k].iter().any(|w| w.name() == v.name()) {
            return Err(HamiltonianError::DuplicateVariable(v.name().into()));
        }
    }
    Ok(())
}

fn check_pairs(n: usize, pairs: &BTreeMap<(usize, usize), Coeff>) -> Result<(), HamiltonianError> {
    match pairs.keys().find(|&&(r, c)| r >= c || c >= n) {
        Some(&(r, c)) => Err(HamiltonianError::BadCoupling(r, c)),
        None => Ok(()),
    }
}

fn insert_pair(map: &mut BTreeMap<(usize, usize), Coeff>, u: usize, w: usize, c: Coeff) {
    let key = if u < w { (u, w) } else { (w, u) };
    let sum = map.get(&key).copied().unwrap_or_else(Coeff::zero) + c;
    if sum.is_zero() {
        map.remove(&key);
    } else {
        map.insert(key, sum);
    }
}

fn split_quadratic(p: &Poly) -> (Vec<Coeff>, BTreeMap<(usize, usize), Coeff>) {
    let mut linear = vec![Coeff::zero(); p.vars().len()];
    let mut quad = BTreeMap::new();
    for (key, c) in p.index_terms() {
        match *key {
            [i] => linear[i] += c,
            [u, w] => insert_pair(&mut quad, u, w, c),
            _ => unreachable!("degree checked by caller"),
        }
    }
    (linear, quad)
}

fn assemble(domain: Domain, vars: &[VarId], diag: &[Coeff], pairs: &BTreeMap<(usize, usize), Coeff>, offset: Coeff) -> Poly {
    let mut p = Poly::with_vars(domain, vars);
    for (v, c) in vars.iter().zip(diag) {
        p.add_term(core::slice::from_ref(v), *c);
    }
    for (&(u, w), c) in pairs {
        p.add_term(&[vars[u].clone(), vars[w].clone()], *c);
    }
    p.add_constant(offset);
    p
}

fn index_of(vars: &[VarId], name: &str) -> Result<usize, HamiltonianError> {
    vars.iter()
        .position(|v| v.name() == name)
        .ok_or_else(|| HamiltonianError::UnknownVariable(name.into()))
}

impl QuboMatrix {
    pub fn new(
        vars: Vec<VarId>,
        linear: Vec<Coeff>,
        quad: BTreeMap<(usize, usize), Coeff>,
        offset: Coeff,
    ) -> Result<Self, HamiltonianError> {
        check_vars(&vars)?;
        assert_eq!(vars.len(), linear.len(), "one linear coefficient per variable");
        check_pairs(vars.len(), &quad)?;
        let quad = quad.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self { vars, linear, quad, offset })
    }

    /// Reads a quadratic Boolean polynomial. Variable order is the
    /// polynomial's registry order, unused variables included.
    pub fn from_poly(p: &Poly) -> Result<Self, HamiltonianError> {
        if p.domain() != Domain::Boolean {
            return Err(PolyError::WrongDomain { expected: Domain::Boolean }.into());
        }
        if p.degree() > 2 {
            return Err(PolyError::DegreeTooHigh { degree: p.degree(), max: 2 }.into());
        }
        let (linear, quad) = split_quadratic(p);
        Ok(Self { vars: p.vars().to_vec(), linear, quad, offset: p.offset() })
    }

    pub fn to_poly(&self) -> Poly {
        assemble(Domain::Boolean, &self.vars, &self.linear, &self.quad, self.offset)
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn linear(&self) -> &[Coeff] {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), Coeff> {
        &self.quad
    }

    pub fn offset(&self) -> Coeff {
        self.offset
    }

    pub fn without_offset(&self) -> Self {
        Self { offset: Coeff::zero(), ..self.clone() }
    }

    /// Entry of the symmetric display.
    pub fn entry(&self, r: usize, c: usize) -> Coeff {
        if r == c {
            self.linear[r]
        } else {
            self.quad.get(&(r.min(c), r.max(c))).copied().unwrap_or_else(Coeff::zero)
        }
    }

    pub fn index_of(&self, name: &str) -> Result<usize, HamiltonianError> {
        index_of(&self.vars, name)
    }

    pub fn value(&self, mask: u64) -> Coeff {
        let bit = |k: usize| mask >> k & 1 == 1;
        let mut total = self.offset;
        for (k, c) in self.linear.iter().enumerate() {
            if bit(k) {
                total += c;
            }
        }
        for (&(u, w), c) in &self.quad {
            if bit(u) && bit(w) {
                total += c;
            }
        }
        total
    }

    /// Substitutes `x = (s + 1) / 2`.
    pub fn to_ising(&self) -> IsingModel {
        let half = Coeff::new(1, 2);
        let quarter = Coeff::new(1, 4);
        let mut h: Vec<Coeff> = self.linear.iter().map(|c| c * half).collect();
        let mut offset = self.offset + self.linear.iter().fold(Coeff::zero(), |a, c| a + c * half);
        let mut j = BTreeMap::new();
        for (&(u, w), c) in &self.quad {
            let q = c * quarter;
            insert_pair(&mut j, u, w, q);
            h[u] += q;
            h[w] += q;
            offset += q;
        }
        IsingModel { vars: self.vars.clone(), h, j, offset }
    }

    pub fn emit(&self, style: MatrixStyle) -> String {
        emit_matrix(&self.vars, &self.linear, &self.quad, style)
    }
}

impl IsingModel {
    pub fn new(
        vars: Vec<VarId>,
        h: Vec<Coeff>,
        j: BTreeMap<(usize, usize), Coeff>,
        offset: Coeff,
    ) -> Result<Self, HamiltonianError> {
        check_vars(&vars)?;
        assert_eq!(vars.len(), h.len(), "one field per spin");
        check_pairs(vars.len(), &j)?;
        let j = j.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self { vars, h, j, offset })
    }

    /// Reads a quadratic spin polynomial.
    pub fn from_poly(p: &Poly) -> Result<Self, HamiltonianError> {
        if p.domain() != Domain::Spin {
            return Err(PolyError::WrongDomain { expected: Domain::Spin }.into());
        }
        if p.degree() > 2 {
            return Err(PolyError::DegreeTooHigh { degree: p.degree(), max: 2 }.into());
        }
        let (h, j) = split_quadratic(p);
        Ok(Self { vars: p.vars().to_vec(), h, j, offset: p.offset() })
    }

    pub fn to_poly(&self) -> Poly {
        assemble(Domain::Spin, &self.vars, &self.h, &self.j, self.offset)
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn h(&self) -> &[Coeff] {
        &self.h
    }

    pub fn j(&self) -> &BTreeMap<(usize, usize), Coeff> {
        &self.j
    }

    pub fn offset(&self) -> Coeff {
        self.offset
    }

    pub fn index_of(&self, name: &str) -> Result<usize, HamiltonianError> {
        index_of(&self.vars, name)
    }

    /// Energy with bit `k` of `mask` set meaning spin `k` is `+1`.
    pub fn value(&self, mask: u64) -> Coeff {
        let s = |k: usize| if mask >> k & 1 == 1 { int(1) } else { int(-1) };
        let mut total = self.offset;
        for (k, c) in self.h.iter().enumerate() {
            total += c * s(k);
        }
        for (&(u, w), c) in &self.j {
            total += c * s(u) * s(w);
        }
        total
    }

    /// Substitutes `s = 2x - 1`.
    pub fn to_qubo(&self) -> QuboMatrix {
        let mut linear: Vec<Coeff> = self.h.iter().map(|c| c * int(2)).collect();
        let mut offset = self.offset - self.h.iter().fold(Coeff::zero(), |a, c| a + c);
        let mut quad = BTreeMap::new();
        for (&(u, w), c) in &self.j {
            insert_pair(&mut quad, u, w, c * int(4));
            linear[u] -= c * int(2);
            linear[w] -= c * int(2);
            offset += c;
        }
        QuboMatrix { vars: self.vars.clone(), linear, quad, offset }
    }

    /// `sum_j |J_ij| + |h_i|` for spin `i`.
    pub fn row_weight(&self, i: usize) -> Coeff {
        self.j
            .iter()
            .filter(|(&(u, w), _)| u == i || w == i)
            .fold(self.h[i].abs(), |a, (_, c)| a + c.abs())
    }

    pub fn emit(&self, style: MatrixStyle) -> String {
        emit_matrix(&self.vars, &self.h, &self.j, style)
    }
}

/// A field bias pinning one spin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clamp {
    pub var: String,
    /// `true` pins the spin to `+1` (bit 1).
    pub bit: bool,
    pub magnitude: Coeff,
}

impl Clamp {
    /// The field added to `h`: negative pins `+1`, positive pins `-1`.
    pub fn field(&self) -> Coeff {
        if self.bit {
            -self.magnitude
        } else {
            self.magnitude
        }
    }
}

/// Clamp for `var` with magnitude `sum_j |J_ij| + |h_i| + 1`.
///
/// Flipping the clamped spin against its clamp changes the energy by at
/// least `2 (M - |h_i| - sum_j |J_ij|) = 2 > 0`, whatever the other spins
/// are, so every ground state honours it.
pub fn clamp_for(m: &IsingModel, var: &str, bit: bool) -> Result<Clamp, HamiltonianError> {
    let i = m.index_of(var)?;
    Ok(Clamp { var: var.into(), bit, magnitude: m.row_weight(i) + int(1) })
}

pub fn apply_clamp(m: &IsingModel, var: &str, bit: bool) -> Result<IsingModel, HamiltonianError> {
    let c = clamp_for(m, var, bit)?;
    let i = m.index_of(var)?;
    let mut out = m.clone();
    out.h[i] += c.field();
    Ok(out)
}

/// Applies clamps one at a time; each magnitude is computed on the model
/// as clamped so far, so later clamps dominate earlier fields too.
pub fn apply_clamps(m: &IsingModel, clamps: &[(&str, bool)]) -> Result<IsingModel, HamiltonianError> {
    clamps.iter().try_fold(m.clone(), |acc, &(v, b)| apply_clamp(&acc, v, b))
}

/// Renders a coefficient matrix as a tab-separated table.
///
/// The first line holds the variable names, each row starts with its
/// variable name, and zero entries are left blank.
pub fn emit_matrix(
    vars: &[VarId],
    diag: &[Coeff],
    pairs: &BTreeMap<(usize, usize), Coeff>,
    style: MatrixStyle,
) -> String {
    let n = vars.len();
    let mut out = String::new();
    for v in vars {
        out.push('\t');
        out.push_str(v.name());
    }
    out.push('\n');
    for r in 0..n {
        out.push_str(vars[r].name());
        for c in 0..n {
            out.push('\t');
            let e = if r == c {
                diag[r]
            } else if style == MatrixStyle::Upper && c < r {
                Coeff::zero()
            } else {
                pairs.get(&(r.min(c), r.max(c))).copied().unwrap_or_else(Coeff::zero)
            };
            if !e.is_zero() {
                let _ = write!(out, "{e}");
            }
        }
        out.push('\n');
    }
    out
}

impl core::fmt::Display for QuboMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.emit(MatrixStyle::Symmetric))?;
        if !self.offset.is_zero() {
            write!(f, "offset\t{}", self.offset)?;
        }
        Ok(())
    }
}
