//! Exact multilinear polynomials over binary or spin variables.
//!
//! A [`Poly`] keeps an ordered variable registry and one coefficient per
//! variable set. Products are reduced as they are formed: `x * x = x` over
//! `{0, 1}` and `s * s = 1` over `{-1, +1}`, so stored polynomials are always
//! multilinear. The registry order is the order variables were first added
//! and drives both printing and matrix layout.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact coefficient type used throughout the crate.
pub type Coeff = Ratio<i64>;

/// Shorthand for an integer coefficient.
pub fn int(n: i64) -> Coeff {
    Coeff::from_integer(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable `{0}` is not assigned")]
    MissingVariable(String),
    #[error("polynomial has degree {degree}, at most {max} is supported here")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("expected a polynomial over {expected:?} variables")]
    WrongDomain { expected: Domain },
}

/// Role of a variable inside a penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Input,
    Output,
    Ancilla,
    Slack,
}

impl VarKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VarKind::Input => "input",
            VarKind::Output => "output",
            VarKind::Ancilla => "ancilla",
            VarKind::Slack => "slack",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "input" => Some(VarKind::Input),
            "output" => Some(VarKind::Output),
            "ancilla" => Some(VarKind::Ancilla),
            "slack" => Some(VarKind::Slack),
            _ => None,
        }
    }
}

/// A named binary variable. Names identify variables; the kind is metadata.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    name: String,
    kind: VarKind,
}

impl VarId {
    pub fn new(name: impl Into<String>, kind: VarKind) -> Self {
        Self { name: name.into(), kind }
    }

    pub fn input(name: impl Into<String>) -> Self {
        Self::new(name, VarKind::Input)
    }

    pub fn output(name: impl Into<String>) -> Self {
        Self::new(name, VarKind::Output)
    }

    pub fn ancilla(name: impl Into<String>) -> Self {
        Self::new(name, VarKind::Ancilla)
    }

    pub fn slack(name: impl Into<String>) -> Self {
        Self::new(name, VarKind::Slack)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Value domain of a polynomial or an assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Variables take values in `{0, 1}`.
    Boolean,
    /// Variables take values in `{-1, +1}`, related by `s = 2x - 1`.
    Spin,
}

/// One stored term, as returned by [`Poly::monomials`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub vars: Vec<VarId>,
    pub coeff: Coeff,
}

impl Monomial {
    pub fn degree(&self) -> usize {
        self.vars.len()
    }
}

/// A total assignment of variables.
///
/// Values are stored as bits (`true` is `x = 1`, equivalently `s = +1`); the
/// view only decides how [`Assignment::value`] reports them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    view: Domain,
    bits: BTreeMap<String, bool>,
}

impl Assignment {
    pub fn new(view: Domain) -> Self {
        Self { view, bits: BTreeMap::new() }
    }

    /// Boolean-view assignment from `(name, bit)` pairs.
    pub fn from_bits<'a>(pairs: impl IntoIterator<Item = (&'a str, bool)>) -> Self {
        let mut a = Self::new(Domain::Boolean);
        for (name, bit) in pairs {
            a.set(name, bit);
        }
        a
    }

    /// Spin-view assignment from `(name, spin)` pairs; any positive spin is `+1`.
    pub fn from_spins<'a>(pairs: impl IntoIterator<Item = (&'a str, i8)>) -> Self {
        let mut a = Self::new(Domain::Spin);
        for (name, spin) in pairs {
            a.set(name, spin > 0);
        }
        a
    }

    pub fn view(&self) -> Domain {
        self.view
    }

    pub fn set(&mut self, name: &str, bit: bool) {
        self.bits.insert(name.to_string(), bit);
    }

    pub fn bit(&self, name: &str) -> Option<bool> {
        self.bits.get(name).copied()
    }

    /// The variable's value in this assignment's view: `0/1` or `-1/+1`.
    pub fn value(&self, name: &str) -> Option<i64> {
        self.bit(name).map(|b| bit_value(b, self.view))
    }

    /// Same assignment seen through the other view.
    pub fn to_view(&self, view: Domain) -> Self {
        Self { view, bits: self.bits.clone() }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.bits.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

fn bit_value(bit: bool, domain: Domain) -> i64 {
    match (domain, bit) {
        (Domain::Boolean, b) => b as i64,
        (Domain::Spin, true) => 1,
        (Domain::Spin, false) => -1,
    }
}

/// Exact multilinear polynomial with a constant offset.
#[derive(Debug, Clone)]
pub struct Poly {
    domain: Domain,
    vars: Vec<VarId>,
    // Keys are strictly increasing registry indices, never empty.
    terms: BTreeMap<Vec<usize>, Coeff>,
    offset: Coeff,
}

impl Poly {
    pub fn new(domain: Domain) -> Self {
        Self { domain, vars: Vec::new(), terms: BTreeMap::new(), offset: Coeff::zero() }
    }

    pub fn boolean() -> Self {
        Self::new(Domain::Boolean)
    }

    pub fn spin() -> Self {
        Self::new(Domain::Spin)
    }

    /// Empty polynomial whose registry starts with `vars`, in that order.
    pub fn with_vars(domain: Domain, vars: &[VarId]) -> Self {
        let mut p = Self::new(domain);
        for v in vars {
            p.register(v);
        }
        p
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn offset(&self) -> Coeff {
        self.offset
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Adds `v` to the registry if no variable of that name is present.
    pub fn register(&mut self, v: &VarId) -> usize {
        match self.var_index(&v.name) {
            Some(i) => i,
            None => {
                self.vars.push(v.clone());
                self.vars.len() - 1
            }
        }
    }

    pub fn add_constant(&mut self, c: Coeff) {
        self.offset += c;
    }

    /// Adds `coeff * prod(vars)`, reducing repeated variables.
    pub fn add_term(&mut self, vars: &[VarId], coeff: Coeff) {
        let idx: Vec<usize> = vars.iter().map(|v| self.register(v)).collect();
        self.add_indices(idx, coeff);
    }

    fn add_indices(&mut self, mut idx: Vec<usize>, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        idx.sort_unstable();
        let key = match self.domain {
            Domain::Boolean => {
                idx.dedup();
                idx
            }
            Domain::Spin => {
                // s*s = 1: pairs cancel.
                let mut out: Vec<usize> = Vec::with_capacity(idx.len());
                for i in idx {
                    if out.last() == Some(&i) {
                        out.pop();
                    } else {
                        out.push(i);
                    }
                }
                out
            }
        };
        if key.is_empty() {
            self.offset += coeff;
            return;
        }
        let sum = self.terms.get(&key).copied().unwrap_or_else(Coeff::zero) + coeff;
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    /// Highest monomial degree (0 for a constant).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// No monomials and a zero offset.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.offset.is_zero()
    }

    /// Raw terms as registry indices, in key order.
    pub fn index_terms(&self) -> impl Iterator<Item = (&[usize], Coeff)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), *c))
    }

    /// Terms in canonical order: degree descending, then registry order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut keys: Vec<(&Vec<usize>, &Coeff)> = self.terms.iter().collect();
        keys.sort_by(|(a, _), (b, _)| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        keys.into_iter()
            .map(|(k, c)| Monomial {
                vars: k.iter().map(|&i| self.vars[i].clone()).collect(),
                coeff: *c,
            })
            .collect()
    }

    /// Coefficient of the monomial over the named variables (offset for `[]`).
    pub fn coeff(&self, names: &[&str]) -> Coeff {
        let mut idx = Vec::with_capacity(names.len());
        for n in names {
            match self.var_index(n) {
                Some(i) => idx.push(i),
                None => return Coeff::zero(),
            }
        }
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() {
            return self.offset;
        }
        self.terms.get(&idx).copied().unwrap_or_else(Coeff::zero)
    }

    /// Evaluates at `a`. A Boolean polynomial reads the assignment as bits,
    /// a spin polynomial as spins, whatever the assignment's view.
    pub fn eval(&self, a: &Assignment) -> Result<Coeff, PolyError> {
        let mut bits = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match a.bit(&v.name) {
                Some(b) => bits.push(b),
                None => {
                    // Registry entries without terms do not need a value.
                    if self.terms.keys().any(|k| k.iter().any(|&i| self.vars[i] == *v)) {
                        return Err(PolyError::MissingVariable(v.name.clone()));
                    }
                    bits.push(false);
                }
            }
        }
        Ok(self.eval_with(|i| bits[i]))
    }

    /// Evaluates with registry variable `k` set from bit `k` of `mask`.
    pub fn eval_mask(&self, mask: u64) -> Coeff {
        self.eval_with(|i| (mask >> i) & 1 == 1)
    }

    fn eval_with(&self, bit: impl Fn(usize) -> bool) -> Coeff {
        let mut total = self.offset;
        for (key, c) in &self.terms {
            match self.domain {
                Domain::Boolean => {
                    if key.iter().all(|&i| bit(i)) {
                        total += c;
                    }
                }
                Domain::Spin => {
                    let negatives = key.iter().filter(|&&i| !bit(i)).count();
                    if negatives % 2 == 0 {
                        total += c;
                    } else {
                        total -= c;
                    }
                }
            }
        }
        total
    }

    pub fn scaled(&self, c: Coeff) -> Poly {
        let mut out = Poly::with_vars(self.domain, &self.vars);
        if c.is_zero() {
            return out;
        }
        out.offset = self.offset * c;
        out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        out
    }

    /// `self + other`; the registry keeps `self`'s order, then `other`'s new names.
    pub fn plus(&self, other: &Poly) -> Poly {
        combine(&[(Coeff::one(), self), (Coeff::one(), other)])
    }

    /// Product with idempotent (Boolean) or involutive (spin) reduction.
    pub fn times(&self, other: &Poly) -> Poly {
        assert_eq!(self.domain, other.domain, "cannot multiply polynomials over different domains");
        let mut out = Poly::with_vars(self.domain, &self.vars);
        let remap: Vec<usize> = other.vars.iter().map(|v| out.register(v)).collect();
        let lhs: Vec<(Vec<usize>, Coeff)> = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), *c))
            .chain(core::iter::once((Vec::new(), self.offset)))
            .collect();
        let rhs: Vec<(Vec<usize>, Coeff)> = other
            .terms
            .iter()
            .map(|(k, c)| (k.iter().map(|&i| remap[i]).collect(), *c))
            .chain(core::iter::once((Vec::new(), other.offset)))
            .collect();
        for (ka, ca) in &lhs {
            for (kb, cb) in &rhs {
                let mut key = ka.clone();
                key.extend_from_slice(kb);
                out.add_indices(key, ca * cb);
            }
        }
        out
    }

    /// Renames variables through `f`. Two variables mapped to the same name merge.
    pub fn rename(&self, f: impl Fn(&VarId) -> VarId) -> Poly {
        let renamed: Vec<VarId> = self.vars.iter().map(&f).collect();
        let mut out = Poly::with_vars(self.domain, &renamed);
        let remap: Vec<usize> = renamed.iter().map(|v| out.register(v)).collect();
        for (k, c) in &self.terms {
            out.add_indices(k.iter().map(|&i| remap[i]).collect(), *c);
        }
        out.offset = self.offset;
        out
    }

    /// Renames by name using `(from, to)` pairs; unlisted variables are kept.
    pub fn rename_map(&self, map: &[(&str, VarId)]) -> Poly {
        self.rename(|v| {
            map.iter()
                .find(|(from, _)| *from == v.name)
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| v.clone())
        })
    }

    /// Same polynomial with the registry starting with `order`.
    pub fn reordered(&self, order: &[VarId]) -> Poly {
        let mut out = Poly::with_vars(self.domain, order);
        let remap: Vec<usize> = self.vars.iter().map(|v| out.register(v)).collect();
        for (k, c) in &self.terms {
            out.add_indices(k.iter().map(|&i| remap[i]).collect(), *c);
        }
        out.offset = self.offset;
        out
    }

    /// Drops registry variables that no term uses.
    pub fn pruned(&self) -> Poly {
        let used: Vec<VarId> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|k| k.contains(i)))
            .map(|(_, v)| v.clone())
            .collect();
        self.reordered(&used)
    }

    /// Moves the offset out: returns the polynomial without its constant and the constant.
    pub fn split_offset(&self) -> (Poly, Coeff) {
        let mut p = self.clone();
        let c = p.offset;
        p.offset = Coeff::zero();
        (p, c)
    }

    /// Substitutes `x = (s + 1) / 2`. Defined for any degree but restricted to
    /// quadratic inputs, which is all the Ising side consumes.
    pub fn to_spin(&self) -> Result<Poly, PolyError> {
        self.require(Domain::Boolean, 2)?;
        let mut out = Poly::with_vars(Domain::Spin, &self.vars);
        out.offset = self.offset;
        for (key, c) in &self.terms {
            let scale = *c / Coeff::from_integer(1 << key.len());
            for sub in subsets(key) {
                out.add_indices(sub, scale);
            }
        }
        Ok(out)
    }

    /// Substitutes `s = 2x - 1`; inverse of [`Poly::to_spin`].
    pub fn to_boolean(&self) -> Result<Poly, PolyError> {
        self.require(Domain::Spin, 2)?;
        let mut out = Poly::with_vars(Domain::Boolean, &self.vars);
        out.offset = self.offset;
        for (key, c) in &self.terms {
            for sub in subsets(key) {
                let missing = key.len() - sub.len();
                let sign = if missing % 2 == 0 { 1 } else { -1 };
                let w = Coeff::from_integer(sign * (1i64 << sub.len()));
                out.add_indices(sub, c * w);
            }
        }
        Ok(out)
    }

    fn require(&self, domain: Domain, max_degree: usize) -> Result<(), PolyError> {
        if self.domain != domain {
            return Err(PolyError::WrongDomain { expected: domain });
        }
        let degree = self.degree();
        if degree > max_degree {
            return Err(PolyError::DegreeTooHigh { degree, max: max_degree });
        }
        Ok(())
    }

    /// Terms keyed by sorted variable names, for name-based comparison.
    fn named_terms(&self) -> BTreeMap<Vec<&str>, Coeff> {
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut names: Vec<&str> = k.iter().map(|&i| self.vars[i].name.as_str()).collect();
                names.sort_unstable();
                (names, *c)
            })
            .collect()
    }

    /// Largest absolute coefficient over all monomials (offset excluded).
    pub fn max_abs_coeff(&self) -> Coeff {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Coeff::zero)
    }
}

/// Monomial-for-monomial equality by variable name; registry order and
/// unused registry entries are ignored.
impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.offset == other.offset
            && self.named_terms() == other.named_terms()
    }
}

impl Eq for Poly {}

fn subsets(key: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u32..(1 << key.len())).map(move |m| {
        key.iter()
            .enumerate()
            .filter(|(b, _)| m >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect()
    })
}

/// `sum(weight * p)` in canonical form.
///
/// # Panics
/// If the polynomials are over different domains.
pub fn combine(terms: &[(Coeff, &Poly)]) -> Poly {
    let domain = terms.first().map(|(_, p)| p.domain).unwrap_or(Domain::Boolean);
    let mut out = Poly::new(domain);
    for (w, p) in terms {
        assert_eq!(p.domain, domain, "cannot combine polynomials over different domains");
        let remap: Vec<usize> = p.vars.iter().map(|v| out.register(v)).collect();
        if w.is_zero() {
            continue;
        }
        out.offset += p.offset * w;
        for (k, c) in &p.terms {
            out.add_indices(k.iter().map(|&i| remap[i]).collect(), c * w);
        }
    }
    out
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Coeff) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: `2*i*j - 2*i*k + i + 4*a + (offset 1)`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monos = self.monomials();
        if monos.is_empty() {
            if self.offset.is_zero() {
                return f.write_str("0");
            }
            f.write_str("(offset ")?;
            write_coeff(f, &self.offset)?;
            return f.write_str(")");
        }
        for (n, m) in monos.iter().enumerate() {
            let mag = m.coeff.abs();
            match (n, m.coeff.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write_coeff(f, &mag)?;
                f.write_str("*")?;
            }
            for (k, v) in m.vars.iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                f.write_str(&v.name)?;
            }
        }
        if !self.offset.is_zero() {
            f.write_str(" + (offset ")?;
            write_coeff(f, &self.offset)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Polynomial expression tree, possibly with powers and repeated variables.
///
/// Expansion through [`Expr::expand`] yields the reduced multilinear form;
/// [`Expr::eval`] computes the raw value with ordinary integer arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Coeff),
    Var(VarId),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn var(v: &VarId) -> Expr {
        Expr::Var(v.clone())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(int(n))
    }

    pub fn pow(self, n: u32) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    /// Variables in order of first appearance.
    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                if !out.iter().any(|w: &VarId| w.name == v.name) {
                    out.push(v.clone());
                }
            }
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            Expr::Neg(x) | Expr::Pow(x, _) => x.collect_vars(out),
        }
    }

    /// Expands into a multilinear polynomial over `domain`.
    pub fn expand(&self, domain: Domain) -> Poly {
        match self {
            Expr::Const(c) => {
                let mut p = Poly::new(domain);
                p.offset = *c;
                p
            }
            Expr::Var(v) => {
                let mut p = Poly::new(domain);
                p.add_term(core::slice::from_ref(v), Coeff::one());
                p
            }
            Expr::Sum(xs) => {
                let parts: Vec<Poly> = xs.iter().map(|x| x.expand(domain)).collect();
                let weighted: Vec<(Coeff, &Poly)> = parts.iter().map(|p| (Coeff::one(), p)).collect();
                let mut p = combine(&weighted);
                p.domain = domain;
                p
            }
            Expr::Product(xs) => {
                let mut acc = Expr::int(1).expand(domain);
                for x in xs {
                    acc = acc.times(&x.expand(domain));
                }
                acc
            }
            Expr::Neg(x) => x.expand(domain).scaled(-Coeff::one()),
            Expr::Pow(x, n) => {
                let base = x.expand(domain);
                let mut acc = Expr::int(1).expand(domain);
                for _ in 0..*n {
                    acc = acc.times(&base);
                }
                acc
            }
        }
    }

    /// Expands over `{0, 1}` with the registry starting with `order`.
    pub fn expand_over(&self, order: &[VarId]) -> Poly {
        self.expand(Domain::Boolean).reordered(order)
    }

    /// Direct evaluation without any reduction. `value` returns the
    /// numeric value of each variable.
    pub fn eval(&self, value: &dyn Fn(&VarId) -> Option<Coeff>) -> Result<Coeff, PolyError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => value(v).ok_or_else(|| PolyError::MissingVariable(v.name.clone()))?,
            Expr::Sum(xs) => {
                let mut t = Coeff::zero();
                for x in xs {
                    t += x.eval(value)?;
                }
                t
            }
            Expr::Product(xs) => {
                let mut t = Coeff::one();
                for x in xs {
                    t *= x.eval(value)?;
                }
                t
            }
            Expr::Neg(x) => -x.eval(value)?,
            Expr::Pow(x, n) => {
                let b = x.eval(value)?;
                let mut t = Coeff::one();
                for _ in 0..*n {
                    t *= b;
                }
                t
            }
        })
    }

    /// Evaluates with bits from an assignment read in its own view.
    pub fn eval_assignment(&self, a: &Assignment) -> Result<Coeff, PolyError> {
        self.eval(&|v: &VarId| a.value(v.name()).map(Coeff::from_integer))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_coeff(f, c),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Sum(xs) => {
                for (k, x) in xs.iter().enumerate() {
                    match (k, x) {
                        (0, x) => write!(f, "{x}")?,
                        (_, Expr::Neg(inner)) => write!(f, " - {}", Paren(inner))?,
                        (_, x) => write!(f, " + {x}")?,
                    }
                }
                Ok(())
            }
            Expr::Product(xs) => {
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{}", Paren(x))?;
                }
                Ok(())
            }
            Expr::Neg(x) => write!(f, "-{}", Paren(x)),
            Expr::Pow(x, n) => write!(f, "{}^{n}", Paren(x)),
        }
    }
}

struct Paren<'a>(&'a Expr);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expr::Sum(_) | Expr::Neg(_) => write!(f, "({})", self.0),
            Expr::Const(c) if c.is_negative() => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

/// Collapses powers and repeated factors using `x^2 = x`.
pub fn reduce_idempotent(raw: &Expr) -> Poly {
    raw.expand(Domain::Boolean)
}

impl From<&VarId> for Expr {
    fn from(v: &VarId) -> Self {
        Expr::var(v)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Sum(mut xs) => {
                xs.push(rhs);
                Expr::Sum(xs)
            }
            lhs => Expr::Sum(alloc::vec![lhs, rhs]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Expr) -> Expr {
        self + Expr::Neg(Box::new(rhs))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Product(mut xs) => {
                xs.push(rhs);
                Expr::Product(xs)
            }
            lhs => Expr::Product(alloc::vec![lhs, rhs]),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl Add<i64> for Expr {
    type Output = Expr;
    fn add(self, rhs: i64) -> Expr {
        self + Expr::int(rhs)
    }
}

impl Sub<i64> for Expr {
    type Output = Expr;
    fn sub(self, rhs: i64) -> Expr {
        self - Expr::int(rhs)
    }
}

impl Mul<i64> for Expr {
    type Output = Expr;
    fn mul(self, rhs: i64) -> Expr {
        self * Expr::int(rhs)
    }
}

impl Mul<Expr> for i64 {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::int(self) * rhs
    }
}

impl Sub<Expr> for i64 {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::int(self) - rhs
    }
}

impl Add<Expr> for i64 {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::int(self) + rhs
    }
}
