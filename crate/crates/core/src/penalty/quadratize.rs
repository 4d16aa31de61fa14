use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use crate::logic::AncillaDef;
use crate::poly::{combine, int, Coeff, Domain, Expr, Poly, VarId};

use super::PenaltyError;

/// How strongly each ancilla is bound to its product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AncillaWeight {
    /// Weight equals the number of terms the ancilla was substituted into.
    PerReplacedTerm,
    /// The same weight for every ancilla.
    Fixed(Coeff),
}

/// A quadratic polynomial plus the ancilla products it relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadratized {
    pub poly: Poly,
    pub ancillas: Vec<AncillaDef>,
    /// Binding weight used for each ancilla, in `ancillas` order.
    pub weights: Vec<Coeff>,
    /// How many terms each ancilla replaced.
    pub replaced: Vec<usize>,
}

impl Quadratized {
    /// Re-applies the bindings with every weight raised by `extra`.
    pub fn boosted(&self, base: &Poly, extra: Coeff) -> Quadratized {
        let weights: Vec<Coeff> = self.weights.iter().map(|w| *w + extra).collect();
        let poly = bind(base, &self.ancillas, &weights);
        Quadratized { poly, ancillas: self.ancillas.clone(), weights, replaced: self.replaced.clone() }
    }
}

/// Reduces `p` to degree 2 by substituting ancillas for variable pairs.
///
/// Pairs are picked greedily: the pair occurring in the most terms of
/// degree 3 or more, ties broken by registry order. Only terms of degree 3
/// or more are rewritten; existing quadratic terms are left alone.
pub fn quadratize(p: &Poly, weight: AncillaWeight) -> Quadratized {
    // An empty plan never fails.
    quadratize_with_plan(p, &[], weight).unwrap_or_else(|_| unreachable!())
}

/// Like [`quadratize`], but substitutes the ancillas of `plan` first, in
/// order, and only then falls back to greedy choices for what is left.
pub fn quadratize_with_plan(p: &Poly, plan: &[AncillaDef], weight: AncillaWeight) -> Result<Quadratized, PenaltyError> {
    let mut vars: Vec<VarId> = p.vars().to_vec();
    let mut terms: Vec<(Vec<usize>, Coeff)> = p.index_terms().map(|(k, c)| (k.to_vec(), c)).collect();
    let mut ancillas = Vec::new();
    let mut replaced = Vec::new();

    for def in plan {
        let u = index_of(&mut vars, &def.factors.0);
        let w = index_of(&mut vars, &def.factors.1);
        let a = index_of(&mut vars, &def.ancilla);
        let n = substitute(&mut terms, u, w, a);
        if n == 0 {
            return Err(PenaltyError::UnusedAncilla(def.ancilla.name().into()));
        }
        ancillas.push(def.clone());
        replaced.push(n);
    }

    while let Some((u, w)) = best_pair(&terms) {
        let name = fresh_name(&vars);
        let anc = VarId::ancilla(name);
        vars.push(anc.clone());
        let a = vars.len() - 1;
        let n = substitute(&mut terms, u, w, a);
        ancillas.push(AncillaDef::new(anc, vars[u].clone(), vars[w].clone()));
        replaced.push(n);
    }

    let mut base = Poly::with_vars(Domain::Boolean, &vars);
    base.add_constant(p.offset());
    for (k, c) in &terms {
        let vs: Vec<VarId> = k.iter().map(|&i| vars[i].clone()).collect();
        base.add_term(&vs, *c);
    }
    let weights: Vec<Coeff> = match weight {
        AncillaWeight::PerReplacedTerm => replaced.iter().map(|&n| int(n as i64)).collect(),
        AncillaWeight::Fixed(w) => alloc::vec![w; ancillas.len()],
    };
    let poly = bind(&base, &ancillas, &weights);
    Ok(Quadratized { poly, ancillas, weights, replaced })
}

/// The substituted polynomial before any binding terms, for re-weighting.
pub(crate) fn substituted_base(q: &Quadratized) -> Poly {
    let bindings = binding_poly(&q.ancillas, &q.weights);
    combine(&[(Coeff::one(), &q.poly), (-Coeff::one(), &bindings)]).reordered(q.poly.vars())
}

fn bind(base: &Poly, ancillas: &[AncillaDef], weights: &[Coeff]) -> Poly {
    let bindings = binding_poly(ancillas, weights);
    combine(&[(Coeff::one(), base), (Coeff::one(), &bindings)]).reordered(base.vars())
}

/// `sum w * (u*v - 2(u + v)a + 3a)` over the ancillas.
fn binding_poly(ancillas: &[AncillaDef], weights: &[Coeff]) -> Poly {
    let mut out = Poly::boolean();
    for (d, w) in ancillas.iter().zip(weights) {
        let (u, v, a) = (Expr::var(&d.factors.0), Expr::var(&d.factors.1), Expr::var(&d.ancilla));
        let and = (u.clone() * v.clone() - 2 * (u + v) * a.clone() + 3 * a).expand(Domain::Boolean);
        out = combine(&[(Coeff::one(), &out), (*w, &and)]);
    }
    out
}

fn index_of(vars: &mut Vec<VarId>, v: &VarId) -> usize {
    match vars.iter().position(|w| w.name() == v.name()) {
        Some(i) => i,
        None => {
            vars.push(v.clone());
            vars.len() - 1
        }
    }
}

fn substitute(terms: &mut Vec<(Vec<usize>, Coeff)>, u: usize, w: usize, a: usize) -> usize {
    let mut count = 0;
    let mut out: Vec<(Vec<usize>, Coeff)> = Vec::with_capacity(terms.len());
    for (k, c) in terms.drain(..) {
        if k.len() >= 3 && k.contains(&u) && k.contains(&w) {
            let mut nk: Vec<usize> = k.into_iter().filter(|&i| i != u && i != w).collect();
            if !nk.contains(&a) {
                nk.push(a);
            }
            nk.sort_unstable();
            count += 1;
            out.push((nk, c));
        } else {
            out.push((k, c));
        }
    }
    // Merge terms that became identical.
    out.sort_by(|x, y| x.0.cmp(&y.0));
    let mut merged: Vec<(Vec<usize>, Coeff)> = Vec::with_capacity(out.len());
    for (k, c) in out {
        match merged.last_mut() {
            Some((lk, lc)) if *lk == k => *lc += c,
            _ => merged.push((k, c)),
        }
    }
    merged.retain(|(_, c)| *c != Coeff::from_integer(0));
    *terms = merged;
    count
}

fn best_pair(terms: &[(Vec<usize>, Coeff)]) -> Option<(usize, usize)> {
    let mut counts: alloc::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for (k, _) in terms.iter().filter(|(k, _)| k.len() >= 3) {
        for (x, &u) in k.iter().enumerate() {
            for &w in &k[x + 1..] {
                *counts.entry((u, w)).or_insert(0) += 1;
            }
        }
    }
    let best = counts.values().copied().max()?;
    counts.into_iter().find(|(_, n)| *n == best).map(|(pair, _)| pair)
}

fn fresh_name(vars: &[VarId]) -> String {
    let taken = |n: &str| vars.iter().any(|v| v.name() == n);
    if !taken("a") {
        return "a".into();
    }
    (1..).map(|k| format!("a{k}")).find(|n| !taken(n)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ValidSet;
    use crate::penalty::verify_gap;
    use alloc::vec;

    fn v(n: &str) -> VarId {
        VarId::input(n)
    }

    #[test]
    fn cubic_monomial() {
        let (i, j, k) = (v("i"), v("j"), v("k"));
        let p = (Expr::var(&i) * Expr::var(&j) * Expr::var(&k)).expand(Domain::Boolean);
        let q = quadratize(&p, AncillaWeight::Fixed(int(1)));
        assert_eq!(q.ancillas, vec![AncillaDef::new(VarId::ancilla("a"), i.clone(), j.clone())]);
        let a = VarId::ancilla("a");
        let expected = (Expr::var(&a) * Expr::var(&k)
            + (Expr::var(&i) * Expr::var(&j) - 2 * (Expr::var(&i) + Expr::var(&j)) * Expr::var(&a) + 3 * Expr::var(&a)))
        .expand(Domain::Boolean);
        assert_eq!(q.poly, expected);
        // On the subspace a = i*j the value matches i*j*k.
        for m in 0u64..8 {
            let bits = |b: u64| m >> b & 1;
            let mask = m | ((bits(0) & bits(1)) << 3);
            let lhs = q.poly.reordered(&[i.clone(), j.clone(), k.clone(), a.clone()]).eval_mask(mask);
            assert_eq!(lhs, int((bits(0) * bits(1) * bits(2)) as i64));
        }
    }

    #[test]
    fn quadratic_is_unchanged() {
        let p = (2 * Expr::var(&v("x")) * Expr::var(&v("y")) - Expr::var(&v("x"))).expand(Domain::Boolean);
        let q = quadratize(&p, AncillaWeight::PerReplacedTerm);
        assert!(q.ancillas.is_empty());
        assert_eq!(q.poly, p);
    }

    #[test]
    fn quadratic_terms_are_not_substituted() {
        // i*j also appears as a plain quadratic term; it must stay.
        let (i, j, k) = (v("i"), v("j"), v("k"));
        let p = (Expr::var(&i) * Expr::var(&j) * Expr::var(&k) + 5 * Expr::var(&i) * Expr::var(&j)).expand(Domain::Boolean);
        let q = quadratize(&p, AncillaWeight::Fixed(int(1)));
        // 5*i*j from p plus 1*i*j from the binding.
        assert_eq!(q.poly.coeff(&["i", "j"]), int(6));
        assert_eq!(q.poly.coeff(&["a", "k"]), int(1));
    }

    #[test]
    fn quartic_recurses() {
        let xs: Vec<VarId> = ["w", "x", "y", "z"].iter().map(|n| v(n)).collect();
        let e = xs.iter().skip(1).fold(Expr::var(&xs[0]), |acc, x| acc * Expr::var(x));
        let p = e.expand(Domain::Boolean);
        let q = quadratize(&p, AncillaWeight::PerReplacedTerm);
        assert_eq!(q.poly.degree(), 2);
        assert_eq!(q.ancillas.len(), 2);
        // Restriction property over all 16 base assignments.
        let all: Vec<VarId> = q.poly.vars().to_vec();
        let base = ValidSet::from_predicate(xs.clone(), |_| true).unwrap();
        let ext = base.with_ancillas(&q.ancillas).unwrap().reordered(&all).unwrap();
        for m in ext.masks() {
            let a = ext.assignment(m);
            assert_eq!(q.poly.eval(&a).unwrap(), p.eval(&a).unwrap());
        }
    }

    #[test]
    fn unused_plan_entry_is_an_error() {
        let p = (Expr::var(&v("x")) * Expr::var(&v("y")) * Expr::var(&v("z"))).expand(Domain::Boolean);
        let plan = [AncillaDef::new(VarId::ancilla("q"), v("x"), v("nope"))];
        assert_eq!(
            quadratize_with_plan(&p, &plan, AncillaWeight::PerReplacedTerm).unwrap_err(),
            PenaltyError::UnusedAncilla("q".into())
        );
    }

    #[test]
    fn boosting_restores_base() {
        let (i, j, k) = (v("i"), v("j"), v("k"));
        let p = (Expr::var(&i) * Expr::var(&j) * Expr::var(&k)).expand(Domain::Boolean);
        let q = quadratize(&p, AncillaWeight::Fixed(int(1)));
        let base = substituted_base(&q);
        assert_eq!(base.coeff(&["a", "k"]), int(1));
        assert_eq!(base.coeff(&["i", "j"]), int(0));
        let b = q.boosted(&base, int(2));
        assert_eq!(b.weights, vec![int(3)]);
        assert_eq!(b.poly.coeff(&["a"]), int(9));
        let vs = ValidSet::from_predicate(vec![i, j, k], |_| true)
            .unwrap()
            .with_ancillas(&q.ancillas)
            .unwrap();
        assert_eq!(verify_gap(&b.poly, &vs).unwrap().v, Some(int(0)));
    }
}
