use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{
    free_symbols, simplify_truth, substitute_predicate, Formula, FreshNames, Polarity,
    PredReplacement, PredicateSpec, SymbolKind, Term,
};
use crate::preprocess::{Clause, LitAtom, Literal};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not in Ackermann form for {0}")]
pub struct NotAckermannForm(pub String);

fn pred_args<'a>(l: &'a Literal, p: &str) -> Option<&'a Vec<Term>> {
    match &l.atom {
        LitAtom::Pred(q, args) if q == p => Some(args),
        _ => None,
    }
}

/// Counts of positive and negative occurrences of `p` in `c`.
pub(super) fn occurrences(c: &Clause, p: &str) -> (usize, usize) {
    c.literals
        .iter()
        .filter(|l| pred_args(l, p).is_some())
        .fold((0, 0), |(pos, neg), l| {
            if l.positive {
                (pos + 1, neg)
            } else {
                (pos, neg + 1)
            }
        })
}

/// Whether the clauses are in Ackermann form for `p` with defining clauses of the given polarity.
pub(super) fn in_form(clauses: &[Clause], p: &str, positive: bool) -> bool {
    clauses.iter().all(|c| {
        let (pos, neg) = occurrences(c, p);
        let (def, other) = if positive { (pos, neg) } else { (neg, pos) };
        def == 0 || (def == 1 && other == 0)
    })
}

const PRODUCT_LIMIT: usize = 20_000;

/// Resolves every occurrence of `p` against the defining clauses: those with one `p` literal of
/// the given polarity. The result no longer mentions `p`. `None` if the clauses are not in that
/// form or the product grows too large.
pub(super) fn ackermann_clauses(
    clauses: &[Clause],
    p: &str,
    positive: bool,
) -> Option<Vec<Clause>> {
    if !in_form(clauses, p, positive) {
        return None;
    }
    let mut names = FreshNames::new();
    for c in clauses {
        c.vars().into_iter().for_each(|v| names.reserve(v));
    }
    let defining: Vec<&Clause> = clauses
        .iter()
        .filter(|c| {
            c.literals
                .iter()
                .any(|l| l.positive == positive && pred_args(l, p).is_some())
        })
        .collect();
    let mut out: Vec<Clause> = Vec::new();
    for c in clauses
        .iter()
        .filter(|c| !defining.iter().any(|d| std::ptr::eq(*d, *c)))
    {
        let (occs, rest): (Vec<&Literal>, Vec<&Literal>) =
            c.literals.iter().partition(|l| pred_args(l, p).is_some());
        if occs.is_empty() {
            out.push(c.clone());
            continue;
        }
        let combos = defining.len().checked_pow(occs.len() as u32)?;
        if combos > PRODUCT_LIMIT || out.len() + combos > PRODUCT_LIMIT {
            return None;
        }
        let mut partial: Vec<Vec<Literal>> = vec![rest.iter().map(|l| (*l).clone()).collect()];
        for occ in &occs {
            let s = pred_args(occ, p).unwrap();
            let mut next = Vec::new();
            for lits in &partial {
                for d in &defining {
                    next.push(
                        [lits.clone(), resolve_against(s, d, p, positive, &mut names)].concat(),
                    );
                }
            }
            partial = next;
        }
        out.extend(
            partial
                .into_iter()
                .map(Clause::new)
                .filter(|c| !c.is_tautology()),
        );
    }
    Some(out)
}

/// The residue of defining clause `d` after matching its `p` literal with arguments `s`.
fn resolve_against(
    s: &[Term],
    d: &Clause,
    p: &str,
    positive: bool,
    names: &mut FreshNames,
) -> Vec<Literal> {
    let rename: HashMap<String, Term> = d
        .vars()
        .into_iter()
        .map(|v| (v.clone(), Term::var(names.variant(&v))))
        .collect();
    let d = d.substitute(&rename);
    let at = d
        .literals
        .iter()
        .position(|l| l.positive == positive && pred_args(l, p).is_some())
        .unwrap();
    let t = pred_args(&d.literals[at], p).unwrap().clone();
    let mut sigma: HashMap<String, Term> = HashMap::new();
    let mut eqs = Vec::new();
    for (sk, tk) in s.iter().zip(&t) {
        match tk {
            Term::Var(v) if !sigma.contains_key(v) && !s_mentions(s, v) => {
                sigma.insert(v.clone(), sk.clone());
            }
            _ => eqs.push((sk.clone(), tk.clone())),
        }
    }
    let mut lits: Vec<Literal> = eqs
        .into_iter()
        .map(|(a, b)| Literal::neg(LitAtom::eq(a, b.substitute(&|v| sigma.get(v).cloned()))))
        .collect();
    lits.extend(
        d.literals
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != at)
            .map(|(_, l)| l.substitute(&sigma)),
    );
    lits
}

fn s_mentions(s: &[Term], v: &str) -> bool {
    s.iter().any(|t| t.occurs(v))
}

/// Rewrites `∀x̄(A(x̄) → p(x̄)) ∧ B` with `p` only negative in `B` to `B[p ↦ A]`, or the dual
/// `∀x̄(p(x̄) → A(x̄)) ∧ B` with `p` only positive in `B`.
pub fn ackermann_rewrite(p: &PredicateSpec, f: &Formula) -> Result<Formula, NotAckermannForm> {
    let conjuncts: Vec<Formula> = match f {
        Formula::And(xs) => xs.clone(),
        other => vec![other.clone()],
    };
    let err = || NotAckermannForm(format!("{} in {f}", p.name));
    for (i, c) in conjuncts.iter().enumerate() {
        let Some((params, body, positive)) = definition(c, &p.name) else {
            continue;
        };
        if mentions(&body, &p.name) {
            continue;
        }
        let rest = Formula::and(
            conjuncts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone()),
        );
        let wanted = if positive {
            Polarity::Negative
        } else {
            Polarity::Positive
        };
        let ok = free_symbols(&rest)
            .iter()
            .all(|o| o.kind != SymbolKind::Predicate || o.symbol != p.name || o.polarity == wanted);
        if !ok {
            continue;
        }
        let g = substitute_predicate(&rest, p, &PredReplacement::Lambda(params, body))
            .map_err(|_| err())?;
        return Ok(simplify_truth(&g));
    }
    Err(err())
}

fn mentions(f: &Formula, p: &str) -> bool {
    free_symbols(f)
        .iter()
        .any(|o| o.kind == SymbolKind::Predicate && o.symbol == p)
}

/// Reads `∀x̄(A → p(x̄))` (positive) or `∀x̄(p(x̄) → A)` (negative) with distinct variables `x̄`.
fn definition(c: &Formula, p: &str) -> Option<(Vec<String>, Formula, bool)> {
    let (vars, body) = match c {
        Formula::ForAll(vs, b) => (vs.clone(), (**b).clone()),
        other => (Vec::new(), other.clone()),
    };
    let head_vars = |args: &[Term]| -> Option<Vec<String>> {
        let names: Vec<String> = args
            .iter()
            .map(|t| {
                if let Term::Var(v) = t {
                    Some(v.clone())
                } else {
                    None
                }
            })
            .collect::<Option<_>>()?;
        let distinct: BTreeSet<&String> = names.iter().collect();
        (distinct.len() == names.len()
            && names.iter().all(|n| vars.contains(n))
            && vars.len() == names.len())
        .then_some(names)
    };
    match &body {
        Formula::Implies(a, h) => match (&**a, &**h) {
            (_, Formula::Atom(q, args)) if q == p => Some((head_vars(args)?, (**a).clone(), true)),
            (Formula::Atom(q, args), _) if q == p => Some((head_vars(args)?, (**h).clone(), false)),
            _ => None,
        },
        Formula::Atom(q, args) if q == p => Some((head_vars(args)?, Formula::True, true)),
        Formula::Not(inner) => match &**inner {
            Formula::Atom(q, args) if q == p => Some((head_vars(args)?, Formula::False, false)),
            _ => None,
        },
        _ => None,
    }
}
