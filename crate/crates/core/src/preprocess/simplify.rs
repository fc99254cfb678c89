use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{ClausalForm, Clause, LitAtom, Literal};
use crate::formula::Term;

/// Predicates whose semantics a simplification must preserve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProtectedVocabulary {
    All,
    Only(BTreeSet<String>),
}

impl ProtectedVocabulary {
    pub fn only<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Self {
        ProtectedVocabulary::Only(names.into_iter().map(Into::into).collect())
    }

    pub fn protects(&self, pred: &str) -> bool {
        match self {
            ProtectedVocabulary::All => true,
            ProtectedVocabulary::Only(s) => s.contains(pred),
        }
    }
}

const FULL_SUBSUMPTION_LIMIT: usize = 12;

/// One-way matching: extends `sigma` so that `pat` instantiated equals `target`.
pub fn match_term(pat: &Term, target: &Term, sigma: &mut HashMap<String, Term>) -> bool {
    match pat {
        Term::Var(v) => match sigma.get(v) {
            Some(t) => t == target,
            None => {
                sigma.insert(v.clone(), target.clone());
                true
            }
        },
        Term::App(f, args) => match target {
            Term::App(g, targs) if f == g && args.len() == targs.len() => {
                args.iter().zip(targs).all(|(a, b)| match_term(a, b, sigma))
            }
            _ => false,
        },
    }
}

fn match_atom(pat: &LitAtom, target: &LitAtom, sigma: &mut HashMap<String, Term>) -> bool {
    match (pat, target) {
        (LitAtom::Pred(p, a), LitAtom::Pred(q, b)) if p == q && a.len() == b.len() => {
            a.iter().zip(b).all(|(x, y)| match_term(x, y, sigma))
        }
        (LitAtom::Eq(s1, t1), LitAtom::Eq(s2, t2)) => {
            let saved = sigma.clone();
            if match_term(s1, s2, sigma) && match_term(t1, t2, sigma) {
                return true;
            }
            *sigma = saved;
            match_term(s1, t2, sigma) && match_term(t1, s2, sigma)
        }
        _ => false,
    }
}

pub fn match_literal(pat: &Literal, target: &Literal, sigma: &mut HashMap<String, Term>) -> bool {
    pat.positive == target.positive && match_atom(&pat.atom, &target.atom, sigma)
}

/// Whether some instance of `c` is a subset of `d`.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.len() > d.len() {
        return false;
    }
    if c.len() > FULL_SUBSUMPTION_LIMIT {
        return is_variant(c, d);
    }
    fn go(i: usize, c: &Clause, d: &Clause, sigma: &mut HashMap<String, Term>) -> bool {
        if i == c.literals.len() {
            return true;
        }
        for m in &d.literals {
            let saved = sigma.clone();
            if match_literal(&c.literals[i], m, sigma) && go(i + 1, c, d, sigma) {
                return true;
            }
            *sigma = saved;
        }
        false
    }
    go(0, c, d, &mut HashMap::new())
}

fn is_variant(c: &Clause, d: &Clause) -> bool {
    if c.len() != d.len() {
        return false;
    }
    let mut sigma = HashMap::new();
    if !c
        .literals
        .iter()
        .zip(&d.literals)
        .all(|(a, b)| match_literal(a, b, &mut sigma))
    {
        return false;
    }
    let images: BTreeSet<&Term> = sigma.values().collect();
    images.len() == sigma.len() && images.iter().all(|t| t.is_var())
}

fn clean_clause(c: &Clause) -> Option<Clause> {
    let mut lits: Vec<Literal> = Vec::new();
    for l in &c.literals {
        if let LitAtom::Eq(s, t) = &l.atom {
            if s == t {
                if l.positive {
                    return None;
                }
                continue;
            }
        }
        if !lits.contains(l) {
            lits.push(l.clone());
        }
    }
    let mut out = Clause::new(lits);
    out.origin = c.origin;
    if out.is_tautology() {
        None
    } else {
        Some(out)
    }
}

/// Resolves away literals `x != t` with `x` a variable not occurring in `t`.
fn equality_resolution(c: &Clause) -> Clause {
    let mut cur = c.clone();
    loop {
        let found = cur
            .literals
            .iter()
            .enumerate()
            .find_map(|(i, l)| match &l.atom {
                LitAtom::Eq(s, t) if !l.positive => match (s, t) {
                    (Term::Var(x), other) | (other, Term::Var(x)) if !other.occurs(x) => {
                        Some((i, x.clone(), other.clone()))
                    }
                    _ => None,
                },
                _ => None,
            });
        let Some((i, x, t)) = found else { return cur };
        let mut lits = cur.literals.clone();
        lits.remove(i);
        let map: HashMap<String, Term> = [(x, t)].into_iter().collect();
        let mut next = Clause::new(lits.iter().map(|l| l.substitute(&map)).collect());
        next.origin = cur.origin;
        cur = next;
    }
}

/// Tautology and duplicate removal, equality resolution, unit resolution,
/// subsumption and purity on unprotected predicates, applied to a fixpoint.
pub fn simplify_clausal(cf: &ClausalForm, protect: &ProtectedVocabulary) -> ClausalForm {
    let mut clauses: Vec<Clause> = cf.clauses.clone();
    for _round in 0..64 {
        let before = clauses.clone();
        clauses = clauses
            .iter()
            .filter_map(|c| clean_clause(&equality_resolution(c)))
            .collect();
        if clauses.iter().any(Clause::is_empty) {
            clauses = vec![Clause::new(Vec::new())];
            break;
        }
        clauses = unit_resolution(clauses);
        clauses = strengthen(clauses);
        clauses = remove_subsumed(clauses);
        clauses = purity(clauses, protect);
        if clauses == before {
            break;
        }
    }
    ClausalForm {
        clauses,
        skolems: cf.skolems.clone(),
        definitions: cf.definitions.clone(),
    }
}

fn unit_resolution(mut clauses: Vec<Clause>) -> Vec<Clause> {
    let units: Vec<Literal> = clauses
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c.literals[0].clone())
        .collect();
    if units.is_empty() {
        return clauses;
    }
    for c in clauses.iter_mut() {
        let kept: Vec<Literal> = c
            .literals
            .iter()
            .filter(|m| {
                !units.iter().any(|u| {
                    let mut sigma = HashMap::new();
                    match_literal(&u.complement(), m, &mut sigma)
                })
            })
            .cloned()
            .collect();
        if kept.len() != c.len() {
            let origin = c.origin;
            *c = Clause::new(kept);
            c.origin = origin;
        }
    }
    clauses
}

const STRENGTHEN_LIMIT: usize = 200;

/// Self-subsuming resolution: drops `l` from `C` when another clause subsumes `C` with `l` flipped.
fn strengthen(mut clauses: Vec<Clause>) -> Vec<Clause> {
    if clauses.len() > STRENGTHEN_LIMIT {
        return clauses;
    }
    for i in 0..clauses.len() {
        let mut k = 0;
        while k < clauses[i].literals.len() && clauses[i].len() > 1 {
            let mut flipped = clauses[i].clone();
            flipped.literals[k] = flipped.literals[k].complement();
            let hit = (0..clauses.len()).any(|j| {
                j != i && clauses[j].len() <= flipped.len() && subsumes(&clauses[j], &flipped)
            });
            if hit {
                let origin = clauses[i].origin;
                clauses[i].literals.remove(k);
                clauses[i].origin = origin;
            } else {
                k += 1;
            }
        }
    }
    clauses
}

fn remove_subsumed(clauses: Vec<Clause>) -> Vec<Clause> {
    let mut order: Vec<usize> = (0..clauses.len()).collect();
    order.sort_by_key(|&i| clauses[i].len());
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if !kept.iter().any(|&k| subsumes(&clauses[k], &clauses[i])) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter().map(|i| clauses[i].clone()).collect()
}

fn purity(clauses: Vec<Clause>, protect: &ProtectedVocabulary) -> Vec<Clause> {
    let mut polarity: BTreeMap<&str, (bool, bool)> = BTreeMap::new();
    for c in &clauses {
        for l in &c.literals {
            if let Some((p, _)) = l.atom.predicate() {
                let e = polarity.entry(p).or_default();
                if l.positive {
                    e.0 = true;
                } else {
                    e.1 = true;
                }
            }
        }
    }
    let pure: BTreeSet<String> = polarity
        .into_iter()
        .filter(|(p, (pos, neg))| !(pos & neg) && !protect.protects(p))
        .map(|(p, _)| p.to_string())
        .collect();
    if pure.is_empty() {
        return clauses;
    }
    clauses
        .into_iter()
        .filter(|c| !pure.iter().any(|p| c.mentions(p)))
        .collect()
}
