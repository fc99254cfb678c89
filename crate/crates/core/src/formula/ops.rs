//! Structural operations on formulas: vocabulary, substitution, normal negation form.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::{
    Formula, FreshNames, MacroArg, Polarity, PolarityOccurrence, PredicateSpec, SymbolKind, Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("arity mismatch for {predicate}: expected {expected}, found {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("λ-application head is not a λ-expression or predicate: {0}")]
    BadLambdaHead(String),
}

/// What a predicate is replaced by in [`substitute_predicate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredReplacement {
    Symbol(String),
    Lambda(Vec<String>, Formula),
}

impl PredReplacement {
    /// Interprets a formula as a replacement: a λ-expression or a nullary atom naming a predicate.
    pub fn from_formula(f: &Formula) -> Option<PredReplacement> {
        match f {
            Formula::Lambda(params, body) => {
                Some(PredReplacement::Lambda(params.clone(), (**body).clone()))
            }
            Formula::Atom(name, args) if args.is_empty() => {
                Some(PredReplacement::Symbol(name.clone()))
            }
            _ => None,
        }
    }
}

type Vocab = BTreeMap<(String, SymbolKind, usize), Polarity>;

/// Free predicate and function symbols of `f`, with predicate polarity.
pub fn free_symbols(f: &Formula) -> BTreeSet<PolarityOccurrence> {
    let mut vocab = Vocab::new();
    let mut bound_vars = Vec::new();
    let mut bound_preds = Vec::new();
    collect_symbols(
        f,
        Polarity::Positive,
        &mut bound_vars,
        &mut bound_preds,
        &mut vocab,
    );
    vocab
        .into_iter()
        .map(|((symbol, kind, arity), polarity)| PolarityOccurrence {
            symbol,
            kind,
            arity,
            polarity,
        })
        .collect()
}

fn note(vocab: &mut Vocab, key: (String, SymbolKind, usize), pol: Polarity) {
    vocab
        .entry(key)
        .and_modify(|p| *p = p.join(pol))
        .or_insert(pol);
}

fn collect_term_symbols(t: &Term, vocab: &mut Vocab) {
    if let Term::App(name, args) = t {
        note(
            vocab,
            (name.clone(), SymbolKind::Function, args.len()),
            Polarity::Both,
        );
        args.iter().for_each(|a| collect_term_symbols(a, vocab));
    }
}

fn collect_symbols(
    f: &Formula,
    pol: Polarity,
    bv: &mut Vec<String>,
    bp: &mut Vec<String>,
    vocab: &mut Vocab,
) {
    match f {
        Formula::Atom(p, args) => {
            if !bp.contains(p) {
                note(vocab, (p.clone(), SymbolKind::Predicate, args.len()), pol);
            }
            args.iter().for_each(|a| collect_term_symbols(a, vocab));
        }
        Formula::Eq(s, t) => {
            collect_term_symbols(s, vocab);
            collect_term_symbols(t, vocab);
        }
        Formula::True | Formula::False => {}
        Formula::Not(a) => collect_symbols(a, pol.flip(), bv, bp, vocab),
        Formula::And(xs) | Formula::Or(xs) => xs
            .iter()
            .for_each(|x| collect_symbols(x, pol, bv, bp, vocab)),
        Formula::Implies(a, b) => {
            collect_symbols(a, pol.flip(), bv, bp, vocab);
            collect_symbols(b, pol, bv, bp, vocab);
        }
        Formula::Iff(a, b) => {
            collect_symbols(a, Polarity::Both, bv, bp, vocab);
            collect_symbols(b, Polarity::Both, bv, bp, vocab);
        }
        Formula::ForAll(vs, a) | Formula::Exists(vs, a) | Formula::Lambda(vs, a) => {
            let n = bv.len();
            bv.extend(vs.iter().cloned());
            collect_symbols(a, pol, bv, bp, vocab);
            bv.truncate(n);
        }
        Formula::ForAll2(ps, a) | Formula::Exists2(ps, a) => {
            let n = bp.len();
            bp.extend(ps.iter().map(|p| p.name.clone()));
            collect_symbols(a, pol, bv, bp, vocab);
            bp.truncate(n);
        }
        Formula::LambdaApp(h, args) => {
            collect_symbols(h, pol, bv, bp, vocab);
            args.iter().for_each(|a| collect_term_symbols(a, vocab));
        }
        Formula::MacroCall(_, args) => {
            fn walk(arg: &MacroArg, bv: &mut Vec<String>, bp: &mut Vec<String>, vocab: &mut Vocab) {
                match arg {
                    MacroArg::Formula(x) => collect_symbols(x, Polarity::Both, bv, bp, vocab),
                    MacroArg::Term(t) => collect_term_symbols(t, vocab),
                    MacroArg::List(items) => items.iter().for_each(|i| walk(i, bv, bp, vocab)),
                }
            }
            args.iter().for_each(|a| walk(a, bv, bp, vocab));
        }
    }
}

/// Free variables of `f`.
pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match f {
            Formula::Atom(_, args) => args.iter().for_each(|a| term(a, bound, out)),
            Formula::Eq(s, t) => {
                term(s, bound, out);
                term(t, bound, out);
            }
            Formula::True | Formula::False => {}
            Formula::Not(a) | Formula::ForAll2(_, a) | Formula::Exists2(_, a) => go(a, bound, out),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| go(x, bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Formula::ForAll(vs, a) | Formula::Exists(vs, a) | Formula::Lambda(vs, a) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                go(a, bound, out);
                bound.truncate(n);
            }
            Formula::LambdaApp(h, args) => {
                go(h, bound, out);
                args.iter().for_each(|a| term(a, bound, out));
            }
            Formula::MacroCall(_, args) => {
                fn walk(arg: &MacroArg, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
                    match arg {
                        MacroArg::Formula(x) => go(x, bound, out),
                        MacroArg::Term(t) => {
                            let mut vs = BTreeSet::new();
                            t.collect_vars(&mut vs);
                            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
                        }
                        MacroArg::List(items) => items.iter().for_each(|i| walk(i, bound, out)),
                    }
                }
                args.iter().for_each(|a| walk(a, bound, out));
            }
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

/// Every name occurring in `f`: symbols, variables and bound names alike.
pub fn symbol_names(f: &Formula) -> HashSet<String> {
    fn term(t: &Term, out: &mut HashSet<String>) {
        match t {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(g, args) => {
                out.insert(g.clone());
                args.iter().for_each(|a| term(a, out));
            }
        }
    }
    fn arg(a: &MacroArg, out: &mut HashSet<String>) {
        match a {
            MacroArg::Formula(f) => out.extend(symbol_names(f)),
            MacroArg::Term(t) => term(t, out),
            MacroArg::List(items) => items.iter().for_each(|i| arg(i, out)),
        }
    }
    let mut out = HashSet::new();
    f.visit(&mut |g| match g {
        Formula::Atom(p, args) => {
            out.insert(p.clone());
            args.iter().for_each(|a| term(a, &mut out));
        }
        Formula::Eq(s, t) => {
            term(s, &mut out);
            term(t, &mut out);
        }
        Formula::ForAll(vs, _) | Formula::Exists(vs, _) | Formula::Lambda(vs, _) => {
            out.extend(vs.iter().cloned())
        }
        Formula::ForAll2(ps, _) | Formula::Exists2(ps, _) => {
            out.extend(ps.iter().map(|p| p.name.clone()))
        }
        Formula::LambdaApp(_, args) => args.iter().for_each(|a| term(a, &mut out)),
        Formula::MacroCall(name, args) => {
            out.insert(name.clone());
            for a in args {
                if let MacroArg::Term(t) = a {
                    term(t, &mut out);
                } else if let MacroArg::List(_) = a {
                    arg(a, &mut out);
                }
            }
        }
        _ => {}
    });
    out
}

/// Arities with which each predicate name occurs (free or bound).
pub fn predicate_arities(f: &Formula) -> BTreeMap<String, BTreeSet<usize>> {
    let mut out: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    f.visit(&mut |g| {
        if let Formula::Atom(p, args) = g {
            out.entry(p.clone()).or_default().insert(args.len());
        }
    });
    out
}

fn term_names(t: &Term, out: &mut HashSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::App(g, args) => {
            out.insert(g.clone());
            args.iter().for_each(|a| term_names(a, out));
        }
    }
}

/// Capture-avoiding substitution of terms for free variables.
pub fn substitute_vars(f: &Formula, map: &HashMap<String, Term>) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    let mut avoid = symbol_names(f);
    for t in map.values() {
        term_names(t, &mut avoid);
    }
    let mut fresh = FreshNames::new();
    for n in &avoid {
        fresh.reserve(n.clone());
    }
    subst_vars(f, map, &mut fresh)
}

fn subst_term(t: &Term, map: &HashMap<String, Term>) -> Term {
    t.substitute(&|v| map.get(v).cloned())
}

fn subst_vars(f: &Formula, map: &HashMap<String, Term>, fresh: &mut FreshNames) -> Formula {
    match f {
        Formula::Atom(p, args) => {
            Formula::Atom(p.clone(), args.iter().map(|a| subst_term(a, map)).collect())
        }
        Formula::Eq(s, t) => Formula::Eq(subst_term(s, map), subst_term(t, map)),
        Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::not(subst_vars(a, map, fresh)),
        Formula::And(xs) => Formula::and(xs.iter().map(|x| subst_vars(x, map, fresh))),
        Formula::Or(xs) => Formula::or(xs.iter().map(|x| subst_vars(x, map, fresh))),
        Formula::Implies(a, b) => {
            Formula::implies(subst_vars(a, map, fresh), subst_vars(b, map, fresh))
        }
        Formula::Iff(a, b) => Formula::iff(subst_vars(a, map, fresh), subst_vars(b, map, fresh)),
        Formula::ForAll(vs, a) | Formula::Exists(vs, a) | Formula::Lambda(vs, a) => {
            let (vs2, inner) = subst_under_binder(vs, a, map, fresh);
            match f {
                Formula::ForAll(..) => Formula::ForAll(vs2, Box::new(inner)),
                Formula::Exists(..) => Formula::Exists(vs2, Box::new(inner)),
                _ => Formula::Lambda(vs2, Box::new(inner)),
            }
        }
        Formula::ForAll2(ps, a) => {
            Formula::ForAll2(ps.clone(), Box::new(subst_vars(a, map, fresh)))
        }
        Formula::Exists2(ps, a) => {
            Formula::Exists2(ps.clone(), Box::new(subst_vars(a, map, fresh)))
        }
        Formula::LambdaApp(h, args) => Formula::LambdaApp(
            Box::new(subst_vars(h, map, fresh)),
            args.iter().map(|a| subst_term(a, map)).collect(),
        ),
        Formula::MacroCall(name, args) => {
            fn arg(a: &MacroArg, map: &HashMap<String, Term>, fresh: &mut FreshNames) -> MacroArg {
                match a {
                    MacroArg::Formula(x) => MacroArg::Formula(subst_vars(x, map, fresh)),
                    MacroArg::Term(t) => MacroArg::Term(subst_term(t, map)),
                    MacroArg::List(items) => {
                        MacroArg::List(items.iter().map(|i| arg(i, map, fresh)).collect())
                    }
                }
            }
            Formula::MacroCall(
                name.clone(),
                args.iter().map(|a| arg(a, map, fresh)).collect(),
            )
        }
    }
}

fn subst_under_binder(
    vs: &[String],
    body: &Formula,
    map: &HashMap<String, Term>,
    fresh: &mut FreshNames,
) -> (Vec<String>, Formula) {
    let mut inner: HashMap<String, Term> = map
        .iter()
        .filter(|(k, _)| !vs.contains(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let mut incoming = BTreeSet::new();
    for t in inner.values() {
        t.collect_vars(&mut incoming);
    }
    let mut new_vs = Vec::with_capacity(vs.len());
    for v in vs {
        if incoming.contains(v) {
            let renamed = fresh.fresh(v);
            inner.insert(v.clone(), Term::Var(renamed.clone()));
            new_vs.push(renamed);
        } else {
            new_vs.push(v.clone());
        }
    }
    (new_vs, subst_vars(body, &inner, fresh))
}

/// Applies a λ-expression to arguments.
pub fn beta_reduce(
    params: &[String],
    body: &Formula,
    args: &[Term],
) -> Result<Formula, FormulaError> {
    if params.len() != args.len() {
        return Err(FormulaError::ArityMismatch {
            predicate: "λ".to_string(),
            expected: params.len(),
            found: args.len(),
        });
    }
    let map: HashMap<String, Term> = params.iter().cloned().zip(args.iter().cloned()).collect();
    Ok(substitute_vars(body, &map))
}

/// Replaces every free occurrence of predicate `p` by a symbol or λ-expression.
pub fn substitute_predicate(
    f: &Formula,
    p: &PredicateSpec,
    replacement: &PredReplacement,
) -> Result<Formula, FormulaError> {
    let mut avoid = symbol_names(f);
    let mut repl_preds = BTreeSet::new();
    let mut repl_vars = BTreeSet::new();
    match replacement {
        PredReplacement::Symbol(s) => {
            avoid.insert(s.clone());
            repl_preds.insert(s.clone());
        }
        PredReplacement::Lambda(params, body) => {
            if let Some(n) = p.arity {
                if n != params.len() {
                    return Err(FormulaError::ArityMismatch {
                        predicate: p.name.clone(),
                        expected: n,
                        found: params.len(),
                    });
                }
            }
            avoid.extend(symbol_names(body));
            for occ in free_symbols(body) {
                if occ.kind == SymbolKind::Predicate {
                    repl_preds.insert(occ.symbol);
                }
            }
            repl_vars = free_vars(&Formula::Lambda(params.clone(), Box::new(body.clone())));
        }
    }
    let mut fresh = FreshNames::new();
    for n in avoid {
        fresh.reserve(n);
    }
    let ctx = PredSubst {
        pred: p,
        replacement,
        repl_preds,
        repl_vars,
    };
    ctx.apply(f, &mut fresh)
}

struct PredSubst<'a> {
    pred: &'a PredicateSpec,
    replacement: &'a PredReplacement,
    repl_preds: BTreeSet<String>,
    repl_vars: BTreeSet<String>,
}

impl PredSubst<'_> {
    fn apply(&self, f: &Formula, fresh: &mut FreshNames) -> Result<Formula, FormulaError> {
        Ok(match f {
            Formula::Atom(q, args) if *q == self.pred.name => {
                if let Some(n) = self.pred.arity {
                    if n != args.len() {
                        return Err(FormulaError::ArityMismatch {
                            predicate: q.clone(),
                            expected: n,
                            found: args.len(),
                        });
                    }
                }
                match self.replacement {
                    PredReplacement::Symbol(s) => Formula::Atom(s.clone(), args.clone()),
                    PredReplacement::Lambda(params, body) => beta_reduce(params, body, args)?,
                }
            }
            Formula::Atom(..) | Formula::Eq(..) | Formula::True | Formula::False => f.clone(),
            Formula::Not(a) => Formula::not(self.apply(a, fresh)?),
            Formula::And(xs) => Formula::and(
                xs.iter()
                    .map(|x| self.apply(x, fresh))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            Formula::Or(xs) => Formula::or(
                xs.iter()
                    .map(|x| self.apply(x, fresh))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            Formula::Implies(a, b) => {
                Formula::implies(self.apply(a, fresh)?, self.apply(b, fresh)?)
            }
            Formula::Iff(a, b) => Formula::iff(self.apply(a, fresh)?, self.apply(b, fresh)?),
            Formula::ForAll(vs, a) | Formula::Exists(vs, a) | Formula::Lambda(vs, a) => {
                // binders that would capture free variables of the replacement are renamed
                let mut map = HashMap::new();
                let mut new_vs = Vec::new();
                for v in vs {
                    if self.repl_vars.contains(v) {
                        let r = fresh.fresh(v);
                        map.insert(v.clone(), Term::Var(r.clone()));
                        new_vs.push(r);
                    } else {
                        new_vs.push(v.clone());
                    }
                }
                let body = if map.is_empty() {
                    (**a).clone()
                } else {
                    substitute_vars(a, &map)
                };
                let body = Box::new(self.apply(&body, fresh)?);
                match f {
                    Formula::ForAll(..) => Formula::ForAll(new_vs, body),
                    Formula::Exists(..) => Formula::Exists(new_vs, body),
                    _ => Formula::Lambda(new_vs, body),
                }
            }
            Formula::ForAll2(ps, a) | Formula::Exists2(ps, a) => {
                if ps.iter().any(|q| q.name == self.pred.name) {
                    return Ok(f.clone());
                }
                let mut new_ps = Vec::new();
                let mut body = (**a).clone();
                for q in ps {
                    if self.repl_preds.contains(&q.name) {
                        let r = fresh.fresh(&q.name);
                        body = substitute_predicate(&body, q, &PredReplacement::Symbol(r.clone()))?;
                        new_ps.push(PredicateSpec {
                            name: r,
                            arity: q.arity,
                        });
                    } else {
                        new_ps.push(q.clone());
                    }
                }
                let body = Box::new(self.apply(&body, fresh)?);
                if matches!(f, Formula::ForAll2(..)) {
                    Formula::ForAll2(new_ps, body)
                } else {
                    Formula::Exists2(new_ps, body)
                }
            }
            Formula::LambdaApp(h, args) => {
                Formula::LambdaApp(Box::new(self.apply(h, fresh)?), args.clone())
            }
            Formula::MacroCall(..) => f.clone(),
        })
    }
}

/// Negation normal form: implications and equivalences eliminated, negation only on atoms.
///
/// λ-applications are β-reduced on the way. Macro calls are left in place.
pub fn nnf(f: &Formula) -> Formula {
    nnf_pol(f, false)
}

fn nnf_pol(f: &Formula, neg: bool) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) | Formula::MacroCall(..) | Formula::Lambda(..) => {
            if neg {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::True => {
            if neg {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::False => {
            if neg {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Not(a) => nnf_pol(a, !neg),
        Formula::And(xs) => {
            let parts = xs.iter().map(|x| nnf_pol(x, neg));
            if neg {
                Formula::or(parts)
            } else {
                Formula::and(parts)
            }
        }
        Formula::Or(xs) => {
            let parts = xs.iter().map(|x| nnf_pol(x, neg));
            if neg {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        Formula::Implies(a, b) => {
            if neg {
                Formula::and([nnf_pol(a, false), nnf_pol(b, true)])
            } else {
                Formula::or([nnf_pol(a, true), nnf_pol(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            if neg {
                Formula::and([
                    Formula::or([nnf_pol(a, false), nnf_pol(b, false)]),
                    Formula::or([nnf_pol(a, true), nnf_pol(b, true)]),
                ])
            } else {
                Formula::and([
                    Formula::or([nnf_pol(a, true), nnf_pol(b, false)]),
                    Formula::or([nnf_pol(b, true), nnf_pol(a, false)]),
                ])
            }
        }
        Formula::ForAll(vs, a) => {
            let body = Box::new(nnf_pol(a, neg));
            if neg {
                Formula::Exists(vs.clone(), body)
            } else {
                Formula::ForAll(vs.clone(), body)
            }
        }
        Formula::Exists(vs, a) => {
            let body = Box::new(nnf_pol(a, neg));
            if neg {
                Formula::ForAll(vs.clone(), body)
            } else {
                Formula::Exists(vs.clone(), body)
            }
        }
        Formula::ForAll2(ps, a) => {
            let body = Box::new(nnf_pol(a, neg));
            if neg {
                Formula::Exists2(ps.clone(), body)
            } else {
                Formula::ForAll2(ps.clone(), body)
            }
        }
        Formula::Exists2(ps, a) => {
            let body = Box::new(nnf_pol(a, neg));
            if neg {
                Formula::ForAll2(ps.clone(), body)
            } else {
                Formula::Exists2(ps.clone(), body)
            }
        }
        Formula::LambdaApp(h, args) => match &**h {
            Formula::Lambda(params, body) => match beta_reduce(params, body, args) {
                Ok(g) => nnf_pol(&g, neg),
                Err(_) => {
                    if neg {
                        Formula::not(f.clone())
                    } else {
                        f.clone()
                    }
                }
            },
            _ => {
                if neg {
                    Formula::not(f.clone())
                } else {
                    f.clone()
                }
            }
        },
    }
}

/// Renames bound variables and bound predicates apart.
///
/// The first binder of a name keeps it unless it clashes with a free symbol;
/// later binders of the same name get indexed variants (`x`, `x1`, ...).
pub fn rename_bound(f: &Formula) -> Formula {
    let mut fresh = FreshNames::new();
    for occ in free_symbols(f) {
        fresh.reserve(occ.symbol);
    }
    for v in free_vars(f) {
        fresh.reserve(v);
    }
    let mut scope = Scope::default();
    rename(f, &mut fresh, &mut scope)
}

#[derive(Default)]
struct Scope {
    vars: Vec<(String, String)>,
    preds: Vec<(String, String)>,
}

impl Scope {
    fn var(&self, v: &str) -> Option<&str> {
        self.vars
            .iter()
            .rev()
            .find(|(o, _)| o == v)
            .map(|(_, n)| n.as_str())
    }

    fn pred(&self, p: &str) -> Option<&str> {
        self.preds
            .iter()
            .rev()
            .find(|(o, _)| o == p)
            .map(|(_, n)| n.as_str())
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.var(v).unwrap_or(v).to_string()),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| self.term(a)).collect()),
        }
    }
}

fn rename(f: &Formula, fresh: &mut FreshNames, scope: &mut Scope) -> Formula {
    match f {
        Formula::Atom(p, args) => {
            let name = scope.pred(p).unwrap_or(p).to_string();
            Formula::Atom(name, args.iter().map(|a| scope.term(a)).collect())
        }
        Formula::Eq(s, t) => Formula::Eq(scope.term(s), scope.term(t)),
        Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::not(rename(a, fresh, scope)),
        Formula::And(xs) => Formula::and(
            xs.iter()
                .map(|x| rename(x, fresh, scope))
                .collect::<Vec<_>>(),
        ),
        Formula::Or(xs) => Formula::or(
            xs.iter()
                .map(|x| rename(x, fresh, scope))
                .collect::<Vec<_>>(),
        ),
        Formula::Implies(a, b) => {
            Formula::implies(rename(a, fresh, scope), rename(b, fresh, scope))
        }
        Formula::Iff(a, b) => Formula::iff(rename(a, fresh, scope), rename(b, fresh, scope)),
        Formula::ForAll(vs, a) | Formula::Exists(vs, a) | Formula::Lambda(vs, a) => {
            let n = scope.vars.len();
            let new_vs: Vec<String> = vs
                .iter()
                .map(|v| {
                    let r = fresh.fresh(v);
                    scope.vars.push((v.clone(), r.clone()));
                    r
                })
                .collect();
            let body = Box::new(rename(a, fresh, scope));
            scope.vars.truncate(n);
            match f {
                Formula::ForAll(..) => Formula::ForAll(new_vs, body),
                Formula::Exists(..) => Formula::Exists(new_vs, body),
                _ => Formula::Lambda(new_vs, body),
            }
        }
        Formula::ForAll2(ps, a) | Formula::Exists2(ps, a) => {
            let n = scope.preds.len();
            let new_ps: Vec<PredicateSpec> = ps
                .iter()
                .map(|p| {
                    let r = fresh.fresh(&p.name);
                    scope.preds.push((p.name.clone(), r.clone()));
                    PredicateSpec {
                        name: r,
                        arity: p.arity,
                    }
                })
                .collect();
            let body = Box::new(rename(a, fresh, scope));
            scope.preds.truncate(n);
            if matches!(f, Formula::ForAll2(..)) {
                Formula::ForAll2(new_ps, body)
            } else {
                Formula::Exists2(new_ps, body)
            }
        }
        Formula::LambdaApp(h, args) => Formula::LambdaApp(
            Box::new(rename(h, fresh, scope)),
            args.iter().map(|a| scope.term(a)).collect(),
        ),
        Formula::MacroCall(..) => f.clone(),
    }
}

/// Structural equality up to renaming of bound variables and bound predicates.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    canonical(a) == canonical(b)
}

fn canonical(f: &Formula) -> Formula {
    struct Canon {
        next: usize,
    }
    impl Canon {
        fn name(&mut self) -> String {
            self.next += 1;
            format!("#{}", self.next)
        }
    }
    fn go(f: &Formula, c: &mut Canon, scope: &mut Scope) -> Formula {
        match f {
            Formula::ForAll(vs, a) | Formula::Exists(vs, a) | Formula::Lambda(vs, a) => {
                let n = scope.vars.len();
                let new_vs: Vec<String> = vs
                    .iter()
                    .map(|v| {
                        let r = c.name();
                        scope.vars.push((v.clone(), r.clone()));
                        r
                    })
                    .collect();
                let body = Box::new(go(a, c, scope));
                scope.vars.truncate(n);
                match f {
                    Formula::ForAll(..) => Formula::ForAll(new_vs, body),
                    Formula::Exists(..) => Formula::Exists(new_vs, body),
                    _ => Formula::Lambda(new_vs, body),
                }
            }
            Formula::ForAll2(ps, a) | Formula::Exists2(ps, a) => {
                let n = scope.preds.len();
                let new_ps: Vec<PredicateSpec> = ps
                    .iter()
                    .map(|p| {
                        let r = c.name();
                        scope.preds.push((p.name.clone(), r.clone()));
                        PredicateSpec {
                            name: r,
                            arity: None,
                        }
                    })
                    .collect();
                let body = Box::new(go(a, c, scope));
                scope.preds.truncate(n);
                if matches!(f, Formula::ForAll2(..)) {
                    Formula::ForAll2(new_ps, body)
                } else {
                    Formula::Exists2(new_ps, body)
                }
            }
            Formula::Atom(p, args) => Formula::Atom(
                scope.pred(p).unwrap_or(p).to_string(),
                args.iter().map(|a| scope.term(a)).collect(),
            ),
            Formula::Eq(s, t) => Formula::Eq(scope.term(s), scope.term(t)),
            Formula::True | Formula::False | Formula::MacroCall(..) => f.clone(),
            Formula::Not(a) => Formula::not(go(a, c, scope)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| go(x, c, scope)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| go(x, c, scope)).collect()),
            Formula::Implies(a, b) => Formula::implies(go(a, c, scope), go(b, c, scope)),
            Formula::Iff(a, b) => Formula::iff(go(a, c, scope), go(b, c, scope)),
            Formula::LambdaApp(h, args) => Formula::LambdaApp(
                Box::new(go(h, c, scope)),
                args.iter().map(|a| scope.term(a)).collect(),
            ),
        }
    }
    go(f, &mut Canon { next: 0 }, &mut Scope::default())
}

/// Removes truth constants, trivial equalities, duplicate operands and vacuous quantifiers.
pub fn simplify_truth(f: &Formula) -> Formula {
    match f {
        Formula::Eq(s, t) if s == t => Formula::True,
        Formula::Atom(..)
        | Formula::Eq(..)
        | Formula::True
        | Formula::False
        | Formula::MacroCall(..) => f.clone(),
        Formula::Not(a) => simplify_truth(a).negate(),
        Formula::And(xs) => {
            let mut out: Vec<Formula> = Vec::new();
            for x in xs {
                match simplify_truth(x) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    Formula::And(inner) => {
                        for i in inner {
                            if !out.contains(&i) {
                                out.push(i)
                            }
                        }
                    }
                    g => {
                        if !out.contains(&g) {
                            out.push(g)
                        }
                    }
                }
            }
            if out.iter().any(|g| out.contains(&g.clone().negate())) {
                return Formula::False;
            }
            Formula::and(out)
        }
        Formula::Or(xs) => {
            let mut out: Vec<Formula> = Vec::new();
            for x in xs {
                match simplify_truth(x) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    Formula::Or(inner) => {
                        for i in inner {
                            if !out.contains(&i) {
                                out.push(i)
                            }
                        }
                    }
                    g => {
                        if !out.contains(&g) {
                            out.push(g)
                        }
                    }
                }
            }
            if out.iter().any(|g| out.contains(&g.clone().negate())) {
                return Formula::True;
            }
            Formula::or(out)
        }
        Formula::Implies(a, b) => match (simplify_truth(a), simplify_truth(b)) {
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (Formula::True, b) => b,
            (a, Formula::False) => a.negate(),
            (a, b) if a == b => Formula::True,
            (a, b) => Formula::implies(a, b),
        },
        Formula::Iff(a, b) => match (simplify_truth(a), simplify_truth(b)) {
            (Formula::True, x) | (x, Formula::True) => x,
            (Formula::False, x) | (x, Formula::False) => x.negate(),
            (a, b) if a == b => Formula::True,
            (a, b) => Formula::iff(a, b),
        },
        Formula::ForAll(vs, a) | Formula::Exists(vs, a) => {
            let body = simplify_truth(a);
            let fv = free_vars(&body);
            let kept: Vec<String> = vs.iter().filter(|v| fv.contains(*v)).cloned().collect();
            if matches!(f, Formula::ForAll(..)) {
                Formula::forall(kept, body)
            } else {
                Formula::exists(kept, body)
            }
        }
        Formula::ForAll2(ps, a) | Formula::Exists2(ps, a) => {
            let body = simplify_truth(a);
            let used = predicate_arities(&body);
            let kept: Vec<PredicateSpec> = ps
                .iter()
                .filter(|p| used.contains_key(&p.name))
                .cloned()
                .collect();
            if matches!(f, Formula::ForAll2(..)) {
                Formula::forall2(kept, body)
            } else {
                Formula::exists2(kept, body)
            }
        }
        Formula::Lambda(vs, a) => Formula::Lambda(vs.clone(), Box::new(simplify_truth(a))),
        Formula::LambdaApp(h, args) => {
            Formula::LambdaApp(Box::new(simplify_truth(h)), args.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str, args: &[&str]) -> Formula {
        Formula::atom(name, args.iter().map(|a| Term::constant(*a)).collect())
    }

    fn pv(name: &str, var: &str) -> Formula {
        Formula::atom(name, vec![Term::var(var)])
    }

    #[test]
    fn de_morgan_and_duality() {
        let f = Formula::not(Formula::and([Formula::prop("p"), Formula::prop("q")]));
        assert_eq!(
            nnf(&f),
            Formula::or([
                Formula::not(Formula::prop("p")),
                Formula::not(Formula::prop("q"))
            ])
        );
        let g = Formula::not(Formula::forall(vec!["x".into()], pv("p", "x")));
        assert_eq!(
            nnf(&g),
            Formula::exists(vec!["x".into()], Formula::not(pv("p", "x")))
        );
    }

    #[test]
    fn iff_positive_shape() {
        let f = Formula::iff(Formula::prop("p"), Formula::prop("q"));
        let expected = Formula::and([
            Formula::or([Formula::not(Formula::prop("p")), Formula::prop("q")]),
            Formula::or([Formula::not(Formula::prop("q")), Formula::prop("p")]),
        ]);
        assert_eq!(nnf(&f), expected);
    }

    #[test]
    fn bound_predicate_is_not_free() {
        let f = Formula::exists2(
            vec![PredicateSpec::named("p")],
            Formula::and([p("p", &["a"]), p("q", &["a"])]),
        );
        let syms: Vec<String> = free_symbols(&f).iter().map(|o| o.to_string()).collect();
        assert_eq!(syms, vec!["a/0", "q/1 (pos)"]);
        assert!(free_symbols(&Formula::True).is_empty());
    }

    #[test]
    fn rename_bound_examples() {
        let f = Formula::and([
            Formula::forall(vec!["x".into()], pv("p", "x")),
            Formula::forall(vec!["x".into()], pv("q", "x")),
        ]);
        let expected = Formula::and([
            Formula::forall(vec!["x".into()], pv("p", "x")),
            Formula::forall(vec!["x1".into()], pv("q", "x1")),
        ]);
        assert_eq!(rename_bound(&f), expected);

        let g = Formula::ForAll(
            vec!["x".into()],
            Box::new(Formula::Exists(vec!["x".into()], Box::new(pv("p", "x")))),
        );
        let h = Formula::ForAll(
            vec!["x".into()],
            Box::new(Formula::Exists(vec!["x1".into()], Box::new(pv("p", "x1")))),
        );
        assert_eq!(rename_bound(&g), h);

        let ground = Formula::and([p("p", &["a"]), Formula::not(p("q", &["b"]))]);
        assert_eq!(rename_bound(&ground), ground);
    }

    #[test]
    fn substitute_symbol_and_lambda() {
        let f = p("p", &["a"]);
        let g = substitute_predicate(
            &f,
            &PredicateSpec::named("p"),
            &PredReplacement::Symbol("q".into()),
        )
        .unwrap();
        assert_eq!(g, p("q", &["a"]));

        let edge = Formula::atom("e", vec![Term::var("x"), Term::var("y")]);
        let lam = PredReplacement::Lambda(
            vec!["u".into(), "v".into()],
            Formula::or([
                Formula::and([
                    Formula::eq(Term::var("u"), Term::constant("1")),
                    Formula::eq(Term::var("v"), Term::constant("2")),
                ]),
                Formula::and([
                    Formula::eq(Term::var("u"), Term::constant("2")),
                    Formula::eq(Term::var("v"), Term::constant("3")),
                ]),
            ]),
        );
        let out = substitute_predicate(&edge, &PredicateSpec::new("e", 2), &lam).unwrap();
        let expected = Formula::or([
            Formula::and([
                Formula::eq(Term::var("x"), Term::constant("1")),
                Formula::eq(Term::var("y"), Term::constant("2")),
            ]),
            Formula::and([
                Formula::eq(Term::var("x"), Term::constant("2")),
                Formula::eq(Term::var("y"), Term::constant("3")),
            ]),
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn lambda_arity_mismatch() {
        let lam = PredReplacement::Lambda(vec!["u".into()], Formula::True);
        let err = substitute_predicate(&p("e", &["a", "b"]), &PredicateSpec::new("e", 2), &lam)
            .unwrap_err();
        assert!(matches!(err, FormulaError::ArityMismatch { .. }));
    }

    #[test]
    fn beta_is_capture_avoiding() {
        // λu.∃x r(u,x) applied to the variable x must not capture it
        let body = Formula::exists(
            vec!["x".into()],
            Formula::atom("r", vec![Term::var("u"), Term::var("x")]),
        );
        let out = beta_reduce(&["u".to_string()], &body, &[Term::var("x")]).unwrap();
        match out {
            Formula::Exists(vs, inner) => {
                assert_ne!(vs[0], "x");
                assert_eq!(
                    *inner,
                    Formula::atom("r", vec![Term::var("x"), Term::var(vs[0].clone())])
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn substitution_renames_capturing_predicate_binder() {
        // ∃q (p(a) ∧ q(a)) with p ↦ q: the binder must move out of the way
        let f = Formula::exists2(
            vec![PredicateSpec::named("q")],
            Formula::and([p("p", &["a"]), p("q", &["a"])]),
        );
        let g = substitute_predicate(
            &f,
            &PredicateSpec::named("p"),
            &PredReplacement::Symbol("q".into()),
        )
        .unwrap();
        let free: Vec<String> = free_symbols(&g).iter().map(|o| o.symbol.clone()).collect();
        assert!(free.contains(&"q".to_string()));
        match g {
            Formula::Exists2(ps, _) => assert_ne!(ps[0].name, "q"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplify_truth_absorbs() {
        let f = Formula::and([
            Formula::True,
            Formula::or([Formula::prop("p"), Formula::False]),
        ]);
        assert_eq!(simplify_truth(&f), Formula::prop("p"));
        let g = Formula::implies(Formula::False, Formula::prop("p"));
        assert_eq!(simplify_truth(&g), Formula::True);
    }
}
