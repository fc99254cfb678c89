//! Finite countermodels by grounding over small domains and SAT solving.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::AtomicBool;
use std::time::Instant;

use super::sat::{solve_cnf, Cnf, SatResult};
use crate::formula::{beta_reduce, free_vars, symbol_names, Formula, Term};
use crate::preprocess::{clausify, ClausifyMode, LitAtom};

/// A finite interpretation over the domain `0..domain_size`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub domain_size: usize,
    /// Every predicate with the tuples it holds for; a true nullary predicate holds for `[]`.
    pub predicates: BTreeMap<String, BTreeSet<Vec<usize>>>,
    /// Functions and constants as tables from argument tuples to values.
    pub functions: BTreeMap<String, BTreeMap<Vec<usize>, usize>>,
}

impl Model {
    fn term(&self, t: &Term, env: &HashMap<String, usize>) -> usize {
        match t {
            Term::Var(v) => env.get(v).copied().unwrap_or(0),
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.functions
                    .get(f)
                    .and_then(|m| m.get(&vals))
                    .copied()
                    .unwrap_or(0)
            }
        }
    }

    /// Truth value of a first-order formula; free variables denote element 0.
    /// Second-order constructs give `None`.
    pub fn evaluate(&self, f: &Formula) -> Option<bool> {
        self.eval(f, &mut HashMap::new())
    }

    fn eval(&self, f: &Formula, env: &mut HashMap<String, usize>) -> Option<bool> {
        Some(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.predicates.get(p).is_some_and(|s| s.contains(&vals))
            }
            Formula::Eq(s, t) => self.term(s, env) == self.term(t, env),
            Formula::Not(g) => !self.eval(g, env)?,
            Formula::And(xs) => {
                for x in xs {
                    if !self.eval(x, env)? {
                        return Some(false);
                    }
                }
                true
            }
            Formula::Or(xs) => {
                for x in xs {
                    if self.eval(x, env)? {
                        return Some(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            Formula::Iff(a, b) => self.eval(a, env)? == self.eval(b, env)?,
            Formula::ForAll(vs, body) => self.quantify(vs, body, env, true)?,
            Formula::Exists(vs, body) => self.quantify(vs, body, env, false)?,
            Formula::LambdaApp(head, args) => match &**head {
                Formula::Lambda(params, body) => {
                    self.eval(&beta_reduce(params, body, args).ok()?, env)?
                }
                Formula::Atom(p, none) if none.is_empty() => {
                    self.eval(&Formula::Atom(p.clone(), args.clone()), env)?
                }
                _ => return None,
            },
            _ => return None,
        })
    }

    fn quantify(
        &self,
        vs: &[String],
        body: &Formula,
        env: &mut HashMap<String, usize>,
        universal: bool,
    ) -> Option<bool> {
        let Some((v, rest)) = vs.split_first() else {
            return self.eval(body, env);
        };
        let saved = env.get(v).copied();
        let mut result = universal;
        for d in 0..self.domain_size.max(1) {
            env.insert(v.clone(), d);
            let r = self.quantify(rest, body, env, universal);
            match r {
                None => {
                    restore(env, v, saved);
                    return None;
                }
                Some(b) if b != universal => {
                    result = b;
                    break;
                }
                _ => {}
            }
        }
        restore(env, v, saved);
        Some(result)
    }

    /// Keeps only the symbols in `names`.
    fn restrict(mut self, names: &std::collections::HashSet<String>) -> Model {
        self.predicates.retain(|p, _| names.contains(p));
        self.functions.retain(|f, _| names.contains(f));
        self
    }
}

fn restore(env: &mut HashMap<String, usize>, v: &str, saved: Option<usize>) {
    match saved {
        Some(d) => env.insert(v.to_string(), d),
        None => env.remove(v),
    };
}

fn tuple(t: &[usize]) -> String {
    match t {
        [one] => one.to_string(),
        _ => format!(
            "({})",
            t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        ),
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let domain: Vec<String> = (0..self.domain_size).map(|d| d.to_string()).collect();
        write!(f, "domain {{{}}}", domain.join(", "))?;
        for (p, set) in &self.predicates {
            if set.iter().all(Vec::is_empty) && !set.is_empty() {
                write!(f, "; {p} true")?;
            } else {
                let items: Vec<String> = set.iter().map(|t| tuple(t)).collect();
                write!(f, "; {p} = {{{}}}", items.join(", "))?;
            }
        }
        for (g, table) in &self.functions {
            if let Some(v) = table.get(&Vec::new()) {
                write!(f, "; {g} = {v}")?;
            } else {
                let items: Vec<String> = table
                    .iter()
                    .map(|(k, v)| format!("{}->{v}", tuple(k)))
                    .collect();
                write!(f, "; {g} = {{{}}}", items.join(", "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum FlatLit {
    Pred(bool, String, Vec<usize>),
    Eq(bool, usize, usize),
    /// `f(args) != value`
    NotFun(String, Vec<usize>, usize),
}

struct FlatClause {
    lits: Vec<FlatLit>,
    nvars: usize,
}

fn flatten(c: &crate::preprocess::Clause) -> FlatClause {
    let mut vars: HashMap<String, usize> = HashMap::new();
    let mut extra = Vec::new();
    fn term(
        t: &Term,
        vars: &mut HashMap<String, usize>,
        counter: &mut usize,
        extra: &mut Vec<FlatLit>,
    ) -> usize {
        match t {
            Term::Var(v) => *vars.entry(v.clone()).or_insert_with(|| {
                *counter += 1;
                *counter - 1
            }),
            Term::App(f, args) => {
                let xs: Vec<usize> = args.iter().map(|a| term(a, vars, counter, extra)).collect();
                let w = *counter;
                *counter += 1;
                extra.push(FlatLit::NotFun(f.clone(), xs, w));
                w
            }
        }
    }
    let mut counter = 0;
    let mut lits = Vec::new();
    for l in &c.literals {
        match &l.atom {
            LitAtom::Pred(p, args) => {
                let xs = args
                    .iter()
                    .map(|a| term(a, &mut vars, &mut counter, &mut extra))
                    .collect();
                lits.push(FlatLit::Pred(l.positive, p.clone(), xs));
            }
            LitAtom::Eq(s, t) => {
                let a = term(s, &mut vars, &mut counter, &mut extra);
                let b = term(t, &mut vars, &mut counter, &mut extra);
                lits.push(FlatLit::Eq(l.positive, a, b));
            }
        }
    }
    lits.extend(extra);
    FlatClause {
        lits,
        nvars: counter,
    }
}

const GROUND_LIMIT: usize = 3_000_000;

#[derive(PartialEq, Eq, Hash)]
enum AtomKey {
    Pred(String, Vec<usize>),
    Fun(String, Vec<usize>, usize),
}

struct Grounder {
    cnf: Cnf,
    atoms: HashMap<AtomKey, i32>,
    functions: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
}

impl Grounder {
    fn atom(&mut self, key: AtomKey) -> i32 {
        if let Some(&v) = self.atoms.get(&key) {
            return v;
        }
        let v = self.cnf.new_var();
        self.atoms.insert(key, v);
        v
    }
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| (0..n).map(move |d| [t.clone(), vec![d]].concat()))
            .collect();
    }
    out
}

fn ground(clauses: &[FlatClause], n: usize, constants: &[String]) -> Option<Grounder> {
    let size: usize = clauses
        .iter()
        .map(|c| {
            n.saturating_pow(c.nvars as u32)
                .saturating_mul(c.lits.len().max(1))
        })
        .fold(0, usize::saturating_add);
    if size > GROUND_LIMIT {
        return None;
    }
    let mut g = Grounder {
        cnf: Cnf::default(),
        atoms: HashMap::new(),
        functions: BTreeMap::new(),
        predicates: BTreeMap::new(),
    };
    for c in clauses {
        for l in &c.lits {
            match l {
                FlatLit::Pred(_, p, xs) => {
                    g.predicates.insert(p.clone(), xs.len());
                }
                FlatLit::NotFun(f, xs, _) => {
                    g.functions.insert(f.clone(), xs.len());
                }
                FlatLit::Eq(..) => {}
            }
        }
        'assignments: for asg in tuples(n, c.nvars) {
            let mut out = Vec::with_capacity(c.lits.len());
            for l in &c.lits {
                match l {
                    FlatLit::Eq(pos, a, b) => {
                        if (asg[*a] == asg[*b]) == *pos {
                            continue 'assignments;
                        }
                    }
                    FlatLit::Pred(pos, p, xs) => {
                        let v = g.atom(AtomKey::Pred(
                            p.clone(),
                            xs.iter().map(|&x| asg[x]).collect(),
                        ));
                        out.push(if *pos { v } else { -v });
                    }
                    FlatLit::NotFun(f, xs, w) => {
                        let v = g.atom(AtomKey::Fun(
                            f.clone(),
                            xs.iter().map(|&x| asg[x]).collect(),
                            asg[*w],
                        ));
                        out.push(-v);
                    }
                }
            }
            g.cnf.add(out);
        }
    }
    let functions: Vec<(String, usize)> =
        g.functions.iter().map(|(f, k)| (f.clone(), *k)).collect();
    for (f, k) in functions {
        let rank = constants.iter().position(|c| *c == f).filter(|_| k == 0);
        for args in tuples(n, k) {
            let vs: Vec<i32> = (0..n)
                .map(|d| g.atom(AtomKey::Fun(f.clone(), args.clone(), d)))
                .collect();
            let allowed = rank.map_or(n, |i| (i + 1).min(n));
            g.cnf.add(vs[..allowed].to_vec());
            for a in 0..n {
                for b in a + 1..n {
                    g.cnf.add(vec![-vs[a], -vs[b]]);
                }
            }
        }
    }
    Some(g)
}

fn constants_in_order(f: &Formula) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    fn term(t: &Term, out: &mut Vec<String>) {
        if let Term::App(c, args) = t {
            if args.is_empty() && !out.contains(c) {
                out.push(c.clone());
            }
            args.iter().for_each(|a| term(a, out));
        }
    }
    f.visit(&mut |g| match g {
        Formula::Atom(_, args) | Formula::LambdaApp(_, args) => {
            args.iter().for_each(|a| term(a, &mut out))
        }
        Formula::Eq(s, t) => {
            term(s, &mut out);
            term(t, &mut out);
        }
        _ => {}
    });
    out
}

/// A model of `¬∀f` with at most `max_domain` elements, if one exists.
pub fn find_countermodel(f: &Formula, max_domain: usize) -> Option<Model> {
    find_countermodel_with(f, max_domain, None, None)
}

pub(super) fn find_countermodel_with(
    f: &Formula,
    max_domain: usize,
    deadline: Option<Instant>,
    cancel: Option<&AtomicBool>,
) -> Option<Model> {
    let closed = Formula::forall(free_vars(f).into_iter().collect(), f.clone());
    let negated = Formula::not(closed.clone());
    let cf = clausify(&negated, ClausifyMode::Definitional).ok()?;
    let flat: Vec<FlatClause> = cf.clauses.iter().map(flatten).collect();
    let constants = constants_in_order(&negated);
    let names = symbol_names(f);
    for n in 1..=max_domain.max(1) {
        let g = ground(&flat, n, &constants)?;
        match solve_cnf(&g.cnf, deadline, cancel) {
            SatResult::Sat(values) => {
                let mut m = Model {
                    domain_size: n,
                    ..Model::default()
                };
                for p in g.predicates.keys() {
                    m.predicates.insert(p.clone(), BTreeSet::new());
                }
                for (key, v) in &g.atoms {
                    if !values[*v as usize] {
                        continue;
                    }
                    match key {
                        AtomKey::Pred(p, t) => {
                            m.predicates.entry(p.clone()).or_default().insert(t.clone());
                        }
                        AtomKey::Fun(fname, t, d) => {
                            m.functions
                                .entry(fname.clone())
                                .or_default()
                                .insert(t.clone(), *d);
                        }
                    }
                }
                let m = m.restrict(&names);
                return (m.evaluate(&negated) == Some(true)).then_some(m);
            }
            SatResult::Unsat => continue,
            SatResult::Unknown => return None,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn implication_has_countermodel() {
        let f = parse_formula("p -> q").unwrap();
        let m = find_countermodel(&f, 4).unwrap();
        assert_eq!(m.evaluate(&f), Some(false));
        assert_eq!(m.to_string(), "domain {0}; p true; q = {}");
    }

    #[test]
    fn valid_formula_has_none() {
        assert!(find_countermodel(&parse_formula("all(x, p(x)) -> p(a)").unwrap(), 4).is_none());
        assert!(find_countermodel(&parse_formula("a = b -> (p(a) -> p(b))").unwrap(), 3).is_none());
    }

    #[test]
    fn needs_two_elements() {
        let f = parse_formula("all(x, all(y, x = y))").unwrap();
        let m = find_countermodel(&f, 4).unwrap();
        assert_eq!(m.domain_size, 2);
        let g = parse_formula("ex(x, p(f(x))) -> p(a)").unwrap();
        let m = find_countermodel(&g, 4).unwrap();
        assert_eq!(m.evaluate(&g), Some(false));
    }
}
