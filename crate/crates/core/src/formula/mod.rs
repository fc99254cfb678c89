//! The formula and term data model.
//!
//! Formulas are plain immutable trees. Conjunction and disjunction are n-ary
//! and kept flat by the smart constructors ([`Formula::and`], [`Formula::or`]);
//! every module that builds formulas goes through those constructors so that
//! structural equality is meaningful.

mod fresh;
mod ops;

pub use fresh::FreshNames;
pub use ops::{
    alpha_eq, beta_reduce, free_symbols, free_vars, nnf, predicate_arities, rename_bound,
    simplify_truth, substitute_predicate, substitute_vars, symbol_names, FormulaError,
    PredReplacement,
};

use std::collections::BTreeSet;
use std::fmt;

/// A first-order term. Constants are zero-arity applications.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Replaces variables according to `map`; unmapped variables stay.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
        }
    }
}

/// A predicate symbol together with its arity, when known.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateSpec {
    pub name: String,
    pub arity: Option<usize>,
}

impl PredicateSpec {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredicateSpec {
            name: name.into(),
            arity: Some(arity),
        }
    }

    pub fn named(name: impl Into<String>) -> Self {
        PredicateSpec {
            name: name.into(),
            arity: None,
        }
    }
}

impl fmt::Display for PredicateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.arity {
            Some(n) => write!(f, "{}/{}", self.name, n),
            None => f.write_str(&self.name),
        }
    }
}

/// An argument of a macro call, which may be a formula, a term or a list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MacroArg {
    Formula(Formula),
    Term(Term),
    List(Vec<MacroArg>),
}

impl MacroArg {
    /// Reads the argument in formula position.
    pub fn to_formula(&self) -> Option<Formula> {
        match self {
            MacroArg::Formula(f) => Some(f.clone()),
            MacroArg::Term(Term::App(name, args)) => {
                Some(Formula::Atom(name.clone(), args.clone()))
            }
            MacroArg::Term(Term::Var(_)) => None,
            MacroArg::List(_) => None,
        }
    }

    /// Reads the argument in term position.
    pub fn to_term(&self) -> Option<Term> {
        match self {
            MacroArg::Term(t) => Some(t.clone()),
            MacroArg::Formula(Formula::Atom(name, args)) => {
                Some(Term::App(name.clone(), args.clone()))
            }
            _ => None,
        }
    }

    /// Reads the argument as a bare symbol name.
    pub fn to_symbol(&self) -> Option<String> {
        match self {
            MacroArg::Term(Term::App(name, args)) if args.is_empty() => Some(name.clone()),
            MacroArg::Term(Term::Var(name)) => Some(name.clone()),
            MacroArg::Formula(Formula::Atom(name, args)) if args.is_empty() => Some(name.clone()),
            _ => None,
        }
    }

    /// Reads the argument as a list of symbols; a single symbol is a one-element list.
    pub fn to_symbol_list(&self) -> Option<Vec<String>> {
        match self {
            MacroArg::List(items) => items.iter().map(MacroArg::to_symbol).collect(),
            other => other.to_symbol().map(|s| vec![s]),
        }
    }
}

/// A first- or second-order formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    True,
    False,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    ForAll2(Vec<PredicateSpec>, Box<Formula>),
    Exists2(Vec<PredicateSpec>, Box<Formula>),
    Lambda(Vec<String>, Box<Formula>),
    MacroCall(String, Vec<MacroArg>),
    LambdaApp(Box<Formula>, Vec<Term>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.into(), args)
    }

    /// A nullary atom.
    pub fn prop(pred: impl Into<String>) -> Formula {
        Formula::Atom(pred.into(), Vec::new())
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Flattening conjunction; the empty conjunction is `True` and a singleton is its element.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Flattening disjunction; the empty disjunction is `False`.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            return body;
        }
        match body {
            Formula::ForAll(inner, b) if inner.iter().all(|v| !vars.contains(v)) => {
                let mut all = vars;
                all.extend(inner);
                Formula::ForAll(all, b)
            }
            body => Formula::ForAll(vars, Box::new(body)),
        }
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            return body;
        }
        match body {
            Formula::Exists(inner, b) if inner.iter().all(|v| !vars.contains(v)) => {
                let mut all = vars;
                all.extend(inner);
                Formula::Exists(all, b)
            }
            body => Formula::Exists(vars, Box::new(body)),
        }
    }

    pub fn forall2(preds: Vec<PredicateSpec>, body: Formula) -> Formula {
        if preds.is_empty() {
            body
        } else {
            Formula::ForAll2(preds, Box::new(body))
        }
    }

    pub fn exists2(preds: Vec<PredicateSpec>, body: Formula) -> Formula {
        if preds.is_empty() {
            body
        } else {
            Formula::Exists2(preds, Box::new(body))
        }
    }

    pub fn lambda(params: Vec<String>, body: Formula) -> Formula {
        Formula::Lambda(params, Box::new(body))
    }

    /// Negation that cancels a double negation and flips truth constants.
    pub fn negate(self) -> Formula {
        match self {
            Formula::Not(inner) => *inner,
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            other => Formula::not(other),
        }
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::True | Formula::False => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom(..) | Formula::Eq(..)),
            _ => false,
        }
    }

    /// True when the formula contains no predicate quantifiers, λ-terms or macro calls.
    pub fn is_first_order(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(
                f,
                Formula::ForAll2(..)
                    | Formula::Exists2(..)
                    | Formula::Lambda(..)
                    | Formula::MacroCall(..)
                    | Formula::LambdaApp(..)
            ) {
                ok = false;
            }
        });
        ok
    }

    pub fn has_macro_calls(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::MacroCall(..)) {
                found = true;
            }
        });
        found
    }

    /// Pre-order traversal over all subformulas, including those inside macro arguments.
    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a)
            | Formula::ForAll(_, a)
            | Formula::Exists(_, a)
            | Formula::ForAll2(_, a)
            | Formula::Exists2(_, a)
            | Formula::Lambda(_, a) => a.visit(f),
            Formula::LambdaApp(h, _) => h.visit(f),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.visit(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::MacroCall(_, args) => {
                fn walk(arg: &MacroArg, f: &mut dyn FnMut(&Formula)) {
                    match arg {
                        MacroArg::Formula(x) => x.visit(f),
                        MacroArg::List(items) => items.iter().for_each(|i| walk(i, f)),
                        MacroArg::Term(_) => {}
                    }
                }
                args.iter().for_each(|a| walk(a, f));
            }
            Formula::Atom(..) | Formula::Eq(..) | Formula::True | Formula::False => {}
        }
    }

    /// Applies `f` to every term directly below an atom or equality.
    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Formula {
        self.map_atoms(&|a| match a {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(f).collect()),
            Formula::Eq(s, t) => Formula::Eq(f(s), f(t)),
            other => other.clone(),
        })
    }

    /// Rebuilds the formula, replacing every atom and equality by `f(atom)`.
    pub fn map_atoms(&self, f: &dyn Fn(&Formula) -> Formula) -> Formula {
        match self {
            Formula::Atom(..) | Formula::Eq(..) => f(self),
            Formula::True | Formula::False | Formula::MacroCall(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            Formula::And(xs) => Formula::and(xs.iter().map(|x| x.map_atoms(f))),
            Formula::Or(xs) => Formula::or(xs.iter().map(|x| x.map_atoms(f))),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::ForAll(v, a) => Formula::ForAll(v.clone(), Box::new(a.map_atoms(f))),
            Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(a.map_atoms(f))),
            Formula::ForAll2(p, a) => Formula::ForAll2(p.clone(), Box::new(a.map_atoms(f))),
            Formula::Exists2(p, a) => Formula::Exists2(p.clone(), Box::new(a.map_atoms(f))),
            Formula::Lambda(v, a) => Formula::Lambda(v.clone(), Box::new(a.map_atoms(f))),
            Formula::LambdaApp(h, args) => {
                Formula::LambdaApp(Box::new(h.map_atoms(f)), args.clone())
            }
        }
    }

    /// Number of nodes, counting terms as one.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::to_text(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::term_to_text(self))
    }
}

/// Whether an occurrence sits under an even or odd number of negations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
    Both,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            Polarity::Both => Polarity::Both,
        }
    }

    pub fn join(self, other: Polarity) -> Polarity {
        if self == other {
            self
        } else {
            Polarity::Both
        }
    }

    /// True when every polarity in `self` is also present in `other`.
    pub fn within(self, other: Polarity) -> bool {
        self == other || other == Polarity::Both
    }

    pub fn meet(self, other: Polarity) -> Option<Polarity> {
        match (self, other) {
            (Polarity::Both, p) | (p, Polarity::Both) => Some(p),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Predicate,
    Function,
}

/// A free symbol of a formula. Function symbols always report `Both`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarityOccurrence {
    pub symbol: String,
    pub kind: SymbolKind,
    pub arity: usize,
    pub polarity: Polarity,
}

impl fmt::Display for PolarityOccurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pol = match (self.kind, self.polarity) {
            (SymbolKind::Function, _) => "",
            (_, Polarity::Positive) => " (pos)",
            (_, Polarity::Negative) => " (neg)",
            (_, Polarity::Both) => " (both)",
        };
        write!(f, "{}/{}{}", self.symbol, self.arity, pol)
    }
}

/// Names that start with an uppercase letter or underscore are macro placeholders.
pub fn is_placeholder(name: &str) -> bool {
    name.chars()
        .next()
        .is_some_and(|c| c.is_uppercase() || c == '_')
}
