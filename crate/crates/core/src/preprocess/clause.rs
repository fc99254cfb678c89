use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::formula::{Formula, Term};

/// The atom of a literal. Equalities keep their two sides in term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LitAtom {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
}

impl LitAtom {
    pub fn eq(s: Term, t: Term) -> LitAtom {
        if s <= t {
            LitAtom::Eq(s, t)
        } else {
            LitAtom::Eq(t, s)
        }
    }

    pub fn predicate(&self) -> Option<(&str, usize)> {
        match self {
            LitAtom::Pred(p, args) => Some((p, args.len())),
            LitAtom::Eq(..) => None,
        }
    }

    pub fn args(&self) -> Vec<&Term> {
        match self {
            LitAtom::Pred(_, args) => args.iter().collect(),
            LitAtom::Eq(s, t) => vec![s, t],
        }
    }

    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> LitAtom {
        match self {
            LitAtom::Pred(p, args) => LitAtom::Pred(p.clone(), args.iter().map(f).collect()),
            LitAtom::Eq(s, t) => LitAtom::eq(f(s), f(t)),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            LitAtom::Pred(p, args) => Formula::Atom(p.clone(), args.clone()),
            LitAtom::Eq(s, t) => Formula::Eq(s.clone(), t.clone()),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for t in self.args() {
            t.collect_vars(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: LitAtom,
}

impl Literal {
    pub fn pos(atom: LitAtom) -> Literal {
        Literal {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: LitAtom) -> Literal {
        Literal {
            positive: false,
            atom,
        }
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.atom == other.atom
    }

    pub fn to_formula(&self) -> Formula {
        let a = self.atom.to_formula();
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }

    /// Reads a literal formula: an atom, an equality or the negation of one.
    pub fn from_formula(f: &Formula) -> Option<Literal> {
        match f {
            Formula::Atom(p, args) => Some(Literal::pos(LitAtom::Pred(p.clone(), args.clone()))),
            Formula::Eq(s, t) => Some(Literal::pos(LitAtom::eq(s.clone(), t.clone()))),
            Formula::Not(inner) => Literal::from_formula(inner)
                .filter(|l| l.positive)
                .map(|l| l.complement()),
            _ => None,
        }
    }

    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Literal {
        Literal {
            positive: self.positive,
            atom: self.atom.map_terms(f),
        }
    }

    pub fn substitute(&self, map: &HashMap<String, Term>) -> Literal {
        self.map_terms(&|t| t.substitute(&|v| map.get(v).cloned()))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub origin: Option<usize>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Clause {
        let mut c = Clause {
            literals: Vec::new(),
            origin: None,
        };
        for l in literals {
            if !c.literals.contains(&l) {
                c.literals.push(l);
            }
        }
        c
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.literals.iter().enumerate().any(|(i, l)| {
            self.literals[i + 1..].iter().any(|m| l.is_complement_of(m))
                || matches!(&l.atom, LitAtom::Eq(s, t) if s == t && l.positive)
        })
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.atom.collect_vars(&mut out);
        }
        out
    }

    pub fn substitute(&self, map: &HashMap<String, Term>) -> Clause {
        let mut c = Clause::new(self.literals.iter().map(|l| l.substitute(map)).collect());
        c.origin = self.origin;
        c
    }

    /// Renames variables back to their unindexed stems where that causes no clash.
    pub fn tidy_variables(&self) -> Clause {
        let vars = self.vars();
        let mut taken: BTreeSet<String> = BTreeSet::new();
        let mut map: HashMap<String, Term> = HashMap::new();
        for v in &vars {
            let stem = v.trim_end_matches(|ch: char| ch.is_ascii_digit());
            let stem = if stem.is_empty() { v.as_str() } else { stem };
            let name = std::iter::once(stem.to_string())
                .chain((1..).map(|n| format!("{stem}{n}")))
                .find(|n| !taken.contains(n) && (n == v || !vars.contains(n)))
                .unwrap();
            taken.insert(name.clone());
            map.insert(v.clone(), Term::var(name));
        }
        self.substitute(&map)
    }

    /// The disjunction of the literals, without quantifiers.
    pub fn to_formula(&self) -> Formula {
        Formula::or(self.literals.iter().map(Literal::to_formula))
    }

    pub fn mentions(&self, pred: &str) -> bool {
        self.literals
            .iter()
            .any(|l| l.atom.predicate().is_some_and(|(p, _)| p == pred))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A Skolem function together with the universal variables it depends on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Skolem {
    pub name: String,
    pub arity: usize,
    pub deps: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClausalForm {
    pub clauses: Vec<Clause>,
    pub skolems: Vec<Skolem>,
    /// Predicates introduced by definitional clausification.
    pub definitions: Vec<String>,
}

impl ClausalForm {
    pub fn new(clauses: Vec<Clause>) -> ClausalForm {
        ClausalForm {
            clauses,
            skolems: Vec::new(),
            definitions: Vec::new(),
        }
    }

    pub fn is_skolem(&self, name: &str) -> bool {
        self.skolems.iter().any(|s| s.name == name)
    }

    /// Conjunction of the universal closures of the clauses.
    pub fn to_formula(&self) -> Formula {
        Formula::and(self.clauses.iter().map(|c| {
            let vars: Vec<String> = c.vars().into_iter().collect();
            Formula::forall(vars, c.to_formula())
        }))
    }

    /// Predicate arities over all clauses.
    pub fn predicates(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in &self.clauses {
            for l in &c.literals {
                if let Some((p, n)) = l.atom.predicate() {
                    out.insert(p.to_string(), n);
                }
            }
        }
        out
    }

    pub fn is_propositional(&self) -> bool {
        self.clauses.iter().all(|c| {
            c.literals
                .iter()
                .all(|l| matches!(&l.atom, LitAtom::Pred(_, a) if a.is_empty()))
        })
    }
}

impl fmt::Display for ClausalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
