//! Second-order quantifier elimination with Ackermann's lemma.

mod ackermann;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::formula::{
    free_symbols, nnf, simplify_truth, substitute_predicate, Formula, PredReplacement,
    PredicateSpec, SymbolKind, Term,
};
use crate::macros::beta_normalize;
use crate::preprocess::{
    apply_stages, clausify, reform, simplify_clausal, unskolemize, ClausalForm, Clause,
    ClausifyMode, LitAtom, Literal, ProtectedVocabulary, Stage,
};

pub use ackermann::{ackermann_rewrite, NotAckermannForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOptions {
    /// Conversions applied to the body of each quantifier before elimination.
    pub pre: Vec<Stage>,
    /// Conversions applied to the final result.
    pub simp_result: Vec<Stage>,
    /// Largest number of case-split branches explored per predicate.
    pub branch_bound: usize,
    pub timeout: Duration,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        EliminationOptions {
            pre: Vec::new(),
            simp_result: Vec::new(),
            branch_bound: 64,
            timeout: Duration::from_secs(10),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    NonReducible,
    Resources,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::NonReducible => "no Ackermann form reached",
            FailureReason::Resources => "resource bound exceeded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EliminationOutcome {
    Success(Formula),
    Failure {
        reason: FailureReason,
        residue: Formula,
    },
}

impl EliminationOutcome {
    pub fn formula(&self) -> Option<&Formula> {
        match self {
            EliminationOutcome::Success(f) => Some(f),
            EliminationOutcome::Failure { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("elimination failed ({reason}): {residue}")]
pub struct EliminationError {
    pub reason: FailureReason,
    pub residue: Formula,
}

struct Budget {
    branches: usize,
    bound: usize,
    deadline: Instant,
}

impl Budget {
    fn exceeded(&self) -> Option<FailureReason> {
        if Instant::now() >= self.deadline {
            Some(FailureReason::Resources)
        } else if self.branches > self.bound {
            Some(FailureReason::NonReducible)
        } else {
            None
        }
    }
}

/// Eliminates every second-order quantifier of `f`, innermost first.
pub fn eliminate(f: &Formula, opts: &EliminationOptions) -> EliminationOutcome {
    let deadline = Instant::now() + opts.timeout;
    let f = match beta_normalize(f) {
        Ok(g) => g,
        Err(_) => {
            return EliminationOutcome::Failure {
                reason: FailureReason::NonReducible,
                residue: f.clone(),
            }
        }
    };
    match walk(&f, opts, deadline) {
        Ok(g) => EliminationOutcome::Success(apply_stages(&opts.simp_result, &simplify_truth(&g))),
        Err((reason, residue)) => EliminationOutcome::Failure { reason, residue },
    }
}

type Failure = (FailureReason, Formula);

fn walk(f: &Formula, opts: &EliminationOptions, deadline: Instant) -> Result<Formula, Failure> {
    let rec = |g: &Formula| walk(g, opts, deadline);
    Ok(match f {
        Formula::Not(g) => Formula::not(rec(g)?),
        Formula::And(xs) => Formula::and(xs.iter().map(rec).collect::<Result<Vec<_>, _>>()?),
        Formula::Or(xs) => Formula::or(xs.iter().map(rec).collect::<Result<Vec<_>, _>>()?),
        Formula::Implies(a, b) => Formula::implies(rec(a)?, rec(b)?),
        Formula::Iff(a, b) => Formula::iff(rec(a)?, rec(b)?),
        Formula::ForAll(vs, b) => Formula::forall(vs.clone(), rec(b)?),
        Formula::Exists(vs, b) => Formula::exists(vs.clone(), rec(b)?),
        Formula::Exists2(ps, body) => {
            let mut g = rec(body)?;
            for (i, p) in ps.iter().enumerate() {
                g = eliminate_one(&p.name, &apply_stages(&opts.pre, &g), opts, deadline)
                    .map_err(|reason| (reason, Formula::exists2(ps[i..].to_vec(), g.clone())))?;
            }
            g
        }
        Formula::ForAll2(ps, body) => {
            let inner = rec(&Formula::not((**body).clone()))?;
            let mut g = inner;
            for (i, p) in ps.iter().enumerate() {
                g = eliminate_one(&p.name, &apply_stages(&opts.pre, &g), opts, deadline).map_err(
                    |reason| {
                        (
                            reason,
                            Formula::not(Formula::exists2(ps[i..].to_vec(), g.clone())),
                        )
                    },
                )?;
            }
            simplify_truth(&nnf(&Formula::not(g)))
        }
        other => other.clone(),
    })
}

fn predicates(f: &Formula) -> BTreeSet<String> {
    free_symbols(f)
        .into_iter()
        .filter(|o| o.kind == SymbolKind::Predicate)
        .map(|o| o.symbol)
        .collect()
}

/// A first-order formula equivalent to `∃p f`.
fn eliminate_one(
    p: &str,
    f: &Formula,
    opts: &EliminationOptions,
    deadline: Instant,
) -> Result<Formula, FailureReason> {
    if !predicates(f).contains(p) {
        return Ok(f.clone());
    }
    let cf = clausify(f, ClausifyMode::Equivalence).map_err(|_| FailureReason::NonReducible)?;
    let mut keep = predicates(f);
    keep.remove(p);
    let protect = ProtectedVocabulary::Only(keep);
    let mut budget = Budget {
        branches: 1,
        bound: opts.branch_bound,
        deadline,
    };
    let branches = eliminate_clauses(cf.clauses.clone(), p, &protect, &mut budget)?;
    let mut simplified = Vec::new();
    for clauses in branches {
        let clauses = clauses.iter().map(Clause::tidy_variables).collect();
        let cf = simplify_clausal(
            &ClausalForm {
                clauses,
                skolems: cf.skolems.clone(),
                definitions: Vec::new(),
            },
            &ProtectedVocabulary::All,
        );
        if !cf.clauses.iter().any(Clause::is_empty) {
            simplified.push(cf);
        }
    }
    // a branch whose clauses include all clauses of another branch adds nothing to the disjunction
    let keys: Vec<BTreeSet<String>> = simplified
        .iter()
        .map(|cf| cf.clauses.iter().map(clause_key).collect())
        .collect();
    let mut parts = Vec::new();
    for (i, cf) in simplified.iter().enumerate() {
        let absorbed = keys
            .iter()
            .enumerate()
            .any(|(j, k)| j != i && k.is_subset(&keys[i]) && (k != &keys[i] || j < i));
        if !absorbed {
            parts.push(unskolemize(cf).map_err(|_| FailureReason::NonReducible)?);
        }
    }
    Ok(simplify_truth(&reform(&Formula::or(parts))))
}

fn clause_key(c: &Clause) -> String {
    let mut lits: Vec<String> = c.literals.iter().map(|l| l.to_string()).collect();
    lits.sort();
    lits.join(" ; ")
}

/// Clause sets whose disjunction is equivalent to `∃p clauses`, none mentioning `p`.
fn eliminate_clauses(
    clauses: Vec<Clause>,
    p: &str,
    protect: &ProtectedVocabulary,
    budget: &mut Budget,
) -> Result<Vec<Vec<Clause>>, FailureReason> {
    if let Some(reason) = budget.exceeded() {
        return Err(reason);
    }
    let clauses = simplify_clausal(&ClausalForm::new(clauses), protect).clauses;
    if clauses.iter().any(Clause::is_empty) {
        return Ok(Vec::new());
    }
    if !clauses.iter().any(|c| c.mentions(p)) {
        return Ok(vec![clauses]);
    }
    for positive in [true, false] {
        if let Some(out) = ackermann::ackermann_clauses(&clauses, p, positive) {
            return Ok(vec![out]);
        }
    }
    let Some(atom) = split_atom(&clauses, p) else {
        return Err(FailureReason::NonReducible);
    };
    let mut out = Vec::new();
    for positive in [true, false] {
        budget.branches += 1;
        let mut branch = clauses.clone();
        branch.push(Clause::new(vec![Literal {
            positive,
            atom: atom.clone(),
        }]));
        out.extend(eliminate_clauses(branch, p, protect, budget)?);
    }
    Ok(out)
}

/// A ground `p` atom from a clause that blocks both Ackermann forms.
fn split_atom(clauses: &[Clause], p: &str) -> Option<LitAtom> {
    let blocking = |c: &&Clause| {
        let (pos, neg) = ackermann::occurrences(c, p);
        (pos > 0 && neg > 0) || pos > 1 || neg > 1
    };
    let ground = |c: &Clause| {
        c.literals
            .iter()
            .find(|l| matches!(&l.atom, LitAtom::Pred(q, args) if q == p && args.iter().all(Term::is_ground)))
            .map(|l| l.atom.clone())
    };
    clauses
        .iter()
        .filter(blocking)
        .find_map(ground)
        .or_else(|| clauses.iter().filter(|c| c.mentions(p)).find_map(ground))
}

/// `∃p f` for a nullary `p` by Shannon expansion.
pub fn eliminate_propositional(p: &str, f: &Formula) -> Formula {
    let spec = PredicateSpec::new(p, 0);
    let with = |v: Formula| {
        substitute_predicate(f, &spec, &PredReplacement::Lambda(Vec::new(), v))
            .unwrap_or_else(|_| f.clone())
    };
    reform(&simplify_truth(&Formula::or([
        with(Formula::True),
        with(Formula::False),
    ])))
}

/// The first-order part of two-colorability: `r` and `g` cover every node and no edge joins
/// two nodes of one color. `edge` is a λ-expression or a binary predicate symbol.
pub fn fo_col2(edge: &Formula) -> Formula {
    let (x, y) = (Term::var("x"), Term::var("y"));
    let e = match edge {
        Formula::Atom(name, args) if args.is_empty() => {
            Formula::atom(name.clone(), vec![x.clone(), y.clone()])
        }
        other => Formula::LambdaApp(Box::new(other.clone()), vec![x.clone(), y.clone()]),
    };
    let both = |c: &str| {
        Formula::not(Formula::and([
            Formula::atom(c, vec![x.clone()]),
            Formula::atom(c, vec![y.clone()]),
        ]))
    };
    Formula::and([
        Formula::forall(
            vec!["x".into()],
            Formula::or([
                Formula::atom("r", vec![x.clone()]),
                Formula::atom("g", vec![x.clone()]),
            ]),
        ),
        Formula::forall(
            vec!["x".into(), "y".into()],
            Formula::implies(e, Formula::and([both("r"), both("g")])),
        ),
    ])
}

/// Two-step colorability elimination: `g` with `pre=[c6]`, then `r` with `pre=[d6]`.
/// Returns the edge relation and the final formula.
pub fn eliminate_staged(edge: &Formula) -> Result<(Formula, Formula), EliminationError> {
    let run = |f: Formula, stage: Stage| {
        let opts = EliminationOptions {
            pre: vec![stage],
            ..EliminationOptions::default()
        };
        match eliminate(&f, &opts) {
            EliminationOutcome::Success(g) => Ok(g),
            EliminationOutcome::Failure { reason, residue } => {
                Err(EliminationError { reason, residue })
            }
        }
    };
    let f1 = run(
        Formula::exists2(vec![PredicateSpec::named("g")], fo_col2(edge)),
        Stage::C6,
    )?;
    let f2 = run(
        Formula::exists2(vec![PredicateSpec::named("r")], f1),
        Stage::D6,
    )?;
    Ok((edge.clone(), f2))
}

/// Replaces each nullary predicate by a truth value; helper for truth-table comparisons.
pub fn assign_atoms(f: &Formula, values: &HashMap<String, bool>) -> Formula {
    simplify_truth(&f.map_atoms(&|a| match a {
        Formula::Atom(p, args) if args.is_empty() => match values.get(p) {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => a.clone(),
        },
        other => other.clone(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, to_text};

    fn elim(text: &str) -> Formula {
        match eliminate(
            &parse_formula(text).unwrap(),
            &EliminationOptions::default(),
        ) {
            EliminationOutcome::Success(f) => f,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lower_and_upper_bound() {
        assert_eq!(
            to_text(&elim(
                "ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))"
            )),
            "all(x, (q(x)->r(x)))"
        );
        assert_eq!(elim("ex2(p, p(a))"), Formula::True);
    }

    #[test]
    fn universal_quantifier_is_dualized() {
        assert_eq!(elim("all2(p, (p(a) ; ~p(a)))"), Formula::True);
        assert_eq!(elim("all2(p, p(a))"), Formula::False);
    }

    #[test]
    fn propositional_shannon() {
        let f = parse_formula("((q -> p), (p -> r))").unwrap();
        assert_eq!(to_text(&eliminate_propositional("p", &f)), "q->r");
        assert_eq!(
            eliminate_propositional("p", &parse_formula("p").unwrap()),
            Formula::True
        );
        assert_eq!(
            eliminate_propositional("p", &parse_formula("(p, ~p)").unwrap()),
            Formula::False
        );
    }

    #[test]
    fn circumscription_of_single_fact() {
        let f = elim("p(a), ~ex2(q, (q(a), all(x, (q(x) -> p(x))), ~all(x, (p(x) -> q(x)))))");
        assert!(!to_text(&f).contains("q("));
    }

    #[test]
    fn transitive_closure_is_not_reducible() {
        let f = parse_formula("ex2(p, (all(x, all(y, (p(x) -> p(f(x))))), p(a), ~p(b)))").unwrap();
        assert!(matches!(
            eliminate(&f, &EliminationOptions::default()),
            EliminationOutcome::Failure { .. }
        ));
    }

    #[test]
    fn staged_colorability() {
        let empty = parse_formula("lambda([u, v], false)").unwrap();
        assert_eq!(eliminate_staged(&empty).unwrap().1, Formula::True);
        let loop1 = parse_formula("lambda([u, v], (u = 1, v = 1))").unwrap();
        assert_eq!(eliminate_staged(&loop1).unwrap().1, Formula::False);
    }
}
