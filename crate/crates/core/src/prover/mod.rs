//! Clausal tableau prover, finite countermodel finder and validity checking.

mod check;
mod model;
mod reduce;
mod sat;
mod search;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::AtomicBool;
use std::time::Duration;

use thiserror::Error;

use crate::formula::{FreshNames, Term};
use crate::preprocess::{Clause, LitAtom, Literal};

pub use check::{check_tableau, CheckError};
pub use model::{find_countermodel, Model};
pub use reduce::{reduce_so_universal, NotReducible};
pub use sat::{solve_cnf, Cnf, SatResult};
pub use validate::{validate, ValidationResult};

/// Which input a clause comes from: the left formula or the negated right formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "L",
            Side::Right => "R",
        })
    }
}

/// How a leaf is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    None,
    /// Closed by the ancestor `distance` steps up, which carries the given side.
    Ancestor {
        distance: usize,
        side: Side,
    },
}

/// A node of a clausal tableau. The root carries no literal; its clause is the start clause.
#[derive(Clone, Debug, PartialEq)]
pub struct TableauNode {
    pub literal: Option<Literal>,
    pub clause: Option<usize>,
    pub side: Side,
    pub children: Vec<TableauNode>,
    pub closure: Closure,
}

impl TableauNode {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TableauNode::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(TableauNode::depth)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofClause {
    pub clause: Clause,
    pub side: Side,
}

/// A closed tableau together with the clauses it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    pub tableau: TableauNode,
    pub clauses: Vec<ProofClause>,
}

impl Proof {
    pub fn check(&self) -> Result<(), CheckError> {
        check_tableau(&self.tableau, &self.clauses)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum ProofFailure {
    #[error("timeout")]
    Timeout,
    #[error("depth limit reached")]
    DepthLimit,
    #[error("search space exhausted without a proof")]
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    /// Largest tableau depth tried by iterative deepening.
    pub max_depth: usize,
    pub depth_increment: usize,
    pub timeout: Duration,
    pub regularity: bool,
    /// Largest domain tried by the countermodel finder.
    pub max_domain: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            max_depth: 16,
            depth_increment: 1,
            timeout: Duration::from_secs(5),
            regularity: true,
            max_domain: 4,
        }
    }
}

const SEARCH_STACK: usize = 256 << 20;

/// Searches for a closed tableau for `left ∪ right`. Right clauses are tried first as start clauses.
pub fn prove(left: &[Clause], right: &[Clause], cfg: &ProverConfig) -> Result<Proof, ProofFailure> {
    prove_with_cancel(left, right, cfg, None)
}

/// Like [`prove`], giving up early once `cancel` is set.
pub fn prove_with_cancel(
    left: &[Clause],
    right: &[Clause],
    cfg: &ProverConfig,
    cancel: Option<&AtomicBool>,
) -> Result<Proof, ProofFailure> {
    let mut clauses: Vec<ProofClause> = left
        .iter()
        .map(|c| ProofClause {
            clause: c.clone(),
            side: Side::Left,
        })
        .collect();
    clauses.extend(right.iter().map(|c| ProofClause {
        clause: c.clone(),
        side: Side::Right,
    }));
    let starts: Vec<usize> = (left.len()..clauses.len()).chain(0..left.len()).collect();
    clauses.extend(equality_axioms(left, right));
    let mut names = FreshNames::new();
    for c in &clauses {
        for l in &c.clause.literals {
            reserve_literal(l, &mut names);
        }
    }
    let ground = names.fresh("c");
    let tableau = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(SEARCH_STACK)
            .spawn_scoped(s, || {
                search::search(&clauses, &starts, cfg, cancel, &ground)
            })
            .expect("spawn prover thread")
            .join()
            .expect("prover thread panicked")
    })?;
    Ok(Proof { tableau, clauses })
}

fn reserve_literal(l: &Literal, names: &mut FreshNames) {
    fn term(t: &Term, names: &mut FreshNames) {
        match t {
            Term::Var(v) => names.reserve(v.clone()),
            Term::App(f, args) => {
                names.reserve(f.clone());
                args.iter().for_each(|a| term(a, names));
            }
        }
    }
    if let Some((p, _)) = l.atom.predicate() {
        names.reserve(p);
    }
    l.atom.args().into_iter().for_each(|t| term(t, names));
}

#[derive(Default)]
struct Signature {
    uses_eq: bool,
    predicates: BTreeMap<(String, usize), ()>,
    functions: BTreeMap<(String, usize), ()>,
}

impl Signature {
    fn of(clauses: &[Clause]) -> Signature {
        fn term(t: &Term, sig: &mut Signature) {
            if let Term::App(f, args) = t {
                if !args.is_empty() {
                    sig.functions.insert((f.clone(), args.len()), ());
                }
                args.iter().for_each(|a| term(a, sig));
            }
        }
        let mut sig = Signature::default();
        for l in clauses.iter().flat_map(|c| &c.literals) {
            match &l.atom {
                LitAtom::Eq(..) => sig.uses_eq = true,
                LitAtom::Pred(p, args) => {
                    sig.predicates.insert((p.clone(), args.len()), ());
                }
            }
            l.atom.args().into_iter().for_each(|t| term(t, &mut sig));
        }
        sig
    }
}

fn eq_lit(positive: bool, s: Term, t: Term) -> Literal {
    Literal {
        positive,
        atom: LitAtom::Eq(s, t),
    }
}

fn vars(prefix: &str, n: usize) -> Vec<Term> {
    (1..=n).map(|i| Term::var(format!("{prefix}{i}"))).collect()
}

/// Equality axioms for the symbols of `left` and `right`, each placed on the side its symbol comes from.
fn equality_axioms(left: &[Clause], right: &[Clause]) -> Vec<ProofClause> {
    let (l, r) = (Signature::of(left), Signature::of(right));
    if !l.uses_eq && !r.uses_eq {
        return Vec::new();
    }
    let core_side = if l.uses_eq { Side::Left } else { Side::Right };
    let (x, y, z) = (Term::var("X"), Term::var("Y"), Term::var("Z"));
    let mut out = vec![
        Clause {
            literals: vec![eq_lit(true, x.clone(), x.clone())],
            origin: None,
        },
        Clause {
            literals: vec![
                eq_lit(false, x.clone(), y.clone()),
                eq_lit(true, y.clone(), x.clone()),
            ],
            origin: None,
        },
        Clause {
            literals: vec![
                eq_lit(false, x.clone(), y.clone()),
                eq_lit(false, y.clone(), z.clone()),
                eq_lit(true, x.clone(), z.clone()),
            ],
            origin: None,
        },
    ]
    .into_iter()
    .map(|clause| ProofClause {
        clause,
        side: core_side,
    })
    .collect::<Vec<_>>();
    let side_of = |key: &(String, usize), left: &BTreeMap<(String, usize), ()>| {
        if left.contains_key(key) {
            Side::Left
        } else {
            Side::Right
        }
    };
    let mut preds: Vec<(String, usize)> = l
        .predicates
        .keys()
        .chain(r.predicates.keys())
        .cloned()
        .collect();
    preds.sort();
    preds.dedup();
    for key in preds.iter().filter(|(_, n)| *n > 0) {
        let side = side_of(key, &l.predicates);
        let (xs, ys) = (vars("X", key.1), vars("Y", key.1));
        for i in 0..key.1 {
            let mut after = xs.clone();
            after[i] = ys[i].clone();
            out.push(ProofClause {
                clause: Clause {
                    literals: vec![
                        eq_lit(false, xs[i].clone(), ys[i].clone()),
                        Literal::neg(LitAtom::Pred(key.0.clone(), xs.clone())),
                        Literal::pos(LitAtom::Pred(key.0.clone(), after)),
                    ],
                    origin: None,
                },
                side,
            });
        }
    }
    let mut funs: Vec<(String, usize)> = l
        .functions
        .keys()
        .chain(r.functions.keys())
        .cloned()
        .collect();
    funs.sort();
    funs.dedup();
    for key in &funs {
        let side = side_of(key, &l.functions);
        let (xs, ys) = (vars("X", key.1), vars("Y", key.1));
        for i in 0..key.1 {
            let mut after = xs.clone();
            after[i] = ys[i].clone();
            out.push(ProofClause {
                clause: Clause {
                    literals: vec![
                        eq_lit(false, xs[i].clone(), ys[i].clone()),
                        eq_lit(
                            true,
                            Term::App(key.0.clone(), xs.clone()),
                            Term::App(key.0.clone(), after),
                        ),
                    ],
                    origin: None,
                },
                side,
            });
        }
    }
    out
}
