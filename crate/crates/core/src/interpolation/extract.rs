use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{simplify_truth, symbol_names, Formula, Term};
use crate::prover::{Closure, Side, TableauNode};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("open leaf {0}")]
    OpenLeaf(String),
}

/// Ground interpolant of a closed side-labelled tableau, computed bottom-up.
pub fn extract_from_tableau(t: &TableauNode) -> Result<Formula, ExtractError> {
    Ok(simplify_truth(&extract(t)?))
}

fn extract(node: &TableauNode) -> Result<Formula, ExtractError> {
    if node.children.is_empty() {
        let Some(lit) = &node.literal else {
            return Ok(match node.side {
                Side::Left => Formula::False,
                Side::Right => Formula::True,
            });
        };
        return match (node.closure, node.side) {
            (Closure::None, _) => Err(ExtractError::OpenLeaf(lit.to_string())),
            (
                Closure::Ancestor {
                    side: Side::Left, ..
                },
                Side::Left,
            ) => Ok(Formula::False),
            (
                Closure::Ancestor {
                    side: Side::Right, ..
                },
                Side::Right,
            ) => Ok(Formula::True),
            (Closure::Ancestor { .. }, Side::Left) => Ok(lit.to_formula()),
            (Closure::Ancestor { .. }, Side::Right) => Ok(lit.complement().to_formula()),
        };
    }
    let parts = node
        .children
        .iter()
        .map(extract)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match node.children[0].side {
        Side::Left => Formula::or(parts),
        Side::Right => Formula::and(parts),
    })
}

/// Function symbols of an interpolation task by side. Symbols in neither set count as right-only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub shared: BTreeSet<String>,
    pub left_only: BTreeSet<String>,
}

fn collect_foreign(t: &Term, vocab: &Vocabulary, out: &mut Vec<Term>) {
    if let Term::App(f, args) = t {
        if vocab.shared.contains(f) {
            args.iter().for_each(|a| collect_foreign(a, vocab, out));
        } else if !out.contains(t) {
            out.push(t.clone());
        }
    }
}

fn contains_term(outer: &Term, inner: &Term) -> bool {
    match outer {
        Term::App(_, args) => args.iter().any(|a| a == inner || contains_term(a, inner)),
        Term::Var(_) => false,
    }
}

fn replace(t: &Term, vars: &HashMap<Term, String>) -> Term {
    if let Some(v) = vars.get(t) {
        return Term::var(v.clone());
    }
    match t {
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| replace(a, vars)).collect()),
        v => v.clone(),
    }
}

const VARIABLE_POOL: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// Replaces maximal terms headed by a non-shared symbol with variables: existential for
/// left-only heads, universal otherwise. A term is quantified inside the terms it contains.
pub fn generalize_constants(h: &Formula, vocab: &Vocabulary) -> Formula {
    let mut foreign = Vec::new();
    h.visit(&mut |g| match g {
        Formula::Atom(_, args) => args
            .iter()
            .for_each(|a| collect_foreign(a, vocab, &mut foreign)),
        Formula::Eq(s, t) => {
            collect_foreign(s, vocab, &mut foreign);
            collect_foreign(t, vocab, &mut foreign);
        }
        _ => {}
    });
    if foreign.is_empty() {
        return h.clone();
    }
    // dependency order: a term comes after every other replaced term it contains
    let mut order: Vec<Term> = Vec::new();
    while order.len() < foreign.len() {
        let next = foreign
            .iter()
            .find(|t| {
                !order.contains(t)
                    && foreign
                        .iter()
                        .all(|s| s == *t || !contains_term(t, s) || order.contains(s))
            })
            .expect("subterm order is acyclic")
            .clone();
        order.push(next);
    }
    let used = symbol_names(h);
    let mut pool = VARIABLE_POOL
        .iter()
        .map(|s| s.to_string())
        .chain((1..).flat_map(|i| VARIABLE_POOL.iter().map(move |s| format!("{s}{i}"))));
    let mut vars: HashMap<Term, String> = HashMap::new();
    let mut prefix: Vec<(bool, String)> = Vec::new();
    for t in &order {
        let name = pool
            .by_ref()
            .find(|n| !used.contains(n))
            .expect("unbounded pool");
        let Term::App(head, _) = t else {
            unreachable!("foreign terms are applications")
        };
        prefix.push((vocab.left_only.contains(head), name.clone()));
        vars.insert(t.clone(), name);
    }
    let mut body = h.map_terms(&|t| replace(t, &vars));
    for (existential, name) in prefix.into_iter().rev() {
        body = if existential {
            Formula::exists(vec![name], body)
        } else {
            Formula::forall(vec![name], body)
        };
    }
    body
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::{LitAtom, Literal};
    use crate::syntax::{parse_formula, to_text};

    fn leaf(lit: &str, side: Side, partner: Side) -> TableauNode {
        let l = Literal::from_formula(&parse_formula(lit).unwrap()).unwrap();
        TableauNode {
            literal: Some(l),
            clause: Some(0),
            side,
            children: vec![],
            closure: Closure::Ancestor {
                distance: 1,
                side: partner,
            },
        }
    }

    #[test]
    fn leaf_contributions() {
        let root = |c: TableauNode| TableauNode {
            literal: None,
            clause: Some(0),
            side: Side::Right,
            children: vec![c],
            closure: Closure::None,
        };
        assert_eq!(
            extract_from_tableau(&root(leaf("p", Side::Left, Side::Left))).unwrap(),
            Formula::False
        );
        assert_eq!(
            extract_from_tableau(&root(leaf("p", Side::Right, Side::Right))).unwrap(),
            Formula::True
        );
        assert_eq!(
            to_text(&extract_from_tableau(&root(leaf("p", Side::Left, Side::Right))).unwrap()),
            "p"
        );
        assert_eq!(
            to_text(&extract_from_tableau(&root(leaf("~p", Side::Right, Side::Left))).unwrap()),
            "p"
        );
    }

    #[test]
    fn childless_root_by_side() {
        let root = |side| TableauNode {
            literal: None,
            clause: Some(0),
            side,
            children: vec![],
            closure: Closure::None,
        };
        assert_eq!(
            extract_from_tableau(&root(Side::Left)).unwrap(),
            Formula::False
        );
        assert_eq!(
            extract_from_tableau(&root(Side::Right)).unwrap(),
            Formula::True
        );
        let open = TableauNode {
            literal: None,
            clause: Some(0),
            side: Side::Right,
            children: vec![TableauNode {
                literal: Some(Literal::pos(LitAtom::Pred("p".into(), vec![]))),
                clause: Some(0),
                side: Side::Right,
                children: vec![],
                closure: Closure::None,
            }],
            closure: Closure::None,
        };
        assert!(extract_from_tableau(&open).is_err());
    }

    #[test]
    fn generalization_respects_dependencies() {
        let vocab = Vocabulary {
            shared: BTreeSet::new(),
            left_only: ["f".to_string()].into(),
        };
        let h = parse_formula("p(f(b), b)").unwrap();
        assert_eq!(
            to_text(&generalize_constants(&h, &vocab)),
            "all(x, ex(y, p(y, x)))"
        );
        let shared_only = parse_formula("p(a)").unwrap();
        let vocab = Vocabulary {
            shared: ["a".to_string()].into(),
            left_only: BTreeSet::new(),
        };
        assert_eq!(generalize_constants(&shared_only, &vocab), shared_only);
    }
}
