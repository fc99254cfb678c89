//! Independent soundness check for closed clausal tableaux.

use std::collections::HashMap;

use thiserror::Error;

use super::{Closure, ProofClause, Side, TableauNode};
use crate::formula::Term;
use crate::preprocess::{match_literal, LitAtom, Literal};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("sibling group is not an instance of clause {0}")]
    NotAnInstance(usize),
    #[error("sibling group mixes clauses or has no clause")]
    MixedGroup,
    #[error("unknown clause {0}")]
    UnknownClause(usize),
    #[error("open leaf {0}")]
    OpenLeaf(String),
    #[error("closure of {0} does not point to a complementary ancestor")]
    BadClosure(String),
    #[error("inner node {0} carries a closure")]
    ClosedInnerNode(String),
}

fn is_instance(clause: &[Literal], group: &[&Literal]) -> bool {
    if clause.len() != group.len() {
        return false;
    }
    // equalities match in either orientation, so the substitution is searched with backtracking
    fn go(clause: &[Literal], group: &[&Literal], sigma: &mut HashMap<String, Term>) -> bool {
        let Some((c, rest)) = clause.split_first() else {
            return true;
        };
        let g = group[0];
        let mut targets = vec![g.clone()];
        if let LitAtom::Eq(s, t) = &g.atom {
            targets.push(Literal {
                positive: g.positive,
                atom: LitAtom::Eq(t.clone(), s.clone()),
            });
        }
        for target in &targets {
            let saved = sigma.clone();
            if match_literal(c, target, sigma) && go(rest, &group[1..], sigma) {
                return true;
            }
            *sigma = saved;
        }
        false
    }
    go(clause, group, &mut HashMap::new())
}

/// Checks that every sibling group instantiates its origin clause under one
/// substitution and that every leaf closes against a complementary ancestor.
pub fn check_tableau(t: &TableauNode, clauses: &[ProofClause]) -> Result<(), CheckError> {
    check_node(t, clauses, &mut Vec::new())
}

fn check_node<'a>(
    node: &'a TableauNode,
    clauses: &[ProofClause],
    path: &mut Vec<(&'a Literal, Side)>,
) -> Result<(), CheckError> {
    let label = || {
        node.literal
            .as_ref()
            .map_or("root".to_string(), |l| l.to_string())
    };
    if let (true, Some(lit)) = (node.children.is_empty(), node.literal.as_ref()) {
        return match node.closure {
            Closure::None => Err(CheckError::OpenLeaf(label())),
            Closure::Ancestor { distance, side } => {
                if distance == 0 || distance > path.len() {
                    return Err(CheckError::BadClosure(label()));
                }
                let (partner, partner_side) = path[path.len() - distance];
                if partner.is_complement_of(lit) && partner_side == side {
                    Ok(())
                } else {
                    Err(CheckError::BadClosure(label()))
                }
            }
        };
    }
    if node.closure != Closure::None {
        return Err(CheckError::ClosedInnerNode(label()));
    }
    if !node.children.is_empty() {
        let id = node.children[0].clause.ok_or(CheckError::MixedGroup)?;
        if node
            .children
            .iter()
            .any(|c| c.clause != Some(id) || c.literal.is_none())
        {
            return Err(CheckError::MixedGroup);
        }
        let origin = clauses.get(id).ok_or(CheckError::UnknownClause(id))?;
        if node.children.iter().any(|c| c.side != origin.side) {
            return Err(CheckError::MixedGroup);
        }
        let group: Vec<&Literal> = node
            .children
            .iter()
            .map(|c| c.literal.as_ref().unwrap())
            .collect();
        if !is_instance(&origin.clause.literals, &group) {
            return Err(CheckError::NotAnInstance(id));
        }
    } else if node.literal.is_none() {
        // a root without children refutes only through an empty start clause
        return match node.clause.and_then(|id| clauses.get(id)) {
            Some(c) if c.clause.is_empty() => Ok(()),
            _ => Err(CheckError::OpenLeaf(label())),
        };
    }
    let pushed = node
        .literal
        .as_ref()
        .map(|l| path.push((l, node.side)))
        .is_some();
    for c in &node.children {
        check_node(c, clauses, path)?;
    }
    if pushed {
        path.pop();
    }
    Ok(())
}
