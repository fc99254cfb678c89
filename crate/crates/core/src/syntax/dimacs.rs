//! DIMACS CNF and QDIMACS output for propositional clause sets.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::preprocess::{ClausalForm, LitAtom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("clause set is not propositional: {0}")]
    NotPropositional(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    ForAll,
}

/// Encoded text plus the atom names, where atom `i` is `atoms[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dimacs {
    pub text: String,
    pub atoms: Vec<String>,
}

impl Dimacs {
    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom).map(|i| i + 1)
    }
}

struct Numbering {
    index: HashMap<String, usize>,
    atoms: Vec<String>,
}

impl Numbering {
    fn id(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.atoms.push(name.to_string());
        self.index.insert(name.to_string(), self.atoms.len());
        self.atoms.len()
    }
}

fn encode(cf: &ClausalForm, num: &mut Numbering) -> Result<Vec<Vec<i64>>, DimacsError> {
    let mut rows = Vec::new();
    for c in &cf.clauses {
        let mut row = Vec::new();
        for l in &c.literals {
            let LitAtom::Pred(p, args) = &l.atom else {
                return Err(DimacsError::NotPropositional(l.to_string()));
            };
            if !args.is_empty() {
                return Err(DimacsError::NotPropositional(l.to_string()));
            }
            let v = num.id(p) as i64;
            row.push(if l.positive { v } else { -v });
        }
        rows.push(row);
    }
    Ok(rows)
}

fn body(rows: &[Vec<i64>], out: &mut String) {
    for row in rows {
        for v in row {
            let _ = write!(out, "{v} ");
        }
        out.push_str("0\n");
    }
}

/// Atoms are numbered in order of first occurrence.
pub fn emit_dimacs(cf: &ClausalForm) -> Result<Dimacs, DimacsError> {
    let mut num = Numbering {
        index: HashMap::new(),
        atoms: Vec::new(),
    };
    let rows = encode(cf, &mut num)?;
    let mut text = format!("p cnf {} {}\n", num.atoms.len(), rows.len());
    body(&rows, &mut text);
    Ok(Dimacs {
        text,
        atoms: num.atoms,
    })
}

/// Like [`emit_dimacs`], with one prefix line per quantifier block in the given order.
pub fn emit_qdimacs(
    prefix: &[(Quantifier, Vec<String>)],
    cf: &ClausalForm,
) -> Result<Dimacs, DimacsError> {
    let mut num = Numbering {
        index: HashMap::new(),
        atoms: Vec::new(),
    };
    let rows = encode(cf, &mut num)?;
    let blocks: Vec<(Quantifier, Vec<usize>)> = prefix
        .iter()
        .map(|(q, atoms)| (*q, atoms.iter().map(|a| num.id(a)).collect()))
        .collect();
    let mut text = format!("p cnf {} {}\n", num.atoms.len(), rows.len());
    for (q, ids) in blocks {
        if ids.is_empty() {
            continue;
        }
        text.push(if q == Quantifier::Exists { 'e' } else { 'a' });
        for i in ids {
            let _ = write!(text, " {i}");
        }
        text.push_str(" 0\n");
    }
    body(&rows, &mut text);
    Ok(Dimacs {
        text,
        atoms: num.atoms,
    })
}
