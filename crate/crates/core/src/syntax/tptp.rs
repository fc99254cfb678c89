//! TPTP first-order form output.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TptpRole {
    Axiom,
    Conjecture,
}

impl fmt::Display for TptpRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TptpRole::Axiom => "axiom",
            TptpRole::Conjecture => "conjecture",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TptpError {
    #[error("formula is not first-order: {0}")]
    NotFirstOrder(String),
    #[error("invalid annotated formula name `{0}`")]
    BadName(String),
}

fn is_lower_word(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn atomic_word(s: &str) -> String {
    if is_lower_word(s) {
        s.to_string()
    } else {
        let mut out = String::from("'");
        for c in s.chars() {
            if c == '\'' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('\'');
        out
    }
}

struct Emitter {
    vars: HashMap<String, String>,
}

impl Emitter {
    fn var_name(&mut self, v: &str) -> String {
        if let Some(n) = self.vars.get(v) {
            return n.clone();
        }
        let mut base: String = v
            .chars()
            .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
            .collect();
        if base.is_empty() {
            base = "X".into();
        }
        let mut chars = base.chars();
        let first = chars.next().unwrap();
        let mut name = if first.is_ascii_alphabetic() {
            format!("{}{}", first.to_ascii_uppercase(), chars.as_str())
        } else {
            format!("X{base}")
        };
        while self.vars.values().any(|n| *n == name) {
            name.push('_');
        }
        self.vars.insert(v.to_string(), name.clone());
        name
    }

    fn term(&mut self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.var_name(v),
            Term::App(f, args) if args.is_empty() => atomic_word(f),
            Term::App(f, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", atomic_word(f), args.join(","))
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<String, TptpError> {
        Ok(match f {
            Formula::True => "$true".into(),
            Formula::False => "$false".into(),
            Formula::Atom(p, args) if args.is_empty() => atomic_word(p),
            Formula::Atom(p, args) => {
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", atomic_word(p), args.join(","))
            }
            Formula::Eq(s, t) => format!("({} = {})", self.term(s), self.term(t)),
            Formula::Not(a) => match &**a {
                Formula::Eq(s, t) => format!("({} != {})", self.term(s), self.term(t)),
                inner => format!("~ {}", self.formula(inner)?),
            },
            Formula::And(xs) | Formula::Or(xs) => {
                let op = if matches!(f, Formula::And(_)) {
                    " & "
                } else {
                    " | "
                };
                let parts = xs
                    .iter()
                    .map(|x| self.formula(x))
                    .collect::<Result<Vec<_>, _>>()?;
                format!("({})", parts.join(op))
            }
            Formula::Implies(a, b) => format!("({} => {})", self.formula(a)?, self.formula(b)?),
            Formula::Iff(a, b) => format!("({} <=> {})", self.formula(a)?, self.formula(b)?),
            Formula::ForAll(vs, a) | Formula::Exists(vs, a) => {
                let q = if matches!(f, Formula::ForAll(..)) {
                    "!"
                } else {
                    "?"
                };
                let saved: Vec<(String, Option<String>)> = vs
                    .iter()
                    .map(|v| (v.clone(), self.vars.remove(v)))
                    .collect();
                let names: Vec<String> = vs.iter().map(|v| self.var_name(v)).collect();
                let body = self.formula(a)?;
                for (v, old) in saved {
                    self.vars.remove(&v);
                    if let Some(o) = old {
                        self.vars.insert(v, o);
                    }
                }
                format!("{q} [{}] : {body}", names.join(","))
            }
            other => return Err(TptpError::NotFirstOrder(other.to_string())),
        })
    }
}

/// One `fof` annotated formula. Free variables are closed universally.
pub fn emit_tptp(name: &str, role: TptpRole, f: &Formula) -> Result<String, TptpError> {
    if !is_lower_word(name) {
        return Err(TptpError::BadName(name.to_string()));
    }
    let free: Vec<String> = crate::formula::free_vars(f).into_iter().collect();
    let closed = Formula::forall(free, f.clone());
    let body = Emitter {
        vars: HashMap::new(),
    }
    .formula(&closed)?;
    Ok(format!("fof({name}, {role}, {body})."))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn goal_and_axiom() {
        let f = parse_formula("(p, q -> (p ; r))").unwrap();
        assert_eq!(
            emit_tptp("goal", TptpRole::Conjecture, &f).unwrap(),
            "fof(goal, conjecture, ((p & q) => (p | r)))."
        );
        let g = parse_formula("all(x, p(x))").unwrap();
        assert_eq!(
            emit_tptp("ax1", TptpRole::Axiom, &g).unwrap(),
            "fof(ax1, axiom, ! [X] : p(X))."
        );
    }

    #[test]
    fn rejects_second_order() {
        let f = parse_formula("ex2(p, p(a))").unwrap();
        assert!(matches!(
            emit_tptp("a", TptpRole::Axiom, &f),
            Err(TptpError::NotFirstOrder(_))
        ));
    }
}
