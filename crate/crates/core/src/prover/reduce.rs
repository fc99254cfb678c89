//! Second-order universal quantifiers that can be read as fresh free predicates.

use thiserror::Error;

use crate::formula::{substitute_predicate, Formula, FreshNames, PredReplacement, PredicateSpec};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not reducible to first order: {0}")]
pub struct NotReducible(pub String);

/// Drops universal second-order quantifiers at positive polarity and existential ones
/// at negative polarity, renaming their predicates to fresh symbols.
pub fn reduce_so_universal(f: &Formula) -> Result<Formula, NotReducible> {
    let mut names = FreshNames::avoiding(f);
    go(f, true, false, &mut names)
}

fn has_so_quantifier(f: &Formula) -> bool {
    let mut found = false;
    f.visit(&mut |g| found |= matches!(g, Formula::ForAll2(..) | Formula::Exists2(..)));
    found
}

fn go(
    f: &Formula,
    positive: bool,
    blocked: bool,
    names: &mut FreshNames,
) -> Result<Formula, NotReducible> {
    Ok(match f {
        Formula::Not(g) => Formula::not(go(g, !positive, blocked, names)?),
        Formula::And(xs) => Formula::And(
            xs.iter()
                .map(|x| go(x, positive, blocked, names))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Or(xs) => Formula::Or(
            xs.iter()
                .map(|x| go(x, positive, blocked, names))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Implies(a, b) => Formula::implies(
            go(a, !positive, blocked, names)?,
            go(b, positive, blocked, names)?,
        ),
        Formula::Iff(..) if has_so_quantifier(f) => {
            return Err(NotReducible(format!(
                "second-order quantifier under an equivalence in {f}"
            )));
        }
        Formula::ForAll(vs, body) => Formula::ForAll(
            vs.clone(),
            Box::new(go(body, positive, blocked || !positive, names)?),
        ),
        Formula::Exists(vs, body) => Formula::Exists(
            vs.clone(),
            Box::new(go(body, positive, blocked || positive, names)?),
        ),
        Formula::ForAll2(ps, body) | Formula::Exists2(ps, body) => {
            let universal = matches!(f, Formula::ForAll2(..)) == positive;
            if !universal {
                return Err(NotReducible(format!(
                    "existential second-order quantifier in {f}"
                )));
            }
            if blocked {
                return Err(NotReducible(format!(
                    "second-order quantifier in the scope of an existential in {f}"
                )));
            }
            let mut body = (**body).clone();
            for p in ps {
                let fresh = names.fresh_indexed(&p.name);
                body = substitute_predicate(
                    &body,
                    &PredicateSpec {
                        name: p.name.clone(),
                        arity: p.arity,
                    },
                    &PredReplacement::Symbol(fresh),
                )
                .map_err(|e| NotReducible(e.to_string()))?;
            }
            go(&body, positive, blocked, names)?
        }
        other => other.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, to_text};

    fn reduce(text: &str) -> Result<String, NotReducible> {
        reduce_so_universal(&parse_formula(text).unwrap()).map(|f| to_text(&f))
    }

    #[test]
    fn universal_predicate_becomes_free() {
        assert_eq!(reduce("all2(p, (p(a) -> p(a)))").unwrap(), "p1(a)->p1(a)");
        assert_eq!(reduce("(ex2(p, p(a)) -> q)").unwrap(), "p1(a)->q");
    }

    #[test]
    fn existential_positions_are_rejected() {
        assert!(reduce("ex2(p, p(a))").is_err());
        assert!(reduce("~all2(p, p(a))").is_err());
        assert!(reduce("ex(x, all2(p, p(x)))").is_err());
        assert!(reduce("~all(x, ex2(p, p(x)))").is_err());
        assert!(reduce("all(x, all2(p, p(x)))").is_ok());
    }
}
