use super::{clausify, simplify_clausal, unskolemize, ClausifyMode, ProtectedVocabulary};
use crate::formula::{nnf, simplify_truth, Formula};

/// Rewrites clause-shaped disjunctions with negative literals as implications.
pub fn reform(f: &Formula) -> Formula {
    match f {
        Formula::Or(xs) if xs.iter().all(Formula::is_literal) => {
            let (neg, pos): (Vec<&Formula>, Vec<&Formula>) =
                xs.iter().partition(|x| matches!(x, Formula::Not(_)));
            if neg.is_empty() {
                return f.clone();
            }
            let antecedent = Formula::and(neg.into_iter().map(|n| n.clone().negate()));
            if pos.is_empty() {
                Formula::not(antecedent)
            } else {
                Formula::implies(antecedent, Formula::or(pos.into_iter().cloned()))
            }
        }
        Formula::And(xs) => Formula::and(xs.iter().map(reform)),
        Formula::Or(xs) => Formula::or(xs.iter().map(reform)),
        Formula::ForAll(vs, b) => Formula::ForAll(vs.clone(), Box::new(reform(b))),
        Formula::Exists(vs, b) => Formula::Exists(vs.clone(), Box::new(reform(b))),
        other => other.clone(),
    }
}

fn c6_raw(f: &Formula) -> Option<Formula> {
    let cf = clausify(f, ClausifyMode::Equivalence).ok()?;
    let mut cf = simplify_clausal(&cf, &ProtectedVocabulary::All);
    cf.clauses = cf.clauses.iter().map(|c| c.tidy_variables()).collect();
    if cf.clauses.iter().any(|c| c.is_empty()) {
        return Some(Formula::False);
    }
    unskolemize(&cf).ok()
}

/// Clausal normalization and simplification, then back to a quantified
/// formula. Inputs that cannot be processed are returned unchanged.
pub fn pipeline_c6(f: &Formula) -> Formula {
    match c6_raw(f) {
        Some(g) => reform(&g),
        None => f.clone(),
    }
}

/// The dual of [`pipeline_c6`]: a disjunctive form obtained through the negation.
pub fn pipeline_d6(f: &Formula) -> Formula {
    match c6_raw(&Formula::not(f.clone())) {
        Some(g) => simplify_truth(&nnf(&Formula::not(g))),
        None => f.clone(),
    }
}

/// A named preprocessing conversion usable in option lists such as `pre=[c6]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    C6,
    D6,
}

impl Stage {
    pub fn from_name(name: &str) -> Option<Stage> {
        match name {
            "c6" => Some(Stage::C6),
            "d6" => Some(Stage::D6),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::C6 => "c6",
            Stage::D6 => "d6",
        }
    }

    pub fn apply(self, f: &Formula) -> Formula {
        match self {
            Stage::C6 => pipeline_c6(f),
            Stage::D6 => pipeline_d6(f),
        }
    }
}

/// Applies the stages in order.
pub fn apply_stages(stages: &[Stage], f: &Formula) -> Formula {
    stages.iter().fold(f.clone(), |g, s| s.apply(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, to_text};

    #[test]
    fn c6_implication_shape() {
        let f = parse_formula("all(x, (~p(x) ; q(x))), p(a)").unwrap();
        let g = pipeline_c6(&f);
        assert_eq!(to_text(&g), "all(x, (p(x)->q(x))),p(a)");
    }

    #[test]
    fn c6_contradiction() {
        assert_eq!(
            pipeline_c6(&parse_formula("p, ~p").unwrap()),
            Formula::False
        );
    }

    #[test]
    fn d6_is_disjunctive() {
        let f = parse_formula("(p ; q), r").unwrap();
        let g = pipeline_d6(&f);
        assert!(matches!(g, Formula::Or(_)), "{g}");
    }

    #[test]
    fn second_order_passthrough() {
        let f = parse_formula("ex2(p, p)").unwrap();
        assert_eq!(pipeline_c6(&f), f);
    }
}
