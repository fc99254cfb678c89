use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use super::model::find_countermodel_with;
use super::{prove_with_cancel, Model, Proof, ProverConfig};
use crate::formula::{free_vars, substitute_vars, Formula, FreshNames, Term};
use crate::preprocess::{clausify_with, ClausifyMode};

#[derive(Clone, Debug)]
pub enum ValidationResult {
    Valid(Proof),
    NotValid(Model),
    /// Neither a proof nor a countermodel was found within the bounds.
    Failed(String),
}

impl ValidationResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidationResult::Valid(_))
    }

    pub fn is_not_valid(&self) -> bool {
        matches!(self, ValidationResult::NotValid(_))
    }
}

const DISTRIBUTION_LIMIT: usize = 16;

/// Decides validity of the universal closure of `f` by racing the prover against
/// the countermodel finder. Both certificates are re-checked before they are reported.
pub fn validate(f: &Formula, cfg: &ProverConfig) -> ValidationResult {
    if !f.is_first_order() {
        return ValidationResult::Failed(format!("not a first-order formula: {f}"));
    }
    let mut names = FreshNames::avoiding(f);
    let grounding: HashMap<String, Term> = free_vars(f)
        .into_iter()
        .map(|v| (v.clone(), Term::constant(names.fresh(&v.to_lowercase()))))
        .collect();
    let g = if grounding.is_empty() {
        f.clone()
    } else {
        substitute_vars(f, &grounding)
    };
    let (left, right) = match &g {
        Formula::Implies(a, b) => ((**a).clone(), Formula::not((**b).clone())),
        other => (Formula::True, Formula::not(other.clone())),
    };
    let clausified = clausify_with(&left, ClausifyMode::Equivalence, &mut names).and_then(|l| {
        let mut r = clausify_with(&right, ClausifyMode::Equivalence, &mut names)?;
        // a negated conjunction distributes into many wide clauses; definitions keep it linear
        if r.clauses.len() > DISTRIBUTION_LIMIT {
            r = clausify_with(&right, ClausifyMode::Definitional, &mut names)?;
        }
        Ok((l, r))
    });
    let (left, right) = match clausified {
        Ok((l, r)) => (l.clauses, r.clauses),
        Err(e) => return ValidationResult::Failed(e.to_string()),
    };
    let cancel = AtomicBool::new(false);
    let deadline = Instant::now() + cfg.timeout;
    let (proof, model) = std::thread::scope(|s| {
        let prover = s.spawn(|| {
            let r = prove_with_cancel(&left, &right, cfg, Some(&cancel));
            if r.is_ok() {
                cancel.store(true, Ordering::Relaxed);
            }
            r
        });
        let finder = s.spawn(|| {
            let m = find_countermodel_with(&g, cfg.max_domain, Some(deadline), Some(&cancel));
            if m.is_some() {
                cancel.store(true, Ordering::Relaxed);
            }
            m
        });
        (
            prover.join().expect("prover thread panicked"),
            finder.join().expect("finder thread panicked"),
        )
    });
    match (proof, model) {
        (Ok(p), _) if p.check().is_ok() => ValidationResult::Valid(p),
        (_, Some(m)) if m.evaluate(&g) == Some(false) => ValidationResult::NotValid(m),
        (Ok(p), _) => ValidationResult::Failed(format!(
            "proof rejected by the checker: {}",
            p.check().unwrap_err()
        )),
        (Err(e), _) => ValidationResult::Failed(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn check(text: &str) -> ValidationResult {
        validate(&parse_formula(text).unwrap(), &ProverConfig::default())
    }

    #[test]
    fn kb1_entails_wet_shoes() {
        let text = "((sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), (wet(grass) -> wet(shoes)), \
                    (rained_last_night ; sprinkler_was_on)) -> wet(shoes)";
        assert!(check(text).is_valid());
    }

    #[test]
    fn invalid_implication_has_model() {
        match check("p -> q") {
            ValidationResult::NotValid(m) => {
                assert_eq!(m.evaluate(&parse_formula("p -> q").unwrap()), Some(false))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variables_are_universal() {
        assert!(check("p(x) -> p(x)").is_valid());
        assert!(check("p(x) -> p(y)").is_not_valid());
    }

    #[test]
    fn second_order_input_fails() {
        assert!(matches!(
            check("all2(p, (p(a) -> p(a)))"),
            ValidationResult::Failed(_)
        ));
    }

    #[test]
    fn wide_conjunctive_goal_uses_definitions() {
        let side = "(s -> w(g)), (r -> w(g)), (w(g) -> w(h)), all(x, ((w(g), w(x)) -> (x = g ; x = h))), all(x, (w(x) -> (s ; r)))";
        let swapped = "(s -> w(g)), (r -> w(g)), (w(g) -> w(h)), all(x, (w(x) -> (r ; s))), all(x, ((w(x), w(g)) -> (x = g ; x = h)))";
        assert!(check(&format!("({side}) -> ({swapped})")).is_valid());
    }
}
