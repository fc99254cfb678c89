//! Craig-Lyndon interpolants extracted from closed clausal tableaux.

mod dot;
mod extract;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{
    free_symbols, free_vars, substitute_vars, Formula, FreshNames, SymbolKind, Term,
};
use crate::preprocess::{
    clausify_with, simplify_clausal, ClausalForm, ClausifyMode, ProtectedVocabulary,
};
use crate::prover::{
    find_countermodel, prove, reduce_so_universal, validate, Model, Proof, ProverConfig,
    ValidationResult,
};

pub use dot::emit_tableau_dot;
pub use extract::{extract_from_tableau, generalize_constants, ExtractError, Vocabulary};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationOptions {
    /// Simplify each side while keeping the shared predicates.
    pub simp_sides: bool,
    pub prover: ProverConfig,
}

impl Default for InterpolationOptions {
    fn default() -> Self {
        InterpolationOptions {
            simp_sides: true,
            prover: ProverConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationTask {
    pub left: Formula,
    pub right: Formula,
    pub options: InterpolationOptions,
}

impl InterpolationTask {
    /// Splits an implication `F -> G` into a task.
    pub fn from_implication(
        f: &Formula,
        options: InterpolationOptions,
    ) -> Result<InterpolationTask, InterpolationError> {
        match f {
            Formula::Implies(a, b) => Ok(InterpolationTask {
                left: (**a).clone(),
                right: (**b).clone(),
                options,
            }),
            other => Err(InterpolationError::NotAnImplication(other.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Interpolant {
    pub formula: Formula,
    /// The interpolant before constants and Skolem terms are generalized.
    pub ground: Formula,
    pub proof: Proof,
}

#[derive(Clone, Debug, Error)]
pub enum InterpolationError {
    #[error("expected an implication, found {0}")]
    NotAnImplication(String),
    #[error("not a first-order formula: {0}")]
    NotFirstOrder(String),
    #[error("the implication is not valid; countermodel {0}")]
    NotValid(Model),
    #[error("failed to find a proof: {0}")]
    Failed(String),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

fn symbols(f: &Formula, kind: SymbolKind) -> BTreeSet<String> {
    free_symbols(f)
        .into_iter()
        .filter(|o| o.kind == kind)
        .map(|o| o.symbol)
        .collect()
}

/// Computes an interpolant `H` with `F ⊨ H` and `H ⊨ G` over the shared vocabulary.
pub fn interpolate(task: &InterpolationTask) -> Result<Interpolant, InterpolationError> {
    let reduced;
    let (f, g) = if task.left.is_first_order() && task.right.is_first_order() {
        (&task.left, &task.right)
    } else {
        // second-order quantifiers that read as fresh predicates are dropped
        let imp = Formula::implies(task.left.clone(), task.right.clone());
        match reduce_so_universal(&imp) {
            Ok(Formula::Implies(a, b)) if a.is_first_order() && b.is_first_order() => {
                reduced = (*a, *b);
                (&reduced.0, &reduced.1)
            }
            _ => return Err(InterpolationError::NotFirstOrder(imp.to_string())),
        }
    };
    let mut names = FreshNames::avoiding(f);
    names.reserve_formula(g);
    // free variables act as shared constants and are restored afterwards
    let mut grounding: HashMap<String, Term> = HashMap::new();
    let mut back: HashMap<String, String> = HashMap::new();
    for v in free_vars(f).into_iter().chain(free_vars(g)) {
        if grounding.contains_key(&v) {
            continue;
        }
        let c = names.fresh(&v.to_lowercase());
        back.insert(c.clone(), v.clone());
        grounding.insert(v, Term::constant(c));
    }
    let (f, g) = (
        substitute_vars(f, &grounding),
        substitute_vars(g, &grounding),
    );
    let failed = |e: crate::preprocess::PreprocessError| InterpolationError::Failed(e.to_string());
    let mut left = clausify_with(&f, ClausifyMode::Equivalence, &mut names).map_err(failed)?;
    let mut right = clausify_with(
        &Formula::not(g.clone()),
        ClausifyMode::Equivalence,
        &mut names,
    )
    .map_err(failed)?;
    let (lp, rp) = (
        symbols(&f, SymbolKind::Predicate),
        symbols(&g, SymbolKind::Predicate),
    );
    if task.options.simp_sides {
        let shared = ProtectedVocabulary::Only(lp.intersection(&rp).cloned().collect());
        left = ClausalForm {
            clauses: simplify_clausal(&left, &shared).clauses,
            ..left
        };
        right = ClausalForm {
            clauses: simplify_clausal(&right, &shared).clauses,
            ..right
        };
    }
    let proof = match prove(&left.clauses, &right.clauses, &task.options.prover) {
        Ok(p) => p,
        Err(e) => {
            let imp = Formula::implies(f.clone(), g.clone());
            return Err(
                match find_countermodel(&imp, task.options.prover.max_domain) {
                    Some(m) => InterpolationError::NotValid(m),
                    None => InterpolationError::Failed(e.to_string()),
                },
            );
        }
    };
    proof
        .check()
        .map_err(|e| InterpolationError::Failed(e.to_string()))?;
    let ground = extract_from_tableau(&proof.tableau)?;
    let mut left_only: BTreeSet<String> = symbols(&f, SymbolKind::Function);
    let right_fun = symbols(&g, SymbolKind::Function);
    let shared: BTreeSet<String> = left_only.intersection(&right_fun).cloned().collect();
    left_only.retain(|s| !shared.contains(s));
    left_only.extend(left.skolems.iter().map(|s| s.name.clone()));
    let vocab = Vocabulary { shared, left_only };
    let general = generalize_constants(&ground, &vocab);
    let formula = if back.is_empty() {
        general
    } else {
        general.map_terms(&|t| restore_vars(t, &back))
    };
    Ok(Interpolant {
        formula,
        ground,
        proof,
    })
}

fn restore_vars(t: &Term, back: &HashMap<String, String>) -> Term {
    match t {
        Term::App(c, args) if args.is_empty() && back.contains_key(c) => Term::var(back[c].clone()),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| restore_vars(a, back)).collect(),
        ),
        v => v.clone(),
    }
}

/// Checks `F ⊨ H` and `H ⊨ G` with the prover.
pub fn verify_interpolant(
    left: &Formula,
    h: &Formula,
    right: &Formula,
    cfg: &ProverConfig,
) -> bool {
    let entails = |a: &Formula, b: &Formula| {
        validate(&Formula::implies(a.clone(), b.clone()), cfg).is_valid()
    };
    entails(left, h) && entails(h, right)
}

/// Interpolants `H1..Hn` with `Fi ⊨ Hi`, the conjunction of all `Hi` unsatisfiable and each `Hi`
/// over the symbols `Fi` shares with the other parts, by sequential binary interpolation.
pub fn symmetric_interpolate(
    parts: &[Formula],
    options: &InterpolationOptions,
) -> Result<Vec<Formula>, InterpolationError> {
    if parts.is_empty() {
        return Ok(Vec::new());
    }
    match validate(
        &Formula::not(Formula::and(parts.iter().cloned())),
        &options.prover,
    ) {
        ValidationResult::Valid(_) => {}
        ValidationResult::NotValid(m) => return Err(InterpolationError::NotValid(m)),
        ValidationResult::Failed(e) => return Err(InterpolationError::Failed(e)),
    }
    let mut out: Vec<Formula> = Vec::new();
    for i in 0..parts.len() {
        let rest = Formula::and(out.iter().cloned().chain(parts[i + 1..].iter().cloned()));
        let task = InterpolationTask {
            left: parts[i].clone(),
            right: Formula::not(rest),
            options: options.clone(),
        };
        out.push(interpolate(&task)?.formula);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, to_text};

    fn ipol(text: &str, simp: bool) -> Interpolant {
        let f = parse_formula(text).unwrap();
        let opts = InterpolationOptions {
            simp_sides: simp,
            ..Default::default()
        };
        interpolate(&InterpolationTask::from_implication(&f, opts).unwrap()).unwrap()
    }

    #[test]
    fn propositional_example() {
        assert_eq!(to_text(&ipol("(p, q) -> (p ; r)", true).formula), "p");
        assert_eq!(to_text(&ipol("p -> p", true).formula), "p");
    }

    #[test]
    fn constants_become_quantified_variables() {
        let h = ipol("(all(x, p(a, x)), q) -> (ex(x, p(x, b)) ; r)", true);
        assert_eq!(to_text(&h.formula), "ex(x, all(y, p(x, y)))");
    }

    #[test]
    fn right_only_constant_is_universal() {
        let h = ipol("(all(x, p(x)), all(x, (p(x) -> q(x)))) -> q(c)", false);
        assert_eq!(to_text(&h.ground), "q(c)");
        assert_eq!(to_text(&h.formula), "all(x, q(x))");
    }

    #[test]
    fn invalid_task_reports_countermodel() {
        let f = parse_formula("p -> q").unwrap();
        let task =
            InterpolationTask::from_implication(&f, InterpolationOptions::default()).unwrap();
        assert!(matches!(
            interpolate(&task),
            Err(InterpolationError::NotValid(_))
        ));
    }

    #[test]
    fn symmetric_triple() {
        let parts: Vec<Formula> = ["p", "(~p ; q)", "~q"]
            .iter()
            .map(|t| parse_formula(t).unwrap())
            .collect();
        let hs = symmetric_interpolate(&parts, &InterpolationOptions::default()).unwrap();
        let cfg = ProverConfig::default();
        for (p, h) in parts.iter().zip(&hs) {
            assert!(validate(&Formula::implies(p.clone(), h.clone()), &cfg).is_valid());
        }
        assert!(validate(&Formula::not(Formula::and(hs.clone())), &cfg).is_valid());
        let parts: Vec<Formula> = ["(p, s)", "(~p ; q)", "~q"]
            .iter()
            .map(|t| parse_formula(t).unwrap())
            .collect();
        let hs = symmetric_interpolate(&parts, &InterpolationOptions::default()).unwrap();
        assert!(!to_text(&hs[0]).contains('s'));
    }

    #[test]
    fn definiens_by_second_order_implication() {
        let kb2 = "(all(x, (p(x) -> (q(x), s(x)))), all(x, (s(x) -> r(x))), all(x, ((q(x), r(x)) -> p(x))))";
        let text = format!("ex2([p, s], ({kb2}, p(a))) -> all2([p, s], ({kb2} -> p(a)))");
        let h = ipol(&text, true).formula;
        let expected = parse_formula("q(a), r(a)").unwrap();
        let cfg = ProverConfig::default();
        assert!(
            validate(&Formula::iff(h.clone(), expected), &cfg).is_valid(),
            "{}",
            to_text(&h)
        );
    }
}
