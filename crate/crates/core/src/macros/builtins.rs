use std::collections::HashMap;

use super::{ExpansionContext, MacroError};
use crate::formula::{
    free_symbols, predicate_arities, substitute_predicate, Formula, FreshNames, PredReplacement,
    PredicateSpec, SymbolKind, Term,
};
use crate::syntax::{expr_to_formula, formula_to_expr, print_expr, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    RenameFreePredicate,
    GetArity,
    TransferClauses,
    LastResult,
}

impl Builtin {
    pub fn from_name(name: &str, arity: usize) -> Option<Builtin> {
        match (name, arity) {
            ("mac_rename_free_predicate", 5) => Some(Builtin::RenameFreePredicate),
            ("mac_get_arity", 3) => Some(Builtin::GetArity),
            ("mac_transfer_clauses", 4) => Some(Builtin::TransferClauses),
            ("last_ppl_result", 1) => Some(Builtin::LastResult),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::RenameFreePredicate => "mac_rename_free_predicate",
            Builtin::GetArity => "mac_get_arity",
            Builtin::TransferClauses => "mac_transfer_clauses",
            Builtin::LastResult => "last_ppl_result",
        }
    }

    /// Argument positions written by the builtin.
    pub fn outputs(self) -> &'static [usize] {
        match self {
            Builtin::RenameFreePredicate => &[3, 4],
            Builtin::GetArity => &[2],
            Builtin::TransferClauses => &[3],
            Builtin::LastResult => &[0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Clauses `P'(x) -> P(x)`.
    P,
    /// Clauses `P(x) -> P'(x)`.
    N,
}

/// A predicate with its arity, as in `p/1-n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferSpec {
    pub name: String,
    pub arity: usize,
}

const PREDICATE_POOL: [&str; 8] = ["p", "q", "r", "s", "t", "p1", "q1", "r1"];

fn fail(b: Builtin, message: impl Into<String>) -> MacroError {
    MacroError::Builtin {
        builtin: b.name(),
        message: message.into(),
    }
}

fn fresh_predicate(fresh: &mut FreshNames) -> String {
    for candidate in PREDICATE_POOL {
        if !fresh.is_used(candidate) {
            fresh.reserve(candidate);
            return candidate.to_string();
        }
    }
    fresh.fresh_indexed("p")
}

/// Renames every free occurrence of `p` in `f`, in both polarities, to a fresh predicate.
pub fn builtin_rename_free_predicate(
    f: &Formula,
    p: &str,
    fresh: &mut FreshNames,
) -> Result<(Formula, String), MacroError> {
    let b = Builtin::RenameFreePredicate;
    if !free_symbols(f)
        .iter()
        .any(|o| o.kind == SymbolKind::Predicate && o.symbol == p)
    {
        return Err(fail(b, format!("{p} does not occur free in {f}")));
    }
    fresh.reserve_formula(f);
    let name = fresh_predicate(fresh);
    let g = substitute_predicate(
        f,
        &PredicateSpec::named(p),
        &PredReplacement::Symbol(name.clone()),
    )
    .map_err(|e| fail(b, e.to_string()))?;
    Ok((g, name))
}

/// The single arity with which `p` occurs in `f`.
pub fn builtin_get_arity(p: &str, f: &Formula) -> Result<usize, MacroError> {
    let b = Builtin::GetArity;
    match predicate_arities(f).get(p) {
        None => Err(fail(b, format!("{p} does not occur in {f}"))),
        Some(ns) if ns.len() == 1 => Ok(*ns.iter().next().unwrap()),
        Some(ns) => Err(fail(b, format!("{p} occurs with arities {ns:?}"))),
    }
}

fn variables(n: usize) -> Vec<String> {
    const NAMES: [&str; 3] = ["x", "y", "z"];
    (0..n)
        .map(|i| {
            if n <= 3 {
                NAMES[i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        })
        .collect()
}

/// Direction `P` gives the conjunction of `∀x (p'(x) → p(x))`, direction `N` the converse.
pub fn builtin_transfer_clauses(
    specs: &[TransferSpec],
    dir: Direction,
    primed: &[String],
) -> Result<Formula, MacroError> {
    let b = Builtin::TransferClauses;
    if specs.len() != primed.len() {
        return Err(fail(
            b,
            format!(
                "{} predicates but {} primed names",
                specs.len(),
                primed.len()
            ),
        ));
    }
    Ok(Formula::and(specs.iter().zip(primed).map(|(s, q)| {
        let vars = variables(s.arity);
        let args: Vec<Term> = vars.iter().map(|v| Term::var(v.clone())).collect();
        let orig = Formula::atom(s.name.clone(), args.clone());
        let copy = Formula::atom(q.clone(), args);
        let body = match dir {
            Direction::P => Formula::implies(copy, orig),
            Direction::N => Formula::implies(orig, copy),
        };
        Formula::forall(vars, body)
    })))
}

fn symbol(b: Builtin, e: &Expr) -> Result<String, MacroError> {
    match e {
        Expr::Atom(n) => Ok(n.clone()),
        other => Err(fail(
            b,
            format!("expected a symbol, found {}", print_expr(other)),
        )),
    }
}

fn transfer_spec(e: &Expr) -> Result<TransferSpec, MacroError> {
    let b = Builtin::TransferClauses;
    let bad = || fail(b, format!("expected P/A-n, found {}", print_expr(e)));
    let Expr::Compound(minus, parts) = e else {
        return Err(bad());
    };
    if minus != "-" || parts.len() != 2 || parts[1] != Expr::atom("n") {
        return Err(bad());
    }
    let Expr::Compound(slash, pa) = &parts[0] else {
        return Err(bad());
    };
    if slash != "/" || pa.len() != 2 {
        return Err(bad());
    }
    let name = symbol(b, &pa[0])?;
    let arity = symbol(b, &pa[1])?.parse().map_err(|_| bad())?;
    Ok(TransferSpec { name, arity })
}

fn bind(
    b: Builtin,
    target: &Expr,
    value: Expr,
    bindings: &mut HashMap<String, Expr>,
) -> Result<(), MacroError> {
    match target {
        Expr::Var(v) => match bindings.get(v) {
            Some(prev) if *prev != value => Err(fail(
                b,
                format!("{v} is already bound to {}", print_expr(prev)),
            )),
            _ => {
                bindings.insert(v.clone(), value);
                Ok(())
            }
        },
        other if *other == value => Ok(()),
        other => Err(fail(
            b,
            format!(
                "output {} does not match {}",
                print_expr(other),
                print_expr(&value)
            ),
        )),
    }
}

pub(super) fn run_step(
    step: &super::BuiltinCall,
    bindings: &mut HashMap<String, Expr>,
    ctx: &mut ExpansionContext,
) -> Result<(), MacroError> {
    let b = step.builtin;
    let arg = |i: usize| super::instantiate(&step.args[i], bindings);
    let formula = |e: &Expr| expr_to_formula(e).map_err(|err| fail(b, err.to_string()));
    match b {
        Builtin::RenameFreePredicate => {
            let f = formula(&arg(0))?;
            let p = symbol(b, &arg(1))?;
            if arg(2) != Expr::atom("pn") {
                return Err(fail(
                    b,
                    format!("unsupported polarity mode {}", print_expr(&arg(2))),
                ));
            }
            let (g, q) = builtin_rename_free_predicate(&f, &p, &mut ctx.fresh)?;
            let (out_f, out_p) = (step.args[3].clone(), step.args[4].clone());
            bind(b, &out_f, formula_to_expr(&g), bindings)?;
            bind(b, &out_p, Expr::Atom(q), bindings)
        }
        Builtin::GetArity => {
            let p = symbol(b, &arg(0))?;
            let f = formula(&arg(1))?;
            let n = builtin_get_arity(&p, &f)?;
            bind(
                b,
                &step.args[2].clone(),
                Expr::Atom(n.to_string()),
                bindings,
            )
        }
        Builtin::TransferClauses => {
            let specs = arg(0)
                .as_items()
                .iter()
                .map(transfer_spec)
                .collect::<Result<Vec<_>, _>>()?;
            let dir = match arg(1) {
                Expr::Atom(d) if d == "p" => Direction::P,
                Expr::Atom(d) if d == "n" => Direction::N,
                other => {
                    return Err(fail(
                        b,
                        format!("unsupported direction {}", print_expr(&other)),
                    ))
                }
            };
            let primed = arg(2)
                .as_items()
                .iter()
                .map(|e| symbol(b, e))
                .collect::<Result<Vec<_>, _>>()?;
            let t = builtin_transfer_clauses(&specs, dir, &primed)?;
            bind(b, &step.args[3].clone(), formula_to_expr(&t), bindings)
        }
        Builtin::LastResult => {
            let r = ctx
                .last_result
                .clone()
                .ok_or_else(|| fail(b, "no reasoner result is available"))?;
            bind(b, &step.args[0].clone(), formula_to_expr(&r), bindings)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, to_text};

    #[test]
    fn rename_picks_fresh_letter() {
        let f = parse_formula("p(a)").unwrap();
        let mut fresh = FreshNames::avoiding(&f);
        let (g, q) = builtin_rename_free_predicate(&f, "p", &mut fresh).unwrap();
        assert_eq!((to_text(&g).as_str(), q.as_str()), ("q(a)", "q"));
        assert!(
            builtin_rename_free_predicate(&parse_formula("q(a)").unwrap(), "p", &mut fresh)
                .is_err()
        );
    }

    #[test]
    fn transfer_directions() {
        let spec = [TransferSpec {
            name: "p".into(),
            arity: 1,
        }];
        let q = ["q".to_string()];
        assert_eq!(
            to_text(&builtin_transfer_clauses(&spec, Direction::P, &q).unwrap()),
            "all(x, (q(x)->p(x)))"
        );
        assert_eq!(
            to_text(&builtin_transfer_clauses(&spec, Direction::N, &q).unwrap()),
            "all(x, (p(x)->q(x)))"
        );
        assert_eq!(
            builtin_transfer_clauses(&[], Direction::P, &[]).unwrap(),
            Formula::True
        );
    }

    #[test]
    fn arity_lookup() {
        let kb1 =
            parse_formula("(sprinkler_was_on -> wet(grass)), (wet(grass) -> wet(shoes))").unwrap();
        assert_eq!(builtin_get_arity("wet", &kb1).unwrap(), 1);
        assert_eq!(builtin_get_arity("sprinkler_was_on", &kb1).unwrap(), 0);
        assert!(builtin_get_arity("p", &parse_formula("q(a)").unwrap()).is_err());
    }
}
