//! Interpretation of [`Expr`] trees as formulas and back.

use std::collections::BTreeMap;

use super::expr::Expr;
use super::ParseError;
use crate::formula::{is_placeholder, Formula, MacroArg, PredicateSpec, Term};

const KEYWORDS: &[(&str, usize)] = &[
    (",", 2),
    (";", 2),
    ("->", 2),
    ("<->", 2),
    ("~", 1),
    ("=", 2),
    ("\\=", 2),
    ("all", 2),
    ("ex", 2),
    ("all2", 2),
    ("ex2", 2),
    ("lambda", 2),
    ("::", 2),
    ("::-", 2),
    (":-", 1),
];

fn is_keyword(name: &str, arity: usize) -> bool {
    KEYWORDS.iter().any(|(k, n)| *k == name && *n == arity)
        || (arity == 0 && (name == "true" || name == "false"))
}

/// Symbols are identifiers: letters, digits and underscores.
fn is_symbol(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

fn not_a_symbol(name: &str) -> ParseError {
    ParseError::Malformed(format!("not an identifier: {name:?}"))
}

/// Reads a binder list: a single name or a list of names.
fn binder_names(e: &Expr) -> Option<Vec<String>> {
    let name = |x: &Expr| match x {
        Expr::Atom(n) | Expr::Var(n) if !is_keyword(n, 0) => Some(n.clone()),
        _ => None,
    };
    match e {
        Expr::List(items, None) => items.iter().map(name).collect(),
        other => name(other).map(|n| vec![n]),
    }
}

fn pred_specs(e: &Expr) -> Option<Vec<PredicateSpec>> {
    let spec = |x: &Expr| match x {
        Expr::Atom(n) | Expr::Var(n) => Some(PredicateSpec::named(n.clone())),
        Expr::Compound(s, args) if s == "/" && args.len() == 2 => match (&args[0], &args[1]) {
            (Expr::Atom(n) | Expr::Var(n), Expr::Atom(a)) => {
                a.parse().ok().map(|a| PredicateSpec::new(n.clone(), a))
            }
            _ => None,
        },
        _ => None,
    };
    match e {
        Expr::List(items, None) => items.iter().map(spec).collect(),
        other => spec(other).map(|s| vec![s]),
    }
}

/// Interprets an expression in term position. Bound names in `scope` become variables.
pub fn expr_to_term(e: &Expr, scope: &[String]) -> Option<Term> {
    match e {
        Expr::Atom(n) | Expr::Var(n) => {
            if is_keyword(n, 0) || !is_symbol(n) {
                None
            } else if scope.iter().any(|s| s == n) {
                Some(Term::Var(n.clone()))
            } else {
                Some(Term::constant(n.clone()))
            }
        }
        Expr::Compound(f, args) if !is_keyword(f, args.len()) && is_symbol(f) => {
            let args = args
                .iter()
                .map(|a| expr_to_term(a, scope))
                .collect::<Option<Vec<_>>>()?;
            Some(Term::App(f.clone(), args))
        }
        _ => None,
    }
}

fn expr_to_macro_arg(e: &Expr, scope: &mut Vec<String>) -> Result<MacroArg, ParseError> {
    if let Some(t) = expr_to_term(e, scope) {
        return Ok(MacroArg::Term(t));
    }
    match e {
        Expr::List(items, None) => Ok(MacroArg::List(
            items
                .iter()
                .map(|i| expr_to_macro_arg(i, scope))
                .collect::<Result<_, _>>()?,
        )),
        other => Ok(MacroArg::Formula(expr_to_formula_in(other, scope)?)),
    }
}

fn term_arg(e: &Expr, scope: &[String]) -> Result<Term, ParseError> {
    expr_to_term(e, scope).ok_or_else(|| {
        ParseError::Malformed(format!(
            "expected a term, found {}",
            super::expr::print_expr(e)
        ))
    })
}

/// Interprets a closed expression as a formula.
pub fn expr_to_formula(e: &Expr) -> Result<Formula, ParseError> {
    expr_to_formula_in(e, &mut Vec::new())
}

pub fn expr_to_formula_in(e: &Expr, scope: &mut Vec<String>) -> Result<Formula, ParseError> {
    match e {
        Expr::Atom(n) if n == "true" => Ok(Formula::True),
        Expr::Atom(n) if n == "false" => Ok(Formula::False),
        Expr::Atom(n) | Expr::Var(n) if is_symbol(n) => Ok(Formula::prop(n.clone())),
        Expr::Atom(n) | Expr::Var(n) => Err(not_a_symbol(n)),
        Expr::List(..) => Err(ParseError::Malformed(format!(
            "list in formula position: {}",
            super::expr::print_expr(e)
        ))),
        Expr::Apply(h, args) => {
            let head = expr_to_formula_in(h, scope)?;
            let args = args
                .iter()
                .map(|a| term_arg(a, scope))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::LambdaApp(Box::new(head), args))
        }
        Expr::Compound(f, args) => {
            let a = args;
            match (f.as_str(), a.len()) {
                (",", 2) => Ok(Formula::and([
                    expr_to_formula_in(&a[0], scope)?,
                    expr_to_formula_in(&a[1], scope)?,
                ])),
                (";", 2) => Ok(Formula::or([
                    expr_to_formula_in(&a[0], scope)?,
                    expr_to_formula_in(&a[1], scope)?,
                ])),
                ("->", 2) => Ok(Formula::implies(
                    expr_to_formula_in(&a[0], scope)?,
                    expr_to_formula_in(&a[1], scope)?,
                )),
                ("<->", 2) => Ok(Formula::iff(
                    expr_to_formula_in(&a[0], scope)?,
                    expr_to_formula_in(&a[1], scope)?,
                )),
                ("~", 1) => Ok(Formula::not(expr_to_formula_in(&a[0], scope)?)),
                ("=", 2) => Ok(Formula::eq(
                    term_arg(&a[0], scope)?,
                    term_arg(&a[1], scope)?,
                )),
                ("\\=", 2) => Ok(Formula::not(Formula::eq(
                    term_arg(&a[0], scope)?,
                    term_arg(&a[1], scope)?,
                ))),
                ("all" | "ex" | "lambda", 2) => {
                    let vars = binder_names(&a[0]).ok_or_else(|| {
                        ParseError::Malformed(format!(
                            "bad variable list in {f}/2: {}",
                            super::expr::print_expr(&a[0])
                        ))
                    })?;
                    let n = scope.len();
                    scope.extend(vars.iter().cloned());
                    let body = expr_to_formula_in(&a[1], scope);
                    scope.truncate(n);
                    let body = body?;
                    Ok(match f.as_str() {
                        "all" => Formula::forall(vars, body),
                        "ex" => Formula::exists(vars, body),
                        _ => Formula::lambda(vars, body),
                    })
                }
                ("all2" | "ex2", 2) => {
                    let preds = pred_specs(&a[0]).ok_or_else(|| {
                        ParseError::Malformed(format!(
                            "bad predicate list in {f}/2: {}",
                            super::expr::print_expr(&a[0])
                        ))
                    })?;
                    let body = expr_to_formula_in(&a[1], scope)?;
                    Ok(if f == "all2" {
                        Formula::forall2(preds, body)
                    } else {
                        Formula::exists2(preds, body)
                    })
                }
                ("::" | "::-", 2) | (":-", 1) => Err(ParseError::Malformed(format!(
                    "`{f}` is not a formula connective"
                ))),
                _ if !is_symbol(f) => Err(not_a_symbol(f)),
                _ => {
                    let terms: Option<Vec<Term>> =
                        a.iter().map(|x| expr_to_term(x, scope)).collect();
                    match terms {
                        Some(ts) => Ok(Formula::Atom(f.clone(), ts)),
                        None => Ok(Formula::MacroCall(
                            f.clone(),
                            a.iter()
                                .map(|x| expr_to_macro_arg(x, scope))
                                .collect::<Result<_, _>>()?,
                        )),
                    }
                }
            }
        }
    }
}

/// Fails when a predicate symbol is used with two different arities.
pub fn check_arities(f: &Formula) -> Result<(), ParseError> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut clash = None;
    f.visit(&mut |g| {
        if let Formula::Atom(p, args) = g {
            if is_placeholder(p) || clash.is_some() {
                return;
            }
            match seen.get(p) {
                Some(&n) if n != args.len() => {
                    clash = Some(ParseError::ArityClash {
                        symbol: p.clone(),
                        first: n,
                        second: args.len(),
                    })
                }
                Some(_) => {}
                None => {
                    seen.insert(p.clone(), args.len());
                }
            }
        }
    });
    clash.map_or(Ok(()), Err)
}

fn name_expr(n: &str) -> Expr {
    if is_placeholder(n) {
        Expr::Var(n.to_string())
    } else {
        Expr::Atom(n.to_string())
    }
}

pub fn term_to_expr(t: &Term) -> Expr {
    match t {
        Term::Var(v) => name_expr(v),
        Term::App(c, args) if args.is_empty() => name_expr(c),
        Term::App(f, args) => Expr::Compound(f.clone(), args.iter().map(term_to_expr).collect()),
    }
}

fn names_expr(names: &[String]) -> Expr {
    if names.len() == 1 {
        name_expr(&names[0])
    } else {
        Expr::List(names.iter().map(|n| name_expr(n)).collect(), None)
    }
}

fn macro_arg_expr(a: &MacroArg) -> Expr {
    match a {
        MacroArg::Formula(f) => formula_to_expr(f),
        MacroArg::Term(t) => term_to_expr(t),
        MacroArg::List(items) => Expr::List(items.iter().map(macro_arg_expr).collect(), None),
    }
}

fn nest(op: &str, parts: Vec<Expr>, empty: &str) -> Expr {
    let mut it = parts.into_iter().rev();
    let Some(mut acc) = it.next() else {
        return Expr::atom(empty);
    };
    for p in it {
        acc = Expr::compound(op, vec![p, acc]);
    }
    acc
}

pub fn formula_to_expr(f: &Formula) -> Expr {
    match f {
        Formula::Atom(p, args) if args.is_empty() => name_expr(p),
        Formula::Atom(p, args) => {
            Expr::Compound(p.clone(), args.iter().map(term_to_expr).collect())
        }
        Formula::Eq(s, t) => Expr::compound("=", vec![term_to_expr(s), term_to_expr(t)]),
        Formula::True => Expr::atom("true"),
        Formula::False => Expr::atom("false"),
        Formula::Not(a) => Expr::compound("~", vec![formula_to_expr(a)]),
        Formula::And(xs) => nest(",", xs.iter().map(formula_to_expr).collect(), "true"),
        Formula::Or(xs) => nest(";", xs.iter().map(formula_to_expr).collect(), "false"),
        Formula::Implies(a, b) => {
            Expr::compound("->", vec![formula_to_expr(a), formula_to_expr(b)])
        }
        Formula::Iff(a, b) => Expr::compound("<->", vec![formula_to_expr(a), formula_to_expr(b)]),
        Formula::ForAll(vs, a) => Expr::compound("all", vec![names_expr(vs), formula_to_expr(a)]),
        Formula::Exists(vs, a) => Expr::compound("ex", vec![names_expr(vs), formula_to_expr(a)]),
        Formula::ForAll2(ps, a) | Formula::Exists2(ps, a) => {
            let names: Vec<String> = ps.iter().map(|p| p.name.clone()).collect();
            let q = if matches!(f, Formula::ForAll2(..)) {
                "all2"
            } else {
                "ex2"
            };
            Expr::compound(q, vec![names_expr(&names), formula_to_expr(a)])
        }
        Formula::Lambda(vs, a) => Expr::compound(
            "lambda",
            vec![
                Expr::List(vs.iter().map(|v| name_expr(v)).collect(), None),
                formula_to_expr(a),
            ],
        ),
        Formula::MacroCall(name, args) => {
            Expr::Compound(name.clone(), args.iter().map(macro_arg_expr).collect())
        }
        Formula::LambdaApp(h, args) => Expr::Apply(
            Box::new(formula_to_expr(h)),
            args.iter().map(term_to_expr).collect(),
        ),
    }
}
