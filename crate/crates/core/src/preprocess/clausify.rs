use std::collections::{BTreeSet, HashMap};

use super::{ClausalForm, Clause, LitAtom, Literal, PreprocessError, Skolem};
use crate::formula::{free_vars, nnf, rename_bound, Formula, FreshNames, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClausifyMode {
    /// Distribution; the result is equivalent to the input up to Skolemization.
    #[default]
    Equivalence,
    /// Definitions for conjunctions nested in disjunctions; equisatisfiable.
    Definitional,
}

/// Converts a first-order formula to clauses. Skolem symbols are named `sk1`,
/// `sk2`, ... avoiding the symbols of `f`.
pub fn clausify(f: &Formula, mode: ClausifyMode) -> Result<ClausalForm, PreprocessError> {
    let mut names = FreshNames::avoiding(f);
    clausify_with(f, mode, &mut names)
}

/// Like [`clausify`], drawing Skolem and definition names from `names`.
pub fn clausify_with(
    f: &Formula,
    mode: ClausifyMode,
    names: &mut FreshNames,
) -> Result<ClausalForm, PreprocessError> {
    if !f.is_first_order() && !only_lambda_apps(f) {
        return Err(PreprocessError::NotFirstOrder(f.to_string()));
    }
    let g = rename_bound(&nnf(f));
    if !g.is_first_order() {
        return Err(PreprocessError::NotFirstOrder(f.to_string()));
    }
    let g = miniscope(&g);
    let mut skolems = Vec::new();
    let matrix = skolemize(&g, &mut Vec::new(), names, &mut skolems);
    let mut definitions = Vec::new();
    let raw = match mode {
        ClausifyMode::Equivalence => cnf(&matrix),
        ClausifyMode::Definitional => {
            let mut out = Vec::new();
            def_cnf(&matrix, names, &mut definitions, &mut out);
            out
        }
    };
    let clauses = raw
        .into_iter()
        .map(Clause::new)
        .filter(|c| !c.is_tautology())
        .collect();
    Ok(ClausalForm {
        clauses,
        skolems,
        definitions,
    })
}

fn only_lambda_apps(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |g| {
        if matches!(
            g,
            Formula::ForAll2(..) | Formula::Exists2(..) | Formula::MacroCall(..)
        ) {
            ok = false;
        }
    });
    ok
}

/// Pushes quantifiers of an NNF formula inwards.
pub fn miniscope(f: &Formula) -> Formula {
    match f {
        Formula::And(xs) => Formula::and(xs.iter().map(miniscope)),
        Formula::Or(xs) => Formula::or(xs.iter().map(miniscope)),
        Formula::ForAll(vs, body) | Formula::Exists(vs, body) => {
            let universal = matches!(f, Formula::ForAll(..));
            let mut acc = miniscope(body);
            for v in vs.iter().rev() {
                acc = push_quantifier(universal, v, acc);
            }
            acc
        }
        other => other.clone(),
    }
}

fn quant(universal: bool, v: &str, body: Formula) -> Formula {
    if universal {
        Formula::ForAll(vec![v.to_string()], Box::new(body))
    } else {
        Formula::Exists(vec![v.to_string()], Box::new(body))
    }
}

fn push_quantifier(universal: bool, v: &str, body: Formula) -> Formula {
    if !free_vars(&body).contains(v) {
        return body;
    }
    match body {
        Formula::And(xs) if universal => {
            Formula::and(xs.into_iter().map(|x| push_quantifier(true, v, x)))
        }
        Formula::Or(xs) if !universal => {
            Formula::or(xs.into_iter().map(|x| push_quantifier(false, v, x)))
        }
        Formula::And(xs) | Formula::Or(xs) => {
            let is_and = !universal;
            let (with, without): (Vec<Formula>, Vec<Formula>) =
                xs.into_iter().partition(|x| free_vars(x).contains(v));
            let inner = if with.len() == 1 {
                push_quantifier(universal, v, with.into_iter().next().unwrap())
            } else {
                quant(
                    universal,
                    v,
                    if is_and {
                        Formula::and(with)
                    } else {
                        Formula::or(with)
                    },
                )
            };
            let mut parts = without;
            parts.push(inner);
            if is_and {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        other => quant(universal, v, other),
    }
}

fn skolemize(
    f: &Formula,
    universals: &mut Vec<String>,
    names: &mut FreshNames,
    skolems: &mut Vec<Skolem>,
) -> Formula {
    match f {
        Formula::And(xs) => Formula::and(
            xs.iter()
                .map(|x| skolemize(x, universals, names, skolems))
                .collect::<Vec<_>>(),
        ),
        Formula::Or(xs) => Formula::or(
            xs.iter()
                .map(|x| skolemize(x, universals, names, skolems))
                .collect::<Vec<_>>(),
        ),
        Formula::ForAll(vs, body) => {
            let n = universals.len();
            universals.extend(vs.iter().cloned());
            let out = skolemize(body, universals, names, skolems);
            universals.truncate(n);
            out
        }
        Formula::Exists(vs, body) => {
            let fv = free_vars(f);
            let deps: Vec<String> = universals
                .iter()
                .filter(|u| fv.contains(*u))
                .cloned()
                .collect();
            let mut map = HashMap::new();
            for v in vs {
                let name = names.fresh_indexed("sk");
                skolems.push(Skolem {
                    name: name.clone(),
                    arity: deps.len(),
                    deps: deps.clone(),
                });
                map.insert(
                    v.clone(),
                    Term::App(name, deps.iter().map(|d| Term::var(d.clone())).collect()),
                );
            }
            let body = crate::formula::substitute_vars(body, &map);
            skolemize(&body, universals, names, skolems)
        }
        other => other.clone(),
    }
}

fn literal(f: &Formula) -> Literal {
    Literal::from_formula(f).unwrap_or_else(|| panic!("not a literal after normalization: {f:?}"))
}

/// CNF of a quantifier-free NNF formula as literal lists.
pub(crate) fn cnf(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::True => Vec::new(),
        Formula::False => vec![Vec::new()],
        Formula::And(xs) => xs.iter().flat_map(cnf).collect(),
        Formula::Or(xs) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for x in xs {
                let part = cnf(x);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for p in &part {
                        let mut c = a.clone();
                        for l in p {
                            if !c.contains(l) {
                                c.push(l.clone());
                            }
                        }
                        if !is_tautology(&c) {
                            next.push(c);
                        }
                    }
                }
                acc = next;
            }
            acc
        }
        other => vec![vec![literal(other)]],
    }
}

fn is_tautology(lits: &[Literal]) -> bool {
    lits.iter()
        .enumerate()
        .any(|(i, l)| lits[i + 1..].iter().any(|m| l.is_complement_of(m)))
}

fn def_cnf(
    f: &Formula,
    names: &mut FreshNames,
    defs: &mut Vec<String>,
    out: &mut Vec<Vec<Literal>>,
) {
    match f {
        Formula::And(xs) => xs.iter().for_each(|x| def_cnf(x, names, defs, out)),
        Formula::Or(xs) => {
            let mut parts = Vec::new();
            for x in xs {
                match x {
                    Formula::And(_) => {
                        let vars: BTreeSet<String> = free_vars(x);
                        let name = names.fresh_indexed("def");
                        defs.push(name.clone());
                        let args: Vec<Term> = vars.into_iter().map(Term::Var).collect();
                        let atom = LitAtom::Pred(name.clone(), args.clone());
                        // only d -> x is needed since d occurs positively
                        let mut sub = Vec::new();
                        def_cnf(x, names, defs, &mut sub);
                        for mut c in sub {
                            c.insert(0, Literal::neg(atom.clone()));
                            out.push(c);
                        }
                        parts.push(Formula::Atom(name, args));
                    }
                    other => parts.push(other.clone()),
                }
            }
            out.extend(cnf(&Formula::or(parts)));
        }
        other => out.extend(cnf(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn clauses(src: &str) -> Vec<String> {
        let cf = clausify(&parse_formula(src).unwrap(), ClausifyMode::Equivalence).unwrap();
        cf.clauses.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn implication() {
        assert_eq!(clauses("p -> q"), vec!["~p ; q"]);
    }

    #[test]
    fn skolem_function() {
        let cf = clausify(
            &parse_formula("all(x, ex(y, p(x,y)))").unwrap(),
            ClausifyMode::Equivalence,
        )
        .unwrap();
        assert_eq!(cf.clauses.len(), 1);
        assert_eq!(cf.clauses[0].to_string(), "p(x, sk1(x))");
        assert_eq!(
            cf.skolems,
            vec![Skolem {
                name: "sk1".into(),
                arity: 1,
                deps: vec!["x".into()]
            }]
        );
    }

    #[test]
    fn miniscoping_lowers_skolem_arity() {
        let cf = clausify(
            &parse_formula("all(x, (p(x) ; ex(y, q(y))))").unwrap(),
            ClausifyMode::Equivalence,
        )
        .unwrap();
        assert_eq!(cf.skolems[0].arity, 0);
    }

    #[test]
    fn definitional_mode_is_not_larger_here() {
        let f = parse_formula("(a ; b) , (a ; c)").unwrap();
        let e = clausify(&f, ClausifyMode::Equivalence).unwrap();
        let d = clausify(&f, ClausifyMode::Definitional).unwrap();
        assert!(d.clauses.len() <= e.clauses.len());
    }

    #[test]
    fn second_order_rejected() {
        assert!(clausify(
            &parse_formula("ex2(p, p)").unwrap(),
            ClausifyMode::Equivalence
        )
        .is_err());
    }
}
