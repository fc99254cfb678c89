//! Formula macros: definition, pattern-matched expansion, builtin steps and
//! fresh-symbol binding.

mod builtins;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

pub use builtins::{
    builtin_get_arity, builtin_rename_free_predicate, builtin_transfer_clauses, Builtin, Direction,
    TransferSpec,
};

use crate::formula::{beta_reduce, is_placeholder, Formula, FreshNames};
use crate::syntax::{expr_to_formula, formula_to_expr, print_expr, Expr, ParseError};

pub const DEFAULT_MAX_DEPTH: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MacroError {
    #[error("malformed macro definition: {0}")]
    Malformed(String),
    #[error("placeholder {placeholder} in the template of {name} is never bound")]
    UnboundPlaceholder { name: String, placeholder: String },
    #[error("no definition of {name}/{arity} matches {call}")]
    NoMatch {
        name: String,
        arity: usize,
        call: String,
    },
    #[error("macro expansion exceeded depth {0}")]
    DepthExceeded(usize),
    #[error("{builtin}: {message}")]
    Builtin {
        builtin: &'static str,
        message: String,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// One builtin step of a macro body, with its arguments as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltinCall {
    pub builtin: Builtin,
    pub args: Vec<Expr>,
}

impl BuiltinCall {
    pub fn from_expr(e: &Expr) -> Result<BuiltinCall, MacroError> {
        let (name, arity) = e
            .functor()
            .ok_or_else(|| MacroError::Malformed(format!("bad step {}", print_expr(e))))?;
        let builtin = Builtin::from_name(name, arity)
            .ok_or_else(|| MacroError::Malformed(format!("unknown builtin {name}/{arity}")))?;
        Ok(BuiltinCall {
            builtin,
            args: e.args().to_vec(),
        })
    }

    fn inputs(&self) -> impl Iterator<Item = &Expr> {
        let outs = self.builtin.outputs();
        self.args
            .iter()
            .enumerate()
            .filter(move |(i, _)| !outs.contains(i))
            .map(|(_, a)| a)
    }

    fn outputs(&self) -> impl Iterator<Item = &Expr> {
        let outs = self.builtin.outputs();
        self.args
            .iter()
            .enumerate()
            .filter(move |(i, _)| outs.contains(i))
            .map(|(_, a)| a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroDefinition {
    pub name: String,
    /// Parameter patterns: placeholders match anything, other structure matches itself.
    pub params: Vec<Expr>,
    pub template: Expr,
    pub steps: Vec<BuiltinCall>,
    /// Settings in effect where the macro was declared.
    pub config: BTreeMap<String, String>,
}

impl MacroDefinition {
    /// Reads `def(Head) :: Template` or `def(Head) :: Template ::- Steps`.
    pub fn from_expr(e: &Expr) -> Result<MacroDefinition, MacroError> {
        let bad = || MacroError::Malformed(print_expr(e));
        let Expr::Compound(op, parts) = e else {
            return Err(bad());
        };
        if op != "::" || parts.len() != 2 {
            return Err(bad());
        }
        let head = match &parts[0] {
            Expr::Compound(d, h) if d == "def" && h.len() == 1 => &h[0],
            _ => return Err(bad()),
        };
        let (name, params) = match head {
            Expr::Atom(n) => (n.clone(), Vec::new()),
            Expr::Compound(n, args) if !is_placeholder(n) => (n.clone(), args.clone()),
            _ => return Err(bad()),
        };
        let (template, steps) = match &parts[1] {
            Expr::Compound(op, tb) if op == "::-" && tb.len() == 2 => {
                let mut steps = Vec::new();
                for s in conjuncts(&tb[1]) {
                    steps.push(BuiltinCall::from_expr(s)?);
                }
                (tb[0].clone(), steps)
            }
            t => (t.clone(), Vec::new()),
        };
        let def = MacroDefinition {
            name,
            params,
            template,
            steps,
            config: BTreeMap::new(),
        };
        def.check()?;
        Ok(def)
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    fn check(&self) -> Result<(), MacroError> {
        let mut bound = Vec::new();
        self.params.iter().for_each(|p| p.placeholders(&mut bound));
        for step in &self.steps {
            let mut needed = Vec::new();
            step.inputs().for_each(|a| a.placeholders(&mut needed));
            if let Some(missing) = needed.iter().find(|n| !bound.contains(n)) {
                return Err(MacroError::UnboundPlaceholder {
                    name: self.name.clone(),
                    placeholder: missing.clone(),
                });
            }
            step.outputs().for_each(|a| a.placeholders(&mut bound));
        }
        if !self.steps.is_empty() {
            return Ok(());
        }
        let mut used = Vec::new();
        self.template.placeholders(&mut used);
        let mut binders = Vec::new();
        binder_placeholders(&self.template, &mut binders);
        match used
            .into_iter()
            .find(|n| !bound.contains(n) && !binders.contains(n))
        {
            Some(p) => Err(MacroError::UnboundPlaceholder {
                name: self.name.clone(),
                placeholder: p,
            }),
            None => Ok(()),
        }
    }
}

fn conjuncts(e: &Expr) -> Vec<&Expr> {
    match e {
        Expr::Compound(op, args) if op == "," && args.len() == 2 => {
            let mut out = conjuncts(&args[0]);
            out.extend(conjuncts(&args[1]));
            out
        }
        other => vec![other],
    }
}

const BINDERS: [&str; 5] = ["all", "ex", "all2", "ex2", "lambda"];

/// Placeholders standing as quantified names, which are bound to fresh symbols.
fn binder_placeholders(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Compound(f, args) => {
            if BINDERS.contains(&f.as_str()) && args.len() == 2 {
                args[0].placeholders(out);
            }
            args.iter().for_each(|a| binder_placeholders(a, out));
        }
        Expr::List(items, _) => items.iter().for_each(|a| binder_placeholders(a, out)),
        Expr::Apply(h, args) => {
            binder_placeholders(h, out);
            args.iter().for_each(|a| binder_placeholders(a, out));
        }
        _ => {}
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MacroTable {
    defs: BTreeMap<(String, usize), Vec<MacroDefinition>>,
    order: Vec<(String, usize)>,
}

impl MacroTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `def`; a definition with the same head pattern is replaced in place.
    pub fn define(&mut self, def: MacroDefinition) {
        let key = (def.name.clone(), def.arity());
        let entry = self.defs.entry(key.clone()).or_default();
        match entry.iter_mut().find(|d| d.params == def.params) {
            Some(old) => *old = def,
            None => entry.push(def),
        }
        if !self.order.contains(&key) {
            self.order.push(key);
        }
    }

    pub fn contains(&self, name: &str, arity: usize) -> bool {
        self.defs.contains_key(&(name.to_string(), arity))
    }

    pub fn definitions(&self, name: &str, arity: usize) -> &[MacroDefinition] {
        self.defs
            .get(&(name.to_string(), arity))
            .map_or(&[], Vec::as_slice)
    }

    /// Name and arity of every defined macro, in order of first definition.
    pub fn names(&self) -> &[(String, usize)] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.defs.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    fn reserve_symbols(&self, fresh: &mut FreshNames) {
        fn walk(e: &Expr, fresh: &mut FreshNames) {
            match e {
                Expr::Atom(n) => fresh.reserve(n.clone()),
                Expr::Compound(f, args) => {
                    fresh.reserve(f.clone());
                    args.iter().for_each(|a| walk(a, fresh));
                }
                Expr::List(items, tail) => {
                    items.iter().for_each(|a| walk(a, fresh));
                    if let Some(t) = tail {
                        walk(t, fresh);
                    }
                }
                Expr::Apply(h, args) => {
                    walk(h, fresh);
                    args.iter().for_each(|a| walk(a, fresh));
                }
                Expr::Var(_) => {}
            }
        }
        for d in self.defs.values().flatten() {
            walk(&d.template, fresh);
        }
    }
}

/// Returns `table` extended with `def`.
pub fn define_macro(mut table: MacroTable, def: MacroDefinition) -> MacroTable {
    table.define(def);
    table
}

/// State carried through expansions: fresh names, the last reasoner result
/// and the depth bound.
#[derive(Clone, Debug)]
pub struct ExpansionContext {
    pub fresh: FreshNames,
    pub last_result: Option<Formula>,
    pub max_depth: usize,
}

impl Default for ExpansionContext {
    fn default() -> Self {
        ExpansionContext {
            fresh: FreshNames::new(),
            last_result: None,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

type Bindings = HashMap<String, Expr>;

fn match_pattern(pat: &Expr, e: &Expr, b: &mut Bindings) -> bool {
    match (pat, e) {
        (Expr::Var(v), _) => match b.get(v) {
            Some(prev) => prev == e,
            None => {
                b.insert(v.clone(), e.clone());
                true
            }
        },
        (Expr::Atom(a), Expr::Atom(c)) => a == c,
        (Expr::Compound(f, xs), Expr::Compound(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_pattern(x, y, b))
        }
        (Expr::List(xs, xt), Expr::List(ys, yt)) => {
            match_list(xs, xt.as_deref(), ys, yt.as_deref(), b)
        }
        _ => false,
    }
}

fn match_list(
    xs: &[Expr],
    xt: Option<&Expr>,
    ys: &[Expr],
    yt: Option<&Expr>,
    b: &mut Bindings,
) -> bool {
    match (xs.split_first(), ys.split_first()) {
        (Some((x, xr)), Some((y, yr))) => match_pattern(x, y, b) && match_list(xr, xt, yr, yt, b),
        (None, _) => {
            let rest = Expr::List(ys.to_vec(), yt.map(|t| Box::new(t.clone())));
            let rest = if ys.is_empty() {
                yt.cloned().unwrap_or(Expr::List(Vec::new(), None))
            } else {
                rest
            };
            match xt {
                Some(t) => match_pattern(t, &rest, b),
                None => matches!(rest, Expr::List(ref items, None) if items.is_empty()),
            }
        }
        (Some(_), None) => false,
    }
}

/// Replaces bound placeholders. A placeholder in functor position bound to a
/// name becomes that functor; bound to anything else it becomes an application.
pub fn instantiate(e: &Expr, b: &HashMap<String, Expr>) -> Expr {
    match e {
        Expr::Var(v) => b.get(v).cloned().unwrap_or_else(|| e.clone()),
        Expr::Atom(_) => e.clone(),
        Expr::Compound(f, args) => {
            let args: Vec<Expr> = args.iter().map(|a| instantiate(a, b)).collect();
            match b.get(f) {
                Some(Expr::Atom(n)) => Expr::Compound(n.clone(), args),
                Some(other) if is_placeholder(f) => Expr::Apply(Box::new(other.clone()), args),
                _ => Expr::Compound(f.clone(), args),
            }
        }
        Expr::List(items, tail) => {
            let items: Vec<Expr> = items.iter().map(|a| instantiate(a, b)).collect();
            match tail.as_deref().map(|t| instantiate(t, b)) {
                Some(Expr::List(more, t2)) => {
                    let mut all = items;
                    all.extend(more);
                    Expr::List(all, t2)
                }
                Some(t) => Expr::List(items, Some(Box::new(t))),
                None => Expr::List(items, None),
            }
        }
        Expr::Apply(h, args) => Expr::Apply(
            Box::new(instantiate(h, b)),
            args.iter().map(|a| instantiate(a, b)).collect(),
        ),
    }
}

struct Expander<'a> {
    table: &'a MacroTable,
    ctx: &'a mut ExpansionContext,
}

impl Expander<'_> {
    fn expand(&mut self, e: &Expr, depth: usize) -> Result<Expr, MacroError> {
        if depth > self.ctx.max_depth {
            return Err(MacroError::DepthExceeded(self.ctx.max_depth));
        }
        match e {
            Expr::Atom(n) if self.table.contains(n, 0) => self.call(n, &[], depth),
            Expr::Compound(f, args) if BINDERS.contains(&f.as_str()) && args.len() == 2 => {
                Ok(Expr::Compound(
                    f.clone(),
                    vec![args[0].clone(), self.expand(&args[1], depth)?],
                ))
            }
            Expr::Compound(f, args) if self.table.contains(f, args.len()) => {
                let args = args
                    .iter()
                    .map(|a| self.expand(a, depth))
                    .collect::<Result<Vec<_>, _>>()?;
                self.call(f, &args, depth)
            }
            Expr::Compound(f, args) if is_connective(f, args.len()) => {
                let args = args
                    .iter()
                    .map(|a| self.expand(a, depth))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Expr::Compound(f.clone(), args))
            }
            Expr::Compound(f, args) if args.iter().any(|a| !is_term_like(a)) => {
                // an unknown call with formula or list arguments: expand inside it
                let args = args
                    .iter()
                    .map(|a| self.expand(a, depth))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Expr::Compound(f.clone(), args))
            }
            Expr::List(items, tail) => Ok(Expr::List(
                items
                    .iter()
                    .map(|a| self.expand(a, depth))
                    .collect::<Result<_, _>>()?,
                tail.clone(),
            )),
            Expr::Apply(h, args) => Ok(Expr::Apply(Box::new(self.expand(h, depth)?), args.clone())),
            other => Ok(other.clone()),
        }
    }

    fn call(&mut self, name: &str, args: &[Expr], depth: usize) -> Result<Expr, MacroError> {
        let call_text = || {
            print_expr(&if args.is_empty() {
                Expr::atom(name)
            } else {
                Expr::compound(name, args.to_vec())
            })
        };
        let def = self
            .table
            .definitions(name, args.len())
            .iter()
            .find_map(|d| {
                let mut b = Bindings::new();
                d.params
                    .iter()
                    .zip(args)
                    .all(|(p, a)| match_pattern(p, a, &mut b))
                    .then_some((d, b))
            })
            .ok_or_else(|| MacroError::NoMatch {
                name: name.to_string(),
                arity: args.len(),
                call: call_text(),
            })?;
        let (def, mut bindings) = (def.0.clone(), def.1);
        for step in &def.steps {
            builtins::run_step(step, &mut bindings, self.ctx)?;
        }
        let mut free = Vec::new();
        def.template.placeholders(&mut free);
        for p in free {
            let base = p.to_lowercase().trim_start_matches('_').to_string();
            let base = if base.is_empty() {
                "v".to_string()
            } else {
                base
            };
            bindings
                .entry(p)
                .or_insert_with(|| Expr::Atom(self.ctx.fresh.fresh(&base)));
        }
        let body = instantiate(&def.template, &bindings);
        self.expand(&body, depth + 1)
    }
}

fn is_connective(f: &str, n: usize) -> bool {
    matches!(
        (f, n),
        (",", 2) | (";", 2) | ("->", 2) | ("<->", 2) | ("~", 1)
    )
}

fn is_term_like(e: &Expr) -> bool {
    match e {
        Expr::Atom(_) | Expr::Var(_) => true,
        Expr::Compound(f, args) => {
            !is_connective(f, args.len())
                && !BINDERS.contains(&f.as_str())
                && args.iter().all(is_term_like)
        }
        _ => false,
    }
}

/// Expands all macro calls in an expression.
pub fn expand_expr(
    table: &MacroTable,
    e: &Expr,
    ctx: &mut ExpansionContext,
) -> Result<Expr, MacroError> {
    table.reserve_symbols(&mut ctx.fresh);
    reserve_expr(e, &mut ctx.fresh);
    // deep recursion up to the depth bound needs more than a default thread stack
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(EXPANSION_STACK)
            .spawn_scoped(s, || Expander { table, ctx }.expand(e, 0))
            .expect("spawning the expansion thread")
            .join()
            .expect("expansion thread panicked")
    })
}

const EXPANSION_STACK: usize = 256 << 20;

fn reserve_expr(e: &Expr, fresh: &mut FreshNames) {
    match e {
        Expr::Atom(n) | Expr::Var(n) => fresh.reserve(n.clone()),
        Expr::Compound(f, args) => {
            fresh.reserve(f.clone());
            args.iter().for_each(|a| reserve_expr(a, fresh));
        }
        Expr::List(items, tail) => {
            items.iter().for_each(|a| reserve_expr(a, fresh));
            if let Some(t) = tail {
                reserve_expr(t, fresh);
            }
        }
        Expr::Apply(h, args) => {
            reserve_expr(h, fresh);
            args.iter().for_each(|a| reserve_expr(a, fresh));
        }
    }
}

/// Expands every macro call in `f`, β-reducing λ-applications that arise.
pub fn expand(
    table: &MacroTable,
    f: &Formula,
    ctx: &mut ExpansionContext,
) -> Result<Formula, MacroError> {
    ctx.fresh.reserve_formula(f);
    let e = expand_expr(table, &formula_to_expr(f), ctx)?;
    let g = beta_normalize(&expr_to_formula(&e)?)?;
    let mut leftover = None;
    g.visit(&mut |h| {
        if let Formula::MacroCall(name, args) = h {
            leftover.get_or_insert_with(|| (name.clone(), args.len(), h.to_string()));
        }
    });
    if let Some((name, arity, call)) = leftover {
        return Err(MacroError::NoMatch { name, arity, call });
    }
    Ok(g)
}

/// Reduces every λ-application whose head is a λ-expression.
pub fn beta_normalize(f: &Formula) -> Result<Formula, MacroError> {
    let err = |e: crate::formula::FormulaError| MacroError::Malformed(e.to_string());
    Ok(match f {
        Formula::LambdaApp(h, args) => match beta_normalize(h)? {
            Formula::Lambda(params, body) => {
                beta_normalize(&beta_reduce(&params, &body, args).map_err(err)?)?
            }
            Formula::Atom(p, none) if none.is_empty() => Formula::Atom(p, args.clone()),
            other => Formula::LambdaApp(Box::new(other), args.clone()),
        },
        Formula::Not(a) => Formula::not(beta_normalize(a)?),
        Formula::And(xs) => Formula::And(xs.iter().map(beta_normalize).collect::<Result<_, _>>()?),
        Formula::Or(xs) => Formula::Or(xs.iter().map(beta_normalize).collect::<Result<_, _>>()?),
        Formula::Implies(a, b) => Formula::implies(beta_normalize(a)?, beta_normalize(b)?),
        Formula::Iff(a, b) => Formula::iff(beta_normalize(a)?, beta_normalize(b)?),
        Formula::ForAll(v, a) => Formula::ForAll(v.clone(), Box::new(beta_normalize(a)?)),
        Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(beta_normalize(a)?)),
        Formula::ForAll2(p, a) => Formula::ForAll2(p.clone(), Box::new(beta_normalize(a)?)),
        Formula::Exists2(p, a) => Formula::Exists2(p.clone(), Box::new(beta_normalize(a)?)),
        Formula::Lambda(v, a) => Formula::Lambda(v.clone(), Box::new(beta_normalize(a)?)),
        other => other.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{alpha_eq, free_symbols};
    use crate::syntax::{parse_expr, parse_formula, to_text};

    fn table(src: &[&str]) -> MacroTable {
        let mut t = MacroTable::new();
        for s in src {
            t.define(MacroDefinition::from_expr(&parse_expr(s).unwrap()).unwrap());
        }
        t
    }

    const KB1: &str = "def(kb1) :: (sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), (wet(grass) -> wet(shoes))";
    const CIRC: &str = "def(circ(P, F)) :: F, ~ex2(P_p, (F_p, T1, ~T2)) ::- mac_rename_free_predicate(F, P, pn, F_p, P_p), mac_get_arity(P, F, A), mac_transfer_clauses([P/A-n], p, [P_p], T1), mac_transfer_clauses([P/A-n], n, [P_p], T2)";

    fn expand_src(t: &MacroTable, src: &str) -> Formula {
        expand(
            t,
            &parse_formula(src).unwrap(),
            &mut ExpansionContext::default(),
        )
        .unwrap()
    }

    #[test]
    fn definitions_enter_table() {
        let t = table(&[KB1, "def(explanation(Kb, Na, Ob)) :: all2(Na, (Kb -> Ob))"]);
        assert!(t.contains("kb1", 0));
        assert!(t.contains("explanation", 3));
    }

    #[test]
    fn undeclared_placeholder_rejected() {
        assert!(matches!(
            MacroDefinition::from_expr(&parse_expr("def(m(A)) :: p(A), X").unwrap()),
            Err(MacroError::UnboundPlaceholder { .. })
        ));
        assert!(
            MacroDefinition::from_expr(&parse_expr("def(m(A)) :: all(X, p(X, A))").unwrap())
                .is_ok()
        );
    }

    #[test]
    fn redefinition_replaces() {
        let mut t = table(&["def(m) :: p"]);
        t.define(MacroDefinition::from_expr(&parse_expr("def(m) :: q").unwrap()).unwrap());
        assert_eq!(t.len(), 1);
        assert_eq!(expand_src(&t, "m"), Formula::prop("q"));
    }

    #[test]
    fn explanation_expansion() {
        let t = table(&[KB1, "def(explanation(Kb, Na, Ob)) :: all2(Na, (Kb -> Ob))"]);
        let f = expand_src(&t, "explanation(kb1, [wet], wet(shoes))");
        let Formula::ForAll2(ps, _) = &f else {
            panic!("{f}")
        };
        assert_eq!(ps[0].name, "wet");
        assert!(!f.has_macro_calls());
    }

    #[test]
    fn circ_expansion_shape() {
        let t = table(&[CIRC]);
        let f = expand_src(&t, "circ(p, p(a))");
        let expected =
            parse_formula("p(a), ~ex2(q, (q(a), all(x, (q(x) -> p(x))), ~all(x, (p(x) -> q(x)))))")
                .unwrap();
        assert!(alpha_eq(&f, &expected), "{}", to_text(&f));
    }

    #[test]
    fn circ_of_kb1_renames_wet() {
        let t = table(&[KB1, CIRC]);
        let f = expand_src(&t, "circ(wet, kb1)");
        let Formula::And(parts) = &f else { panic!() };
        let Formula::Not(inner) = parts.last().unwrap() else {
            panic!()
        };
        let Formula::Exists2(_, body) = &**inner else {
            panic!()
        };
        let Formula::And(body_parts) = &**body else {
            panic!()
        };
        assert!(free_symbols(&body_parts[0])
            .iter()
            .all(|o| o.symbol != "wet"));
    }

    #[test]
    fn lambda_in_functor_position() {
        let t = table(&["def(edge_ok(E)) :: all([x,y], (E(x,y) -> x = y))"]);
        let f = expand_src(&t, "edge_ok(lambda([u,v], (u = v)))");
        assert!(
            alpha_eq(&f, &parse_formula("all([x,y], (x = y -> x = y))").unwrap()),
            "{f}"
        );
        let g = expand_src(&t, "edge_ok(e)");
        assert!(alpha_eq(
            &g,
            &parse_formula("all([x,y], (e(x,y) -> x = y))").unwrap()
        ));
    }

    #[test]
    fn structural_recursion_and_depth() {
        let t = table(&["def(conj([])) :: true", "def(conj([X|Xs])) :: X, conj(Xs)"]);
        assert_eq!(
            expand_src(&t, "conj([a,b])"),
            parse_formula("a, (b, true)").unwrap()
        );
        let looping = table(&["def(loop) :: loop"]);
        assert!(matches!(
            expand(
                &looping,
                &Formula::prop("loop"),
                &mut ExpansionContext::default()
            ),
            Err(MacroError::DepthExceeded(_))
        ));
    }

    #[test]
    fn closure_and_identity() {
        let t = table(&[KB1, CIRC]);
        let once = expand_src(&t, "circ(wet, kb1)");
        let twice = expand(&t, &once, &mut ExpansionContext::default()).unwrap();
        assert_eq!(once, twice);
        let plain = parse_formula("p -> q").unwrap();
        assert_eq!(
            expand(&t, &plain, &mut ExpansionContext::default()).unwrap(),
            plain
        );
    }

    #[test]
    fn no_match_is_error() {
        let t = table(&["def(f([])) :: true"]);
        assert!(matches!(
            expand(
                &t,
                &parse_formula("f([a])").unwrap(),
                &mut ExpansionContext::default()
            ),
            Err(MacroError::NoMatch { .. })
        ));
    }
}
