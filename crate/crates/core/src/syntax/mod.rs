//! Reading and writing formulas: the operator syntax, LaTeX, TPTP and DIMACS.

mod convert;
mod dimacs;
pub mod expr;
mod latex;
mod lexer;
mod tptp;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Term};

pub use convert::{
    check_arities, expr_to_formula, expr_to_formula_in, expr_to_term, formula_to_expr, term_to_expr,
};
pub use dimacs::{emit_dimacs, emit_qdimacs, Dimacs, DimacsError, Quantifier};
pub use expr::{parse_expr, print_expr, Expr, ExprParser, Statement};
pub use latex::{latex_display, tex_symbol, to_latex};
pub use tptp::{emit_tptp, TptpError, TptpRole};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourcePosition {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct SyntaxError {
    pub message: String,
    pub pos: SourcePosition,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("symbol {symbol} is used with arities {first} and {second}")]
    ArityClash {
        symbol: String,
        first: usize,
        second: usize,
    },
    #[error("{0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Style {
    #[default]
    Text,
    Latex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintOptions {
    pub style: Style,
    /// Arguments follow their functor without parentheses and commas.
    pub compact: bool,
    /// Trailing digits as subscripts and a `_p` suffix as a prime (LaTeX only).
    pub symbol_conversion: bool,
    /// Names rendered as macro names in LaTeX.
    pub macro_names: BTreeSet<String>,
}

impl Default for PrintOptions {
    fn default() -> Self {
        PrintOptions {
            style: Style::Text,
            compact: false,
            symbol_conversion: true,
            macro_names: BTreeSet::new(),
        }
    }
}

impl PrintOptions {
    pub fn latex() -> Self {
        PrintOptions {
            style: Style::Latex,
            ..Default::default()
        }
    }
}

/// Parses a formula in the operator syntax. A final `.` is optional.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let e = parse_expr(src)?;
    let f = expr_to_formula(&e)?;
    check_arities(&f)?;
    Ok(f)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let e = parse_expr(src)?;
    expr_to_term(&e, &[]).ok_or_else(|| ParseError::Malformed(format!("not a term: {src}")))
}

pub fn to_text(f: &Formula) -> String {
    print_expr(&formula_to_expr(f))
}

pub fn term_to_text(t: &Term) -> String {
    print_expr(&term_to_expr(t))
}

pub fn print_formula(f: &Formula, opts: &PrintOptions) -> String {
    match opts.style {
        Style::Latex => to_latex(f, opts),
        Style::Text if opts.compact => print_expr(&compact(&formula_to_expr(f))),
        Style::Text => to_text(f),
    }
}

fn compact(e: &Expr) -> Expr {
    fn flat(e: &Expr) -> String {
        match e {
            Expr::Atom(a) | Expr::Var(a) => a.clone(),
            Expr::Compound(f, args) => {
                let mut s = f.clone();
                args.iter().for_each(|a| s.push_str(&flat(a)));
                s
            }
            other => print_expr(other),
        }
    }
    match e {
        Expr::Compound(f, args)
            if expr::infix_op(f).is_some()
                || expr::prefix_op(f).is_some()
                || matches!(f.as_str(), "all" | "ex" | "all2" | "ex2" | "lambda") =>
        {
            Expr::Compound(f.clone(), args.iter().map(compact).collect())
        }
        Expr::Compound(..) => Expr::Atom(flat(e)),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::PredicateSpec;

    #[test]
    fn symbols_must_be_identifiers() {
        for text in ["p('hello world')", "'a-b'", "'x y'(a)", "p(a + b)"] {
            assert!(parse_formula(text).is_err(), "{text}");
        }
        assert!(parse_formula("p('plain')").is_ok());
    }

    #[test]
    fn second_order_example() {
        let f = parse_formula("ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))").unwrap();
        let x = || Term::var("x");
        let expected = Formula::exists2(
            vec![PredicateSpec::named("p")],
            Formula::and([
                Formula::forall(
                    vec!["x".into()],
                    Formula::implies(Formula::atom("q", vec![x()]), Formula::atom("p", vec![x()])),
                ),
                Formula::forall(
                    vec!["x".into()],
                    Formula::implies(Formula::atom("p", vec![x()]), Formula::atom("r", vec![x()])),
                ),
            ]),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn conjunction_binds_tighter_than_disjunction() {
        let f = parse_formula("a , b ; c").unwrap();
        assert_eq!(
            f,
            Formula::or([
                Formula::and([Formula::prop("a"), Formula::prop("b")]),
                Formula::prop("c")
            ])
        );
    }

    #[test]
    fn errors() {
        match parse_formula("all(x") {
            Err(ParseError::Syntax(e)) => assert_eq!(e.pos.line, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_formula("p(a), p"),
            Err(ParseError::ArityClash { .. })
        ));
    }

    #[test]
    fn text_printing() {
        let f = parse_formula("all(x, (q(x) -> r(x)))").unwrap();
        assert_eq!(to_text(&f), "all(x, (q(x)->r(x)))");
        assert_eq!(to_text(&Formula::True), "true");
        let g = parse_formula("~ (a , b) ; ~c").unwrap();
        assert_eq!(parse_formula(&to_text(&g)).unwrap(), g);
    }

    #[test]
    fn latex_macro_name() {
        let mut opts = PrintOptions::latex();
        opts.macro_names.insert("kb1".into());
        assert_eq!(
            print_formula(&Formula::prop("kb1"), &opts),
            "\\mathit{kb_{1}}"
        );
        let f = parse_formula("all(x, (q(x) -> r(x)))").unwrap();
        assert_eq!(
            print_formula(&f, &PrintOptions::latex()),
            "\\forall \\mathit{x} \\, (\\mathsf{q}(\\mathit{x}) \\rightarrow \\mathsf{r}(\\mathit{x}))"
        );
    }

    #[test]
    fn compact_drops_argument_syntax() {
        let f = parse_formula("p(a,b) , q(f(c))").unwrap();
        let opts = PrintOptions {
            compact: true,
            ..Default::default()
        };
        assert_eq!(print_formula(&f, &opts), "pab,qfc");
    }
}
