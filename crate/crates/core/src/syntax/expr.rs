//! Generic operator-precedence terms, the layer below formulas.
//!
//! Source text is first read into [`Expr`] trees, exactly as a Prolog reader
//! would, and only then interpreted as formulas. Macro expansion also works on
//! this level, since macro parameters may stand in predicate position.

use std::fmt::Write as _;

use super::lexer::{Lexer, Token, TokenKind};
use super::{SourcePosition, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Atom(String),
    /// A capitalized name: a macro placeholder.
    Var(String),
    /// Functor application. The functor may itself be capitalized (`E(x,y)`).
    Compound(String, Vec<Expr>),
    List(Vec<Expr>, Option<Box<Expr>>),
    /// Application of a non-atomic head, arising when a placeholder in functor
    /// position is bound to a λ-expression.
    Apply(Box<Expr>, Vec<Expr>),
}

impl Expr {
    pub fn atom(name: impl Into<String>) -> Expr {
        Expr::Atom(name.into())
    }

    pub fn compound(name: impl Into<String>, args: Vec<Expr>) -> Expr {
        Expr::Compound(name.into(), args)
    }

    pub fn list(items: Vec<Expr>) -> Expr {
        Expr::List(items, None)
    }

    /// Name and arity of the principal functor, for atoms and compounds.
    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Expr::Atom(n) => Some((n, 0)),
            Expr::Compound(n, args) => Some((n, args.len())),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Expr] {
        match self {
            Expr::Compound(_, args) => args,
            _ => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Expr::Var(_) => false,
            Expr::Atom(_) => true,
            Expr::Compound(f, args) => {
                !crate::formula::is_placeholder(f) && args.iter().all(Expr::is_ground)
            }
            Expr::List(items, tail) => {
                items.iter().all(Expr::is_ground) && tail.as_ref().is_none_or(|t| t.is_ground())
            }
            Expr::Apply(h, args) => h.is_ground() && args.iter().all(Expr::is_ground),
        }
    }

    /// Placeholder names in first-occurrence order, including those in functor position.
    pub fn placeholders(&self, out: &mut Vec<String>) {
        let push = |n: &str, out: &mut Vec<String>| {
            if !out.iter().any(|o| o == n) {
                out.push(n.to_string());
            }
        };
        match self {
            Expr::Var(v) => push(v, out),
            Expr::Atom(_) => {}
            Expr::Compound(f, args) => {
                if crate::formula::is_placeholder(f) {
                    push(f, out);
                }
                args.iter().for_each(|a| a.placeholders(out));
            }
            Expr::List(items, tail) => {
                items.iter().for_each(|a| a.placeholders(out));
                if let Some(t) = tail {
                    t.placeholders(out);
                }
            }
            Expr::Apply(h, args) => {
                h.placeholders(out);
                args.iter().for_each(|a| a.placeholders(out));
            }
        }
    }

    /// Items of a proper list, or the expression itself as a one-element list.
    pub fn as_items(&self) -> Vec<Expr> {
        match self {
            Expr::List(items, None) => items.clone(),
            other => vec![other.clone()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpType {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
}

pub fn infix_op(name: &str) -> Option<(u32, OpType)> {
    Some(match name {
        "::" => (1200, OpType::Xfx),
        "::-" => (1150, OpType::Xfx),
        "<->" => (1110, OpType::Xfy),
        "->" => (1105, OpType::Xfy),
        ";" => (1100, OpType::Xfy),
        "," => (1000, OpType::Xfy),
        "=" | "\\=" | "<" | ">" => (700, OpType::Xfx),
        "+" | "-" => (500, OpType::Yfx),
        "*" | "/" => (400, OpType::Yfx),
        _ => return None,
    })
}

pub fn prefix_op(name: &str) -> Option<(u32, OpType)> {
    Some(match name {
        ":-" => (1200, OpType::Fx),
        "~" => (900, OpType::Fy),
        _ => return None,
    })
}

fn arg_max(prec: u32, ty: OpType) -> (u32, u32) {
    match ty {
        OpType::Xfx => (prec - 1, prec - 1),
        OpType::Xfy => (prec - 1, prec),
        OpType::Yfx => (prec, prec - 1),
        OpType::Fy => (0, prec),
        OpType::Fx => (0, prec - 1),
    }
}

/// A top-level item of a source text: a clause ended by `.`, or a block comment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Clause(Expr, SourcePosition),
    Comment(String),
}

pub struct ExprParser {
    toks: Vec<Token>,
    idx: usize,
}

impl ExprParser {
    pub fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(ExprParser {
            toks: Lexer::new(src).tokenize()?,
            idx: 0,
        })
    }

    fn skip_comments(&mut self) {
        while matches!(self.toks[self.idx].kind, TokenKind::Comment(_)) {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> &Token {
        self.skip_comments();
        &self.toks[self.idx]
    }

    fn advance(&mut self) -> Token {
        self.skip_comments();
        let t = self.toks[self.idx].clone();
        if t.kind != TokenKind::Eof {
            self.idx += 1;
        }
        t
    }

    fn error(&self, pos: SourcePosition, msg: impl Into<String>) -> SyntaxError {
        SyntaxError {
            message: msg.into(),
            pos,
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), SyntaxError> {
        let t = self.advance();
        if t.kind == kind {
            Ok(())
        } else {
            Err(self.error(
                t.pos,
                format!("expected {what}, found {}", describe(&t.kind)),
            ))
        }
    }

    /// Parses a whole text as a single expression, with an optional final `.`.
    pub fn parse_single(&mut self) -> Result<Expr, SyntaxError> {
        let e = self.parse(1200)?;
        if self.peek().kind == TokenKind::End {
            self.advance();
        }
        let t = self.advance();
        if t.kind != TokenKind::Eof {
            return Err(self.error(t.pos, format!("unexpected {}", describe(&t.kind))));
        }
        Ok(e)
    }

    /// Parses a sequence of `.`-terminated clauses and block comments.
    pub fn parse_statements(&mut self) -> Result<Vec<Statement>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            let t = &self.toks[self.idx];
            match &t.kind {
                TokenKind::Eof => return Ok(out),
                TokenKind::Comment(text) => {
                    out.push(Statement::Comment(text.clone()));
                    self.idx += 1;
                }
                _ => {
                    let pos = t.pos;
                    let e = self.parse(1200)?;
                    self.expect(TokenKind::End, "`.` ending the statement")?;
                    out.push(Statement::Clause(e, pos));
                }
            }
        }
    }

    pub fn parse(&mut self, max: u32) -> Result<Expr, SyntaxError> {
        let (mut left, mut left_prec) = self.parse_primary(max)?;
        loop {
            let t = self.peek().clone();
            let name = match &t.kind {
                TokenKind::Name(n) => n.clone(),
                TokenKind::Comma => ",".to_string(),
                _ => break,
            };
            let Some((prec, ty)) = infix_op(&name) else {
                break;
            };
            let (lmax, rmax) = arg_max(prec, ty);
            if prec > max || left_prec > lmax {
                break;
            }
            self.advance();
            let right = self.parse(rmax)?;
            left = Expr::Compound(name, vec![left, right]);
            left_prec = prec;
        }
        Ok(left)
    }

    fn starts_term(kind: &TokenKind) -> bool {
        match kind {
            TokenKind::Name(n) => infix_op(n).is_none() || prefix_op(n).is_some(),
            TokenKind::Var(_) | TokenKind::Open | TokenKind::OpenList => true,
            _ => false,
        }
    }

    fn parse_primary(&mut self, max: u32) -> Result<(Expr, u32), SyntaxError> {
        let t = self.advance();
        match t.kind {
            TokenKind::Open => {
                let e = self.parse(1200)?;
                self.expect(TokenKind::Close, "`)`")?;
                Ok((e, 0))
            }
            TokenKind::OpenList => {
                if self.peek().kind == TokenKind::CloseList {
                    self.advance();
                    return Ok((Expr::List(Vec::new(), None), 0));
                }
                let mut items = vec![self.parse(999)?];
                let mut tail = None;
                loop {
                    let n = self.advance();
                    match n.kind {
                        TokenKind::Comma => items.push(self.parse(999)?),
                        TokenKind::Bar => {
                            tail = Some(Box::new(self.parse(999)?));
                            self.expect(TokenKind::CloseList, "`]`")?;
                            break;
                        }
                        TokenKind::CloseList => break,
                        other => {
                            return Err(self.error(
                                n.pos,
                                format!(
                                    "expected `,`, `|` or `]` in list, found {}",
                                    describe(&other)
                                ),
                            ))
                        }
                    }
                }
                Ok((Expr::List(items, tail), 0))
            }
            TokenKind::Name(name) | TokenKind::Var(name) if t.functional => {
                self.advance();
                let mut args = vec![self.parse(999)?];
                loop {
                    let n = self.advance();
                    match n.kind {
                        TokenKind::Comma => args.push(self.parse(999)?),
                        TokenKind::Close => break,
                        other => {
                            return Err(self.error(
                                n.pos,
                                format!(
                                    "expected `,` or `)` in arguments, found {}",
                                    describe(&other)
                                ),
                            ))
                        }
                    }
                }
                Ok((Expr::Compound(name, args), 0))
            }
            TokenKind::Name(name) => {
                if let Some((prec, ty)) = prefix_op(&name) {
                    let next = self.peek().kind.clone();
                    if Self::starts_term(&next) {
                        let prec = if prec > max { 999.min(max) } else { prec };
                        let (_, amax) = arg_max(prec, ty);
                        let arg = self.parse(amax)?;
                        return Ok((Expr::Compound(name, vec![arg]), prec));
                    }
                }
                let prec = if infix_op(&name).is_some() || prefix_op(&name).is_some() {
                    1201.min(max)
                } else {
                    0
                };
                Ok((Expr::Atom(name), prec))
            }
            TokenKind::Var(name) => Ok((Expr::Var(name), 0)),
            TokenKind::Eof => Err(self.error(t.pos, "unexpected end of input")),
            other => Err(self.error(t.pos, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Name(n) => format!("`{n}`"),
        TokenKind::Var(n) => format!("`{n}`"),
        TokenKind::Open => "`(`".into(),
        TokenKind::Close => "`)`".into(),
        TokenKind::OpenList => "`[`".into(),
        TokenKind::CloseList => "`]`".into(),
        TokenKind::Comma => "`,`".into(),
        TokenKind::Bar => "`|`".into(),
        TokenKind::End => "`.`".into(),
        TokenKind::Comment(_) => "comment".into(),
        TokenKind::Eof => "end of input".into(),
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    ExprParser::new(src)?.parse_single()
}

fn is_plain_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_lowercase() => chars.all(|c| c.is_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

fn is_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_uppercase() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Writes an atom name, quoting it unless it reads back as the same atom.
pub fn write_name(out: &mut String, s: &str) {
    if is_plain_name(s) || s == ";" || SYMBOLIC.contains(&s) || s == "[]" {
        out.push_str(s);
    } else {
        out.push('\'');
        for c in s.chars() {
            match c {
                '\'' => out.push_str("''"),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                c => out.push(c),
            }
        }
        out.push('\'');
    }
}

const SYMBOLIC: &[&str] = &[
    "::-", "<->", "::", ":-", "->", "\\=", "=", "~", "-", "/", "+", "*", "<", ">",
];

/// Prints in operator syntax so that [`parse_expr`] reads the same expression back.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 1200);
    out
}

fn write_functor(out: &mut String, f: &str) {
    if is_var_name(f) {
        out.push_str(f);
    } else {
        write_name(out, f);
    }
}

pub(crate) fn write_expr(out: &mut String, e: &Expr, max: u32) {
    match e {
        Expr::Atom(a) => {
            let is_op = infix_op(a).is_some() || prefix_op(a).is_some();
            if is_op && max < 1200 {
                out.push('(');
                write_name(out, a);
                out.push(')');
            } else {
                write_name(out, a);
            }
        }
        Expr::Var(v) => out.push_str(v),
        Expr::List(items, tail) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_expr(out, item, 999);
            }
            if let Some(t) = tail {
                out.push('|');
                write_expr(out, t, 999);
            }
            out.push(']');
        }
        Expr::Compound(f, args) if args.len() == 2 && infix_op(f).is_some() => {
            let (prec, ty) = infix_op(f).unwrap();
            let (lmax, rmax) = arg_max(prec, ty);
            let paren = prec > max;
            if paren {
                out.push('(');
            }
            write_expr(out, &args[0], lmax);
            match f.as_str() {
                "," => out.push(','),
                "::" | "::-" => {
                    let _ = write!(out, " {f} ");
                }
                _ => out.push_str(f),
            }
            write_operand(out, &args[1], rmax);
            if paren {
                out.push(')');
            }
        }
        Expr::Compound(f, args) if args.len() == 1 && prefix_op(f).is_some() => {
            let (prec, ty) = prefix_op(f).unwrap();
            let (_, amax) = arg_max(prec, ty);
            let paren = prec > max;
            if paren {
                out.push('(');
            }
            out.push_str(f);
            if f == ":-" {
                out.push(' ');
            }
            write_operand(out, &args[0], amax);
            if paren {
                out.push(')');
            }
        }
        Expr::Compound(f, args) => {
            write_functor(out, f);
            write_args(out, args);
        }
        Expr::Apply(h, args) => {
            out.push('(');
            write_expr(out, h, 0);
            out.push(')');
            write_args(out, args);
        }
    }
}

fn write_args(out: &mut String, args: &[Expr]) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, a, 999);
    }
    out.push(')');
}

/// Writes the operand of an operator, keeping a space where gluing would change
/// tokenization (`~ (a,b)` must not read as the functor `~` with two arguments).
fn write_operand(out: &mut String, e: &Expr, max: u32) {
    let mut s = String::new();
    write_expr(&mut s, e, max);
    let last_symbolic = out
        .chars()
        .last()
        .is_some_and(|c| "+-*/\\^<>=~:.?@#&$".contains(c));
    let first = s.chars().next();
    if last_symbolic && first.is_some_and(|c| c == '(' || "+-*/\\^<>=~:.?@#&$".contains(c)) {
        out.push(' ');
    }
    out.push_str(&s);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_of_connectives() {
        let e = parse_expr("a , b ; c").unwrap();
        assert_eq!(
            e,
            Expr::compound(
                ";",
                vec![
                    Expr::compound(",", vec![Expr::atom("a"), Expr::atom("b")]),
                    Expr::atom("c")
                ]
            )
        );
        let e = parse_expr("a -> b -> c").unwrap();
        assert_eq!(
            e,
            Expr::compound(
                "->",
                vec![
                    Expr::atom("a"),
                    Expr::compound("->", vec![Expr::atom("b"), Expr::atom("c")])
                ]
            )
        );
    }

    #[test]
    fn negation_binds_tightest() {
        let e = parse_expr("~a , b").unwrap();
        assert_eq!(
            e,
            Expr::compound(
                ",",
                vec![Expr::compound("~", vec![Expr::atom("a")]), Expr::atom("b")]
            )
        );
        let e = parse_expr("~ (a , b)").unwrap();
        assert_eq!(
            e,
            Expr::compound(
                "~",
                vec![Expr::compound(",", vec![Expr::atom("a"), Expr::atom("b")])]
            )
        );
    }

    #[test]
    fn macro_statement_shape() {
        let src = "def(circ(P, F)) :: F, ~ex2(P_p, (F_p, T1, ~T2)) ::- mac_get_arity(P, F, A), foo([P/A-n]).";
        let stmts = ExprParser::new(src).unwrap().parse_statements().unwrap();
        let Statement::Clause(Expr::Compound(op, args), _) = &stmts[0] else {
            panic!()
        };
        assert_eq!(op, "::");
        assert!(matches!(&args[1], Expr::Compound(o, _) if o == "::-"));
    }

    #[test]
    fn eof_error_has_position() {
        let err = parse_expr("all(x").unwrap_err();
        assert_eq!(err.pos.line, 1);
        assert_eq!(err.pos.column, 6);
    }

    #[test]
    fn printing_reads_back() {
        for src in [
            "all(x, (q(x)->r(x)))",
            "~ (a,b)",
            "a;b,c",
            "(a;b),c",
            "[x,y|T]",
            "~ ~p",
            "E(x, y)",
            "P/A-n",
        ] {
            let e = parse_expr(src).unwrap();
            let printed = print_expr(&e);
            assert_eq!(
                parse_expr(&printed).unwrap(),
                e,
                "{src} printed as {printed}"
            );
        }
        assert_eq!(
            print_expr(&parse_expr("all(x, (q(x) -> r(x)))").unwrap()),
            "all(x, (q(x)->r(x)))"
        );
    }
}
