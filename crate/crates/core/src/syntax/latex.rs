//! LaTeX rendering of formulas in math mode.

use super::PrintOptions;
use crate::formula::{is_placeholder, Formula, MacroArg, Term};

/// Applies the symbol conversions: a `_p` suffix becomes a prime and trailing
/// digits become a subscript. Underscores are escaped either way.
pub fn tex_symbol(name: &str, convert: bool) -> String {
    if !convert {
        return escape(name);
    }
    let (base, prime) = match name.strip_suffix("_p") {
        Some(b) if !b.is_empty() => (b, true),
        _ => (name, false),
    };
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let mut out = if stem.is_empty() || stem.ends_with('_') {
        escape(base)
    } else {
        let digits = &base[stem.len()..];
        let mut s = escape(stem);
        if !digits.is_empty() {
            s.push_str("_{");
            s.push_str(digits);
            s.push('}');
        }
        s
    };
    if prime {
        out.push_str("^{\\prime}");
    }
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '_' | '&' | '%' | '$' | '#' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '\\' => out.push_str("\\backslash "),
            '~' => out.push_str("\\sim "),
            c => out.push(c),
        }
    }
    out
}

struct Ctx<'a> {
    opts: &'a PrintOptions,
    bound: Vec<String>,
}

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

impl Ctx<'_> {
    fn sym(&self, name: &str, bound: bool) -> String {
        let text = tex_symbol(name, self.opts.symbol_conversion);
        if bound || is_placeholder(name) || self.opts.macro_names.contains(name) {
            format!("\\mathit{{{text}}}")
        } else {
            format!("\\mathsf{{{text}}}")
        }
    }

    fn is_bound(&self, name: &str) -> bool {
        self.bound.iter().any(|b| b == name)
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => format!("\\mathit{{{}}}", tex_symbol(v, self.opts.symbol_conversion)),
            Term::App(f, args) => {
                let head = self.sym(f, self.is_bound(f));
                self.apply(head, args.iter().map(|a| self.term(a)).collect())
            }
        }
    }

    fn apply(&self, head: String, args: Vec<String>) -> String {
        if args.is_empty() {
            head
        } else if self.opts.compact {
            format!("{head}{}", args.join(""))
        } else {
            format!("{head}({})", args.join(","))
        }
    }

    fn macro_arg(&mut self, a: &MacroArg) -> String {
        match a {
            MacroArg::Formula(f) => self.formula(f, 0),
            MacroArg::Term(t) => self.term(t),
            MacroArg::List(items) => {
                let parts: Vec<String> = items.iter().map(|i| self.macro_arg(i)).collect();
                format!("{{[}}{}{{]}}", parts.join(","))
            }
        }
    }

    fn wrap(s: String, level: u8, ctx: u8) -> String {
        if level < ctx {
            format!("({s})")
        } else {
            s
        }
    }

    fn binder(&mut self, q: &str, names: &[String], body: &Formula) -> String {
        let mut s = String::new();
        for n in names {
            s.push_str(q);
            s.push(' ');
            s.push_str(&format!(
                "\\mathit{{{}}} ",
                tex_symbol(n, self.opts.symbol_conversion)
            ));
        }
        let k = self.bound.len();
        self.bound.extend(names.iter().cloned());
        let inner = self.formula(body, UNARY);
        self.bound.truncate(k);
        format!("{s}\\, {inner}")
    }

    fn formula(&mut self, f: &Formula, ctx: u8) -> String {
        match f {
            Formula::True => "\\top".into(),
            Formula::False => "\\bot".into(),
            Formula::Atom(p, args) => {
                let head = self.sym(p, self.is_bound(p));
                self.apply(head, args.iter().map(|a| self.term(a)).collect())
            }
            Formula::Eq(s, t) => format!("{}={}", self.term(s), self.term(t)),
            Formula::Not(a) => match &**a {
                Formula::Eq(s, t) => format!("{}\\neq {}", self.term(s), self.term(t)),
                inner => format!("\\lnot {}", self.formula(inner, UNARY)),
            },
            Formula::And(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| self.formula(x, UNARY)).collect();
                Self::wrap(parts.join(" \\land "), AND, ctx)
            }
            Formula::Or(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| self.formula(x, UNARY)).collect();
                Self::wrap(parts.join(" \\lor "), OR, ctx)
            }
            Formula::Implies(a, b) => {
                let s = format!(
                    "{} \\rightarrow {}",
                    self.formula(a, OR),
                    self.formula(b, IMP)
                );
                Self::wrap(s, IMP, ctx)
            }
            Formula::Iff(a, b) => {
                let s = format!(
                    "{} \\leftrightarrow {}",
                    self.formula(a, IMP),
                    self.formula(b, IMP)
                );
                Self::wrap(s, IFF, ctx)
            }
            Formula::ForAll(vs, a) => self.binder("\\forall", vs, a),
            Formula::Exists(vs, a) => self.binder("\\exists", vs, a),
            Formula::ForAll2(ps, a) | Formula::Exists2(ps, a) => {
                let names: Vec<String> = ps.iter().map(|p| p.name.clone()).collect();
                let q = if matches!(f, Formula::ForAll2(..)) {
                    "\\forall"
                } else {
                    "\\exists"
                };
                self.binder(q, &names, a)
            }
            Formula::Lambda(vs, a) => {
                let params: Vec<String> = vs
                    .iter()
                    .map(|v| format!("\\mathit{{{}}}", tex_symbol(v, self.opts.symbol_conversion)))
                    .collect();
                let k = self.bound.len();
                self.bound.extend(vs.iter().cloned());
                let body = self.formula(a, 0);
                self.bound.truncate(k);
                Self::wrap(format!("\\lambda ({}).{}", params.join(","), body), 0, ctx)
            }
            Formula::LambdaApp(h, args) => {
                let head = self.formula(h, UNARY + 1);
                let args: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{head}({})", args.join(","))
            }
            Formula::MacroCall(name, args) => {
                let head = format!(
                    "\\mathit{{{}}}",
                    tex_symbol(name, self.opts.symbol_conversion)
                );
                let args: Vec<String> = args.iter().map(|a| self.macro_arg(a)).collect();
                self.apply(head, args)
            }
        }
    }
}

/// Inline math-mode rendering.
pub fn to_latex(f: &Formula, opts: &PrintOptions) -> String {
    Ctx {
        opts,
        bound: Vec::new(),
    }
    .formula(f, 0)
}

/// A display: an `array` whose rows are the top-level conjuncts when the formula is long.
pub fn latex_display(f: &Formula, opts: &PrintOptions) -> String {
    let mut ctx = Ctx {
        opts,
        bound: Vec::new(),
    };
    let inline = ctx.formula(f, 0);
    let mut out = String::from("\\begin{array}{lllll}\n");
    match f {
        Formula::And(xs) if xs.len() > 2 || inline.len() > 160 => {
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&ctx.formula(x, UNARY));
                if i + 1 < xs.len() {
                    out.push_str(" &&&&\\; \\land \\\\\n");
                } else {
                    out.push_str(".\n");
                }
            }
        }
        _ => {
            out.push_str(&inline);
            out.push_str(".\n");
        }
    }
    out.push_str("\\end{array}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_conversions() {
        assert_eq!(tex_symbol("kb1", true), "kb_{1}");
        assert_eq!(tex_symbol("P_p", true), "P^{\\prime}");
        assert_eq!(tex_symbol("fo_col2", true), "fo\\_col_{2}");
        assert_eq!(
            tex_symbol("rained_last_night", true),
            "rained\\_last\\_night"
        );
        assert_eq!(tex_symbol("1", true), "1");
        assert_eq!(tex_symbol("kb1", false), "kb1");
    }
}
