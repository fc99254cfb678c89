//! Literate documents: macro definitions, reasoner directives and LaTeX text,
//! loaded as a whole and then processed in order into a LaTeX report.

mod options;
mod process;

use std::fmt;

use thiserror::Error;

pub use options::{OptionError, OptionSet, TIMEOUT_ENV};
pub use process::{
    expand_text, process_document, run_directive, standalone_latex, DirectiveOutcome,
    DirectiveResult, ProcessingContext,
};

use crate::macros::{MacroDefinition, MacroError, MacroTable};
use crate::syntax::{print_expr, Expr, ExprParser, SourcePosition, Statement, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectiveKind {
    Elim,
    Ipol,
    Valid,
    Form,
    /// Staged two-colorability of a graph given as edge relation.
    ElimCol2,
}

impl DirectiveKind {
    fn from_name(name: &str) -> Option<DirectiveKind> {
        Some(match name {
            "ppl_elim" => DirectiveKind::Elim,
            "ppl_ipol" => DirectiveKind::Ipol,
            "ppl_valid" => DirectiveKind::Valid,
            "ppl_form" => DirectiveKind::Form,
            "elim_col2" => DirectiveKind::ElimCol2,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            DirectiveKind::Elim => "ppl_elim",
            DirectiveKind::Ipol => "ppl_ipol",
            DirectiveKind::Valid => "ppl_valid",
            DirectiveKind::Form => "ppl_form",
            DirectiveKind::ElimCol2 => "elim_col2",
        }
    }
}

impl fmt::Display for DirectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One reasoner invocation. The argument stays an expression so that result
/// bindings of earlier calls in the same statement can be substituted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub kind: DirectiveKind,
    pub argument: Expr,
    pub options: OptionSet,
    pub pos: SourcePosition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    MacroDef(MacroDefinition),
    /// The calls of one `:- ppl_printtime(...)` statement, sharing result bindings.
    Directives(Vec<Directive>),
    Latex(String),
    Defaults(OptionSet),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PieDocument {
    pub items: Vec<Item>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("at {pos}: {source}")]
    Macro {
        pos: SourcePosition,
        source: MacroError,
    },
    #[error("at {pos}: unknown directive {name}")]
    UnknownDirective { pos: SourcePosition, name: String },
    #[error("at {pos}: {source}")]
    Option {
        pos: SourcePosition,
        source: OptionError,
    },
    #[error("at {pos}: unexpected statement {text}")]
    UnexpectedStatement { pos: SourcePosition, text: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses a document and collects its macro definitions into a table.
pub fn load_document(src: &str) -> Result<(PieDocument, MacroTable), DocumentError> {
    let mut table = MacroTable::new();
    let doc = reload_document(&mut table, src)?;
    Ok((doc, table))
}

/// Parses a document into an existing table. Definitions with the same head as
/// earlier ones replace them.
pub fn reload_document(table: &mut MacroTable, src: &str) -> Result<PieDocument, DocumentError> {
    let mut items = Vec::new();
    for st in ExprParser::new(src)?.parse_statements()? {
        match st {
            Statement::Comment(text) => items.push(Item::Latex(text)),
            Statement::Clause(e, pos) => items.push(read_statement(&e, pos)?),
        }
    }
    for item in &items {
        if let Item::MacroDef(d) = item {
            table.define(d.clone());
        }
    }
    Ok(PieDocument { items })
}

fn read_statement(e: &Expr, pos: SourcePosition) -> Result<Item, DocumentError> {
    match e {
        Expr::Compound(op, _) if op == "::" => MacroDefinition::from_expr(e)
            .map(Item::MacroDef)
            .map_err(|source| DocumentError::Macro { pos, source }),
        Expr::Compound(op, body) if op == ":-" && body.len() == 1 => match &body[0] {
            Expr::Compound(f, args) if f == "ppl_printtime" && args.len() == 1 => {
                let mut calls = Vec::new();
                for c in conjuncts(&args[0]) {
                    calls.push(read_call(c, pos)?);
                }
                Ok(Item::Directives(calls))
            }
            Expr::Compound(f, args) if f == "ppl_set_defaults" && args.len() == 1 => {
                OptionSet::from_expr(&args[0])
                    .map(Item::Defaults)
                    .map_err(|source| DocumentError::Option { pos, source })
            }
            other => Err(DocumentError::UnknownDirective {
                pos,
                name: functor_name(other),
            }),
        },
        other => Err(DocumentError::UnexpectedStatement {
            pos,
            text: print_expr(other),
        }),
    }
}

fn read_call(e: &Expr, pos: SourcePosition) -> Result<Directive, DocumentError> {
    let unknown = || DocumentError::UnknownDirective {
        pos,
        name: functor_name(e),
    };
    let Expr::Compound(f, args) = e else {
        return Err(unknown());
    };
    let kind = DirectiveKind::from_name(f).ok_or_else(unknown)?;
    let options = match (kind, args.len()) {
        (_, 1) => OptionSet::new(),
        (DirectiveKind::ElimCol2, _) => return Err(unknown()),
        (_, 2) => OptionSet::from_expr(&args[1])
            .map_err(|source| DocumentError::Option { pos, source })?,
        _ => return Err(unknown()),
    };
    Ok(Directive {
        kind,
        argument: args[0].clone(),
        options,
        pos,
    })
}

fn functor_name(e: &Expr) -> String {
    match e.functor() {
        Some((name, arity)) => format!("{name}/{arity}"),
        None => print_expr(e),
    }
}

fn conjuncts(e: &Expr) -> Vec<&Expr> {
    match e {
        Expr::Compound(op, xs) if op == "," && xs.len() == 2 => {
            let mut out = conjuncts(&xs[0]);
            out.extend(conjuncts(&xs[1]));
            out
        }
        other => vec![other],
    }
}
