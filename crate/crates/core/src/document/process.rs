use std::collections::HashMap;
use std::fmt::Write;

use super::{Directive, DirectiveKind, DocumentError, Item, OptionSet, PieDocument};
use crate::elimination::{eliminate, eliminate_staged, EliminationOutcome};
use crate::formula::Formula;
use crate::interpolation::{emit_tableau_dot, interpolate, InterpolationTask};
use crate::macros::{expand, ExpansionContext, MacroDefinition, MacroError, MacroTable};
use crate::prover::{reduce_so_universal, validate, Model, ValidationResult};
use crate::syntax::{
    expr_to_formula, formula_to_expr, latex_display, print_expr, to_latex, Expr, PrintOptions,
};

/// State threaded through the processing of one document.
#[derive(Clone, Debug)]
pub struct ProcessingContext {
    pub table: MacroTable,
    pub expansion: ExpansionContext,
    /// The system layer of options.
    pub system: OptionSet,
    /// Defaults declared so far in the document.
    pub defaults: OptionSet,
    /// Results bound with `r` by earlier calls of the current statement.
    pub bindings: HashMap<String, Formula>,
    pub output: String,
}

impl ProcessingContext {
    /// A context whose system layer is read from the environment.
    pub fn new(table: MacroTable) -> Self {
        Self::with_system(table, OptionSet::system())
    }

    pub fn with_system(table: MacroTable, system: OptionSet) -> Self {
        ProcessingContext {
            table,
            expansion: ExpansionContext::default(),
            system,
            defaults: OptionSet::new(),
            bindings: HashMap::new(),
            output: String::new(),
        }
    }

    pub fn last_result(&self) -> Option<&Formula> {
        self.expansion.last_result.as_ref()
    }

    /// System defaults, then document defaults, then the directive's own options.
    pub fn effective_options(&self, d: &Directive) -> OptionSet {
        self.system.over(&self.defaults).over(&d.options)
    }

    fn print_options(&self) -> PrintOptions {
        let mut opts = PrintOptions::latex();
        opts.macro_names = self.table.names().iter().map(|(n, _)| n.clone()).collect();
        opts
    }
}

#[derive(Clone, Debug)]
pub enum DirectiveOutcome {
    /// The result formula of `elim`, `ipol` and `elim_col2`, or the printed formula of `form`.
    Formula(Formula),
    Valid,
    NotValid(Model),
    FailedToValidate(String),
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct DirectiveResult {
    pub kind: DirectiveKind,
    /// The argument before macro expansion, when it could be read as a formula.
    pub input: Option<Formula>,
    pub outcome: DirectiveOutcome,
    /// The LaTeX presentation, emitted unless `printing=false`.
    pub latex: String,
}

impl DirectiveResult {
    pub fn formula(&self) -> Option<&Formula> {
        match &self.outcome {
            DirectiveOutcome::Formula(f) => Some(f),
            _ => None,
        }
    }
}

/// Processes every item in order and returns the LaTeX body.
pub fn process_document(
    doc: &PieDocument,
    ctx: &mut ProcessingContext,
) -> Result<String, DocumentError> {
    for item in &doc.items {
        match item {
            Item::Latex(text) => {
                ctx.output.push_str(text.trim_matches('\n'));
                ctx.output.push('\n');
            }
            Item::Defaults(o) => ctx.defaults = ctx.defaults.over(o),
            Item::MacroDef(d) => {
                let tex = render_definition(d, &ctx.print_options());
                ctx.output.push_str(&tex);
            }
            Item::Directives(calls) => {
                ctx.bindings.clear();
                for d in calls {
                    let printing = ctx.effective_options(d).printing().unwrap_or(true);
                    let r = run_directive(d, ctx)?;
                    if printing {
                        ctx.output.push_str(&r.latex);
                    }
                }
            }
        }
    }
    Ok(ctx.output.clone())
}

/// Wraps a body into a complete LaTeX document.
pub fn standalone_latex(body: &str) -> String {
    format!("\\documentclass{{article}}\n\\usepackage{{amsmath}}\n\\usepackage{{amssymb}}\n\\begin{{document}}\n{body}\n\\end{{document}}\n")
}

/// Reads and macro-expands a formula in the context of `table`.
pub fn expand_text(table: &MacroTable, text: &str) -> Result<Formula, MacroError> {
    let f = crate::syntax::parse_formula(text)?;
    expand(table, &f, &mut ExpansionContext::default())
}

/// Runs one call. Reasoning failures become outcomes; only writing a DOT file can fail.
pub fn run_directive(
    d: &Directive,
    ctx: &mut ProcessingContext,
) -> Result<DirectiveResult, DocumentError> {
    let opts = ctx.effective_options(d);
    let po = ctx.print_options();
    let arg = substitute_bindings(&d.argument, &ctx.bindings);
    let input = expr_to_formula(&arg).ok();
    let mut result = DirectiveResult {
        kind: d.kind,
        input: input.clone(),
        outcome: DirectiveOutcome::Failed(String::new()),
        latex: String::new(),
    };
    let Some(input) = input else {
        result.outcome = DirectiveOutcome::Failed(format!("not a formula: {}", print_expr(&arg)));
        result.latex = failure_block(d.kind, &texttt(&print_expr(&arg)), "not a formula");
        return Ok(result);
    };
    let shown = to_latex(&input, &po);
    let expanded = if d.kind == DirectiveKind::Form {
        Ok(input.clone())
    } else {
        expand(&ctx.table, &input, &mut ctx.expansion)
    };
    let expanded = match (expanded, d.options.check().and(opts.check())) {
        (Ok(f), Ok(())) => f,
        (Err(e), _) => return Ok(failed(result, d.kind, &shown, &e.to_string())),
        (_, Err(e)) => return Ok(failed(result, d.kind, &shown, &e.to_string())),
    };
    match d.kind {
        DirectiveKind::Form => {
            result.latex = format!("\\[{}\n\\]\n", latex_display(&input, &po));
            result.outcome = DirectiveOutcome::Formula(input);
        }
        DirectiveKind::Elim => {
            let eo = opts.elimination().expect("checked options");
            match eliminate(&expanded, &eo) {
                EliminationOutcome::Success(g) => {
                    result.latex = format!("\\noindent Input: ${shown}.$\\\\\n\\noindent Result of elimination:\n\\[{}\n\\]\n", latex_display(&g, &po));
                    record(ctx, &opts, &g);
                    result.outcome = DirectiveOutcome::Formula(g);
                }
                EliminationOutcome::Failure { reason, .. } => {
                    return Ok(failed(result, d.kind, &shown, &reason.to_string()))
                }
            }
        }
        DirectiveKind::Ipol => {
            let io = opts.interpolation().expect("checked options");
            let task = match InterpolationTask::from_implication(&expanded, io) {
                Ok(t) => t,
                Err(e) => return Ok(failed(result, d.kind, &shown, &e.to_string())),
            };
            match interpolate(&task) {
                Ok(h) => {
                    if let Some(path) = opts.dotgraph().expect("checked options") {
                        std::fs::write(&path, emit_tableau_dot(&h.proof.tableau))?;
                    }
                    result.latex =
                        format!("\\noindent Input: ${shown}.$\\\\\n\\noindent Result of interpolation:\n\\[{}\n\\]\n", latex_display(&h.formula, &po));
                    record(ctx, &opts, &h.formula);
                    result.outcome = DirectiveOutcome::Formula(h.formula);
                }
                Err(e) => return Ok(failed(result, d.kind, &shown, &e.to_string())),
            }
        }
        DirectiveKind::Valid => {
            let cfg = opts.prover().expect("checked options");
            let target = if expanded.is_first_order() {
                Ok(expanded)
            } else {
                reduce_so_universal(&expanded).map_err(|e| e.to_string())
            };
            let verdict = match target {
                Ok(f) => validate(&f, &cfg),
                Err(e) => ValidationResult::Failed(e),
            };
            let (outcome, text) = match verdict {
                ValidationResult::Valid(_) => (DirectiveOutcome::Valid, "is valid.".to_string()),
                ValidationResult::NotValid(m) => {
                    let text = format!("is not valid. Countermodel: {}.", texttt(&m.to_string()));
                    (DirectiveOutcome::NotValid(m), text)
                }
                ValidationResult::Failed(e) => (
                    DirectiveOutcome::FailedToValidate(e),
                    "failed to validate.".to_string(),
                ),
            };
            result.latex = format!("\\par\\noindent ${shown}.$\\\\\n\\noindent {text}\\par\n");
            result.outcome = outcome;
        }
        DirectiveKind::ElimCol2 => match eliminate_staged(&expanded) {
            Ok((edge, g)) => {
                result.latex = format!(
                    "\\[{}\n\\]\n\\[{}\n\\]\n",
                    latex_display(&edge, &po),
                    latex_display(&g, &po)
                );
                record(ctx, &opts, &g);
                result.outcome = DirectiveOutcome::Formula(g);
            }
            Err(e) => return Ok(failed(result, d.kind, &shown, &e.reason.to_string())),
        },
    }
    Ok(result)
}

fn record(ctx: &mut ProcessingContext, opts: &OptionSet, f: &Formula) {
    ctx.expansion.last_result = Some(f.clone());
    if let Some(name) = opts.result_name() {
        ctx.bindings.insert(name, f.clone());
    }
}

fn failed(
    mut result: DirectiveResult,
    kind: DirectiveKind,
    shown: &str,
    reason: &str,
) -> DirectiveResult {
    result.latex = failure_block(kind, &format!("${shown}.$"), reason);
    result.outcome = match kind {
        DirectiveKind::Valid => DirectiveOutcome::FailedToValidate(reason.to_string()),
        _ => DirectiveOutcome::Failed(reason.to_string()),
    };
    result
}

fn failure_block(kind: DirectiveKind, shown: &str, reason: &str) -> String {
    let what = match kind {
        DirectiveKind::Elim | DirectiveKind::ElimCol2 => "elimination failed",
        DirectiveKind::Ipol => "interpolation failed",
        DirectiveKind::Valid => "failed to validate",
        DirectiveKind::Form => "formatting failed",
    };
    format!(
        "\\noindent Input: {shown}\\\\\n\\noindent Result: {what} ({}).\\par\n",
        tex_escape(reason)
    )
}

fn substitute_bindings(e: &Expr, b: &HashMap<String, Formula>) -> Expr {
    if b.is_empty() {
        return e.clone();
    }
    match e {
        Expr::Var(v) => b.get(v).map(formula_to_expr).unwrap_or_else(|| e.clone()),
        Expr::Atom(_) => e.clone(),
        Expr::Compound(f, args) => Expr::Compound(
            f.clone(),
            args.iter().map(|a| substitute_bindings(a, b)).collect(),
        ),
        Expr::List(items, tail) => Expr::List(
            items.iter().map(|a| substitute_bindings(a, b)).collect(),
            tail.as_ref().map(|t| Box::new(substitute_bindings(t, b))),
        ),
        Expr::Apply(h, args) => Expr::Apply(
            Box::new(substitute_bindings(h, b)),
            args.iter().map(|a| substitute_bindings(a, b)).collect(),
        ),
    }
}

fn render_definition(d: &MacroDefinition, po: &PrintOptions) -> String {
    let head = if d.params.is_empty() {
        Expr::atom(d.name.clone())
    } else {
        Expr::Compound(d.name.clone(), d.params.clone())
    };
    let as_math = |e: &Expr, display: bool| match expr_to_formula(e) {
        Ok(f) if display => format!("${}$", latex_display(&f, po)),
        Ok(f) => format!("${}$", to_latex(&f, po)),
        Err(_) => texttt(&print_expr(e)),
    };
    let mut out = String::from("\\begin{center}\n");
    writeln!(out, "{} \\quad $::$ \\quad", as_math(&head, false)).unwrap();
    writeln!(out, "{}", as_math(&d.template, true)).unwrap();
    if !d.steps.is_empty() {
        let steps: Vec<String> = d
            .steps
            .iter()
            .map(|s| print_expr(&Expr::Compound(s.builtin.name().into(), s.args.clone())))
            .collect();
        writeln!(out, "\\\\ where {}", texttt(&steps.join(", "))).unwrap();
    }
    out.push_str("\\end{center}\n");
    out
}

fn texttt(s: &str) -> String {
    format!("\\texttt{{{}}}", tex_escape(s))
}

fn tex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '_' | '#' | '$' | '%' | '&' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '<' => out.push_str("\\textless{}"),
            '>' => out.push_str("\\textgreater{}"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::load_document;
    use crate::syntax::{parse_expr, parse_formula};

    fn run(src: &str) -> (String, ProcessingContext) {
        let (doc, table) = load_document(src).unwrap();
        let mut ctx = ProcessingContext::with_system(table, OptionSet::new());
        let out = process_document(&doc, &mut ctx).unwrap();
        (out, ctx)
    }

    #[test]
    fn latex_passthrough() {
        assert_eq!(run("/*hello*/").0, "hello\n");
    }

    #[test]
    fn elimination_block() {
        let (out, ctx) = run(
            ":- ppl_printtime(ppl_elim(ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x))))))).",
        );
        assert!(out.contains("Input: $\\exists"), "{out}");
        assert!(out.contains("Result of elimination:"));
        assert!(out.contains("\\forall \\mathit{x}"));
        let expected = parse_formula("all(x, (q(x) -> r(x)))").unwrap();
        assert!(validate(
            &Formula::iff(ctx.last_result().unwrap().clone(), expected),
            &Default::default()
        )
        .is_valid());
    }

    #[test]
    fn silent_result_is_bound_for_later_calls() {
        let src = ":- ppl_printtime((ppl_elim(ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x))))), [printing=false, r=F]), ppl_form(F))).";
        let (out, ctx) = run(src);
        assert!(!out.contains("Input:"));
        assert!(out.contains("\\mathsf{r}"), "{out}");
        assert!(ctx.last_result().is_some());
        let src = ":- ppl_printtime(ppl_elim(ex2(p, p(a)), [printing=false])).\ndef(prev) :: R ::- last_ppl_result(R).\n:- ppl_printtime(ppl_valid(prev)).";
        let (out, _) = run(src);
        assert!(out.contains("is valid."), "{out}");
    }

    #[test]
    fn validity_verdicts() {
        let src = "def(kb1) :: (sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), (wet(grass) -> wet(shoes)).\n\
            :- ppl_printtime(ppl_valid((kb1, (rained_last_night ; sprinkler_was_on) -> wet(shoes)))).\n\
            :- ppl_printtime(ppl_valid(p)).";
        let (out, _) = run(src);
        assert!(out.contains("\\mathit{kb_{1}}"), "{out}");
        assert!(out.contains("is valid."));
        assert!(out.contains("is not valid."));
    }

    #[test]
    fn failures_render_inline() {
        let (out, _) = run(":- ppl_printtime(ppl_elim(ex2(p, all(x, (p(x) -> p(f(x))))), [timeout=200])).\n/*after*/");
        assert!(
            out.contains("elimination failed") || out.contains("Result of elimination"),
            "{out}"
        );
        assert!(out.trim_end().ends_with("after"));
        let (out, _) = run(":- ppl_printtime(ppl_ipol((p -> q))).");
        assert!(out.contains("interpolation failed"), "{out}");
        let (out, _) = run(":- ppl_printtime(ppl_elim(undefined_macro([a]))).");
        assert!(out.contains("elimination failed"), "{out}");
    }

    #[test]
    fn defaults_layer_between_system_and_directive() {
        let (doc, table) = load_document(":- ppl_set_defaults([timeout=200]).").unwrap();
        let system = OptionSet::from_expr(&parse_expr("[timeout=100]").unwrap()).unwrap();
        let mut ctx = ProcessingContext::with_system(table, system);
        let d = |opts: &str| Directive {
            kind: DirectiveKind::Form,
            argument: Expr::atom("p"),
            options: OptionSet::from_expr(&parse_expr(opts).unwrap()).unwrap(),
            pos: Default::default(),
        };
        let ms = |o: OptionSet| o.timeout().unwrap().unwrap().as_millis();
        assert_eq!(ms(ctx.effective_options(&d("[]"))), 100);
        process_document(&doc, &mut ctx).unwrap();
        assert_eq!(ms(ctx.effective_options(&d("[]"))), 200);
        assert_eq!(ms(ctx.effective_options(&d("[timeout=300]"))), 300);
    }

    #[test]
    fn definitions_render_and_text_is_escaped() {
        let (out, _) = run("def(explanation(Kb, Na, Ob)) :: all2(Na, (Kb -> Ob)).");
        assert!(out.contains("\\begin{center}"));
        assert!(out.contains("\\mathit{explanation}"), "{out}");
        assert_eq!(tex_escape("a_b{c}~"), "a\\_b\\{c\\}\\textasciitilde{}");
    }

    #[test]
    fn expand_text_uses_table() {
        let (_, table) = load_document("def(m) :: (p, q).").unwrap();
        assert_eq!(
            expand_text(&table, "m -> p").unwrap(),
            parse_formula("(p, q) -> p").unwrap()
        );
    }
}
