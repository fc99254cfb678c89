//! Acceptance criteria, one line of output each. Runs without the libtest harness.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use pie_core::document::{
    expand_text, load_document, process_document, OptionSet, ProcessingContext,
};
use pie_core::elimination::{
    assign_atoms, eliminate, eliminate_staged, EliminationOptions, EliminationOutcome,
};
use pie_core::formula::free_symbols;
use pie_core::interpolation::{
    emit_tableau_dot, interpolate, Interpolant, InterpolationOptions, InterpolationTask,
};
use pie_core::macros::MacroTable;
use pie_core::preprocess::{clausify, ClausifyMode, Stage};
use pie_core::prover::reduce_so_universal;
use pie_core::syntax::to_text;
use pie_core::{Formula, PredicateSpec, SymbolKind};

type Outcome = Result<String, String>;

/// Tracks the time spent inside reasoner calls, excluding the checks around them.
struct Clock {
    limit: Duration,
    worst: Duration,
    total: Duration,
}

impl Clock {
    fn new(secs: u64) -> Clock {
        Clock {
            limit: Duration::from_secs(secs),
            worst: Duration::ZERO,
            total: Duration::ZERO,
        }
    }

    fn run<T>(&mut self, what: &str, op: impl FnOnce() -> T) -> Result<T, String> {
        let start = Instant::now();
        let out = op();
        let took = start.elapsed();
        self.worst = self.worst.max(took);
        self.total += took;
        if took > self.limit {
            return Err(format!("{what} took {took:.2?}, limit {:?}", self.limit));
        }
        Ok(out)
    }

    /// For limits on the sum of all calls rather than on each.
    fn check_total(&self) -> Result<(), String> {
        if self.total > self.limit {
            return Err(format!(
                "took {:.2?} in total, limit {:?}",
                self.total, self.limit
            ));
        }
        Ok(())
    }
}

fn table(name: &str) -> MacroTable {
    load_document(&fixture_text(name)).unwrap().1
}

fn elim(g: &Formula, pre: &[Stage], simp: &[Stage]) -> Result<Formula, String> {
    let opts = EliminationOptions {
        pre: pre.to_vec(),
        simp_result: simp.to_vec(),
        ..EliminationOptions::default()
    };
    match eliminate(g, &opts) {
        EliminationOutcome::Success(h) => Ok(h),
        EliminationOutcome::Failure { reason, residue } => Err(format!(
            "elimination failed ({reason}): {}",
            to_text(&residue)
        )),
    }
}

fn ipol(certs: &mut Certificates, g: &Formula, simp_sides: bool) -> Result<Interpolant, String> {
    let opts = InterpolationOptions {
        simp_sides,
        prover: budget(),
    };
    let task = InterpolationTask::from_implication(g, opts).map_err(|e| e.to_string())?;
    let h = interpolate(&task).map_err(|e| e.to_string())?;
    certs.proofs.push(h.proof.clone());
    Ok(h)
}

fn expect_equivalent(
    certs: &mut Certificates,
    got: &Formula,
    want: &Formula,
) -> Result<(), String> {
    if certs.equivalent(got, want) {
        Ok(())
    } else {
        Err(format!(
            "{} is not equivalent to {}",
            to_text(got),
            to_text(want)
        ))
    }
}

fn mentions(g: &Formula, pred: &str) -> bool {
    predicates(g).contains(pred)
}

fn criterion_1(certs: &mut Certificates) -> Outcome {
    let mut clock = Clock::new(1);
    let input = f("ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))");
    let h = clock.run("elimination", || elim(&input, &[], &[]))??;
    if mentions(&h, "p") {
        return Err(format!("p survives in {}", to_text(&h)));
    }
    expect_equivalent(certs, &h, &f("all(x, (q(x) -> r(x)))"))?;
    Ok(format!("{} in {:.2?}", to_text(&h), clock.worst))
}

fn criterion_2(certs: &mut Certificates) -> Outcome {
    let mut clock = Clock::new(1);
    let t = table("kb1.pie");
    let input =
        expand_text(&t, "explanation(kb1, [wet], wet(shoes))").map_err(|e| e.to_string())?;
    let h = clock.run("elimination", || elim(&input, &[], &[]))??;
    if mentions(&h, "wet") {
        return Err(format!("wet survives in {}", to_text(&h)));
    }
    expect_equivalent(certs, &h, &f("rained_last_night ; sprinkler_was_on"))?;
    Ok(format!("{} in {:.2?}", to_text(&h), clock.worst))
}

fn criterion_3(certs: &mut Certificates) -> Outcome {
    let mut clock = Clock::new(1);
    let t = table("kb1.pie");
    let g = expand_text(
        &t,
        "(kb1, (rained_last_night ; sprinkler_was_on)) -> wet(shoes)",
    )
    .map_err(|e| e.to_string())?;
    let r = clock.run("validation", || certs.validate(&g))?;
    if !r.is_valid() {
        return Err(format!("verdict {r:?}"));
    }
    Ok(format!("valid in {:.2?}", clock.worst))
}

fn criterion_4(certs: &mut Certificates) -> Outcome {
    let mut clock = Clock::new(5);
    let t = table("circumscription.pie");
    let c1 = expand_text(&t, "circ(p, p(a))").map_err(|e| e.to_string())?;
    let h1 = clock.run("circ(p, p(a))", || elim(&c1, &[], &[Stage::C6]))??;
    expect_equivalent(certs, &h1, &f("p(a), all(x, (p(x) -> x = a))"))?;
    let c2 = expand_text(&t, "circ(wet, kb1)").map_err(|e| e.to_string())?;
    let h2 = clock.run("circ(wet, kb1)", || elim(&c2, &[], &[Stage::C6]))??;
    let want = expand_text(
        &t,
        "kb1, all(x, (wet(x) -> (rained_last_night ; sprinkler_was_on))), \
         all(x, ((wet(x), wet(grass)) -> (x = grass ; x = shoes)))",
    )
    .map_err(|e| e.to_string())?;
    expect_equivalent(certs, &h2, &want)?;
    Ok(format!(
        "both circumscriptions match, slowest {:.2?}",
        clock.worst
    ))
}

fn criterion_5(certs: &mut Certificates) -> Outcome {
    let mut clock = Clock::new(5);
    let h = clock.run("propositional interpolation", || {
        ipol(certs, &f("(p, q) -> (p ; r)"), true)
    })??;
    if to_text(&h.formula) != "p" {
        return Err(format!("expected p, got {}", to_text(&h.formula)));
    }
    let g = f("(all(x, p(a, x)), q) -> (ex(x, p(x, b)) ; r)");
    let fo = clock
        .run("first-order interpolation", || ipol(certs, &g, true))??
        .formula;
    let functions = free_symbols(&fo)
        .iter()
        .any(|o| o.kind == SymbolKind::Function);
    if functions || predicates(&fo).into_iter().collect::<Vec<_>>() != ["p"] {
        return Err(format!("vocabulary of {} is not exactly p", to_text(&fo)));
    }
    expect_equivalent(certs, &fo, &f("ex(x, all(y, p(x, y)))"))?;
    let t = table("definability.pie");
    let d = expand_text(&t, "definiens(p(a), kb2, [p, s])").map_err(|e| e.to_string())?;
    let reduced = reduce_so_universal(&d).map_err(|e| e.to_string())?;
    let r = clock.run("definiens validity", || certs.validate(&reduced))?;
    if !r.is_valid() {
        return Err(format!("definiens not proved valid: {r:?}"));
    }
    let h = clock.run("definiens interpolation", || ipol(certs, &d, true))??;
    expect_equivalent(certs, &h.formula, &f("q(a), r(a)"))?;
    Ok(format!(
        "interpolants p, {}, {}; slowest {:.2?}",
        to_text(&fo),
        to_text(&h.formula),
        clock.worst
    ))
}

fn criterion_6(certs: &mut Certificates) -> Outcome {
    let mut clock = Clock::new(10);
    let t = table("colorability.pie");
    let input = expand_text(&t, "ex2(g, fo_col2(e))").map_err(|e| e.to_string())?;
    let h = clock.run("col2", || elim(&input, &[Stage::C6], &[]))??;
    expect_equivalent(
        certs,
        &h,
        &f("all([x, y], (e(x, y) -> (~((r(y), r(x))), (r(y) ; r(x)))))"),
    )?;
    let edge = f("lambda([u, v], ((u = 1, v = 2) ; (u = 2, v = 3)))");
    let (_, staged) = clock
        .run("staged col2", || eliminate_staged(&edge))?
        .map_err(|e| e.to_string())?;
    expect_equivalent(certs, &staged, &f("~(1 = 2), ~(2 = 3)"))?;
    clock.check_total()?;
    Ok(format!(
        "staged result {}, slowest {:.2?}",
        to_text(&staged),
        clock.worst
    ))
}

fn criterion_7(certs: &mut Certificates) -> Outcome {
    let mut clock = Clock::new(2);
    let g = f("(all(x, p(x)), all(x, (p(x) -> q(x)))) -> q(c)");
    let h = clock.run("interpolation", || ipol(certs, &g, false))??;
    if to_text(&h.formula) != "all(x, q(x))" {
        return Err(format!(
            "expected all(x, q(x)), got {}",
            to_text(&h.formula)
        ));
    }
    let nodes = dot_node_count(&emit_tableau_dot(&h.proof.tableau))?;
    Ok(format!(
        "all(x, q(x)), DOT with {nodes} nodes, {:.2?}",
        clock.worst
    ))
}

fn shannon(g: &Formula) -> Formula {
    let at = |v: bool| assign_atoms(g, &HashMap::from([("p".to_string(), v)]));
    Formula::or([at(true), at(false)])
}

fn criterion_8(certs: &mut Certificates) -> Outcome {
    const N: usize = 1000;
    let mut clock = Clock::new(60);
    clock
        .run("propositional suite", || {
            let formulas = sample(&prop_formula(), N);
            for g in &formulas {
                let h = elim(
                    &Formula::exists2(vec![PredicateSpec::named("p")], g.clone()),
                    &[],
                    &[],
                )?;
                if mentions(&h, "p") || truth_table(&h, &ATOMS) != truth_table(&shannon(g), &ATOMS)
                {
                    return Err(format!(
                        "elimination of p from {} gave {}",
                        to_text(g),
                        to_text(&h)
                    ));
                }
                let cf = clausify(g, ClausifyMode::Equivalence).map_err(|e| e.to_string())?;
                if truth_table(&cf.to_formula(), &ATOMS) != truth_table(g, &ATOMS) {
                    return Err(format!("clausal form of {} differs", to_text(g)));
                }
            }
            let mut pairs = 0;
            for pair in formulas.chunks(2) {
                let (a, b) = (&pair[0], &pair[1]);
                // weaken the right side until the pair is valid
                let b = if entails(a, b) {
                    b.clone()
                } else {
                    Formula::or([a.clone(), b.clone()])
                };
                let h = ipol(certs, &Formula::implies(a.clone(), b.clone()), false)?.formula;
                if !entails(a, &h) || !entails(&h, &b) || !lyndon_ok(a, &h, &b) {
                    return Err(format!(
                        "bad interpolant {} for {} -> {}",
                        to_text(&h),
                        to_text(a),
                        to_text(&b)
                    ));
                }
                pairs += 1;
            }
            Ok(format!("{N} formulas, {pairs} interpolation pairs"))
        })?
        .map(|s| format!("{s} in {:.2?}", clock.worst))
}

fn criterion_9(certs: &mut Certificates) -> Outcome {
    let t = table("definability.pie");
    let g = expand_text(&t, "kb2 -> all(a, (p(a) <-> (q(a), r(a))))").map_err(|e| e.to_string())?;
    certs.validate(&g);
    certs.validate(&f("all(x, p(x)) -> p(a)"));
    certs.validate(&f("p(a) -> all(x, p(x))"));
    certs.validate(&f("(p ; q) -> p"));
    certs.validate(&f("all(x, ex(y, r(x, y))) -> ex(y, all(x, r(x, y)))"));
    let (proofs, models) = certs.recheck()?;
    if proofs == 0 || models == 0 {
        return Err(format!(
            "{proofs} proofs and {models} countermodels collected"
        ));
    }
    Ok(format!(
        "{proofs} tableaux checked, {models} countermodels falsify their formulas"
    ))
}

fn render(src: &str) -> Result<String, String> {
    let (doc, table) = load_document(src).map_err(|e| e.to_string())?;
    let mut ctx = ProcessingContext::with_system(table, OptionSet::new());
    process_document(&doc, &mut ctx).map_err(|e| e.to_string())
}

const SNIPPETS: [&str; 8] = [
    "\\forall \\mathit{x} \\, (\\mathsf{q}(\\mathit{x}) \\rightarrow \\mathsf{r}(\\mathit{x})).",
    "\\mathsf{sprinkler\\_was\\_on} \\lor \\mathsf{rained\\_last\\_night}.",
    "\\noindent is valid.\\par",
    "\\mathsf{p}(\\mathsf{a}) \\land \\forall \\mathit{x} \\, (\\mathsf{p}(\\mathit{x}) \\rightarrow \\mathit{x}=\\mathsf{a}).",
    "Result of interpolation:\n\\[\\begin{array}{lllll}\n\\mathsf{p}.",
    "\\exists \\mathit{x} \\, \\forall \\mathit{y} \\, \\mathsf{p}(\\mathit{x},\\mathit{y}).",
    "\\forall \\mathit{x} \\, (\\mathsf{wet}(\\mathit{x}) \\rightarrow \\mathsf{sprinkler\\_was\\_on} \\lor \\mathsf{rained\\_last\\_night}).",
    "\\mathsf{q}(\\mathsf{a}) \\land \\mathsf{r}(\\mathsf{a}).\n\\end{array}",
];

fn criterion_10(_: &mut Certificates) -> Outcome {
    let src = fixture_text("workbench.pie");
    let first = render(&src)?;
    let second = render(&src)?;
    if first != second {
        return Err("two runs differ".into());
    }
    if let Some(missing) = SNIPPETS.iter().find(|s| !first.contains(*s)) {
        return Err(format!("missing {missing:?}"));
    }
    Ok(format!("{} bytes, identical across runs", first.len()))
}

type Criterion = fn(&mut Certificates) -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        (
            "elimination of a predicate between two implications",
            criterion_1,
        ),
        ("abduction through a macro", criterion_2),
        ("validity of the explanation", criterion_3),
        ("circumscription", criterion_4),
        ("interpolation and definability", criterion_5),
        ("two-colorability", criterion_6),
        ("tableau with a right-only constant", criterion_7),
        ("generated propositional formulas", criterion_8),
        ("certificates recheck", criterion_9),
        ("document determinism", criterion_10),
    ];
    let mut certs = Certificates::default();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        // criterion 9 rechecks everything collected by the others
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| check(&mut certs)))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
