mod common;

use common::*;
use pie_core::formula::alpha_eq;
use pie_core::interpolation::{
    emit_tableau_dot, interpolate, InterpolationOptions, InterpolationTask,
};
use pie_core::syntax::{emit_tptp, latex_display, to_text, TptpRole};
use pie_core::{parse_formula, print_formula, PrintOptions};
use proptest::prelude::*;
use tptp::TPTPIterator;

fn braces_balance(s: &str) -> bool {
    let mut depth = 0i64;
    let mut escaped = false;
    for c in s.chars() {
        match c {
            _ if escaped => escaped = false,
            '\\' => escaped = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

fn tptp_inputs(text: &str) -> Result<usize, String> {
    let mut parser = TPTPIterator::<()>::new(text.as_bytes());
    let mut n = 0;
    for r in &mut parser {
        r.map_err(|_| format!("syntax error in {text}"))?;
        n += 1;
    }
    if parser.remaining.iter().any(|b| !b.is_ascii_whitespace()) {
        return Err(format!("trailing input in {text}"));
    }
    Ok(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn text_round_trip(g in fo_formula()) {
        let text = to_text(&g);
        let back = parse_formula(&text).unwrap();
        prop_assert!(alpha_eq(&g, &back), "{text} reads back as {}", to_text(&back));
    }

    #[test]
    fn latex_braces_balance(g in fo_formula()) {
        let inline = print_formula(&g, &PrintOptions::latex());
        prop_assert!(braces_balance(&inline), "{inline}");
        let display = latex_display(&g, &PrintOptions::latex());
        prop_assert!(braces_balance(&display), "{display}");
    }

    #[test]
    fn tptp_output_parses(g in fo_formula()) {
        let text = emit_tptp("g", TptpRole::Conjecture, &g).unwrap();
        prop_assert_eq!(tptp_inputs(&text), Ok(1));
    }
}

#[test]
fn tptp_for_fixture_formulas() {
    for text in [
        "all(x, (p(x) -> q(x)))",
        "ex(x, all(y, r(x, y))) -> all(y, ex(x, r(x, y)))",
        "(sprinkler_was_on -> wet(grass)), ~(a = b)",
        "all(x, (wet(x) -> x = grass ; x = shoes))",
    ] {
        let out = emit_tptp("f", TptpRole::Axiom, &f(text)).unwrap();
        assert_eq!(tptp_inputs(&out), Ok(1), "{out}");
    }
}

fn tableau_dot(text: &str, simp_sides: bool) -> String {
    let opts = InterpolationOptions {
        simp_sides,
        ..InterpolationOptions::default()
    };
    let h = interpolate(&InterpolationTask::from_implication(&f(text), opts).unwrap()).unwrap();
    emit_tableau_dot(&h.proof.tableau)
}

#[test]
fn dot_of_single_complementary_pair() {
    assert_eq!(dot_node_count(&tableau_dot("p -> p", true)), Ok(3));
}

#[test]
fn dot_of_right_only_constant_tableau() {
    assert_eq!(
        dot_node_count(&tableau_dot(
            "(all(x, p(x)), all(x, (p(x) -> q(x)))) -> q(c)",
            false
        )),
        Ok(5)
    );
}

#[test]
fn brace_lint_rejects_imbalance() {
    assert!(braces_balance("\\mathsf{p}(\\{a\\})"));
    assert!(!braces_balance("\\mathsf{p"));
    assert!(!braces_balance("}{"));
}
