#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;
use std::time::Duration;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use pie_core::elimination::assign_atoms;
use pie_core::prover::{validate, Model, Proof, ProverConfig, ValidationResult};
use pie_core::{parse_formula, Formula, Polarity, SymbolKind, Term};

pub fn f(text: &str) -> Formula {
    parse_formula(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures", name]
        .iter()
        .collect()
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub fn budget() -> ProverConfig {
    ProverConfig {
        timeout: Duration::from_secs(5),
        ..ProverConfig::default()
    }
}

/// Proofs and countermodels collected while running checks, re-examined at the end.
#[derive(Default)]
pub struct Certificates {
    pub proofs: Vec<Proof>,
    /// Each model with the formula it must falsify.
    pub countermodels: Vec<(Model, Formula)>,
}

impl Certificates {
    pub fn validate(&mut self, g: &Formula) -> ValidationResult {
        let r = validate(g, &budget());
        match &r {
            ValidationResult::Valid(p) => self.proofs.push(p.clone()),
            ValidationResult::NotValid(m) => self.countermodels.push((m.clone(), g.clone())),
            ValidationResult::Failed(_) => {}
        }
        r
    }

    /// Both entailments proved within the budget.
    pub fn equivalent(&mut self, a: &Formula, b: &Formula) -> bool {
        self.validate(&Formula::implies(a.clone(), b.clone()))
            .is_valid()
            && self
                .validate(&Formula::implies(b.clone(), a.clone()))
                .is_valid()
    }

    /// Number of proofs and models checked, or the first rejected certificate.
    pub fn recheck(&self) -> Result<(usize, usize), String> {
        for p in &self.proofs {
            p.check().map_err(|e| format!("tableau rejected: {e}"))?;
        }
        for (m, g) in &self.countermodels {
            if m.evaluate(&Formula::not(g.clone())) != Some(true) {
                return Err(format!("model {m} does not falsify {g}"));
            }
        }
        Ok((self.proofs.len(), self.countermodels.len()))
    }
}

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

/// Propositional formulas over at most the three atoms of [`ATOMS`].
pub fn prop_formula() -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(ATOMS.to_vec()).prop_map(Formula::prop),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and([a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or([a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
    .boxed()
}

fn term() -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["x", "y"]).prop_map(Term::var),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(2, 4, 1, |inner| inner.prop_map(|t| Term::app("f", vec![t])))
        .boxed()
}

/// Closed first-order formulas over `p/1`, `q/2`, equality, `f/1` and the constants `a`, `b`.
pub fn fo_formula() -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        term().prop_map(|t| Formula::atom("p", vec![t])),
        (term(), term()).prop_map(|(s, t)| Formula::atom("q", vec![s, t])),
        (term(), term()).prop_map(|(s, t)| Formula::eq(s, t)),
    ];
    let body = leaf.prop_recursive(3, 16, 2, |inner| {
        let var = || prop::sample::select(vec!["x".to_string(), "y".to_string()]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and([a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or([a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (var(), inner.clone()).prop_map(|(v, a)| Formula::forall(vec![v], a)),
            (var(), inner).prop_map(|(v, a)| Formula::exists(vec![v], a)),
        ]
    });
    body.prop_map(|b| Formula::forall(vec!["x".into(), "y".into()], b))
        .boxed()
}

/// A reproducible sample of `n` values.
pub fn sample<T: std::fmt::Debug>(strategy: &BoxedStrategy<T>, n: usize) -> Vec<T> {
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}

/// Truth values of `g` under every assignment to `atoms`, in binary counting order.
pub fn truth_table(g: &Formula, atoms: &[&str]) -> Vec<bool> {
    (0..1usize << atoms.len())
        .map(|bits| {
            let values: HashMap<String, bool> = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (a.to_string(), bits >> i & 1 == 1))
                .collect();
            match assign_atoms(g, &values) {
                Formula::True => true,
                Formula::False => false,
                other => panic!("not closed under the assignment: {other}"),
            }
        })
        .collect()
}

pub fn entails(a: &Formula, b: &Formula) -> bool {
    truth_table(a, &ATOMS)
        .iter()
        .zip(truth_table(b, &ATOMS))
        .all(|(x, y)| !x || y)
}

pub fn predicates(g: &Formula) -> BTreeSet<String> {
    pie_core::formula::free_symbols(g)
        .into_iter()
        .filter(|o| o.kind == SymbolKind::Predicate)
        .map(|o| o.symbol)
        .collect()
}

/// For each predicate: whether it occurs positively and whether negatively.
pub fn polarities(g: &Formula) -> BTreeMap<String, (bool, bool)> {
    let mut out: BTreeMap<String, (bool, bool)> = BTreeMap::new();
    for o in pie_core::formula::free_symbols(g)
        .into_iter()
        .filter(|o| o.kind == SymbolKind::Predicate)
    {
        let e = out.entry(o.symbol).or_default();
        match o.polarity {
            Polarity::Positive => e.0 = true,
            Polarity::Negative => e.1 = true,
            Polarity::Both => *e = (true, true),
        }
    }
    out
}

/// `h` only uses predicates of both `a` and `b`, each in a polarity it has in both.
pub fn lyndon_ok(a: &Formula, h: &Formula, b: &Formula) -> bool {
    let (pa, pb) = (polarities(a), polarities(b));
    polarities(h)
        .iter()
        .all(|(p, (pos, neg))| match (pa.get(p), pb.get(p)) {
            (Some(x), Some(y)) => (!pos || (x.0 && y.0)) && (!neg || (x.1 && y.1)),
            _ => false,
        })
}

pub fn dot_node_count(text: &str) -> Result<usize, String> {
    let ast = dot_parser::ast::Graph::try_from(text).map_err(|e| e.to_string())?;
    let g = dot_parser::canonical::Graph::from(ast);
    Ok(g.nodes.set.len())
}
