//! A first-order logic workbench centred on computing formulas.
//!
//! The crate covers second-order quantifier elimination, Craig-Lyndon
//! interpolation from clausal tableaux, a formula macro system and a literate
//! document processor that runs reasoning directives and emits LaTeX.

pub mod document;
pub mod elimination;
pub mod formula;
pub mod interpolation;
pub mod macros;
pub mod preprocess;
pub mod prover;
pub mod syntax;

pub use formula::{
    Formula, FreshNames, MacroArg, Polarity, PolarityOccurrence, PredicateSpec, SymbolKind, Term,
};
pub use syntax::{parse_formula, print_formula, PrintOptions};
