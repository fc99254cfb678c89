//! Normal forms and predicate-respecting simplifications.

mod clause;
mod clausify;
mod pipeline;
mod simplify;
mod unskolemize;

use thiserror::Error;

pub use clause::{ClausalForm, Clause, LitAtom, Literal, Skolem};
pub use clausify::{clausify, clausify_with, miniscope, ClausifyMode};
pub use pipeline::{apply_stages, pipeline_c6, pipeline_d6, reform, Stage};
pub use simplify::{match_literal, match_term, simplify_clausal, subsumes, ProtectedVocabulary};
pub use unskolemize::unskolemize;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PreprocessError {
    #[error("not a first-order formula: {0}")]
    NotFirstOrder(String),
    #[error("cannot un-Skolemize: {0}")]
    NotInvertible(String),
}
