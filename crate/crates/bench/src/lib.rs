//! Benchmark inputs shared by the criterion benches.

use pie_core::document::expand_text;
use pie_core::macros::MacroTable;
use pie_core::{parse_formula, Formula};

pub const KB1: &str = "def(kb1) :: (sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), (wet(grass) -> wet(shoes)).\n\
    def(circ(P, F)) :: F, ~ex2(P_p, (F_p, T1, ~T2)) ::- \
        mac_rename_free_predicate(F, P, pn, F_p, P_p), mac_get_arity(P, F, A), \
        mac_transfer_clauses([P/A-n], p, [P_p], T1), mac_transfer_clauses([P/A-n], n, [P_p], T2).\n";

pub fn formula(text: &str) -> Formula {
    parse_formula(text).expect("benchmark input parses")
}

/// Expands `text` against the definitions of [`KB1`].
pub fn expanded(text: &str) -> Formula {
    let (_, table): (_, MacroTable) =
        pie_core::document::load_document(KB1).expect("benchmark document loads");
    expand_text(&table, text).expect("benchmark input expands")
}

/// A chain `p0(a), p0 -> p1, ..., p(n-1) -> pn` whose consequence is `pn(a)`.
pub fn chain(n: usize) -> Formula {
    let links: Vec<String> = (0..n)
        .map(|i| format!("all(x, (p{i}(x) -> p{}(x)))", i + 1))
        .collect();
    formula(&format!("(p0(a), {}) -> p{n}(a)", links.join(", ")))
}
