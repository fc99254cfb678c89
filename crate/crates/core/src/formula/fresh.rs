use std::collections::HashSet;

use super::ops::symbol_names;
use super::Formula;

/// Generator of names that are not yet in use.
///
/// Names are produced from a base by appending a counter: `q`, `q1`, `q2`, ...
/// Every name handed out or registered is remembered, so one generator never
/// returns the same name twice.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    used: HashSet<String>,
}

impl FreshNames {
    pub fn new() -> Self {
        Self::default()
    }

    /// A generator that avoids every symbol and bound name of `f`.
    pub fn avoiding(f: &Formula) -> Self {
        let mut names = Self::new();
        names.reserve_formula(f);
        names
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.used.insert(name.into());
    }

    pub fn reserve_formula(&mut self, f: &Formula) {
        self.used.extend(symbol_names(f));
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// `base` itself if unused, otherwise the first unused `base<n>`.
    pub fn fresh(&mut self, base: &str) -> String {
        if !self.used.contains(base) {
            self.used.insert(base.to_string());
            return base.to_string();
        }
        self.fresh_indexed(base)
    }

    /// The first unused `base<n>` with `n >= 1`, never the bare base.
    pub fn fresh_indexed(&mut self, base: &str) -> String {
        let stem = strip_index(base);
        let mut n = 1usize;
        loop {
            let candidate = format!("{stem}{n}");
            if !self.used.contains(&candidate) {
                self.used.insert(candidate.clone());
                return candidate;
            }
            n += 1;
        }
    }

    /// Like [`fresh`](Self::fresh) but never returns `base` itself, giving `base1`, `base2`, ...
    pub fn variant(&mut self, base: &str) -> String {
        self.used.insert(base.to_string());
        self.fresh_indexed(base)
    }
}

fn strip_index(name: &str) -> &str {
    let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
    if stem.is_empty() {
        name
    } else {
        stem
    }
}
