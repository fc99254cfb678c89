use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{ClausalForm, Clause, PreprocessError};
use crate::formula::{Formula, Term};

const NAME_POOL: [&str; 8] = ["x", "y", "z", "u", "v", "w", "x1", "y1"];

fn is_skolem_name(cf: &ClausalForm, name: &str) -> bool {
    cf.is_skolem(name)
        || (name.len() > 2
            && name.starts_with("sk")
            && name[2..].chars().all(|c| c.is_ascii_digit()))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        let p = self.parent[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.parent[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Skolem occurrences of a clause: name to argument variables.
fn skolem_uses(
    cf: &ClausalForm,
    c: &Clause,
) -> Result<BTreeMap<String, Vec<String>>, PreprocessError> {
    fn walk(
        cf: &ClausalForm,
        t: &Term,
        out: &mut BTreeMap<String, Vec<String>>,
    ) -> Result<(), PreprocessError> {
        let Term::App(f, args) = t else { return Ok(()) };
        if !is_skolem_name(cf, f) {
            return args.iter().try_for_each(|a| walk(cf, a, out));
        }
        let vars: Vec<String> = args
            .iter()
            .map(|a| match a {
                Term::Var(v) => Ok(v.clone()),
                other => Err(PreprocessError::NotInvertible(format!(
                    "Skolem argument {other} is not a variable"
                ))),
            })
            .collect::<Result<_, _>>()?;
        if vars.iter().collect::<BTreeSet<_>>().len() != vars.len() {
            return Err(PreprocessError::NotInvertible(format!(
                "repeated variable in {t}"
            )));
        }
        match out.get(f) {
            Some(prev) if *prev != vars => Err(PreprocessError::NotInvertible(format!(
                "{f} used with different arguments in one clause"
            ))),
            _ => {
                out.insert(f.clone(), vars);
                Ok(())
            }
        }
    }
    let mut out = BTreeMap::new();
    for l in &c.literals {
        for t in l.atom.args() {
            walk(cf, t, &mut out)?;
        }
    }
    Ok(out)
}

/// Reintroduces existential quantifiers for the Skolem functions of `cf`.
///
/// Skolem arguments must be distinct variables, and within a group of
/// clauses linked by shared Skolem symbols the dependency sets must be
/// ordered by inclusion. Skolem-free clauses become universal closures.
pub fn unskolemize(cf: &ClausalForm) -> Result<Formula, PreprocessError> {
    let uses: Vec<BTreeMap<String, Vec<String>>> = cf
        .clauses
        .iter()
        .map(|c| skolem_uses(cf, c))
        .collect::<Result<_, _>>()?;

    // group clauses by shared Skolem symbols
    let mut sk_index: BTreeMap<String, usize> = BTreeMap::new();
    for u in &uses {
        for s in u.keys() {
            let n = sk_index.len();
            sk_index.entry(s.clone()).or_insert(n);
        }
    }
    let mut groups = UnionFind::new(sk_index.len());
    for u in &uses {
        let ids: Vec<usize> = u.keys().map(|s| sk_index[s]).collect();
        for w in ids.windows(2) {
            groups.union(w[0], w[1]);
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut plain = Vec::new();
    for (i, u) in uses.iter().enumerate() {
        match u.keys().next() {
            Some(s) => components
                .entry(groups.find(sk_index[s]))
                .or_default()
                .push(i),
            None => plain.push(i),
        }
    }

    let mut parts = Vec::new();
    for i in plain {
        parts.push(closure(&cf.clauses[i], &HashMap::new(), &BTreeSet::new()));
    }
    for members in components.values() {
        parts.push(unskolemize_component(cf, members, &uses)?);
    }
    Ok(Formula::and(parts))
}

fn closure(c: &Clause, rename: &HashMap<String, Term>, taken: &BTreeSet<String>) -> Formula {
    let mut map = rename.clone();
    let mut private = Vec::new();
    let mut used = taken.clone();
    for v in c.vars() {
        if map.contains_key(&v) {
            continue;
        }
        let name = if used.contains(&v) {
            fresh_from(&v, &used)
        } else {
            v.clone()
        };
        used.insert(name.clone());
        map.insert(v, Term::Var(name.clone()));
        private.push(name);
    }
    Formula::forall(private, c.substitute(&map).to_formula())
}

fn fresh_from(base: &str, used: &BTreeSet<String>) -> String {
    (1..)
        .map(|n| format!("{base}{n}"))
        .find(|c| !used.contains(c))
        .unwrap()
}

fn unskolemize_component(
    cf: &ClausalForm,
    members: &[usize],
    uses: &[BTreeMap<String, Vec<String>>],
) -> Result<Formula, PreprocessError> {
    // slots (skolem, position) joined when one variable fills both in a clause
    let mut slot_ids: BTreeMap<(String, usize), usize> = BTreeMap::new();
    for &i in members {
        for (s, vars) in &uses[i] {
            for k in 0..vars.len() {
                let n = slot_ids.len();
                slot_ids.entry((s.clone(), k)).or_insert(n);
            }
        }
    }
    let mut uf = UnionFind::new(slot_ids.len());
    for &i in members {
        let mut first: HashMap<&str, usize> = HashMap::new();
        for (s, vars) in &uses[i] {
            for (k, v) in vars.iter().enumerate() {
                let id = slot_ids[&(s.clone(), k)];
                match first.get(v.as_str()) {
                    Some(&other) => uf.union(other, id),
                    None => {
                        first.insert(v, id);
                    }
                }
            }
        }
    }

    let mut deps: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for ((s, _), id) in &slot_ids {
        let class = uf.find(*id);
        let d = deps.entry(s.clone()).or_default();
        d.insert(class);
    }
    for (s, d) in &deps {
        let arity = slot_ids.keys().filter(|(n, _)| n == s).count();
        if d.len() != arity {
            return Err(PreprocessError::NotInvertible(format!(
                "arguments of {s} are identified"
            )));
        }
    }
    // nullary Skolems have no slots
    for &i in members {
        for s in uses[i].keys() {
            deps.entry(s.clone()).or_default();
        }
    }

    let mut order: Vec<(&String, &BTreeSet<usize>)> = deps.iter().collect();
    order.sort_by_key(|(s, d)| (d.len(), (*s).clone()));
    for w in order.windows(2) {
        if !w[0].1.is_subset(w[1].1) {
            return Err(PreprocessError::NotInvertible(format!(
                "dependencies of {} and {} are not nested",
                w[0].0, w[1].0
            )));
        }
    }

    // every slot class must be filled by a single variable in each clause
    let mut class_var: Vec<HashMap<usize, String>> = Vec::new();
    for &i in members {
        let mut m: HashMap<usize, String> = HashMap::new();
        for (s, vars) in &uses[i] {
            for (k, v) in vars.iter().enumerate() {
                let class = uf.find(slot_ids[&(s.clone(), k)]);
                match m.get(&class) {
                    Some(prev) if prev != v => {
                        return Err(PreprocessError::NotInvertible(format!(
                            "argument positions of {s} conflict"
                        )));
                    }
                    _ => {
                        m.insert(class, v.clone());
                    }
                }
            }
        }
        class_var.push(m);
    }

    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut class_name: BTreeMap<usize, String> = BTreeMap::new();
    for m in &class_var {
        let mut entries: Vec<(&usize, &String)> = m.iter().collect();
        entries.sort();
        for (class, v) in entries {
            if class_name.contains_key(class) {
                continue;
            }
            let name = if taken.contains(v) {
                fresh_from(v, &taken)
            } else {
                v.clone()
            };
            taken.insert(name.clone());
            class_name.insert(*class, name);
        }
    }
    let mut clause_vars: BTreeSet<String> = BTreeSet::new();
    for &i in members {
        clause_vars.extend(cf.clauses[i].vars());
    }
    let mut sk_var: BTreeMap<String, String> = BTreeMap::new();
    for (s, _) in &order {
        let name = NAME_POOL
            .iter()
            .map(|n| n.to_string())
            .find(|n| !taken.contains(n) && !clause_vars.contains(n))
            .unwrap_or_else(|| fresh_from("y", &taken.union(&clause_vars).cloned().collect()));
        taken.insert(name.clone());
        sk_var.insert((*s).clone(), name);
    }

    let mut matrix = Vec::new();
    for (pos, &i) in members.iter().enumerate() {
        let c = &cf.clauses[i];
        let mut rename: HashMap<String, Term> = HashMap::new();
        for (class, v) in &class_var[pos] {
            rename.insert(v.clone(), Term::Var(class_name[class].clone()));
        }
        let replaced = Clause::new(
            c.literals
                .iter()
                .map(|l| l.map_terms(&|t| replace_skolems(cf, t, &sk_var)))
                .collect(),
        );
        for v in sk_var.values() {
            rename.insert(v.clone(), Term::var(v.clone()));
        }
        matrix.push(closure(&replaced, &rename, &taken));
    }

    let mut body = Formula::and(matrix);
    let mut quantified: BTreeSet<usize> = BTreeSet::new();
    let mut blocks: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for (s, d) in &order {
        let new: Vec<String> = d
            .iter()
            .filter(|c| !quantified.contains(*c))
            .map(|c| class_name[c].clone())
            .collect();
        quantified.extend(d.iter().copied());
        match blocks.last_mut() {
            Some((_, ex)) if new.is_empty() => ex.push(sk_var[*s].clone()),
            _ => blocks.push((new, vec![sk_var[*s].clone()])),
        }
    }
    for (univ, ex) in blocks.into_iter().rev() {
        body = Formula::forall(univ, Formula::exists(ex, body));
    }
    Ok(body)
}

fn replace_skolems(cf: &ClausalForm, t: &Term, sk_var: &BTreeMap<String, String>) -> Term {
    match t {
        Term::App(f, _) if is_skolem_name(cf, f) => Term::var(sk_var[f].clone()),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter()
                .map(|a| replace_skolems(cf, a, sk_var))
                .collect(),
        ),
        v => v.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::{LitAtom, Literal};
    use crate::syntax::to_text;

    fn pred(p: &str, args: Vec<Term>) -> Literal {
        Literal::pos(LitAtom::Pred(p.into(), args))
    }

    #[test]
    fn unary_skolem() {
        let x = Term::var("x");
        let cf = ClausalForm::new(vec![Clause::new(vec![pred(
            "p",
            vec![x.clone(), Term::app("sk1", vec![x])],
        )])]);
        assert_eq!(
            to_text(&unskolemize(&cf).unwrap()),
            "all(x, ex(y, p(x, y)))"
        );
    }

    #[test]
    fn skolem_constant() {
        let cf = ClausalForm::new(vec![Clause::new(vec![pred(
            "p",
            vec![Term::constant("sk1"), Term::var("y")],
        )])]);
        assert_eq!(
            to_text(&unskolemize(&cf).unwrap()),
            "ex(x, all(y, p(x, y)))"
        );
    }

    #[test]
    fn skolem_free_closure() {
        let cf = ClausalForm::new(vec![Clause::new(vec![pred("p", vec![Term::var("x")])])]);
        assert_eq!(to_text(&unskolemize(&cf).unwrap()), "all(x, p(x))");
    }

    #[test]
    fn crossing_dependencies_fail() {
        let (x, y) = (Term::var("x"), Term::var("y"));
        let cf = ClausalForm::new(vec![Clause::new(vec![
            pred("p", vec![Term::app("sk1", vec![x.clone()])]),
            pred("q", vec![Term::app("sk2", vec![y.clone()])]),
            pred("r", vec![x, y]),
        ])]);
        assert!(unskolemize(&cf).is_err());
    }

    #[test]
    fn non_variable_argument_fails() {
        let cf = ClausalForm::new(vec![Clause::new(vec![pred(
            "p",
            vec![Term::app("sk1", vec![Term::constant("a")])],
        )])]);
        assert!(unskolemize(&cf).is_err());
    }
}
