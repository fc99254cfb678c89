//! Iterative-deepening model elimination over clauses with side labels.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use super::{Closure, ProofClause, ProofFailure, ProverConfig, Side, TableauNode};
use crate::formula::Term;
use crate::preprocess::{LitAtom, Literal};

type Sym = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
enum PTerm {
    Var(u32),
    App(Sym, Vec<PTerm>),
}

#[derive(Clone, Debug)]
struct PLit {
    pos: bool,
    pred: Sym,
    args: Vec<PTerm>,
}

struct PClause {
    lits: Vec<PLit>,
    nvars: u32,
}

#[derive(Default)]
struct Symbols {
    names: Vec<String>,
    ids: HashMap<String, Sym>,
}

impl Symbols {
    fn id(&mut self, name: &str) -> Sym {
        if let Some(&i) = self.ids.get(name) {
            return i;
        }
        let i = self.names.len() as Sym;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), i);
        i
    }
}

const EQ: &str = "=";

fn convert_clause(c: &crate::preprocess::Clause, syms: &mut Symbols) -> PClause {
    let mut vars: BTreeMap<String, u32> = BTreeMap::new();
    fn term(t: &Term, syms: &mut Symbols, vars: &mut BTreeMap<String, u32>) -> PTerm {
        match t {
            Term::Var(v) => {
                let n = vars.len() as u32;
                PTerm::Var(*vars.entry(v.clone()).or_insert(n))
            }
            Term::App(f, args) => PTerm::App(
                syms.id(f),
                args.iter().map(|a| term(a, syms, vars)).collect(),
            ),
        }
    }
    let lits = c
        .literals
        .iter()
        .map(|l| {
            let (name, args): (&str, Vec<&Term>) = match &l.atom {
                LitAtom::Pred(p, args) => (p, args.iter().collect()),
                LitAtom::Eq(s, t) => (EQ, vec![s, t]),
            };
            let pred = syms.id(name);
            PLit {
                pos: l.positive,
                pred,
                args: args.into_iter().map(|a| term(a, syms, &mut vars)).collect(),
            }
        })
        .collect();
    PClause {
        lits,
        nvars: vars.len() as u32,
    }
}

enum Event {
    Ext {
        clause: usize,
        lit: usize,
        inst: Vec<PLit>,
    },
    Red {
        pos: usize,
    },
}

struct Search<'a> {
    clauses: Vec<PClause>,
    index: HashMap<(Sym, bool), Vec<(usize, usize)>>,
    bindings: Vec<Option<PTerm>>,
    trail: Vec<u32>,
    path: Vec<PLit>,
    log: Vec<Event>,
    limit: usize,
    regularity: bool,
    hit_limit: bool,
    aborted: bool,
    inferences: u64,
    deadline: Instant,
    cancel: Option<&'a AtomicBool>,
}

impl Search<'_> {
    fn fresh_vars(&mut self, n: u32) -> u32 {
        let base = self.bindings.len() as u32;
        self.bindings.extend((0..n).map(|_| None));
        base
    }

    fn rename(&mut self, ci: usize) -> Vec<PLit> {
        let base = self.fresh_vars(self.clauses[ci].nvars);
        fn shift(t: &PTerm, base: u32) -> PTerm {
            match t {
                PTerm::Var(v) => PTerm::Var(v + base),
                PTerm::App(f, args) => {
                    PTerm::App(*f, args.iter().map(|a| shift(a, base)).collect())
                }
            }
        }
        self.clauses[ci]
            .lits
            .iter()
            .map(|l| PLit {
                pos: l.pos,
                pred: l.pred,
                args: l.args.iter().map(|a| shift(a, base)).collect(),
            })
            .collect()
    }

    fn deref<'t>(&'t self, mut t: &'t PTerm) -> &'t PTerm {
        while let PTerm::Var(v) = t {
            match &self.bindings[*v as usize] {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &PTerm) -> bool {
        match self.deref(t) {
            PTerm::Var(w) => *w == v,
            PTerm::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn bind(&mut self, v: u32, t: PTerm) {
        self.bindings[v as usize] = Some(t);
        self.trail.push(v);
    }

    fn unify(&mut self, a: &PTerm, b: &PTerm) -> bool {
        let (a, b) = (self.deref(a).clone(), self.deref(b).clone());
        match (&a, &b) {
            (PTerm::Var(x), PTerm::Var(y)) if x == y => true,
            (PTerm::Var(x), t) | (t, PTerm::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.bind(*x, t.clone());
                true
            }
            (PTerm::App(f, xs), PTerm::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    fn unify_lits(&mut self, a: &PLit, b: &PLit) -> bool {
        a.pred == b.pred
            && a.args.len() == b.args.len()
            && a.args.iter().zip(&b.args).all(|(x, y)| self.unify(x, y))
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.bindings[v as usize] = None;
        }
    }

    fn identical_terms(&self, a: &PTerm, b: &PTerm) -> bool {
        match (self.deref(a), self.deref(b)) {
            (PTerm::Var(x), PTerm::Var(y)) => x == y,
            (PTerm::App(f, xs), PTerm::App(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| self.identical_terms(x, y))
            }
            _ => false,
        }
    }

    fn identical(&self, a: &PLit, b: &PLit) -> bool {
        a.pos == b.pos
            && a.pred == b.pred
            && a.args
                .iter()
                .zip(&b.args)
                .all(|(x, y)| self.identical_terms(x, y))
    }

    fn tick(&mut self) -> bool {
        self.inferences += 1;
        if self.inferences.is_multiple_of(512)
            && (Instant::now() >= self.deadline
                || self.cancel.is_some_and(|c| c.load(Ordering::Relaxed)))
        {
            self.aborted = true;
        }
        !self.aborted
    }

    fn solve_clause(&mut self, lits: &[PLit], k: &mut dyn FnMut(&mut Self) -> bool) -> bool {
        match lits.split_first() {
            None => k(self),
            Some((first, rest)) => {
                self.solve_lit(first, &mut |s: &mut Self| s.solve_clause(rest, k))
            }
        }
    }

    fn solve_lit(&mut self, lit: &PLit, k: &mut dyn FnMut(&mut Self) -> bool) -> bool {
        if !self.tick() {
            return false;
        }
        if self.regularity && self.path.iter().any(|p| self.identical(p, lit)) {
            return false;
        }
        for i in (0..self.path.len()).rev() {
            if self.path[i].pos == lit.pos || self.path[i].pred != lit.pred {
                continue;
            }
            let mark = self.trail.len();
            let partner = self.path[i].clone();
            if self.unify_lits(&partner, lit) {
                self.log.push(Event::Red { pos: i });
                if k(self) {
                    return true;
                }
                self.log.pop();
            }
            self.undo(mark);
            if self.aborted {
                return false;
            }
        }
        if self.path.len() >= self.limit {
            self.hit_limit = true;
            return false;
        }
        let candidates = self
            .index
            .get(&(lit.pred, !lit.pos))
            .cloned()
            .unwrap_or_default();
        for (ci, li) in candidates {
            let mark = self.trail.len();
            let vars_mark = self.bindings.len();
            let inst = self.rename(ci);
            if self.unify_lits(lit, &inst[li]) {
                let log_mark = self.log.len();
                let rest: Vec<PLit> = inst
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != li)
                    .map(|(_, l)| l.clone())
                    .collect();
                self.log.push(Event::Ext {
                    clause: ci,
                    lit: li,
                    inst,
                });
                self.path.push(lit.clone());
                let found = self.solve_clause(&rest, &mut |s: &mut Self| {
                    let top = s.path.pop().expect("path entry");
                    let r = k(s);
                    s.path.push(top);
                    r
                });
                self.path.pop();
                if found {
                    return true;
                }
                self.log.truncate(log_mark);
            }
            self.undo(mark);
            self.bindings.truncate(vars_mark);
            if self.aborted {
                return false;
            }
        }
        false
    }

    fn resolve(&self, t: &PTerm, syms: &Symbols, ground: &str) -> Term {
        match self.deref(t) {
            PTerm::Var(_) => Term::constant(ground),
            PTerm::App(f, args) => Term::App(
                syms.names[*f as usize].clone(),
                args.iter().map(|a| self.resolve(a, syms, ground)).collect(),
            ),
        }
    }

    fn literal(&self, l: &PLit, syms: &Symbols, ground: &str) -> Literal {
        let args: Vec<Term> = l
            .args
            .iter()
            .map(|a| self.resolve(a, syms, ground))
            .collect();
        let name = &syms.names[l.pred as usize];
        let atom = if name == EQ && args.len() == 2 {
            let mut it = args.into_iter();
            LitAtom::eq(it.next().unwrap(), it.next().unwrap())
        } else {
            LitAtom::Pred(name.clone(), args)
        };
        Literal {
            positive: l.pos,
            atom,
        }
    }
}

struct Rebuild<'a, 'b> {
    search: &'a Search<'b>,
    syms: &'a Symbols,
    sides: &'a [Side],
    ground: &'a str,
    pos: usize,
}

impl Rebuild<'_, '_> {
    /// Builds the children of a node from the extension event at the cursor.
    fn group(&mut self, path: &mut Vec<Side>) -> Vec<TableauNode> {
        let Event::Ext { clause, lit, inst } = &self.search.log[self.pos] else {
            panic!("extension event expected")
        };
        self.pos += 1;
        let side = self.sides[*clause];
        let mut children = Vec::with_capacity(inst.len());
        for (j, l) in inst.iter().enumerate() {
            let literal = self.search.literal(l, self.syms, self.ground);
            if j == *lit {
                let partner = *path.last().expect("connection to parent");
                children.push(TableauNode {
                    literal: Some(literal),
                    clause: Some(*clause),
                    side,
                    children: Vec::new(),
                    closure: Closure::Ancestor {
                        distance: 1,
                        side: partner,
                    },
                });
                continue;
            }
            match &self.search.log[self.pos] {
                Event::Red { pos } => {
                    self.pos += 1;
                    children.push(TableauNode {
                        literal: Some(literal),
                        clause: Some(*clause),
                        side,
                        children: Vec::new(),
                        closure: Closure::Ancestor {
                            distance: path.len() - pos,
                            side: path[*pos],
                        },
                    });
                }
                Event::Ext { .. } => {
                    path.push(side);
                    let grand = self.group(path);
                    path.pop();
                    children.push(TableauNode {
                        literal: Some(literal),
                        clause: Some(*clause),
                        side,
                        children: grand,
                        closure: Closure::None,
                    });
                }
            }
        }
        children
    }
}

/// Searches for a closed tableau for `clauses`, trying `starts` as start clauses in order.
pub(super) fn search(
    clauses: &[ProofClause],
    starts: &[usize],
    cfg: &ProverConfig,
    cancel: Option<&AtomicBool>,
    ground: &str,
) -> Result<TableauNode, ProofFailure> {
    let mut syms = Symbols::default();
    let pclauses: Vec<PClause> = clauses
        .iter()
        .map(|c| convert_clause(&c.clause, &mut syms))
        .collect();
    let mut index: HashMap<(Sym, bool), Vec<(usize, usize)>> = HashMap::new();
    for (ci, c) in pclauses.iter().enumerate() {
        for (li, l) in c.lits.iter().enumerate() {
            index.entry((l.pred, l.pos)).or_default().push((ci, li));
        }
    }
    let sides: Vec<Side> = clauses.iter().map(|c| c.side).collect();
    let mut s = Search {
        clauses: pclauses,
        index,
        bindings: Vec::new(),
        trail: Vec::new(),
        path: Vec::new(),
        log: Vec::new(),
        limit: 0,
        regularity: cfg.regularity,
        hit_limit: false,
        aborted: false,
        inferences: 0,
        deadline: Instant::now() + cfg.timeout,
        cancel,
    };
    let step = cfg.depth_increment.max(1);
    let mut limit = 1;
    while limit <= cfg.max_depth.max(1) {
        s.limit = limit;
        s.hit_limit = false;
        for &start in starts {
            s.bindings.clear();
            s.trail.clear();
            s.log.clear();
            let inst = s.rename(start);
            s.log.push(Event::Ext {
                clause: start,
                lit: usize::MAX,
                inst: inst.clone(),
            });
            if s.solve_clause(&inst, &mut |_| true) {
                let mut rb = Rebuild {
                    search: &s,
                    syms: &syms,
                    sides: &sides,
                    ground,
                    pos: 0,
                };
                let children = rb.group(&mut Vec::new());
                return Ok(TableauNode {
                    literal: None,
                    clause: Some(start),
                    side: sides[start],
                    children,
                    closure: Closure::None,
                });
            }
            if s.aborted {
                return Err(ProofFailure::Timeout);
            }
        }
        if !s.hit_limit {
            return Err(ProofFailure::Exhausted);
        }
        limit += step;
    }
    Err(ProofFailure::DepthLimit)
}
