//! A small DPLL solver with two watched literals.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

/// Clauses over variables `1..=num_vars`, literals signed as in DIMACS.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new_var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add(&mut self, clause: Vec<i32>) {
        self.clauses.push(clause);
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&l.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// Assignment indexed by variable; index 0 is unused.
    Sat(Vec<bool>),
    Unsat,
    Unknown,
}

fn code(l: i32) -> usize {
    2 * (l.unsigned_abs() as usize) + usize::from(l < 0)
}

struct Solver {
    clauses: Vec<Vec<usize>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<usize>,
    qhead: usize,
}

impl Solver {
    fn lit_value(&self, l: usize) -> i8 {
        match self.value[l >> 1] {
            -1 => -1,
            v => (v as usize ^ (l & 1)) as i8,
        }
    }

    fn enqueue(&mut self, l: usize) {
        self.value[l >> 1] = (1 ^ (l & 1)) as i8;
        self.trail.push(l);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let watching = std::mem::take(&mut self.watches[falsified]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut ok = true;
            for (n, &ci) in watching.iter().enumerate() {
                if !ok {
                    keep.extend_from_slice(&watching[n..]);
                    break;
                }
                if self.clauses[ci][0] == falsified {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.lit_value(first) == 1 {
                    keep.push(ci);
                    continue;
                }
                let replacement =
                    (2..self.clauses[ci].len()).find(|&k| self.lit_value(self.clauses[ci][k]) != 0);
                if let Some(k) = replacement {
                    self.clauses[ci].swap(1, k);
                    let w = self.clauses[ci][1];
                    self.watches[w].push(ci);
                    continue;
                }
                keep.push(ci);
                match self.lit_value(first) {
                    0 => ok = false,
                    _ => self.enqueue(first),
                }
            }
            self.watches[falsified] = keep;
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        for l in self.trail.drain(len..) {
            self.value[l >> 1] = -1;
        }
        self.qhead = len;
    }
}

/// Decides satisfiability, giving up with `Unknown` at the deadline or on cancellation.
pub fn solve_cnf(cnf: &Cnf, deadline: Option<Instant>, cancel: Option<&AtomicBool>) -> SatResult {
    let n = cnf.num_vars;
    let mut s = Solver {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n + 2],
        value: vec![-1; n + 1],
        trail: Vec::new(),
        qhead: 0,
    };
    let mut units = Vec::new();
    for c in &cnf.clauses {
        let mut lits: Vec<usize> = c.iter().map(|&l| code(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            continue;
        }
        match lits.len() {
            0 => return SatResult::Unsat,
            1 => units.push(lits[0]),
            _ => {
                let ci = s.clauses.len();
                s.watches[lits[0]].push(ci);
                s.watches[lits[1]].push(ci);
                s.clauses.push(lits);
            }
        }
    }
    for u in units {
        match s.lit_value(u) {
            0 => return SatResult::Unsat,
            1 => {}
            _ => s.enqueue(u),
        }
    }
    // (trail length before the decision, decided literal, already flipped)
    let mut decisions: Vec<(usize, usize, bool)> = Vec::new();
    let mut next_var = 1;
    let mut steps = 0u64;
    loop {
        steps += 1;
        if steps.is_multiple_of(1024)
            && (deadline.is_some_and(|d| Instant::now() >= d)
                || cancel.is_some_and(|c| c.load(Ordering::Relaxed)))
        {
            return SatResult::Unknown;
        }
        if !s.propagate() {
            loop {
                let Some((len, lit, flipped)) = decisions.pop() else {
                    return SatResult::Unsat;
                };
                s.undo_to(len);
                if !flipped {
                    decisions.push((len, lit ^ 1, true));
                    s.enqueue(lit ^ 1);
                    next_var = 1;
                    break;
                }
            }
            continue;
        }
        while next_var <= n && s.value[next_var] != -1 {
            next_var += 1;
        }
        if next_var > n {
            return SatResult::Sat(s.value.iter().map(|&v| v == 1).collect());
        }
        let lit = 2 * next_var + 1;
        decisions.push((s.trail.len(), lit, false));
        s.enqueue(lit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(cnf: &Cnf, model: &[bool]) -> bool {
        cnf.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| model[l.unsigned_abs() as usize] == (l > 0))
        })
    }

    #[test]
    fn small_instances() {
        let sat = Cnf {
            num_vars: 3,
            clauses: vec![vec![1, 2], vec![-1, 3], vec![-3, -2], vec![2, 3]],
        };
        match solve_cnf(&sat, None, None) {
            SatResult::Sat(m) => assert!(check(&sat, &m)),
            other => panic!("{other:?}"),
        }
        let unsat = Cnf {
            num_vars: 2,
            clauses: vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]],
        };
        assert_eq!(solve_cnf(&unsat, None, None), SatResult::Unsat);
        assert_eq!(
            solve_cnf(
                &Cnf {
                    num_vars: 0,
                    clauses: vec![vec![]]
                },
                None,
                None
            ),
            SatResult::Unsat
        );
    }

    #[test]
    fn pigeonhole_three_into_two() {
        let mut cnf = Cnf::default();
        let v: Vec<Vec<i32>> = (0..3)
            .map(|_| (0..2).map(|_| cnf.new_var()).collect())
            .collect();
        for p in &v {
            cnf.add(p.clone());
        }
        for (a, va) in v.iter().enumerate() {
            for vb in &v[a + 1..] {
                for h in 0..2 {
                    cnf.add(vec![-va[h], -vb[h]]);
                }
            }
        }
        assert_eq!(solve_cnf(&cnf, None, None), SatResult::Unsat);
    }

    proptest::proptest! {
        #[test]
        fn agrees_with_enumeration(clauses in proptest::collection::vec(proptest::collection::vec((1i32..=5, proptest::bool::ANY), 1..4), 0..14)) {
            let cnf = Cnf { num_vars: 5, clauses: clauses.iter().map(|c| c.iter().map(|&(v, s)| if s { v } else { -v }).collect()).collect() };
            let brute = (0u32..32).any(|bits| {
                let m: Vec<bool> = (0..=5).map(|i| i > 0 && bits >> (i - 1) & 1 == 1).collect();
                check(&cnf, &m)
            });
            match solve_cnf(&cnf, None, None) {
                SatResult::Sat(m) => proptest::prop_assert!(brute && check(&cnf, &m)),
                SatResult::Unsat => proptest::prop_assert!(!brute),
                SatResult::Unknown => proptest::prop_assert!(false),
            }
        }
    }
}
