//! A small conflict-driven clause-learning SAT solver.
//!
//! Two watched literals per clause, first-UIP learning with local clause
//! minimisation, VSIDS branching, phase saving, geometric restarts and
//! activity-based deletion of learnt clauses. The decision loop is
//! single-threaded and uses no randomness, so equal inputs give equal runs.

mod heap;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::cnf::{Assignment, Cnf, CnfError};
use heap::VarHeap;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("malformed clause set: {0}")]
    Malformed(#[from] CnfError),
    #[error("internal error: solver model fails clause {0}")]
    BadModel(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub time: Option<Duration>,
    pub conflicts: Option<u64>,
}

/// Tuning constants. The defaults are the ones every documented run uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub var_decay: f64,
    pub clause_decay: f64,
    /// Conflicts before the first restart.
    pub restart_first: u64,
    /// Growth factor of the restart interval.
    pub restart_growth: f64,
    /// Polarity tried for a variable that has never been assigned.
    pub default_phase: bool,
    /// Initial learnt-clause budget as a fraction of the original clauses.
    pub learnt_fraction: f64,
    pub learnt_growth: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            var_decay: 0.95,
            clause_decay: 0.999,
            restart_first: 100,
            restart_growth: 1.5,
            default_phase: false,
            learnt_fraction: 1.0 / 3.0,
            learnt_growth: 1.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverResult {
    Sat(Assignment),
    Unsat,
    Timeout { elapsed: Duration, conflicts: u64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub result: SolverResult,
    pub stats: SolveStats,
    pub elapsed: Duration,
}

impl SolveOutcome {
    /// Lines in the usual `s ...` / `v ...` solver output convention.
    pub fn to_competition_output(&self) -> String {
        match &self.result {
            SolverResult::Sat(model) => {
                let mut out = String::from("s SATISFIABLE\n");
                for chunk in model.to_literals().chunks(16) {
                    out.push('v');
                    for l in chunk {
                        out.push_str(&format!(" {l}"));
                    }
                    out.push('\n');
                }
                out.push_str("v 0\n");
                out
            }
            SolverResult::Unsat => "s UNSATISFIABLE\n".to_string(),
            SolverResult::Timeout { .. } => "s UNKNOWN\n".to_string(),
        }
    }
}

/// True iff every clause has a literal made true by `model`.
pub fn verify_model(cnf: &Cnf, model: &Assignment) -> bool {
    model.len() >= cnf.num_vars()
        && cnf
            .clauses()
            .iter()
            .all(|c| c.iter().any(|&l| model.lit_value(l)))
}

pub fn solve(cnf: &Cnf, limits: Limits) -> Result<SolveOutcome, SolverError> {
    solve_with(cnf, limits, SolverConfig::default())
}

pub fn solve_with(
    cnf: &Cnf,
    limits: Limits,
    config: SolverConfig,
) -> Result<SolveOutcome, SolverError> {
    let start = Instant::now();
    let mut solver = Solver::new(cnf.num_vars(), config);
    for (i, clause) in cnf.clauses().iter().enumerate() {
        if clause.is_empty() {
            return Err(CnfError::EmptyClause(i).into());
        }
        let mut lits = Vec::with_capacity(clause.len());
        for &l in clause {
            if l == 0 {
                return Err(CnfError::ZeroLiteral.into());
            }
            if l.unsigned_abs() as usize > cnf.num_vars() {
                return Err(CnfError::VarOutOfRange {
                    lit: l,
                    num_vars: cnf.num_vars(),
                }
                .into());
            }
            lits.push(Lit::from_dimacs(l));
        }
        solver.add_clause(lits);
    }
    let deadline = limits.time.map(|t| start + t);
    let result = solver.search(deadline, limits.conflicts);
    let result = match result {
        Status::Sat => {
            let model = Assignment(solver.assigns.iter().map(|&v| v == TRUE).collect());
            if let Some(bad) = cnf
                .clauses()
                .iter()
                .position(|c| !c.iter().any(|&l| model.lit_value(l)))
            {
                return Err(SolverError::BadModel(bad));
            }
            SolverResult::Sat(model)
        }
        Status::Unsat => SolverResult::Unsat,
        Status::Interrupted => SolverResult::Timeout {
            elapsed: start.elapsed(),
            conflicts: solver.stats.conflicts,
        },
    };
    Ok(SolveOutcome {
        result,
        stats: solver.stats,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Lit(u32);

impl Lit {
    fn from_dimacs(l: i32) -> Lit {
        let var = l.unsigned_abs() - 1;
        Lit(var << 1 | (l < 0) as u32)
    }

    #[inline]
    fn new(var: usize, negative: bool) -> Lit {
        Lit((var as u32) << 1 | negative as u32)
    }

    #[inline]
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    fn negative(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const TRUE: i8 = 1;
const FALSE: i8 = -1;
const UNDEF: i8 = 0;

type ClauseRef = u32;

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Clone, Copy)]
struct Watch {
    clause: ClauseRef,
    blocker: Lit,
}

enum Status {
    Sat,
    Unsat,
    Interrupted,
}

struct Solver {
    config: SolverConfig,
    clauses: Vec<Clause>,
    /// `watches[l]` holds clauses watching `!l`; visited when `l` becomes true.
    watches: Vec<Vec<Watch>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    heap: VarHeap,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    var_inc: f64,
    clause_inc: f64,
    num_original: usize,
    num_learnt: usize,
    unsat: bool,
    stats: SolveStats,
}

impl Solver {
    fn new(num_vars: usize, config: SolverConfig) -> Solver {
        let activity = vec![0.0; num_vars];
        let mut heap = VarHeap::new(num_vars);
        for v in 0..num_vars {
            heap.insert(v, &activity);
        }
        Solver {
            config,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            assigns: vec![UNDEF; num_vars],
            level: vec![0; num_vars],
            reason: vec![None; num_vars],
            polarity: vec![config.default_phase; num_vars],
            activity,
            heap,
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: vec![false; num_vars],
            var_inc: 1.0,
            clause_inc: 1.0,
            num_original: 0,
            num_learnt: 0,
            unsat: false,
            stats: SolveStats::default(),
        }
    }

    #[inline]
    fn value(&self, l: Lit) -> i8 {
        let v = self.assigns[l.var()];
        if l.negative() {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds an input clause at level 0.
    fn add_clause(&mut self, mut lits: Vec<Lit>) {
        if self.unsat {
            return;
        }
        lits.sort_unstable_by_key(|l| l.0);
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        self.num_original += 1;
        match lits.len() {
            0 => self.unsat = true,
            1 => match self.value(lits[0]) {
                TRUE => {}
                FALSE => self.unsat = true,
                _ => self.enqueue(lits[0], None),
            },
            _ => {
                self.attach(lits, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> ClauseRef {
        let cref = self.clauses.len() as ClauseRef;
        self.watches[(!lits[0]).index()].push(Watch {
            clause: cref,
            blocker: lits[1],
        });
        self.watches[(!lits[1]).index()].push(Watch {
            clause: cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        cref
    }

    #[inline]
    fn enqueue(&mut self, l: Lit, reason: Option<ClauseRef>) {
        let v = l.var();
        self.assigns[v] = if l.negative() { FALSE } else { TRUE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause if one arises.
    fn propagate(&mut self) -> Option<ClauseRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.index()]);
            let mut i = 0;
            let mut j = 0;
            'watches: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.clause;
                let clause = &mut self.clauses[cref as usize];
                if clause.lits[0] == false_lit {
                    clause.lits.swap(0, 1);
                }
                let first = clause.lits[0];
                let first_value = {
                    let v = self.assigns[first.var()];
                    if first.negative() {
                        -v
                    } else {
                        v
                    }
                };
                if first != w.blocker && first_value == TRUE {
                    ws[j] = Watch {
                        clause: cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                for k in 2..clause.lits.len() {
                    let l = clause.lits[k];
                    let lv = {
                        let v = self.assigns[l.var()];
                        if l.negative() {
                            -v
                        } else {
                            v
                        }
                    };
                    if lv != FALSE {
                        clause.lits.swap(1, k);
                        let new_watch = !clause.lits[1];
                        self.watches[new_watch.index()].push(Watch {
                            clause: cref,
                            blocker: first,
                        });
                        continue 'watches;
                    }
                }
                ws[j] = Watch {
                    clause: cref,
                    blocker: first,
                };
                j += 1;
                if first_value == FALSE {
                    conflict = Some(cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(j);
            self.watches[p.index()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.clause_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.clause_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause, asserting
    /// literal first, and the level to backjump to.
    fn analyze(&mut self, mut conflict: ClauseRef) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            if self.clauses[conflict as usize].learnt {
                self.bump_clause(conflict);
            }
            let skip = usize::from(p.is_some());
            for k in skip..self.clauses[conflict as usize].lits.len() {
                let q = self.clauses[conflict as usize].lits[k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var()] {
                    break;
                }
            }
            let lit = self.trail[index];
            self.seen[lit.var()] = false;
            path -= 1;
            p = Some(lit);
            if path == 0 {
                break;
            }
            conflict = self.reason[lit.var()].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("conflict involves the current level");

        // drop literals implied by the rest of the clause through one reason
        let before = learnt.clone();
        let mut keep = vec![learnt[0]];
        for &q in &learnt[1..] {
            let redundant = match self.reason[q.var()] {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..]
                    .iter()
                    .all(|l| self.seen[l.var()] || self.level[l.var()] == 0),
            };
            if !redundant {
                keep.push(q);
            }
        }
        for l in &before {
            self.seen[l.var()] = false;
        }
        let mut learnt = keep;

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let (max_i, _) = learnt
                .iter()
                .enumerate()
                .skip(1)
                .max_by_key(|(_, l)| self.level[l.var()])
                .expect("at least two literals");
            learnt.swap(1, max_i);
            self.level[learnt[1].var()]
        };
        (learnt, backjump)
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var();
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.polarity[v] = !l.negative();
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                return Some(Lit::new(v, !self.polarity[v]));
            }
        }
        None
    }

    fn locked(&self, cref: ClauseRef) -> bool {
        let first = self.clauses[cref as usize].lits[0];
        self.value(first) == TRUE && self.reason[first.var()] == Some(cref)
    }

    /// Deletes the less active half of the learnt clauses, keeping binary
    /// clauses and current reasons, then rebuilds the watch lists.
    fn reduce_learnts(&mut self) {
        let mut learnts: Vec<ClauseRef> = (0..self.clauses.len() as ClauseRef)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted
            })
            .collect();
        learnts.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .total_cmp(&self.clauses[b as usize].activity)
                .then(a.cmp(&b))
        });
        let half = learnts.len() / 2;
        for &c in &learnts[..half] {
            if self.clauses[c as usize].lits.len() > 2 && !self.locked(c) {
                let cl = &mut self.clauses[c as usize];
                cl.deleted = true;
                cl.lits = Vec::new();
                self.num_learnt -= 1;
            }
        }
        for w in self.watches.iter_mut() {
            w.clear();
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if !c.deleted {
                self.watches[(!c.lits[0]).index()].push(Watch {
                    clause: i as ClauseRef,
                    blocker: c.lits[1],
                });
                self.watches[(!c.lits[1]).index()].push(Watch {
                    clause: i as ClauseRef,
                    blocker: c.lits[0],
                });
            }
        }
    }

    fn search(&mut self, deadline: Option<Instant>, max_conflicts: Option<u64>) -> Status {
        if self.unsat {
            return Status::Unsat;
        }
        let mut restart_interval = self.config.restart_first as f64;
        let mut conflicts_since_restart = 0u64;
        let mut max_learnts = (self.num_original as f64 * self.config.learnt_fraction).max(1000.0);
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_since_restart += 1;
                if self.decision_level() == 0 {
                    return Status::Unsat;
                }
                let (learnt, backjump) = self.analyze(conflict);
                self.cancel_until(backjump);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let asserting = learnt[0];
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref);
                    self.num_learnt += 1;
                    self.stats.learnt_clauses += 1;
                    self.enqueue(asserting, Some(cref));
                }
                self.var_inc /= self.config.var_decay;
                self.clause_inc /= self.config.clause_decay;
                if max_conflicts.is_some_and(|m| self.stats.conflicts >= m)
                    || (self.stats.conflicts.is_multiple_of(64)
                        && deadline.is_some_and(|d| Instant::now() >= d))
                {
                    self.cancel_until(0);
                    return Status::Interrupted;
                }
            } else {
                if conflicts_since_restart as f64 >= restart_interval {
                    self.stats.restarts += 1;
                    conflicts_since_restart = 0;
                    restart_interval *= self.config.restart_growth;
                    max_learnts *= self.config.learnt_growth;
                    self.cancel_until(0);
                }
                if self.num_learnt as f64 >= max_learnts + self.trail.len() as f64 {
                    self.reduce_learnts();
                }
                match self.pick_branch() {
                    None => return Status::Sat,
                    Some(lit) => {
                        self.stats.decisions += 1;
                        if self.stats.decisions.is_multiple_of(1024)
                            && deadline.is_some_and(|d| Instant::now() >= d)
                        {
                            self.cancel_until(0);
                            return Status::Interrupted;
                        }
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(lit, None);
                    }
                }
            }
        }
    }
}
