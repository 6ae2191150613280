//! Global fixpoint checking over a finite LTS.
//!
//! `AF`, `EF`, `EU` and `AU` are least fixpoints, `AG` and `EG` greatest
//! fixpoints, each computed by backward propagation in rounds. A state with
//! no outgoing transition is the end of a maximal path: it satisfies `AF φ`
//! and `EG φ` only if it satisfies `φ`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::formula::Formula;
use crate::explorer::{import_aut, AutError, Lts};
use crate::semantics::{receive_exposed, Label};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("`enabled` needs state terms, which an imported LTS does not have")]
    EnabledWithoutTerms,
    #[error("malformed .aut: {0}")]
    Aut(#[from] AutError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
        })
    }
}

/// A path from the initial state: each step is a state and the label taken
/// out of it; `end` is where the path stops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<(usize, Label)>,
    pub end: usize,
}

impl Trace {
    /// Whether the path can be replayed in `lts` from its initial state.
    pub fn replays_in(&self, lts: &Lts) -> bool {
        let mut at = lts.initial;
        for (i, (s, label)) in self.steps.iter().enumerate() {
            if *s != at {
                return false;
            }
            let next = self.steps.get(i + 1).map(|n| n.0).unwrap_or(self.end);
            if !lts
                .transitions
                .iter()
                .any(|t| t.src == at && &t.label == label && t.dst == next)
            {
                return false;
            }
            at = next;
        }
        at == self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointStat {
    pub operator: &'static str,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub verdict: Verdict,
    /// Witness when the formula holds, counterexample when it fails.
    pub evidence: Trace,
    /// States satisfying the formula.
    pub satisfying: Vec<usize>,
    pub warnings: Vec<String>,
    pub fixpoints: Vec<FixpointStat>,
}

struct Graph<'a> {
    lts: &'a Lts,
    succ: Vec<Vec<(usize, usize)>>,
    pred: Vec<Vec<usize>>,
    stats: Vec<FixpointStat>,
    cache: HashMap<Formula, Set>,
}

type Set = Vec<bool>;

impl<'a> Graph<'a> {
    fn new(lts: &'a Lts) -> Self {
        let succ = lts.successors();
        let mut pred = vec![Vec::new(); lts.states.len()];
        for t in &lts.transitions {
            pred[t.dst].push(t.src);
        }
        Graph {
            lts,
            succ,
            pred,
            stats: Vec::new(),
            cache: HashMap::new(),
        }
    }

    fn n(&self) -> usize {
        self.lts.states.len()
    }

    fn label(&self, t: usize) -> &Label {
        &self.lts.transitions[t].label
    }

    fn dead(&self, s: usize) -> bool {
        self.succ[s].is_empty()
    }

    /// Least fixpoint `Z = target ∨ (guard ∧ step(Z))` where `step` is
    /// existential or universal; universal steps exclude deadlocks.
    fn until(&mut self, operator: &'static str, guard: &Set, target: &Set, universal: bool) -> Set {
        let n = self.n();
        let mut z = target.clone();
        let mut missing: Vec<usize> = (0..n).map(|s| self.succ[s].len()).collect();
        let mut frontier: Vec<usize> = (0..n).filter(|&s| z[s]).collect();
        let mut rounds = 0;
        while !frontier.is_empty() {
            rounds += 1;
            let mut next = Vec::new();
            for &s in &frontier {
                for &p in &self.pred[s] {
                    if z[p] || !guard[p] {
                        continue;
                    }
                    missing[p] -= 1;
                    if !universal || missing[p] == 0 {
                        z[p] = true;
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        self.stats.push(FixpointStat {
            operator,
            iterations: rounds,
        });
        z
    }

    /// Greatest fixpoint `Z = φ ∧ (dead ∨ EX Z)`.
    fn eg(&mut self, phi: &Set) -> Set {
        let n = self.n();
        let mut z = phi.clone();
        let mut live: Vec<usize> = (0..n)
            .map(|s| self.succ[s].iter().filter(|&&(_, d)| z[d]).count())
            .collect();
        let mut frontier: Vec<usize> = (0..n).filter(|&s| z[s] && !self.dead(s) && live[s] == 0).collect();
        for &s in &frontier {
            z[s] = false;
        }
        let mut rounds = 0;
        while !frontier.is_empty() {
            rounds += 1;
            let mut next = Vec::new();
            for &s in &frontier {
                for &p in &self.pred[s] {
                    if !z[p] {
                        continue;
                    }
                    live[p] -= 1;
                    if live[p] == 0 {
                        z[p] = false;
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        self.stats.push(FixpointStat {
            operator: "EG",
            iterations: rounds,
        });
        z
    }

    fn sat(&mut self, f: &Formula) -> Result<Set, CheckError> {
        if let Some(s) = self.cache.get(f) {
            return Ok(s.clone());
        }
        let s = self.compute(f)?;
        self.cache.insert(f.clone(), s.clone());
        Ok(s)
    }

    fn compute(&mut self, f: &Formula) -> Result<Set, CheckError> {
        let n = self.n();
        Ok(match f {
            Formula::True => vec![true; n],
            Formula::Enabled(p, o) => {
                let mut out = Vec::with_capacity(n);
                for st in &self.lts.states {
                    let term = st.term.as_ref().ok_or(CheckError::EnabledWithoutTerms)?;
                    out.push(receive_exposed(term, p, o));
                }
                out
            }
            Formula::Not(a) => self.sat(a)?.into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => zip(&self.sat(a)?, &self.sat(b)?, |x, y| x && y),
            Formula::Or(a, b) => zip(&self.sat(a)?, &self.sat(b)?, |x, y| x || y),
            Formula::Implies(a, b) => zip(&self.sat(a)?, &self.sat(b)?, |x, y| !x || y),
            Formula::Diamond(pat, a) => {
                let inner = self.sat(a)?;
                (0..n)
                    .map(|s| {
                        self.succ[s]
                            .iter()
                            .any(|&(t, d)| pat.matches(self.label(t)) && inner[d])
                    })
                    .collect()
            }
            Formula::Box(pat, a) => {
                let inner = self.sat(a)?;
                (0..n)
                    .map(|s| {
                        self.succ[s]
                            .iter()
                            .all(|&(t, d)| !pat.matches(self.label(t)) || inner[d])
                    })
                    .collect()
            }
            Formula::EF(a) => {
                let target = self.sat(a)?;
                self.until("EF", &vec![true; n], &target, false)
            }
            Formula::AF(a) => {
                let target = self.sat(a)?;
                self.until("AF", &vec![true; n], &target, true)
            }
            Formula::EU(a, b) => {
                let guard = self.sat(a)?;
                let target = self.sat(b)?;
                self.until("EU", &guard, &target, false)
            }
            Formula::AU(a, b) => {
                let guard = self.sat(a)?;
                let target = self.sat(b)?;
                self.until("AU", &guard, &target, true)
            }
            Formula::EG(a) => {
                let inner = self.sat(a)?;
                self.eg(&inner)
            }
            Formula::AG(a) => {
                let bad: Set = self.sat(a)?.into_iter().map(|b| !b).collect();
                self.until("AG", &vec![true; n], &bad, false)
                    .into_iter()
                    .map(|b| !b)
                    .collect()
            }
        })
    }

    /// Shortest path from `from` through `guard` states to a `target` state.
    fn shortest(&self, from: usize, guard: &Set, target: &Set) -> Option<(Vec<(usize, Label)>, usize)> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.n()];
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(s) = queue.pop_front() {
            if target[s] {
                let mut steps = Vec::new();
                let mut at = s;
                while let Some((p, t)) = parent[at] {
                    steps.push((p, self.label(t).clone()));
                    at = p;
                }
                steps.reverse();
                return Some((steps, s));
            }
            if !guard[s] {
                continue;
            }
            for &(t, d) in &self.succ[s] {
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some((s, t));
                    queue.push_back(d);
                }
            }
        }
        None
    }

    /// Follows successors inside `set` while the current state is in `cont`,
    /// until a deadlock or a repeated state.
    fn walk(&self, from: usize, set: &Set, cont: &Set) -> (Vec<(usize, Label)>, usize) {
        let mut steps = Vec::new();
        let mut visited = HashSet::from([from]);
        let mut at = from;
        while cont[at] {
            let Some(&(t, d)) = self.succ[at].iter().find(|&&(_, d)| set[d]) else {
                break;
            };
            steps.push((at, self.label(t).clone()));
            at = d;
            if !visited.insert(d) {
                break;
            }
        }
        (steps, at)
    }

    fn explain_from(
        &mut self,
        mut prefix: Vec<(usize, Label)>,
        at: usize,
        f: &Formula,
        holds: bool,
    ) -> Result<(Vec<(usize, Label)>, usize), CheckError> {
        let (rest, end) = self.explain(at, f, holds)?;
        prefix.extend(rest);
        Ok((prefix, end))
    }

    /// Path fragment from `s` explaining why `s` satisfies `f` (`holds`) or
    /// why it does not. Witnesses stop where the existential claim is met;
    /// counterexamples continue into the failing subformula.
    fn explain(&mut self, s: usize, f: &Formula, holds: bool) -> Result<(Vec<(usize, Label)>, usize), CheckError> {
        let all = vec![true; self.n()];
        match (f, holds) {
            (Formula::Not(a), _) => self.explain(s, a, !holds),
            (Formula::Or(a, b), true) => {
                let sub = if self.sat(a)?[s] { a } else { b };
                self.explain(s, sub, true)
            }
            (Formula::Or(a, _), false) => self.explain(s, a, false),
            (Formula::And(a, b), false) => {
                let sub = if self.sat(a)?[s] { b } else { a };
                self.explain(s, sub, false)
            }
            (Formula::Implies(a, b), true) => {
                if self.sat(a)?[s] {
                    self.explain(s, b, true)
                } else {
                    self.explain(s, a, false)
                }
            }
            (Formula::Implies(_, b), false) => self.explain(s, b, false),
            (Formula::Diamond(pat, a), true) => {
                let inner = self.sat(a)?;
                let &(t, d) = self.succ[s]
                    .iter()
                    .find(|&&(t, d)| pat.matches(self.label(t)) && inner[d])
                    .expect("diamond witness");
                Ok((vec![(s, self.label(t).clone())], d))
            }
            (Formula::Box(pat, a), false) => {
                let inner = self.sat(a)?;
                let &(t, d) = self.succ[s]
                    .iter()
                    .find(|&&(t, d)| pat.matches(self.label(t)) && !inner[d])
                    .expect("box counterexample");
                self.explain_from(vec![(s, self.label(t).clone())], d, a, false)
            }
            (Formula::EF(a), true) => {
                let target = self.sat(a)?;
                Ok(self.shortest(s, &all, &target).expect("EF witness"))
            }
            (Formula::EU(a, b), true) => {
                let guard = self.sat(a)?;
                let target = self.sat(b)?;
                Ok(self.shortest(s, &guard, &target).expect("EU witness"))
            }
            (Formula::AG(a), false) => {
                let bad: Set = self.sat(a)?.into_iter().map(|b| !b).collect();
                let (steps, at) = self.shortest(s, &all, &bad).expect("AG counterexample");
                self.explain_from(steps, at, a, false)
            }
            (Formula::EG(_), true) => {
                let set = self.sat(f)?;
                Ok(self.walk(s, &set, &all))
            }
            (Formula::AF(a), false) => {
                let set = self.sat(&Formula::eg(Formula::not((**a).clone())))?;
                Ok(self.walk(s, &set, &all))
            }
            (Formula::EF(_), false) => {
                let set: Set = self.sat(f)?.into_iter().map(|b| !b).collect();
                Ok(self.walk(s, &set, &all))
            }
            (Formula::AU(a, _), false) => {
                let set: Set = self.sat(f)?.into_iter().map(|b| !b).collect();
                let guard = self.sat(a)?;
                Ok(self.walk(s, &set, &guard))
            }
            _ => Ok((Vec::new(), s)),
        }
    }
}

fn zip(a: &Set, b: &Set, op: impl Fn(bool, bool) -> bool) -> Set {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

pub fn check(lts: &Lts, f: &Formula) -> Result<CheckResult, CheckError> {
    let mut warnings = Vec::new();
    if lts.is_truncated() {
        warnings.push(format!(
            "state space truncated ({}); verdict may be unsound",
            lts.truncated
        ));
    }
    for name in f.mentioned_names() {
        if !lts.names.contains(&name) && !lts.names.iter().any(|n| n.is_fresh() && n.base() == name.base()) {
            warnings.push(format!("name `{}` does not occur in the model", name));
        }
    }
    let mut g = Graph::new(lts);
    let sat = g.sat(f)?;
    let verdict = if sat[lts.initial] { Verdict::Holds } else { Verdict::Fails };
    let (steps, end) = g.explain(lts.initial, f, verdict == Verdict::Holds)?;
    Ok(CheckResult {
        verdict,
        evidence: Trace { steps, end },
        satisfying: (0..sat.len()).filter(|&s| sat[s]).collect(),
        warnings,
        fixpoints: g.stats,
    })
}

/// Checks a formula against an LTS read from `.aut` text.
pub fn check_from_aut(aut: &str, f: &Formula) -> Result<CheckResult, CheckError> {
    if f.uses_enabled() {
        return Err(CheckError::EnabledWithoutTerms);
    }
    check(&import_aut(aut)?, f)
}
