//! Reference satisfaction by explicit path search over simple paths.
//!
//! Temporal operators are decided per state by depth-first enumeration of
//! paths, with a path that revisits a state standing for the infinite path
//! it closes and a path ending in a deadlock being maximal.

use cows_adapt::explorer::Lts;
use cows_adapt::logic::Formula;

struct Oracle<'a> {
    lts: &'a Lts,
    succ: Vec<Vec<usize>>,
}

impl Oracle<'_> {
    /// Some finite path from `s` stays in `guard` until it hits `target`.
    fn exists_until(&self, s: usize, guard: &[bool], target: &[bool], seen: &mut Vec<bool>) -> bool {
        if target[s] {
            return true;
        }
        if !guard[s] || seen[s] {
            return false;
        }
        seen[s] = true;
        let found = self.succ[s].iter().any(|&d| self.exists_until(d, guard, target, seen));
        seen[s] = false;
        found
    }

    /// Some maximal path from `s` stays in `inside` forever or until a
    /// deadlock, or leaves `inside` through a state in `exit`.
    fn exists_avoiding(&self, s: usize, inside: &[bool], exit: &[bool], on_path: &mut Vec<bool>) -> bool {
        if !inside[s] {
            return exit[s];
        }
        if on_path[s] {
            return true;
        }
        if self.succ[s].is_empty() {
            return true;
        }
        on_path[s] = true;
        let found = self.succ[s].iter().any(|&d| self.exists_avoiding(d, inside, exit, on_path));
        on_path[s] = false;
        found
    }

    fn sat(&self, f: &Formula) -> Vec<bool> {
        let n = self.lts.states.len();
        let fresh = || vec![false; n];
        match f {
            Formula::True => vec![true; n],
            Formula::Not(a) => self.sat(a).iter().map(|b| !b).collect(),
            Formula::And(a, b) => {
                let (x, y) = (self.sat(a), self.sat(b));
                (0..n).map(|s| x[s] && y[s]).collect()
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.sat(a), self.sat(b));
                (0..n).map(|s| x[s] || y[s]).collect()
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.sat(a), self.sat(b));
                (0..n).map(|s| !x[s] || y[s]).collect()
            }
            Formula::Diamond(p, a) => {
                let x = self.sat(a);
                (0..n)
                    .map(|s| {
                        self.lts
                            .transitions
                            .iter()
                            .any(|t| t.src == s && p.matches(&t.label) && x[t.dst])
                    })
                    .collect()
            }
            Formula::Box(p, a) => {
                let x = self.sat(a);
                (0..n)
                    .map(|s| {
                        self.lts
                            .transitions
                            .iter()
                            .all(|t| t.src != s || !p.matches(&t.label) || x[t.dst])
                    })
                    .collect()
            }
            Formula::EF(a) => self.sat(&Formula::eu(Formula::True, (**a).clone())),
            Formula::EU(a, b) => {
                let (g, t) = (self.sat(a), self.sat(b));
                (0..n).map(|s| self.exists_until(s, &g, &t, &mut fresh())).collect()
            }
            Formula::AF(a) => self.sat(&Formula::au(Formula::True, (**a).clone())),
            Formula::AU(a, b) => {
                let (g, t) = (self.sat(a), self.sat(b));
                let inside: Vec<bool> = (0..n).map(|s| g[s] && !t[s]).collect();
                let exit: Vec<bool> = (0..n).map(|s| !g[s] && !t[s]).collect();
                (0..n).map(|s| !self.exists_avoiding(s, &inside, &exit, &mut fresh())).collect()
            }
            Formula::EG(a) => {
                let x = self.sat(a);
                (0..n).map(|s| self.exists_avoiding(s, &x, &fresh(), &mut fresh())).collect()
            }
            Formula::AG(a) => {
                let bad: Vec<bool> = self.sat(a).iter().map(|b| !b).collect();
                (0..n)
                    .map(|s| !self.exists_until(s, &vec![true; n], &bad, &mut fresh()))
                    .collect()
            }
            Formula::Enabled(..) => panic!("oracle works on bare LTSes"),
        }
    }
}

pub fn oracle_sat(lts: &Lts, f: &Formula) -> Vec<bool> {
    let mut succ = vec![Vec::new(); lts.states.len()];
    for t in &lts.transitions {
        succ[t.src].push(t.dst);
    }
    Oracle { lts, succ }.sat(f)
}

pub fn oracle_holds(lts: &Lts, f: &Formula) -> bool {
    oracle_sat(lts, f)[lts.initial]
}
