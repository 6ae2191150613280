//! Seeded random generators for terms, models, LTSes and formulas.

use std::collections::BTreeMap;

use cows_adapt::explorer::{CanonicalState, Lts, Transition, Truncation};
use cows_adapt::logic::{ActionPattern, ArgsPat, Formula, NamePat, ValuePat};
use cows_adapt::semantics::Label;
use cows_adapt::syntax::scope::resolve_model;
use cows_adapt::syntax::{DelimKind, Definition, Expr, Model, Name, Pattern, Term, Value};
use rand::seq::SliceRandom;
use rand::Rng;

const OPERATIONS: [&str; 2] = ["o", "p"];
const VARS: [&str; 3] = ["X", "Y", "Z"];
const KILLS: [&str; 2] = ["k", "h"];
const PRIVATE: [&str; 2] = ["n", "m"];

#[derive(Clone, Debug)]
pub struct TermConfig {
    pub replication: bool,
    /// Definitions that may be called, with their arity.
    pub calls: Vec<(String, usize)>,
    pub max_components: usize,
    pub max_depth: usize,
}

impl TermConfig {
    pub fn replication_free() -> Self {
        TermConfig {
            replication: false,
            calls: Vec::new(),
            max_components: 4,
            max_depth: 3,
        }
    }
}

fn name(s: &str) -> Name {
    Name::from_static(s)
}

fn value(rng: &mut impl Rng) -> Value {
    match rng.gen_range(0..4) {
        0 | 1 => Value::Int(rng.gen_range(0..3)),
        2 => Value::Bool(rng.gen()),
        _ => Value::Name(name(["a", "b", "n", "m"].choose(rng).unwrap())),
    }
}

fn expr(rng: &mut impl Rng, scope: &[String], depth: usize) -> Expr {
    match rng.gen_range(0..6) {
        0 if depth > 0 => Expr::gt(expr(rng, scope, depth - 1), expr(rng, scope, depth - 1)),
        1 | 2 if !scope.is_empty() => Expr::Lit(Value::Name(name(scope.choose(rng).unwrap()))),
        _ => Expr::Lit(value(rng)),
    }
}

fn endpoint(rng: &mut impl Rng, scope: &[String]) -> (Name, Name) {
    let partner = if !scope.is_empty() && rng.gen_bool(0.15) {
        name(scope.choose(rng).unwrap())
    } else {
        name(["a", "b", "n"].choose(rng).unwrap())
    };
    (partner, name(OPERATIONS.choose(rng).unwrap()))
}

fn params(rng: &mut impl Rng, scope: &[String]) -> Vec<Pattern> {
    let n = rng.gen_range(0..=2);
    let mut used = Vec::new();
    (0..n)
        .map(|_| {
            if !scope.is_empty() && rng.gen_bool(0.5) {
                let v = scope.choose(rng).unwrap().clone();
                if used.contains(&v) {
                    Pattern::MatchVal(value(rng))
                } else {
                    used.push(v.clone());
                    Pattern::MatchVal(Value::Name(name(&v)))
                }
            } else {
                Pattern::MatchVal(value(rng))
            }
        })
        .collect()
}

fn receive(rng: &mut impl Rng, cfg: &TermConfig, scope: &mut Vec<String>, depth: usize) -> Term {
    let (partner, operation) = endpoint(rng, scope);
    let params = params(rng, scope);
    let continuation = if depth == 0 || rng.gen_bool(0.3) {
        Term::Nil
    } else {
        process(rng, cfg, scope, depth - 1)
    };
    Term::Receive {
        partner,
        operation,
        params,
        continuation: Box::new(continuation),
    }
}

fn process(rng: &mut impl Rng, cfg: &TermConfig, scope: &mut Vec<String>, depth: usize) -> Term {
    let top = if depth == 0 { 4 } else { 11 };
    match rng.gen_range(0..top) {
        0 | 1 => {
            let (partner, operation) = endpoint(rng, scope);
            let n = rng.gen_range(0..=2);
            Term::Invoke {
                partner,
                operation,
                args: (0..n).map(|_| expr(rng, scope, 1)).collect(),
            }
        }
        2 => Term::Kill(name(KILLS.choose(rng).unwrap())),
        3 => receive(rng, cfg, scope, depth),
        4 => {
            let n = rng.gen_range(2..=3);
            Term::Choice((0..n).map(|_| receive(rng, cfg, scope, depth - 1)).collect())
        }
        5 | 6 => {
            let (bound, kind) = match rng.gen_range(0..3) {
                0 => (VARS.choose(rng).unwrap().to_string(), DelimKind::Var),
                1 => (KILLS.choose(rng).unwrap().to_string(), DelimKind::Kill),
                _ => (PRIVATE.choose(rng).unwrap().to_string(), DelimKind::Name),
            };
            if kind == DelimKind::Var {
                scope.push(bound.clone());
            }
            let body = process(rng, cfg, scope, depth - 1);
            if kind == DelimKind::Var {
                scope.pop();
            }
            Term::Delim {
                bound: name(&bound),
                kind,
                body: Box::new(body),
            }
        }
        7 => Term::Protect(Box::new(process(rng, cfg, scope, depth - 1))),
        8 => {
            let n = rng.gen_range(2..=3);
            Term::Parallel((0..n).map(|_| component(rng, cfg, scope, depth - 1)).collect())
        }
        9 if cfg.replication => Term::Replicate(Box::new(process(rng, cfg, scope, depth - 1))),
        10 if !cfg.calls.is_empty() => {
            let (def, arity) = cfg.calls.choose(rng).unwrap().clone();
            Term::Call {
                definition: name(&def),
                args: (0..arity).map(|_| expr(rng, scope, 1)).collect(),
            }
        }
        _ => receive(rng, cfg, scope, depth),
    }
}

/// A process that is not itself a parallel composition.
fn component(rng: &mut impl Rng, cfg: &TermConfig, scope: &mut Vec<String>, depth: usize) -> Term {
    loop {
        let t = process(rng, cfg, scope, depth);
        if !matches!(t, Term::Parallel(_)) {
            return t;
        }
    }
}

fn raw_main(rng: &mut impl Rng, cfg: &TermConfig) -> Term {
    let n = rng.gen_range(1..=cfg.max_components);
    let mut ts: Vec<Term> = (0..n).map(|_| component(rng, cfg, &mut Vec::new(), cfg.max_depth)).collect();
    if ts.len() == 1 {
        ts.pop().unwrap()
    } else {
        Term::Parallel(ts)
    }
}

/// A validated model without definitions whose main term has at most
/// `cfg.max_components` parallel components.
pub fn random_main_model(rng: &mut impl Rng, cfg: &TermConfig) -> Model {
    loop {
        let model = resolve_model(Model {
            definitions: BTreeMap::new(),
            main: raw_main(rng, cfg),
        });
        if model.validate().is_ok() {
            return model;
        }
    }
}

/// A validated model with definitions, replication and calls.
pub fn random_model(rng: &mut impl Rng) -> Model {
    loop {
        let ndefs = rng.gen_range(0..=2);
        let defs: Vec<(String, usize)> = (0..ndefs).map(|i| (format!("f{}", i), rng.gen_range(0..=2))).collect();
        let cfg = TermConfig {
            replication: true,
            calls: defs.clone(),
            max_components: 3,
            max_depth: 3,
        };
        let mut definitions = BTreeMap::new();
        for (def, arity) in &defs {
            let ps: Vec<String> = VARS[..*arity].iter().map(|s| s.to_string()).collect();
            let mut scope = ps.clone();
            let body = process(rng, &cfg, &mut scope, 2);
            definitions.insert(
                name(def),
                Definition {
                    params: ps.iter().map(|p| name(p)).collect(),
                    body,
                },
            );
        }
        let model = resolve_model(Model {
            definitions,
            main: raw_main(rng, &cfg),
        });
        if model.validate().is_ok() {
            return model;
        }
    }
}

pub const ALPHABET: [&str; 3] = ["comm:a.b<>", "comm:a.c<>", "comm:b.b<1>"];

pub fn alphabet_label(i: usize) -> Label {
    match i {
        0 => Label::comm("a", "b", vec![]),
        1 => Label::comm("a", "c", vec![]),
        _ => Label::comm("b", "b", vec![Value::Int(1)]),
    }
}

/// At most 8 states and 16 distinct transitions over a three-label alphabet.
pub fn random_lts(rng: &mut impl Rng) -> Lts {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(0..=16);
    let mut transitions: Vec<Transition> = Vec::new();
    for _ in 0..m {
        let t = Transition {
            src: rng.gen_range(0..n),
            label: alphabet_label(rng.gen_range(0..3)),
            dst: rng.gen_range(0..n),
        };
        if !transitions.contains(&t) {
            transitions.push(t);
        }
    }
    Lts {
        states: (0..n)
            .map(|i| CanonicalState {
                key: i.to_string(),
                index: i,
                term: None,
            })
            .collect(),
        initial: 0,
        transitions,
        truncated: Truncation::None,
        diagnostics: Vec::new(),
        names: ["a", "b", "c"].iter().map(|s| name(s)).collect(),
    }
}

pub fn random_pattern(rng: &mut impl Rng) -> ActionPattern {
    let np = |rng: &mut _, s: &str| {
        if Rng::gen_bool(rng, 0.25) {
            NamePat::Any
        } else {
            NamePat::Is(name(s))
        }
    };
    let p = *["a", "b"].choose(rng).unwrap();
    let o = *["b", "c"].choose(rng).unwrap();
    let partner = np(rng, p);
    let operation = np(rng, o);
    let values = match rng.gen_range(0..4) {
        0 | 1 => ArgsPat::Any,
        2 => ArgsPat::List(vec![]),
        _ => ArgsPat::List(vec![if rng.gen_bool(0.5) {
            ValuePat::Any
        } else {
            ValuePat::Is(Value::Int(rng.gen_range(0..2)))
        }]),
    };
    ActionPattern {
        partner,
        operation,
        values,
    }
}

/// Formula of depth at most `depth`, without `enabled`.
pub fn random_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 {
        return if rng.gen_bool(0.5) {
            Formula::True
        } else {
            Formula::not(Formula::True)
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..14) {
        0 => Formula::True,
        1 => Formula::not(random_formula(rng, d)),
        2 => Formula::and(random_formula(rng, d), random_formula(rng, d)),
        3 => Formula::or(random_formula(rng, d), random_formula(rng, d)),
        4 => Formula::implies(random_formula(rng, d), random_formula(rng, d)),
        5 => Formula::diamond(random_pattern(rng), random_formula(rng, d)),
        6 => Formula::boxed(random_pattern(rng), random_formula(rng, d)),
        7 => Formula::ef(random_formula(rng, d)),
        8 => Formula::af(random_formula(rng, d)),
        9 => Formula::eg(random_formula(rng, d)),
        10 => Formula::ag(random_formula(rng, d)),
        11 => Formula::eu(random_formula(rng, d), random_formula(rng, d)),
        12 => Formula::au(random_formula(rng, d), random_formula(rng, d)),
        _ => Formula::diamond(ActionPattern::any(), random_formula(rng, d)),
    }
}
