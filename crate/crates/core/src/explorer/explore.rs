use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use super::canonical::canonicalize;
use super::lts::{CanonicalState, Lts, Transition, Truncation};
use crate::semantics::{Config, Label};
use crate::syntax::Model;

pub const DEFAULT_MAX_STATES: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreOptions {
    pub max_states: usize,
    pub max_depth: Option<usize>,
    /// Keep definition unfoldings as `tau` transitions instead of closing
    /// every state under them.
    pub keep_tau: bool,
    pub workers: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            max_states: DEFAULT_MAX_STATES,
            max_depth: None,
            keep_tau: false,
            workers: 1,
        }
    }
}

struct Prepared {
    key: String,
    config: Config,
    diagnostic: Option<String>,
}

fn prepare(config: Config, keep_tau: bool) -> Prepared {
    let (config, diagnostic) = if keep_tau {
        (config, None)
    } else {
        match config.tau_closure() {
            Ok(c) => (c, None),
            Err(e) => (config, Some(format!("unfolding failed: {}", e))),
        }
    };
    let (key, config) = canonicalize(&config);
    Prepared {
        key,
        config,
        diagnostic,
    }
}

struct Expansion {
    successors: Vec<(Label, Prepared)>,
    diagnostics: Vec<String>,
}

fn expand(config: &Config, keep_tau: bool) -> Expansion {
    let ts = config.enabled_transitions();
    Expansion {
        successors: ts
            .steps
            .into_iter()
            .map(|(label, next)| (label, prepare(next, keep_tau)))
            .collect(),
        diagnostics: ts.diagnostics.iter().map(|d| d.to_string()).collect(),
    }
}

struct Builder {
    lts: Lts,
    configs: Vec<Config>,
    index: HashMap<String, usize>,
    seen_edges: HashSet<Transition>,
    seen_diagnostics: HashSet<String>,
}

impl Builder {
    fn diagnostic(&mut self, d: String) {
        if self.seen_diagnostics.insert(d.clone()) {
            self.lts.diagnostics.push(d);
        }
    }

    fn admit(&mut self, p: Prepared) -> usize {
        let index = self.configs.len();
        self.lts.states.push(CanonicalState {
            key: p.key.clone(),
            index,
            term: Some(p.config.term.clone()),
        });
        self.index.insert(p.key, index);
        self.configs.push(p.config);
        index
    }
}

/// Breadth-first exploration of the reachable state space. States are
/// numbered in discovery order, so the result does not depend on `workers`.
pub fn explore(model: &Model, options: &ExploreOptions) -> Lts {
    let pool = (options.workers > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .expect("thread pool")
    });
    let model = Arc::new(model.clone());
    let mut b = Builder {
        lts: Lts {
            names: model.mentioned_names(),
            ..Lts::default()
        },
        configs: Vec::new(),
        index: HashMap::new(),
        seen_edges: HashSet::new(),
        seen_diagnostics: HashSet::new(),
    };
    let init = prepare(Config::initial(Arc::clone(&model)), options.keep_tau);
    if let Some(d) = init.diagnostic.clone() {
        b.diagnostic(d);
    }
    b.admit(init);

    let mut frontier = vec![0usize];
    let mut depth = 0usize;
    'levels: while !frontier.is_empty() {
        let expansions: Vec<Expansion> = match &pool {
            Some(pool) => pool.install(|| {
                frontier
                    .par_iter()
                    .map(|&s| expand(&b.configs[s], options.keep_tau))
                    .collect()
            }),
            None => frontier
                .iter()
                .map(|&s| expand(&b.configs[s], options.keep_tau))
                .collect(),
        };
        if options.max_depth == Some(depth) {
            if expansions.iter().any(|e| !e.successors.is_empty()) {
                b.lts.truncated = Truncation::DepthBound;
            }
            break;
        }
        let mut next = Vec::new();
        for (&src, e) in frontier.iter().zip(expansions) {
            for d in e.diagnostics {
                b.diagnostic(d);
            }
            for (label, p) in e.successors {
                if let Some(d) = p.diagnostic.clone() {
                    b.diagnostic(d);
                }
                let dst = match b.index.get(&p.key) {
                    Some(&i) => i,
                    None => {
                        if b.configs.len() >= options.max_states {
                            b.lts.truncated = Truncation::StateBound;
                            break 'levels;
                        }
                        let i = b.admit(p);
                        next.push(i);
                        i
                    }
                };
                let t = Transition { src, label, dst };
                if b.seen_edges.insert(t.clone()) {
                    b.lts.transitions.push(t);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    b.lts
}
