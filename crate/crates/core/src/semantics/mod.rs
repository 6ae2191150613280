//! Small-step operational semantics.
//!
//! A [`Config`] is a closed term together with the definitions it may call.
//! Private-name delimitations in active position are replaced by globally
//! fresh names as soon as they become active, so communication only needs to
//! compare endpoint names. Successors are returned in normal form
//! ([`normalize::simplify`] followed by private-name lifting); definition
//! calls are unfolded by `Tau` steps unless [`Config::tau_closure`] has
//! expanded them already.

mod eval;
pub mod normalize;
mod step;
mod subst;

use std::fmt;
use std::sync::Arc;

pub use eval::{eval_expr, match_patterns, Env, EvalError, MatchResult};
pub use step::receive_exposed;
pub use subst::{apply_substitution, Bindings};

use crate::syntax::{Model, Name, Term, Value};

/// Observable transition label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Comm {
        partner: Name,
        operation: Name,
        values: Vec<Value>,
    },
    Kill(Name),
    Tau,
}

impl Label {
    pub fn comm(partner: &str, operation: &str, values: Vec<Value>) -> Label {
        Label::Comm {
            partner: Name::from_static(partner),
            operation: Name::from_static(operation),
            values,
        }
    }
}

/// Renders as used in `.aut` files: `comm:p.o<v1,...>`, `kill:k` or `tau`.
impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Comm {
                partner,
                operation,
                values,
            } => {
                write!(f, "comm:{}.{}<", partner, operation)?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", v)?;
                }
                f.write_str(">")
            }
            Label::Kill(k) => write!(f, "kill:{}", k),
            Label::Tau => f.write_str("tau"),
        }
    }
}

/// An expression that could not be evaluated while computing transitions.
/// The offending pair or call contributes no transition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StuckExpr {
    pub culprit: String,
    pub error: EvalError,
}

impl fmt::Display for StuckExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stuck expression in `{}`: {}", self.culprit, self.error)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Transitions {
    pub steps: Vec<(Label, Config)>,
    pub diagnostics: Vec<StuckExpr>,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub model: Arc<Model>,
    pub term: Term,
    /// Next index for minted private names.
    pub fresh_counter: usize,
}

impl PartialEq for Config {
    fn eq(&self, other: &Config) -> bool {
        self.term == other.term && self.fresh_counter == other.fresh_counter
    }
}

impl Eq for Config {}

impl Config {
    /// Configuration of the model's main term, in normal form.
    pub fn initial(model: Arc<Model>) -> Config {
        let term = model.main.clone();
        Config::from_term(model, term)
    }

    /// Wraps an arbitrary closed term, normalizing it.
    pub fn from_term(model: Arc<Model>, term: Term) -> Config {
        let seed = Config {
            model,
            term: Term::Nil,
            fresh_counter: 0,
        };
        seed.successor(term)
    }

    /// Normal form of a term reached from this configuration; private names
    /// it activates are numbered after the ones already minted.
    pub fn successor(&self, term: Term) -> Config {
        let mut counter = self.fresh_counter;
        let term = normalize::lift_private(&normalize::simplify(&term), &mut counter);
        let term = normalize::simplify(&term);
        Config {
            model: Arc::clone(&self.model),
            term,
            fresh_counter: counter,
        }
    }

    /// Unfolds every active definition call.
    pub fn tau_closure(&self) -> Result<Config, EvalError> {
        let expanded = normalize::expand_calls(&self.model, &self.term)?;
        Ok(self.successor(expanded))
    }

    pub fn enabled_transitions(&self) -> Transitions {
        step::enabled_transitions(self)
    }
}

/// All one-step successors of `c`.
pub fn enabled_transitions(c: &Config) -> Transitions {
    c.enabled_transitions()
}
