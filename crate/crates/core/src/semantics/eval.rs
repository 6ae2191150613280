use std::collections::BTreeMap;

use crate::syntax::{Expr, Name, Pattern, Value};

pub type Env = BTreeMap<Name, Value>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(Name),
    #[error("`gt` expects integers, got `{lhs}` and `{rhs}`")]
    NotAnInteger { lhs: Value, rhs: Value },
    #[error("variable `{var}` is used as an endpoint but holds `{value}`")]
    NotAName { var: Name, value: Value },
    #[error("call to undefined definition `{0}`")]
    UnboundDefinition(Name),
    #[error("definition `{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: Name,
        expected: usize,
        found: usize,
    },
    #[error("unguarded recursion while unfolding `{0}`")]
    UnguardedRecursion(Name),
}

pub fn eval_expr(e: &Expr, env: &Env) -> Result<Value, EvalError> {
    match e {
        Expr::Lit(v) => Ok(v.clone()),
        Expr::Var(x) => env.get(x).cloned().ok_or_else(|| EvalError::Unbound(x.clone())),
        Expr::Gt(a, b) => match (eval_expr(a, env)?, eval_expr(b, env)?) {
            (Value::Int(l), Value::Int(r)) => Ok(Value::Bool(l > r)),
            (lhs, rhs) => Err(EvalError::NotAnInteger { lhs, rhs }),
        },
    }
}

/// Outcome of matching a receive's patterns against an invoke's values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub bindings: BTreeMap<Name, Value>,
    /// Number of literal positions that matched; higher wins when receives
    /// compete for the same invoke.
    pub literal_matches: usize,
}

pub fn match_patterns(patterns: &[Pattern], values: &[Value]) -> Option<MatchResult> {
    if patterns.len() != values.len() {
        return None;
    }
    let mut result = MatchResult {
        bindings: BTreeMap::new(),
        literal_matches: 0,
    };
    for (p, v) in patterns.iter().zip(values) {
        match p {
            Pattern::MatchVal(lit) if lit == v => result.literal_matches += 1,
            Pattern::MatchVal(_) => return None,
            Pattern::BindVar(x) => {
                if result.bindings.insert(x.clone(), v.clone()).is_some() {
                    return None;
                }
            }
        }
    }
    Some(result)
}
