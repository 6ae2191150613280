use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Identifier used for partners, operations, variables, kill labels and
/// definition names.
///
/// User-written names match `[A-Za-z][A-Za-z0-9_]*`. Names minted by the
/// semantics for private (`#`) delimitations carry a `#<index>` suffix and
/// therefore can never collide with a source-level identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(String);

impl Name {
    /// Builds a source-level name, or `None` if `text` is not a valid identifier.
    pub fn new(text: &str) -> Option<Name> {
        if is_identifier(text) {
            Some(Name(text.to_string()))
        } else {
            None
        }
    }

    /// Builds a name without validation. Panics on invalid identifiers; meant
    /// for literals in code and tests.
    pub fn from_static(text: &str) -> Name {
        Name::new(text).unwrap_or_else(|| panic!("invalid identifier {text:?}"))
    }

    /// A runtime-minted private name.
    pub fn fresh(base: &str, index: usize) -> Name {
        Name(format!("{}#{}", base, index))
    }

    /// Name used when re-importing labels (which may contain minted names).
    pub(crate) fn from_label_text(text: &str) -> Option<Name> {
        let (base, idx) = match text.split_once('#') {
            Some((b, i)) => (b, Some(i)),
            None => (text, None),
        };
        if !is_identifier(base) {
            return None;
        }
        match idx {
            Some(i) if !i.is_empty() && i.bytes().all(|b| b.is_ascii_digit()) => {
                Some(Name(text.to_string()))
            }
            Some(_) => None,
            None => Some(Name(text.to_string())),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Whether this name was minted for a private delimitation.
    pub fn is_fresh(&self) -> bool {
        self.0.contains('#')
    }

    /// The source identifier a minted name was derived from.
    pub fn base(&self) -> &str {
        self.0.split('#').next().unwrap_or(&self.0)
    }

    /// Index of a minted name.
    pub fn fresh_index(&self) -> Option<usize> {
        self.0.split_once('#').and_then(|(_, i)| i.parse().ok())
    }
}

pub(crate) fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Name(Name),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{}", i),
            Value::Name(n) => write!(f, "{}", n),
            Value::Bool(b) => write!(f, "{}", b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Lit(Value),
    Var(Name),
    Gt(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(i: i64) -> Expr {
        Expr::Lit(Value::Int(i))
    }

    pub fn gt(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Gt(Box::new(lhs), Box::new(rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    BindVar(Name),
    MatchVal(Value),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DelimKind {
    /// `[X]` binding a variable filled in by a receive.
    Var,
    /// `[n#]` or an otherwise unused `[n]`: a private name.
    Name,
    /// `[k]` scoping a `kill(k)`.
    Kill,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Nil,
    Invoke {
        partner: Name,
        operation: Name,
        args: Vec<Expr>,
    },
    Receive {
        partner: Name,
        operation: Name,
        params: Vec<Pattern>,
        continuation: Box<Term>,
    },
    Parallel(Vec<Term>),
    /// Every branch is a `Receive`.
    Choice(Vec<Term>),
    Delim {
        bound: Name,
        kind: DelimKind,
        body: Box<Term>,
    },
    Kill(Name),
    Protect(Box<Term>),
    Replicate(Box<Term>),
    Call {
        definition: Name,
        args: Vec<Expr>,
    },
}

impl Term {
    pub fn invoke(partner: &str, operation: &str, args: Vec<Expr>) -> Term {
        Term::Invoke {
            partner: Name::from_static(partner),
            operation: Name::from_static(operation),
            args,
        }
    }

    pub fn receive(partner: &str, operation: &str, params: Vec<Pattern>, continuation: Term) -> Term {
        Term::Receive {
            partner: Name::from_static(partner),
            operation: Name::from_static(operation),
            params,
            continuation: Box::new(continuation),
        }
    }

    pub fn delim(bound: &str, kind: DelimKind, body: Term) -> Term {
        Term::Delim {
            bound: Name::from_static(bound),
            kind,
            body: Box::new(body),
        }
    }

    pub fn protect(body: Term) -> Term {
        Term::Protect(Box::new(body))
    }

    pub fn replicate(body: Term) -> Term {
        Term::Replicate(Box::new(body))
    }

    pub fn kill(label: &str) -> Term {
        Term::Kill(Name::from_static(label))
    }

    pub fn call(definition: &str, args: Vec<Expr>) -> Term {
        Term::Call {
            definition: Name::from_static(definition),
            args,
        }
    }

    /// Every definition name called anywhere in the term.
    pub fn called_definitions(&self, out: &mut Vec<(Name, usize)>) {
        match self {
            Term::Nil | Term::Invoke { .. } | Term::Kill(_) => {}
            Term::Receive { continuation, .. } => continuation.called_definitions(out),
            Term::Parallel(ts) | Term::Choice(ts) => {
                for t in ts {
                    t.called_definitions(out);
                }
            }
            Term::Delim { body, .. } | Term::Protect(body) | Term::Replicate(body) => {
                body.called_definitions(out)
            }
            Term::Call { definition, args } => out.push((definition.clone(), args.len())),
        }
    }

    /// Collects every partner/operation/value name mentioned in the term.
    pub(crate) fn collect_names(&self, out: &mut BTreeSet<Name>) {
        fn expr_names(e: &Expr, out: &mut BTreeSet<Name>) {
            match e {
                Expr::Lit(Value::Name(n)) => {
                    out.insert(n.clone());
                }
                Expr::Lit(_) | Expr::Var(_) => {}
                Expr::Gt(a, b) => {
                    expr_names(a, out);
                    expr_names(b, out);
                }
            }
        }
        match self {
            Term::Nil | Term::Kill(_) => {}
            Term::Invoke {
                partner,
                operation,
                args,
            } => {
                out.insert(partner.clone());
                out.insert(operation.clone());
                args.iter().for_each(|a| expr_names(a, out));
            }
            Term::Receive {
                partner,
                operation,
                params,
                continuation,
            } => {
                out.insert(partner.clone());
                out.insert(operation.clone());
                for p in params {
                    if let Pattern::MatchVal(Value::Name(n)) = p {
                        out.insert(n.clone());
                    }
                }
                continuation.collect_names(out);
            }
            Term::Parallel(ts) | Term::Choice(ts) => ts.iter().for_each(|t| t.collect_names(out)),
            Term::Delim { body, .. } | Term::Protect(body) | Term::Replicate(body) => {
                body.collect_names(out)
            }
            Term::Call { args, .. } => args.iter().for_each(|a| expr_names(a, out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Definition {
    pub params: Vec<Name>,
    pub body: Term,
}

/// A set of named process definitions plus the main term of the `in ... end`
/// block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    pub definitions: BTreeMap<Name, Definition>,
    pub main: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("call to undefined definition `{0}`")]
    UnboundDefinition(Name),
    #[error("definition `{name}` takes {expected} argument(s) but is called with {found}")]
    ArityMismatch {
        name: Name,
        expected: usize,
        found: usize,
    },
    #[error("choice branch is not guarded by a receive")]
    UnguardedChoice,
    #[error("choice needs at least two branches")]
    DegenerateChoice,
    #[error("parallel composition needs at least two components")]
    DegenerateParallel,
    #[error("pattern binds `{0}` more than once")]
    DuplicateBinder(Name),
}

impl Model {
    /// Checks the structural invariants a parsed model satisfies.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut calls = Vec::new();
        self.main.called_definitions(&mut calls);
        for def in self.definitions.values() {
            def.body.called_definitions(&mut calls);
        }
        for (name, argc) in calls {
            let def = self
                .definitions
                .get(&name)
                .ok_or_else(|| ModelError::UnboundDefinition(name.clone()))?;
            if def.params.len() != argc {
                return Err(ModelError::ArityMismatch {
                    name,
                    expected: def.params.len(),
                    found: argc,
                });
            }
        }
        validate_term(&self.main)?;
        for def in self.definitions.values() {
            validate_term(&def.body)?;
        }
        Ok(())
    }

    /// All endpoint and value names mentioned by the model.
    pub fn mentioned_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.main.collect_names(&mut out);
        for def in self.definitions.values() {
            def.body.collect_names(&mut out);
        }
        out
    }
}

fn validate_term(t: &Term) -> Result<(), ModelError> {
    match t {
        Term::Nil | Term::Invoke { .. } | Term::Kill(_) | Term::Call { .. } => Ok(()),
        Term::Receive {
            params,
            continuation,
            ..
        } => {
            let mut seen = BTreeSet::new();
            for p in params {
                if let Pattern::BindVar(x) = p {
                    if !seen.insert(x) {
                        return Err(ModelError::DuplicateBinder(x.clone()));
                    }
                }
            }
            validate_term(continuation)
        }
        Term::Parallel(ts) => {
            if ts.len() < 2 {
                return Err(ModelError::DegenerateParallel);
            }
            ts.iter().try_for_each(validate_term)
        }
        Term::Choice(ts) => {
            if ts.len() < 2 {
                return Err(ModelError::DegenerateChoice);
            }
            if !ts.iter().all(|b| matches!(b, Term::Receive { .. })) {
                return Err(ModelError::UnguardedChoice);
            }
            ts.iter().try_for_each(validate_term)
        }
        Term::Delim { body, .. } | Term::Protect(body) | Term::Replicate(body) => validate_term(body),
    }
}
