use std::collections::BTreeSet;
use std::fmt;

use crate::semantics::Label;
use crate::syntax::{Name, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NamePat {
    Any,
    Is(Name),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValuePat {
    Any,
    Is(Value),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArgsPat {
    /// `<*>`: any number of values.
    Any,
    List(Vec<ValuePat>),
}

/// Filter on communication labels. Kill and `tau` labels never match.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionPattern {
    pub partner: NamePat,
    pub operation: NamePat,
    pub values: ArgsPat,
}

impl ActionPattern {
    pub fn endpoint(partner: &str, operation: &str) -> ActionPattern {
        ActionPattern {
            partner: NamePat::Is(Name::from_static(partner)),
            operation: NamePat::Is(Name::from_static(operation)),
            values: ArgsPat::Any,
        }
    }

    pub fn any() -> ActionPattern {
        ActionPattern {
            partner: NamePat::Any,
            operation: NamePat::Any,
            values: ArgsPat::Any,
        }
    }

    pub fn matches(&self, label: &Label) -> bool {
        let Label::Comm {
            partner,
            operation,
            values,
        } = label
        else {
            return false;
        };
        let name_ok = |p: &NamePat, n: &Name| match p {
            NamePat::Any => true,
            NamePat::Is(m) => m == n,
        };
        name_ok(&self.partner, partner)
            && name_ok(&self.operation, operation)
            && match &self.values {
                ArgsPat::Any => true,
                ArgsPat::List(ps) => {
                    ps.len() == values.len()
                        && ps.iter().zip(values).all(|(p, v)| match p {
                            ValuePat::Any => true,
                            ValuePat::Is(w) => w == v,
                        })
                }
            }
    }

    /// Whether every label matched by `other` is matched by `self`.
    pub fn subsumes(&self, other: &ActionPattern) -> bool {
        let name = |a: &NamePat, b: &NamePat| matches!(a, NamePat::Any) || a == b;
        let value = |a: &ValuePat, b: &ValuePat| matches!(a, ValuePat::Any) || a == b;
        name(&self.partner, &other.partner)
            && name(&self.operation, &other.operation)
            && match (&self.values, &other.values) {
                (ArgsPat::Any, _) => true,
                (ArgsPat::List(_), ArgsPat::Any) => false,
                (ArgsPat::List(a), ArgsPat::List(b)) => {
                    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| value(x, y))
                }
            }
    }

    pub(crate) fn names(&self, out: &mut BTreeSet<Name>) {
        for p in [&self.partner, &self.operation] {
            if let NamePat::Is(n) = p {
                out.insert(n.clone());
            }
        }
        if let ArgsPat::List(ps) = &self.values {
            for p in ps {
                if let ValuePat::Is(Value::Name(n)) = p {
                    out.insert(n.clone());
                }
            }
        }
    }
}

impl fmt::Display for ActionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |p: &NamePat| match p {
            NamePat::Any => "*".to_string(),
            NamePat::Is(n) => n.to_string(),
        };
        write!(f, "{}.{}<", name(&self.partner), name(&self.operation))?;
        match &self.values {
            ArgsPat::Any => f.write_str("*")?,
            ArgsPat::List(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    match p {
                        ValuePat::Any => f.write_str("_")?,
                        ValuePat::Is(v) => write!(f, "{}", v)?,
                    }
                }
            }
        }
        f.write_str(">")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Diamond(ActionPattern, Box<Formula>),
    Box(ActionPattern, Box<Formula>),
    EF(Box<Formula>),
    AF(Box<Formula>),
    EG(Box<Formula>),
    AG(Box<Formula>),
    EU(Box<Formula>, Box<Formula>),
    AU(Box<Formula>, Box<Formula>),
    Enabled(Name, Name),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn diamond(p: ActionPattern, f: Formula) -> Formula {
        Formula::Diamond(p, Box::new(f))
    }
    pub fn boxed(p: ActionPattern, f: Formula) -> Formula {
        Formula::Box(p, Box::new(f))
    }
    pub fn ef(f: Formula) -> Formula {
        Formula::EF(Box::new(f))
    }
    pub fn af(f: Formula) -> Formula {
        Formula::AF(Box::new(f))
    }
    pub fn eg(f: Formula) -> Formula {
        Formula::EG(Box::new(f))
    }
    pub fn ag(f: Formula) -> Formula {
        Formula::AG(Box::new(f))
    }
    pub fn eu(a: Formula, b: Formula) -> Formula {
        Formula::EU(Box::new(a), Box::new(b))
    }
    pub fn au(a: Formula, b: Formula) -> Formula {
        Formula::AU(Box::new(a), Box::new(b))
    }
    pub fn enabled(partner: &str, operation: &str) -> Formula {
        Formula::Enabled(Name::from_static(partner), Name::from_static(operation))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::Enabled(..) => 0,
            Formula::Not(a)
            | Formula::Diamond(_, a)
            | Formula::Box(_, a)
            | Formula::EF(a)
            | Formula::AF(a)
            | Formula::EG(a)
            | Formula::AG(a) => 1 + a.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::EU(a, b)
            | Formula::AU(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn uses_enabled(&self) -> bool {
        match self {
            Formula::True => false,
            Formula::Enabled(..) => true,
            Formula::Not(a)
            | Formula::Diamond(_, a)
            | Formula::Box(_, a)
            | Formula::EF(a)
            | Formula::AF(a)
            | Formula::EG(a)
            | Formula::AG(a) => a.uses_enabled(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::EU(a, b)
            | Formula::AU(a, b) => a.uses_enabled() || b.uses_enabled(),
        }
    }

    /// Names written in action patterns and `enabled` predicates.
    pub fn mentioned_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::True => {}
            Formula::Enabled(p, o) => {
                out.insert(p.clone());
                out.insert(o.clone());
            }
            Formula::Diamond(p, a) | Formula::Box(p, a) => {
                p.names(out);
                a.collect_names(out);
            }
            Formula::Not(a) | Formula::EF(a) | Formula::AF(a) | Formula::EG(a) | Formula::AG(a) => {
                a.collect_names(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::EU(a, b)
            | Formula::AU(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }
}

const IMPLIES: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

fn write_at(f: &mut fmt::Formatter<'_>, phi: &Formula, level: u8) -> fmt::Result {
    let own = match phi {
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    };
    if own < level {
        f.write_str("(")?;
        write_at(f, phi, IMPLIES)?;
        return f.write_str(")");
    }
    match phi {
        Formula::True => f.write_str("true"),
        Formula::Not(a) if **a == Formula::True => f.write_str("false"),
        Formula::Not(a) => {
            f.write_str("!")?;
            write_at(f, a, UNARY)
        }
        Formula::Implies(a, b) => {
            write_at(f, a, OR)?;
            f.write_str(" -> ")?;
            write_at(f, b, IMPLIES)
        }
        Formula::Or(a, b) => {
            write_at(f, a, OR)?;
            f.write_str(" | ")?;
            write_at(f, b, AND)
        }
        Formula::And(a, b) => {
            write_at(f, a, AND)?;
            f.write_str(" & ")?;
            write_at(f, b, UNARY)
        }
        Formula::Diamond(p, a) => {
            write!(f, "<{}>", p)?;
            write_at(f, a, UNARY)
        }
        Formula::Box(p, a) => {
            write!(f, "[{}] ", p)?;
            write_at(f, a, UNARY)
        }
        Formula::EF(a) | Formula::AF(a) | Formula::EG(a) | Formula::AG(a) => {
            let op = match phi {
                Formula::EF(_) => "EF",
                Formula::AF(_) => "AF",
                Formula::EG(_) => "EG",
                _ => "AG",
            };
            write!(f, "{}(", op)?;
            write_at(f, a, IMPLIES)?;
            f.write_str(")")
        }
        Formula::EU(a, b) | Formula::AU(a, b) => {
            f.write_str(if matches!(phi, Formula::EU(..)) { "E[" } else { "A[" })?;
            write_at(f, a, IMPLIES)?;
            f.write_str(" U ")?;
            write_at(f, b, IMPLIES)?;
            f.write_str("]")
        }
        Formula::Enabled(p, o) => write!(f, "enabled({}.{})", p, o),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, IMPLIES)
    }
}
