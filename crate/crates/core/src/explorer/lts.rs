use std::collections::BTreeSet;
use std::fmt;

use crate::semantics::Label;
use crate::syntax::{Name, Term, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalState {
    pub key: String,
    pub index: usize,
    /// Representative term; absent for states read back from `.aut`.
    pub term: Option<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: usize,
    pub label: Label,
    pub dst: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Truncation {
    #[default]
    None,
    StateBound,
    DepthBound,
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truncation::None => "none",
            Truncation::StateBound => "state-bound",
            Truncation::DepthBound => "depth-bound",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lts {
    pub states: Vec<CanonicalState>,
    pub initial: usize,
    pub transitions: Vec<Transition>,
    pub truncated: Truncation,
    pub diagnostics: Vec<String>,
    /// Names mentioned by the source model, used to expand wildcards.
    pub names: BTreeSet<Name>,
}

impl Lts {
    pub fn successors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.src].push((i, t.dst));
        }
        out
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated != Truncation::None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Aldebaran text: a `des (initial, transitions, states)` header followed by
/// one `(src,"label",dst)` line per transition.
pub fn export_aut(lts: &Lts) -> String {
    let mut out = format!(
        "des ({},{},{})\n",
        lts.initial,
        lts.transitions.len(),
        lts.states.len()
    );
    for t in &lts.transitions {
        out.push_str(&format!("({},\"{}\",{})\n", t.src, t.label, t.dst));
    }
    out
}

fn malformed(line: usize, message: impl Into<String>) -> AutError {
    AutError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_value(text: &str, line: usize) -> Result<Value, AutError> {
    match text {
        "true" => return Ok(Value::Bool(true)),
        "false" => return Ok(Value::Bool(false)),
        _ => {}
    }
    if let Ok(i) = text.parse::<i64>() {
        return Ok(Value::Int(i));
    }
    Name::from_label_text(text)
        .map(Value::Name)
        .ok_or_else(|| malformed(line, format!("bad value `{}`", text)))
}

pub fn parse_label(text: &str, line: usize) -> Result<Label, AutError> {
    if text == "tau" {
        return Ok(Label::Tau);
    }
    if let Some(k) = text.strip_prefix("kill:") {
        return Name::from_label_text(k)
            .map(Label::Kill)
            .ok_or_else(|| malformed(line, format!("bad kill label `{}`", text)));
    }
    let body = text
        .strip_prefix("comm:")
        .ok_or_else(|| malformed(line, format!("unknown label `{}`", text)))?;
    let (endpoint, rest) = body
        .split_once('<')
        .ok_or_else(|| malformed(line, format!("bad communication label `{}`", text)))?;
    let values = rest
        .strip_suffix('>')
        .ok_or_else(|| malformed(line, format!("bad communication label `{}`", text)))?;
    let (p, o) = endpoint
        .split_once('.')
        .ok_or_else(|| malformed(line, format!("bad endpoint `{}`", endpoint)))?;
    let name = |s: &str| Name::from_label_text(s).ok_or_else(|| malformed(line, format!("bad name `{}`", s)));
    let values = if values.is_empty() {
        Vec::new()
    } else {
        values
            .split(',')
            .map(|v| parse_value(v, line))
            .collect::<Result<_, _>>()?
    };
    Ok(Label::Comm {
        partner: name(p)?,
        operation: name(o)?,
        values,
    })
}

fn parse_triple(text: &str, line: usize) -> Result<(usize, String, usize), AutError> {
    let inner = text
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| malformed(line, "expected `(src,\"label\",dst)`"))?;
    let (src, rest) = inner.split_once(',').ok_or_else(|| malformed(line, "missing label"))?;
    let (label, dst) = rest.rsplit_once(',').ok_or_else(|| malformed(line, "missing target"))?;
    let label = label
        .trim()
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .ok_or_else(|| malformed(line, "label must be quoted"))?;
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| malformed(line, format!("bad state number `{}`", s.trim())))
    };
    Ok((num(src)?, label.to_string(), num(dst)?))
}

/// Reads an `.aut` file back. States carry no terms.
pub fn import_aut(text: &str) -> Result<Lts, AutError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| malformed(1, "empty file"))?;
    let header = header
        .trim()
        .strip_prefix("des")
        .map(str::trim)
        .ok_or_else(|| malformed(1, "expected `des` header"))?;
    let nums: Vec<usize> = header
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| malformed(1, "bad header"))?
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| malformed(1, "bad header"))?;
    let [initial, count, states] = nums[..] else {
        return Err(malformed(1, "bad header"));
    };
    if states == 0 || initial >= states {
        return Err(malformed(1, "initial state out of range"));
    }
    let mut transitions = Vec::with_capacity(count);
    for (i, l) in lines {
        let (src, label, dst) = parse_triple(l.trim(), i + 1)?;
        if src >= states || dst >= states {
            return Err(malformed(i + 1, "state out of range"));
        }
        transitions.push(Transition {
            src,
            label: parse_label(&label, i + 1)?,
            dst,
        });
    }
    if transitions.len() != count {
        return Err(malformed(
            1,
            format!("header announces {} transitions, found {}", count, transitions.len()),
        ));
    }
    let mut names = BTreeSet::new();
    for t in &transitions {
        match &t.label {
            Label::Comm {
                partner,
                operation,
                values,
            } => {
                names.insert(partner.clone());
                names.insert(operation.clone());
                for v in values {
                    if let Value::Name(n) = v {
                        names.insert(n.clone());
                    }
                }
            }
            Label::Kill(k) => {
                names.insert(k.clone());
            }
            Label::Tau => {}
        }
    }
    Ok(Lts {
        states: (0..states)
            .map(|i| CanonicalState {
                key: i.to_string(),
                index: i,
                term: None,
            })
            .collect(),
        initial,
        transitions,
        truncated: Truncation::None,
        diagnostics: Vec::new(),
        names,
    })
}
