//! Formula and `.prop` file parsing.
//!
//! ```text
//! formula  := or ("->" formula)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "!" unary | ("AG"|"AF"|"EF"|"EG") unary
//!           | ("E"|"A") "[" formula "U" formula "]"
//!           | "<" pattern ">" unary | "[" pattern "]" unary
//!           | "enabled" "(" name "." name ")" | "true" | "false" | "(" formula ")"
//! pattern  := (name|"*") "." (name|"*") "<" ("*" | (value ("," value)*)?) ">"
//! value    := int | "true" | "false" | name | "_"
//! ```

use super::formula::{ActionPattern, ArgsPat, Formula, NamePat, ValuePat};
use crate::syntax::{Name, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct FormulaError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Int(i) => format!("`{}`", i),
            Tok::Sym(s) => format!("`{}`", s),
            Tok::Eof => "end of input".into(),
        }
    }
}

const SYMBOLS: [&str; 15] = ["->", "(", ")", "[", "]", "<", ">", ",", ".", "*", "!", "&", "|", "_", ":"];

fn tokenize(src: &str, line0: usize) -> Result<Vec<(Tok, usize, usize)>, FormulaError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, line0, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        if c.is_ascii_alphabetic() {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '#') {
                i += 1;
            }
            col += i - s;
            out.push((Tok::Ident(chars[s..i].iter().collect()), start.0, start.1));
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let s = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - s;
            let text: String = chars[s..i].iter().collect();
            let v = text.parse().map_err(|_| FormulaError {
                line: start.0,
                column: start.1,
                message: format!("integer `{}` out of range", text),
            })?;
            out.push((Tok::Int(v), start.0, start.1));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                col += s.len();
                out.push((Tok::Sym(s), start.0, start.1));
            }
            None => {
                return Err(FormulaError {
                    line: start.0,
                    column: start.1,
                    message: format!("unexpected character {:?}", c),
                })
            }
        }
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

const MAX_DEPTH: usize = 200;

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error(&self, expected: &str) -> FormulaError {
        let (tok, line, column) = &self.toks[self.pos];
        FormulaError {
            line: *line,
            column: *column,
            message: format!("expected {}, found {}", expected, tok.describe()),
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), FormulaError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.error(&format!("`{}`", sym)))
        }
    }

    fn keyword(&self) -> Option<&str> {
        match self.peek() {
            Tok::Ident(s) => Some(s.as_str()),
            _ => None,
        }
    }

    fn name(&mut self) -> Result<Name, FormulaError> {
        if let Tok::Ident(s) = self.peek() {
            if let Some(n) = Name::from_label_text(s) {
                self.pos += 1;
                return Ok(n);
            }
        }
        Err(self.error("a name"))
    }

    fn name_pat(&mut self) -> Result<NamePat, FormulaError> {
        if self.eat("*") {
            Ok(NamePat::Any)
        } else {
            self.name().map(NamePat::Is)
        }
    }

    fn value_pat(&mut self) -> Result<ValuePat, FormulaError> {
        if self.eat("_") {
            return Ok(ValuePat::Any);
        }
        match self.peek().clone() {
            Tok::Int(i) => {
                self.pos += 1;
                Ok(ValuePat::Is(Value::Int(i)))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.pos += 1;
                Ok(ValuePat::Is(Value::Bool(s == "true")))
            }
            Tok::Ident(_) => self.name().map(|n| ValuePat::Is(Value::Name(n))),
            _ => Err(self.error("a value")),
        }
    }

    fn pattern(&mut self) -> Result<ActionPattern, FormulaError> {
        let partner = self.name_pat()?;
        self.expect(".")?;
        let operation = self.name_pat()?;
        self.expect("<")?;
        let values = if self.eat("*") {
            ArgsPat::Any
        } else {
            let mut vs = Vec::new();
            if !matches!(self.peek(), Tok::Sym(">")) {
                vs.push(self.value_pat()?);
                while self.eat(",") {
                    vs.push(self.value_pat()?);
                }
            }
            ArgsPat::List(vs)
        };
        self.expect(">")?;
        Ok(ActionPattern {
            partner,
            operation,
            values,
        })
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("shallower nesting"));
        }
        let lhs = self.or()?;
        let f = if self.eat("->") {
            Formula::implies(lhs, self.formula()?)
        } else {
            lhs
        };
        self.depth -= 1;
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.and()?;
        while self.eat("|") {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("shallower nesting"));
        }
        let f = self.unary_inner()?;
        self.depth -= 1;
        Ok(f)
    }

    fn unary_inner(&mut self) -> Result<Formula, FormulaError> {
        if self.eat("!") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        if self.eat("<") {
            let p = self.pattern()?;
            self.expect(">")?;
            return Ok(Formula::diamond(p, self.unary()?));
        }
        if self.eat("[") {
            let p = self.pattern()?;
            self.expect("]")?;
            return Ok(Formula::boxed(p, self.unary()?));
        }
        let kw = self.keyword().map(str::to_string);
        match kw.as_deref() {
            Some("true") => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some("false") => {
                self.pos += 1;
                Ok(Formula::not(Formula::True))
            }
            Some(op @ ("AG" | "AF" | "EF" | "EG")) => {
                self.pos += 1;
                let a = self.unary()?;
                Ok(match op {
                    "AG" => Formula::ag(a),
                    "AF" => Formula::af(a),
                    "EF" => Formula::ef(a),
                    _ => Formula::eg(a),
                })
            }
            Some(q @ ("E" | "A")) => {
                self.pos += 1;
                self.expect("[")?;
                let a = self.formula()?;
                if self.keyword() != Some("U") {
                    return Err(self.error("`U`"));
                }
                self.pos += 1;
                let b = self.formula()?;
                self.expect("]")?;
                Ok(if q == "E" { Formula::eu(a, b) } else { Formula::au(a, b) })
            }
            Some("enabled") => {
                self.pos += 1;
                self.expect("(")?;
                let p = self.name()?;
                self.expect(".")?;
                let o = self.name()?;
                self.expect(")")?;
                Ok(Formula::Enabled(p, o))
            }
            _ => Err(self.error("a formula")),
        }
    }
}

fn parse_at(source: &str, line: usize) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: tokenize(source, line)?,
        pos: 0,
        depth: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of formula"));
    }
    Ok(f)
}

pub fn parse_formula(source: &str) -> Result<Formula, FormulaError> {
    parse_at(source, 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub formula: Formula,
}

/// Parses `prop <name>: <formula>` stanzas. A formula may continue over
/// several lines; `#` starts a comment line.
pub fn parse_props(source: &str) -> Result<Vec<Property>, FormulaError> {
    let mut stanzas: Vec<(usize, String, String)> = Vec::new();
    let mut open = false;
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            open = false;
            continue;
        }
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix("prop").filter(|r| r.starts_with(char::is_whitespace)) {
            let (name, formula) = rest.split_once(':').ok_or_else(|| FormulaError {
                line: lineno,
                column: 1,
                message: "expected `prop <name>: <formula>`".into(),
            })?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(FormulaError {
                    line: lineno,
                    column: 1,
                    message: format!("bad property name `{}`", name),
                });
            }
            stanzas.push((lineno, name.to_string(), formula.to_string()));
            open = true;
        } else if open {
            let last = stanzas.last_mut().unwrap();
            last.2.push('\n');
            last.2.push_str(line);
        } else {
            return Err(FormulaError {
                line: lineno,
                column: 1,
                message: "expected `prop`".into(),
            });
        }
    }
    stanzas
        .into_iter()
        .map(|(line, name, text)| {
            parse_at(&text, line).map(|formula| Property { name, formula })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        for src in [
            "AG([serv.create<*>] AF(<s.signalOK<*>>true | <s.signalFail<*>>true))",
            "true",
            "AG(enabled(serv.create))",
            "E[true U <a.b<1,_,x>>false]",
            "A[!EG(true) & true U <*.*<>>true] -> EG(true)",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(f.to_string(), src);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn availability_without_parentheses() {
        assert_eq!(
            parse_formula("AG enabled(serv.create)").unwrap(),
            Formula::ag(Formula::enabled("serv", "create"))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_formula("true | true & !true -> true").unwrap(),
            Formula::implies(
                Formula::or(Formula::True, Formula::and(Formula::True, Formula::not(Formula::True))),
                Formula::True
            )
        );
    }

    #[test]
    fn positioned_errors() {
        let e = parse_formula("AG(\n  <a.b<*> true)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 11));
        assert!(parse_formula("").is_err());
        assert!(parse_formula("E[true true]").is_err());
    }

    #[test]
    fn prop_file() {
        let src = "# comment\nprop One: true\n\nprop Two: AG(\n  true)\nprop Three: false\n";
        let props = parse_props(src).unwrap();
        let names: Vec<_> = props.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["One", "Two", "Three"]);
        assert!(parse_props("").unwrap().is_empty());
        let e = parse_props("\nprop Bad: AG(\n").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
