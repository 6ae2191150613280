//! Recursive-descent parser for the `.cows` dialect.
//!
//! ```text
//! source  := item* EOF                       (exactly one let-block)
//! item    := "let" def* "in" par "end" | def
//! def     := IDENT "(" idents? ")" "=" par
//! par     := choice ("|" choice)*
//! choice  := unary ("+" unary)*               (branches must be receives)
//! unary   := "*" unary | "[" IDENT "#"? "]" unary | "{|" par "|}"
//!          | "(" par ")" | "nil" | "kill" "(" IDENT ")"
//!          | IDENT "(" exprs? ")"
//!          | IDENT "." IDENT "!" "<" exprs? ">"
//!          | IDENT "." IDENT "?" "<" pats? ">" "." unary
//! expr    := atom ("gt" atom)*
//! atom    := INT | "true" | "false" | IDENT | "(" expr ")"
//! pat     := INT | "true" | "false" | IDENT
//! ```
//!
//! Identifiers in expression and pattern positions are resolved against the
//! enclosing binders after parsing, see [`super::scope`].

use std::collections::BTreeMap;

use super::ast::{DelimKind, Definition, Expr, Model, ModelError, Name, Pattern, Term, Value};
use super::lexer::{tokenize, Spanned, Tok};
use super::scope;

const KEYWORDS: &[&str] = &["nil", "gt", "true", "false", "let", "in", "end", "kill"];
const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{column}: {message}")]
    Lexical {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {error}")]
    Invalid {
        line: usize,
        column: usize,
        error: ModelError,
    },
    #[error("{line}:{column}: definition `{name}` is defined more than once")]
    DuplicateDefinition { line: usize, column: usize, name: Name },
    #[error("{line}:{column}: nesting deeper than {MAX_DEPTH} levels")]
    TooDeep { line: usize, column: usize },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::Lexical { line, column, .. }
            | ParseError::Invalid { line, column, .. }
            | ParseError::DuplicateDefinition { line, column, .. }
            | ParseError::TooDeep { line, column } => (*line, *column),
        }
    }
}

pub type ParseResult<T> = Result<T, ParseError>;

/// Parses a complete `.cows` source into a validated [`Model`].
pub fn parse_model(source: &str) -> ParseResult<Model> {
    let tokens = tokenize(source).map_err(|e| ParseError::Lexical {
        line: e.line,
        column: e.column,
        message: e.message,
    })?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        depth: 0,
        calls: Vec::new(),
        repeated: Vec::new(),
    };
    let (definitions, main) = parser.source()?;

    for (name, argc, line, column) in &parser.calls {
        let def = definitions.get(name).ok_or(ParseError::Invalid {
            line: *line,
            column: *column,
            error: ModelError::UnboundDefinition(name.clone()),
        })?;
        if def.params.len() != *argc {
            return Err(ParseError::Invalid {
                line: *line,
                column: *column,
                error: ModelError::ArityMismatch {
                    name: name.clone(),
                    expected: def.params.len(),
                    found: *argc,
                },
            });
        }
    }

    let model = scope::resolve_model(Model { definitions, main });
    model.validate().map_err(|error| {
        let (line, column) = match &error {
            ModelError::DuplicateBinder(x) => parser
                .repeated
                .iter()
                .find(|(n, _, _)| n == x)
                .map_or((1, 1), |(_, l, c)| (*l, *c)),
            _ => (1, 1),
        };
        ParseError::Invalid { line, column, error }
    })?;
    Ok(model)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    depth: usize,
    calls: Vec<(Name, usize, usize, usize)>,
    /// Identifiers repeated within one pattern list; an error only if they
    /// resolve to variables.
    repeated: Vec<(Name, usize, usize)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.tokens[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, expected: &[&str]) -> ParseResult<T> {
        let (line, column) = self.here();
        Err(ParseError::Syntax {
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> ParseResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&[&tok.to_string()])
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> ParseResult<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(&[&format!("`{}`", kw)])
        }
    }

    fn ident(&mut self) -> ParseResult<Name> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let name = Name::from_static(s);
                self.bump();
                Ok(name)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn enter(&mut self) -> ParseResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let (line, column) = self.here();
            return Err(ParseError::TooDeep { line, column });
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn source(&mut self) -> ParseResult<(BTreeMap<Name, Definition>, Term)> {
        let mut definitions = BTreeMap::new();
        let mut main = None;
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::Ident(s) if s == "let" => {
                    if main.is_some() {
                        return self.error(&["definition", "end of input"]);
                    }
                    self.bump();
                    while !self.is_keyword("in") {
                        self.definition(&mut definitions)?;
                    }
                    self.bump();
                    main = Some(self.par()?);
                    self.expect_keyword("end")?;
                }
                Tok::Ident(_) => self.definition(&mut definitions)?,
                _ => {
                    return if main.is_some() {
                        self.error(&["definition", "end of input"])
                    } else {
                        self.error(&["`let`", "definition"])
                    }
                }
            }
        }
        match main {
            Some(main) => Ok((definitions, main)),
            None => self.error(&["`let`"]),
        }
    }

    fn definition(&mut self, defs: &mut BTreeMap<Name, Definition>) -> ParseResult<()> {
        let (line, column) = self.here();
        let name = match self.ident() {
            Ok(n) => n,
            Err(_) => return self.error(&["definition", "`in`"]),
        };
        self.expect(Tok::LParen)?;
        let mut params: Vec<Name> = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                let (pl, pc) = self.here();
                let p = self.ident()?;
                if params.contains(&p) {
                    return Err(ParseError::Invalid {
                        line: pl,
                        column: pc,
                        error: ModelError::DuplicateBinder(p),
                    });
                }
                params.push(p);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Equals)?;
        let body = self.par()?;
        if defs.contains_key(&name) {
            return Err(ParseError::DuplicateDefinition { line, column, name });
        }
        defs.insert(name, Definition { params, body });
        Ok(())
    }

    fn par(&mut self) -> ParseResult<Term> {
        self.enter()?;
        let mut items = vec![self.choice()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            items.push(self.choice()?);
        }
        self.leave();
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Term::Parallel(items)
        })
    }

    fn choice(&mut self) -> ParseResult<Term> {
        let mut branches = Vec::new();
        let mut positions = Vec::new();
        positions.push(self.here());
        branches.push(self.unary()?);
        while *self.peek() == Tok::Plus {
            self.bump();
            positions.push(self.here());
            branches.push(self.unary()?);
        }
        if branches.len() == 1 {
            return Ok(branches.pop().unwrap());
        }
        let mut flat = Vec::new();
        for (branch, (line, column)) in branches.into_iter().zip(positions) {
            match branch {
                Term::Choice(inner) => flat.extend(inner),
                b @ Term::Receive { .. } => flat.push(b),
                _ => {
                    return Err(ParseError::Invalid {
                        line,
                        column,
                        error: ModelError::UnguardedChoice,
                    })
                }
            }
        }
        Ok(Term::Choice(flat))
    }

    fn unary(&mut self) -> ParseResult<Term> {
        self.enter()?;
        let term = self.unary_inner()?;
        self.leave();
        Ok(term)
    }

    fn unary_inner(&mut self) -> ParseResult<Term> {
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Ok(Term::Replicate(Box::new(self.unary()?)))
            }
            Tok::LBrack => {
                self.bump();
                let bound = self.ident()?;
                let kind = if *self.peek() == Tok::Hash {
                    self.bump();
                    DelimKind::Name
                } else {
                    // Refined by scope resolution.
                    DelimKind::Var
                };
                self.expect(Tok::RBrack)?;
                let body = self.unary()?;
                Ok(Term::Delim {
                    bound,
                    kind,
                    body: Box::new(body),
                })
            }
            Tok::LProtect => {
                self.bump();
                let body = self.par()?;
                self.expect(Tok::RProtect)?;
                Ok(Term::Protect(Box::new(body)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.par()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(s) if s == "nil" => {
                self.bump();
                Ok(Term::Nil)
            }
            Tok::Ident(s) if s == "kill" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let label = self.ident()?;
                self.expect(Tok::RParen)?;
                Ok(Term::Kill(label))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let (line, column) = self.here();
                let first = self.ident()?;
                match self.peek() {
                    Tok::LParen => {
                        self.bump();
                        let args = self.expr_list(Tok::RParen)?;
                        self.expect(Tok::RParen)?;
                        self.calls.push((first.clone(), args.len(), line, column));
                        Ok(Term::Call {
                            definition: first,
                            args,
                        })
                    }
                    Tok::Dot => {
                        self.bump();
                        let operation = self.ident()?;
                        match self.peek() {
                            Tok::Bang => {
                                self.bump();
                                self.expect(Tok::LAngle)?;
                                let args = self.expr_list(Tok::RAngle)?;
                                self.expect(Tok::RAngle)?;
                                Ok(Term::Invoke {
                                    partner: first,
                                    operation,
                                    args,
                                })
                            }
                            Tok::Query => {
                                self.bump();
                                self.expect(Tok::LAngle)?;
                                let params = self.pattern_list()?;
                                self.expect(Tok::RAngle)?;
                                self.expect(Tok::Dot)?;
                                let continuation = self.unary()?;
                                Ok(Term::Receive {
                                    partner: first,
                                    operation,
                                    params,
                                    continuation: Box::new(continuation),
                                })
                            }
                            _ => self.error(&["`!`", "`?`"]),
                        }
                    }
                    _ => self.error(&["`.`", "`(`"]),
                }
            }
            _ => self.error(&[
                "`*`",
                "`[`",
                "`{|`",
                "`(`",
                "`nil`",
                "`kill`",
                "identifier",
            ]),
        }
    }

    fn expr_list(&mut self, close: Tok) -> ParseResult<Vec<Expr>> {
        let mut out = Vec::new();
        if *self.peek() == close {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn expr(&mut self) -> ParseResult<Expr> {
        self.enter()?;
        let mut lhs = self.atom()?;
        while self.is_keyword("gt") {
            self.bump();
            let rhs = self.atom()?;
            lhs = Expr::gt(lhs, rhs);
        }
        self.leave();
        Ok(lhs)
    }

    fn atom(&mut self) -> ParseResult<Expr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Int(i) => {
                self.bump();
                Ok(Expr::Lit(Value::Int(i)))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                Ok(Expr::Lit(Value::Bool(s == "true")))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok(Expr::Var(self.ident()?)),
            _ => self.error(&["expression"]),
        }
    }

    fn pattern_list(&mut self) -> ParseResult<Vec<Pattern>> {
        let mut out = Vec::new();
        if *self.peek() == Tok::RAngle {
            return Ok(out);
        }
        loop {
            let (line, column) = self.here();
            let p = match self.peek().clone() {
                Tok::Int(i) => {
                    self.bump();
                    Pattern::MatchVal(Value::Int(i))
                }
                Tok::Ident(s) if s == "true" || s == "false" => {
                    self.bump();
                    Pattern::MatchVal(Value::Bool(s == "true"))
                }
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Pattern::BindVar(self.ident()?),
                _ => return self.error(&["pattern"]),
            };
            if let Pattern::BindVar(x) = &p {
                if out.contains(&p) {
                    self.repeated.push((x.clone(), line, column));
                }
            }
            out.push(p);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }
}
