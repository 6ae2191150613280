use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Dot,
    Bang,
    Query,
    LAngle,
    RAngle,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Hash,
    Star,
    Bar,
    Plus,
    Equals,
    /// `{|`
    LProtect,
    /// `|}`
    RProtect,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Int(i) => write!(f, "`{}`", i),
            Tok::Dot => f.write_str("`.`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Query => f.write_str("`?`"),
            Tok::LAngle => f.write_str("`<`"),
            Tok::RAngle => f.write_str("`>`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Hash => f.write_str("`#`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::LProtect => f.write_str("`{|`"),
            Tok::RProtect => f.write_str("`|}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug)]
pub(crate) struct LexError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let advance = |n: usize, i: &mut usize, column: &mut usize| {
            *i += n;
            *column += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            ' ' | '\t' | '\r' => advance(1, &mut i, &mut column),
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                column += i - start;
                out.push(Spanned {
                    tok: Tok::Ident(text),
                    line: tl,
                    column: tc,
                });
            }
            c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                column += i - start;
                let value = text.parse::<i64>().map_err(|_| LexError {
                    line: tl,
                    column: tc,
                    message: format!("integer literal `{}` out of range", text),
                })?;
                out.push(Spanned {
                    tok: Tok::Int(value),
                    line: tl,
                    column: tc,
                });
            }
            _ => {
                let (tok, width) = match c {
                    '.' => (Tok::Dot, 1),
                    '!' => (Tok::Bang, 1),
                    '?' => (Tok::Query, 1),
                    '<' => (Tok::LAngle, 1),
                    '>' => (Tok::RAngle, 1),
                    ',' => (Tok::Comma, 1),
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '[' => (Tok::LBrack, 1),
                    ']' => (Tok::RBrack, 1),
                    '#' => (Tok::Hash, 1),
                    '*' => (Tok::Star, 1),
                    '+' => (Tok::Plus, 1),
                    '=' => (Tok::Equals, 1),
                    '{' if chars.get(i + 1) == Some(&'|') => (Tok::LProtect, 2),
                    '|' if chars.get(i + 1) == Some(&'}') => (Tok::RProtect, 2),
                    '|' => (Tok::Bar, 1),
                    other => {
                        return Err(LexError {
                            line: tl,
                            column: tc,
                            message: format!("unexpected character {:?}", other),
                        })
                    }
                };
                advance(width, &mut i, &mut column);
                out.push(Spanned {
                    tok,
                    line: tl,
                    column: tc,
                });
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn protection_brackets_and_bar() {
        assert_eq!(
            kinds("{| a |} | b"),
            vec![
                Tok::LProtect,
                Tok::Ident("a".into()),
                Tok::RProtect,
                Tok::Bar,
                Tok::Ident("b".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn negative_literal_and_comment() {
        assert_eq!(
            kinds("-5 // ignored\n 7"),
            vec![Tok::Int(-5), Tok::Int(7), Tok::Eof]
        );
    }

    #[test]
    fn crlf_positions() {
        let toks = tokenize("a\r\n  b").unwrap();
        assert_eq!((toks[1].line, toks[1].column), (2, 3));
    }

    #[test]
    fn rejects_stray_character() {
        let err = tokenize("a $").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
    }
}
