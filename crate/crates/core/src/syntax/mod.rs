//! Abstract syntax, parser and printers for the `.cows` dialect.

mod ast;
mod lexer;
mod parser;
mod printer;
pub mod scope;

pub use ast::{DelimKind, Definition, Expr, Model, ModelError, Name, Pattern, Term, Value};
pub use parser::{parse_model, ParseError, ParseResult};
pub use printer::{dump_ast, pretty_print, term_to_string};
