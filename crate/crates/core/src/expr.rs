//! Propositional formulas: syntax tree, parser, printer and compilation to
//! truth tables.
//!
//! Concrete syntax, lowest to highest precedence:
//!
//! ```text
//! formula := or
//! or      := xor ('|' xor)*
//! xor     := and ('^' and)*
//! and     := unary ('&' unary)*
//! unary   := '~' unary | atom
//! atom    := 'T' | 'F' | var | '(' formula ')'
//! var     := 'x' digits
//! ```
//!
//! Binary connectives associate to the left.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::table::{check_arity, TruthTable, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    True,
    False,
    Var(VarId),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Panics if `index` is 0.
    pub fn var(index: u32) -> Expr {
        Expr::Var(VarId::new(index).expect("variable indices start at 1"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Expr, b: Expr) -> Expr {
        Expr::Xor(Box::new(a), Box::new(b))
    }

    /// Left-associated conjunction; `True` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Expr>) -> Expr {
        items.into_iter().reduce(Expr::and).unwrap_or(Expr::True)
    }

    /// Left-associated disjunction; `False` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Expr>) -> Expr {
        items.into_iter().reduce(Expr::or).unwrap_or(Expr::False)
    }

    /// Largest variable index mentioned, 0 for closed formulas.
    pub fn max_var(&self) -> u32 {
        match self {
            Expr::True | Expr::False => 0,
            Expr::Var(v) => v.index(),
            Expr::Not(e) => e.max_var(),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Default arity: the largest variable index, at least 1.
    pub fn arity(&self) -> usize {
        self.max_var().max(1) as usize
    }

    /// Evaluates the formula at every assignment of `n` variables.
    pub fn compile(&self, n: usize) -> Result<TruthTable> {
        check_arity(n, 1)?;
        let needed = self.max_var();
        if needed as usize > n {
            return Err(Error::VarOutOfRange { index: needed, n });
        }
        self.compile_unchecked(n)
    }

    fn compile_unchecked(&self, n: usize) -> Result<TruthTable> {
        Ok(match self {
            Expr::True => TruthTable::constant(n, true)?,
            Expr::False => TruthTable::constant(n, false)?,
            Expr::Var(v) => TruthTable::var(n, *v)?,
            Expr::Not(e) => e.compile_unchecked(n)?.negate(),
            Expr::And(a, b) => a.compile_unchecked(n)?.and(&b.compile_unchecked(n)?)?,
            Expr::Or(a, b) => a.compile_unchecked(n)?.or(&b.compile_unchecked(n)?)?,
            Expr::Xor(a, b) => a.compile_unchecked(n)?.xor(&b.compile_unchecked(n)?)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::Xor(..) => 2,
            Expr::And(..) => 3,
            Expr::Not(_) => 4,
            Expr::True | Expr::False | Expr::Var(_) => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Renders with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, op) = match self {
            Expr::True => return f.write_str("T"),
            Expr::False => return f.write_str("F"),
            Expr::Var(v) => return write!(f, "{v}"),
            Expr::Not(e) => {
                f.write_str("~")?;
                return write_operand(f, e, e.precedence() < 4);
            }
            Expr::And(a, b) => (a, b, " & "),
            Expr::Or(a, b) => (a, b, " | "),
            Expr::Xor(a, b) => (a, b, " ^ "),
        };
        let p = self.precedence();
        write_operand(f, a, a.precedence() < p)?;
        f.write_str(op)?;
        write_operand(f, b, b.precedence() <= p)
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Token {
    True,
    False,
    Var(u32),
    Not,
    And,
    Or,
    Xor,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::True => f.write_str("'T'"),
            Token::False => f.write_str("'F'"),
            Token::Var(_) => f.write_str("variable"),
            Token::Not => f.write_str("'~'"),
            Token::And => f.write_str("'&'"),
            Token::Or => f.write_str("'|'"),
            Token::Xor => f.write_str("'^'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
            Token::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at position {pos}")]
    BadChar { pos: usize, found: char },

    #[error("invalid variable at position {pos}: {reason}")]
    BadVar { pos: usize, reason: &'static str },

    #[error("unexpected {found} at position {pos}, expected one of: {}", list(.expected))]
    Unexpected {
        pos: usize,
        found: Token,
        expected: Vec<Token>,
    },
}

impl ParseError {
    /// Byte offset into the input.
    pub fn position(&self) -> usize {
        match self {
            ParseError::BadChar { pos, .. }
            | ParseError::BadVar { pos, .. }
            | ParseError::Unexpected { pos, .. } => *pos,
        }
    }
}

fn list(tokens: &[Token]) -> String {
    tokens.iter().map(Token::to_string).collect::<Vec<_>>().join(", ")
}

fn lex(text: &str) -> std::result::Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let single = match c {
            b'T' => Some(Token::True),
            b'F' => Some(Token::False),
            b'~' => Some(Token::Not),
            b'&' => Some(Token::And),
            b'|' => Some(Token::Or),
            b'^' => Some(Token::Xor),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            tokens.push((i, tok));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'x' {
            let start = i;
            i += 1;
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == digits_start {
                return Err(ParseError::BadVar {
                    pos: start,
                    reason: "expected digits after 'x'",
                });
            }
            let index: u32 = text[digits_start..i].parse().map_err(|_| ParseError::BadVar {
                pos: start,
                reason: "index too large",
            })?;
            if index == 0 {
                return Err(ParseError::BadVar {
                    pos: start,
                    reason: "index must be at least 1",
                });
            }
            tokens.push((start, Token::Var(index)));
        } else {
            let found = text[i..].chars().next().unwrap_or('\u{fffd}');
            return Err(ParseError::BadChar { pos: i, found });
        }
    }
    tokens.push((text.len(), Token::End));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
}

const ATOM_START: [Token; 5] = [
    Token::Not,
    Token::True,
    Token::False,
    Token::Var(0),
    Token::LParen,
];

impl Parser {
    fn peek(&self) -> (usize, Token) {
        self.tokens[self.cursor]
    }

    fn bump(&mut self) -> (usize, Token) {
        let tok = self.tokens[self.cursor];
        if tok.1 != Token::End {
            self.cursor += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &[Token]) -> ParseError {
        let (pos, found) = self.peek();
        ParseError::Unexpected {
            pos,
            found,
            expected: expected.to_vec(),
        }
    }

    fn binary(
        &mut self,
        op: Token,
        build: fn(Expr, Expr) -> Expr,
        next: fn(&mut Self) -> std::result::Result<Expr, ParseError>,
    ) -> std::result::Result<Expr, ParseError> {
        let mut lhs = next(self)?;
        while self.peek().1 == op {
            self.bump();
            let rhs = next(self)?;
            lhs = build(lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> std::result::Result<Expr, ParseError> {
        self.binary(Token::Or, Expr::or, Self::xor)
    }

    fn xor(&mut self) -> std::result::Result<Expr, ParseError> {
        self.binary(Token::Xor, Expr::xor, Self::and)
    }

    fn and(&mut self) -> std::result::Result<Expr, ParseError> {
        self.binary(Token::And, Expr::and, Self::unary)
    }

    fn unary(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut negations = 0usize;
        while self.peek().1 == Token::Not {
            self.bump();
            negations += 1;
        }
        let mut e = self.atom()?;
        for _ in 0..negations {
            e = Expr::not(e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> std::result::Result<Expr, ParseError> {
        match self.peek().1 {
            Token::True => {
                self.bump();
                Ok(Expr::True)
            }
            Token::False => {
                self.bump();
                Ok(Expr::False)
            }
            Token::Var(i) => {
                self.bump();
                Ok(Expr::Var(VarId::new(i).expect("lexer rejects x0")))
            }
            Token::LParen => {
                self.bump();
                let inner = self.or()?;
                if self.peek().1 != Token::RParen {
                    return Err(self.unexpected(&[Token::RParen, Token::Or, Token::Xor, Token::And]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected(&ATOM_START)),
        }
    }
}

/// Parses a formula.
pub fn parse(text: &str) -> Result<Expr> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, cursor: 0 };
    let e = parser.or()?;
    if parser.peek().1 != Token::End {
        return Err(parser
            .unexpected(&[Token::End, Token::Or, Token::Xor, Token::And])
            .into());
    }
    Ok(e)
}
