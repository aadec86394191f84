//! A small expression language for non-polynomial constraint functions.
//!
//! Grammar (recursive descent, `x1` is the first variable):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | power
//! power   := primary ('^' integer)*
//! primary := number | 'x' index | '(' expr ')' | 'exp' '(' expr ')'
//! ```
//!
//! Pretty-printing inserts parentheses so that `parse(to_text(e)) == e` for
//! every tree produced by the parser.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintExpr {
    Const(f64),
    Var(usize),
    Add(Box<ConstraintExpr>, Box<ConstraintExpr>),
    Sub(Box<ConstraintExpr>, Box<ConstraintExpr>),
    Neg(Box<ConstraintExpr>),
    Mul(Box<ConstraintExpr>, Box<ConstraintExpr>),
    Pow(Box<ConstraintExpr>, u32),
    Exp(Box<ConstraintExpr>),
}

impl ConstraintExpr {
    /// Evaluates at `x`. Variable indices must be within bounds (checked at
    /// constraint-set construction).
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ConstraintExpr::Const(c) => *c,
            ConstraintExpr::Var(i) => x[*i],
            ConstraintExpr::Add(a, b) => a.eval(x) + b.eval(x),
            ConstraintExpr::Sub(a, b) => a.eval(x) - b.eval(x),
            ConstraintExpr::Neg(a) => -a.eval(x),
            ConstraintExpr::Mul(a, b) => a.eval(x) * b.eval(x),
            ConstraintExpr::Pow(a, e) => math::powu(a.eval(x), *e),
            ConstraintExpr::Exp(a) => math::exp(a.eval(x)),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            ConstraintExpr::Const(_) => None,
            ConstraintExpr::Var(i) => Some(*i),
            ConstraintExpr::Add(a, b) | ConstraintExpr::Sub(a, b) | ConstraintExpr::Mul(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            ConstraintExpr::Neg(a) | ConstraintExpr::Exp(a) => a.max_var(),
            ConstraintExpr::Pow(a, _) => a.max_var(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ConstraintExpr::Add(..) | ConstraintExpr::Sub(..) => 1,
            ConstraintExpr::Mul(..) => 2,
            ConstraintExpr::Neg(..) => 3,
            ConstraintExpr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, out: &mut String, min_prec: u8) {
        let needs_parens = self.precedence() < min_prec;
        if needs_parens {
            out.push('(');
        }
        match self {
            ConstraintExpr::Const(c) => out.push_str(&c.to_string()),
            ConstraintExpr::Var(i) => out.push_str(&format!("x{}", i + 1)),
            ConstraintExpr::Add(a, b) => {
                a.write(out, 1);
                out.push_str(" + ");
                b.write(out, 2);
            }
            ConstraintExpr::Sub(a, b) => {
                a.write(out, 1);
                out.push_str(" - ");
                b.write(out, 2);
            }
            ConstraintExpr::Mul(a, b) => {
                a.write(out, 2);
                out.push_str(" * ");
                b.write(out, 3);
            }
            ConstraintExpr::Neg(a) => {
                out.push('-');
                a.write(out, 3);
            }
            ConstraintExpr::Pow(a, e) => {
                a.write(out, 5);
                out.push_str(&format!("^{e}"));
            }
            ConstraintExpr::Exp(a) => {
                out.push_str("exp(");
                a.write(out, 0);
                out.push(')');
            }
        }
        if needs_parens {
            out.push(')');
        }
    }

    /// Canonical text form; reparses to an identical tree.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out
    }
}

impl fmt::Display for ConstraintExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Parse failure with a byte position into the input.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Var(usize),
    ExpKeyword,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // Optional exponent suffix, only when unambiguous.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let slice = &text[start..i];
                let value: f64 = slice.parse().map_err(|_| ParseError {
                    position: start,
                    message: format!("invalid number literal `{slice}`"),
                })?;
                tokens.push((Token::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let ident = &text[start..i];
                if ident == "exp" {
                    tokens.push((Token::ExpKeyword, start));
                } else if let Some(rest) = ident.strip_prefix('x') {
                    let index: usize = rest.parse().map_err(|_| ParseError {
                        position: start,
                        message: format!("unknown identifier `{ident}`"),
                    })?;
                    if index == 0 {
                        return Err(ParseError {
                            position: start,
                            message: "variable indices start at x1".to_string(),
                        });
                    }
                    tokens.push((Token::Var(index - 1), start));
                } else {
                    return Err(ParseError {
                        position: start,
                        message: format!("unknown identifier `{ident}`"),
                    });
                }
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.input_len)
    }

    fn advance(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ParseError> {
        let position = self.position();
        match self.advance() {
            Some(t) if *t == token => Ok(()),
            _ => Err(ParseError {
                position,
                message: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<ConstraintExpr, ParseError> {
        let mut node = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.advance();
                    node = ConstraintExpr::Add(Box::new(node), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.advance();
                    node = ConstraintExpr::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<ConstraintExpr, ParseError> {
        let mut node = self.factor()?;
        while let Some(Token::Star) = self.peek() {
            self.advance();
            node = ConstraintExpr::Mul(Box::new(node), Box::new(self.factor()?));
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<ConstraintExpr, ParseError> {
        if let Some(Token::Minus) = self.peek() {
            self.advance();
            return Ok(ConstraintExpr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ConstraintExpr, ParseError> {
        let mut node = self.primary()?;
        while let Some(Token::Caret) = self.peek() {
            self.advance();
            let position = self.position();
            match self.advance() {
                Some(Token::Num(v)) => {
                    if crate::math::fract(*v) != 0.0 || *v < 0.0 || *v > u32::MAX as f64 {
                        return Err(ParseError {
                            position,
                            message: "exponent must be a non-negative integer".to_string(),
                        });
                    }
                    node = ConstraintExpr::Pow(Box::new(node), *v as u32);
                }
                _ => {
                    return Err(ParseError {
                        position,
                        message: "expected integer exponent after `^`".to_string(),
                    })
                }
            }
        }
        Ok(node)
    }

    fn primary(&mut self) -> Result<ConstraintExpr, ParseError> {
        let position = self.position();
        match self.advance() {
            Some(Token::Num(v)) => Ok(ConstraintExpr::Const(*v)),
            Some(Token::Var(i)) => Ok(ConstraintExpr::Var(*i)),
            Some(Token::LParen) => {
                let node = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(node)
            }
            Some(Token::ExpKeyword) => {
                self.expect(Token::LParen, "`(` after exp")?;
                let node = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(ConstraintExpr::Exp(Box::new(node)))
            }
            _ => Err(ParseError {
                position,
                message: "expected number, variable, `(`, or exp(...)".to_string(),
            }),
        }
    }
}

/// Parses a constraint expression.
pub fn parse_constraint(text: &str) -> Result<ConstraintExpr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        input_len: text.len(),
    };
    let node = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(ParseError {
            position: parser.position(),
            message: "unexpected trailing input".to_string(),
        });
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_exp_constraint() {
        let e = parse_constraint("exp(x1 - 1) - x2").unwrap();
        assert_eq!(e.eval(&[1.0, 1.0]), 0.0);
        assert!(e.eval(&[2.0, 1.0]) > 0.0);
    }

    #[test]
    fn parses_simple_cases() {
        let v = parse_constraint("x1").unwrap();
        assert_eq!(v.eval(&[7.0, -1.0]), 7.0);
        let lin = parse_constraint("x2 - x1 + 1").unwrap();
        assert_eq!(lin.eval(&[2.0, 1.0]), 0.0);
        let pw = parse_constraint("(x1 + 1)^3 * 2").unwrap();
        assert_eq!(pw.eval(&[1.0]), 16.0);
        let neg = parse_constraint("-x1^2").unwrap();
        assert_eq!(neg.eval(&[3.0]), -9.0);
        let sci = parse_constraint("1.5e2 - x1").unwrap();
        assert_eq!(sci.eval(&[50.0]), 100.0);
    }

    #[test]
    fn reports_position_on_errors() {
        let err = parse_constraint("x1 + foo").unwrap_err();
        assert_eq!(err.position, 5);
        assert!(err.message.contains("foo"));

        let err = parse_constraint("x1 ^ x2").unwrap_err();
        assert!(err.message.contains("exponent"));

        let err = parse_constraint("x1 + ").unwrap_err();
        assert_eq!(err.position, 5);

        assert!(parse_constraint("x0").is_err());
        assert!(parse_constraint("(x1").is_err());
    }

    #[test]
    fn max_var_bounds() {
        let e = parse_constraint("x3 * x1 - exp(x2)").unwrap();
        assert_eq!(e.max_var(), Some(2));
        assert_eq!(parse_constraint("3.5").unwrap().max_var(), None);
    }

    #[test]
    fn round_trip_examples() {
        for text in [
            "exp(x1 - 1) - x2",
            "x1 - 1",
            "x2 - x1 + 1",
            "-x1^2 + (x2 - 1) * x1",
            "1 - 2 - 3",
            "2 * (x1 + x2)^2",
            "--x1",
        ] {
            let tree = parse_constraint(text).unwrap();
            let printed = tree.to_text();
            let reparsed = parse_constraint(&printed).unwrap();
            assert_eq!(reparsed, tree, "`{text}` -> `{printed}`");
        }
    }

    fn arb_expr() -> impl Strategy<Value = ConstraintExpr> {
        let leaf = prop_oneof![
            (0usize..3).prop_map(ConstraintExpr::Var),
            (0.0f64..100.0).prop_map(ConstraintExpr::Const),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| ConstraintExpr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| ConstraintExpr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| ConstraintExpr::Mul(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| ConstraintExpr::Neg(Box::new(a))),
                (inner.clone(), 0u32..5)
                    .prop_map(|(a, e)| ConstraintExpr::Pow(Box::new(a), e)),
                inner.prop_map(|a| ConstraintExpr::Exp(Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn pretty_print_round_trips(tree in arb_expr()) {
            let printed = tree.to_text();
            let reparsed = parse_constraint(&printed).unwrap();
            prop_assert_eq!(reparsed, tree);
        }
    }
}
