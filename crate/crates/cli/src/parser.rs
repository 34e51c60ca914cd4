//! Expression parser for cycle arithmetic: rational literals, generator
//! symbols, `+ - * ^`, parentheses, and the small set of operator
//! functions. Precedence climbing, whitespace-insensitive.

use std::fmt;

use tautring::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum CycleExpr {
    Num(Scalar),
    Sym(String),
    Neg(Box<CycleExpr>),
    Add(Box<CycleExpr>, Box<CycleExpr>),
    Sub(Box<CycleExpr>, Box<CycleExpr>),
    Mul(Box<CycleExpr>, Box<CycleExpr>),
    Pow(Box<CycleExpr>, u32),
    Call(String, Vec<CycleExpr>),
}

#[derive(Debug)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Scalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer {
    tokens: Vec<(usize, Token)>,
    end: usize,
}

fn lex(input: &str) -> Result<Lexer, ParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                tokens.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                tokens.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                tokens.push((i, Token::Star));
                i += 1;
            }
            '^' => {
                tokens.push((i, Token::Caret));
                i += 1;
            }
            '(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            ',' => {
                tokens.push((i, Token::Comma));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // a '/' directly between digit groups is a rational literal
                if i < bytes.len()
                    && bytes[i] == b'/'
                    && i + 1 < bytes.len()
                    && bytes[i + 1].is_ascii_digit()
                {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &input[start..i];
                let value = Scalar::parse(text).ok_or_else(|| ParseError {
                    offset: start,
                    message: format!("invalid number `{text}`"),
                    expected: vec!["integer", "rational p/q"],
                })?;
                tokens.push((start, Token::Num(value)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((start, Token::Ident(input[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected character `{c}`"),
                    expected: vec!["number", "symbol", "operator"],
                })
            }
        }
    }
    Ok(Lexer {
        tokens,
        end: input.len(),
    })
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

const FUNCTIONS: &[(&str, usize)] = &[
    ("int", 1),
    ("nf", 1),
    ("cl", 1),
    ("pf1", 1),
    ("pf2", 1),
    ("tr", 1),
    ("delta", 1),
    ("comp", 2),
];

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, token: Token, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError {
                offset: self.offset(),
                message: format!("expected {what}"),
                expected: vec![what],
            })
        }
    }

    fn expr(&mut self) -> Result<CycleExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = CycleExpr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = CycleExpr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<CycleExpr, ParseError> {
        let mut lhs = self.power()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let rhs = self.power()?;
            lhs = CycleExpr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<CycleExpr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let offset = self.offset();
            match self.advance() {
                Some(Token::Num(n)) => {
                    let exp = n.to_i64().filter(|&v| v >= 0).ok_or_else(|| ParseError {
                        offset,
                        message: "exponent must be a non-negative integer".into(),
                        expected: vec!["non-negative integer"],
                    })?;
                    Ok(CycleExpr::Pow(Box::new(base), exp as u32))
                }
                _ => Err(ParseError {
                    offset,
                    message: "expected an integer exponent".into(),
                    expected: vec!["integer"],
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<CycleExpr, ParseError> {
        let offset = self.offset();
        match self.advance() {
            Some(Token::Num(n)) => Ok(CycleExpr::Num(n)),
            Some(Token::Minus) => {
                let inner = self.atom()?;
                Ok(CycleExpr::Neg(Box::new(inner)))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, ")")?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                if self.peek() == Some(&Token::LParen) {
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    while self.peek() == Some(&Token::Comma) {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(Token::RParen, ")")?;
                    let arity = FUNCTIONS
                        .iter()
                        .find(|(f, _)| *f == name)
                        .map(|(_, a)| *a)
                        .ok_or_else(|| ParseError {
                            offset,
                            message: format!("unknown function `{name}`"),
                            expected: vec!["int", "nf", "cl", "pf1", "pf2", "tr", "delta", "comp"],
                        })?;
                    if args.len() != arity {
                        return Err(ParseError {
                            offset,
                            message: format!(
                                "`{name}` takes {arity} argument(s), got {}",
                                args.len()
                            ),
                            expected: vec![],
                        });
                    }
                    Ok(CycleExpr::Call(name, args))
                } else {
                    Ok(CycleExpr::Sym(name))
                }
            }
            other => Err(ParseError {
                offset,
                message: match other {
                    Some(t) => format!("unexpected token {t:?}"),
                    None => "unexpected end of input".into(),
                },
                expected: vec!["number", "symbol", "("],
            }),
        }
    }
}

pub fn parse(input: &str) -> Result<CycleExpr, ParseError> {
    let lexer = lex(input)?;
    let mut parser = Parser {
        tokens: lexer.tokens,
        pos: 0,
        end: lexer.end,
    };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(ParseError {
            offset: parser.offset(),
            message: "trailing input".into(),
            expected: vec!["end of expression"],
        });
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        // 12*g*c - 5*g^3 parses with ^ above * above -
        let e = parse("12*g*c - 5*g^3").unwrap();
        match e {
            CycleExpr::Sub(lhs, rhs) => {
                assert!(matches!(*lhs, CycleExpr::Mul(..)));
                match *rhs {
                    CycleExpr::Mul(_, p) => assert!(matches!(*p, CycleExpr::Pow(_, 3))),
                    other => panic!("unexpected {other:?}"),
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn functions_and_rationals() {
        let e = parse("6*delta(g) + g1*g2*(g1+g2)*I").unwrap();
        assert!(matches!(e, CycleExpr::Add(..)));
        let e = parse("comp(pi4, comp(delta(g), pi4))").unwrap();
        assert!(matches!(e, CycleExpr::Call(ref n, ref args) if n == "comp" && args.len() == 2));
        let e = parse("5/12*g^3").unwrap();
        assert!(matches!(e, CycleExpr::Mul(..)));
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse("12*$").unwrap_err();
        assert_eq!(err.offset, 3);
        let err = parse("comp(g)").unwrap_err();
        assert!(err.message.contains("takes 2"));
        let err = parse("foo(g)").unwrap_err();
        assert!(err.message.contains("unknown function"));
        assert!(parse("g +").is_err());
    }
}
