//! Parser for polynomial expressions in `q1..qn`, `p1..pn`, `l` (λ) and `i`.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'i' | 'l' | 'q'k | 'p'k | '(' expr ')'
//! ```
//! Division is only allowed by nonzero constants.

use thiserror::Error;

use crate::poly::{PhaseSymbol, EXACT};
use crate::scalars::{rat_int, Gauss, LambdaScalar, Rat};
use num_bigint::BigInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("expression is not a polynomial (division by a non-constant at byte {offset})")]
    NonPolynomial { offset: usize },
    #[error("division by zero at byte {offset}")]
    DivisionByZero { offset: usize },
    #[error("unknown variable `{name}` at byte {offset} (chart dimension {dim})")]
    UnknownVariable {
        offset: usize,
        name: String,
        dim: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Int(BigInt),
    Imag,
    Lambda,
    Q(usize),
    P(usize),
    Neg(Box<Spanned>),
    Add(Box<Spanned>, Box<Spanned>),
    Sub(Box<Spanned>, Box<Spanned>),
    Mul(Box<Spanned>, Box<Spanned>),
    Div(Box<Spanned>, Box<Spanned>),
    Pow(Box<Spanned>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub offset: usize,
    pub node: ExprAst,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::SyntaxError {
            offset: self.pos,
            message: message.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Spanned, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            let offset = self.pos;
            let node = match c {
                b'+' => {
                    self.pos += 1;
                    ExprAst::Add(Box::new(lhs), Box::new(self.term()?))
                }
                b'-' => {
                    self.pos += 1;
                    ExprAst::Sub(Box::new(lhs), Box::new(self.term()?))
                }
                _ => break,
            };
            lhs = Spanned { offset, node };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Spanned, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            let offset = self.pos;
            let node = match c {
                b'*' => {
                    self.pos += 1;
                    ExprAst::Mul(Box::new(lhs), Box::new(self.unary()?))
                }
                b'/' => {
                    self.pos += 1;
                    ExprAst::Div(Box::new(lhs), Box::new(self.unary()?))
                }
                _ => break,
            };
            lhs = Spanned { offset, node };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Spanned, ParseError> {
        match self.peek() {
            Some(b'-') => {
                let offset = self.pos;
                self.pos += 1;
                let inner = self.unary()?;
                Ok(Spanned {
                    offset,
                    node: ExprAst::Neg(Box::new(inner)),
                })
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Spanned, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let offset = self.pos;
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a nonnegative integer exponent");
            }
            let txt = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = txt.parse().map_err(|_| ParseError::SyntaxError {
                offset: start,
                message: "exponent too large".into(),
            })?;
            return Ok(Spanned {
                offset,
                node: ExprAst::Pow(Box::new(base), e),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Spanned, ParseError> {
        let offset = match self.peek() {
            Some(_) => self.pos,
            None => return self.err("unexpected end of input"),
        };
        let c = self.src[self.pos];
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let txt = std::str::from_utf8(&self.src[offset..self.pos]).unwrap();
            return Ok(Spanned {
                offset,
                node: ExprAst::Int(txt.parse().unwrap()),
            });
        }
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(b')') {
                return self.err("expected `)`");
            }
            self.pos += 1;
            return Ok(Spanned {
                offset,
                node: inner.node,
            });
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[offset..self.pos]).unwrap();
            let node = match name {
                "i" => ExprAst::Imag,
                "l" | "lambda" => ExprAst::Lambda,
                _ => {
                    let (head, idx) = name.split_at(1);
                    let k: usize = if idx.is_empty() {
                        1
                    } else {
                        match idx.parse() {
                            Ok(k) if k >= 1 => k,
                            _ => {
                                return Err(ParseError::SyntaxError {
                                    offset,
                                    message: format!("unknown identifier `{name}`"),
                                })
                            }
                        }
                    };
                    match head {
                        "q" => ExprAst::Q(k - 1),
                        "p" => ExprAst::P(k - 1),
                        _ => {
                            return Err(ParseError::SyntaxError {
                                offset,
                                message: format!("unknown identifier `{name}`"),
                            })
                        }
                    }
                }
            };
            return Ok(Spanned { offset, node });
        }
        self.err(&format!("unexpected character `{}`", c as char))
    }
}

/// Parses text into an expression tree.
pub fn parse_ast(text: &str) -> Result<Spanned, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn eval(e: &Spanned, dim: usize) -> Result<PhaseSymbol, ParseError> {
    Ok(match &e.node {
        ExprAst::Int(n) => PhaseSymbol::constant(dim, Gauss::real(Rat::from_integer(n.clone()))),
        ExprAst::Imag => PhaseSymbol::constant(dim, Gauss::i()),
        ExprAst::Lambda => PhaseSymbol::lambda(dim),
        ExprAst::Q(j) | ExprAst::P(j) => {
            if *j >= dim {
                let name = if matches!(e.node, ExprAst::Q(_)) {
                    "q"
                } else {
                    "p"
                };
                return Err(ParseError::UnknownVariable {
                    offset: e.offset,
                    name: format!("{name}{}", j + 1),
                    dim,
                });
            }
            if matches!(e.node, ExprAst::Q(_)) {
                PhaseSymbol::q(dim, *j)
            } else {
                PhaseSymbol::p(dim, *j)
            }
        }
        ExprAst::Neg(a) => -eval(a, dim)?,
        ExprAst::Add(a, b) => &eval(a, dim)? + &eval(b, dim)?,
        ExprAst::Sub(a, b) => &eval(a, dim)? - &eval(b, dim)?,
        ExprAst::Mul(a, b) => &eval(a, dim)? * &eval(b, dim)?,
        ExprAst::Div(a, b) => {
            let num = eval(a, dim)?;
            let den = eval(b, dim)?;
            let c = match den.terms().collect::<Vec<_>>().as_slice() {
                [] => return Err(ParseError::DivisionByZero { offset: b.offset }),
                [(m, c)] if *m == crate::poly::Mono::ONE => (*c).clone(),
                _ => return Err(ParseError::NonPolynomial { offset: b.offset }),
            };
            num.scale(&c.inv().expect("nonzero constant"))
        }
        ExprAst::Pow(a, k) => eval(a, dim)?.pow(*k),
    })
}

/// Parses a polynomial symbol in a chart of dimension `dim`.
pub fn parse_symbol(text: &str, dim: usize) -> Result<PhaseSymbol, ParseError> {
    let ast = parse_ast(text)?;
    Ok(eval(&ast, dim)?.with_order(EXACT))
}

/// Parses a λ-series such as `1 - (1/2)*l + (1/3 + 2*i)*l^2`.
pub fn parse_scalar(text: &str, order: i32) -> Result<LambdaScalar, ParseError> {
    let s = parse_symbol(text, 0)?;
    let terms = s.terms().map(|(m, c)| (m.lam_exp(), c.clone()));
    Ok(LambdaScalar::from_map(
        terms,
        order,
        crate::scalars::ScalarMode::PowerSeries,
    ))
}

/// Parses an exact rational literal such as `-3/4`.
pub fn parse_rational(text: &str) -> Result<Rat, ParseError> {
    let s = parse_symbol(text, 0)?;
    match s.terms().collect::<Vec<_>>().as_slice() {
        [] => Ok(rat_int(0)),
        [(m, c)] if *m == crate::poly::Mono::ONE && c.is_real() => Ok(c.re.clone()),
        _ => Err(ParseError::SyntaxError {
            offset: 0,
            message: format!("`{text}` is not a rational number"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Mono;

    #[test]
    fn parses_kinetic_term() {
        let s = parse_symbol("(1/2)*p1^2", 1).unwrap();
        assert_eq!(s.coeff(Mono::new(0, &[], &[2])), Gauss::frac(1, 2));
        assert_eq!(s.to_string(), "(1/2)*p1^2");
    }

    #[test]
    fn parses_mixed() {
        let s = parse_symbol("q1*p1 + l*p2^2", 2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeff(Mono::new(1, &[], &[0, 2])), Gauss::one());
    }

    #[test]
    fn non_polynomial() {
        assert_eq!(
            parse_symbol("p1/q1", 1),
            Err(ParseError::NonPolynomial { offset: 3 })
        );
        assert_eq!(
            parse_symbol("p1/(2-2)", 1),
            Err(ParseError::DivisionByZero { offset: 3 })
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_symbol("q1 + * p1", 1) {
            Err(ParseError::SyntaxError { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        match parse_symbol("q1 p1", 1) {
            Err(ParseError::SyntaxError { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_symbol("q3", 2),
            Err(ParseError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn roundtrip_examples() {
        for (txt, dim) in [
            ("q1*p1 + (1/2)*i*l", 1),
            ("-3 + q1^2*p2 - (2/3 - i)*q2*l^2", 2),
            ("i*l", 1),
            ("(1/2 + 3/7*i)", 2),
            ("-(5/4)*i*p1^3*l^4", 1),
        ] {
            let s = parse_symbol(txt, dim).unwrap();
            let printed = s.to_string();
            assert_eq!(
                parse_symbol(&printed, dim).unwrap(),
                s,
                "{txt} -> {printed}"
            );
        }
    }

    #[test]
    fn scalar_roundtrip() {
        let s = parse_scalar("1 - (1/2)*l + (1/3 + 2*i)*l^2", 6).unwrap();
        assert_eq!(s.to_string(), "1 - (1/2)*l + (1/3 + 2*i)*l^2");
        assert_eq!(parse_scalar(&s.to_string(), 6).unwrap(), s);
    }
}
