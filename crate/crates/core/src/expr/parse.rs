use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::tree::ExpressionTree;
use super::ExprError;
use crate::algebra::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(ExprError::syntax(i, "floating-point literals are not supported"));
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ExprError::syntax(i, &format!("unexpected character '{ch}'")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ExprError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(ExprError::syntax(self.offset(), &format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<ExpressionTree, ExprError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(self.term()?.negated());
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { ExpressionTree::Add(terms) })
    }

    fn term(&mut self) -> Result<ExpressionTree, ExprError> {
        let literal_start = self.is_int_literal_factor();
        let mut factors = vec![self.factor()?];
        // `int/int` at the start of a term is a single rational literal
        if literal_start && self.peek() == Some(&Tok::Slash) {
            if let Some((_, Tok::Int(d))) = self.toks.get(self.pos + 1) {
                let after = self.toks.get(self.pos + 2).map(|(_, t)| t);
                if !d.is_zero() && after != Some(&Tok::Caret) {
                    let d = d.clone();
                    self.pos += 2;
                    if let ExpressionTree::Number(n) = &factors[0] {
                        factors[0] = ExpressionTree::Number(n / Rational::from_integer(d));
                    }
                }
            }
        }
        loop {
            if self.eat(&Tok::Star) {
                factors.push(self.factor()?);
            } else if self.eat(&Tok::Slash) {
                factors.push(self.factor()?.recip());
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { ExpressionTree::Mul(factors) })
    }

    // Optional signs followed by an integer with no exponent.
    fn is_int_literal_factor(&self) -> bool {
        let mut i = self.pos;
        while let Some((_, Tok::Minus)) = self.toks.get(i) {
            i += 1;
        }
        matches!(self.toks.get(i), Some((_, Tok::Int(_)))) && !matches!(self.toks.get(i + 1), Some((_, Tok::Caret)))
    }

    fn factor(&mut self) -> Result<ExpressionTree, ExprError> {
        let mut negations = 0;
        while self.eat(&Tok::Minus) {
            negations += 1;
        }
        let mut t = self.power()?;
        for _ in 0..negations {
            t = t.negated();
        }
        Ok(t)
    }

    fn power(&mut self) -> Result<ExpressionTree, ExprError> {
        let base = self.base()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let mut exps = vec![self.exponent()?];
        while self.eat(&Tok::Caret) {
            exps.push(self.exponent()?);
        }
        let mut e = exps.pop().unwrap();
        while let Some(b) = exps.pop() {
            let at = self.offset();
            let Ok(k) = u32::try_from(e) else {
                return Err(ExprError::NonIntegerExponent { position: at });
            };
            e = b.checked_pow(k).ok_or_else(|| ExprError::syntax(at, "exponent too large"))?;
        }
        Ok(ExpressionTree::Pow(Box::new(base), e))
    }

    fn exponent(&mut self) -> Result<i64, ExprError> {
        let at = self.offset();
        let paren = self.eat(&Tok::LParen);
        let neg = self.eat(&Tok::Minus);
        let value = match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.to_i64().ok_or_else(|| ExprError::syntax(at, "exponent too large"))?;
                self.pos += 1;
                if neg {
                    -n
                } else {
                    n
                }
            }
            None => return Err(ExprError::syntax(at, "expected exponent")),
            _ => return Err(ExprError::NonIntegerExponent { position: at }),
        };
        if paren && !self.eat(&Tok::RParen) {
            return Err(ExprError::NonIntegerExponent { position: at });
        }
        Ok(value)
    }

    fn base(&mut self) -> Result<ExpressionTree, ExprError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(ExpressionTree::Number(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "sqrt" {
                    self.expect(&Tok::LParen, "'(' after sqrt")?;
                    let inner = self.expr()?;
                    self.expect(&Tok::RParen, "')'")?;
                    Ok(ExpressionTree::Sqrt(Box::new(inner)))
                } else {
                    Ok(ExpressionTree::Symbol(name))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(_) => Err(ExprError::syntax(at, "expected a number, symbol or '('")),
            None => Err(ExprError::syntax(at, "unexpected end of input")),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<ExpressionTree, ExprError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ExprError::Empty);
    }
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let tree = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ExprError::syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExpressionTree::*;

    fn sym(s: &str) -> ExpressionTree {
        ExpressionTree::symbol(s)
    }

    #[test]
    fn sum_of_negated_powers() {
        let t = parse_expression("1-x^2-y^2").unwrap();
        let expect = Add(vec![
            ExpressionTree::number(1),
            Neg(Box::new(Pow(Box::new(sym("x")), 2))),
            Neg(Box::new(Pow(Box::new(sym("y")), 2))),
        ]);
        assert_eq!(t, expect);
    }

    #[test]
    fn sqrt_node() {
        let t = parse_expression("sqrt((1-x1-x2-x3)^2-4*x1*x2*x3)").unwrap();
        assert!(matches!(t, Sqrt(_)));
    }

    #[test]
    fn symbolic_exponent_rejected() {
        assert!(matches!(parse_expression("x^y"), Err(ExprError::NonIntegerExponent { position: 2 })));
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(parse_expression("  "), Err(ExprError::Empty));
    }

    #[test]
    fn precedence() {
        // unary minus binds looser than ^
        assert_eq!(parse_expression("-x^2").unwrap(), Neg(Box::new(Pow(Box::new(sym("x")), 2))));
        assert_eq!(parse_expression("x^2^3").unwrap(), Pow(Box::new(sym("x")), 8));
        assert_eq!(parse_expression("x^-2").unwrap(), Pow(Box::new(sym("x")), -2));
    }

    #[test]
    fn fraction_literal_only_at_term_start() {
        let q = |a: i64, b: i64| Number(Rational::new(a.into(), b.into()));
        assert_eq!(parse_expression("1/4*x").unwrap(), Mul(vec![q(1, 4), sym("x")]));
        assert_eq!(parse_expression("-1/4").unwrap(), q(-1, 4));
        let t = parse_expression("x/2/3").unwrap();
        assert_eq!(
            t,
            Mul(vec![
                sym("x"),
                Pow(Box::new(ExpressionTree::number(2)), -1),
                Pow(Box::new(ExpressionTree::number(3)), -1)
            ])
        );
    }

    #[test]
    fn error_positions() {
        match parse_expression("x + * y") {
            Err(ExprError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_expression("1.5*x").is_err());
        assert!(parse_expression("(x+1").is_err());
        assert!(parse_expression("sqrt x").is_err());
    }
}
