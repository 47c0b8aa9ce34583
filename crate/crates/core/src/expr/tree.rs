use std::fmt;

use num_traits::Signed;

use crate::algebra::Rational;

/// Parsed expression; subtraction is `Add` with a `Neg` child and division
/// is `Mul` with a negative `Pow`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExpressionTree {
    Number(Rational),
    Symbol(String),
    Neg(Box<ExpressionTree>),
    Add(Vec<ExpressionTree>),
    Mul(Vec<ExpressionTree>),
    Pow(Box<ExpressionTree>, i64),
    Sqrt(Box<ExpressionTree>),
}

use ExpressionTree::*;

impl ExpressionTree {
    pub fn number(n: i64) -> Self {
        Number(Rational::from_integer(n.into()))
    }

    pub fn symbol(name: &str) -> Self {
        Symbol(name.to_string())
    }

    /// Negation that folds into numeric literals.
    pub fn negated(self) -> Self {
        match self {
            Number(c) => Number(-c),
            t => Neg(Box::new(t)),
        }
    }

    /// Reciprocal as a negative power; `b^e` becomes `b^-e`.
    pub fn recip(self) -> Self {
        match self {
            Pow(b, e) => Pow(b, -e),
            t => Pow(Box::new(t), -1),
        }
    }

    pub fn contains_sqrt(&self) -> bool {
        match self {
            Number(_) | Symbol(_) => false,
            Sqrt(_) => true,
            Neg(t) | Pow(t, _) => t.contains_sqrt(),
            Add(ts) | Mul(ts) => ts.iter().any(|t| t.contains_sqrt()),
        }
    }

    /// Flattens nested sums and products and sorts their children.
    pub fn canonical(&self) -> Self {
        match self {
            Number(_) | Symbol(_) => self.clone(),
            Neg(t) => t.canonical().negated(),
            Pow(t, e) => Pow(Box::new(t.canonical()), *e),
            Sqrt(t) => Sqrt(Box::new(t.canonical())),
            Add(ts) => {
                let mut out = Vec::new();
                for t in ts {
                    match t.canonical() {
                        Add(inner) => out.extend(inner),
                        c => out.push(c),
                    }
                }
                out.sort();
                Add(out)
            }
            Mul(ts) => {
                let mut out = Vec::new();
                for t in ts {
                    match t.canonical() {
                        Mul(inner) => out.extend(inner),
                        c => out.push(c),
                    }
                }
                out.sort();
                Mul(out)
            }
        }
    }

    fn is_atomic(&self) -> bool {
        match self {
            Symbol(_) | Sqrt(_) => true,
            Number(c) => c.is_integer() && !c.is_negative(),
            _ => false,
        }
    }

    fn write_as_pow_base(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    // A factor of a product in a non-leading position.
    fn write_as_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Add(_) | Mul(_) => write!(f, "({self})"),
            Number(c) if !c.is_integer() || c.is_negative() => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }

    // A summand after a sign has already been written.
    fn write_as_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Add(_) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for ExpressionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number(c) => {
                if c.is_integer() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "{}/{}", c.numer(), c.denom())
                }
            }
            Symbol(s) => f.write_str(s),
            Neg(t) => match **t {
                Add(_) | Mul(_) | Neg(_) => write!(f, "-({t})"),
                Number(_) => write!(f, "-({t})"),
                _ => write!(f, "-{t}"),
            },
            Sqrt(t) => write!(f, "sqrt({t})"),
            Pow(b, e) => {
                b.write_as_pow_base(f)?;
                write!(f, "^{e}")
            }
            Add(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i == 0 {
                        match t {
                            Add(_) => write!(f, "({t})")?,
                            _ => write!(f, "{t}")?,
                        }
                        continue;
                    }
                    match t {
                        Neg(inner) if !matches!(**inner, Neg(_) | Number(_)) => {
                            f.write_str("-")?;
                            inner.write_as_term(f)?;
                        }
                        Number(c) if c.is_negative() => write!(f, "-{}", Number(-c.clone()))?,
                        _ => {
                            f.write_str("+")?;
                            t.write_as_term(f)?;
                        }
                    }
                }
                Ok(())
            }
            Mul(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i == 0 {
                        let divides_next = matches!(ts.get(1), Some(Pow(b, e)) if *e < 0 && !matches!(**b, Pow(..)));
                        match t {
                            Add(_) | Mul(_) => write!(f, "({t})")?,
                            // `2/3` would re-parse as a single literal
                            Number(c) if c.is_integer() && divides_next => write!(f, "({t})")?,
                            _ => write!(f, "{t}")?,
                        }
                        continue;
                    }
                    match t {
                        Pow(b, e) if *e < 0 && !matches!(**b, Pow(..)) => {
                            f.write_str("/")?;
                            b.write_as_pow_base(f)?;
                            if *e != -1 {
                                write!(f, "^{}", -e)?;
                            }
                        }
                        _ => {
                            f.write_str("*")?;
                            t.write_as_factor(f)?;
                        }
                    }
                }
                Ok(())
            }
        }
    }
}
