use std::collections::BTreeMap;
use std::fmt;

use super::tree::ExpressionTree;
use super::ExprError;
use crate::algebra::{rational_sqrt, Polynomial, RationalFunction, RootToken, Var};

/// A root `prefactor * sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootExpression {
    pub prefactor: RationalFunction,
    pub radicand: RationalFunction,
}

impl RootExpression {
    pub fn new(prefactor: RationalFunction, radicand: RationalFunction) -> Self {
        RootExpression { prefactor, radicand }
    }

    pub fn sqrt_of(radicand: RationalFunction) -> Self {
        RootExpression { prefactor: RationalFunction::one(), radicand }
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }
}

impl fmt::Display for RootExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.prefactor);
        }
        if self.prefactor.is_one() {
            write!(f, "sqrt({})", self.radicand)
        } else if self.prefactor.num().num_terms() > 1 && self.prefactor.is_polynomial() {
            write!(f, "({})*sqrt({})", self.prefactor, self.radicand)
        } else if self.prefactor.is_polynomial() {
            write!(f, "{}*sqrt({})", self.prefactor, self.radicand)
        } else {
            write!(f, "sqrt({})*{}", self.radicand, self.prefactor)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RootMode {
    Reject,
    Placeholder,
    Token,
}

struct Converter {
    mode: RootMode,
    placeholder: Var,
    seen_root: Option<RationalFunction>,
}

impl Converter {
    fn run(&mut self, t: &ExpressionTree) -> Result<RationalFunction, ExprError> {
        use ExpressionTree::*;
        Ok(match t {
            Number(c) => RationalFunction::constant(c.clone()),
            Symbol(s) => RationalFunction::var(Var::new(s)),
            Neg(inner) => -self.run(inner)?,
            Add(ts) => {
                let mut acc = RationalFunction::zero();
                for t in ts {
                    acc = &acc + &self.run(t)?;
                }
                acc
            }
            Mul(ts) => {
                let mut acc = RationalFunction::one();
                for t in ts {
                    acc = &acc * &self.run(t)?;
                }
                acc
            }
            Pow(b, e) => {
                let base = self.run(b)?;
                let e = i32::try_from(*e).map_err(|_| ExprError::ExponentTooLarge)?;
                base.pow(e).map_err(|_| ExprError::DivisionByZero)?
            }
            Sqrt(inner) => {
                if inner.contains_sqrt() {
                    return Err(ExprError::NestedRoot);
                }
                let radicand = self.run(inner)?;
                match self.mode {
                    RootMode::Reject => return Err(ExprError::UnexpectedRoot),
                    RootMode::Placeholder => {
                        match &self.seen_root {
                            Some(prev) if *prev != radicand => return Err(ExprError::MultipleRoots),
                            _ => self.seen_root = Some(radicand),
                        }
                        RationalFunction::var(self.placeholder.clone())
                    }
                    RootMode::Token => {
                        // sqrt(n/d) = sqrt(n*d)/d
                        let (n, d) = radicand.clone().into_parts();
                        let nd = &n * &d;
                        if let Some(c) = nd.constant_value().and_then(|c| rational_sqrt(&c)) {
                            return Ok(RationalFunction::new(Polynomial::constant(c), d).expect("nonzero denominator"));
                        }
                        match &self.seen_root {
                            Some(prev) if *prev != radicand => return Err(ExprError::MultipleRoots),
                            _ => self.seen_root = Some(radicand),
                        }
                        let token = RootToken::new(nd);
                        RationalFunction::new(Polynomial::var(token.symbol().clone()), d).expect("nonzero denominator")
                    }
                }
            }
        })
    }
}

fn converter(mode: RootMode) -> Converter {
    Converter { mode, placeholder: Var::new("#root"), seen_root: None }
}

pub fn to_rational_function(tree: &ExpressionTree) -> Result<RationalFunction, ExprError> {
    converter(RootMode::Reject).run(tree)
}

/// Like [`to_rational_function`], but each `sqrt(g)` becomes a root token
/// symbol reduced by `r^2 -> g`; at most one distinct root may occur.
pub fn to_value_with_root(tree: &ExpressionTree) -> Result<(RationalFunction, Option<RootToken>), ExprError> {
    let mut c = converter(RootMode::Token);
    let value = c.run(tree)?;
    let token = c.seen_root.map(|r| {
        let (n, d) = r.into_parts();
        RootToken::new(&n * &d)
    });
    let value = match &token {
        Some(t) => t.reduce(&value),
        None => value,
    };
    Ok((value, token))
}

pub fn to_root_expression(tree: &ExpressionTree) -> Result<RootExpression, ExprError> {
    let mut c = converter(RootMode::Placeholder);
    let value = c.run(tree)?;
    let Some(radicand) = c.seen_root else {
        return Ok(RootExpression::new(value, RationalFunction::one()));
    };
    let s = &c.placeholder;
    let exponent_of = |p: &Polynomial| -> Result<i32, ExprError> {
        let mut degs = p.terms().map(|(m, _)| m.degree_in(s));
        let first = degs.next().unwrap_or(0);
        if degs.all(|d| d == first) {
            Ok(first as i32)
        } else {
            Err(ExprError::NotAProduct)
        }
    };
    let e = exponent_of(value.num())? - exponent_of(value.den())?;
    let unit = BTreeMap::from([(s.clone(), Polynomial::one())]);
    let strip = |p: &Polynomial| p.compose(&unit);
    let rest = RationalFunction::new(strip(value.num()), strip(value.den())).expect("nonzero denominator");
    let half = e.div_euclid(2);
    let prefactor = &rest * &radicand.pow(half).map_err(|_| ExprError::DivisionByZero)?;
    if e.rem_euclid(2) == 0 {
        return Ok(RootExpression::new(prefactor, RationalFunction::one()));
    }
    if radicand.is_zero() {
        return Err(ExprError::ZeroRadicand);
    }
    if let Some(c) = radicand.constant_value() {
        if let Some(r) = rational_sqrt(&c) {
            return Ok(RootExpression::new(prefactor.scale(&r), RationalFunction::one()));
        }
    }
    Ok(RootExpression::new(prefactor, radicand))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn root(s: &str) -> Result<RootExpression, ExprError> {
        to_root_expression(&parse_expression(s).unwrap())
    }

    fn rf(s: &str) -> RationalFunction {
        to_rational_function(&parse_expression(s).unwrap()).unwrap()
    }

    #[test]
    fn single_radical() {
        let r = root("sqrt(1-x^2)").unwrap();
        assert!(r.prefactor.is_one());
        assert_eq!(r.radicand, rf("1-x^2"));
    }

    #[test]
    fn prefactor_outside() {
        let r = root("1/x*sqrt(x^4+4*x^2*y^2+4)").unwrap();
        assert_eq!(r.prefactor, rf("1/x"));
        assert_eq!(r.radicand, rf("x^4+4*x^2*y^2+4"));
        let r = root("sqrt((x^4+4*x^2*y^2+4)/(4*x^2))").unwrap();
        assert_eq!(r.radicand, rf("(x^4+4*x^2*y^2+4)/(4*x^2)"));
    }

    #[test]
    fn reciprocal_and_even_powers() {
        let r = root("1/sqrt(x)").unwrap();
        assert_eq!(r.prefactor, rf("1/x"));
        assert_eq!(r.radicand, rf("x"));
        let r = root("sqrt(x)*sqrt(x)*y").unwrap();
        assert!(r.is_rational());
        assert_eq!(r.prefactor, rf("x*y"));
        assert!(root("x+1").unwrap().is_rational());
    }

    #[test]
    fn rejected_shapes() {
        assert_eq!(root("sqrt(x^2+sqrt(x^4+y^3))"), Err(ExprError::NestedRoot));
        assert_eq!(root("sqrt(x)*sqrt(y)"), Err(ExprError::MultipleRoots));
        assert_eq!(root("1+sqrt(x)"), Err(ExprError::NotAProduct));
        assert_eq!(root("x/0"), Err(ExprError::DivisionByZero));
    }

    #[test]
    fn token_values() {
        let (v, t) = to_value_with_root(&parse_expression("sqrt(1-x^2)*w/(w+1)").unwrap()).unwrap();
        let t = t.unwrap();
        assert_eq!(t.radicand(), &rf("1-x^2").num().clone());
        assert!(v.num().contains_var(t.symbol()));
        let (v, t) = to_value_with_root(&parse_expression("sqrt(4)*x").unwrap()).unwrap();
        assert_eq!(v, rf("2*x"));
        assert!(t.is_none());
    }
}
