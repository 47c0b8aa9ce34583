//! One adjoined square root, carried as a polynomial variable `r` with the
//! rewriting rule `r^2 -> g`.

use std::fmt;

use super::poly::{Monomial, Polynomial};
use super::ratfun::RationalFunction;
use super::var::Var;
use super::{AlgebraError, Rational};

const PREFIX: &str = "sqrt(";

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootToken {
    symbol: Var,
    radicand: Polynomial,
}

impl RootToken {
    /// The symbol's name is the rendered root itself, so printing any value
    /// that contains it yields re-parseable text.
    pub fn new(radicand: Polynomial) -> Self {
        let symbol = Var::new(&format!("{PREFIX}{radicand})"));
        RootToken { symbol, radicand }
    }

    pub fn is_token(v: &Var) -> bool {
        v.name().starts_with(PREFIX)
    }

    pub fn symbol(&self) -> &Var {
        &self.symbol
    }

    pub fn radicand(&self) -> &Polynomial {
        &self.radicand
    }

    pub fn reduce_poly(&self, p: &Polynomial) -> Polynomial {
        if p.degree_in(&self.symbol) <= 1 {
            return p.clone();
        }
        let g_powers = |k: u32| self.radicand.pow(k);
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let (e, rest) = m.split_off(&self.symbol);
            let mut t = Polynomial::monomial(c.clone(), rest);
            if e % 2 == 1 {
                t = t.mul_monomial(&Monomial::var(self.symbol.clone(), 1), &Rational::from_integer(1.into()));
            }
            out = &out + &(&t * &g_powers(e / 2));
        }
        out
    }

    /// Reduces both parts and clears the token from the denominator with the
    /// conjugate `a - b r` of `a + b r`.
    pub fn reduce(&self, f: &RationalFunction) -> RationalFunction {
        let num = self.reduce_poly(f.num());
        let den = self.reduce_poly(f.den());
        if !den.contains_var(&self.symbol) {
            return RationalFunction::new(num, den).expect("nonzero denominator");
        }
        let c = den.coefficients_in(&self.symbol);
        let a = &c[0];
        let b = &c[1];
        let r = Polynomial::var(self.symbol.clone());
        let conj = a - &(b * &r);
        let new_den = &(a * a) - &(&(b * b) * &self.radicand);
        let new_num = self.reduce_poly(&(&num * &conj));
        RationalFunction::new(new_num, new_den).expect("conjugate norm is nonzero for a non-square radicand")
    }

    pub fn substitute(
        &self,
        f: &RationalFunction,
        map: &std::collections::BTreeMap<Var, RationalFunction>,
    ) -> Result<RationalFunction, AlgebraError> {
        Ok(self.reduce(&f.substitute(map)?))
    }

    /// Any token symbol in `f` other than this one.
    pub fn foreign_token(&self, f: &RationalFunction) -> Option<Var> {
        f.variables().into_iter().find(|v| RootToken::is_token(v) && *v != self.symbol)
    }
}

impl fmt::Debug for RootToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)
    }
}

/// The single live token among `values`, or an error if there are two.
pub fn live_token<'a>(values: impl IntoIterator<Item = &'a RationalFunction>) -> Result<Option<Var>, AlgebraError> {
    let mut found: Option<Var> = None;
    for v in values {
        for s in v.variables() {
            if RootToken::is_token(&s) {
                match &found {
                    Some(prev) if *prev != s => return Err(AlgebraError::NeedsExtension),
                    _ => found = Some(s),
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly as p;

    fn token() -> RootToken {
        RootToken::new(p("1-x^2"))
    }

    #[test]
    fn defining_rule() {
        let t = token();
        let r = Polynomial::var(t.symbol().clone());
        assert_eq!(t.reduce_poly(&r.pow(2)), p("1-x^2"));
        assert_eq!(t.reduce_poly(&r.pow(3)), &r * &p("1-x^2"));
    }

    #[test]
    fn stays_first_degree() {
        let t = token();
        let r = Polynomial::var(t.symbol().clone());
        let w = p("(x^2-1)*w^2");
        let f = RationalFunction::new(&r * &(&w + &p("1")), &w - &p("1")).unwrap();
        let sq = t.reduce(&(&f * &f));
        assert!(sq.num().degree_in(t.symbol()) <= 1);
        assert!(!sq.den().contains_var(t.symbol()));
    }

    #[test]
    fn conjugate_clears_denominator() {
        let t = token();
        let r = Polynomial::var(t.symbol().clone());
        let f = RationalFunction::new(Polynomial::one(), &r + &p("1")).unwrap();
        let g = t.reduce(&f);
        assert!(!g.den().contains_var(t.symbol()));
        // (1 + r) * g == 1
        let back = t.reduce(&(&g * &RationalFunction::from(&r + &p("1"))));
        assert!(back.is_one());
    }

    #[test]
    fn symbol_prints_as_root() {
        assert_eq!(token().symbol().name(), "sqrt(-x^2+1)");
    }
}
