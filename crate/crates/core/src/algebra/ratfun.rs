use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{Monomial, Polynomial};
use super::var::Var;
use super::{AlgebraError, Rational};

/// Reduced quotient of two polynomials with a monic (lex) denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::constant(c).into()
    }

    pub fn integer(n: i64) -> Self {
        Polynomial::integer(n).into()
    }

    pub fn var(v: Var) -> Self {
        Polynomial::var(v).into()
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        self.as_polynomial().and_then(|p| p.constant_value())
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RationalFunction::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, e: i32) -> Result<Self, AlgebraError> {
        if e >= 0 {
            Ok(RationalFunction { num: self.num.pow(e as u32), den: self.den.pow(e as u32) })
        } else {
            self.recip()?.pow(-e)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Exact composition with `map`; unmapped variables pass through.
    pub fn substitute(&self, map: &BTreeMap<Var, RationalFunction>) -> Result<Self, AlgebraError> {
        let (n1, d1) = substitute_parts(&self.num, map);
        let (n2, d2) = substitute_parts(&self.den, map);
        let den = &d1 * &n2;
        if den.is_zero() {
            return Err(AlgebraError::DenominatorVanishes);
        }
        Ok(RationalFunction::reduced(&n1 * &d2, den))
    }

    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> Result<Self, AlgebraError> {
        let den = self.den.evaluate(values);
        if den.is_zero() {
            return Err(AlgebraError::DenominatorVanishes);
        }
        Ok(RationalFunction::reduced(self.num.evaluate(values), den))
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Self {
        RationalFunction::reduced(self.num.rename(map), self.den.rename(map))
    }

    pub fn derivative(&self, v: &Var) -> Self {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        RationalFunction::reduced(n, self.den.pow(2))
    }

    /// Flips the overall sign so the leading numerator coefficient is positive.
    pub fn sign_normalized(&self) -> Self {
        if self.num.leading_coefficient() < Rational::zero() {
            -self
        } else {
            self.clone()
        }
    }
}

/// `p ∘ map` as an unreduced `(numerator, denominator)` pair.
pub fn substitute_parts(p: &Polynomial, map: &BTreeMap<Var, RationalFunction>) -> (Polynomial, Polynomial) {
    let used: Vec<&Var> = p.variables().into_iter().filter_map(|v| map.get_key_value(&v).map(|(k, _)| k)).collect();
    if used.is_empty() {
        return (p.clone(), Polynomial::one());
    }
    struct Powers {
        num: Vec<Polynomial>,
        den: Vec<Polynomial>,
        top: u32,
    }
    let mut powers: BTreeMap<&Var, Powers> = BTreeMap::new();
    for v in &used {
        let top = p.degree_in(v);
        let rf = &map[*v];
        let mut num = vec![Polynomial::one()];
        let mut den = vec![Polynomial::one()];
        for k in 1..=top as usize {
            num.push(&num[k - 1] * rf.num());
            den.push(&den[k - 1] * rf.den());
        }
        powers.insert(*v, Powers { num, den, top });
    }
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut term = Polynomial::one();
        let mut rest = Vec::new();
        let mut seen: BTreeSet<&Var> = BTreeSet::new();
        for (v, e) in m.pairs() {
            if let Some(pw) = powers.get(v) {
                seen.insert(v);
                term = &term * &pw.num[*e as usize];
                term = &term * &pw.den[(pw.top - e) as usize];
            } else {
                rest.push((v.clone(), *e));
            }
        }
        for (v, pw) in &powers {
            if !seen.contains(v) {
                term = &term * &pw.den[pw.top as usize];
            }
        }
        out = &out + &term.mul_monomial(&Monomial::from_pairs(rest), c);
    }
    let den = powers.values().fold(Polynomial::one(), |acc, pw| &acc * &pw.den[pw.top as usize]);
    (out, den)
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduced(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly as p, parse_rf as r};

    #[test]
    fn cancellation() {
        let q = RationalFunction::new(p("x^2-1"), p("x-1")).unwrap();
        assert_eq!(q, p("x+1").into());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(RationalFunction::new(p("x"), Polynomial::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn monic_denominator() {
        let q = RationalFunction::new(p("t2^2"), p("4*t1^3+4*t2")).unwrap();
        assert_eq!(q.den(), &p("t1^3+t2"));
        assert_eq!(q.num(), &p("t2^2/4"));
    }

    #[test]
    fn circle_substitution() {
        let map = BTreeMap::from([(Var::new("x"), r("(t^2-1)/(t^2+1)"))]);
        let out = RationalFunction::from(p("1-x^2")).substitute(&map).unwrap();
        assert_eq!(out, r("4*t^2/(t^2+1)^2"));
        let map2 = BTreeMap::from([(Var::new("u"), r("2*t/(t^2+1)")), (Var::new("x"), r("(t^2-1)/(t^2+1)"))]);
        assert!(RationalFunction::from(p("u^2+x^2-1")).substitute(&map2).unwrap().is_zero());
    }

    #[test]
    fn identity_substitution() {
        let f = r("(x^2+y)/(x-y)");
        let map = BTreeMap::from([(Var::new("x"), r("x")), (Var::new("y"), r("y"))]);
        assert_eq!(f.substitute(&map).unwrap(), f);
    }

    #[test]
    fn vanishing_denominator() {
        let map = BTreeMap::from([(Var::new("x"), r("y"))]);
        assert_eq!(r("1/(x-y)").substitute(&map), Err(AlgebraError::DenominatorVanishes));
    }
}
