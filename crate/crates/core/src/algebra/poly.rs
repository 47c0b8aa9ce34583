//! Sparse multivariate polynomials over Q.
//!
//! A monomial is a sorted list of `(variable, exponent)` pairs with positive
//! exponents; the term map never stores a zero coefficient. The map is keyed
//! by lexicographic order (earlier variables more significant), so the last
//! entry is the lex-leading term.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::var::Var;
use super::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0.binary_search_by(|(w, _)| w.cmp(v)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn degree_in_set(&self, set: &BTreeSet<Var>) -> u32 {
        self.0.iter().filter(|(v, _)| set.contains(v)).map(|(_, e)| *e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let f = other.degree_in(v);
                    (f > 0).then(|| (v.clone(), (*e).min(f)))
                })
                .collect(),
        )
    }

    /// Removes `v`, returning its exponent and the remaining monomial.
    pub fn split_off(&self, v: &Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, f)| {
                if w == v {
                    e = *f;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }

    /// Graded reverse lexicographic comparison, used for printing.
    pub fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // larger exponent in the last differing variable ranks lower
            let vars: BTreeSet<&Var> = self.0.iter().chain(other.0.iter()).map(|(v, _)| v).collect();
            for v in vars.into_iter().rev() {
                let (a, b) = (self.degree_in(v), other.degree_in(v));
                if a != b {
                    return b.cmp(&a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn integer(n: i64) -> Self {
        Polynomial::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::monomial(Rational::one(), Monomial::var(v, 1))
    }

    pub fn var_named(name: &str) -> Self {
        Polynomial::var(Var::new(name))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.pairs().iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.degree_in(v) > 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn degree_in_set(&self, set: &BTreeSet<Var>) -> u32 {
        self.terms.keys().map(|m| m.degree_in_set(set)).max().unwrap_or(0)
    }

    pub fn min_degree_in_set(&self, set: &BTreeSet<Var>) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_in_set(set)).min()
    }

    /// Lex-leading term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: &Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e > 0 {
                let m2 = rest.mul(&Monomial::var(v.clone(), e - 1));
                out.add_term(m2, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn derivative_n(&self, v: &Var, order: u32) -> Polynomial {
        (0..order).fold(self.clone(), |p, _| p.derivative(v))
    }

    /// Coefficients of `self` viewed in `R[v]`, indexed by power of `v`.
    pub fn coefficients_in(&self, v: &Var) -> Vec<Polynomial> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Polynomial::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(v: &Var, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(v.clone(), i as u32);
            for (n, d) in c.terms() {
                out.add_term(n.mul(&m), d.clone());
            }
        }
        out
    }

    pub fn leading_coefficient_in(&self, v: &Var) -> Polynomial {
        self.coefficients_in(v).pop().unwrap_or_default()
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Sets the listed variables to rational values.
    pub fn evaluate(&self, values: &BTreeMap<Var, Rational>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for (v, e) in m.pairs() {
                match values.get(v) {
                    Some(x) => coef *= num_traits::pow(x.clone(), *e as usize),
                    None => rest.push((v.clone(), *e)),
                }
            }
            out.add_term(Monomial(rest), coef);
        }
        out
    }

    /// Replaces variables by polynomials.
    pub fn compose(&self, map: &BTreeMap<Var, Polynomial>) -> Polynomial {
        let mut powers: BTreeMap<(Var, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            let mut rest = Vec::new();
            for (v, e) in m.pairs() {
                match map.get(v) {
                    Some(p) => {
                        let pw = powers.entry((v.clone(), *e)).or_insert_with(|| p.pow(*e)).clone();
                        term = &term * &pw;
                    }
                    None => rest.push((v.clone(), *e)),
                }
            }
            let term = term.mul_monomial(&Monomial(rest), &Rational::one());
            out = &out + &term;
        }
        out
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let pairs = m.pairs().iter().map(|(v, e)| (map.get(v).cloned().unwrap_or_else(|| v.clone()), *e));
            (Monomial::from_pairs(pairs), c.clone())
        }))
    }

    /// Homogeneous components with respect to `active`, keyed by degree.
    pub fn homogeneous_components(&self, active: &BTreeSet<Var>) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree_in_set(active)).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn is_homogeneous_in(&self, active: &BTreeSet<Var>) -> bool {
        self.homogeneous_components(active).len() <= 1
    }

    /// Pads every term by powers of `hvar` up to degree `k` in `active`.
    pub fn k_homogenize(&self, k: u32, hvar: &Var, active: &BTreeSet<Var>) -> Option<Polynomial> {
        if self.degree_in_set(active) > k {
            return None;
        }
        Some(Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let pad = k - m.degree_in_set(active);
            (m.mul(&Monomial::var(hvar.clone(), pad)), c.clone())
        })))
    }

    pub fn homogenize(&self, hvar: &Var, active: &BTreeSet<Var>) -> Polynomial {
        self.k_homogenize(self.degree_in_set(active), hvar, active).expect("degree bound holds by construction")
    }

    /// Gcd of numerators over lcm of denominators, sign of the leading coefficient.
    pub fn rational_content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        let r = Rational::new(num, den);
        if self.leading_coefficient().is_negative() {
            -r
        } else {
            r
        }
    }

    /// Integer coefficients with gcd 1 and positive lex-leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        self.scale(&self.rational_content().recip())
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        self.scale(&self.leading_coefficient().recip())
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut big, small) =
            if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly as p;

    fn set(names: &[&str]) -> BTreeSet<Var> {
        names.iter().map(|n| Var::new(n)).collect()
    }

    #[test]
    fn shift_assembly_from_components() {
        // g2 + g1 recombined
        let sum = p("u^2+x^2") + p("-2*x");
        assert_eq!(sum, p("u^2+x^2-2*x"));
    }

    #[test]
    fn annihilator() {
        assert!((p("x^2+y") * Polynomial::zero()).is_zero());
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("u^2+x^2-1").derivative(&Var::new("x")), p("2*x"));
        assert_eq!(p("u^2-x^4-y^3").derivative_n(&Var::new("u"), 2), p("2"));
        assert_eq!(p("u^2-x^4-y^3").derivative_n(&Var::new("u"), 0), p("u^2-x^4-y^3"));
    }

    #[test]
    fn components() {
        let comps = p("u^2+x^2-2*x").homogeneous_components(&set(&["u", "x"]));
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[&2], p("u^2+x^2"));
        assert_eq!(comps[&1], p("-2*x"));
        assert_eq!(p("x*y+y^2").homogeneous_components(&set(&["x", "y"])).len(), 1);
    }

    #[test]
    fn components_with_parameters() {
        // parameter x does not count towards degree
        let comps = p("u^2+x^2*y-x").homogeneous_components(&set(&["u", "y"]));
        assert_eq!(comps[&2], p("u^2"));
        assert_eq!(comps[&1], p("x^2*y"));
        assert_eq!(comps[&0], p("-x"));
    }

    #[test]
    fn homogenization() {
        let z = Var::new("z");
        assert_eq!(p("y-x^2").homogenize(&z, &set(&["x", "y"])), p("z*y-x^2"));
        assert_eq!(p("x*y+x^2").homogenize(&z, &set(&["x", "y"])), p("x*y+x^2"));
        assert_eq!(p("u^2-x-y-1").homogenize(&z, &set(&["u", "x", "y"])), p("u^2-x*z-y*z-z^2"));
    }

    #[test]
    fn k_homogenization() {
        let z = Var::new("z");
        let xs = set(&["x1", "x2"]);
        assert_eq!(p("x1*x2").k_homogenize(4, &z, &xs), Some(p("x1*x2*z^2")));
        assert_eq!(p("-1/4").k_homogenize(1, &z, &set(&["x", "y"])), Some(p("-z/4")));
        assert_eq!(p("x1*x2+x1").k_homogenize(1, &z, &xs), None);
        assert_eq!(p("x1*x2+x1").k_homogenize(2, &z, &xs), Some(p("x1*x2+x1").homogenize(&z, &xs)));
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("x^2-y^2").div_exact(&p("x-y")), Some(p("x+y")));
        assert_eq!(p("x^2+1").div_exact(&p("x-1")), None);
    }

    #[test]
    fn lex_leading_term() {
        let f = p("x^3+u*y+u^2");
        let (m, _) = f.leading_term().unwrap();
        assert_eq!(m, &Monomial::var(Var::new("u"), 2));
    }
}
