//! Square roots and square factors of polynomials.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::gcd::{content_in, gcd};
use super::poly::Polynomial;
use super::Rational;

/// Exact square root of a nonnegative rational.
pub fn rational_sqrt(c: &Rational) -> Option<Rational> {
    if c.is_negative() {
        return None;
    }
    let n = int_sqrt(c.numer())?;
    let d = int_sqrt(c.denom())?;
    Some(Rational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `Q` with `Q^2 = P` and positive lex-leading coefficient, if one exists.
pub fn poly_sqrt(p: &Polynomial) -> Option<Polynomial> {
    let q = sqrt_rec(p)?;
    (&q * &q == *p).then(|| if q.leading_coefficient().is_negative() { -q } else { q })
}

fn sqrt_rec(p: &Polynomial) -> Option<Polynomial> {
    if p.is_zero() {
        return Some(Polynomial::zero());
    }
    if let Some(c) = p.constant_value() {
        return rational_sqrt(&c).map(Polynomial::constant);
    }
    let x = p.variables().into_iter().next().expect("nonconstant");
    let top = p.degree_in(&x);
    if top % 2 == 1 || p.min_degree_in_set(&BTreeSet::from([x.clone()])).unwrap_or(0) % 2 == 1 {
        return None;
    }
    let m = (top / 2) as usize;
    let c = p.coefficients_in(&x);
    let lead = sqrt_rec(&c[2 * m])?;
    let twice_lead = lead.scale(&Rational::from_integer(2.into()));
    // q[i] is the coefficient of x^i in the root
    let mut q = vec![Polynomial::zero(); m + 1];
    q[m] = lead;
    for k in (m..2 * m).rev() {
        let j = k - m;
        let mut rest = c[k].clone();
        for i in (j + 1)..m {
            let other = k - i;
            if other <= m && other > j {
                rest = &rest - &(&q[i] * &q[other]);
            }
        }
        q[j] = rest.div_exact(&twice_lead)?;
    }
    Some(Polynomial::from_coefficients_in(&x, &q))
}

/// Splits `p` as `s^2 * rest` using a square-free decomposition and the
/// square part of the rational content.
pub fn extract_square_factor(p: &Polynomial) -> (Polynomial, Polynomial) {
    if p.is_zero() {
        return (Polynomial::one(), Polynomial::zero());
    }
    let mut s = Polynomial::one();
    for (f, mult) in square_free_factors(&p.primitive()) {
        if mult >= 2 {
            s = &s * &f.pow(mult / 2);
        }
    }
    let rest = p.div_exact(&s.pow(2)).expect("square factor divides");
    let content = rest.rational_content();
    let (cs, cr) = split_rational_square(&content);
    let s = s.scale(&cs);
    let rest = rest.scale(&(cr / content));
    debug_assert_eq!(&(&s * &s) * &rest, *p);
    (s, rest)
}

/// `c = s^2 * r` with `s >= 0` and `r` square-free up to trial division.
fn split_rational_square(c: &Rational) -> (Rational, Rational) {
    let (sa, ra) = split_int_square(c.numer());
    let (sb, rb) = split_int_square(c.denom());
    // a/b = (sa/(sb*rb))^2 * ra*rb
    let s = Rational::new(sa, &sb * &rb);
    let r = Rational::from_integer(ra * rb);
    (s, r)
}

fn split_int_square(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    if let Some(r) = int_sqrt(&rest) {
        return (r, sign);
    }
    let mut s = BigInt::one();
    let mut p = BigInt::from(2u32);
    let bound = BigInt::from(10_000u32);
    while &p * &p <= rest && p <= bound {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            s *= &p;
        }
        p += 1;
    }
    if let Some(r) = int_sqrt(&rest) {
        return (s * r, sign);
    }
    (s, rest * sign)
}

/// Square-free factors with multiplicities; the product of `f^m` equals `p`
/// up to a rational constant.
pub fn square_free_factors(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    collect_square_free(p, &mut out);
    out
}

fn collect_square_free(p: &Polynomial, out: &mut Vec<(Polynomial, u32)>) {
    if p.is_constant() {
        return;
    }
    let x = p.variables().into_iter().next().expect("nonconstant");
    let content = content_in(p, &x);
    let prim = p.div_exact(&content).expect("content divides");
    collect_square_free(&content, out);
    if prim.degree_in(&x) == 0 {
        return;
    }
    yun(&prim, &x, out);
}

fn yun(f: &Polynomial, x: &super::Var, out: &mut Vec<(Polynomial, u32)>) {
    let df = f.derivative(x);
    let a0 = gcd(f, &df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative(x);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        let c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative(x);
        i += 1;
    }
}
