//! Multivariate GCD: a heuristic evaluation scheme, with recursive
//! primitive PRS as the fallback.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, Polynomial};
use super::var::Var;
use super::Rational;

/// Greatest common divisor, normalized to integer coefficients with gcd 1 and
/// a positive lex-leading coefficient. `gcd(0, 0)` is zero.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if let (Some(ma), Some(mb)) = (single_monomial(a), single_monomial(b)) {
        return Polynomial::monomial(Rational::one(), ma.gcd(&mb));
    }
    if let Some(m) = single_monomial(a) {
        return monomial_gcd(&m, b);
    }
    if let Some(m) = single_monomial(b) {
        return monomial_gcd(&m, a);
    }
    let (small, big) = if a.num_terms() <= b.num_terms() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.primitive();
    }
    let vars: Vec<Var> = a.variables().union(&b.variables()).cloned().collect();
    if let Some(h) = heuristic(&a.primitive(), &b.primitive(), &vars) {
        return h.primitive();
    }
    prs_gcd(a, b)
}

fn prs_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let va = a.variables();
    let vb = b.variables();
    let main = va.intersection(&vb).min_by_key(|v| (a.degree_in(v).max(b.degree_in(v)), (*v).clone())).cloned();
    let Some(x) = main else {
        // no shared variable: any common factor would be constant
        return Polynomial::one();
    };

    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");

    let (mut f, mut g) = if pa.degree_in(&x) >= pb.degree_in(&x) { (pa, pb) } else { (pb, pa) };
    loop {
        let r = pseudo_remainder(&f, &g, &x);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&x) == 0 {
            g = Polynomial::one();
            break;
        }
        f = g;
        g = primitive_part_in(&r, &x);
    }
    (&primitive_part_in(&g, &x) * &c).primitive()
}

fn single_monomial(p: &Polynomial) -> Option<Monomial> {
    (p.num_terms() == 1).then(|| p.leading_term().unwrap().0.clone())
}

fn monomial_gcd(m: &Monomial, p: &Polynomial) -> Polynomial {
    let mut g = m.clone();
    for (n, _) in p.terms() {
        g = g.gcd(n);
        if g.is_one() {
            break;
        }
    }
    Polynomial::monomial(Rational::one(), g)
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
}

const HEURISTIC_ATTEMPTS: usize = 6;

/// Evaluates the last variable at a large integer, recurses, and rebuilds a
/// candidate from the balanced digits of the result; accepted only if it
/// divides both inputs. `a` and `b` are primitive with integer coefficients.
fn heuristic(a: &Polynomial, b: &Polynomial, vars: &[Var]) -> Option<Polynomial> {
    let Some((x, rest)) = vars.split_last() else {
        let (ca, cb) = (a.constant_value()?, b.constant_value()?);
        return Some(Polynomial::constant(Rational::from_integer(ca.numer().gcd(cb.numer()))));
    };
    if !a.contains_var(x) && !b.contains_var(x) {
        return heuristic(a, b, rest);
    }
    let common = a.terms().chain(b.terms()).fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()));
    let inv = Rational::new(BigInt::one(), common.clone());
    let (a, b) = (&a.scale(&inv), &b.scale(&inv));
    let mut xi = BigInt::from(2) * max_norm(a).min(max_norm(b)) + BigInt::from(29);
    for _ in 0..HEURISTIC_ATTEMPTS {
        let at = BTreeMap::from([(x.clone(), Rational::from_integer(xi.clone()))]);
        let (ea, eb) = (a.evaluate(&at), b.evaluate(&at));
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(g) = heuristic(&ea, &eb, rest) {
                let h = rebuild(&g, &xi, x).primitive();
                if !h.is_zero() && a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                    return Some(h.scale(&Rational::from_integer(common)));
                }
            }
        }
        xi = (&xi * BigInt::from(73794)) / BigInt::from(27011);
    }
    None
}

/// Reads each integer coefficient of `g` in balanced base `xi` as the
/// coefficients of a polynomial in `x`.
fn rebuild(g: &Polynomial, xi: &BigInt, x: &Var) -> Polynomial {
    let half = xi / BigInt::from(2);
    let mut out = Polynomial::zero();
    for (m, c) in g.terms() {
        let mut n = c.to_integer();
        let mut k = 0u32;
        while !n.is_zero() {
            let mut r = n.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                out.add_term(m.mul(&Monomial::var(x.clone(), k)), Rational::from_integer(r.clone()));
            }
            n = (n - r) / xi;
            k += 1;
        }
    }
    out
}

/// Gcd of the coefficients of `p` viewed in `R[x]`.
pub fn content_in(p: &Polynomial, x: &Var) -> Polynomial {
    let mut acc = Polynomial::zero();
    for c in p.coefficients_in(x).into_iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return Polynomial::one();
        }
    }
    acc
}

pub fn primitive_part_in(p: &Polynomial, x: &Var) -> Polynomial {
    if p.is_zero() {
        return Polynomial::zero();
    }
    p.div_exact(&content_in(p, x)).expect("content divides").primitive()
}

/// Sparse pseudo-remainder of `f` by `g` in the main variable `x`.
pub fn pseudo_remainder(f: &Polynomial, g: &Polynomial, x: &Var) -> Polynomial {
    let dg = g.degree_in(x);
    let lcg = g.leading_coefficient_in(x);
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(x) >= dg {
        let dr = r.degree_in(x);
        let lcr = r.leading_coefficient_in(x);
        let shift = g.mul_monomial(&Monomial::var(x.clone(), dr - dg), &Rational::one());
        r = &(&lcg * &r) - &(&lcr * &shift);
    }
    r
}

/// Least common multiple, normalized like [`gcd`].
pub fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).primitive()
}
