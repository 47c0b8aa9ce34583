//! Plain-text rendering; the output re-parses to an equal value.

use std::cmp::Ordering;
use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::poly::{Monomial, Polynomial};
use super::ratfun::RationalFunction;
use super::Rational;

fn write_monomial(out: &mut String, m: &Monomial) {
    for (i, (v, e)) in m.pairs().iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        out.push_str(v.name());
        if *e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
}

fn write_rational(out: &mut String, c: &Rational) {
    if c.is_integer() {
        write!(out, "{}", c.numer()).unwrap();
    } else {
        write!(out, "{}/{}", c.numer(), c.denom()).unwrap();
    }
}

/// Terms in descending grevlex order.
pub fn sorted_terms(p: &Polynomial) -> Vec<(&Monomial, &Rational)> {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|a, b| match b.0.grevlex_cmp(a.0) {
        Ordering::Equal => b.0.cmp(a.0),
        o => o,
    });
    terms
}

pub fn render_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in sorted_terms(p).into_iter().enumerate() {
        let abs = c.abs();
        if c.is_negative() {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        if m.is_one() {
            write_rational(&mut out, &abs);
        } else {
            if !abs.is_one() {
                write_rational(&mut out, &abs);
                out.push('*');
            }
            write_monomial(&mut out, m);
        }
    }
    out
}

fn is_bare_monomial(p: &Polynomial) -> bool {
    p.num_terms() == 1 && {
        let (m, c) = p.leading_term().unwrap();
        c.is_one() && m.pairs().len() == 1
    }
}

pub fn render_rational_function(f: &RationalFunction) -> String {
    let num = render_polynomial(f.num());
    if f.is_polynomial() {
        return num;
    }
    let num = if f.num().num_terms() > 1 { format!("({num})") } else { num };
    let den = render_polynomial(f.den());
    if is_bare_monomial(f.den()) {
        format!("{num}/{den}")
    } else {
        format!("{num}/({den})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_polynomial(self))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_rational_function(self))
    }
}
