//! Rational solutions of small polynomial systems: a lex Groebner basis,
//! then back-substitution through univariate rational roots.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Monomial, Polynomial, Rational, Var};

#[derive(Clone, Debug)]
pub struct SolverLimits {
    pub max_basis: usize,
    pub max_pairs: usize,
    pub max_terms: usize,
    pub max_solutions: usize,
    /// Values tried for a coordinate the system leaves free.
    pub free_samples: Vec<i64>,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_basis: 120,
            max_pairs: 4000,
            max_terms: 400,
            max_solutions: 64,
            free_samples: vec![0, 1, -1, 2, -2],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("polynomial system too large for the exact solver")]
    GaveUp,
}

/// All rational solutions of `eqs = 0` in `vars` (after sampling free
/// coordinates), sorted lexicographically. Symbols outside `vars` are not allowed.
pub fn solve_quadric_system(
    eqs: &[Polynomial],
    vars: &[Var],
    limits: &SolverLimits,
) -> Result<Vec<Vec<Rational>>, SolverError> {
    let internal: Vec<Var> = (0..vars.len()).map(|i| Var::indexed("#", i)).collect();
    let rename: BTreeMap<Var, Var> = vars.iter().cloned().zip(internal.iter().cloned()).collect();
    let eqs: Vec<Polynomial> = eqs.iter().map(|e| e.rename(&rename)).filter(|e| !e.is_zero()).collect();
    let mut out = Vec::new();
    solve_rec(&eqs, &internal, limits, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn solve_rec(
    eqs: &[Polynomial],
    vars: &[Var],
    limits: &SolverLimits,
    out: &mut Vec<Vec<Rational>>,
) -> Result<(), SolverError> {
    if out.len() >= limits.max_solutions {
        return Ok(());
    }
    let eqs: Vec<Polynomial> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    if eqs.iter().any(|e| e.is_constant()) {
        return Ok(());
    }
    let Some((last, rest)) = vars.split_last() else {
        if eqs.is_empty() {
            out.push(Vec::new());
        }
        return Ok(());
    };
    let basis = groebner(&eqs, limits)?;
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(());
    }
    let univariate = basis.iter().find(|g| g.variables().iter().all(|v| v == last));
    let values: Vec<Rational> = match univariate {
        Some(g) => rational_roots(g, last),
        None => limits.free_samples.iter().map(|&k| Rational::from_integer(k.into())).collect(),
    };
    for value in values {
        let at = BTreeMap::from([(last.clone(), value.clone())]);
        let reduced: Vec<Polynomial> = basis.iter().map(|g| g.evaluate(&at)).collect();
        let mut partial = Vec::new();
        solve_rec(&reduced, rest, limits, &mut partial)?;
        for mut s in partial {
            s.push(value.clone());
            out.push(s);
        }
    }
    Ok(())
}

fn leading(p: &Polynomial) -> (Monomial, Rational) {
    let (m, c) = p.leading_term().expect("nonzero");
    (m.clone(), c.clone())
}

fn lcm_monomial(a: &Monomial, b: &Monomial) -> Monomial {
    a.mul(b).div(&a.gcd(b)).expect("gcd divides")
}

/// Full reduction of `p` modulo `basis`.
fn reduce(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let leads: Vec<(Monomial, Rational)> = basis.iter().map(leading).collect();
    let mut rest = p.clone();
    let mut out = Polynomial::zero();
    while let Some((m, c)) = rest.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let hit = leads.iter().enumerate().find_map(|(i, (lm, lc))| m.div(lm).map(|q| (i, q, lc)));
        match hit {
            Some((i, q, lc)) => rest = &rest - &basis[i].mul_monomial(&q, &(c / lc)),
            None => {
                rest = &rest - &Polynomial::monomial(c.clone(), m.clone());
                out.add_term(m, c);
            }
        }
    }
    out
}

fn normalize(p: &Polynomial) -> Polynomial {
    p.monic()
}

/// Reduced lex Groebner basis (variables earlier in the natural order rank higher).
pub(crate) fn groebner(eqs: &[Polynomial], limits: &SolverLimits) -> Result<Vec<Polynomial>, SolverError> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for e in eqs {
        let r = reduce(e, &basis);
        if !r.is_zero() {
            basis.push(normalize(&r));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut processed = 0usize;
    while let Some((i, j)) = pairs.pop() {
        processed += 1;
        if processed > limits.max_pairs || basis.len() > limits.max_basis {
            return Err(SolverError::GaveUp);
        }
        let (mi, ci) = leading(&basis[i]);
        let (mj, cj) = leading(&basis[j]);
        if mi.gcd(&mj).is_one() {
            continue;
        }
        let l = lcm_monomial(&mi, &mj);
        let si = basis[i].mul_monomial(&l.div(&mi).expect("divides"), &ci.recip());
        let sj = basis[j].mul_monomial(&l.div(&mj).expect("divides"), &cj.recip());
        let r = reduce(&(&si - &sj), &basis);
        if r.is_zero() {
            continue;
        }
        if r.num_terms() > limits.max_terms {
            return Err(SolverError::GaveUp);
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one()]);
        }
        let k = basis.len();
        basis.push(normalize(&r));
        for i in 0..k {
            pairs.push((i, k));
        }
    }
    Ok(interreduce(basis))
}

fn interreduce(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Polynomial> = Vec::new();
    basis.sort_by(|a, b| leading(a).0.cmp(&leading(b).0));
    for g in basis {
        let lm = leading(&g).0;
        if !keep.iter().any(|k| lm.div(&leading(k).0).is_some()) {
            keep.push(g);
        }
    }
    let n = keep.len();
    for i in 0..n {
        let others: Vec<Polynomial> =
            keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        keep[i] = normalize(&reduce(&keep[i], &others));
    }
    keep
}

/// Rational roots of a polynomial in `v` alone, ascending.
pub fn rational_roots(p: &Polynomial, v: &Var) -> Vec<Rational> {
    if p.is_zero() || p.variables().iter().any(|w| w != v) {
        return Vec::new();
    }
    let p = p.primitive();
    let coeffs: Vec<BigInt> =
        p.coefficients_in(v).iter().map(|c| c.constant_value().unwrap_or_else(Rational::zero).to_integer()).collect();
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let coeffs = &coeffs[low..];
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    if coeffs.len() > 1 {
        let a0 = coeffs[0].abs();
        let an = coeffs[coeffs.len() - 1].abs();
        let (nums, dens) = (divisors(&a0), divisors(&an));
        for q in &dens {
            for n in &nums {
                if !n.gcd(q).is_one() {
                    continue;
                }
                for s in [-1, 1] {
                    let r = Rational::new(n * BigInt::from(s), q.clone());
                    if horner(coeffs, &r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn horner(coeffs: &[BigInt], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Positive divisors; a cofactor left after trial division is treated as prime.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    let mut out = vec![BigInt::one()];
    for (f, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pw = d.clone();
            for _ in 0..=e {
                next.push(pw.clone());
                pw *= &f;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Whether a quadratic form in `coords` is positive or negative
/// semidefinite, by symmetric elimination. Every real zero of such a form
/// lies in its kernel, so the quadric has no smooth real point.
pub fn is_semidefinite_form(form: &Polynomial, coords: &[Var]) -> bool {
    let n = coords.len();
    let half = Rational::new(1.into(), 2.into());
    let mut a = vec![vec![Rational::zero(); n]; n];
    for (m, c) in form.terms() {
        let slots: Vec<(usize, u32)> =
            m.pairs().iter().filter_map(|(v, e)| coords.iter().position(|x| x == v).map(|i| (i, *e))).collect();
        if slots.len() != m.pairs().len() || m.degree() != 2 {
            return false;
        }
        match slots.as_slice() {
            [(i, 2)] => a[*i][*i] = c.clone(),
            [(i, 1), (j, 1)] => {
                a[*i][*j] = c * &half;
                a[*j][*i] = c * &half;
            }
            _ => return false,
        }
    }
    [true, false].into_iter().any(|positive| {
        let mut m = a.clone();
        if !positive {
            m.iter_mut().flatten().for_each(|x| *x = -x.clone());
        }
        for k in 0..n {
            if m[k][k].is_zero() {
                if m[k][k + 1..].iter().any(|x| !x.is_zero()) {
                    return false;
                }
                continue;
            }
            if m[k][k].is_negative() {
                return false;
            }
            let pivot = m[k].clone();
            for row in m.iter_mut().skip(k + 1) {
                let f = &row[k] / &pivot[k];
                for (x, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                    *x -= &f * p;
                }
            }
        }
        true
    })
}
