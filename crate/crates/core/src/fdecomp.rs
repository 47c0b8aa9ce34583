//! Radicands of the form `f_m^2 - 4 f_{m+1} f_{m-1}` with `deg f_k <= k`:
//! the surface `W` built from their `k`-homogenizations is parametrized
//! instead, and the result is lifted back.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{fresh_var, poly_sqrt, Monomial, Polynomial, Rational, RationalFunction, Var};
use crate::deadline::TimedOut;
use crate::parametrize::{parametrize_hypersurface, ParamOptions, Parametrization, ParametrizeError};

type RF = RationalFunction;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FDecompError {
    #[error("the triple does not reproduce the radicand")]
    Identity,
    #[error("f_{index} has degree {degree}, above the bound {index}")]
    DegreeBound { index: u32, degree: u32 },
    #[error("the lifted parametrization has phi_z = 0")]
    VanishingZ,
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

/// `(f_{m-1}, f_m, f_{m+1})` with `m = degree / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDecomposition {
    pub lower: Polynomial,
    pub middle: Polynomial,
    pub upper: Polynomial,
    pub degree: u32,
}

impl FDecomposition {
    pub fn new(
        lower: Polynomial,
        middle: Polynomial,
        upper: Polynomial,
        degree: u32,
        active: &BTreeSet<Var>,
    ) -> Result<Self, FDecompError> {
        let m = degree / 2;
        for (f, k) in [(&lower, m - 1), (&middle, m), (&upper, m + 1)] {
            let deg = f.degree_in_set(active);
            if !f.is_zero() && deg > k {
                return Err(FDecompError::DegreeBound { index: k, degree: deg });
            }
        }
        Ok(FDecomposition { lower, middle, upper, degree })
    }

    pub fn m(&self) -> u32 {
        self.degree / 2
    }

    pub fn radicand(&self) -> Polynomial {
        let four = Rational::from_integer(4.into());
        &(&self.middle * &self.middle) - &(&self.upper * &self.lower).scale(&four)
    }

    /// `[f_{m-1}, f_m, f_{m+1}]`.
    pub fn triple(&self) -> [&Polynomial; 3] {
        [&self.lower, &self.middle, &self.upper]
    }
}

const MAX_CANDIDATES: usize = 16;

fn even_degree(p: &Polynomial, active: &BTreeSet<Var>) -> u32 {
    let d = p.degree_in_set(active).max(2);
    d + d % 2
}

/// Decompositions of `p` in the variables `active`: the user's triple if
/// given, otherwise the heuristic candidates in ladder order.
pub fn find_fdecomposition(
    p: &Polynomial,
    active: &[Var],
    user: Option<&[Polynomial; 3]>,
) -> Result<Vec<FDecomposition>, FDecompError> {
    let set: BTreeSet<Var> = active.iter().cloned().collect();
    if let Some([lower, middle, upper]) = user {
        let fd = FDecomposition::new(lower.clone(), middle.clone(), upper.clone(), even_degree(p, &set), &set)?;
        if fd.radicand() != *p {
            return Err(FDecompError::Identity);
        }
        return Ok(vec![fd]);
    }
    let mut out: Vec<FDecomposition> = Vec::new();
    let base = even_degree(p, &set);
    for degree in [base, base + 2] {
        let m = degree / 2;
        let mut round: Vec<FDecomposition> = Vec::new();
        for middle in middle_candidates(p, &set, m) {
            let rest = &(&middle * &middle) - p;
            for (lower, upper) in splits(&rest, &set, m) {
                if let Ok(fd) = FDecomposition::new(lower, middle.clone(), upper, degree, &set) {
                    if fd.radicand() == *p && !round.contains(&fd) {
                        round.push(fd);
                    }
                }
            }
        }
        // fewest terms first, then integral triples
        round.sort_by_key(|fd| {
            let terms: usize = fd.triple().iter().map(|f| f.num_terms()).sum();
            let integral = fd.triple().iter().all(|f| f.has_integer_coefficients());
            (terms, !integral)
        });
        out.extend(round);
    }
    out.truncate(MAX_CANDIDATES);
    Ok(out)
}

/// Square roots of sub-polynomials of `p`: its top-weight terms under the
/// total and each single-variable grading, the terms not divisible by one of
/// its monomials, and zero.
fn middle_candidates(p: &Polynomial, active: &BTreeSet<Var>, m: u32) -> Vec<Polynomial> {
    let mut subs: Vec<Polynomial> = Vec::new();
    let mut gradings: Vec<BTreeSet<Var>> = vec![active.clone()];
    gradings.extend(active.iter().map(|v| BTreeSet::from([v.clone()])));
    for g in &gradings {
        let top = p.degree_in_set(g);
        subs.push(Polynomial::from_terms(
            p.terms().filter(|(mono, _)| mono.degree_in_set(g) == top).map(|(a, c)| (a.clone(), c.clone())),
        ));
    }
    for (mono, _) in p.terms() {
        if mono.is_one() {
            continue;
        }
        subs.push(Polynomial::from_terms(
            p.terms().filter(|(a, _)| a.div(mono).is_none()).map(|(a, c)| (a.clone(), c.clone())),
        ));
    }
    let mut out: Vec<Polynomial> = Vec::new();
    for s in subs {
        if let Some(r) = poly_sqrt(&s) {
            let r = if r.constant_term() < Rational::from_integer(0.into()) { -&r } else { r };
            if !r.is_zero() && r.degree_in_set(active) <= m && !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out.push(Polynomial::zero());
    out
}

/// Ways to write `rest = 4 f_{m-1} f_{m+1}`: a constant `f_{m-1}` of
/// `-1/4` or `1/4`, then every monomial divisor of `rest`'s monomial content.
fn splits(rest: &Polynomial, active: &BTreeSet<Var>, m: u32) -> Vec<(Polynomial, Polynomial)> {
    if rest.is_zero() {
        return Vec::new();
    }
    let quarter = Rational::new(1.into(), 4.into());
    let mut out = Vec::new();
    for c in [-quarter.clone(), quarter.clone()] {
        let upper = rest.scale(&(&quarter / &c));
        out.push((Polynomial::constant(c), upper));
    }
    let content = rest.terms().map(|(a, _)| a.clone()).reduce(|a, b| a.gcd(&b)).unwrap_or_else(Monomial::one);
    let mut divisors = monomial_divisors(&content);
    divisors.retain(|d| d.degree_in_set(active) < m);
    divisors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    for d in divisors {
        let lower = Polynomial::monomial(Rational::from_integer(1.into()), d);
        let upper = rest.div_exact(&lower).expect("monomial divisor").scale(&quarter);
        out.push((lower, upper));
    }
    out
}

fn monomial_divisors(m: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for (v, e) in m.pairs() {
        let mut next = Vec::new();
        for d in &out {
            for k in 0..=*e {
                next.push(d.mul(&Monomial::var(v.clone(), k)));
            }
        }
        out = next;
    }
    out
}

/// `F_{m+1} + F_m + F_{m-1}`, all homogenized with the same `z`.
pub fn build_w(fd: &FDecomposition, active: &[Var], z: &Var) -> Polynomial {
    let set: BTreeSet<Var> = active.iter().cloned().collect();
    let m = fd.m();
    let hom = |f: &Polynomial, k: u32| f.k_homogenize(k, z, &set).expect("degree bound holds");
    &(&hom(&fd.upper, m + 1) + &hom(&fd.middle, m)) + &hom(&fd.lower, m - 1)
}

/// `x_k = phi_{x_k} / phi_z` and `u = 2 phi_z f_{m+1}(x) + f_m(x)`; the result
/// has coordinates `active` followed by `root`.
pub fn lift_parametrization(
    fd: &FDecomposition,
    param_w: &Parametrization,
    active: &[Var],
    z: &Var,
    root: &Var,
) -> Result<Parametrization, FDecompError> {
    let phi_z = param_w.value_of(z).cloned().unwrap_or_else(RF::one);
    if phi_z.is_zero() {
        return Err(FDecompError::VanishingZ);
    }
    let mut map: BTreeMap<Var, RF> = BTreeMap::new();
    for v in active {
        let phi = param_w.value_of(v).cloned().unwrap_or_else(|| RF::var(v.clone()));
        map.insert(v.clone(), param_w.reduce(&phi.checked_div(&phi_z).map_err(|_| FDecompError::VanishingZ)?));
    }
    let at = |f: &Polynomial| -> Result<RF, FDecompError> {
        RF::from(f.clone()).substitute(&map).map_err(|_| FDecompError::VanishingZ)
    };
    let two = Rational::from_integer(2.into());
    let u = &(&phi_z * &at(&fd.upper)?).scale(&two) + &at(&fd.middle)?;
    let mut coords: Vec<Var> = active.to_vec();
    coords.push(root.clone());
    let mut values: Vec<RF> = active.iter().map(|v| map[v].clone()).collect();
    values.push(param_w.reduce(&u));
    Ok(Parametrization {
        coords,
        values,
        outputs: param_w.outputs.clone(),
        token: param_w.token.clone(),
        free_constants: param_w.free_constants.clone(),
        point: param_w.point.clone(),
    })
}

#[derive(Clone, Debug, Default)]
pub struct FOptions {
    pub user_triple: Option<[Polynomial; 3]>,
    /// Levels of nested decomposition allowed when `W` has no usable point.
    pub depth: u32,
    pub param: ParamOptions,
}

/// Parametrizations of `root^2 = p` obtained through decompositions of `p`.
pub fn fdecompose_and_parametrize(
    p: &Polynomial,
    active: &[Var],
    root: &Var,
    opts: &FOptions,
) -> Result<Vec<Parametrization>, FDecompError> {
    let decomps = match find_fdecomposition(p, active, opts.user_triple.as_ref()) {
        Ok(d) => d,
        Err(e) if opts.user_triple.is_some() => return Err(e),
        Err(_) => Vec::new(),
    };
    let taken: BTreeSet<Var> = p.variables().into_iter().chain(active.iter().cloned()).chain([root.clone()]).collect();
    let z = fresh_var(["z", "v", "w", "s"], "z", &|v: &Var| taken.contains(v));
    let mut order: Vec<Var> = active.to_vec();
    order.push(z.clone());
    let mut out = Vec::new();
    for fd in &decomps {
        opts.param.search.deadline.check()?;
        let w = build_w(fd, active, &z);
        let params = match parametrize_w(&w, &order, opts)? {
            Some(list) => list,
            None => continue,
        };
        for pw in params {
            let Ok(lifted) = lift_parametrization(fd, &pw, active, &z, root) else { continue };
            let check = &(&Polynomial::var(root.clone()) * &Polynomial::var(root.clone())) - p;
            if lifted.annihilates(&check) {
                out.push(lifted);
                if !opts.param.search.multiple {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

fn parametrize_w(w: &Polynomial, order: &[Var], opts: &FOptions) -> Result<Option<Vec<Parametrization>>, FDecompError> {
    let popts = ParamOptions { variables: Some(order.to_vec()), general_t: false, point: None, ..opts.param.clone() };
    match parametrize_hypersurface(w, &popts) {
        Ok(list) => return Ok(Some(list)),
        Err(ParametrizeError::TimedOut(t)) => return Err(t.into()),
        Err(_) => {}
    }
    if opts.depth == 0 {
        return Ok(None);
    }
    // W quadratic in one coordinate: parametrize the square root of its discriminant
    for x in order.iter().rev() {
        if w.degree_in(x) != 2 {
            continue;
        }
        let c = w.coefficients_in(x);
        let four = Rational::from_integer(4.into());
        let disc = &(&c[1] * &c[1]) - &(&c[2] * &c[0]).scale(&four);
        let rest: Vec<Var> = order.iter().filter(|v| *v != x).cloned().collect();
        let rest_set: BTreeSet<Var> = rest.iter().cloned().collect();
        if disc.degree_in_set(&rest_set) == 0 {
            continue;
        }
        let taken: BTreeSet<Var> = w.variables();
        let r = fresh_var(["r"], "r", &|v: &Var| taken.contains(v));
        let inner = inner_root(&disc, &rest, &r, opts)?;
        let mut found = Vec::new();
        for pr in inner {
            let map = pr.map();
            let at = |f: &Polynomial| RF::from(f.clone()).substitute(&map).ok();
            let (Some(a), Some(b)) = (at(&c[2]), at(&c[1])) else { continue };
            let two_a = a.scale(&Rational::from_integer(2.into()));
            let Ok(xv) = (&(-&b) + &map[&r]).checked_div(&two_a) else { continue };
            let mut values: Vec<RF> = Vec::new();
            for v in order {
                values.push(if v == x { pr.reduce(&xv) } else { map[v].clone() });
            }
            let param = Parametrization {
                coords: order.to_vec(),
                values,
                outputs: pr.outputs.clone(),
                token: pr.token.clone(),
                free_constants: pr.free_constants.clone(),
                point: pr.point.clone(),
            };
            if param.annihilates(w) {
                found.push(param);
            }
        }
        if !found.is_empty() {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// `r^2 = disc` in the coordinates `rest`, directly or by a further decomposition.
/// A radicand of degree at most two: its associated quadric has a rational
/// parametrization exactly when it has a smooth rational point, which the
/// direct method already looks for.
pub fn worth_decomposing(p: &Polynomial, active: &[Var]) -> bool {
    p.degree_in_set(&active.iter().cloned().collect()) > 2
}

fn inner_root(disc: &Polynomial, rest: &[Var], r: &Var, opts: &FOptions) -> Result<Vec<Parametrization>, FDecompError> {
    let assoc = &(&Polynomial::var(r.clone()) * &Polynomial::var(r.clone())) - disc;
    let mut order = rest.to_vec();
    order.push(r.clone());
    let mut popts = ParamOptions { variables: Some(order), general_t: false, point: None, ..opts.param.clone() };
    popts.search.root = Some(r.clone());
    match parametrize_hypersurface(&assoc, &popts) {
        Ok(list) => return Ok(list),
        Err(ParametrizeError::TimedOut(t)) => return Err(t.into()),
        Err(_) => {}
    }
    if !worth_decomposing(disc, rest) {
        return Ok(Vec::new());
    }
    let nested = FOptions { user_triple: None, depth: opts.depth - 1, param: opts.param.clone() };
    fdecompose_and_parametrize(disc, rest, r, &nested)
}
