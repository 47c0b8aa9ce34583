//! Rational parametrization of a hypersurface through a point of
//! multiplicity `d - 1`, by the pencil of lines through that point.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::ratfun::substitute_parts;
use crate::algebra::{fresh_var, Polynomial, RationalFunction, RootToken, Var};
use crate::deadline::TimedOut;
use crate::geometry::{
    find_dminus1_points, multiplicity_at, FoundPoint, ProjectiveHypersurface, ProjectivePoint, SearchOptions,
};

type RF = RationalFunction;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParametrizeError {
    #[error("the polynomial does not depend on the active variables")]
    Constant,
    #[error("no point of multiplicity d-1 found")]
    NoPoint,
    #[error("the given point does not have multiplicity d-1")]
    InvalidPoint,
    #[error("every candidate point gave a degenerate parametrization")]
    Degenerate,
    #[error("expected {expected} output variables, got {got}")]
    OutputCount { expected: usize, got: usize },
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

#[derive(Clone, Debug, Default)]
pub struct ParamOptions {
    /// Active coordinates in order; others are parameters.
    pub variables: Option<Vec<Var>>,
    pub output_vars: Option<Vec<Var>>,
    /// Keep every `t_k`, named `t0, t1, ...`.
    pub general_t: bool,
    /// A finite point to use instead of searching.
    pub point: Option<Vec<RF>>,
    pub search: SearchOptions,
}

/// `coords[k] = values[k]` as functions of `outputs`.
#[derive(Clone, Debug)]
pub struct Parametrization {
    pub coords: Vec<Var>,
    pub values: Vec<RF>,
    pub outputs: Vec<Var>,
    pub token: Option<RootToken>,
    pub free_constants: Vec<Var>,
    /// The point the lines pass through; `None` for a linear polynomial.
    pub point: Option<ProjectivePoint>,
}

impl Parametrization {
    pub fn substitutions(&self) -> Vec<(Var, RF)> {
        self.coords.iter().cloned().zip(self.values.iter().cloned()).collect()
    }

    pub fn map(&self) -> BTreeMap<Var, RF> {
        self.coords.iter().cloned().zip(self.values.iter().cloned()).collect()
    }

    pub fn value_of(&self, v: &Var) -> Option<&RF> {
        self.coords.iter().position(|c| c == v).map(|i| &self.values[i])
    }

    pub fn reduce(&self, f: &RF) -> RF {
        match &self.token {
            Some(t) => t.reduce(f),
            None => f.clone(),
        }
    }

    /// Is `f` identically zero after substitution?
    pub fn annihilates(&self, f: &Polynomial) -> bool {
        match RF::from(f.clone()).substitute(&self.map()) {
            Ok(v) => self.reduce(&v).is_zero(),
            Err(_) => false,
        }
    }
}

impl fmt::Display for Parametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.substitutions().iter().map(|(v, x)| format!("{v} -> {x}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The variable that plays the role of the square root: the first one in
/// which `f` has the shape `q v^2 + p`.
pub fn root_like_variable(f: &Polynomial, candidates: &BTreeSet<Var>) -> Option<Var> {
    candidates.iter().find(|v| f.degree_in(v) == 2 && f.coefficients_in(v)[1].is_zero()).cloned()
}

/// Sorted active variables with the root-like one moved to the end.
pub fn default_order(f: &Polynomial, root: Option<&Var>) -> Vec<Var> {
    let vars: BTreeSet<Var> = f.variables().into_iter().filter(|v| !RootToken::is_token(v)).collect();
    let root = root.cloned().or_else(|| root_like_variable(f, &vars));
    let mut order: Vec<Var> = vars.iter().filter(|v| Some(*v) != root.as_ref()).cloned().collect();
    if let Some(r) = root.filter(|r| vars.contains(r)) {
        order.push(r);
    }
    order
}

pub fn parametrize_hypersurface(f: &Polynomial, opts: &ParamOptions) -> Result<Vec<Parametrization>, ParametrizeError> {
    let order = match &opts.variables {
        Some(v) => v.clone(),
        None => default_order(f, opts.search.root.as_ref()),
    };
    let active: BTreeSet<Var> = order.iter().cloned().collect();
    let degree = f.degree_in_set(&active);
    if degree == 0 {
        return Err(ParametrizeError::Constant);
    }
    let mut search = opts.search.clone();
    if search.root.is_none() {
        search.root = root_like_variable(f, &active);
    }
    let taken: BTreeSet<Var> = f.variables();
    let ctx = Builder { f, order: &order, taken: &taken, opts };
    if degree == 1 {
        return ctx.linear().map(|p| vec![p]);
    }
    let hs = ProjectiveHypersurface::closure(f, &order);
    let points = match &opts.point {
        Some(p) => vec![pinned_point(&hs, p, search.token.as_ref())?],
        None => find_dminus1_points(&hs, &search)?,
    };
    if points.is_empty() {
        return Err(ParametrizeError::NoPoint);
    }
    let mut out = Vec::new();
    for p in &points {
        search.deadline.check()?;
        if let Some(param) = ctx.through(&hs, p)? {
            out.push(param);
            if !search.multiple {
                break;
            }
        }
    }
    if out.is_empty() {
        return Err(ParametrizeError::Degenerate);
    }
    Ok(out)
}

fn pinned_point(
    hs: &ProjectiveHypersurface,
    p: &[RF],
    token: Option<&RootToken>,
) -> Result<FoundPoint, ParametrizeError> {
    let chart = hs.chart(hs.finite_index());
    if p.len() != chart.coords.len() || multiplicity_at(&chart.poly, &chart.coords, p, token) != Some(hs.degree - 1) {
        return Err(ParametrizeError::InvalidPoint);
    }
    Ok(FoundPoint {
        chart: chart.index,
        affine: p.to_vec(),
        point: chart.to_projective(p),
        token: token.cloned(),
        rescale: None,
        free_constants: Vec::new(),
    })
}

struct Builder<'a> {
    f: &'a Polynomial,
    order: &'a [Var],
    taken: &'a BTreeSet<Var>,
    opts: &'a ParamOptions,
}

impl Builder<'_> {
    fn internal(&self, n: usize) -> Vec<Var> {
        (0..n).map(|k| Var::indexed("#t", k)).collect()
    }

    /// Output names: the requested ones, or `t1, t2, ...` (`t0, ...` for the general form).
    fn output_names(&self, n: usize, first: usize) -> Result<Vec<Var>, ParametrizeError> {
        if let Some(names) = &self.opts.output_vars {
            if names.len() != n {
                return Err(ParametrizeError::OutputCount { expected: n, got: names.len() });
            }
            return Ok(names.clone());
        }
        let free = |p: &str| (first..first + n).all(|k| !self.taken.contains(&Var::indexed(p, k)));
        if let Some(prefix) = ["t", "s", "r", "q"].into_iter().find(|p| free(p)) {
            return Ok((first..first + n).map(|k| Var::indexed(prefix, k)).collect());
        }
        let mut names = Vec::new();
        for _ in 0..n {
            let v = fresh_var([], "t", &|v: &Var| self.taken.contains(v) || names.contains(v));
            names.push(v);
        }
        Ok(names)
    }

    fn finish(
        &self,
        values: Vec<RF>,
        internal: &[Var],
        names: Vec<Var>,
        token: Option<RootToken>,
        free_constants: Vec<Var>,
        point: Option<ProjectivePoint>,
    ) -> Option<Parametrization> {
        let rename: BTreeMap<Var, Var> = internal.iter().cloned().zip(names.iter().cloned()).collect();
        let values: Vec<RF> = values.iter().map(|v| v.rename(&rename)).collect();
        let param =
            Parametrization { coords: self.order.to_vec(), values, outputs: names, token, free_constants, point };
        param.annihilates(self.f).then_some(param)
    }

    /// Degree one: solve for the last coordinate with a nonzero coefficient.
    fn linear(&self) -> Result<Parametrization, ParametrizeError> {
        let n = self.order.len();
        let slot = (0..n).rev().find(|&k| self.f.degree_in(&self.order[k]) == 1).ok_or(ParametrizeError::Constant)?;
        let ts = self.internal(n - 1);
        let mut map: BTreeMap<Var, RF> = BTreeMap::new();
        let mut t = ts.iter();
        for (k, v) in self.order.iter().enumerate() {
            if k != slot {
                map.insert(v.clone(), RF::var(t.next().expect("enough").clone()));
            }
        }
        let x = &self.order[slot];
        let c = self.f.coefficients_in(x);
        let (c0, _) = substitute_parts(&c[0], &map);
        let solved = (-&RF::from(c0)).checked_div(&RF::from(c[1].clone())).map_err(|_| ParametrizeError::Degenerate)?;
        let values: Vec<RF> = self.order.iter().map(|v| if v == x { solved.clone() } else { map[v].clone() }).collect();
        let names = self.output_names(n - 1, 1)?;
        self.finish(values, &ts, names, self.opts.search.token.clone(), Vec::new(), None)
            .ok_or(ParametrizeError::Degenerate)
    }

    fn through(
        &self,
        hs: &ProjectiveHypersurface,
        p: &FoundPoint,
    ) -> Result<Option<Parametrization>, ParametrizeError> {
        let chart = hs.chart(p.chart);
        let poly = p.chart_polynomial(&chart);
        let token = p.token.as_ref();
        let n = chart.coords.len();
        let ts = self.internal(n);
        let Some(line) = pencil(&poly, &chart.coords, &p.affine, hs.degree, &ts, token) else {
            return Ok(None);
        };
        let line = p.map_back(line);
        let Some(values) = transfer(&line, chart.hslot(), token) else { return Ok(None) };
        if self.opts.general_t {
            let names = self.output_names(n, 0)?;
            return Ok(self.finish(
                values,
                &ts,
                names,
                p.token.clone(),
                p.free_constants.clone(),
                Some(p.point.clone()),
            ));
        }
        for k in 0..n {
            let Some(fixed) = fix_one(&values, &ts[k], token) else { continue };
            let rest: Vec<Var> = ts.iter().filter(|t| *t != &ts[k]).cloned().collect();
            let used: BTreeSet<Var> = fixed.iter().flat_map(|v| v.variables()).collect();
            if !rest.iter().all(|t| used.contains(t)) {
                continue;
            }
            let names = self.output_names(n - 1, 1)?;
            if let Some(param) =
                self.finish(fixed, &rest, names, p.token.clone(), p.free_constants.clone(), Some(p.point.clone()))
            {
                return Ok(Some(param));
            }
        }
        Ok(None)
    }
}

/// `x_k = -t_k g_{d-1}(t) / g_d(t) + a_k`, where `g` is `f` moved to the
/// point `a` and `g_j` its homogeneous parts.
pub fn pencil(
    f: &Polynomial,
    coords: &[Var],
    a: &[RF],
    degree: u32,
    ts: &[Var],
    token: Option<&RootToken>,
) -> Option<Vec<RF>> {
    let shift: BTreeMap<Var, RF> = coords.iter().zip(a).map(|(v, p)| (v.clone(), &RF::var(v.clone()) + p)).collect();
    let (num, _) = substitute_parts(f, &shift);
    let num = match token {
        Some(t) => t.reduce_poly(&num),
        None => num,
    };
    let active: BTreeSet<Var> = coords.iter().cloned().collect();
    let parts = num.homogeneous_components(&active);
    if parts.keys().next().copied() != Some(degree - 1) {
        return None;
    }
    let rename: BTreeMap<Var, Var> = coords.iter().cloned().zip(ts.iter().cloned()).collect();
    let top = parts.get(&degree)?.rename(&rename);
    let next = parts.get(&(degree - 1))?.rename(&rename);
    let ratio = RF::new(next, top).ok()?;
    Some(
        ts.iter()
            .zip(a)
            .map(|(t, ak)| {
                let v = &(-&(&RF::var(t.clone()) * &ratio)) + ak;
                match token {
                    Some(tok) => tok.reduce(&v),
                    None => v,
                }
            })
            .collect(),
    )
}

/// From chart coordinates (with `h` in slot `hslot`) back to the affine ones.
fn transfer(values: &[RF], hslot: Option<usize>, token: Option<&RootToken>) -> Option<Vec<RF>> {
    let Some(i) = hslot else { return Some(values.to_vec()) };
    let h = &values[i];
    let reduce = |f: RF| match token {
        Some(t) => t.reduce(&f),
        None => f,
    };
    values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let q = if k == i { h.recip() } else { v.checked_div(h) };
            q.ok().map(reduce)
        })
        .collect()
}

fn fix_one(values: &[RF], t: &Var, token: Option<&RootToken>) -> Option<Vec<RF>> {
    let at = BTreeMap::from([(t.clone(), RF::one())]);
    values
        .iter()
        .map(|v| {
            let s = v.substitute(&at).ok()?;
            Some(match token {
                Some(tok) => tok.reduce(&s),
                None => s,
            })
        })
        .collect()
}
