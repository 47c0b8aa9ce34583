//! The user-facing routines: parametrizing a polynomial, rationalizing one
//! root or several at once, and checking a substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use crate::algebra::{extract_square_factor, fresh_var, poly_sqrt, Polynomial, RationalFunction, RootToken, Var};
use crate::deadline::{Deadline, TimedOut};
use crate::expr::RootExpression;
use crate::fdecomp::{fdecompose_and_parametrize, find_fdecomposition, worth_decomposing, FDecompError, FOptions};
use crate::geometry::{ProjectivePoint, SearchOptions};
use crate::parametrize::{default_order, parametrize_hypersurface, ParamOptions, Parametrization, ParametrizeError};

type RF = RationalFunction;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DriverError {
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

#[derive(Clone, Debug)]
pub struct Options {
    pub variables: Option<Vec<Var>>,
    pub output_variables: Option<Vec<Var>>,
    pub multiple_solutions: bool,
    pub general_c: bool,
    pub general_t: bool,
    pub force_fdecomposition: bool,
    /// `(f_{m-1}, f_m, f_{m+1})` to use instead of searching for a decomposition.
    pub f_polynomials: Option<[Polynomial; 3]>,
    /// A finite point of multiplicity `d - 1` to use instead of searching.
    pub point: Option<Vec<RF>>,
    /// Try every perfect-square variant instead of stopping at the first success.
    pub exhaustive_squares: bool,
    /// Rationalize simultaneous roots in the given order only.
    pub keep_root_order: bool,
    pub height: i64,
    pub depth: u32,
    pub timeout: Option<Duration>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            variables: None,
            output_variables: None,
            multiple_solutions: false,
            general_c: false,
            general_t: false,
            force_fdecomposition: false,
            f_polynomials: None,
            point: None,
            exhaustive_squares: false,
            keep_root_order: false,
            height: SearchOptions::default().height,
            depth: 2,
            timeout: None,
        }
    }
}

impl Options {
    fn deadline(&self) -> Deadline {
        self.timeout.map_or_else(Deadline::none, Deadline::after)
    }

    fn check_outputs(&self, inputs: &BTreeSet<Var>) -> Result<(), DriverError> {
        let Some(out) = &self.output_variables else { return Ok(()) };
        let distinct: BTreeSet<&Var> = out.iter().collect();
        if distinct.len() != out.len() {
            return Err(DriverError::InvalidOptions("output variables must be distinct".into()));
        }
        if let Some(v) = out.iter().find(|v| inputs.contains(v)) {
            return Err(DriverError::InvalidOptions(format!("output variable {v} is also an input variable")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Direct,
    FDecomposition,
    Composed,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Direct => "direct",
            Strategy::FDecomposition => "fdecomp",
            Strategy::Composed => "composed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub param: Parametrization,
    pub strategy: Strategy,
}

/// A substitution together with the rational value it gives the root.
#[derive(Clone, Debug)]
pub struct VerifiedForm {
    pub substitutions: Vec<(Var, RF)>,
    pub root_value: RF,
    /// `sqrt(N * D)` for the composed radicand `N / D`.
    pub square_root: Polynomial,
    pub strategy: Strategy,
    pub point: Option<ProjectivePoint>,
}

/// `sqrt(f)` when `f` is the square of a rational function.
pub fn rf_sqrt(f: &RF) -> Option<(RF, Polynomial)> {
    let nd = f.num() * f.den();
    let s = poly_sqrt(&nd)?;
    let value = RF::new(s.clone(), f.den().clone()).ok()?;
    Some((value, s))
}

/// Checks that `subst` turns `root` into a rational function and returns it.
pub fn verify(root: &RootExpression, subst: &[(Var, RF)]) -> Option<VerifiedForm> {
    if subst.iter().any(|(_, v)| v.variables().iter().any(RootToken::is_token)) {
        return None;
    }
    let map: BTreeMap<Var, RF> = subst.iter().cloned().collect();
    let radicand = root.radicand.substitute(&map).ok()?;
    let prefactor = root.prefactor.substitute(&map).ok()?;
    let (value, square_root) = rf_sqrt(&radicand)?;
    Some(VerifiedForm {
        substitutions: subst.to_vec(),
        root_value: (&prefactor * &value).sign_normalized(),
        square_root,
        strategy: Strategy::Direct,
        point: None,
    })
}

/// `(variant, factor)` pairs with `sqrt(r) = factor * sqrt(variant)`: the
/// radicand itself, then the polynomial left of `sqrt(p q) / q` once its
/// square factors are taken out.
pub fn perfect_square_variants(r: &RF) -> Vec<(RF, RF)> {
    let mut out = vec![(r.clone(), RF::one())];
    let (s, rest) = extract_square_factor(&(r.num() * r.den()));
    if s.is_constant() && r.den().is_constant() {
        return out;
    }
    if let Ok(factor) = RF::new(s, r.den().clone()) {
        out.push((RF::from(rest), factor));
    }
    out
}

fn param_options(opts: &Options, order: Vec<Var>, root: Option<Var>) -> ParamOptions {
    let search = SearchOptions {
        height: opts.height,
        multiple: opts.multiple_solutions,
        general_c: opts.general_c,
        root,
        deadline: opts.deadline(),
        ..SearchOptions::default()
    };
    ParamOptions {
        variables: Some(order),
        output_vars: opts.output_variables.clone(),
        general_t: opts.general_t,
        point: opts.point.clone(),
        search,
    }
}

/// `u` with `poly = c u^2 - P` for a constant `c`, and `P / c`.
fn square_root_shape(poly: &Polynomial, order: &[Var]) -> Option<(Var, Polynomial)> {
    order.iter().rev().find_map(|u| {
        if poly.degree_in(u) != 2 {
            return None;
        }
        let c = poly.coefficients_in(u);
        let lead = c[2].constant_value()?;
        c[1].is_zero().then(|| (u.clone(), c[0].scale(&(-lead.recip()))))
    })
}

/// Rational parametrizations of `V(poly)`. The direct algorithm is tried
/// first; a decomposition of the radicand is used when it fails or is forced.
pub fn parametrize_polynomial(poly: &Polynomial, opts: &Options) -> Result<Vec<Solution>, DriverError> {
    opts.check_outputs(&poly.variables())?;
    let order = opts.variables.clone().unwrap_or_else(|| default_order(poly, None));
    parametrize_in_order(poly, order, None, opts)
}

fn parametrize_in_order(
    poly: &Polynomial,
    order: Vec<Var>,
    root: Option<Var>,
    opts: &Options,
) -> Result<Vec<Solution>, DriverError> {
    let shape = match &root {
        Some(u) => square_root_shape(poly, std::slice::from_ref(u)),
        None => square_root_shape(poly, &order),
    };
    let active: Vec<Var> = order.iter().filter(|v| shape.as_ref().map(|s| &s.0) != Some(*v)).cloned().collect();
    if let (Some(triple), Some((_, p))) = (&opts.f_polynomials, &shape) {
        find_fdecomposition(p, &active, Some(triple)).map_err(|e| DriverError::InvalidOptions(e.to_string()))?;
    } else if opts.f_polynomials.is_some() || (opts.force_fdecomposition && shape.is_none()) {
        return Err(DriverError::InvalidOptions("the polynomial is not of the form c*u^2 - P".into()));
    }
    let popts = param_options(opts, order, root.or_else(|| shape.as_ref().map(|s| s.0.clone())));
    let mut out: Vec<Solution> = Vec::new();
    if !opts.force_fdecomposition {
        match parametrize_hypersurface(poly, &popts) {
            Ok(list) => out.extend(list.into_iter().map(|param| Solution { param, strategy: Strategy::Direct })),
            Err(ParametrizeError::TimedOut(t)) => return Err(t.into()),
            Err(e @ (ParametrizeError::OutputCount { .. } | ParametrizeError::InvalidPoint)) => {
                return Err(DriverError::InvalidOptions(e.to_string()))
            }
            Err(_) => {}
        }
    }
    let explicit = opts.force_fdecomposition || opts.f_polynomials.is_some();
    if out.is_empty() {
        if let Some((u, p)) = shape.as_ref().filter(|(_, p)| explicit || worth_decomposing(p, &active)) {
            let fopts = FOptions {
                user_triple: opts.f_polynomials.clone(),
                depth: opts.depth,
                param: ParamOptions { point: None, ..popts },
            };
            match fdecompose_and_parametrize(p, &active, u, &fopts) {
                Ok(list) => {
                    out.extend(list.into_iter().map(|param| Solution { param, strategy: Strategy::FDecomposition }))
                }
                Err(FDecompError::TimedOut(t)) => return Err(t.into()),
                Err(e) => return Err(DriverError::InvalidOptions(e.to_string())),
            }
        }
    }
    let mut distinct: Vec<Solution> = Vec::new();
    for s in out {
        if !distinct.iter().any(|d| d.param.values == s.param.values) {
            distinct.push(s);
        }
    }
    if !opts.multiple_solutions {
        distinct.truncate(1);
    }
    Ok(distinct)
}

fn root_variable(taken: &BTreeSet<Var>) -> Var {
    fresh_var(["u"], "u", &|v: &Var| taken.contains(v))
}

/// Variable changes that make `root` rational.
pub fn rationalize_root(root: &RootExpression, opts: &Options) -> Result<Vec<VerifiedForm>, DriverError> {
    let inputs: BTreeSet<Var> = root.radicand.variables().into_iter().chain(root.prefactor.variables()).collect();
    opts.check_outputs(&inputs)?;
    if let Some(form) = verify(root, &[]) {
        return Ok(vec![form]);
    }
    let u = root_variable(&inputs);
    let mut forms = Vec::new();
    for (variant, factor) in perfect_square_variants(&root.radicand) {
        let assoc = &(variant.den() * &Polynomial::var(u.clone()).pow(2)) - variant.num();
        let order = match &opts.variables {
            Some(vars) => std::iter::once(u.clone()).chain(vars.iter().cloned()).collect(),
            None => default_order(&assoc, Some(&u)),
        };
        for sol in parametrize_in_order(&assoc, order, Some(u.clone()), opts)? {
            if let Some(form) = verified_form(root, &sol, &factor, &u) {
                forms.push(form);
            }
        }
        if !forms.is_empty() && !opts.exhaustive_squares {
            break;
        }
    }
    Ok(forms)
}

fn verified_form(root: &RootExpression, sol: &Solution, factor: &RF, u: &Var) -> Option<VerifiedForm> {
    let subst: Vec<(Var, RF)> = sol.param.substitutions().into_iter().filter(|(v, _)| v != u).collect();
    let mut form = match &sol.param.token {
        None => verify(root, &subst)?,
        Some(token) => {
            // the value of u carries the root; check its square modulo the token
            let map: BTreeMap<Var, RF> = subst.iter().cloned().collect();
            let pre = root.prefactor.substitute(&map).ok()?;
            let value = token.reduce(&(&(&pre * &factor.substitute(&map).ok()?) * sol.param.value_of(u)?));
            let target = &root.radicand.substitute(&map).ok()? * &(&pre * &pre);
            if !token.reduce(&(&(&value * &value) - &target)).is_zero() {
                return None;
            }
            VerifiedForm {
                substitutions: subst,
                root_value: value.sign_normalized(),
                square_root: Polynomial::zero(),
                strategy: sol.strategy,
                point: None,
            }
        }
    };
    form.strategy = sol.strategy;
    form.point = sol.param.point.clone();
    Some(form)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RoundKind {
    /// Change only the variables no other pending root depends on.
    Subset,
    Plain,
}

#[derive(Clone, Debug)]
struct Pending {
    radicand: RF,
    /// The adjoined root whose square this radicand is.
    token: Option<Var>,
}

#[derive(Clone, Debug)]
struct State {
    phi: BTreeMap<Var, RF>,
    pending: Vec<Pending>,
    rounds: Vec<Vec<Var>>,
}

struct Round {
    subst: BTreeMap<Var, RF>,
    value: RF,
    outputs: Vec<Var>,
    token: Option<RootToken>,
}

fn sort_key(r: &RF) -> (u32, usize, usize) {
    let degree = r.num().total_degree().max(r.den().total_degree());
    (degree, r.num().num_terms() + r.den().num_terms(), r.variables().len())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for i in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(i, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

const MAX_PERMUTED: usize = 4;

/// One substitution rationalizing every root in `roots`; values in input order.
pub fn rationalize_simultaneously(
    roots: &[RootExpression],
    opts: &Options,
) -> Result<Option<Vec<VerifiedForm>>, DriverError> {
    if roots.len() == 1 {
        return Ok(rationalize_root(&roots[0], opts)?.into_iter().next().map(|f| vec![f]));
    }
    let inputs: BTreeSet<Var> =
        roots.iter().flat_map(|r| r.radicand.variables().into_iter().chain(r.prefactor.variables())).collect();
    opts.check_outputs(&inputs)?;
    let mut base: Vec<usize> = (0..roots.len()).collect();
    if !opts.keep_root_order {
        base.sort_by_key(|&i| std::cmp::Reverse(sort_key(&roots[i].radicand)));
    }
    let mut orders = vec![base.clone()];
    if !opts.keep_root_order && roots.len() <= MAX_PERMUTED {
        for p in permutations(roots.len()) {
            let order: Vec<usize> = p.iter().map(|&k| base[k]).collect();
            if !orders.contains(&order) {
                orders.push(order);
            }
        }
    }
    let deadline = opts.deadline();
    let inner = Options {
        timeout: None,
        output_variables: None,
        general_t: false,
        general_c: false,
        point: None,
        multiple_solutions: false,
        ..opts.clone()
    };
    for order in orders {
        let mut pending: Vec<Pending> = Vec::new();
        for &i in &order {
            if !pending.iter().any(|p| p.radicand == roots[i].radicand) {
                pending.push(Pending { radicand: roots[i].radicand.clone(), token: None });
            }
        }
        let phi = inputs.iter().map(|v| (v.clone(), RF::var(v.clone()))).collect();
        let state = State { phi, pending, rounds: Vec::new() };
        let Some(done) = advance(state, &inner, &deadline, 2 * roots.len() + 2)? else { continue };
        if let Some(forms) = finish(roots, &inputs, done, opts)? {
            return Ok(Some(forms));
        }
    }
    Ok(None)
}

fn advance(mut state: State, opts: &Options, deadline: &Deadline, budget: usize) -> Result<Option<State>, DriverError> {
    deadline.check()?;
    let mut open = Vec::new();
    for p in std::mem::take(&mut state.pending) {
        match (rf_sqrt(&p.radicand), &p.token) {
            (Some((value, _)), Some(t)) => resolve_token(&mut state, t, &value),
            (Some(_), None) => {}
            (None, _) => open.push(p),
        }
    }
    if open.is_empty() {
        return Ok(Some(state));
    }
    if budget == 0 {
        return Ok(None);
    }
    let (first, others) = open.split_first().expect("nonempty");
    for kind in [RoundKind::Subset, RoundKind::Plain] {
        let Some(round) = single_round(first, others, kind, state.rounds.len(), opts, deadline)? else { continue };
        let mut next = state.clone();
        for value in next.phi.values_mut() {
            *value = value.substitute(&round.subst).expect("round values are defined");
        }
        if let Some(t) = &first.token {
            resolve_token(&mut next, t, &round.value);
        }
        next.pending = others
            .iter()
            .map(|p| Pending {
                radicand: p.radicand.substitute(&round.subst).expect("defined"),
                token: p.token.clone(),
            })
            .collect();
        if let Some(token) = &round.token {
            let radicand = RF::from(token.radicand().clone());
            match next.pending.iter_mut().find(|p| p.radicand == radicand && p.token.is_none()) {
                Some(p) => p.token = Some(token.symbol().clone()),
                None => next.pending.push(Pending { radicand, token: Some(token.symbol().clone()) }),
            }
        }
        next.rounds.push(round.outputs);
        if let Some(done) = advance(next, opts, deadline, budget - 1)? {
            return Ok(Some(done));
        }
    }
    Ok(None)
}

fn resolve_token(state: &mut State, token: &Var, value: &RF) {
    let map = BTreeMap::from([(token.clone(), value.clone())]);
    for v in state.phi.values_mut() {
        *v = v.substitute(&map).expect("token values are defined");
    }
    for p in &mut state.pending {
        p.radicand = p.radicand.substitute(&map).expect("defined");
    }
}

fn single_round(
    root: &Pending,
    others: &[Pending],
    kind: RoundKind,
    index: usize,
    opts: &Options,
    deadline: &Deadline,
) -> Result<Option<Round>, DriverError> {
    let vars = root.radicand.variables();
    let elsewhere: BTreeSet<Var> = others.iter().flat_map(|p| p.radicand.variables()).collect();
    let changed: Vec<Var> = match kind {
        RoundKind::Subset => {
            let c: Vec<Var> = vars.difference(&elsewhere).cloned().collect();
            if c.is_empty() || c.len() == vars.len() {
                return Ok(None);
            }
            c
        }
        RoundKind::Plain => vars.iter().cloned().collect(),
    };
    let taken: BTreeSet<Var> = vars.iter().chain(elsewhere.iter()).cloned().collect();
    let u = root_variable(&taken);
    let outputs: Vec<Var> = (1..=changed.len()).map(|k| Var::indexed(&format!("#r{index}_"), k)).collect();
    let ropts = Options { output_variables: Some(outputs.clone()), timeout: None, ..opts.clone() };
    for (variant, factor) in perfect_square_variants(&root.radicand) {
        let assoc = &(variant.den() * &Polynomial::var(u.clone()).pow(2)) - variant.num();
        let order: Vec<Var> = match kind {
            RoundKind::Subset => std::iter::once(u.clone()).chain(changed.iter().cloned()).collect(),
            RoundKind::Plain => default_order(&assoc, Some(&u)),
        };
        let mut popts = ropts.clone();
        popts.timeout = None;
        let found = with_deadline(&assoc, order, &u, &popts, deadline)?;
        for sol in found {
            let p = &sol.param;
            if p.token.as_ref().is_some_and(|t| t.radicand().is_constant()) {
                continue;
            }
            let subst: BTreeMap<Var, RF> = p.substitutions().into_iter().filter(|(v, _)| *v != u).collect();
            let Ok(factor) = factor.substitute(&subst) else { continue };
            let value = p.reduce(&(&factor * p.value_of(&u).expect("root coordinate")));
            return Ok(Some(Round { subst, value, outputs: p.outputs.clone(), token: p.token.clone() }));
        }
    }
    Ok(None)
}

fn with_deadline(
    poly: &Polynomial,
    order: Vec<Var>,
    u: &Var,
    opts: &Options,
    deadline: &Deadline,
) -> Result<Vec<Solution>, DriverError> {
    let shape = square_root_shape(poly, std::slice::from_ref(u));
    let active: Vec<Var> = order.iter().filter(|v| *v != u).cloned().collect();
    let mut popts = param_options(opts, order, Some(u.clone()));
    popts.search.deadline = *deadline;
    match parametrize_hypersurface(poly, &popts) {
        Ok(list) => return Ok(list.into_iter().map(|param| Solution { param, strategy: Strategy::Direct }).collect()),
        Err(ParametrizeError::TimedOut(t)) => return Err(t.into()),
        Err(_) => {}
    }
    let Some((_, p)) = shape.filter(|(_, p)| worth_decomposing(p, &active)) else { return Ok(Vec::new()) };
    let fopts = FOptions { user_triple: None, depth: opts.depth, param: popts };
    match fdecompose_and_parametrize(&p, &active, u, &fopts) {
        Ok(list) => Ok(list.into_iter().map(|param| Solution { param, strategy: Strategy::FDecomposition }).collect()),
        Err(FDecompError::TimedOut(t)) => Err(t.into()),
        Err(_) => Ok(Vec::new()),
    }
}

/// Renames the round variables (latest round first) and verifies every root.
fn finish(
    roots: &[RootExpression],
    inputs: &BTreeSet<Var>,
    state: State,
    opts: &Options,
) -> Result<Option<Vec<VerifiedForm>>, DriverError> {
    let used: BTreeSet<Var> = state.phi.values().flat_map(|v| v.variables()).collect();
    if used.iter().any(RootToken::is_token) {
        return Ok(None);
    }
    let internal: Vec<Var> = state.rounds.iter().rev().flatten().filter(|v| used.contains(v)).cloned().collect();
    let names: Vec<Var> = match &opts.output_variables {
        Some(names) if names.len() == internal.len() => names.clone(),
        Some(names) => {
            return Err(DriverError::InvalidOptions(format!(
                "{} output variables given, {} needed",
                names.len(),
                internal.len()
            )))
        }
        None => {
            let kept: BTreeSet<Var> = used.difference(&internal.iter().cloned().collect()).cloned().collect();
            let n = internal.len();
            let free =
                |p: &str| (1..=n).all(|k| !kept.contains(&Var::indexed(p, k)) && !inputs.contains(&Var::indexed(p, k)));
            let prefix = ["t", "s", "r", "q"].into_iter().find(|p| free(p)).unwrap_or("#t");
            (1..=n).map(|k| Var::indexed(prefix, k)).collect()
        }
    };
    let rename: BTreeMap<Var, Var> = internal.into_iter().zip(names).collect();
    let subst: Vec<(Var, RF)> = state
        .phi
        .iter()
        .filter(|(v, value)| **value != RF::var((*v).clone()))
        .map(|(v, value)| (v.clone(), value.rename(&rename)))
        .collect();
    let mut forms = Vec::new();
    for root in roots {
        let Some(mut form) = verify(root, &subst) else { return Ok(None) };
        form.strategy = Strategy::Composed;
        forms.push(form);
    }
    Ok(Some(forms))
}
