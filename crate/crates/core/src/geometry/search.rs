//! The ladder of methods for finding points of multiplicity `d - 1`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::quadric::{is_semidefinite_form, solve_quadric_system, SolverLimits};
use super::{multiplicity_at, Chart, ProjectiveHypersurface, ProjectivePoint};
use crate::algebra::ratfun::substitute_parts;
use crate::algebra::{extract_square_factor, poly_sqrt, Polynomial, Rational, RationalFunction, RootToken, Var};
use crate::deadline::{Deadline, TimedOut};

type RF = RationalFunction;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Height bound of the rational scan.
    pub height: i64,
    /// Candidates examined per chart by the integer scan.
    pub scan_budget: usize,
    /// Height bound for the coordinates fixed by the solve method.
    pub solve_height: i64,
    pub multiple: bool,
    /// Points are capped at this many when `multiple` is set.
    pub max_points: usize,
    pub general_c: bool,
    /// May the solve method adjoin a square root to reach a point?
    pub allow_extension: bool,
    /// The coordinate standing for the square root, solved for last.
    pub root: Option<Var>,
    /// A root already present in the polynomial's coefficients.
    pub token: Option<RootToken>,
    pub solver: SolverLimits,
    pub deadline: Deadline,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            height: 6,
            scan_budget: 20_000,
            solve_height: 2,
            multiple: false,
            max_points: 16,
            general_c: false,
            allow_extension: true,
            root: None,
            token: None,
            solver: SolverLimits::default(),
            deadline: Deadline::none(),
        }
    }
}

/// `coords[slot] = scale * X + shift`; the point is given in terms of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rescale {
    pub slot: usize,
    pub scale: RF,
    pub shift: RF,
}

#[derive(Clone, Debug)]
pub struct FoundPoint {
    /// Index into `ProjectiveHypersurface::coords` of the chart.
    pub chart: usize,
    /// Chart coordinates of the point, after `rescale`.
    pub affine: Vec<RF>,
    pub point: ProjectivePoint,
    /// The square root the point's coordinates or the rescaling need.
    pub token: Option<RootToken>,
    pub rescale: Option<Rescale>,
    /// Free constants `C_k` in the coordinates.
    pub free_constants: Vec<Var>,
}

impl FoundPoint {
    /// The chart polynomial in the coordinates `affine` refers to.
    pub fn chart_polynomial(&self, chart: &Chart) -> Polynomial {
        let Some(r) = &self.rescale else {
            return chart.poly.clone();
        };
        let x = chart.coords[r.slot].clone();
        let sub = BTreeMap::from([(x.clone(), &(&r.scale * &RF::var(x)) + &r.shift)]);
        let (num, _) = substitute_parts(&chart.poly, &sub);
        let num = match &self.token {
            Some(t) => t.reduce_poly(&num),
            None => num,
        };
        num.primitive()
    }

    /// Undoes the rescaling on a vector of chart-coordinate values.
    pub fn map_back(&self, mut values: Vec<RF>) -> Vec<RF> {
        if let Some(r) = &self.rescale {
            let v = &(&r.scale * &values[r.slot]) + &r.shift;
            values[r.slot] = match &self.token {
                Some(t) => t.reduce(&v),
                None => v,
            };
        }
        values
    }
}

struct Ctx<'a> {
    hs: &'a ProjectiveHypersurface,
    degree: u32,
    opts: &'a SearchOptions,
    partials: Option<Vec<Polynomial>>,
}

/// Points of multiplicity exactly `d - 1`, finite chart first.
pub fn find_dminus1_points(hs: &ProjectiveHypersurface, opts: &SearchOptions) -> Result<Vec<FoundPoint>, TimedOut> {
    let degree = hs.degree;
    if degree < 2 {
        return Ok(Vec::new());
    }
    let mut ctx = Ctx { hs, degree, opts, partials: None };
    let charts = hs.charts();
    if opts.general_c && degree == 2 {
        for chart in &charts {
            if let Some(p) = ctx.general_point(chart) {
                return Ok(vec![p]);
            }
        }
    }
    let only_coords = hs.poly.variables().iter().all(|v| hs.coords.contains(v));
    if degree == 2 && only_coords && is_semidefinite_form(&hs.poly, &hs.coords) {
        return Ok(Vec::new());
    }
    let mut found: Vec<FoundPoint> = Vec::new();
    for chart in &charts {
        for p in ctx.rational_points(chart)? {
            if !found.iter().any(|q| q.point.same_point(&p.point, opts.token.as_ref())) {
                found.push(p);
            }
        }
        if !found.is_empty() && !opts.multiple {
            return Ok(found);
        }
    }
    if found.is_empty() && degree == 2 && opts.allow_extension && opts.token.is_none() {
        for chart in &charts {
            let pts = ctx.solve_method(chart, true)?;
            if let Some(p) = pts.into_iter().next() {
                found.push(p);
                break;
            }
        }
    }
    found.truncate(opts.max_points.max(1));
    Ok(found)
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.hs.coords.len() - 1
    }

    /// Slots a chart leaves free; at infinity the earlier coordinates and `h` are zero.
    fn free_slots(&self, chart: &Chart) -> Vec<usize> {
        if chart.finite {
            (0..self.n()).collect()
        } else {
            (chart.index + 1..self.n()).collect()
        }
    }

    fn root_slot(&self) -> Option<usize> {
        let r = self.opts.root.as_ref()?;
        self.hs.coords[..self.n()].iter().position(|v| v == r)
    }

    fn qualifies(&self, chart: &Chart, point: &[RF]) -> bool {
        multiplicity_at(&chart.poly, &chart.coords, point, self.opts.token.as_ref()) == Some(self.degree - 1)
    }

    fn found(&self, chart: &Chart, affine: Vec<RF>) -> FoundPoint {
        let point = chart.to_projective(&affine).normalized(self.opts.token.as_ref());
        FoundPoint {
            chart: chart.index,
            affine,
            point,
            token: self.opts.token.clone(),
            rescale: None,
            free_constants: Vec::new(),
        }
    }

    fn enough(&self, pts: &[FoundPoint]) -> bool {
        !pts.is_empty() && (!self.opts.multiple || pts.len() >= self.opts.max_points)
    }

    fn vanishes(&self, p: &Polynomial) -> bool {
        match &self.opts.token {
            Some(t) => t.reduce_poly(p).is_zero(),
            None => p.is_zero(),
        }
    }

    fn rational_points(&mut self, chart: &Chart) -> Result<Vec<FoundPoint>, TimedOut> {
        let n = self.n();
        let free = self.free_slots(chart);
        let mut out: Vec<FoundPoint> = Vec::new();
        let push = |ctx: &Self, out: &mut Vec<FoundPoint>, affine: Vec<RF>| {
            if !out.iter().any(|q| q.affine == affine) && ctx.qualifies(chart, &affine) {
                out.push(ctx.found(chart, affine));
            }
        };

        let zero = vec![RF::zero(); n];
        push(self, &mut out, zero.clone());
        if chart.finite && n > 0 {
            push(self, &mut out, vec![RF::one(); n]);
        }
        if self.enough(&out) {
            return Ok(out);
        }

        let mut exhaustive = false;
        if self.degree >= 3 {
            if let Some(points) = self.solver_points(chart, &free)? {
                exhaustive = true;
                for affine in points {
                    push(self, &mut out, affine);
                }
            }
        } else {
            for p in self.solve_method(chart, false)? {
                if !out.iter().any(|q| q.affine == p.affine) {
                    out.push(p);
                }
            }
        }
        if self.enough(&out) || exhaustive {
            return Ok(out);
        }

        let mut examined = 0usize;
        'scan: for h in 0..=i64::MAX {
            let mut any = false;
            for tuple in tuples_of_height(free.len(), h) {
                any = true;
                examined += 1;
                if examined > self.opts.scan_budget {
                    break 'scan;
                }
                if examined.is_multiple_of(256) {
                    self.opts.deadline.check()?;
                }
                let values: Vec<Rational> = tuple.iter().map(|&k| Rational::from_integer(k.into())).collect();
                if let Some(affine) = self.try_values(chart, &free, &values) {
                    push(self, &mut out, affine);
                    if self.enough(&out) {
                        break 'scan;
                    }
                }
            }
            if !any || free.is_empty() {
                break;
            }
        }
        if self.enough(&out) || free.is_empty() || free.len() > 2 {
            return Ok(out);
        }

        for values in rational_tuples(free.len(), self.opts.height) {
            self.opts.deadline.check()?;
            if let Some(affine) = self.try_values(chart, &free, &values) {
                push(self, &mut out, affine);
                if self.enough(&out) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// The full affine point if the chart polynomial vanishes there.
    fn try_values(&self, chart: &Chart, free: &[usize], values: &[Rational]) -> Option<Vec<RF>> {
        let mut map: BTreeMap<Var, Rational> = chart.coords.iter().map(|v| (v.clone(), Rational::zero())).collect();
        for (&slot, v) in free.iter().zip(values) {
            map.insert(chart.coords[slot].clone(), v.clone());
        }
        if !self.vanishes(&chart.poly.evaluate(&map)) {
            return None;
        }
        let mut affine = vec![RF::zero(); self.n()];
        for (&slot, v) in free.iter().zip(values) {
            affine[slot] = RF::constant(v.clone());
        }
        Some(affine)
    }

    /// Order-`(d-2)` partials of the closure, computed once.
    fn partials(&mut self) -> Option<&[Polynomial]> {
        if self.partials.is_none() {
            let order = (self.degree - 2) as usize;
            let coords = &self.hs.coords;
            let mut layer: Vec<(Polynomial, usize)> = vec![(self.hs.poly.clone(), 0)];
            for _ in 0..order {
                let mut next = Vec::new();
                for (g, start) in &layer {
                    for (k, v) in coords.iter().enumerate().skip(*start) {
                        let d = g.derivative(v);
                        if !d.is_zero() {
                            next.push((d, k));
                        }
                    }
                }
                if next.len() > 600 {
                    self.partials = Some(Vec::new());
                    return None;
                }
                layer = next;
            }
            let mut eqs: Vec<Polynomial> = layer.into_iter().map(|(g, _)| g.primitive()).collect();
            eqs.sort_by_key(|p| p.to_string());
            eqs.dedup();
            self.partials = Some(eqs);
        }
        self.partials.as_deref().filter(|p| !p.is_empty())
    }

    /// Every rational solution of the vanishing of the order-`(d-2)`
    /// partials in this chart, or `None` when the solver does not apply.
    fn solver_points(&mut self, chart: &Chart, free: &[usize]) -> Result<Option<Vec<Vec<RF>>>, TimedOut> {
        self.opts.deadline.check()?;
        if !self.hs.params.is_empty() || self.opts.token.is_some() {
            return Ok(None);
        }
        let n = self.n();
        let index = chart.index;
        let finite = chart.finite;
        let coords = self.hs.coords.clone();
        let Some(partials) = self.partials() else {
            return Ok(None);
        };
        let mut fix: BTreeMap<Var, Rational> = BTreeMap::new();
        fix.insert(coords[index].clone(), Rational::from_integer(1.into()));
        if !finite {
            fix.insert(coords[n].clone(), Rational::zero());
            for v in &coords[..index] {
                fix.insert(v.clone(), Rational::zero());
            }
        }
        let eqs: Vec<Polynomial> = partials.iter().map(|p| p.evaluate(&fix)).collect();
        let unknowns: Vec<Var> = free.iter().map(|&s| chart.coords[s].clone()).collect();
        let Ok(mut sols) = solve_quadric_system(&eqs, &unknowns, &self.opts.solver) else {
            return Ok(None);
        };
        sols.sort_by_key(|s| !s.iter().all(|v| v.is_integer()));
        Ok(Some(
            sols.into_iter()
                .map(|s| {
                    let mut affine = vec![RF::zero(); n];
                    for (&slot, v) in free.iter().zip(s) {
                        affine[slot] = RF::constant(v);
                    }
                    affine
                })
                .collect(),
        ))
    }

    /// Slots in the order the solve method tries them: the non-root
    /// coordinates from last to first, then the root coordinate.
    fn solve_order(&self, free: &[usize]) -> Vec<usize> {
        let root = self.root_slot();
        let mut order: Vec<usize> = free.iter().rev().copied().filter(|s| Some(*s) != root).collect();
        if let Some(r) = root.filter(|r| free.contains(r)) {
            order.push(r);
        }
        order
    }

    /// Fixes all but one coordinate to small integers and solves for the last.
    fn solve_method(&self, chart: &Chart, extension: bool) -> Result<Vec<FoundPoint>, TimedOut> {
        let n = self.n();
        let free = self.free_slots(chart);
        let mut out: Vec<FoundPoint> = Vec::new();
        for slot in self.solve_order(&free) {
            let others: Vec<usize> = free.iter().copied().filter(|s| *s != slot).collect();
            let x = chart.coords[slot].clone();
            for h in 0..=self.opts.solve_height {
                for tuple in tuples_of_height(others.len(), h) {
                    self.opts.deadline.check()?;
                    let mut map: BTreeMap<Var, Rational> =
                        chart.coords.iter().map(|v| (v.clone(), Rational::zero())).collect();
                    map.remove(&x);
                    let mut affine = vec![RF::zero(); n];
                    for (&s, &k) in others.iter().zip(&tuple) {
                        let k = Rational::from_integer(k.into());
                        map.insert(chart.coords[s].clone(), k.clone());
                        affine[s] = RF::constant(k);
                    }
                    let g = chart.poly.evaluate(&map);
                    let c = g.coefficients_in(&x);
                    if extension {
                        if c.len() == 3 {
                            if let Some(p) = self.extension_point(chart, slot, &c, affine) {
                                return Ok(vec![p]);
                            }
                        }
                        continue;
                    }
                    for root in roots_of(&c, self.opts.token.as_ref()) {
                        let mut pt = affine.clone();
                        pt[slot] = root;
                        if !out.iter().any(|q| q.affine == pt) && self.qualifies(chart, &pt) {
                            out.push(self.found(chart, pt));
                            if self.enough(&out) {
                                return Ok(out);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// A point on a conic whose discriminant is not a square: adjoin its
    /// root and rescale the solved coordinate so the point becomes `-1`.
    fn extension_point(&self, chart: &Chart, slot: usize, c: &[Polynomial], mut affine: Vec<RF>) -> Option<FoundPoint> {
        let (a, b) = (RF::from(c[2].clone()), RF::from(c[1].clone()));
        let disc = &(&c[1] * &c[1]) - &(&c[2] * &c[0]).scale(&Rational::from_integer(4.into()));
        if disc.is_zero() || poly_sqrt(&disc).is_some() {
            return None;
        }
        let (s, rest) = extract_square_factor(&disc);
        if rest.constant_value().is_some_and(|v| v.is_negative()) {
            return None;
        }
        let token = RootToken::new(rest);
        let root_d = &RF::from(s) * &RF::var(token.symbol().clone());
        let two_a = a.scale(&Rational::from_integer(2.into()));
        let scale = root_d.checked_div(&two_a).ok()?;
        let shift = (-&b).checked_div(&two_a).ok()?;
        let mut original = affine.clone();
        original[slot] = &shift - &scale;
        if multiplicity_at(&chart.poly, &chart.coords, &original, Some(&token)) != Some(self.degree - 1) {
            return None;
        }
        affine[slot] = RF::integer(-1);
        let point = chart.to_projective(&original).normalized(Some(&token));
        Some(FoundPoint {
            chart: chart.index,
            affine,
            point,
            token: Some(token),
            rescale: Some(Rescale { slot, scale, shift }),
            free_constants: Vec::new(),
        })
    }

    /// A conic point whose other coordinates are free constants `C_k`.
    fn general_point(&self, chart: &Chart) -> Option<FoundPoint> {
        let n = self.n();
        let free = self.free_slots(chart);
        let taken = self.hs.poly.variables();
        for slot in self.solve_order(&free) {
            let others: Vec<usize> = free.iter().copied().filter(|s| *s != slot).collect();
            let mut constants = Vec::new();
            let mut map: BTreeMap<Var, Polynomial> =
                chart.coords.iter().map(|v| (v.clone(), Polynomial::zero())).collect();
            let x = chart.coords[slot].clone();
            map.remove(&x);
            let mut affine = vec![RF::zero(); n];
            let mut next = 1;
            for &s in &others {
                let name = loop {
                    let v = Var::indexed("C", next);
                    next += 1;
                    if !taken.contains(&v) {
                        break v;
                    }
                };
                map.insert(chart.coords[s].clone(), Polynomial::var(name.clone()));
                affine[s] = RF::var(name.clone());
                constants.push(name);
            }
            let g = chart.poly.compose(&map);
            let c = g.coefficients_in(&x);
            let (root, token) = match c.len() {
                2 => ((-&RF::from(c[0].clone())).checked_div(&RF::from(c[1].clone())).ok()?, self.opts.token.clone()),
                3 => {
                    let disc = &(&c[1] * &c[1]) - &(&c[2] * &c[0]).scale(&Rational::from_integer(4.into()));
                    let two_a = RF::from(c[2].clone()).scale(&Rational::from_integer(2.into()));
                    let b = RF::from(c[1].clone());
                    if let Some(s) = poly_sqrt(&disc) {
                        ((&(-&b) - &RF::from(s)).checked_div(&two_a).ok()?, self.opts.token.clone())
                    } else {
                        if self.opts.token.is_some() {
                            continue;
                        }
                        let (s, rest) = extract_square_factor(&disc);
                        if rest.constant_value().is_some_and(|v| v.is_negative()) {
                            continue;
                        }
                        let token = RootToken::new(rest);
                        let root_d = &RF::from(s) * &RF::var(token.symbol().clone());
                        ((&(-&b) - &root_d).checked_div(&two_a).ok()?, Some(token))
                    }
                }
                _ => continue,
            };
            affine[slot] = root;
            if multiplicity_at(&chart.poly, &chart.coords, &affine, token.as_ref()) != Some(1) {
                continue;
            }
            let point = chart.to_projective(&affine).normalized(token.as_ref());
            return Some(FoundPoint {
                chart: chart.index,
                affine,
                point,
                token,
                rescale: None,
                free_constants: constants,
            });
        }
        None
    }
}

/// Roots of `c[0] + c[1] x + c[2] x^2` in the coefficient field, smaller first when numeric.
fn roots_of(c: &[Polynomial], token: Option<&RootToken>) -> Vec<RF> {
    let reduce = |f: RF| match token {
        Some(t) => t.reduce(&f),
        None => f,
    };
    match c.len() {
        2 => (-&RF::from(c[0].clone())).checked_div(&RF::from(c[1].clone())).ok().map(reduce).into_iter().collect(),
        3 => {
            let disc = &(&c[1] * &c[1]) - &(&c[2] * &c[0]).scale(&Rational::from_integer(4.into()));
            let disc = match token {
                Some(t) => t.reduce_poly(&disc),
                None => disc,
            };
            let Some(s) = poly_sqrt(&disc) else {
                return Vec::new();
            };
            let two_a = RF::from(c[2].clone()).scale(&Rational::from_integer(2.into()));
            let b = RF::from(c[1].clone());
            let s = RF::from(s);
            let mut roots: Vec<RF> =
                [&(-&b) - &s, &(-&b) + &s].into_iter().filter_map(|r| r.checked_div(&two_a).ok()).map(reduce).collect();
            if let (Some(x), Some(y)) = (roots[0].constant_value(), roots.get(1).and_then(|r| r.constant_value())) {
                if y < x {
                    roots.swap(0, 1);
                }
            }
            roots.dedup();
            roots
        }
        _ => Vec::new(),
    }
}

/// Integer tuples of length `k` with max-norm exactly `h`, lexicographically.
pub(crate) fn tuples_of_height(k: usize, h: i64) -> Vec<Vec<i64>> {
    if k == 0 {
        return if h == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut cur = vec![-h; k];
    loop {
        if cur.iter().any(|x| x.abs() == h) {
            out.push(cur.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < h {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -h;
                }
                break;
            }
        }
    }
}

/// Tuples of rationals with numerators and denominators up to `height`, at
/// least one non-integral, ordered by largest denominator and then lexicographically.
fn rational_tuples(k: usize, height: i64) -> Vec<Vec<Rational>> {
    let mut values: Vec<Rational> = Vec::new();
    for q in 1..=height {
        for p in -height..=height {
            let r = Rational::new(p.into(), q.into());
            if !values.contains(&r) {
                values.push(r);
            }
        }
    }
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                values.iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    out.retain(|t| t.iter().any(|v| !v.is_integer()));
    out.sort_by(|a, b| {
        let den = |t: &Vec<Rational>| t.iter().map(|v| v.denom().clone()).max();
        den(a).cmp(&den(b)).then_with(|| a.cmp(b))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly as p, parse_rf as r};

    fn vars(names: &[&str]) -> Vec<Var> {
        names.iter().map(|n| Var::new(n)).collect()
    }

    fn search(f: &str, order: &[&str], root: Option<&str>) -> Vec<FoundPoint> {
        let hs = ProjectiveHypersurface::closure(&p(f), &vars(order));
        let opts = SearchOptions { root: root.map(Var::new), ..Default::default() };
        find_dminus1_points(&hs, &opts).unwrap()
    }

    fn coords(p: &FoundPoint) -> Vec<String> {
        p.point.render()
    }

    #[test]
    fn height_tuples() {
        assert_eq!(tuples_of_height(2, 1).len(), 8);
        assert_eq!(tuples_of_height(2, 1)[0], vec![-1, -1]);
        assert_eq!(tuples_of_height(0, 0), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn circle_point_from_solve_method() {
        let pts = search("u^2+x^2-1", &["u", "x"], Some("u"));
        assert_eq!(coords(&pts[0]), ["0", "-1", "1"]);
    }

    #[test]
    fn sphere_point() {
        let pts = search("u^2+x^2+y^2-1", &["x", "y", "u"], Some("u"));
        assert_eq!(coords(&pts[0]), ["0", "-1", "0", "1"]);
    }

    #[test]
    fn nodal_cubic_origin() {
        let pts = search("u^2-x^3-x^2", &["x", "u"], Some("u"));
        assert_eq!(pts.len(), 1);
        assert_eq!(coords(&pts[0]), ["0", "0", "1"]);
    }

    #[test]
    fn hexagon_singular_point() {
        let f = "u^2-(1-x1-x2-x3)^2+4*x1*x2*x3";
        let pts = search(f, &["x1", "x2", "x3", "u"], Some("u"));
        assert_eq!(coords(&pts[0]), ["0", "0", "1", "0", "1"]);
        let hs = ProjectiveHypersurface::closure(&p(f), &vars(&["x1", "x2", "x3", "u"]));
        let opts = SearchOptions { root: Some(Var::new("u")), multiple: true, ..Default::default() };
        let all = find_dminus1_points(&hs, &opts).unwrap();
        let finite: Vec<_> = all.iter().filter(|p| !p.point.is_at_infinity()).collect();
        assert_eq!(finite.len(), 4);
    }

    #[test]
    fn points_at_infinity() {
        let pts = search("4*u^2*x^2-x^4-4*x^2*y^2-4", &["x", "y", "u"], Some("u"));
        assert!(!pts.is_empty());
        assert!(pts.iter().all(|p| p.point.is_at_infinity()));
        for p in &pts {
            let c = coords(p);
            assert_eq!(c[0], "0");
            assert_eq!(c[1], "1");
            assert!(c[2] == "1" || c[2] == "-1");
        }
    }

    #[test]
    fn cusp_chain_point() {
        let pts = search("-z/4+x^2+y^3", &["x", "y", "z"], None);
        assert_eq!(coords(&pts[0]), ["0", "0", "1", "0"]);
    }

    #[test]
    fn rescaled_point_with_parameter() {
        let hs = ProjectiveHypersurface::closure(&p("u^2+x^2+y^2-1"), &vars(&["u", "y"]));
        let opts = SearchOptions { root: Some(Var::new("u")), ..Default::default() };
        let pts = find_dminus1_points(&hs, &opts).unwrap();
        let pt = &pts[0];
        let t = pt.token.as_ref().unwrap();
        assert_eq!(t.radicand(), &p("1-x^2"));
        assert_eq!(pt.affine, vec![r("0"), r("-1")]);
        let rescale = pt.rescale.as_ref().unwrap();
        assert_eq!(rescale.slot, 1);
        let chart = hs.chart(2);
        assert_eq!(pt.chart_polynomial(&chart), p("u^2+(1-x^2)*y^2+x^2-1").primitive());
    }

    #[test]
    fn general_constants_on_circle() {
        let hs = ProjectiveHypersurface::closure(&p("u^2+x^2-1"), &vars(&["u", "x"]));
        let opts = SearchOptions { root: Some(Var::new("u")), general_c: true, ..Default::default() };
        let pts = find_dminus1_points(&hs, &opts).unwrap();
        assert_eq!(pts[0].free_constants, vars(&["C1"]));
        assert_eq!(pts[0].token.as_ref().unwrap().radicand(), &p("1-C1^2"));
    }
}
