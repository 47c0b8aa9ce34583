//! Projective closures, affine charts, multiplicities and the search for
//! points of multiplicity `d - 1`.

mod quadric;
mod search;

pub use quadric::{rational_roots, solve_quadric_system, SolverError, SolverLimits};
pub use search::{find_dminus1_points, FoundPoint, Rescale, SearchOptions};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{fresh_var, Polynomial, RationalFunction, RootToken, Var};

/// `V(F)` for a polynomial `F` homogeneous in `coords` (the affine
/// coordinates followed by the homogenizing variable).
#[derive(Clone, Debug)]
pub struct ProjectiveHypersurface {
    pub poly: Polynomial,
    pub coords: Vec<Var>,
    pub degree: u32,
    pub params: BTreeSet<Var>,
}

/// Preferred names for the homogenizing variable of a closure.
pub const CLOSURE_VARS: [&str; 4] = ["z", "v", "w", "s"];

impl ProjectiveHypersurface {
    /// Closure of `V(f)` with affine coordinates `order`; every other symbol is a parameter.
    pub fn closure(f: &Polynomial, order: &[Var]) -> Self {
        let all = f.variables();
        let hvar = fresh_var(CLOSURE_VARS, "h", &|v: &Var| all.contains(v) || order.contains(v));
        Self::closure_with(f, order, hvar)
    }

    pub fn closure_with(f: &Polynomial, order: &[Var], hvar: Var) -> Self {
        let active: BTreeSet<Var> = order.iter().cloned().collect();
        let poly = f.homogenize(&hvar, &active);
        let degree = f.degree_in_set(&active);
        let params = f.variables().difference(&active).cloned().collect();
        let mut coords = order.to_vec();
        coords.push(hvar);
        ProjectiveHypersurface { poly, coords, degree, params }
    }

    pub fn hvar(&self) -> &Var {
        self.coords.last().expect("nonempty")
    }

    pub fn finite_index(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn chart(&self, index: usize) -> Chart {
        let finite = self.finite_index();
        let unit = BTreeMap::from([(self.coords[index].clone(), Polynomial::one())]);
        let poly = self.poly.compose(&unit);
        let mut coords: Vec<Var> = self.coords[..finite].to_vec();
        if index != finite {
            coords[index] = self.hvar().clone();
        }
        Chart { index, poly, coords, finite: index == finite }
    }

    pub fn charts(&self) -> Vec<Chart> {
        let finite = self.finite_index();
        std::iter::once(finite).chain(0..finite).map(|i| self.chart(i)).collect()
    }
}

/// The affine piece of a closure where `coords[index] = 1`.
///
/// Chart coordinates reuse the original names, except that the homogenizing
/// variable takes the slot of the coordinate set to one.
#[derive(Clone, Debug)]
pub struct Chart {
    pub index: usize,
    pub poly: Polynomial,
    pub coords: Vec<Var>,
    pub finite: bool,
}

impl Chart {
    /// Homogeneous coordinates of a chart point.
    pub fn to_projective(&self, affine: &[RationalFunction]) -> ProjectivePoint {
        let n = self.coords.len();
        let mut coords = affine.to_vec();
        if self.finite {
            coords.push(RationalFunction::one());
        } else {
            let h = std::mem::replace(&mut coords[self.index], RationalFunction::one());
            coords.push(h);
        }
        debug_assert_eq!(coords.len(), n + 1);
        ProjectivePoint { coords }
    }

    /// Slot of the homogenizing variable in `coords`, or `None` for the finite chart.
    pub fn hslot(&self) -> Option<usize> {
        (!self.finite).then_some(self.index)
    }

    pub fn point_map(&self, affine: &[RationalFunction]) -> BTreeMap<Var, RationalFunction> {
        self.coords.iter().cloned().zip(affine.iter().cloned()).collect()
    }
}

/// A point `[x_0 : ... : x_n]`; the last coordinate is the homogenizing one.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    pub coords: Vec<RationalFunction>,
}

impl ProjectivePoint {
    pub fn is_at_infinity(&self) -> bool {
        self.coords.last().is_some_and(|h| h.is_zero())
    }

    /// Divides by the homogenizing coordinate, or by the first nonzero one at infinity.
    pub fn normalized(&self, token: Option<&RootToken>) -> ProjectivePoint {
        let pivot = if self.is_at_infinity() { self.coords.iter().find(|c| !c.is_zero()) } else { self.coords.last() };
        let Some(pivot) = pivot else {
            return self.clone();
        };
        let coords = self
            .coords
            .iter()
            .map(|c| {
                let q = c.checked_div(pivot).expect("nonzero pivot");
                match token {
                    Some(t) => t.reduce(&q),
                    None => q,
                }
            })
            .collect();
        ProjectivePoint { coords }
    }

    /// Equality up to a common nonzero factor.
    pub fn same_point(&self, other: &ProjectivePoint, token: Option<&RootToken>) -> bool {
        self.coords.len() == other.coords.len() && {
            let a = self.normalized(token);
            let b = other.normalized(token);
            a.coords == b.coords
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.constant_value().is_some_and(|v| v.is_integer()))
    }

    pub fn render(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.render().join(":"))
    }
}

/// Multiplicity of `V(f)` at `point`: the lowest degree in `coords` of
/// `f(x + point)`. Returns `None` when `f` vanishes identically there.
pub fn multiplicity_at(
    f: &Polynomial,
    coords: &[Var],
    point: &[RationalFunction],
    token: Option<&RootToken>,
) -> Option<u32> {
    let active: BTreeSet<Var> = coords.iter().cloned().collect();
    let shift: BTreeMap<Var, RationalFunction> =
        coords.iter().zip(point).map(|(v, p)| (v.clone(), &RationalFunction::var(v.clone()) + p)).collect();
    let (num, _) = crate::algebra::ratfun::substitute_parts(f, &shift);
    let num = match token {
        Some(t) => t.reduce_poly(&num),
        None => num,
    };
    num.min_degree_in_set(&active)
}

/// Multiplicity via the first non-vanishing order of partial derivatives.
pub fn multiplicity_by_derivatives(f: &Polynomial, coords: &[Var], point: &[RationalFunction]) -> Option<u32> {
    let values: BTreeMap<Var, RationalFunction> = coords.iter().cloned().zip(point.iter().cloned()).collect();
    let deg = f.degree_in_set(&coords.iter().cloned().collect());
    let mut layer = vec![f.clone()];
    for order in 0..=deg {
        let nonzero =
            layer.iter().any(|g| !RationalFunction::from(g.clone()).substitute(&values).expect("polynomial").is_zero());
        if nonzero {
            return Some(order);
        }
        let mut next = Vec::new();
        for g in &layer {
            for v in coords {
                let d = g.derivative(v);
                if !d.is_zero() && !next.contains(&d) {
                    next.push(d);
                }
            }
        }
        layer = next;
    }
    None
}
