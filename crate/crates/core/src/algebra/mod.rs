//! Exact arithmetic over Q: polynomials, rational functions, gcd, square
//! roots, and one adjoined square-root token.

pub mod gcd;
pub mod poly;
pub mod print;
pub mod ratfun;
pub mod sqrt;
pub mod token;
pub mod var;

use std::collections::BTreeSet;

pub use gcd::{gcd, lcm};
pub use poly::{Monomial, Polynomial};
pub use ratfun::RationalFunction;
pub use sqrt::{extract_square_factor, poly_sqrt, rational_sqrt};
pub use token::RootToken;
pub use var::{fresh_var, Var};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution makes a denominator vanish identically")]
    DenominatorVanishes,
    #[error("k = {k} is below the degree {degree}")]
    DegreeAboveK { k: u32, degree: u32 },
    #[error("a second square-root extension would be needed")]
    NeedsExtension,
}

/// Active variables are reparametrized; parameters are treated as constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSplit {
    pub active: BTreeSet<Var>,
    pub params: BTreeSet<Var>,
}

impl VariableSplit {
    /// Splits the variables of `p`; `active = None` makes every variable active.
    pub fn of(p: &Polynomial, active: Option<&BTreeSet<Var>>) -> Self {
        let vars = p.variables();
        match active {
            None => VariableSplit { active: vars, params: BTreeSet::new() },
            Some(a) => VariableSplit { active: a.clone(), params: vars.difference(a).cloned().collect() },
        }
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.active.contains(v) || self.params.contains(v)
    }
}

/// `k_homogenize` with the degree bound reported as an error.
pub fn k_homogenize(p: &Polynomial, k: u32, hvar: &Var, active: &BTreeSet<Var>) -> Result<Polynomial, AlgebraError> {
    p.k_homogenize(k, hvar, active).ok_or(AlgebraError::DegreeAboveK { k, degree: p.degree_in_set(active) })
}

#[cfg(test)]
pub(crate) fn parse_poly(s: &str) -> Polynomial {
    parse_rf(s).as_polynomial().cloned().expect("polynomial literal")
}

#[cfg(test)]
pub(crate) fn parse_rf(s: &str) -> RationalFunction {
    crate::expr::parse_rational_function(s).expect("valid literal")
}
