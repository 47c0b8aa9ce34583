//! Text front end: a small expression grammar, conversion to the algebra
//! types, and rendering.

mod convert;
mod parse;
mod tree;

pub use convert::{to_rational_function, to_root_expression, to_value_with_root, RootExpression};
pub use parse::parse_expression;
pub use tree::ExpressionTree;

use crate::algebra::{Polynomial, RationalFunction, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("syntax error at position {position}: exponents must be integer literals")]
    NonIntegerExponent { position: usize },
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("nested square roots are not supported; pass the associated polynomial to `parametrize` instead")]
    NestedRoot,
    #[error("more than one distinct square root in a single expression")]
    MultipleRoots,
    #[error("square root not allowed here")]
    UnexpectedRoot,
    #[error("the root must have the form R1*sqrt(R2)")]
    NotAProduct,
    #[error("the radicand is zero")]
    ZeroRadicand,
    #[error("expected a polynomial, found a quotient")]
    NotPolynomial,
}

impl ExprError {
    pub(crate) fn syntax(position: usize, message: &str) -> Self {
        ExprError::Syntax { position, message: message.to_string() }
    }
}

pub fn parse_rational_function(text: &str) -> Result<RationalFunction, ExprError> {
    to_rational_function(&parse_expression(text)?)
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial, ExprError> {
    parse_rational_function(text)?.as_polynomial().cloned().ok_or(ExprError::NotPolynomial)
}

pub fn parse_root(text: &str) -> Result<RootExpression, ExprError> {
    to_root_expression(&parse_expression(text)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Plain,
    Json,
}

/// Anything `render` can print.
pub enum Renderable<'a> {
    Polynomial(&'a Polynomial),
    RationalFunction(&'a RationalFunction),
    Substitutions(&'a [(Var, RationalFunction)]),
}

impl<'a> From<&'a Polynomial> for Renderable<'a> {
    fn from(p: &'a Polynomial) -> Self {
        Renderable::Polynomial(p)
    }
}

impl<'a> From<&'a RationalFunction> for Renderable<'a> {
    fn from(f: &'a RationalFunction) -> Self {
        Renderable::RationalFunction(f)
    }
}

impl<'a> From<&'a [(Var, RationalFunction)]> for Renderable<'a> {
    fn from(s: &'a [(Var, RationalFunction)]) -> Self {
        Renderable::Substitutions(s)
    }
}

pub fn render<'a>(value: impl Into<Renderable<'a>>, style: Style) -> String {
    let plain = match value.into() {
        Renderable::Polynomial(p) => p.to_string(),
        Renderable::RationalFunction(f) => f.to_string(),
        Renderable::Substitutions(list) => {
            if style == Style::Json {
                return substitutions_json(list).to_string();
            }
            let parts: Vec<String> = list.iter().map(|(v, f)| format!("{v} -> {f}")).collect();
            return parts.join(", ");
        }
    };
    match style {
        Style::Plain => plain,
        Style::Json => serde_json::Value::String(plain).to_string(),
    }
}

pub fn substitutions_json(list: &[(Var, RationalFunction)]) -> serde_json::Value {
    serde_json::Value::Array(
        list.iter().map(|(v, f)| serde_json::json!({ "var": v.name(), "value": f.to_string() })).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_polynomial() {
        let p = parse_polynomial("u^2+x^2-1").unwrap();
        assert_eq!(render(&p, Style::Plain), "u^2+x^2-1");
    }

    #[test]
    fn renders_quotient() {
        let f = parse_rational_function("2*t1/(t1^2+1)").unwrap();
        assert_eq!(render(&f, Style::Plain), "2*t1/(t1^2+1)");
        let g = parse_rational_function("t2^2/(4*t1^3+4*t2)").unwrap();
        assert_eq!(render(&g, Style::Plain), "1/4*t2^2/(t1^3+t2)");
        assert_eq!(parse_rational_function(&g.to_string()).unwrap(), g);
        let h = parse_rational_function("-(x+1)/(x*y)").unwrap();
        assert_eq!(parse_rational_function(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn json_substitution_list() {
        let list = vec![(Var::new("x"), parse_rational_function("(t^2-1)/(t^2+1)").unwrap())];
        let json: serde_json::Value = serde_json::from_str(&render(list.as_slice(), Style::Json)).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 1);
        assert_eq!(json[0]["var"], "x");
        assert_eq!(json[0]["value"], "(t^2-1)/(t^2+1)");
    }
}
