use std::collections::BTreeMap;

use proptest::prelude::*;

use rootrat::algebra::{
    extract_square_factor, gcd, poly_sqrt, Monomial, Polynomial, Rational, RationalFunction as RF, Var,
};
use rootrat::driver::{parametrize_polynomial, rationalize_root, verify, Options};
use rootrat::expr::{parse_expression, parse_polynomial, parse_root, ExpressionTree, RootExpression};

const NAMES: [&str; 3] = ["x", "y", "z"];

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn tree() -> impl Strategy<Value = ExpressionTree> {
    let leaf = prop_oneof![
        (0i64..20).prop_map(ExpressionTree::number),
        (1i64..9, 2i64..9).prop_map(|(n, d)| ExpressionTree::Number(rational(n, d))),
        prop::sample::select(NAMES.to_vec()).prop_map(ExpressionTree::symbol),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| ExpressionTree::Neg(Box::new(t))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(ExpressionTree::Add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(ExpressionTree::Mul),
            (inner.clone(), -3i64..4).prop_map(|(t, e)| ExpressionTree::Pow(Box::new(t), e)),
            inner.prop_map(|t| ExpressionTree::Sqrt(Box::new(t))),
        ]
    })
}

fn polynomial(vars: &'static [&'static str], max_terms: usize, max_degree: u32) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=max_degree, vars.len()), -6i64..=6);
    prop::collection::vec(term, 1..=max_terms).prop_map(move |terms| {
        let mut p = Polynomial::zero();
        for (exps, c) in terms {
            let mut budget = max_degree;
            let pairs: Vec<(Var, u32)> = vars
                .iter()
                .zip(exps)
                .map(|(n, e)| {
                    let e = e.min(budget);
                    budget -= e;
                    (Var::new(n), e)
                })
                .collect();
            p.add_term(Monomial::from_pairs(pairs), Rational::from_integer(c.into()));
        }
        p
    })
}

fn point() -> impl Strategy<Value = BTreeMap<Var, Rational>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), NAMES.len())
        .prop_map(|vals| NAMES.iter().zip(vals).map(|(n, (a, b))| (Var::new(n), rational(a, b))).collect())
}

fn value_at(p: &Polynomial, at: &BTreeMap<Var, Rational>) -> Rational {
    p.evaluate(at).constant_value().unwrap_or_else(|| rational(0, 1))
}

/// Rewrites `s^k` as `r^(k/2) * s^(k%2)` for an adjoined `s = sqrt(r)`.
fn reduce_root_powers(p: &Polynomial, s: &Var, r: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (k, c) in p.coefficients_in(s).iter().enumerate() {
        let odd = if k % 2 == 1 { Polynomial::var(s.clone()) } else { Polynomial::one() };
        out = &out + &(&(c * &r.pow(k as u32 / 2)) * &odd);
    }
    out
}

/// `value^2 = prefactor^2 * radicand` after substitution; a symbol named
/// `sqrt(..)` in the result is an adjoined root and is reduced by its square.
fn squares_to(root: &RootExpression, subst: &[(Var, RF)], value: &RF) -> bool {
    let map: BTreeMap<Var, RF> = subst.iter().cloned().collect();
    let (Ok(r), Ok(p)) = (root.radicand.substitute(&map), root.prefactor.substitute(&map)) else { return false };
    let diff = &(value * value) - &(&(&p * &p) * &r);
    let mut num = diff.num().clone();
    for v in diff.variables() {
        if let Some(inner) = v.name().strip_prefix("sqrt(").and_then(|n| n.strip_suffix(')')) {
            num = reduce_root_powers(&num, &v, &parse_polynomial(inner).unwrap());
        }
    }
    num.is_zero()
}

fn quadratic_radicand() -> impl Strategy<Value = Polynomial> {
    (prop::collection::vec(-3i64..=3, 6), 1i64..=3).prop_map(|(c, d)| {
        let text = format!("{}*x^2+{}*x*y+{}*y^2+{}*x+{}*y+{}", c[0], c[1], c[2], c[3], c[4], c[5]);
        parse_polynomial(&text).unwrap().scale(&rational(1, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_trees_parse_back(t in tree()) {
        let text = t.to_string();
        let parsed = parse_expression(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(parsed.canonical(), t.canonical(), "text {}", text);
    }

    #[test]
    fn parsing_never_panics(s in "[xy0-9+*/^() -]{0,24}|sqrt\\([xy0-9+*/^ -]{0,12}\\)") {
        let _ = parse_expression(&s);
    }

    #[test]
    fn ring_operations_commute_with_evaluation(
        p in polynomial(&NAMES, 5, 4),
        q in polynomial(&NAMES, 5, 4),
        at in point(),
    ) {
        let (pv, qv) = (value_at(&p, &at), value_at(&q, &at));
        prop_assert_eq!(value_at(&(&p * &q), &at), &pv * &qv);
        prop_assert_eq!(value_at(&(&p + &q), &at), &pv + &qv);
        prop_assert_eq!(value_at(&(&p - &q), &at), &pv - &qv);
    }

    #[test]
    fn gcd_keeps_common_factor(
        a in polynomial(&NAMES, 3, 2),
        b in polynomial(&NAMES, 3, 2),
        c in polynomial(&NAMES, 3, 2),
    ) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (&a * &c, &b * &c);
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some(), "gcd {} does not divide {}", g, ac);
        prop_assert!(bc.div_exact(&g).is_some(), "gcd {} does not divide {}", g, bc);
        prop_assert!(g.div_exact(&c).is_some(), "gcd {} misses factor {}", g, c);
    }

    #[test]
    fn square_factor_splits_exactly(a in polynomial(&NAMES, 2, 2), b in polynomial(&NAMES, 3, 3)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let p = &(&a * &a) * &b;
        let (s, rest) = extract_square_factor(&p);
        prop_assert_eq!(&(&s * &s) * &rest, p);
        prop_assert!(s.div_exact(&a).is_some() || a.is_constant(), "{} lost {}", s, a);
    }

    #[test]
    fn squares_have_roots(q in polynomial(&NAMES, 4, 3)) {
        let s = poly_sqrt(&(&q * &q));
        prop_assert!(s.as_ref().is_some_and(|s| *s == q || *s == -&q), "{:?}", s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, timeout: 10_000, ..ProptestConfig::default() })]

    #[test]
    fn rationalized_roots_square_correctly(r in quadratic_radicand()) {
        prop_assume!(!r.is_zero());
        let root = RootExpression::sqrt_of(RF::from(r.clone()));
        let forms = rationalize_root(&root, &Options::default()).unwrap();
        for form in &forms {
            prop_assert!(squares_to(&root, &form.substitutions, &form.root_value), "sqrt({}): {}", r, form.root_value);
            let rational = form.substitutions.iter().all(|(_, f)| f.variables().iter().all(|v| !v.name().starts_with("sqrt(")));
            prop_assert!(!rational || verify(&root, &form.substitutions).is_some());
        }
    }

    #[test]
    fn results_are_deterministic(r in quadratic_radicand()) {
        let f = &parse_polynomial("u^2").unwrap() - &r;
        let a = parametrize_polynomial(&f, &Options::default()).unwrap();
        let b = parametrize_polynomial(&f, &Options::default()).unwrap();
        let subst = |s: &[rootrat::driver::Solution]| s.iter().map(|x| x.param.substitutions()).collect::<Vec<_>>();
        prop_assert_eq!(subst(&a), subst(&b));
    }

    #[test]
    fn single_result_heads_the_full_list(r in quadratic_radicand()) {
        let f = &parse_polynomial("u^2").unwrap() - &r;
        let one = parametrize_polynomial(&f, &Options::default()).unwrap();
        let all = parametrize_polynomial(&f, &Options { multiple_solutions: true, ..Options::default() }).unwrap();
        prop_assert!(one.len() <= 1);
        prop_assert_eq!(one.is_empty(), all.is_empty());
        if let (Some(a), Some(b)) = (one.first(), all.first()) {
            prop_assert_eq!(a.param.substitutions(), b.param.substitutions());
        }
        for s in &all {
            prop_assert!(s.param.annihilates(&f), "{:?}", s.param.substitutions());
        }
    }
}

#[test]
fn quotient_radicands_verify() {
    for text in ["sqrt((1-x^2)/(1+y^2))", "x*sqrt(x^2+y^2)/(1+y)", "sqrt(x+1)/sqrt(4)"] {
        let Ok(root) = parse_root(text) else { continue };
        for form in rationalize_root(&root, &Options::default()).unwrap() {
            assert!(squares_to(&root, &form.substitutions, &form.root_value), "{text}");
        }
    }
}
