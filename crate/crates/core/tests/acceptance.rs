//! Acceptance run: one line per criterion with its outcome and timing.
//! Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rootrat::algebra::{poly_sqrt, rational_sqrt, Monomial, Polynomial, Rational, RationalFunction as RF, Var};
use rootrat::driver::{
    parametrize_polynomial, rationalize_root, rationalize_simultaneously, verify, Options, Solution, Strategy,
    VerifiedForm,
};
use rootrat::expr::{parse_polynomial, parse_rational_function, parse_root, RootExpression};
use rootrat::geometry::{
    find_dminus1_points, multiplicity_at, multiplicity_by_derivatives, ProjectiveHypersurface, SearchOptions,
};
use rootrat::parametrize::default_order;

type Outcome = Result<(), String>;

fn rf(s: &str) -> RF {
    parse_rational_function(s).unwrap()
}

fn poly(s: &str) -> Polynomial {
    parse_polynomial(s).unwrap()
}

fn vars(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| Var::new(n)).collect()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn value_of(subst: &[(Var, RF)], name: &str) -> Result<RF, String> {
    subst.iter().find(|(v, _)| v.name() == name).map(|(_, f)| f.clone()).ok_or_else(|| format!("no value for {name}"))
}

fn expect_value(subst: &[(Var, RF)], name: &str, expected: &str) -> Outcome {
    let got = value_of(subst, name)?;
    ensure(got == rf(expected), || format!("{name} = {got}, expected {expected}"))
}

/// `f` composed with the substitution vanishes identically.
fn annihilated(f: &Polynomial, subst: &[(Var, RF)]) -> bool {
    let map: BTreeMap<Var, RF> = subst.iter().cloned().collect();
    RF::from(f.clone()).substitute(&map).is_ok_and(|v| v.is_zero())
}

/// `value^2 = prefactor^2 * radicand` after substitution.
fn squares_to(root: &RootExpression, subst: &[(Var, RF)], value: &RF) -> bool {
    let map: BTreeMap<Var, RF> = subst.iter().cloned().collect();
    let (Ok(r), Ok(p)) = (root.radicand.substitute(&map), root.prefactor.substitute(&map)) else { return false };
    value * value == &(&p * &p) * &r
}

fn checked_form(root: &RootExpression, form: &VerifiedForm) -> Outcome {
    ensure(squares_to(root, &form.substitutions, &form.root_value), || {
        format!("value {} does not square to the radicand", form.root_value)
    })
}

fn first(list: Vec<Solution>) -> Result<Solution, String> {
    list.into_iter().next().ok_or_else(|| "no parametrization".to_string())
}

fn circle_golden() -> Outcome {
    let opts =
        Options { variables: Some(vars(&["u", "x"])), point: Some(vec![rf("0"), rf("-1")]), ..Options::default() };
    let sol = first(parametrize_polynomial(&poly("u^2+x^2-1"), &opts).map_err(|e| e.to_string())?)?;
    let subst = sol.param.substitutions();
    expect_value(&subst, "u", "2*t1/(t1^2+1)")?;
    expect_value(&subst, "x", "(t1^2-1)/(t1^2+1)")
}

fn cusp_chain_golden() -> Outcome {
    let root = parse_root("sqrt(x^4+y^3)").unwrap();
    let opts = Options { f_polynomials: Some([poly("-1/4"), poly("x^2"), poly("y^3")]), ..Options::default() };
    let forms = rationalize_root(&root, &opts).map_err(|e| e.to_string())?;
    let form = forms.first().ok_or("no rationalization")?;
    ensure(form.strategy == Strategy::FDecomposition, || format!("strategy {:?}", form.strategy))?;
    expect_value(&form.substitutions, "x", "t2^2/(4*(t1^3+t2))")?;
    expect_value(&form.substitutions, "y", "t1*t2^2/(4*(t1^3+t2))")?;
    let expected = rf("t2^3*(2*t1^3+t2)/(16*(t1^3+t2)^2)");
    ensure(form.root_value == expected, || format!("root value {}", form.root_value))?;
    checked_form(&root, form)
}

fn no_points_on_cusp_chain() -> Outcome {
    let f = poly("u^2-x^4-y^3");
    let hs = ProjectiveHypersurface::closure(&f, &default_order(&f, None));
    let search = SearchOptions { multiple: true, ..SearchOptions::default() };
    let points = find_dminus1_points(&hs, &search).map_err(|e| e.to_string())?;
    ensure(points.is_empty(), || format!("{} points found", points.len()))
}

fn keep_square_fails() -> Outcome {
    let sols = parametrize_polynomial(&poly("u^2*x^2-x^4-x^4*y-x*y^2-x^2*y^2"), &Options::default())
        .map_err(|e| e.to_string())?;
    ensure(sols.is_empty(), || format!("{} parametrizations found", sols.len()))
}

fn strip_square_succeeds() -> Outcome {
    let f = poly("u^2-x^4-x^4*y-x*y^2-x^2*y^2");
    let sol = first(parametrize_polynomial(&f, &Options::default()).map_err(|e| e.to_string())?)?;
    let subst = sol.param.substitutions();
    ensure(annihilated(&f, &subst), || "the substitution does not annihilate the polynomial".into())?;
    let root = parse_root("sqrt(x^4+x^4*y+x*y^2+x^2*y^2)").unwrap();
    let xy: Vec<(Var, RF)> = subst.into_iter().filter(|(v, _)| v.name() != "u").collect();
    let form = verify(&root, &xy).ok_or("the root does not verify")?;
    checked_form(&root, &form)
}

/// Brute-force scan of small integer points for the given multiplicity, by derivatives.
fn scan_points(f: &Polynomial, coords: &[Var], mult: u32, bound: i64) -> Vec<Vec<i64>> {
    let n = coords.len();
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut tuple = vec![-bound; n];
    loop {
        // first nonzero coordinate positive keeps one representative per line
        let lead = tuple.iter().find(|&&c| c != 0);
        let primitive = tuple.iter().fold(0i64, |g, &c| num_integer::gcd(g, c)) == 1;
        if lead.is_some_and(|&c| c > 0) && primitive {
            let point: Vec<RF> = tuple.iter().map(|&c| RF::integer(c)).collect();
            if multiplicity_by_derivatives(f, coords, &point) == Some(mult) {
                out.push(tuple.clone());
            }
        }
        let Some(k) = (0..n).rev().find(|&k| tuple[k] < bound) else { break };
        tuple[k] += 1;
        for t in tuple.iter_mut().skip(k + 1) {
            *t = -bound;
        }
    }
    out
}

fn infinity_points() -> Outcome {
    let f = poly("4*u^2*x^2-x^4-4*x^2*y^2-4");
    let order = default_order(&f, None);
    let hs = ProjectiveHypersurface::closure(&f, &order);
    let oracle = scan_points(&hs.poly, &hs.coords, 3, 3);
    ensure(oracle.len() == 2 && oracle.iter().all(|p| *p.last().unwrap() == 0), || format!("scan found {oracle:?}"))?;
    let search = SearchOptions { multiple: true, ..SearchOptions::default() };
    let found = find_dminus1_points(&hs, &search).map_err(|e| e.to_string())?;
    ensure(found.len() == 2, || format!("search found {} points", found.len()))?;
    for p in &found {
        let ints: Vec<i64> = p.point.normalized(None).coords.iter().map(|c| c.to_string().parse().unwrap()).collect();
        ensure(p.point.is_at_infinity() && oracle.contains(&ints), || format!("unexpected point {}", p.point))?;
    }
    let sol = first(parametrize_polynomial(&f, &Options::default()).map_err(|e| e.to_string())?)?;
    ensure(sol.strategy == Strategy::Direct, || format!("strategy {:?}", sol.strategy))?;
    ensure(annihilated(&f, &sol.param.substitutions()), || "not a parametrization".into())
}

fn variables_option() -> Outcome {
    let opts = Options { variables: Some(vars(&["u", "y"])), ..Options::default() };
    let sol = first(parametrize_polynomial(&poly("u^2-x-y-1"), &opts).map_err(|e| e.to_string())?)?;
    let subst = sol.param.substitutions();
    ensure(subst.len() == 2, || format!("{} substitutions", subst.len()))?;
    expect_value(&subst, "u", "t1")?;
    expect_value(&subst, "y", "t1^2-x-1")
}

fn general_t_option() -> Outcome {
    let f = poly("u^2-x^3-x^2");
    let opts = Options { general_t: true, ..Options::default() };
    let sol = first(parametrize_polynomial(&f, &opts).map_err(|e| e.to_string())?)?;
    let subst = sol.param.substitutions();
    ensure(annihilated(&f, &subst), || "not a parametrization".into())?;
    let outputs: Vec<&str> = sol.param.outputs.iter().map(|v| v.name()).collect();
    ensure(outputs == ["t0", "t1"], || format!("outputs {outputs:?}"))?;
    let at = BTreeMap::from([(Var::new("t0"), RF::one())]);
    for (v, value) in &subst {
        let s = value.substitute(&at).map_err(|e| e.to_string())?;
        ensure(s.is_polynomial(), || format!("{v} = {s} at t0 = 1"))?;
    }
    Ok(())
}

fn general_c_option() -> Outcome {
    let opts = Options { variables: Some(vars(&["u", "x"])), general_c: true, ..Options::default() };
    let sol = first(parametrize_polynomial(&poly("u^2+x^2-1"), &opts).map_err(|e| e.to_string())?)?;
    let c1 = Var::new("C1");
    ensure(sol.param.free_constants == vec![c1.clone()], || format!("constants {:?}", sol.param.free_constants))?;
    // C1 = -1 puts the base point at (u, x) = (0, -1)
    let c_value = Rational::from_integer((-1).into());
    let mut map = BTreeMap::from([(c1.clone(), RF::constant(c_value.clone()))]);
    if let Some(token) = &sol.param.token {
        let r = token.radicand().evaluate(&BTreeMap::from([(c1, c_value)]));
        let root = r.constant_value().and_then(|c| rational_sqrt(&c)).ok_or("token stays irrational")?;
        map.insert(token.symbol().clone(), RF::constant(root));
    }
    let subst: Vec<(Var, RF)> =
        sol.param.substitutions().into_iter().map(|(v, f)| (v, f.substitute(&map).unwrap())).collect();
    expect_value(&subst, "u", "2*t1/(t1^2+1)")?;
    expect_value(&subst, "x", "(t1^2-1)/(t1^2+1)")
}

fn nested_lines() -> Outcome {
    let roots = vec![parse_root("sqrt(x+1)").unwrap(), parse_root("sqrt(x+y+1)").unwrap()];
    let forms = rationalize_simultaneously(&roots, &Options::default()).map_err(|e| e.to_string())?.ok_or("none")?;
    ensure(forms[0].root_value == rf("1/t1"), || format!("sqrt(x+1) -> {}", forms[0].root_value))?;
    for (root, form) in roots.iter().zip(&forms) {
        checked_form(root, form)?;
    }
    Ok(())
}

fn disk_and_ball() -> Outcome {
    let roots = vec![parse_root("sqrt(1-x^2)").unwrap(), parse_root("sqrt(1-x^2-y^2)").unwrap()];
    let opts = Options { output_variables: Some(vars(&["v", "w"])), ..Options::default() };
    let forms = rationalize_simultaneously(&roots, &opts).map_err(|e| e.to_string())?.ok_or("none")?;
    let expected = [rf("2*v/(v^2+1)"), rf("8*v^2*w/(1+v^4+v^2*(2+4*w^2))")];
    for ((root, form), want) in roots.iter().zip(&forms).zip(&expected) {
        checked_form(root, form)?;
        let got = &form.root_value;
        ensure(got == want || &(-got) == want, || format!("value {got}, expected {want} up to sign"))?;
    }
    // the first round only touches y, with x fixed; the second rationalizes sqrt(1-x^2)
    let x = value_of(&forms[0].substitutions, "x")?;
    ensure(!x.contains_var(&Var::new("w")), || format!("x = {x} depends on w"))
}

fn hexagon() -> Outcome {
    let root = parse_root("sqrt((1-x1-x2-x3)^2-4*x1*x2*x3)").unwrap();
    let direct = rationalize_root(&root, &Options::default()).map_err(|e| e.to_string())?;
    let direct = direct.first().ok_or("direct path found nothing")?;
    ensure(direct.strategy == Strategy::Direct, || format!("strategy {:?}", direct.strategy))?;
    checked_form(&root, direct)?;
    let triples = [["1", "1-x1-x2-x3", "x1*x2*x3"], ["x1", "1-x1-x2-x3", "x2*x3"]];
    for t in triples {
        let opts = Options { force_fdecomposition: true, f_polynomials: Some(t.map(poly)), ..Options::default() };
        let forms = rationalize_root(&root, &opts).map_err(|e| e.to_string())?;
        let form = forms.first().ok_or_else(|| format!("triple {t:?} found nothing"))?;
        ensure(form.strategy == Strategy::FDecomposition, || format!("strategy {:?}", form.strategy))?;
        checked_form(&root, form)?;
        ensure(form.substitutions != direct.substitutions, || format!("triple {t:?} repeats the direct result"))?;
    }
    Ok(())
}

fn small_rational(rng: &mut ChaCha8Rng, h: i64) -> Rational {
    Rational::new(rng.gen_range(-h..=h).into(), rng.gen_range(1..=h).into())
}

fn random_poly(rng: &mut ChaCha8Rng, names: &[&str], terms: usize, degree: u32) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..terms {
        let mut budget = degree;
        let mut pairs = Vec::new();
        for n in names {
            let e = rng.gen_range(0..=budget);
            budget -= e;
            pairs.push((Var::new(n), e));
        }
        p.add_term(Monomial::from_pairs(pairs), Rational::from_integer(rng.gen_range(-5..=5).into()));
    }
    p
}

fn random_conics(rng: &mut ChaCha8Rng, count: usize) -> Outcome {
    let (u, x) = (Polynomial::var(Var::new("u")), Polynomial::var(Var::new("x")));
    let mut done = 0;
    while done < count {
        let (x0, u0) = (small_rational(rng, 3), small_rational(rng, 3));
        let (a, b) = (small_rational(rng, 4), small_rational(rng, 4));
        let c = &(&u0 * &u0) - &(&(&a * &x0) * &x0) - &b * &x0;
        let four = Rational::from_integer(4.into());
        if a == Rational::from_integer(0.into()) || &b * &b == &(&four * &a) * &c {
            continue;
        }
        let radicand = &(&(&x * &x).scale(&a) + &x.scale(&b)) + &Polynomial::constant(c);
        let f = &(&u * &u) - &radicand;
        let sol = first(parametrize_polynomial(&f, &Options::default()).map_err(|e| e.to_string())?)
            .map_err(|e| format!("{f}: {e}"))?;
        ensure(annihilated(&f, &sol.param.substitutions()), || format!("{f}: not annihilated"))?;
        ensure(sol.param.token.is_none(), || format!("{f}: irrational point"))?;
        done += 1;
    }
    Ok(())
}

fn euler_relation(rng: &mut ChaCha8Rng, count: usize) -> Outcome {
    let names = ["x", "y", "w"];
    let z = Var::new("z");
    let active = names.iter().map(|n| Var::new(n)).collect();
    for _ in 0..count {
        let f = random_poly(rng, &names, 5, 5);
        if f.is_zero() {
            continue;
        }
        let d = f.total_degree();
        let h = f.homogenize(&z, &active);
        let mut euler = Polynomial::zero();
        for v in names.iter().map(|n| Var::new(n)).chain([z.clone()]) {
            euler = &euler + &(&Polynomial::var(v.clone()) * &h.derivative(&v));
        }
        ensure(euler == h.scale(&Rational::from_integer(d.into())), || format!("Euler relation fails for {f}"))?;
        let dehom = h.evaluate(&BTreeMap::from([(z.clone(), Rational::from_integer(1.into()))]));
        ensure(dehom == f, || format!("dehomogenization of {h} is not {f}"))?;
    }
    Ok(())
}

fn square_roots(rng: &mut ChaCha8Rng, count: usize) -> Outcome {
    for _ in 0..count {
        let q = random_poly(rng, &["x", "y", "z"], 4, 3);
        let s = poly_sqrt(&(&q * &q)).ok_or_else(|| format!("no root of ({q})^2"))?;
        ensure(s == q || s == -&q, || format!("root of ({q})^2 is {s}"))?;
    }
    Ok(())
}

fn multiplicities(rng: &mut ChaCha8Rng, count: usize) -> Outcome {
    let names = ["x", "y"];
    let coords: Vec<Var> = names.iter().map(|n| Var::new(n)).collect();
    for k in 0..count {
        let point: Vec<Rational> = (0..2).map(|_| small_rational(rng, 3)).collect();
        let at: BTreeMap<Var, Rational> = coords.iter().cloned().zip(point.iter().cloned()).collect();
        // a product of factors vanishing at the point gives a range of multiplicities
        let mut f = Polynomial::one();
        for _ in 0..=(k % 4) {
            let g = random_poly(rng, &names, 3, 2);
            let g0 = g.evaluate(&at).constant_value().unwrap_or_else(|| Rational::from_integer(0.into()));
            f = &f * &(&g - &Polynomial::constant(g0));
        }
        if k % 5 == 0 {
            f = &f + &Polynomial::one();
        }
        let point: Vec<RF> = point.into_iter().map(RF::constant).collect();
        let a = multiplicity_at(&f, &coords, &point, None);
        let b = multiplicity_by_derivatives(&f, &coords, &point);
        ensure(a == b, || format!("{f} at {point:?}: shift {a:?}, derivatives {b:?}"))?;
    }
    Ok(())
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_014);
    random_conics(&mut rng, 200).map_err(|e| format!("(a) {e}"))?;
    euler_relation(&mut rng, 100).map_err(|e| format!("(b) {e}"))?;
    square_roots(&mut rng, 100).map_err(|e| format!("(c) {e}"))?;
    multiplicities(&mut rng, 100).map_err(|e| format!("(d) {e}"))
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: "1", name: "circle through (0,-1)", limit: secs(1), run: circle_golden },
        Criterion { id: "2", name: "sqrt(x^4+y^3) by decomposition", limit: secs(2), run: cusp_chain_golden },
        Criterion { id: "3a", name: "u^2-x^4-y^3 has no d-1 point", limit: secs(5), run: no_points_on_cusp_chain },
        Criterion { id: "3b", name: "square kept: no parametrization", limit: secs(5), run: keep_square_fails },
        Criterion { id: "3c", name: "square stripped: verified", limit: secs(5), run: strip_square_succeeds },
        Criterion { id: "4", name: "two triple points at infinity", limit: secs(5), run: infinity_points },
        Criterion { id: "5a", name: "Variables {u,y}", limit: secs(2), run: variables_option },
        Criterion { id: "5b", name: "GeneralT", limit: secs(2), run: general_t_option },
        Criterion { id: "5c", name: "GeneralC", limit: secs(2), run: general_c_option },
        Criterion { id: "6a", name: "sqrt(x+1), sqrt(x+y+1)", limit: secs(10), run: nested_lines },
        Criterion { id: "6b", name: "sqrt(1-x^2), sqrt(1-x^2-y^2)", limit: secs(10), run: disk_and_ball },
        Criterion { id: "7", name: "hexagon, direct and decomposed", limit: secs(10), run: hexagon },
        Criterion { id: "8", name: "property suite", limit: secs(60), run: property_suite },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= c.limit, || format!("took {:.2}s, limit {}s", elapsed.as_secs_f64(), c.limit.as_secs()))
        });
        match outcome {
            Ok(()) => println!(
                "criterion {:<3} PASS  {:<34} {:>7.3}s (limit {}s)",
                c.id,
                c.name,
                elapsed.as_secs_f64(),
                c.limit.as_secs()
            ),
            Err(e) => {
                failed += 1;
                println!("criterion {:<3} FAIL  {:<34} {:>7.3}s: {e}", c.id, c.name, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
