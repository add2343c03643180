//! Property suites shared by the `properties` and `acceptance` targets.
//!
//! Each suite drives a proptest runner for a given number of cases and
//! reports the first minimized counterexample as an error string.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, TestCaseError, TestRunner};

use transurf_core::curve::{is_line, properness_degree};
use transurf_core::expr::{parse_param_triple, parse_poly};
use transurf_core::genlab::{random_instance, InstanceSpec};
use transurf_core::poly::{
    content_primitive, gcd, psi_decompose_core, resultant, resultant_prs, Monomial,
};
use transurf_core::surface::{check_certificate, classify_surface, normalize_standard, Classification, Config};
use transurf_core::{CurveParam, MPoly, VarSet, Q};

type Terms = Vec<(i64, [u32; 4])>;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn build(vars: &VarSet, terms: &Terms) -> MPoly {
    let n = vars.arity();
    MPoly::from_terms(
        vars,
        terms.iter().map(|(c, e)| (Monomial::from_exps(e[..n].to_vec()), q(*c))),
    )
}

/// Sparse polynomials with small integer coefficients, degree at most 2 per
/// variable.
fn terms(max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((-4i64..=4, [0u32..=2, 0u32..=2, 0u32..=2, 0u32..=2]), 1..=max_terms)
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(RunnerConfig { cases, failure_persistence: None, ..RunnerConfig::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// `c` divides `gcd(a c, b c)`, which divides both products.
pub fn gcd_identities(cases: u32) -> Result<(), String> {
    let space = VarSet::space();
    run(cases, (terms(4), terms(4), terms(3)), |(a, b, c)| {
        let (a, b, c) = (build(&space, &a), build(&space, &b), build(&space, &c));
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (&a * &c, &b * &c);
        let g = gcd(&ac, &bc);
        prop_assert!(g.exact_div(&c).is_some(), "c = {c} does not divide gcd {g}");
        prop_assert!(ac.exact_div(&g).is_some() && bc.exact_div(&g).is_some());
        Ok(())
    })
}

/// `res(a b, c) = res(a, c) res(b, c)`.
pub fn resultant_product_formula(cases: u32) -> Result<(), String> {
    let space = VarSet::space();
    run(cases, (terms(3), terms(3), terms(3), 0usize..3), |(a, b, c, v)| {
        let (a, b, c) = (build(&space, &a), build(&space, &b), build(&space, &c));
        prop_assume!(a.depends_on(v) && b.depends_on(v) && c.depends_on(v));
        let lhs = resultant(&(&a * &b), &c, v).unwrap();
        let rhs = &resultant(&a, &c, v).unwrap() * &resultant(&b, &c, v).unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

/// A common factor involving `v` forces a zero resultant; coprime inputs with
/// generic coefficients do not, and the modular and subresultant algorithms
/// agree on every input.
pub fn resultant_common_root(cases: u32) -> Result<(), String> {
    let space = VarSet::space();
    run(cases, (terms(3), terms(3), terms(2), 0usize..3), |(a, b, c, v)| {
        let (a, b, c) = (build(&space, &a), build(&space, &b), build(&space, &c));
        prop_assume!(!a.is_zero() && !b.is_zero() && c.depends_on(v));
        let r = resultant(&(&a * &c), &(&b * &c), v).unwrap();
        prop_assert!(r.is_zero(), "nonzero resultant with common factor {c}");
        if a.depends_on(v) && b.depends_on(v) {
            let fast = resultant(&a, &b, v).unwrap();
            prop_assert_eq!(&fast, &resultant_prs(&a, &b, v).unwrap());
            prop_assert_eq!(fast.is_zero(), gcd(&a, &b).depends_on(v));
        }
        Ok(())
    })
}

/// `h_tilde psi p_hat = H`; `psi` has no content in the parameter and no
/// parameter-only factor.
pub fn psi_reconstruction(cases: u32) -> Result<(), String> {
    let vars = VarSet::new(["x1", "x2", "x3", "t1"]).unwrap();
    run(cases, (terms(2), terms(3), prop::collection::vec(-3i64..=3, 1..=3)), |(x, mixed, t)| {
        let x_only: Terms = x.into_iter().map(|(c, mut e)| {
            e[3] = 0;
            (c, e)
        }).collect();
        let t_only: Terms = t.iter().enumerate().map(|(i, &c)| (c, [0, 0, 0, i as u32])).collect();
        let h = &(&build(&vars, &x_only) * &build(&vars, &mixed)) * &build(&vars, &t_only);
        prop_assume!(!h.is_zero());
        let core = psi_decompose_core(&h);
        prop_assert_eq!(&(&(&core.h_tilde * &core.psi) * &core.p_hat), &h);
        prop_assert!(!core.p_hat.support().iter().any(|&i| i < 3));
        prop_assert!(!core.h_tilde.depends_on(3));
        if core.psi.depends_on(3) {
            // psi is its own decomposition: both contents are trivial
            let again = psi_decompose_core(&core.psi);
            prop_assert!(again.p_hat.is_constant(), "psi has parameter content {}", again.p_hat);
            prop_assert!(again.h_tilde.is_constant(), "psi has x content {}", again.h_tilde);
            let (cont, _) = content_primitive(&core.psi, 3);
            prop_assert!(cont.is_constant());
        }
        Ok(())
    })
}

fn poly_text(coeffs: &[i64], var: &str) -> String {
    let mut s = String::from("0");
    for (i, c) in coeffs.iter().enumerate() {
        s.push_str(&format!("+({c})*{var}^{i}"));
    }
    s
}

/// Graph curves `(t, R(t), S(t))` have properness degree 1; composing with
/// `t^2` gives 2.
pub fn properness_values(cases: u32) -> Result<(), String> {
    let coeffs = || prop::collection::vec(-3i64..=3, 1..=4);
    run(cases, (coeffs(), coeffs(), coeffs(), coeffs()), |(r, s, d, e)| {
        prop_assume!(d.iter().any(|&c| c != 0));
        let den = poly_text(&d, "t");
        let (rt, st) = (poly_text(&r, "t"), poly_text(&s, "t"));
        let graph = parse_param_triple(&format!("t, ({rt})/({den}), {st}"), "t").unwrap();
        prop_assert_eq!(properness_degree(&graph).unwrap(), 1);
        let sq = |p: &[i64]| poly_text(p, "(t^2)");
        let folded = parse_param_triple(&format!("t^2, ({})/({}), {}", sq(&r), sq(&d), sq(&e)), "t").unwrap();
        prop_assert_eq!(properness_degree(&folded).unwrap(), 2);
        Ok(())
    })
}

/// Normalization puts `P2` in standard form and preserves the surface map up
/// to the recorded parameter shift.
pub fn standard_form(cases: u32) -> Result<(), String> {
    let coeffs = || prop::collection::vec(-3i64..=3, 2..=4);
    run(cases, ([coeffs(), coeffs(), coeffs()], [coeffs(), coeffs(), coeffs()], -3i64..=3, -3i64..=3), |(a, b, u, w)| {
        let triple = |c: &[Vec<i64>]| {
            let t: Vec<String> = c.iter().map(|p| poly_text(p, "t")).collect();
            parse_param_triple(&t.join(", "), "t").unwrap()
        };
        let (p1, p2) = (triple(&a), triple(&b));
        prop_assume!(!p2.is_constant());
        let (sp, shift) = normalize_standard(&p1, &p2).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(sp.is_standard());
        let (u, w) = (q(u), q(w));
        let lhs: Vec<Q> = sp.p1.eval(&u).unwrap().iter().zip(sp.p2.eval(&w).unwrap()).map(|(x, y)| x + y).collect();
        let rhs: Vec<Q> = p1.eval(&u).unwrap().iter().zip(p2.eval(&(&w + &shift)).unwrap()).map(|(x, y)| x + y).collect();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

/// Rendering and reparsing is the identity.
pub fn parse_render_roundtrip(cases: u32) -> Result<(), String> {
    let space = VarSet::space();
    run(cases, terms(6), |t| {
        let p = build(&space, &t);
        let back = parse_poly(&p.to_string(), &space).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(back, p);
        Ok(())
    })
}

/// Same seed, same instance.
pub fn generator_determinism(cases: u32) -> Result<(), String> {
    run(cases, 0u64..10_000, |seed| {
        let spec = InstanceSpec::default().with_seed(seed);
        let a = random_instance(&spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let b = random_instance(&spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(a, b);
        Ok(())
    })
}

/// Every certificate emitted for a generated instance passes the independent
/// checks: exact verification, standard form, no line, `C2` not on `C1`.
pub fn certificate_invariants(count: u64, first_seed: u64) -> Result<(), String> {
    for seed in first_seed..first_seed + count {
        let spec = InstanceSpec::default().with_seed(seed);
        let (f, _) = random_instance(&spec).map_err(|e| format!("seed {seed}: {e}"))?;
        match classify_surface(&f, &Config::default()) {
            Ok(Classification::Translational(sp, cert)) => {
                check_certificate(&f, &sp, &cert).map_err(|e| format!("seed {seed}: {e}"))?;
                if is_line(&sp.p1) || is_line(&sp.p2) {
                    return Err(format!("seed {seed}: line in certificate"));
                }
            }
            other => return Err(format!("seed {seed}: {other:?}")),
        }
    }
    Ok(())
}

/// Every suite with its default case count.
pub fn all_suites() -> Vec<(&'static str, Box<dyn Fn() -> Result<(), String>>)> {
    vec![
        ("gcd identities", Box::new(|| gcd_identities(48))),
        ("resultant product formula", Box::new(|| resultant_product_formula(48))),
        ("resultant common-root criterion", Box::new(|| resultant_common_root(48))),
        ("psi reconstruction and coprimality", Box::new(|| psi_reconstruction(48))),
        ("properness degrees", Box::new(|| properness_values(32))),
        ("standard form", Box::new(|| standard_form(48))),
        ("parse/render round trip", Box::new(|| parse_render_roundtrip(64))),
        ("generator determinism", Box::new(|| generator_determinism(4))),
        ("certificate invariants", Box::new(|| certificate_invariants(3, 1000))),
    ]
}

pub fn curve(text: &str) -> CurveParam {
    parse_param_triple(text, "t").unwrap()
}
