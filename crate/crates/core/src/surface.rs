//! Deciding and constructing translational parametrizations `P1(t1) + P2(t2)`.
//!
//! The pipeline screens planes and cylinders, then walks a ladder of
//! candidate vectors `a`: the curve `C1 = {f = a . grad f = 0}` gives `P1`,
//! the two-specialization system `f(P1(s_i) + x) / G` (or a pair of
//! Ψ-coefficients) gives `P2`, which is brought to standard form and the
//! whole certificate is verified exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::curve::{
    dimension_evidence, is_line, parametrize_space_curve_with, vanishes_on, CurveConfig, CurveError, CurveParam,
    DimensionEvidence, SpaceCurveSystem,
};
use crate::poly::linalg::{kernel, transpose};
use crate::poly::{
    gcd, psi_decompose_core, squarefree_part, substitute, Binding, MPoly, Monomial, PsiDecomposition, RatFn, VarSet,
    Q,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Route {
    #[default]
    Shortcut,
    General,
    Both,
}

impl std::str::FromStr for Route {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "shortcut" => Ok(Route::Shortcut),
            "general" => Ok(Route::General),
            "both" => Ok(Route::Both),
            _ => Err(format!("unknown route `{s}` (expected shortcut, general or both)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub vector_budget: usize,
    pub pair_budget: usize,
    pub curve: CurveConfig,
    pub seed: u64,
    pub route: Route,
    /// Replaces the candidate ladder when set.
    pub vectors: Option<Vec<CandidateVector>>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            vector_budget: 25,
            pair_budget: 10,
            curve: CurveConfig::default(),
            seed: 0,
            route: Route::Shortcut,
            vectors: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("input is constant")]
    Constant,
    #[error("input is not squarefree: repeated factor {0}")]
    NotSquarefree(String),
    #[error("input is not linear")]
    NotLinear,
    #[error("vector {0} rejected: directional derivative is constant")]
    VectorRejected(CandidateVector),
    #[error("vector {vector}: {source}")]
    Curve { vector: String, source: CurveError },
    #[error("all sample pairs exhausted: {}", .0.join("; "))]
    AllPairsExhausted(Vec<String>),
    #[error("psi has {0} independent coefficient(s); need two")]
    FewCoefficients(usize),
    #[error("no standard-form shift found in the ladder")]
    NoShift,
    #[error("zero candidate vector")]
    ZeroVector,
}

/// Nonzero rational direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateVector([Q; 3]);

impl CandidateVector {
    pub fn new(a: [Q; 3]) -> Result<Self, SurfaceError> {
        if a.iter().all(Zero::is_zero) {
            return Err(SurfaceError::ZeroVector);
        }
        Ok(CandidateVector(a))
    }

    pub fn from_ints(a: [i64; 3]) -> Self {
        CandidateVector::new(a.map(|x| Q::from_integer(x.into()))).expect("nonzero")
    }

    pub fn components(&self) -> &[Q; 3] {
        &self.0
    }
}

impl fmt::Display for CandidateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.0.iter().map(crate::poly::fmt_q).collect();
        write!(f, "({})", c.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceParam {
    pub p1: CurveParam,
    pub p2: CurveParam,
}

impl SurfaceParam {
    /// Parameters renamed to `t1`, `t2`.
    pub fn new(p1: CurveParam, p2: CurveParam) -> Self {
        SurfaceParam {
            p1: p1.rename_param("t1"),
            p2: p2.rename_param("t2"),
        }
    }

    pub fn is_standard(&self) -> bool {
        let z = Q::zero();
        match (self.p2.eval(&z), self.p2.derivative().eval(&z)) {
            (Some(v), Some(d)) => v.iter().all(Zero::is_zero) && d.iter().any(|x| !x.is_zero()),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub vector: CandidateVector,
    /// Shortcut sample points; `None` on the general route.
    pub samples: Option<(Q, Q)>,
    pub shift: Q,
    /// `P2(shift)`, moved from the second curve into the first.
    pub offset: [Q; 3],
    pub c1_defining: SpaceCurveSystem,
    pub c2_defining: SpaceCurveSystem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Plane(SurfaceParam),
    Cylinder([Q; 3]),
    Translational(SurfaceParam, Certificate),
    Undecided(Vec<String>),
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn grad(f: &MPoly) -> [MPoly; 3] {
    std::array::from_fn(|i| f.diff(i).expect("index in range"))
}

/// Scale to integers with gcd 1 and first nonzero entry positive.
fn primitive_vector(v: &[Q]) -> [Q; 3] {
    let vars = VarSet::space();
    let p = MPoly::from_terms(&vars, v.iter().enumerate().map(|(i, c)| (Monomial::var(3, i, 1), c.clone())));
    let p = p.integer_primitive();
    std::array::from_fn(|i| p.coeff(&Monomial::var(3, i, 1)))
}

/// Direction `a != 0` with `grad f . a == 0`, if any.
pub fn cylinder_test(f: &MPoly) -> Option<[Q; 3]> {
    let g = grad(f);
    let rows = crate::poly::linalg::coefficient_rows(&[&g[0], &g[1], &g[2]]);
    let m = transpose(&rows);
    kernel(&m, 3).first().map(|v| primitive_vector(v))
}

/// The affine-plane parametrization; `f` must have total degree 1.
pub fn plane_param(f: &MPoly) -> Result<SurfaceParam, SurfaceError> {
    if f.is_constant() {
        return Err(SurfaceError::Constant);
    }
    if f.total_degree() != Some(1) {
        return Err(SurfaceError::NotLinear);
    }
    let m: Vec<Q> = (0..3).map(|i| f.coeff(&Monomial::var(3, i, 1))).collect();
    let m4 = f.coeff(&Monomial::one(3));
    let k = (0..3).rev().find(|&i| !m[i].is_zero()).expect("linear");
    let [i, j] = match k {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    let mk = m[k].clone();
    let t1v = VarSet::param("t1");
    let t2v = VarSet::param("t2");
    let t1 = MPoly::var(&t1v, 0);
    let t2 = MPoly::var(&t2v, 0);
    let mut a: [RatFn; 3] = std::array::from_fn(|_| RatFn::zero(&t1v));
    a[i] = RatFn::from_poly(t1.clone());
    a[k] = RatFn::from_poly((&t1.scale(&m[i]) + &MPoly::constant(&t1v, m4)).scale(&-mk.recip()));
    let mut b: [RatFn; 3] = std::array::from_fn(|_| RatFn::zero(&t2v));
    b[j] = RatFn::from_poly(t2.clone());
    b[k] = RatFn::from_poly(t2.scale(&-(&m[j] / &mk)));
    Ok(SurfaceParam {
        p1: CurveParam::new(a).expect("nonconstant"),
        p2: CurveParam::new(b).expect("nonconstant"),
    })
}

/// Small rationals: 2, -1, -2, 1/2, -1/2, 3, -3, 1/3, -1/3, ...
fn q_ladder() -> Vec<Q> {
    let mut out = vec![q(2), q(-1), q(-2), qf(1, 2), qf(-1, 2)];
    for k in 3..=5 {
        out.extend([q(k), q(-k), qf(1, k), qf(-1, k)]);
    }
    out.extend([qf(2, 3), qf(-2, 3), qf(3, 2), qf(-3, 2)]);
    out
}

/// Deterministic candidate stream, `budget` elements long.
pub fn candidate_vectors(cfg: &Config) -> Vec<CandidateVector> {
    if let Some(v) = &cfg.vectors {
        return v.iter().take(cfg.vector_budget).cloned().collect();
    }
    let mut out: Vec<CandidateVector> = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
        [1, 1, 1],
    ]
    .into_iter()
    .map(CandidateVector::from_ints)
    .collect();
    let (o, z) = (Q::one(), Q::zero());
    for c in q_ladder() {
        if out.len() >= cfg.vector_budget {
            break;
        }
        for pat in [
            [o.clone(), c.clone(), z.clone()],
            [o.clone(), z.clone(), c.clone()],
            [z.clone(), o.clone(), c.clone()],
            [c.clone(), o.clone(), z.clone()],
            [c.clone(), z.clone(), o.clone()],
            [z.clone(), c.clone(), o.clone()],
        ] {
            let v = CandidateVector(pat);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while out.len() < cfg.vector_budget {
        let mut r = || qf(rng.gen_range(-9..=9), rng.gen_range(1..=4));
        let v = CandidateVector([Q::one(), r(), r()]);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.truncate(cfg.vector_budget);
    out
}

/// `a . grad f`.
pub fn directional(f: &MPoly, a: &CandidateVector) -> MPoly {
    let g = grad(f);
    let mut out = MPoly::zero(f.vars());
    for (gi, ai) in g.iter().zip(a.components()) {
        out = &out + &gi.scale(ai);
    }
    out
}

fn c1_system(f: &MPoly, a: &CandidateVector) -> Result<SpaceCurveSystem, SurfaceError> {
    let g = directional(f, a);
    if g.is_constant() {
        return Err(SurfaceError::VectorRejected(a.clone()));
    }
    SpaceCurveSystem::new(f.clone(), g).map_err(|source| SurfaceError::Curve {
        vector: a.to_string(),
        source,
    })
}

/// First non-line component of `{f, a . grad f}`, parametrized in `t1`.
pub fn compute_c1(f: &MPoly, a: &CandidateVector, cfg: &Config) -> Result<CurveParam, SurfaceError> {
    let sys = c1_system(f, a)?;
    parametrize_space_curve_with(&sys, &cfg.curve, &mut Vec::new(), &mut |p| !is_line(p))
        .map(|p| p.rename_param("t1"))
        .map_err(|source| SurfaceError::Curve {
            vector: a.to_string(),
            source,
        })
}

/// `f(x + c)` over the space variables.
fn translate_poly(f: &MPoly, c: &[Q; 3]) -> MPoly {
    let vars = f.vars().clone();
    let b: Vec<Option<Binding>> = (0..3)
        .map(|i| {
            let shifted = &MPoly::var(&vars, i) + &MPoly::constant(&vars, c[i].clone());
            Some(Binding::Func(RatFn::from_poly(shifted)))
        })
        .collect();
    substitute(f, &b, &vars).expect("polynomial substitution").num().clone()
}

/// Split the cleared numerator of `f(P1(t1) + x)`.
pub fn psi_decompose(f: &MPoly, p1: &CurveParam) -> PsiDecomposition {
    let space = f.vars().clone();
    let names: Vec<String> = space.names().iter().cloned().chain([p1.param_name().to_string()]).collect();
    let target = VarSet::new(names).expect("distinct names");
    let b: Vec<Option<Binding>> = (0..3)
        .map(|i| {
            let x = RatFn::var(&target, i);
            Some(Binding::Func(x.add(&p1.coords()[i].remap(&target, &[3]))))
        })
        .collect();
    let h = substitute(f, &b, &target).expect("p1 denominators are nonzero");
    let den = h.den().remap(p1.param_vars(), &[0, 0, 0, 0]);
    let core = psi_decompose_core(h.num());
    PsiDecomposition::from_core(core, &space, p1.param_vars(), den)
}

/// Fixed sample-pair ladder for the shortcut.
pub fn pair_ladder() -> Vec<(i64, i64)> {
    vec![
        (1, -3),
        (2, -1),
        (1, 2),
        (-1, 3),
        (2, -3),
        (3, -1),
        (-2, 1),
        (1, 3),
        (3, -2),
        (-1, 2),
        (2, 3),
        (-3, 1),
        (1, -2),
        (3, 1),
        (-2, 3),
        (4, -1),
        (1, 4),
        (-1, 4),
        (4, -3),
        (2, 5),
    ]
}

/// Points where the C2 candidate is tested against the C1 generators.
fn distinctness_ladder() -> Vec<Q> {
    vec![q(0), q(1), q(-1), q(2), q(-2), qf(1, 2), qf(-1, 2), q(3), q(-3), qf(1, 3)]
}

/// True iff some sampled point of `p2` is off the curve `c1`.
pub fn differs_from(p2: &CurveParam, c1: &SpaceCurveSystem) -> bool {
    distinctness_ladder().iter().any(|t| {
        p2.eval(t)
            .is_some_and(|pt| c1.gens().iter().any(|g| !g.eval(&pt).is_zero()))
    })
}

/// Two-specialization system for the pair `(s1, s2)`, or why it is skipped.
pub fn shortcut_system(f: &MPoly, p1: &CurveParam, s1: &Q, s2: &Q) -> Result<SpaceCurveSystem, String> {
    let (Some(a), Some(b)) = (p1.eval(s1), p1.eval(s2)) else {
        return Err("p1 undefined at a sample point".into());
    };
    let f1 = translate_poly(f, &a);
    let f2 = translate_poly(f, &b);
    let g = gcd(&f1, &f2);
    let g1 = f1.exact_div(&g).expect("gcd divides");
    let g2 = f2.exact_div(&g).expect("gcd divides");
    if g1.is_constant() || g2.is_constant() {
        return Err("a quotient is constant".into());
    }
    if g1.is_associate(&g2) {
        return Err("quotients are associates".into());
    }
    SpaceCurveSystem::new(g1.integer_primitive(), g2.integer_primitive()).map_err(|e| e.to_string())
}

type Accept<'a> = dyn FnMut(&CurveParam, &SpaceCurveSystem, Option<(Q, Q)>) -> bool + 'a;

fn c2_checks(p2: &CurveParam, psi: &PsiDecomposition, c1: Option<&SpaceCurveSystem>) -> bool {
    vanishes_on(p2, psi.psi_coeffs.iter()) && !is_line(p2) && c1.is_none_or(|c| differs_from(p2, c))
}

fn shortcut_with(
    f: &MPoly,
    p1: &CurveParam,
    psi: &PsiDecomposition,
    cfg: &Config,
    c1: Option<&SpaceCurveSystem>,
    log: &mut Vec<String>,
    accept: &mut Accept<'_>,
) -> Result<(CurveParam, SpaceCurveSystem, (Q, Q)), SurfaceError> {
    for (s1, s2) in pair_ladder().into_iter().take(cfg.pair_budget) {
        let (s1, s2) = (q(s1), q(s2));
        let sys = match shortcut_system(f, p1, &s1, &s2) {
            Ok(s) => s,
            Err(why) => {
                log.push(format!("pair ({s1}, {s2}) skipped: {why}"));
                continue;
            }
        };
        let mut inner = Vec::new();
        let found = parametrize_space_curve_with(&sys, &cfg.curve, &mut inner, &mut |p2| {
            let p2 = p2.rename_param("t2");
            c2_checks(&p2, psi, c1) && accept(&p2, &sys, Some((s1.clone(), s2.clone())))
        });
        match found {
            Ok(p2) => return Ok((p2.rename_param("t2"), sys, (s1, s2))),
            Err(e) => log.push(format!("pair ({s1}, {s2}): {}", short(&e.to_string()))),
        }
    }
    Err(SurfaceError::AllPairsExhausted(log.clone()))
}

fn short(s: &str) -> String {
    const MAX: usize = 300;
    if s.len() <= MAX {
        s.to_string()
    } else {
        let cut = (0..=MAX).rev().find(|&i| s.is_char_boundary(i)).unwrap_or(0);
        format!("{}...", &s[..cut])
    }
}

/// C2 from the two-specialization shortcut; returns the curve and its pair.
pub fn compute_c2_shortcut(f: &MPoly, p1: &CurveParam, cfg: &Config) -> Result<(CurveParam, Q, Q), SurfaceError> {
    let psi = psi_decompose(f, p1);
    let (p2, _, (s1, s2)) = shortcut_with(f, p1, &psi, cfg, None, &mut Vec::new(), &mut |_, _, _| true)?;
    Ok((p2, s1, s2))
}

fn general_with(
    psi: &PsiDecomposition,
    cfg: &Config,
    c1: Option<&SpaceCurveSystem>,
    log: &mut Vec<String>,
    accept: &mut Accept<'_>,
) -> Result<(CurveParam, SpaceCurveSystem), SurfaceError> {
    let members: Vec<&MPoly> = psi.psi_coeffs.iter().filter(|h| !h.is_zero()).collect();
    let mut independent = 0;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i].is_associate(members[j]) {
                continue;
            }
            independent += 1;
            let Ok(sys) = SpaceCurveSystem::new(members[i].clone(), members[j].clone()) else {
                continue;
            };
            let mut inner = Vec::new();
            let found = parametrize_space_curve_with(&sys, &cfg.curve, &mut inner, &mut |p2| {
                let p2 = p2.rename_param("t2");
                c2_checks(&p2, psi, c1) && accept(&p2, &sys, None)
            });
            match found {
                Ok(p2) => return Ok((p2.rename_param("t2"), sys)),
                Err(e) => log.push(format!("psi pair ({i}, {j}): {}", short(&e.to_string()))),
            }
        }
    }
    if independent == 0 {
        return Err(SurfaceError::FewCoefficients(members.len().min(1)));
    }
    Err(SurfaceError::AllPairsExhausted(log.clone()))
}

/// C2 from two independent Ψ-coefficients.
pub fn compute_c2_general(f: &MPoly, p1: &CurveParam, cfg: &Config) -> Result<CurveParam, SurfaceError> {
    let psi = psi_decompose(f, p1);
    general_with(&psi, cfg, None, &mut Vec::new(), &mut |_, _, _| true).map(|(p, _)| p)
}

/// Ladder for the standard-form shift `t2^0`.
pub fn shift_ladder() -> Vec<Q> {
    let mut out = vec![q(0)];
    for k in 1..=6 {
        out.extend([q(k), q(-k), qf(1, k + 1), qf(-1, k + 1)]);
    }
    out
}

/// Move the point `p2(c)` to the origin by `t2 -> t2 + c` and compensate in `p1`.
pub fn normalize_standard_at(p1: &CurveParam, p2: &CurveParam, c: &Q) -> Option<SurfaceParam> {
    let v = p2.eval(c)?;
    let d = p2.derivative().eval(c)?;
    if d.iter().all(Zero::is_zero) {
        return None;
    }
    let neg = v.clone().map(|x| -x);
    Some(SurfaceParam::new(p1.translate(&v), p2.shift_param(c).translate(&neg)))
}

/// Standard form with the first admissible ladder shift.
pub fn normalize_standard(p1: &CurveParam, p2: &CurveParam) -> Result<(SurfaceParam, Q), SurfaceError> {
    shift_ladder()
        .into_iter()
        .find_map(|c| normalize_standard_at(p1, p2, &c).map(|sp| (sp, c)))
        .ok_or(SurfaceError::NoShift)
}

fn st_vars() -> VarSet {
    VarSet::new(["t1", "t2"]).unwrap()
}

/// Exact check of `f(p1 + p2) == 0` and Jacobian rank 2.
pub fn verify_surface_param(f: &MPoly, sp: &SurfaceParam) -> bool {
    let v = st_vars();
    let a = sp.p1.coords().clone().map(|c| c.remap(&v, &[0]));
    let b = sp.p2.coords().clone().map(|c| c.remap(&v, &[1]));
    let bindings: Vec<Option<Binding>> = (0..3).map(|i| Some(Binding::Func(a[i].add(&b[i])))).collect();
    match substitute(f, &bindings, &v) {
        Ok(r) if r.is_zero() => {}
        _ => return false,
    }
    jacobian_rank_two(sp)
}

/// Some 2x2 minor of `(P1', P2')` is nonzero.
pub fn jacobian_rank_two(sp: &SurfaceParam) -> bool {
    let v = st_vars();
    let a = sp.p1.coords().clone().map(|c| c.remap(&v, &[0]));
    let b = sp.p2.coords().clone().map(|c| c.remap(&v, &[1]));
    let da = a.map(|c| c.diff(0).expect("in range"));
    let db = b.map(|c| c.diff(1).expect("in range"));
    (0..3).any(|i| (i + 1..3).any(|j| !da[i].mul(&db[j]).sub(&da[j].mul(&db[i])).is_zero()))
}

/// Independent check of an emitted certificate: exact verification,
/// standard form, neither curve a line, `P1 - offset` on C1,
/// `P2 + offset` on C2 and not contained in C1.
pub fn check_certificate(f: &MPoly, sp: &SurfaceParam, cert: &Certificate) -> Result<(), String> {
    if !verify_surface_param(f, sp) {
        return Err("parametrization does not verify".into());
    }
    if !sp.is_standard() {
        return Err("P2 is not in standard form".into());
    }
    if is_line(&sp.p1) || is_line(&sp.p2) {
        return Err("a curve is a line".into());
    }
    let neg = cert.offset.clone().map(|x| -x);
    let c1 = sp.p1.translate(&neg);
    let c2 = sp.p2.translate(&cert.offset);
    if !vanishes_on(&c1, cert.c1_defining.gens()) {
        return Err("P1 is off C1".into());
    }
    if !vanishes_on(&c2, cert.c2_defining.gens()) {
        return Err("P2 is off C2".into());
    }
    if !differs_from(&c2, &cert.c1_defining) {
        return Err("C2 lies on C1".into());
    }
    Ok(())
}

/// Screening, candidate search and certificate construction.
pub fn classify_surface(f: &MPoly, cfg: &Config) -> Result<Classification, SurfaceError> {
    if f.is_constant() {
        return Err(SurfaceError::Constant);
    }
    let sf = squarefree_part(f).expect("nonzero");
    if sf.degree_in(0) != f.degree_in(0)
        || sf.degree_in(1) != f.degree_in(1)
        || sf.degree_in(2) != f.degree_in(2)
    {
        let rep = f.exact_div(&sf).expect("squarefree part divides");
        return Err(SurfaceError::NotSquarefree(rep.to_string()));
    }
    if f.total_degree() == Some(1) {
        let sp = plane_param(f)?;
        debug_assert!(verify_surface_param(f, &sp));
        return Ok(Classification::Plane(sp));
    }
    if let Some(d) = cylinder_test(f) {
        return Ok(Classification::Cylinder(d));
    }

    let mut evidence = Vec::new();
    for a in candidate_vectors(cfg) {
        let c1 = match c1_system(f, &a) {
            Ok(s) => s,
            Err(e) => {
                evidence.push(e.to_string());
                continue;
            }
        };
        let mut found: Option<(SurfaceParam, Certificate)> = None;
        let mut notes = Vec::new();
        let mut c1_log = Vec::new();
        let res = parametrize_space_curve_with(&c1, &cfg.curve, &mut c1_log, &mut |p1| {
            if is_line(p1) {
                notes.push(format!("C1 component ({p1}) is a line, skipped"));
                return false;
            }
            let p1 = p1.rename_param("t1");
            let psi = psi_decompose(f, &p1);
            let mixed = psi.psi.depends_on(3) && (0..3).any(|i| psi.psi.depends_on(i));
            if !mixed {
                notes.push(format!("C1 component ({p1}): psi lacks mixed dependence"));
                return false;
            }
            let mut accept = |p2: &CurveParam, sys: &SpaceCurveSystem, samples: Option<(Q, Q)>| -> bool {
                let Ok((sp, shift)) = normalize_standard(&p1, p2) else {
                    return false;
                };
                if !verify_surface_param(f, &sp) {
                    return false;
                }
                let offset = p2.eval(&shift).expect("admissible shift");
                found = Some((
                    sp,
                    Certificate {
                        vector: a.clone(),
                        samples,
                        shift,
                        offset,
                        c1_defining: c1.clone(),
                        c2_defining: sys.clone(),
                    },
                ));
                true
            };
            let mut log = Vec::new();
            let ok = match cfg.route {
                Route::Shortcut => shortcut_with(f, &p1, &psi, cfg, Some(&c1), &mut log, &mut accept).is_ok(),
                Route::General => general_with(&psi, cfg, Some(&c1), &mut log, &mut accept).is_ok(),
                Route::Both => {
                    shortcut_with(f, &p1, &psi, cfg, Some(&c1), &mut log, &mut accept).is_ok()
                        || general_with(&psi, cfg, Some(&c1), &mut log, &mut accept).is_ok()
                }
            };
            if !ok {
                notes.push(format!("C1 component ({p1}): no C2 found"));
                notes.extend(log.into_iter().map(|l| format!("  {l}")));
                notes.extend(psi_evidence(&psi, cfg));
            }
            ok
        });
        if let Some((sp, cert)) = found {
            return Ok(Classification::Translational(sp, cert));
        }
        match res {
            Ok(_) => unreachable!("accepted component always records a certificate"),
            Err(e) => {
                evidence.push(format!("vector {a}: {}", short(&e.to_string())));
                evidence.extend(notes.into_iter().map(|n| format!("  {n}")));
            }
        }
    }
    Ok(Classification::Undecided(evidence))
}

/// Dimension evidence on the first two independent Ψ-coefficients.
fn psi_evidence(psi: &PsiDecomposition, cfg: &Config) -> Vec<String> {
    let members: Vec<&MPoly> = psi.psi_coeffs.iter().filter(|h| !h.is_zero()).collect();
    let pair = (0..members.len())
        .flat_map(|i| (i + 1..members.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !members[i].is_associate(members[j]));
    let Some((i, j)) = pair else {
        return vec![format!("  psi has {} nonzero coefficient(s)", members.len())];
    };
    let Ok(sys) = SpaceCurveSystem::new(members[i].clone(), members[j].clone()) else {
        return Vec::new();
    };
    let line = match dimension_evidence(&sys, &cfg.curve) {
        DimensionEvidence::FiniteEvidence(w) => format!("finite evidence on psi coefficients ({i}, {j}): {w}"),
        DimensionEvidence::CurveFound(p) => format!("psi coefficients ({i}, {j}) contain the curve ({p})"),
        DimensionEvidence::Unknown(_) => format!("psi coefficients ({i}, {j}): dimension unknown"),
    };
    vec![format!("  {line}")]
}

/// Polynomial-map value of a vector for display.
pub fn vector_text(v: &[Q; 3]) -> [String; 3] {
    v.clone().map(|c| crate::poly::fmt_q(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_param_triple, parse_poly};

    fn sp(s: &str) -> MPoly {
        parse_poly(s, &VarSet::space()).unwrap()
    }
    fn tri(s: &str, t: &str) -> CurveParam {
        parse_param_triple(s, t).unwrap()
    }

    const F1: &str = "x3+5*x1^2-6*x1*x2+2*x2^2";

    #[test]
    fn cylinders() {
        assert_eq!(cylinder_test(&sp("x1^2+x2^2-1")), Some([q(0), q(0), q(1)]));
        assert_eq!(cylinder_test(&sp(F1)), None);
        let d = cylinder_test(&sp("x1+x2+x3")).unwrap();
        assert_eq!(d.iter().cloned().sum::<Q>(), q(0));
    }

    #[test]
    fn planes() {
        let p = plane_param(&sp("x1+2*x2+x3+4")).unwrap();
        assert_eq!(p.p1, tri("t1, 0, -t1-4", "t1"));
        assert_eq!(p.p2, tri("0, t2, -2*t2", "t2"));
        let p = plane_param(&sp("x3")).unwrap();
        assert_eq!((p.p1.to_string(), p.p2.to_string()), ("t1, 0, 0".into(), "0, t2, 0".into()));
        let f = sp("x2");
        assert!(verify_surface_param(&f, &plane_param(&f).unwrap()));
        assert!(plane_param(&sp("3")).is_err());
    }

    #[test]
    fn vector_stream() {
        let cfg = Config::default();
        let v = candidate_vectors(&cfg);
        assert_eq!(v.len(), 25);
        assert_eq!(v[0], CandidateVector::from_ints([1, 0, 0]));
        assert_eq!(v[6], CandidateVector::from_ints([1, 1, 1]));
        let short = candidate_vectors(&Config {
            vector_budget: 7,
            ..Config::default()
        });
        assert_eq!(short.len(), 7);
        assert_eq!(v, candidate_vectors(&cfg));
    }

    #[test]
    fn psi_of_paraboloid() {
        let p1 = tri("t1, (4*t1+1)/2, -(2*t1^2+2*t1+1)/2", "t1");
        let d = psi_decompose(&sp(F1), &p1);
        assert!(d.h_tilde.is_one());
        assert_eq!(d.psi_coeffs.len(), 2);
        assert!(d.psi_coeffs[0].is_associate(&sp("x3+2*x2^2-6*x1*x2+5*x1^2-3*x1+2*x2")));
        assert!(d.psi_coeffs[1].is_associate(&sp("2*x2-2*x1")));
        let d = psi_decompose(&sp("x3-x1"), &tri("t, 0, t", "t"));
        assert_eq!(d.n(), 0);
        assert!(d.psi_coeffs[0].is_associate(&sp("x3-x1")));
    }

    #[test]
    fn c1_rejects_constant_derivative() {
        let a = CandidateVector::from_ints([0, 0, 1]);
        assert!(matches!(compute_c1(&sp(F1), &a, &Config::default()), Err(SurfaceError::VectorRejected(_))));
    }

    #[test]
    fn normalization() {
        let p1 = tri("t1, t1, t1^2", "t1");
        let p2 = tri("t+1/2, (t+1/2)^2, (t+1/2)^3", "t");
        let s = normalize_standard_at(&p1, &p2, &qf(-1, 2)).unwrap();
        assert_eq!(s.p2, tri("t2, t2^2, t2^3", "t2"));
        let (s0, shift) = normalize_standard(&p1, &p2).unwrap();
        assert!(s0.is_standard());
        assert_eq!(shift, q(0));
        let p2 = tri("t2, t2+t2^2, 3/4*t2+3/2*t2^2+t2^3", "t2");
        assert_eq!(normalize_standard(&p1, &p2).unwrap().0.p2, p2);
        let (s, _) = normalize_standard(&p1, &tri("t+1, t+1, (t+1)^2", "t")).unwrap();
        assert_eq!(s.p2, tri("t2, t2, t2^2+2*t2", "t2"));
        assert_eq!(s.p1, tri("t1+1, t1+1, t1^2+1", "t1"));
    }

    #[test]
    fn verify_examples() {
        let f = sp(F1);
        let good = SurfaceParam::new(
            tri("t1, (4*t1+1)/2, -(2*t1^2+2*t1+1)/2", "t1"),
            tri("t2, t2, -t2*(t2-1)", "t2"),
        );
        assert!(verify_surface_param(&f, &good));
        let bad = SurfaceParam::new(tri("t1, 0, 0", "t1"), tri("0, t2, 0", "t2"));
        assert!(!verify_surface_param(&f, &bad));
        // a curve translated along itself does not sweep a surface
        let flat = SurfaceParam::new(tri("t1, 0, 0", "t1"), tri("t2, 0, 0", "t2"));
        assert!(!verify_surface_param(&sp("x2"), &flat));
    }

    #[test]
    fn classify_paraboloid() {
        let f = sp(F1);
        match classify_surface(&f, &Config::default()).unwrap() {
            Classification::Translational(s, cert) => {
                assert!(verify_surface_param(&f, &s));
                assert!(s.is_standard());
                assert!(candidate_vectors(&Config::default())[..7].contains(&cert.vector));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_screens() {
        assert!(matches!(
            classify_surface(&sp("x1^2+x2^2-1"), &Config::default()).unwrap(),
            Classification::Cylinder(_)
        ));
        assert!(matches!(
            classify_surface(&sp("x1+2*x2+x3+4"), &Config::default()).unwrap(),
            Classification::Plane(_)
        ));
        assert!(matches!(
            classify_surface(&sp("(x3-x1^2)^2*(x2+1)"), &Config::default()),
            Err(SurfaceError::NotSquarefree(_))
        ));
    }
}
