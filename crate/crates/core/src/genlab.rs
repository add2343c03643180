//! Test instances: sample `P1`, `P2` from simple curve families, implicitize
//! `P1(t1) + P2(t2)` by iterated resultants, and run round-trip checks
//! through [`classify_surface`].

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::curve::{is_line, CurveParam};
use crate::expr::ReportText;
use crate::poly::{content_primitive, gcd_many, resultant, squarefree_part, MPoly, RatFn, VarSet, Q};
use crate::surface::{
    check_certificate, classify_surface, cylinder_test, jacobian_rank_two, verify_surface_param, Classification, Config,
    SurfaceParam,
};

/// Default cap on the total degree of any intermediate eliminant.
pub const DEFAULT_DEGREE_BUDGET: u32 = 40;
/// Parametrization points an accepted factor must vanish at.
pub const SAMPLE_POINTS: usize = 12;
/// Draws per instance before giving up.
pub const RETRY_CAP: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `(t, q2(t), q3(t))` up to coordinate order, `q_i` polynomial.
    PolynomialGraph,
    /// Like the polynomial graph with one coordinate `l t + t^2 n(t) / (1 + b t)`.
    RationalGraph,
    /// `(t, c2 t^e2, c3 t^e3)` up to coordinate order.
    Monomial,
    /// A scaled circle through the origin in a coordinate plane, plus a
    /// polynomial third coordinate.
    ConicBased,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::PolynomialGraph,
        Family::RationalGraph,
        Family::Monomial,
        Family::ConicBased,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::PolynomialGraph => "polynomial-graph",
            Family::RationalGraph => "rational-graph",
            Family::Monomial => "monomial",
            Family::ConicBased => "conic-based",
        }
    }

    fn is_rational(self) -> bool {
        matches!(self, Family::RationalGraph | Family::ConicBased)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub families: [Family; 2],
    /// Bound on the absolute value of sampled integer coefficients.
    pub height: u32,
    /// Degree bounds for `P1` and `P2`.
    pub degrees: [u32; 2],
    pub degree_budget: u32,
    pub seed: u64,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            families: [Family::PolynomialGraph; 2],
            height: 3,
            degrees: [2, 3],
            degree_budget: DEFAULT_DEGREE_BUDGET,
            seed: 0,
        }
    }
}

impl InstanceSpec {
    /// Bound on the implicit degree: the mixed area of the two Newton
    /// polygons of a generic line section.
    pub fn degree_estimate(&self) -> u32 {
        let rational = self.families.iter().any(|f| f.is_rational());
        let [d1, d2] = self.degrees;
        if rational {
            2 * d1 * d2
        } else {
            d1 * d2
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.degrees.iter().any(|&d| d < 2) {
            return Err(GenError::InvalidSpec(
                "degree bounds must be at least 2 (a line makes a cylinder)".into(),
            ));
        }
        if self.height == 0 {
            return Err(GenError::InvalidSpec("coefficient height must be positive".into()));
        }
        if self.degree_estimate() > self.degree_budget {
            return Err(GenError::InvalidSpec(format!(
                "implicit degree may reach {} (budget {})",
                self.degree_estimate(),
                self.degree_budget
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        InstanceSpec { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
    #[error("parametrization does not define a surface (Jacobian rank < 2)")]
    NotASurface,
    #[error("intermediate eliminant of total degree {degree} exceeds budget {budget}")]
    BudgetExceeded { degree: u32, budget: u32 },
    #[error("several factors vanish on the parametrization: {}", .0.join("; "))]
    AmbiguousFactor(Vec<String>),
    #[error("no eliminant factor vanishes on the parametrization")]
    NoFactor,
    #[error("no usable instance after {attempts} draws; last: {last}")]
    RetryCapExhausted { attempts: u32, last: String },
}

fn elim_vars() -> VarSet {
    VarSet::new(["x1", "x2", "x3", "t1", "t2"]).expect("distinct names")
}

/// Cleared `x_i - (p1_i(t1) + p2_i(t2))` over `(x1, x2, x3, t1, t2)`.
fn graph_equations(sp: &SurfaceParam) -> Vec<MPoly> {
    let v = elim_vars();
    (0..3)
        .map(|i| {
            let (a, b) = (&sp.p1.coords()[i], &sp.p2.coords()[i]);
            let (n1, d1) = (a.num().remap(&v, &[3]), a.den().remap(&v, &[3]));
            let (n2, d2) = (b.num().remap(&v, &[4]), b.den().remap(&v, &[4]));
            let dd = &d1 * &d2;
            let f = &(&(&MPoly::var(&v, i) * &dd) - &(&n1 * &d2)) - &(&n2 * &d1);
            f.integer_primitive()
        })
        .collect()
}

/// Eliminate `var`: members free of it are kept, the others are replaced by
/// their resultants with the member of least degree in `var`.
fn eliminate(polys: &[MPoly], var: usize, budget: u32) -> Result<Vec<MPoly>, GenError> {
    let (mut dep, mut out): (Vec<MPoly>, Vec<MPoly>) = polys.iter().cloned().partition(|p| p.depends_on(var));
    let Some(k) = (0..dep.len()).min_by_key(|&i| (dep[i].degree_in(var), dep[i].total_degree(), dep[i].nterms()))
    else {
        return Ok(out);
    };
    let pivot = dep.swap_remove(k);
    for q in &dep {
        let r = resultant(&pivot, q, var).expect("both involve the variable");
        if r.is_zero() {
            continue;
        }
        let degree = r.total_degree().unwrap_or(0);
        if degree > budget {
            return Err(GenError::BudgetExceeded { degree, budget });
        }
        out.push(r.integer_primitive());
    }
    Ok(out)
}

/// Eliminants free of both parameters, eliminating `first` then `second`.
fn eliminants(eqs: &[MPoly], first: usize, second: usize, budget: u32) -> Result<Vec<MPoly>, GenError> {
    let stage1 = eliminate(eqs, first, budget)?;
    let stage2 = eliminate(&stage1, second, budget)?;
    Ok(stage2
        .into_iter()
        .filter(|p| !p.depends_on(3) && !p.depends_on(4) && !p.is_zero())
        .collect())
}

/// Coprime pieces from contents in each variable, recursively.
fn split_pieces(p: &MPoly, out: &mut Vec<MPoly>) {
    for v in p.support() {
        let (c, prim) = content_primitive(p, v);
        if !c.is_constant() {
            split_pieces(&c, out);
            split_pieces(&prim, out);
            return;
        }
    }
    if !p.is_constant() {
        out.push(p.clone());
    }
}

/// Parametrization points with all denominators nonzero.
fn sample_points(sp: &SurfaceParam, n: usize) -> Vec<[Q; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut r = || Q::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(1i64..=7).into());
        let (s, t) = (r(), r());
        if let (Some(a), Some(b)) = (sp.p1.eval(&s), sp.p2.eval(&t)) {
            out.push([&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]);
        }
    }
    out
}

/// The implicit polynomial of `sp`, integer-primitive with positive leading
/// coefficient. Eliminates `t1` and then `t2` by resultants (and again in
/// the other order), takes the gcd of the eliminants, and keeps the
/// content-split factor that vanishes on sampled points.
pub fn implicitize(sp: &SurfaceParam, budget: u32) -> Result<MPoly, GenError> {
    let space = VarSet::space();
    if !jacobian_rank_two(sp) {
        return Err(GenError::NotASurface);
    }
    let eqs = graph_equations(sp);
    // the two elimination orders rarely share extraneous factors
    let mut finals = eliminants(&eqs, 3, 4, budget)?;
    finals.extend(eliminants(&eqs, 4, 3, budget)?);
    let g = gcd_many(finals.iter()).ok_or(GenError::NoFactor)?;
    if g.is_constant() {
        return Err(GenError::NoFactor);
    }
    let g = squarefree_part(&g).expect("nonzero").remap(&space, &[0, 1, 2, 0, 0]);
    let mut pieces = Vec::new();
    split_pieces(&g, &mut pieces);
    let points = sample_points(sp, SAMPLE_POINTS);
    let survivors: Vec<MPoly> = pieces
        .into_iter()
        .filter(|p| points.iter().all(|x| p.eval(x).is_zero()))
        .collect();
    match survivors.as_slice() {
        [] => Err(GenError::NoFactor),
        [f] => {
            let f = f.integer_primitive();
            if verify_surface_param(&f, sp) {
                Ok(f)
            } else {
                Err(GenError::NoFactor)
            }
        }
        many => Err(GenError::AmbiguousFactor(many.iter().map(MPoly::to_string).collect())),
    }
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn nonzero(rng: &mut ChaCha8Rng, h: i64) -> i64 {
    let k = rng.gen_range(1..=h);
    if rng.gen_bool(0.5) {
        k
    } else {
        -k
    }
}

/// `sum c_e t^e` for the given exponent/coefficient pairs.
fn upoly(v: &VarSet, terms: &[(u32, i64)]) -> MPoly {
    let t = MPoly::var(v, 0);
    let mut out = MPoly::zero(v);
    for &(e, c) in terms {
        out = &out + &t.pow(e).scale(&q(c));
    }
    out
}

/// `l t + sum_{e=2..=d} a_e t^e`; the degree is exactly `d` when `exact`.
fn graph_coord(rng: &mut ChaCha8Rng, v: &VarSet, d: u32, h: i64, exact: bool) -> MPoly {
    let mut terms = vec![(1, rng.gen_range(0..=1))];
    for e in 2..=d {
        let c = if e == d && exact {
            nonzero(rng, h)
        } else {
            rng.gen_range(-h..=h)
        };
        terms.push((e, c));
    }
    upoly(v, &terms)
}

/// Place `main` at coordinate `k` and `rest` in the other two slots.
fn arrange(k: usize, main: RatFn, rest: [RatFn; 2]) -> [RatFn; 3] {
    let [a, b] = rest;
    match k {
        0 => [main, a, b],
        1 => [a, main, b],
        _ => [a, b, main],
    }
}

/// One curve of `family` with degree bound `d`; the tangent at `t = 0` is
/// one of the seven fixed candidate directions up to coordinate order.
fn sample_curve(rng: &mut ChaCha8Rng, family: Family, d: u32, h: i64) -> CurveParam {
    let v = VarSet::param("t");
    let t = RatFn::var(&v, 0);
    let k = rng.gen_range(0..3);
    let exact_first = rng.gen_bool(0.5);
    let coords = match family {
        Family::PolynomialGraph => {
            let a = graph_coord(rng, &v, d, h, exact_first);
            let b = graph_coord(rng, &v, d, h, !exact_first);
            arrange(k, t, [RatFn::from_poly(a), RatFn::from_poly(b)])
        }
        Family::Monomial => {
            let e1 = if exact_first { d } else { rng.gen_range(2..=d) };
            let e2 = if exact_first { rng.gen_range(2..=d) } else { d };
            let a = upoly(&v, &[(e1, nonzero(rng, h))]);
            let b = upoly(&v, &[(e2, nonzero(rng, h))]);
            arrange(k, t, [RatFn::from_poly(a), RatFn::from_poly(b)])
        }
        Family::RationalGraph => {
            // l t + t^2 n(t) / (1 + b t), tangent l at 0
            let den = upoly(&v, &[(0, 1), (1, nonzero(rng, h))]);
            let tail: Vec<(u32, i64)> = (2..=d)
                .map(|e| (e, if e == d { nonzero(rng, h) } else { rng.gen_range(-h..=h) }))
                .collect();
            let num = &(&upoly(&v, &[(1, rng.gen_range(0..=1))]) * &den) + &upoly(&v, &tail);
            let r = RatFn::new(num, den).expect("nonzero denominator");
            let other = RatFn::from_poly(graph_coord(rng, &v, d, h, false));
            arrange(k, t, if exact_first { [r, other] } else { [other, r] })
        }
        Family::ConicBased => {
            // circle of radius r through the origin: (-2 r t^2, 2 r t) / (1 + t^2)
            let r = nonzero(rng, h);
            let den = upoly(&v, &[(0, 1), (2, 1)]);
            let x = RatFn::new(upoly(&v, &[(2, -2 * r)]), den.clone()).expect("nonzero");
            let y = RatFn::new(upoly(&v, &[(1, 2 * r)]), den).expect("nonzero");
            let z = RatFn::from_poly(upoly(&v, &[(2, nonzero(rng, h))]));
            arrange(k, z, [x, y])
        }
    };
    CurveParam::new(coords).expect("nonconstant")
}

/// Draw `P1`, `P2` for `spec` and implicitize, redrawing on failure.
pub fn random_instance(spec: &InstanceSpec) -> Result<(MPoly, SurfaceParam), GenError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let h = i64::from(spec.height);
    let mut last = String::new();
    for _ in 0..RETRY_CAP {
        let p1 = sample_curve(&mut rng, spec.families[0], spec.degrees[0], h);
        let p2 = sample_curve(&mut rng, spec.families[1], spec.degrees[1], h);
        if is_line(&p1) || is_line(&p2) {
            last = "line drawn".into();
            continue;
        }
        let sp = SurfaceParam::new(p1, p2);
        match implicitize(&sp, spec.degree_budget) {
            Ok(f) if f.total_degree() == Some(1) => last = "plane drawn".into(),
            Ok(f) if cylinder_test(&f).is_some() => last = "cylinder drawn".into(),
            Ok(f) => return Ok((f, sp)),
            Err(e) => last = e.to_string(),
        }
    }
    Err(GenError::RetryCapExhausted {
        attempts: RETRY_CAP,
        last,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundtripReport {
    pub count: usize,
    pub passed: usize,
    pub failed: usize,
    pub failing_seeds: Vec<u64>,
    pub timings_ms: Vec<u64>,
    /// One line per failure, in seed order.
    pub failures: Vec<String>,
}

impl RoundtripReport {
    pub fn to_report_text(&self) -> ReportText {
        ReportText {
            count: self.count,
            passed: self.passed,
            failed: self.failed,
            failing_seeds: self.failing_seeds.clone(),
            timings_ms: self.timings_ms.clone(),
        }
    }
}

/// Generate, classify and verify one instance; `Err` describes the failure.
pub fn roundtrip_one(spec: &InstanceSpec, cfg: &Config) -> Result<(), String> {
    let (f, _) = random_instance(spec).map_err(|e| e.to_string())?;
    match classify_surface(&f, cfg).map_err(|e| e.to_string())? {
        Classification::Translational(sp, cert) => check_certificate(&f, &sp, &cert),
        other => Err(format!("classified as {}", class_name(&other))),
    }
}

fn class_name(c: &Classification) -> &'static str {
    match c {
        Classification::Plane(_) => "plane",
        Classification::Cylinder(_) => "cylinder",
        Classification::Translational(..) => "translational",
        Classification::Undecided(_) => "undecided",
    }
}

/// Run `count` instances with seeds `spec.seed, spec.seed + 1, ...` on up to
/// `threads` workers; the report is ordered by seed.
pub fn roundtrip_check(spec: &InstanceSpec, count: usize, cfg: &Config, threads: usize) -> RoundtripReport {
    let slots: Vec<Mutex<Option<(Result<(), String>, u64)>>> = (0..count).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = threads.clamp(1, count.max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let start = Instant::now();
                let r = roundtrip_one(&spec.with_seed(spec.seed.wrapping_add(i as u64)), cfg);
                let ms = start.elapsed().as_millis() as u64;
                *slots[i].lock().expect("unpoisoned") = Some((r, ms));
            });
        }
    });
    let mut report = RoundtripReport {
        count,
        ..Default::default()
    };
    for (i, slot) in slots.into_iter().enumerate() {
        let (r, ms) = slot.into_inner().expect("unpoisoned").expect("every slot filled");
        let seed = spec.seed.wrapping_add(i as u64);
        report.timings_ms.push(ms);
        match r {
            Ok(()) => report.passed += 1,
            Err(e) => {
                report.failed += 1;
                report.failing_seeds.push(seed);
                report.failures.push(format!("seed {seed}: {e}"));
            }
        }
    }
    report
}
