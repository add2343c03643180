//! Rational space curves given by two trivariate equations.
//!
//! A curve `{g1 = g2 = 0}` is projected onto a coordinate plane by a
//! resultant, a factor of the projection is parametrized when it falls in one
//! of the supported plane classes (line, linear in one variable, conic with a
//! rational point, coprime binomial), and the eliminated coordinate is
//! recovered from the degree-one gcd of the substituted generators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::linalg::{coefficient_rows, rank};
use crate::poly::rootlift::{self, Lift};
use crate::poly::upoly::UPoly;
use crate::poly::{
    content_primitive, gcd, gcd_many, resultant, squarefree_part, substitute, Binding, MPoly, PolyError,
    RatFn, VarSet, Q,
};

/// Name of the parameter in freshly built curve parametrizations.
pub const PARAM: &str = "t";

#[derive(Clone, Debug)]
pub struct CurveConfig {
    /// Height bound for the conic rational-point search.
    pub conic_height: u32,
}

impl Default for CurveConfig {
    fn default() -> Self {
        CurveConfig { conic_height: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnsupportedReason {
    /// Not a line, not linear in a variable, not a conic, not a coprime binomial.
    NoClass,
    /// Irreducible conic without a rational point of the given height.
    NoRationalPoint { height: u32 },
    /// Conic whose quadratic form is degenerate (a pair of lines).
    DegenerateConic,
}

impl fmt::Display for UnsupportedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnsupportedReason::NoClass => f.write_str("no supported class applies"),
            UnsupportedReason::NoRationalPoint { height } => {
                write!(f, "conic without rational point of height <= {height}")
            }
            UnsupportedReason::DegenerateConic => f.write_str("degenerate conic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("invalid curve system: {0}")]
    BadSystem(String),
    #[error("no generator involves {var}")]
    NotInvolved { var: String },
    #[error("resultant in {var} vanishes identically (common factor involving {var})")]
    ZeroResultant { var: String },
    #[error("resultant in {var} is the nonzero constant {value}")]
    ConstantResultant { var: String, value: String },
    #[error("unsupported plane curve {poly}: {reason}")]
    UnsupportedCurveClass { poly: String, reason: UnsupportedReason },
    #[error("lift over {var} failed: gcd has degree {degree}")]
    LiftFailed { var: String, degree: u32 },
    #[error("inconsistent lift over {var}: both generators vanish on the whole fibre")]
    Inconsistent { var: String },
    #[error("system looks zero-dimensional: {}", witnesses.join("; "))]
    NotACurve { witnesses: Vec<String> },
    #[error("no supported parametrization found: {}", log.join("; "))]
    Unsupported { log: Vec<String> },
    #[error("all coordinates are constant")]
    ConstantParam,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Two generators in `(x1, x2, x3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceCurveSystem {
    gens: [MPoly; 2],
}

impl SpaceCurveSystem {
    pub fn new(g1: MPoly, g2: MPoly) -> Result<Self, CurveError> {
        if g1.vars() != g2.vars() || g1.arity() != 3 {
            return Err(CurveError::BadSystem("generators must share three variables".into()));
        }
        if g1.is_zero() || g2.is_zero() {
            return Err(CurveError::BadSystem("zero generator".into()));
        }
        if g1.is_constant() && g2.is_constant() {
            return Err(CurveError::BadSystem("both generators constant".into()));
        }
        Ok(SpaceCurveSystem { gens: [g1, g2] })
    }

    pub fn gens(&self) -> &[MPoly; 2] {
        &self.gens
    }

    pub fn vars(&self) -> &VarSet {
        self.gens[0].vars()
    }
}

impl fmt::Display for SpaceCurveSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.gens[0], self.gens[1])
    }
}

/// Squarefree primitive polynomial in the two coordinates other than `elim_var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    pub poly: MPoly,
    pub elim_var: usize,
}

impl PlaneCurve {
    pub fn new(poly: MPoly, elim_var: usize) -> Result<Self, CurveError> {
        if poly.arity() != 3 || elim_var > 2 || poly.depends_on(elim_var) || poly.is_constant() {
            return Err(CurveError::BadSystem(format!(
                "{poly} is not a plane curve avoiding variable {elim_var}"
            )));
        }
        let poly = squarefree_part(&poly)?.integer_primitive();
        Ok(PlaneCurve { poly, elim_var })
    }

    /// The two remaining coordinates, ascending.
    pub fn plane_vars(&self) -> [usize; 2] {
        plane_vars(self.elim_var)
    }
}

fn plane_vars(e: usize) -> [usize; 2] {
    match e {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// Three reduced rational functions in one parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParam {
    coords: [RatFn; 3],
}

impl CurveParam {
    pub fn new(coords: [RatFn; 3]) -> Result<Self, CurveError> {
        let v = coords[0].vars();
        if v.arity() != 1 || coords.iter().any(|c| c.vars() != v) {
            return Err(CurveError::BadSystem("coordinates must share one parameter".into()));
        }
        let p = CurveParam::new_unchecked(coords);
        if p.is_constant() {
            return Err(CurveError::ConstantParam);
        }
        Ok(p)
    }

    /// Build without the nonconstancy check (for data such as parsed input).
    pub fn new_unchecked(coords: [RatFn; 3]) -> Self {
        CurveParam { coords }
    }

    pub fn coords(&self) -> &[RatFn; 3] {
        &self.coords
    }

    pub fn param_vars(&self) -> &VarSet {
        self.coords[0].vars()
    }

    pub fn param_name(&self) -> &str {
        self.param_vars().name(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coords.iter().all(RatFn::is_constant)
    }

    pub fn rename_param(&self, name: &str) -> CurveParam {
        let v = VarSet::param(name);
        CurveParam {
            coords: self.coords.clone().map(|c| c.rename(&v)),
        }
    }

    /// Point at `t`, `None` where a denominator vanishes.
    pub fn eval(&self, t: &Q) -> Option<[Q; 3]> {
        let p = [t.clone()];
        Some([
            self.coords[0].eval(&p)?,
            self.coords[1].eval(&p)?,
            self.coords[2].eval(&p)?,
        ])
    }

    pub fn derivative(&self) -> CurveParam {
        CurveParam {
            coords: self.coords.clone().map(|c| c.diff(0).expect("univariate")),
        }
    }

    /// Reparametrize by `t -> t + c`.
    pub fn shift_param(&self, c: &Q) -> CurveParam {
        let v = self.param_vars().clone();
        let arg = RatFn::from_poly(&MPoly::var(&v, 0) + &MPoly::constant(&v, c.clone()));
        let b = [Some(Binding::Func(arg))];
        CurveParam {
            coords: self.coords.clone().map(|r| r.substitute(&b, &v).expect("shift keeps denominators")),
        }
    }

    /// Add a constant vector.
    pub fn translate(&self, w: &[Q; 3]) -> CurveParam {
        let v = self.param_vars().clone();
        let mut coords = self.coords.clone();
        for (c, x) in coords.iter_mut().zip(w) {
            *c = c.add(&RatFn::constant(&v, x.clone()));
        }
        CurveParam { coords }
    }

    pub(crate) fn bindings(&self) -> Vec<Option<Binding>> {
        self.coords.iter().map(|c| Some(Binding::Func(c.clone()))).collect()
    }
}

impl fmt::Display for CurveParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}", self.coords[0], self.coords[1], self.coords[2])
    }
}

/// Squarefree primitive part of `res_{x_e}(g1, g2)`.
pub fn project(sys: &SpaceCurveSystem, elim_var: usize) -> Result<PlaneCurve, CurveError> {
    let [f, g] = sys.gens();
    let var = sys.vars().name(elim_var).to_string();
    if !f.depends_on(elim_var) && !g.depends_on(elim_var) {
        return Err(CurveError::NotInvolved { var });
    }
    let r = resultant(f, g, elim_var)?;
    if r.is_zero() {
        return Err(CurveError::ZeroResultant { var });
    }
    if let Some(c) = r.constant_value() {
        return Err(CurveError::ConstantResultant {
            var,
            value: crate::poly::fmt_q(&c),
        });
    }
    let poly = squarefree_part(&r)?.integer_primitive();
    Ok(PlaneCurve { poly, elim_var })
}

fn tvars() -> VarSet {
    VarSet::param(PARAM)
}

/// A polynomial in the single variable `vars[v]`, moved to the parameter set.
fn to_param(p: &MPoly, target: &VarSet) -> MPoly {
    p.remap(target, &vec![0; p.arity()])
}

fn ratio(num: MPoly, den: MPoly) -> RatFn {
    RatFn::new(num, den).expect("nonzero denominator")
}

/// Parametrize a plane curve; returns the coordinates of `curve.plane_vars()`.
pub fn plane_parametrize(curve: &PlaneCurve, cfg: &CurveConfig) -> Result<[RatFn; 2], CurveError> {
    let p = &curve.poly;
    let [u, v] = curve.plane_vars();
    let tv = tvars();
    let t = MPoly::var(&tv, 0);
    let unsupported = |reason| CurveError::UnsupportedCurveClass {
        poly: p.to_string(),
        reason,
    };
    if p.is_constant() {
        return Err(unsupported(UnsupportedReason::NoClass));
    }

    // (a) line
    if p.total_degree() == Some(1) {
        let a = p.coeff(&crate::poly::Monomial::var(3, u, 1));
        let b = p.coeff(&crate::poly::Monomial::var(3, v, 1));
        let c = p.coeff(&crate::poly::Monomial::one(3));
        let tc = |q: Q| MPoly::constant(&tv, q);
        return Ok(if !b.is_zero() {
            let qv = (&t.scale(&a) + &tc(c)).scale(&-b.recip());
            [RatFn::from_poly(t), RatFn::from_poly(qv)]
        } else {
            [RatFn::constant(&tv, -(c / a)), RatFn::from_poly(t)]
        });
    }

    // (b) linear in one variable
    for (lin, other) in [(u, v), (v, u)] {
        if p.degree_in(lin) == 1 && p.depends_on(other) {
            let c = p.coeffs_in(lin);
            let q = ratio(-to_param(&c[0], &tv), to_param(&c[1], &tv));
            return Ok(if lin == u {
                [q, RatFn::from_poly(t)]
            } else {
                [RatFn::from_poly(t), q]
            });
        }
    }

    // (c) conic
    if p.total_degree() == Some(2) {
        return conic_parametrize(p, u, v, cfg.conic_height).map_err(unsupported);
    }

    // (d) coprime binomial
    if let Some(q) = binomial_parametrize(p, u, v) {
        return Ok(q);
    }
    Err(unsupported(UnsupportedReason::NoClass))
}

fn mono2(u: usize, v: usize, a: u32, b: u32) -> crate::poly::Monomial {
    let mut e = vec![0; 3];
    e[u] = a;
    e[v] = b;
    crate::poly::Monomial::from_exps(e)
}

fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Rationals `p/q` with `|p|, q <= h`, ordered by height, then by absolute
/// value, positive first.
fn height_ladder(h: u32) -> Vec<Q> {
    let mut out = vec![Q::zero()];
    for k in 1..=h as i64 {
        let mut level = Vec::new();
        for q in 1..=k {
            for p in -k..=k {
                if p != 0 && p.abs().max(q) == k && p.gcd(&q) == 1 {
                    level.push(Q::new(BigInt::from(p), BigInt::from(q)));
                }
            }
        }
        level.sort_by(|a, b| a.abs().cmp(&b.abs()).then(b.cmp(a)));
        out.extend(level);
    }
    out
}

fn conic_parametrize(p: &MPoly, u: usize, v: usize, height: u32) -> Result<[RatFn; 2], UnsupportedReason> {
    let c = |a, b| p.coeff(&mono2(u, v, a, b));
    let (a, b, cc, d, e, f0) = (c(2, 0), c(1, 1), c(0, 2), c(1, 0), c(0, 1), c(0, 0));
    let two = Q::from_integer(2.into());
    let m = [
        vec![a.clone(), &b / &two, &d / &two],
        vec![&b / &two, cc.clone(), &e / &two],
        vec![&d / &two, &e / &two, f0.clone()],
    ];
    if rank(&m) < 3 {
        return Err(UnsupportedReason::DegenerateConic);
    }
    let tv = tvars();
    let t = MPoly::var(&tv, 0);
    let k = |q: Q| MPoly::constant(&tv, q);

    // points at infinity first: directions (U:V) with a U^2 + b U V + c V^2 = 0
    let dir = if a.is_zero() {
        Some((Q::one(), Q::zero()))
    } else {
        rational_sqrt(&(&b * &b - &a * &cc * Q::from_integer(4.into())))
            .map(|s| ((-&b - s) / (&two * &a), Q::one()))
    };
    if let Some((pu, pv)) = dir {
        // lines pv*u - pu*v = t, points t*n + lambda*(pu, pv)
        let (nu, nv) = if !pv.is_zero() {
            (pv.recip(), Q::zero())
        } else {
            (Q::zero(), -pu.recip())
        };
        if let Some(q) = pencil(p, u, v, [t.scale(&nu), t.scale(&nv)], [k(pu), k(pv)]) {
            return Ok(q);
        }
    }
    // affine points, searching u over the height ladder
    for u0 in height_ladder(height) {
        let row = p.eval_var(u, &u0);
        let Some(up) = UPoly::from_mpoly(&row, v) else { continue };
        let roots = match up.degree() {
            Some(2) => {
                let (c0, c1, c2) = (up.coeff(0), up.coeff(1), up.coeff(2));
                match rational_sqrt(&(&c1 * &c1 - Q::from_integer(4.into()) * &c0 * &c2)) {
                    Some(s) => vec![(-&c1 - &s) / (&two * &c2), (-&c1 + s) / (&two * &c2)],
                    None => continue,
                }
            }
            Some(1) => vec![-(up.coeff(0) / up.coeff(1))],
            _ => continue,
        };
        for v0 in roots {
            if let Some(q) = pencil(p, u, v, [k(u0.clone()), k(v0)], [k(Q::one()), t.clone()]) {
                return Ok(q);
            }
        }
    }
    Err(UnsupportedReason::NoRationalPoint { height })
}

/// Intersect the conic with the line `base + lambda * dir` (both over `t`) and
/// return the residual intersection point.
fn pencil(p: &MPoly, u: usize, v: usize, base: [MPoly; 2], dir: [MPoly; 2]) -> Option<[RatFn; 2]> {
    let tv = tvars();
    let target = VarSet::new([PARAM, "_lambda"]).unwrap();
    let lam = MPoly::var(&target, 1);
    let lift = |q: &MPoly| q.remap(&target, &[0]);
    let mut b: Vec<Option<Binding>> = vec![Some(Binding::Value(Q::zero())); 3];
    b[u] = Some(Binding::Func(RatFn::from_poly(&lift(&base[0]) + &(&lam * &lift(&dir[0])))));
    b[v] = Some(Binding::Func(RatFn::from_poly(&lift(&base[1]) + &(&lam * &lift(&dir[1])))));
    let s = substitute(p, &b, &target).ok()?;
    let c = s.num().coeffs_in(1);
    let back = |q: &MPoly| q.remap(&tv, &[0, 0]);
    let get = |i: usize| c.get(i).map_or_else(|| MPoly::zero(&tv), back);
    let (c0, c1, c2) = (get(0), get(1), get(2));
    let lambda = if c2.is_zero() && !c1.is_zero() {
        RatFn::new(-c0, c1).ok()?
    } else if c0.is_zero() && !c2.is_zero() {
        RatFn::new(-c1, c2).ok()?
    } else {
        return None;
    };
    if lambda.is_constant() {
        return None;
    }
    let q = [
        RatFn::from_poly(base[0].clone()).add(&lambda.mul(&RatFn::from_poly(dir[0].clone()))),
        RatFn::from_poly(base[1].clone()).add(&lambda.mul(&RatFn::from_poly(dir[1].clone()))),
    ];
    if q.iter().all(RatFn::is_constant) {
        return None;
    }
    Some(q)
}

fn qpow(r: &Q, e: i64) -> Q {
    let base = if e < 0 { r.recip() } else { r.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// `alpha u^m + beta v^n` with `gcd(m, n) = 1` → `(lambda t^n, mu t^m)`.
fn binomial_parametrize(p: &MPoly, u: usize, v: usize) -> Option<[RatFn; 2]> {
    if p.nterms() != 2 {
        return None;
    }
    let (m, n) = (p.degree_in(u), p.degree_in(v));
    if m == 0 || n == 0 || m.gcd(&n) != 1 {
        return None;
    }
    let alpha = p.coeff(&mono2(u, v, m, 0));
    let beta = p.coeff(&mono2(u, v, 0, n));
    if alpha.is_zero() || beta.is_zero() {
        return None;
    }
    let r = -(beta / alpha);
    let g = (m as i64).extended_gcd(&(n as i64));
    // g.x * m + g.y * n = 1, so a = x, b = -y gives a m - b n = 1
    let (ea, eb) = (g.x, -g.y);
    let tv = tvars();
    let t = MPoly::var(&tv, 0);
    Some([
        RatFn::from_poly(t.pow(n).scale(&qpow(&r, ea))),
        RatFn::from_poly(t.pow(m).scale(&qpow(&r, eb))),
    ])
}

/// Recover the eliminated coordinate over a plane parametrization.
pub fn lift(plane: &[RatFn; 2], sys: &SpaceCurveSystem, elim_var: usize) -> Result<CurveParam, CurveError> {
    let space = sys.vars();
    let var = space.name(elim_var).to_string();
    let target = VarSet::new([PARAM, var.as_str()])?;
    let [u, v] = plane_vars(elim_var);
    let up = |r: &RatFn| r.remap(&target, &[0]);
    let mut b: Vec<Option<Binding>> = vec![None; 3];
    b[u] = Some(Binding::Func(up(&plane[0])));
    b[v] = Some(Binding::Func(up(&plane[1])));
    let mut nums = Vec::new();
    for g in sys.gens() {
        nums.push(substitute(g, &b, &target)?.num().clone());
    }
    let n = gcd(&nums[0], &nums[1]);
    if n.is_zero() {
        return Err(CurveError::Inconsistent { var });
    }
    let (_, n) = content_primitive(&n, 1);
    let degree = n.degree_in(1);
    if degree != 1 {
        return Err(CurveError::LiftFailed { var, degree });
    }
    let tv = tvars();
    let c = n.coeffs_in(1);
    let x = ratio(-c[0].remap(&tv, &[0, 0]), c[1].remap(&tv, &[0, 0]));
    let mut coords: [RatFn; 3] = std::array::from_fn(|_| RatFn::zero(&tv));
    coords[u] = plane[0].clone();
    coords[v] = plane[1].clone();
    coords[elim_var] = x;
    CurveParam::new(coords)
}

/// True iff every generator vanishes identically on `p`.
pub fn validate_on_curve(p: &CurveParam, sys: &SpaceCurveSystem) -> bool {
    vanishes_on(p, sys.gens())
}

/// True iff each polynomial vanishes identically on `p`.
pub fn vanishes_on<'a>(p: &CurveParam, polys: impl IntoIterator<Item = &'a MPoly>) -> bool {
    let b = p.bindings();
    polys
        .into_iter()
        .all(|g| substitute(g, &b, p.param_vars()).is_ok_and(|r| r.is_zero()))
}

/// Degree of the parametrization map; 1 means proper.
pub fn properness_degree(p: &CurveParam) -> Result<u32, CurveError> {
    let ts = VarSet::new(["t", "s"]).unwrap();
    let hs: Vec<MPoly> = p
        .coords()
        .iter()
        .filter(|c| !c.is_constant())
        .map(|c| {
            let at = |q: &MPoly, i: usize| q.remap(&ts, &[i]);
            &(&at(c.num(), 0) * &at(c.den(), 1)) - &(&at(c.num(), 1) * &at(c.den(), 0))
        })
        .collect();
    if hs.is_empty() {
        return Err(CurveError::ConstantParam);
    }
    let g = gcd_many(&hs).expect("nonempty");
    let (_, prim) = content_primitive(&g, 0);
    Ok(prim.degree_in(0))
}

/// True iff `{1, c1, c2, c3}` spans a space of dimension at most 2.
pub fn is_line(p: &CurveParam) -> bool {
    let mut den = MPoly::one(p.param_vars());
    for c in p.coords() {
        let g = gcd(&den, c.den());
        den = &den * &c.den().exact_div(&g).expect("gcd divides");
    }
    let mut polys = vec![den.clone()];
    for c in p.coords() {
        polys.push(c.num() * &den.exact_div(c.den()).expect("lcm multiple"));
    }
    let refs: Vec<&MPoly> = polys.iter().collect();
    rank(&coefficient_rows(&refs)) <= 2
}

// ---------------------------------------------------------------------------
// factor isolation

fn series_eval(cw: &[UPoly], y: &UPoly, n: usize) -> (UPoly, UPoly) {
    let mut val = UPoly::zero();
    let mut der = UPoly::zero();
    for c in cw.iter().rev() {
        der = der.mul_trunc(y, n).add(&val);
        val = val.mul_trunc(y, n).add(&c.truncate(n));
    }
    (val, der)
}

fn series_inv(a: &UPoly, n: usize) -> UPoly {
    let mut b = UPoly::constant(a.coeff(0).recip());
    let mut prec = 1;
    let two = UPoly::constant(Q::from_integer(2.into()));
    while prec < n {
        prec = (2 * prec).min(n);
        let ab = a.mul_trunc(&b, prec);
        b = b.mul_trunc(&two.sub(&ab), prec);
    }
    b
}

/// Power-series root `y(w)` of `sum cw[i](w) y^i` with `y(0) = r` (simple root).
fn newton_series(cw: &[UPoly], r: &Q, n: usize) -> UPoly {
    let mut y = UPoly::constant(r.clone());
    let mut prec = 1;
    while prec < n {
        prec = (2 * prec).min(n);
        let (val, der) = series_eval(cw, &y, prec);
        let step = val.mul_trunc(&series_inv(&der, prec), prec);
        y = y.sub(&step).truncate(prec);
    }
    y
}

fn small_ladder() -> impl Iterator<Item = Q> {
    (0..40i64).map(|k| {
        let m = (k + 1) / 2;
        Q::from_integer(BigInt::from(if k % 2 == 1 { m } else { -m }))
    })
}

/// Factors of `p` of the form `A(v) u - B(v)`, found as rational-function
/// roots: specialize `v`, take rational roots in `u`, lift them to power
/// series in `v - v0`, reconstruct by Padé approximation and confirm by
/// exact division.
pub fn linear_factors(p: &MPoly, u: usize, v: usize) -> Vec<MPoly> {
    let du = p.degree_in(u);
    if du < 1 {
        return Vec::new();
    }
    let dv = p.degree_in(v) as usize;
    let coeffs = p.coeffs_in(u);
    let Some(cu) = coeffs.iter().map(|c| UPoly::from_mpoly(c, v)).collect::<Option<Vec<UPoly>>>() else {
        return Vec::new();
    };
    let vars = p.vars().clone();
    let mut out = Vec::new();
    let mut rest = p.clone();
    let Some((v0, spec)) = small_ladder().find_map(|v0| {
        let s = UPoly::new(cu.iter().map(|c| c.eval(&v0)).collect());
        let ok = s.degree() == Some(du as usize) && s.gcd(&s.derivative()).degree() == Some(0);
        ok.then_some((v0, s))
    }) else {
        return out;
    };
    let cw: Vec<UPoly> = cu.iter().map(|c| c.taylor_shift(&v0)).collect();
    let n = 2 * dv + 2;
    let uvar = MPoly::var(&vars, u);
    let back = |q: &UPoly| q.taylor_shift(&-v0.clone()).to_mpoly(&vars, v);
    let factor = |(a, b): (UPoly, UPoly)| &(&back(&b) * &uvar) - &back(&a);
    for r in spec.rational_roots() {
        let exact = || {
            let y = newton_series(&cw, &r, n);
            y.rational_reconstruct(n, dv).filter(|(_, b)| b.degree().unwrap_or(0) <= dv).map(factor)
        };
        let cands: Vec<MPoly> = if dv == 0 {
            vec![&uvar - &MPoly::constant(&vars, r.clone())]
        } else {
            match rootlift::lift(&cw, &r, n, dv) {
                Lift::RuledOut => continue,
                // a premature modular candidate falls back to the exact lift
                Lift::Candidate(a, b) => {
                    let cand = factor((a, b));
                    if rest.exact_div(&cand).is_some() {
                        vec![cand]
                    } else {
                        exact().into_iter().collect()
                    }
                }
                Lift::Unknown => exact().into_iter().collect(),
            }
        };
        for cand in cands {
            if let Some(q) = rest.exact_div(&cand) {
                rest = q;
                out.push(cand.integer_primitive());
            }
        }
    }
    out
}

/// Candidate plane factors of a projected curve, in the order they are tried.
fn plane_candidates(poly: &MPoly, e: usize) -> Vec<MPoly> {
    let [u, v] = plane_vars(e);
    let vars = poly.vars().clone();
    let (cu, r1) = content_primitive(poly, u);
    let (cv, prim) = content_primitive(&r1, v);
    let mut out = Vec::new();
    let push = |out: &mut Vec<MPoly>, q: MPoly| {
        let q = q.integer_primitive();
        if !q.is_constant() && !out.contains(&q) {
            out.push(q);
        }
    };
    if !prim.is_constant() {
        push(&mut out, prim.clone());
        let mut rest = prim.clone();
        for (a, b) in [(u, v), (v, u)] {
            if rest.degree_in(a) >= 2 {
                for f in linear_factors(&rest, a, b) {
                    rest = rest.exact_div(&f).expect("factor divides");
                    push(&mut out, f);
                }
            }
        }
        push(&mut out, rest);
    }
    // lines from contents: cu depends on v only, cv on u only
    for (c, var) in [(cu, v), (cv, u)] {
        if let Some(up) = UPoly::from_mpoly(&c, var) {
            for r in up.rational_roots() {
                push(&mut out, &MPoly::var(&vars, var) - &MPoly::constant(&vars, r));
            }
        }
    }
    out
}

/// Parametrize the first component accepted by `accept`; each candidate is
/// already validated on the system and proper, and offered only once even
/// when several projections produce it.
pub fn parametrize_space_curve_with(
    sys: &SpaceCurveSystem,
    cfg: &CurveConfig,
    log: &mut Vec<String>,
    accept: &mut dyn FnMut(&CurveParam) -> bool,
) -> Result<CurveParam, CurveError> {
    let mut witnesses = Vec::new();
    let mut projected = 0;
    let mut offered: Vec<CurveParam> = Vec::new();
    for e in [2, 1, 0] {
        let plane = match project(sys, e) {
            Ok(p) => p,
            Err(err @ CurveError::ConstantResultant { .. }) => {
                projected += 1;
                witnesses.push(err.to_string());
                log.push(err.to_string());
                continue;
            }
            Err(CurveError::NotInvolved { .. }) => continue,
            Err(err) => {
                projected += 1;
                log.push(err.to_string());
                continue;
            }
        };
        projected += 1;
        let var = sys.vars().name(e);
        for factor in plane_candidates(&plane.poly, e) {
            let curve = PlaneCurve {
                poly: factor,
                elim_var: e,
            };
            let q = match plane_parametrize(&curve, cfg) {
                Ok(q) => q,
                Err(err) => {
                    log.push(format!("projection {var}: {err}"));
                    continue;
                }
            };
            let p = match lift(&q, sys, e) {
                Ok(p) => p,
                Err(err) => {
                    log.push(format!("projection {var}, factor {}: {err}", curve.poly));
                    continue;
                }
            };
            if !validate_on_curve(&p, sys) || properness_degree(&p).ok() != Some(1) {
                log.push(format!("projection {var}: candidate ({p}) failed validation"));
                continue;
            }
            if offered.contains(&p) {
                log.push(format!("projection {var}: component {} already offered", curve.poly));
                continue;
            }
            offered.push(p.clone());
            if accept(&p) {
                log.push(format!("projection {var}: component {} parametrized", curve.poly));
                return Ok(p);
            }
            log.push(format!("projection {var}: component {} skipped", curve.poly));
        }
    }
    if projected > 0 && witnesses.len() == projected {
        return Err(CurveError::NotACurve { witnesses });
    }
    Err(CurveError::Unsupported { log: log.clone() })
}

/// First validated proper parametrization of a component of the system.
pub fn parametrize_space_curve(sys: &SpaceCurveSystem, cfg: &CurveConfig) -> Result<CurveParam, CurveError> {
    parametrize_space_curve_with(sys, cfg, &mut Vec::new(), &mut |_| true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionEvidence {
    /// A projection resultant is a nonzero constant.
    FiniteEvidence(String),
    CurveFound(CurveParam),
    Unknown(Vec<String>),
}

pub fn dimension_evidence(sys: &SpaceCurveSystem, cfg: &CurveConfig) -> DimensionEvidence {
    for e in [2, 1, 0] {
        if let Err(err @ CurveError::ConstantResultant { .. }) = project(sys, e) {
            return DimensionEvidence::FiniteEvidence(err.to_string());
        }
    }
    let mut log = Vec::new();
    match parametrize_space_curve_with(sys, cfg, &mut log, &mut |_| true) {
        Ok(p) => DimensionEvidence::CurveFound(p),
        Err(_) => DimensionEvidence::Unknown(log),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_param_triple, parse_poly};

    fn sp(s: &str) -> MPoly {
        parse_poly(s, &VarSet::space()).unwrap()
    }
    fn sys(a: &str, b: &str) -> SpaceCurveSystem {
        SpaceCurveSystem::new(sp(a), sp(b)).unwrap()
    }
    fn tri(s: &str) -> CurveParam {
        parse_param_triple(s, "t").unwrap()
    }
    fn plane(s: &str, e: usize) -> PlaneCurve {
        PlaneCurve::new(sp(s), e).unwrap()
    }
    fn pair(q: &[RatFn; 2]) -> String {
        format!("{}, {}", q[0], q[1])
    }
    fn on_plane(c: &PlaneCurve, q: &[RatFn; 2]) -> bool {
        let [u, v] = c.plane_vars();
        let mut b = vec![Some(Binding::Value(Q::zero())); 3];
        b[u] = Some(Binding::Func(q[0].clone()));
        b[v] = Some(Binding::Func(q[1].clone()));
        substitute(&c.poly, &b, q[0].vars()).unwrap().is_zero()
    }

    const F1: &str = "x3+5*x1^2-6*x1*x2+2*x2^2";

    #[test]
    fn project_examples() {
        assert_eq!(project(&sys(F1, "4*x1-2*x2+1"), 2).unwrap().poly, sp("4*x1-2*x2+1"));
        assert_eq!(project(&sys("x3-x1^2", "x2-x1"), 2).unwrap().poly, sp("x1-x2"));
        assert!(matches!(
            project(&sys("x3^2-x1", "x3^2-x1"), 2),
            Err(CurveError::ZeroResultant { .. })
        ));
    }

    #[test]
    fn plane_examples() {
        let cfg = CurveConfig::default();
        let q = plane_parametrize(&plane("4*x1-2*x2+1", 2), &cfg).unwrap();
        assert_eq!(pair(&q), "t, 2*t+1/2");
        let q = plane_parametrize(&plane("x2^2-x1^3", 2), &cfg).unwrap();
        assert_eq!(pair(&q), "t^2, t^3");
        let c = plane("x1^2+x2^2-1", 2);
        let q = plane_parametrize(&c, &cfg).unwrap();
        assert!(on_plane(&c, &q));
        let p = CurveParam::new([q[0].clone(), q[1].clone(), RatFn::zero(q[0].vars())]).unwrap();
        assert_eq!(properness_degree(&p).unwrap(), 1);
    }

    #[test]
    fn conic_classes() {
        let cfg = CurveConfig::default();
        // rational points at infinity or of small height
        for s in ["x1^2-x2^2-3", "x1^2-2*x2^2-1", "x1^2+x1*x2-x2^2+5", "3*x1^2+5*x2^2-8"] {
            let c = plane(s, 2);
            let q = plane_parametrize(&c, &cfg).unwrap();
            assert!(on_plane(&c, &q), "{s}");
        }
        // no rational points at all
        assert!(matches!(
            plane_parametrize(&plane("x1^2+x2^2+1", 2), &cfg),
            Err(CurveError::UnsupportedCurveClass {
                reason: UnsupportedReason::NoRationalPoint { .. },
                ..
            })
        ));
        assert!(matches!(
            plane_parametrize(&plane("x1^3+x2^3+x1*x2+1", 2), &cfg),
            Err(CurveError::UnsupportedCurveClass {
                reason: UnsupportedReason::NoClass,
                ..
            })
        ));
    }

    #[test]
    fn binomial_scale() {
        let c = plane("3*x1^2-12*x3^5", 1);
        let q = plane_parametrize(&c, &CurveConfig::default()).unwrap();
        assert!(on_plane(&c, &q));
    }

    #[test]
    fn lift_examples() {
        let tv = tvars();
        let t = RatFn::var(&tv, 0);
        let q = [t.clone(), ratio(sp("4*x1+1").remap(&tv, &[0, 0, 0]), MPoly::from_int(&tv, 2))];
        let p = lift(&q, &sys(F1, "4*x1-2*x2+1"), 2).unwrap();
        assert_eq!(p, tri("t, (4*t+1)/2, -(2*t^2+2*t+1)/2"));
        let sq = [t.mul(&t), t.mul(&t).mul(&t)];
        assert_eq!(lift(&sq, &sys("x2^2-x1^3", "x3*x1-x2"), 2).unwrap(), tri("t^2, t^3, t"));
        assert!(matches!(
            lift(&[t.clone(), t], &sys("x3-x1", "x3-x2+1"), 2),
            Err(CurveError::LiftFailed { degree: 0, .. })
        ));
    }

    #[test]
    fn space_curve_examples() {
        let cfg = CurveConfig::default();
        let s = sys(F1, "10*x1-6*x2-6*x1+4*x2+1");
        let p = parametrize_space_curve(&s, &cfg).unwrap();
        assert!(validate_on_curve(&p, &s));
        assert!(validate_on_curve(&tri("t, (4*t+1)/2, -(2*t^2+2*t+1)/2"), &s));
        assert_eq!(parametrize_space_curve(&sys("x1", "x2"), &cfg).unwrap(), tri("0, 0, t"));
        assert!(!validate_on_curve(&tri("t, 0, 0"), &sys("x2-x1", "x3")));
        assert!(validate_on_curve(&tri("0, 0, t"), &sys("x1", "x2")));
    }

    #[test]
    fn extraneous_factor_removed() {
        // curve (t, t^2, t^3) plus the line x1 = x2 = 0 inside the second surface
        let s = sys("x2-x1^2", "(x3-x1*x2)*(x1-x2+x3^2)");
        let p = parametrize_space_curve(&s, &CurveConfig::default()).unwrap();
        assert!(validate_on_curve(&p, &s));
    }

    #[test]
    fn linear_factor_search() {
        let vs = VarSet::space();
        let p = sp("(x1*x2-x2^2+3)*(x1^3-x2^2*x1+x2+7)");
        let f = linear_factors(&p, 0, 1);
        assert_eq!(f.len(), 1);
        assert!(f[0].is_associate(&sp("x1*x2-x2^2+3")));
        assert_eq!(f[0].vars(), &vs);
    }

    #[test]
    fn properness_values() {
        assert_eq!(properness_degree(&tri("t, t^2, t^3")).unwrap(), 1);
        assert_eq!(properness_degree(&tri("t^2, t^4, t^6")).unwrap(), 2);
        assert_eq!(properness_degree(&tri("2*t/(1+t^2), (1-t^2)/(1+t^2), 0")).unwrap(), 1);
        assert!(properness_degree(&CurveParam::new_unchecked(tri("1, 2, 3").coords().clone())).is_err());
    }

    #[test]
    fn line_checks() {
        assert!(is_line(&tri("t, 2*t+1, -t")));
        assert!(!is_line(&tri("t, t^2, t^3")));
        assert!(!is_line(&tri("t, (4*t+1)/2, -(2*t^2+2*t+1)/2")));
        assert!(is_line(&tri("1/t, 2/t, 1")));
    }

    #[test]
    fn dimension_examples() {
        let cfg = CurveConfig::default();
        assert!(matches!(
            dimension_evidence(&sys("x1^2+x2^2+x3^2-1", "x1-2"), &cfg),
            DimensionEvidence::CurveFound(_) | DimensionEvidence::Unknown(_)
        ));
        assert!(matches!(dimension_evidence(&sys("x1", "x2"), &cfg), DimensionEvidence::CurveFound(_)));
        assert!(matches!(
            dimension_evidence(&sys("x1-1", "x1+1"), &cfg),
            DimensionEvidence::FiniteEvidence(_)
        ));
    }
}
