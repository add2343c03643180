//! Gcd, content, squarefree part and resultants, all driven by the
//! subresultant polynomial remainder sequence in a chosen main variable.
//!
//! A polynomial viewed in a main variable `v` is a `Vec<MPoly>` of
//! coefficients (index = power of `v`), each free of `v`.

use num_traits::One;

use super::upoly::UPoly;
use super::{interp, modular, q_int, MPoly, Monomial, PolyError};

type Coeffs = Vec<MPoly>;

fn deg(a: &[MPoly]) -> usize {
    a.len() - 1
}

fn trim(a: &mut Coeffs) {
    while a.last().is_some_and(MPoly::is_zero) {
        a.pop();
    }
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &[MPoly], b: &[MPoly]) -> Coeffs {
    let db = deg(b);
    let lb = &b[db];
    let mut r: Coeffs = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return r;
    }
    let mut e = deg(&r) - db + 1;
    while !r.is_empty() && r.len() > db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut().take(dr) {
            if !c.is_zero() {
                *c = &*c * lb;
            }
        }
        for (j, bj) in b.iter().enumerate().take(db) {
            if !bj.is_zero() {
                r[j + shift] = &r[j + shift] - &(&lr * bj);
            }
        }
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn div_all(a: Coeffs, d: &MPoly) -> Coeffs {
    if d.is_one() {
        return a;
    }
    a.into_iter()
        .map(|c| c.exact_div(d).expect("subresultant division is exact"))
        .collect()
}

/// Last nonzero element of the subresultant PRS of `a` and `b` (both with
/// positive length, `deg a >= deg b`).
fn subresultant_last(mut a: Coeffs, mut b: Coeffs) -> Coeffs {
    let vars = a[0].vars().clone();
    let mut g = MPoly::one(&vars);
    let mut h = MPoly::one(&vars);
    loop {
        if deg(&b) == 0 {
            return b;
        }
        let delta = (deg(&a) - deg(&b)) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = div_all(r, &divisor);
        g = a[deg(&a)].clone();
        h = next_h(&h, &g, delta);
    }
}

fn next_h(h: &MPoly, g: &MPoly, delta: u32) -> MPoly {
    match delta {
        0 => h.clone(),
        1 => g.clone(),
        _ => g
            .pow(delta)
            .exact_div(&h.pow(delta - 1))
            .expect("subresultant h update is exact"),
    }
}

fn monomial_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let n = a.arity();
    let mut e: Option<Vec<u32>> = None;
    for (m, _) in a.terms().chain(b.terms()) {
        e = Some(match e {
            None => m.exps().to_vec(),
            Some(cur) => cur.iter().zip(m.exps()).map(|(x, y)| *x.min(y)).collect(),
        });
    }
    MPoly::monomial(
        a.vars(),
        Monomial::from_exps(e.unwrap_or_else(|| vec![0; n])),
        super::Q::one(),
    )
}

/// Gcd up to a nonzero constant.
fn gcd_raw(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.vars());
    }
    if a.nterms() == 1 || b.nterms() == 1 {
        return monomial_gcd(a, b);
    }
    let sa = a.support();
    let sb = b.support();
    if let Some(&v) = sa.iter().find(|v| !sb.contains(v)) {
        return gcd_with_list(b, a.coeffs_in(v));
    }
    if let Some(&v) = sb.iter().find(|v| !sa.contains(v)) {
        return gcd_with_list(a, b.coeffs_in(v));
    }
    if sa.len() == 1 {
        let (ua, ub) = (UPoly::from_mpoly(a, sa[0]).unwrap(), UPoly::from_mpoly(b, sa[0]).unwrap());
        return ua.gcd(&ub).to_mpoly(a.vars(), sa[0]);
    }
    if let Some(g) = interp::gcd(a, b, &sa) {
        return g;
    }
    let v = *sa
        .iter()
        .min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v)))
        .unwrap();
    let (ca, pa) = split_content(a, v);
    let (cb, pb) = split_content(b, v);
    let c = gcd_raw(&ca, &cb);

    let mut ac = pa.coeffs_in(v);
    let mut bc = pb.coeffs_in(v);
    if ac.len() < bc.len() {
        std::mem::swap(&mut ac, &mut bc);
    }
    let last = subresultant_last(ac, bc);
    if last.len() <= 1 {
        return c;
    }
    let g = MPoly::from_coeffs_in(a.vars(), v, &last);
    let (_, pg) = split_content(&g, v);
    &c * &pg
}

fn gcd_with_list(p: &MPoly, mut list: Vec<MPoly>) -> MPoly {
    list.retain(|c| !c.is_zero());
    list.sort_by_key(MPoly::nterms);
    let mut g = p.clone();
    for c in &list {
        g = gcd_raw(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// (content, primitive part) in variable `v`, without normalization.
fn split_content(p: &MPoly, v: usize) -> (MPoly, MPoly) {
    let coeffs = p.coeffs_in(v);
    let mut nz: Vec<MPoly> = coeffs.into_iter().filter(|c| !c.is_zero()).collect();
    nz.sort_by_key(MPoly::nterms);
    let mut c = nz[0].clone();
    for x in &nz[1..] {
        if c.is_constant() {
            break;
        }
        c = gcd_raw(&c, x);
    }
    if c.is_constant() {
        return (MPoly::one(p.vars()), p.clone());
    }
    let prim = p.exact_div(&c).expect("content divides");
    (c, prim)
}

/// Greatest common divisor, normalized to graded-lex leading coefficient 1.
/// `gcd(0, q)` is the normalized `q`.
pub fn gcd(p: &MPoly, q: &MPoly) -> MPoly {
    assert!(p.vars() == q.vars(), "gcd over different variable sets");
    gcd_raw(p, q).monic()
}

/// Gcd of a list; zero for an empty or all-zero list.
pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a MPoly>) -> Option<MPoly> {
    let mut it = polys.into_iter();
    let first = it.next()?.clone();
    let rest: Vec<MPoly> = it.cloned().collect();
    Some(gcd_with_list(&first, rest).monic())
}

/// Content and primitive part of `p` viewed as a polynomial in `vars[v]`.
/// The content is normalized (leading coefficient 1) and
/// `content * primitive == p` exactly. Zero maps to `(0, 0)`.
pub fn content_primitive(p: &MPoly, v: usize) -> (MPoly, MPoly) {
    if p.is_zero() {
        return (p.clone(), p.clone());
    }
    let (c, _) = split_content(p, v);
    let c = c.monic();
    let prim = p.exact_div(&c).expect("content divides");
    (c, prim)
}

/// Product of the distinct irreducible factors, normalized.
pub fn squarefree_part(p: &MPoly) -> Result<MPoly, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if p.is_constant() {
        return Ok(MPoly::one(p.vars()));
    }
    if squarefree_certified(p) {
        return Ok(p.monic());
    }
    let mut list = Vec::new();
    for v in p.support() {
        list.push(p.diff(v)?);
    }
    let g = gcd_with_list(p, list);
    Ok(p.exact_div(&g).expect("gcd divides").monic())
}

/// For each variable `w`, a specialization of the others that keeps
/// `deg_w` and leaves a squarefree univariate image. A square factor `g^2`
/// would survive in the image for any variable `g` involves, so success
/// proves `p` squarefree.
fn squarefree_certified(p: &MPoly) -> bool {
    const POINTS: [i64; 9] = [3, -5, 7, 2, -11, 13, -4, 17, 6];
    let support = p.support();
    support.iter().all(|&w| {
        (0..3).any(|attempt| {
            let mut u = p.clone();
            for (k, &o) in support.iter().filter(|&&o| o != w).enumerate() {
                u = u.eval_var(o, &q_int(POINTS[(attempt * 4 + k) % POINTS.len()]));
            }
            u.degree_in(w) == p.degree_in(w) && UPoly::from_mpoly(&u, w).is_some_and(|x| x.squarefree_certified())
        })
    })
}

/// Resultant with respect to `vars[v]`, from modular images.
///
/// When exactly one argument is constant in `v` the result is that argument
/// raised to the other's degree in `v`.
pub fn resultant(p: &MPoly, q: &MPoly, v: usize) -> Result<MPoly, PolyError> {
    check_resultant_args(p, q, v)?;
    let (dp, dq) = (p.degree_in(v), q.degree_in(v));
    if p.is_zero() || q.is_zero() || dp == 0 || dq == 0 {
        return resultant_prs(p, q, v);
    }
    Ok(modular::resultant(p, q, v))
}

fn check_resultant_args(p: &MPoly, q: &MPoly, v: usize) -> Result<(), PolyError> {
    if p.vars() != q.vars() {
        return Err(PolyError::VarMismatch(
            p.vars().names().join(","),
            q.vars().names().join(","),
        ));
    }
    if v >= p.arity() {
        return Err(PolyError::BadIndex(v, p.arity()));
    }
    if p.degree_in(v) == 0 && q.degree_in(v) == 0 {
        return Err(PolyError::BothConstant(p.vars().name(v).to_string()));
    }
    Ok(())
}

/// Resultant via the subresultant PRS; same contract as [`resultant`].
pub fn resultant_prs(p: &MPoly, q: &MPoly, v: usize) -> Result<MPoly, PolyError> {
    check_resultant_args(p, q, v)?;
    let dp = p.degree_in(v);
    let dq = q.degree_in(v);
    let vars = p.vars().clone();
    if p.is_zero() || q.is_zero() {
        return Ok(MPoly::zero(&vars));
    }
    if dq == 0 {
        return Ok(q.pow(dp));
    }
    if dp == 0 {
        return Ok(p.pow(dq));
    }
    let mut a = p.coeffs_in(v);
    let mut b = q.coeffs_in(v);
    let mut negate = false;
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            negate = !negate;
        }
    }
    let mut g = MPoly::one(&vars);
    let mut h = MPoly::one(&vars);
    loop {
        let da = deg(&a);
        let db = deg(&b);
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return Ok(MPoly::zero(&vars));
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = div_all(r, &divisor);
        g = a[deg(&a)].clone();
        h = next_h(&h, &g, delta);
        if deg(&b) == 0 {
            break;
        }
    }
    let da = deg(&a) as u32;
    let lb = &b[0];
    let res = if da == 0 {
        h
    } else {
        lb.pow(da)
            .exact_div(&h.pow(da - 1))
            .expect("final resultant division is exact")
    };
    Ok(if negate { -res } else { res })
}

#[cfg(test)]
mod tests {
    use super::super::{q_int, VarSet};
    use super::*;

    fn sp() -> VarSet {
        VarSet::space()
    }
    fn x(i: usize) -> MPoly {
        MPoly::var(&sp(), i)
    }
    fn c(n: i64) -> MPoly {
        MPoly::from_int(&sp(), n)
    }

    #[test]
    fn gcd_small_cases() {
        let a = &x(0).pow(2) - &c(1);
        let b = &(&x(0).pow(2) + &x(0).scale(&q_int(2))) + &c(1);
        assert_eq!(gcd(&a, &b), &x(0) + &c(1));
        let common = &x(0) + &x(1);
        let p = &common * &(&x(0) - &x(2));
        let q = &common * &x(1);
        assert_eq!(gcd(&p, &q), common);
        assert_eq!(gcd(&MPoly::zero(&sp()), &x(1).scale(&q_int(3))), x(1));
    }

    #[test]
    fn resultant_linear_roots() {
        let a = &x(2) - &x(0);
        let b = &x(2) - &x(1);
        assert_eq!(resultant(&a, &b, 2).unwrap(), &x(0) - &x(1));
        let p = &x(2).pow(2) - &x(0);
        assert_eq!(resultant(&p, &b, 2).unwrap(), &x(1).pow(2) - &x(0));
    }

    #[test]
    fn resultant_degenerate_convention() {
        let p = &x(2).pow(2) - &x(0);
        let q = &x(1) + &c(1);
        assert_eq!(resultant(&p, &q, 2).unwrap(), q.pow(2));
        assert_eq!(resultant(&q, &p, 2).unwrap(), q.pow(2));
        assert!(matches!(resultant(&x(0), &x(1), 2), Err(PolyError::BothConstant(_))));
    }

    #[test]
    fn content_conventions() {
        let vs = VarSet::new(["x1", "x2", "x3", "t1"]).unwrap();
        let xx = |i| MPoly::var(&vs, i);
        let p = &(&xx(0) * &xx(3)) + &(&xx(0) * &xx(1));
        let (cont, prim) = content_primitive(&p, 3);
        assert_eq!(cont, xx(0));
        assert_eq!(prim, &xx(3) + &xx(1));
        let (z1, z2) = content_primitive(&MPoly::zero(&vs), 3);
        assert!(z1.is_zero() && z2.is_zero());
    }

    #[test]
    fn squarefree_cases() {
        let s = &x(0) + &x(1);
        assert_eq!(squarefree_part(&s.pow(2)).unwrap(), s);
        let d = &x(0).pow(2) - &x(1).pow(2);
        assert_eq!(squarefree_part(&d).unwrap(), d);
        assert_eq!(squarefree_part(&MPoly::zero(&sp())), Err(PolyError::ZeroInput));
    }
}
