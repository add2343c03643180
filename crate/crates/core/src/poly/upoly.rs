//! Dense univariate polynomials over `Q`, truncated power series, rational
//! root finding and rational-function reconstruction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{MPoly, Monomial, VarSet, Q};

/// Coefficients from the constant term upward, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly(Vec<Q>);

impl UPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        UPoly::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        UPoly(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// Product truncated to the first `n` coefficients.
    pub fn mul_trunc(&self, o: &UPoly, n: usize) -> UPoly {
        let mut out = vec![Q::zero(); n.min(self.0.len() + o.0.len())];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn truncate(&self, n: usize) -> UPoly {
        UPoly::new(self.0.iter().take(n).cloned().collect())
    }

    pub fn scale(&self, c: &Q) -> UPoly {
        UPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        if self.0.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.0.clone();
        let mut q = vec![Q::zero(); r.len() - dd];
        let inv = d.lc().recip();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    /// Monic gcd (zero only when both inputs are zero), via the modular
    /// algorithm on primitive integer multiples.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.degree() == Some(0) || o.degree() == Some(0) {
            return UPoly::constant(Q::one());
        }
        let g = gcd_int(&self.to_primitive_ints(), &o.to_primitive_ints());
        UPoly::new(g.into_iter().map(Q::from_integer).collect()).monic()
    }

    /// True when some prime not dividing the leading coefficient leaves the
    /// image squarefree, which proves `self` squarefree. `false` is
    /// inconclusive only in the unlikely case that every tried prime is bad.
    pub fn squarefree_certified(&self) -> bool {
        if self.degree().is_none_or(|d| d == 0) {
            return true;
        }
        let a = self.to_primitive_ints();
        let lead = a.last().expect("nonzero").clone();
        big_primes()
            .iter()
            .filter(|&&p| !(&lead % BigInt::from(p)).is_zero())
            .take(3)
            .any(|&p| squarefree_mod(&poly_mod(&a, p), p))
    }

    /// Euclid's algorithm over `Q`; reference implementation for [`gcd`](Self::gcd).
    pub fn gcd_euclid(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p(x + c)`.
    pub fn taylor_shift(&self, c: &Q) -> UPoly {
        let mut a = self.0.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        UPoly::new(a)
    }

    pub fn from_mpoly(p: &MPoly, v: usize) -> Option<UPoly> {
        if (0..p.arity()).any(|i| i != v && p.depends_on(i)) {
            return None;
        }
        let mut c = vec![Q::zero(); p.degree_in(v) as usize + 1];
        for (m, a) in p.terms() {
            c[m.exps()[v] as usize] = a.clone();
        }
        Some(UPoly::new(c))
    }

    pub fn to_mpoly(&self, vars: &VarSet, v: usize) -> MPoly {
        MPoly::from_terms(
            vars,
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(vars.arity(), v, i as u32), c.clone())),
        )
    }

    /// Integer coefficients with gcd 1, positive leading coefficient.
    fn to_primitive_ints(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Q::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for a in &ints {
            g = g.gcd(a);
        }
        let neg = ints.last().is_some_and(Signed::is_negative);
        for a in ints.iter_mut() {
            *a = &*a / &g;
            if neg {
                *a = -&*a;
            }
        }
        ints
    }

    /// All distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Q> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let mut p = self.clone();
        if p.0[0].is_zero() {
            roots.push(Q::zero());
            let k = p.0.iter().position(|c| !c.is_zero()).unwrap();
            p = UPoly::new(p.0[k..].to_vec());
        }
        let p = p.divrem(&p.gcd(&p.derivative())).0;
        match p.degree() {
            None | Some(0) => {}
            Some(1) => roots.push(-(&p.0[0] / &p.0[1])),
            Some(_) => roots.extend(modular_rational_roots(&p.to_primitive_ints())),
        }
        roots.sort();
        roots.dedup();
        roots
    }

    /// Resultant with respect to the formal degrees `deg self`, `deg o`.
    pub fn resultant(&self, o: &UPoly) -> Q {
        let (Some(da), Some(db)) = (self.degree(), o.degree()) else {
            return Q::zero();
        };
        if db == 0 {
            return num_traits::pow(o.lc(), da);
        }
        if da == 0 {
            return num_traits::pow(self.lc(), db);
        }
        let r = self.divrem(o).1;
        let Some(dr) = r.degree() else {
            return Q::zero();
        };
        let mut out = num_traits::pow(o.lc(), da - dr) * o.resultant(&r);
        if da * db % 2 == 1 {
            out = -out;
        }
        out
    }

    /// Rational function `a / b` with `deg a <= num_deg`, `b(0) != 0` and
    /// `a ≡ b * self (mod x^n)`, when one exists.
    pub fn rational_reconstruct(&self, n: usize, num_deg: usize) -> Option<(UPoly, UPoly)> {
        let mut xn = vec![Q::zero(); n + 1];
        xn[n] = Q::one();
        let (mut r0, mut r1) = (UPoly::new(xn), self.truncate(n));
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::constant(Q::one()));
        while r1.degree().is_some_and(|d| d > num_deg) {
            let (q, r) = r0.divrem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        let b0 = t1.coeff(0);
        if b0.is_zero() {
            return None;
        }
        let s = b0.recip();
        Some((r1.scale(&s), t1.scale(&s)))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs = VarSet::param("x");
        write!(f, "{}", self.to_mpoly(&vs, 0))
    }
}

const PRIMES: [u64; 8] = [10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079];

/// Primes just below 2^31, descending.
pub(super) fn big_primes() -> &'static [u64] {
    static P: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    P.get_or_init(|| {
        let is_prime = |n: u64| n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0);
        (0..(1u64 << 31)).rev().filter(|&n| is_prime(n)).take(400).collect()
    })
}

fn content_int(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn divides_int(d: &[BigInt], a: &[BigInt]) -> bool {
    let q = |v: &[BigInt]| UPoly::new(v.iter().map(|c| Q::from_integer(c.clone())).collect());
    let (quot, rem) = q(a).divrem(&q(d));
    rem.is_zero() && quot.0.iter().all(|c| c.is_integer())
}

/// Gcd of two nonzero integer polynomials of positive degree: images modulo
/// word-size primes, combined by the Chinese remainder theorem until the
/// candidate stabilizes and divides both inputs. Primitive, positive leading
/// coefficient.
fn gcd_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let one = vec![BigInt::one()];
    let (ca, cb) = (content_int(a), content_int(b));
    let a: Vec<BigInt> = a.iter().map(|c| c / &ca).collect();
    let b: Vec<BigInt> = b.iter().map(|c| c / &cb).collect();
    let (la, lb) = (a.last().unwrap().clone(), b.last().unwrap().clone());
    let gamma = la.gcd(&lb);
    let mut best = a.len().min(b.len());
    let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
    let mut prev: Option<Vec<BigInt>> = None;
    for &p in big_primes() {
        let pb = BigInt::from(p);
        if (&la % &pb).is_zero() || (&lb % &pb).is_zero() {
            continue;
        }
        let g = gcd_mod(poly_mod(&a, p), poly_mod(&b, p), p);
        let d = g.len() - 1;
        if d == 0 {
            return one;
        }
        if d > best {
            continue;
        }
        if d < best {
            best = d;
            acc = None;
            prev = None;
        }
        let s = gamma.mod_floor(&pb).to_u64().unwrap() * inv_mod(*g.last().unwrap(), p) % p;
        let img: Vec<BigInt> = g.iter().map(|c| BigInt::from(c * s % p)).collect();
        let (vals, m) = match acc.take() {
            None => (img, pb),
            Some((vals, m)) => {
                let minv = BigInt::from(inv_mod((&m % &pb).to_u64().unwrap(), p));
                let vals = vals
                    .iter()
                    .zip(&img)
                    .map(|(r, x)| {
                        let k = ((x - r) * &minv).mod_floor(&pb);
                        r + &m * k
                    })
                    .collect();
                (vals, m * pb)
            }
        };
        let half = &m / 2;
        let sym: Vec<BigInt> = vals
            .iter()
            .map(|v| if v > &half { v - &m } else { v.clone() })
            .collect();
        acc = Some((vals, m));
        if prev.as_ref() == Some(&sym) {
            let c = content_int(&sym);
            let mut cand: Vec<BigInt> = sym.iter().map(|x| x / &c).collect();
            if cand.last().unwrap().is_negative() {
                cand.iter_mut().for_each(|x| *x = -&*x);
            }
            if divides_int(&cand, &a) && divides_int(&cand, &b) {
                return cand;
            }
        }
        prev = Some(sym);
    }
    // prime list exhausted; fall back to Euclid over Q
    let q = |v: &[BigInt]| UPoly::new(v.iter().map(|c| Q::from_integer(c.clone())).collect());
    q(&a).gcd_euclid(&q(&b)).to_primitive_ints()
}

fn eval_mod(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for c in a.iter().rev() {
        acc = (acc * x + c) % p;
    }
    acc
}

fn poly_mod(a: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    a.iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect()
}

fn squarefree_mod(a: &[u64], p: u64) -> bool {
    let da: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| (c * (i as u64 % p)) % p)
        .collect();
    let g = gcd_mod(a.to_vec(), da, p);
    g.len() == 1
}

fn trim_mod(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(super) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(p as i64) as u64
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let c = a.last().unwrap() * inv % p;
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + p - c * bj % p) % p;
            }
            trim_mod(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn eval_big(a: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in a.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

/// Rational roots of a squarefree integer polynomial of degree >= 2 with
/// nonzero constant term: roots mod a small prime, Newton lifting to a
/// modulus beyond the Cauchy bound, then exact verification.
fn modular_rational_roots(a: &[BigInt]) -> Vec<Q> {
    let n = a.len() - 1;
    let lead = a[n].abs();
    let mut bound = BigInt::zero();
    for c in &a[..n] {
        let q = c.abs().div_ceil(&lead);
        if q > bound {
            bound = q;
        }
    }
    bound += 1;
    let need = BigInt::from(2) * &lead * &bound + 1;
    let deriv: Vec<BigInt> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();

    for &p in &PRIMES {
        let am = poly_mod(a, p);
        if am[n] == 0 || !squarefree_mod(&am, p) {
            continue;
        }
        let mut out = Vec::new();
        for r0 in 0..p {
            if eval_mod(&am, r0, p) != 0 {
                continue;
            }
            let mut modulus = BigInt::from(p);
            let mut r = BigInt::from(r0);
            while modulus < need {
                modulus = &modulus * &modulus;
                let fr = eval_big(a, &r, &modulus);
                let dr = eval_big(&deriv, &r, &modulus);
                let inv = dr.extended_gcd(&modulus).x;
                r = (&r - fr * inv).mod_floor(&modulus);
            }
            let mut m = (&a[n] * &r).mod_floor(&modulus);
            if &m * 2 > modulus {
                m -= &modulus;
            }
            let cand = Q::new(m, a[n].clone());
            let val: Q = a
                .iter()
                .rev()
                .fold(Q::zero(), |acc, c| acc * &cand + Q::from_integer(c.clone()));
            if val.is_zero() {
                out.push(cand);
            }
        }
        return out;
    }
    // every prime divided the discriminant or leading coefficient
    brute_force_roots(a)
}

fn brute_force_roots(a: &[BigInt]) -> Vec<Q> {
    let poly = UPoly::new(a.iter().map(|c| Q::from_integer(c.clone())).collect());
    let mut out = Vec::new();
    for d in 1..=60i64 {
        for n in -200i64..=200 {
            if n.gcd(&d) != 1 {
                continue;
            }
            let x = Q::new(BigInt::from(n), BigInt::from(d));
            if poly.eval(&x).is_zero() {
                out.push(x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{q_frac, q_int};
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| q_int(x)).collect())
    }

    #[test]
    fn roots_of_product() {
        // (2x - 3)(x + 5)(x^2 + 1) x
        let p = up(&[-3, 2]).mul(&up(&[5, 1])).mul(&up(&[1, 0, 1])).mul(&up(&[0, 1]));
        assert_eq!(p.rational_roots(), vec![q_int(-5), q_int(0), q_frac(3, 2)]);
    }

    #[test]
    fn roots_with_large_coefficients() {
        let r1 = q_frac(123456789, 1000003);
        let r2 = q_frac(-77, 9);
        let p = UPoly::new(vec![-r1.clone(), q_int(1)])
            .mul(&UPoly::new(vec![-r2.clone(), q_int(1)]))
            .mul(&up(&[3, 0, 1]))
            .mul(&up(&[3, 0, 1]));
        assert_eq!(p.rational_roots(), vec![r2, r1]);
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let p = up(&[1, -2, 0, 5]);
        let c = q_frac(3, 2);
        let s = p.taylor_shift(&c);
        for k in -3..4 {
            let x = q_int(k);
            assert_eq!(s.eval(&x), p.eval(&(&x + &c)));
        }
    }

    #[test]
    fn reconstruct_geometric_series() {
        // 1/(1 - 2x) = sum 2^k x^k
        let s = UPoly::new((0..10).map(|k| q_int(1 << k)).collect());
        let (a, b) = s.rational_reconstruct(10, 4).unwrap();
        assert_eq!(a, up(&[1]));
        assert_eq!(b, up(&[1, -2]));
    }

    #[test]
    fn gcd_and_divrem() {
        let a = up(&[-1, 0, 1]);
        let b = up(&[1, 2, 1]);
        assert_eq!(a.gcd(&b), up(&[1, 1]));
        let (q, r) = a.divrem(&up(&[1, 1]));
        assert_eq!(q, up(&[-1, 1]));
        assert!(r.is_zero());
    }
}
