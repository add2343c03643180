//! Rational-function roots of `F(w, y) = sum cw[i](w) y^i` through a simple
//! root `y(0) = r`, computed modulo word-sized primes: Newton lifting of the
//! power series, Padé approximation, then Chinese remaindering and rational
//! reconstruction of the coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::{big_primes, inv_mod, UPoly};
use super::Q;

/// Result of [`lift`].
#[derive(Clone, Debug, PartialEq)]
pub enum Lift {
    /// No rational root of the requested degrees passes through `r`.
    RuledOut,
    /// Numerator and denominator, `b(0) = 1`; still to be confirmed exactly.
    Candidate(UPoly, UPoly),
    /// The modular images were inconclusive.
    Unknown,
}

enum Image {
    Unusable,
    RuledOut,
    Found(Vec<u64>, Vec<u64>),
}

const MAX_PRIMES: usize = 24;

fn q_mod(c: &Q, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = c.denom().mod_floor(&pb).to_u64()?;
    (d != 0).then(|| c.numer().mod_floor(&pb).to_u64().unwrap() * inv_mod(d, p) % p)
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mul(a: &[u64], b: &[u64], k: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; k.min(a.len() + b.len()).max(1)];
    for (i, x) in a.iter().enumerate().take(k) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(k - i) {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p;
    }
    out
}

fn neg(a: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|x| (p - x) % p).collect()
}

fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len().saturating_sub(b.len()) + 1];
    let inv = inv_mod(*b.last().unwrap(), p);
    while r.len() >= b.len() && !r.is_empty() {
        let c = r[r.len() - 1] * inv % p;
        let s = r.len() - b.len();
        q[s] = c;
        for (j, bj) in b.iter().enumerate() {
            r[s + j] = (r[s + j] + p - c * bj % p) % p;
        }
        r = trim(r);
    }
    (q, r)
}

/// Series inverse of `a` to `k` terms; `a[0]` must be nonzero.
fn series_inv(a: &[u64], k: usize, p: u64) -> Vec<u64> {
    let mut inv = vec![inv_mod(a[0], p)];
    let mut prec = 1;
    while prec < k {
        prec = (2 * prec).min(k);
        let mut e = neg(&mul(a, &inv, prec, p), p);
        e[0] = (e[0] + 2) % p;
        inv = mul(&inv, &e, prec, p);
    }
    inv
}

fn image(cw: &[UPoly], r: &Q, n: usize, deg: usize, p: u64) -> Image {
    let Some(cw) = cw
        .iter()
        .map(|c| c.coeffs().iter().map(|x| q_mod(x, p)).collect::<Option<Vec<u64>>>())
        .collect::<Option<Vec<Vec<u64>>>>()
    else {
        return Image::Unusable;
    };
    let Some(r) = q_mod(r, p) else { return Image::Unusable };
    let eval = |y: &[u64], k: usize| -> (Vec<u64>, Vec<u64>) {
        let (mut val, mut der) = (vec![0u64], vec![0u64]);
        for c in cw.iter().rev() {
            der = add(&mul(&der, y, k, p), &val, p);
            let c: Vec<u64> = c.iter().take(k).copied().collect();
            val = add(&mul(&val, y, k, p), &c, p);
        }
        (val, der)
    };
    let mut y = vec![r];
    let mut prec = 1;
    while prec < n {
        prec = (2 * prec).min(n);
        let (val, der) = eval(&y, prec);
        if der[0] == 0 {
            return Image::Unusable;
        }
        let step = mul(&val, &series_inv(&der, prec, p), prec, p);
        y = add(&y, &neg(&step, p), p);
        y.resize(prec, 0);
    }
    // Padé: extended Euclid on (w^n, y)
    let mut xn = vec![0u64; n + 1];
    xn[n] = 1;
    let (mut r0, mut r1) = (xn, trim(y));
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while r1.len() > deg + 1 {
        let (q, r) = divrem(&r0, &r1, p);
        let t = trim(add(&t0, &neg(&mul(&q, &t1, q.len() + t1.len(), p), p), p));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.len() > deg + 1 || t1.first().copied().unwrap_or(0) == 0 {
        return Image::RuledOut;
    }
    let s = inv_mod(t1[0], p);
    let (a, b): (Vec<u64>, Vec<u64>) = (r1.iter().map(|x| x * s % p).collect(), t1.iter().map(|x| x * s % p).collect());
    // F(a/b) b^du == 0
    let du = cw.len() - 1;
    let full = usize::MAX / 4;
    let (mut apow, mut bpow) = (vec![vec![1u64]], vec![vec![1u64]]);
    for _ in 0..du {
        apow.push(mul(apow.last().unwrap(), &a, full, p));
        bpow.push(mul(bpow.last().unwrap(), &b, full, p));
    }
    let mut total = vec![0u64];
    for (i, c) in cw.iter().enumerate() {
        total = add(&total, &mul(&mul(c, &apow[i], full, p), &bpow[du - i], full, p), p);
    }
    if total.iter().any(|x| *x != 0) {
        return Image::RuledOut;
    }
    Image::Found(a, b)
}

/// Smallest-height fraction congruent to `x` modulo `m`.
fn reconstruct_scalar(x: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = m.sqrt() / BigInt::from(2);
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        let s = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (!s1.is_zero() && s1.abs() <= bound && r1.gcd(&s1).is_one()).then(|| Q::new(r1, s1))
}

fn reconstruct(coeffs: &[BigInt], m: &BigInt) -> Option<UPoly> {
    coeffs.iter().map(|c| reconstruct_scalar(c, m)).collect::<Option<Vec<Q>>>().map(UPoly::new)
}

/// Rational-function root `a / b` through `y(0) = r`, with numerator and
/// denominator degree at most `deg`, where `r` is a simple root of `F(0, y)`
/// and `n = 2 deg + 2` series terms are used for the Padé step.
pub fn lift(cw: &[UPoly], r: &Q, n: usize, deg: usize) -> Lift {
    let mut modulus = BigInt::one();
    let mut acc: Option<(Vec<BigInt>, Vec<BigInt>)> = None;
    let mut previous: Option<(UPoly, UPoly)> = None;
    for &p in big_primes().iter().skip(7).take(MAX_PRIMES) {
        let (a, b) = match image(cw, r, n, deg, p) {
            Image::Unusable => continue,
            Image::RuledOut if acc.is_none() => return Lift::RuledOut,
            Image::RuledOut => return Lift::Unknown,
            Image::Found(a, b) => (a, b),
        };
        let pb = BigInt::from(p);
        let merged: (Vec<BigInt>, Vec<BigInt>) = match acc.take() {
            None => (a.iter().map(|&x| BigInt::from(x)).collect(), b.iter().map(|&x| BigInt::from(x)).collect()),
            Some((ca, cb)) => {
                if ca.len() != a.len() || cb.len() != b.len() {
                    // degree drop at one of the primes
                    return Lift::Unknown;
                }
                let m_inv = BigInt::from(inv_mod((&modulus % &pb).to_u64().unwrap(), p));
                let crt = |old: &BigInt, new: u64| -> BigInt {
                    let diff = (BigInt::from(new) - old).mod_floor(&pb);
                    old + &modulus * ((diff * &m_inv) % &pb)
                };
                (
                    ca.iter().zip(&a).map(|(o, &x)| crt(o, x)).collect(),
                    cb.iter().zip(&b).map(|(o, &x)| crt(o, x)).collect(),
                )
            }
        };
        modulus *= &pb;
        let attempt = reconstruct(&merged.0, &modulus).zip(reconstruct(&merged.1, &modulus));
        acc = Some(merged);
        if let Some(now) = attempt {
            if previous.as_ref() == Some(&now) {
                return Lift::Candidate(now.0, now.1);
            }
            previous = Some(now);
        }
    }
    Lift::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    #[test]
    fn lifts_a_rational_branch() {
        // (1 + w) y - (3 + 2w^2) times (y - 5), root at w = 0 is y = 3
        let lin = [up(&[-3, 0, -2]), up(&[1, 1])];
        let other = [up(&[-5]), up(&[1])];
        let prod = vec![
            lin[0].mul(&other[0]),
            lin[0].mul(&other[1]).add(&lin[1].mul(&other[0])),
            lin[1].mul(&other[1]),
        ];
        let got = lift(&prod, &Q::from_integer(3.into()), 6, 2);
        assert_eq!(got, Lift::Candidate(up(&[3, 0, 2]), up(&[1, 1])));
    }

    #[test]
    fn rules_out_an_algebraic_branch() {
        // y^2 - (1 + w) has the non-rational branch sqrt(1 + w) through 1
        let f = [up(&[-1, -1]), up(&[0]), up(&[1])];
        assert_eq!(lift(&f, &Q::one(), 6, 2), Lift::RuledOut);
    }

    #[test]
    fn reconstructs_scalars() {
        let m = BigInt::from(1_000_003u64);
        let x = Q::new((-7).into(), 12.into());
        let img = (x.numer() * BigInt::from(inv_mod(12, 1_000_003))).mod_floor(&m);
        assert_eq!(reconstruct_scalar(&img, &m), Some(x));
    }
}
