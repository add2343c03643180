//! Multivariate resultants from images modulo word-size primes.
//!
//! Each image is computed by evaluating the non-eliminated variables at
//! small integers, taking univariate resultants mod `p`, and interpolating;
//! images are combined by the Chinese remainder theorem until the modulus
//! exceeds twice a Hadamard bound on the coefficients.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::{big_primes, inv_mod};
use super::{MPoly, Monomial, Q};

type Exps = Vec<u32>;

/// Substituting one variable: term `i` of the input lands in slot
/// `target[i]` of the output with that variable's exponent `ydeg[i]`.
struct Level {
    target: Vec<usize>,
    ydeg: Vec<u32>,
    len: usize,
}

/// Substitution schedule for one polynomial; the final slots are indexed by
/// their degree in the eliminated variable.
struct Plan {
    levels: Vec<Level>,
    /// Degree in the eliminated variable of each slot after every level.
    vdeg: Vec<Vec<u32>>,
}

impl Plan {
    fn new(terms: &[(Exps, BigInt)], v: usize, order: &[usize]) -> Plan {
        let mut keys: Vec<Exps> = terms.iter().map(|(e, _)| e.clone()).collect();
        let mut levels = Vec::new();
        let mut vdeg = vec![keys.iter().map(|e| e[v]).collect::<Vec<u32>>()];
        for &y in order {
            let mut index: HashMap<Exps, usize> = HashMap::new();
            let mut next: Vec<Exps> = Vec::new();
            let mut target = Vec::with_capacity(keys.len());
            let mut ydeg = Vec::with_capacity(keys.len());
            for e in &keys {
                let mut k = e.clone();
                ydeg.push(std::mem::replace(&mut k[y], 0));
                let slot = *index.entry(k.clone()).or_insert_with(|| {
                    next.push(k);
                    next.len() - 1
                });
                target.push(slot);
            }
            vdeg.push(next.iter().map(|e| e[v]).collect());
            levels.push(Level {
                target,
                ydeg,
                len: next.len(),
            });
            keys = next;
        }
        Plan { levels, vdeg }
    }
}

fn eval_level(level: &Level, vals: &[u64], pows: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; level.len];
    for ((&t, &d), &x) in level.target.iter().zip(&level.ydeg).zip(vals) {
        out[t] = (out[t] + x * pows[d as usize]) % p;
    }
    out
}

fn degree_of(vals: &[u64], vdeg: &[u32]) -> Option<u32> {
    vals.iter().zip(vdeg).filter(|(x, _)| **x != 0).map(|(_, d)| *d).max()
}

/// After the last level only the eliminated variable is left, so slots
/// have distinct degrees.
fn dense_in_v(vals: &[u64], vdeg: &[u32], deg: u32) -> Vec<u64> {
    let mut out = vec![0u64; deg as usize + 1];
    for (x, d) in vals.iter().zip(vdeg) {
        out[*d as usize] = *x;
    }
    out
}

fn reduce(terms: &[(Exps, BigInt)], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    terms
        .iter()
        .map(|(_, c)| c.mod_floor(&pb).to_u64().expect("reduced below p"))
        .collect()
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Resultant of dense polynomials with nonzero leading coefficients.
fn res_dense(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> u64 {
    let mut acc = 1u64;
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            return acc * powmod(b[0], da as u64, p) % p;
        }
        let inv = inv_mod(b[db], p);
        while a.len() >= b.len() {
            let c = a[a.len() - 1] * inv % p;
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + p - c * bj % p) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                return 0;
            }
        }
        let dr = a.len() - 1;
        if (da * db) % 2 == 1 {
            acc = (p - acc) % p;
        }
        acc = acc * powmod(b[db], (da - dr) as u64, p) % p;
        std::mem::swap(&mut a, &mut b);
    }
}

struct Job<'a> {
    pa: &'a Plan,
    pb: &'a Plan,
    dp: u32,
    dq: u32,
    /// Result degree bound per level.
    bounds: &'a [usize],
    p: u64,
    /// `inv[k] = 1/k mod p` for small `k`.
    inv: &'a [u64],
}

impl Job<'_> {
    fn inverse(&self, k: u64) -> u64 {
        self.inv.get(k as usize).copied().unwrap_or_else(|| inv_mod(k, self.p))
    }
}

/// Dense image of the resultant over the variables of levels `l..`; the
/// index of exponents `(e_l, e_{l+1}, ...)` is `e_l * stride_l + ...`.
fn res_rec(job: &Job, l: usize, a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    let p = job.p;
    if l == job.bounds.len() {
        let da = degree_of(a, &job.pa.vdeg[l]).unwrap_or(0);
        let db = degree_of(b, &job.pb.vdeg[l]).unwrap_or(0);
        let r = res_dense(dense_in_v(a, &job.pa.vdeg[l], da), dense_in_v(b, &job.pb.vdeg[l], db), p);
        return Some(vec![r]);
    }
    let (la, lb) = (&job.pa.levels[l], &job.pb.levels[l]);
    let need = job.bounds[l] + 1;
    let max_d = la.ydeg.iter().chain(&lb.ydeg).copied().max().unwrap_or(0) as usize;
    let mut xs: Vec<u64> = Vec::with_capacity(need);
    let mut vals: Vec<Vec<u64>> = Vec::with_capacity(need);
    let mut pows = vec![1u64; max_d + 1];
    for c in 0..p {
        if xs.len() == need {
            break;
        }
        for i in 1..=max_d {
            pows[i] = pows[i - 1] * c % p;
        }
        let ac = eval_level(la, a, &pows, p);
        let bc = eval_level(lb, b, &pows, p);
        if degree_of(&ac, &job.pa.vdeg[l + 1]) != Some(job.dp) || degree_of(&bc, &job.pb.vdeg[l + 1]) != Some(job.dq) {
            continue;
        }
        vals.push(res_rec(job, l + 1, &ac, &bc)?);
        xs.push(c);
    }
    if xs.len() < need {
        return None;
    }
    let inner = vals[0].len();
    let mut out = vec![0u64; need * inner];
    let mut col = vec![0u64; need];
    for j in 0..inner {
        for (i, v) in vals.iter().enumerate() {
            col[i] = v[j];
        }
        let coeffs = newton_to_monomial(job, &xs, &mut col);
        for (e, c) in coeffs.iter().enumerate() {
            out[e * inner + j] = *c;
        }
    }
    Some(out)
}

/// Coefficients (low to high) of the interpolant through `(xs[i], ys[i])`.
fn newton_to_monomial(job: &Job, xs: &[u64], ys: &mut [u64]) -> Vec<u64> {
    let p = job.p;
    let n = xs.len();
    for j in 1..n {
        for i in (j..n).rev() {
            let d = (ys[i] + p - ys[i - 1]) % p;
            ys[i] = d * job.inverse(xs[i] - xs[i - j]) % p;
        }
    }
    let mut acc = vec![0u64; n];
    acc[0] = ys[n - 1];
    let mut len = 1;
    for i in (0..n - 1).rev() {
        // acc = acc * (y - xs[i]) + ys[i]
        let m = (p - xs[i] % p) % p;
        for k in (0..=len).rev() {
            let hi = if k > 0 { acc[k - 1] } else { 0 };
            let lo = if k < len { acc[k] * m % p } else { 0 };
            acc[k] = (hi + lo) % p;
        }
        len += 1;
        acc[0] = (acc[0] + ys[i]) % p;
    }
    acc
}

fn small_inverses(n: usize, p: u64) -> Vec<u64> {
    let mut inv = vec![0u64; n.max(2)];
    inv[1] = 1;
    for i in 2..inv.len() {
        let i64_ = i as u64;
        inv[i] = (p - (p / i64_) * inv[(p % i64_) as usize] % p) % p;
    }
    inv
}

/// Integer terms of the integer-primitive multiple, and the factor used.
fn integer_terms(a: &MPoly) -> (Vec<(Exps, BigInt)>, Q) {
    let ip = a.integer_primitive();
    let factor = ip.lc() / a.lc();
    let terms = ip
        .terms()
        .map(|(m, c)| (m.exps().to_vec(), c.numer().clone()))
        .collect();
    (terms, factor)
}

/// Bits of `sqrt(sum_i ||a_i||_1^2)` over the coefficients `a_i` in `vars[v]`.
fn norm_bits(terms: &[(Exps, BigInt)], v: usize) -> u64 {
    let mut by_deg: HashMap<u32, BigInt> = HashMap::new();
    for (e, c) in terms {
        *by_deg.entry(e[v]).or_insert_with(BigInt::zero) += c.abs();
    }
    let sum: BigInt = by_deg.values().map(|n| n * n).sum();
    sum.bits() / 2 + 1
}

/// `res_v(a, b)` for `deg_v a, deg_v b >= 1`.
pub(super) fn resultant(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let vars = a.vars().clone();
    let n = vars.arity();
    let (ta, fa) = integer_terms(a);
    let (tb, fb) = integer_terms(b);
    let (dp, dq) = (a.degree_in(v), b.degree_in(v));
    let bound = |w: usize| (dq * a.degree_in(w) + dp * b.degree_in(w)) as usize;
    let mut order: Vec<usize> = (0..n).filter(|&w| w != v && (a.depends_on(w) || b.depends_on(w))).collect();
    // substitute the variables with the smallest bounds first
    order.sort_by_key(|&w| bound(w));
    let bounds: Vec<usize> = order.iter().map(|&w| bound(w)).collect();
    let (plan_a, plan_b) = (Plan::new(&ta, v, &order), Plan::new(&tb, v, &order));
    let need_bits = u64::from(dq) * norm_bits(&ta, v) + u64::from(dp) * norm_bits(&tb, v) + 2;
    let max_bound = bounds.iter().copied().max().unwrap_or(0);

    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    for &p in big_primes() {
        if modulus.bits() > need_bits {
            break;
        }
        let (am, bm) = (reduce(&ta, p), reduce(&tb, p));
        if degree_of(&am, &plan_a.vdeg[0]) != Some(dp) || degree_of(&bm, &plan_b.vdeg[0]) != Some(dq) {
            continue;
        }
        let inv = small_inverses(2 * max_bound + 64, p);
        let job = Job {
            pa: &plan_a,
            pb: &plan_b,
            dp,
            dq,
            bounds: &bounds,
            p,
            inv: &inv,
        };
        let Some(img) = res_rec(&job, 0, &am, &bm) else {
            continue;
        };
        if residues.is_empty() {
            residues = vec![BigInt::zero(); img.len()];
        }
        let pb = BigInt::from(p);
        let minv = BigInt::from(inv_mod((&modulus % &pb).to_u64().expect("below p"), p));
        for (r, &x) in residues.iter_mut().zip(&img) {
            let t = ((BigInt::from(x) - &*r) * &minv).mod_floor(&pb);
            if !t.is_zero() {
                *r += &modulus * t;
            }
        }
        modulus *= pb;
    }
    assert!(modulus.bits() > need_bits, "prime list exhausted");
    let half = &modulus >> 1;
    let scale = fa.pow(-(dq as i32)) * fb.pow(-(dp as i32));
    let strides: Vec<usize> = (0..bounds.len())
        .map(|l| bounds[l + 1..].iter().map(|b| b + 1).product())
        .collect();
    let terms = residues.into_iter().enumerate().filter(|(_, r)| !r.is_zero()).map(|(idx, r)| {
        let mut e = vec![0u32; n];
        for (l, &w) in order.iter().enumerate() {
            e[w] = ((idx / strides[l]) % (bounds[l] + 1)) as u32;
        }
        let r = if r > half { r - &modulus } else { r };
        (Monomial::from_exps(e), Q::from_integer(r) * &scale)
    });
    MPoly::from_terms(&vars, terms.collect::<Vec<_>>())
}
