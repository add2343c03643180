//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose ordering is the
//! global graded-lexicographic order with earlier variables ranking higher
//! (x1 > x2 > x3 > t1 > t2 in the usual layouts). Iterating the map in
//! reverse therefore yields terms in canonical descending order.

mod gcd;
mod interp;
mod modular;
pub mod linalg;
mod psi;
mod ratfn;
pub mod rootlift;
pub mod upoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use gcd::{content_primitive, gcd, gcd_many, resultant, resultant_prs, squarefree_part};
pub use psi::{psi_decompose_core, PsiCore, PsiDecomposition};
pub use ratfn::{substitute, Binding, RatFn};

/// Exact rational coefficient.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable sets differ: [{0}] vs [{1}]")]
    VarMismatch(String, String),
    #[error("invalid variable set: {0}")]
    BadVarSet(String),
    #[error("variable index {0} out of range for arity {1}")]
    BadIndex(usize, usize),
    #[error("resultant undefined: both polynomials are constant in {0}")]
    BothConstant(String),
    #[error("squarefree part of the zero polynomial")]
    ZeroInput,
    #[error("binding for {0} has an identically zero denominator")]
    ZeroDenominator(String),
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("variable {0} is not bound and does not exist in the target variable set")]
    UnboundVariable(String),
}

/// Ordered list of variable names. Identity is positional; names are for
/// display and parsing only.
#[derive(Clone, Debug)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(PolyError::BadVarSet("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::BadVarSet(format!("duplicate variable {n}")));
            }
        }
        Ok(VarSet(names.into()))
    }

    /// `x1, x2, x3`.
    pub fn space() -> Self {
        VarSet::new(["x1", "x2", "x3"]).unwrap()
    }

    /// Single parameter.
    pub fn param(name: &str) -> Self {
        VarSet::new([name]).unwrap()
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// Concatenation; fails on duplicate names.
    pub fn extend<S: Into<String>>(&self, more: impl IntoIterator<Item = S>) -> Result<Self, PolyError> {
        VarSet::new(self.0.iter().cloned().chain(more.into_iter().map(Into::into)))
    }

    fn describe(&self) -> String {
        self.0.join(",")
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for VarSet {}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize, e: u32) -> Self {
        let mut m = vec![0; arity];
        m[i] = e;
        Monomial(m)
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Sparse polynomial over `Q` in the variables of a [`VarSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Q>,
}

pub(crate) fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[cfg(test)]
pub(crate) fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

impl MPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn constant(vars: &VarSet, c: Q) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.arity()), c);
        }
        p
    }

    pub fn from_int(vars: &VarSet, c: i64) -> Self {
        Self::constant(vars, q_int(c))
    }

    /// The variable `vars[i]`.
    pub fn var(vars: &VarSet, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.arity(), i, 1), Q::one())
    }

    pub fn monomial(vars: &VarSet, m: Monomial, c: Q) -> Self {
        assert_eq!(m.0.len(), vars.arity(), "monomial arity");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &VarSet, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.arity()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (`0` for the zero polynomial).
    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    /// Leading coefficient under graded lex, zero for the zero polynomial.
    pub fn lc(&self) -> Q {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).min().unwrap_or(0)
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Indices of variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.arity()).filter(|&v| self.depends_on(v)).collect()
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch(self.vars.describe(), other.vars.describe()))
        }
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_same(other)?;
        let (mut big, small) = if self.nterms() >= other.nterms() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        Ok(big)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_same(other)?;
        let mut out = MPoly::zero(&self.vars);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &Q) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiply by a monomial.
    pub fn shift(&self, m: &Monomial) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: usize) -> Result<MPoly, PolyError> {
        if v >= self.arity() {
            return Err(PolyError::BadIndex(v, self.arity()));
        }
        let mut out = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[v] -= 1;
                out.terms.insert(m2, c * q_int(e as i64));
            }
        }
        Ok(out)
    }

    /// Coefficients of `self` as a polynomial in `vars[v]`; entry `i` is the
    /// coefficient of `v^i`, living in the same variable set with no `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(&self.vars); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            let e = m.0[v] as usize;
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out[e].terms.insert(m2, c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(vars: &VarSet, v: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(vars);
        for (i, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut m2 = m.clone();
                m2.0[v] += i as u32;
                out.add_term(m2, a.clone());
            }
        }
        out
    }

    /// Substitute the rational value `c` for `vars[v]`; the variable stays in
    /// the set but no longer occurs.
    pub fn eval_var(&self, v: usize, c: &Q) -> MPoly {
        let mut out = MPoly::zero(&self.vars);
        let d = self.degree_in(v) as usize;
        let mut pows = Vec::with_capacity(d + 1);
        pows.push(Q::one());
        for i in 1..=d {
            let next = &pows[i - 1] * c;
            pows.push(next);
        }
        for (m, a) in &self.terms {
            let e = m.0[v] as usize;
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out.add_term(m2, a * &pows[e]);
        }
        out
    }

    /// Evaluate at a full rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.arity());
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Move into `target`, sending variable `i` to `target[map[i]]`.
    pub fn remap(&self, target: &VarSet, map: &[usize]) -> MPoly {
        assert_eq!(map.len(), self.arity());
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.arity()];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Same polynomial over a different variable set of equal arity.
    pub fn rename(&self, target: &VarSet) -> MPoly {
        assert_eq!(target.arity(), self.arity());
        MPoly {
            vars: target.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MPoly::zero(&self.vars));
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.checked_div(&dm)?;
            let qc = rc / &dc;
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    /// Scale so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    /// Scale to integer coefficients with gcd 1 and positive leading coefficient.
    pub fn integer_primitive(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut factor = Q::new(den, num);
        if self.lc().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// True when `self = c * other` for some nonzero rational `c`.
    pub fn is_associate(&self, other: &MPoly) -> bool {
        if self.vars != other.vars || self.nterms() != other.nterms() {
            return false;
        }
        if self.is_zero() {
            return other.is_zero();
        }
        self.monic() == other.monic()
    }

    pub fn from_integer_coeffs(vars: &VarSet, terms: &[(i64, &[u32])]) -> MPoly {
        MPoly::from_terms(
            vars,
            terms
                .iter()
                .map(|(c, e)| (Monomial(e.to_vec()), q_int(*c))),
        )
    }
}

/// Apply `op` to two polynomials over the same variable set.
pub fn arith(op: ArithOp, p: &MPoly, q: &MPoly) -> Result<MPoly, PolyError> {
    match op {
        ArithOp::Add => p.try_add(q),
        ArithOp::Sub => p.try_sub(q),
        ArithOp::Mul => p.try_mul(q),
    }
}

// Operator forms panic on mismatched variable sets; use `arith` / `try_*`
// when the inputs are not known to agree.
impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.try_add(rhs).expect("add")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.try_sub(rhs).expect("sub")
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.try_mul(rhs).expect("mul")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Q::one())
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

pub(crate) fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: descending graded lex, explicit `*`, `^` for powers.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(fmt_q(&a));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp() -> VarSet {
        VarSet::space()
    }

    fn x(i: usize) -> MPoly {
        MPoly::var(&sp(), i)
    }

    #[test]
    fn additive_inverse() {
        let p = x(0);
        assert!(arith(ArithOp::Add, &p, &-&p).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x(0) + &x(1)) * &(&x(0) - &x(1));
        let want = &x(0).pow(2) - &x(1).pow(2);
        assert_eq!(p, want);
    }

    #[test]
    fn pow_one_is_identity() {
        let p = &x(1).scale(&q_int(2)) - &x(0).scale(&q_int(2));
        assert_eq!(p.pow(1), p);
        assert_eq!(p.to_string(), "-2*x1+2*x2");
    }

    #[test]
    fn mismatched_varsets_rejected() {
        let t = MPoly::var(&VarSet::param("t"), 0);
        assert!(matches!(
            arith(ArithOp::Mul, &x(0), &t),
            Err(PolyError::VarMismatch(..))
        ));
    }

    #[test]
    fn derivatives() {
        // x3 + 5x1^2 - 6x1x2 + 2x2^2
        let f = &(&(&x(2) + &x(0).pow(2).scale(&q_int(5))) - &(&x(0) * &x(1)).scale(&q_int(6)))
            + &x(1).pow(2).scale(&q_int(2));
        let want = &x(0).scale(&q_int(10)) - &x(1).scale(&q_int(6));
        assert_eq!(f.diff(0).unwrap(), want);
        assert!(MPoly::from_int(&sp(), 7).diff(2).unwrap().is_zero());
        assert_eq!((&x(0).pow(3) * &x(1)).diff(1).unwrap(), x(0).pow(3));
        assert!(f.diff(3).is_err());
    }

    #[test]
    fn varset_validation() {
        assert!(VarSet::new(["a", "a"]).is_err());
        assert!(VarSet::new(["a", ""]).is_err());
        assert_eq!(VarSet::space().index_of("x3"), Some(2));
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![0, 0, 2]);
        let b = Monomial(vec![1, 0, 0]);
        let c = Monomial(vec![0, 1, 1]);
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial(vec![1, 1, 0]) > c);
    }

    #[test]
    fn exact_division() {
        let a = &x(0) + &x(1);
        let b = &x(0) - &x(2);
        let p = &a * &b;
        assert_eq!(p.exact_div(&a).unwrap(), b);
        assert!(p.exact_div(&(&x(0) + &MPoly::one(&sp()))).is_none());
    }

    #[test]
    fn coeff_roundtrip() {
        let p = &(&x(0).pow(2) * &x(2)) + &(&x(1) * &x(2).pow(3));
        let cs = p.coeffs_in(2);
        assert_eq!(cs.len(), 4);
        assert_eq!(MPoly::from_coeffs_in(&sp(), 2, &cs), p);
    }
}
