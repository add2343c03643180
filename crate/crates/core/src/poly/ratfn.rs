use std::fmt;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::{MPoly, PolyError, VarSet, Q};

/// Reduced rational function: `gcd(num, den)` is constant and `den` has
/// graded-lex leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    num: MPoly,
    den: MPoly,
}

impl RatFn {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        assert!(num.vars() == den.vars(), "RatFn parts over different variable sets");
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = MPoly::one(p.vars());
        RatFn { num: p, den }
    }

    pub fn constant(vars: &VarSet, c: Q) -> Self {
        Self::from_poly(MPoly::constant(vars, c))
    }

    pub fn zero(vars: &VarSet) -> Self {
        Self::from_poly(MPoly::zero(vars))
    }

    pub fn var(vars: &VarSet, i: usize) -> Self {
        Self::from_poly(MPoly::var(vars, i))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero(den.vars());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.lc().recip();
        RatFn {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    /// Re-run reduction; the identity on reduced values.
    pub fn reduced(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn vars(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_constant() {
            Some(self.num.constant_value()? / self.den.constant_value()?)
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        if self.den == other.den {
            return Self::reduce(&self.num + &other.num, self.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::reduce(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        Self::reduce(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn, PolyError> {
        if other.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn scale(&self, c: &Q) -> RatFn {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn diff(&self, v: usize) -> Result<RatFn, PolyError> {
        let dn = self.num.diff(v)?;
        let dd = self.den.diff(v)?;
        if dd.is_zero() {
            return Ok(Self::reduce(dn, self.den.clone()));
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Ok(Self::reduce(num, self.den.pow(2)))
    }

    /// Value at a rational point, `None` where the denominator vanishes.
    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn rename(&self, target: &VarSet) -> RatFn {
        RatFn {
            num: self.num.rename(target),
            den: self.den.rename(target),
        }
    }

    pub fn remap(&self, target: &VarSet, map: &[usize]) -> RatFn {
        RatFn {
            num: self.num.remap(target, map),
            den: self.den.remap(target, map),
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Value assigned to one variable by [`substitute`].
#[derive(Clone, Debug)]
pub enum Binding {
    Value(Q),
    Func(RatFn),
}

/// Compose `p` with the given bindings. `bindings[i]` replaces variable `i`
/// of `p`; `None` passes the variable through to the equally named variable
/// of `target`. Function bindings must live over `target`.
pub fn substitute(p: &MPoly, bindings: &[Option<Binding>], target: &VarSet) -> Result<RatFn, PolyError> {
    let n = p.arity();
    if bindings.len() != n {
        return Err(PolyError::BadIndex(bindings.len(), n));
    }
    let mut parts: Vec<(MPoly, MPoly)> = Vec::with_capacity(n);
    for (i, b) in bindings.iter().enumerate() {
        let name = p.vars().name(i);
        parts.push(match b {
            Some(Binding::Value(c)) => (MPoly::constant(target, c.clone()), MPoly::one(target)),
            Some(Binding::Func(r)) => {
                if r.vars() != target {
                    return Err(PolyError::VarMismatch(
                        r.vars().names().join(","),
                        target.names().join(","),
                    ));
                }
                if r.den().is_zero() {
                    return Err(PolyError::ZeroDenominator(name.to_string()));
                }
                (r.num().clone(), r.den().clone())
            }
            None => {
                let j = target
                    .index_of(name)
                    .ok_or_else(|| PolyError::UnboundVariable(name.to_string()))?;
                (MPoly::var(target, j), MPoly::one(target))
            }
        });
    }
    let degs: Vec<usize> = (0..n).map(|i| p.degree_in(i) as usize).collect();
    let powers = |base: &MPoly, d: usize| -> Vec<MPoly> {
        let mut v = vec![MPoly::one(target)];
        for k in 1..=d {
            let next = &v[k - 1] * base;
            v.push(next);
        }
        v
    };
    let num_pows: Vec<Vec<MPoly>> = (0..n).map(|i| powers(&parts[i].0, degs[i])).collect();
    let den_pows: Vec<Option<Vec<MPoly>>> = (0..n)
        .map(|i| {
            if parts[i].1.is_one() {
                None
            } else {
                Some(powers(&parts[i].1, degs[i]))
            }
        })
        .collect();

    let mut num = MPoly::zero(target);
    for (m, c) in p.terms() {
        let mut t = MPoly::constant(target, c.clone());
        for i in 0..n {
            let e = m.exps()[i] as usize;
            if e > 0 {
                t = &t * &num_pows[i][e];
            }
            if let Some(dp) = &den_pows[i] {
                if degs[i] > e {
                    t = &t * &dp[degs[i] - e];
                }
            }
        }
        num = &num + &t;
    }
    let mut den = MPoly::one(target);
    for i in 0..n {
        if let Some(dp) = &den_pows[i] {
            den = &den * &dp[degs[i]];
        }
    }
    if den.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    Ok(RatFn::reduce(num, den))
}

impl RatFn {
    /// Compose with the given bindings, see [`substitute`].
    pub fn substitute(&self, bindings: &[Option<Binding>], target: &VarSet) -> Result<RatFn, PolyError> {
        let n = substitute(&self.num, bindings, target)?;
        let d = substitute(&self.den, bindings, target)?;
        n.div(&d)
    }
}

impl From<MPoly> for RatFn {
    fn from(p: MPoly) -> Self {
        RatFn::from_poly(p)
    }
}

impl RatFn {
    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Q::one())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{q_frac, q_int};
    use super::*;

    #[test]
    fn substitute_cancels() {
        let sp = VarSet::space();
        let t = VarSet::param("t");
        let p = &MPoly::var(&sp, 0) + &MPoly::var(&sp, 1);
        let tt = RatFn::var(&t, 0);
        let r = substitute(&p, &[Some(Binding::Func(tt.clone())), Some(Binding::Func(tt.neg())), Some(Binding::Value(q_int(0)))], &t).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn substitute_reciprocal() {
        let sp = VarSet::param("x1");
        let t = VarSet::param("t");
        let inv = RatFn::new(MPoly::one(&t), MPoly::var(&t, 0)).unwrap();
        let r = substitute(&MPoly::var(&sp, 0).pow(2), &[Some(Binding::Func(inv))], &t).unwrap();
        assert!(r.num().is_one());
        assert_eq!(r.den(), &MPoly::var(&t, 0).pow(2));
    }

    #[test]
    fn reduction_normalizes_sign_and_scale() {
        let t = VarSet::param("t");
        let x = MPoly::var(&t, 0);
        let r = RatFn::new(x.scale(&q_int(4)), x.pow(2).scale(&q_int(-2))).unwrap();
        assert_eq!(r.num(), &MPoly::from_int(&t, -2));
        assert_eq!(r.den(), &x);
        assert_eq!(r.reduced(), r);
        assert_eq!(r.eval(&[q_int(4)]), Some(q_frac(-1, 2)));
        assert_eq!(r.eval(&[q_int(0)]), None);
    }

    #[test]
    fn zero_denominator_rejected() {
        let t = VarSet::param("t");
        assert!(RatFn::new(MPoly::one(&t), MPoly::zero(&t)).is_err());
    }
}
