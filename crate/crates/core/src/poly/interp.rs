//! Gcds by evaluation at integer points and dense Newton
//! interpolation, one variable at a time, bottoming out in univariate
//! arithmetic.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::upoly::UPoly;
use super::{q_int, MPoly, Monomial, Q};

/// Integer nodes 0, 1, -1, 2, -2, ...
fn nodes() -> impl Iterator<Item = Q> {
    (0i64..).map(|k| {
        let m = (k + 1) / 2;
        q_int(if k % 2 == 1 { m } else { -m })
    })
}

fn to_upoly(p: &MPoly, v: usize) -> UPoly {
    UPoly::from_mpoly(p, v).expect("univariate")
}

/// Polynomial in `y` through `(xs[i], values[i])`.
fn newton_interpolate(y: usize, xs: &[Q], values: Vec<MPoly>) -> MPoly {
    let n = xs.len();
    let vars = values[0].vars().clone();
    let mut c = values;
    for j in 1..n {
        for i in (j..n).rev() {
            let d = (&xs[i] - &xs[i - j]).recip();
            c[i] = (&c[i] - &c[i - 1]).scale(&d);
        }
    }
    let ym = Monomial::var(vars.arity(), y, 1);
    let mut acc = c[n - 1].clone();
    for i in (0..n - 1).rev() {
        acc = &(&acc.shift(&ym) - &acc.scale(&xs[i])) + &c[i];
    }
    acc
}

/// Split into coefficients in `y` indexed by the remaining monomial.
fn by_rest(p: &MPoly, y: usize) -> BTreeMap<Monomial, UPoly> {
    let mut groups: BTreeMap<Monomial, Vec<Q>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut key = m.exps().to_vec();
        let e = key[y] as usize;
        key[y] = 0;
        let g = groups.entry(Monomial::from_exps(key)).or_default();
        if g.len() <= e {
            g.resize(e + 1, Q::zero());
        }
        g[e] = c.clone();
    }
    groups.into_iter().map(|(k, v)| (k, UPoly::new(v))).collect()
}

/// Content in `Q[y]` of `p` viewed over the other variables.
fn content_in(p: &MPoly, y: usize) -> UPoly {
    let mut g = UPoly::zero();
    for c in by_rest(p, y).values() {
        g = g.gcd(c);
        if g.degree() == Some(0) {
            break;
        }
    }
    g
}

/// Leading monomial and `Q[y]` coefficient with respect to the other variables.
fn lead_in(p: &MPoly, y: usize) -> (Monomial, UPoly) {
    by_rest(p, y).into_iter().next_back().expect("nonzero")
}

/// Gcd up to a constant when `a` and `b` are nonzero and both involve every
/// variable of `live` (at least two); `None` if the node budget runs out.
pub(super) fn gcd(a: &MPoly, b: &MPoly, live: &[usize]) -> Option<MPoly> {
    let vars = a.vars().clone();
    if live.len() == 1 {
        let x = live[0];
        return Some(to_upoly(a, x).gcd(&to_upoly(b, x)).to_mpoly(&vars, x));
    }
    // interpolate the variable of lowest degree, keep the rest for recursion
    let y = *live
        .iter()
        .min_by_key(|&&w| (a.degree_in(w).max(b.degree_in(w)), std::cmp::Reverse(w)))
        .unwrap();
    let rest: Vec<usize> = live.iter().copied().filter(|&w| w != y).collect();

    let (ca, cb) = (content_in(a, y), content_in(b, y));
    let cont = ca.gcd(&cb).to_mpoly(&vars, y);
    let a = a.exact_div(&ca.to_mpoly(&vars, y)).expect("content divides");
    let b = b.exact_div(&cb.to_mpoly(&vars, y)).expect("content divides");
    let (la, lb) = (lead_in(&a, y).1, lead_in(&b, y).1);
    let gamma = la.gcd(&lb).scale(&la.lc());
    let bound = a.degree_in(y).min(b.degree_in(y)) as usize + gamma.degree().unwrap_or(0);

    let mut best: Option<Monomial> = None;
    let mut xs: Vec<Q> = Vec::new();
    let mut vals: Vec<MPoly> = Vec::new();
    for c in nodes().take(4 * bound + 40) {
        let gc = gamma.eval(&c);
        if gc.is_zero() || la.eval(&c).is_zero() || lb.eval(&c).is_zero() {
            continue;
        }
        let (ac, bc) = (a.eval_var(y, &c), b.eval_var(y, &c));
        let live_c: Vec<usize> = rest.iter().copied().filter(|&w| ac.depends_on(w) && bc.depends_on(w)).collect();
        let img = if live_c.is_empty() {
            MPoly::one(&vars)
        } else if live_c.len() < rest.len() {
            // a variable dropped out of one image: its gcd lives in fewer variables
            super::gcd::gcd(&ac, &bc)
        } else {
            gcd(&ac, &bc, &live_c)?
        };
        if img.is_constant() {
            return Some(cont);
        }
        let (lm, lc) = img.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        match &best {
            Some(b) if &lm > b => continue,
            Some(b) if &lm < b => {
                xs.clear();
                vals.clear();
            }
            _ => {}
        }
        best = Some(lm);
        vals.push(img.scale(&(gc / lc)));
        xs.push(c);
        if xs.len() > bound {
            let h = newton_interpolate(y, &xs, vals.clone());
            let hc = content_in(&h, y).to_mpoly(&vars, y);
            let h = h.exact_div(&hc).expect("content divides");
            if a.exact_div(&h).is_some() && b.exact_div(&h).is_some() {
                return Some(&cont * &h);
            }
            // an undetected unlucky node: start over from later nodes
            xs.clear();
            vals.clear();
            best = None;
        }
    }
    None
}
