//! Splitting `H(x, t)` into an `x`-only content, a `t`-only content and the
//! primitive mixed part that carries the curve information.

use super::gcd::{content_primitive, gcd_many};
use super::{MPoly, Monomial, VarSet};

/// Factors of `H = h_tilde * psi * p_hat`, all over the variable set of `H`
/// (the parameter is the last variable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiCore {
    pub h_tilde: MPoly,
    pub psi: MPoly,
    pub p_hat: MPoly,
}

/// Decompose a nonzero `H` whose last variable is the curve parameter.
///
/// `p_hat` is the gcd of the coefficients of `H` viewed as a polynomial in
/// the remaining variables, `h_tilde` the content of `H / p_hat` in the
/// parameter, and `psi` what is left. When the parameter cancels from
/// `H / p_hat` the whole quotient is kept in `psi`. Both contents are normalized to
/// leading coefficient 1, so any scalar sits in `psi`.
pub fn psi_decompose_core(h: &MPoly) -> PsiCore {
    assert!(!h.is_zero(), "psi decomposition of zero");
    let vars = h.vars().clone();
    let n = vars.arity();
    let t = n - 1;

    // group by the x-part of each monomial
    let mut groups: std::collections::BTreeMap<Vec<u32>, MPoly> = Default::default();
    for (m, c) in h.terms() {
        let mut key = m.exps().to_vec();
        let e = key[t];
        key[t] = 0;
        let entry = groups.entry(key).or_insert_with(|| MPoly::zero(&vars));
        *entry = &*entry + &MPoly::monomial(&vars, Monomial::var(n, t, e), c.clone());
    }
    let p_hat = gcd_many(groups.values()).expect("nonzero H has a term");
    let rest = h.exact_div(&p_hat).expect("x-block content divides");
    if !rest.depends_on(t) {
        // t cancelled: keep everything in psi (n = 0)
        return PsiCore {
            h_tilde: MPoly::one(&vars),
            psi: rest,
            p_hat,
        };
    }
    let (h_tilde, psi) = content_primitive(&rest, t);
    PsiCore { h_tilde, psi, p_hat }
}

/// Full decomposition of the cleared numerator of `f(P1(t1) + x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiDecomposition {
    /// Content in the surface variables, over `(x1, x2, x3)`.
    pub h_tilde: MPoly,
    /// Mixed part over `(x1, x2, x3, t1)`.
    pub psi: MPoly,
    /// `psi_coeffs[i]` is the coefficient of `t1^i` in `psi`, over `(x1, x2, x3)`.
    pub psi_coeffs: Vec<MPoly>,
    /// Parameter-only content, over `(t1)`.
    pub p_hat: MPoly,
    /// Denominator cleared from `f(P1(t1) + x)`, over `(t1)`.
    pub den_cleared: MPoly,
}

impl PsiDecomposition {
    /// Assemble from a core split of a polynomial over `(x.., t)` and the
    /// cleared denominator (already over `param`).
    pub fn from_core(core: PsiCore, space: &VarSet, param: &VarSet, den_cleared: MPoly) -> Self {
        let n = core.psi.arity();
        let t = n - 1;
        let to_space = |p: &MPoly| -> MPoly {
            debug_assert!(!p.depends_on(t));
            MPoly::from_terms(
                space,
                p.terms()
                    .map(|(m, c)| (Monomial::from_exps(m.exps()[..t].to_vec()), c.clone())),
            )
        };
        let to_param = |p: &MPoly| -> MPoly {
            MPoly::from_terms(
                param,
                p.terms()
                    .map(|(m, c)| (Monomial::from_exps(vec![m.exps()[t]]), c.clone())),
            )
        };
        let psi_coeffs = core.psi.coeffs_in(t).iter().map(to_space).collect();
        PsiDecomposition {
            h_tilde: to_space(&core.h_tilde),
            psi_coeffs,
            p_hat: to_param(&core.p_hat),
            psi: core.psi,
            den_cleared,
        }
    }

    /// Number `n` with `psi = sum_{i<=n} psi_coeffs[i] t1^i`.
    pub fn n(&self) -> usize {
        self.psi_coeffs.len().saturating_sub(1)
    }
}
