//! Dense Gaussian elimination over `Q`.

use num_traits::{One, Zero};

use super::{MPoly, Monomial, Q};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c].clone();
                for j in c..cols {
                    let t = &k * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{a : m * a = 0}`.
pub fn kernel(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = m.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Coefficient vectors of `polys` over the union of their supports.
pub fn coefficient_rows(polys: &[&MPoly]) -> Vec<Vec<Q>> {
    let mut support: Vec<Monomial> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    support.sort();
    support.dedup();
    polys
        .iter()
        .map(|p| support.iter().map(|m| p.coeff(m)).collect())
        .collect()
}

/// Transpose of a rectangular matrix.
pub fn transpose(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::super::q_int;
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot: Q = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert!(kernel(&mat(&[&[1, 0], &[0, 1]]), 2).is_empty());
    }
}
