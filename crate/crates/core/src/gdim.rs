//! Closed graded-dimension formula for cyclotomic quiver Hecke algebras.

use thiserror::Error;

use crate::cartan::{CartanDatum, DominantWeight, Residue, RootVector};
use crate::laurent::LaurentPoly;
use crate::perm::{orbit_transporters, Permutation};

pub const DEFAULT_MAX_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GdimError {
    #[error("sequence length {n} exceeds the enumeration bound {max}")]
    TooLarge { n: usize, max: usize },
}

/// `N(w, nu, t) = <h_{nu_t}, Lambda - sum_{j < t, w(j) < w(t)} alpha_{nu_j}>`.
pub fn n_lambda(datum: &CartanDatum, lambda: &DominantWeight, w: &Permutation, nu: &[Residue], t: usize) -> i64 {
    let i = nu[t];
    let mut v = lambda.coords[i];
    for j in 0..t {
        if w.apply(j) < w.apply(t) {
            v -= datum.a(i, nu[j]);
        }
    }
    v
}

/// `prod_t q_{nu_t}^{N(1, nu, t) - 1}`, the degree shift common to every `w`.
fn base_shift(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> i64 {
    let mut shift = 0;
    let mut beta = datum.zero_root();
    for &i in nu {
        shift += datum.d(i) * (datum.pairing(i, lambda, &beta) - 1);
        beta.coeffs[i] += 1;
    }
    shift
}

fn term(datum: &CartanDatum, lambda: &DominantWeight, w: &Permutation, nu: &[Residue]) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for t in 0..nu.len() {
        let m = n_lambda(datum, lambda, w, nu, t);
        if m == 0 {
            return LaurentPoly::zero();
        }
        p = &p * &LaurentPoly::quantum_integer(m, datum.d(nu[t]));
    }
    p
}

/// `dim_q e(nu) R^Lambda e(nu2)`, summing over `w` with `w nu = nu2`.
pub fn graded_dim_pair(
    datum: &CartanDatum,
    lambda: &DominantWeight,
    nu: &[Residue],
    nu2: &[Residue],
) -> LaurentPoly {
    let mut total = LaurentPoly::zero();
    for w in orbit_transporters(nu, nu2) {
        total += &term(datum, lambda, &w, nu);
    }
    total.shift(base_shift(datum, lambda, nu))
}

/// `dim_q R^Lambda_alpha`, refusing sequences longer than `max_n`.
pub fn graded_dim_algebra_bounded(
    datum: &CartanDatum,
    lambda: &DominantWeight,
    alpha: &RootVector,
    max_n: usize,
) -> Result<LaurentPoly, GdimError> {
    let n = alpha.height() as usize;
    if n > max_n {
        return Err(GdimError::TooLarge { n, max: max_n });
    }
    let mut total = LaurentPoly::zero();
    for nu in alpha.sequences() {
        total += &graded_dim_row(datum, lambda, &nu);
    }
    Ok(total)
}

pub fn graded_dim_algebra(datum: &CartanDatum, lambda: &DominantWeight, alpha: &RootVector) -> Result<LaurentPoly, GdimError> {
    graded_dim_algebra_bounded(datum, lambda, alpha, DEFAULT_MAX_N)
}

/// `sum_{nu2} dim_q e(nu) R^Lambda e(nu2)`, i.e. the sum over every `w`.
///
/// Walks the relative orders of `w(0..t)` so that a vanishing factor prunes
/// every extension at once.
pub fn graded_dim_row(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> LaurentPoly {
    fn rec(
        datum: &CartanDatum,
        lambda: &DominantWeight,
        nu: &[Residue],
        order: &mut Vec<usize>,
        acc: &LaurentPoly,
        out: &mut LaurentPoly,
    ) {
        let t = order.len();
        if t == nu.len() {
            *out += acc;
            return;
        }
        let i = nu[t];
        // inserting t at rank r puts exactly order[..r] below it
        let mut m = lambda.coords[i];
        for r in 0..=t {
            if r > 0 {
                m -= datum.a(i, nu[order[r - 1]]);
            }
            if m == 0 {
                continue;
            }
            let next = acc * &LaurentPoly::quantum_integer(m, datum.d(i));
            order.insert(r, t);
            rec(datum, lambda, nu, order, &next, out);
            order.remove(r);
        }
    }
    let mut out = LaurentPoly::zero();
    rec(datum, lambda, nu, &mut Vec::with_capacity(nu.len()), &LaurentPoly::one(), &mut out);
    out.shift(base_shift(datum, lambda, nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank1(l: i64) -> (CartanDatum, DominantWeight) {
        let d = CartanDatum::family("rank1", 1).unwrap();
        let lam = DominantWeight::fundamental(&d, 0, l);
        (d, lam)
    }

    fn binom(n: i64, k: i64) -> i64 {
        if k < 0 || k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn single_strand_is_truncated_polynomial_ring() {
        let g = CartanDatum::family("g", 2).unwrap();
        for l in 0..5 {
            for i in 0..2 {
                let lam = DominantWeight::fundamental(&g, i, l);
                let mut want = LaurentPoly::zero();
                for k in 0..l {
                    want.add_term(2 * g.d(i) * k, 1);
                }
                assert_eq!(graded_dim_pair(&g, &lam, &[i], &[i]), want);
            }
        }
    }

    #[test]
    fn nilhecke_two_two() {
        let (d, lam) = rank1(2);
        assert_eq!(graded_dim_pair(&d, &lam, &[0, 0], &[0, 0]).to_string(), "q^-2+2+q^2");
    }

    #[test]
    fn nilhecke_totals() {
        for l in 0..6 {
            for n in 0..6 {
                let (d, lam) = rank1(l);
                let total = graded_dim_algebra(&d, &lam, &RootVector { coeffs: vec![n] }).unwrap();
                let fact: i64 = (1..=n).product();
                assert_eq!(total.at_one(), fact * fact * binom(l, n), "l={l} n={n}");
            }
        }
    }

    #[test]
    fn paper_examples() {
        let a2 = CartanDatum::family("a", 2).unwrap();
        let lam = DominantWeight::new(&a2, vec![1, 1]).unwrap();
        assert!(!graded_dim_pair(&a2, &lam, &[1, 0, 1], &[1, 0, 1]).is_zero());

        let sl3 = CartanDatum::family("affine-a", 3).unwrap();
        let lam = DominantWeight::fundamental(&sl3, 0, 4);
        assert!(graded_dim_algebra(&sl3, &lam, &RootVector { coeffs: vec![1, 2, 0] }).unwrap().is_zero());
        assert_eq!(graded_dim_algebra(&sl3, &lam, &sl3.zero_root()).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn row_matches_pair_sum() {
        let b2 = CartanDatum::family("b", 2).unwrap();
        let lam = DominantWeight::new(&b2, vec![2, 1]).unwrap();
        let alpha = RootVector { coeffs: vec![2, 2] };
        for nu in alpha.sequences() {
            let mut sum = LaurentPoly::zero();
            for nu2 in alpha.sequences() {
                sum += &graded_dim_pair(&b2, &lam, &nu, &nu2);
            }
            assert_eq!(sum, graded_dim_row(&b2, &lam, &nu));
        }
    }

    #[test]
    fn bound_is_enforced() {
        let (d, lam) = rank1(9);
        assert!(graded_dim_algebra(&d, &lam, &RootVector { coeffs: vec![9] }).is_err());
    }
}
