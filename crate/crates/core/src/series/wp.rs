use super::laurent::LaurentSeries;
use crate::exact::rational::{int, rat};
use crate::exact::{MultiPoly, Var};

/// Coefficients `c_k` (k >= 2) of `P(z) = z^-2 + sum_k c_k z^(2k-2)`, as
/// polynomials in g2, g3, for `k < kmax`.
pub fn wp_coefficients(kmax: usize) -> Vec<MultiPoly> {
    let mut c = vec![MultiPoly::zero(); kmax.max(4)];
    if kmax > 2 {
        c[2] = MultiPoly::var(Var::G2).scale(&rat(1, 20));
    }
    if kmax > 3 {
        c[3] = MultiPoly::var(Var::G3).scale(&rat(1, 28));
    }
    for k in 4..kmax {
        let mut s = MultiPoly::zero();
        for m in 2..=k - 2 {
            s += &(&c[m] * &c[k - m]);
        }
        let d = (2 * k as i64 + 1) * (k as i64 - 3);
        c[k] = s.scale(&(int(3) / int(d)));
    }
    c.truncate(kmax);
    c
}

/// Weierstrass P as a Laurent series trusted below `z^order`.
pub fn wp_series(order: i64) -> LaurentSeries {
    // need 2k - 2 < order
    let kmax = ((order + 2) / 2 + 1).max(2) as usize;
    let c = wp_coefficients(kmax);
    let len = (order + 2).max(0) as usize;
    let mut coeffs = vec![MultiPoly::zero(); len];
    if len > 0 {
        coeffs[0] = MultiPoly::one();
    }
    for (k, ck) in c.iter().enumerate().skip(2) {
        let idx = 2 * k; // exponent 2k-2 sits at index 2k
        if idx < len && !ck.is_zero() {
            coeffs[idx] = ck.clone();
        }
    }
    LaurentSeries::new(-2, coeffs, order)
}

/// P' as a Laurent series trusted below `z^order`.
pub fn wp_prime_series(order: i64) -> LaurentSeries {
    wp_series(order + 1).derivative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn low_coefficients() {
        let s = wp_series(12);
        let g2 = MultiPoly::var(Var::G2);
        assert_eq!(s.coeff(2).unwrap(), g2.scale(&rat(1, 20)));
        assert!(s.coeff(0).unwrap().is_zero());
        for k in [-1, 1, 3, 5, 7] {
            assert!(s.coeff(k).unwrap().is_zero());
        }
        assert_eq!(s.coeff(6).unwrap(), g2.pow(2).scale(&rat(1, 1200)));
    }

    #[test]
    fn satisfies_defining_relation() {
        let k = 20;
        let p = wp_series(k);
        let dp = wp_prime_series(k);
        let g2 = LaurentSeries::constant(MultiPoly::var(Var::G2), k);
        let g3 = LaurentSeries::constant(MultiPoly::var(Var::G3), k);
        let lhs = dp.mul(&dp);
        let rhs = p.pow(3).scale(&MultiPoly::int(4)).sub(&g2.mul(&p)).sub(&g3);
        let diff = lhs.sub(&rhs);
        assert!(diff.order() >= 12);
        assert!(diff.is_zero());
    }

    #[test]
    fn weights_are_homogeneous() {
        let s = wp_series(24);
        for j in -2..24 {
            let c = s.coeff(j).unwrap();
            if !c.is_zero() {
                assert_eq!(c.homogeneous_weight(), Some(j + 2));
            }
        }
    }
}
