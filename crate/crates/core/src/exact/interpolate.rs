use num_traits::{One, Zero};

use super::linalg::nullspace_rational;
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::rational::Rational;
use super::upoly;
use super::var::Var;
use crate::error::{Error, Result};

/// Rational function in `var` with numerator degree <= `dn` and denominator
/// degree <= `dd` through all `points`.
///
/// Solves the linear system `N(x_i) - y_i D(x_i) = 0` for the coefficients,
/// cancels the univariate gcd, and checks every point.
pub fn rational_interpolate(points: &[(Rational, Rational)], dn: usize, dd: usize, var: Var) -> Result<RatFunc> {
    let need = dn + dd + 1;
    if points.len() < need {
        return Err(Error::Reconstruction(format!(
            "need at least {need} points for degree bounds ({dn}, {dd}), got {}",
            points.len()
        )));
    }
    let mut xs: Vec<&Rational> = points.iter().map(|p| &p.0).collect();
    xs.sort();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Reconstruction("sample abscissae are not distinct".into()));
    }
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(dn + dd + 2);
            let mut p = Rational::one();
            for _ in 0..=dn {
                row.push(p.clone());
                p *= x;
            }
            let mut p = Rational::one();
            for _ in 0..=dd {
                row.push(-(y * &p));
                p *= x;
            }
            row
        })
        .collect();
    let kernel = nullspace_rational(&rows);
    let fail = || Error::Reconstruction(format!("no rational function of degrees ({dn}, {dd}) fits the samples"));
    // any kernel vector with nonzero denominator works when enough points are given
    let v = kernel.into_iter().find(|v| v[dn + 1..].iter().any(|c| !c.is_zero())).ok_or_else(fail)?;
    let num = upoly::trim(v[..=dn].to_vec());
    let den = upoly::trim(v[dn + 1..].to_vec());
    let (num, den) = if num.is_empty() {
        (num, vec![Rational::one()])
    } else {
        let g = upoly::gcd(&num, &den);
        (upoly::div_rem(&num, &g).0, upoly::div_rem(&den, &g).0)
    };
    for (x, y) in points {
        let d = upoly::eval(&den, x);
        if d.is_zero() || &(upoly::eval(&num, x) / d) != y {
            return Err(fail());
        }
    }
    RatFunc::new(MultiPoly::from_univariate(var, &num), MultiPoly::from_univariate(var, &den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn sample(f: impl Fn(&Rational) -> Rational, xs: &[i64]) -> Vec<(Rational, Rational)> {
        xs.iter().map(|&x| (int(x), f(&int(x)))).collect()
    }

    #[test]
    fn recovers_inverse_square() {
        let pts = sample(|q| int(-3) / ((q + int(1)) * (q + int(1))), &[2, 5, 8, 11, 14]);
        let r = rational_interpolate(&pts, 2, 2, Var::Q).unwrap();
        assert_eq!(r, RatFunc::parse("-3/(q+1)^2").unwrap());
    }

    #[test]
    fn constant_samples() {
        let pts = sample(|_| int(5), &[1, 2, 3]);
        let r = rational_interpolate(&pts, 1, 1, Var::Q).unwrap();
        assert_eq!(r, RatFunc::constant(int(5)));
    }

    #[test]
    fn polynomial_samples() {
        let pts = sample(|q| (q + int(2)) * (q + int(2)) / int(3), &[4, 7, 10, 13, 16]);
        let r = rational_interpolate(&pts, 2, 2, Var::Q).unwrap();
        assert_eq!(r, RatFunc::parse("(q+2)^2/3").unwrap());
    }

    #[test]
    fn too_few_points() {
        let pts = sample(|_| int(1), &[1, 2]);
        assert!(matches!(rational_interpolate(&pts, 1, 1, Var::Q), Err(Error::Reconstruction(_))));
    }

    #[test]
    fn inconsistent_bounds() {
        let pts = sample(|q| q * q * q, &[1, 2, 3, 4, 5, 6]);
        assert!(rational_interpolate(&pts, 1, 1, Var::Q).is_err());
    }
}
