use super::quantity::Quantity;
use super::reference::closed_form;
use super::{solve_locus, Classification, CurveFamily};
use crate::error::{Error, Result};
use crate::exact::rational::int;
use crate::exact::{rational_interpolate, RatFunc, Rational, Var};

/// The value of `quantity` on the non-cyclic branch of `(q, r)` where it
/// is constant. Errors if no branch, or several branches with different
/// values, define it.
pub fn branch_value(q: i64, r: i64, quantity: Quantity) -> Result<Rational> {
    let (_, branches) = solve_locus(q, r, CurveFamily::Generic)?;
    let mut values: Vec<Rational> = branches
        .iter()
        .filter(|b| b.verified && b.classification != Classification::CyclicPoint)
        .filter_map(|b| b.quantity(quantity))
        .collect();
    values.dedup();
    match values.len() {
        1 => Ok(values.pop().unwrap()),
        0 => Err(Error::Reconstruction(format!("{quantity} is not constant on any branch at (q, r) = ({q}, {r})"))),
        _ => Err(Error::Reconstruction(format!("{quantity} takes several values at (q, r) = ({q}, {r})"))),
    }
}

/// `q = r, r + 3, ...` (`count` values).
pub fn default_samples(r: i64, count: usize) -> Vec<i64> {
    (0..count as i64).map(|k| r + 3 * k).collect()
}

fn degree_bounds(r: i64, quantity: Quantity) -> Option<(usize, usize)> {
    let f = closed_form(r, quantity)?;
    Some((f.numer().degree_in(Var::Q) as usize, f.denom().degree_in(Var::Q) as usize))
}

/// Recover `quantity` on the branch with gap `r` as a rational function of
/// `q` from exact values at the sampled `q`.
///
/// Degree bounds come from the known closed form (plus 2) when there is
/// one; otherwise the smallest balanced bounds that fit all samples with
/// three to spare are used. A failed fit is retried once with bounds
/// raised by 2.
pub fn reconstruct_in_q(r: i64, quantity: Quantity, samples: &[i64]) -> Result<RatFunc> {
    let points: Vec<(Rational, Rational)> =
        samples.iter().map(|&q| Ok((int(q), branch_value(q, r, quantity)?))).collect::<Result<_>>()?;
    let fit = |dn: usize, dd: usize| rational_interpolate(&points, dn, dd, Var::Q);
    match degree_bounds(r, quantity) {
        Some((dn, dd)) => fit(dn + 2, dd + 2).or_else(|_| fit(dn + 4, dd + 4)),
        None => {
            let mut d = 0;
            while 2 * d + 4 <= points.len() {
                if let Ok(f) = fit(d, d) {
                    return Ok(f);
                }
                d += 1;
            }
            Err(Error::Reconstruction(format!("{} samples do not determine {quantity} for r = {r}", points.len())))
        }
    }
}

/// Enough samples for the known closed form with margin 2, plus three checks.
pub fn samples_for(r: i64, quantity: Quantity) -> Vec<i64> {
    let (dn, dd) = degree_bounds(r, quantity).unwrap_or((6, 6));
    default_samples(r, dn + dd + 4 + 1 + 3)
}
