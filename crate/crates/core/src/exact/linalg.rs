//! Fraction-free elimination.
//!
//! Systems over Q(params) are cleared of denominators row by row and reduced
//! by Bareiss elimination over the polynomial ring, so every intermediate
//! entry is a minor of the original matrix and divisions are exact.

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::rational::Rational;
use crate::error::Result;

/// An integral domain with exact division, enough for Bareiss.
pub trait Domain: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Option<Self>;
}

impl Domain for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
}

impl Domain for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        MultiPoly::div_exact(self, o)
    }
}

/// Row-echelon form of an augmented matrix `[A | b]`.
pub struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
    pub ncols: usize,
}

/// Bareiss elimination on `[A | b]` where `A` has `ncols` columns and each
/// row carries one extra right-hand-side entry. Pivot = first nonzero entry
/// scanning down the column, so the result is deterministic.
pub fn bareiss<T: Domain>(mut rows: Vec<Vec<T>>, ncols: usize) -> Echelon<T> {
    let nrows = rows.len();
    let mut prev: Option<T> = None;
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if r >= nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let piv = rows[r][col].clone();
        for i in r + 1..nrows {
            let f = rows[i][col].clone();
            for j in col + 1..=ncols {
                let v = piv.mul(&rows[i][j]).sub(&f.mul(&rows[r][j]));
                rows[i][j] = match &prev {
                    Some(d) => v.div_exact(d).expect("Bareiss step divides exactly"),
                    None => v,
                };
            }
            rows[i][col] = T::zero();
        }
        // rows above the pivot row but below earlier pivots are untouched;
        // rows that were already eliminated in earlier steps keep the
        // scaling invariant because they see every subsequent step.
        prev = Some(piv);
        pivots.push((r, col));
        r += 1;
    }
    // Rows below the last pivot that never got a step after skipped columns
    // are still consistent minors; nothing further to do.
    Echelon { rows, pivots, ncols }
}

/// Field operations needed for back-substitution.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
}

impl Field for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Result of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution<F, C> {
    /// A particular solution with every free variable set to zero.
    pub solution: Vec<F>,
    /// Column indices of free variables.
    pub free: Vec<usize>,
    /// One kernel vector per free variable.
    pub nullspace: Vec<Vec<F>>,
    /// Compatibility conditions (right-hand sides of zero rows).
    pub conditions: Vec<C>,
}

impl<F, C> LinearSolution<F, C> {
    pub fn is_consistent(&self) -> bool {
        self.conditions.is_empty()
    }
}

fn back_substitute<T: Domain, F: Field>(ech: &Echelon<T>, lift: impl Fn(&T) -> F) -> (Vec<F>, Vec<usize>, Vec<Vec<F>>) {
    let n = ech.ncols;
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|p| p.1).collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let rows: Vec<Vec<F>> = ech.pivots.iter().map(|&(r, _)| ech.rows[r].iter().map(&lift).collect()).collect();
    let solve = |rhs_col: Option<usize>| -> Vec<F> {
        // rhs_col None: use augmented column; Some(f): homogeneous with x_f = 1
        let mut x = vec![F::zero(); n];
        if let Some(f) = rhs_col {
            x[f] = F::one();
        }
        for (k, &(_, col)) in ech.pivots.iter().enumerate().rev() {
            let row = &rows[k];
            let mut acc = if rhs_col.is_none() { row[n].clone() } else { F::zero() };
            for j in col + 1..n {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc = acc.sub(&row[j].mul(&x[j]));
                }
            }
            x[col] = acc.div(&row[col]);
        }
        x
    };
    let particular = solve(None);
    let nullspace = free.iter().map(|&f| solve(Some(f))).collect();
    (particular, free, nullspace)
}

/// Solve `A x = b` over the fraction field of Q[params].
///
/// Compatibility conditions are the numerators of the zero rows' right-hand
/// sides, normalized (content 1, positive leading coefficient), deduplicated
/// and sorted.
pub fn solve_linear_over_field(a: &[Vec<RatFunc>], b: &[RatFunc]) -> Result<LinearSolution<RatFunc, MultiPoly>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut rows = Vec::with_capacity(a.len());
    for (row, rhs) in a.iter().zip(b) {
        // clear denominators: multiply by the product of distinct denominators
        let mut dens: Vec<MultiPoly> = Vec::new();
        for e in row.iter().chain(std::iter::once(rhs)) {
            let d = e.denom();
            if !d.is_one() && !dens.contains(d) {
                dens.push(d.clone());
            }
        }
        let l = dens.iter().fold(MultiPoly::one(), |acc, d| &acc * d);
        let lr = RatFunc::from_poly(l);
        let cleared: Result<Vec<MultiPoly>> =
            row.iter().chain(std::iter::once(rhs)).map(|e| (e * &lr).to_poly()).collect();
        let mut cleared = cleared?;
        let content =
            crate::exact::rational::content(cleared.iter().flat_map(|p| p.terms().map(|(_, c)| c)).collect::<Vec<_>>());
        if !Zero::is_zero(&content) {
            let inv = content.recip();
            cleared.iter_mut().for_each(|p| *p = p.scale(&inv));
        }
        rows.push(cleared);
    }
    let ech = bareiss(rows, ncols);
    let rank = ech.pivots.len();
    let mut conditions: Vec<MultiPoly> =
        ech.rows[rank..].iter().map(|r| r[ncols].normalized()).filter(|p| !p.is_zero()).collect();
    conditions.sort();
    conditions.dedup();
    let (solution, free, nullspace) = back_substitute(&ech, |p: &MultiPoly| RatFunc::from_poly(p.clone()));
    Ok(LinearSolution { solution, free, nullspace, conditions })
}

/// Solve `A x = b` over Q. Conditions are the nonzero residual right-hand
/// sides; the system is consistent iff there are none.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> LinearSolution<Rational, Rational> {
    let ncols = a.first().map_or(0, Vec::len);
    let rows: Vec<Vec<Rational>> =
        a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    let ech = bareiss(rows, ncols);
    let rank = ech.pivots.len();
    let conditions: Vec<Rational> =
        ech.rows[rank..].iter().map(|r| r[ncols].clone()).filter(|x| !Zero::is_zero(x)).collect();
    let (solution, free, nullspace) = back_substitute(&ech, |x: &Rational| x.clone());
    LinearSolution { solution, free, nullspace, conditions }
}

/// Kernel basis of `A` over Q.
pub fn nullspace_rational(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let zeros = vec![<Rational as Zero>::zero(); a.len()];
    solve_rational(a, &zeros).nullspace
}
