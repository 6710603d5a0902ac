use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Var;
use crate::series::EllipticElement;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const SERIES_TERMS: usize = 60;
/// Arguments closer than this to a pole are rejected.
pub const NEAR_POLE: f64 = 1e-8;

/// `e^(2 pi i / 3)`.
pub fn epsilon() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

/// The lattice `Z + tau Z` with its invariants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeSpec", into = "LatticeSpec")]
pub struct Lattice {
    tau: C64,
    nome: C64,
    g2: C64,
    g3: C64,
    shortest: f64,
    /// Coefficients of `z^(2k-2)` in the expansion of P at 0, `k >= 2`.
    laurent: Vec<C64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct LatticeSpec {
    tau: C64,
}

impl TryFrom<LatticeSpec> for Lattice {
    type Error = Error;

    fn try_from(s: LatticeSpec) -> Result<Self> {
        Lattice::new(s.tau)
    }
}

impl From<Lattice> for LatticeSpec {
    fn from(l: Lattice) -> Self {
        LatticeSpec { tau: l.tau }
    }
}

/// `sum_n n^k q^n / (1 - q^n)`.
fn lambert(q: C64, k: i32) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let mut qn = q;
    for n in 1..10_000 {
        let t = qn / (1.0 - qn) * (n as f64).powi(k);
        acc += t;
        if t.norm() < 1e-18 * acc.norm().max(1e-300) {
            break;
        }
        qn *= q;
    }
    acc
}

/// Laurent coefficients `c_k` of P for `k = 2..terms+1`.
pub fn laurent_coefficients(g2: C64, g3: C64, terms: usize) -> Vec<C64> {
    let mut c = vec![C64::new(0.0, 0.0); terms + 2];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..terms + 2 {
        let mut s = C64::new(0.0, 0.0);
        for m in 2..=k - 2 {
            s += c[m] * c[k - m];
        }
        c[k] = 3.0 * s / (((2 * k + 1) * (k - 3)) as f64);
    }
    c.drain(..2);
    c
}

/// Lattice invariants `(g2, g3)` of `Z + tau Z` from the Eisenstein series.
pub fn lattice_invariants(tau: C64) -> Result<(C64, C64)> {
    if tau.im <= 0.0 {
        return Err(Error::InvalidLattice(format!("Im tau must be positive, got {tau}")));
    }
    let q = (two_pi_i() * tau).exp();
    let e4 = 1.0 + 240.0 * lambert(q, 3);
    let e6 = 1.0 - 504.0 * lambert(q, 5);
    Ok(((2.0 * PI).powi(4) / 12.0 * e4, (2.0 * PI).powi(6) / 216.0 * e6))
}

impl Lattice {
    pub fn new(tau: C64) -> Result<Self> {
        let (g2, g3) = lattice_invariants(tau)?;
        let nome = (two_pi_i() * tau).exp();
        // Gauss reduction of the basis (1, tau)
        let (mut a, mut b) = (C64::new(1.0, 0.0), tau);
        loop {
            if b.norm() < a.norm() {
                std::mem::swap(&mut a, &mut b);
            }
            let next = b - a * ((a.conj() * b).re / a.norm_sqr()).round();
            if next.norm() >= b.norm() * (1.0 - 1e-12) {
                break;
            }
            b = next;
        }
        let shortest = a.norm().min(b.norm());
        let laurent = laurent_coefficients(g2, g3, SERIES_TERMS);
        Ok(Lattice { tau, nome, g2, g3, shortest, laurent })
    }

    /// `tau = i` (lemniscatic, `g3 = 0`).
    pub fn square() -> Self {
        Self::new(I).expect("valid tau")
    }

    /// `tau = e^(2 pi i/3)` (equianharmonic, `g2 = 0`).
    pub fn hexagonal() -> Self {
        Self::new(epsilon()).expect("valid tau")
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn nome(&self) -> C64 {
        self.nome
    }

    pub fn g2(&self) -> C64 {
        self.g2
    }

    pub fn g3(&self) -> C64 {
        self.g3
    }

    pub fn shortest_period_norm(&self) -> f64 {
        self.shortest
    }

    pub fn j(&self) -> C64 {
        let g2c = self.g2.powi(3);
        1728.0 * g2c / (g2c - 27.0 * self.g3 * self.g3)
    }

    /// Representative of `z` in the cell `a + b tau`, `a, b` in `[-1/2, 1/2]`.
    pub fn reduce_cell(&self, z: C64) -> C64 {
        let b = z.im / self.tau.im;
        let a = z.re - b * self.tau.re;
        let (a, b) = (a - a.round(), b - b.round());
        C64::new(a, 0.0) + self.tau * b
    }

    /// Representative of `z` of smallest modulus.
    pub fn reduce(&self, z: C64) -> C64 {
        let z0 = self.reduce_cell(z);
        let mut best = z0;
        for m in -1..=1 {
            for n in -1..=1 {
                let w = z0 + m as f64 + self.tau * n as f64;
                if w.norm() < best.norm() {
                    best = w;
                }
            }
        }
        best
    }

    /// Lattice point nearest to `z` is `z - reduce(z)`; error if within
    /// `NEAR_POLE`.
    pub fn check_regular(&self, z: C64) -> Result<C64> {
        let w = self.reduce(z);
        if w.norm() < NEAR_POLE {
            return Err(Error::NearPole(format!("{z}")));
        }
        Ok(w)
    }

    /// `(P, P')` from the Laurent series at 0 (accurate for small `|z|`).
    pub fn series_pair(&self, z: C64) -> (C64, C64) {
        let z2 = z * z;
        let mut p = z2.inv();
        let mut dp = -2.0 * p / z;
        let mut zp = C64::new(1.0, 0.0); // z^(2k-4), starting at k = 2
        for (i, c) in self.laurent.iter().enumerate() {
            let k = i + 2;
            zp *= z2;
            p += c * zp;
            dp += c * zp / z * (2 * k - 2) as f64;
        }
        (p, dp)
    }

    /// `(P, P')` from the q-expansion; `z` should lie in the period cell.
    pub fn qseries_pair(&self, z: C64) -> (C64, C64) {
        let u = (two_pi_i() * z).exp();
        let q = self.nome;
        let f = |w: C64| w / ((1.0 - w) * (1.0 - w));
        let fd = |w: C64| w * (1.0 + w) / ((1.0 - w) * (1.0 - w) * (1.0 - w));
        let mut p = f(u) + 1.0 / 12.0;
        let mut dp = fd(u);
        let mut qn = q;
        let scale = u.norm().max(u.inv().norm());
        for _ in 0..10_000 {
            let (wp, wm) = (qn * u, qn / u);
            p += f(wp) + f(wm) - 2.0 * f(qn);
            dp += fd(wp) - fd(wm);
            if qn.norm() * scale < 1e-18 {
                break;
            }
            qn *= q;
        }
        let t = two_pi_i();
        (t * t * p, t * t * t * dp)
    }

    /// `(P(z), P'(z))`.
    pub fn wp_pair(&self, z: C64) -> Result<(C64, C64)> {
        let w = self.check_regular(z)?;
        if w.norm() < 0.1 * self.shortest {
            Ok(self.series_pair(w))
        } else {
            Ok(self.qseries_pair(self.reduce_cell(z)))
        }
    }

    pub fn wp(&self, z: C64) -> Result<C64> {
        Ok(self.wp_pair(z)?.0)
    }

    pub fn wp_prime(&self, z: C64) -> Result<C64> {
        Ok(self.wp_pair(z)?.1)
    }

    /// `P^(d)(z)`; orders 2 and up come from the algebraic recurrences.
    pub fn wp_derivative(&self, z: C64, d: usize) -> Result<C64> {
        let (p, dp) = self.wp_pair(z)?;
        Ok(eval_derivative(d, p, dp, self.g2, self.g3))
    }
}

/// The `d`-th derivative of P as a polynomial in P and P', evaluated.
pub fn eval_derivative(d: usize, p: C64, dp: C64, g2: C64, g3: C64) -> C64 {
    match d {
        0 => p,
        1 => dp,
        2 => 6.0 * p * p - g2 / 2.0,
        3 => 12.0 * p * dp,
        4 => 12.0 * dp * dp + 12.0 * p * (6.0 * p * p - g2 / 2.0),
        5 => 36.0 * dp * (6.0 * p * p - g2 / 2.0) + 12.0 * p * 12.0 * p * dp,
        _ => {
            let mut x = EllipticElement::wp();
            for _ in 0..d {
                x = x.derive();
            }
            NumElement::new(&x, &|v| invariant(v, g2, g3)).expect("only g2, g3 appear").eval(p, dp)
        }
    }
}

fn invariant(v: Var, g2: C64, g3: C64) -> Option<C64> {
    match v {
        Var::G2 => Some(g2),
        Var::G3 => Some(g3),
        _ => None,
    }
}

/// An elliptic function with numeric coefficients: `p0(P) + p1(P) P'`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumElement {
    pub p0: Vec<C64>,
    pub p1: Vec<C64>,
}

impl NumElement {
    /// `None` if a parameter has no value.
    pub fn new(x: &EllipticElement, value: &dyn Fn(Var) -> Option<C64>) -> Option<Self> {
        let conv = |v: &[crate::exact::MultiPoly]| v.iter().map(|c| c.eval_complex(value)).collect::<Option<Vec<_>>>();
        Some(NumElement { p0: conv(x.part0())?, p1: conv(x.part1())? })
    }

    pub fn eval(&self, p: C64, dp: C64) -> C64 {
        let horner = |c: &[C64]| c.iter().rev().fold(C64::new(0.0, 0.0), |acc, x| acc * p + x);
        horner(&self.p0) + dp * horner(&self.p1)
    }
}

/// The function whose translates make up the potentials: P on a lattice,
/// `1/sin^2 z` on the nodal curve, `1/z^2` on the cuspidal one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    Elliptic(Lattice),
    Trigonometric,
    Rational,
}

impl Kernel {
    /// `(f, f')` at `z`.
    pub fn pair(&self, z: C64) -> Result<(C64, C64)> {
        match self {
            Kernel::Elliptic(l) => l.wp_pair(z),
            Kernel::Trigonometric => {
                let s = z.sin();
                let w = z - PI * (z.re / PI).round();
                if w.norm() < NEAR_POLE {
                    return Err(Error::NearPole(format!("{z}")));
                }
                let f = 1.0 / (s * s);
                Ok((f, -2.0 * z.cos() / (s * s * s)))
            }
            Kernel::Rational => {
                if z.norm() < NEAR_POLE {
                    return Err(Error::NearPole(format!("{z}")));
                }
                let f = 1.0 / (z * z);
                Ok((f, -2.0 * f / z))
            }
        }
    }

    pub fn value(&self, z: C64) -> Result<C64> {
        Ok(self.pair(z)?.0)
    }

    /// `f^(d)(z)`.
    pub fn derivative(&self, z: C64, d: usize) -> Result<C64> {
        let (f, df) = self.pair(z)?;
        Ok(match self {
            Kernel::Elliptic(l) => eval_derivative(d, f, df, l.g2, l.g3),
            // 1/sin^2 = P + 1/3 for g2 = 4/3, g3 = 8/27
            Kernel::Trigonometric if d == 0 => f,
            Kernel::Trigonometric => {
                eval_derivative(d, f - 1.0 / 3.0, df, C64::new(4.0 / 3.0, 0.0), C64::new(8.0 / 27.0, 0.0))
            }
            Kernel::Rational => eval_derivative(d, f, df, C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        })
    }

    /// Distinct modulo the period lattice (and away from poles).
    pub fn check_distinct(&self, a: C64, b: C64) -> Result<()> {
        self.pair(a - b).map(|_| ()).map_err(|_| Error::InvalidConfiguration(format!("points {a} and {b} coincide")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_lattices() {
        let sq = Lattice::square();
        assert!(sq.g3().norm() < 1e-12 * sq.g2().norm());
        assert!((sq.j() - 1728.0).norm() < 1e-9);
        let hex = Lattice::new(C64::from_polar(1.0, PI / 3.0)).unwrap();
        assert!(hex.g2().norm() < 1e-12 * hex.g3().norm());
        assert!(Lattice::new(C64::new(0.3, -1.0)).is_err());
    }

    #[test]
    fn half_period_and_parity() {
        let l = Lattice::new(C64::new(0.2, 1.1)).unwrap();
        assert!(l.wp_prime(C64::new(0.5, 0.0)).unwrap().norm() < 1e-10);
        let z = C64::new(0.31, 0.17);
        assert!((l.wp(z).unwrap() - l.wp(-z).unwrap()).norm() < 1e-12);
        assert!(matches!(l.wp(C64::new(1.0, 1e-10)), Err(Error::NearPole(_))));
    }

    #[test]
    fn series_and_qseries_agree() {
        let l = Lattice::new(C64::new(-0.1, 0.9)).unwrap();
        let z = C64::new(0.05, 0.02) * 2.0;
        let (a, da) = l.series_pair(z);
        let (b, db) = l.qseries_pair(z);
        assert!((a - b).norm() < 1e-10 * a.norm());
        assert!((da - db).norm() < 1e-10 * da.norm());
    }

    #[test]
    fn recurrences_match_generic_derivation() {
        let (p, g2, g3) = (C64::new(0.3, 0.1), C64::new(2.0, 0.5), C64::new(-0.7, 0.0));
        // a point on the curve: the generic form reduces P'^2
        let dp = (4.0 * p * p * p - g2 * p - g3).sqrt();
        let mut x = EllipticElement::wp();
        for d in 1..=5 {
            x = x.derive();
            let generic = NumElement::new(&x, &|v| invariant(v, g2, g3)).unwrap().eval(p, dp);
            assert!((generic - eval_derivative(d, p, dp, g2, g3)).norm() < 1e-12, "order {d}");
        }
    }

    #[test]
    fn degenerate_kernels() {
        let z = C64::new(0.4, 0.3);
        let h = 1e-4;
        for k in [Kernel::Trigonometric, Kernel::Rational] {
            for d in 1..=4 {
                let fd = (k.derivative(z + h, d - 1).unwrap() - k.derivative(z - h, d - 1).unwrap()) / (2.0 * h);
                let exact = k.derivative(z, d).unwrap();
                assert!((fd - exact).norm() < 1e-5 * exact.norm().max(1.0), "{k:?} order {d}");
            }
        }
    }
}
