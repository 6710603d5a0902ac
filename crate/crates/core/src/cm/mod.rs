//! Numerical elliptic functions and the Calogero-Moser side: residuals of
//! the integrability conditions for operators with several poles, and a
//! Newton solver for their critical points.

pub mod lattice;
pub mod newton;
pub mod residuals;

pub use lattice::{epsilon, lattice_invariants, Kernel, Lattice, NumElement};
pub use newton::{newton_critical, NewtonOptions, NewtonReport};
pub use residuals::{
    calogero_potential, cm3_f, cm3_h1, cm3_residuals, cryst3_grad_h, cryst3_hamiltonian, cryst3_identity_defect,
    cryst3_residuals, finite_gap_residuals, inozemtsev_gradient, inozemtsev_potential, CMConfig2, CMConfig3,
    Cryst3Config, Cryst3Params,
};

use num_complex::Complex64 as C64;

use crate::error::Result;

/// Second-order problem with the first point pinned; the unknowns are the
/// other points.
#[derive(Clone, Debug)]
pub struct FiniteGapProblem {
    pub base: CMConfig2,
    pub kernel: Kernel,
}

impl FiniteGapProblem {
    pub fn unknowns(&self) -> Vec<C64> {
        self.base.points[1..].to_vec()
    }

    pub fn config(&self, x: &[C64]) -> CMConfig2 {
        let mut cfg = self.base.clone();
        cfg.points[1..].copy_from_slice(x);
        cfg
    }

    pub fn residual(&self, x: &[C64]) -> Result<Vec<C64>> {
        finite_gap_residuals(&self.config(x), &self.kernel)
    }

    pub fn solve(&self, opts: &NewtonOptions) -> Result<(CMConfig2, NewtonReport)> {
        let rep = newton_critical(&|x| self.residual(x), &self.unknowns(), opts)?;
        Ok((self.config(&rep.solution), rep))
    }
}

/// Third-order problem; the first point stays pinned, the other groups of
/// variables are unknowns when flagged.
#[derive(Clone, Debug)]
pub struct Cm3Problem {
    pub base: CMConfig3,
    pub kernel: Kernel,
    pub vary_points: bool,
    pub vary_momenta: bool,
    pub vary_c: bool,
}

impl Cm3Problem {
    pub fn unknowns(&self) -> Vec<C64> {
        let mut x = Vec::new();
        if self.vary_points {
            x.extend_from_slice(&self.base.points[1..]);
        }
        if self.vary_momenta {
            x.extend_from_slice(&self.base.momenta);
        }
        if self.vary_c {
            x.push(self.base.c);
        }
        x
    }

    pub fn config(&self, x: &[C64]) -> CMConfig3 {
        let mut cfg = self.base.clone();
        let mut rest = x;
        if self.vary_points {
            let k = cfg.points.len() - 1;
            cfg.points[1..].copy_from_slice(&rest[..k]);
            rest = &rest[k..];
        }
        if self.vary_momenta {
            let k = cfg.momenta.len();
            cfg.momenta.copy_from_slice(&rest[..k]);
            rest = &rest[k..];
        }
        if self.vary_c {
            cfg.c = rest[0];
        }
        cfg
    }

    pub fn residual(&self, x: &[C64]) -> Result<Vec<C64>> {
        cm3_residuals(&self.config(x), &self.kernel)
    }

    pub fn solve(&self, opts: &NewtonOptions) -> Result<(CMConfig3, NewtonReport)> {
        let rep = newton_critical(&|x| self.residual(x), &self.unknowns(), opts)?;
        Ok((self.config(&rep.solution), rep))
    }
}

/// `Z_3`-symmetric problem in the points and momenta (nothing pinned: the
/// symmetry already fixes the origin).
#[derive(Clone, Debug)]
pub struct Cryst3Problem {
    pub base: Cryst3Config,
    pub lattice: Lattice,
}

impl Cryst3Problem {
    pub fn unknowns(&self) -> Vec<C64> {
        let mut x = self.base.points.clone();
        x.extend_from_slice(&self.base.momenta);
        x
    }

    pub fn config(&self, x: &[C64]) -> Cryst3Config {
        let n = self.base.points.len();
        let mut cfg = self.base.clone();
        cfg.points.copy_from_slice(&x[..n]);
        cfg.momenta.copy_from_slice(&x[n..]);
        cfg
    }

    pub fn residual(&self, x: &[C64]) -> Result<Vec<C64>> {
        cryst3_residuals(&self.config(x), &self.lattice)
    }

    pub fn solve(&self, opts: &NewtonOptions) -> Result<(Cryst3Config, NewtonReport)> {
        let rep = newton_critical(&|x| self.residual(x), &self.unknowns(), opts)?;
        Ok((self.config(&rep.solution), rep))
    }
}
