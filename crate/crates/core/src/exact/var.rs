use std::fmt;

use serde::{Deserialize, Serialize};

const AUX_BASE: u16 = 1000;

/// A polynomial indeterminate.
///
/// The first few indices are the fixed universe used throughout the crate;
/// `Var::aux(k)` names auxiliary free parameters `u1, u2, ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Var(pub u16);

impl Var {
    pub const C: Var = Var(0);
    pub const E: Var = Var(1);
    pub const G2: Var = Var(2);
    pub const G3: Var = Var(3);
    pub const LAMBDA: Var = Var(4);
    pub const Q: Var = Var(5);
    pub const M: Var = Var(6);
    /// Nodal-curve parameter: g2 = 3t^2, g3 = t^3.
    pub const T: Var = Var(7);
    pub const P: Var = Var(8);
    pub const Z: Var = Var(9);
    /// Weierstrass P and its derivative, used when elliptic elements are
    /// written as polynomials.
    pub const WP: Var = Var(10);
    pub const DWP: Var = Var(11);

    const NAMES: [&'static str; 12] = ["c", "e", "g2", "g3", "lambda", "q", "m", "t", "p", "z", "P", "P'"];

    /// Auxiliary parameter `u{k}`, `k >= 1`.
    pub fn aux(k: u16) -> Var {
        assert!(k >= 1, "auxiliary variables are numbered from 1");
        Var(AUX_BASE + k)
    }

    pub fn is_aux(self) -> bool {
        self.0 > AUX_BASE
    }

    pub fn aux_index(self) -> Option<u16> {
        self.is_aux().then(|| self.0 - AUX_BASE)
    }

    pub fn name(self) -> String {
        match Self::NAMES.get(self.0 as usize) {
            Some(n) => (*n).to_string(),
            None if self.is_aux() => format!("u{}", self.0 - AUX_BASE),
            None => format!("x{}", self.0),
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        if let Some(i) = Self::NAMES.iter().position(|n| *n == name) {
            return Some(Var(i as u16));
        }
        if name == "λ" {
            return Some(Var::LAMBDA);
        }
        if let Some(rest) = name.strip_prefix('u') {
            if let Ok(k) = rest.parse::<u16>() {
                if (1..u16::MAX - AUX_BASE).contains(&k) {
                    return Some(Var::aux(k));
                }
            }
        }
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(k) = rest.parse::<u16>() {
                if (k as usize) >= Self::NAMES.len() && k < AUX_BASE {
                    return Some(Var(k));
                }
            }
        }
        None
    }

    /// Homothety weight: deg e = 1, deg c = 2, deg lambda = 3, deg g2 = 4,
    /// deg g3 = 6, deg t = 2, deg P = 2, deg P' = 3. Other variables carry
    /// no weight.
    pub fn weight(self) -> Option<i64> {
        match self {
            Var::C => Some(2),
            Var::E => Some(1),
            Var::G2 => Some(4),
            Var::G3 => Some(6),
            Var::LAMBDA => Some(3),
            Var::T => Some(2),
            Var::WP => Some(2),
            Var::DWP => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for v in [Var::C, Var::E, Var::G2, Var::G3, Var::LAMBDA, Var::Q, Var::T, Var::WP, Var::DWP, Var::aux(3)] {
            assert_eq!(Var::from_name(&v.name()), Some(v));
        }
        assert_eq!(Var::aux(12).name(), "u12");
        assert_eq!(Var::from_name("nope"), None);
    }
}
