use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::curve::CurveFamily;
use super::solve::LocusBranch;
use crate::error::{Error, Result};
use crate::exact::rational::int;
use crate::exact::{MultiPoly, RatFunc, Rational, Var};

/// Weight-zero ratios read off a branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "c/e^2")]
    COverE2,
    #[serde(rename = "g2/e^4")]
    G2OverE4,
    #[serde(rename = "g3/e^6")]
    G3OverE6,
    #[serde(rename = "g2/c^2")]
    G2OverC2,
    #[serde(rename = "g3/c^3")]
    G3OverC3,
    #[serde(rename = "c^2/g2")]
    C2OverG2,
    #[serde(rename = "j")]
    J,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::COverE2,
        Quantity::G2OverE4,
        Quantity::G3OverE6,
        Quantity::G2OverC2,
        Quantity::G3OverC3,
        Quantity::C2OverG2,
        Quantity::J,
    ];

    /// As a rational function of `c, e, g2, g3`.
    pub fn expression(self) -> RatFunc {
        let v = |x: Var, k: u32| MultiPoly::var(x).pow(k);
        let (n, d) = match self {
            Quantity::COverE2 => (v(Var::C, 1), v(Var::E, 2)),
            Quantity::G2OverE4 => (v(Var::G2, 1), v(Var::E, 4)),
            Quantity::G3OverE6 => (v(Var::G3, 1), v(Var::E, 6)),
            Quantity::G2OverC2 => (v(Var::G2, 1), v(Var::C, 2)),
            Quantity::G3OverC3 => (v(Var::G3, 1), v(Var::C, 3)),
            Quantity::C2OverG2 => (v(Var::C, 2), v(Var::G2, 1)),
            Quantity::J => {
                let g2c = v(Var::G2, 3);
                let disc = &g2c - &v(Var::G3, 2).scale(&int(27));
                (g2c.scale(&int(1728)), disc)
            }
        };
        RatFunc::new(n, d).expect("nonzero denominator")
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::COverE2 => "c/e^2",
            Quantity::G2OverE4 => "g2/e^4",
            Quantity::G3OverE6 => "g3/e^6",
            Quantity::G2OverC2 => "g2/c^2",
            Quantity::G3OverC3 => "g3/c^3",
            Quantity::C2OverG2 => "c^2/g2",
            Quantity::J => "j",
        })
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.to_string() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown quantity '{s}'")))
    }
}

/// A j-invariant; `Infinite` on the discriminant locus.
#[derive(Clone, Debug, PartialEq)]
pub enum JValue {
    Finite(RatFunc),
    Infinite,
}

impl fmt::Display for JValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JValue::Finite(j) => write!(f, "{j}"),
            JValue::Infinite => f.write_str("infinite"),
        }
    }
}

/// `1728 g2^3 / (g2^3 - 27 g3^2)`.
pub fn j_invariant(g2: &RatFunc, g3: &RatFunc) -> JValue {
    let g2c = g2.pow(3);
    let disc = &g2c - &(&g3.pow(2) * &RatFunc::constant(int(27)));
    if disc.is_zero() {
        return JValue::Infinite;
    }
    JValue::Finite(&(&g2c * &RatFunc::constant(int(1728))) / &disc)
}

impl LocusBranch {
    /// `expr` restricted to the branch; `None` where the branch makes its
    /// denominator vanish.
    pub fn evaluate(&self, expr: &RatFunc) -> Option<RatFunc> {
        let num = self.reduce(&self.curve.specialize(expr.numer()));
        let den = self.reduce(&self.curve.specialize(expr.denom()));
        if den.is_zero() {
            return None;
        }
        RatFunc::new(num, den).ok()
    }

    /// The value of `quantity` when it is a constant on the branch.
    pub fn quantity(&self, quantity: Quantity) -> Option<Rational> {
        if !self.is_consistent() {
            return None;
        }
        self.evaluate(&quantity.expression())?.constant_value()
    }

    /// j of the branch curve: `Some(Infinite)` on a nodal branch, `None`
    /// when j is undefined (cuspidal) or not constant along the branch.
    pub fn j(&self) -> Option<JValue> {
        match self.curve {
            CurveFamily::Cuspidal => return None,
            CurveFamily::Nodal => {
                let t = self.evaluate(&RatFunc::var(Var::T))?;
                return (!t.is_zero()).then_some(JValue::Infinite);
            }
            CurveFamily::Generic => {}
        }
        let g2 = self.evaluate(&RatFunc::var(Var::G2))?;
        let g3 = self.evaluate(&RatFunc::var(Var::G3))?;
        if g2.is_zero() && g3.is_zero() {
            return None;
        }
        match j_invariant(&g2, &g3) {
            JValue::Infinite => Some(JValue::Infinite),
            JValue::Finite(j) => {
                let j = self.evaluate(&j)?;
                j.constant_value().map(|c| JValue::Finite(RatFunc::constant(c)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_special_values() {
        let g = RatFunc::var(Var::G2);
        assert_eq!(j_invariant(&RatFunc::zero(), &RatFunc::var(Var::G3)), JValue::Finite(RatFunc::zero()));
        assert_eq!(j_invariant(&g, &RatFunc::zero()), JValue::Finite(RatFunc::constant(int(1728))));
        let t = RatFunc::var(Var::T);
        let g2 = &t.pow(2) * &RatFunc::constant(int(3));
        assert_eq!(j_invariant(&g2, &t.pow(3)), JValue::Infinite);
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.to_string().parse::<Quantity>().unwrap(), q);
        }
    }
}
