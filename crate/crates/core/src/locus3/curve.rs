use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::rational::int;
use crate::exact::{MultiPoly, Var};

/// Which cubics `y^2 = 4x^3 - g2 x - g3` the locus is computed over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveFamily {
    /// `g2`, `g3` free.
    Generic,
    /// `g2 = g3 = 0`.
    Cuspidal,
    /// `g2 = 3 t^2`, `g3 = t^3` (a double root at `x = t/2`).
    Nodal,
}

impl CurveFamily {
    pub const ALL: [CurveFamily; 3] = [CurveFamily::Generic, CurveFamily::Cuspidal, CurveFamily::Nodal];

    /// Unknowns, highest weight first.
    pub fn unknowns(self) -> Vec<Var> {
        match self {
            CurveFamily::Generic => vec![Var::G3, Var::G2, Var::C, Var::E],
            CurveFamily::Cuspidal => vec![Var::C, Var::E],
            CurveFamily::Nodal => vec![Var::T, Var::C, Var::E],
        }
    }

    /// Number of curve parameters.
    pub fn moduli(self) -> usize {
        match self {
            CurveFamily::Generic => 2,
            CurveFamily::Cuspidal => 0,
            CurveFamily::Nodal => 1,
        }
    }

    pub fn substitution(self) -> BTreeMap<Var, MultiPoly> {
        let t = MultiPoly::var(Var::T);
        match self {
            CurveFamily::Generic => BTreeMap::new(),
            CurveFamily::Cuspidal => [(Var::G2, MultiPoly::zero()), (Var::G3, MultiPoly::zero())].into(),
            CurveFamily::Nodal => [(Var::G2, t.pow(2).scale(&int(3))), (Var::G3, t.pow(3))].into(),
        }
    }

    pub fn specialize(self, p: &MultiPoly) -> MultiPoly {
        match self {
            CurveFamily::Generic => p.clone(),
            _ => p.substitute_many(&self.substitution()),
        }
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveFamily::Generic => "generic",
            CurveFamily::Cuspidal => "cuspidal",
            CurveFamily::Nodal => "nodal",
        })
    }
}

impl FromStr for CurveFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "generic" => Ok(CurveFamily::Generic),
            "cuspidal" => Ok(CurveFamily::Cuspidal),
            "nodal" => Ok(CurveFamily::Nodal),
            _ => Err(Error::InvalidInput(format!("unknown curve family '{s}'"))),
        }
    }
}
