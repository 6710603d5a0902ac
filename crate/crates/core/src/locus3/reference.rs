//! Published closed forms for the locus, as rational functions of `q`.
//! Used to cross-check the computed branches.

use super::solve::{cyclic_branch, Classification, LocusBranch};
use super::CurveFamily;
use crate::exact::rational::int;
use crate::exact::{RatFunc, Rational, Var};

fn parse(s: &str) -> RatFunc {
    RatFunc::parse(s).expect("reference formula parses")
}

/// r = 2: `c / e^2`.
pub fn r2_c_over_e2() -> RatFunc {
    parse("-3/(q+1)^2")
}

/// r = 4: `c^2 / g2` (and `e = 0`).
pub fn r4_c2_over_g2() -> RatFunc {
    parse("(q+2)^2/3")
}

/// r = 5: `c / e^2`.
pub fn r5_c_over_e2() -> RatFunc {
    parse("-3*(7*q^2+35*q+46)/(16*(q+1)^2*(q+4)^2)")
}

/// r = 5: `g2 / e^4` on the branch with `e != 0`.
pub fn r5_g2_over_e4() -> RatFunc {
    parse("27*(4*q^2+20*q+25)/(64*(q+1)^4*(q+4)^4)")
}

/// r = 7: `c^2 / g2` (and `e = 0`).
pub fn r7_c2_over_g2() -> RatFunc {
    parse("25*(q+2)^2*(q+5)^2/(12*(2*q+7)^2)")
}

/// r = 7: coefficient of `e` in the lambda-leading condition, up to the
/// normalization of that condition.
pub fn r7_leading() -> RatFunc {
    parse("5*(q+2)*(q+5)/(144*(q+1)*(q+3)*(q+4)*(q+6))")
}

/// r = 8: `c / e^2`.
pub fn r8_c_over_e2() -> RatFunc {
    parse("-3*(191*q^4+3056*q^3+17598*q^2+42992*q+38384)/(686*(q+1)^2*(q+4)^2*(q+7)^2)")
}

/// Degree-8 polynomial whose cube enters the r = 8 j-invariant; also the
/// numerator of `g2 / e^4`. Constant term 7678355008 (recomputed; the
/// variant 767835508 does not match).
pub const R8_P8: &str =
    "155383*q^8+4972256*q^7+68978821*q^6+541706360*q^5+2632855228*q^4+8104425920*q^3+15416669104*q^2+16555419008*q+7678355008";

/// `R8_P8` with the constant term 767835508.
pub const R8_P8_SHORT_CONSTANT: &str =
    "155383*q^8+4972256*q^7+68978821*q^6+541706360*q^5+2632855228*q^4+8104425920*q^3+15416669104*q^2+16555419008*q+767835508";

/// r = 8: `g2 / e^4` with the given numerator polynomial.
pub fn r8_g2_over_e4_with(numerator: &str) -> RatFunc {
    parse(&format!("27*({numerator})/(470596*(q+1)^4*(q+4)^4*(q+7)^4*(19*q^2+152*q+277))"))
}

pub fn r8_g2_over_e4() -> RatFunc {
    r8_g2_over_e4_with(R8_P8)
}

/// r = 8: the exceptional j-invariant.
pub fn r8_j() -> RatFunc {
    let den = "(q+7)*(q+6)*(q+2)*(q+1)*(67*q^2+533*q+898)*(67*q^2+539*q+922)\
        *(37*q^3+399*q^2+1344*q+1468)*(37*q^3+489*q^2+2064*q+2692)\
        *(367*q^3+5115*q^2+23376*q+34828)*(367*q^3+3693*q^2+12000*q+12724)\
        *(829*q^4+14194*q^3+89097*q^2+242068*q+239236)\
        *(829*q^4+12334*q^3+66777*q^2+156028*q+133156)";
    parse(&format!("-6912*({R8_P8})^3*(19*q^2+152*q+277)/({den})"))
}

/// r = 10: `g2 / c^2` (and `e = 0`).
pub fn r10_g2_over_c2() -> RatFunc {
    parse("3*(2069*q^4+41380*q^3+301017*q^2+941170*q+1071464)/(4400*(q+2)^2*(q+5)^2*(q+8)^2)")
}

/// r = 10: `g3 / c^3`.
pub fn r10_g3_over_c3() -> RatFunc {
    parse(
        "-(96577*q^6+2897310*q^5+35259207*q^4+222299140*q^3+764656215*q^2+1360455150*q+978817201)\
         /(422400*(q+2)^3*(q+5)^2*(q+8)^3)",
    )
}

/// r = 10: the exceptional j-invariant.
pub fn r10_j() -> RatFunc {
    let den = "(5*q+19)*(5*q+31)*(13*q+47)*(13*q+83)*(17*q+73)*(17*q+97)*(19*q+59)\
        *(19*q+131)*(11*q^2+110*q+239)*(23*q^2+200*q+317)*(23*q^2+260*q+617)";
    parse(&format!("-995328*(2069*q^4+41380*q^3+301017*q^2+941170*q+1071464)^3/({den})"))
}

/// r = 13: the exceptional j-invariant.
pub fn r13_j() -> RatFunc {
    let num = "(67*q^2+871*q+2014)^2*(24727*q^6+964353*q^5+15225009*q^4+124224139*q^3\
        +551142996*q^2+1258400208*q+1155995968)^3";
    let den = "(13*q+68)*(13*q+101)*(19*q^2+265*q+796)*(19*q^2+229*q+562)\
        *(83*q^2+1094*q+2936)*(83*q^2+1064*q+2741)*(47*q^3+924*q^2+5481*q+9532)\
        *(47*q^3+909*q^2+5286*q+8824)*(547*q^3+14649*q^2+127758*q+360056)\
        *(547*q^3+6684*q^2+24213*q+26876)*(11*q^2+143*q+332)";
    parse(&format!("-124416*{num}/({den})"))
}

/// The closed form of `quantity` for gap `r`, when one is known.
pub fn closed_form(r: i64, quantity: super::Quantity) -> Option<RatFunc> {
    use super::Quantity::*;
    Some(match (r, quantity) {
        (2, COverE2) => r2_c_over_e2(),
        (4, C2OverG2) => r4_c2_over_g2(),
        (5, COverE2) => r5_c_over_e2(),
        (5, G2OverE4) => r5_g2_over_e4(),
        (7, C2OverG2) => r7_c2_over_g2(),
        (8, COverE2) => r8_c_over_e2(),
        (8, G2OverE4) => r8_g2_over_e4(),
        (8, J) => r8_j(),
        (10, G2OverC2) => r10_g2_over_c2(),
        (10, G3OverC3) => r10_g3_over_c3(),
        (10, J) => r10_j(),
        (13, J) => r13_j(),
        _ => return None,
    })
}

fn at_q(f: &RatFunc, q: i64) -> Rational {
    f.substitute(Var::Q, &RatFunc::constant(int(q)))
        .ok()
        .and_then(|x| x.constant_value())
        .expect("closed forms have no pole at admissible q")
}

/// `k * v^d`.
fn times_power(k: Rational, v: Var, d: u32) -> RatFunc {
    &RatFunc::constant(k) * &RatFunc::var(v).pow(d)
}

fn branch(assign: Vec<(Var, RatFunc)>, square: Option<(Var, RatFunc)>, classification: Classification) -> LocusBranch {
    LocusBranch {
        assignments: assign.into_iter().collect(),
        square_relation: square,
        residual_conditions: Vec::new(),
        assumptions: Vec::new(),
        classification,
        curve: CurveFamily::Generic,
        verified: false,
    }
}

/// The published description of the non-cyclic part of the locus at
/// `(q, r)` (generic curve), or just the cyclic point where nothing else
/// survives. `None` for gaps without a closed form.
///
/// `r = 8` only comes with `j`, so `g3` enters through the square relation
/// of [`r8_g3_squared_over_e12`]; see [`r8_g3_over_e6_candidates`] for the
/// two signs.
pub fn published_branches(q: i64, r: i64) -> Option<Vec<LocusBranch>> {
    use Classification::*;
    let zero = RatFunc::zero;
    let (c, e) = (Var::C, Var::E);
    Some(match r {
        1 => vec![branch(vec![(e, zero())], None, OneParameterFamily)],
        2 => vec![branch(vec![(c, times_power(at_q(&r2_c_over_e2(), q), e, 2))], None, OneParameterFamily)],
        4 => {
            let k = at_q(&r4_c2_over_g2(), q).recip();
            vec![branch(vec![(e, zero()), (Var::G2, times_power(k, c, 2))], None, FiniteSet)]
        }
        5 => vec![
            branch(vec![(c, zero()), (e, zero())], None, FiniteSet),
            branch(
                vec![
                    (c, times_power(at_q(&r5_c_over_e2(), q), e, 2)),
                    (Var::G2, times_power(at_q(&r5_g2_over_e4(), q), e, 4)),
                ],
                None,
                FiniteSet,
            ),
        ],
        7 => {
            let k = at_q(&r7_c2_over_g2(), q).recip();
            vec![branch(vec![(e, zero()), (Var::G2, times_power(k, c, 2))], None, FiniteSet)]
        }
        8 => {
            let g2 = at_q(&r8_g2_over_e4(), q);
            let g3_sq = r8_g3_squared_over_e12(q);
            vec![branch(
                vec![(c, times_power(at_q(&r8_c_over_e2(), q), e, 2)), (Var::G2, times_power(g2, e, 4))],
                Some((Var::G3, times_power(g3_sq, e, 12))),
                ExoticJ,
            )]
        }
        10 => vec![branch(
            vec![
                (e, zero()),
                (Var::G2, times_power(at_q(&r10_g2_over_c2(), q), c, 2)),
                (Var::G3, times_power(at_q(&r10_g3_over_c3(), q), c, 3)),
            ],
            None,
            ExoticJ,
        )],
        11 | 14 | 16 => vec![cyclic_branch(CurveFamily::Generic)],
        _ => return None,
    })
}

/// `g3^2 / e^12` on the r = 8 branch: `g2^3 (j - 1728) / (27 j)` with the
/// published `g2 / e^4` and `j`.
pub fn r8_g3_squared_over_e12(q: i64) -> Rational {
    let g2 = at_q(&r8_g2_over_e4(), q);
    let j = at_q(&r8_j(), q);
    &g2 * &g2 * &g2 * (&j - int(1728)) / (int(27) * &j)
}

/// Both square roots of [`r8_g3_squared_over_e12`], when it is the square
/// of a rational (only `j` is published, so the sign of `g3` is not).
pub fn r8_g3_over_e6_candidates(q: i64) -> Option<[Rational; 2]> {
    let s = r8_g3_squared_over_e12(q);
    let root = |n: &num_bigint::BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    let (n, d) = (root(s.numer())?, root(s.denom())?);
    let x = Rational::new(n, d);
    Some([x.clone(), -x])
}

/// The r = 8 branch with `g3 = g3_over_e6 * e^6`.
pub fn r8_branch_with_g3(q: i64, g3_over_e6: &Rational) -> LocusBranch {
    let (c, e) = (Var::C, Var::E);
    branch(
        vec![
            (c, times_power(at_q(&r8_c_over_e2(), q), e, 2)),
            (Var::G2, times_power(at_q(&r8_g2_over_e4(), q), e, 4)),
            (Var::G3, times_power(g3_over_e6.clone(), e, 6)),
        ],
        None,
        Classification::ExoticJ,
    )
}
