//! Parameter-plane conditions for the airfoil model: six polynomials
//! `R_1..R_6` in `(M∞, V)` and the five sign patterns that pin down the
//! number of Jacobi stable fixed points.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{canonicalize_in, parse, Poly, Value, VarOrder};

const R_SOURCES: [&str; 6] = [
    "-9450*V^2*M - 43*V^2 + 135*V*M + 621900*M^2",
    "1800*V^4*M + 1500*V^3*M^2 - 15660000*V^2*M^3 + 4*V^4 + 20*V^3*M \
     - 123675*V^2*M^2 + 297000*V*M^3 + 769590000*M^4",
    "-V^2 + 50*M",
    "V^2*M - 5000",
    "-18900*V^4*M^2 + 43*V^4*M - 135*V^3*M^2 + 795600*V^2*M^3 \
     + 47250000*V^2*M - 215000*V^2 + 675000*V*M - 1615500000*M^2",
    "3600*V^6*M^2 + 3000*V^5*M^3 - 31320000*V^4*M^4 - 4*V^6*M - 20*V^5*M^2 \
     - 146325*V^4*M^3 - 522000*V^3*M^4 + 1579410000*V^2*M^5 - 4500000*V^4*M \
     - 532500000*V^3*M^2 + 155250000000*V^2*M^3 + 20000*V^4 + 100000*V^3*M \
     + 56625000*V^2*M^2 + 28485000000*V*M^3 - 7829550000000*M^4",
];

/// Required signs of `R_1..R_6` per region; `0` means unconstrained.
const REGIONS: [[i8; 6]; 5] = [
    [1, 1, 0, 1, 1, 1],
    [1, 1, 1, -1, 0, 0],
    [1, 1, 1, 1, -1, 1],
    [-1, 0, -1, -1, 1, 1],
    [1, -1, -1, -1, 1, 1],
];

/// Number of Jacobi stable fixed points implied by each region.
const REGION_K: [usize; 5] = [1, 1, 1, 2, 2];

/// One of the five condition sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Region {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl Region {
    pub const ALL: [Region; 5] = [Region::C1, Region::C2, Region::C3, Region::C4, Region::C5];

    fn index(self) -> usize {
        self as usize
    }

    /// Stable fixed point count that the region predicts.
    pub fn stable_count(self) -> usize {
        REGION_K[self.index()]
    }

    /// Sign pattern over `R_1..R_6`; `0` entries are free.
    pub fn signs(self) -> [i8; 6] {
        REGIONS[self.index()]
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index() + 1)
    }
}

/// Values of the condition polynomials at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct RegionReport {
    /// `R_1..R_6` as doubles (exact evaluation decides the signs).
    pub r: [f64; 6],
    pub signs: [i8; 6],
    /// `(M∞ − 10)·R_1⋯R_6 ≠ 0`.
    pub generic: bool,
    /// Every satisfied region, in index order.
    pub satisfied: Vec<Region>,
    /// First satisfied region.
    pub label: Option<Region>,
}

impl RegionReport {
    /// The count predicted by the label; `None` outside every region.
    pub fn predicted_k(&self) -> Option<usize> {
        self.label.map(Region::stable_count)
    }
}

fn polys() -> &'static [Poly; 6] {
    static POLYS: OnceLock<[Poly; 6]> = OnceLock::new();
    POLYS.get_or_init(|| {
        let order = VarOrder::new(&["M", "V"]);
        R_SOURCES.map(|src| {
            let c = canonicalize_in(&parse(src).expect("condition polynomial"), &order)
                .expect("polynomial canonicalizes");
            debug_assert!(c.denom.as_constant().is_some());
            c.numer.scale(&c.denom.as_constant().expect("constant denominator").recip())
        })
    })
}

/// `R_1..R_6` as polynomials in `(M, V)`, with `M` standing for `M∞`.
pub fn condition_polynomials() -> Vec<Poly> {
    polys().to_vec()
}

fn exact(v: &Value) -> Result<BigRational> {
    match v {
        Value::Exact(r) => Ok(r.clone()),
        Value::Float(f) => BigRational::from_float(*f)
            .ok_or_else(|| Error::InvalidArgument(format!("non-finite parameter {f}"))),
    }
}

fn sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Evaluates the region conditions at `(M∞, V)`. Floating inputs are
/// converted to the rationals they represent, so every sign is exact.
pub fn airfoil_region_conditions(minf: impl Into<Value>, v: impl Into<Value>) -> Result<RegionReport> {
    let point = [exact(&minf.into())?, exact(&v.into())?];
    let values: Vec<BigRational> = polys().iter().map(|p| p.eval_exact(&point)).collect();
    let mut signs = [0i8; 6];
    let mut r = [0.0; 6];
    for (k, val) in values.iter().enumerate() {
        signs[k] = sign(val);
        r[k] = num_traits::ToPrimitive::to_f64(val).unwrap_or(f64::NAN);
    }
    let ten = BigRational::from_integer(10.into());
    let generic = point[0] != ten && signs.iter().all(|s| *s != 0);
    let satisfied: Vec<Region> = if generic {
        Region::ALL
            .into_iter()
            .filter(|reg| reg.signs().iter().zip(&signs).all(|(want, got)| *want == 0 || want == got))
            .collect()
    } else {
        Vec::new()
    };
    Ok(RegionReport { r, signs, generic, label: satisfied.first().copied(), satisfied })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_rational;

    fn q(s: &str) -> Value {
        Value::Exact(parse_rational(s).unwrap())
    }

    #[test]
    fn r3_r4_closed_forms() {
        let rep = airfoil_region_conditions(q("2"), q("3")).unwrap();
        assert_eq!(rep.r[2], -9.0 + 100.0);
        assert_eq!(rep.r[3], 18.0 - 5000.0);
    }

    #[test]
    fn r1_by_hand() {
        // M = 1, V = 1: −9450 − 43 + 135 + 621900
        let rep = airfoil_region_conditions(q("1"), q("1")).unwrap();
        assert_eq!(rep.r[0], 612542.0);
    }

    #[test]
    fn mach_ten_is_excluded() {
        let rep = airfoil_region_conditions(q("10"), q("1")).unwrap();
        assert!(!rep.generic);
        assert!(rep.label.is_none());
    }

    #[test]
    fn published_points() {
        let a = airfoil_region_conditions(q("2017/256"), q("83/4")).unwrap();
        assert_eq!(a.label, Some(Region::C5));
        let b = airfoil_region_conditions(q("71/16384"), q("3/16")).unwrap();
        assert_eq!(b.label, Some(Region::C2));
        assert_eq!(b.predicted_k(), Some(1));
    }

    #[test]
    fn polynomials_parse_without_denominators() {
        for p in condition_polynomials() {
            assert!(p.total_degree() >= 1);
        }
        let r6 = &condition_polynomials()[5];
        assert_eq!(r6.len(), 16);
    }
}
