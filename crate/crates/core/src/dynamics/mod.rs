//! Fixed points, multipliers, attraction certificates, PCF orbits,
//! reduction type and attracting-cycle counts.

mod attract;
mod cycles;
mod pcf;
mod reduction;

pub use attract::{
    attraction_disk, critical_value_disk_check, find_attracted_critical,
    find_attracted_critical_cycle, AttractionCertificate, CycleCertificate, CycleRep,
    DiskCheckReport, PadicCycleEvidence, Witness,
};
pub use cycles::{count_attracting_cycles, CycleCount, CycleCountReport};
pub use pcf::{pcf_check, CriticalOrbit, OrbitState, OrbitVerdict, PcfCertificate, PcfConfig, PcfVerdict};
pub use reduction::{escape_threshold, good_reduction, EscapeWitness, ReductionReport, ReductionVerdict};

use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, pow_p, rational_str, val, val_int, Prime, Rational, Valuation};
use crate::newton::{newton_polygon, RootValuation};
use crate::ratfunc::{factor, multiplier_resultant, periodic_poly, Point, Poly, RatMap};

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "ultradyn/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonKind {
    General,
    Polynomial,
    Refined,
}

impl FromStr for EpsilonKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(EpsilonKind::General),
            "polynomial" | "poly" => Ok(EpsilonKind::Polynomial),
            "refined" => Ok(EpsilonKind::Refined),
            _ => Err(Error::Invalid(format!("unknown threshold kind {s:?}"))),
        }
    }
}

/// ε = p^-T; attraction needs `T < v(λ) < ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonThreshold {
    pub prime: Prime,
    pub degree: usize,
    pub kind: EpsilonKind,
    #[serde(with = "rational_str")]
    pub threshold: Rational,
    #[serde(with = "rational_str")]
    pub epsilon: Rational,
}

fn vp(m: usize, p: Prime) -> i64 {
    val_int(&m.into(), p).unwrap() as i64
}

pub fn epsilon(p: Prime, d: usize, kind: EpsilonKind) -> Result<EpsilonThreshold> {
    if d < 2 {
        return Err(Error::Precondition(format!("degree {d} < 2")));
    }
    let t = match kind {
        EpsilonKind::General => d as i64 * (1..=d).map(|m| vp(m, p)).max().unwrap(),
        EpsilonKind::Polynomial => (1..=d).map(|m| m as i64 * vp(m, p)).max().unwrap(),
        EpsilonKind::Refined => {
            let mut best = 0i64;
            for n in 1..=d {
                let l = (n as i64) / 2; // ⌈(n-1)/2⌉
                for ell in 1..=n {
                    for m in 1..=n {
                        best = best.max(l * vp(m, p) + (ell as i64 - l) * vp(ell, p));
                    }
                }
            }
            best
        }
    };
    Ok(EpsilonThreshold {
        prime: p,
        degree: d,
        kind,
        threshold: int(t),
        epsilon: pow_p(p, -t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Superattracting,
    Attracting,
    RationallyIndifferent,
    Indifferent,
    Repelling,
}

impl Classification {
    pub fn is_attracting(self) -> bool {
        matches!(self, Classification::Superattracting | Classification::Attracting)
    }
}

/// Type of a multiplier known only through its valuation.
pub fn classify_valuation(v: &Valuation) -> Classification {
    match v {
        Valuation::Infinity => Classification::Superattracting,
        Valuation::Finite(x) if x.is_positive() => Classification::Attracting,
        Valuation::Finite(x) if x.is_zero() => Classification::Indifferent,
        _ => Classification::Repelling,
    }
}

/// The only rational roots of unity are ±1.
pub fn classify(lambda: &Rational, p: Prime) -> Classification {
    match classify_valuation(&val(lambda, p)) {
        Classification::Indifferent if lambda.abs().is_one() => Classification::RationallyIndifferent,
        c => c,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierValuation {
    pub valuation: Valuation,
    pub count: usize,
    pub class: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedPoint {
    Rational {
        point: Point,
        multiplicity: usize,
        #[serde(with = "rational_str")]
        multiplier: Rational,
        multiplier_valuation: Valuation,
        class: Classification,
    },
    Algebraic {
        #[serde(serialize_with = "ser_poly")]
        factor: Poly,
        multiplicity: usize,
        irreducible: bool,
        root_valuations: Vec<RootValuation>,
        /// Valuation 0 multipliers here are reported as indifferent; whether
        /// they are roots of unity is not decided.
        multipliers: Vec<MultiplierValuation>,
    },
}

pub(crate) fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Valuations of the roots of `f` (zero roots as +∞), with multiplicity.
pub(crate) fn root_valuation_multiset(f: &Poly, p: Prime) -> Vec<(Valuation, usize)> {
    let np = newton_polygon(f, p).expect("nonzero polynomial");
    let mut out = Vec::new();
    if np.ord0() > 0 {
        out.push((Valuation::Infinity, np.ord0()));
    }
    for r in np.root_valuations() {
        out.push((Valuation::Finite(r.valuation), r.count));
    }
    out
}

/// All fixed points in P¹: rational ones exactly, the rest by irreducible
/// factor with Newton-polygon data.
pub fn fixed_points(phi: &RatMap, p: Prime) -> Result<Vec<FixedPoint>> {
    phi.require_degree(2)?;
    let fix = periodic_poly(phi, 1)?;
    let fac = factor(&fix);
    let mut out = Vec::new();
    for r in &fac.roots {
        let Point::Finite(l) = phi.multiplier_at(&Point::Finite(r.root.clone()), 1)? else {
            unreachable!("fixed points are not poles")
        };
        out.push(FixedPoint::Rational {
            point: Point::Finite(r.root.clone()),
            multiplicity: r.multiplicity,
            multiplier_valuation: val(&l, p),
            class: classify(&l, p),
            multiplier: l,
        });
    }
    for o in &fac.others {
        let np = newton_polygon(&o.poly, p)?;
        let mults = multiplier_resultant(phi, &o.poly);
        let multipliers = root_valuation_multiset(&mults, p)
            .into_iter()
            .map(|(v, count)| MultiplierValuation {
                class: classify_valuation(&v),
                valuation: v,
                count,
            })
            .collect();
        out.push(FixedPoint::Algebraic {
            factor: o.poly.clone(),
            multiplicity: o.multiplicity,
            irreducible: o.irreducible,
            root_valuations: np.root_valuations(),
            multipliers,
        });
    }
    let at_inf = phi.degree() + 1 - fix.deg0();
    if at_inf > 0 {
        let l = phi.infinity_multiplier(1)?;
        out.push(FixedPoint::Rational {
            point: Point::Infinity,
            multiplicity: at_inf,
            multiplier_valuation: val(&l, p),
            class: classify(&l, p),
            multiplier: l,
        });
    }
    Ok(out)
}

/// Rational fixed points, ∞ excluded, sorted.
pub fn rational_fixed_points(phi: &RatMap) -> Result<Vec<Rational>> {
    Ok(factor(&periodic_poly(phi, 1)?).roots.into_iter().map(|r| r.root).collect())
}

/// Rational critical points (with ∞) and the remaining critical factors.
pub(crate) struct CriticalData {
    pub rational: Vec<(Point, usize)>,
    pub others: Vec<(Poly, usize, bool)>,
}

pub(crate) fn critical_data(phi: &RatMap) -> Result<CriticalData> {
    let w = phi.critical_poly()?;
    let fac = factor(&w);
    let mut rational: Vec<(Point, usize)> = fac
        .roots
        .iter()
        .map(|r| (Point::Finite(r.root.clone()), r.multiplicity))
        .collect();
    let at_inf = phi.critical_multiplicity_at_infinity();
    if at_inf > 0 {
        rational.push((Point::Infinity, at_inf));
    }
    let others = fac
        .others
        .into_iter()
        .map(|o| (o.poly, o.multiplicity, o.irreducible))
        .collect();
    Ok(CriticalData { rational, others })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::ratfunc::parse_map;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn thresholds() {
        let e = epsilon(pr(2), 2, EpsilonKind::General).unwrap();
        assert_eq!(e.threshold, int(2));
        assert_eq!(e.epsilon, rat(1, 4));
        assert_eq!(epsilon(pr(5), 2, EpsilonKind::General).unwrap().epsilon, int(1));
        assert_eq!(epsilon(pr(3), 4, EpsilonKind::Polynomial).unwrap().threshold, int(3));
        assert_eq!(epsilon(pr(3), 3, EpsilonKind::General).unwrap().threshold, int(3));
        assert!(epsilon(pr(3), 1, EpsilonKind::General).is_err());
        for d in 2..8 {
            let g = epsilon(pr(2), d, EpsilonKind::General).unwrap().threshold;
            let q = epsilon(pr(2), d, EpsilonKind::Polynomial).unwrap().threshold;
            let r = epsilon(pr(2), d, EpsilonKind::Refined).unwrap().threshold;
            assert!(q <= g && r <= g, "d = {d}");
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&int(3), pr(3)), Classification::Attracting);
        assert_eq!(classify(&int(-1), pr(7)), Classification::RationallyIndifferent);
        assert_eq!(classify(&int(5), pr(5)), Classification::Attracting);
        assert_eq!(classify(&int(0), pr(5)), Classification::Superattracting);
        assert_eq!(classify(&int(2), pr(5)), Classification::Indifferent);
        assert_eq!(classify(&rat(1, 3), pr(3)), Classification::Repelling);
    }

    #[test]
    fn fixed_points_of_examples() {
        let fps = fixed_points(&parse_map("z^2-3/4").unwrap(), pr(3)).unwrap();
        let summary: Vec<(Point, Classification)> = fps
            .iter()
            .map(|f| match f {
                FixedPoint::Rational { point, class, .. } => (point.clone(), *class),
                _ => panic!(),
            })
            .collect();
        assert_eq!(
            summary,
            vec![
                (Point::Finite(rat(-1, 2)), Classification::RationallyIndifferent),
                (Point::Finite(rat(3, 2)), Classification::Attracting),
                (Point::Infinity, Classification::Superattracting),
            ]
        );
        let fps = fixed_points(&parse_map("-45*(3*z+5)/(z^2*(z-9))").unwrap(), pr(5)).unwrap();
        assert_eq!(fps.len(), 1);
        let FixedPoint::Algebraic { root_valuations, irreducible, .. } = &fps[0] else {
            panic!()
        };
        assert!(irreducible);
        let flat: Vec<(Rational, usize)> = root_valuations.iter().map(|r| (r.valuation.clone(), r.count)).collect();
        assert_eq!(flat, vec![(int(1), 1), (rat(1, 2), 2), (int(0), 1)]);
        let fps = fixed_points(&parse_map("z^2").unwrap(), pr(7)).unwrap();
        assert_eq!(fps.len(), 3);
    }
}
