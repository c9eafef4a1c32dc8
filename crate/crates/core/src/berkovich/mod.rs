//! Type II points ζ(a, p^-ρ) with rational centers, their images and
//! tangent directions.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, rational_str, val, Prime, Rational, Valuation};
use crate::newton::vp_ratmap;
use crate::ratfunc::{Point, Poly, RatMap};

/// ζ(center, p^-rho).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskPoint {
    #[serde(with = "rational_str")]
    pub center: Rational,
    #[serde(with = "rational_str")]
    pub rho: Rational,
    pub prime: Prime,
}

impl DiskPoint {
    pub fn new(center: Rational, rho: Rational, prime: Prime) -> DiskPoint {
        DiskPoint { center, rho, prime }
    }

    /// Gauss point ζ(0, 1).
    pub fn gauss(prime: Prime) -> DiskPoint {
        DiskPoint::new(Rational::zero(), Rational::zero(), prime)
    }

    /// `x` lies in the closed disk.
    pub fn contains(&self, x: &Rational) -> bool {
        val(&(x - &self.center), self.prime) >= Valuation::Finite(self.rho.clone())
    }

    /// Whether `d` is a direction at this point.
    pub fn is_direction(&self, d: &TangentDirection) -> bool {
        match d {
            TangentDirection::Infinity => true,
            TangentDirection::Toward(b) => self.contains(b),
        }
    }

    pub fn same_direction(&self, d1: &TangentDirection, d2: &TangentDirection) -> bool {
        match (d1, d2) {
            (TangentDirection::Infinity, TangentDirection::Infinity) => true,
            (TangentDirection::Toward(b1), TangentDirection::Toward(b2)) => {
                val(&(b1 - b2), self.prime) > Valuation::Finite(self.rho.clone())
            }
            _ => false,
        }
    }
}

impl PartialEq for DiskPoint {
    fn eq(&self, o: &DiskPoint) -> bool {
        self.prime == o.prime && self.rho == o.rho && self.contains(&o.center)
    }
}

impl Eq for DiskPoint {}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ({}, {}^-({}))", self.center, self.prime.get(), self.rho)
    }
}

/// A tangent direction at a type II point: the residue class containing a
/// finite point, or the class of ∞.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TangentDirection {
    Toward(#[serde(with = "rational_str")] Rational),
    Infinity,
}

impl fmt::Display for TangentDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangentDirection::Toward(b) => write!(f, "toward {b}"),
            TangentDirection::Infinity => write!(f, "toward ∞"),
        }
    }
}

/// Monomials of `f(b + u)` attaining `min v(e_i) + iρ`.
struct Dominant {
    min: Rational,
    lo: usize,
    hi: usize,
    lead_lo: Rational,
    lead_hi: Rational,
}

fn dominant(f: &Poly, b: &Rational, rho: &Rational, p: Prime) -> Dominant {
    let g = f.taylor_shift(b);
    let mut best: Option<Dominant> = None;
    for (i, c) in g.coeffs().iter().enumerate() {
        let Valuation::Finite(v) = val(c, p) else {
            continue;
        };
        let w = v + int(i as i64) * rho;
        match &mut best {
            Some(d) if w > d.min => {}
            Some(d) if w == d.min => {
                d.hi = i;
                d.lead_hi = c.clone();
            }
            _ => {
                best = Some(Dominant {
                    min: w,
                    lo: i,
                    hi: i,
                    lead_lo: c.clone(),
                    lead_hi: c.clone(),
                })
            }
        }
    }
    best.expect("nonzero polynomial")
}

/// `v(‖h‖_ζ)`.
pub fn seminorm(h: &RatMap, z: &DiskPoint) -> Valuation {
    vp_ratmap(h, &z.center, &z.rho, z.prime)
}

const MAX_REFINEMENTS: usize = 4096;

/// φ(ζ). The center is moved toward the image disk until the reduction of
/// `φ - c` is nonconstant; poles inside the disk are allowed.
pub fn image(phi: &RatMap, z: &DiskPoint) -> Result<DiskPoint> {
    phi.require_degree(1)?;
    let p = z.prime;
    let mut c = match phi.eval_finite(&z.center) {
        Point::Finite(x) => x,
        Point::Infinity => Rational::zero(),
    };
    let den = dominant(phi.den(), &z.center, &z.rho, p);
    for _ in 0..MAX_REFINEMENTS {
        let psi = phi.minus_constant(&c);
        let num = dominant(psi.num(), &z.center, &z.rho, p);
        let sigma = &num.min - &den.min;
        if num.lo == den.lo {
            let t = &num.lead_lo / &den.lead_lo;
            let c2 = &c + &t;
            if seminorm(&phi.minus_constant(&c2), z) > Valuation::Finite(sigma.clone()) {
                c = c2;
                continue;
            }
        }
        return Ok(DiskPoint::new(c, sigma, p));
    }
    Err(Error::Unsupported(format!("image of {z} did not stabilize")))
}

/// Image point, image direction and local degree of φ along `dir`.
pub fn local_action(
    phi: &RatMap,
    z: &DiskPoint,
    dir: &TangentDirection,
) -> Result<(DiskPoint, TangentDirection, usize)> {
    if !z.is_direction(dir) {
        return Err(Error::Invalid(format!("{dir} is not a direction at {z}")));
    }
    let img = image(phi, z)?;
    let p = z.prime;
    let c = img.center.clone();
    let (b, low) = match dir {
        TangentDirection::Toward(b) => (b.clone(), true),
        TangentDirection::Infinity => (z.center.clone(), false),
    };
    let den = dominant(phi.den(), &b, &z.rho, p);
    let (di, dlead) = if low { (den.lo, den.lead_lo) } else { (den.hi, den.lead_hi) };
    // order of the reduction at the class: positive means a zero of the reduced φ - c
    let order = |c: &Rational| -> (i64, Rational) {
        let n = dominant(phi.minus_constant(c).num(), &b, &z.rho, p);
        let (ni, nlead) = if low { (n.lo, n.lead_lo) } else { (n.hi, n.lead_hi) };
        let k = ni as i64 - di as i64;
        (if low { k } else { -k }, nlead)
    };
    let (k, nlead) = order(&c);
    let out = if k > 0 {
        (TangentDirection::Toward(c), k)
    } else if k < 0 {
        (TangentDirection::Infinity, -k)
    } else {
        let c2 = &c + &nlead / &dlead;
        let (k2, _) = order(&c2);
        if k2 <= 0 {
            return Err(Error::Unsupported(format!("reduction of φ at {z} is constant")));
        }
        (TangentDirection::Toward(c2), k2)
    };
    Ok((img, out.0, out.1.to_usize().unwrap()))
}

/// deg_{ζ,v}(φ), always in `1..=deg φ`.
pub fn tangent_multiplicity(phi: &RatMap, z: &DiskPoint, dir: &TangentDirection) -> Result<usize> {
    local_action(phi, z, dir).map(|(_, _, m)| m)
}

/// φ_*(v) as a direction at φ(ζ).
pub fn pushforward(phi: &RatMap, z: &DiskPoint, dir: &TangentDirection) -> Result<TangentDirection> {
    local_action(phi, z, dir).map(|(_, d, _)| d)
}

/// Δ = ρ + v(‖φ'‖_ζ) - v(‖φ‖_ζ), so that δ(φ, ζ) = -Δ log p.
pub fn distortion(phi: &RatMap, z: &DiskPoint) -> Result<Rational> {
    phi.require_degree(1)?;
    let d = seminorm(&phi.derivative(), z);
    let f = seminorm(phi, z);
    match (d, f) {
        (Valuation::Finite(d), Valuation::Finite(f)) => Ok(&z.rho + d - f),
        _ => Err(Error::Degenerate("φ or φ' vanishes identically".into())),
    }
}

/// `m Δ + v(‖φ‖_ζ)`; in absolute-value units G is `-G_v log p`.
pub fn g_diag(phi: &RatMap, z: &DiskPoint, m: usize) -> Result<Rational> {
    if m == 0 || m > phi.degree() {
        return Err(Error::Precondition(format!("m = {m} outside 1..=deg φ")));
    }
    let delta = distortion(phi, z)?;
    let Valuation::Finite(f) = seminorm(phi, z) else {
        unreachable!()
    };
    Ok(int(m as i64) * delta + f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::parse_map;

    fn m(s: &str) -> RatMap {
        parse_map(s).unwrap()
    }

    fn pt(a: i64, rho: i64, p: u64) -> DiskPoint {
        DiskPoint::new(int(a), int(rho), Prime::new(p).unwrap())
    }

    const RIVERA_LETELIER: &str = "-45*(3*z+5)/(z^2*(z-9))";

    #[test]
    fn seminorms() {
        assert_eq!(seminorm(&m(RIVERA_LETELIER), &pt(0, 0, 5)), Valuation::int(1));
        assert_eq!(seminorm(&m("z"), &pt(0, 1, 7)), Valuation::int(1));
        assert_eq!(seminorm(&m("z^2+3*z"), &pt(0, 0, 3)), Valuation::int(0));
    }

    #[test]
    fn images() {
        assert_eq!(image(&m("z^2"), &pt(1, 1, 3)).unwrap(), pt(1, 1, 3));
        assert_eq!(image(&m("z^2"), &pt(0, 1, 5)).unwrap(), pt(0, 2, 5));
        assert_eq!(image(&m("z^2+3*z"), &pt(0, 2, 3)).unwrap(), pt(0, 3, 3));
        // poles in the disk: 1/z fixes the Gauss point
        assert_eq!(image(&m("1/z"), &pt(0, 0, 3)).unwrap(), pt(0, 0, 3));
        assert_eq!(image(&m("1/z"), &pt(0, 2, 3)).unwrap(), pt(0, -2, 3));
        // z^p at the Gauss point, centered near 1: z^3 maps ζ(1, 3^-1) onto ζ(1, 3^-2)
        assert_eq!(image(&m("z^3"), &pt(1, 1, 3)).unwrap(), pt(1, 2, 3));
    }

    #[test]
    fn multiplicities() {
        let toward = |a: i64| TangentDirection::Toward(int(a));
        assert_eq!(tangent_multiplicity(&m("z^2"), &pt(0, 0, 3), &toward(0)).unwrap(), 2);
        assert_eq!(tangent_multiplicity(&m("z^2"), &pt(0, 0, 3), &toward(1)).unwrap(), 1);
        assert_eq!(tangent_multiplicity(&m("z^2"), &pt(0, 0, 5), &toward(1)).unwrap(), 1);
        assert_eq!(tangent_multiplicity(&m("z^2"), &pt(0, 0, 2), &toward(1)).unwrap(), 2);
        let inf = TangentDirection::Infinity;
        let (img, dir, k) = local_action(&m(RIVERA_LETELIER), &pt(0, 0, 5), &inf).unwrap();
        assert_eq!(img, pt(0, 1, 5));
        assert_eq!(dir, TangentDirection::Toward(int(0)));
        assert_eq!(k, 2);
    }

    #[test]
    fn pushforward_classes() {
        let z = pt(0, 0, 5);
        let d = pushforward(&m("z^2"), &z, &TangentDirection::Toward(int(2))).unwrap();
        assert!(z.same_direction(&d, &TangentDirection::Toward(int(4))));
        let d = pushforward(&m("z^2"), &z, &TangentDirection::Infinity).unwrap();
        assert_eq!(d, TangentDirection::Infinity);
        let d = pushforward(&m("1/z"), &z, &TangentDirection::Toward(int(0))).unwrap();
        assert_eq!(d, TangentDirection::Infinity);
        assert!(tangent_multiplicity(&m("z^2"), &pt(0, 1, 5), &TangentDirection::Toward(int(1))).is_err());
    }

    #[test]
    fn distortion_examples() {
        assert_eq!(distortion(&m("z^2"), &pt(0, 0, 2)).unwrap(), int(1));
        assert_eq!(distortion(&m("z^2"), &pt(0, 0, 5)).unwrap(), int(0));
        assert_eq!(distortion(&m("z^2+3*z"), &pt(0, 2, 3)).unwrap(), int(0));
        assert_eq!(g_diag(&m("z^2+3*z"), &pt(0, 0, 3), 2).unwrap(), int(0));
        assert_eq!(g_diag(&m("z^2"), &pt(0, 0, 2), 2).unwrap(), int(2));
    }

    #[test]
    fn g_at_normalized_basin_boundary() {
        // 0 fixed with λ = -3, other root at 1, ∞ fixed
        let phi = m("3*z^2 - 3*z");
        for k in 1..=2 {
            assert_eq!(g_diag(&phi, &pt(0, 0, 3), k).unwrap(), int(1));
        }
    }

    #[test]
    fn disk_point_equality_and_json() {
        let p = Prime::new(3).unwrap();
        assert_eq!(DiskPoint::new(int(1), int(1), p), DiskPoint::new(int(4), int(1), p));
        assert_ne!(DiskPoint::new(int(1), int(2), p), DiskPoint::new(int(4), int(2), p));
        let j = serde_json::to_string(&DiskPoint::new(int(1), Rational::new(1.into(), 2.into()), p)).unwrap();
        assert_eq!(j, r#"{"center":"1","rho":"1/2","prime":3}"#);
        let d: TangentDirection = serde_json::from_str(r#"{"toward":"2/3"}"#).unwrap();
        assert_eq!(d, TangentDirection::Toward(Rational::new(2.into(), 3.into())));
    }
}
