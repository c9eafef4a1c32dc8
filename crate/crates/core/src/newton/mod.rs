//! Newton polygons at a prime and valuation polygons (copolygons) of
//! rational functions.
//!
//! Radii are valuations: ρ = -log_p r, so the closed disk of radius `p^-ρ`
//! about `a` is `{x : v(x - a) >= ρ}`. A copolygon is the function
//! `ρ ↦ v(‖h‖_{ζ(a, p^-ρ)})`. Its slope on `(ρ, ρ+ε)` counts zeros minus
//! poles in the open disk, and on `(ρ-ε, ρ)` in the closed disk.

mod piecewise;
mod svg;

pub use piecewise::PiecewiseLinear;
pub use svg::render_svg;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, rational_str, val, Prime, Rational, Valuation};
use crate::ratfunc::{Poly, RatMap};

/// Lower convex hull of `{(i, v_p(c_i))}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    prime: Prime,
    #[serde(serialize_with = "ser_vertices")]
    vertices: Vec<(usize, Rational)>,
}

fn ser_vertices<S: serde::Serializer>(
    v: &[(usize, Rational)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let out: Vec<(usize, String)> = v.iter().map(|(i, x)| (*i, x.to_string())).collect();
    out.serialize(s)
}

/// Root valuation with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootValuation {
    #[serde(with = "rational_str")]
    pub valuation: Rational,
    pub count: usize,
}

fn cross(o: &(usize, Rational), a: &(usize, Rational), b: &(usize, Rational)) -> Rational {
    let (ox, ax, bx) = (int(o.0 as i64), int(a.0 as i64), int(b.0 as i64));
    (&ax - &ox) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&bx - &ox)
}

impl NewtonPolygon {
    /// Hull of arbitrary finite points `(i, value)`, `i` distinct.
    pub fn from_points(prime: Prime, mut pts: Vec<(usize, Rational)>) -> NewtonPolygon {
        pts.sort_by_key(|(i, _)| *i);
        let mut hull: Vec<(usize, Rational)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Rational::zero() {
                hull.pop();
            }
            hull.push(p);
        }
        NewtonPolygon {
            prime,
            vertices: hull,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn vertices(&self) -> &[(usize, Rational)] {
        &self.vertices
    }

    /// Order of vanishing at 0.
    pub fn ord0(&self) -> usize {
        self.vertices[0].0
    }

    /// Segment slopes with horizontal lengths, left to right.
    pub fn segments(&self) -> Vec<(Rational, usize)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                ((&w[1].1 - &w[0].1) / int(len as i64), len)
            })
            .collect()
    }

    /// Valuations of the nonzero roots, in decreasing order of valuation.
    pub fn root_valuations(&self) -> Vec<RootValuation> {
        self.segments()
            .into_iter()
            .map(|(s, len)| RootValuation {
                valuation: -s,
                count: len,
            })
            .collect()
    }

    /// Number of roots (0 included, as valuation +∞) with `v >= rho`, or
    /// `v > rho` when `strict`.
    pub fn count_roots_beyond(&self, rho: &Rational, strict: bool) -> usize {
        self.ord0()
            + self
                .root_valuations()
                .iter()
                .filter(|r| if strict { &r.valuation > rho } else { &r.valuation >= rho })
                .map(|r| r.count)
                .sum::<usize>()
    }

    /// Copolygon `ρ ↦ min_i (v_i + iρ)` of the hull.
    pub fn copolygon(&self) -> PiecewiseLinear {
        let lines: Vec<(i64, Rational)> = self
            .vertices
            .iter()
            .map(|(i, v)| (*i as i64, v.clone()))
            .collect();
        PiecewiseLinear::lower_envelope(&lines)
    }
}

pub fn newton_polygon(f: &Poly, p: Prime) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("Newton polygon"));
    }
    let pts = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match val(c, p) {
            Valuation::Finite(v) => Some((i, v)),
            Valuation::Infinity => None,
        })
        .collect();
    Ok(NewtonPolygon::from_points(p, pts))
}

/// `ρ ↦ v(‖f‖_{ζ(a, p^-ρ)})` for a nonzero polynomial.
pub fn poly_copolygon(f: &Poly, a: &Rational, p: Prime) -> Result<PiecewiseLinear> {
    Ok(newton_polygon(&f.taylor_shift(a), p)?.copolygon())
}

/// Valuation polygon of `h` about `a`: VP(num) - VP(den).
pub fn copolygon(h: &RatMap, a: &Rational, p: Prime) -> Result<PiecewiseLinear> {
    let n = poly_copolygon(h.num(), a, p)?;
    let d = poly_copolygon(h.den(), a, p)?;
    Ok(n.sub(&d))
}

/// `min_i (v(c_i) + iρ)` over Taylor coefficients at `a`, evaluated directly.
pub fn vp_at(f: &Poly, a: &Rational, rho: &Rational, p: Prime) -> Valuation {
    f.taylor_shift(a)
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| val(c, p) + &(int(i as i64) * rho))
        .min()
        .unwrap_or(Valuation::Infinity)
}

/// `v(‖h‖_{ζ(a, p^-ρ)})`.
pub fn vp_ratmap(h: &RatMap, a: &Rational, rho: &Rational, p: Prime) -> Valuation {
    match vp_at(h.num(), a, rho, p) {
        Valuation::Infinity => Valuation::Infinity,
        Valuation::Finite(n) => {
            let d = vp_at(h.den(), a, rho, p).finite().cloned().expect("nonzero denominator");
            Valuation::Finite(n - d)
        }
    }
}

/// Closed disk `{x : v(x - a) >= ρ}` or open disk `{x : v(x - a) > ρ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskSpec {
    #[serde(with = "rational_str")]
    pub center: Rational,
    #[serde(with = "rational_str")]
    pub rho: Rational,
    pub open: bool,
}

impl DiskSpec {
    pub fn closed(center: Rational, rho: Rational) -> DiskSpec {
        DiskSpec {
            center,
            rho,
            open: false,
        }
    }

    pub fn open(center: Rational, rho: Rational) -> DiskSpec {
        DiskSpec {
            center,
            rho,
            open: true,
        }
    }

    pub fn contains(&self, x: &Rational, p: Prime) -> bool {
        let v = val(&(x - &self.center), p);
        if self.open {
            v > Valuation::Finite(self.rho.clone())
        } else {
            v >= Valuation::Finite(self.rho.clone())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Zero,
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Toward smaller radii, ρ + ε.
    Inner,
    /// Toward larger radii, ρ - ε.
    Outer,
}

/// Zeros or poles of `h` in the disk, with multiplicity.
pub fn count_in_disk(h: &RatMap, disk: &DiskSpec, p: Prime, target: Target) -> usize {
    let f = match target {
        Target::Zero => h.num(),
        Target::Pole => h.den(),
    };
    if f.is_zero() {
        return 0;
    }
    newton_polygon(&f.taylor_shift(&disk.center), p)
        .unwrap()
        .count_roots_beyond(&disk.rho, disk.open)
}

/// Copolygon slope next to ρ on the given side.
pub fn weierstrass_degree(h: &RatMap, disk: &DiskSpec, p: Prime, side: Side) -> Result<i64> {
    let c = copolygon(h, &disk.center, p)?;
    Ok(match side {
        Side::Inner => c.slope_right(&disk.rho),
        Side::Outer => c.slope_left(&disk.rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::ratfunc::parse_map;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn rv(v: Rational, count: usize) -> RootValuation {
        RootValuation { valuation: v, count }
    }

    #[test]
    fn fixed_point_quartic() {
        let f = Poly::from_ints(&[225, 135, 0, -9, 1]);
        let np = newton_polygon(&f, p(5)).unwrap();
        assert_eq!(
            np.vertices(),
            &[(0, int(2)), (1, int(1)), (3, int(0)), (4, int(0))]
        );
        assert_eq!(
            np.root_valuations(),
            vec![rv(int(1), 1), rv(rat(1, 2), 2), rv(int(0), 1)]
        );
        // oracle: a point is a vertex iff it lies strictly below every chord over it
        let pts = [(0, int(2)), (1, int(1)), (2, int(100)), (3, int(0)), (4, int(0))];
        let mut brute = Vec::new();
        for (k, (x, y)) in pts.iter().enumerate() {
            let below = pts.iter().enumerate().all(|(i, (xi, yi))| {
                pts.iter().enumerate().all(|(j, (xj, yj))| {
                    if !(xi < x && x < xj) || i == k || j == k {
                        return true;
                    }
                    let t = rat(x - xi, xj - xi);
                    y < &(yi + &t * (yj - yi))
                })
            });
            if below {
                brute.push((*x as usize, y.clone()));
            }
        }
        assert_eq!(np.vertices(), brute.as_slice());
    }

    #[test]
    fn ord_zero_and_negative_valuations() {
        let np = newton_polygon(&Poly::from_ints(&[0, -1, 1]), p(7)).unwrap();
        assert_eq!(np.ord0(), 1);
        assert_eq!(np.root_valuations(), vec![rv(int(0), 1)]);
        let f = Poly::new(vec![int(0), rat(1, 3), int(1)]);
        let np = newton_polygon(&f, p(3)).unwrap();
        assert_eq!(np.root_valuations(), vec![rv(int(-1), 1)]);
    }

    #[test]
    fn copolygon_examples() {
        let c = copolygon(&parse_map("z^2-z").unwrap(), &int(0), p(5)).unwrap();
        assert_eq!(c.breakpoints(), &[(int(0), int(0))]);
        assert_eq!(c.slopes(), &[2, 1]);
        let c = copolygon(&parse_map("z^2").unwrap(), &int(0), p(5)).unwrap();
        assert!(c.breakpoints().is_empty());
        assert_eq!(c.slopes(), &[2]);
        let phi = parse_map("-45*(3*z+5)/(z^2*(z-9))").unwrap();
        let c = copolygon(&phi, &int(0), p(5)).unwrap();
        assert_eq!(c.value(&int(0)), int(1));
        // oracle: VP = min(1+ρ, 2) - min(3ρ, 2ρ)
        for x in [int(-3), rat(-1, 2), int(0), rat(1, 3), int(1), int(4)] {
            let lhs = (int(1) + &x).min(int(2)) - (int(3) * &x).min(int(2) * &x);
            assert_eq!(c.value(&x), lhs, "ρ = {x}");
        }
    }

    #[test]
    fn disk_counts() {
        let h = parse_map("z^2+3*z").unwrap();
        assert_eq!(count_in_disk(&h, &DiskSpec::closed(int(0), int(1)), p(3), Target::Zero), 2);
        assert_eq!(count_in_disk(&h, &DiskSpec::open(int(0), int(1)), p(3), Target::Zero), 1);
        let phi = parse_map("-45*(3*z+5)/(z^2*(z-9))").unwrap();
        assert_eq!(count_in_disk(&phi, &DiskSpec::closed(int(0), int(0)), p(5), Target::Pole), 3);
    }

    #[test]
    fn weierstrass_examples() {
        let z2 = parse_map("z^2").unwrap();
        let d = DiskSpec::closed(int(0), int(0));
        assert_eq!(weierstrass_degree(&z2, &d, p(7), Side::Inner).unwrap(), 2);
        assert_eq!(weierstrass_degree(&z2, &d, p(7), Side::Outer).unwrap(), 2);
        let h = parse_map("z^2+3*z").unwrap();
        let d = DiskSpec::closed(int(0), int(1));
        assert_eq!(weierstrass_degree(&h, &d, p(3), Side::Inner).unwrap(), 1);
        assert_eq!(weierstrass_degree(&h, &d, p(3), Side::Outer).unwrap(), 2);
        let phi = parse_map("-45*(3*z+5)/(z^2*(z-9))").unwrap();
        let d = DiskSpec::closed(int(0), int(0));
        assert_eq!(weierstrass_degree(&phi, &d, p(5), Side::Outer).unwrap(), -2);
    }
}
