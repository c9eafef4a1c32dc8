//! Rational maps in coprime normal form.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Poly;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Rational};

/// Default bound on the degree of composed maps.
pub const DEFAULT_DEGREE_CAP: usize = 4096;

/// Degree cap, overridable with `ULTRADYN_DEGREE_CAP`.
pub fn degree_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("ULTRADYN_DEGREE_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_DEGREE_CAP)
    })
}

/// A point of P¹(Q).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Rational),
    Infinity,
}

impl Point {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Point::Finite(x) => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl From<Rational> for Point {
    fn from(x: Rational) -> Self {
        Point::Finite(x)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => write!(f, "{x}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Point::Finite(x) => s.serialize_str(&format_rational(x)),
            Point::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            Ok(Point::Infinity)
        } else {
            parse_rational(&s).map(Point::Finite).map_err(serde::de::Error::custom)
        }
    }
}

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMap {
    num: Poly,
    den: Poly,
}

impl RatMap {
    /// Normalizes `num / den`; fails if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Result<RatMap> {
        if den.is_zero() {
            return Err(Error::DivisionByZero { position: 0 });
        }
        if num.is_zero() {
            return Ok(RatMap {
                num,
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.deg0() > 0 {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        } else {
            (num, den)
        };
        let l = den.lc();
        if !l.is_one() {
            let inv = l.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatMap { num, den })
    }

    pub fn polynomial(f: Poly) -> RatMap {
        RatMap {
            num: f,
            den: Poly::one(),
        }
    }

    pub fn identity() -> RatMap {
        RatMap::polynomial(Poly::x())
    }

    pub fn constant(c: Rational) -> RatMap {
        RatMap::polynomial(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg0() == 0
    }

    /// Rejects maps of degree below `min`.
    pub fn require_degree(&self, min: usize) -> Result<()> {
        if self.degree() < min {
            Err(Error::DegenerateMap {
                degree: self.degree(),
            })
        } else {
            Ok(())
        }
    }

    pub fn eval_finite(&self, x: &Rational) -> Point {
        let d = self.den.eval(x);
        if d.is_zero() {
            Point::Infinity
        } else {
            Point::Finite(self.num.eval(x) / d)
        }
    }

    /// Projective evaluation on P¹(Q).
    pub fn evaluate(&self, x: &Point) -> Point {
        match x {
            Point::Finite(x) => self.eval_finite(x),
            Point::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.deg0());
                match dn {
                    None => Point::Finite(Rational::zero()),
                    Some(dn) if dn > dd => Point::Infinity,
                    Some(dn) if dn == dd => Point::Finite(self.num.lc() / self.den.lc()),
                    _ => Point::Finite(Rational::zero()),
                }
            }
        }
    }

    /// `num' den - num den'`.
    pub fn wronskian(&self) -> Poly {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    pub fn derivative(&self) -> RatMap {
        RatMap::new(self.wronskian(), &self.den * &self.den).unwrap()
    }

    /// `self ∘ inner`, bounded by the configured degree cap.
    pub fn compose(&self, inner: &RatMap) -> Result<RatMap> {
        self.compose_capped(inner, degree_cap())
    }

    pub fn compose_capped(&self, inner: &RatMap, cap: usize) -> Result<RatMap> {
        let e = self.degree();
        let total = e * inner.degree();
        if total > cap {
            return Err(Error::DegreeCap { degree: total, cap });
        }
        let num = self.num.homogeneous_compose(&inner.num, &inner.den, e);
        let den = self.den.homogeneous_compose(&inner.num, &inner.den, e);
        RatMap::new(num, den)
    }

    /// n-fold composition, `n >= 1`.
    pub fn iterate(&self, n: usize) -> Result<RatMap> {
        self.iterate_capped(n, degree_cap())
    }

    pub fn iterate_capped(&self, n: usize, cap: usize) -> Result<RatMap> {
        if n == 0 {
            return Err(Error::Invalid("iterate needs n >= 1".into()));
        }
        let d = self.degree();
        if d >= 2 {
            let mut deg: usize = 1;
            for _ in 0..n {
                deg = deg.saturating_mul(d);
                if deg > cap {
                    return Err(Error::DegreeCap { degree: deg, cap });
                }
            }
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose_capped(&acc, cap)?;
        }
        Ok(acc)
    }

    /// `m⁻¹ ∘ self ∘ m`.
    pub fn conjugate(&self, m: &Mobius) -> RatMap {
        let inner = self.compose_capped(&m.to_map(), usize::MAX).unwrap();
        m.inverse()
            .to_map()
            .compose_capped(&inner, usize::MAX)
            .unwrap()
    }

    /// The map `φ - c`.
    pub fn minus_constant(&self, c: &Rational) -> RatMap {
        RatMap {
            num: &self.num - &self.den.scale(c),
            den: self.den.clone(),
        }
    }

    /// `φ(z + a)` written as a map in `z`.
    pub fn translate_source(&self, a: &Rational) -> RatMap {
        RatMap::new(self.num.taylor_shift(a), self.den.taylor_shift(a)).unwrap()
    }

    pub fn mul(&self, o: &RatMap) -> RatMap {
        RatMap::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }

    pub fn add(&self, o: &RatMap) -> RatMap {
        RatMap::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
        .unwrap()
    }

    /// Affine critical points with multiplicity are the roots of the
    /// Wronskian; this is the order of ∞ as a critical point.
    pub fn critical_multiplicity_at_infinity(&self) -> usize {
        let d = self.degree();
        (2 * d - 2).saturating_sub(self.wronskian().deg0())
    }

    pub fn critical_poly(&self) -> Result<Poly> {
        self.require_degree(2)?;
        let w = self.wronskian();
        if w.is_zero() {
            return Err(Error::Degenerate("map is inseparable-like/degenerate".into()));
        }
        Ok(w)
    }

    /// Primitive polynomial whose roots are the affine critical values.
    pub fn critical_values_poly(&self) -> Result<Poly> {
        let w = self.critical_poly()?;
        if w.deg0() == 0 {
            return Ok(Poly::one());
        }
        let r = w.resultant_pencil(&self.den, &self.num);
        Ok(r.primitive())
    }

    /// Image of ∞ under the orbit, and the exact period of ∞ if periodic
    /// with period at most `max`.
    pub fn infinity_period(&self, max: usize) -> Option<usize> {
        let mut x = Point::Infinity;
        for k in 1..=max {
            x = self.evaluate(&x);
            if x.is_infinity() {
                return Some(k);
            }
        }
        None
    }

    /// Conjugate by `z ↦ 1/z`.
    pub fn invert_chart(&self) -> RatMap {
        self.conjugate(&Mobius::inversion())
    }

    /// Multiplier of the cycle through ∞ of exact period `n`.
    pub fn infinity_multiplier(&self, n: usize) -> Result<Rational> {
        let psi = self.invert_chart().iterate(n)?;
        match psi.derivative().eval_finite(&Rational::zero()) {
            Point::Finite(l) => Ok(l),
            Point::Infinity => Err(Error::Degenerate("∞ is not periodic".into())),
        }
    }

    /// Multiplier `(φⁿ)'(x)` at a finite point.
    pub fn multiplier_at(&self, x: &Point, n: usize) -> Result<Point> {
        match x {
            Point::Infinity => self.infinity_multiplier(n).map(Point::Finite),
            Point::Finite(x) => {
                // chain rule along the orbit avoids building φⁿ
                let dphi = self.derivative();
                let mut acc = Rational::one();
                let mut y = Point::Finite(x.clone());
                for _ in 0..n {
                    match &y {
                        Point::Finite(v) if !self.den.eval(v).is_zero() => {
                            let Point::Finite(dv) = dphi.eval_finite(v) else {
                                unreachable!()
                            };
                            acc *= dv;
                        }
                        _ => {
                            // orbit meets ∞ or a pole: fall back to the iterate
                            let it = self.iterate(n)?;
                            return Ok(it.derivative().eval_finite(x));
                        }
                    }
                    y = self.evaluate(&y);
                }
                Ok(Point::Finite(acc))
            }
        }
    }
}

impl fmt::Display for RatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::render(self))
    }
}

impl Serialize for RatMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `z ↦ (a z + b) / (c z + d)` with `ad - bc ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Mobius> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::Invalid("Mobius transformation with ad - bc = 0".into()));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity() -> Mobius {
        Mobius::affine(Rational::one(), Rational::zero())
    }

    /// `z ↦ s z + t`, `s ≠ 0`.
    pub fn affine(s: Rational, t: Rational) -> Mobius {
        assert!(!s.is_zero());
        Mobius {
            a: s,
            b: t,
            c: Rational::zero(),
            d: Rational::one(),
        }
    }

    pub fn translation(t: Rational) -> Mobius {
        Mobius::affine(Rational::one(), t)
    }

    pub fn inversion() -> Mobius {
        Mobius {
            a: Rational::zero(),
            b: Rational::one(),
            c: Rational::one(),
            d: Rational::zero(),
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn to_map(&self) -> RatMap {
        RatMap::new(
            Poly::new(vec![self.b.clone(), self.a.clone()]),
            Poly::new(vec![self.d.clone(), self.c.clone()]),
        )
        .unwrap()
    }

    pub fn apply(&self, x: &Point) -> Point {
        self.to_map().evaluate(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::ratfunc::parse_map;

    fn m(s: &str) -> RatMap {
        parse_map(s).unwrap()
    }

    fn fin(x: Rational) -> Point {
        Point::Finite(x)
    }

    #[test]
    fn evaluation() {
        let phi = m("-45*(3*z+5)/(z^2*(z-9))");
        let cases = [
            (fin(int(0)), Point::Infinity),
            (Point::Infinity, fin(int(0))),
            (fin(int(5)), fin(int(9))),
            (fin(int(9)), Point::Infinity),
            (fin(int(-3)), fin(rat(-5, 3))),
            (fin(rat(-5, 3)), fin(int(0))),
        ];
        for (x, y) in cases {
            assert_eq!(phi.evaluate(&x), y, "at {x}");
        }
        // affine cross-check straight from the formula
        let direct = |z: Rational| {
            let n = int(-45) * (int(3) * &z + int(5));
            let d = &z * &z * (&z - int(9));
            n / d
        };
        assert_eq!(phi.evaluate(&fin(int(5))), fin(direct(int(5))));
        assert_eq!(phi.evaluate(&fin(int(-3))), fin(direct(int(-3))));
        assert_eq!(m("z^2-1").evaluate(&Point::Infinity), Point::Infinity);
        assert_eq!(m("z^2+3*z").evaluate(&fin(rat(-3, 2))), fin(rat(-9, 4)));
    }

    #[test]
    fn derivatives() {
        assert_eq!(m("z^2").derivative(), m("2*z"));
        assert_eq!(m("z^2+3*z").derivative(), m("2*z+3"));
        let phi = m("-45*(3*z+5)/(z^2*(z-9))");
        let w = phi.wronskian();
        assert_eq!(w, Poly::from_ints(&[0, -4050, -540, 270]));
        for r in [0, 5, -3] {
            assert!(w.eval(&int(r)).is_zero());
        }
    }

    #[test]
    fn composition() {
        assert_eq!(m("z^2").iterate(3).unwrap(), m("z^8"));
        assert_eq!(m("z^2-1").compose(&m("z^2-1")).unwrap(), m("z^4-2*z^2"));
        let phi = m("-45*(3*z+5)/(z^2*(z-9))");
        assert_eq!(phi.iterate(2).unwrap().degree(), 9);
        let cap = m("z^2").iterate_capped(13, 4096).unwrap_err();
        assert!(matches!(cap, Error::DegreeCap { .. }));
    }

    #[test]
    fn conjugation() {
        let f = m("(z+1)^2-1");
        assert_eq!(f.conjugate(&Mobius::identity()), f);
        // the coordinate change w = z - 1, i.e. m(z) = z + 1
        let g = m("z^3").conjugate(&Mobius::translation(int(1)));
        assert_eq!(g, m("(z+1)^3-1"));
        let h = m("z^2+3*z").conjugate(&Mobius::affine(int(3), int(0)));
        assert_eq!(h, m("3*z^2+3*z"));
        assert_eq!(h.multiplier_at(&fin(int(0)), 1).unwrap(), fin(int(3)));
    }

    #[test]
    fn critical_data() {
        assert_eq!(m("z^2").critical_multiplicity_at_infinity(), 1);
        assert_eq!(m("z^2").critical_values_poly().unwrap(), Poly::from_ints(&[0, 1]));
        let phi = m("-45*(3*z+5)/(z^2*(z-9))");
        assert_eq!(phi.critical_multiplicity_at_infinity(), 1);
        assert_eq!(
            phi.critical_values_poly().unwrap(),
            Poly::from_ints(&[-45, -22, 3])
        );
        let q = m("z^2+3*z");
        assert_eq!(q.critical_values_poly().unwrap(), Poly::from_ints(&[9, 4]));
    }

    #[test]
    fn infinity_multiplier() {
        assert_eq!(m("z^2-1").infinity_multiplier(1).unwrap(), int(0));
        // 1/(2z) has ∞ -> 0 -> ∞ ... z ↦ 2z + 1/z at ∞ has multiplier 1/2
        assert_eq!(m("2*z+1/z").infinity_multiplier(1).unwrap(), rat(1, 2));
    }
}
