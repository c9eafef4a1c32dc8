//! Weil heights of rationals and algebraic numbers, multiplier heights and
//! the PCF height bound.

mod mahler;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::dynamics::{epsilon, pcf_check, EpsilonKind, PcfConfig, PcfVerdict, SCHEMA};
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, ln_abs, primes_up_to, Prime, Rational};
use crate::ratfunc::{factor, fixed_multiplier_poly, multiplier_poly, Poly, RatMap};

pub(crate) use mahler::log_mahler_bounds;

/// Default absolute error target for numeric heights.
pub const HEIGHT_TOLERANCE: f64 = 1e-9;

/// `log(arg)/denom` with `arg >= 1` rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactLog {
    pub arg: Rational,
    pub denom: u32,
}

impl fmt::Display for ExactLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log({})", format_rational(&self.arg))?;
        if self.denom != 1 {
            write!(f, "/{}", self.denom)?;
        }
        Ok(())
    }
}

/// A height: exact as the log of a rational when possible, otherwise a
/// certified numeric enclosure `|h - approx| <= err`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightValue {
    pub exact: Option<ExactLog>,
    pub approx: f64,
    pub err: f64,
}

fn ln_rational(x: &Rational) -> f64 {
    ln_abs(x.numer()) - ln_abs(x.denom())
}

impl HeightValue {
    pub fn log_of(arg: Rational, denom: u32) -> HeightValue {
        assert!(arg.is_positive() && denom > 0);
        let l = ln_rational(&arg);
        let err = 4.0 * f64::EPSILON * (ln_abs(arg.numer()) + ln_abs(arg.denom()) + 1.0) / denom as f64;
        HeightValue {
            approx: l / denom as f64,
            err,
            exact: Some(ExactLog { arg, denom }),
        }
    }

    pub fn zero() -> HeightValue {
        HeightValue::log_of(Rational::one(), 1)
    }

    fn divide(self, k: u32) -> HeightValue {
        match self.exact {
            Some(e) => HeightValue::log_of(e.arg, e.denom * k),
            None => HeightValue {
                exact: None,
                approx: self.approx / k as f64,
                err: self.err / k as f64,
            },
        }
    }

    fn plus(&self, o: &HeightValue) -> HeightValue {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => HeightValue::log_of(
                num_traits::pow(a.arg.clone(), b.denom as usize) * num_traits::pow(b.arg.clone(), a.denom as usize),
                a.denom * b.denom,
            ),
            _ => HeightValue {
                exact: None,
                approx: self.approx + o.approx,
                err: self.err + o.err,
            },
        }
    }

    /// `self <= other`, exactly when both sides are exact, else up to `tol`.
    pub fn le(&self, other: &HeightValue, tol: f64) -> bool {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return num_traits::pow(a.arg.clone(), b.denom as usize) <= num_traits::pow(b.arg.clone(), a.denom as usize);
        }
        self.approx - self.err <= other.approx + other.err + tol
    }

    /// Exact equality of two exact heights.
    pub fn exact_eq(&self, other: &HeightValue) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => {
                num_traits::pow(a.arg.clone(), b.denom as usize) == num_traits::pow(b.arg.clone(), a.denom as usize)
            }
            _ => false,
        }
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(e) => write!(f, "{e}"),
            None => write!(f, "{:.12} ± {:.1e}", self.approx, self.err),
        }
    }
}

impl Serialize for HeightValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HeightValue", 3)?;
        st.serialize_field("exact", &self.exact.as_ref().map(|e| e.to_string()))?;
        st.serialize_field("approx", &self.approx)?;
        st.serialize_field("err", &self.err)?;
        st.end()
    }
}

/// `h(a/b) = log max(|a|, |b|)`.
pub fn height_rational(x: &Rational) -> HeightValue {
    let m = x.numer().abs().max(x.denom().clone());
    HeightValue::log_of(Rational::from_integer(m), 1)
}

/// Monic integer polynomials dividing some `x^N - 1`.
fn is_cyclotomic_product(c: &[BigInt]) -> bool {
    let n = c.len() - 1;
    if !c[n].abs().is_one() || !c[0].abs().is_one() {
        return false;
    }
    let f = Poly::new(c.iter().map(|x| Rational::from_integer(x.clone())).collect());
    let mut r = Poly::one();
    let x = Poly::x();
    for _ in 1..=(6 * n * n).max(6) {
        r = (&r * &x).rem(&f);
        if r == Poly::one() {
            return true;
        }
    }
    false
}

/// `log M(f)` for a nonzero polynomial, exact where the roots allow it.
pub fn log_mahler_measure(f: &Poly) -> Result<HeightValue> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("Mahler measure"));
    }
    // M is multiplicative; split off repeated roots
    let g = f.gcd(&f.derivative());
    if g.deg0() > 0 {
        let h = f.div_exact(&g).expect("gcd divides");
        return Ok(log_mahler_measure(&g)?.plus(&log_mahler_measure(&h)?));
    }
    let mut c = f.primitive().integer_coeffs();
    let z = c.iter().take_while(|x| x.is_zero()).count();
    c.drain(..z);
    let n = c.len() - 1;
    if n == 0 {
        return Ok(HeightValue::log_of(Rational::from_integer(c[0].abs()), 1));
    }
    if is_cyclotomic_product(&c) {
        return Ok(HeightValue::zero());
    }
    let b = log_mahler_bounds(&c)?;
    if b.all_outside {
        return Ok(HeightValue::log_of(Rational::from_integer(c[0].abs()), 1));
    }
    if b.all_inside {
        return Ok(HeightValue::log_of(Rational::from_integer(c[n].abs()), 1));
    }
    Ok(HeightValue {
        exact: None,
        approx: (b.lower + b.upper) / 2.0,
        err: (b.upper - b.lower) / 2.0 + 4.0 * f64::EPSILON * b.upper.abs(),
    })
}

/// Height of a root of the irreducible polynomial `minpoly`.
pub fn height_algebraic(minpoly: &Poly) -> Result<HeightValue> {
    if minpoly.deg0() == 0 {
        return Err(Error::Invalid("a minimal polynomial has positive degree".into()));
    }
    let fac = factor(minpoly);
    let pieces = fac.roots.len() + fac.others.len();
    let repeated = fac.roots.iter().any(|r| r.multiplicity > 1) || fac.others.iter().any(|o| o.multiplicity > 1);
    if pieces > 1 || repeated {
        return Err(Error::Invalid(format!("{minpoly} is reducible; factor it first")));
    }
    if let Some(r) = fac.roots.first() {
        return Ok(height_rational(&r.root));
    }
    let h = log_mahler_measure(minpoly)?.divide(minpoly.deg0() as u32);
    if h.err > HEIGHT_TOLERANCE {
        return Err(Error::Precision(format!("height enclosure {h} is wider than {HEIGHT_TOLERANCE}")));
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorHeight {
    #[serde(serialize_with = "crate::ratfunc::ser_poly_lambda")]
    pub factor: Poly,
    pub degree: usize,
    pub multiplicity: usize,
    pub certified_irreducible: bool,
    /// The factor may split; `height` is then `log M(factor)`, which bounds
    /// the height of each root.
    pub conservative: bool,
    pub height: HeightValue,
}

fn factor_heights(f: &Poly) -> Result<Vec<FactorHeight>> {
    let fac = factor(f);
    let mut out = Vec::new();
    for r in &fac.roots {
        out.push(FactorHeight {
            factor: Poly::linear_root(&r.root),
            degree: 1,
            multiplicity: r.multiplicity,
            certified_irreducible: true,
            conservative: false,
            height: height_rational(&r.root),
        });
    }
    for o in &fac.others {
        let (height, conservative) = if o.irreducible {
            (height_algebraic(&o.poly)?, false)
        } else {
            (log_mahler_measure(&o.poly)?, true)
        };
        out.push(FactorHeight {
            factor: o.poly.clone(),
            degree: o.poly.deg0(),
            multiplicity: o.multiplicity,
            certified_irreducible: o.irreducible,
            conservative,
            height,
        });
    }
    Ok(out)
}

fn max_height(hs: &[FactorHeight]) -> HeightValue {
    let mut best = HeightValue::zero();
    for h in hs {
        if !h.height.le(&best, 0.0) {
            best = h.height.clone();
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierHeights {
    pub schema: &'static str,
    pub map: String,
    pub period: usize,
    /// `fixed_multiplier_poly` for period 1, else `multiplier_poly`.
    pub source: &'static str,
    pub factors: Vec<FactorHeight>,
    /// Multiplier of an ∞-cycle of exact period n, when not already among the factors.
    pub infinity: Option<FactorHeight>,
    pub max_height: HeightValue,
}

pub fn multiplier_heights(phi: &RatMap, n: usize) -> Result<MultiplierHeights> {
    phi.require_degree(2)?;
    // for n = 1 the full fixed-point polynomial keeps the multiplicity of ∞
    let (source, factors, infinity) = if n == 1 {
        ("fixed_multiplier_poly", factor_heights(&fixed_multiplier_poly(phi)?)?, None)
    } else {
        let mp = multiplier_poly(phi, n)?;
        let inf = mp.infinity.map(|l| FactorHeight {
            factor: Poly::linear_root(&l),
            degree: 1,
            multiplicity: 1,
            certified_irreducible: true,
            conservative: false,
            height: height_rational(&l),
        });
        ("multiplier_poly", factor_heights(&mp.poly)?, inf)
    };
    let mut all = factors.clone();
    all.extend(infinity.clone());
    Ok(MultiplierHeights {
        schema: SCHEMA,
        map: phi.to_string(),
        period: n,
        source,
        max_height: max_height(&all),
        factors,
        infinity,
    })
}

fn lcm_upto(d: usize) -> BigInt {
    (1..=d).fold(BigInt::one(), |a, k| a.lcm(&BigInt::from(k)))
}

/// `Σ_{p <= d} log ε_{p,d}^{-1} = d Σ_{n <= d} Λ(n) = log lcm(1..d)^d`.
pub fn pcf_fixed_multiplier_bound(d: usize) -> Result<HeightValue> {
    if d < 2 {
        return Err(Error::Precondition(format!("degree {d} < 2")));
    }
    let mut m = Rational::one();
    for p in primes_up_to(d as u64) {
        m /= epsilon(Prime::new(p)?, d, EpsilonKind::General)?.epsilon;
    }
    debug_assert_eq!(m, Rational::from_integer(num_traits::pow(lcm_upto(d), d)));
    Ok(HeightValue::log_of(m, 1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corollary13Report {
    pub schema: &'static str,
    pub map: String,
    pub bound: HeightValue,
    pub multipliers: Vec<FactorHeight>,
    pub max_height: HeightValue,
    pub pass: bool,
    /// Some multiplier has height exactly log 4.
    pub equality: bool,
}

/// Fixed-point multipliers of a PCF quadratic map have height at most log 4.
pub fn corollary13_check(phi: &RatMap) -> Result<Corollary13Report> {
    if phi.degree() != 2 {
        return Err(Error::Precondition(format!("map has degree {}, expected 2", phi.degree())));
    }
    let cert = pcf_check(phi, &PcfConfig::default())?;
    match cert.verdict {
        PcfVerdict::Pcf => {}
        PcfVerdict::NotPcf => return Err(Error::Precondition(format!("{phi} is not PCF"))),
        PcfVerdict::Indeterminate => {
            return Err(Error::Indeterminate(format!("PCF status of {phi} is undecided")))
        }
    }
    let bound = pcf_fixed_multiplier_bound(2)?;
    let multipliers = factor_heights(&fixed_multiplier_poly(phi)?)?;
    let pass = multipliers.iter().all(|m| m.height.le(&bound, HEIGHT_TOLERANCE));
    let equality = multipliers.iter().any(|m| m.height.exact_eq(&bound));
    Ok(Corollary13Report {
        schema: SCHEMA,
        map: phi.to_string(),
        max_height: max_height(&multipliers),
        bound,
        multipliers,
        pass,
        equality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::ratfunc::{parse_map, parse_poly};

    fn log_exact(h: &HeightValue) -> String {
        h.exact.as_ref().map(|e| e.to_string()).unwrap_or_default()
    }

    #[test]
    fn rational_heights() {
        assert_eq!(log_exact(&height_rational(&int(2))), "log(2)");
        assert_eq!(log_exact(&height_rational(&rat(-9, 4))), "log(9)");
        assert_eq!(height_rational(&int(1)).approx, 0.0);
        assert_eq!(height_rational(&int(0)).approx, 0.0);
    }

    #[test]
    fn algebraic_heights() {
        let h = height_algebraic(&parse_poly("z^2-2*z-4").unwrap()).unwrap();
        assert_eq!(log_exact(&h), "log(4)/2");
        assert!(h.exact_eq(&height_rational(&int(2))));
        assert_eq!(log_exact(&height_algebraic(&parse_poly("z-5").unwrap()).unwrap()), "log(5)");
        assert_eq!(height_algebraic(&parse_poly("z^2+1").unwrap()).unwrap().approx, 0.0);
        let h = height_algebraic(&parse_poly("z^2-z-1").unwrap()).unwrap();
        assert!(h.exact.is_none());
        assert!((h.approx - ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2.0).abs() < 1e-12);
        assert!(h.err <= HEIGHT_TOLERANCE);
        assert!(matches!(
            height_algebraic(&parse_poly("z^2-1").unwrap()),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn multiplier_height_reports() {
        let hs = |s: &str| -> Vec<(String, usize)> {
            let r = multiplier_heights(&parse_map(s).unwrap(), 1).unwrap();
            assert!(r.infinity.is_none());
            let mut v: Vec<_> = r.factors.iter().map(|f| (log_exact(&f.height), f.multiplicity)).collect();
            v.sort();
            v
        };
        assert_eq!(hs("z^2-1"), vec![("log(1)".to_string(), 1), ("log(4)/2".to_string(), 1)]);
        // 0 and ∞ both have multiplier 0
        assert_eq!(hs("z^2"), vec![("log(1)".to_string(), 2), ("log(2)".to_string(), 1)]);
        assert_eq!(hs("z^2/(z-1/3)"), vec![("log(1)".to_string(), 1), ("log(1)".to_string(), 2)]);
        let r = multiplier_heights(&parse_map("z^2+1/4").unwrap(), 2).unwrap();
        assert_eq!(r.factors.len(), 1);
        assert_eq!(log_exact(&r.factors[0].height), "log(5)");
    }

    #[test]
    fn bound_values() {
        assert_eq!(log_exact(&pcf_fixed_multiplier_bound(2).unwrap()), "log(4)");
        assert!(pcf_fixed_multiplier_bound(3).unwrap().exact_eq(&HeightValue::log_of(int(6 * 6 * 6), 1)));
        assert!(pcf_fixed_multiplier_bound(4).unwrap().exact_eq(&HeightValue::log_of(int(12 * 12 * 12 * 12), 1)));
    }

    #[test]
    fn corollary_on_small_corpus() {
        let r = corollary13_check(&parse_map("z^2-1").unwrap()).unwrap();
        assert!(r.pass && !r.equality);
        assert!(r.max_height.exact_eq(&height_rational(&int(2))));
        let r = corollary13_check(&parse_map("z^2-2").unwrap()).unwrap();
        assert!(r.pass && r.equality);
        assert!(matches!(
            corollary13_check(&parse_map("-45*(3*z+5)/(z^2*(z-9))").unwrap()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            corollary13_check(&parse_map("z^2+1").unwrap()),
            Err(Error::Precondition(_))
        ));
    }
}
