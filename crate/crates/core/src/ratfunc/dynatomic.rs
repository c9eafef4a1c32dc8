//! Periodic, dynatomic and multiplier polynomials.

use serde::Serialize;

use super::{Poly, RatMap};
use crate::error::{Error, Result};
use crate::exactnum::{rational_str, Rational};

fn mobius_mu(mut n: usize) -> i32 {
    let mut mu = 1;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return 0;
            }
            mu = -mu;
        }
        q += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

pub(crate) fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// Monic numerator of `φⁿ(z) - z`.
pub fn periodic_poly(phi: &RatMap, n: usize) -> Result<Poly> {
    let it = phi.iterate(n)?;
    let f = it.num() - &it.den().shift_up(1);
    if f.is_zero() {
        return Err(Error::Degenerate(format!("φ^{n} is the identity")));
    }
    Ok(f.monic())
}

/// `Π_{k|n} periodic_poly(φ, k)^μ(n/k)`, or a degeneracy error when the
/// quotient is not a polynomial.
pub fn dynatomic_poly(phi: &RatMap, n: usize) -> Result<Poly> {
    if n == 0 {
        return Err(Error::Invalid("period must be positive".into()));
    }
    let mut top = Poly::one();
    let mut bottom = Poly::one();
    for k in divisors(n) {
        match mobius_mu(n / k) {
            1 => top = &top * &periodic_poly(phi, k)?,
            -1 => bottom = &bottom * &periodic_poly(phi, k)?,
            _ => {}
        }
    }
    top.div_exact(&bottom)
        .map(|q| q.monic())
        .ok_or_else(|| Error::Degenerate(format!("dynatomic quotient for n = {n} is not a polynomial")))
}

/// Monic polynomial in λ whose roots are the multipliers of the period-n
/// cycles avoiding ∞, one root per cycle; the multiplier of an ∞-cycle of
/// exact period n is kept apart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierPoly {
    pub period: usize,
    #[serde(serialize_with = "ser_poly_lambda")]
    pub poly: Poly,
    #[serde(serialize_with = "ser_opt_rat")]
    pub infinity: Option<Rational>,
}

pub(crate) fn ser_poly_lambda<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.fmt_var("λ"))
}

fn ser_opt_rat<S: serde::Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(q) => rational_str::serialize(q, s),
        None => s.serialize_none(),
    }
}

/// Exact n-th root of a monic polynomial, if it is an n-th power.
pub fn nth_root(f: &Poly, n: usize) -> Option<Poly> {
    if n == 1 || f.deg0() == 0 {
        return Some(f.clone());
    }
    let mut out = Poly::one();
    for (g, m) in f.squarefree_decomposition() {
        if m % n != 0 {
            return None;
        }
        out = &out * &g.pow(m / n);
    }
    Some(out)
}

/// `Π (λ - (φⁿ)'(γ))` over the roots γ of `points`, which must be fixed by φⁿ.
pub(crate) fn multiplier_resultant(phi_n: &RatMap, points: &Poly) -> Poly {
    let d = phi_n.derivative();
    points.resultant_pencil(d.den(), d.num()).monic()
}

pub fn multiplier_poly(phi: &RatMap, n: usize) -> Result<MultiplierPoly> {
    phi.require_degree(2)?;
    let dyn_n = dynatomic_poly(phi, n)?;
    if !dyn_n.is_squarefree() {
        return Err(Error::Degenerate(format!(
            "dynatomic polynomial for n = {n} is not squarefree"
        )));
    }
    let it = phi.iterate(n)?;
    let mut r = multiplier_resultant(&it, &dyn_n);
    let mut infinity = None;
    if phi.infinity_period(n) == Some(n) {
        let l = phi.infinity_multiplier(n)?;
        if n > 1 {
            let lin = Poly::linear_root(&l).pow(n - 1);
            r = r.div_exact(&lin).ok_or_else(|| {
                Error::Degenerate("∞-cycle multiplier does not divide the resultant".into())
            })?;
        }
        infinity = Some(l);
    }
    let poly = nth_root(&r, n).ok_or_else(|| {
        Error::Degenerate(format!("multiplier resultant for n = {n} is not an n-th power"))
    })?;
    Ok(MultiplierPoly {
        period: n,
        poly,
        infinity,
    })
}

/// Degree d+1 monic polynomial whose roots are all fixed-point multipliers
/// with multiplicity, ∞ included.
pub fn fixed_multiplier_poly(phi: &RatMap) -> Result<Poly> {
    phi.require_degree(2)?;
    let fix = periodic_poly(phi, 1)?;
    let mut r = multiplier_resultant(phi, &fix);
    let at_inf = phi.degree() + 1 - fix.deg0();
    if at_inf > 0 {
        let l = phi.infinity_multiplier(1)?;
        r = &r * &Poly::linear_root(&l).pow(at_inf);
    }
    Ok(r)
}

/// Elementary symmetric functions σ₁..σ_{d+1} of the fixed-point multipliers.
pub fn sigma_invariants(phi: &RatMap) -> Result<Vec<Rational>> {
    let r = fixed_multiplier_poly(phi)?;
    let n = r.deg0();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let c = r.coeff(n - k);
        out.push(if k % 2 == 1 { -c } else { c });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::ratfunc::parse_map;

    fn m(s: &str) -> RatMap {
        parse_map(s).unwrap()
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic_poly(&m("z^2"), 1).unwrap(), Poly::from_ints(&[0, -1, 1]));
        assert_eq!(dynatomic_poly(&m("z^2"), 2).unwrap(), Poly::from_ints(&[1, 1, 1]));
        let (q, r) = Poly::from_ints(&[0, -1, 0, 0, 1]).divrem(&Poly::from_ints(&[0, -1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_ints(&[1, 1, 1]));
        let f = periodic_poly(&m("z^2+1/4"), 1).unwrap();
        assert_eq!(f, Poly::linear_root(&rat(1, 2)).pow(2));
        let phi = m("-45*(3*z+5)/(z^2*(z-9))");
        assert_eq!(periodic_poly(&phi, 1).unwrap(), Poly::from_ints(&[225, 135, 0, -9, 1]));
    }

    #[test]
    fn multiplier_examples() {
        let mp = multiplier_poly(&m("z^2-1"), 1).unwrap();
        assert_eq!(mp.poly, Poly::from_ints(&[-4, -2, 1]));
        assert_eq!(mp.infinity, Some(int(0)));
        let mp = multiplier_poly(&m("z^2"), 1).unwrap();
        assert_eq!(mp.poly, Poly::from_ints(&[0, -2, 1]));
        assert_eq!(mp.infinity, Some(int(0)));
        let mp = multiplier_poly(&m("z^2+1/4"), 2).unwrap();
        assert_eq!(mp.poly, Poly::from_ints(&[-5, 1]));
        // oracle: the 2-cycle of z^2 + c has multiplier 4(c + 1)
        for c in [rat(1, 3), int(-2), rat(-7, 5)] {
            let phi = RatMap::polynomial(Poly::new(vec![c.clone(), int(0), int(1)]));
            let mp = multiplier_poly(&phi, 2).unwrap();
            assert_eq!(mp.poly, Poly::linear_root(&(int(4) * (c + int(1)))));
        }
    }

    #[test]
    fn degenerate_dynatomic_is_reported() {
        // -1/2 is fixed with multiplier -1, so it collides into the 2-cycle factor
        let e = multiplier_poly(&m("z^2-3/4"), 2).unwrap_err();
        assert!(matches!(e, Error::Degenerate(_)));
    }

    #[test]
    fn infinity_cycle() {
        let phi = m("1/z^2");
        assert_eq!(phi.infinity_period(4), Some(2));
        let mp = multiplier_poly(&phi, 2).unwrap();
        assert_eq!(mp.infinity, Some(int(0)));
        // φ² = z^4: the period-2 points are 0 and ∞ only, so no affine cycle remains
        assert_eq!(mp.poly, Poly::one());
    }

    #[test]
    fn silverman_relation_examples() {
        for s in ["z^2", "z^2-1", "(z^2+2*z)/(3*z+1)", "z^2+1/4"] {
            let sig = sigma_invariants(&m(s)).unwrap();
            assert_eq!(sig[2], &sig[0] - int(2), "{s}");
        }
        assert_eq!(sigma_invariants(&m("z^2-1")).unwrap(), vec![int(2), int(-4), int(0)]);
    }
}
