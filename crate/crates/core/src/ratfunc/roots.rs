//! Rational roots and a desk-scale factorization over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::Poly;
use crate::exactnum::{hensel_lift, is_prime, rational_str, FpPoly, Prime, Rational};

/// A factor without rational roots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OtherFactor {
    #[serde(serialize_with = "ser_poly")]
    pub poly: Poly,
    pub multiplicity: usize,
    /// Irreducibility over Q was proved (degree ≤ 3 or mod-p degree sets).
    pub irreducible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalRoot {
    #[serde(with = "rational_str")]
    pub root: Rational,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factorization {
    #[serde(with = "rational_str")]
    pub unit: Rational,
    pub roots: Vec<RationalRoot>,
    pub others: Vec<OtherFactor>,
}

fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn good_prime_for(f: &[BigInt], start: u64) -> (Prime, u64) {
    let lc = f.last().unwrap();
    let deg = f.len() - 1;
    let mut q = start.max(3);
    loop {
        if is_prime(q) && !(lc % BigInt::from(q)).is_zero() {
            let p = Prime::new(q).unwrap();
            let fb = FpPoly::from_ints(p, f);
            if fb.degree() == Some(deg) && fb.gcd(&fb.derivative()).degree() == Some(0) {
                return (p, q);
            }
        }
        q += 1;
    }
}

/// Distinct rational roots of a nonzero polynomial, sorted.
pub fn rational_roots(f: &Poly) -> Vec<Rational> {
    let mut out = Vec::new();
    if f.deg0() == 0 {
        return out;
    }
    let mut g = f.squarefree_part();
    if g.coeff(0).is_zero() {
        out.push(Rational::zero());
        g = g.div_exact(&Poly::x()).unwrap();
    }
    if g.deg0() == 0 {
        return out;
    }
    let prim = g.integer_coeffs();
    let lc = prim.last().unwrap().abs();
    // Cauchy bound on root size
    let bound = prim[..prim.len() - 1]
        .iter()
        .map(|c| Rational::new(c.abs(), lc.clone()))
        .max()
        .unwrap_or_else(Rational::zero)
        + Rational::one();
    let bound = bound.ceil().to_integer();
    let target = BigInt::from(2) * &lc * &bound;
    let (p, q) = good_prime_for(&prim, 3);
    let fbar = FpPoly::from_ints(p, &prim);
    let mut k = 1u32;
    let mut qk = BigInt::from(q);
    while qk <= target {
        qk *= q;
        k += 1;
    }
    let lc_signed = prim.last().unwrap().clone();
    for r in 0..q {
        if fbar.eval(r) != 0 {
            continue;
        }
        let lifted = hensel_lift(&g.primitive(), &BigInt::from(r), p, k)
            .expect("simple root modulo a good prime");
        let res = lifted.residue().unwrap();
        let mut m = (&lc_signed * res).mod_floor(&qk);
        if &m * 2 > qk {
            m -= &qk;
        }
        let cand = Rational::new(m, lc_signed.clone());
        if g.eval(&cand).is_zero() {
            out.push(cand);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if ok[s - d] {
                ok[s] = true;
            }
        }
    }
    ok
}

/// Proves irreducibility of a squarefree polynomial without rational roots
/// when the factor degrees modulo several primes are incompatible with any
/// proper splitting. `false` means "not proved".
pub fn certify_irreducible(f: &Poly) -> bool {
    let n = f.deg0();
    if n <= 1 {
        return n == 1;
    }
    if n <= 3 {
        return rational_roots(f).is_empty();
    }
    let prim = f.integer_coeffs();
    let mut possible = vec![true; n + 1];
    let mut start = 3;
    for _ in 0..24 {
        let (p, q) = good_prime_for(&prim, start);
        start = q + 1;
        let pattern = FpPoly::from_ints(p, &prim).distinct_degree_pattern();
        let degs: Vec<usize> = pattern
            .iter()
            .flat_map(|&(d, c)| std::iter::repeat(d).take(c))
            .collect();
        let sums = subset_sums(&degs, n);
        for (s, flag) in possible.iter_mut().enumerate() {
            *flag &= sums[s];
        }
        if (1..n).all(|s| !possible[s]) {
            return true;
        }
    }
    false
}

/// Squarefree decomposition, rational roots, and the remaining factors.
pub fn factor(f: &Poly) -> Factorization {
    let unit = f.lc();
    let mut roots = Vec::new();
    let mut others = Vec::new();
    for (g, mult) in f.squarefree_decomposition() {
        let mut rest = g.clone();
        for r in rational_roots(&g) {
            rest = rest.div_exact(&Poly::linear_root(&r)).unwrap();
            roots.push(RationalRoot {
                root: r,
                multiplicity: mult,
            });
        }
        if rest.deg0() > 0 {
            let irreducible = certify_irreducible(&rest);
            others.push(OtherFactor {
                poly: rest.monic(),
                multiplicity: mult,
                irreducible,
            });
        }
    }
    roots.sort_by(|a, b| a.root.cmp(&b.root));
    Factorization {
        unit,
        roots,
        others,
    }
}

/// Integer square root check for small discriminants of quadratic factors.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}
