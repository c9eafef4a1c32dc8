//! Dense univariate polynomials over an exact coefficient domain.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Rational;

/// Coefficient domain: an integral domain with exact division.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn czero() -> Self;
    fn cone() -> Self;
    fn cis_zero(&self) -> bool;
    fn cadd(&self, o: &Self) -> Self;
    fn csub(&self, o: &Self) -> Self;
    fn cmul(&self, o: &Self) -> Self;
    fn cneg(&self) -> Self;
    /// `self / o`, assuming `o` divides `self`.
    fn cdiv_exact(&self, o: &Self) -> Self;

    fn cpow(&self, e: usize) -> Self {
        let mut acc = Self::cone();
        for _ in 0..e {
            acc = acc.cmul(self);
        }
        acc
    }
}

impl Coeff for Rational {
    fn czero() -> Self {
        Rational::zero()
    }
    fn cone() -> Self {
        Rational::one()
    }
    fn cis_zero(&self) -> bool {
        self.is_zero()
    }
    fn cadd(&self, o: &Self) -> Self {
        self + o
    }
    fn csub(&self, o: &Self) -> Self {
        self - o
    }
    fn cmul(&self, o: &Self) -> Self {
        self * o
    }
    fn cneg(&self) -> Self {
        -self
    }
    fn cdiv_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn cpow(&self, e: usize) -> Self {
        num_traits::pow(self.clone(), e)
    }
}

/// Coefficients in increasing degree; never has trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DensePoly<C> {
    coeffs: Vec<C>,
}

pub type Poly = DensePoly<Rational>;

impl<C: Coeff> DensePoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.cis_zero()) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        DensePoly { coeffs: vec![C::cone()] }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::czero(); k];
        v.push(c);
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(C::cone(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::czero)
    }

    pub fn lc(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::czero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Multiplicity of 0 as a root (`None` for the zero polynomial).
    pub fn ord0(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.cis_zero())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.cmul(c)).collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![C::czero(); k];
        v.extend(self.coeffs.iter().cloned());
        DensePoly { coeffs: v }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::czero();
        for c in self.coeffs.iter().rev() {
            acc = acc.cmul(x).cadd(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let mut s = C::czero();
                for _ in 0..i {
                    s = s.cadd(c);
                }
                s
            })
            .collect();
        Self::new(v)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.clone();
        let mut e = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let s = Self::monomial(r.lc(), dr - db);
            r = &r.scale(&lb) - &(&s * b);
            e -= 1;
        }
        r.scale(&lb.cpow(e))
    }

    pub fn div_exact_scalar(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.cdiv_exact(c)).collect())
    }

    /// Resultant by the subresultant pseudo-remainder sequence.
    pub fn resultant(&self, other: &Self) -> C {
        let (Some(_), Some(_)) = (self.degree(), other.degree()) else {
            return C::czero();
        };
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut negate = false;
        if a.deg0() < b.deg0() {
            std::mem::swap(&mut a, &mut b);
            if a.deg0() % 2 == 1 && b.deg0() % 2 == 1 {
                negate = true;
            }
        }
        let sign = |x: C, neg: bool| if neg { x.cneg() } else { x };
        if b.deg0() == 0 {
            return sign(b.lc().cpow(a.deg0()), negate);
        }
        let mut g = C::cone();
        let mut h = C::cone();
        loop {
            let (da, db) = (a.deg0(), b.deg0());
            let delta = da - db;
            if da % 2 == 1 && db % 2 == 1 {
                negate = !negate;
            }
            let r = a.prem(&b);
            if r.is_zero() {
                return C::czero();
            }
            a = b;
            b = r.div_exact_scalar(&g.cmul(&h.cpow(delta)));
            g = a.lc();
            h = if delta == 0 {
                h
            } else {
                g.cpow(delta).cdiv_exact(&h.cpow(delta - 1))
            };
            if b.deg0() == 0 {
                let da = a.deg0();
                let res = b.lc().cpow(da).cdiv_exact(&h.cpow(da - 1));
                return sign(res, negate);
            }
        }
    }
}

impl<C: Coeff> Add for &DensePoly<C> {
    type Output = DensePoly<C>;
    fn add(self, o: &DensePoly<C>) -> DensePoly<C> {
        let n = self.coeffs.len().max(o.coeffs.len());
        DensePoly::new((0..n).map(|i| self.coeff(i).cadd(&o.coeff(i))).collect())
    }
}

impl<C: Coeff> Sub for &DensePoly<C> {
    type Output = DensePoly<C>;
    fn sub(self, o: &DensePoly<C>) -> DensePoly<C> {
        let n = self.coeffs.len().max(o.coeffs.len());
        DensePoly::new((0..n).map(|i| self.coeff(i).csub(&o.coeff(i))).collect())
    }
}

impl<C: Coeff> Mul for &DensePoly<C> {
    type Output = DensePoly<C>;
    fn mul(self, o: &DensePoly<C>) -> DensePoly<C> {
        if self.is_zero() || o.is_zero() {
            return DensePoly::zero();
        }
        let mut v = vec![C::czero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cis_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].cadd(&a.cmul(b));
            }
        }
        DensePoly::new(v)
    }
}

impl<C: Coeff> Neg for &DensePoly<C> {
    type Output = DensePoly<C>;
    fn neg(self) -> DensePoly<C> {
        DensePoly::new(self.coeffs.iter().map(|c| c.cneg()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for DensePoly<C> {
            type Output = DensePoly<C>;
            fn $m(self, o: DensePoly<C>) -> DensePoly<C> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Polynomials over Q form a coefficient domain for resultants in a
/// second variable.
impl Coeff for Poly {
    fn czero() -> Self {
        Poly::zero()
    }
    fn cone() -> Self {
        Poly::one()
    }
    fn cis_zero(&self) -> bool {
        self.is_zero()
    }
    fn cadd(&self, o: &Self) -> Self {
        self + o
    }
    fn csub(&self, o: &Self) -> Self {
        self - o
    }
    fn cmul(&self, o: &Self) -> Self {
        self * o
    }
    fn cneg(&self) -> Self {
        -self
    }
    fn cdiv_exact(&self, o: &Self) -> Self {
        let (q, r) = self.divrem(o);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
    fn cpow(&self, e: usize) -> Self {
        self.pow(e)
    }
}

impl Poly {
    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
    }

    pub fn from_rational(c: Rational) -> Poly {
        Poly::constant(c)
    }

    /// `z - r`.
    pub fn linear_root(r: &Rational) -> Poly {
        Poly::new(vec![-r, Rational::one()])
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(da) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if da < dd {
            return (Poly::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); da - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Quotient if `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.monic(), o.monic());
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }

    /// Returns `(c, P)` with `self = c * P`, `P` integral with coprime
    /// coefficients and positive leading coefficient.
    pub fn primitive_part(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), Poly::zero());
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if self.lc().is_negative() {
            g = -g;
        }
        let prim = Poly::new(ints.iter().map(|c| Rational::from_integer(c / &g)).collect());
        (Rational::new(g, l), prim)
    }

    pub fn primitive(&self) -> Poly {
        self.primitive_part().1
    }

    /// Integer coefficients of the primitive part.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.primitive().coeffs.iter().map(|c| c.to_integer()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Coefficients of `f(z + a)`.
    pub fn taylor_shift(&self, a: &Rational) -> Poly {
        if a.is_zero() {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division by (z - a) read backwards
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Poly::new(c)
    }

    /// `f(g(z))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Homogenized evaluation `Σ c_i A^i B^(e-i)` for `e >= deg self`.
    pub fn homogeneous_compose(&self, a: &Poly, b: &Poly, e: usize) -> Poly {
        let mut a_pows = vec![Poly::one()];
        let mut b_pows = vec![Poly::one()];
        for _ in 0..e {
            a_pows.push(a_pows.last().unwrap() * a);
            b_pows.push(b_pows.last().unwrap() * b);
        }
        let mut acc = Poly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = (&a_pows[i] * &b_pows[e - i]).scale(c);
            acc = &acc + &t;
        }
        acc
    }

    /// `z^n f(1/z)` for `n >= deg f`.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut v = vec![Rational::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[n - i] = c.clone();
        }
        Poly::new(v)
    }

    /// `f(c z)`.
    pub fn scale_var(&self, c: &Rational) -> Poly {
        let mut pw = Rational::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        Poly::new(v)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg0() == 0
    }

    /// Monic squarefree part.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).unwrap().monic()
    }

    /// Yun's algorithm: monic squarefree `f_i` with `self = lc * Π f_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.deg0() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let c = f.gcd(&df);
        let mut w = f.div_exact(&c).unwrap();
        let mut y = df.div_exact(&c).unwrap();
        let mut z = &y - &w.derivative();
        let mut i = 1;
        while w.deg0() > 0 {
            let g = w.gcd(&z);
            if g.deg0() > 0 {
                out.push((g.clone(), i));
            }
            w = w.div_exact(&g).unwrap();
            y = z.div_exact(&g).unwrap();
            z = &y - &w.derivative();
            i += 1;
        }
        out
    }

    /// Resultant of `self(z)` and `a(z) * w - b(z)` as a polynomial in `w`.
    pub fn resultant_pencil(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let pencil: DensePoly<Poly> = DensePoly::new(
            (0..n)
                .map(|i| Poly::new(vec![-b.coeff(i), a.coeff(i)]))
                .collect(),
        );
        let lifted: DensePoly<Poly> =
            DensePoly::new(self.coeffs.iter().map(|c| Poly::constant(c.clone())).collect());
        lifted.resultant(&pencil)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        super::parse::render_poly(self, var)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    /// Sylvester determinant by fraction-free Gaussian elimination.
    fn sylvester_resultant(a: &Poly, b: &Poly) -> Rational {
        let (m, n) = (a.deg0(), b.deg0());
        let size = m + n;
        let mut mat = vec![vec![Rational::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                mat[i][i + j] = a.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                mat[n + i][i + j] = b.coeff(n - j);
            }
        }
        let mut det = Rational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            det *= &mat[col][col];
            for r in col + 1..size {
                let f = &mat[r][col] / &mat[col][col];
                for c in col..size {
                    let t = &f * &mat[col][c];
                    mat[r][c] -= t;
                }
            }
        }
        det
    }

    #[test]
    fn ring_laws() {
        let a = p(&[1, 2, 3]);
        let b = p(&[-1, 0, 0, 5]);
        let (q, r) = (&a * &b).divrem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        let (q, r) = b.divrem(&a);
        assert_eq!(&(&q * &a) + &r, b);
    }

    #[test]
    fn taylor_shift_examples() {
        assert_eq!(p(&[0, 0, 1]).taylor_shift(&int(1)), p(&[1, 2, 1]));
        let f = p(&[225, 135, 0, -9, 1]);
        assert_eq!(f.taylor_shift(&int(0)), f);
        let g = p(&[0, 3, 1]).taylor_shift(&rat(-3, 2));
        assert_eq!(g, Poly::new(vec![rat(-9, 4), int(0), int(1)]));
        assert_eq!(g.taylor_shift(&rat(3, 2)), p(&[0, 3, 1]));
    }

    #[test]
    fn resultant_matches_sylvester() {
        let cases = [
            (p(&[1, 0, 1]), p(&[-2, 1])),
            (p(&[225, 135, 0, -9, 1]), p(&[0, 0, 0, 1, 7])),
            (p(&[3, -1, 4, 1, -5]), p(&[2, 7, 1])),
            (p(&[1, 1]), p(&[1, 1, 1, 1])),
            (p(&[5]), p(&[1, 2, 3])),
            (p(&[0, 0, 2, 1]), p(&[0, 3, 0, 0, 1])),
        ];
        for (a, b) in cases {
            assert_eq!(a.resultant(&b), sylvester_resultant(&a, &b), "{a} / {b}");
            assert_eq!(b.resultant(&a), sylvester_resultant(&b, &a), "{b} / {a}");
        }
    }

    #[test]
    fn pencil_resultant() {
        // roots of z^2 - z - 1 pushed through 2z
        let r = p(&[-1, -1, 1]).resultant_pencil(&p(&[1]), &p(&[0, 2]));
        assert_eq!(r.monic(), p(&[-4, -2, 1]));
    }

    #[test]
    fn squarefree() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[2, 0, 1]);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(p(&[2, 0, 1]), 1), (p(&[-1, 1]), 3)]);
        assert_eq!(f.squarefree_part(), p(&[-2, 2, -1, 1]));
    }

    #[test]
    fn primitive() {
        let f = Poly::new(vec![rat(-3, 2), rat(9, 4)]);
        let (c, g) = f.primitive_part();
        assert_eq!(c, rat(3, 4));
        assert_eq!(g, p(&[-2, 3]));
    }
}
