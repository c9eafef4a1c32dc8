//! Dense polynomials over the prime field F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Prime, Rational};

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime `m`; `a` must be nonzero mod `m`.
pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    debug_assert!(a % m != 0);
    pow_mod(a, m - 2, m)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: Prime, coeffs: Vec<u64>) -> FpPoly {
        let p = p.get();
        let mut f = FpPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        f.trim();
        f
    }

    fn raw(p: u64, coeffs: Vec<u64>) -> FpPoly {
        let mut f = FpPoly { p, coeffs };
        f.trim();
        f
    }

    /// Reduces a polynomial with p-integral rational coefficients; `None` if
    /// some denominator is divisible by `p`.
    pub fn from_rationals(p: Prime, coeffs: &[Rational]) -> Option<FpPoly> {
        let m = p.as_bigint();
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            out.push(super::residue_mod(c, &m)?.to_u64().unwrap());
        }
        Some(FpPoly::raw(p.get(), out))
    }

    pub fn from_ints(p: Prime, coeffs: &[BigInt]) -> FpPoly {
        let m = p.as_bigint();
        FpPoly::raw(
            p.get(),
            coeffs.iter().map(|c| c.mod_floor(&m).to_u64().unwrap()).collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn constant(p: u64, c: u64) -> FpPoly {
        FpPoly::raw(p, vec![c % p])
    }

    pub fn x(p: u64) -> FpPoly {
        FpPoly::raw(p, vec![0, 1])
    }

    pub fn eval(&self, u: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, u, self.p) + c) % self.p;
        }
        acc
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.p).collect();
        FpPoly::raw(self.p, v)
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p)
            .collect();
        FpPoly::raw(self.p, v)
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        FpPoly::raw(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::raw(self.p, vec![]);
        }
        let mut v = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::raw(self.p, v)
    }

    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let dd = d.degree().expect("division by zero polynomial over F_p");
        let inv = inv_mod(d.lc(), self.p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (FpPoly::raw(self.p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, self.p);
            q[k] = c;
            if c != 0 {
                for (j, &b) in d.coeffs.iter().enumerate() {
                    r[k + j] = (r[k + j] + self.p - mul_mod(c, b, self.p)) % self.p;
                }
            }
        }
        r.truncate(dd);
        (FpPoly::raw(self.p, q), FpPoly::raw(self.p, r))
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lc(), self.p))
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        FpPoly::raw(self.p, v)
    }

    /// Order of vanishing at `u0`.
    pub fn ord_at(&self, u0: u64) -> usize {
        assert!(!self.is_zero());
        // Taylor shift to u0 by repeated synthetic division
        let lin = FpPoly::raw(self.p, vec![(self.p - u0 % self.p) % self.p, 1]);
        let mut f = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = f.divrem(&lin);
            if !r.is_zero() {
                return k;
            }
            f = q;
            k += 1;
        }
    }

    pub fn powmod(&self, mut e: u128, m: &FpPoly) -> FpPoly {
        let mut base = self.divrem(m).1;
        let mut acc = FpPoly::constant(self.p, 1).divrem(m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).divrem(m).1;
            }
            base = base.mul(&base).divrem(m).1;
            e >>= 1;
        }
        acc
    }

    /// Degrees of irreducible factors (with multiplicity by degree) of a
    /// squarefree polynomial, via distinct-degree factorization.
    pub fn distinct_degree_pattern(&self) -> Vec<(usize, usize)> {
        let n = self.degree().unwrap_or(0);
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = FpPoly::x(self.p);
        let mut h = x.clone();
        let mut i = 1;
        while f.degree().unwrap_or(0) >= 2 * i {
            h = h.powmod(self.p as u128, &f);
            let g = f.gcd(&h.sub(&x));
            if g.degree().unwrap_or(0) > 0 {
                out.push((i, g.degree().unwrap() / i));
                f = f.divrem(&g).0;
                h = h.divrem(&f).1;
            }
            i += 1;
        }
        if let Some(d) = f.degree() {
            if d > 0 {
                out.push((d, 1));
            }
        }
        debug_assert_eq!(out.iter().map(|(d, k)| d * k).sum::<usize>(), n);
        out
    }
}
