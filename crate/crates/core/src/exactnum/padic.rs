//! Finite-precision p-adic numbers.
//!
//! A [`PAdicApprox`] stands for every p-adic number `x` with
//! `v(x - p^shift * unit) >= shift + rel`. Precision only ever shrinks:
//!
//! * add/sub: absolute precision is the minimum of the operands';
//! * mul: valuations add, relative precision is the minimum of the operands';
//! * inverse: relative precision is kept, valuation negated.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{mod_inverse, residue_mod, val, Prime, Rational, Valuation};
use crate::error::{Error, Result};
use crate::ratfunc::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicApprox {
    p: Prime,
    /// Unit residue in `[0, p^rel)`; zero exactly when `rel == 0`.
    unit: BigInt,
    shift: i64,
    rel: u32,
}

fn p_pow(p: Prime, e: u32) -> BigInt {
    num_traits::pow(p.as_bigint(), e as usize)
}

impl PAdicApprox {
    /// An element known only to have valuation `>= abs_prec`.
    pub fn zero(p: Prime, abs_prec: i64) -> PAdicApprox {
        PAdicApprox {
            p,
            unit: BigInt::zero(),
            shift: abs_prec,
            rel: 0,
        }
    }

    /// Approximation of an exact rational to absolute precision `abs_prec`.
    pub fn from_rational(x: &Rational, p: Prime, abs_prec: i64) -> PAdicApprox {
        match val(x, p) {
            Valuation::Infinity => PAdicApprox::zero(p, abs_prec),
            Valuation::Finite(v) => {
                let v = v.to_integer().to_i64().unwrap();
                if v >= abs_prec {
                    return PAdicApprox::zero(p, abs_prec);
                }
                let rel = (abs_prec - v) as u32;
                let unit_q = x / super::pow_p(p, v);
                let unit = residue_mod(&unit_q, &p_pow(p, rel)).unwrap();
                PAdicApprox {
                    p,
                    unit,
                    shift: v,
                    rel,
                }
            }
        }
    }

    /// Builds from a residue `n mod p^abs_prec` (a p-adic integer).
    pub fn from_residue(n: &BigInt, p: Prime, abs_prec: u32) -> PAdicApprox {
        let m = p_pow(p, abs_prec);
        let n = n.mod_floor(&m);
        Self::from_scaled(n, 0, abs_prec as i64, p)
    }

    /// Normalizes `n * p^s` known modulo `p^abs`.
    fn from_scaled(mut n: BigInt, mut s: i64, abs: i64, p: Prime) -> PAdicApprox {
        if s >= abs || n.is_zero() {
            return PAdicApprox::zero(p, abs);
        }
        let pb = p.as_bigint();
        while (&n % &pb).is_zero() {
            n /= &pb;
            s += 1;
            if s >= abs {
                return PAdicApprox::zero(p, abs);
            }
        }
        let rel = (abs - s) as u32;
        let unit = n.mod_floor(&p_pow(p, rel));
        PAdicApprox { p, unit, shift: s, rel }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Exact valuation when it is determined by the known digits.
    pub fn valuation(&self) -> Option<i64> {
        (self.rel > 0).then_some(self.shift)
    }

    /// Lower bound for the valuation that always holds.
    pub fn valuation_lower_bound(&self) -> i64 {
        self.shift
    }

    pub fn abs_precision(&self) -> i64 {
        self.shift + self.rel as i64
    }

    pub fn rel_precision(&self) -> u32 {
        self.rel
    }

    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.rel == 0
    }

    /// Residue modulo `p^abs_precision` for elements of non-negative valuation.
    pub fn residue(&self) -> Option<BigInt> {
        if self.shift < 0 {
            return None;
        }
        Some(&self.unit * p_pow(self.p, self.shift as u32))
    }

    /// The rational `p^shift * unit` (one representative of the class).
    pub fn representative(&self) -> Rational {
        Rational::from_integer(self.unit.clone()) * super::pow_p(self.p, self.shift)
    }

    pub fn neg(&self) -> PAdicApprox {
        if self.rel == 0 {
            return self.clone();
        }
        let m = p_pow(self.p, self.rel);
        PAdicApprox {
            unit: (-&self.unit).mod_floor(&m),
            ..self.clone()
        }
    }

    pub fn add(&self, o: &PAdicApprox) -> PAdicApprox {
        assert_eq!(self.p, o.p);
        let abs = self.abs_precision().min(o.abs_precision());
        let s = self.shift.min(o.shift);
        if s >= abs {
            return PAdicApprox::zero(self.p, abs);
        }
        let lift = |x: &PAdicApprox| -> BigInt {
            if x.shift >= abs {
                BigInt::zero()
            } else {
                &x.unit * p_pow(x.p, (x.shift - s) as u32)
            }
        };
        let n = (lift(self) + lift(o)).mod_floor(&p_pow(self.p, (abs - s) as u32));
        PAdicApprox::from_scaled(n, s, abs, self.p)
    }

    pub fn sub(&self, o: &PAdicApprox) -> PAdicApprox {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PAdicApprox) -> PAdicApprox {
        assert_eq!(self.p, o.p);
        let shift = self.shift + o.shift;
        if self.rel == 0 || o.rel == 0 {
            // known-zero factor: the product is only bounded below
            let abs = match (self.rel, o.rel) {
                (0, 0) => self.abs_precision() + o.abs_precision(),
                (0, _) => self.abs_precision() + o.shift,
                _ => o.abs_precision() + self.shift,
            };
            return PAdicApprox::zero(self.p, abs);
        }
        let rel = self.rel.min(o.rel);
        let m = p_pow(self.p, rel);
        PAdicApprox {
            p: self.p,
            unit: (&self.unit * &o.unit).mod_floor(&m),
            shift,
            rel,
        }
    }

    pub fn inv(&self) -> Result<PAdicApprox> {
        if self.rel == 0 {
            return Err(Error::Precision(format!(
                "cannot invert an element indistinguishable from 0 (v >= {})",
                self.shift
            )));
        }
        let m = p_pow(self.p, self.rel);
        Ok(PAdicApprox {
            p: self.p,
            unit: mod_inverse(&self.unit, &m).unwrap(),
            shift: -self.shift,
            rel: self.rel,
        })
    }

    pub fn div(&self, o: &PAdicApprox) -> Result<PAdicApprox> {
        Ok(self.mul(&o.inv()?))
    }

    /// Horner evaluation of an exact polynomial at an approximate point.
    pub fn eval_poly(f: &Poly, x: &PAdicApprox, work_prec: i64) -> PAdicApprox {
        let mut acc = PAdicApprox::zero(x.p, work_prec);
        let mut first = true;
        for c in f.coeffs().iter().rev() {
            let c = PAdicApprox::from_rational(c, x.p, work_prec);
            acc = if first { c } else { acc.mul(x).add(&c) };
            first = false;
        }
        acc
    }
}

impl fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            write!(f, "O({}^{})", self.p, self.shift)
        } else {
            write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, self.shift, self.p, self.abs_precision())
        }
    }
}

#[derive(Serialize)]
struct PAdicJson {
    prime: u64,
    unit: String,
    shift: i64,
    precision: u32,
}

impl Serialize for PAdicApprox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PAdicJson {
            prime: self.p.get(),
            unit: self.unit.to_string(),
            shift: self.shift,
            precision: self.rel,
        }
        .serialize(s)
    }
}

/// Lifts a simple root `x0` of `f` modulo `p` to a root modulo `p^n`.
///
/// `f` must have p-integral coefficients. The result `x` satisfies
/// `x ≡ x0 (mod p)` and `v(f(x)) >= n`.
pub fn hensel_lift(f: &Poly, x0: &BigInt, p: Prime, n: u32) -> Result<PAdicApprox> {
    if n == 0 {
        return Err(Error::Invalid("precision must be positive".into()));
    }
    let pb = p.as_bigint();
    let mod_n = p_pow(p, n);
    let reduce = |m: &BigInt| -> Result<Vec<BigInt>> {
        f.coeffs()
            .iter()
            .map(|c| {
                residue_mod(c, m).ok_or_else(|| {
                    Error::Hensel(format!("coefficient {c} is not {p}-integral"))
                })
            })
            .collect()
    };
    let coeffs = reduce(&mod_n)?;
    let eval = |cs: &[BigInt], x: &BigInt, m: &BigInt| -> BigInt {
        cs.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
    };
    let dcoeffs: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();

    let x0 = x0.mod_floor(&pb);
    if !eval(&coeffs, &x0, &pb).is_zero() {
        return Err(Error::Hensel(format!("f({x0}) is not 0 mod {p}")));
    }
    if eval(&dcoeffs, &x0, &pb).is_zero() {
        return Err(Error::Hensel(format!("f'({x0}) is 0 mod {p}; root is not simple")));
    }

    let mut x = x0;
    let mut k = 1u32;
    while k < n {
        k = (2 * k).min(n);
        let m = p_pow(p, k);
        let fx = eval(&coeffs, &x, &m);
        let dfx = eval(&dcoeffs, &x, &m);
        let inv = mod_inverse(&dfx, &m).expect("derivative stays a unit");
        x = (x - fx * inv).mod_floor(&m);
    }
    debug_assert!(eval(&coeffs, &x, &mod_n).is_zero());
    if f.degree() == Some(1) {
        // linear: the root is exact whenever it is a p-adic integer rational
        let root = -f.coeff(0) / f.coeff(1);
        if root.denom().is_one() || val_int_is_zero(root.denom(), &pb) {
            return Ok(PAdicApprox::from_rational(&root, p, n as i64));
        }
    }
    Ok(PAdicApprox::from_residue(&x, p, n))
}

fn val_int_is_zero(d: &BigInt, p: &BigInt) -> bool {
    !(d.abs() % p).is_zero()
}
