use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, parse_rational, Prime, Rational};

/// A p-adic valuation: a rational number or `+∞` (the valuation of zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn int(n: i64) -> Valuation {
        Valuation::Finite(Rational::from_integer(BigInt::from(n)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(q) => Some(q),
            Valuation::Infinity => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Valuation::Finite(q) => q.is_positive(),
            Valuation::Infinity => true,
        }
    }

    pub fn min(self, other: Valuation) -> Valuation {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Valuation) -> Valuation {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl Add<&Rational> for Valuation {
    type Output = Valuation;
    fn add(self, rhs: &Rational) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(a + rhs),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl Sub<&Rational> for Valuation {
    type Output = Valuation;
    fn sub(self, rhs: &Rational) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(a - rhs),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl Neg for Valuation {
    type Output = Option<Rational>;
    fn neg(self) -> Option<Rational> {
        self.finite().map(|q| -q)
    }
}

impl From<Rational> for Valuation {
    fn from(q: Rational) -> Self {
        Valuation::Finite(q)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{q}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(q) => s.serialize_str(&format_rational(q)),
            Valuation::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            Ok(Valuation::Infinity)
        } else {
            parse_rational(&s)
                .map(Valuation::Finite)
                .map_err(serde::de::Error::custom)
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn val_int(n: &BigInt, p: Prime) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let pb = p.as_bigint();
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return Some(k);
        }
        n = q;
        k += 1;
    }
}

/// `v_p(x)`; `+∞` exactly when `x = 0`.
pub fn val(x: &Rational, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let a = val_int(x.numer(), p).unwrap() as i64;
    let b = val_int(x.denom(), p).unwrap() as i64;
    Valuation::int(a - b)
}

/// Residue of the unit part `x / p^{v(x)}` modulo `p`, in `1..p`.
pub fn unit_residue(x: &Rational, p: Prime) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let pb = p.as_bigint();
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    while (&n % &pb).is_zero() {
        n /= &pb;
    }
    while (&d % &pb).is_zero() {
        d /= &pb;
    }
    let pm = p.get();
    let n = n.mod_floor(&pb).to_u64().unwrap();
    let d = d.mod_floor(&pb).to_u64().unwrap();
    Some(super::fp::mul_mod(n, super::fp::inv_mod(d, pm), pm))
}
