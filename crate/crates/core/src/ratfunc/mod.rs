//! Polynomials and rational maps over Q.

mod dynatomic;
mod map;
mod parse;
mod poly;
mod roots;

pub use dynatomic::{
    dynatomic_poly, fixed_multiplier_poly, multiplier_poly, nth_root, periodic_poly,
    sigma_invariants, MultiplierPoly,
};
pub(crate) use dynatomic::{divisors, multiplier_resultant, ser_poly_lambda};
pub use map::{degree_cap, Mobius, Point, RatMap, DEFAULT_DEGREE_CAP};
pub use parse::{parse_map, parse_poly, parse_ratfunc, render, render_poly};
pub use poly::{Coeff, DensePoly, Poly};
pub use roots::{
    certify_irreducible, factor, is_square, rational_roots, Factorization, OtherFactor,
    RationalRoot,
};

/// Coefficients of `f(z + a)`.
pub fn taylor_shift(f: &Poly, a: &crate::exactnum::Rational) -> Poly {
    f.taylor_shift(a)
}
