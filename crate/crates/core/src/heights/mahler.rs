//! Mahler measures of integer polynomials with certified root enclosures.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::ln_abs;

const U: f64 = f64::EPSILON / 2.0;
const MAX_ITER: usize = 2000;

/// Enclosure of `log M(f)` and where the roots sit relative to the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct MahlerBounds {
    pub lower: f64,
    pub upper: f64,
    /// Every root certified to satisfy `|α| >= 1`.
    pub all_outside: bool,
    /// Every root certified to satisfy `|α| <= 1`.
    pub all_inside: bool,
}

/// Coefficients scaled by the largest one, with a relative error bound.
fn scaled(c: &[BigInt]) -> (Vec<f64>, f64) {
    let big = c.iter().map(|x| x.bits()).max().unwrap_or(0);
    if big <= 1000 {
        let m = c.iter().map(|x| x.to_f64().unwrap().abs()).fold(0.0, f64::max);
        (c.iter().map(|x| x.to_f64().unwrap() / m).collect(), 4.0 * U)
    } else {
        let lm = c.iter().filter(|x| !x.is_zero()).map(ln_abs).fold(f64::MIN, f64::max);
        let v = c
            .iter()
            .map(|x| {
                if x.is_zero() {
                    0.0
                } else {
                    let s = if x.sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
                    s * (ln_abs(x) - lm).exp()
                }
            })
            .collect();
        (v, 1e-11)
    }
}

fn horner(a: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let r = z.norm();
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        abs_sum = abs_sum * r + c.abs();
    }
    (p, dp, abs_sum)
}

fn aberth(a: &[f64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let r0 = (a[0].abs() / a[n].abs()).powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ITER {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (p, dp, _) = horner(a, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / z[k].norm().max(1e-300));
            }
        }
        if worst < 4.0 * U {
            break;
        }
    }
    z
}

/// `c` holds the integer coefficients, constant term first, with `c[0] != 0`.
pub(crate) fn log_mahler_bounds(c: &[BigInt]) -> Result<MahlerBounds> {
    let n = c.len() - 1;
    let lead = ln_abs(&c[n]);
    let lead_err = 4.0 * U * lead.abs();
    if n == 0 {
        return Ok(MahlerBounds {
            lower: lead - lead_err,
            upper: lead + lead_err,
            all_outside: true,
            all_inside: true,
        });
    }
    let (a, delta) = scaled(c);
    let z = aberth(&a);
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let (p, _, abs_sum) = horner(&a, z[i]);
        let perr = (2 * n + 2) as f64 * U * abs_sum * 1.01 + delta * abs_sum;
        let mut den = a[n].abs() * (1.0 - delta);
        for j in 0..n {
            if j != i {
                den *= (z[i] - z[j]).norm();
            }
        }
        den *= 1.0 - 4.0 * n as f64 * U;
        if den <= 0.0 {
            return Err(Error::Precision("root approximations collide".into()));
        }
        radii.push(n as f64 * (p.norm() + perr) / den);
    }
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] - z[j]).norm() <= radii[i] + radii[j] {
                return Err(Error::Precision("root inclusion disks overlap".into()));
            }
        }
    }
    let mut lower = lead - lead_err;
    let mut upper = lead + lead_err;
    let mut all_outside = true;
    let mut all_inside = true;
    for i in 0..n {
        let m = z[i].norm();
        let lo = (m - radii[i]).max(0.0);
        let hi = m + radii[i];
        all_outside &= lo >= 1.0;
        all_inside &= hi <= 1.0;
        lower += lo.max(1.0).ln() * (1.0 - 2.0 * U);
        upper += hi.max(1.0).ln() * (1.0 + 2.0 * U);
    }
    Ok(MahlerBounds {
        lower,
        upper,
        all_outside,
        all_inside,
    })
}
