//! Counting attracting cycles by period.

use num_traits::Zero;
use serde::Serialize;

use super::SCHEMA;
use crate::error::{Error, Result};
use crate::exactnum::{val, Prime, Rational, Valuation};
use crate::newton::newton_polygon;
use crate::ratfunc::{divisors, multiplier_resultant, periodic_poly, Poly, RatMap};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleCount {
    pub period: usize,
    /// Points of exact period n with `|λ| < 1`, ∞ included.
    pub points: usize,
    pub cycles: usize,
    pub superattracting_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleCountReport {
    pub schema: &'static str,
    pub prime: Prime,
    pub map: String,
    pub degree: usize,
    pub max_period: usize,
    pub counts: Vec<CycleCount>,
    pub total_cycles: usize,
    /// The bound 2d - 2 on attracting cycles is proved for p > d.
    pub hypothesis_holds: bool,
    pub bound: usize,
    pub within_bound: bool,
}

/// Squarefree polynomial whose roots are the finite points of exact period n.
fn exact_period_points(phi: &RatMap, n: usize) -> Result<Poly> {
    let mut e = periodic_poly(phi, n)?.squarefree_part().monic();
    for m in divisors(n) {
        if m == n {
            continue;
        }
        let g = e.gcd(&periodic_poly(phi, m)?);
        if g.deg0() > 0 {
            e = e.div_exact(&g).expect("gcd divides");
        }
    }
    Ok(e)
}

/// Attracting cycles of every period up to `max_period`.
pub fn count_attracting_cycles(phi: &RatMap, max_period: usize, p: Prime) -> Result<CycleCountReport> {
    phi.require_degree(2)?;
    if max_period == 0 {
        return Err(Error::Invalid("period bound must be positive".into()));
    }
    let d = phi.degree();
    let mut counts = Vec::new();
    for n in 1..=max_period {
        let e = exact_period_points(phi, n)?;
        let mut points = 0;
        let mut superattracting = 0;
        if e.deg0() > 0 {
            let it = phi.iterate(n)?;
            let r = multiplier_resultant(&it, &e);
            let np = newton_polygon(&r, p)?;
            superattracting += np.ord0();
            points += np.ord0();
            points += np
                .root_valuations()
                .iter()
                .filter(|rv| rv.valuation > Rational::zero())
                .map(|rv| rv.count)
                .sum::<usize>();
        }
        if phi.infinity_period(n) == Some(n) {
            match val(&phi.infinity_multiplier(n)?, p) {
                Valuation::Infinity => {
                    points += 1;
                    superattracting += 1;
                }
                v if v.is_positive() => points += 1,
                _ => {}
            }
        }
        counts.push(CycleCount {
            period: n,
            points,
            cycles: points / n,
            superattracting_points: superattracting,
        });
    }
    let total: usize = counts.iter().map(|c| c.cycles).sum();
    let bound = 2 * d - 2;
    Ok(CycleCountReport {
        schema: SCHEMA,
        prime: p,
        map: phi.to_string(),
        degree: d,
        max_period,
        counts,
        total_cycles: total,
        hypothesis_holds: p.get() > d as u64,
        bound,
        within_bound: total <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::parse_map;

    fn run(s: &str, n: usize, p: u64) -> CycleCountReport {
        count_attracting_cycles(&parse_map(s).unwrap(), n, Prime::new(p).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let r = run("z^2+1/4", 2, 5);
        assert_eq!(r.total_cycles, 2);
        assert!(r.within_bound && r.hypothesis_holds);
        let r = run("z^2", 3, 5);
        assert_eq!(r.total_cycles, 2);
        assert_eq!(r.counts[0].superattracting_points, 2);
        let r = run("z^2-3/4", 1, 3);
        assert_eq!(r.total_cycles, 2);
        assert!(r.hypothesis_holds);
    }

    #[test]
    fn exact_period_radical() {
        let phi = parse_map("z^2-1").unwrap();
        // fixed points are the roots of z^2 - z - 1, the 2-cycle is {0, -1}
        assert_eq!(exact_period_points(&phi, 2).unwrap(), Poly::from_ints(&[0, 1, 1]));
    }
}
