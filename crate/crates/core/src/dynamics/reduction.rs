//! Good, potentially good and bad reduction for polynomial maps.

use num_traits::Zero;
use serde::Serialize;

use super::{critical_data, rational_fixed_points, Witness, SCHEMA};
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, int, rational_str, val, Prime, Rational, Valuation};
use crate::newton::newton_polygon;
use crate::ratfunc::{Point, Poly, RatMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionVerdict {
    Good,
    PotentiallyGood,
    Bad,
    Unsupported,
}

/// A critical point whose orbit enters `{v(x) < E}` and then escapes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeWitness {
    pub critical_point: Witness,
    #[serde(with = "rational_str")]
    pub threshold: Rational,
    pub entry_step: usize,
    /// `v(φ^n(c))` for n = 1, 2, ...; for an algebraic c, the least root valuation.
    #[serde(with = "crate::exactnum::rational_vec_str")]
    pub orbit_valuations: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub schema: &'static str,
    pub prime: Prime,
    pub map: String,
    pub verdict: ReductionVerdict,
    /// Translation used for the scaling test, `z = w + γ`.
    pub chart: Option<String>,
    /// Valuation of the scaling that makes the leading coefficient a unit.
    #[serde(serialize_with = "ser_opt")]
    pub sigma: Option<Rational>,
    pub escape: Option<EscapeWitness>,
    pub reason: String,
}

fn ser_opt<S: serde::Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(q) => rational_str::serialize(q, s),
        None => s.serialize_none(),
    }
}

fn fv(x: &Rational, p: Prime) -> Option<Rational> {
    val(x, p).finite().cloned()
}

fn as_poly(phi: &RatMap) -> Result<Poly> {
    if !phi.is_polynomial() {
        return Err(Error::Unsupported("reduction type is implemented for polynomials only".into()));
    }
    Ok(phi.num().scale(&(Rational::from_integer(1.into()) / phi.den().lc())))
}

/// E with `v(φ(x)) = v(a_d) + d v(x) < v(x)` whenever `v(x) < E`.
pub fn escape_threshold(f: &Poly, p: Prime) -> Rational {
    let d = f.deg0();
    let vd = fv(&f.lc(), p).unwrap();
    let mut e = -&vd / int(d as i64 - 1);
    for (i, c) in f.coeffs().iter().enumerate().take(d) {
        if let Some(vi) = fv(c, p) {
            let t = (vi - &vd) / int((d - i) as i64);
            if t < e {
                e = t;
            }
        }
    }
    e
}

/// σ with `v(b_i) + (i-1)σ >= 0` for all i, if the scaling works.
fn scaling_test(b: &Poly, p: Prime) -> (Rational, bool) {
    let d = b.deg0();
    let sigma = -fv(&b.lc(), p).unwrap() / int(d as i64 - 1);
    let ok = b.coeffs().iter().enumerate().all(|(i, c)| match fv(c, p) {
        None => true,
        Some(v) => v + int(i as i64 - 1) * &sigma >= Rational::zero(),
    });
    (sigma, ok)
}

const MAX_ESCAPE_STEPS: usize = 24;
const TAIL: usize = 4;

fn min_root_valuation(f: &Poly, p: Prime) -> Option<Rational> {
    newton_polygon(f, p).ok()?.root_valuations().last().map(|r| r.valuation.clone())
}

fn find_escape(phi: &RatMap, f: &Poly, p: Prime) -> Result<Option<EscapeWitness>> {
    let e = escape_threshold(f, p);
    let crit = critical_data(phi)?;
    for (x, _) in &crit.rational {
        let Point::Finite(c) = x else { continue };
        let mut y = c.clone();
        let mut vals = Vec::new();
        let mut entry = None;
        for n in 1..=MAX_ESCAPE_STEPS + TAIL {
            y = f.eval(&y);
            let Some(v) = fv(&y, p) else { break };
            if entry.is_none() && v < e {
                entry = Some(n);
            }
            vals.push(v);
            if entry.is_some_and(|k| n == k + TAIL) || (entry.is_none() && n >= MAX_ESCAPE_STEPS) {
                break;
            }
        }
        if let Some(k) = entry {
            return Ok(Some(EscapeWitness {
                critical_point: Witness::Exact { value: x.clone() },
                threshold: e,
                entry_step: k,
                orbit_valuations: vals,
            }));
        }
    }
    for (h, _, _) in &crit.others {
        let mut g = h.monic();
        let mut vals = Vec::new();
        let mut entry = None;
        for n in 1..=MAX_ESCAPE_STEPS + TAIL {
            g = g.resultant_pencil(phi.den(), phi.num()).squarefree_part().monic();
            let Some(v) = min_root_valuation(&g, p) else { break };
            if entry.is_none() && v < e {
                entry = Some(n);
            }
            vals.push(v);
            if entry.is_some_and(|k| n == k + TAIL) || (entry.is_none() && n >= MAX_ESCAPE_STEPS) {
                break;
            }
        }
        if let Some(k) = entry {
            return Ok(Some(EscapeWitness {
                critical_point: Witness::Algebraic {
                    polynomial: h.clone(),
                    degree: h.deg0(),
                },
                threshold: e,
                entry_step: k,
                orbit_valuations: vals,
            }));
        }
    }
    Ok(None)
}

/// Reduction type of a polynomial map at p.
pub fn good_reduction(phi: &RatMap, p: Prime) -> Result<ReductionReport> {
    phi.require_degree(2)?;
    let f = as_poly(phi)?;
    let d = f.deg0();
    let mut report = ReductionReport {
        schema: SCHEMA,
        prime: p,
        map: phi.to_string(),
        verdict: ReductionVerdict::Good,
        chart: None,
        sigma: None,
        escape: None,
        reason: String::new(),
    };
    let integral = f.coeffs().iter().all(|c| !matches!(val(c, p), Valuation::Finite(v) if v < Rational::zero()));
    if integral && val(&f.lc(), p) == Valuation::int(0) {
        report.reason = "coefficients are p-integral and the leading one is a unit".into();
        return Ok(report);
    }
    if let Some(gamma) = rational_fixed_points(phi)?.into_iter().next() {
        let b = &f.taylor_shift(&gamma) - &Poly::from_rational(gamma.clone());
        let (sigma, ok) = scaling_test(&b, p);
        report.chart = Some(format!("z = w + {}", format_rational(&gamma)));
        report.sigma = Some(sigma.clone());
        if ok {
            report.verdict = ReductionVerdict::PotentiallyGood;
            report.reason = format!("scaling w by p^{sigma} gives a monic integral model");
        } else {
            report.verdict = ReductionVerdict::Bad;
            report.reason = "no scaling fixing the chosen fixed point gives an integral model".into();
            if p.get() > d as u64 {
                report.escape = find_escape(phi, &f, p)?;
            }
        }
        return Ok(report);
    }
    let (sigma, ok) = scaling_test(&f, p);
    report.sigma = Some(sigma.clone());
    if ok {
        report.verdict = ReductionVerdict::PotentiallyGood;
        report.reason = format!("scaling z by p^{sigma} gives a monic integral model");
        return Ok(report);
    }
    if p.get() > d as u64 {
        if let Some(w) = find_escape(phi, &f, p)? {
            report.verdict = ReductionVerdict::Bad;
            report.reason = "a critical point escapes to ∞ (p > d)".into();
            report.escape = Some(w);
            return Ok(report);
        }
    }
    report.verdict = ReductionVerdict::Unsupported;
    report.reason = "no rational fixed point and no escaping critical orbit found".into();
    Ok(report)
}
