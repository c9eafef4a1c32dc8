//! Certified attraction of critical points by attracting fixed points and cycles.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{critical_data, epsilon, rational_fixed_points, ser_poly, EpsilonKind, SCHEMA};
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, hensel_lift, rational_str, val, PAdicApprox, Prime, Rational, Valuation};
use crate::newton::newton_polygon;
use crate::ratfunc::{factor, periodic_poly, Mobius, Point, Poly, RatMap};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Exact {
        value: Point,
    },
    Algebraic {
        #[serde(serialize_with = "ser_poly")]
        polynomial: Poly,
        degree: usize,
    },
}

impl Witness {
    fn algebraic(f: &Poly) -> Witness {
        Witness::Algebraic {
            polynomial: f.clone(),
            degree: f.deg0(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractionCertificate {
    pub schema: &'static str,
    pub prime: Prime,
    pub map: String,
    pub period: usize,
    #[serde(with = "rational_str")]
    pub gamma: Rational,
    /// `z = m(w)`; witnesses live in the `w` coordinate when present.
    pub chart: Option<String>,
    #[serde(with = "rational_str")]
    pub multiplier: Rational,
    #[serde(with = "rational_str")]
    pub multiplier_valuation: Rational,
    #[serde(with = "rational_str")]
    pub threshold: Rational,
    pub meets_threshold: bool,
    #[serde(with = "rational_str")]
    pub basin_rho: Rational,
    pub critical_point: Witness,
    pub critical_value: Witness,
    #[serde(with = "rational_str")]
    pub critical_value_valuation: Rational,
    pub strict: bool,
    pub justification: String,
}

fn require_fixed(phi: &RatMap, gamma: &Rational) -> Result<()> {
    if phi.eval_finite(gamma) != Point::Finite(gamma.clone()) {
        return Err(Error::Precondition(format!("{gamma} is not a fixed point of {phi}")));
    }
    Ok(())
}

/// Attracting, non-superattracting multiplier at a finite fixed point.
fn attracting_multiplier(phi: &RatMap, gamma: &Rational, p: Prime) -> Result<(Rational, Rational)> {
    let Point::Finite(l) = phi.derivative().eval_finite(gamma) else {
        unreachable!("a finite fixed point is not a pole")
    };
    match val(&l, p) {
        Valuation::Infinity => Err(Error::Precondition(format!(
            "{gamma} is superattracting (λ = 0)"
        ))),
        Valuation::Finite(v) if v > Rational::zero() => Ok((l, v)),
        Valuation::Finite(v) => Err(Error::Precondition(format!(
            "{gamma} is not attracting: v(λ) = {v}"
        ))),
    }
}

/// Largest valuation among the other zeros of `φ - γ` and the poles of φ,
/// measured from γ.
fn basin_radius(phi: &RatMap, gamma: &Rational, p: Prime) -> Result<Rational> {
    let num = phi.minus_constant(gamma).num().taylor_shift(gamma);
    let den = phi.den().taylor_shift(gamma);
    let mut best: Option<Rational> = None;
    for f in [&num, &den] {
        if f.deg0() == 0 {
            continue;
        }
        for r in newton_polygon(f, p)?.root_valuations() {
            if best.as_ref().map_or(true, |b| r.valuation > *b) {
                best = Some(r.valuation);
            }
        }
    }
    best.ok_or_else(|| Error::Degenerate("φ - γ has no further zeros or poles".into()))
}

/// ρ*: on `{v(z - γ) > ρ*}`, `v(φ(z) - γ) = v(λ) + v(z - γ)`.
pub fn attraction_disk(phi: &RatMap, gamma: &Rational, p: Prime) -> Result<Rational> {
    phi.require_degree(2)?;
    require_fixed(phi, gamma)?;
    attracting_multiplier(phi, gamma, p)?;
    basin_radius(phi, gamma, p)
}

struct Found {
    rho: Rational,
    point: Witness,
    value: Witness,
    valuation: Rational,
}

/// Image under φ of the roots of `h`, as a polynomial.
fn push_factor(phi: &RatMap, h: &Poly) -> Poly {
    h.resultant_pencil(phi.den(), phi.num())
}

fn critical_point_for(phi: &RatMap, value: &Witness) -> Result<Witness> {
    let crit = critical_data(phi)?;
    let hits = |x: &Point| -> bool {
        match (value, phi.evaluate(x)) {
            (Witness::Exact { value }, y) => *value == y,
            (Witness::Algebraic { polynomial, .. }, Point::Finite(y)) => polynomial.eval(&y).is_zero(),
            _ => false,
        }
    };
    for (x, _) in &crit.rational {
        if hits(x) {
            return Ok(Witness::Exact { value: x.clone() });
        }
    }
    let target = match value {
        Witness::Exact { value: Point::Finite(x) } => Poly::linear_root(x),
        Witness::Algebraic { polynomial, .. } => polynomial.clone(),
        Witness::Exact { value: Point::Infinity } => unreachable!(),
    };
    for (h, _, _) in &crit.others {
        if push_factor(phi, h).gcd(&target).deg0() > 0 {
            return Ok(Witness::algebraic(h));
        }
    }
    Err(Error::Degenerate("critical value without a critical point".into()))
}

fn certify_in_chart(psi: &RatMap, g: &Rational, p: Prime) -> Result<Option<Found>> {
    let rho = basin_radius(psi, g, p)?;
    let mut cands: Vec<(bool, Rational, Witness)> = Vec::new();
    let cvp = psi.critical_values_poly()?;
    if cvp.deg0() > 0 {
        let fac = factor(&cvp);
        for r in &fac.roots {
            if let Valuation::Finite(v) = val(&(&r.root - g), p) {
                if v > rho {
                    cands.push((true, v, Witness::Exact { value: Point::Finite(r.root.clone()) }));
                }
            }
        }
        for o in &fac.others {
            let np = newton_polygon(&o.poly.taylor_shift(g), p)?;
            if let Some(r) = np.root_valuations().into_iter().find(|r| r.valuation > rho) {
                cands.push((false, r.valuation, Witness::algebraic(&o.poly)));
            }
        }
    }
    if psi.critical_multiplicity_at_infinity() > 0 {
        if let Point::Finite(c) = psi.evaluate(&Point::Infinity) {
            if let Valuation::Finite(v) = val(&(&c - g), p) {
                if v > rho {
                    cands.push((true, v, Witness::Exact { value: Point::Finite(c) }));
                }
            }
        }
    }
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
    let Some((_, valuation, value)) = cands.into_iter().next() else {
        return Ok(None);
    };
    let point = critical_point_for(psi, &value)?;
    Ok(Some(Found {
        rho,
        point,
        value,
        valuation,
    }))
}

/// `z = (q w + γ)/(w + 1)`: γ at w = 0 and q at w = ∞.
fn chart_to(gamma: &Rational, q: &Rational) -> Mobius {
    Mobius::new(q.clone(), gamma.clone(), Rational::from_integer(1.into()), Rational::from_integer(1.into()))
        .expect("q ≠ γ")
}

const JUSTIFICATION: &str = "on the open basin v(φ^n(ξ) - γ) = v(ξ - γ) + n·v(λ) is finite and increasing, and γ has no other preimage there";

fn certify(
    phi: &RatMap,
    gamma: &Rational,
    p: Prime,
    period: usize,
    threshold: Rational,
    map_text: String,
) -> Result<AttractionCertificate> {
    require_fixed(phi, gamma)?;
    let (lambda, v) = attracting_multiplier(phi, gamma, p)?;
    let meets = v > threshold;
    let mut charts: Vec<Option<(Rational, Mobius)>> = vec![None];
    for q in rational_fixed_points(phi)? {
        if q != *gamma {
            let m = chart_to(gamma, &q);
            charts.push(Some((q, m)));
        }
    }
    for chart in charts {
        let (psi, g, label) = match &chart {
            None => (phi.clone(), gamma.clone(), None),
            Some((q, m)) => (
                phi.conjugate(m),
                Rational::zero(),
                Some(format!("z = ({}*w + {})/(w + 1)", format_rational(q), format_rational(gamma))),
            ),
        };
        if let Some(f) = certify_in_chart(&psi, &g, p)? {
            return Ok(AttractionCertificate {
                schema: SCHEMA,
                prime: p,
                map: map_text,
                period,
                gamma: gamma.clone(),
                chart: label,
                multiplier: lambda,
                multiplier_valuation: v,
                threshold,
                meets_threshold: meets,
                basin_rho: f.rho,
                critical_point: f.point,
                critical_value: f.value,
                critical_value_valuation: f.valuation,
                strict: true,
                justification: JUSTIFICATION.into(),
            });
        }
    }
    Err(Error::Indeterminate(format!(
        "no critical value of {map_text} lies in the basin of {gamma} at p = {p} (v(λ) = {v}, T = {threshold})"
    )))
}

/// A critical point strictly attracted to the fixed point γ.
pub fn find_attracted_critical(phi: &RatMap, gamma: &Rational, p: Prime) -> Result<AttractionCertificate> {
    phi.require_degree(2)?;
    let t = epsilon(p, phi.degree(), EpsilonKind::General)?.threshold;
    certify(phi, gamma, p, 1, t, phi.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub enum CycleRep {
    Exact(Rational),
    /// A simple root of the period-n polynomial modulo p.
    Residue(BigInt),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PadicCycleEvidence {
    pub cycle_point: PAdicApprox,
    pub cycle_index: usize,
    pub precision: u32,
    pub multiplier_valuation: i64,
    pub critical_point: Witness,
    pub start_step: usize,
    /// `v(φ^{k+in}(c) - γ_j)` for i = 0, 1, ...
    pub orbit_valuations: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleCertificate {
    pub schema: &'static str,
    pub prime: Prime,
    pub map: String,
    pub period: usize,
    pub route: &'static str,
    pub exact: Option<AttractionCertificate>,
    pub padic: Option<PadicCycleEvidence>,
}

fn padic_eval(phi: &RatMap, x: &PAdicApprox, prec: i64) -> Result<PAdicApprox> {
    let n = PAdicApprox::eval_poly(phi.num(), x, prec);
    let d = PAdicApprox::eval_poly(phi.den(), x, prec);
    n.div(&d)
}

const MIN_STEPS: usize = 3;

fn padic_route(phi: &RatMap, n: usize, r: &BigInt, p: Prime, precision: u32) -> Result<PadicCycleEvidence> {
    let f = periodic_poly(phi, n)?.squarefree_part().primitive();
    let gamma = hensel_lift(&f, r, p, precision)?;
    let prec = precision as i64;
    let dphi = phi.derivative();
    let mut cycle = vec![gamma.clone()];
    let mut lambda = padic_eval(&dphi, &gamma, prec)?;
    for _ in 1..n {
        let next = padic_eval(phi, cycle.last().unwrap(), prec)?;
        lambda = lambda.mul(&padic_eval(&dphi, &next, prec)?);
        cycle.push(next);
    }
    let back = padic_eval(phi, cycle.last().unwrap(), prec)?;
    if !back.sub(&gamma).is_indistinguishable_from_zero() {
        return Err(Error::Precondition(format!("the lifted root does not have period {n}")));
    }
    let lv = match lambda.valuation() {
        None => return Err(Error::Precondition("multiplier is 0 to working precision".into())),
        Some(v) if v <= 0 => {
            return Err(Error::Precondition(format!("cycle is not attracting: v(λ) = {v}")))
        }
        Some(v) => v,
    };
    let crit = critical_data(phi)?;
    let mut starts: Vec<(Witness, PAdicApprox)> = Vec::new();
    for (x, _) in &crit.rational {
        let y = match x {
            Point::Finite(y) => PAdicApprox::from_rational(y, p, prec),
            // start one step later, from φ(∞)
            Point::Infinity => match phi.evaluate(x) {
                Point::Finite(y) => PAdicApprox::from_rational(&y, p, prec),
                Point::Infinity => continue,
            },
        };
        starts.push((Witness::Exact { value: x.clone() }, y));
    }
    if p.get() < 10_000 {
        for (h, _, _) in &crit.others {
            let hp = h.primitive();
            for r in 0..p.get() {
                if let Ok(c) = hensel_lift(&hp, &BigInt::from(r), p, precision) {
                    starts.push((Witness::algebraic(h), c));
                }
            }
        }
    }
    let margin = 2;
    let steps = n * (prec as usize + 8);
    for (w, x0) in starts {
        let mut orbit = vec![x0];
        for _ in 0..steps {
            match padic_eval(phi, orbit.last().unwrap(), prec) {
                Ok(y) => orbit.push(y),
                Err(_) => break,
            }
        }
        for k0 in 0..orbit.len() {
            for (j, gj) in cycle.iter().enumerate() {
                let mut vals = Vec::new();
                let mut k = k0;
                while k < orbit.len() {
                    let diff = orbit[k].sub(gj);
                    let Some(v) = diff.valuation() else { break };
                    if v + margin > orbit[k].abs_precision().min(gj.abs_precision()) {
                        break;
                    }
                    if let Some(last) = vals.last() {
                        if v != last + lv {
                            break;
                        }
                    }
                    vals.push(v);
                    k += n;
                }
                if vals.len() >= MIN_STEPS && vals[0] > 0 {
                    return Ok(PadicCycleEvidence {
                        cycle_point: gj.clone(),
                        cycle_index: j,
                        precision,
                        multiplier_valuation: lv,
                        critical_point: w,
                        start_step: k0,
                        orbit_valuations: vals,
                    });
                }
            }
        }
    }
    Err(Error::Precision(format!(
        "no critical orbit shows {MIN_STEPS} exact contraction steps at precision {precision}; retry with a larger precision"
    )))
}

/// A critical point strictly attracted to an attracting n-cycle, for p > deg φ.
pub fn find_attracted_critical_cycle(
    phi: &RatMap,
    n: usize,
    rep: &CycleRep,
    p: Prime,
    precision: u32,
) -> Result<CycleCertificate> {
    phi.require_degree(2)?;
    if n == 0 {
        return Err(Error::Invalid("period must be positive".into()));
    }
    if p.get() <= phi.degree() as u64 {
        return Err(Error::Precondition(format!(
            "p = {p} does not exceed deg φ = {}",
            phi.degree()
        )));
    }
    let mut out = CycleCertificate {
        schema: SCHEMA,
        prime: p,
        map: phi.to_string(),
        period: n,
        route: "exact",
        exact: None,
        padic: None,
    };
    match rep {
        CycleRep::Exact(g) => {
            let it = phi.iterate(n)?;
            out.exact = Some(certify(&it, g, p, n, Rational::zero(), phi.to_string())?);
        }
        CycleRep::Residue(r) => {
            out.route = "padic";
            out.padic = Some(padic_route(phi, n, r, p, precision)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskCheckReport {
    pub schema: &'static str,
    pub prime: Prime,
    pub map: String,
    #[serde(with = "rational_str")]
    pub a: Rational,
    pub chart: Option<String>,
    #[serde(with = "rational_str")]
    pub rho_r: Rational,
    #[serde(with = "rational_str")]
    pub derivative_valuation: Rational,
    #[serde(with = "rational_str")]
    pub threshold: Rational,
    /// Some critical value ξ must satisfy `v(ξ - φ(a)) >= bound`.
    #[serde(with = "rational_str")]
    pub bound: Rational,
    pub best_valuation: Valuation,
    pub witness: Option<Witness>,
    pub holds: bool,
}

/// Checks the critical-value disk bound `|φ(β) - φ(a)| <= ε^-1 r |φ'(a)|`.
pub fn critical_value_disk_check(phi: &RatMap, a: &Rational, p: Prime) -> Result<DiskCheckReport> {
    phi.require_degree(2)?;
    let t = epsilon(p, phi.degree(), EpsilonKind::General)?.threshold;
    let (psi, a2, chart) = if phi.evaluate(&Point::Infinity).is_infinity() {
        (phi.clone(), a.clone(), None)
    } else {
        let q = rational_fixed_points(phi)?
            .into_iter()
            .find(|q| q != a)
            .ok_or_else(|| Error::Precondition("φ(∞) ≠ ∞ and no rational fixed point is available".into()))?;
        // z = q + 1/w sends w = ∞ to q
        let one = Rational::from_integer(1.into());
        let m = Mobius::new(q.clone(), one.clone(), one, Rational::zero()).unwrap();
        let a2 = (a - &q).recip();
        (phi.conjugate(&m), a2, Some(format!("z = {} + 1/w", format_rational(&q))))
    };
    let Point::Finite(fa) = psi.eval_finite(&a2) else {
        return Err(Error::Precondition(format!("{a} is a pole")));
    };
    let Point::Finite(da) = psi.derivative().eval_finite(&a2) else {
        unreachable!()
    };
    let Valuation::Finite(dv) = val(&da, p) else {
        return Err(Error::Precondition(format!("φ'({a}) = 0")));
    };
    let num = psi.minus_constant(&fa).num().taylor_shift(&a2);
    let den = psi.den().taylor_shift(&a2);
    let mut rho_r: Option<Rational> = None;
    for f in [&num, &den] {
        if f.deg0() == 0 {
            continue;
        }
        for r in newton_polygon(f, p)?.root_valuations() {
            if rho_r.as_ref().map_or(true, |b| r.valuation > *b) {
                rho_r = Some(r.valuation);
            }
        }
    }
    let rho_r = rho_r.ok_or_else(|| Error::Degenerate("a is the only preimage of φ(a)".into()))?;
    let bound = &rho_r + &dv - &t;
    let cvp = psi.critical_values_poly()?;
    let mut best = Valuation::Finite(Rational::from_integer((-1_000_000).into()));
    let mut witness = None;
    if cvp.deg0() > 0 {
        let np = newton_polygon(&cvp.taylor_shift(&fa), p)?;
        best = if np.ord0() > 0 {
            Valuation::Infinity
        } else {
            Valuation::Finite(np.root_valuations()[0].valuation.clone())
        };
        let fac = factor(&cvp);
        let mut exact: Vec<(Valuation, Rational)> =
            fac.roots.iter().map(|r| (val(&(&r.root - &fa), p), r.root.clone())).collect();
        exact.sort_by(|x, y| y.0.cmp(&x.0));
        witness = match exact.first() {
            Some((v, x)) if *v == best => Some(Witness::Exact { value: Point::Finite(x.clone()) }),
            _ => fac
                .others
                .iter()
                .find(|o| {
                    let np = newton_polygon(&o.poly.taylor_shift(&fa), p).unwrap();
                    let top = if np.ord0() > 0 {
                        Valuation::Infinity
                    } else {
                        Valuation::Finite(np.root_valuations()[0].valuation.clone())
                    };
                    top == best
                })
                .map(|o| Witness::algebraic(&o.poly)),
        };
    }
    let holds = best >= Valuation::Finite(bound.clone());
    Ok(DiskCheckReport {
        schema: SCHEMA,
        prime: p,
        map: phi.to_string(),
        a: a.clone(),
        chart,
        rho_r,
        derivative_valuation: dv,
        threshold: t,
        bound,
        best_valuation: best,
        witness,
        holds,
    })
}
