//! Forward orbits of critical points, tracked exactly.

use num_traits::Zero;
use serde::Serialize;

use super::{critical_data, ser_poly, SCHEMA};
use crate::error::Result;
use crate::exactnum::ln_abs;
use crate::ratfunc::{Point, Poly, RatMap};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcfConfig {
    pub max_steps: usize,
    /// log-height above which fast growth counts as escape evidence.
    pub height_cap: f64,
    pub growth_ratio: f64,
    pub growth_run: usize,
}

impl Default for PcfConfig {
    fn default() -> Self {
        PcfConfig {
            max_steps: 64,
            height_cap: 50.0,
            growth_ratio: 1.5,
            growth_run: 5,
        }
    }
}

/// A rational point, or the set of roots of a monic squarefree polynomial
/// (optionally together with ∞).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitState {
    Point {
        value: Point,
    },
    Divisor {
        #[serde(serialize_with = "ser_poly")]
        poly: Poly,
        infinity: bool,
    },
}

impl OrbitState {
    /// Logarithmic naive height.
    pub fn log_height(&self) -> f64 {
        match self {
            OrbitState::Point { value: Point::Infinity } => 0.0,
            OrbitState::Point { value: Point::Finite(x) } => {
                if x.is_zero() {
                    0.0
                } else {
                    ln_abs(x.numer()).max(ln_abs(x.denom()))
                }
            }
            OrbitState::Divisor { poly, .. } => poly
                .primitive()
                .integer_coeffs()
                .iter()
                .filter(|c| !c.is_zero())
                .map(ln_abs)
                .fold(0.0, f64::max),
        }
    }

    pub fn step(&self, phi: &RatMap) -> OrbitState {
        match self {
            OrbitState::Point { value } => OrbitState::Point {
                value: phi.evaluate(value),
            },
            OrbitState::Divisor { poly, infinity } => {
                let img = poly.resultant_pencil(phi.den(), phi.num());
                let mut inf = img.deg0() < poly.deg0();
                let mut out = if img.deg0() == 0 {
                    Poly::one()
                } else {
                    img.squarefree_part().monic()
                };
                if *infinity {
                    match phi.evaluate(&Point::Infinity) {
                        Point::Infinity => inf = true,
                        Point::Finite(c) => {
                            if !out.eval(&c).is_zero() {
                                out = &out * &Poly::linear_root(&c);
                            }
                        }
                    }
                }
                OrbitState::Divisor {
                    poly: out,
                    infinity: inf,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitVerdict {
    /// `state[preperiod + period] == state[preperiod]`.
    Finite { preperiod: usize, period: usize },
    /// Log-height passed the cap while growing geometrically.
    Escaping { step: usize, log_height: f64 },
    Indeterminate { steps: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalOrbit {
    pub start: OrbitState,
    pub multiplicity: usize,
    pub orbit: Vec<OrbitState>,
    pub log_heights: Vec<f64>,
    pub verdict: OrbitVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PcfVerdict {
    Pcf,
    NotPcf,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcfCertificate {
    pub schema: &'static str,
    pub map: String,
    pub verdict: PcfVerdict,
    pub config: PcfConfig,
    pub orbits: Vec<CriticalOrbit>,
}

impl PcfCertificate {
    /// Replays every recorded orbit and rechecks the verdicts.
    pub fn verify(&self, phi: &RatMap) -> bool {
        if self.map != phi.to_string() {
            return false;
        }
        let mut all_finite = true;
        let mut any_escape = false;
        for o in &self.orbits {
            if o.orbit.first() != Some(&o.start) {
                return false;
            }
            if o.orbit.windows(2).any(|w| w[0].step(phi) != w[1]) {
                return false;
            }
            match &o.verdict {
                OrbitVerdict::Finite { preperiod, period } => {
                    let (a, b) = (*preperiod, preperiod + period);
                    if *period == 0 || b >= o.orbit.len() || o.orbit[a] != o.orbit[b] {
                        return false;
                    }
                }
                OrbitVerdict::Escaping { step, .. } => {
                    if *step >= o.orbit.len() {
                        return false;
                    }
                    all_finite = false;
                    any_escape = true;
                }
                OrbitVerdict::Indeterminate { .. } => all_finite = false,
            }
        }
        let expected = if all_finite {
            PcfVerdict::Pcf
        } else if any_escape {
            PcfVerdict::NotPcf
        } else {
            PcfVerdict::Indeterminate
        };
        expected == self.verdict
    }
}

fn run_orbit(phi: &RatMap, start: OrbitState, multiplicity: usize, cfg: &PcfConfig) -> CriticalOrbit {
    let mut orbit = vec![start.clone()];
    let mut heights = vec![start.log_height()];
    let hard_cap = 20.0 * cfg.height_cap;
    let verdict = loop {
        let k = orbit.len() - 1;
        if k >= cfg.max_steps || heights[k] > hard_cap {
            break OrbitVerdict::Indeterminate { steps: k };
        }
        let next = orbit[k].step(phi);
        if let Some(j) = orbit.iter().position(|s| *s == next) {
            orbit.push(next);
            heights.push(heights[j]);
            break OrbitVerdict::Finite {
                preperiod: j,
                period: k + 1 - j,
            };
        }
        let h = next.log_height();
        orbit.push(next);
        heights.push(h);
        let n = heights.len();
        if h > cfg.height_cap && n > cfg.growth_run {
            let grows = heights[n - 1 - cfg.growth_run..]
                .windows(2)
                .all(|w| w[0] > 0.0 && w[1] >= cfg.growth_ratio * w[0]);
            if grows {
                break OrbitVerdict::Escaping {
                    step: n - 1,
                    log_height: h,
                };
            }
        }
    };
    CriticalOrbit {
        start,
        multiplicity,
        orbit,
        log_heights: heights,
        verdict,
    }
}

/// Follows every critical orbit until it closes up, escapes in height, or
/// the step budget runs out.
pub fn pcf_check(phi: &RatMap, cfg: &PcfConfig) -> Result<PcfCertificate> {
    phi.require_degree(2)?;
    let crit = critical_data(phi)?;
    let mut starts: Vec<(OrbitState, usize)> = crit
        .rational
        .into_iter()
        .map(|(x, m)| (OrbitState::Point { value: x }, m))
        .collect();
    for (h, m, _) in crit.others {
        starts.push((
            OrbitState::Divisor {
                poly: h.monic(),
                infinity: false,
            },
            m,
        ));
    }
    let orbits: Vec<CriticalOrbit> = starts
        .into_iter()
        .map(|(s, m)| run_orbit(phi, s, m, cfg))
        .collect();
    let verdict = if orbits.iter().all(|o| matches!(o.verdict, OrbitVerdict::Finite { .. })) {
        PcfVerdict::Pcf
    } else if orbits.iter().any(|o| matches!(o.verdict, OrbitVerdict::Escaping { .. })) {
        PcfVerdict::NotPcf
    } else {
        PcfVerdict::Indeterminate
    };
    Ok(PcfCertificate {
        schema: SCHEMA,
        map: phi.to_string(),
        verdict,
        config: cfg.clone(),
        orbits,
    })
}
