//! Bounded-height searches for PCF maps in quadratic families.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{pcf_check, root_valuation_multiset, PcfCertificate, PcfConfig, PcfVerdict, SCHEMA};
use crate::error::{Error, Result};
use crate::exactnum::{prime_divisors, rational_vec_str, Prime, Rational, Valuation};
use crate::heights::{corollary13_check, Corollary13Report};
use crate::ratfunc::{fixed_multiplier_poly, sigma_invariants, Poly, RatMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `z^2 + c`.
    PolySlice,
    /// `(z^2 + λ₁ z)/(λ₂ z + 1)` with `λ₁ λ₂ ≠ 1`.
    FixedNormalForm,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s {
            "poly_slice" | "poly" => Ok(Family::PolySlice),
            "fixed_normal_form" | "normal_form" => Ok(Family::FixedNormalForm),
            _ => Err(Error::Invalid(format!("unknown family {s:?}"))),
        }
    }
}

impl Family {
    pub fn map(self, params: &[Rational]) -> Result<RatMap> {
        match self {
            Family::PolySlice => RatMap::new(
                Poly::new(vec![params[0].clone(), Rational::zero(), Rational::one()]),
                Poly::one(),
            ),
            Family::FixedNormalForm => {
                let (l1, l2) = (&params[0], &params[1]);
                if (l1 * l2).is_one() {
                    return Err(Error::Precondition("λ₁λ₂ = 1 is degenerate".into()));
                }
                RatMap::new(
                    Poly::new(vec![Rational::zero(), l1.clone(), Rational::one()]),
                    Poly::new(vec![Rational::one(), l2.clone()]),
                )
            }
        }
    }
}

/// `{x in Q : h(x) <= log B}`, sorted.
pub fn northcott_set(b: u64) -> Vec<Rational> {
    let b = b as i64;
    let mut out = Vec::new();
    for den in 1..=b {
        for num in -b..=b {
            if num.gcd(&den) == 1 || (num == 0 && den == 1) {
                out.push(Rational::new(num.into(), den.into()));
            }
        }
    }
    out.sort();
    out
}

/// Parameter tuples visited for `family` at height bound `b`, in search order.
pub fn grid(family: Family, b: u64) -> Vec<Vec<Rational>> {
    let xs = northcott_set(b);
    match family {
        Family::PolySlice => xs.into_iter().map(|c| vec![c]).collect(),
        Family::FixedNormalForm => {
            let mut out = Vec::new();
            for l1 in &xs {
                for l2 in &xs {
                    if !(l1 * l2).is_one() {
                        out.push(vec![l1.clone(), l2.clone()]);
                    }
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeRow {
    pub prime: u64,
    /// Valuations of the d+1 fixed multipliers (∞ for λ = 0).
    pub valuations: Vec<Valuation>,
    /// `v_p(λ) <= 0` for odd p, `v_2(λ) <= 2`, over nonzero λ.
    pub within_constraint: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    pub family: Family,
    #[serde(with = "rational_vec_str")]
    pub parameters: Vec<Rational>,
    pub map: String,
    #[serde(with = "rational_vec_str")]
    pub sigma: Vec<Rational>,
    pub certificate: PcfCertificate,
    pub valuation_table: Vec<PrimeRow>,
    pub corollary13: Corollary13Report,
}

impl SearchHit {
    /// σ₃ = σ₁ - 2.
    pub fn silverman_relation_holds(&self) -> bool {
        self.sigma[2] == &self.sigma[0] - Rational::from_integer(2.into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub height_bound: u64,
    pub pcf: PcfConfig,
    pub jobs: usize,
    /// Parameters per cell; cells are the unit of work and of resumption.
    pub cell_size: usize,
    /// First cell to process.
    pub start_cell: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            height_bound: 10,
            pcf: PcfConfig::default(),
            jobs: 1,
            cell_size: 256,
            start_cell: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub cell: usize,
    pub candidates: usize,
    pub indeterminate: usize,
    pub hits: Vec<SearchHit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchSummary {
    pub schema: &'static str,
    pub family: Family,
    pub height_bound: u64,
    pub cells: usize,
    pub start_cell: usize,
    pub candidates: usize,
    pub hits: usize,
    pub indeterminate: usize,
}

fn valuation_table(phi: &RatMap) -> Result<Vec<PrimeRow>> {
    let fm = fixed_multiplier_poly(phi)?;
    let mut primes = vec![2u64, 3, 5, 7];
    for c in fm.coeffs() {
        if c.is_zero() {
            continue;
        }
        for n in [c.numer(), c.denom()] {
            if let Some(ps) = prime_divisors(n, 1 << 16) {
                primes.extend(ps);
            }
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut rows = Vec::new();
    for q in primes {
        let p = Prime::new(q)?;
        let mut valuations = Vec::new();
        for (v, count) in root_valuation_multiset(&fm, p) {
            valuations.extend(std::iter::repeat(v).take(count));
        }
        let cap = Rational::from_integer(if q == 2 { 2.into() } else { 0.into() });
        let within_constraint = valuations.iter().all(|v| match v {
            Valuation::Infinity => true,
            Valuation::Finite(x) => *x <= cap,
        });
        rows.push(PrimeRow {
            prime: q,
            valuations,
            within_constraint,
        });
    }
    Ok(rows)
}

fn make_hit(family: Family, params: &[Rational], phi: &RatMap, cert: PcfCertificate) -> Result<SearchHit> {
    Ok(SearchHit {
        family,
        parameters: params.to_vec(),
        map: phi.to_string(),
        sigma: sigma_invariants(phi)?,
        valuation_table: valuation_table(phi)?,
        corollary13: corollary13_check(phi)?,
        certificate: cert,
    })
}

fn run_cell(family: Family, cell: usize, params: &[Vec<Rational>], cfg: &PcfConfig) -> Result<CellResult> {
    let mut out = CellResult {
        cell,
        candidates: 0,
        indeterminate: 0,
        hits: Vec::new(),
    };
    for ps in params {
        let phi = match family.map(ps) {
            Ok(phi) if phi.degree() == 2 => phi,
            _ => continue,
        };
        out.candidates += 1;
        let cert = pcf_check(&phi, cfg)?;
        match cert.verdict {
            PcfVerdict::Pcf => out.hits.push(make_hit(family, ps, &phi, cert)?),
            PcfVerdict::Indeterminate => out.indeterminate += 1,
            PcfVerdict::NotPcf => {}
        }
    }
    Ok(out)
}

/// Runs the search cell by cell. Cells are processed in parallel batches
/// and handed to `on_cell` in grid order.
pub fn enumerate_family<F>(family: Family, cfg: &SearchConfig, mut on_cell: F) -> Result<SearchSummary>
where
    F: FnMut(&CellResult) -> Result<()>,
{
    if cfg.height_bound < 1 {
        return Err(Error::Precondition("height bound must be at least 1".into()));
    }
    let points = grid(family, cfg.height_bound);
    let size = cfg.cell_size.max(1);
    let cells: Vec<&[Vec<Rational>]> = points.chunks(size).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let mut summary = SearchSummary {
        schema: SCHEMA,
        family,
        height_bound: cfg.height_bound,
        cells: cells.len(),
        start_cell: cfg.start_cell,
        candidates: 0,
        hits: 0,
        indeterminate: 0,
    };
    let batch = 4 * cfg.jobs.max(1);
    let mut next = cfg.start_cell;
    while next < cells.len() {
        let end = (next + batch).min(cells.len());
        let results: Vec<Result<CellResult>> = pool.install(|| {
            (next..end)
                .into_par_iter()
                .map(|k| run_cell(family, k, cells[k], &cfg.pcf))
                .collect()
        });
        for r in results {
            let r = r?;
            summary.candidates += r.candidates;
            summary.indeterminate += r.indeterminate;
            summary.hits += r.hits.len();
            on_cell(&r)?;
        }
        next = end;
    }
    Ok(summary)
}

/// Collects every hit of a search.
pub fn search(family: Family, cfg: &SearchConfig) -> Result<(Vec<SearchHit>, SearchSummary)> {
    let mut hits = Vec::new();
    let summary = enumerate_family(family, cfg, |c| {
        hits.extend(c.hits.iter().cloned());
        Ok(())
    })?;
    Ok((hits, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyClass {
    #[serde(with = "crate::exactnum::rational_str")]
    pub sigma1: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub sigma2: Rational,
    pub representatives: Vec<String>,
}

/// Merges hits with equal (σ₁, σ₂).
pub fn dedupe(hits: &[SearchHit]) -> Vec<ConjugacyClass> {
    let mut classes: BTreeMap<(Rational, Rational), Vec<String>> = BTreeMap::new();
    for h in hits {
        let reps = classes.entry((h.sigma[0].clone(), h.sigma[1].clone())).or_default();
        if !reps.contains(&h.map) {
            reps.push(h.map.clone());
        }
    }
    classes
        .into_iter()
        .map(|((sigma1, sigma2), representatives)| ConjugacyClass {
            sigma1,
            sigma2,
            representatives,
        })
        .collect()
}

/// Largest `|numerator|` or denominator among the parameters.
pub fn parameter_height(params: &[Rational]) -> u64 {
    params
        .iter()
        .map(|x| x.numer().abs().max(x.denom().clone()).to_u64().unwrap_or(u64::MAX))
        .max()
        .unwrap_or(0)
}
