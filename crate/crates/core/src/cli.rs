//! Command-line front end. Every subcommand prints one JSON document.

use std::ffi::OsString;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{
    self, critical_value_disk_check, epsilon, find_attracted_critical, find_attracted_critical_cycle,
    fixed_points, good_reduction, pcf_check, CycleRep, EpsilonKind, PcfConfig, PcfVerdict, ReductionVerdict,
    SCHEMA,
};
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Prime, Rational};
use crate::heights::{corollary13_check, multiplier_heights};
use crate::newton::{copolygon, newton_polygon, render_svg};
use crate::ratfunc::{parse_map, parse_poly, RatMap};
use crate::search::{enumerate_family, Family, SearchConfig};

#[derive(Debug, Parser)]
#[command(name = "ultradyn", version, about = "Exact p-adic dynamics of rational maps over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed points, multipliers and their classification at each prime.
    Analyze {
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long = "prime", short, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Valuation polygon ρ ↦ v_p(h, a, ρ) of a rational function around a.
    Copolygon {
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long, short)]
        prime: u64,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Plot range `lo,hi` for the SVG.
        #[arg(long, default_value = "-4,4", allow_hyphen_values = true)]
        range: String,
    },
    /// Newton polygon and root valuations of a polynomial.
    Newton {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, short)]
        prime: u64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Certify that a critical point is attracted to a fixed point or cycle.
    Attract {
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long, short)]
        prime: u64,
        /// Rational fixed point (or cycle point with --period).
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long, default_value_t = 1)]
        period: usize,
        /// Residue mod p of a cycle point, lifted p-adically.
        #[arg(long)]
        residue: Option<i64>,
        #[arg(long, default_value_t = 20)]
        precision: u32,
        /// Run the critical-value disk check at this point instead.
        #[arg(long, allow_hyphen_values = true)]
        disk_check: Option<String>,
    },
    /// Post-critical finiteness with the full orbit table.
    Pcf {
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        #[arg(long, default_value_t = 50.0)]
        height_cap: f64,
    },
    /// Good, potentially good or bad reduction of a polynomial.
    Reduction {
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long, short)]
        prime: u64,
    },
    /// Multiplier heights and the log 4 check for PCF quadratics.
    Heights {
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long, default_value_t = 1)]
        period: usize,
    },
    /// Attracting cycles by period.
    Cycles {
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long, short)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        max_period: usize,
    },
    /// Search a quadratic family for PCF maps; hits are written as JSON lines.
    Search {
        #[arg(long, default_value = "poly_slice")]
        family: String,
        #[arg(long, default_value_t = 10)]
        height_bound: u64,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        #[arg(long, default_value_t = 50.0)]
        height_cap: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 256)]
        cell_size: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        /// File holding the last completed cell; the search continues after it.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Threshold T with ε = p^-T.
    Epsilon {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value = "general")]
        kind: String,
    },
}

/// JSON document plus the exit code it should produce.
pub struct Outcome {
    pub body: Value,
    pub code: i32,
}

fn ok<T: Serialize>(v: &T) -> Result<Outcome> {
    Ok(Outcome {
        body: serde_json::to_value(v)?,
        code: 0,
    })
}

fn prime(p: u64) -> Result<Prime> {
    Prime::new(p)
}

fn map_arg(s: &str) -> Result<RatMap> {
    parse_map(s)
}

fn pair(s: &str) -> Result<(Rational, Rational)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Invalid(format!("expected lo,hi, got {s:?}")))?;
    Ok((parse_rational(a.trim())?, parse_rational(b.trim())?))
}

fn critical_points(phi: &RatMap) -> Result<Value> {
    let w = phi.critical_poly()?;
    let fac = crate::ratfunc::factor(&w);
    let mut rational: Vec<Value> = fac
        .roots
        .iter()
        .map(|r| json!({"point": format_rational(&r.root), "multiplicity": r.multiplicity}))
        .collect();
    let at_inf = phi.critical_multiplicity_at_infinity();
    if at_inf > 0 {
        rational.push(json!({"point": "inf", "multiplicity": at_inf}));
    }
    Ok(json!({"rational": rational, "other_factors": fac.others}))
}

fn analyze(map: &str, primes: &[u64]) -> Result<Outcome> {
    let phi = map_arg(map)?;
    phi.require_degree(2)?;
    let mut per_prime = Vec::new();
    for &p in primes {
        let p = prime(p)?;
        per_prime.push(json!({"prime": p, "fixed_points": fixed_points(&phi, p)?}));
    }
    ok(&json!({
        "schema": SCHEMA,
        "map": phi.to_string(),
        "degree": phi.degree(),
        "critical_points": critical_points(&phi)?,
        "primes": per_prime,
    }))
}

fn write_svg(path: &PathBuf, svg: &str) -> Result<()> {
    fs::write(path, svg)?;
    Ok(())
}

fn run_command(cmd: Command, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Analyze { map, primes } => analyze(&map, &primes),
        Command::Copolygon {
            map,
            prime: p,
            center,
            svg,
            range,
        } => {
            let h = map_arg(&map)?;
            let a = parse_rational(&center)?;
            let f = copolygon(&h, &a, prime(p)?)?;
            if let Some(path) = svg {
                let (lo, hi) = pair(&range)?;
                write_svg(&path, &render_svg(&f, &lo, &hi))?;
            }
            ok(&json!({
                "schema": SCHEMA,
                "map": h.to_string(),
                "prime": p,
                "center": format_rational(&a),
                "copolygon": f,
            }))
        }
        Command::Newton { poly, prime: p, svg } => {
            let f = parse_poly(&poly)?;
            let np = newton_polygon(&f, prime(p)?)?;
            if let Some(path) = svg {
                let last = np.vertices().last().map(|v| v.0).unwrap_or(0) as i64;
                let cp = np.copolygon();
                let lo = Rational::from_integer((-(last.max(1)) * 2).into());
                write_svg(&path, &render_svg(&cp, &lo, &-lo.clone()))?;
            }
            ok(&json!({
                "schema": SCHEMA,
                "poly": f.to_string(),
                "prime": p,
                "polygon": np,
                "zero_root_multiplicity": np.ord0(),
                "root_valuations": np.root_valuations(),
            }))
        }
        Command::Attract {
            map,
            prime: p,
            gamma,
            period,
            residue,
            precision,
            disk_check,
        } => {
            let phi = map_arg(&map)?;
            let p = prime(p)?;
            if let Some(a) = disk_check {
                let r = critical_value_disk_check(&phi, &parse_rational(&a)?, p)?;
                return Ok(Outcome {
                    code: if r.holds { 0 } else { 3 },
                    body: serde_json::to_value(&r)?,
                });
            }
            match (gamma, residue) {
                (Some(g), None) if period == 1 => ok(&find_attracted_critical(&phi, &parse_rational(&g)?, p)?),
                (Some(g), None) => ok(&find_attracted_critical_cycle(
                    &phi,
                    period,
                    &CycleRep::Exact(parse_rational(&g)?),
                    p,
                    precision,
                )?),
                (None, Some(r)) => ok(&find_attracted_critical_cycle(
                    &phi,
                    period,
                    &CycleRep::Residue(r.into()),
                    p,
                    precision,
                )?),
                _ => Err(Error::Invalid("give exactly one of --gamma and --residue".into())),
            }
        }
        Command::Pcf {
            map,
            max_steps,
            height_cap,
        } => {
            let phi = map_arg(&map)?;
            let cfg = PcfConfig {
                max_steps,
                height_cap,
                ..PcfConfig::default()
            };
            let cert = pcf_check(&phi, &cfg)?;
            Ok(Outcome {
                code: if cert.verdict == PcfVerdict::Indeterminate { 3 } else { 0 },
                body: serde_json::to_value(&cert)?,
            })
        }
        Command::Reduction { map, prime: p } => {
            let r = good_reduction(&map_arg(&map)?, prime(p)?)?;
            Ok(Outcome {
                code: if r.verdict == ReductionVerdict::Unsupported { 3 } else { 0 },
                body: serde_json::to_value(&r)?,
            })
        }
        Command::Heights { map, period } => {
            let phi = map_arg(&map)?;
            let mh = multiplier_heights(&phi, period)?;
            let c13 = if phi.degree() == 2 {
                match corollary13_check(&phi) {
                    Ok(r) => serde_json::to_value(&r)?,
                    Err(e) => json!({"skipped": e.to_string()}),
                }
            } else {
                json!({"skipped": format!("degree {} map", phi.degree())})
            };
            ok(&json!({
                "schema": SCHEMA,
                "multiplier_heights": mh,
                "corollary13": c13,
            }))
        }
        Command::Cycles {
            map,
            prime: p,
            max_period,
        } => ok(&dynamics::count_attracting_cycles(&map_arg(&map)?, max_period, prime(p)?)?),
        Command::Search {
            family,
            height_bound,
            max_steps,
            height_cap,
            jobs,
            cell_size,
            output,
            resume,
        } => run_search(
            family.parse()?,
            SearchConfig {
                height_bound,
                pcf: PcfConfig {
                    max_steps,
                    height_cap,
                    ..PcfConfig::default()
                },
                jobs,
                cell_size,
                start_cell: 0,
            },
            output,
            resume,
            out,
        ),
        Command::Epsilon { degree, primes, kind } => {
            let kind: EpsilonKind = kind.parse()?;
            let rows = primes
                .iter()
                .map(|&p| epsilon(prime(p)?, degree, kind))
                .collect::<Result<Vec<_>>>()?;
            ok(&json!({"schema": SCHEMA, "degree": degree, "kind": kind, "thresholds": rows}))
        }
    }
}

fn run_search(
    family: Family,
    mut cfg: SearchConfig,
    output: Option<PathBuf>,
    resume: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<Outcome> {
    if let Some(r) = &resume {
        if let Ok(s) = fs::read_to_string(r) {
            let last: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad resume file {}", r.display())))?;
            cfg.start_cell = last + 1;
        }
    }
    let mut sink: Box<dyn Write + '_> = match &output {
        Some(path) => Box::new(
            OpenOptions::new()
                .create(true)
                .append(cfg.start_cell > 0)
                .write(true)
                .truncate(cfg.start_cell == 0)
                .open(path)?,
        ),
        None => Box::new(out),
    };
    let summary = enumerate_family(family, &cfg, |cell| {
        for h in &cell.hits {
            writeln!(sink, "{}", serde_json::to_string(h)?)?;
        }
        sink.flush()?;
        if let Some(r) = &resume {
            fs::write(r, format!("{}\n", cell.cell))?;
        }
        Ok(())
    })?;
    ok(&json!({"summary": summary}))
}

/// Parses `args` (program name first), runs the command and writes its JSON
/// to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run_command(cli.command, out) {
        Ok(o) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&o.body).unwrap());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
