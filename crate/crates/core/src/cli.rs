//! Command-line front end. Every report echoes its configuration and a
//! hash of its inputs, and identical invocations produce identical bytes.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::map::parse_map_json;
use crate::arith::poly::IntPoly;
use crate::arith::{ProjPointC, ProjPointQ, RationalMap};
use crate::dynamics::classify::lattes_example;
use crate::dynamics::{classify_exceptional, is_pcf, preperiodic_points, CurveP1xP1};
use crate::error::{Error, Result};
use crate::families::{
    dky_scan, fiber_small_points, fit_height_inequality, parse_family_json, ParamFamily, PrepBudget,
};
use crate::heights::canonical_height;
use crate::measures::sample::generic_start;
use crate::measures::{arakelov_zhang_estimate, backward_sample, measure_equality_test, EqualityParams};

const CLASSIFY_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Csv,
    Json,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "splitdyn", version, about = "Heights, measures and small points for split rational maps")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance or target error; the default depends on the command.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 3)]
    pub budget_m: usize,
    #[arg(long, global = true, default_value_t = 4)]
    pub budget_n: usize,
    #[arg(long, global = true, default_value_t = 20)]
    pub depth: usize,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub width: usize,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Canonical height of a rational point.
    Height {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Points with tail at most `--budget-m` and period dividing `--budget-n`.
    Prep {
        #[arg(long)]
        map: String,
    },
    /// Exceptional class and PCF verdict.
    Classify {
        #[arg(long)]
        map: String,
    },
    /// Backward-orbit sample of the equilibrium measure.
    Measure {
        #[arg(long)]
        map: String,
    },
    /// Energy test of the pullback measures on a curve.
    Energy {
        #[arg(long)]
        map1: String,
        #[arg(long)]
        map2: String,
        #[arg(long, default_value = "diagonal")]
        curve: String,
    },
    /// Average height of the fixed points of `map1^n` for `map2`.
    Az {
        #[arg(long)]
        map1: String,
        #[arg(long)]
        map2: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Height fit of a section, or small points on a curve, over integer t.
    FamilyScan {
        #[arg(long)]
        family: String,
        /// Section polynomial, ascending coefficients, e.g. `0` or `0,1`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "curve")]
        section: Option<String>,
        #[arg(long)]
        curve: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 2)]
        t_min: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 200)]
        t_max: i64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
    /// Common small points of `z^2 + t1` and `z^2 + t2` on the diagonal.
    Dky {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        t1: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        t2: Vec<i64>,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
}

/// Inputs read so far, hashed into the report.
#[derive(Default)]
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    /// Adds one input as a git-style blob.
    fn add(&mut self, content: &str) {
        self.hasher.update(format!("blob {}\0", content.len()).as_bytes());
        self.hasher.update(content.as_bytes());
    }

    fn read(&mut self, path: &str) -> Result<String> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        self.add(&s);
        Ok(s)
    }

    fn finish(self) -> String {
        format!("{:x}", self.hasher.finalize())
    }
}

/// Built-in map for an alias: `z<d>`, `z2m2`, `z2p1`, `cheb3`, `lattes-i`.
pub fn map_alias(name: &str) -> Option<RationalMap> {
    match name {
        "z2m2" => Some(RationalMap::quadratic(-2)),
        "z2p1" => Some(RationalMap::quadratic(1)),
        "cheb3" => RationalMap::from_poly_coeffs(&[0, -3, 0, 1], &[1]).ok(),
        "lattes-i" => Some(lattes_example()),
        _ => {
            let d: usize = name.strip_prefix('z')?.parse().ok()?;
            (2..=64).contains(&d).then(|| RationalMap::power(d))
        }
    }
}

fn load_map(spec: &str, inputs: &mut Inputs) -> Result<RationalMap> {
    if let Some(f) = map_alias(spec) {
        inputs.add(&serde_json::to_string(&f.to_literal())?);
        return Ok(f);
    }
    parse_map_json(&inputs.read(spec)?)
}

fn load_curve(spec: &str, inputs: &mut Inputs) -> Result<CurveP1xP1> {
    if spec == "diagonal" {
        let c = CurveP1xP1::diagonal();
        inputs.add(&serde_json::to_string(&c)?);
        return Ok(c);
    }
    Ok(serde_json::from_str(&inputs.read(spec)?)?)
}

/// `z2+t` (alias `unicritical`) or a family JSON file.
fn load_family(spec: &str, inputs: &mut Inputs) -> Result<ParamFamily> {
    if spec == "z2+t" || spec == "unicritical" {
        let fam = ParamFamily::unicritical(2);
        inputs.add(&serde_json::to_string(&fam.to_literal())?);
        return Ok(fam);
    }
    parse_family_json(&inputs.read(spec)?)
}

fn parse_section(s: &str) -> Result<IntPoly> {
    let c: std::result::Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
    c.map(|c| IntPoly::from_i64(&c))
        .map_err(|_| Error::InvalidInput(format!("bad section {s:?}")))
}

fn tol(cli: &Cli, default: f64) -> Result<f64> {
    let t = cli.tol.unwrap_or(default);
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::InvalidInput(format!("tolerance must be positive, got {t}")))
    }
}

fn affine(z: &ProjPointC) -> (String, String) {
    match z.to_affine() {
        Some(w) if !z.is_infinity_within(1e-14) => (w.re.to_string(), w.im.to_string()),
        _ => ("inf".into(), "inf".into()),
    }
}

fn int_grid(a: i64, b: i64) -> Vec<BigRational> {
    (a..=b).map(|t| BigRational::from_integer(t.into())).collect()
}

/// A command's result as JSON and as CSV rows (header first).
struct Output {
    json: Value,
    csv: String,
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn execute(cli: &Cli, inputs: &mut Inputs) -> Result<Output> {
    let budget = PrepBudget {
        m: cli.budget_m,
        n: cli.budget_n,
    };
    Ok(match &cli.command {
        Command::Height { map, point } => {
            let f = load_map(map, inputs)?;
            inputs.add(point);
            let z: ProjPointQ = point.parse()?;
            let h = canonical_height(&f, &z, tol(cli, 1e-9)?)?;
            let mut rows: Vec<String> = h
                .place_breakdown
                .iter()
                .map(|p| format!("{},{},{}", serde_json::to_value(&p.place).unwrap().as_str().unwrap_or("?"), p.value, p.error))
                .collect();
            rows.push(format!("total,{},{}", h.value, h.error));
            Output {
                csv: csv("place,value,error", rows),
                json: serde_json::to_value(&h)?,
            }
        }
        Command::Prep { map } => {
            let f = load_map(map, inputs)?;
            let pts = preperiodic_points(&f, budget.m, budget.n, tol(cli, 1e-13)?)?;
            let rows: Vec<(String, String)> = pts.iter().map(affine).collect();
            Output {
                csv: csv("re,im", rows.iter().map(|(a, b)| format!("{a},{b}"))),
                json: json!({ "count": pts.len(), "points": rows.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>() }),
            }
        }
        Command::Classify { map } => {
            let f = load_map(map, inputs)?;
            let class = classify_exceptional(&f, CLASSIFY_BUDGET);
            let pcf = is_pcf(&f, CLASSIFY_BUDGET);
            let tag = serde_json::to_value(class.tag)?;
            let pcf_v = serde_json::to_value(pcf)?;
            Output {
                csv: csv(
                    "tag,pcf",
                    [format!("{},{}", tag.as_str().unwrap_or("?"), pcf_v.as_str().unwrap_or("?"))],
                ),
                json: json!({ "class": class, "pcf": pcf }),
            }
        }
        Command::Measure { map } => {
            let f = load_map(map, inputs)?;
            let mu = backward_sample(&f, &generic_start(&f)?, cli.depth, cli.width, cli.seed)?;
            let mut buf = Vec::new();
            mu.write_csv(&mut buf)?;
            Output {
                csv: String::from_utf8(buf).expect("csv is utf-8"),
                json: serde_json::to_value(&mu)?,
            }
        }
        Command::Energy { map1, map2, curve } => {
            let f = load_map(map1, inputs)?;
            let g = load_map(map2, inputs)?;
            let c = load_curve(curve, inputs)?;
            let params = EqualityParams {
                samples: cli.width,
                depth: cli.depth,
                seed: cli.seed,
                tol: tol(cli, 1e-10)?,
            };
            let r = measure_equality_test(&f, &g, &c, &params)?;
            let d = serde_json::to_value(r.decision)?;
            Output {
                csv: csv(
                    "statistic,se,decision",
                    [format!("{},{},{}", r.statistic, r.se, d.as_str().unwrap_or("?"))],
                ),
                json: serde_json::to_value(r)?,
            }
        }
        Command::Az { map1, map2, n } => {
            let f = load_map(map1, inputs)?;
            let g = load_map(map2, inputs)?;
            let h = arakelov_zhang_estimate(&f, &g, *n, tol(cli, 1e-9)?)?;
            Output {
                csv: csv("value,error", [format!("{},{}", h.value, h.error)]),
                json: serde_json::to_value(&h)?,
            }
        }
        Command::FamilyScan {
            family,
            section,
            curve,
            t_min,
            t_max,
            eps,
        } => {
            let fam = load_family(family, inputs)?;
            let grid = int_grid(*t_min, *t_max);
            match (section, curve) {
                (Some(s), _) => {
                    inputs.add(s);
                    let fit = fit_height_inequality(&fam, &parse_section(s)?, &grid, tol(cli, 1e-8)?)?;
                    Output {
                        csv: csv("h_t,height", fit.support.iter().map(|(h, v)| format!("{h},{v}"))),
                        json: serde_json::to_value(&fit)?,
                    }
                }
                (None, Some(c)) => {
                    let c = load_curve(c, inputs)?;
                    let mut rows = Vec::new();
                    let mut cells = Vec::new();
                    for t in &grid {
                        let h_t = crate::arith::naive_height(&ProjPointQ::from_rational(t));
                        match fiber_small_points(&fam, &c, t, *eps, budget) {
                            Ok(r) => {
                                rows.push(format!("{t},{h_t},{},{}", r.count, r.empirical_min));
                                cells.push(json!({"t": t.to_string(), "h_t": h_t, "count": r.count,
                                    "min_height": r.empirical_min, "min_positive": r.min_positive}));
                            }
                            Err(e @ (Error::DegenerateFiber(_) | Error::SpecialCurve(_))) => {
                                rows.push(format!("{t},{h_t},NA,NA"));
                                cells.push(json!({"t": t.to_string(), "h_t": h_t, "skipped": e.to_string()}));
                            }
                            Err(e) => return Err(e),
                        }
                    }
                    Output {
                        csv: csv("t,h_t,count,min_height", rows),
                        json: json!({ "cells": cells }),
                    }
                }
                (None, None) => return Err(Error::InvalidInput("family-scan needs --section or --curve".into())),
            }
        }
        Command::Dky { t1, t2, eps } => {
            inputs.add(&format!("{t1:?};{t2:?}"));
            let table = dky_scan(t1, t2, *eps, budget)?;
            let rows = table.cells.iter().map(|c| {
                let n = c.count.map_or("NA".to_string(), |n| n.to_string());
                format!("{},{},{n}", c.t1, c.t2)
            });
            Output {
                csv: csv("t1,t2,count", rows.collect::<Vec<_>>()),
                json: serde_json::to_value(&table)?,
            }
        }
    })
}

/// Runs a parsed command and returns the report text.
pub fn run(cli: &Cli) -> Result<String> {
    let mut inputs = Inputs::default();
    let out = execute(cli, &mut inputs)?;
    let hash = inputs.finish();
    let config = serde_json::to_value(cli)?;
    let command = config["command"]["name"].as_str().unwrap_or("?").to_string();
    Ok(match cli.emit {
        Emit::Json => {
            let report = json!({
                "command": command,
                "config": config,
                "input_sha256": hash,
                "result": out.json,
            });
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Emit::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# command={command}");
            let _ = writeln!(s, "# config={}", serde_json::to_string(&config)?);
            let _ = writeln!(s, "# input_sha256={hash}");
            s + &out.csv
        }
    })
}

/// Parses `args` (program name first), runs, and writes the report to
/// `--out` or returns it. Returns the exit code and the text for stdout.
pub fn main_with_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    });
    match result {
        Ok(text) => (0, text),
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}
