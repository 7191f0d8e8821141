//! Points of small split height on a curve, found among preperiodic
//! candidates of either map.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::family::ParamFamily;
use crate::arith::rational_roots::convergents;
use crate::arith::roots::{cluster_points, form_roots};
use crate::arith::{chordal, ProjPointC, ProjPointQ, RationalMap};
use crate::dynamics::enumerate::{preperiodic_points, CLUSTER_TOL};
use crate::dynamics::{special_witness, CurveP1xP1};
use crate::error::{Error, Result};
use crate::heights::local::{arch_constants, arch_error, green_arch_with};
use crate::heights::HeightContext;

/// Two candidates closer than this (chordal) are the same point.
const MATCH_TOL: f64 = 1e-7;
const ROOT_TOL: f64 = 1e-13;
const GREEN_TARGET: f64 = 1e-9;
const CERTIFY_TARGET: f64 = 1e-9;
const MAX_DENOM: i64 = 10_000;

/// Largest tail `m` and period `n` enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrepBudget {
    pub m: usize,
    pub n: usize,
}

impl Default for PrepBudget {
    fn default() -> Self {
        PrepBudget { m: 3, n: 4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HeightKind {
    /// Both coordinates are enumerated preperiodic points.
    Preperiodic,
    /// One coordinate is rational with a certified canonical height.
    Certified,
    /// Average archimedean Green value over the candidate's group.
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallPoint {
    pub x: ProjPointC,
    pub y: ProjPointC,
    pub height: f64,
    pub kind: HeightKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallPoints {
    pub count: usize,
    pub points: Vec<SmallPoint>,
    pub empirical_min: f64,
    /// Smallest height among candidates not preperiodic for both maps.
    pub min_positive: f64,
    pub candidates: usize,
}

/// `(tail, period)` of a numerically preperiodic point, if found within
/// the budget.
fn numeric_type(f: &RationalMap, z: &ProjPointC, budget: PrepBudget) -> Option<(usize, usize)> {
    let mut orbit = vec![z.unit()];
    for _ in 0..budget.m + budget.n {
        let w = f.eval_c(orbit.last().unwrap()).unit();
        orbit.push(w);
    }
    for m in 0..=budget.m {
        for n in 1..=budget.n {
            if chordal(&orbit[m + n], &orbit[m]) <= MATCH_TOL {
                return Some((m, n));
            }
        }
    }
    None
}

struct Candidate {
    point: ProjPointC,
    kind: (usize, usize),
}

/// Points with tail at most `m` and period at most `n`, deduplicated.
fn candidates(f: &RationalMap, budget: PrepBudget) -> Result<Vec<Candidate>> {
    let mut all = Vec::new();
    for n in 1..=budget.n {
        all.extend(preperiodic_points(f, budget.m, n, ROOT_TOL)?);
    }
    Ok(cluster_points(&all, CLUSTER_TOL)
        .into_iter()
        .filter_map(|(p, _)| {
            let p = p.unit();
            numeric_type(f, &p, budget).map(|kind| Candidate { point: p, kind })
        })
        .collect())
}

fn matches_any(z: &ProjPointC, set: &[Candidate]) -> bool {
    set.iter().any(|c| chordal(&c.point, z) <= MATCH_TOL)
}

/// The rational number `z` equals up to rounding, with a bounded
/// denominator.
fn as_rational(z: &ProjPointC) -> Option<ProjPointQ> {
    if z.is_infinity_within(1e-14) {
        return Some(ProjPointQ::infinity());
    }
    let w = z.to_affine()?;
    let scale = w.norm().max(1.0);
    if w.im.abs() > 1e-10 * scale || w.re.abs() > 1e12 {
        return None;
    }
    convergents(w.re, 40)
        .into_iter()
        .take_while(|r| r.denom() <= &BigInt::from(MAX_DENOM))
        .find(|r| (r.to_f64().unwrap_or(f64::NAN) - w.re).abs() <= 1e-12 * scale)
        .map(|r| ProjPointQ::from_rational(&r))
}

fn green_lift(z: &ProjPointC) -> ProjPointC {
    let one = Complex64::new(1.0, 0.0);
    match z.to_affine() {
        Some(x) if z.y.norm() >= 1e-12 * z.x.norm() => ProjPointC::raw(x, one),
        _ => ProjPointC::infinity(),
    }
}

struct Lifted {
    x: ProjPointC,
    y: ProjPointC,
    group: (u8, usize, usize),
}

/// Candidates of `src_map` pulled through the fiber equations of `c`, with
/// heights for the coordinate along `other`.
fn side_points(
    c: &CurveP1xP1,
    which: u8,
    src: &[Candidate],
    other_map: &RationalMap,
    other_set: &[Candidate],
) -> Result<Vec<SmallPoint>> {
    let lifted: Vec<Vec<Lifted>> = src
        .par_iter()
        .map(|cand| {
            let form = c.fiber_form(which, &cand.point);
            if form.iter().all(|a| a.norm() == 0.0) {
                return Ok(vec![]);
            }
            Ok(form_roots(&form, ROOT_TOL)?
                .into_iter()
                .map(|r| {
                    let r = r.unit();
                    let (x, y) = if which == 1 { (cand.point, r) } else { (r, cand.point) };
                    Lifted {
                        x,
                        y,
                        group: (which, cand.kind.0, cand.kind.1),
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let consts = arch_constants(other_map);
    let d = other_map.degree();
    let iters = (1..=2000)
        .find(|&k| arch_error(&consts, d, k) <= GREEN_TARGET)
        .unwrap_or(2000);
    let ctx = HeightContext::new(other_map);
    let mut out = Vec::new();
    let mut groups: BTreeMap<(u8, usize, usize), Vec<(ProjPointC, ProjPointC, f64)>> = BTreeMap::new();
    for l in lifted.into_iter().flatten() {
        let free = if which == 1 { l.y } else { l.x };
        if matches_any(&free, other_set) {
            out.push(SmallPoint {
                x: l.x,
                y: l.y,
                height: 0.0,
                kind: HeightKind::Preperiodic,
            });
            continue;
        }
        if let Some(q) = as_rational(&free) {
            let h = ctx.canonical_height(&q, CERTIFY_TARGET)?;
            out.push(SmallPoint {
                x: l.x,
                y: l.y,
                height: h.value.max(0.0),
                kind: HeightKind::Certified,
            });
            continue;
        }
        let g = green_arch_with(other_map, &consts, &green_lift(&free), iters).value;
        groups.entry(l.group).or_default().push((l.x, l.y, g));
    }
    for members in groups.values() {
        let avg = members.iter().map(|m| m.2).sum::<f64>() / members.len() as f64;
        for (x, y, _) in members {
            out.push(SmallPoint {
                x: *x,
                y: *y,
                height: avg.max(0.0),
                kind: HeightKind::Numeric,
            });
        }
    }
    Ok(out)
}

/// Small points of `c` for the split map `(f, g)`. Candidates are points
/// whose first (or second) coordinate has tail at most `m` and period at
/// most `n` for `f` (or `g`). A candidate whose other coordinate is also an
/// enumerated preperiodic point has height 0; a rational other coordinate
/// gets its certified canonical height; the rest are grouped by
/// preperiodic type, which keeps groups Galois stable, and get the group
/// mean of the archimedean Green function of the other map at the affine
/// lift. Refuses curves with an exact weak-specialness witness.
pub fn fiber_small_points_maps(
    f: &RationalMap,
    g: &RationalMap,
    c: &CurveP1xP1,
    eps: f64,
    budget: PrepBudget,
) -> Result<SmallPoints> {
    if let Some(w) = special_witness(c, f, g, 3)? {
        return Err(Error::SpecialCurve(w));
    }
    let cf = candidates(f, budget)?;
    let cg = candidates(g, budget)?;
    let mut pts = side_points(c, 1, &cf, g, &cg)?;
    for p in side_points(c, 2, &cg, f, &cf)? {
        let dup = pts
            .iter()
            .any(|q| chordal(&q.x, &p.x) <= MATCH_TOL && chordal(&q.y, &p.y) <= MATCH_TOL);
        if !dup {
            pts.push(p);
        }
    }
    let empirical_min = pts.iter().map(|p| p.height).fold(f64::INFINITY, f64::min);
    let min_positive = pts
        .iter()
        .filter(|p| p.kind != HeightKind::Preperiodic)
        .map(|p| p.height)
        .fold(f64::INFINITY, f64::min);
    let candidates = pts.len();
    let small: Vec<SmallPoint> = pts.into_iter().filter(|p| p.height < eps).collect();
    Ok(SmallPoints {
        count: small.len(),
        points: small,
        empirical_min,
        min_positive,
        candidates,
    })
}

/// [`fiber_small_points_maps`] on the fiber of a pair family at `t`.
pub fn fiber_small_points(
    fam: &ParamFamily,
    c: &CurveP1xP1,
    t: &BigRational,
    eps: f64,
    budget: PrepBudget,
) -> Result<SmallPoints> {
    let (f, g) = fam.specialize_pair(t)?;
    fiber_small_points_maps(&f, &g, c, eps, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DkyCell {
    pub t1: i64,
    pub t2: i64,
    /// `None` for refused cells (`t1 = t2`).
    pub count: Option<usize>,
    pub min_positive: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DkyTable {
    pub cells: Vec<DkyCell>,
    pub max_count: usize,
}

/// Small points on the diagonal for `(z^2 + t1, z^2 + t2)` over the grid
/// `t1_list x t2_list`; cells with `t1 = t2` are refused (the diagonal is
/// invariant there).
pub fn dky_scan(t1_list: &[i64], t2_list: &[i64], eps: f64, budget: PrepBudget) -> Result<DkyTable> {
    let grid: Vec<(i64, i64)> = t1_list
        .iter()
        .flat_map(|&a| t2_list.iter().map(move |&b| (a, b)))
        .collect();
    let diag = CurveP1xP1::diagonal();
    let cells = grid
        .par_iter()
        .map(|&(t1, t2)| {
            if t1 == t2 {
                return Ok(DkyCell {
                    t1,
                    t2,
                    count: None,
                    min_positive: None,
                });
            }
            let (f, g) = (RationalMap::quadratic(t1), RationalMap::quadratic(t2));
            let r = fiber_small_points_maps(&f, &g, &diag, eps, budget)?;
            Ok(DkyCell {
                t1,
                t2,
                count: Some(r.count),
                min_positive: Some(r.min_positive),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_count = cells.iter().filter_map(|c| c.count).max().unwrap_or(0);
    Ok(DkyTable { cells, max_count })
}
