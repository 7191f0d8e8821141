//! Empirical lower bound `h_f(P(t)) >= c1 h(t) - c2` for a section of a
//! family.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::family::ParamFamily;
use super::isotrivial::{isotrivial_check, Isotriviality};
use crate::arith::poly::IntPoly;
use crate::arith::{naive_height, ProjPointQ};
use crate::error::{Error, Result};
use crate::heights::canonical_height;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightFit {
    pub c1: f64,
    pub c2: f64,
    /// `(h(t), h_f(P(t)))` per usable parameter, sorted by `h(t)`.
    pub support: Vec<(f64, f64)>,
    pub violations: usize,
    /// Least-squares slope over the upper half of the support.
    pub slope: f64,
    /// Parameters skipped as degenerate.
    #[serde(serialize_with = "super::ser_rationals")]
    pub skipped: Vec<BigRational>,
    pub isotriviality: Isotriviality,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Lower convex hull of points sorted by `x`; equal `x` keep the lowest.
fn lower_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in pts {
        if let Some(last) = hull.last() {
            if last.0 == p.0 {
                if p.1 >= last.1 {
                    continue;
                }
                hull.pop();
            }
        }
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// `(c1, c2)`: among lines below every support point, the steepest one
/// that touches the convex minorant, i.e. the last hull edge, with the
/// smallest admissible intercept.
fn fit_line(support: &[(f64, f64)]) -> (f64, f64) {
    let hull = lower_hull(support);
    let c1 = match hull.len() {
        0 | 1 => 0.0,
        n => {
            let (a, b) = (hull[n - 2], hull[n - 1]);
            ((b.1 - a.1) / (b.0 - a.0)).max(0.0)
        }
    };
    let c2 = support.iter().map(|(h, hh)| c1 * h - hh).fold(f64::NEG_INFINITY, f64::max);
    (c1, c2)
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Canonical heights of `section(t)` on the first map of `fam` over
/// `t_grid`, with the tightest line below them. The base height is the
/// naive height of `t`. Degenerate fibers are skipped and listed.
pub fn fit_height_inequality(
    fam: &ParamFamily,
    section: &IntPoly,
    t_grid: &[BigRational],
    target_error: f64,
) -> Result<HeightFit> {
    let rows: Vec<Result<std::result::Result<(f64, f64), BigRational>>> = t_grid
        .par_iter()
        .map(|t| {
            let f = match fam.specialize(t) {
                Ok(f) => f,
                Err(Error::DegenerateFiber(_)) => return Ok(Err(t.clone())),
                Err(e) => return Err(e),
            };
            let p = ProjPointQ::from_rational(&section.eval_rational(t));
            let h = canonical_height(&f, &p, target_error)?;
            Ok(Ok((naive_height(&ProjPointQ::from_rational(t)), h.value)))
        })
        .collect();
    let mut support = Vec::new();
    let mut skipped = Vec::new();
    for r in rows {
        match r? {
            Ok(pair) => support.push(pair),
            Err(t) => skipped.push(t),
        }
    }
    support.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (c1, c2) = fit_line(&support);
    let violations = support.iter().filter(|(h, hh)| *hh < c1 * h - c2).count();
    let slope = least_squares_slope(&support[support.len() / 2..]);
    Ok(HeightFit {
        c1,
        c2,
        support,
        violations,
        slope,
        skipped,
        isotriviality: isotrivial_check(&fam.first(), 4)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::RationalMap;

    fn grid(a: i64, b: i64) -> Vec<BigRational> {
        (a..=b).map(|t| BigRational::from_integer(t.into())).collect()
    }

    #[test]
    fn hull_line() {
        let pts = [(0.0, 1.0), (1.0, 0.0), (2.0, 0.5), (3.0, 2.0)];
        let (c1, c2) = fit_line(&pts);
        assert!((c1 - 1.5).abs() < 1e-12);
        assert!((c2 - 2.5).abs() < 1e-12);
    }

    #[test]
    fn critical_point_section() {
        let fit = fit_height_inequality(&ParamFamily::unicritical(2), &IntPoly::from_i64(&[0]), &grid(2, 100), 1e-8)
            .unwrap();
        assert_eq!(fit.violations, 0);
        assert!(fit.c1 >= 0.4, "{}", fit.c1);
        assert!((fit.slope - 0.5).abs() < 0.05, "{}", fit.slope);
        assert_eq!(fit.isotriviality, Isotriviality::NonIsotrivial);
    }

    #[test]
    fn identity_section() {
        // t is the first image of 0, so its height is twice that of 0
        let fit = fit_height_inequality(&ParamFamily::unicritical(2), &IntPoly::from_i64(&[0, 1]), &grid(2, 100), 1e-8)
            .unwrap();
        assert_eq!(fit.violations, 0);
        assert!((fit.slope - 1.0).abs() < 0.1, "{}", fit.slope);
    }

    #[test]
    fn constant_family() {
        let fam = ParamFamily::constant(&RationalMap::power(2));
        let fit = fit_height_inequality(&fam, &IntPoly::from_i64(&[2]), &grid(1, 30), 1e-8).unwrap();
        assert_eq!(fit.c1, 0.0);
        assert!((fit.c2 + 2f64.ln()).abs() < 1e-8);
        assert_eq!(fit.slope.abs() < 1e-12, true);
        assert_eq!(fit.isotriviality, Isotriviality::Isotrivial);
    }
}
