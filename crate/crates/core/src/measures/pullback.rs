use rayon::prelude::*;

use super::{CurvePoint, EmpiricalMeasure};
use crate::arith::roots::form_roots;
use crate::dynamics::CurveP1xP1;
use crate::error::{Error, Result};

/// Fiber forms with all coefficients below this (relative to the curve's
/// largest coefficient) are treated as identically zero.
const VANISHING_FIBER: f64 = 1e-12;

/// Pulls `mu` back along projection `which`: every sample `u` is replaced by
/// the fiber roots of `C(u, .)` (or `C(., u)`), each carrying the sample
/// weight divided by the fiber degree. Samples over which the whole fiber
/// lies in `C` are dropped and the rest renormalized.
pub fn curve_pullback_sample(
    c: &CurveP1xP1,
    mu: &EmpiricalMeasure,
    which: u8,
    tol: f64,
) -> Result<EmpiricalMeasure<CurvePoint>> {
    let (d1, d2) = c.bidegree();
    let fiber_deg = match which {
        1 => d2,
        2 => d1,
        _ => return Err(Error::InvalidInput("projection must be 1 or 2".into())),
    };
    if fiber_deg == 0 {
        return Err(Error::NonDominant(which));
    }
    let scale = c
        .coeffs()
        .iter()
        .flatten()
        .map(|x| crate::arith::point::ratio_f64(x, &1.into()).abs())
        .fold(0.0, f64::max);
    let lifted: Vec<Vec<(CurvePoint, f64)>> = mu
        .samples
        .par_iter()
        .map(|(u, w)| {
            let form = c.fiber_form(which, u);
            if form.iter().all(|a| a.norm() <= VANISHING_FIBER * scale) {
                return Ok(vec![]);
            }
            let roots = form_roots(&form, tol)?;
            let share = w / roots.len() as f64;
            Ok(roots
                .into_iter()
                .map(|r| {
                    let pt = if which == 1 { (*u, r.unit()) } else { (r.unit(), *u) };
                    (pt, share)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut out = EmpiricalMeasure {
        samples: lifted.into_iter().flatten().collect(),
        provenance: mu.provenance.clone(),
    };
    if out.is_empty() {
        return Err(Error::InvalidInput("every fiber lies in the curve".into()));
    }
    out.normalize();
    Ok(out)
}
