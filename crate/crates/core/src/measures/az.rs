use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{ProjPointC, RationalMap};
use crate::dynamics::enumerate::periodic_points;
use crate::error::{Error, Result};
use crate::heights::local::{arch_constants, arch_error, green_arch_with};
use crate::heights::{HeightEstimate, Place};

const ROOT_TOL: f64 = 1e-12;
const MAX_GREEN_ITERS: usize = 2000;

/// Mean of `G_g(z, 1)` over the solutions of `f^n(z) = z` (with `(1, 0)` at
/// infinity). This is the average canonical `g`-height of `Fix(f^n)` when
/// those points are algebraic integers and `g` has good reduction
/// everywhere; otherwise it is only the archimedean part. The error is the
/// certified Green-function error; the distance to the limit in `n` is not
/// bounded.
pub fn arakelov_zhang_estimate(
    f: &RationalMap,
    g: &RationalMap,
    n: usize,
    target_error: f64,
) -> Result<HeightEstimate> {
    if !(target_error > 0.0) {
        return Err(Error::InvalidInput("target_error must be positive".into()));
    }
    let consts = arch_constants(g);
    let d = g.degree();
    let iters = (1..=MAX_GREEN_ITERS)
        .find(|&k| arch_error(&consts, d, k) <= target_error)
        .ok_or_else(|| Error::BudgetExceeded("green iteration budget".into()))?;
    let pts = periodic_points(f, n, ROOT_TOL)?;
    let one = Complex64::new(1.0, 0.0);
    let values: Vec<f64> = pts
        .par_iter()
        .map(|z| {
            let lift = match z.to_affine() {
                Some(x) if z.y.norm() >= 1e-12 * z.x.norm() => ProjPointC::raw(x, one),
                _ => ProjPointC::infinity(),
            };
            green_arch_with(g, &consts, &lift, iters).value
        })
        .collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(HeightEstimate::single(
        Place::Archimedean,
        mean,
        arch_error(&consts, d, iters),
    ))
}
