//! Random backward orbits, which equidistribute to the measure of maximal
//! entropy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{EmpiricalMeasure, Provenance};
use crate::arith::{chordal, ProjPointC, RationalMap};
use crate::dynamics::enumerate::{preimages, CLUSTER_TOL};
use crate::error::{Error, Result};

const ROOT_TOL: f64 = 1e-13;

fn single_preimage(f: &RationalMap, z: &ProjPointC) -> Result<Option<ProjPointC>> {
    let pre = preimages(f, z, ROOT_TOL)?;
    let first = pre[0];
    Ok(pre
        .iter()
        .all(|w| chordal(w, &first) <= CLUSTER_TOL)
        .then_some(first))
}

/// True when the grand orbit of `z` is finite: `z` and at most one other
/// point form a totally invariant set.
pub fn is_exceptional_point(f: &RationalMap, z: &ProjPointC) -> Result<bool> {
    let Some(w) = single_preimage(f, z)? else {
        return Ok(false);
    };
    if chordal(&w, z) <= CLUSTER_TOL {
        return Ok(true);
    }
    Ok(single_preimage(f, &w)?.is_some_and(|v| chordal(&v, z) <= CLUSTER_TOL))
}

/// `width` independent walks of `depth` uniformly chosen preimages from
/// `z0`; the endpoints get weight `1 / width`. Walk `i` draws from its own
/// ChaCha stream `(seed, i)`, so the result does not depend on scheduling.
pub fn backward_sample(
    f: &RationalMap,
    z0: &ProjPointC,
    depth: usize,
    width: usize,
    seed: u64,
) -> Result<EmpiricalMeasure> {
    if depth == 0 || width == 0 {
        return Err(Error::InvalidInput("depth and width must be positive".into()));
    }
    if is_exceptional_point(f, z0)? {
        return Err(Error::ExceptionalStart);
    }
    let points = (0..width)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut z = *z0;
            for _ in 0..depth {
                let pre = preimages(f, &z, ROOT_TOL)?;
                z = pre[rng.gen_range(0..pre.len())].unit();
            }
            Ok(z)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalMeasure::uniform(
        points,
        Provenance {
            source: f.to_string(),
            depth,
            seed,
        },
    ))
}

/// A non-exceptional start from a fixed list of generic points.
pub fn generic_start(f: &RationalMap) -> Result<ProjPointC> {
    use num_complex::Complex64;
    for (re, im) in [(2.0, 0.0), (0.37, 0.61), (-1.3, 0.9), (5.0, -3.0)] {
        let z = ProjPointC::affine(Complex64::new(re, im));
        if !is_exceptional_point(f, &z)? {
            return Ok(z);
        }
    }
    Err(Error::ExceptionalStart)
}
