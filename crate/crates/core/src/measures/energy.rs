//! Energy of the difference of two empirical measures under the `-log`
//! chordal kernel, with a block bootstrap for its standard error.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::pullback::curve_pullback_sample;
use super::sample::{backward_sample, generic_start};
use super::{derive_seed, CurvePoint, EmpiricalMeasure};
use crate::arith::{ProjPointC, RationalMap};
use crate::dynamics::CurveP1xP1;
use crate::error::{Error, Result};

/// Fewest samples per measure accepted by the energy estimators.
pub const MIN_SAMPLES: usize = 100;
/// Blocks used by the bootstrap.
pub const BLOCKS: usize = 50;
pub const RESAMPLES: usize = 200;

/// Points with a `-log` distance kernel, `+inf` on coincident points.
pub trait EnergyPoint: Sync {
    type Pre: Sync + Send;
    fn prepare(&self) -> Self::Pre;
    fn kernel(a: &Self::Pre, b: &Self::Pre) -> f64;
}

fn unit_euclid(z: &ProjPointC) -> [Complex64; 2] {
    let n = (z.x.norm_sqr() + z.y.norm_sqr()).sqrt();
    [z.x / n, z.y / n]
}

fn log_chordal(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    -(a[0] * b[1] - a[1] * b[0]).norm().min(1.0).ln()
}

impl EnergyPoint for ProjPointC {
    type Pre = [Complex64; 2];

    fn prepare(&self) -> Self::Pre {
        unit_euclid(self)
    }

    fn kernel(a: &Self::Pre, b: &Self::Pre) -> f64 {
        log_chordal(a, b)
    }
}

/// On a curve the kernel is the mean of the two factor kernels, so the
/// energy is the average of the energies of the two projections.
impl EnergyPoint for CurvePoint {
    type Pre = [[Complex64; 2]; 2];

    fn prepare(&self) -> Self::Pre {
        [unit_euclid(&self.0), unit_euclid(&self.1)]
    }

    fn kernel(a: &Self::Pre, b: &Self::Pre) -> f64 {
        0.5 * (log_chordal(&a[0], &b[0]) + log_chordal(&a[1], &b[1]))
    }
}

/// Per block pair: sum of `w_i w_j k(i, j)` and of `w_i w_j` over the
/// included pairs (distinct indices for a sample against itself, finite
/// kernel).
struct BlockSums {
    s: Vec<f64>,
    w: Vec<f64>,
}

impl BlockSums {
    fn mean(&self, ca: &[f64], cb: &[f64]) -> f64 {
        let k = ca.len();
        let (mut num, mut den) = (0.0, 0.0);
        for a in 0..k {
            if ca[a] == 0.0 {
                continue;
            }
            for b in 0..k {
                let c = ca[a] * cb[b];
                num += c * self.s[a * k + b];
                den += c * self.w[a * k + b];
            }
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }
}

fn block_of(i: usize, n: usize, k: usize) -> usize {
    i * k / n
}

fn block_sums<P>(a: &[(P::Pre, f64)], b: &[(P::Pre, f64)], same: bool, k: usize) -> BlockSums
where
    P: EnergyPoint,
{
    let (na, nb) = (a.len(), b.len());
    // each row block accumulates sequentially; rows blocks run in parallel
    let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..k)
        .into_par_iter()
        .map(|ba| {
            let mut s = vec![0.0; k];
            let mut w = vec![0.0; k];
            let lo = (ba * na).div_ceil(k);
            let hi = ((ba + 1) * na).div_ceil(k);
            for i in lo..hi {
                let (pi, wi) = &a[i];
                for (j, (pj, wj)) in b.iter().enumerate() {
                    if same && i == j {
                        continue;
                    }
                    let v = P::kernel(pi, pj);
                    if !v.is_finite() {
                        continue;
                    }
                    let bb = block_of(j, nb, k);
                    let ww = wi * wj;
                    s[bb] += ww * v;
                    w[bb] += ww;
                }
            }
            (s, w)
        })
        .collect();
    let mut s = Vec::with_capacity(k * k);
    let mut w = Vec::with_capacity(k * k);
    for (rs, rw) in rows {
        s.extend(rs);
        w.extend(rw);
    }
    BlockSums { s, w }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub statistic: f64,
    pub se: f64,
    pub decision: EqualityVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EqualityVerdict {
    Equal,
    NotEqual,
    Inconclusive,
}

fn check_sizes<P>(mu1: &EmpiricalMeasure<P>, mu2: &EmpiricalMeasure<P>) -> Result<()> {
    for m in [mu1, mu2] {
        if m.len() < MIN_SAMPLES {
            return Err(Error::InsufficientSamples {
                needed: MIN_SAMPLES,
                got: m.len(),
            });
        }
    }
    Ok(())
}

fn prepared<P: EnergyPoint>(m: &EmpiricalMeasure<P>) -> Vec<(P::Pre, f64)> {
    m.samples.iter().map(|(p, w)| (p.prepare(), *w)).collect()
}

struct Blocks {
    aa: BlockSums,
    bb: BlockSums,
    ab: BlockSums,
}

impl Blocks {
    fn statistic(&self, ca: &[f64], cb: &[f64]) -> f64 {
        self.aa.mean(ca, ca) + self.bb.mean(cb, cb) - 2.0 * self.ab.mean(ca, cb)
    }
}

fn blocks<P: EnergyPoint>(mu1: &EmpiricalMeasure<P>, mu2: &EmpiricalMeasure<P>) -> Blocks {
    let (a, b) = (prepared(mu1), prepared(mu2));
    Blocks {
        aa: block_sums::<P>(&a, &a, true, BLOCKS),
        bb: block_sums::<P>(&b, &b, true, BLOCKS),
        ab: block_sums::<P>(&a, &b, false, BLOCKS),
    }
}

/// `I(mu1 - mu2) = E k(X, X') + E k(Y, Y') - 2 E k(X, Y)` estimated by
/// weighted means over off-diagonal pairs; coincident pairs are skipped.
/// Returns exactly 0 for identical sample sets.
pub fn mutual_energy<P>(mu1: &EmpiricalMeasure<P>, mu2: &EmpiricalMeasure<P>) -> Result<f64>
where
    P: EnergyPoint + PartialEq,
{
    check_sizes(mu1, mu2)?;
    if mu1.samples == mu2.samples {
        return Ok(0.0);
    }
    let ones = vec![1.0; BLOCKS];
    Ok(blocks(mu1, mu2).statistic(&ones, &ones))
}

/// Energy with a block-bootstrap standard error; the bootstrap draws from a
/// stream derived from `seed` that no sampler uses. With `paired`, block
/// `k` of both samples is drawn together, as needed when the two samples
/// were generated from common random numbers.
pub fn energy_report<P>(
    mu1: &EmpiricalMeasure<P>,
    mu2: &EmpiricalMeasure<P>,
    seed: u64,
    paired: bool,
) -> Result<EnergyReport>
where
    P: EnergyPoint + PartialEq,
{
    check_sizes(mu1, mu2)?;
    if mu1.samples == mu2.samples {
        return Ok(EnergyReport {
            statistic: 0.0,
            se: 0.0,
            decision: EqualityVerdict::Equal,
        });
    }
    let bl = blocks(mu1, mu2);
    let ones = vec![1.0; BLOCKS];
    let statistic = bl.statistic(&ones, &ones);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xB007));
    let reps: Vec<f64> = (0..RESAMPLES)
        .map(|_| {
            let mut ca = vec![0.0; BLOCKS];
            let mut cb = vec![0.0; BLOCKS];
            for _ in 0..BLOCKS {
                let k = rng.gen_range(0..BLOCKS);
                ca[k] += 1.0;
                cb[if paired { k } else { rng.gen_range(0..BLOCKS) }] += 1.0;
            }
            bl.statistic(&ca, &cb)
        })
        .collect();
    let mean = reps.iter().sum::<f64>() / reps.len() as f64;
    let var = reps.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (reps.len() - 1) as f64;
    let se = var.sqrt();
    let decision = if statistic < se {
        EqualityVerdict::Equal
    } else if statistic > 3.0 * se {
        EqualityVerdict::NotEqual
    } else {
        EqualityVerdict::Inconclusive
    };
    Ok(EnergyReport {
        statistic,
        se,
        decision,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EqualityParams {
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for EqualityParams {
    fn default() -> Self {
        EqualityParams {
            samples: 10_000,
            depth: 20,
            seed: 0,
            tol: 1e-10,
        }
    }
}

/// Compares the normalized pullbacks `pi_1^* mu_f` and `pi_2^* mu_g` on
/// `c` through the energy of their difference. Both walks use the same
/// start and random stream, so `f = g` on the diagonal yields identical
/// samples and the bootstrap resamples walks in pairs.
pub fn measure_equality_test(
    f: &RationalMap,
    g: &RationalMap,
    c: &CurveP1xP1,
    params: &EqualityParams,
) -> Result<EnergyReport> {
    let (d1, d2) = c.bidegree();
    if d1 == 0 {
        return Err(Error::NonDominant(1));
    }
    if d2 == 0 {
        return Err(Error::NonDominant(2));
    }
    let walk_seed = derive_seed(params.seed, 1);
    let mu_f = backward_sample(f, &generic_start(f)?, params.depth, params.samples, walk_seed)?;
    let mu_g = backward_sample(g, &generic_start(g)?, params.depth, params.samples, walk_seed)?;
    let on_c1 = curve_pullback_sample(c, &mu_f, 1, params.tol)?;
    let on_c2 = curve_pullback_sample(c, &mu_g, 2, params.tol)?;
    energy_report(&on_c1, &on_c2, params.seed, true)
}
