//! Empirical equilibrium measures, pullbacks to curves and energy pairings.

pub mod az;
pub mod energy;
pub mod potential;
pub mod pullback;
pub mod sample;

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::ProjPointC;
use crate::error::Result;

pub use az::arakelov_zhang_estimate;
pub use energy::{
    energy_report, measure_equality_test, mutual_energy, EnergyPoint, EnergyReport,
    EqualityParams, EqualityVerdict,
};
pub use potential::{flat_potential, potential_green, DivisorP1, FlatPotential};
pub use pullback::curve_pullback_sample;
pub use sample::backward_sample;

/// Point on a curve in P^1 x P^1.
pub type CurvePoint = (ProjPointC, ProjPointC);

/// Weighted point cloud of total mass 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalMeasure<P = ProjPointC> {
    pub samples: Vec<(P, f64)>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub source: String,
    pub depth: usize,
    pub seed: u64,
}

impl<P> EmpiricalMeasure<P> {
    /// Uniform weights.
    pub fn uniform(points: Vec<P>, provenance: Provenance) -> Self {
        let w = 1.0 / points.len().max(1) as f64;
        EmpiricalMeasure {
            samples: points.into_iter().map(|p| (p, w)).collect(),
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.samples.iter().map(|s| s.1).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = &P> {
        self.samples.iter().map(|s| &s.0)
    }

    /// Rescales weights to sum to one.
    pub fn normalize(&mut self) {
        let t = self.total_weight();
        if t > 0.0 {
            for s in &mut self.samples {
                s.1 /= t;
            }
        }
    }
}

fn affine_fields(z: &ProjPointC) -> (String, String) {
    match z.to_affine() {
        Some(w) => (format!("{:.16e}", w.re), format!("{:.16e}", w.im)),
        None => ("inf".into(), "inf".into()),
    }
}

impl EmpiricalMeasure<ProjPointC> {
    /// Writes `re,im,weight` rows in the affine chart (`inf` at infinity).
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "re,im,weight")?;
        for (z, w) in &self.samples {
            let (re, im) = affine_fields(z);
            writeln!(out, "{re},{im},{w:.16e}")?;
        }
        Ok(())
    }

    pub fn affine_values(&self) -> Vec<Option<Complex64>> {
        self.samples.iter().map(|(z, _)| z.to_affine()).collect()
    }
}

impl EmpiricalMeasure<CurvePoint> {
    /// Pushforward to one factor (`which` = 1 or 2).
    pub fn project(&self, which: u8) -> EmpiricalMeasure<ProjPointC> {
        EmpiricalMeasure {
            samples: self
                .samples
                .iter()
                .map(|((a, b), w)| (if which == 1 { *a } else { *b }, *w))
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}

/// SplitMix64 step, used to derive independent seeds from one master seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
