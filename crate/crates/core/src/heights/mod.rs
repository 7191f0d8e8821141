//! Call-Silverman canonical heights assembled from certified local Green
//! functions at infinity and at the primes of bad reduction.

pub mod local;

use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::arith::point::{log_abs, ProjPointQ};
use crate::arith::primes::factorize;
use crate::arith::RationalMap;
use crate::error::{Error, Result};
pub use crate::arith::point::naive_height;
pub use local::{arch_constants, green_arch, green_nonarch, ArchConstants};

/// Hard cap on telescoping terms per place.
pub const MAX_ITERS: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Archimedean,
    Prime(BigInt),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "arch"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaceValue {
    pub place: Place,
    pub value: f64,
    pub error: f64,
}

/// A real number with a certified error radius.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightEstimate {
    pub value: f64,
    pub error: f64,
    pub place_breakdown: Vec<PlaceValue>,
}

impl HeightEstimate {
    pub fn single(place: Place, value: f64, error: f64) -> Self {
        HeightEstimate {
            value,
            error,
            place_breakdown: vec![PlaceValue { place, value, error }],
        }
    }

    /// Estimate from a breakdown; the value is the in-order sum.
    pub fn from_places(places: Vec<PlaceValue>) -> Self {
        let value = places.iter().fold(0.0, |a, p| a + p.value);
        let error = places.iter().fold(0.0, |a, p| a + p.error);
        HeightEstimate {
            value,
            error,
            place_breakdown: places,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.error
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error
    }
}

/// Per-map data reused across height evaluations.
#[derive(Clone, Debug)]
pub struct HeightContext {
    map: RationalMap,
    arch: ArchConstants,
    /// `(p, v_p(Res))` for every prime dividing the resultant.
    bad_primes: Vec<(BigInt, u32)>,
}

impl HeightContext {
    pub fn new(f: &RationalMap) -> Self {
        HeightContext {
            map: f.clone(),
            arch: arch_constants(f),
            bad_primes: factorize(f.res()),
        }
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn arch(&self) -> &ArchConstants {
        &self.arch
    }

    pub fn bad_primes(&self) -> &[(BigInt, u32)] {
        &self.bad_primes
    }

    /// Terms needed so the archimedean radius is at most `target`.
    fn arch_iters(&self, target: f64) -> Result<usize> {
        let d = self.map.degree();
        if self.arch.is_exact() {
            return Ok(0);
        }
        if target <= local::ROUNDING_PAD {
            return Err(Error::BudgetExceeded(format!(
                "target error {target:e} below floating-point resolution"
            )));
        }
        iters_for(|n| local::arch_error(&self.arch, d, n) <= target)
    }

    fn prime_iters(&self, p: &BigInt, e: u32, target: f64) -> Result<usize> {
        let d = self.map.degree();
        iters_for(|n| local::nonarch_error(e, p, d, n) <= target)
    }

    pub fn canonical_height(&self, z: &ProjPointQ, target_error: f64) -> Result<HeightEstimate> {
        if !(target_error > 0.0) {
            return Err(Error::InvalidInput("target_error must be positive".into()));
        }
        let per = target_error / (1 + self.bad_primes.len()) as f64;
        let n = self.arch_iters(per)?;
        let mut places =
            vec![local::green_arch_int(&self.map, &self.arch, z.x(), z.y(), n).place_breakdown.remove(0)];
        for (p, e) in &self.bad_primes {
            let n = self.prime_iters(p, *e, per)?;
            places.push(green_nonarch(&self.map, z, p, n).place_breakdown.remove(0));
        }
        Ok(HeightEstimate::from_places(places))
    }

    /// Bounds `c_minus_v <= log||F(u)||_v - d log||u||_v` summed over places.
    pub fn difference_bound(&self) -> f64 {
        let d = self.map.degree() as f64;
        let mut lo = self.arch.c_minus;
        let hi = self.arch.c_plus;
        for (p, e) in &self.bad_primes {
            lo -= *e as f64 * log_abs(p);
        }
        lo.abs().max(hi.abs()) / (d - 1.0)
    }
}

fn iters_for(ok: impl Fn(usize) -> bool) -> Result<usize> {
    (0..=MAX_ITERS)
        .find(|&n| ok(n))
        .ok_or_else(|| Error::BudgetExceeded(format!("more than {MAX_ITERS} iterations needed")))
}

/// `h_f(z)` to within `target_error`.
pub fn canonical_height(f: &RationalMap, z: &ProjPointQ, target_error: f64) -> Result<HeightEstimate> {
    HeightContext::new(f).canonical_height(z, target_error)
}

/// Height on a split map: the sum of coordinate heights. The breakdown is
/// merged per place (archimedean first, primes ascending).
pub fn canonical_height_split(
    maps: &[RationalMap],
    z: &[ProjPointQ],
    target_error: f64,
) -> Result<HeightEstimate> {
    if maps.len() != z.len() || maps.is_empty() {
        return Err(Error::InvalidInput(format!(
            "need equal nonzero numbers of maps and points, got {} and {}",
            maps.len(),
            z.len()
        )));
    }
    let per = target_error / maps.len() as f64;
    let mut merged: std::collections::BTreeMap<Place, (f64, f64)> = Default::default();
    for (f, p) in maps.iter().zip(z) {
        let h = canonical_height(f, p, per)?;
        for pv in h.place_breakdown {
            let e = merged.entry(pv.place).or_insert((0.0, 0.0));
            e.0 += pv.value;
            e.1 += pv.error;
        }
    }
    Ok(HeightEstimate::from_places(
        merged
            .into_iter()
            .map(|(place, (value, error))| PlaceValue { place, value, error })
            .collect(),
    ))
}

/// `C` with `|h_f(z) - h(z)| <= C` for all rational points.
pub fn height_difference_bound(f: &RationalMap) -> f64 {
    HeightContext::new(f).difference_bound()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64, y: i64) -> ProjPointQ {
        ProjPointQ::from_ints(x, y).unwrap()
    }

    #[test]
    fn power_map_heights_are_exact() {
        let f = RationalMap::power(2);
        let h = canonical_height(&f, &q(3, 2), 1e-9).unwrap();
        assert_eq!(h.error, 0.0);
        assert!((h.value - 3f64.ln()).abs() < 1e-15);
        let h = canonical_height(&f, &q(1, 1), 1e-9).unwrap();
        assert_eq!((h.value, h.error), (0.0, 0.0));
    }

    #[test]
    fn chebyshev_height() {
        let f = RationalMap::quadratic(-2);
        let h = canonical_height(&f, &q(3, 1), 1e-6).unwrap();
        assert!(h.error <= 1e-6);
        assert!(h.contains(((3.0 + 5f64.sqrt()) / 2.0).ln()));
        let s = canonical_height_split(&[f.clone(), f.clone()], &[q(3, 1), q(3, 1)], 1e-6).unwrap();
        assert!((s.value - 2.0 * 0.962424).abs() < 1e-5);
    }

    #[test]
    fn difference_bounds() {
        assert_eq!(height_difference_bound(&RationalMap::power(2)), 0.0);
        assert!((height_difference_bound(&RationalMap::quadratic(-2)) - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn breakdown_sums_to_value() {
        let f = RationalMap::from_poly_coeffs(&[1, 0, 3], &[0, 2]).unwrap();
        let h = canonical_height(&f, &q(5, 7), 1e-8).unwrap();
        assert!(h.place_breakdown.len() > 1);
        let s = h.place_breakdown.iter().fold(0.0, |a, p| a + p.value);
        assert_eq!(s, h.value);
    }
}
