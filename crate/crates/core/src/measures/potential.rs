use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{ProjPointC, RationalMap};
use crate::error::{Error, Result};
use crate::heights::local::green_arch;

/// Invariant potential of `mu_f` at the given lift: the escape rate
/// `G_F(u)`.
pub fn potential_green(f: &RationalMap, z: &ProjPointC, n: usize) -> f64 {
    green_arch(f, z, n).value
}

/// Formal sum of points of P^1(C) with integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DivisorP1 {
    pub terms: Vec<(ProjPointC, i64)>,
}

impl DivisorP1 {
    pub fn new(terms: Vec<(ProjPointC, i64)>) -> Self {
        DivisorP1 { terms }
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    pub fn add(&self, o: &DivisorP1) -> DivisorP1 {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        DivisorP1 { terms }
    }
}

/// `log|r|` for `r = prod (z - a)^m` over the finite points of a degree-0
/// divisor; the point at infinity carries no factor, which fixes the
/// additive constant (`r(infinity) = 1` when infinity is off the support).
#[derive(Clone, Debug)]
pub struct FlatPotential {
    finite: Vec<(Complex64, f64)>,
    at_infinity: i64,
}

pub fn flat_potential(d: &DivisorP1) -> Result<FlatPotential> {
    let deg = d.degree();
    if deg != 0 {
        return Err(Error::DegreeNonZero(deg));
    }
    let mut finite = Vec::new();
    let mut at_infinity = 0;
    for (p, m) in &d.terms {
        match p.to_affine() {
            Some(a) => finite.push((a, *m as f64)),
            None => at_infinity += m,
        }
    }
    Ok(FlatPotential { finite, at_infinity })
}

impl FlatPotential {
    pub fn eval(&self, z: &ProjPointC) -> f64 {
        match z.to_affine() {
            Some(w) => self.finite.iter().map(|(a, m)| m * (w - a).norm().ln()).sum(),
            None => match self.at_infinity {
                0 => 0.0,
                m if m > 0 => f64::INFINITY,
                _ => f64::NEG_INFINITY,
            },
        }
    }
}
