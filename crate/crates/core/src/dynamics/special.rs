//! Screening curves in P^1 x P^1 for weak specialness under a split map.

use num_traits::Zero;
use serde::Serialize;

use super::curve::{curve_preperiodic_test, CurveP1xP1, CurvePrep};
use crate::arith::RationalMap;
use crate::error::Result;
use crate::heights::local::arch_constants;
use crate::measures::{measure_equality_test, EqualityParams, EqualityVerdict};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum SpecialVerdict {
    Special { evidence: String },
    NotSpecialEvidence { statistic: f64, se: f64 },
    Unknown { evidence: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScreenBudget {
    /// Curve images tried when looking for a repetition.
    pub curve_iters: usize,
    pub equality: EqualityParams,
}

impl Default for ScreenBudget {
    fn default() -> Self {
        ScreenBudget {
            curve_iters: 3,
            equality: EqualityParams::default(),
        }
    }
}

/// `z -> c z^(+-d)` with `|c| = 1`, whose lift is exact.
fn is_power_map(f: &RationalMap) -> bool {
    arch_constants(f).is_exact()
}

/// Exactly two nonzero monomials: a union of torus cosets and fibers over
/// 0 and infinity.
fn is_binomial(c: &CurveP1xP1) -> bool {
    c.coeffs().iter().flatten().filter(|x| !x.is_zero()).count() == 2
}

/// A reason `c` is weakly special that can be checked exactly, if any.
pub fn special_witness(
    c: &CurveP1xP1,
    f: &RationalMap,
    g: &RationalMap,
    curve_iters: usize,
) -> Result<Option<String>> {
    let (d1, d2) = c.bidegree();
    if d1 == 0 || d2 == 0 {
        return Ok(Some(format!("fibral: bidegree ({d1}, {d2})")));
    }
    match curve_preperiodic_test(c, f, g, curve_iters) {
        Ok(CurvePrep::Preperiodic { m, n }) => {
            return Ok(Some(format!("preperiodic: (f,g)^{}(C) = (f,g)^{m}(C)", m + n)));
        }
        Ok(CurvePrep::NoRepetition) | Err(crate::Error::BudgetExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    if is_power_map(f) && is_power_map(g) && is_binomial(c) {
        return Ok(Some("torus coset under power maps".into()));
    }
    Ok(None)
}

/// Special on an exact witness; otherwise asks the measure test, whose
/// rejection of the pullback identity rules out specialness.
pub fn weakly_special_screen(
    c: &CurveP1xP1,
    f: &RationalMap,
    g: &RationalMap,
    budget: &ScreenBudget,
) -> Result<SpecialVerdict> {
    if let Some(evidence) = special_witness(c, f, g, budget.curve_iters)? {
        return Ok(SpecialVerdict::Special { evidence });
    }
    let r = measure_equality_test(f, g, c, &budget.equality)?;
    Ok(match r.decision {
        EqualityVerdict::NotEqual => SpecialVerdict::NotSpecialEvidence {
            statistic: r.statistic,
            se: r.se,
        },
        EqualityVerdict::Equal => SpecialVerdict::Unknown {
            evidence: format!("pullback measures agree (energy {:.4e}, se {:.1e})", r.statistic, r.se),
        },
        EqualityVerdict::Inconclusive => SpecialVerdict::Unknown {
            evidence: format!("energy test inconclusive ({:.4e}, se {:.1e})", r.statistic, r.se),
        },
    })
}
