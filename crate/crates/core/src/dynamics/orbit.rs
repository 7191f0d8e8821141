use std::collections::HashMap;

use serde::Serialize;

use crate::arith::{ProjPointQ, RationalMap};
use crate::heights::HeightContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitVerdict {
    Preperiodic,
    Escaping,
    Budget,
}

/// Exact forward orbit of a rational point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub points: Vec<ProjPointQ>,
    pub tail_length: usize,
    pub cycle_length: Option<usize>,
    pub verdict: OrbitVerdict,
}

/// Iterates exactly from `z`. Stops on the first repeated point, on a
/// point of naive height above `height_cutoff`, or after `max_steps`
/// applications of `f`.
pub fn orbit(f: &RationalMap, z: &ProjPointQ, max_steps: usize, height_cutoff: f64) -> OrbitRecord {
    let mut seen: HashMap<ProjPointQ, usize> = HashMap::new();
    let mut points = vec![z.clone()];
    seen.insert(z.clone(), 0);
    let mut cur = z.clone();
    let done = |points: Vec<ProjPointQ>, verdict| OrbitRecord {
        tail_length: points.len() - 1,
        points,
        cycle_length: None,
        verdict,
    };
    if cur.naive_height() > height_cutoff {
        return done(points, OrbitVerdict::Escaping);
    }
    for step in 1..=max_steps {
        cur = f.eval(&cur);
        if let Some(&m) = seen.get(&cur) {
            points.push(cur);
            return OrbitRecord {
                points,
                tail_length: m,
                cycle_length: Some(step - m),
                verdict: OrbitVerdict::Preperiodic,
            };
        }
        let escaped = cur.naive_height() > height_cutoff;
        points.push(cur.clone());
        if escaped {
            return done(points, OrbitVerdict::Escaping);
        }
        seen.insert(cur.clone(), step);
    }
    done(points, OrbitVerdict::Budget)
}

/// Escape cutoff `C + 1` with `C` the height difference bound.
pub fn escape_cutoff(ctx: &HeightContext) -> f64 {
    ctx.difference_bound() + 1.0
}

/// Number of rational points of naive height at most `b`, bounded above;
/// an orbit confined below `b` must repeat within this many steps.
pub fn step_bound(b: f64) -> usize {
    let k = b.exp().floor();
    let side = 2.0 * k + 1.0;
    let n = side * side + 2.0;
    if n > 1e12 {
        usize::MAX / 2
    } else {
        n as usize
    }
}

/// Exact preperiodicity over Q. Total: preperiodic points have naive
/// height at most `C`, so an orbit passing `C + 1` escapes, and an orbit
/// staying below must repeat within [`step_bound`] steps.
pub fn is_preperiodic_exact(f: &RationalMap, z: &ProjPointQ) -> bool {
    is_preperiodic_with(&HeightContext::new(f), z)
}

pub fn is_preperiodic_with(ctx: &HeightContext, z: &ProjPointQ) -> bool {
    let cutoff = escape_cutoff(ctx);
    let rec = orbit(ctx.map(), z, step_bound(cutoff), cutoff);
    debug_assert!(rec.verdict != OrbitVerdict::Budget);
    rec.verdict == OrbitVerdict::Preperiodic
}
