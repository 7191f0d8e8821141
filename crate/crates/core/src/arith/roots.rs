//! Simultaneous (Aberth-Ehrlich) root finding for explicit polynomials and
//! for binary forms given only through an evaluator.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::point::{chordal, ProjPointC};
use crate::error::{Error, Result};

const ROOT_SEED: u64 = 0x5eed_ab3e;
pub const DEFAULT_MAX_ITERS: usize = 2000;

/// Something with a Newton correction `p(z) / p'(z)` and a known degree.
trait NewtonRatio {
    fn degree(&self) -> usize;
    /// `(p/p', converged_here)`; the flag lets explicit polynomials accept a
    /// root on a residual test.
    fn correction(&self, z: Complex64, tol: f64) -> (Complex64, bool);
}

fn aberth(
    eval: &impl NewtonRatio,
    mut z: Vec<Complex64>,
    tol: f64,
    max_iters: usize,
) -> Result<Vec<Complex64>> {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..max_iters {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, residual_ok) = eval.correction(z[i], tol);
            if residual_ok || ratio == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm_sqr() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let step = if denom.norm() > 1e-300 && denom.is_finite() {
                ratio / denom
            } else {
                ratio
            };
            if !step.is_finite() {
                // Nudge off a singular spot deterministically.
                let bump = Complex64::new(1e-3, 1e-3) * (1.0 + z[i].norm());
                z[i] += bump;
                all_done = false;
                continue;
            }
            z[i] -= step;
            if step.norm() <= tol * (1.0 + z[i].norm()) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done && done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        degree: eval.degree(),
        iterations: max_iters,
    })
}

fn circle_guesses(n: usize, radius: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(ROOT_SEED ^ n as u64);
    let offset = 0.4;
    (0..n)
        .map(|k| {
            let jitter: f64 = rng.gen_range(-0.1..0.1);
            let theta = 2.0 * PI * (k as f64 + 0.5 + jitter) / n as f64 + offset;
            let r = radius * (1.0 + 0.05 * rng.gen_range(-1.0..1.0));
            Complex64::from_polar(r, theta)
        })
        .collect()
}

/// Horner value and derivative, switching to the reversed polynomial
/// outside the unit disk so the ratio never overflows.
fn horner_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let n = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = coeffs[n];
        let mut dp = Complex64::new(0.0, 0.0);
        let mut scale = coeffs[n].norm();
        let az = z.norm();
        for i in (0..n).rev() {
            dp = dp * z + p;
            p = p * z + coeffs[i];
            scale = scale * az + coeffs[i].norm();
        }
        (p, dp, scale)
    } else {
        // p(z) = z^n q(w), w = 1/z, q(w) = sum a_i w^(n-i)
        let w = z.inv();
        let aw = w.norm();
        let mut q = coeffs[0];
        let mut dq = Complex64::new(0.0, 0.0);
        let mut scale = coeffs[0].norm();
        for i in 1..=n {
            dq = dq * w + q;
            q = q * w + coeffs[i];
            scale = scale * aw + coeffs[i].norm();
        }
        // p = z^n q, p' = z^(n-1) (n q - w q'); common factor z^(n-1) dropped.
        let p = z * q;
        let dp = Complex64::new(n as f64, 0.0) * q - w * dq;
        (p, dp, scale * z.norm())
    }
}

struct ExplicitPoly<'a> {
    coeffs: &'a [Complex64],
}

impl NewtonRatio for ExplicitPoly<'_> {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn correction(&self, z: Complex64, tol: f64) -> (Complex64, bool) {
        let (p, dp, scale) = horner_ratio(self.coeffs, z);
        let ok = p.norm() <= 4.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE) && tol > 0.0;
        (p / dp, ok)
    }
}

/// All complex roots, with multiplicity, of `sum coeffs[i] z^i`.
///
/// Leading zeros are trimmed; zero roots are split off exactly. The start
/// points sit on a deterministically perturbed circle whose radius is the
/// Cauchy bound.
pub fn poly_roots_complex(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    poly_roots_complex_with(coeffs, tol, DEFAULT_MAX_ITERS)
}

pub fn poly_roots_complex_with(
    coeffs: &[Complex64],
    tol: f64,
    max_iters: usize,
) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let top = coeffs
        .iter()
        .rposition(|c| *c != zero)
        .ok_or_else(|| Error::InvalidInput("zero polynomial has no roots".into()))?;
    let low = coeffs.iter().position(|c| *c != zero).unwrap();
    if top == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    let mut roots = vec![zero; low];
    let trimmed = &coeffs[low..=top];
    let n = trimmed.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-trimmed[0] / trimmed[1]);
        return Ok(roots);
    }
    let lead = trimmed[n].norm();
    let cauchy = 1.0 + trimmed[..n].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let guesses = circle_guesses(n, cauchy);
    let found = aberth(&ExplicitPoly { coeffs: trimmed }, guesses, tol, max_iters)?;
    let bound = tol.max(64.0 * f64::EPSILON);
    for z in &found {
        let (p, _, scale) = horner_ratio(trimmed, *z);
        if !(p.norm() <= bound * scale) {
            return Err(Error::NoConvergence {
                degree: n,
                iterations: max_iters,
            });
        }
    }
    roots.extend(found);
    Ok(roots)
}

/// Evaluates a binary form and its gradient at `(x, y)`, all three values
/// sharing an unspecified common nonzero factor.
pub trait FormEval {
    fn degree(&self) -> usize;
    fn eval_grad(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64, Complex64);
}

/// Explicit complex coefficients, `coeffs[i]` on `x^i y^(d-i)`.
pub struct ComplexForm(pub Vec<Complex64>);

impl FormEval for ComplexForm {
    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn eval_grad(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64, Complex64) {
        eval_form_grad(&self.0, x, y)
    }
}

/// `(H, H_x, H_y)` for a form with complex coefficients, scaled by a common
/// factor so nothing overflows.
pub fn eval_form_grad(c: &[Complex64], x: Complex64, y: Complex64) -> (Complex64, Complex64, Complex64) {
    let d = c.len() - 1;
    let df = Complex64::new(d as f64, 0.0);
    if x.norm() <= y.norm() {
        let t = x / y;
        let mut h = c[d];
        let mut dh = Complex64::new(0.0, 0.0);
        for i in (0..d).rev() {
            dh = dh * t + h;
            h = h * t + c[i];
        }
        (y * h, dh, df * h - t * dh)
    } else {
        let s = y / x;
        let mut g = c[0];
        let mut dg = Complex64::new(0.0, 0.0);
        for ci in c.iter().skip(1) {
            dg = dg * s + g;
            g = g * s + *ci;
        }
        (x * g, df * g - s * dg, dg)
    }
}

/// Evaluates a homogeneous form (`F^n` lifts and friends) on a scale-free
/// basis; just `H` without gradient.
pub fn eval_form(c: &[Complex64], x: Complex64, y: Complex64) -> Complex64 {
    let d = c.len() - 1;
    if x.norm() <= y.norm() {
        let t = x / y;
        let mut h = c[d];
        for i in (0..d).rev() {
            h = h * t + c[i];
        }
        h * y.powu(d as u32)
    } else {
        let s = y / x;
        let mut g = c[0];
        for ci in c.iter().skip(1) {
            g = g * s + *ci;
        }
        g * x.powu(d as u32)
    }
}

// A fixed unitary change of chart; roots of the rotated polynomial are all
// finite unless (A : B) happens to be a root.
const ROT_CHARTS: [(f64, f64, f64, f64); 3] = [
    (0.8, 0.3, 0.6, -1.1),
    (0.6, -0.7, 0.8, 2.3),
    (0.28, 1.9, 0.96, 0.4),
];

struct RotatedChart<'a, E: FormEval> {
    form: &'a E,
    a: Complex64,
    b: Complex64,
}

impl<E: FormEval> RotatedChart<'_, E> {
    fn point(&self, w: Complex64) -> (Complex64, Complex64) {
        // M = [[a, -conj b], [b, conj a]] applied to (w, 1)
        (self.a * w - self.b.conj(), self.b * w + self.a.conj())
    }
}

impl<E: FormEval> NewtonRatio for RotatedChart<'_, E> {
    fn degree(&self) -> usize {
        self.form.degree()
    }

    fn correction(&self, w: Complex64, _tol: f64) -> (Complex64, bool) {
        let (x, y) = self.point(w);
        let (h, hx, hy) = self.form.eval_grad(x, y);
        let dh = self.a * hx + self.b * hy;
        (h / dh, h == Complex64::new(0.0, 0.0))
    }
}

/// All roots in P^1(C), with multiplicity, of a form known through an
/// evaluator. Works in a rotated affine chart so that infinity needs no
/// special treatment.
pub fn form_roots_eval(form: &impl FormEval, tol: f64) -> Result<Vec<ProjPointC>> {
    let d = form.degree();
    if d == 0 {
        return Ok(vec![]);
    }
    let mut last_err = None;
    for &(ra, pa, rb, pb) in &ROT_CHARTS {
        let chart = RotatedChart {
            form,
            a: Complex64::from_polar(ra, pa),
            b: Complex64::from_polar(rb, pb),
        };
        // Skip a chart whose point at infinity is (numerically) a root.
        let (h_inf, _, _) = form.eval_grad(chart.a, chart.b);
        let probe = form.eval_grad(Complex64::new(0.31, 0.17), Complex64::new(-0.23, 0.71)).0;
        if h_inf.norm() <= 1e-10 * probe.norm().max(f64::MIN_POSITIVE) {
            continue;
        }
        match aberth(&chart, circle_guesses(d, 1.0), tol, DEFAULT_MAX_ITERS) {
            Ok(ws) => {
                return Ok(ws
                    .into_iter()
                    .map(|w| {
                        let (x, y) = chart.point(w);
                        if w.is_finite() {
                            ProjPointC::new(x, y).unwrap_or_else(ProjPointC::infinity)
                        } else {
                            let (x, y) = (chart.a, chart.b);
                            ProjPointC::new(x, y).unwrap()
                        }
                    })
                    .collect());
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(Error::NoConvergence {
        degree: d,
        iterations: DEFAULT_MAX_ITERS,
    }))
}

/// Roots of a form with explicit complex coefficients (`coeffs[i]` on
/// `x^i y^(d-i)`). Degree 2 uses a cancellation-free quadratic formula.
pub fn form_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<ProjPointC>> {
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::InvalidInput("zero form has no roots".into()));
    }
    match coeffs.len() {
        1 => Ok(vec![]),
        2 => {
            // c1 x + c0 y = 0  ->  [-c0 : c1]
            Ok(vec![ProjPointC::new(-coeffs[0], coeffs[1]).unwrap()])
        }
        3 => Ok(quadratic_form_roots(coeffs[0], coeffs[1], coeffs[2]).to_vec()),
        _ => form_roots_eval(&ComplexForm(coeffs.to_vec()), tol),
    }
}

/// Roots of `c2 x^2 + c1 x y + c0 y^2` as homogeneous points.
pub fn quadratic_form_roots(c0: Complex64, c1: Complex64, c2: Complex64) -> [ProjPointC; 2] {
    let zero = Complex64::new(0.0, 0.0);
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    let sq = if (c1.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q = -(c1 + sq) / 2.0;
    if q == zero {
        // c1 = 0 and c0 * c2 = 0
        return if c2 == zero {
            [ProjPointC::infinity(), ProjPointC::infinity()]
        } else {
            let origin = ProjPointC::affine(zero);
            [origin, origin]
        };
    }
    // x/y = q / c2 and x/y = c0 / q
    let r1 = ProjPointC::new(q, c2).unwrap_or_else(ProjPointC::infinity);
    let r2 = ProjPointC::new(c0, q).unwrap_or_else(ProjPointC::infinity);
    [r1, r2]
}

/// Merges points closer than `tol` in the chordal metric; keeps first seen.
pub fn dedupe_points(points: &[ProjPointC], tol: f64) -> Vec<ProjPointC> {
    let mut out: Vec<ProjPointC> = Vec::new();
    for p in points {
        if !out.iter().any(|q| chordal(p, q) <= tol) {
            out.push(*p);
        }
    }
    out
}

/// Groups points lying within `tol` (chordal) of a cluster's first member
/// and replaces each group by its centroid in the affine chart where the
/// first member has |coordinate| <= 1. The centroid of the split copies of
/// a multiple root is far more accurate than any single copy. Returns
/// `(representative, multiplicity)` in order of first appearance.
pub fn cluster_points(points: &[ProjPointC], tol: f64) -> Vec<(ProjPointC, usize)> {
    let mut groups: Vec<Vec<ProjPointC>> = Vec::new();
    for p in points {
        match groups.iter_mut().find(|g| chordal(&g[0], p) <= tol) {
            Some(g) => g.push(*p),
            None => groups.push(vec![*p]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let k = g.len();
            if k == 1 {
                return (g[0], 1);
            }
            let seed = g[0].unit();
            let use_x_over_y = seed.y.norm() >= seed.x.norm();
            let mut acc = Complex64::new(0.0, 0.0);
            for p in &g {
                acc += if use_x_over_y { p.x / p.y } else { p.y / p.x };
            }
            let mean = acc / k as f64;
            let one = Complex64::new(1.0, 0.0);
            let rep = if use_x_over_y {
                ProjPointC::new(mean, one)
            } else {
                ProjPointC::new(one, mean)
            };
            (rep.unwrap_or(g[0]), k)
        })
        .collect()
}
