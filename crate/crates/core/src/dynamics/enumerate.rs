//! Periodic, preperiodic and critical points over C.

use num_complex::Complex64;

use crate::arith::form::BinaryForm;
use crate::arith::roots::{cluster_points, eval_form_grad, form_roots, form_roots_eval, FormEval};
use crate::arith::{ProjPointC, RationalMap};
use crate::error::{Error, Result};

/// Largest form degree handed to the root finder.
pub const DEGREE_CAP: usize = 4097;
/// Chordal radius within which computed roots are treated as copies of
/// one multiple root.
pub const CLUSTER_TOL: f64 = 1e-6;

/// `y P_n - x Q_n` for the `n`-th iterate, evaluated by iterating the lift
/// with its Jacobian instead of expanding `F^n`.
struct FixedForm<'a> {
    f: &'a RationalMap,
    n: usize,
}

impl FormEval for FixedForm<'_> {
    fn degree(&self) -> usize {
        self.f.degree().pow(self.n as u32) + 1
    }

    fn eval_grad(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64, Complex64) {
        let (pn, qn, j) = iterate_with_jacobian(self.f, x, y, self.n);
        // j = [[dP/dx, dP/dy], [dQ/dx, dQ/dy]], all sharing one scale.
        let h = y * pn - x * qn;
        let hx = y * j[0][0] - qn - x * j[1][0];
        let hy = pn + y * j[0][1] - x * j[1][1];
        (h, hx, hy)
    }
}

/// `(F^n(u), D F^n(u))` up to one common nonzero factor.
pub fn iterate_with_jacobian(
    f: &RationalMap,
    x: Complex64,
    y: Complex64,
    n: usize,
) -> (Complex64, Complex64, [[Complex64; 2]; 2]) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (mut u, mut v) = (x, y);
    let mut j = [[one, zero], [zero, one]];
    for _ in 0..n {
        let (p, px, py) = eval_form_grad(f.p_complex(), u, v);
        let (q, qx, qy) = eval_form_grad(f.q_complex(), u, v);
        let nj = [
            [px * j[0][0] + py * j[1][0], px * j[0][1] + py * j[1][1]],
            [qx * j[0][0] + qy * j[1][0], qx * j[0][1] + qy * j[1][1]],
        ];
        let m = p.norm().max(q.norm());
        let s = if m > 0.0 && m.is_finite() { 1.0 / m } else { 1.0 };
        u = p * s;
        v = q * s;
        j = nj.map(|row| row.map(|c| c * s));
    }
    (u, v, j)
}

fn check_cap(degree: usize) -> Result<()> {
    if degree > DEGREE_CAP {
        return Err(Error::BudgetExceeded(format!(
            "form degree {degree} exceeds cap {DEGREE_CAP}"
        )));
    }
    Ok(())
}

fn checked_pow(d: usize, n: usize) -> Result<usize> {
    d.checked_pow(n as u32)
        .ok_or_else(|| Error::BudgetExceeded(format!("{d}^{n} overflows")))
}

/// All `d^n + 1` solutions of `f^n(z) = z` in P^1(C), with multiplicity.
pub fn periodic_points(f: &RationalMap, n: usize, tol: f64) -> Result<Vec<ProjPointC>> {
    if n == 0 {
        return Err(Error::InvalidInput("period must be at least 1".into()));
    }
    check_cap(checked_pow(f.degree(), n)? + 1)?;
    if n == 1 {
        // explicit fixed form y P - x Q
        let d = f.degree();
        let mut c = vec![Complex64::new(0.0, 0.0); d + 2];
        for i in 0..=d {
            c[i] += f.p_complex()[i];
            c[i + 1] -= f.q_complex()[i];
        }
        return form_roots(&c, tol);
    }
    form_roots_eval(&FixedForm { f, n }, tol)
}

/// The `d` preimages of `w`, with multiplicity.
pub fn preimages(f: &RationalMap, w: &ProjPointC, tol: f64) -> Result<Vec<ProjPointC>> {
    let w = w.unit();
    let c: Vec<Complex64> = f
        .p_complex()
        .iter()
        .zip(f.q_complex())
        .map(|(p, q)| w.y * p - w.x * q)
        .collect();
    form_roots(&c, tol)
}

/// Distinct solutions of `f^(m+n)(z) = f^m(z)`, i.e. `f^-m(Fix(f^n))`,
/// found by pulling the periodic points back `m` times and merging root
/// clusters at [`CLUSTER_TOL`] after each level.
pub fn preperiodic_points(f: &RationalMap, m: usize, n: usize, tol: f64) -> Result<Vec<ProjPointC>> {
    let d = f.degree();
    check_cap(checked_pow(d, m + n)?.saturating_add(checked_pow(d, m)?))?;
    let merge = |pts: &[ProjPointC]| -> Vec<ProjPointC> {
        cluster_points(pts, CLUSTER_TOL).into_iter().map(|(p, _)| p).collect()
    };
    let mut level = merge(&periodic_points(f, n, tol)?);
    for _ in 0..m {
        let mut next = Vec::with_capacity(level.len() * d);
        for w in &level {
            next.extend(preimages(f, w, tol)?);
        }
        level = merge(&next);
    }
    Ok(level)
}

/// Wronskian `P_x Q_y - P_y Q_x` of the lift, a form of degree `2d - 2`.
pub fn wronskian(f: &RationalMap) -> BinaryForm {
    let (p, q) = (f.p(), f.q());
    p.dx().mul(&q.dy()).sub(&p.dy().mul(&q.dx()))
}

/// The `2d - 2` critical points with multiplicity.
pub fn critical_points(f: &RationalMap, tol: f64) -> Result<Vec<ProjPointC>> {
    let w = wronskian(f);
    form_roots(&w.to_complex(), tol)
}
