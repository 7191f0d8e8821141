//! Local Green functions (escape rates) of a homogeneous lift.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{HeightEstimate, Place};
use crate::arith::form::{bezout_cofactors, BinaryForm};
use crate::arith::point::{log_abs, ratio_f64, ProjPointC, ProjPointQ};
use crate::arith::primes::valuation;
use crate::arith::RationalMap;

/// Floating-point slack added to nonexact archimedean certificates.
pub const ROUNDING_PAD: f64 = 1e-13;

/// Bounds `c_minus <= log||F(u)|| - d log||u|| <= c_plus` on the max-norm
/// unit sphere of C^2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArchConstants {
    pub c_minus: f64,
    pub c_plus: f64,
}

impl ArchConstants {
    pub fn c_f(&self) -> f64 {
        self.c_minus.abs().max(self.c_plus.abs())
    }

    /// True for lifts with `||F(u)|| = ||u||^d` exactly, i.e. `(x^d, y^d)`
    /// up to swapping and sign.
    pub fn is_exact(&self) -> bool {
        self.c_f() == 0.0
    }
}

fn is_monomial_lift(f: &RationalMap) -> bool {
    let d = f.degree();
    let unit_at = |form: &BinaryForm, k: usize| {
        form.coeffs()
            .iter()
            .enumerate()
            .all(|(i, c)| if i == k { c.abs().is_one() } else { c.is_zero() })
    };
    (unit_at(f.p(), d) && unit_at(f.q(), 0)) || (unit_at(f.p(), 0) && unit_at(f.q(), d))
}

fn l1(form: &BinaryForm) -> f64 {
    log_abs(&form.l1_norm())
}

/// Archimedean constants: `c_plus` from coefficient sums, `c_minus` from the
/// Bezout identity `G1 P + G2 Q = Res * x^(2d-1)` (and the `y` analogue).
pub fn arch_constants(f: &RationalMap) -> ArchConstants {
    if is_monomial_lift(f) {
        return ArchConstants {
            c_minus: 0.0,
            c_plus: 0.0,
        };
    }
    let c_plus = l1(f.p()).max(l1(f.q()));
    let cof_sum = |which_x: bool| -> f64 {
        let (g1, g2) = bezout_cofactors(f.p(), f.q(), which_x).expect("nonzero resultant");
        let s = g1.l1_norm() + g2.l1_norm();
        log_abs(&s)
    };
    let s = cof_sum(true).max(cof_sum(false));
    let c_minus = log_abs(f.res()) - s;
    ArchConstants { c_minus, c_plus }
}

/// Certified radius after `n` telescoping terms.
pub fn arch_error(consts: &ArchConstants, d: usize, n: usize) -> f64 {
    if consts.is_exact() {
        return 0.0;
    }
    let d = d as f64;
    consts.c_f() / (d.powi(n as i32) * (d - 1.0)) + ROUNDING_PAD
}

/// Telescoping escape-rate sum from a max-norm-normalized start
/// `(x, y)` with `log||u0|| = log_norm`.
fn telescope(f: &RationalMap, mut x: Complex64, mut y: Complex64, log_norm: f64, n: usize) -> f64 {
    let d = f.degree() as f64;
    let mut value = log_norm;
    let mut w = 1.0;
    for _ in 0..n {
        w /= d;
        let (fx, fy) = f.lift_c(x, y);
        let m = fx.norm().max(fy.norm());
        value += w * m.ln();
        x = fx / m;
        y = fy / m;
    }
    value
}

/// Archimedean Green function `G_F(x, y)` of the given complex lift; the
/// value depends on the lift through `G(c u) = G(u) + log|c|`.
pub fn green_arch(f: &RationalMap, z: &ProjPointC, n_iters: usize) -> HeightEstimate {
    green_arch_with(f, &arch_constants(f), z, n_iters)
}

pub fn green_arch_with(
    f: &RationalMap,
    consts: &ArchConstants,
    z: &ProjPointC,
    n_iters: usize,
) -> HeightEstimate {
    let m = z.max_norm();
    let log_norm = m.ln();
    let value = if consts.is_exact() {
        log_norm
    } else {
        telescope(f, z.x / m, z.y / m, log_norm, n_iters)
    };
    HeightEstimate::single(Place::Archimedean, value, arch_error(consts, f.degree(), n_iters))
}

/// Archimedean Green function at the integer lift `(x, y)`; the leading
/// `log||u||` is taken from the exact integers.
pub fn green_arch_int(
    f: &RationalMap,
    consts: &ArchConstants,
    x: &BigInt,
    y: &BigInt,
    n_iters: usize,
) -> HeightEstimate {
    let m = if x.abs() >= y.abs() { x.abs() } else { y.abs() };
    let log_norm = log_abs(&m);
    let value = if consts.is_exact() {
        log_norm
    } else {
        let ux = Complex64::new(ratio_f64(x, &m), 0.0);
        let uy = Complex64::new(ratio_f64(y, &m), 0.0);
        telescope(f, ux, uy, log_norm, n_iters)
    };
    HeightEstimate::single(Place::Archimedean, value, arch_error(consts, f.degree(), n_iters))
}

/// Certified radius for the p-adic sum after `n` terms.
pub fn nonarch_error(e_max: u32, p: &BigInt, d: usize, n: usize) -> f64 {
    if e_max == 0 {
        return 0.0;
    }
    let d = d as f64;
    e_max as f64 * log_abs(p) / (d.powi(n as i32) * (d - 1.0))
}

fn val_capped(n: &BigInt, p: &BigInt, cap: u32) -> u32 {
    if n.is_zero() {
        cap
    } else {
        valuation(n, p).unwrap().min(cap)
    }
}

/// p-adic Green function of the gcd-1 lift of `z`:
/// `-log p * sum_k e_k / d^(k+1)` where `e_k` is the valuation lost at step
/// `k`. Computed modulo a prime power large enough that every `e_k` is
/// determined. Good reduction returns exact zero.
pub fn green_nonarch(f: &RationalMap, z: &ProjPointQ, p: &BigInt, n_iters: usize) -> HeightEstimate {
    let place = Place::Prime(p.clone());
    let e_max = valuation(f.res(), p).unwrap_or(0);
    if e_max == 0 {
        return HeightEstimate::single(place, 0.0, 0.0);
    }
    let d = f.degree();
    let mut prec = e_max * (n_iters as u32 + 1) + 2;
    let mut modulus = num_traits::pow(p.clone(), prec as usize);
    let mut x = z.x().mod_floor(&modulus);
    let mut y = z.y().mod_floor(&modulus);
    let mut acc = 0.0f64;
    let mut w = 1.0f64;
    for _ in 0..n_iters {
        w /= d as f64;
        let (fx, fy) = f.lift(&x, &y);
        let (fx, fy) = (fx.mod_floor(&modulus), fy.mod_floor(&modulus));
        let e = val_capped(&fx, p, prec).min(val_capped(&fy, p, prec));
        debug_assert!(e <= e_max && e < prec);
        acc += w * e as f64;
        if e > 0 {
            let pe = num_traits::pow(p.clone(), e as usize);
            prec -= e;
            modulus = &modulus / &pe;
            x = (fx / &pe).mod_floor(&modulus);
            y = (fy / &pe).mod_floor(&modulus);
        } else {
            x = fx;
            y = fy;
        }
    }
    let value = -acc * log_abs(p);
    HeightEstimate::single(place, value, nonarch_error(e_max, p, d, n_iters))
}
