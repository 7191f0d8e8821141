//! Isotriviality screening through multiplier invariants.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::family::ParamFamily;
use crate::arith::RationalMap;
use crate::dynamics::enumerate::{iterate_with_jacobian, periodic_points};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Isotriviality {
    Isotrivial,
    NonIsotrivial,
    Unknown,
}

type QPoly = Vec<BigRational>;

fn trim(mut a: QPoly) -> QPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn qmul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn qsub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

/// `(quotient, remainder)` of `a / m`.
fn qdivrem(a: &[BigRational], m: &[BigRational]) -> (QPoly, QPoly) {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    if r.len() <= dm {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - dm];
    let lm = m.last().unwrap();
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = r.last().unwrap() / lm;
        for (i, mi) in m.iter().enumerate() {
            r[k + i] -= &c * mi;
        }
        q[k] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn qrem(a: &[BigRational], m: &[BigRational]) -> QPoly {
    qdivrem(a, m).1
}

/// Inverse of `a` modulo `m`, if coprime.
fn qinv(a: &[BigRational], m: &[BigRational]) -> Option<QPoly> {
    let (mut r0, mut r1) = (m.to_vec(), qrem(a, m));
    let (mut s0, mut s1): (QPoly, QPoly) = (vec![], vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = qdivrem(&r0, &r1);
        let s = qsub(&s0, &qmul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    Some(s0.into_iter().map(|x| x / &c).collect())
}

/// Trace of multiplication by `a` on Q[z]/(m).
fn trace(a: &[BigRational], m: &[BigRational]) -> BigRational {
    let n = m.len() - 1;
    let mut t = BigRational::zero();
    let mut zk = vec![BigRational::one()];
    for k in 0..n {
        let prod = qrem(&qmul(a, &zk), m);
        if let Some(c) = prod.get(k) {
            t += c;
        }
        zk = qrem(&qmul(&zk, &[BigRational::zero(), BigRational::one()]), m);
    }
    t
}

fn affine(coeffs: &[BigInt]) -> QPoly {
    trim(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

fn deriv(a: &[BigRational]) -> QPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

/// `(sigma_1, sigma_2)` of the three fixed-point multipliers of a quadratic
/// map, exactly. Infinity is moved off the fixed set by a conjugation
/// first; multipliers are conjugation invariant.
pub fn quadratic_sigmas(f: &RationalMap) -> Option<(BigRational, BigRational)> {
    assert_eq!(f.degree(), 2);
    let mut g = f.clone();
    for c in 0..8i64 {
        let h = if c == 0 { f.clone() } else { f.conjugate_by([0, 1, 1, -c]).ok()? };
        let p = affine(h.p().coeffs());
        let q = affine(h.q().coeffs());
        let phi = qsub(&p, &qmul(&[BigRational::zero(), BigRational::one()], &q));
        if phi.len() == 4 {
            g = h;
            break;
        }
    }
    let p = affine(g.p().coeffs());
    let q = affine(g.q().coeffs());
    let phi = qsub(&p, &qmul(&[BigRational::zero(), BigRational::one()], &q));
    if phi.len() != 4 {
        return None;
    }
    // f' = (P'Q - PQ') / Q^2 on the fixed points
    let w = qsub(&qmul(&deriv(&p), &q), &qmul(&p, &deriv(&q)));
    let qi = qinv(&q, &phi)?;
    let lambda = qrem(&qmul(&w, &qrem(&qmul(&qi, &qi), &phi)), &phi);
    let s1 = trace(&lambda, &phi);
    let p2 = trace(&qrem(&qmul(&lambda, &lambda), &phi), &phi);
    let s2 = (&s1 * &s1 - p2) / BigRational::from_integer(2.into());
    Some((s1, s2))
}

/// Multiplier of `f^n` at each period-`n` point (with multiplicity), from
/// `det DF^n / (d^n mu^2)` where `F^n(u) = mu u`.
fn multipliers(f: &RationalMap, n: usize) -> Result<Vec<Complex64>> {
    let pts = periodic_points(f, n, 1e-13)?;
    let dn = (f.degree() as f64).powi(n as i32);
    Ok(pts
        .iter()
        .map(|u| {
            let u = u.unit();
            let (a, b, j) = iterate_with_jacobian(f, u.x, u.y, n);
            let mu = (a * u.x.conj() + b * u.y.conj()) / (u.x.norm_sqr() + u.y.norm_sqr());
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            det / (dn * mu * mu)
        })
        .collect())
}

fn spectrum_signature(f: &RationalMap) -> Result<Vec<Complex64>> {
    let mut sig = Vec::new();
    for n in 1..=3 {
        if f.degree().pow(n as u32) > 64 {
            break;
        }
        let m = multipliers(f, n)?;
        for k in 1..=3 {
            sig.push(m.iter().map(|l| l.powu(k)).sum());
        }
    }
    Ok(sig)
}

/// Parameters `0, 1, -1, 2, -2, ...` at which the family specializes.
fn good_parameters(fam: &ParamFamily, count: usize) -> Vec<(BigRational, (RationalMap, RationalMap))> {
    let mut out = Vec::new();
    let mut k = 0i64;
    while out.len() < count && k < 100 * count as i64 + 100 {
        let t = if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 };
        k += 1;
        let t = BigRational::from_integer(t.into());
        if let Ok(pair) = fam.specialize_pair(&t) {
            out.push((t, pair));
        }
    }
    out
}

/// Degree 2: `sigma_1(t), sigma_2(t)` are rational functions of degree at
/// most `14 e` for coefficient degree `e`, so agreement at `14 e + 1`
/// parameters proves constancy. Higher degree: multiplier power sums of
/// periods up to 3 are compared numerically; variation proves
/// non-isotriviality, agreement is only suggestive.
pub fn isotrivial_check(fam: &ParamFamily, samples: usize) -> Result<Isotriviality> {
    let members: Vec<ParamFamily> = std::iter::once(fam.first())
        .chain(fam.second().cloned())
        .collect();
    let mut all_iso = true;
    for m in &members {
        match check_one(m, samples)? {
            Isotriviality::NonIsotrivial => return Ok(Isotriviality::NonIsotrivial),
            Isotriviality::Unknown => all_iso = false,
            Isotriviality::Isotrivial => {}
        }
    }
    Ok(if all_iso { Isotriviality::Isotrivial } else { Isotriviality::Unknown })
}

fn check_one(fam: &ParamFamily, samples: usize) -> Result<Isotriviality> {
    if fam.degree() == 2 {
        let need = samples.max(14 * fam.coefficient_degree() + 1);
        let pts = good_parameters(fam, need);
        let mut first = None;
        for (_, (f, _)) in &pts {
            let Some(s) = quadratic_sigmas(f) else {
                return Ok(Isotriviality::Unknown);
            };
            match &first {
                None => first = Some(s),
                Some(s0) if *s0 != s => return Ok(Isotriviality::NonIsotrivial),
                _ => {}
            }
        }
        return Ok(if pts.len() >= need {
            Isotriviality::Isotrivial
        } else {
            Isotriviality::Unknown
        });
    }
    let pts = good_parameters(fam, samples.max(3));
    let mut first: Option<Vec<Complex64>> = None;
    for (_, (f, _)) in &pts {
        let sig = spectrum_signature(f)?;
        match &first {
            None => first = Some(sig),
            Some(s0) => {
                let differs = s0
                    .iter()
                    .zip(&sig)
                    .any(|(a, b)| (a - b).norm() > 1e-6 * (1.0 + a.norm().max(b.norm())));
                if differs {
                    return Ok(Isotriviality::NonIsotrivial);
                }
            }
        }
    }
    Ok(Isotriviality::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn sigmas_of_quadratic_polynomials() {
        // z^2 + c: multipliers 0 at infinity and 1 +- sqrt(1 - 4c) at the
        // finite fixed points, so sigma_1 = 2, sigma_2 = 4c
        for c in [-2, -1, 0, 3] {
            let (s1, s2) = quadratic_sigmas(&RationalMap::quadratic(c)).unwrap();
            assert_eq!((s1, s2), (q(2), q(4 * c)));
        }
        // 1/z^2: fixed points are cube roots of unity, multiplier -2 each
        let f = RationalMap::from_poly_coeffs(&[1], &[0, 0, 1]).unwrap();
        assert_eq!(quadratic_sigmas(&f).unwrap(), (q(-6), q(12)));
    }

    #[test]
    fn documented_families() {
        let fam = ParamFamily::unicritical(2);
        assert_eq!(isotrivial_check(&fam, 4).unwrap(), Isotriviality::NonIsotrivial);
        // z^2 / t, the conjugate of z^2 by z -> t z
        let fam = ParamFamily::from_i64(2, &[&[], &[], &[1]], &[&[0, 1]]).unwrap();
        assert_eq!(isotrivial_check(&fam, 4).unwrap(), Isotriviality::Isotrivial);
        let fam = ParamFamily::constant(&RationalMap::quadratic(-2));
        assert_eq!(isotrivial_check(&fam, 4).unwrap(), Isotriviality::Isotrivial);
    }

    #[test]
    fn cubic_screen() {
        let fam = ParamFamily::from_i64(3, &[&[0, 1], &[], &[], &[1]], &[&[1]]).unwrap();
        assert_eq!(isotrivial_check(&fam, 3).unwrap(), Isotriviality::NonIsotrivial);
        let fam = ParamFamily::constant(&RationalMap::power(3));
        assert_eq!(isotrivial_check(&fam, 3).unwrap(), Isotriviality::Unknown);
    }
}
