use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;
use super::primes::divisors;
use super::roots::poly_roots_complex;

/// Above this many (numerator, denominator) candidate pairs the divisor
/// search gives way to a numeric search with exact confirmation.
const CANDIDATE_LIMIT: usize = 200_000;

/// Primitive integer model of a rational polynomial (ascending).
pub fn integer_model(coeffs: &[BigRational]) -> IntPoly {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    IntPoly::new(ints).primitive_part()
}

/// `q^deg * P(p/q)`, zero iff `p/q` is a root.
fn homog_eval(c: &[BigInt], p: &BigInt, q: &BigInt) -> BigInt {
    let n = c.len() - 1;
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    // Horner in p with the q-powers accumulated from the top.
    let mut terms = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        terms.push(qpow.clone());
        qpow *= q;
    }
    for (i, a) in c.iter().enumerate().rev() {
        acc = acc * p + a * &terms[n - i];
    }
    acc
}

/// Divides out `(q z - p)` as often as it divides; returns the multiplicity.
fn deflate(poly: &mut IntPoly, p: &BigInt, q: &BigInt) -> usize {
    let lin = IntPoly::new(vec![-p.clone(), q.clone()]);
    let mut k = 0;
    while poly.degree().unwrap_or(0) >= 1 && homog_eval(poly.coeffs(), p, q).is_zero() {
        match poly.div_exact_p(&lin) {
            Some(next) => {
                *poly = next;
                k += 1;
            }
            None => break,
        }
    }
    k
}

/// All rational roots with multiplicity, sorted ascending.
pub fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut poly = integer_model(coeffs);
    let mut out = Vec::new();
    if poly.degree().unwrap_or(0) == 0 {
        return out;
    }
    // zero roots
    let zeros = poly.coeffs().iter().take_while(|c| c.is_zero()).count();
    out.extend(std::iter::repeat_n(BigRational::zero(), zeros));
    poly = IntPoly::new(poly.coeffs()[zeros..].to_vec());

    if poly.degree().unwrap_or(0) >= 1 {
        let a0 = poly.coeffs()[0].clone();
        let an = poly.lead();
        let search = match (divisors(&a0, CANDIDATE_LIMIT), divisors(&an, CANDIDATE_LIMIT)) {
            (Some(ps), Some(qs)) if ps.len() * qs.len() <= CANDIDATE_LIMIT => Some((ps, qs)),
            _ => None,
        };
        match search {
            Some((ps, qs)) => {
                for q in &qs {
                    for p in &ps {
                        if !p.gcd(q).is_one() {
                            continue;
                        }
                        for p in [p.clone(), -p.clone()] {
                            let k = deflate(&mut poly, &p, q);
                            let r = BigRational::new(p.clone(), q.clone());
                            out.extend(std::iter::repeat_n(r, k));
                        }
                        if poly.degree().unwrap_or(0) == 0 {
                            break;
                        }
                    }
                }
            }
            None => numeric_search(&mut poly, &mut out),
        }
    }
    out.sort();
    out
}

/// Finds real numeric roots, recovers rational candidates by continued
/// fractions with denominators dividing the leading coefficient, and keeps
/// those that are exact roots.
fn numeric_search(poly: &mut IntPoly, out: &mut Vec<BigRational>) {
    let one = BigInt::one();
    let c: Vec<Complex64> = poly
        .coeffs()
        .iter()
        .map(|a| Complex64::new(super::point::ratio_f64(a, &one), 0.0))
        .collect();
    let Ok(roots) = poly_roots_complex(&c, 1e-12) else {
        return;
    };
    let an = poly.lead().abs();
    for z in roots {
        if z.im.abs() > 1e-6 * (1.0 + z.norm()) || !z.re.is_finite() {
            continue;
        }
        for r in convergents(z.re, 40) {
            if r.denom() > &an || !an.is_multiple_of(r.denom()) {
                continue;
            }
            let k = deflate(poly, r.numer(), r.denom());
            out.extend(std::iter::repeat_n(r.clone(), k));
            if k > 0 {
                break;
            }
        }
    }
}

/// Continued-fraction convergents of `x`.
pub fn convergents(x: f64, max_terms: usize) -> Vec<BigRational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut v = x;
    for _ in 0..max_terms {
        if !v.is_finite() || v.abs() > 1e18 {
            break;
        }
        let a = v.floor();
        let ab = BigInt::from(a as i64);
        let h2 = &ab * &h1 + &h0;
        let k2 = &ab * &k1 + &k0;
        out.push(BigRational::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&a| BigRational::from_integer(a.into())).collect()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn documented_cases() {
        assert_eq!(rational_roots(&rat(&[-4, 0, 1])), vec![r(-2, 1), r(2, 1)]);
        assert!(rational_roots(&rat(&[-2, 0, 1])).is_empty());
        assert_eq!(
            rational_roots(&rat(&[2, -3, -3, 2])),
            vec![r(-1, 1), r(1, 2), r(2, 1)]
        );
    }

    #[test]
    fn multiplicities_and_zero() {
        // z^2 (z-1)^3 (3z+2)
        let p = IntPoly::from_i64(&[-1, 1])
            .pow_p(3)
            .mul_p(&IntPoly::from_i64(&[2, 3]))
            .mul_p(&IntPoly::from_i64(&[0, 0, 1]));
        let c: Vec<BigRational> = p.coeffs().iter().map(|a| BigRational::from_integer(a.clone())).collect();
        let got = rational_roots(&c);
        assert_eq!(got, vec![r(-2, 3), r(0, 1), r(0, 1), r(1, 1), r(1, 1), r(1, 1)]);
    }

    #[test]
    fn numeric_path_confirms_exactly() {
        // (z - 7/3)(z^2 + 1) via the fallback
        let mut p = IntPoly::from_i64(&[-7, 3]).mul_p(&IntPoly::from_i64(&[1, 0, 1]));
        let mut out = Vec::new();
        numeric_search(&mut p, &mut out);
        assert_eq!(out, vec![r(7, 3)]);
        assert_eq!(p, IntPoly::from_i64(&[1, 0, 1]));
    }
}
