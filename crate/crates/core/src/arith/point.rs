use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Natural log of |n| for arbitrarily large integers. Returns -inf for 0.
pub fn log_abs(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        n.abs().to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = n.abs() >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `a / b` as a double, well defined even when both overflow f64.
pub fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let bits = a.bits().max(b.bits());
    if bits <= 1000 {
        return a.to_f64().unwrap() / b.to_f64().unwrap();
    }
    let shift = bits - 900;
    let sa: BigInt = a >> shift;
    let sb: BigInt = b >> shift;
    sa.to_f64().unwrap() / sb.to_f64().unwrap()
}

/// A point of P^1(Q) as a coprime integer pair, sign-normalized so that
/// equality of points is equality of structs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPointQ {
    x: BigInt,
    y: BigInt,
}

impl ProjPointQ {
    pub fn new(x: BigInt, y: BigInt) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::InvalidInput("point (0,0) is not in P^1".into()));
        }
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / &g, y / &g);
        if y.is_negative() || (y.is_zero() && x.is_negative()) {
            x = -x;
            y = -y;
        }
        Ok(ProjPointQ { x, y })
    }

    pub fn from_ints(x: i64, y: i64) -> Result<Self> {
        Self::new(BigInt::from(x), BigInt::from(y))
    }

    pub fn infinity() -> Self {
        ProjPointQ {
            x: BigInt::one(),
            y: BigInt::zero(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        // BigRational is already reduced with positive denominator
        ProjPointQ {
            x: r.numer().clone(),
            y: r.denom().clone(),
        }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// Affine coordinate x/y, `None` at infinity.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRational::new(self.x.clone(), self.y.clone()))
        }
    }

    /// Weil height log max(|x|, |y|) of the normalized pair.
    pub fn naive_height(&self) -> f64 {
        if self.x.abs() > self.y.abs() {
            log_abs(&self.x)
        } else {
            log_abs(&self.y)
        }
    }

    pub fn to_complex(&self) -> ProjPointC {
        if self.is_infinity() {
            return ProjPointC::infinity();
        }
        let re = ratio_f64(&self.x, &self.y);
        ProjPointC::affine(Complex64::new(re, 0.0))
    }
}

impl Serialize for ProjPointQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The naive (Weil) height of a normalized rational point.
pub fn naive_height(z: &ProjPointQ) -> f64 {
    z.naive_height()
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.y.is_one() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

impl FromStr for ProjPointQ {
    type Err = Error;

    /// Accepts `p`, `p/q`, `[x:y]` and `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "infinity" {
            return Ok(Self::infinity());
        }
        let bad = || Error::InvalidInput(format!("cannot parse point '{s}'"));
        let parse = |t: &str| BigInt::from_str(t.trim()).map_err(|_| bad());
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (a, b) = inner.split_once(':').ok_or_else(bad)?;
            return Self::new(parse(a)?, parse(b)?);
        }
        if let Some((a, b)) = s.split_once('/') {
            return Self::new(parse(a)?, parse(b)?);
        }
        if s.contains('.') {
            let r = parse_decimal(s).ok_or_else(bad)?;
            return Ok(Self::from_rational(&r));
        }
        Self::new(parse(s)?, BigInt::one())
    }
}

/// Parses `p`, `p/q` or a finite decimal like `-0.125` as an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str(a.trim()).ok()?;
        let b = BigInt::from_str(b.trim()).ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return parse_decimal(s);
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n = BigInt::from_str(&digits).ok()?;
    if neg {
        n = -n;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

/// A point of P^1(C) as a homogeneous pair, kept with max(|x|,|y|) in [1/2, 2].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjPointC {
    pub x: Complex64,
    pub y: Complex64,
}

impl ProjPointC {
    /// Builds and renormalizes; returns `None` for (0,0) or non-finite input.
    pub fn new(x: Complex64, y: Complex64) -> Option<Self> {
        let p = ProjPointC { x, y };
        let m = p.max_norm();
        if !(m.is_finite() && m > 0.0) {
            return None;
        }
        Some(p.renormalized())
    }

    /// Keeps the given lift as is (no renormalization).
    pub fn raw(x: Complex64, y: Complex64) -> Self {
        ProjPointC { x, y }
    }

    pub fn affine(z: Complex64) -> Self {
        ProjPointC {
            x: z,
            y: Complex64::new(1.0, 0.0),
        }
        .renormalized()
    }

    pub fn infinity() -> Self {
        ProjPointC {
            x: Complex64::new(1.0, 0.0),
            y: Complex64::new(0.0, 0.0),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.x.norm().max(self.y.norm())
    }

    /// Scales so the max-norm is 1 when it has drifted out of [1/2, 2].
    pub fn renormalized(self) -> Self {
        let m = self.max_norm();
        if (0.5..=2.0).contains(&m) {
            self
        } else {
            self.unit()
        }
    }

    /// Scales so the max-norm is exactly 1.
    pub fn unit(self) -> Self {
        let m = self.max_norm();
        ProjPointC {
            x: self.x / m,
            y: self.y / m,
        }
    }

    /// Affine coordinate x/y; `None` when |y| is negligible against |x|.
    pub fn to_affine(&self) -> Option<Complex64> {
        if self.y.norm() <= self.x.norm() * 1e-300 || self.y == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(self.x / self.y)
        }
    }

    pub fn is_infinity_within(&self, tol: f64) -> bool {
        chordal(self, &ProjPointC::infinity()) <= tol
    }
}

/// Chordal distance |x1 y2 - x2 y1| / (|(x1,y1)| |(x2,y2)|) on P^1(C), in [0, 1].
pub fn chordal(a: &ProjPointC, b: &ProjPointC) -> f64 {
    let a = a.unit();
    let b = b.unit();
    let na = (a.x.norm_sqr() + a.y.norm_sqr()).sqrt();
    let nb = (b.x.norm_sqr() + b.y.norm_sqr()).sqrt();
    let cross = a.x * b.y - a.y * b.x;
    (cross.norm() / (na * nb)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_forces_sign_and_gcd() {
        let p = ProjPointQ::from_ints(-6, -4).unwrap();
        assert_eq!(p, ProjPointQ::from_ints(3, 2).unwrap());
        let inf = ProjPointQ::from_ints(-5, 0).unwrap();
        assert_eq!(inf, ProjPointQ::infinity());
        assert!(ProjPointQ::from_ints(0, 0).is_err());
        assert_eq!(ProjPointQ::from_ints(0, -7).unwrap(), ProjPointQ::from_ints(0, 1).unwrap());
    }

    #[test]
    fn naive_heights() {
        let h = |s: &str| s.parse::<ProjPointQ>().unwrap().naive_height();
        assert_eq!(h("3/2"), 3f64.ln());
        assert_eq!(h("1"), 0.0);
        assert_eq!(h("7/12"), 12f64.ln());
        assert_eq!(h("inf"), 0.0);
    }

    #[test]
    fn parses_literals() {
        assert_eq!("[4:-2]".parse::<ProjPointQ>().unwrap(), ProjPointQ::from_ints(-2, 1).unwrap());
        assert_eq!("0.25".parse::<ProjPointQ>().unwrap(), ProjPointQ::from_ints(1, 4).unwrap());
        assert_eq!(parse_rational("-1.5e1").unwrap(), BigRational::from_integer(BigInt::from(-15)));
        assert!("abc".parse::<ProjPointQ>().is_err());
    }

    #[test]
    fn huge_integer_logs() {
        let n: BigInt = BigInt::from(3).pow(2000);
        assert!((log_abs(&n) - 2000.0 * 3f64.ln()).abs() < 1e-9 * 2000.0);
        let m: BigInt = BigInt::from(2).pow(1500);
        assert!((ratio_f64(&(&m * 3), &m) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn chordal_metric_basics() {
        let z = ProjPointC::affine(Complex64::new(0.3, -0.2));
        assert_eq!(chordal(&z, &z), 0.0);
        let zero = ProjPointC::affine(Complex64::new(0.0, 0.0));
        assert!((chordal(&zero, &ProjPointC::infinity()) - 1.0).abs() < 1e-15);
        let one = ProjPointC::affine(Complex64::new(1.0, 0.0));
        assert!((chordal(&zero, &one) - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
