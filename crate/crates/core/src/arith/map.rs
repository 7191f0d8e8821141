use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::form::{resultant, BinaryForm};
use super::point::{parse_rational, ProjPointC, ProjPointQ};
use super::roots::eval_form;
use crate::error::{Error, Result};

/// Default cap on coefficient bit size for materialized compositions.
pub const DEFAULT_BIT_CAP: u64 = 1_000_000;

/// A degree `d >= 2` endomorphism of P^1 given by a joint-content-1 integral
/// lift `F = (P, Q)` with nonzero resultant.
#[derive(Clone, Debug)]
pub struct RationalMap {
    p: BinaryForm,
    q: BinaryForm,
    res: BigInt,
    p_c: Vec<Complex64>,
    q_c: Vec<Complex64>,
}

impl PartialEq for RationalMap {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q
    }
}

impl Eq for RationalMap {}

/// Builds the normalized lift: clears the joint content, fixes the sign so
/// the top nonzero coefficient of `Q` (or `P` if `Q` vanishes there) is
/// positive, and caches the resultant.
pub fn normalize_lift(p: BinaryForm, q: BinaryForm) -> Result<RationalMap> {
    let d = p.degree();
    if q.degree() != d {
        return Err(Error::DegenerateMap(format!(
            "numerator and denominator degrees differ ({} vs {})",
            d,
            q.degree()
        )));
    }
    if d < 2 {
        return Err(Error::DegenerateMap(format!("degree {d} < 2")));
    }
    let g = p.content().gcd(&q.content());
    if g.is_zero() {
        return Err(Error::DegenerateMap("zero lift".into()));
    }
    let (mut p, mut q) = (p.div_exact(&g), q.div_exact(&g));
    let lead = q
        .coeffs()
        .iter()
        .rev()
        .chain(p.coeffs().iter().rev())
        .find(|c| !c.is_zero())
        .cloned()
        .unwrap();
    if lead.is_negative() {
        p = p.neg();
        q = q.neg();
    }
    let res = resultant(&p, &q);
    if res.is_zero() {
        return Err(Error::DegenerateMap(format!(
            "Res(P, Q) = 0 for P = {p}, Q = {q}"
        )));
    }
    let p_c = p.to_complex();
    let q_c = q.to_complex();
    Ok(RationalMap { p, q, res, p_c, q_c })
}

impl RationalMap {
    /// Map `z -> num(z) / den(z)` from ascending integer coefficients.
    pub fn from_poly_coeffs(num: &[i64], den: &[i64]) -> Result<Self> {
        let num: Vec<BigInt> = num.iter().map(|&c| BigInt::from(c)).collect();
        let den: Vec<BigInt> = den.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_big_coeffs(num, den)
    }

    pub fn from_big_coeffs(mut num: Vec<BigInt>, mut den: Vec<BigInt>) -> Result<Self> {
        trim(&mut num);
        trim(&mut den);
        let d = (num.len().max(den.len())).saturating_sub(1);
        num.resize(d + 1, BigInt::zero());
        den.resize(d + 1, BigInt::zero());
        normalize_lift(BinaryForm::new(num), BinaryForm::new(den))
    }

    /// Same as [`RationalMap::from_big_coeffs`] with rational coefficients;
    /// denominators are cleared.
    pub fn from_rational_coeffs(num: &[BigRational], den: &[BigRational]) -> Result<Self> {
        let l = num
            .iter()
            .chain(den)
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let clear = |v: &[BigRational]| -> Vec<BigInt> {
            v.iter().map(|r| (r * BigRational::from_integer(l.clone())).to_integer()).collect()
        };
        Self::from_big_coeffs(clear(num), clear(den))
    }

    /// `z^d`.
    pub fn power(d: usize) -> Self {
        normalize_lift(BinaryForm::monomial(d, d), BinaryForm::monomial(d, 0)).unwrap()
    }

    /// `z^2 + c` for integer `c`.
    pub fn quadratic(c: i64) -> Self {
        Self::from_poly_coeffs(&[c, 0, 1], &[1]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    pub fn p(&self) -> &BinaryForm {
        &self.p
    }

    pub fn q(&self) -> &BinaryForm {
        &self.q
    }

    /// Cached `Res(P, Q)`.
    pub fn res(&self) -> &BigInt {
        &self.res
    }

    pub fn p_complex(&self) -> &[Complex64] {
        &self.p_c
    }

    pub fn q_complex(&self) -> &[Complex64] {
        &self.q_c
    }

    /// True when `Q = c * y^d`, i.e. the map is a polynomial in `z`.
    pub fn is_polynomial(&self) -> bool {
        self.q.coeffs()[1..].iter().all(Zero::is_zero)
    }

    /// Applies the integral lift without normalizing.
    pub fn lift(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (self.p.eval(x, y), self.q.eval(x, y))
    }

    pub fn eval(&self, z: &ProjPointQ) -> ProjPointQ {
        eval_map(self, z)
    }

    pub fn eval_c(&self, z: &ProjPointC) -> ProjPointC {
        eval_map_c(self, z)
    }

    /// Lift applied to a complex pair, no renormalization.
    pub fn lift_c(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (eval_form(&self.p_c, x, y), eval_form(&self.q_c, x, y))
    }

    /// Conjugate `M o f o M^-1` for an integer matrix `M = [[a, b], [c, d]]`
    /// with `det M = +-1`.
    pub fn conjugate_by(&self, m: [i64; 4]) -> Result<Self> {
        let [a, b, c, d] = m.map(BigInt::from);
        let det = &a * &d - &b * &c;
        if det.abs() != BigInt::one() {
            return Err(Error::InvalidInput("conjugating matrix must be unimodular".into()));
        }
        // M^-1 = det * [[d, -b], [-c, a]]
        let inv = [&d * &det, -&b * &det, -&c * &det, &a * &det];
        let p1 = self.p.linear_substitute([&inv[0], &inv[1], &inv[2], &inv[3]]);
        let q1 = self.q.linear_substitute([&inv[0], &inv[1], &inv[2], &inv[3]]);
        let p2 = p1.scale(&a).add(&q1.scale(&b));
        let q2 = p1.scale(&c).add(&q1.scale(&d));
        normalize_lift(p2, q2)
    }

    /// Map literal in the JSON exchange format.
    pub fn to_literal(&self) -> MapLiteral {
        let to_vals = |f: &BinaryForm| -> Vec<serde_json::Value> {
            f.coeffs().iter().map(num_to_json).collect()
        };
        MapLiteral {
            num: to_vals(&self.p),
            den: to_vals(&self.q),
        }
    }
}

fn num_to_json(c: &BigInt) -> serde_json::Value {
    match i64::try_from(c.clone()) {
        Ok(v) if v.abs() < (1 << 53) => serde_json::Value::from(v),
        _ => serde_json::Value::from(c.to_string()),
    }
}

fn trim(v: &mut Vec<BigInt>) {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.p, self.q)
    }
}

/// `{"num": [c0, ..., cd], "den": [c0, ..., cd]}` with ascending powers of
/// `z`; entries are integers or strings (integers, `p/q`, or decimals).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MapLiteral {
    pub num: Vec<serde_json::Value>,
    pub den: Vec<serde_json::Value>,
}

impl MapLiteral {
    pub fn to_map(&self) -> Result<RationalMap> {
        let num = parse_coeffs(&self.num)?;
        let den = parse_coeffs(&self.den)?;
        RationalMap::from_rational_coeffs(&num, &den)
    }
}

pub(crate) fn parse_coeffs(v: &[serde_json::Value]) -> Result<Vec<BigRational>> {
    if v.is_empty() {
        return Err(Error::InvalidInput("empty coefficient list".into()));
    }
    v.iter().map(json_to_rational).collect()
}

pub(crate) fn json_to_rational(v: &serde_json::Value) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("bad coefficient {v}"));
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                parse_rational(&n.to_string()).ok_or_else(bad)
            }
        }
        serde_json::Value::String(s) => parse_rational(s).ok_or_else(bad),
        _ => Err(bad()),
    }
}

pub fn parse_map_json(s: &str) -> Result<RationalMap> {
    let lit: MapLiteral = serde_json::from_str(s)?;
    lit.to_map()
}

/// Exact image of a rational point, normalized.
pub fn eval_map(f: &RationalMap, z: &ProjPointQ) -> ProjPointQ {
    let (x, y) = f.lift(z.x(), z.y());
    ProjPointQ::new(x, y).expect("nonzero resultant rules out a common zero")
}

/// Floating image of a complex point, renormalized into [1/2, 2].
pub fn eval_map_c(f: &RationalMap, z: &ProjPointC) -> ProjPointC {
    let z = z.unit();
    let (x, y) = f.lift_c(z.x, z.y);
    ProjPointC::new(x, y).unwrap_or_else(|| ProjPointC { x, y })
}

/// Lift of `f o g`: `(P_f(P_g, Q_g), Q_f(P_g, Q_g))`, normalized.
pub fn compose(f: &RationalMap, g: &RationalMap) -> Result<RationalMap> {
    compose_with_cap(f, g, DEFAULT_BIT_CAP)
}

pub fn compose_with_cap(f: &RationalMap, g: &RationalMap, bit_cap: u64) -> Result<RationalMap> {
    let (p, q) = compose_raw(f, g);
    let bits = p.max_bits().max(q.max_bits());
    if bits > bit_cap {
        return Err(Error::BudgetExceeded(format!(
            "composition coefficients need {bits} bits (cap {bit_cap})"
        )));
    }
    normalize_lift(p, q)
}

/// Unnormalized composition lift.
pub fn compose_raw(f: &RationalMap, g: &RationalMap) -> (BinaryForm, BinaryForm) {
    (
        f.p.substitute(&g.p, &g.q),
        f.q.substitute(&g.p, &g.q),
    )
}

/// `f^n` for `n >= 1`.
pub fn iterate(f: &RationalMap, n: usize) -> Result<RationalMap> {
    iterate_with_cap(f, n, DEFAULT_BIT_CAP)
}

pub fn iterate_with_cap(f: &RationalMap, n: usize, bit_cap: u64) -> Result<RationalMap> {
    if n == 0 {
        return Err(Error::InvalidInput("iterate needs n >= 1".into()));
    }
    let mut acc = f.clone();
    for _ in 1..n {
        acc = compose_with_cap(f, &acc, bit_cap)?;
    }
    Ok(acc)
}
