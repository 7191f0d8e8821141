//! Curves in P^1 x P^1 and their images under split maps `(f, g)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::point::ratio_f64;
use crate::arith::poly::{resultant_formal, BiPoly, IntPoly, UPoly};
use crate::arith::{ProjPointC, ProjPointQ, RationalMap};
use crate::error::{Error, Result};

/// Largest bidegree component curve_image will produce.
pub const BIDEGREE_CAP: usize = 32;

/// A curve `C(x1, x2; y1, y2) = 0`; `coeffs[i][j]` multiplies
/// `x1^i x2^(d1-i) y1^j y2^(d2-j)`. Stored primitive with the last nonzero
/// coefficient (row-major) positive, so equal curves have equal
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct CurveP1xP1 {
    bidegree: (usize, usize),
    #[serde(with = "bigint_matrix")]
    coeffs: Vec<Vec<BigInt>>,
}

#[derive(Deserialize)]
struct RawCurve {
    bidegree: (usize, usize),
    #[serde(with = "bigint_matrix")]
    coeffs: Vec<Vec<BigInt>>,
}

impl TryFrom<RawCurve> for CurveP1xP1 {
    type Error = Error;

    fn try_from(r: RawCurve) -> Result<Self> {
        CurveP1xP1::new(r.bidegree, r.coeffs)
    }
}

mod bigint_matrix {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<serde_json::Value>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match i64::try_from(c) {
                        Ok(x) if x.abs() < (1 << 53) => serde_json::Value::from(x),
                        _ => serde_json::Value::from(c.to_string()),
                    })
                    .collect()
            })
            .collect();
        serde::Serialize::serialize(&v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v: Vec<Vec<serde_json::Value>> = Deserialize::deserialize(d)?;
        v.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| match c {
                        serde_json::Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
                        serde_json::Value::String(s) => {
                            BigInt::from_str(&s).map_err(serde::de::Error::custom)
                        }
                        other => Err(serde::de::Error::custom(format!("bad coefficient {other}"))),
                    })
                    .collect()
            })
            .collect()
    }
}

impl CurveP1xP1 {
    pub fn new(bidegree: (usize, usize), coeffs: Vec<Vec<BigInt>>) -> Result<Self> {
        let (d1, d2) = bidegree;
        if coeffs.len() != d1 + 1 || coeffs.iter().any(|r| r.len() != d2 + 1) {
            return Err(Error::InvalidInput(format!(
                "curve coefficient matrix must be {}x{}",
                d1 + 1,
                d2 + 1
            )));
        }
        if coeffs.iter().flatten().all(Zero::is_zero) {
            return Err(Error::InvalidInput("zero curve form".into()));
        }
        Ok(CurveP1xP1 { bidegree, coeffs }.normalized())
    }

    pub fn from_i64(bidegree: (usize, usize), coeffs: &[&[i64]]) -> Result<Self> {
        Self::new(
            bidegree,
            coeffs.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect(),
        )
    }

    /// `x1 y2 - x2 y1`.
    pub fn diagonal() -> Self {
        Self::from_i64((1, 1), &[&[0, -1], &[1, 0]]).unwrap()
    }

    /// The fibre `{x = a} x P^1`.
    pub fn vertical(a: &ProjPointQ) -> Self {
        Self::new((1, 0), vec![vec![-a.x().clone()], vec![a.y().clone()]]).unwrap()
    }

    /// `P^1 x {y = b}`.
    pub fn horizontal(b: &ProjPointQ) -> Self {
        Self::new((0, 1), vec![vec![-b.x().clone(), b.y().clone()]]).unwrap()
    }

    /// Graph `{y = f(x)}`: `y1 Q(x) - y2 P(x)`.
    pub fn graph(f: &RationalMap) -> Self {
        let d = f.degree();
        let coeffs = (0..=d)
            .map(|i| vec![-f.p().coeffs()[i].clone(), f.q().coeffs()[i].clone()])
            .collect();
        Self::new((d, 1), coeffs).unwrap()
    }

    pub fn bidegree(&self) -> (usize, usize) {
        self.bidegree
    }

    pub fn coeffs(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    /// True when one projection is constant (a zero in the bidegree).
    pub fn is_fibral(&self) -> bool {
        self.bidegree.0 == 0 || self.bidegree.1 == 0
    }

    fn normalized(mut self) -> Self {
        let g = self
            .coeffs
            .iter()
            .flatten()
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        let first_neg = self
            .coeffs
            .iter()
            .flatten()
            .rev()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        let s = if first_neg { -g } else { g };
        if !s.is_one() {
            for c in self.coeffs.iter_mut().flatten() {
                *c = &*c / &s;
            }
        }
        self
    }

    /// Complex coefficients of the form in `y` over the point `x = u`
    /// (`which = 1`), or in `x` over `y = u` (`which = 2`); index `k`
    /// multiplies `t1^k t2^(deg - k)`.
    pub fn fiber_form(&self, which: u8, u: &ProjPointC) -> Vec<Complex64> {
        let (d1, d2) = self.bidegree;
        let u = u.unit();
        let pw = |z: Complex64, k: usize| z.powu(k as u32);
        let one = BigInt::one();
        let c = |i: usize, j: usize| Complex64::new(ratio_f64(&self.coeffs[i][j], &one), 0.0);
        if which == 1 {
            (0..=d2)
                .map(|j| (0..=d1).map(|i| c(i, j) * pw(u.x, i) * pw(u.y, d1 - i)).sum())
                .collect()
        } else {
            (0..=d1)
                .map(|i| (0..=d2).map(|j| c(i, j) * pw(u.x, j) * pw(u.y, d2 - j)).sum())
                .collect()
        }
    }

    /// `|C(u, w)|` on unit-normalized lifts.
    pub fn residual(&self, u: &ProjPointC, w: &ProjPointC) -> f64 {
        let f = self.fiber_form(1, u);
        let w = w.unit();
        let d2 = self.bidegree.1;
        f.iter()
            .enumerate()
            .map(|(j, c)| c * w.x.powu(j as u32) * w.y.powu((d2 - j) as u32))
            .sum::<Complex64>()
            .norm()
    }

    /// `C` as a polynomial in the dehomogenized `x` (outer) with
    /// coefficients in the dehomogenized `y`.
    fn to_bipoly(&self) -> BiPoly {
        UPoly::new(self.coeffs.iter().map(|r| IntPoly::new(r.clone())).collect())
    }

    /// Curve from a dehomogenized bivariate polynomial and its formal
    /// bidegree; missing top degrees become factors of `x2` / `y2`.
    fn from_bipoly(r: &BiPoly, formal: (usize, usize)) -> Result<Self> {
        let (d1, d2) = formal;
        let mut m = vec![vec![BigInt::zero(); d2 + 1]; d1 + 1];
        for (i, row) in r.coeffs().iter().enumerate() {
            for (j, c) in row.coeffs().iter().enumerate() {
                if i > d1 || j > d2 {
                    return Err(Error::InvalidInput("polynomial exceeds formal bidegree".into()));
                }
                m[i][j] = c.clone();
            }
        }
        Self::new(formal, m)
    }
}

impl std::fmt::Display for CurveP1xP1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| std::fmt::Error)?)
    }
}

/// Reduced form cutting out `(f, g)(C)`, by eliminating the graph system
/// `C(u, w) = 0, f(u) = x, g(w) = y` with two resultants and stripping
/// repeated factors (including the lines at infinity).
pub fn curve_image(c: &CurveP1xP1, f: &RationalMap, g: &RationalMap) -> Result<CurveP1xP1> {
    let (d1, d2) = c.bidegree;
    let (df, dg) = (f.degree(), g.degree());
    let formal = (dg * d1, df * d2);
    if formal.0 > BIDEGREE_CAP || formal.1 > BIDEGREE_CAP {
        return Err(Error::BudgetExceeded(format!(
            "image bidegree {formal:?} exceeds cap {BIDEGREE_CAP}"
        )));
    }
    // C(s, t) as a polynomial in t over Z[s][y] (outer s, inner y).
    let cs = c.to_bipoly();
    let t_coeffs: Vec<BiPoly> = (0..=d2)
        .map(|j| {
            UPoly::new(
                cs.coeffs()
                    .iter()
                    .map(|row| IntPoly::constant(row.coeff(j)))
                    .collect(),
            )
        })
        .collect();
    // g(t) = y:  P_g(t) - y Q_g(t), coefficients in Z[y] constant in s.
    let e2: Vec<BiPoly> = (0..=dg)
        .map(|j| {
            UPoly::constant(IntPoly::new(vec![
                g.p().coeffs()[j].clone(),
                -g.q().coeffs()[j].clone(),
            ]))
        })
        .collect();
    let r1: BiPoly = resultant_formal(&t_coeffs, d2, &e2, dg);
    // Eliminate s against f(s) = x, over Z[x][y] (outer x, inner y).
    let r1_s: Vec<BiPoly> = (0..=dg * d1)
        .map(|i| UPoly::constant(r1.coeff(i)))
        .collect();
    let e1: Vec<BiPoly> = (0..=df)
        .map(|i| {
            UPoly::new(vec![
                IntPoly::constant(f.p().coeffs()[i].clone()),
                IntPoly::constant(-f.q().coeffs()[i].clone()),
            ])
        })
        .collect();
    let r: BiPoly = resultant_formal(&r1_s, dg * d1, &e1, df);
    if r.is_zero_poly() {
        return Err(Error::DegenerateMap("elimination resultant vanished".into()));
    }
    reduce(&r, formal)
}

/// Square-free part, keeping one copy of each line at infinity present.
fn reduce(r: &BiPoly, formal: (usize, usize)) -> Result<CurveP1xP1> {
    let deg_x = r.degree().unwrap_or(0);
    let deg_y = r.coeffs().iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let x_inf = usize::from(deg_x < formal.0);
    let y_inf = usize::from(deg_y < formal.1);
    let rad = r.radical();
    let rx = rad.degree().unwrap_or(0);
    let ry = rad.coeffs().iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    CurveP1xP1::from_bipoly(&rad, (rx + x_inf, ry + y_inf))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurvePrep {
    /// `(f, g)^(m + n)(C) = (f, g)^m(C)`.
    Preperiodic { m: usize, n: usize },
    NoRepetition,
}

/// Iterates [`curve_image`] up to `max_iters` times looking for an exact
/// repetition of the normalized forms.
pub fn curve_preperiodic_test(
    c: &CurveP1xP1,
    f: &RationalMap,
    g: &RationalMap,
    max_iters: usize,
) -> Result<CurvePrep> {
    let mut seen = vec![c.clone()];
    for k in 1..=max_iters {
        let next = curve_image(&seen[k - 1], f, g)?;
        if let Some(m) = seen.iter().position(|s| *s == next) {
            return Ok(CurvePrep::Preperiodic { m, n: k - m });
        }
        seen.push(next);
    }
    Ok(CurvePrep::NoRepetition)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_invariant_under_equal_maps() {
        let f = RationalMap::power(2);
        let d = CurveP1xP1::diagonal();
        assert_eq!(curve_image(&d, &f, &f).unwrap(), d);
        assert_eq!(
            curve_preperiodic_test(&d, &f, &f, 3).unwrap(),
            CurvePrep::Preperiodic { m: 0, n: 1 }
        );
    }

    #[test]
    fn diagonal_under_distinct_maps() {
        // s -> (s^2, s^2 - 2) is two-to-one onto the line y = x - 2
        let (f, g) = (RationalMap::power(2), RationalMap::quadratic(-2));
        let img = curve_image(&CurveP1xP1::diagonal(), &f, &g).unwrap();
        assert_eq!(img, CurveP1xP1::from_i64((1, 1), &[&[-2, -1], &[1, 0]]).unwrap());
        assert_eq!(
            curve_preperiodic_test(&CurveP1xP1::diagonal(), &f, &g, 3).unwrap(),
            CurvePrep::NoRepetition
        );
        // s -> (s^2, s^3) traces the cusp y^2 = x^3
        let cusp = curve_image(&CurveP1xP1::diagonal(), &f, &RationalMap::power(3)).unwrap();
        assert_eq!(cusp.bidegree(), (3, 2));
        for k in 0..20 {
            let z = Complex64::from_polar(0.3 + 0.2 * k as f64, 0.7 * k as f64);
            let u = ProjPointC::affine(z * z);
            let w = ProjPointC::affine(z * z * z);
            assert!(cusp.residual(&u, &w) < 1e-9);
        }
    }

    #[test]
    fn vertical_lines() {
        let f = RationalMap::quadratic(-1);
        let g = RationalMap::power(3);
        let v = CurveP1xP1::vertical(&ProjPointQ::from_ints(2, 1).unwrap());
        let img = curve_image(&v, &f, &g).unwrap();
        assert_eq!(img, CurveP1xP1::vertical(&ProjPointQ::from_ints(3, 1).unwrap()));
        let zero = CurveP1xP1::vertical(&ProjPointQ::from_ints(0, 1).unwrap());
        let sq = RationalMap::power(2);
        assert_eq!(
            curve_preperiodic_test(&zero, &sq, &sq, 2).unwrap(),
            CurvePrep::Preperiodic { m: 0, n: 1 }
        );
    }

    #[test]
    fn curves_through_infinity() {
        // graph of 1/z under (z^2, z^2) is invariant
        let inv = RationalMap::from_poly_coeffs(&[1], &[0, 1]);
        assert!(inv.is_err());
        let c = CurveP1xP1::from_i64((1, 1), &[&[-1, 0], &[0, 1]]).unwrap(); // x y = 1
        let f = RationalMap::power(2);
        assert_eq!(curve_image(&c, &f, &f).unwrap(), c);
        // horizontal line at infinity maps to itself
        let h = CurveP1xP1::horizontal(&ProjPointQ::infinity());
        assert_eq!(curve_image(&h, &f, &f).unwrap(), h);
    }

    #[test]
    fn json_round_trip() {
        let c = CurveP1xP1::diagonal();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"bidegree":[1,1],"coeffs":[[0,-1],[1,0]]}"#);
        let back: CurveP1xP1 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
