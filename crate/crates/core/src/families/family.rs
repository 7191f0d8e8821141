use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::form::BinaryForm;
use crate::arith::map::normalize_lift;
use crate::arith::poly::{resultant_formal, IntPoly};
use crate::arith::rational_roots::rational_roots;
use crate::arith::roots::poly_roots_complex;
use crate::arith::RationalMap;
use crate::error::{Error, Result};

/// One-parameter family of degree-`d` maps: coefficient `i` of the lift
/// (multiplying `x^i y^(d-i)`) is `num[i](t)` resp. `den[i](t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamFamily {
    degree: usize,
    num: Vec<IntPoly>,
    den: Vec<IntPoly>,
    second: Option<Box<ParamFamily>>,
    resultant: IntPoly,
}

/// JSON form: `{"degree": d, "num": [[...], ...], "den": [[...], ...],
/// "second": {...}}`, each inner array ascending in `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyLiteral {
    pub degree: usize,
    pub num: Vec<Vec<i64>>,
    pub den: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<Box<FamilyLiteral>>,
}

fn pad(mut v: Vec<IntPoly>, d: usize) -> Result<Vec<IntPoly>> {
    if v.len() > d + 1 {
        if v[d + 1..].iter().any(|p| !p.is_zero_poly()) {
            return Err(Error::InvalidInput(format!("coefficient beyond degree {d}")));
        }
        v.truncate(d + 1);
    }
    v.resize(d + 1, IntPoly::new(vec![]));
    Ok(v)
}

impl ParamFamily {
    pub fn new(degree: usize, num: Vec<IntPoly>, den: Vec<IntPoly>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InvalidInput("family degree must be at least 2".into()));
        }
        let num = pad(num, degree)?;
        let den = pad(den, degree)?;
        let resultant = resultant_formal(&num, degree, &den, degree);
        if resultant.is_zero_poly() {
            return Err(Error::DegenerateMap("Res(t) vanishes identically".into()));
        }
        let content = num.iter().chain(&den).fold(BigInt::zero(), |g, p| {
            num_integer::Integer::gcd(&g, &p.content())
        });
        if !content.is_one() {
            return Err(Error::InvalidInput(format!("coefficients share content {content}")));
        }
        Ok(ParamFamily {
            degree,
            num,
            den,
            second: None,
            resultant,
        })
    }

    pub fn from_i64(degree: usize, num: &[&[i64]], den: &[&[i64]]) -> Result<Self> {
        let conv = |v: &[&[i64]]| v.iter().map(|c| IntPoly::from_i64(c)).collect();
        Self::new(degree, conv(num), conv(den))
    }

    /// The constant family of a single map.
    pub fn constant(f: &RationalMap) -> Self {
        let conv = |f: &BinaryForm| f.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect();
        Self::new(f.degree(), conv(f.p()), conv(f.q())).expect("a map is a valid constant family")
    }

    /// `z^d + t`.
    pub fn unicritical(d: usize) -> Self {
        let mut num = vec![IntPoly::new(vec![]); d + 1];
        num[0] = IntPoly::from_i64(&[0, 1]);
        num[d] = IntPoly::from_i64(&[1]);
        let mut den = vec![IntPoly::new(vec![]); d + 1];
        den[0] = IntPoly::from_i64(&[1]);
        Self::new(d, num, den).unwrap()
    }

    pub fn with_second(mut self, g: ParamFamily) -> Result<Self> {
        if g.degree != self.degree {
            return Err(Error::InvalidInput("paired families must share the degree".into()));
        }
        self.second = Some(Box::new(g));
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The first member alone.
    pub fn first(&self) -> ParamFamily {
        ParamFamily {
            second: None,
            ..self.clone()
        }
    }

    /// Largest degree in `t` among the lift coefficients.
    pub fn coefficient_degree(&self) -> usize {
        self.num
            .iter()
            .chain(&self.den)
            .filter_map(IntPoly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn second(&self) -> Option<&ParamFamily> {
        self.second.as_deref()
    }

    /// `Res(t)`, the resultant of the lift with formal degree `d`; it also
    /// vanishes where the degree drops.
    pub fn resultant_poly(&self) -> &IntPoly {
        &self.resultant
    }

    /// Lift coefficients at `t = a/b`, scaled by `b^e` to be integral.
    fn lift_at(&self, t: &BigRational) -> (BinaryForm, BinaryForm) {
        let e = self.coefficient_degree();
        let (a, b) = (t.numer(), t.denom());
        let at = |p: &IntPoly| -> BigInt {
            // homogenized: sum c_k a^k b^(e - k)
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c * num_traits::pow(a.clone(), k) * num_traits::pow(b.clone(), e - k))
                .sum()
        };
        (
            BinaryForm::new(self.num.iter().map(at).collect()),
            BinaryForm::new(self.den.iter().map(at).collect()),
        )
    }

    /// The map at `t`; `DegenerateFiber` where `Res(t) = 0`.
    pub fn specialize(&self, t: &BigRational) -> Result<RationalMap> {
        let (p, q) = self.lift_at(t);
        normalize_lift(p, q).map_err(|e| match e {
            Error::DegenerateMap(_) => Error::DegenerateFiber(t.to_string()),
            other => other,
        })
    }

    /// Both maps at `t` (the second defaults to the first).
    pub fn specialize_pair(&self, t: &BigRational) -> Result<(RationalMap, RationalMap)> {
        let f = self.specialize(t)?;
        let g = match &self.second {
            Some(s) => s.specialize(t)?,
            None => f.clone(),
        };
        Ok((f, g))
    }

    pub fn to_literal(&self) -> FamilyLiteral {
        let conv = |v: &[IntPoly]| -> Vec<Vec<i64>> {
            v.iter()
                .map(|p| p.coeffs().iter().map(|c| i64::try_from(c).unwrap_or(i64::MAX)).collect())
                .collect()
        };
        FamilyLiteral {
            degree: self.degree,
            num: conv(&self.num),
            den: conv(&self.den),
            second: self.second.as_ref().map(|s| Box::new(s.to_literal())),
        }
    }
}

impl FamilyLiteral {
    pub fn to_family(&self) -> Result<ParamFamily> {
        let conv = |v: &[Vec<i64>]| v.iter().map(|c| IntPoly::from_i64(c)).collect();
        let f = ParamFamily::new(self.degree, conv(&self.num), conv(&self.den))?;
        match &self.second {
            Some(s) => f.with_second(s.to_family()?),
            None => Ok(f),
        }
    }
}

pub fn parse_family_json(s: &str) -> Result<ParamFamily> {
    let lit: FamilyLiteral = serde_json::from_str(s)?;
    lit.to_family()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BadParameters {
    #[serde(serialize_with = "super::ser_rationals")]
    pub rational: Vec<BigRational>,
    pub complex: Vec<Complex64>,
}

/// Parameters where some map of the family degenerates: exact rational
/// roots of `Res(t)` and numerical complex roots, for both members of a
/// pair.
pub fn bad_parameters(fam: &ParamFamily) -> Result<BadParameters> {
    let mut rational = Vec::new();
    let mut complex = Vec::new();
    let mut members = vec![fam];
    if let Some(s) = fam.second() {
        members.push(s);
    }
    for m in members {
        let r = m.resultant_poly();
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let q: Vec<BigRational> = r.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        for root in rational_roots(&q) {
            if !rational.contains(&root) {
                rational.push(root);
            }
        }
        let c: Vec<Complex64> = r
            .coeffs()
            .iter()
            .map(|c| Complex64::new(crate::arith::point::ratio_f64(c, &BigInt::one()), 0.0))
            .collect();
        complex.extend(poly_roots_complex(&c, 1e-12)?);
    }
    rational.sort();
    Ok(BadParameters { rational, complex })
}
