//! Dense polynomials over Z and Z[v] with exact division, primitive-PRS
//! gcd and square-free parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient ring for [`UPoly`]: an integral domain with gcd.
pub trait Coef: Clone + PartialEq + std::fmt::Debug {
    fn czero() -> Self;
    fn cone() -> Self;
    fn cis_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / o` if the division is exact.
    fn div_exact(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    /// True if the canonical "leading" part is negative.
    fn is_neg(&self) -> bool;
}

impl Coef for BigInt {
    fn czero() -> Self {
        Zero::zero()
    }
    fn cone() -> Self {
        One::one()
    }
    fn cis_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            return None;
        }
        let (q, r) = self.div_rem(o);
        Zero::is_zero(&r).then_some(q)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

/// Dense univariate polynomial, ascending coefficients, no trailing zeros
/// (the zero polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly<T> {
    c: Vec<T>,
}

pub type IntPoly = UPoly<BigInt>;
/// Polynomials in `u` whose coefficients are polynomials in `v`.
pub type BiPoly = UPoly<IntPoly>;

impl<T: Coef> UPoly<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.cis_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn constant(a: T) -> Self {
        Self::new(vec![a])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> T {
        self.c.get(i).cloned().unwrap_or_else(T::czero)
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero_poly(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> T {
        self.c.last().cloned().unwrap_or_else(T::czero)
    }

    pub fn add_p(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub_p(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn mul_p(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Self::new(vec![]);
        }
        let mut out = vec![T::czero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.cis_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.c.iter().map(|a| a.mul(k)).collect())
    }

    pub fn neg_p(&self) -> Self {
        Self::new(self.c.iter().map(Coef::neg).collect())
    }

    /// `self * u^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.c.is_empty() {
            return self.clone();
        }
        let mut c = vec![T::czero(); k];
        c.extend(self.c.iter().cloned());
        Self::new(c)
    }

    pub fn pow_p(&self, e: usize) -> Self {
        let mut out = Self::constant(T::cone());
        for _ in 0..e {
            out = out.mul_p(self);
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| {
                    let mut acc = T::czero();
                    for _ in 0..i {
                        acc = acc.add(a);
                    }
                    acc
                })
                .collect(),
        )
    }

    /// gcd of the coefficients.
    pub fn content(&self) -> T {
        self.c.iter().fold(T::czero(), |g, a| g.gcd(a))
    }

    /// Content removed and sign normalized so the leading coefficient is
    /// "positive".
    pub fn primitive_part(&self) -> Self {
        if self.c.is_empty() {
            return self.clone();
        }
        let g = self.content();
        let mut p = Self::new(self.c.iter().map(|a| a.div_exact(&g).unwrap()).collect());
        if p.lead().is_neg() {
            p = p.neg_p();
        }
        p
    }

    /// Exact quotient `self / o`, `None` if `o` does not divide.
    pub fn div_exact_p(&self, o: &Self) -> Option<Self> {
        let od = o.degree()?;
        let Some(sd) = self.degree() else {
            return Some(self.clone());
        };
        if sd < od {
            return None;
        }
        let mut rem = self.clone();
        let mut q = vec![T::czero(); sd - od + 1];
        let lo = o.lead();
        while let Some(rd) = rem.degree() {
            if rd < od {
                return None;
            }
            let k = rem.lead().div_exact(&lo)?;
            q[rd - od] = k.clone();
            rem = rem.sub_p(&o.scale(&k).shift(rd - od));
            if rem.degree() == Some(rd) {
                return None;
            }
        }
        Some(Self::new(q))
    }

    /// Pseudo-remainder `lc(o)^(deg self - deg o + 1) * self mod o`.
    pub fn prem(&self, o: &Self) -> Self {
        let od = o.degree().expect("division by zero polynomial");
        let lo = o.lead();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < od {
                break;
            }
            let lr = r.lead();
            r = r.scale(&lo).sub_p(&o.scale(&lr).shift(rd - od));
        }
        r
    }

    /// gcd via the primitive pseudo-remainder sequence, sign normalized.
    pub fn gcd_p(&self, o: &Self) -> Self {
        if self.c.is_empty() {
            return o.primitive_part_keep_content();
        }
        if o.c.is_empty() {
            return self.primitive_part_keep_content();
        }
        let cont = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive_part(), o.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.c.is_empty() {
            let r = a.prem(&b);
            a = b;
            b = if r.c.is_empty() { r } else { r.primitive_part() };
        }
        let mut g = a.scale(&cont);
        if g.lead().is_neg() {
            g = g.neg_p();
        }
        g
    }

    fn primitive_part_keep_content(&self) -> Self {
        if self.lead().is_neg() {
            self.neg_p()
        } else {
            self.clone()
        }
    }

    /// Product of the distinct irreducible factors that involve the main
    /// variable (content is dropped).
    pub fn squarefree_main(&self) -> Self {
        let p = self.primitive_part();
        if p.degree().unwrap_or(0) == 0 {
            return Self::constant(T::cone());
        }
        let g = p.gcd_p(&p.derivative());
        p.div_exact_p(&g).expect("gcd divides").primitive_part()
    }
}

impl<T: Coef> Coef for UPoly<T> {
    fn czero() -> Self {
        UPoly::new(vec![])
    }
    fn cone() -> Self {
        UPoly::constant(T::cone())
    }
    fn cis_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        self.add_p(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_p(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_p(o)
    }
    fn neg(&self) -> Self {
        self.neg_p()
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        self.div_exact_p(o)
    }
    fn gcd(&self, o: &Self) -> Self {
        self.gcd_p(o)
    }
    fn is_neg(&self) -> bool {
        self.lead().is_neg()
    }
}

impl IntPoly {
    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        self.c
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * t + BigRational::from_integer(a.clone()))
    }

    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        self.c.iter().rev().fold(<BigInt as Zero>::zero(), |acc, a| acc * t + a)
    }

    pub fn eval_f64(&self, t: num_complex::Complex64) -> num_complex::Complex64 {
        let one = <BigInt as One>::one();
        self.c.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, a| {
            acc * t + super::point::ratio_f64(a, &one)
        })
    }

    /// Radical including the integer content's sign normalization.
    pub fn radical(&self) -> Self {
        self.squarefree_main()
    }
}

impl BiPoly {
    /// Derivative in the inner variable `v`.
    pub fn derivative_inner(&self) -> Self {
        UPoly::new(self.c.iter().map(|a| a.derivative()).collect())
    }

    /// Swaps the roles of `u` and `v`.
    pub fn transpose(&self) -> Self {
        let dv = self.c.iter().map(|a| a.c.len()).max().unwrap_or(0);
        let mut out = vec![vec![<BigInt as Zero>::zero(); self.c.len()]; dv];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in a.c.iter().enumerate() {
                out[j][i] = b.clone();
            }
        }
        UPoly::new(out.into_iter().map(UPoly::new).collect())
    }

    /// Radical of a bivariate integer polynomial: the product of its
    /// distinct irreducible factors, primitive and sign normalized.
    pub fn radical(&self) -> Self {
        if self.c.is_empty() {
            return self.clone();
        }
        // Pure-v part lives in the content over Z[v].
        let cont = self.content();
        let cont_rad = cont.radical();
        let pp = self.primitive_part();
        let main = if pp.degree().unwrap_or(0) == 0 {
            UPoly::constant(IntPoly::cone())
        } else {
            pp.squarefree_main()
        };
        let out = main.scale(&cont_rad);
        let g = out
            .c
            .iter()
            .flat_map(|p| p.c.iter())
            .fold(<BigInt as Zero>::zero(), |g, a| Integer::gcd(&g, a));
        let mut out = if g.is_zero() || g.is_one() {
            out
        } else {
            UPoly::new(
                out.c
                    .iter()
                    .map(|p| UPoly::new(p.c.iter().map(|a| a / &g).collect()))
                    .collect(),
            )
        };
        if out.lead().is_neg() {
            out = out.neg_p();
        }
        out
    }
}

/// Resultant of `p` and `q` viewed as binary forms of formal degrees
/// `dp`, `dq` (ascending coefficients, missing top coefficients are zero),
/// over any coefficient domain. Sylvester matrix in descending powers,
/// `p`-rows first, fraction-free Gaussian elimination.
pub fn resultant_formal<T: Coef>(p: &[T], dp: usize, q: &[T], dq: usize) -> T {
    let n = dp + dq;
    if n == 0 {
        return T::cone();
    }
    let get = |c: &[T], i: usize| c.get(i).cloned().unwrap_or_else(T::czero);
    let mut a = vec![vec![T::czero(); n]; n];
    for r in 0..dq {
        for k in 0..=dp {
            a[r][r + k] = get(p, dp - k);
        }
    }
    for r in 0..dp {
        for k in 0..=dq {
            a[dq + r][r + k] = get(q, dq - k);
        }
    }
    bareiss_generic(a)
}

/// Determinant by fraction-free elimination with row pivoting.
pub fn bareiss_generic<T: Coef>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::cone();
    }
    let mut prev = T::cone();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].cis_zero() {
            match (k + 1..n).find(|&r| !a[r][k].cis_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return T::czero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = T::czero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Lagrange interpolation through integer nodes; returns rational
/// coefficients (ascending).
pub fn interpolate(nodes: &[BigInt], values: &[BigRational]) -> Vec<BigRational> {
    let n = nodes.len();
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let xj = BigRational::from_integer(nodes[j].clone());
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(&nodes[i] - &nodes[j]);
        }
        let scale = &values[i] / denom;
        for (k, b) in basis.iter().enumerate() {
            out[k] += b * &scale;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn gcd_and_division() {
        // (z-1)(z+2) and (z-1)(z-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd_p(&b), p(&[-1, 1]));
        assert_eq!(a.div_exact_p(&p(&[-1, 1])), Some(p(&[2, 1])));
        assert_eq!(a.div_exact_p(&p(&[1, 1])), None);
        // contents multiply through
        assert_eq!(a.scale(&BigInt::from(6)).gcd_p(&b.scale(&BigInt::from(4))), p(&[-2, 2]));
    }

    #[test]
    fn radical_strips_powers() {
        let a = p(&[-1, 1]).pow_p(3).mul_p(&p(&[1, 0, 1]));
        assert_eq!(a.radical(), p(&[-1, 1]).mul_p(&p(&[1, 0, 1])));
    }

    #[test]
    fn bivariate_radical() {
        // (u - v)^2 * (v + 1)^3
        let u_minus_v: BiPoly = UPoly::new(vec![p(&[0, -1]), p(&[1])]);
        let v_plus_1: BiPoly = UPoly::constant(p(&[1, 1]));
        let f = u_minus_v.pow_p(2).mul_p(&v_plus_1.pow_p(3));
        let expect = u_minus_v.mul_p(&v_plus_1);
        assert_eq!(f.radical(), expect);
    }

    #[test]
    fn formal_resultant_matches_forms() {
        use crate::arith::form::{resultant, BinaryForm};
        let cases: [(&[i64], &[i64]); 3] = [(&[-2, 0, 1], &[1, 0, 0]), (&[1, 0, 1], &[0, 1, 0]), (&[3, -1, 2], &[5, 4, -7])];
        for (a, b) in cases {
            let ra = resultant(&BinaryForm::from_i64(a), &BinaryForm::from_i64(b));
            let pa: Vec<BigInt> = a.iter().map(|&v| BigInt::from(v)).collect();
            let pb: Vec<BigInt> = b.iter().map(|&v| BigInt::from(v)).collect();
            assert_eq!(resultant_formal(&pa, 2, &pb, 2), ra);
        }
        // over Z[v]: Res_u(u - v, u + v) = 2v (up to the Sylvester sign)
        let a: Vec<IntPoly> = vec![p(&[0, -1]), p(&[1])];
        let b: Vec<IntPoly> = vec![p(&[0, 1]), p(&[1])];
        assert_eq!(resultant_formal(&a, 1, &b, 1), p(&[0, 2]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let target = p(&[3, -1, 0, 2]);
        let nodes: Vec<BigInt> = (0..4).map(BigInt::from).collect();
        let vals: Vec<BigRational> = nodes
            .iter()
            .map(|t| BigRational::from_integer(target.eval_int(t)))
            .collect();
        let c = interpolate(&nodes, &vals);
        let ints: Vec<BigInt> = c.iter().map(|r| r.to_integer()).collect();
        assert_eq!(IntPoly::new(ints), target);
    }
}
