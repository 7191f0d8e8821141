use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::point::ratio_f64;

/// A binary form of fixed degree with integer coefficients.
///
/// `coeffs[i]` multiplies `x^i y^(degree - i)`, so the dehomogenization at
/// `y = 1` is the ascending coefficient list of a polynomial in `z = x/y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    /// Form of degree `coeffs.len() - 1`. The content is *not* normalized here;
    /// see [`BinaryForm::primitive`].
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![BigInt::zero(); degree + 1])
    }

    /// `x^i y^(degree-i)`.
    pub fn monomial(degree: usize, i: usize) -> Self {
        let mut c = vec![BigInt::zero(); degree + 1];
        c[i] = BigInt::one();
        Self::new(c)
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn y() -> Self {
        Self::from_i64(&[1, 0])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// gcd of the coefficients (0 for the zero form).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn div_exact(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c / k).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "forms of different degree");
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "forms of different degree");
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::new(vec![BigInt::one()]);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `H(A(x,y), B(x,y))` for forms `A`, `B` of a common degree.
    pub fn substitute(&self, a: &Self, b: &Self) -> Self {
        assert_eq!(a.degree(), b.degree(), "substituted forms must share a degree");
        let d = self.degree();
        let e = a.degree();
        let mut a_pows = vec![Self::new(vec![BigInt::one()])];
        let mut b_pows = vec![Self::new(vec![BigInt::one()])];
        for k in 1..=d {
            a_pows.push(a_pows[k - 1].mul(a));
            b_pows.push(b_pows[k - 1].mul(b));
        }
        let mut out = Self::zero(d * e);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = a_pows[i].mul(&b_pows[d - i]).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// `H(a x + b y, c x + d y)`.
    pub fn linear_substitute(&self, m: [&BigInt; 4]) -> Self {
        let a = Self::new(vec![m[1].clone(), m[0].clone()]);
        let b = Self::new(vec![m[3].clone(), m[2].clone()]);
        self.substitute(&a, &b)
    }

    /// Partial derivative in x (a form of degree one less).
    pub fn dx(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero(0);
        }
        Self::new(
            (1..=self.degree())
                .map(|i| &self.coeffs[i] * BigInt::from(i))
                .collect(),
        )
    }

    /// Partial derivative in y.
    pub fn dy(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::new((0..d).map(|i| &self.coeffs[i] * BigInt::from(d - i)).collect())
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let d = self.degree();
        let mut xp = vec![BigInt::one(); d + 1];
        let mut yp = vec![BigInt::one(); d + 1];
        for k in 1..=d {
            xp[k] = &xp[k - 1] * x;
            yp[k] = &yp[k - 1] * y;
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * &xp[i] * &yp[d - i])
            .sum()
    }

    /// Evaluation reduced modulo `m` (result in `[0, m)`).
    pub fn eval_mod(&self, x: &BigInt, y: &BigInt, m: &BigInt) -> BigInt {
        let d = self.degree();
        let mut xp = vec![BigInt::one(); d + 1];
        let mut yp = vec![BigInt::one(); d + 1];
        for k in 1..=d {
            xp[k] = (&xp[k - 1] * x).mod_floor(m);
            yp[k] = (&yp[k - 1] * y).mod_floor(m);
        }
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = (acc + c * &xp[i] % m * &yp[d - i]).mod_floor(m);
            }
        }
        acc
    }

    pub fn eval_rational(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + BigRational::from_integer(c.clone()))
    }

    /// Coefficients as complex doubles (overflowing entries become +-inf).
    pub fn to_complex(&self) -> Vec<Complex64> {
        let one = BigInt::one();
        self.coeffs
            .iter()
            .map(|c| Complex64::new(ratio_f64(c, &one), 0.0))
            .collect()
    }

    /// Largest coefficient bit length.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Order of vanishing at infinity `[1:0]`, i.e. degree minus the
    /// degree of the dehomogenized polynomial. `None` for the zero form.
    pub fn infinity_multiplicity(&self) -> Option<usize> {
        let top = self.coeffs.iter().rposition(|c| !c.is_zero())?;
        Some(self.degree() - top)
    }

    /// Sign-normalized primitive form: content 1 and first nonzero
    /// coefficient (from the top) positive.
    pub fn normalized(&self) -> Self {
        let p = self.primitive();
        match p.coeffs.iter().rev().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => p.neg(),
            _ => p,
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            let mono = match (i, d - i) {
                (0, 0) => String::new(),
                (i, 0) => pw("x", i),
                (0, j) => pw("y", j),
                (i, j) => format!("{}*{}", pw("x", i), pw("y", j)),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn pw(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// Sylvester resultant of two binary forms.
///
/// Convention: columns run over monomials in descending powers of `x`, the
/// `deg Q` shifted rows of `P` come first. With this convention
/// `Res(x^d, y^d) = 1`, and for forms whose `x`-leading coefficient `a` is
/// nonzero, `Res(P, Q) = a^(deg Q) * prod Q(alpha, 1)` over the roots of `P(z, 1)`.
pub fn resultant(p: &BinaryForm, q: &BinaryForm) -> BigInt {
    let m = p.degree();
    let n = q.degree();
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for k in 0..=m {
            row[r + k] = p.coeffs[m - k].clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for k in 0..=n {
            row[r + k] = q.coeffs[n - k].clone();
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Integer forms `(G1, G2)` of degree `d-1` with `G1*P + G2*Q = Res(P,Q) * target`,
/// where `target` is `x^(2d-1)` (`which_x = true`) or `y^(2d-1)`.
///
/// Returns `None` if `Res(P, Q) = 0` or the degrees differ.
pub fn bezout_cofactors(
    p: &BinaryForm,
    q: &BinaryForm,
    which_x: bool,
) -> Option<(BinaryForm, BinaryForm)> {
    let d = p.degree();
    if q.degree() != d || d == 0 {
        return None;
    }
    let res = resultant(p, q);
    if res.is_zero() {
        return None;
    }
    // Unknowns: g1_0..g1_{d-1}, g2_0..g2_{d-1}; equations: coefficient k of
    // the degree 2d-1 product, k = 0..2d-1 (ascending x-powers).
    let n = 2 * d;
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n + 1]; n];
    for j in 0..d {
        for (i, c) in p.coeffs.iter().enumerate() {
            m[i + j][j] = BigRational::from_integer(c.clone());
        }
        for (i, c) in q.coeffs.iter().enumerate() {
            m[i + j][d + j] = BigRational::from_integer(c.clone());
        }
    }
    let target_row = if which_x { n - 1 } else { 0 };
    m[target_row][n] = BigRational::from_integer(res.clone());
    let sol = solve_rational(m)?;
    let to_int = |r: &BigRational| -> Option<BigInt> {
        if r.denom().is_one() {
            Some(r.numer().clone())
        } else {
            None
        }
    };
    let g1: Option<Vec<BigInt>> = sol[..d].iter().map(to_int).collect();
    let g2: Option<Vec<BigInt>> = sol[d..].iter().map(to_int).collect();
    Some((BinaryForm::new(g1?), BinaryForm::new(g2?)))
}

/// Gauss-Jordan on an augmented rational matrix; `None` if singular.
pub(crate) fn solve_rational(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *v = &*v - &f * pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Leibniz-expansion determinant; independent of Bareiss.
    fn leibniz(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = BigInt::zero();
        permute(&mut perm, 0, a, &mut total);
        total
    }

    fn permute(perm: &mut Vec<usize>, k: usize, a: &[Vec<BigInt>], total: &mut BigInt) {
        let n = perm.len();
        if k == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let mut prod = BigInt::one();
            for (r, &c) in perm.iter().enumerate() {
                prod *= &a[r][c];
            }
            if inversions % 2 == 1 {
                prod = -prod;
            }
            *total += prod;
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute(perm, k + 1, a, total);
            perm.swap(k, i);
        }
    }

    fn sylvester_rows(p: &[i64], q: &[i64]) -> Vec<Vec<BigInt>> {
        // descending coefficient lists
        let m = p.len() - 1;
        let n = q.len() - 1;
        let mut rows = vec![];
        for r in 0..n {
            let mut row = vec![BigInt::zero(); m + n];
            for (k, c) in p.iter().enumerate() {
                row[r + k] = BigInt::from(*c);
            }
            rows.push(row);
        }
        for r in 0..m {
            let mut row = vec![BigInt::zero(); m + n];
            for (k, c) in q.iter().enumerate() {
                row[r + k] = BigInt::from(*c);
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn resultant_matches_determinant_oracle() {
        // (x^2, y^2)
        let r = resultant(&BinaryForm::from_i64(&[0, 0, 1]), &BinaryForm::from_i64(&[1, 0, 0]));
        assert_eq!(r, BigInt::from(1));
        assert_eq!(leibniz(&sylvester_rows(&[1, 0, 0], &[0, 0, 1])), BigInt::from(1));
        // (x^2 - 2y^2, y^2)
        let r = resultant(&BinaryForm::from_i64(&[-2, 0, 1]), &BinaryForm::from_i64(&[1, 0, 0]));
        assert_eq!(r, leibniz(&sylvester_rows(&[1, 0, -2], &[0, 0, 1])));
        assert_eq!(r, BigInt::from(1));
        // (x^2 + y^2, x y)
        let r = resultant(&BinaryForm::from_i64(&[1, 0, 1]), &BinaryForm::from_i64(&[0, 1, 0]));
        assert_eq!(r, leibniz(&sylvester_rows(&[1, 0, 1], &[0, 1, 0])));
        assert_eq!(r.abs(), BigInt::from(1));
        // shared factor
        let f = BinaryForm::from_i64(&[-1, 0, 1]);
        assert!(resultant(&f, &f).is_zero());
    }

    #[test]
    fn resultant_random_against_leibniz() {
        let cases: [(&[i64], &[i64]); 4] = [
            (&[3, -1, 2], &[1, 4, -2]),
            (&[1, 2, 3, 4], &[-5, 0, 1, 7]),
            (&[2, 0, 0, 1], &[0, 3, 1, -1]),
            (&[7, -3, 0, 2, 1], &[1, 1, 1, 1, 1]),
        ];
        for (p, q) in cases {
            let pf = BinaryForm::from_i64(p);
            let qf = BinaryForm::from_i64(q);
            let pd: Vec<i64> = p.iter().rev().copied().collect();
            let qd: Vec<i64> = q.iter().rev().copied().collect();
            assert_eq!(resultant(&pf, &qf), leibniz(&sylvester_rows(&pd, &qd)));
        }
    }

    #[test]
    fn bezout_identity_holds() {
        let p = BinaryForm::from_i64(&[-2, 0, 1]);
        let q = BinaryForm::from_i64(&[1, 3, 0]);
        let res = resultant(&p, &q);
        for which_x in [true, false] {
            let (g1, g2) = bezout_cofactors(&p, &q, which_x).unwrap();
            let lhs = g1.mul(&p).add(&g2.mul(&q));
            let target = if which_x { BinaryForm::monomial(3, 3) } else { BinaryForm::monomial(3, 0) };
            assert_eq!(lhs, target.scale(&res));
        }
    }

    #[test]
    fn substitution_and_derivatives() {
        // (x+y)^2 via substitution of x^2
        let sq = BinaryForm::from_i64(&[0, 0, 1]);
        let lin = BinaryForm::from_i64(&[1, 1]);
        let y = BinaryForm::y();
        assert_eq!(sq.substitute(&lin, &y), BinaryForm::from_i64(&[1, 2, 1]));
        let f = BinaryForm::from_i64(&[5, 2, 3]); // 3x^2 + 2xy + 5y^2
        assert_eq!(f.dx(), BinaryForm::from_i64(&[2, 6]));
        assert_eq!(f.dy(), BinaryForm::from_i64(&[10, 2]));
        assert_eq!(f.eval(&BigInt::from(2), &BigInt::from(-1)), BigInt::from(12 - 4 + 5));
        assert_eq!(
            f.eval_mod(&BigInt::from(2), &BigInt::from(-1), &BigInt::from(7)),
            BigInt::from(13 % 7)
        );
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(BinaryForm::from_i64(&[-2, 0, 1]).to_string(), "x^2 - 2*y^2");
    }
}
