use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use splitdyn::arith::map::compose_raw;
use splitdyn::arith::{eval_map, poly_roots_complex, rational_roots, resultant, BinaryForm, ProjPointQ, RationalMap};

fn quadratic_map() -> impl Strategy<Value = RationalMap> {
    (prop::collection::vec(-4i64..=4, 3), prop::collection::vec(-4i64..=4, 3)).prop_filter_map("degree 2", |(n, d)| {
        RationalMap::from_poly_coeffs(&n, &d).ok().filter(|f| f.degree() == 2)
    })
}

/// Fraction-free (Bareiss) determinant.
fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of two forms of degrees `a` and `b` (coefficients
/// ascending in `x`).
fn sylvester(p: &[BigInt], q: &[BigInt]) -> Vec<Vec<BigInt>> {
    let (a, b) = (p.len() - 1, q.len() - 1);
    let n = a + b;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..b {
        for (i, c) in p.iter().enumerate() {
            m[r][r + i] = c.clone();
        }
    }
    for r in 0..a {
        for (i, c) in q.iter().enumerate() {
            m[b + r][r + i] = c.clone();
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_output_is_normalized(f in quadratic_map(), p in -50i64..=50, q in 1i64..=50) {
        let z = ProjPointQ::from_ints(p, q).unwrap();
        let w = eval_map(&f, &z);
        let again = ProjPointQ::new(w.x().clone(), w.y().clone()).unwrap();
        prop_assert_eq!(again, w);
    }

    #[test]
    fn resultant_of_composition(f in quadratic_map(), g in quadratic_map()) {
        let (p, q) = compose_raw(&f, &g);
        let oracle = det(sylvester(p.coeffs(), q.coeffs())).abs();
        let expect = (f.res().pow(2u32) * g.res().pow(4u32)).abs();
        prop_assert_eq!(&oracle, &expect);
        prop_assert_eq!(resultant(&p, &q).abs(), expect);
    }

    #[test]
    fn roots_reconstruct_polynomial(
        raw in prop::collection::vec((0.2f64..2.0, 0.0f64..std::f64::consts::TAU), 1..=12)
    ) {
        let roots: Vec<Complex64> = raw.iter().map(|(r, t)| Complex64::from_polar(*r, *t)).collect();
        let separated = roots.iter().enumerate().all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() >= 0.1));
        prop_assume!(separated);
        let monic = |rs: &[Complex64]| {
            let mut c = vec![Complex64::new(1.0, 0.0)];
            for r in rs {
                let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
                for (i, a) in c.iter().enumerate() {
                    next[i + 1] += a;
                    next[i] -= a * r;
                }
                c = next;
            }
            c
        };
        let coeffs = monic(&roots);
        let found = poly_roots_complex(&coeffs, 1e-14).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        let back = monic(&found);
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (a, b) in coeffs.iter().zip(&back) {
            prop_assert!((a - b).norm() <= 1e-6 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn rational_roots_are_complex_roots(
        a in -20i64..=20, b in 1i64..=20, quad in prop::collection::vec(-9i64..=9, 3)
    ) {
        prop_assume!(quad[2] != 0);
        // (b z - a) * quad(z)
        let lin = [-a, b];
        let mut c = vec![0i64; 4];
        for (i, x) in lin.iter().enumerate() {
            for (j, y) in quad.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        let q: Vec<BigRational> = c.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let rat = rational_roots(&q);
        prop_assert!(rat.contains(&BigRational::new(a.into(), b.into())));
        let cc: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect();
        let cx = poly_roots_complex(&cc, 1e-14).unwrap();
        for r in &rat {
            let v = num_traits::ToPrimitive::to_f64(r).unwrap();
            let near = cx.iter().map(|z| (z - v).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(near <= 1e-6 * (1.0 + v.abs()), "{r} not among {cx:?}");
        }
    }
}

#[test]
fn sylvester_oracle_on_a_known_pair() {
    // x^2 - 2 y^2 and y^2
    let p = BinaryForm::from_i64(&[-2, 0, 1]);
    let q = BinaryForm::from_i64(&[1, 0, 0]);
    assert_eq!(det(sylvester(p.coeffs(), q.coeffs())).abs(), BigInt::from(1));
    assert_eq!(resultant(&p, &q).abs(), BigInt::from(1));
}
