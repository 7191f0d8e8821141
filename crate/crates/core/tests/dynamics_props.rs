use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use splitdyn::arith::roots::form_roots;
use splitdyn::arith::{chordal, iterate, rational_roots, BinaryForm, ProjPointC, ProjPointQ, RationalMap};
use splitdyn::dynamics::{
    classify_exceptional, curve_image, is_preperiodic_exact, periodic_points, preperiodic_points, CurveP1xP1,
    ExceptionalTag,
};
use splitdyn::heights::canonical_height;

fn map_of_degree(d: usize) -> impl Strategy<Value = RationalMap> {
    (
        prop::collection::vec(-4i64..=4, d + 1),
        prop::collection::vec(-4i64..=4, d + 1),
    )
        .prop_filter_map("degree d", move |(n, m)| {
            RationalMap::from_poly_coeffs(&n, &m).ok().filter(|f| f.degree() == d)
        })
}

fn iterate_c(f: &RationalMap, z: &ProjPointC, n: usize) -> ProjPointC {
    (0..n).fold(z.unit(), |w, _| f.eval_c(&w).unit())
}

/// Rational solutions of `f^(m+n) = f^m`, infinity included.
fn rational_prep(f: &RationalMap, m: usize, n: usize) -> Vec<ProjPointQ> {
    let lift = |k: usize| -> (BinaryForm, BinaryForm) {
        if k == 0 {
            (BinaryForm::x(), BinaryForm::y())
        } else {
            let g = iterate(f, k).unwrap();
            (g.p().clone(), g.q().clone())
        }
    };
    let (pa, qa) = lift(m + n);
    let (pb, qb) = lift(m);
    let g = pa.mul(&qb).sub(&pb.mul(&qa));
    let c: Vec<BigRational> = g.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut out: Vec<ProjPointQ> = rational_roots(&c).iter().map(ProjPointQ::from_rational).collect();
    if g.coeffs().last().is_none_or(Zero::is_zero) {
        out.push(ProjPointQ::infinity());
    }
    out.dedup();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn rational_preperiodic_points_have_height_zero(
        c in -3i64..=3, m in 0usize..=2, n in 1usize..=2
    ) {
        let f = RationalMap::quadratic(c);
        for z in rational_prep(&f, m, n) {
            prop_assert!(is_preperiodic_exact(&f, &z), "{z:?}");
            let h = canonical_height(&f, &z, 1e-10).unwrap();
            prop_assert!(h.value.abs() <= h.error + 1e-12);
        }
    }

    #[test]
    fn accepted_points_have_height_zero(f in map_of_degree(2), p in -6i64..=6, q in 1i64..=6) {
        let z = ProjPointQ::from_ints(p, q).unwrap();
        if is_preperiodic_exact(&f, &z) {
            let h = canonical_height(&f, &z, 1e-10).unwrap();
            prop_assert!(h.value.abs() <= h.error + 1e-12);
        }
    }

    #[test]
    fn periodic_point_count(f in prop_oneof![map_of_degree(2), map_of_degree(3)], n in 1usize..=3) {
        let d = f.degree();
        let pts = periodic_points(&f, n, 1e-13).unwrap();
        prop_assert_eq!(pts.len(), d.pow(n as u32) + 1);
    }

    #[test]
    fn preperiodic_outputs_solve_the_equation(c in -30i64..=30, den in 1i64..=7, m in 0usize..=2, n in 1usize..=3) {
        // z^2 + c/den with simple roots generically
        let f = RationalMap::from_poly_coeffs(&[c, 0, den], &[den]).unwrap();
        let tol = 1e-10;
        for z in preperiodic_points(&f, m, n, tol).unwrap() {
            let a = iterate_c(&f, &z, m + n);
            let b = iterate_c(&f, &z, m);
            prop_assert!(chordal(&a, &b) <= 10.0 * tol, "{z:?}: {}", chordal(&a, &b));
        }
    }
}

fn curve_11() -> impl Strategy<Value = CurveP1xP1> {
    prop::collection::vec(-3i64..=3, 4).prop_filter_map("bidegree (1,1)", |v| {
        let c = CurveP1xP1::from_i64((1, 1), &[&v[0..2], &v[2..4]]).ok()?;
        (c.bidegree() == (1, 1)).then_some(c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curve_image_degree_and_membership(
        c in curve_11(), f in map_of_degree(2), g in map_of_degree(2), seeds in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 3)
    ) {
        let img = curve_image(&c, &f, &g).unwrap();
        let (a, b) = img.bidegree();
        prop_assert!(a > 0 || b > 0);
        if a > 0 { prop_assert_eq!(2 % a, 0); }
        if b > 0 { prop_assert_eq!(2 % b, 0); }
        let scale: f64 = img
            .coeffs()
            .iter()
            .flatten()
            .map(|x| num_traits::ToPrimitive::to_f64(&x.abs()).unwrap())
            .sum();
        for (re, im) in seeds {
            let u = ProjPointC::affine(Complex64::new(re, im));
            let form = c.fiber_form(1, &u);
            if form.iter().all(|x| x.norm() < 1e-12) {
                continue;
            }
            for w in form_roots(&form, 1e-14).unwrap() {
                let r = img.residual(&f.eval_c(&u), &g.eval_c(&w));
                prop_assert!(r <= 1e-8 * scale, "residual {r}");
            }
        }
    }
}

#[test]
fn classification_of_powers_and_escaping_quadratics() {
    for d in 2..=5 {
        assert_eq!(classify_exceptional(&RationalMap::power(d), 64).tag, ExceptionalTag::PowerConjugate);
    }
    // 0, -1, -2 are the only PCF parameters in Z; the others escape
    for c in [1, 2, 3, -3, -4, 5, -6, 7, 9, -10] {
        let f = RationalMap::quadratic(c);
        assert_eq!(classify_exceptional(&f, 64).tag, ExceptionalTag::Ordinary, "z^2 + {c}");
    }
}
