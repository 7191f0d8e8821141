//! Postcritical finiteness and recognition of exceptional maps (power,
//! Chebyshev and Lattes-like).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::enumerate::{preimages, wronskian, CLUSTER_TOL};
use super::orbit::{escape_cutoff, orbit, step_bound, OrbitVerdict};
use crate::arith::form::BinaryForm;
use crate::arith::point::log_abs;
use crate::arith::poly::IntPoly;
use crate::arith::rational_roots::rational_roots;
use crate::arith::roots::{cluster_points, poly_roots_complex};
use crate::arith::{chordal, ProjPointC, ProjPointQ, RationalMap};
use crate::heights::{green_arch, HeightContext};

/// Chordal radius for identifying points along numeric critical orbits.
const ORBIT_MATCH: f64 = 1e-7;
/// A numeric return closer than this counts as an exact repetition.
const ORBIT_EXACT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pcf {
    True,
    False,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExceptionalTag {
    PowerConjugate,
    ChebyshevConjugate,
    LattesLike,
    Ordinary,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalClass {
    pub tag: ExceptionalTag,
    pub evidence: Vec<String>,
}

/// Where a critical point goes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OrbitFate {
    /// Reaches a cycle: `tail` steps, then period `period`.
    Finite { tail: usize, period: usize },
    /// Certified to be infinite.
    Escapes,
    /// Neither decided within budget.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalOrbit {
    pub point: ProjPointC,
    pub multiplicity: usize,
    /// Rational critical point handled with exact arithmetic.
    pub exact: bool,
    pub fate: OrbitFate,
    /// `f(c), f^2(c), ...` up to the first repeat (finite fates only).
    #[serde(skip)]
    pub forward: Vec<ProjPointC>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PcfReport {
    pub verdict: Pcf,
    pub orbits: Vec<CriticalOrbit>,
    pub postcritical: Vec<ProjPointC>,
}

/// Rational critical points `(point, multiplicity)` and the numeric
/// remaining ones, obtained from the Wronskian with its rational linear
/// factors divided out exactly.
fn critical_split(f: &RationalMap) -> (Vec<(ProjPointQ, usize)>, Vec<(ProjPointC, usize)>) {
    let w = wronskian(f);
    let inf = w.infinity_multiplicity().unwrap_or(0);
    let finite = IntPoly::new(w.coeffs().to_vec());
    let coeffs: Vec<BigRational> = finite
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut rational: Vec<(ProjPointQ, usize)> = Vec::new();
    if inf > 0 {
        rational.push((ProjPointQ::infinity(), inf));
    }
    let mut rest = finite;
    if rest.degree().unwrap_or(0) > 0 {
        for r in rational_roots(&coeffs) {
            let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
            rest = rest.div_exact_p(&lin).expect("rational root divides");
            let p = ProjPointQ::from_rational(&r);
            match rational.iter_mut().find(|(q, _)| *q == p) {
                Some(e) => e.1 += 1,
                None => rational.push((p, 1)),
            }
        }
    }
    let mut numeric = Vec::new();
    if rest.degree().unwrap_or(0) > 0 {
        let c: Vec<_> = rest
            .coeffs()
            .iter()
            .map(|a| num_complex::Complex64::new(crate::arith::point::ratio_f64(a, &BigInt::from(1)), 0.0))
            .collect();
        if let Ok(roots) = poly_roots_complex(&c, 1e-14) {
            let pts: Vec<ProjPointC> = roots.into_iter().map(ProjPointC::affine).collect();
            numeric = cluster_points(&pts, CLUSTER_TOL);
        }
    }
    (rational, numeric)
}

/// Numeric forward orbit until the first near-return.
fn numeric_orbit(f: &RationalMap, c: &ProjPointC, budget: usize) -> (OrbitFate, Vec<ProjPointC>) {
    let mut pts = vec![*c];
    for k in 1..=budget {
        let z = f.eval_c(&pts[k - 1]);
        if let Some(j) = pts.iter().position(|p| chordal(p, &z) <= ORBIT_MATCH) {
            let exact = chordal(&pts[j], &z) <= ORBIT_EXACT;
            pts.push(z);
            let forward = pts[1..].to_vec();
            return if exact {
                (OrbitFate::Finite { tail: j, period: k - j }, forward)
            } else {
                (OrbitFate::Undecided, forward)
            };
        }
        pts.push(z);
    }
    (OrbitFate::Undecided, vec![])
}

/// For polynomial lifts `(P, b y^d)`: the finite point `c` has unbounded
/// orbit iff `G_F(c, 1) > log|b| / (d - 1)`; certified with the Green
/// function error radius.
fn polynomial_escape(f: &RationalMap, c: &ProjPointC) -> bool {
    if !f.is_polynomial() {
        return false;
    }
    let Some(z) = c.to_affine() else {
        return false;
    };
    let d = f.degree() as f64;
    let floor = log_abs(&f.q().coeffs()[0]) / (d - 1.0);
    let g = green_arch(f, &ProjPointC::raw(z, num_complex::Complex64::new(1.0, 0.0)), 60);
    g.value - g.error > floor + 1e-9
}

fn union_points(into: &mut Vec<ProjPointC>, pts: &[ProjPointC]) {
    for p in pts {
        if !into.iter().any(|q| chordal(p, q) <= ORBIT_MATCH) {
            into.push(*p);
        }
    }
}

/// Critical orbits and postcritical set. `budget` caps numeric orbit
/// length; rational critical points are followed exactly to a verdict.
pub fn pcf_report(f: &RationalMap, budget: usize) -> PcfReport {
    let (rational, numeric) = critical_split(f);
    let ctx = HeightContext::new(f);
    let cutoff = escape_cutoff(&ctx);
    let mut orbits = Vec::new();
    for (c, m) in rational {
        let rec = orbit(f, &c, step_bound(cutoff), cutoff);
        let (fate, forward) = match rec.verdict {
            OrbitVerdict::Preperiodic => (
                OrbitFate::Finite {
                    tail: rec.tail_length,
                    period: rec.cycle_length.unwrap(),
                },
                rec.points[1..].iter().map(ProjPointQ::to_complex).collect(),
            ),
            OrbitVerdict::Escaping => (OrbitFate::Escapes, vec![]),
            OrbitVerdict::Budget => (OrbitFate::Undecided, vec![]),
        };
        orbits.push(CriticalOrbit {
            point: c.to_complex(),
            multiplicity: m,
            exact: true,
            fate,
            forward,
        });
    }
    for (c, m) in numeric {
        let (mut fate, forward) = numeric_orbit(f, &c, budget);
        if fate == OrbitFate::Undecided && polynomial_escape(f, &c) {
            fate = OrbitFate::Escapes;
        }
        orbits.push(CriticalOrbit {
            point: c,
            multiplicity: m,
            exact: false,
            fate,
            forward,
        });
    }
    let verdict = if orbits.iter().any(|o| o.fate == OrbitFate::Escapes) {
        Pcf::False
    } else if orbits.iter().all(|o| matches!(o.fate, OrbitFate::Finite { .. })) {
        Pcf::True
    } else {
        Pcf::Unknown
    };
    let mut postcritical = Vec::new();
    if verdict == Pcf::True {
        for o in &orbits {
            union_points(&mut postcritical, &o.forward);
        }
    }
    PcfReport {
        verdict,
        orbits,
        postcritical,
    }
}

pub fn is_pcf(f: &RationalMap, budget: usize) -> Pcf {
    pcf_report(f, budget).verdict
}

/// Homogenization of a dehomogenized polynomial to a form of degree
/// `deg + extra_y` (extra factors of `y` put roots at infinity).
fn homogenize(p: &IntPoly, extra_y: usize) -> BinaryForm {
    let mut c = p.coeffs().to_vec();
    c.extend(std::iter::repeat_n(BigInt::zero(), extra_y));
    BinaryForm::new(c)
}

fn same_up_to_scalar(a: &BinaryForm, b: &BinaryForm) -> bool {
    a.degree() == b.degree() && a.normalized() == b.normalized()
}

/// The exceptional pair, if `f` is conjugate to `z^d` or `z^-d`: the
/// radical `A` of the Wronskian has degree 2, the Wronskian is a power of
/// `A`, and `A(P, Q)` is a multiple of `A^d`.
pub fn exceptional_pair(f: &RationalMap) -> Option<BinaryForm> {
    let d = f.degree();
    let w = wronskian(f);
    let inf = w.infinity_multiplicity()?;
    let finite = IntPoly::new(w.coeffs().to_vec());
    let rad = finite.radical();
    let a = homogenize(&rad, usize::from(inf > 0));
    if a.degree() != 2 {
        return None;
    }
    if !same_up_to_scalar(&w, &a.pow(d - 1)) {
        return None;
    }
    same_up_to_scalar(&a.substitute(f.p(), f.q()), &a.pow(d)).then_some(a)
}

/// A rational point `v` with `f^-1(v) = {v}`.
pub fn exceptional_singleton(f: &RationalMap) -> Option<ProjPointQ> {
    let d = f.degree();
    let (rational, _) = critical_split(f);
    rational.into_iter().find_map(|(v, m)| {
        if m + 1 < d || f.eval(&v) != v {
            return None;
        }
        let (a, b) = (v.x(), v.y());
        let pre = f.p().scale(b).sub(&f.q().scale(a));
        let lin = BinaryForm::new(vec![-a.clone(), b.clone()]);
        same_up_to_scalar(&pre, &lin.pow(d)).then_some(v)
    })
}

/// Orbifold test for the (2, 2, infinity) signature: over each point of the
/// two-element set `post`, preimages inside `post` are simple and preimages
/// outside are double.
fn chebyshev_orbifold(f: &RationalMap, post: &[ProjPointC]) -> bool {
    post.iter().all(|p| {
        let Ok(pre) = preimages(f, p, 1e-14) else {
            return false;
        };
        cluster_points(&pre, CLUSTER_TOL).into_iter().all(|(z, k)| {
            let inside = post.iter().any(|q| chordal(q, &z) <= ORBIT_MATCH);
            if inside {
                k == 1
            } else {
                k == 2
            }
        })
    })
}

/// Classification of `f` as exceptional or ordinary.
pub fn classify_exceptional(f: &RationalMap, budget: usize) -> ExceptionalClass {
    let mut ev = Vec::new();
    let done = |tag, ev| ExceptionalClass { tag, evidence: ev };
    if let Some(a) = exceptional_pair(f) {
        ev.push(format!("totally invariant pair {{{a} = 0}}; Wronskian is a power of it"));
        return done(ExceptionalTag::PowerConjugate, ev);
    }
    ev.push("no totally invariant pair".into());
    let rep = pcf_report(f, budget);
    for o in &rep.orbits {
        ev.push(format!(
            "critical point {} (mult {}, {}): {:?}",
            fmt_point(&o.point),
            o.multiplicity,
            if o.exact { "exact" } else { "numeric" },
            o.fate
        ));
    }
    match rep.verdict {
        Pcf::False => {
            ev.push("a critical orbit is certified infinite: not PCF".into());
            return done(ExceptionalTag::Ordinary, ev);
        }
        Pcf::Unknown => {
            ev.push("critical orbits undecided within budget".into());
            return done(ExceptionalTag::Unknown, ev);
        }
        Pcf::True => ev.push(format!("PCF with postcritical set of size {}", rep.postcritical.len())),
    }
    if let Some(v) = exceptional_singleton(f) {
        let vc = v.to_complex();
        let post: Vec<ProjPointC> = rep
            .postcritical
            .iter()
            .copied()
            .filter(|p| chordal(p, &vc) > ORBIT_MATCH)
            .collect();
        ev.push(format!("totally invariant point {v}; other postcritical points: {}", post.len()));
        if post.len() == 2 && chebyshev_orbifold(f, &post) {
            ev.push("postcritical portrait has the (2, 2, inf) orbifold shape".into());
            return done(ExceptionalTag::ChebyshevConjugate, ev);
        }
    }
    let periodic_critical = rep
        .orbits
        .iter()
        .any(|o| matches!(o.fate, OrbitFate::Finite { tail: 0, .. }));
    if periodic_critical {
        ev.push("a critical point is periodic and no exceptional point explains it".into());
        return done(ExceptionalTag::Ordinary, ev);
    }
    let n = rep.postcritical.len();
    if n == 3 || n == 4 {
        ev.push("all critical points strictly preperiodic, postcritical set of size 3 or 4".into());
        return done(ExceptionalTag::LattesLike, ev);
    }
    ev.push("postcritical set size incompatible with an exceptional map".into());
    done(ExceptionalTag::Ordinary, ev)
}

fn fmt_point(p: &ProjPointC) -> String {
    match p.to_affine() {
        Some(z) if p.y.norm() >= 1e-12 * p.x.norm() => format!("{:.6}{:+.6}i", z.re, z.im),
        _ => "inf".into(),
    }
}

/// `[1, 0, -2, 0, 1] / [0, 4, 0, 4, 0]`: the duplication map on `y^2 = x^3 + x`
/// in the x-coordinate.
pub fn lattes_example() -> RationalMap {
    RationalMap::from_poly_coeffs(&[1, 0, -2, 0, 1], &[0, 4, 0, 4, 0]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pcf_examples() {
        assert_eq!(is_pcf(&RationalMap::power(2), 64), Pcf::True);
        assert_eq!(is_pcf(&RationalMap::quadratic(-2), 64), Pcf::True);
        assert_eq!(is_pcf(&RationalMap::quadratic(1), 64), Pcf::False);
        assert_eq!(is_pcf(&lattes_example(), 64), Pcf::True);
    }

    #[test]
    fn lattes_critical_count() {
        let (r, n) = critical_split(&lattes_example());
        let total: usize = r.iter().map(|x| x.1).sum::<usize>() + n.iter().map(|x| x.1).sum::<usize>();
        assert_eq!(total, 6);
        assert_eq!(pcf_report(&lattes_example(), 64).postcritical.len(), 4);
    }

    #[test]
    fn documented_classes() {
        let tag = |f: &RationalMap| classify_exceptional(f, 64).tag;
        assert_eq!(tag(&RationalMap::power(3)), ExceptionalTag::PowerConjugate);
        assert_eq!(tag(&RationalMap::quadratic(-2)), ExceptionalTag::ChebyshevConjugate);
        assert_eq!(tag(&lattes_example()), ExceptionalTag::LattesLike);
        assert_eq!(tag(&RationalMap::quadratic(1)), ExceptionalTag::Ordinary);
        assert_eq!(tag(&RationalMap::quadratic(-1)), ExceptionalTag::Ordinary);
    }

    #[test]
    fn conjugates_and_signs() {
        let tag = |f: &RationalMap| classify_exceptional(f, 64).tag;
        // 1/z^2 and a Mobius conjugate of z^2
        let inv = RationalMap::from_poly_coeffs(&[1], &[0, 0, 1]).unwrap();
        assert_eq!(tag(&inv), ExceptionalTag::PowerConjugate);
        let conj = RationalMap::power(2).conjugate_by([1, 1, 0, 1]).unwrap();
        assert_eq!(tag(&conj), ExceptionalTag::PowerConjugate);
        // -T_2 and T_3
        let neg_cheb = RationalMap::from_poly_coeffs(&[2, 0, -1], &[1]).unwrap();
        assert_eq!(tag(&neg_cheb), ExceptionalTag::ChebyshevConjugate);
        let cheb3 = RationalMap::from_poly_coeffs(&[0, -3, 0, 1], &[1]).unwrap();
        assert_eq!(tag(&cheb3), ExceptionalTag::ChebyshevConjugate);
        let conj = cheb3.conjugate_by([1, 2, 0, 1]).unwrap();
        assert_eq!(tag(&conj), ExceptionalTag::ChebyshevConjugate);
    }
}
