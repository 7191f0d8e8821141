//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitdyn::arith::poly::IntPoly;
use splitdyn::arith::{iterate, rational_roots, BinaryForm, ProjPointQ, RationalMap};
use splitdyn::dynamics::classify::lattes_example;
use splitdyn::dynamics::{classify_exceptional, is_preperiodic_exact, CurveP1xP1, ExceptionalTag};
use splitdyn::families::{dky_scan, fit_height_inequality, ParamFamily, PrepBudget};
use splitdyn::heights::canonical_height;
use splitdyn::measures::sample::generic_start;
use splitdyn::measures::{
    backward_sample, measure_equality_test, mutual_energy, EmpiricalMeasure, EqualityParams, EqualityVerdict,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t0 = Instant::now();
    let mut o = f();
    let el = t0.elapsed();
    o.pass &= el < limit;
    o.detail = format!("{} [{:.1}s, limit {}s]", o.detail, el.as_secs_f64(), limit.as_secs());
    o
}

fn c1_power_map() -> Outcome {
    let f = RationalMap::power(2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut nonzero_err = 0;
    let mut n = 0;
    while n < 100 {
        let p: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let q: i64 = rng.gen_range(1..=1_000_000);
        if p.gcd(&q) != 1 {
            continue;
        }
        n += 1;
        let h = canonical_height(&f, &ProjPointQ::from_ints(p, q).unwrap(), 1e-9).unwrap();
        let expect = (p.abs().max(q) as f64).ln();
        worst = worst.max((h.value - expect).abs());
        if h.error != 0.0 {
            nonzero_err += 1;
        }
    }
    outcome(
        worst <= 1e-9 && nonzero_err == 0,
        format!("max |h - log max(|p|,|q|)| = {worst:.1e}, nonzero errors {nonzero_err}"),
    )
}

fn c2_chebyshev() -> Outcome {
    let h = canonical_height(&RationalMap::quadratic(-2), &ProjPointQ::from_ints(3, 1).unwrap(), 1e-6).unwrap();
    let oracle = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let ok = h.error <= 1e-6 && (h.value - oracle).abs() <= h.error && (h.value - 0.962424).abs() <= 1e-6;
    outcome(
        ok,
        format!("h = {:.9} +- {:.1e}, log((3+sqrt5)/2) = {oracle:.9}", h.value, h.error),
    )
}

fn c3_functional_equation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut maps = Vec::new();
    while maps.len() < 20 {
        let num: Vec<i64> = (0..3).map(|_| rng.gen_range(-5..=5)).collect();
        let den: Vec<i64> = (0..3).map(|_| rng.gen_range(-5..=5)).collect();
        if let Ok(f) = RationalMap::from_poly_coeffs(&num, &den) {
            if f.degree() == 2 {
                maps.push(f);
            }
        }
    }
    let mut bad = 0;
    let mut worst_ratio = 0.0f64;
    for f in &maps {
        for _ in 0..10 {
            let p: i64 = rng.gen_range(-50..=50);
            let q: i64 = rng.gen_range(1..=50);
            let z = ProjPointQ::from_ints(p, q).unwrap();
            let hz = canonical_height(f, &z, 1e-6).unwrap();
            let hfz = canonical_height(f, &f.eval(&z), 1e-6).unwrap();
            let gap = (hfz.value - 2.0 * hz.value).abs();
            let allowed = hfz.error + 2.0 * hz.error;
            worst_ratio = worst_ratio.max(gap / allowed.max(f64::MIN_POSITIVE));
            if gap > allowed {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("200 pairs, {bad} outside certified error, max gap/error = {worst_ratio:.2}"),
    )
}

fn affine_coeffs(g: &BinaryForm) -> Vec<BigRational> {
    g.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Rational roots of `f^(m+n) = f^m`, including infinity.
fn rational_prep_roots(f: &RationalMap, m: usize, n: usize) -> Vec<ProjPointQ> {
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
    let mut out: Vec<ProjPointQ> = rational_roots(&affine_coeffs(&g))
        .iter()
        .map(ProjPointQ::from_rational)
        .collect();
    if g.coeffs().last().is_none_or(|c| *c == BigInt::from(0)) {
        out.push(ProjPointQ::infinity());
    }
    out
}

fn c4_preperiodic_soundness() -> Outcome {
    let mut roots = 0;
    let mut failures = Vec::new();
    for c in [0, -1, -2] {
        let f = RationalMap::quadratic(c);
        for m in 0..=2 {
            for n in 1..=3 {
                for z in rational_prep_roots(&f, m, n) {
                    roots += 1;
                    let h = canonical_height(&f, &z, 1e-10).unwrap();
                    if !is_preperiodic_exact(&f, &z) || h.value > 1e-9 {
                        failures.push(format!("z^2{c:+}: {z:?}"));
                    }
                }
            }
        }
        for s in ["3", "5/2", "7"] {
            let z: ProjPointQ = s.parse().unwrap();
            let h = canonical_height(&f, &z, 1e-10).unwrap();
            if is_preperiodic_exact(&f, &z) || h.value <= 0.1 {
                failures.push(format!("z^2{c:+}: {s} h = {:.4}", h.value));
            }
        }
    }
    outcome(
        failures.is_empty() && roots > 0,
        format!("{roots} rational roots checked, failures {failures:?}"),
    )
}

fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

fn sample(f: &RationalMap, seed: u64) -> EmpiricalMeasure {
    backward_sample(f, &generic_start(f).unwrap(), 20, 10_000, seed).unwrap()
}

fn c5_sampling() -> Outcome {
    let sq = sample(&RationalMap::power(2), 5);
    let angles: Vec<f64> = sq
        .affine_values()
        .into_iter()
        .map(|z| z.unwrap().arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU)
        .collect();
    let ks1 = ks_distance(angles, |u| u.clamp(0.0, 1.0));
    let ch = sample(&RationalMap::quadratic(-2), 5);
    let xs: Vec<f64> = ch.affine_values().into_iter().map(|z| z.unwrap().re).collect();
    let ks2 = ks_distance(xs, |x| 0.5 + (x / 2.0).clamp(-1.0, 1.0).asin() / std::f64::consts::PI);
    outcome(
        ks1 <= 0.02 && ks2 <= 0.02,
        format!("KS(angles, uniform) = {ks1:.4}, KS(x, arcsine) = {ks2:.4}"),
    )
}

fn c6_energy() -> Outcome {
    let (sq, ch) = (RationalMap::power(2), RationalMap::quadratic(-2));
    let cross = mutual_energy(&sample(&sq, 6), &sample(&ch, 60)).unwrap();
    let null = mutual_energy(&sample(&sq, 6), &sample(&sq, 61)).unwrap();
    let params = EqualityParams::default();
    let d = CurveP1xP1::diagonal();
    let same = measure_equality_test(&sq, &sq, &d, &params).unwrap();
    let diff = measure_equality_test(&sq, &ch, &d, &params).unwrap();
    let ok = (cross - 0.6461).abs() <= 0.05
        && null.abs() <= 0.02
        && same.decision == EqualityVerdict::Equal
        && diff.decision == EqualityVerdict::NotEqual;
    outcome(
        ok,
        format!(
            "I(z^2, z^2-2) = {cross:.4}, I(z^2, z^2') = {null:.4}, diagonal tests {:?} / {:?} ({:.4} +- {:.4})",
            same.decision, diff.decision, diff.statistic, diff.se
        ),
    )
}

/// Returns the criterion outcome and whether the attainable parts hold.
fn c7_dky() -> (Outcome, bool) {
    let ts = [-2, -1, 0, 1];
    let table = dky_scan(&ts, &ts, 0.01, PrepBudget::default()).unwrap();
    let count = |a: i64, b: i64| {
        table
            .cells
            .iter()
            .find(|c| c.t1 == a && c.t2 == b)
            .and_then(|c| c.count)
    };
    let mut symmetric = true;
    let mut finite = true;
    let mut max = (0, 0, 0);
    for &a in &ts {
        for &b in &ts {
            if a == b {
                continue;
            }
            finite &= count(a, b).is_some();
            symmetric &= count(a, b) == count(b, a);
            let n = count(a, b).unwrap_or(usize::MAX);
            if n > max.0 {
                max = (n, a, b);
            }
        }
    }
    let cell = count(0, -2);
    let core = symmetric && finite && cell == Some(4);
    // z^2 - 2 and z^2 - 1 share {inf, 0, +-1, +-sqrt 2, +-phi, +-1/phi}
    // (phi the golden ratio), so the bound of 8 cannot hold on this grid.
    let bound = max.0 <= 8;
    (
        outcome(
            core && bound,
            format!(
                "symmetric {symmetric}, finite {finite}, (0,-2) = {cell:?}, max {} at ({}, {})",
                max.0, max.1, max.2
            ),
        ),
        core,
    )
}

fn c8_fit() -> Outcome {
    let grid: Vec<BigRational> = (2..=200).map(|t| BigRational::from_integer(t.into())).collect();
    let fit = fit_height_inequality(&ParamFamily::unicritical(2), &IntPoly::from_i64(&[0]), &grid, 1e-8).unwrap();
    let ok = fit.c1 >= 0.4 && fit.violations == 0 && (0.45..=0.55).contains(&fit.slope);
    outcome(
        ok,
        format!(
            "c1 = {:.4}, c2 = {:.4}, violations {}, slope {:.4}",
            fit.c1, fit.c2, fit.violations, fit.slope
        ),
    )
}

fn c9_classification() -> Outcome {
    let cases = [
        ("z^3", RationalMap::power(3), ExceptionalTag::PowerConjugate),
        ("z^2-2", RationalMap::quadratic(-2), ExceptionalTag::ChebyshevConjugate),
        ("Lattes", lattes_example(), ExceptionalTag::LattesLike),
        ("z^2+1", RationalMap::quadratic(1), ExceptionalTag::Ordinary),
    ];
    let got: Vec<(&str, ExceptionalTag)> = cases.iter().map(|(n, f, _)| (*n, classify_exceptional(f, 64).tag)).collect();
    let ok = cases.iter().zip(&got).all(|(c, g)| c.2 == g.1);
    outcome(ok, format!("{got:?}"))
}

/// Runs the CLI jobs writing to `dir/out<i>`; the path is part of the
/// echoed config, so repeated runs switch the working directory instead.
fn cli_outputs(dir: &std::path::Path) -> Vec<Vec<u8>> {
    let jobs: [&[&str]; 4] = [
        &["measure", "--map", "z2", "--depth", "20", "--width", "10000", "--emit", "csv"],
        &["energy", "--map1", "z2", "--map2", "z2m2", "--curve", "diagonal"],
        &["dky", "--t1", "-2,-1,0,1", "--t2", "-2,-1,0,1", "--eps", "0.01", "--emit", "csv"],
        &["family-scan", "--family", "z2+t", "--section", "0", "--t-min", "2", "--t-max", "200"],
    ];
    jobs.iter()
        .enumerate()
        .map(|(i, args)| {
            let path = format!("out{i}");
            let mut argv = vec!["splitdyn", "--seed", "11", "--out", &path];
            argv.extend_from_slice(args);
            let (code, msg) = splitdyn::cli::main_with_args(argv);
            assert_eq!(code, 0, "{msg}");
            std::fs::read(dir.join(&path)).unwrap()
        })
        .collect()
}

fn c10_determinism() -> Outcome {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cwd = std::env::current_dir().unwrap();
    std::env::set_current_dir(d1.path()).unwrap();
    let a = cli_outputs(d1.path());
    std::env::set_current_dir(d2.path()).unwrap();
    let b = cli_outputs(d2.path());
    std::env::set_current_dir(cwd).unwrap();
    let same: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x == y).collect();
    outcome(
        same.iter().all(|s| *s),
        format!("measure/energy/dky/fit identical: {same:?}"),
    )
}

fn main() {
    let secs = Duration::from_secs;
    let mut required = Vec::new();
    let mut report = |n: u32, o: Outcome, required_ok: bool| {
        println!("criterion {n:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        required.push((n, required_ok));
    };
    let o = timed(secs(1), c1_power_map);
    let ok = o.pass;
    report(1, o, ok);
    let o = timed(secs(1), c2_chebyshev);
    let ok = o.pass;
    report(2, o, ok);
    let o = timed(secs(30), c3_functional_equation);
    let ok = o.pass;
    report(3, o, ok);
    let o = timed(secs(10), c4_preperiodic_soundness);
    let ok = o.pass;
    report(4, o, ok);
    let o = timed(secs(60), c5_sampling);
    let ok = o.pass;
    report(5, o, ok);
    let o = timed(secs(300), c6_energy);
    let ok = o.pass;
    report(6, o, ok);
    let t0 = Instant::now();
    let (mut o, core) = c7_dky();
    let el = t0.elapsed();
    o.detail = format!("{} [{:.1}s, limit 300s]", o.detail, el.as_secs_f64());
    o.pass &= el < secs(300);
    // the count bound is unattainable (see the cell comment in c7_dky);
    // the remaining parts are still required
    report(7, o, core && el < secs(300));
    let o = timed(secs(120), c8_fit);
    let ok = o.pass;
    report(8, o, ok);
    let o = timed(secs(30), c9_classification);
    let ok = o.pass;
    report(9, o, ok);
    let o = timed(secs(600), c10_determinism);
    let ok = o.pass;
    report(10, o, ok);
    let failed: Vec<u32> = required.iter().filter(|r| !r.1).map(|r| r.0).collect();
    if !failed.is_empty() {
        eprintln!("required criteria failed: {failed:?}");
        std::process::exit(1);
    }
}
