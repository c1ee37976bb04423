//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Exact claims are asserted on
//! integer data; complex sums carry a 1e-9 absolute tolerance.

use std::time::Instant;


use igusa_core::arith::{is_prime_u64, parse_polynomial, PadicLevel, Polynomial, ResidueBox};
use igusa_core::chars::{characters_of_exact_order, weil_power_sum_check};
use igusa_core::critical::split_exp_sum_by_critical_values;
use igusa_core::engine::{
    build_histogram, build_histogram_with, exp_sum, lemma31_check, orbit_constancy_check,
    subsum_decomposition, Budget, ExecMode,
};
use igusa_core::lct::{jet_estimate_csv, lct_from_resolution, lct_jet_estimate, sigma_of};
use igusa_core::verify::{sweep_and_fit, SumVariant};
use igusa_core::zeta::{coeff_lattice, reconstruct_exp_sum, ResolutionData};

const TOL: f64 = 1e-9;

fn primes_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&p| is_prime_u64(p)).collect()
}

fn poly(text: &str, n: usize) -> Polynomial {
    parse_polynomial(text, n).unwrap()
}

fn hist(f: &Polynomial, p: u64, m: u32, box_: &ResidueBox) -> igusa_core::engine::ValueHistogram {
    let level = PadicLevel::new(p, m).unwrap();
    build_histogram(f, &level, box_, Budget::default()).unwrap()
}

fn load_data(name: &str) -> ResolutionData {
    let path = format!(
        "{}/../../data/resolutions/{name}",
        env!("CARGO_MANIFEST_DIR")
    );
    ResolutionData::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

const FIXTURES: [(&str, usize); 7] = [
    ("x", 1),
    ("x^2", 1),
    ("x^4", 1),
    ("x^2 + y^3", 2),
    ("x^3 - 3*x", 1),
    ("x^2*y^2", 2),
    ("x^2 - y^2", 2),
];

/// Criterion 1: |E^0_{1,p}(f)| = p^-n exactly, integer-exact via the
/// histogram, for every fixture and every p <= 37. Runtime < 1 s.
#[test]
fn criterion_01_level_one_exactness() {
    let start = Instant::now();
    for (text, n) in FIXTURES {
        let f = poly(text, n);
        for p in primes_to(37) {
            let h = hist(&f, p, 1, &ResidueBox::origin(n));
            assert_eq!(h.total_points(), 1, "{text} p={p}");
            assert_eq!(h.count(0), 1, "{text} p={p}: f(0) != 0 mod p?");
            let e = exp_sum(&h);
            let expected = (p as f64).powi(-(n as i32));
            assert_eq!(e.magnitude, expected, "{text} p={p}");
        }
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "took {dt:?}, limit 1 s");
    println!("criterion 01 (level-1 exactness): PASS in {dt:?}");
}

/// Criterion 2: lift-count constancy holds on the origin box for the three
/// fixtures over p in [5, 37], m in {3, 4}; failures may only sit below a
/// reported threshold, and constancy must force the low subsum to vanish.
/// Runtime < 2 min.
#[test]
fn criterion_02_lift_constancy() {
    let start = Instant::now();
    for (text, n) in [("x^2", 1), ("x^2 + y^3", 2), ("x^2 - y^2", 2)] {
        let f = poly(text, n);
        let mut failing_primes: Vec<u64> = Vec::new();
        let mut passing_primes: Vec<u64> = Vec::new();
        for p in primes_to(37).into_iter().filter(|&p| p >= 5) {
            let mut all_hold = true;
            for m in [3u32, 4] {
                let h = hist(&f, p, m, &ResidueBox::origin(n));
                let rep = lemma31_check(&h).unwrap();
                let low = subsum_decomposition(&h).unwrap().low;
                if rep.holds {
                    assert!(
                        low.magnitude <= TOL,
                        "{text} p={p} m={m}: constancy held, low = {}",
                        low.magnitude
                    );
                }
                all_hold &= rep.holds;
            }
            if all_hold {
                passing_primes.push(p);
            } else {
                failing_primes.push(p);
            }
        }
        // Failures only below an empirical threshold.
        let threshold = failing_primes.iter().max().copied().unwrap_or(0);
        assert!(
            passing_primes.iter().all(|&p| p > threshold),
            "{text}: failures {failing_primes:?} interleave passes {passing_primes:?}"
        );
        assert!(
            threshold < 37,
            "{text}: even the largest prime fails (threshold {threshold})"
        );
        println!("  {text}: empirical threshold {threshold} (failures: {failing_primes:?})");
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 120.0, "took {dt:?}, limit 2 min");
    println!("criterion 02 (lift constancy / low vanishing): PASS in {dt:?}");
}

/// Criterion 3: orbit constancy with d = gcd(m-1, p-1) orbits holds on the
/// same grid, and the mid subsum rebuilt from the orbit constants matches
/// the direct one within 1e-9.
#[test]
fn criterion_03_orbit_constancy() {
    for (text, n) in [("x^2", 1), ("x^2 + y^3", 2), ("x^2 - y^2", 2)] {
        let f = poly(text, n);
        for p in primes_to(37).into_iter().filter(|&p| p >= 5) {
            for m in [3u32, 4] {
                let h = hist(&f, p, m, &ResidueBox::origin(n));
                let rep = orbit_constancy_check(&h).unwrap();
                assert_eq!(rep.d, gcd((m - 1) as u64, p - 1), "{text} p={p} m={m}");
                assert!(rep.holds, "{text} p={p} m={m}: orbit constancy failed");
                let mid = subsum_decomposition(&h).unwrap().mid;
                let rebuilt = rep.mid_from_orbits.unwrap();
                assert!(
                    (rebuilt - mid.value).norm() <= TOL,
                    "{text} p={p} m={m}: mid mismatch {}",
                    (rebuilt - mid.value).norm()
                );
            }
        }
    }
    println!("criterion 03 (orbit constancy, mid rebuild): PASS");
}

/// Criterion 4: Weil bound for all p <= 199, d | p-1 with d <= 12, and
/// every xi in [1, p). Runtime < 1 min.
#[test]
fn criterion_04_weil_bound() {
    let start = Instant::now();
    let mut checked = 0u64;
    for p in primes_to(199) {
        for d in 1..=12u64.min(p - 1) {
            if (p - 1) % d != 0 {
                continue;
            }
            for xi in 1..p {
                let c = weil_power_sum_check(p, d, xi).unwrap();
                assert!(
                    c.ok,
                    "Weil violated at p={p} d={d} xi={xi}: {} > {}",
                    c.sum_magnitude, c.bound
                );
                checked += 1;
            }
        }
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "took {dt:?}, limit 1 min");
    println!("criterion 04 (Weil bound, {checked} sums): PASS in {dt:?}");
}

/// Criterion 5: reconstruction equals direct enumeration within 1e-9 for
/// f = x and f = x^2 on both boxes over p in {5,7,11,13}, m in [2,6]; the
/// series and lattice coefficient routes agree exactly for k <= 60.
#[test]
fn criterion_05_denef_round_trip() {
    let cases = [
        ("x", 1usize, "x_full.json", ResidueBox::Full),
        ("x", 1, "x_origin.json", ResidueBox::origin(1)),
        ("x^2", 1, "xsq_full.json", ResidueBox::Full),
        ("x^2", 1, "xsq_origin.json", ResidueBox::origin(1)),
    ];
    for (text, n, data_file, box_) in cases {
        let f = poly(text, n);
        let data = load_data(data_file);
        for p in [5u64, 7, 11, 13] {
            for m in 2..=6u32 {
                let recon = reconstruct_exp_sum(&data, p, m, 1).unwrap();
                let direct = exp_sum(&hist(&f, p, m, &box_));
                let diff = (recon.value - direct.value).norm();
                assert!(
                    diff <= TOL,
                    "{text} ({data_file}) p={p} m={m}: |recon - direct| = {diff}"
                );
            }
            // Double-entry bookkeeping on the coefficients.
            let orders: Vec<(u64, u64)> = std::iter::once((1, 0))
                .chain(
                    data.required_orders()
                        .into_iter()
                        .filter(|d| (p - 1) % d == 0)
                        .flat_map(|d| {
                            characters_of_exact_order(p, d)
                                .unwrap()
                                .into_iter()
                                .map(move |chi| (d, chi.index()))
                        }),
                )
                .collect();
            for (order, index) in orders {
                let z = igusa_core::zeta::denef_zeta(&data, p, order, index).unwrap();
                for k in 0..=60 {
                    assert_eq!(
                        z.coeff(k),
                        coeff_lattice(&data, p, order, index, k).unwrap(),
                        "{data_file} p={p} chi=({order},{index}) k={k}"
                    );
                }
            }
        }
    }
    println!("criterion 05 (Prop 2.3 round trip, series == lattice): PASS");
}

/// Criterion 6: |g_chi| = sqrt(p)/(p-1) within 1e-9 for every nontrivial
/// conductor-1 character, p <= 97.
#[test]
fn criterion_06_gauss_magnitudes() {
    for p in primes_to(97).into_iter().filter(|&p| p >= 3) {
        let mut counted = 0u64;
        for d in 2..=p - 1 {
            if (p - 1) % d != 0 {
                continue;
            }
            for chi in characters_of_exact_order(p, d).unwrap() {
                let mag = chi.gauss_sum().norm();
                let expected = (p as f64).sqrt() / (p - 1) as f64;
                assert!(
                    (mag - expected).abs() <= TOL,
                    "p={p} chi=({d},{}): |g| = {mag}, want {expected}",
                    chi.index()
                );
                counted += 1;
            }
        }
        assert_eq!(counted, p - 2, "p={p}: character census");
    }
    println!("criterion 06 (Gauss magnitudes): PASS");
}

/// Criterion 7: jet-route lct within 0.1 of 1, 1/2, 5/6, 1/4 using primes
/// {7, 11, 13, 17} and m <= 6; resolution-route values exact from the data
/// files. Runtime < 5 min.
#[test]
fn criterion_07_lct_estimates() {
    let start = Instant::now();
    let primes = [7u64, 11, 13, 17];
    let cases = [
        ("x", 1usize, 1.0, Some(("x_full.json", (1u32, 1u32)))),
        ("x^2", 1, 0.5, Some(("xsq_full.json", (1, 2)))),
        ("x^2 + y^3", 2, 5.0 / 6.0, Some(("cusp_origin.json", (5, 6)))),
        ("x^4", 1, 0.25, Some(("x4_full.json", (1, 4)))),
    ];
    for (text, n, expected, resolution) in cases {
        let f = poly(text, n);
        let est = lct_jet_estimate(
            &f,
            &primes,
            6,
            &ResidueBox::origin(n),
            Budget::default(),
            ExecMode::default(),
        )
        .unwrap();
        assert!(
            (est.inf_value - expected).abs() <= 0.1,
            "{text}: jet estimate {} vs {expected}",
            est.inf_value
        );
        if let Some((file, (num, den))) = resolution {
            let exact = lct_from_resolution(&load_data(file)).unwrap();
            assert_eq!(
                exact,
                num_rational::BigRational::new(num.into(), den.into()),
                "{text} resolution route"
            );
        }
        println!("  {text}: jet {} (sigma {})", est.inf_value, sigma_of(est.inf_value));
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 300.0, "took {dt:?}, limit 5 min");
    println!("criterion 07 (lct estimates): PASS in {dt:?}");
}

/// Criterion 8: bound sweeps for x^4 (sigma = 1/4) and x^2 y^2 (sigma = 1/2)
/// on the origin box over p <= 37, m <= 5: finite C with no upward trend in
/// p, and zero violations against a declared C = 2 C_fit.
#[test]
fn criterion_08_bound_sweep() {
    let primes = primes_to(37)
        .into_iter()
        .filter(|&p| p >= 5)
        .collect::<Vec<_>>();
    for (text, n, sigma) in [("x^4", 1usize, 0.25), ("x^2*y^2", 2, 0.5)] {
        let f = poly(text, n);
        let base = sweep_and_fit(
            &f,
            &SumVariant::Origin,
            sigma,
            &primes,
            (1, 5),
            Budget::default(),
            None,
            ExecMode::default(),
        )
        .unwrap();
        assert!(base.c_fit.is_finite() && base.c_fit > 0.0, "{text}");
        assert!(
            base.c_fit_top_half <= 1.05 * base.c_fit,
            "{text}: upward trend, top half {} vs full {}",
            base.c_fit_top_half,
            base.c_fit
        );
        let declared = 2.0 * base.c_fit;
        let checked = sweep_and_fit(
            &f,
            &SumVariant::Origin,
            sigma,
            &primes,
            (1, 5),
            Budget::default(),
            Some(declared),
            ExecMode::default(),
        )
        .unwrap();
        assert!(
            checked.violations.is_empty(),
            "{text}: violations against declared C"
        );
        println!(
            "  {text}: C_fit {} (top half {})",
            base.c_fit, base.c_fit_top_half
        );
    }
    println!("criterion 08 (bound sweep): PASS");
}

/// Criterion 9: the critical-value partition of E_{m,p}(x^3 - 3x)
/// reproduces the sum within 1e-9 and leaves a vanishing remainder, for
/// p in {7, 11, 13}, m in {2, 3}.
#[test]
fn criterion_09_critical_split() {
    let f = poly("x^3 - 3*x", 1);
    let zs = [num_bigint::BigInt::from(-2), num_bigint::BigInt::from(2)];
    for p in [7u64, 11, 13] {
        for m in [2u32, 3] {
            let h = hist(&f, p, m, &ResidueBox::Full);
            let split = split_exp_sum_by_critical_values(&h, &zs).unwrap();
            let direct = exp_sum(&h);
            assert!(
                (split.total - direct.value).norm() <= TOL,
                "identity p={p} m={m}"
            );
            assert!(
                split.remainder.norm() <= TOL,
                "remainder p={p} m={m}: {}",
                split.remainder.norm()
            );
        }
    }
    println!("criterion 09 (critical-value split): PASS");
}

/// Criterion 10: byte-identical reports across sequential, 1-thread and
/// 4-thread parallel execution.
#[test]
fn criterion_10_determinism() {
    let render = |mode: ExecMode| -> String {
        let mut out = String::new();
        // Histogram text of a 2-variable fixture.
        let f = poly("x^2*y^2 - 3*x*y + 7*y", 2);
        let level = PadicLevel::new(7, 3).unwrap();
        let h =
            build_histogram_with(&f, &level, &ResidueBox::Full, Budget::default(), mode).unwrap();
        out.push_str(&h.to_text());
        // Jet-estimate CSV.
        let cusp = poly("x^2 + y^3", 2);
        let est = lct_jet_estimate(
            &cusp,
            &[7, 11, 13],
            6,
            &ResidueBox::origin(2),
            Budget::default(),
            mode,
        )
        .unwrap();
        out.push_str(&jet_estimate_csv(&est));
        // Sweep grid rows.
        let quartic = poly("x^4", 1);
        let report = sweep_and_fit(
            &quartic,
            &SumVariant::Origin,
            0.25,
            &[5, 7, 11, 13],
            (1, 5),
            Budget::default(),
            None,
            mode,
        )
        .unwrap();
        for g in &report.grid {
            out.push_str(&format!("{},{},{},{}\n", g.p, g.m, g.abs_e, g.bound_ratio));
        }
        out.push_str(&format!("{},{}\n", report.c_fit, report.c_fit_top_half));
        out
    };

    let sequential = render(ExecMode::Sequential);
    #[cfg(feature = "parallel")]
    for threads in [1usize, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let parallel = pool.install(|| render(ExecMode::Parallel));
        assert_eq!(
            sequential, parallel,
            "parallel({threads}) output differs from sequential"
        );
    }
    assert!(!sequential.is_empty());
    println!("criterion 10 (determinism across thread counts): PASS");
}

/// Extra cross-oracle: reconstruction for x^4 (orders 1, 2, 4) and the
/// two-component x^2 y^2 data, against direct enumeration.
#[test]
fn reconstruction_extra_fixtures() {
    let quartic = poly("x^4", 1);
    for (file, box_) in [
        ("x4_full.json", ResidueBox::Full),
        ("x4_origin.json", ResidueBox::origin(1)),
    ] {
        let data = load_data(file);
        for p in [5u64, 13] {
            for m in 2..=6u32 {
                let recon = reconstruct_exp_sum(&data, p, m, 1).unwrap();
                let direct = exp_sum(&hist(&quartic, p, m, &box_));
                assert!(
                    (recon.value - direct.value).norm() <= TOL,
                    "{file} p={p} m={m}: {} vs {}",
                    recon.value,
                    direct.value
                );
            }
        }
    }

    let f = poly("x^2*y^2", 2);
    let data = load_data("x2y2_origin.json");
    for p in [5u64, 7, 11] {
        for m in 2..=5u32 {
            let recon = reconstruct_exp_sum(&data, p, m, 1).unwrap();
            let direct = exp_sum(&hist(&f, p, m, &ResidueBox::origin(2)));
            assert!(
                (recon.value - direct.value).norm() <= TOL,
                "x2y2 p={p} m={m}: {} vs {}",
                recon.value,
                direct.value
            );
        }
    }
    println!("extra reconstruction fixtures: PASS");
}

/// Extra invariant: the harness's |E| agrees with the reconstruction route
/// before any fitting occurs, wherever zeta data is available.
#[test]
fn harness_agrees_with_reconstruction() {
    let primes = [5u64, 7, 11, 13];
    for (text, file, variant) in [
        ("x^2", "xsq_full.json", SumVariant::Full),
        ("x^2", "xsq_origin.json", SumVariant::Origin),
        ("x^4", "x4_origin.json", SumVariant::Origin),
    ] {
        let f = poly(text, 1);
        let data = load_data(file);
        let report = sweep_and_fit(
            &f,
            &variant,
            0.5,
            &primes,
            (2, 5),
            Budget::default(),
            None,
            ExecMode::default(),
        )
        .unwrap();
        for g in &report.grid {
            let recon = reconstruct_exp_sum(&data, g.p, g.m, 1).unwrap();
            assert!(
                (g.abs_e - recon.value.norm()).abs() <= TOL,
                "{text} ({file}) p={} m={}: harness {} vs recon {}",
                g.p,
                g.m,
                g.abs_e,
                recon.value.norm()
            );
        }
    }
    println!("harness/reconstruction agreement: PASS");
}

/// Extra: nontrivial unit residues u exercise the chi(u) twist.
#[test]
fn reconstruction_with_nontrivial_unit() {
    let data = load_data("xsq_origin.json");
    let f = poly("x^2", 1);
    for p in [5u64, 7] {
        for u in 2..p {
            for m in 2..=4u32 {
                let recon = reconstruct_exp_sum(&data, p, m, u).unwrap();
                // Direct sum of e(u f(x) / p^m) over the origin box.
                let uf = f.mul(&Polynomial::constant(1, num_bigint::BigInt::from(u)));
                let direct = exp_sum(&hist(&uf, p, m, &ResidueBox::origin(1)));
                assert!(
                    (recon.value - direct.value).norm() <= TOL,
                    "p={p} u={u} m={m}: {} vs {}",
                    recon.value,
                    direct.value
                );
            }
        }
    }
    println!("nontrivial-unit reconstruction: PASS");
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
