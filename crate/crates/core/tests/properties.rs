//! Property tests over random polynomials and levels.

use num_bigint::BigInt;
use proptest::prelude::*;

use igusa_core::arith::{parse_polynomial, ord_and_ac, PadicLevel, Polynomial, ResidueBox};
use igusa_core::chars::unit_phase;
use igusa_core::engine::{build_histogram, exp_sum, subsum_decomposition, Budget};

fn arb_polynomial() -> impl Strategy<Value = Polynomial> {
    (1usize..=3).prop_flat_map(|nvars| {
        let term = (
            -20i64..=20,
            proptest::collection::vec(0u32..=4, nvars),
        );
        proptest::collection::vec(term, 1..=5).prop_map(move |terms| {
            Polynomial::new(
                nvars,
                terms
                    .into_iter()
                    .map(|(c, e)| (BigInt::from(c), e))
                    .collect(),
            )
            .unwrap()
        })
    })
}

fn arb_level() -> impl Strategy<Value = PadicLevel> {
    (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], 1u32..=3)
        .prop_map(|(p, m)| PadicLevel::new(p, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Printing then parsing is the identity on canonical polynomials.
    #[test]
    fn print_parse_round_trip(f in arb_polynomial()) {
        let reparsed = parse_polynomial(&f.to_string(), f.nvars()).unwrap();
        prop_assert_eq!(reparsed, f);
    }

    /// Histogram totals equal the box cardinality exactly, for both box
    /// kinds, and every sum has magnitude at most 1.
    #[test]
    fn histogram_total_and_magnitude(
        f in arb_polynomial(),
        level in arb_level(),
        shift in -3i64..=3,
        origin_box in proptest::bool::ANY,
    ) {
        prop_assume!(!f.is_constant());
        let n = f.nvars();
        let box_ = if origin_box {
            ResidueBox::Shifted { y: vec![BigInt::from(shift); n] }
        } else {
            ResidueBox::Full
        };
        let hist = build_histogram(&f, &level, &box_, Budget::default()).unwrap();
        prop_assert_eq!(Some(hist.total_points()), box_.points(n, &level));
        prop_assert_eq!(
            hist.counts().values().sum::<u128>(),
            hist.total_points()
        );
        let q = level.modulus_u128().unwrap();
        prop_assert!(hist.counts().keys().all(|&r| r < q));
        let e = exp_sum(&hist);
        prop_assert!(e.magnitude <= 1.0 + 1e-12);
        prop_assert!((e.magnitude - e.value.norm()).abs() <= 1e-12);
    }

    /// The histogram route agrees with the naive point-by-point sum.
    #[test]
    fn histogram_matches_naive_sum(
        f in arb_polynomial(),
        level in arb_level(),
    ) {
        prop_assume!(!f.is_constant());
        let n = f.nvars();
        let p = level.p();
        let m = level.m();
        prop_assume!((p as u128).pow(m * n as u32) <= 100_000);
        let hist = build_histogram(&f, &level, &ResidueBox::Full, Budget::default()).unwrap();
        let q = p.pow(m);
        let mut s = num_complex::Complex64::new(0.0, 0.0);
        let npts = (q as u128).pow(n as u32);
        for idx in 0..npts {
            let mut rest = idx;
            let mut pt = Vec::with_capacity(n);
            for _ in 0..n {
                pt.push(BigInt::from((rest % q as u128) as u64));
                rest /= q as u128;
            }
            let v: u128 = f.eval_mod(&pt, &level).unwrap().to_string().parse().unwrap();
            s += unit_phase(v as f64 / q as f64);
        }
        s /= (p as f64).powi((m * n as u32) as i32);
        prop_assert!((exp_sum(&hist).value - s).norm() <= 1e-9);
    }

    /// The subsum triple partitions the total sum.
    #[test]
    fn subsums_partition_total(
        f in arb_polynomial(),
        level in arb_level(),
    ) {
        prop_assume!(!f.is_constant());
        prop_assume!(level.m() >= 2);
        let hist = build_histogram(
            &f,
            &level,
            &ResidueBox::origin(f.nvars()),
            Budget::default(),
        )
        .unwrap();
        let total = exp_sum(&hist);
        let triple = subsum_decomposition(&hist).unwrap();
        prop_assert!((triple.total_value() - total.value).norm() <= 1e-9);
    }

    /// Valuation/angular-component reconstruction over random residues.
    #[test]
    fn ord_ac_reconstructs(level in arb_level(), z_seed in 0u64..1_000_000) {
        let q = level.modulus_u128().unwrap();
        let z = num_bigint::BigUint::from(z_seed as u128 % q);
        let (v, ac) = ord_and_ac(&z, &level);
        if z == num_bigint::BigUint::from(0u32) {
            prop_assert_eq!(v, level.m());
            prop_assert!(ac.is_none());
        } else {
            let p = num_bigint::BigUint::from(level.p());
            let pv = p.pow(v);
            prop_assert_eq!(&z % &pv, num_bigint::BigUint::from(0u32));
            let unit = &z / &pv;
            prop_assert_eq!(&unit % &p, num_bigint::BigUint::from(ac.unwrap()));
        }
    }

    /// Evaluation mod p^m reduces compatibly to every lower level.
    #[test]
    fn eval_reduction_tower(f in arb_polynomial(), seed in proptest::collection::vec(-50i64..=50, 3)) {
        let n = f.nvars();
        let pt: Vec<BigInt> = seed.iter().take(n).map(|&c| BigInt::from(c)).collect();
        prop_assume!(pt.len() == n);
        let top = PadicLevel::new(5, 4).unwrap();
        let hi = f.eval_mod(&pt, &top).unwrap();
        for m in 1..=4u32 {
            let level = PadicLevel::new(5, m).unwrap();
            let lo = f.eval_mod(&pt, &level).unwrap();
            prop_assert_eq!(&hi % level.modulus(), lo);
        }
    }
}
