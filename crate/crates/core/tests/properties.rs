use inbl_core::algebra::{FactoredSuperposition, ProductString, Superposition, Symbolic};
use inbl_core::rtw::{mix64, Sign, SignAssignment, StreamId};
use inbl_core::signal::{trace_monomial, ProductWave, SuperpositionWave, Waveform};
use inbl_core::{
    build_reference_system, readout, trace_product, trace_superposition, tsinbl_identify, uniform_superposition,
    Lambda, Rational,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

/// Direct substitution of one product-string, independent of the masks path.
fn brute_product_value(w: &ProductString, signs: &SignAssignment, lambda: &Lambda) -> Rational {
    let mut acc = Rational::one();
    for r in 1..=w.num_bits() {
        if w.is_high(r) {
            acc *= signs.get(StreamId::high(r)).to_rational();
        } else {
            acc *= signs.get(StreamId::low(r)).to_rational() * lambda.value();
        }
    }
    acc
}

fn lambda_strategy() -> impl Strategy<Value = Lambda> {
    (1i64..=12, 1i64..=12)
        .prop_filter("0 < p <= q", |(p, q)| p <= q)
        .prop_map(|(p, q)| Lambda::from_ratio(p, q).unwrap())
}

fn coeff_strategy() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=5).prop_map(|(p, d)| q(p, d))
}

fn factored_strategy(max_bits: usize) -> impl Strategy<Value = FactoredSuperposition> {
    (1..=max_bits).prop_flat_map(|n| {
        (prop::collection::vec(coeff_strategy(), n), prop::collection::vec(coeff_strategy(), n))
            .prop_map(|(h, l)| FactoredSuperposition::new(h, l).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factored_and_expanded_agree(f in factored_strategy(10), lam in lambda_strategy(), masks in any::<(u64, u64)>()) {
        let n = f.num_bits();
        let m = (1u64 << n) - 1;
        let signs = SignAssignment::from_masks(n, masks.0 & m, masks.1 & m);
        let e = f.expand().unwrap();
        prop_assert_eq!(f.evaluate(&signs, &lam).unwrap(), e.evaluate(&signs, &lam).unwrap());
    }

    #[test]
    fn expanded_evaluation_matches_brute_force(f in factored_strategy(6), lam in lambda_strategy(), masks in any::<(u64, u64)>()) {
        let n = f.num_bits();
        let m = (1u64 << n) - 1;
        let signs = SignAssignment::from_masks(n, masks.0 & m, masks.1 & m);
        let e = f.expand().unwrap();
        let brute: Rational = e.terms().map(|(w, c)| c * brute_product_value(w, &signs, &lam)).sum();
        prop_assert_eq!(e.evaluate(&signs, &lam).unwrap(), brute);
    }

    #[test]
    fn not_commutes_with_expansion(f in factored_strategy(8), lam in lambda_strategy(), pick in any::<usize>()) {
        let r = pick % f.num_bits() + 1;
        let a = f.apply_not(r, &lam).unwrap().expand().unwrap();
        let b = f.expand().unwrap().apply_not(r, &lam).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn not_twice_scales(f in factored_strategy(8), lam in lambda_strategy(), pick in any::<usize>()) {
        let r = pick % f.num_bits() + 1;
        let e = f.expand().unwrap();
        let twice = e.apply_not(r, &lam).unwrap().apply_not(r, &lam).unwrap();
        prop_assert_eq!(twice, e.scaled(&lam.squared()));
    }

    #[test]
    fn json_roundtrip(f in factored_strategy(6)) {
        let e = f.expand().unwrap();
        prop_assert_eq!(Superposition::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn string_roundtrip(n in 1usize..=64, raw in any::<u64>()) {
        let bits = if n == 64 { raw } else { raw & ((1u64 << n) - 1) };
        let w = ProductString::new(n, bits).unwrap();
        prop_assert_eq!(w.to_string().parse::<ProductString>().unwrap(), w);
        prop_assert_eq!(ProductString::from_code(n, w.code()).unwrap(), w);
    }
}

#[test]
fn oracle_agreement_thousand_assignments() {
    for n in 1..=10 {
        let f = {
            let h = (0..n).map(|i| q(i as i64 - 3, 2)).collect();
            let l = (0..n).map(|i| q(2 - i as i64, 3)).collect();
            FactoredSuperposition::new(h, l).unwrap()
        };
        let e = f.expand().unwrap();
        let lam = Lambda::from_ratio(2, 5).unwrap();
        for i in 0..1000u64 {
            let m = (1u64 << n) - 1;
            let signs = SignAssignment::from_masks(n, mix64(i) & m, mix64(i + 7777) & m);
            assert_eq!(f.evaluate(&signs, &lam).unwrap(), e.evaluate(&signs, &lam).unwrap());
        }
    }
}

#[test]
fn uniform_never_vanishes_below_unit_lambda() {
    for lam in [Lambda::half(), Lambda::from_ratio(1, 4).unwrap(), Lambda::from_ratio(5, 7).unwrap()] {
        for n in 1..=6 {
            let f = uniform_superposition(n).unwrap();
            let lo = num_traits::pow(Rational::one() - lam.value(), n);
            let hi = num_traits::pow(Rational::one() + lam.value(), n);
            let mut min: Option<Rational> = None;
            let mut max = Rational::zero();
            for p in 0..1u64 << (2 * n) {
                let m = (1u64 << n) - 1;
                let signs = SignAssignment::from_masks(n, p & m, p >> n);
                let v = f.evaluate(&signs, &lam).unwrap().abs();
                assert!(v >= lo && v <= hi);
                assert!(!v.is_zero());
                if min.as_ref().is_none_or(|x| v < *x) {
                    min = Some(v.clone());
                }
                if v > max {
                    max = v;
                }
            }
            assert_eq!(min.unwrap(), lo);
            assert_eq!(max, hi);
        }
    }
}

#[test]
fn distinct_strings_orthogonal_over_all_signs() {
    let lam = Lambda::half();
    for n in 1..=5 {
        let strings: Vec<ProductString> = ProductString::all(n).unwrap().collect();
        let m = (1u64 << n) - 1;
        let patterns: Vec<SignAssignment> =
            (0..1u64 << (2 * n)).map(|p| SignAssignment::from_masks(n, p & m, p >> n)).collect();
        for (i, a) in strings.iter().enumerate() {
            for b in &strings[i + 1..] {
                let sa = Superposition::single(*a, Rational::one());
                let sb = Superposition::single(*b, Rational::one());
                let total: Rational =
                    patterns.iter().map(|s| sa.evaluate(s, &lam).unwrap() * sb.evaluate(s, &lam).unwrap()).sum();
                assert!(total.is_zero(), "{a} and {b} not orthogonal");
            }
        }
    }
}

#[test]
fn waveform_readouts_equal_symbolic_evaluation() {
    for n in 1..=8 {
        let f = uniform_superposition(n).unwrap();
        for seed in 0..100u64 {
            for lam in [Lambda::unit(), Lambda::half()] {
                let refs = build_reference_system(seed, n, 12, lam.clone()).unwrap();
                let wave = SuperpositionWave::new(&refs, &f, true).unwrap();
                for k in 0..12 {
                    let sym = f.evaluate(&refs.period_signs(k), &lam).unwrap();
                    assert_eq!(wave.readout_at(k), sym, "n={n} seed={seed} k={k}");
                }
            }
        }
    }
}

#[test]
fn product_traces_multiply() {
    let lam = Lambda::half();
    let refs = build_reference_system(31, 6, 10, lam).unwrap();
    let full: ProductString = "HLLHLH".parse().unwrap();
    for shifted in [false, true] {
        let left = trace_monomial(&refs, &[StreamId::high(1), StreamId::low(2), StreamId::low(3)], shifted).unwrap();
        let right = trace_monomial(&refs, &[StreamId::high(4), StreamId::low(5), StreamId::high(6)], shifted).unwrap();
        let prod = left.mul(&right).unwrap();
        assert_eq!(prod, trace_product(&refs, &full, shifted).unwrap());
    }
}

#[test]
fn shifted_and_unshifted_readouts_agree() {
    for seed in 0..20 {
        let refs = build_reference_system(seed, 5, 30, Lambda::half()).unwrap();
        let f = FactoredSuperposition::new(
            vec![q(1, 1), q(2, 3), q(0, 1), q(-1, 2), q(1, 1)],
            vec![q(1, 1), q(1, 1), q(3, 1), q(1, 5), q(-2, 1)],
        )
        .unwrap();
        let a = readout(&trace_superposition(&refs, &f, true).unwrap());
        let b = readout(&trace_superposition(&refs, &f, false).unwrap());
        assert_eq!(a[1..], b[1..]);
    }
}

#[test]
fn product_changes_only_at_own_factor_scps() {
    for seed in 0..30 {
        let n = 4;
        let refs = build_reference_system(seed, n, 20, Lambda::half()).unwrap();
        let w = ProductString::new(n, mix64(seed) & 0xf).unwrap();
        let tr = trace_product(&refs, &w, true).unwrap();
        let grid = *refs.grid();
        for t in 1..grid.total_ticks() {
            if tr.sample(t) != tr.sample(t - 1) {
                let id = StreamId::from_shift_index(grid.scp_of(t));
                let is_factor = match id.role {
                    inbl_core::Role::A => w.is_high(id.bit),
                    inbl_core::Role::B => !w.is_high(id.bit),
                };
                assert!(is_factor, "change at tick {t} attributed to non-factor {id}");
            }
        }
    }
}

#[test]
fn unshifted_superposition_constant_within_periods() {
    let refs = build_reference_system(4, 3, 50, Lambda::half()).unwrap();
    let tr = trace_superposition(&refs, &uniform_superposition(3).unwrap(), false).unwrap();
    for chunk in tr.samples().chunks(6) {
        assert!(chunk.iter().all(|s| *s == chunk[0]));
    }
    let shifted = trace_superposition(&refs, &uniform_superposition(3).unwrap(), true).unwrap();
    assert_eq!(shifted.samples().len(), 300);
}

#[test]
fn identification_is_sound_up_to_sixteen_bits() {
    for n in 1..=16 {
        for seed in 0..300u64 {
            let refs = build_reference_system(seed, n, 9, Lambda::half()).unwrap();
            let hidden = inbl_core::analysis::hidden_string(seed, n).unwrap();
            let wave = ProductWave::new(&refs, hidden, true).unwrap();
            let res = tsinbl_identify(&wave, &refs, 8).unwrap();
            for (r, l) in res.decided() {
                assert_eq!(*l, hidden.level(*r), "n={n} seed={seed} bit {r}");
            }
            if let Some(found) = res.product_string() {
                assert_eq!(found, hidden);
            }
            let mut parts: Vec<usize> = res.decided().keys().copied().chain(res.undecided()).collect();
            parts.sort();
            assert_eq!(parts, (1..=n).collect::<Vec<_>>());
        }
    }
}

#[test]
fn identification_materialized_and_streamed_agree() {
    let refs = build_reference_system(8, 7, 6, Lambda::half()).unwrap();
    let hidden: ProductString = "LHHLLHL".parse().unwrap();
    let wave = ProductWave::new(&refs, hidden, true).unwrap();
    let trace = wave.materialize();
    assert_eq!(tsinbl_identify(&wave, &refs, 5).unwrap(), tsinbl_identify(&trace, &refs, 5).unwrap());
}

#[test]
fn determinism_across_builds() {
    let a = build_reference_system(123, 9, 40, Lambda::half()).unwrap();
    let b = build_reference_system(123, 9, 40, Lambda::half()).unwrap();
    for (x, y) in a.streams().iter().zip(b.streams()) {
        assert_eq!(x, y);
    }
    let c = build_reference_system(124, 9, 40, Lambda::half()).unwrap();
    assert_ne!(a.streams()[0].signs(), c.streams()[0].signs());
    assert!(a.streams()[0].signs().iter().all(|s| matches!(s, Sign::Plus | Sign::Minus)));
}
