//! Property tests for the iteration map, the metric, the strategy
//! generators and the embedding pipeline.

use cihide::ci::{apply_ff, iterate, BitState, Negation, Strategy as CiStrategy};
use cihide::metric::{d_state, d_strategy};
use cihide::stego::{decode_media, detect, embed, encode_media, extract_lscs, CoverMedia, EmbedKey, Message, Mode, PgmImage};
use cihide::strategies::{cids_strategy, ciis_strategy, plcm, strategy_term, Fraction64, PlcmParams, UnitValue};
use proptest::prelude::*;

fn state(n: usize) -> impl Strategy<Value = BitState> {
    prop::collection::vec(any::<bool>(), n).prop_map(|b| BitState::from_bits(b).unwrap())
}

fn terms(n: usize, len: impl Into<prop::collection::SizeRange>) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=n, len)
}

fn plcm_params() -> impl Strategy<Value = PlcmParams> {
    (1u64..(1 << 63), 0usize..40).prop_map(|(p, d)| PlcmParams::new(Fraction64(p), d).unwrap())
}

fn state_and_terms() -> impl Strategy<Value = (BitState, Vec<usize>)> {
    (1usize..=12).prop_flat_map(|n| (state(n), terms(n, 0..40)))
}

proptest! {
    #[test]
    fn apply_ff_changes_only_cell_k((x, ts) in state_and_terms()) {
        for &k in &ts {
            let y = apply_ff(k, &x, &Negation).unwrap();
            let diff = x.differing_cells(&y).unwrap();
            prop_assert_eq!(diff, vec![k]);
        }
    }

    #[test]
    fn iterate_splits((x, ts) in state_and_terms(), cut in any::<prop::sample::Index>()) {
        let n = x.len();
        let s = CiStrategy::new(ts.clone(), n).unwrap();
        let a = cut.index(ts.len() + 1);
        let whole = iterate(&x, &s, &Negation, ts.len()).unwrap();
        let mid = iterate(&x, &s, &Negation, a).unwrap();
        let rest = s.shifted(a).unwrap();
        prop_assert_eq!(iterate(&mid, &rest, &Negation, ts.len() - a).unwrap(), whole);
    }

    #[test]
    fn even_visits_return_to_start((x, ts) in state_and_terms(), seed in any::<u64>()) {
        // Each term twice, in a shuffled order.
        let mut doubled: Vec<usize> = ts.iter().chain(&ts).copied().collect();
        let len = doubled.len();
        for i in (1..len).rev() {
            let j = (seed.wrapping_mul(i as u64 + 7).rotate_left(13) % (i as u64 + 1)) as usize;
            doubled.swap(i, j);
        }
        let s = CiStrategy::new(doubled, x.len()).unwrap();
        prop_assert_eq!(iterate(&x, &s, &Negation, len).unwrap(), x);
    }

    #[test]
    fn hamming_is_a_metric(n in 1usize..40, seed in any::<[u64; 3]>()) {
        let mk = |s: u64| BitState::from_bits((0..n).map(|i| (s.rotate_left(i as u32 * 7) ^ (i as u64)) & 1 == 1).collect::<Vec<_>>()).unwrap();
        let (a, b, c) = (mk(seed[0]), mk(seed[1]), mk(seed[2]));
        let ab = d_state(&a, &b).unwrap();
        prop_assert_eq!(ab, d_state(&b, &a).unwrap());
        prop_assert_eq!(d_state(&a, &a).unwrap(), 0);
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(d_state(&a, &c).unwrap() <= ab + d_state(&b, &c).unwrap());
        prop_assert!(ab <= n);
    }

    #[test]
    fn strategy_brackets_shrink((n, t1, t2) in (2usize..=32).prop_flat_map(|n| (Just(n), terms(n, 15), terms(n, 15)))) {
        let s1 = CiStrategy::new(t1, n).unwrap();
        let s2 = CiStrategy::new(t2, n).unwrap();
        let mut prev = d_strategy(&s1, &s2, 0).unwrap();
        for l in 1..=15 {
            let b = d_strategy(&s1, &s2, l).unwrap();
            let sym = d_strategy(&s2, &s1, l).unwrap();
            prop_assert_eq!(b, sym);
            // width * N * 10^L == N - 1, exactly.
            prop_assert_eq!(b.upper_num - b.lower_num, n as u128 - 1);
            // lower grows, upper shrinks, compared over a common denominator.
            prop_assert!(b.lower_num * prev.denom >= prev.lower_num * b.denom);
            prop_assert!(b.upper_num * prev.denom <= prev.upper_num * b.denom);
            prop_assert!(b.upper() <= (n as f64 - 1.0) / n as f64 + 1e-15);
            prev = b;
        }
    }

    #[test]
    fn plcm_stays_in_unit_interval(x in 0u128..=(1u128 << 64), params in plcm_params()) {
        let mut v = UnitValue::from_raw(x).unwrap();
        for _ in 0..64 {
            v = plcm(v, &params);
            prop_assert!(v.raw() <= 1u128 << 64);
        }
    }

    #[test]
    fn plcm_mirror_symmetry(x in 1u64.., params in plcm_params()) {
        let hi = UnitValue::from_raw((1u128 << 64) - x as u128).unwrap();
        let lo = UnitValue::from_raw(x as u128).unwrap();
        if hi.raw() > 1u128 << 63 {
            prop_assert_eq!(plcm(hi, &params), plcm(lo, &params));
        }
    }

    #[test]
    fn ciis_terms_in_range(m in any::<u64>(), k in any::<u64>(), params in plcm_params(), n in 1usize..300, len in 0usize..200) {
        let s = ciis_strategy(Fraction64(m), Fraction64(k), &params, n, len).unwrap();
        prop_assert_eq!(s.horizon(), len);
        prop_assert!(s.terms().iter().all(|&t| (1..=n).contains(&t)));
    }

    #[test]
    fn strategy_term_in_range(raw in 0u128..=(1u128 << 64), n in 1usize..100_000) {
        let t = strategy_term(UnitValue::from_raw(raw).unwrap(), n);
        prop_assert!((1..=n).contains(&t));
    }

    #[test]
    fn cids_reaches_two_outputs((x, extra) in (2usize..=12).prop_flat_map(|n| (state(n), 0usize..20))) {
        let n = x.len();
        let s = cids_strategy(&x, n + extra);
        let y = iterate(&x, &s, &Negation, n + extra).unwrap();
        prop_assert!(y.bits()[1..].iter().all(|&b| !b));
    }

    #[test]
    fn embed_touches_only_carrier_lsbs(
        pixels in prop::collection::vec(any::<u8>(), 1..200),
        m in any::<u64>(), k in any::<u64>(), iterations in 0usize..100,
        frac in 0.0f64..1.0, cids in any::<bool>(),
    ) {
        let n = 1 + ((pixels.len() - 1) as f64 * frac) as usize;
        let media = CoverMedia::Pgm(PgmImage::new(pixels.len(), 1, 255, pixels.clone()).unwrap());
        let key = EmbedKey::new(Fraction64(k), iterations, PlcmParams::default(), n).unwrap();
        let mode = if cids { Mode::Cids } else { Mode::Ciis };
        let marked = embed(&media, Message(Fraction64(m)), &key, mode).unwrap();
        let CoverMedia::Pgm(img) = &marked else { unreachable!() };
        for (i, (&a, &b)) in pixels.iter().zip(&img.pixels).enumerate() {
            let mask = if i < n { !1u8 } else { 0xff };
            prop_assert_eq!(a & mask, b & mask);
        }
        prop_assert_eq!(embed(&media, Message(Fraction64(m)), &key, mode).unwrap(), marked.clone());
        let d = detect(&media, &marked, Message(Fraction64(m)), &key, mode, 0).unwrap();
        prop_assert_eq!(d.hamming, 0);
    }

    #[test]
    fn media_encoding_roundtrips(bits in prop::collection::vec(any::<bool>(), 0..300), pixels in prop::collection::vec(any::<u8>(), 1..100)) {
        let raw = CoverMedia::RawBits(bits);
        prop_assert_eq!(decode_media(&encode_media(&raw)).unwrap(), raw);
        let pgm = CoverMedia::Pgm(PgmImage::new(1, pixels.len(), 255, pixels).unwrap());
        prop_assert_eq!(decode_media(&encode_media(&pgm)).unwrap(), pgm);
    }
}

#[test]
fn ciis_avalanche_on_single_bit_flips() {
    let cover = CoverMedia::RawBits((0..64).map(|i| i % 3 == 0).collect());
    let base_m = Fraction64(0x243f_6a88_85a3_08d3);
    let base_k = Fraction64(0x1319_8a2e_0370_7344);
    let expected = |m: Fraction64, k: Fraction64| -> Vec<BitState> {
        [10, 50, 200]
            .iter()
            .map(|&n| {
                let key = EmbedKey::new(k, n, PlcmParams::default(), 64).unwrap();
                extract_lscs(&embed(&cover, Message(m), &key, Mode::Ciis).unwrap(), 64).unwrap()
            })
            .collect()
    };
    let base = expected(base_m, base_k);
    for bit in 0..64 {
        assert_ne!(expected(Fraction64(base_m.0 ^ (1 << bit)), base_k), base, "message bit {bit}");
        assert_ne!(expected(base_m, Fraction64(base_k.0 ^ (1 << bit))), base, "key bit {bit}");
    }
}

fn wrong_key_hit_rate(vary_iterations: bool) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let trials = 20_000;
    let mut hits = 0;
    for _ in 0..trials {
        let cover = CoverMedia::RawBits((0..4).map(|_| rng.gen()).collect());
        let msg = Message(Fraction64(rng.gen()));
        let key = EmbedKey::new(Fraction64(rng.gen()), 40, PlcmParams::default(), 4).unwrap();
        let iterations = if vary_iterations { rng.gen_range(40..80) } else { key.iterations };
        let wrong = EmbedKey { k: Fraction64(rng.gen()), iterations, ..key };
        let marked = embed(&cover, msg, &key, Mode::Ciis).unwrap();
        if detect(&cover, &marked, msg, &wrong, Mode::Ciis, 0).unwrap().present {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

#[test]
fn wrong_key_with_known_iteration_count() {
    // Every step flips one bit, so the weight parity of Y is fixed by X and N:
    // a wrong K with the right N hits one of 2^(N-1) candidates, 1/8 for N = 4.
    let rate = wrong_key_hit_rate(false);
    assert!((rate - 0.125).abs() < 0.0117, "rate {rate}");
}

#[test]
fn wrong_key_and_iteration_count() {
    // With the iteration count secret as well, the rate drops to 2^-4.
    let rate = wrong_key_hit_rate(true);
    assert!((rate - 0.0625).abs() < 0.0086, "rate {rate}");
}

#[test]
fn unmarked_suspect_sits_near_half_distance() {
    let n = 256;
    let mut total = 0;
    let runs = 200;
    for r in 0..runs {
        let cover = CoverMedia::RawBits((0..n).map(|i| (i * 7 + r) % 5 < 2).collect());
        let key = EmbedKey::new(Fraction64(0x9e37_79b9_7f4a_7c15 ^ r as u64), 4096, PlcmParams::default(), n).unwrap();
        let d = detect(&cover, &cover, Message(Fraction64(r as u64 * 31)), &key, Mode::Ciis, n / 4 - 1).unwrap();
        assert!(!d.present, "run {r}: hamming {}", d.hamming);
        total += d.hamming;
    }
    let mean = total as f64 / runs as f64;
    assert!((mean - n as f64 / 2.0).abs() < 4.0, "mean hamming {mean}");
}
