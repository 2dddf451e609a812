use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qpad::gf2::{find_irreducible, BitString};
use qpad::pauli::{commute_sign, pauli_dense, pauli_mul, purity_via_pauli, PauliOp};
use qpad::qcore::{purity, random_mixed_density, random_pure_density_dim, trace_distance, DensityMatrix};
use qpad::schemes::{
    core_channel_purity, embed_qubits, scheme_a_channel, scheme_a_decrypt, scheme_a_encrypt, scheme_b_channel,
    scheme_b_decrypt, scheme_b_encrypt, scheme_c_core_channel, scheme_c_decrypt, scheme_c_encrypt, BoundMode, Key,
    SchemeAConfig, SchemeBConfig, SchemeCConfig,
};
use qpad::smallbias::{aghp_set, certify_bias, SmallBiasSet};

fn pauli(n: usize) -> impl Strategy<Value = PauliOp> {
    (0..1u64 << n, 0..1u64 << n, prop::bool::ANY).prop_map(move |(u, v, neg)| {
        PauliOp::new(BitString::new(n, u).unwrap(), BitString::new(n, v).unwrap(), if neg { -1 } else { 1 }).unwrap()
    })
}

fn pauli_triple() -> impl Strategy<Value = (PauliOp, PauliOp, PauliOp)> {
    (1usize..=4).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(m in 1u32..=16, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = find_irreducible(m).unwrap();
        let mask = f.element_mask();
        let (a, b, c) = (a & mask, b & mask, c & mask);
        prop_assert_eq!(f.mul_raw(f.mul_raw(a, b), c), f.mul_raw(a, f.mul_raw(b, c)));
        prop_assert_eq!(f.mul_raw(a, b ^ c), f.mul_raw(a, b) ^ f.mul_raw(a, c));
        prop_assert_eq!(f.mul_raw(a, b), f.mul_raw(b, a));
        // a^(2^m) = a in GF(2^m)
        prop_assert_eq!(f.pow_raw(a, 1u64 << m), a);
    }

    #[test]
    fn pauli_mul_is_associative((p, q, r) in pauli_triple()) {
        let left = pauli_mul(&pauli_mul(&p, &q).unwrap(), &r).unwrap();
        let right = pauli_mul(&p, &pauli_mul(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commute_sign_matches_products((p, q, _) in pauli_triple()) {
        let pq = pauli_dense(&pauli_mul(&p, &q).unwrap()).unwrap();
        let qp = pauli_dense(&pauli_mul(&q, &p).unwrap()).unwrap();
        let s = commute_sign(&p, &q).unwrap() as f64;
        prop_assert!(pq.max_abs_diff(&qp.scale_real(s)).unwrap() < 1e-12);
    }

    #[test]
    fn character_sums_match_definition(m in 1usize..=10, points in prop::collection::vec(any::<u64>(), 1..40)) {
        let points: Vec<u64> = points.into_iter().map(|p| p & ((1 << m) - 1)).collect();
        let set = SmallBiasSet::from_points(m, points.clone()).unwrap();
        let sums = set.character_sums().unwrap();
        for (alpha, s) in sums.iter().enumerate() {
            let direct: i64 = points.iter().map(|&x| if (alpha as u64 & x).count_ones().is_multiple_of(2) { 1 } else { -1 }).sum();
            prop_assert_eq!(*s, direct);
        }
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), n in 1usize..=3) {
        let a = random_mixed_density(n, 2, seed).unwrap();
        let b = random_mixed_density(n, 1, seed ^ 1).unwrap();
        let c = random_mixed_density(n, 3, seed ^ 2).unwrap();
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-10);
        prop_assert!(ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + 1e-10);
        prop_assert!((0.0..=2.0 + 1e-10).contains(&ab));
        prop_assert!((purity_via_pauli(&a).unwrap() - purity(&a)).abs() < 1e-10);
    }

    #[test]
    fn scheme_a_bound_on_random_sets(seed in any::<u64>(), n in 1usize..=3, size in 1usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..size).map(|_| rand::Rng::random_range(&mut rng, 0..1u64 << (2 * n))).collect();
        let cfg = SchemeAConfig::new(n, SmallBiasSet::from_points(2 * n, points).unwrap(), 1.0, BoundMode::Tight).unwrap();
        let rho = random_mixed_density(n, 2, seed).unwrap();
        let out = scheme_a_channel(&cfg, &rho).unwrap();
        let d = (1usize << n) as f64;
        let delta = cfg.certified_bias();
        prop_assert!(purity(&out) <= (1.0 + delta * delta * d * purity(&rho)) / d + 1e-10);
        let dist = trace_distance(&out, &DensityMatrix::maximally_mixed(1 << n)).unwrap();
        prop_assert!(dist <= delta * d.sqrt() + 1e-8);
    }

    #[test]
    fn scheme_round_trips(seed in any::<u64>(), n in 1usize..=3, index in any::<usize>(), kappa in any::<u64>(), a in any::<u64>()) {
        let rho = random_mixed_density(n, 2, seed).unwrap();

        let cfg = SchemeAConfig::new(n, aghp_set(2 * n, 3).unwrap(), 1.0, BoundMode::Tight).unwrap();
        let key = Key::A { index: index % cfg.key_count() };
        let back = scheme_a_decrypt(&cfg, &key, &scheme_a_encrypt(&cfg, &key, &rho).unwrap()).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()).unwrap() < 1e-12);

        let cfg = SchemeBConfig::new(n, n, 1.0, BoundMode::Tight).unwrap();
        let key = Key::B { kappa: kappa % cfg.key_count() };
        let back = scheme_b_decrypt(&cfg, &key, &scheme_b_encrypt(&cfg, &key, &rho, seed).unwrap()).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()).unwrap() < 1e-12);

        let bits = SchemeCConfig::phase_bits(qpad::pauli::smallest_odd_prime_at_least(1 << n) as usize);
        let cfg = SchemeCConfig::new(n, aghp_set(bits, 3).unwrap(), 1.0).unwrap();
        let key = Key::C { a: a % cfg.d() as u64, index: index % cfg.set().len() };
        let embedded = embed_qubits(&rho, cfg.d()).unwrap();
        let back = scheme_c_decrypt(&cfg, &key, &scheme_c_encrypt(&cfg, &key, &embedded).unwrap()).unwrap();
        prop_assert!(back.matrix().max_abs_diff(embedded.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn core_channel_purity_formula(seed in any::<u64>(), d in prop::sample::select(vec![3usize, 5, 7, 11, 13])) {
        let rho = random_pure_density_dim(d, seed).unwrap();
        let out = scheme_c_core_channel(d, &rho).unwrap();
        prop_assert!((purity(&out) - core_channel_purity(&rho)).abs() < 1e-10);
        prop_assert!(purity(&out) <= (1.0 + purity(&rho)) / d as f64 + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cq_purity_is_mean_block_purity(seed in any::<u64>(), n in 1usize..=2, k in 1usize..=4) {
        let k = k.min(2 * n);
        let cfg = SchemeBConfig::new(n, k, 1.0, BoundMode::Tight).unwrap();
        let cq = scheme_b_channel(&cfg, &random_mixed_density(n, 2, seed).unwrap()).unwrap();
        let tags = cq.branches().len() as f64;
        let mean = cq.branches().iter().map(|b| purity(&b.state)).sum::<f64>() / tags;
        prop_assert!((cq.purity() - mean / tags).abs() < 1e-12);
        prop_assert!((purity(&cq.materialize().unwrap()) - cq.purity()).abs() < 1e-12);
        prop_assert!(cq.distance_from_uniform().unwrap() <= cfg.distance_bound() + 1e-8);
    }

    #[test]
    fn aghp_meets_its_claim(n_out in 1usize..=12, m in 1u32..=6) {
        let set = aghp_set(n_out, m).unwrap();
        prop_assert!(certify_bias(&set).unwrap().max_bias <= set.claimed_bias());
    }
}
