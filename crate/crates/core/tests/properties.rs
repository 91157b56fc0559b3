use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use seqmerit::autocorr::*;
use seqmerit::designs::*;
use seqmerit::families::*;
use seqmerit::merit::*;
use seqmerit::quadrature::*;
use seqmerit::search::*;
use seqmerit::sequence::*;

fn random_binary(rng: &mut StdRng, max_len: usize) -> Sequence {
    let n = rng.gen_range(1..=max_len);
    let signs: Vec<i8> = (0..n).map(|_| if rng.gen() { 1 } else { -1 }).collect();
    Sequence::binary(&signs).unwrap()
}

fn random_roots(rng: &mut StdRng, max_len: usize) -> Sequence {
    let n = rng.gen_range(1..=max_len);
    let m = rng.gen_range(2..=12u32);
    let entries = (0..n)
        .map(|_| {
            let e = rng.gen_range(0..m);
            Complex64::from_polar(1.0, 2.0 * PI * f64::from(e) / f64::from(m))
        })
        .collect();
    Sequence::roots_of_unity(entries, m).unwrap()
}

#[test]
fn periodic_equals_aperiodic_plus_conjugate_wrap() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for i in 0..1000 {
        let s = if i % 2 == 0 {
            random_binary(&mut rng, 64)
        } else {
            random_roots(&mut rng, 64)
        };
        let n = s.len();
        let rho = aperiodic_autocorrelation(&s);
        let theta = periodic_autocorrelation(&s);
        assert!((rho[0] - theta[0]).norm() < 1e-9);
        assert!(rho[0].im.abs() < 1e-12 && rho[0].re >= 0.0);
        for t in 1..n {
            let wrapped = rho[t] + rho[n - t].conj();
            assert!((theta[t] - wrapped).norm() <= 1e-9, "n={n} t={t}");
        }
    }
}

#[test]
fn negative_lags_are_conjugates() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let s = random_roots(&mut rng, 40);
        let e = s.entries();
        let n = e.len();
        let rho = aperiodic_autocorrelation(&s);
        for t in 0..n {
            let negative: Complex64 = (0..n - t).map(|k| e[k + t] * e[k].conj()).sum();
            assert!((negative - rho[t].conj()).norm() < 1e-9);
        }
    }
}

#[test]
fn binary_autocorrelation_parity_and_range() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..500 {
        let signs = random_binary(&mut rng, 64).signs().unwrap();
        let n = signs.len() as i64;
        for (t, r) in aperiodic_binary(&signs).into_iter().enumerate() {
            let t = t as i64;
            assert!(r.abs() <= n - t);
            assert_eq!((r - (n - t)).rem_euclid(2), 0);
        }
    }
}

#[test]
fn spectrum_average_is_the_energy() {
    let mut rng = StdRng::seed_from_u64(13);
    for i in 0..300 {
        let s = if i % 2 == 0 {
            random_binary(&mut rng, 64)
        } else {
            random_roots(&mut rng, 64)
        };
        let m = 2 * s.len();
        let avg: f64 = (0..m)
            .map(|j| spectrum_at(&s, j as f64 / m as f64).unwrap())
            .sum::<f64>()
            / m as f64;
        let rho0 = aperiodic_autocorrelation(&s)[0].re;
        assert!((avg - rho0).abs() <= 1e-9 * rho0);
    }
}

#[test]
fn l4_routes_agree_and_merit_routes_agree() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..300 {
        let s = random_binary(&mut rng, 64);
        let discrete = l4_norm_fourth(&s);
        let integral = exact_l4_integral(&s);
        assert!((discrete - integral).abs() <= 1e-9 * discrete);
        if s.len() >= 2 {
            let f4 = merit_factor_discrete(&s).unwrap().to_f64();
            let f6 = merit_factor_analytic(&s, AnalyticRoute::Exact).unwrap();
            assert!((f4 - f6).abs() <= 1e-9 * f4);
        }
    }
}

#[test]
fn qmc_error_within_koksma_hlawka_bound() {
    let mut rng = StdRng::seed_from_u64(19);
    for count in [1usize, 10, 100, 1000, 10_000] {
        let nodes = golden_nodes(count).unwrap();
        for _ in 0..20 {
            let s = random_binary(&mut rng, 32);
            let q = qmc_l4_integral(&s, &nodes);
            let exact = exact_l4_integral(&s);
            assert!((q.value - exact).abs() <= q.error_bound, "N={count} s={s}");
            assert!((q.value - exact).abs() <= q.error_bound_bernstein);
        }
    }
}

#[test]
fn qmc_merit_converges_for_short_sequences() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..10 {
        let s = random_binary(&mut rng, 32);
        if s.len() < 2 {
            continue;
        }
        let exact = merit_factor_analytic(&s, AnalyticRoute::Exact).unwrap();
        let qmc = merit_factor_analytic(&s, AnalyticRoute::Qmc(100_000)).unwrap();
        assert!((qmc - exact).abs() <= 1e-2 * exact, "s={s}");
    }
}

#[test]
fn closed_forms_for_all_ones_and_alternating() {
    for n in 2..=64usize {
        let min = minimal_merit_factor(n).unwrap();
        let ones = all_ones(n).unwrap();
        let alt = alternating(n).unwrap();
        assert_eq!(
            merit_factor_discrete(&ones).unwrap().as_rational(),
            Some(min)
        );
        assert_eq!(
            merit_factor_discrete(&alt).unwrap().as_rational(),
            Some(min)
        );
        let n = n as i64;
        assert_eq!(
            l4_norm_fourth_binary(&ones.signs().unwrap()) * 3,
            n * (2 * n * n + 1)
        );
    }
}

#[test]
fn barker_parity_pattern_and_predictions() {
    for n in BARKER_LENGTHS {
        let signs = barker(n).unwrap().signs().unwrap();
        let rho = aperiodic_binary(&signs);
        for (k, r) in rho.iter().enumerate().skip(1) {
            if (n - k) % 2 == 0 {
                assert_eq!(*r, 0, "n={n} k={k}");
            } else {
                assert_eq!(r.abs(), 1, "n={n} k={k}");
            }
        }
        assert_eq!(
            l4_norm_fourth_binary(&signs),
            barker_l4_prediction(n).unwrap()
        );
        assert_eq!(
            merit_factor_binary(&signs).unwrap(),
            barker_merit_prediction(n).unwrap()
        );
        // Barker L4 deviates from n^2 by exactly n or n - 1.
        let dev = l4_norm_fourth_binary(&signs) - (n * n) as i64;
        assert!(dev == n as i64 || dev == n as i64 - 1);
    }
}

#[test]
fn legendre_properties() {
    for p in (5..=997).filter(|&p| is_prime(p)) {
        let s = legendre(p).unwrap();
        let signs = s.signs().unwrap();
        let pf = p as f64;
        assert!(max_sidelobe_binary(&signs).unwrap() as f64 <= 3.0 * pf.sqrt() * pf.ln());
        if p % 4 == 3 {
            assert_eq!(two_level_gamma(&s).unwrap(), -1, "p={p}");
            let support: Vec<usize> = (0..p).filter(|&i| signs[i] == 1).collect();
            let ds = verify_difference_set(&support, p).unwrap();
            assert_eq!((ds.k, ds.lambda), (p.div_ceil(2), (p + 1) / 4));
        }
    }
}

#[test]
fn turyn_sequences_are_perfect() {
    for n in (3..=101).step_by(2) {
        let s = turyn_perfect(n).unwrap();
        assert_eq!(s.alphabet(), Alphabet::RootsOfUnity(n as u32));
        let theta = periodic_autocorrelation(&s);
        assert!(theta[1..].iter().all(|t| t.norm() <= 1e-9 * n as f64));
        assert!(is_perfect(&s));
    }
}

#[test]
fn chirp_l4_excess_shrinks() {
    let excess: Vec<f64> = [8usize, 16, 32, 64, 128]
        .iter()
        .map(|&n| {
            let nf = n as f64;
            (l4_norm_fourth(&chirp(n).unwrap()) - nf * nf).abs() / (nf * nf)
        })
        .collect();
    assert!(excess[1] <= 0.25);
    assert!(excess.windows(2).all(|w| w[1] < w[0]), "{excess:?}");
}

#[test]
fn design_gammas() {
    let sets: [(&[usize], usize); 5] = [
        (&[1, 2, 4], 7),
        (&[0, 1, 2, 4], 7),
        (&[1, 3, 4, 5, 9], 11),
        (&[0, 1, 3, 9], 13),
        (&[2, 4, 5, 6, 7, 8, 10, 11, 12], 13),
    ];
    let mut seen = BTreeSet::new();
    for (members, v) in sets {
        let ds = verify_difference_set(members, v).unwrap();
        assert!(ds.counting_identity_holds());
        let gamma = two_level_gamma(&characteristic_sequence(&ds)).unwrap();
        assert_eq!(gamma, v as i64 - 4 * (ds.k as i64 - ds.lambda as i64));
        seen.insert((ds.v, ds.k, ds.lambda));
    }
    let expected: BTreeSet<_> = [(7, 3, 1), (7, 4, 2), (11, 5, 2), (13, 4, 1), (13, 9, 6)]
        .into_iter()
        .collect();
    assert_eq!(seen, expected);
}

#[test]
fn perfect_iff_gamma_zero() {
    for n in 2..=12usize {
        for bits in 0u32..1 << n {
            let signs: Vec<i8> = (0..n)
                .map(|i| if bits >> i & 1 == 0 { 1 } else { -1 })
                .collect();
            let s = Sequence::binary(&signs).unwrap();
            let gamma_zero = matches!(two_level_gamma(&s), Ok(0));
            assert_eq!(is_perfect(&s), gamma_zero);
            assert_eq!(circulant_hadamard_check(&s).unwrap(), gamma_zero);
        }
    }
}

#[test]
fn no_perfect_binary_rows_of_length_8_12_16() {
    for n in [8, 12, 16] {
        assert!(hadamard_scan(n).unwrap().perfect_rows.is_empty(), "n={n}");
    }
}

#[test]
fn survivors_closed_monotone_and_bounded() {
    for n in 2..=12usize {
        let mut previous = 0;
        for c in 0..=3i64 {
            let out =
                enumerate_bounded(&SearchSpec::new(n, c as f64, SearchMode::Enumerate)).unwrap();
            assert!(out.count >= previous);
            previous = out.count;
            let set: BTreeSet<Vec<i8>> = out.sequences.iter().cloned().collect();
            for s in &set {
                for g in SymmetryElement::all() {
                    assert!(set.contains(&g.apply_to_signs(s)));
                }
                if c > 0 {
                    let f = merit_factor_binary(s).unwrap();
                    assert!(f >= merit_lower_bound_exact(n, c).unwrap());
                }
            }
            let reduced = enumerate_bounded(
                &SearchSpec::new(n, c as f64, SearchMode::Enumerate).with_symmetry(true),
            )
            .unwrap();
            assert_eq!(reduced.count, out.count);
            let total: usize = reduced.orbit_sizes.iter().sum();
            assert_eq!(total as u64, out.count);
        }
    }
}

fn binary_strategy() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(
        prop::bool::ANY.prop_map(|b| if b { 1i8 } else { -1 }),
        2..48,
    )
}

proptest! {
    #[test]
    fn factor_two_weyl_bound_holds_on_kronecker_sets(alpha in 0.01f64..10.0, count in 1usize..2000) {
        prop_assume!(alpha.fract() != 0.0);
        prop_assert!(weyl_sum_check(&kronecker_nodes(alpha, count).unwrap()).holds);
    }

    #[test]
    fn symmetries_preserve_max_sidelobe(signs in binary_strategy()) {
        let base = max_sidelobe_binary(&signs).unwrap();
        for g in SymmetryElement::all() {
            prop_assert_eq!(max_sidelobe_binary(&g.apply_to_signs(&signs)).unwrap(), base);
        }
    }

    #[test]
    fn alternation_flips_odd_lags(signs in binary_strategy()) {
        let alt = SymmetryElement { alternate: true, ..Default::default() };
        let rho = aperiodic_binary(&signs);
        let rho_alt = aperiodic_binary(&alt.apply_to_signs(&signs));
        for t in 0..signs.len() {
            let sign = if t % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(rho_alt[t], sign * rho[t]);
        }
    }

    #[test]
    fn merit_bound_holds_for_actual_max_sidelobe(signs in binary_strategy()) {
        let c = max_sidelobe_binary(&signs).unwrap();
        let f = merit_factor_binary(&signs).unwrap();
        prop_assert!(f >= merit_lower_bound_exact(signs.len(), c).unwrap());
        prop_assert!(f >= minimal_merit_factor(signs.len()).unwrap());
    }

    #[test]
    fn l4_identity(signs in binary_strategy()) {
        let n = signs.len() as i64;
        let s = Sequence::binary(&signs).unwrap();
        prop_assert_eq!(l4_norm_fourth_binary(&signs), n * n + sidelobe_energy_binary(&signs));
        prop_assert_eq!(l4_norm_fourth(&s), l4_norm_fourth_binary(&signs) as f64);
        let f = merit_factor_binary(&signs).unwrap();
        prop_assert_eq!(f, Ratio::new(n * n, sidelobe_energy_binary(&signs)));
    }

    #[test]
    fn koksma_weyl_bound_and_large_sieve_hold(points in prop::collection::btree_set(0u32..1_000_000, 1..64),
                                 signs in binary_strategy()) {
        let nodes = NodeSet::explicit(points.iter().map(|&p| f64::from(p) / 1e6).collect()).unwrap();
        prop_assert!(weyl_sum_check(&nodes).holds_koksma);
        let a = Sequence::binary(&signs).unwrap();
        prop_assert!(large_sieve_check(&a, &nodes).holds);
    }
}
