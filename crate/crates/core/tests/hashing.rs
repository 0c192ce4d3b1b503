use pram_cc::hash::{next_prime_above, HashFn};
use pram_cc::seeds;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn pairwise_collisions_stay_under_twice_uniform() {
    const PAIRS: u32 = 100_000;
    let mut rng = seeds::stream(&[7, 7]);
    for range in [4u64, 16, 64] {
        let mut hits = 0u32;
        for _ in 0..PAIRS {
            let h = HashFn::sample(1000, range, &mut rng);
            let x = rng.gen_range(0..1000u64);
            let y = (x + rng.gen_range(1..1000u64)) % 1000;
            hits += u32::from(h.eval(x) == h.eval(y));
        }
        let bound = 2.0 / range as f64;
        let sigma = (bound * (1.0 - bound) / f64::from(PAIRS)).sqrt();
        let fraction = f64::from(hits) / f64::from(PAIRS);
        assert!(
            fraction <= bound + 3.0 * sigma,
            "K={range}: {fraction} > {bound}"
        );
    }
}

#[test]
fn sampled_modulus_is_the_next_prime() {
    let h = HashFn::sample(100, 8, &mut seeds::stream(&[1]));
    assert_eq!(h.modulus(), 101);
    assert_eq!(next_prime_above(101), 103);
}

proptest! {
    #[test]
    fn evaluation_is_pure_and_in_range(seed in any::<u64>(), universe in 1u64..1_000_000, range in 1u64..1000,
                                       xs in prop::collection::vec(any::<u64>(), 1..20)) {
        let h = HashFn::sample(universe, range, &mut seeds::stream(&[seed]));
        prop_assert_eq!(h, HashFn::sample(universe, range, &mut seeds::stream(&[seed])));
        let (a, b) = h.coefficients();
        prop_assert!(a >= 1 && a < h.modulus() && b < h.modulus());
        for x in xs {
            prop_assert!(h.eval(x) < range);
            prop_assert_eq!(h.eval(x), h.eval(x));
        }
    }
}
