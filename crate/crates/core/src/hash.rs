//! Pairwise-independent hashing `x -> ((a·x + b) mod p) mod K`.

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HashFn {
    a: u64,
    b: u64,
    p: u64,
    range: u64,
}

impl HashFn {
    /// Builds a function from explicit coefficients. Panics unless `range ≥ 1` and `a, b < p`.
    pub fn from_parts(a: u64, b: u64, p: u64, range: u64) -> Self {
        assert!(range >= 1, "hash range must be positive");
        assert!(a < p && b < p, "coefficients must be below the modulus");
        HashFn { a, b, p, range }
    }

    /// Samples `a ∈ [1, p)`, `b ∈ [0, p)` with `p` the smallest prime above `universe`.
    pub fn sample<R: Rng + ?Sized>(universe: u64, range: u64, rng: &mut R) -> Self {
        assert!(universe >= 1 && range >= 1);
        let p = next_prime_above(universe);
        let a = rng.gen_range(1..p);
        let b = rng.gen_range(0..p);
        HashFn::from_parts(a, b, p, range)
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        let y = (self.a as u128 * x as u128 + self.b as u128) % self.p as u128;
        (y % self.range as u128) as u64
    }

    pub fn range(&self) -> u64 {
        self.range
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> (u64, u64) {
        (self.a, self.b)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::stream;

    #[test]
    fn direct_arithmetic() {
        assert_eq!(HashFn::from_parts(1, 0, 13, 4).eval(5), 1);
        let constant = HashFn::from_parts(0, 7, 13, 4);
        assert!((0..13).all(|x| constant.eval(x) == 3));
    }

    #[test]
    fn unit_range_maps_to_zero() {
        let h = HashFn::sample(1000, 1, &mut stream(&[3]));
        assert!((0..1000).all(|x| h.eval(x) == 0));
    }

    #[test]
    fn sampling_is_seed_deterministic_and_in_bounds() {
        let h1 = HashFn::sample(100, 7, &mut stream(&[9, 9]));
        let h2 = HashFn::sample(100, 7, &mut stream(&[9, 9]));
        assert_eq!(h1, h2);
        assert_eq!(h1.modulus(), 101);
        let (a, b) = h1.coefficients();
        assert!((1..101).contains(&a) && b < 101);
        assert!((0..100).all(|x| h1.eval(x) < 7 && h1.eval(x) == h1.eval(x)));
    }

    #[test]
    fn primes() {
        assert_eq!(next_prime_above(1), 2);
        assert_eq!(next_prime_above(12), 13);
        assert_eq!(next_prime_above(13), 17);
        assert_eq!(next_prime_above(4096), 4099);
    }

    #[test]
    fn large_inputs_do_not_overflow() {
        let p = next_prime_above(u32::MAX as u64);
        let h = HashFn::from_parts(p - 1, p - 1, p, 1 << 20);
        assert!(h.eval(u32::MAX as u64) < 1 << 20);
    }
}
