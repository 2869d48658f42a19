//! Seedable stream-split RNG and exact Bernoulli trials.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// ChaCha20 keyed by a 64-bit seed, with an independent stream per id.
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha20Rng);

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut r = ChaCha20Rng::seed_from_u64(seed);
        r.set_stream(stream);
        RngStream(r)
    }

    /// Uniform integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u128) -> u128 {
        debug_assert!(n > 0);
        self.0.gen_range(0..n)
    }

    pub fn below_usize(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    /// True with probability exactly `num/den` (clamped to [0,1]).
    pub fn bernoulli_u128(&mut self, num: u128, den: u128) -> bool {
        assert!(den > 0);
        if num >= den {
            return true;
        }
        if num == 0 {
            return false;
        }
        self.bernoulli_big(BigUint::from(num), BigUint::from(den))
    }

    /// True with probability exactly `p`; `p` outside [0,1] is clamped.
    pub fn bernoulli_rational(&mut self, p: &BigRational) -> bool {
        if !p.is_positive() {
            return false;
        }
        if p.numer() >= p.denom() {
            return true;
        }
        let a = p.numer().magnitude().clone();
        let b = p.denom().magnitude().clone();
        self.bernoulli_big(a, b)
    }

    // Compares a uniform u in [0,1) against a/b one 64-bit digit at a time.
    fn bernoulli_big(&mut self, mut a: BigUint, b: BigUint) -> bool {
        loop {
            if a.is_zero() {
                return false;
            }
            let (q, r) = (a << 64u32).div_rem(&b);
            let q: u64 = q.try_into().expect("digit fits in 64 bits");
            let x = self.0.next_u64();
            if x < q {
                return true;
            }
            if x > q {
                return false;
            }
            a = r;
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = RngStream::new(7, 0);
        let mut b = RngStream::new(7, 0);
        let mut c = RngStream::new(7, 1);
        let xa: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..4).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn bernoulli_edges() {
        let mut r = RngStream::new(1, 0);
        for _ in 0..100 {
            assert!(r.bernoulli_u128(5, 5));
            assert!(!r.bernoulli_u128(0, 5));
            let neg = BigRational::new(BigInt::from(-1), BigInt::from(3));
            assert!(!r.bernoulli_rational(&neg));
        }
    }

    #[test]
    fn bernoulli_frequency() {
        let mut r = RngStream::new(3, 0);
        let n = 200_000;
        let hits = (0..n).filter(|_| r.bernoulli_u128(1, 3)).count() as f64;
        let p = hits / n as f64;
        assert!((p - 1.0 / 3.0).abs() < 0.005, "{p}");
        // a probability whose binary expansion needs more than one 64-bit digit
        let tiny = BigRational::new(BigInt::from(1), BigInt::from(3u8) * (BigInt::from(1) << 70));
        assert!((0..1000).all(|_| !r.bernoulli_rational(&tiny)));
    }
}
