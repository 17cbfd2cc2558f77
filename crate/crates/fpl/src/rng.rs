//! Deterministic, splittable random source.
//!
//! Built on counter-based ChaCha streams: a fixed seed yields a bit-identical
//! draw sequence on every run, and independent substreams can be handed to
//! parallel consumers without coordinating draw order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The default stream.
    pub fn rng(&self) -> ChaCha8Rng {
        self.stream(0)
    }

    /// Independent substream `id`; streams never overlap.
    pub fn stream(&self, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id);
        rng
    }

    /// Derived source for a named child component.
    pub fn split(&self, label: &str) -> RandomSource {
        // FNV-1a over the label, folded into the seed.
        let mut h: u64 = 0xcbf29ce484222325;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        RandomSource {
            seed: self.seed.wrapping_add(h).rotate_left(17) ^ h,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn identical_seed_identical_stream() {
        let a = RandomSource::new(42);
        let b = RandomSource::new(42);
        let xs: Vec<u64> = a.rng().sample_iter(rand::distributions::Standard).take(64).collect();
        let ys: Vec<u64> = b.rng().sample_iter(rand::distributions::Standard).take(64).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn streams_are_independent_of_draw_order() {
        let src = RandomSource::new(7);
        let mut s1 = src.stream(1);
        let mut s2 = src.stream(2);
        let a1: u64 = s1.gen();
        let a2: u64 = s2.gen();
        // recreate in the other order
        let mut t2 = src.stream(2);
        let mut t1 = src.stream(1);
        assert_eq!(a2, t2.gen::<u64>());
        assert_eq!(a1, t1.gen::<u64>());
    }

    #[test]
    fn split_changes_stream() {
        let src = RandomSource::new(3);
        assert_ne!(src.split("nn").seed(), src.seed());
        assert_ne!(src.split("nn").seed(), src.split("lfp").seed());
    }
}
