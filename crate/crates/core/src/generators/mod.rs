//! Bit generators: the dynamical logistic PRNG, its baselines, and the
//! seed plumbing they share.

mod dynamical;
mod lcg;
mod lfsr;
mod logistic;
mod seed;
mod spec;
mod splitmix;

pub use dynamical::{DynamicalGenerator, PartitionSource};
pub use lcg::{draw_k, GlibcExtraction, GlibcLcg, PartitionLcg, LCG_INCREMENT, LCG_MODULUS, LCG_MULTIPLIER};
pub use lfsr::{Lfsr32, LFSR32_TAPS};
pub use logistic::RawLogistic;
pub use seed::{
    derive_seed, SeedConfig, SeedError, SeedFile, DEFAULT_GAMMA_COUNT, DEFAULT_K_MAX, DEFAULT_K_MIN,
    REFERENCE_MASTER_SEED,
};
pub use spec::{GeneratorKind, GeneratorSpec};
pub use splitmix::{SplitMix64, SplitMixBits};

use crate::bits::BitStream;

/// Anything that produces a deterministic bit sequence from a seed.
pub trait BitSource {
    fn next_bit(&mut self) -> bool;

    /// Rewinds to the state the source was seeded with.
    fn reset(&mut self);

    /// Whether the state has ever reached the zero fixed point.
    fn absorbed(&self) -> bool {
        false
    }
}

impl<T: BitSource + ?Sized> BitSource for Box<T> {
    fn next_bit(&mut self) -> bool {
        (**self).next_bit()
    }

    fn reset(&mut self) {
        (**self).reset()
    }

    fn absorbed(&self) -> bool {
        (**self).absorbed()
    }
}

/// Draws exactly `count` bits in generation order.
pub fn fill_bits<S: BitSource + ?Sized>(source: &mut S, count: usize) -> BitStream {
    let mut out = BitStream::with_capacity(count);
    for _ in 0..count {
        out.push(source.next_bit());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_is_a_stream() {
        let cfg = derive_seed(REFERENCE_MASTER_SEED, 32, 8, 9, 11).unwrap();
        let mut a = DynamicalGenerator::new(cfg.clone()).unwrap();
        let whole = fill_bits(&mut a, 300);
        a.reset();
        let mut first = fill_bits(&mut a, 120);
        let second = fill_bits(&mut a, 180);
        first.extend_from(&second);
        assert_eq!(first, whole);

        a.reset();
        let one = fill_bits(&mut a, 1);
        a.reset();
        assert_eq!(one.get(0), a.next_bit());
    }
}
