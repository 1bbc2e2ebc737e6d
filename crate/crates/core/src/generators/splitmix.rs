use super::BitSource;

/// Vigna's splitmix64 sequence.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Strong reference source: splitmix64 output, 64 bits per draw, most
/// significant bit first. Used to calibrate the test suite.
#[derive(Debug, Clone)]
pub struct SplitMixBits {
    seed: u64,
    inner: SplitMix64,
    buffer: u64,
    left: u32,
}

impl SplitMixBits {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: SplitMix64::new(seed),
            buffer: 0,
            left: 0,
        }
    }
}

impl BitSource for SplitMixBits {
    #[inline]
    fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.buffer = self.inner.next_u64();
            self.left = 64;
        }
        self.left -= 1;
        (self.buffer >> self.left) & 1 == 1
    }

    fn reset(&mut self) {
        *self = Self::new(self.seed);
    }
}
