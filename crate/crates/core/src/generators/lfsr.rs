use super::{BitSource, SeedError};

/// Feedback taps of `x^32 + x^22 + x^2 + x + 1`.
pub const LFSR32_TAPS: [u32; 4] = [32, 22, 2, 1];

/// 32-stage Fibonacci LFSR.
///
/// Bit `i` of the register holds sequence element `a_{t+i}`; each step shifts
/// out bit 0 and feeds `a_{t+32} = a_{t+22} ^ a_{t+2} ^ a_{t+1} ^ a_t` into
/// bit 31.
#[derive(Debug, Clone)]
pub struct Lfsr32 {
    seed: u32,
    state: u32,
}

impl Lfsr32 {
    pub fn new(seed: u32) -> Result<Self, SeedError> {
        if seed == 0 {
            return Err(SeedError::LfsrZero);
        }
        Ok(Self { seed, state: seed })
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    #[inline]
    pub fn step(&mut self) -> bool {
        let s = self.state;
        let out = s & 1;
        let feedback = (s ^ (s >> 1) ^ (s >> 2) ^ (s >> 22)) & 1;
        self.state = (s >> 1) | (feedback << 31);
        out == 1
    }
}

impl BitSource for Lfsr32 {
    #[inline]
    fn next_bit(&mut self) -> bool {
        self.step()
    }

    fn reset(&mut self) {
        self.state = self.seed;
    }
}
