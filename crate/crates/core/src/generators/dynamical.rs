//! The bitwise dynamical PRNG.
//!
//! The logistic map is iterated under `gammas[0]` for `k_1` steps, then under
//! `gammas[1]` for `k_2` steps and so on, wrapping back to `gammas[0]` after
//! the last parameter. Each `k_i` is drawn fresh from the partition source
//! when the previous run ends, so the switching schedule never repeats with
//! the gamma cycle. Every iterate contributes its least significant bit.

use super::{draw_k, BitSource, PartitionLcg, SeedConfig, SeedError};
use crate::fxp::FxWord;
use crate::maps::logistic_step_raw;

/// Supplies the run lengths `k_i`.
pub trait PartitionSource: Clone {
    fn draw(&mut self, k_min: u32, k_max: u32) -> u32;
}

impl PartitionSource for PartitionLcg {
    #[inline]
    fn draw(&mut self, k_min: u32, k_max: u32) -> u32 {
        draw_k(self, k_min, k_max)
    }
}

#[derive(Debug, Clone)]
pub struct DynamicalGenerator<P: PartitionSource = PartitionLcg> {
    config: SeedConfig,
    gammas: Vec<u64>,
    word_length: u32,
    x: u64,
    gamma_index: usize,
    remaining: u32,
    partition: P,
    initial_partition: P,
    absorbed: bool,
}

impl DynamicalGenerator<PartitionLcg> {
    pub fn new(config: SeedConfig) -> Result<Self, SeedError> {
        config.validate()?;
        let lcg = PartitionLcg::new(config.partition_seed)?;
        Self::with_partition(config, lcg)
    }
}

impl<P: PartitionSource> DynamicalGenerator<P> {
    /// Builds a generator whose run lengths come from `partition` instead of
    /// the seeded LCG.
    pub fn with_partition(config: SeedConfig, partition: P) -> Result<Self, SeedError> {
        config.validate()?;
        let mut g = Self {
            gammas: config.gammas.iter().map(FxWord::raw).collect(),
            word_length: config.word_length,
            x: config.x0.raw(),
            gamma_index: 0,
            remaining: 0,
            initial_partition: partition.clone(),
            partition,
            absorbed: false,
            config,
        };
        g.remaining = g.partition.draw(g.config.k_min, g.config.k_max);
        Ok(g)
    }

    pub fn config(&self) -> &SeedConfig {
        &self.config
    }

    /// Index of the gamma the next iterate will use.
    pub fn gamma_index(&self) -> usize {
        self.gamma_index
    }

    /// Iterations left under the current gamma, including the next one.
    pub fn remaining(&self) -> u32 {
        self.remaining
    }

    /// Set once the state has been observed at zero. The generator does not
    /// intervene: zero is a fixed point of every gamma, so the output stays
    /// zero from then on.
    pub fn is_absorbed(&self) -> bool {
        self.absorbed
    }

    pub fn state(&self) -> FxWord {
        FxWord::from_raw(self.x, self.config.x0.format()).expect("state stays in range")
    }

    /// Advances one iterate and returns its raw value.
    #[inline]
    pub fn next_raw(&mut self) -> u64 {
        self.x = logistic_step_raw(self.x, self.gammas[self.gamma_index], self.word_length);
        self.remaining -= 1;
        if self.remaining == 0 {
            self.gamma_index += 1;
            if self.gamma_index == self.gammas.len() {
                self.gamma_index = 0;
            }
            self.remaining = self.partition.draw(self.config.k_min, self.config.k_max);
        }
        if self.x == 0 {
            self.absorbed = true;
        }
        self.x
    }

    pub fn next_element(&mut self) -> FxWord {
        let raw = self.next_raw();
        FxWord::from_raw(raw, self.config.x0.format()).expect("state stays in range")
    }
}

impl<P: PartitionSource> BitSource for DynamicalGenerator<P> {
    #[inline]
    fn next_bit(&mut self) -> bool {
        self.next_raw() & 1 == 1
    }

    fn reset(&mut self) {
        self.x = self.config.x0.raw();
        self.gamma_index = 0;
        self.absorbed = false;
        self.partition = self.initial_partition.clone();
        self.remaining = self.partition.draw(self.config.k_min, self.config.k_max);
    }

    fn absorbed(&self) -> bool {
        self.absorbed
    }
}
