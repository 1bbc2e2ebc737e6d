use super::{BitSource, SeedError};
use crate::fxp::FxWord;
use crate::maps::{logistic_step_raw, LogisticMap};

/// Single-parameter logistic map emitting the LSB of every iterate.
#[derive(Debug, Clone)]
pub struct RawLogistic {
    map: LogisticMap,
    x0: FxWord,
    x: u64,
}

impl RawLogistic {
    /// The parameter is not range-checked: the raw map is also used to
    /// study non-chaotic parameters.
    pub fn new(x0: FxWord, gamma: FxWord) -> Result<Self, SeedError> {
        if x0.format().word_length() != gamma.format().word_length() {
            return Err(SeedError::Field {
                field: "gamma",
                reason: "word length differs from x0".into(),
            });
        }
        if x0.is_zero() {
            return Err(SeedError::X0Zero);
        }
        Ok(Self {
            map: LogisticMap::new(gamma),
            x0,
            x: x0.raw(),
        })
    }

    pub fn state(&self) -> FxWord {
        FxWord::from_raw(self.x, self.x0.format()).expect("state stays in range")
    }

    /// True once the orbit has fallen into the zero fixed point.
    pub fn is_absorbed(&self) -> bool {
        self.x == 0
    }

    #[inline]
    pub fn next_raw(&mut self) -> u64 {
        self.x = logistic_step_raw(self.x, self.map.gamma().raw(), self.map.word_length());
        self.x
    }
}

impl BitSource for RawLogistic {
    #[inline]
    fn next_bit(&mut self) -> bool {
        self.next_raw() & 1 == 1
    }

    fn reset(&mut self) {
        self.x = self.x0.raw();
    }

    fn absorbed(&self) -> bool {
        self.is_absorbed()
    }
}
