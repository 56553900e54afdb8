use core::fmt;

use crate::error::{Error, Result};
use crate::topology::MAX_WORD_SIZE;

/// A fixed-width memory word. Bit index 0 is the MSB.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitWord {
    width: u32,
    bits: u64,
}

/// All-ones mask for a `width`-bit word.
#[inline]
pub const fn word_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl BitWord {
    pub fn new(width: u32, value: u64) -> Result<Self> {
        if width == 0 || width > MAX_WORD_SIZE {
            return Err(Error::InvalidParams {
                what: "word size",
                value: width as usize,
            });
        }
        if value & !word_mask(width) != 0 {
            return Err(Error::ElementOutOfRange {
                value,
                word_size: width,
            });
        }
        Ok(BitWord { width, bits: value })
    }

    pub fn zero(width: u32) -> Result<Self> {
        Self::new(width, 0)
    }

    pub fn ones(width: u32) -> Result<Self> {
        Self::new(width, word_mask(width))
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn msb(&self) -> bool {
        self.bit(0)
    }

    /// Bit `index` counted from the MSB.
    #[inline]
    pub fn bit(&self, index: u32) -> bool {
        debug_assert!(index < self.width);
        (self.bits >> (self.width - 1 - index)) & 1 == 1
    }

    #[inline]
    pub fn set_msb(&mut self, bit: bool) {
        let top = 1u64 << (self.width - 1);
        if bit {
            self.bits |= top;
        } else {
            self.bits &= !top;
        }
    }

    /// One-bit rotation: the MSB wraps around to the LSB.
    #[inline]
    pub fn circular_left_shift(&mut self) {
        let msb = self.msb() as u64;
        self.bits = ((self.bits << 1) & word_mask(self.width)) | msb;
    }

    #[inline]
    pub fn rotated_left(mut self) -> Self {
        self.circular_left_shift();
        self
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BitWord({:0width$b})",
            self.bits,
            width = self.width as usize
        )
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.width as usize)
    }
}
