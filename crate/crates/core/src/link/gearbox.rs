use crate::bits;
use crate::frame::{Frame120, FrameMode};
use crate::interleave::FRAME_BITS;

pub const WORD_BITS: usize = 40;
pub const WORDS_PER_FRAME: usize = FRAME_BITS / WORD_BITS;

const WORD_MASK: u64 = (1 << WORD_BITS) - 1;

/// One 40-bit gearbox word, MSB = first bit on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word40(u64);

impl Word40 {
    pub fn new(bits: u64) -> Word40 {
        assert!(bits >> WORD_BITS == 0, "word exceeds 40 bits: {bits:#x}");
        Word40(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }
}

/// Word 0 = frame bits 0–39, word 1 = 40–79, word 2 = 80–119.
pub fn frame_to_words(f: &Frame120) -> [Word40; WORDS_PER_FRAME] {
    std::array::from_fn(|k| Word40((f.bits >> (WORD_BITS * (WORDS_PER_FRAME - 1 - k))) as u64 & WORD_MASK))
}

pub fn words_to_frame(w: &[Word40; WORDS_PER_FRAME], mode: FrameMode) -> Frame120 {
    let bits = w.iter().fold(0u128, |acc, w| acc << WORD_BITS | w.0 as u128);
    Frame120 { bits, mode }
}

/// Serializes words MSB-first in order.
pub fn serialize(words: &[Word40]) -> Vec<bool> {
    let mut out = Vec::with_capacity(words.len() * WORD_BITS);
    for w in words {
        bits::push_bits(&mut out, w.0 as u128, WORD_BITS);
    }
    out
}

/// Inverse of [`serialize`]; a trailing partial word is dropped.
pub fn deserialize(stream: &[bool]) -> Vec<Word40> {
    stream.chunks_exact(WORD_BITS).map(|c| Word40(bits::from_bits(c) as u64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{FrameCodec, StandardPayload};
    use proptest::prelude::*;

    #[test]
    fn all_ones_frame() {
        let f = Frame120 { bits: (1 << 120) - 1, mode: FrameMode::Standard };
        assert_eq!(frame_to_words(&f), [Word40::new(WORD_MASK); 3]);
    }

    #[test]
    fn golden_frame_words() {
        let f = FrameCodec::default().build_standard(&StandardPayload::default());
        let hex = f.to_hex();
        let w = frame_to_words(&f);
        for (k, word) in w.iter().enumerate() {
            assert_eq!(format!("{:010x}", word.bits()), hex[10 * k..10 * k + 10]);
        }
    }

    #[test]
    fn serialize_basics() {
        assert!(serialize(&[]).is_empty());
        assert!(deserialize(&[]).is_empty());
        let w = [Word40::new(0x80_0000_0001)];
        let s = serialize(&w);
        assert_eq!(s.len(), 40);
        assert!(s[0] && s[39] && !s[1]);
        assert_eq!(deserialize(&s), w);
        assert_eq!(deserialize(&s[..39]), vec![]);
    }

    proptest! {
        #[test]
        fn words_round_trip(bits in any::<u128>()) {
            let f = Frame120 { bits: bits & ((1 << 120) - 1), mode: FrameMode::NoFec };
            prop_assert_eq!(words_to_frame(&frame_to_words(&f), FrameMode::NoFec), f);
        }

        #[test]
        fn stream_round_trip(raw in proptest::collection::vec(0u64..(1 << 40), 0..20)) {
            let words: Vec<Word40> = raw.into_iter().map(Word40::new).collect();
            let s = serialize(&words);
            prop_assert_eq!(s.len(), 40 * words.len());
            prop_assert_eq!(deserialize(&s), words);
        }
    }
}
