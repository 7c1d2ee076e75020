//! Gearbox (frame ↔ words ↔ serial bits) and the receive-side frame aligner.

mod aligner;
mod gearbox;

pub use aligner::{AlignedFrame, Aligner, AlignerPhase, LockStatus, CONFIRM_HEADERS, LOSS_OF_LOCK_MISSES};
pub use gearbox::{deserialize, frame_to_words, serialize, words_to_frame, Word40, WORDS_PER_FRAME, WORD_BITS};
