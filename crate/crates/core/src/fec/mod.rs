//! GF(2⁴) arithmetic and the BCH(15,7,2) code.

pub mod bch;
pub mod gf16;

pub use bch::{
    chien_search, decode, decode_fast, encode, locator, syndromes, BchParams, Codeword15,
    DecodeOutcome, DecodeStatus, Locator, Msg7, Syndromes, Uncorrectable,
};
pub use gf16::{gf_inv, gf_mul, GfElem};
