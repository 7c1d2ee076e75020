//! Software model of a high-speed DAQ serial link.
//!
//! Transmit path: payload → [`scramble`] → [`fec`] encode → [`interleave`] →
//! 120-bit [`frame`] → 40-bit words → serial bits ([`link`]). The receive path
//! runs the frame aligner, then undoes each stage. [`channel`] injects errors
//! and [`pipeline`] ties everything together for BER and throughput studies.

pub mod bits;
pub mod channel;
pub mod error;
pub mod fec;
pub mod frame;
pub mod interleave;
pub mod link;
pub mod pipeline;
pub mod scramble;

pub use error::{Error, Result};
