//! Collaborative decoding of interleaved Reed-Solomon codes.
//!
//! The decoder forms the syndrome matrix of all interleaved columns at once
//! and extracts the error locator with a single Gauss-Jordan elimination,
//! correcting up to `min(l, n - k - 1)` corrupted rows when the error rows
//! are linearly independent. Alongside it:
//!
//! * [`gf`]: GF(2^w) arithmetic with log/antilog tables.
//! * [`rs_code`]: extended, cyclic and shortened RS codes.
//! * [`irs`]: interleaved words, row-error patterns, matrix text format.
//! * [`collab`]: the collaborative decoder and its incremental variant.
//! * [`indep`]: column-by-column bounded-distance baseline.
//! * [`bounds`]: failure and miscorrection bounds and FER predictions.
//! * [`sim`]: seeded Monte-Carlo harness.

pub mod bounds;
pub mod collab;
pub mod error;
pub mod gf;
pub mod indep;
pub mod irs;
pub mod matrix;
pub mod rs_code;
pub mod selftest;
pub mod sim;

pub use bounds::{BoundValue, BoundsInput};
pub use collab::{decode, decode_incremental, DecodeOutcome, Decoded, FailureReason, LocatorResult, SyndromeMatrix};
pub use error::{Error, Result};
pub use gf::{Field, FieldElement};
pub use irs::{ErrorMode, ErrorPattern, IrsWord, ReceivedWord};
pub use matrix::Matrix;
pub use rs_code::{RsSpec, Variant};
pub use sim::{Decoder, SimConfig, SimStats};
