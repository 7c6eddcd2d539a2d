//! Exact finite-precision arithmetic for close local fields.
//!
//! Truncated rings of integers, ramified Witt vectors, Lubin–Tate formal
//! groups and congruence-level Hecke algebras of `GL_r`, together with the
//! machinery that compares Hecke algebras of close fields.

pub mod closefields;
pub mod error;
pub mod family;
pub mod fq;
pub mod hecke;
pub mod localfield;
pub mod lubin_tate;
pub mod series;
pub mod witt;

pub use error::{Error, Result};
