//! Congruence-level Hecke algebras of `GL_r` over a local field.
//!
//! Everything is reduced to finite computations in `GL_r(O/π^N)`. A double
//! coset `K^n g K^n` is named by its Cartan cocharacter `ν` and the least pair
//! `(k1, k2) ∈ GL_r(O/π^n)²` with `g ∈ K^n k1 ∇(ν) k2 K^n`; two pairs name the
//! same coset exactly when they differ by the stabilizer of `K^n ∇(ν) K^n`.
//! Left cosets `K^n x` are labelled by the Hermite form of the row lattice of
//! `x` together with `x·H^{−1} mod π^n`.
//!
//! `∇(ν) = diag(π^{ν_1}, …, π^{ν_r})`.

mod algebra;
mod group;
mod matrix;

pub use algebra::{DoubleCoset, HeckeAlgebra, HeckeElem, LeftCosets, DEFAULT_BUDGET};
pub use group::{cartan_decompose, Cartan, Entry, GrpElt};
pub use matrix::Mat;
