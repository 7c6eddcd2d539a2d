//! Ramified (`O`-typical) Witt vectors.
//!
//! The ghost components are `w_j = Σ_{i≤j} π^i T_i^{q^{j−i}}`. Sum, product and
//! negation laws are solved from the ghost equations over a polynomial algebra
//! with `π`-adic headroom, then pushed into a finite coordinate algebra.

pub mod algebra;
pub mod classical;
pub mod laws;
pub mod mpoly;
pub mod theta;
pub mod vector;

pub use algebra::{FiniteField, PerfectTrunc, Quotient, TruncPoly, WittAlgebra};
pub use classical::{classical_laws, specialize_check, SpecializeReport};
pub use laws::{ghost_map, ghost_map_num, ghost_solve, ghost_solve_num, law_polynomials, LawTable, LawTableJson};
pub use mpoly::MPoly;
pub use theta::{theta, theta_inverse, verify_theta, GhostLift, LiftedWitt, ThetaReport};
pub use vector::{Covector, WittRing, WittVec};
