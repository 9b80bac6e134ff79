//! Exact invariants of quasihomogeneous weight systems.
//!
//! * [`cyclo_algebra`]: divisors of products of cyclotomic polynomials in
//!   the Ψ/Λ/Lefschetz encodings, their products and expansion.
//! * [`weight_systems`]: weight systems, the (C1)/(C2) conditions, `D_w`,
//!   `ρ`, exponents, `d_w`, `d_mon`.
//! * [`families`]: closed forms for cycle, chain and Thom–Sebastiani types.
//! * [`orlik_graph`]: the prime-labelled graph on a set of orders and its
//!   conditions (I), (II) and the strong condition.
//! * [`monodromy`]: elementary-divisor splitting and the conjecture checks.
//! * [`scan`]: enumeration of weight systems and the JSONL scan harness.

pub mod arith;
pub mod cyclo_algebra;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod monodromy;
pub mod orlik_graph;
pub mod poly;
pub mod scan;
pub mod weight_systems;

pub use cyclo_algebra::{cyclotomic, Divisor};
pub use error::{Error, Result};
pub use poly::IntPolynomial;
pub use weight_systems::WeightSystem;
