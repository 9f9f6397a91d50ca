//! Oscillation colorings on finite sets, reals and countable ordinals.
//!
//! The crate is organised by the objects being oscillated:
//!
//! - [`finite`]: finite sets of naturals, `osc`, `Δ`, `osc₃`, truncated
//!   Cantor–Bendixson derivatives and constructive realization of values.
//! - [`baire`]: the infinite triple oscillation `o(x, y, z)`, superperfect
//!   tree oracles and the perfect-to-superperfect map.
//! - [`seq`]: oscillation of increasing sequences, splitting extensions and
//!   the refined/rectangle colorings built on top of it.
//! - [`ordinal`] and [`walks`]: ordinals below ε₀ in Cantor normal form,
//!   ladders, walks, the ρ₁ e-system and the ordinal oscillation.
//! - [`lspace`]: exact circle angles and the circle-valued coloring.
//! - [`verify`]: deterministic property suites over all of the above.

pub mod baire;
pub mod error;
pub mod finite;
pub mod lspace;
pub mod ordinal;
pub mod seq;
pub mod verify;
pub mod walks;

mod dd;

pub use error::Error;
