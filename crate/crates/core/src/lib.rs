//! Multiplicative gerbes over finite groups.
//!
//! Group cohomology with coefficients in Q/Z is computed exactly on
//! multiplication tables. On top of that sit representations of gerbes on
//! finite G-sets, the fibrewise duality for central extensions with abelian
//! fibre, finite crossed-module presentations and low-degree spectral
//! sequence data.

pub mod abelian;
pub mod arith;
pub mod circle;
pub mod error;
pub mod group;
pub mod linalg;
pub mod cochain;
pub mod gerbe;
pub mod duality;
pub mod crossmod;
pub mod spectral;
pub mod json;
pub mod commands;

pub use abelian::FiniteAbelianGroup;
pub use circle::{BilinearForm, Character, CircleValue};
pub use error::{Error, ErrorKind, Result};
pub use group::{FiniteGroup, GroupHom};
