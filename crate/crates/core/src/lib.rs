//! Dickson polynomials of the first kind over finite fields: construction,
//! exact periods of the sequence [D_n(x, alpha) mod (x^q - x)]_n, the
//! coefficient rotation symmetry, iteration dynamics of the maps D_{n,alpha},
//! and recognition of reduced Dickson polynomials.

pub mod dickson;
pub mod dynamics;
pub mod gf;
pub mod identities;
pub mod numtheory;
pub mod periodicity;
pub mod polyring;
pub mod recognition;

pub use dickson::DicksonId;
pub use gf::{make_field, Felt, FieldCtx};
pub use polyring::{Poly, RPoly};
