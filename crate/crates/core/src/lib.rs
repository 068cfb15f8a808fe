//! Joint spectra of operator pencils for the infinite dihedral group, its
//! finite quotients, and self-similar automaton groups.
//!
//! The crate is organized in layers:
//! - [`numerics`]: complex matrices, determinants, periodic quadrature,
//!   argument tracking;
//! - [`pencil`]: multiparameter pencils and the built-in finite-dimensional
//!   representations;
//! - [`selfsimilar`]: Mealy automata over the binary alphabet and level
//!   permutational representations;
//! - [`spectrum`]: closed-form joint-spectrum membership and the Grigorchuk
//!   determinant recursion;
//! - [`analysis`]: Fuglede-Kadison determinants, Mahler measures, resolvent
//!   traces, winding numbers and the homology coupling;
//! - [`dynamics`]: the renormalization maps F, F1, F2 and their identities;
//! - [`cli`]: the `jspec` command-line surface.

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod numerics;
pub mod pencil;
pub mod selfsimilar;
pub mod spectrum;

pub use error::{Error, Result};
