//! Exact computation of zero densities in character tables of finite
//! reductive groups and in Fourier tables of their Lie algebras.

pub mod bounds;
pub mod char_table;
pub mod error;
pub mod exact_num;
pub mod export;
pub mod finite_field;
pub mod gl_structure;
pub mod lie_fourier;
pub mod matrix_group;
pub mod weyl_stats;

pub use error::{Error, Result};
