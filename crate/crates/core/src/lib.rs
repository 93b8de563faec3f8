//! Modular symbols for `X_1(M)`, Sharifi's map into cyclotomic `K_2`, and
//! exact verification of its norm relations and Hecke annihilation.

pub mod arith;
pub mod cyclo;
pub mod error;
pub mod gm2k1;
pub mod harness;
pub mod k2model;
pub mod linalg;
pub mod modsym;
pub mod par;

pub use error::{Error, Result};
