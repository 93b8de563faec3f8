//! Exact integer linear algebra: dense matrices, Smith normal form and
//! finitely presented abelian groups.

mod group;
mod matrix;
mod snf;

pub use group::{strip_primes, AbelianQuotient, Subgroup};
pub use matrix::{rank_mod_p, Int, IntMatrix};
pub use snf::{left_kernel, smith_normal_form, solve_left, solve_left_with, Snf, SnfOptions};
