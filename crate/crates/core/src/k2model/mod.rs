//! Symbols in `K_2` of cyclotomic rings: formal wedge sums, a presented
//! model of the coinvariant quotient, the tame-symbol backend, and
//! Sharifi's map on homology.

mod presented;
mod symbolic;
mod tame;
mod varpi;

pub use presented::PresentedK2;
pub use symbolic::SymbolicK2;
pub use tame::{CoinvariantCheck, TameContext, TameNorm, TameVector};
pub use varpi::{sharifi_symbol, Varpi};
