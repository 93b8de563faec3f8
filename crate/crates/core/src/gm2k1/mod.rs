//! Divisor calculus on `G_m^2`: the symbols `<a, c>` in `K_1`, their
//! transforms under `SL_2(Z)` and the isogeny `(z1, z2) -> (z1, z2^p)`, and
//! checks of the cocycle `del Theta(gamma) = <b, d> - <0, 1>`.

mod function;
mod k1;
mod lemma;

pub use function::{DivisorFn, Root};
pub use k1::{
    bracket_symbol, bracket_with_completion, complete, mat_inv, mat_mul, DivKey, K1Elem, Mat2, PrimVec,
};
pub use lemma::{
    calibrate_action, cocycle_check, del_theta, lemma41_check, lemma41_trials, phi_p, random_gamma0, ActionConvention,
    CocycleReport, LemmaReport,
};
