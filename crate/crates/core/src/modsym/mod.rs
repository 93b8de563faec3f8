//! Modular symbols for `Gamma_1(M)`: Manin cosets, cusps, presentations of
//! relative homology, the modified Manin map and the operator algebra.

mod cosets;
mod cusps;
mod decompose;
mod homology;
mod operators;
pub mod prop31;
mod text;

pub use cosets::{coset_count, enumerate_cosets, lift_bottom_row, CosetTable, ManinCoset};
pub use cusps::{cusp_count, cusp_key, genus, reduction_kernel, Cusp, CuspClass, CuspTable};
pub use decompose::{decompose_usual, symbol_endpoints};
pub use homology::{HomElt, HomologyPresentation, HomologySubspace, PresentationCache};
pub use operators::{
    add, apply_operator, atkin_lehner_matrix, degeneracy_matrix, diamond_matrix, hecke_t_matrix,
    hecke_u_matrix, operator_matrix, pi1_minus_diamond_pi2, scalar, sub, Degeneracy, Operator,
};
pub use text::{operator_from_text, operator_to_text, CuspRecord, CuspSelector, PresentationRecord};
