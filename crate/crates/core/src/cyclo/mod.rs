//! Cyclotomic arithmetic: the field `Q(zeta_M)`, the group of cyclotomic
//! numbers `G_M`, places above primes dividing the level, residue fields and
//! tame symbols.

mod field;
mod finite_field;
mod formal;
mod places;
pub mod text;

pub use field::{cyclic_equal, cyclotomic_poly, CycElt, CyclicInt};
pub use finite_field::{FpPoly, ResidueElt, ResidueField};
pub use formal::{CycNumFormal, Relation, RelationKind, RelationLattice};
pub use places::{
    factor_cyclotomic, galois_partner, place_from_factor, places_over, sanity_places, tame_pair, transport,
    Place, PlaceTable,
};
