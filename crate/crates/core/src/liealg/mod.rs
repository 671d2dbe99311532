//! Bracket formulas and the algebra families built from them.

mod brackets;
mod loops;
mod table;

pub use brackets::{apply_field, contact_bracket, hamiltonian_field, poisson_bracket, supertrace};
pub use loops::{affine_form, loop_bracket, loop_cocycle, LoopElem, LoopVector};
pub use table::{
    build_algebra, family_bracket, k16_cartan_gens, po_cartan_mask, AlgebraId, BasisElement, CartanLabel,
    Expansion, Family, Kind, StructureTable,
};
