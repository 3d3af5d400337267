//! Finite groups, finite groupoids, functors and object-indexed group
//! families.

pub mod census;
pub mod family;
pub mod functor;
pub mod group;
pub mod groupoid;
pub mod iso;

pub use family::GroupFamily;
pub use functor::{validate_functor, GroupoidFunctor};
pub use group::{validate_group, Elem, FiniteGroup};
pub use groupoid::{
    connected_components, validate_groupoid, vertex_group, ArrowId, FiniteGroupoid, GroupoidData,
    ObjId, MAX_ARROWS, MAX_OBJECTS,
};
pub use iso::{all_homomorphisms, all_isomorphisms, are_isomorphic, group_iso_search, GroupIso};
