//! Non-abelian cohomology of finite groupoids with coefficients in a family
//! of finite groups.

pub mod algebra;
pub mod budget;
pub mod cocycle;
pub mod error;
pub mod extensions;
pub mod grothendieck;
pub mod nerve;
pub mod report;
pub mod two_groupoid;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use report::{Report, Violation};

pub use algebra::{FiniteGroup, FiniteGroupoid, GroupFamily, GroupIso, GroupoidFunctor};
pub use cocycle::{ActionMorphism, Cochain1, WeakAction, H2};
pub use extensions::Extension;
pub use grothendieck::{Cleavage, TwistedGroupoid};
pub use nerve::{SimplicialMap, TruncatedSimplicialSet};
pub use two_groupoid::AutTwoGroupoid;
