//! Exact finite models of abstract Cuntz semigroups: order axioms, ideals,
//! functional cones, Riesz–Kantorovich meets and Edwards' condition.

pub mod axioms;
pub mod dual;
pub mod edwards;
pub mod error;
pub mod ext;
pub mod functional;
pub mod ideals;
pub mod lp;
pub mod model;
pub mod report;

pub use error::{Error, Result};
pub use ext::{ExtNat, ExtValue, Rational};
pub use model::{CuModel, Element, Poset, TableModel};
