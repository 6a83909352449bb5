//! Highest-weight crystals realized by the Littelmann path model.
//!
//! The crate builds the finite crystals `B(λ)` of a reductive root datum,
//! their tensor products and retractions `B(λ₁) ⊗ B(λ₂) → B(λ₁+λ₂) ∪ {0}`,
//! and their restriction to Levi subdata. Every combinatorial output can be
//! compared against [`oracle`], which computes the same numbers from the Weyl
//! dimension formula, Freudenthal's recursion, Klimyk's formula and character
//! stripping without looking at a crystal.

pub mod crystal;
pub mod error;
pub mod export;
pub mod lattice;
pub mod levi;
pub mod oracle;
pub mod path;
pub mod poly;
pub mod properties;
pub mod report;
pub mod root_datum;
pub mod tensor;
pub mod worked_examples;

pub use crystal::{build_crystal, character, check_normal_crystal, decompose, Crystal, CrystalGraph, DEFAULT_MAX_ELEMENTS};
pub use error::{Error, Result};
pub use path::{Path, RootDirection};
pub use report::Report;
pub use root_datum::{alpha_gp, LatticeQuotient, QuotientClass, RootDatum, Weight};
pub use tensor::{retraction, tensor, CrystalMap, TensorCrystal};
