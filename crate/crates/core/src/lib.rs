//! Realizability workbench for elementary analysis: a two-sorted formula
//! language, syntactic class recognition, the function and Lifschitz
//! realizability translations, an executable Kleene second algebra with
//! compact-set codes, semantic realizer checking, and the analysis demos.

pub mod analysis;
pub mod classify;
pub mod compact;
pub mod formula;
pub mod gen;
pub mod k2;
pub mod nat;
pub mod symbols;
pub mod translate;
pub mod witness;

pub use formula::{Formula, FunTerm, NumTerm};
pub use nat::Nat;
