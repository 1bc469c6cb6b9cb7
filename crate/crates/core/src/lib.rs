//! Grounded semantics for finite and lazily presented infinite argumentation
//! frameworks.

pub mod af;
pub mod family;
pub mod ordinal;
pub mod tree;
pub mod grounded;
pub mod rank_analysis;
pub mod constructions;
pub mod checks;
