//! A toolkit for finitary partial Horn logic.

pub mod birkhoff;
pub mod finder;
pub mod freemodel;
pub mod library;
pub mod morphology;
pub mod prover;
pub mod saturation;
pub mod semantics;
pub mod syntax;
pub mod translation;
