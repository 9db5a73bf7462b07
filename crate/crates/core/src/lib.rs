//! Finite-model semantics engine: relations, Kripke frames, typed extensional
//! and intensional models, trivialization morphisms between intensional models,
//! and a small natural-language fragment evaluated against those models.

pub mod cli;
pub mod denote;
pub mod fragment;
pub mod gen;
pub mod kripke;
pub mod modelfile;
pub mod modint;
pub mod relalg;
pub mod semmodel;
pub mod sexpr;
