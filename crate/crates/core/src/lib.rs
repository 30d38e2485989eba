//! Relational programs: parsing, validation, least-fixpoint semantics over
//! arbitrary universes, model checking, and transpilation of well-moded
//! programs to a small procedural language.
//!
//! ```
//! use relkit::{parser, stdlib, fixpoint};
//!
//! let pack = stdlib::load_example("evenOdd").unwrap();
//! let program = pack.program().unwrap();
//! let structure = pack.structure(&program).unwrap();
//! let result = fixpoint::lfp(&program, &structure, &fixpoint::FixpointConfig::default()).unwrap();
//! assert!(result.reached_fixpoint());
//! assert_eq!(result.interpretation.relation("even").unwrap().len(), 11);
//! # let _ = parser::pretty_print(&program);
//! ```

pub mod diagnostic;
pub mod fixpoint;
pub mod parser;
pub mod semantics;
pub mod stdlib;
pub mod syntax;
pub mod transpile;
pub mod validate;

pub use diagnostic::{DiagCode, Diagnostic, SourceSpan};
pub use syntax::{reindex, Atom, Body, Clause, Disjunct, FreeVars, Program, Signature, Term};
pub use validate::validate;
