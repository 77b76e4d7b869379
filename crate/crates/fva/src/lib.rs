//! Fresh-variable automata over an infinite alphabet: construction, closure
//! operations, decision procedures, ground-simulation games and
//! service-composition synthesis.
//!
//! The entry points mirror the toolkit's layers:
//! - [`automaton`]: the automaton variants and structural validation;
//! - [`run`]: run semantics, membership and the sampling oracle;
//! - [`closure`]: union, concatenation, Kleene star, epsilon elimination,
//!   products and the n-FVA reduction;
//! - [`decide`]: universality, determinism, simulation and containment;
//! - [`game`]: the ground-simulation game over its finite letter pool;
//! - [`compose`]: asynchronous products and orchestrator synthesis;
//! - [`wire`]: the canonical JSON format.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs, so everything can be shared across threads.

pub mod alphabet;
pub mod automaton;
pub mod closure;
pub mod compose;
pub mod decide;
pub mod fixtures;
pub mod game;
pub mod label;
pub mod random;
pub mod run;
pub mod wire;

pub use alphabet::{Letter, Variable};
pub use automaton::{Cfva, EpsFva, Fva, NFva, StateId, Violation};
pub use label::{Label, LabelTuple, PolLabel, Polarity};
pub use run::{membership, nonempty, sample_language, Configuration, Memory, Run, Word};
