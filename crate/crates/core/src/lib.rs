//! Constructive colourings of (P2+P4, diamond)-free graphs within
//! `χ ≤ 4` (ω = 2), `χ ≤ 6` (ω = 3) and `χ = ω` (ω ≥ 4), with the
//! recognition, decomposition and brute-force oracles needed to check them.

pub mod cograph;
pub mod decomposition;
pub mod engine;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod recognition;
pub mod rng;

pub use cograph::Colouring;
pub use engine::{bound, colour, EngineError, Strategy, StrategyOutcome};
pub use graph::{Graph, GraphError, VertexSet};
pub use recognition::{class_membership, MembershipVerdict, Witness, WitnessKind};
