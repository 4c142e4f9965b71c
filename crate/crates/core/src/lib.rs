//! State-to-function transition systems (FuTS) over semirings.
//!
//! A FuTS maps every state and label to a finitely supported function into
//! a semiring, possibly nested. Labelled transition systems, Markov chains,
//! interactive Markov chains, probabilistic automata and Markov automata
//! all embed into this shape, and one notion of bisimulation, computed by
//! lifting equivalences through the nesting, covers each model's own
//! strong bisimulation or lumping.

pub mod bisim;
pub mod continuation;
pub mod encodings;
pub mod lifting;
pub mod model_io;
pub mod partition;
pub mod quotient;
pub mod semiring;
pub mod system;
pub mod testkit;

pub use bisim::{bisimilar, brute_force_coarsest, coarsest_bisimulation, find_violation, is_bisimulation, Violation};
pub use continuation::{ContId, Continuation, Key, Registry, StateId};
pub use lifting::{lift_chain, lift_once, KeyPartition, LiftChain};
pub use partition::Partition;
pub use quotient::{check_homomorphism, quotient_futs, Quotient};
pub use semiring::{NonNegRational, SemiringId, SemiringValue};
pub use system::{ComponentType, Futs, FutsBuilder, FutsType};
