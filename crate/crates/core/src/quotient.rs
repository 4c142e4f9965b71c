//! Quotient systems and homomorphism checks.
//!
//! For an equivalence `E`, the quotient has one state per block and
//! `θ_E([x])(ℓ)` is the pushforward of `θ(x)(ℓ)` along the canonical map
//! `ε : X → X/E`. The result only depends on the representative when `E`
//! fails the transfer condition, so every representative is pushed forward
//! and compared.

use thiserror::Error;

use crate::bisim::{find_violation, BisimError, Violation};
use crate::continuation::{ContinuationError, Pushforward, Registry, StateId};
use crate::partition::Partition;
use crate::system::{Futs, FutsBuilder, FutsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("relation is not a bisimulation")]
    NotABisimulation(Box<Violation>),
    #[error("representatives {left:?} and {right:?} disagree in component {component}, label {label}")]
    RepresentativeMismatch { left: StateId, right: StateId, component: usize, label: usize },
    #[error("systems have different types")]
    TypeMismatch,
    #[error("state map has {found} entries for {expected} states or points outside the target")]
    BadMap { expected: usize, found: usize },
    #[error(transparent)]
    Bisim(#[from] BisimError),
    #[error(transparent)]
    Futs(#[from] FutsError),
    #[error(transparent)]
    Continuation(#[from] ContinuationError),
}

#[derive(Debug, Clone)]
pub struct Quotient {
    /// States are the blocks of `E` in canonical order, each named after its
    /// smallest member.
    pub futs: Futs,
    /// `ε`: state of the source ↦ state of the quotient.
    pub epsilon: Vec<StateId>,
}

pub fn quotient_futs(futs: &Futs, e: &Partition) -> Result<Quotient, QuotientError> {
    if e.len() != futs.num_states() {
        return Err(BisimError::CarrierMismatch { expected: futs.num_states(), found: e.len() }.into());
    }
    let mut epsilon = vec![StateId(0); e.len()];
    for (i, block) in e.blocks().iter().enumerate() {
        for &x in block {
            epsilon[x] = StateId(i as u32);
        }
    }
    let names: Vec<String> = e.blocks().iter().map(|b| futs.state_names()[b[0]].clone()).collect();

    let ty = futs.futs_type().clone();
    let mut registry = Registry::new();
    let mut push = Pushforward::new(|s: StateId| epsilon.get(s.index()).copied(), futs.registry());
    let mut values = Vec::new();
    for (i, ct) in ty.components.iter().enumerate() {
        for (block_index, block) in e.blocks().iter().enumerate() {
            for label in 0..ct.labels.len() {
                let theta = |x: usize| futs.theta(i, StateId(x as u32), label);
                let image = push.apply(&theta(block[0])?, &mut registry)?;
                for &y in &block[1..] {
                    if push.apply(&theta(y)?, &mut registry)? != image {
                        return Err(match find_violation(futs, e)? {
                            Some(v) => QuotientError::NotABisimulation(Box::new(v)),
                            None => QuotientError::RepresentativeMismatch {
                                left: StateId(block[0] as u32),
                                right: StateId(y as u32),
                                component: i,
                                label,
                            },
                        });
                    }
                }
                if !image.is_zero() {
                    values.push((i, StateId(block_index as u32), label, image));
                }
            }
        }
    }
    let mut builder = FutsBuilder::with_registry(ty, names, registry)?;
    for (i, state, label, value) in values {
        builder.assign_ids(i, state, label, value)?;
    }
    Ok(Quotient { futs: builder.build(), epsilon })
}

/// Checks `T(f) ∘ θ_source = θ_target ∘ f` pointwise.
pub fn check_homomorphism(f: &[StateId], source: &Futs, target: &Futs) -> Result<bool, QuotientError> {
    if source.futs_type() != target.futs_type() {
        return Err(QuotientError::TypeMismatch);
    }
    if f.len() != source.num_states() || f.iter().any(|s| s.index() >= target.num_states()) {
        return Err(QuotientError::BadMap { expected: source.num_states(), found: f.len() });
    }
    let mut registry = target.registry().clone();
    let mut push = Pushforward::new(|s: StateId| f.get(s.index()).copied(), source.registry());
    for (i, ct) in source.futs_type().components.iter().enumerate() {
        for x in source.states() {
            for label in 0..ct.labels.len() {
                let image = push.apply(&source.theta(i, x, label)?, &mut registry)?;
                if image != target.theta(i, f[x.index()], label)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
