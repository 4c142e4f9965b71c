use std::collections::BTreeSet;

use super::pa::{check_steps, distribution_component};
use super::{
    check_carrier, check_names, check_rates, rate_continuations, rates_respect, Distribution, ModelError, DELTA,
};
use crate::continuation::{Continuation, StateId};
use crate::lifting::{lift_continuations, KeyPartition};
use crate::partition::Partition;
use crate::semiring::{NonNegRational, SemiringId};
use crate::system::{ComponentType, Futs, FutsBuilder, FutsType};

/// A Markov automaton: immediate probabilistic steps plus timed delays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaModel {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub immediate: Vec<(usize, usize, Distribution)>,
    pub timed: Vec<(usize, NonNegRational, usize)>,
}

impl MaModel {
    pub fn validate(&self) -> Result<(), ModelError> {
        check_names(&self.states, &self.actions)?;
        check_steps(&self.states, &self.actions, &self.immediate)?;
        check_rates(&self.states, &self.timed)
    }
}

pub fn encode_ma(m: &MaModel) -> Result<Futs, ModelError> {
    m.validate()?;
    let ty = FutsType::new(vec![
        ComponentType::new(m.actions.clone(), vec![SemiringId::NonNegRational, SemiringId::Boolean]),
        ComponentType::new([DELTA], vec![SemiringId::NonNegRational]),
    ])?;
    let mut b = FutsBuilder::new(ty, m.states.clone())?;
    distribution_component(&mut b, 0, &m.immediate)?;
    for (s, c) in rate_continuations(m.states.len(), &m.timed).into_iter().enumerate() {
        if !c.is_zero() {
            b.assign_ids(1, StateId(s as u32), 0, c)?;
        }
    }
    Ok(b.build())
}

/// `T(s, a, Γ) = T(t, a, Γ)` for every class `Γ` of the lifting of `R` to
/// the occurring distributions, and `R(s, C) = R(t, C)` for every `C`.
pub fn is_ma_bisimulation(m: &MaModel, r: &Partition) -> Result<bool, ModelError> {
    check_carrier(&m.states, r)?;
    let conts: Vec<Continuation> = m.immediate.iter().map(|(_, _, pi)| pi.to_continuation()).collect();
    let refs: Vec<&Continuation> = conts.iter().collect();
    let lifted = lift_continuations(&KeyPartition::over_states(r.clone()), &refs)
        .expect("distribution supports are states of the model");
    // T(s, ·, ·) as the set of (action, Γ) it reaches.
    let reach = |s: usize| -> BTreeSet<(usize, usize)> {
        m.immediate
            .iter()
            .enumerate()
            .filter(|(_, (from, _, _))| *from == s)
            .map(|(i, (_, a, _))| (*a, lifted.block_of(i)))
            .collect()
    };
    for block in r.blocks() {
        for &s in block {
            for &t in block {
                if reach(s) != reach(t) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(rates_respect(&m.timed, r))
}
