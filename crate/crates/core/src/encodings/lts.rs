use std::collections::{BTreeSet, HashSet};

use super::{check_carrier, check_names, check_state, ModelError};
use crate::continuation::{Continuation, Key, StateId};
use crate::partition::Partition;
use crate::semiring::{SemiringId, SemiringValue};
use crate::system::{ComponentType, Futs, FutsBuilder, FutsType};

/// A finite labelled transition system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtsModel {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    /// `(s, a, s')` as indices into `states` / `actions`.
    pub transitions: Vec<(usize, usize, usize)>,
}

impl LtsModel {
    pub fn validate(&self) -> Result<(), ModelError> {
        check_names(&self.states, &self.actions)?;
        let mut seen = HashSet::new();
        for &(s, a, t) in &self.transitions {
            check_state(&self.states, s)?;
            check_state(&self.states, t)?;
            if a >= self.actions.len() {
                return Err(ModelError::ActionOutOfRange(a));
            }
            if !seen.insert((s, a, t)) {
                return Err(ModelError::DuplicateTransition(format!(
                    "{} -{}-> {}",
                    self.states[s], self.actions[a], self.states[t]
                )));
            }
        }
        Ok(())
    }
}

pub(super) fn boolean_component(
    b: &mut FutsBuilder,
    component: usize,
    n: usize,
    transitions: &[(usize, usize, usize)],
) -> Result<(), ModelError> {
    let mut targets: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); n];
    for &(s, a, t) in transitions {
        targets[s].insert((a, t));
    }
    for (s, set) in targets.iter().enumerate() {
        let mut by_action: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &(a, t) in set {
            by_action.entry(a).or_default().push(t);
        }
        for (a, ts) in by_action {
            let c = Continuation::new(
                SemiringId::Boolean,
                1,
                ts.into_iter().map(|t| (Key::state(t), SemiringValue::Bool(true))),
            )
            .expect("distinct targets");
            b.assign_ids(component, StateId(s as u32), a, c)?;
        }
    }
    Ok(())
}

/// `θ(s)(a)(s') = true` iff `s -a-> s'`.
pub fn encode_lts(m: &LtsModel) -> Result<Futs, ModelError> {
    m.validate()?;
    let ty = FutsType::new(vec![ComponentType::new(m.actions.clone(), vec![SemiringId::Boolean])])?;
    let mut b = FutsBuilder::new(ty, m.states.clone())?;
    boolean_component(&mut b, 0, m.states.len(), &m.transitions)?;
    Ok(b.build())
}

/// Strong bisimulation: related states match each other's steps into
/// related targets.
pub fn is_lts_bisimulation(m: &LtsModel, r: &Partition) -> Result<bool, ModelError> {
    check_carrier(&m.states, r)?;
    Ok(transfer_holds(&m.transitions, r))
}

pub(super) fn transfer_holds(transitions: &[(usize, usize, usize)], r: &Partition) -> bool {
    for block in r.blocks() {
        for &s in block {
            for &t in block {
                for &(from, a, s2) in transitions {
                    if from != s {
                        continue;
                    }
                    let matched =
                        transitions.iter().any(|&(from2, b, t2)| from2 == t && b == a && r.same_block(s2, t2));
                    if !matched {
                        return false;
                    }
                }
            }
        }
    }
    true
}
