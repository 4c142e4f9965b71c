use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{check_carrier, check_names, check_state, Distribution, ModelError};
use crate::continuation::{Continuation, Key, StateId};
use crate::partition::Partition;
use crate::semiring::{SemiringId, SemiringValue};
use crate::system::{ComponentType, Futs, FutsBuilder, FutsType};

/// A probabilistic automaton: action-labelled steps into distributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaModel {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub steps: Vec<(usize, usize, Distribution)>,
}

pub(super) fn check_steps(
    states: &[String],
    actions: &[String],
    steps: &[(usize, usize, Distribution)],
) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for (s, a, pi) in steps {
        check_state(states, *s)?;
        if *a >= actions.len() {
            return Err(ModelError::ActionOutOfRange(*a));
        }
        for (t, _) in pi.entries() {
            check_state(states, *t)?;
        }
        if !seen.insert((*s, *a, pi)) {
            return Err(ModelError::DuplicateTransition(format!("{} -{}-> {:?}", states[*s], actions[*a], pi)));
        }
    }
    Ok(())
}

impl PaModel {
    pub fn validate(&self) -> Result<(), ModelError> {
        check_names(&self.states, &self.actions)?;
        check_steps(&self.states, &self.actions, &self.steps)
    }
}

/// Level-2 component: `θ(s)(a)(π) = true` iff `s -a-> π`.
pub(super) fn distribution_component(
    b: &mut FutsBuilder,
    component: usize,
    steps: &[(usize, usize, Distribution)],
) -> Result<(), crate::system::FutsError> {
    let mut by_pair: BTreeMap<(usize, usize), BTreeSet<Key>> = BTreeMap::new();
    for (s, a, pi) in steps {
        let id = b.intern(pi.to_continuation())?;
        by_pair.entry((*s, *a)).or_default().insert(Key::Cont(id));
    }
    for ((s, a), keys) in by_pair {
        let c = Continuation::new(SemiringId::Boolean, 2, keys.into_iter().map(|k| (k, SemiringValue::Bool(true))))
            .expect("distinct keys");
        b.assign_ids(component, StateId(s as u32), a, c)?;
    }
    Ok(())
}

pub fn encode_pa(m: &PaModel) -> Result<Futs, ModelError> {
    m.validate()?;
    let ty = FutsType::new(vec![ComponentType::new(
        m.actions.clone(),
        vec![SemiringId::NonNegRational, SemiringId::Boolean],
    )])?;
    let mut b = FutsBuilder::new(ty, m.states.clone())?;
    distribution_component(&mut b, 0, &m.steps)?;
    Ok(b.build())
}

/// Every `s -a-> π` of a related state is matched by some `t -a-> ϱ` with
/// `π[C] = ϱ[C]` for every class `C`.
pub fn is_pa_bisimulation(m: &PaModel, r: &Partition) -> Result<bool, ModelError> {
    check_carrier(&m.states, r)?;
    let equivalent = |pi: &Distribution, rho: &Distribution| {
        r.blocks().iter().all(|c| pi.mass_in(|x| c.contains(&x)) == rho.mass_in(|x| c.contains(&x)))
    };
    for block in r.blocks() {
        for &s in block {
            for &t in block {
                for (from, a, pi) in &m.steps {
                    if *from != s {
                        continue;
                    }
                    let matched = m.steps.iter().any(|(from2, b, rho)| *from2 == t && b == a && equivalent(pi, rho));
                    if !matched {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
