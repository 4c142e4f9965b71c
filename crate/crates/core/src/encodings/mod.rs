//! Concrete quantitative models, their embeddings into FuTS, and their own
//! bisimulation notions.
//!
//! Every checker here follows its model's textbook definition directly and
//! shares no code path with [`crate::bisim`], so each pair
//! `(is_*_bisimulation, is_bisimulation ∘ encode_*)` is an independent
//! cross-check. The MA checker is the one exception: its definition is
//! itself phrased through the lifting of `R` to distributions.

mod ctmc;
mod imc;
mod lts;
mod ma;
mod pa;

pub use ctmc::{encode_ctmc, is_lumping, CtmcModel};
pub use imc::{encode_imc, is_imc_bisimulation, ImcModel};
pub use lts::{encode_lts, is_lts_bisimulation, LtsModel};
pub use ma::{encode_ma, is_ma_bisimulation, MaModel};
pub use pa::{encode_pa, is_pa_bisimulation, PaModel};

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::continuation::{Continuation, Key};
use crate::partition::{all_partitions, Partition};
use crate::semiring::{NonNegRational, SemiringId, SemiringValue};
use crate::system::{Futs, FutsError};

/// Name of the single delay label of Markovian components.
pub const DELTA: &str = "delta";

/// `delta` and `δ` denote delay and may not be used as actions.
pub fn is_reserved_label(label: &str) -> bool {
    label == DELTA || label == "δ"
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("`{0}` is reserved for delay and cannot be an action")]
    ReservedLabel(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("action index {0} out of range")]
    ActionOutOfRange(usize),
    #[error("duplicate transition {0}")]
    DuplicateTransition(String),
    #[error("rate from `{from}` to `{to}` must be positive")]
    NonPositiveRate { from: String, to: String },
    #[error("outgoing probability of `{state}` is {mass}, not 1")]
    NotStochastic { state: String, mass: NonNegRational },
    #[error("distribution has mass {mass}, not 1")]
    NotADistribution { mass: NonNegRational },
    #[error("state `{0}` occurs twice in a distribution")]
    DuplicateSupport(String),
    #[error("relation has {found} elements but the model has {expected} states")]
    CarrierMismatch { expected: usize, found: usize },
    #[error("{states} states exceed the brute-force cap of {cap}")]
    TooManyStates { states: usize, cap: usize },
    #[error(transparent)]
    Futs(#[from] FutsError),
}

/// A probability distribution over state indices: positive entries in
/// ascending state order, total mass exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distribution(Vec<(usize, NonNegRational)>);

impl Distribution {
    /// Zero entries are dropped; repeated states are an error.
    pub fn new(pairs: impl IntoIterator<Item = (usize, NonNegRational)>) -> Result<Self, ModelError> {
        let mut map = BTreeMap::new();
        for (s, p) in pairs {
            if map.insert(s, p).is_some() {
                return Err(ModelError::DuplicateSupport(format!("#{s}")));
            }
        }
        let entries: Vec<_> = map.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let mass: NonNegRational = entries.iter().map(|(_, p)| p).sum();
        if !mass.is_one() {
            return Err(ModelError::NotADistribution { mass });
        }
        Ok(Distribution(entries))
    }

    pub fn dirac(state: usize) -> Self {
        Distribution(vec![(state, NonNegRational::one())])
    }

    pub fn entries(&self) -> &[(usize, NonNegRational)] {
        &self.0
    }

    /// `π[C]` for a set of states given as a membership test.
    pub fn mass_in(&self, mut member: impl FnMut(usize) -> bool) -> NonNegRational {
        self.0.iter().filter(|(s, _)| member(*s)).map(|(_, p)| p).sum()
    }

    pub fn to_continuation(&self) -> Continuation {
        Continuation::new(
            SemiringId::NonNegRational,
            1,
            self.0.iter().map(|(s, p)| (Key::state(*s), SemiringValue::Rat(p.clone()))),
        )
        .expect("distribution entries are distinct states")
    }
}

fn check_names(states: &[String], actions: &[String]) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for s in states {
        if !seen.insert(s.as_str()) {
            return Err(ModelError::DuplicateName(s.clone()));
        }
    }
    let mut seen = HashSet::new();
    for a in actions {
        if is_reserved_label(a) {
            return Err(ModelError::ReservedLabel(a.clone()));
        }
        if !seen.insert(a.as_str()) {
            return Err(ModelError::DuplicateName(a.clone()));
        }
    }
    Ok(())
}

fn check_state(states: &[String], s: usize) -> Result<(), ModelError> {
    if s < states.len() {
        Ok(())
    } else {
        Err(ModelError::StateOutOfRange(s))
    }
}

fn check_carrier(states: &[String], r: &Partition) -> Result<(), ModelError> {
    if r.len() != states.len() {
        return Err(ModelError::CarrierMismatch { expected: states.len(), found: r.len() });
    }
    Ok(())
}

/// Timed transitions `(s, λ, s')` shared by CTMC, IMC and MA.
fn check_rates(states: &[String], rates: &[(usize, NonNegRational, usize)]) -> Result<(), ModelError> {
    for (s, rate, t) in rates {
        check_state(states, *s)?;
        check_state(states, *t)?;
        if rate.is_zero() {
            return Err(ModelError::NonPositiveRate { from: states[*s].clone(), to: states[*t].clone() });
        }
    }
    Ok(())
}

/// `R(s, C) = Σ { λ | s →λ s', s' ∈ C }`.
fn rate_into(rates: &[(usize, NonNegRational, usize)], s: usize, class: &[usize]) -> NonNegRational {
    rates.iter().filter(|(from, _, to)| *from == s && class.contains(to)).map(|(_, r, _)| r).sum()
}

/// Clause `R(s, C) = R(t, C)` for all related `s, t` and classes `C`.
fn rates_respect(rates: &[(usize, NonNegRational, usize)], r: &Partition) -> bool {
    r.blocks().iter().all(|block| {
        block.iter().all(|&s| {
            block.iter().all(|&t| r.blocks().iter().all(|c| rate_into(rates, s, c) == rate_into(rates, t, c)))
        })
    })
}

/// Per-state level-1 rate continuations, summing parallel transitions.
fn rate_continuations(n: usize, rates: &[(usize, NonNegRational, usize)]) -> Vec<Continuation> {
    let mut sums: Vec<BTreeMap<usize, NonNegRational>> = vec![BTreeMap::new(); n];
    for (s, rate, t) in rates {
        *sums[*s].entry(*t).or_insert_with(NonNegRational::zero) += rate;
    }
    sums.into_iter()
        .map(|m| {
            Continuation::new(
                SemiringId::NonNegRational,
                1,
                m.into_iter().map(|(t, r)| (Key::state(t), SemiringValue::Rat(r))),
            )
            .expect("keys are distinct")
        })
        .collect()
}

/// Any of the supported model classes.
#[derive(Debug, Clone)]
pub enum Model {
    Lts(LtsModel),
    Ctmc(CtmcModel),
    Imc(ImcModel),
    Pa(PaModel),
    Ma(MaModel),
    Futs(Futs),
}

impl Model {
    pub fn state_names(&self) -> &[String] {
        match self {
            Model::Lts(m) => &m.states,
            Model::Ctmc(m) => &m.states,
            Model::Imc(m) => &m.states,
            Model::Pa(m) => &m.states,
            Model::Ma(m) => &m.states,
            Model::Futs(f) => f.state_names(),
        }
    }

    pub fn encode(&self) -> Result<Futs, ModelError> {
        match self {
            Model::Lts(m) => encode_lts(m),
            Model::Ctmc(m) => encode_ctmc(m),
            Model::Imc(m) => encode_imc(m),
            Model::Pa(m) => encode_pa(m),
            Model::Ma(m) => encode_ma(m),
            Model::Futs(f) => Ok(f.clone()),
        }
    }

    /// The model's own bisimulation notion; `None` for raw FuTS, which
    /// have no separate definition.
    pub fn is_concrete_bisimulation(&self, r: &Partition) -> Result<Option<bool>, ModelError> {
        Ok(Some(match self {
            Model::Lts(m) => is_lts_bisimulation(m, r)?,
            Model::Ctmc(m) => is_lumping(m, r)?,
            Model::Imc(m) => is_imc_bisimulation(m, r)?,
            Model::Pa(m) => is_pa_bisimulation(m, r)?,
            Model::Ma(m) => is_ma_bisimulation(m, r)?,
            Model::Futs(_) => return Ok(None),
        }))
    }
}

/// Coarsest relation accepted by the model's own checker, by enumeration.
/// `None` for raw FuTS.
pub fn brute_force_concrete_coarsest(model: &Model, cap: usize) -> Result<Option<Partition>, ModelError> {
    let n = model.state_names().len();
    if n > cap {
        return Err(ModelError::TooManyStates { states: n, cap });
    }
    let mut best: Option<Partition> = None;
    for p in all_partitions(n) {
        match model.is_concrete_bisimulation(&p)? {
            None => return Ok(None),
            Some(true) if best.as_ref().is_none_or(|b| p.num_blocks() < b.num_blocks()) => best = Some(p),
            _ => {}
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, d: u64) -> NonNegRational {
        NonNegRational::from_ratio(n, d).unwrap()
    }

    #[test]
    fn distributions_must_sum_to_one() {
        assert!(Distribution::new([(0, q(1, 2)), (1, q(1, 2))]).is_ok());
        assert_eq!(
            Distribution::new([(0, q(1, 2)), (1, q(1, 3))]),
            Err(ModelError::NotADistribution { mass: q(5, 6) })
        );
        assert!(matches!(Distribution::new([(0, q(1, 2)), (0, q(1, 2))]), Err(ModelError::DuplicateSupport(_))));
        let d = Distribution::new([(2, q(1, 1)), (1, q(0, 1))]).unwrap();
        assert_eq!(d, Distribution::dirac(2));
    }

    #[test]
    fn reserved_labels() {
        assert!(is_reserved_label("delta") && is_reserved_label("δ"));
        assert!(!is_reserved_label("a"));
        assert_eq!(check_names(&["s".into()], &["δ".into()]), Err(ModelError::ReservedLabel("δ".into())));
        assert!(matches!(check_names(&["s".into(), "s".into()], &[]), Err(ModelError::DuplicateName(_))));
    }
}
