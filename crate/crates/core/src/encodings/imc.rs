use super::lts::boolean_component;
use super::{check_carrier, check_rates, rate_continuations, rates_respect, LtsModel, ModelError, DELTA};
use crate::continuation::StateId;
use crate::partition::Partition;
use crate::semiring::{NonNegRational, SemiringId};
use crate::system::{ComponentType, Futs, FutsBuilder, FutsType};

/// An interactive Markov chain: action-labelled transitions plus
/// Markovian delays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImcModel {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub interactive: Vec<(usize, usize, usize)>,
    pub markovian: Vec<(usize, NonNegRational, usize)>,
}

impl ImcModel {
    pub fn validate(&self) -> Result<(), ModelError> {
        self.interactive_part().validate()?;
        check_rates(&self.states, &self.markovian)
    }

    fn interactive_part(&self) -> LtsModel {
        LtsModel { states: self.states.clone(), actions: self.actions.clone(), transitions: self.interactive.clone() }
    }
}

/// Interactive part as a Boolean component over the actions, Markovian
/// part as a rational component over `{δ}`.
pub fn encode_imc(m: &ImcModel) -> Result<Futs, ModelError> {
    m.validate()?;
    let ty = FutsType::new(vec![
        ComponentType::new(m.actions.clone(), vec![SemiringId::Boolean]),
        ComponentType::new([DELTA], vec![SemiringId::NonNegRational]),
    ])?;
    let mut b = FutsBuilder::new(ty, m.states.clone())?;
    boolean_component(&mut b, 0, m.states.len(), &m.interactive)?;
    for (s, c) in rate_continuations(m.states.len(), &m.markovian).into_iter().enumerate() {
        if !c.is_zero() {
            b.assign_ids(1, StateId(s as u32), 0, c)?;
        }
    }
    Ok(b.build())
}

/// `T(s, a, C) = T(t, a, C)` and `R(s, C) = R(t, C)` for related states.
pub fn is_imc_bisimulation(m: &ImcModel, r: &Partition) -> Result<bool, ModelError> {
    check_carrier(&m.states, r)?;
    let can_reach = |s: usize, a: usize, class: &[usize]| {
        m.interactive.iter().any(|&(from, b, to)| from == s && b == a && class.contains(&to))
    };
    for block in r.blocks() {
        for &s in block {
            for &t in block {
                for class in r.blocks() {
                    for a in 0..m.actions.len() {
                        if can_reach(s, a, class) != can_reach(t, a, class) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(rates_respect(&m.markovian, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::brute_force_coarsest;

    /// p -a-> p1, p -1-> p; q -a-> q1.
    fn i1() -> ImcModel {
        ImcModel {
            states: ["p", "q", "p1", "q1"].map(String::from).to_vec(),
            actions: vec!["a".into()],
            interactive: vec![(0, 0, 2), (1, 0, 3)],
            markovian: vec![(0, NonNegRational::one(), 0)],
        }
    }

    #[test]
    fn single_parts_leave_other_component_zero() {
        let mut m = i1();
        m.markovian.clear();
        let f = encode_imc(&m).unwrap();
        assert!(f.states().all(|s| f.theta(1, s, 0).unwrap().is_zero()));
        let mut m = i1();
        m.interactive.clear();
        let f = encode_imc(&m).unwrap();
        assert!(f.states().all(|s| f.theta(0, s, 0).unwrap().is_zero()));
    }

    #[test]
    fn i1_examples() {
        let m = i1();
        let f = encode_imc(&m).unwrap();
        let coarsest = brute_force_coarsest(&f, 6).unwrap();
        assert!(!coarsest.same_block(0, 1), "p and q differ in delay");
        assert_eq!(coarsest, Partition::from_blocks(4, [vec![0], vec![1], vec![2, 3]]).unwrap());
        assert!(is_imc_bisimulation(&m, &Partition::identity(4)).unwrap());
        assert!(is_imc_bisimulation(&m, &coarsest).unwrap());
        assert!(!is_imc_bisimulation(&m, &Partition::single_block(4)).unwrap());
    }
}
