use super::{check_carrier, check_names, check_rates, rate_continuations, rates_respect, ModelError, DELTA};
use crate::continuation::StateId;
use crate::partition::Partition;
use crate::semiring::{NonNegRational, SemiringId};
use crate::system::{ComponentType, Futs, FutsBuilder, FutsType};

/// A continuous-time Markov chain, or a discrete-time one when `dtmc` is
/// set. Parallel transitions between the same states are kept and only
/// summed when rates are aggregated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtmcModel {
    pub states: Vec<String>,
    /// `(s, λ, s')`, `λ > 0`.
    pub transitions: Vec<(usize, NonNegRational, usize)>,
    pub dtmc: bool,
}

impl CtmcModel {
    pub fn validate(&self) -> Result<(), ModelError> {
        check_names(&self.states, &[])?;
        check_rates(&self.states, &self.transitions)?;
        if self.dtmc {
            for (s, name) in self.states.iter().enumerate() {
                let mass: NonNegRational =
                    self.transitions.iter().filter(|(from, _, _)| *from == s).map(|(_, p, _)| p).sum();
                if !mass.is_zero() && !mass.is_one() {
                    return Err(ModelError::NotStochastic { state: name.clone(), mass });
                }
            }
        }
        Ok(())
    }

    /// `R(s, C)`.
    pub fn rate_into(&self, s: usize, class: &[usize]) -> NonNegRational {
        super::rate_into(&self.transitions, s, class)
    }
}

/// `θ(s)(δ)(s') = Σ { λ | s -λ-> s' }`.
pub fn encode_ctmc(m: &CtmcModel) -> Result<Futs, ModelError> {
    m.validate()?;
    let ty = FutsType::new(vec![ComponentType::new([DELTA], vec![SemiringId::NonNegRational])])?;
    let mut b = FutsBuilder::new(ty, m.states.clone())?;
    for (s, c) in rate_continuations(m.states.len(), &m.transitions).into_iter().enumerate() {
        if !c.is_zero() {
            b.assign_ids(0, StateId(s as u32), 0, c)?;
        }
    }
    Ok(b.build())
}

/// Lumpability: related states have equal aggregate rates into every class.
pub fn is_lumping(m: &CtmcModel, r: &Partition) -> Result<bool, ModelError> {
    check_carrier(&m.states, r)?;
    Ok(rates_respect(&m.transitions, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuation::Key;
    use crate::semiring::SemiringValue;

    fn q(n: u64, d: u64) -> NonNegRational {
        NonNegRational::from_ratio(n, d).unwrap()
    }

    fn c1() -> CtmcModel {
        CtmcModel {
            states: ["s0", "s1", "s2", "u"].map(String::from).to_vec(),
            transitions: vec![(0, q(1, 1), 1), (0, q(1, 1), 2), (1, q(2, 1), 3), (2, q(2, 1), 3)],
            dtmc: false,
        }
    }

    #[test]
    fn multiplicities_are_summed() {
        let m = CtmcModel {
            states: vec!["s".into(), "t".into()],
            transitions: vec![(0, q(1, 2), 1), (0, q(1, 2), 1)],
            dtmc: false,
        };
        let f = encode_ctmc(&m).unwrap();
        assert_eq!(f.theta(0, StateId(0), 0).unwrap().entries(), &[(Key::state(1), SemiringValue::rat(1, 1))]);
        assert!(f.theta(0, StateId(1), 0).unwrap().is_zero());
    }

    #[test]
    fn c1_lumpings() {
        let m = c1();
        assert!(is_lumping(&m, &Partition::identity(4)).unwrap());
        let coarse = Partition::from_blocks(4, [vec![0], vec![1, 2], vec![3]]).unwrap();
        assert!(is_lumping(&m, &coarse).unwrap());
        assert_eq!(m.rate_into(1, &[3]), q(2, 1));
        let merged = Partition::from_blocks(4, [vec![0, 1, 2], vec![3]]).unwrap();
        assert!(!is_lumping(&m, &merged).unwrap());
        let f = encode_ctmc(&m).unwrap();
        assert_eq!(crate::bisim::coarsest_bisimulation(&f, None).unwrap(), coarse);
    }

    #[test]
    fn merging_s0_and_s1_breaks_lumping() {
        // R(s0, {s0,s1,s2}) = 2 but R(s1, {s0,s1,s2}) = 0.
        let m = c1();
        let p = Partition::from_blocks(4, [vec![0, 1], vec![2], vec![3]]).unwrap();
        assert!(!is_lumping(&m, &p).unwrap());
    }

    #[test]
    fn dtmc_must_be_stochastic() {
        let mut m = c1();
        m.dtmc = true;
        assert!(matches!(encode_ctmc(&m), Err(ModelError::NotStochastic { .. })));
        let ok = CtmcModel {
            states: vec!["s".into(), "t".into()],
            transitions: vec![(0, q(1, 4), 1), (0, q(3, 4), 0)],
            dtmc: true,
        };
        assert!(encode_ctmc(&ok).is_ok());
    }

    #[test]
    fn zero_rate_rejected() {
        let m = CtmcModel { states: vec!["s".into()], transitions: vec![(0, q(0, 1), 0)], dtmc: false };
        assert!(matches!(encode_ctmc(&m), Err(ModelError::NonPositiveRate { .. })));
    }
}
