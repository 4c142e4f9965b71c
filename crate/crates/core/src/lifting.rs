//! Lifting an equivalence on keys to an equivalence on continuations.
//!
//! `φ` and `ψ` are related by the lifting of `E` iff `φ[B] = ψ[B]` for every
//! block `B` of `E`. Applying this level by level pushes an equivalence on
//! states up to every nesting depth of a component.
//!
//! Liftings are computed on the finite set of continuations a system can
//! actually reach. Whether two reachable continuations are related never
//! depends on unreachable ones, so nothing observable changes.

use std::collections::HashMap;

use thiserror::Error;

use crate::continuation::{ContId, Continuation, Key, Registry};
use crate::partition::Partition;
use crate::semiring::SemiringValue;
use crate::system::{Futs, FutsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("key {0:?} lies outside the carrier of the relation")]
    KeyOutsideCarrier(Key),
    #[error("relation has {found} elements but the system has {expected} states")]
    CarrierMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Futs(#[from] FutsError),
}

/// A [`Partition`] over an explicit ordered carrier of keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPartition {
    carrier: Vec<Key>,
    index: HashMap<Key, usize>,
    partition: Partition,
}

impl KeyPartition {
    pub fn new(carrier: Vec<Key>, partition: Partition) -> Self {
        assert_eq!(carrier.len(), partition.len(), "carrier and partition sizes differ");
        let index = carrier.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        KeyPartition { carrier, index, partition }
    }

    /// A partition of states `0..n`.
    pub fn over_states(partition: Partition) -> Self {
        let carrier = (0..partition.len()).map(Key::state).collect();
        Self::new(carrier, partition)
    }

    pub fn carrier(&self) -> &[Key] {
        &self.carrier
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn position(&self, key: Key) -> Option<usize> {
        self.index.get(&key).copied()
    }

    /// Canonical block id of `key` (a carrier position).
    pub fn class_of(&self, key: Key) -> Option<usize> {
        self.position(key).map(|i| self.partition.block_of(i))
    }

    pub fn class_members(&self, class: usize) -> Vec<Key> {
        self.partition.block(class).iter().map(|&i| self.carrier[i]).collect()
    }
}

/// Canonical vector of nonzero block sums `(class id, φ[class])`, ordered
/// by class id. Two continuations are related by the lifting iff their
/// signatures are equal.
pub type BlockSums = Vec<(usize, SemiringValue)>;

pub fn block_sums(phi: &Continuation, e: &KeyPartition) -> Result<BlockSums, LiftError> {
    let mut sums: Vec<(usize, SemiringValue)> = Vec::with_capacity(phi.entries().len());
    for (key, value) in phi.entries() {
        let class = e.class_of(*key).ok_or(LiftError::KeyOutsideCarrier(*key))?;
        match sums.iter_mut().find(|(c, _)| *c == class) {
            Some((_, acc)) => acc.accumulate(value).expect("single semiring per continuation"),
            None => sums.push((class, value.clone())),
        }
    }
    sums.retain(|(_, v)| !v.is_zero());
    sums.sort_unstable_by_key(|(c, _)| *c);
    Ok(sums)
}

/// The lifting of `e` restricted to an arbitrary finite family `conts`.
/// Element `i` of the result stands for `conts[i]`.
pub fn lift_continuations(e: &KeyPartition, conts: &[&Continuation]) -> Result<Partition, LiftError> {
    let sigs = conts.iter().map(|c| block_sums(c, e)).collect::<Result<Vec<_>, _>>()?;
    Ok(Partition::from_keys(&sigs))
}

/// The lifting of `e` to the registered continuations `universe`.
pub fn lift_once(e: &KeyPartition, universe: &[ContId], registry: &Registry) -> Result<KeyPartition, LiftError> {
    let conts: Vec<&Continuation> = universe.iter().map(|&id| registry.resolve(id)).collect();
    let partition = lift_continuations(e, &conts)?;
    Ok(KeyPartition::new(universe.iter().map(|&id| Key::Cont(id)).collect(), partition))
}

/// Lifted relations of one component, `levels[0]` on states and
/// `levels[k]` on the reachable level-`k` continuations.
#[derive(Debug, Clone)]
pub struct LiftChain {
    pub levels: Vec<KeyPartition>,
}

impl LiftChain {
    /// The relation whose classes the top-level continuations are summed over.
    pub fn top(&self) -> &KeyPartition {
        self.levels.last().expect("chain always has the state level")
    }
}

pub fn lift_chain(e: &Partition, futs: &Futs, component: usize) -> Result<LiftChain, LiftError> {
    if e.len() != futs.num_states() {
        return Err(LiftError::CarrierMismatch { expected: futs.num_states(), found: e.len() });
    }
    let depth = futs.component(component)?.depth();
    let mut levels = vec![KeyPartition::over_states(e.clone())];
    for level in 1..depth {
        let universe = futs.continuation_universe(component, level)?;
        let next = lift_once(levels.last().unwrap(), &universe, futs.registry())?;
        levels.push(next);
    }
    Ok(LiftChain { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::SemiringId::{Boolean, NonNegRational as Real};
    use crate::system::{ComponentType, FutsBuilder, FutsType};
    use proptest::prelude::*;

    fn dist(pairs: &[(usize, u64, u64)]) -> Continuation {
        Continuation::new(Real, 1, pairs.iter().map(|&(k, n, d)| (Key::state(k), SemiringValue::rat(n, d)))).unwrap()
    }

    fn states(p: Partition) -> KeyPartition {
        KeyPartition::over_states(p)
    }

    #[test]
    fn identity_lifting_groups_equal_continuations() {
        let a = dist(&[(0, 1, 2), (1, 1, 2)]);
        let b = dist(&[(2, 1, 1)]);
        let p = lift_continuations(&states(Partition::identity(3)), &[&a, &b, &a]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn one_block_compares_total_mass() {
        // E = {{x,y,z}}; φ = {x:1/2, y:1/2}, ψ = {z:1}.
        let phi = dist(&[(0, 1, 2), (1, 1, 2)]);
        let psi = dist(&[(2, 1, 1)]);
        let p = lift_continuations(&states(Partition::single_block(3)), &[&phi, &psi]).unwrap();
        assert!(p.same_block(0, 1));
    }

    #[test]
    fn differing_block_mass_separates() {
        // E = {{x,y},{z}}; φ = {x:3/10, z:7/10}, ψ = {y:2/5, z:3/5}.
        let e = Partition::from_blocks(3, [vec![0, 1], vec![2]]).unwrap();
        let phi = dist(&[(0, 3, 10), (2, 7, 10)]);
        let psi = dist(&[(1, 2, 5), (2, 3, 5)]);
        let p = lift_continuations(&states(e), &[&phi, &psi]).unwrap();
        assert!(!p.same_block(0, 1));
    }

    #[test]
    fn key_outside_carrier_is_an_error() {
        let phi = dist(&[(5, 1, 1)]);
        assert_eq!(
            lift_continuations(&states(Partition::identity(2)), &[&phi]),
            Err(LiftError::KeyOutsideCarrier(Key::state(5)))
        );
    }

    fn pa(dists: &[(&str, Vec<Continuation>)]) -> Futs {
        let ty = FutsType::new(vec![ComponentType::new(["a"], vec![Real, Boolean])]).unwrap();
        let mut b = FutsBuilder::new(ty, ["s", "t", "u", "v"]).unwrap();
        for (state, ds) in dists {
            let keys: Vec<_> =
                ds.iter().map(|d| (Key::Cont(b.intern(d.clone()).unwrap()), SemiringValue::Bool(true))).collect();
            b.assign(0, state, "a", Continuation::new(Boolean, 2, keys).unwrap()).unwrap();
        }
        b.build()
    }

    #[test]
    fn chain_of_simple_component_is_just_the_relation() {
        let ty = FutsType::new(vec![ComponentType::new(["a"], vec![Boolean])]).unwrap();
        let f = FutsBuilder::new(ty, ["x", "y"]).unwrap().build();
        let chain = lift_chain(&Partition::identity(2), &f, 0).unwrap();
        assert_eq!(chain.levels.len(), 1);
        assert_eq!(chain.top().partition(), &Partition::identity(2));
    }

    #[test]
    fn chain_groups_equal_distributions_under_identity() {
        let f = pa(&[("s", vec![dist(&[(2, 1, 1)])]), ("t", vec![dist(&[(3, 1, 1)])])]);
        let chain = lift_chain(&Partition::identity(4), &f, 0).unwrap();
        assert_eq!(chain.levels.len(), 2);
        assert_eq!(chain.top().partition().num_blocks(), 2);
    }

    #[test]
    fn chain_relates_diracs_of_related_states() {
        // u, v in one block ⇒ Dirac(u) and Dirac(v) share a level-1 class.
        let f = pa(&[("s", vec![dist(&[(2, 1, 1)])]), ("t", vec![dist(&[(3, 1, 1)])])]);
        let e = Partition::from_blocks(4, [vec![0], vec![1], vec![2, 3]]).unwrap();
        let chain = lift_chain(&e, &f, 0).unwrap();
        assert_eq!(chain.top().partition().num_blocks(), 1);
        assert!(matches!(
            lift_chain(&Partition::identity(3), &f, 0),
            Err(LiftError::CarrierMismatch { expected: 4, found: 3 })
        ));
    }

    fn arb_family(n: usize) -> impl Strategy<Value = Vec<Continuation>> {
        let one = prop::collection::btree_map(0..n, (1u64..4, 1u64..3), 0..4).prop_map(|m| {
            Continuation::new(Real, 1, m.into_iter().map(|(k, (a, b))| (Key::state(k), SemiringValue::rat(a, b))))
                .unwrap()
        });
        prop::collection::vec(one, 1..8)
    }

    proptest! {
        #[test]
        fn lifting_is_monotone(
            family in arb_family(5),
            fine_keys in prop::collection::vec(0u8..4, 5),
            merge in prop::collection::vec(0u8..2, 5),
        ) {
            let fine = Partition::from_keys(&fine_keys);
            // Coarsen by merging blocks according to `merge` on block ids.
            let coarse_keys: Vec<u8> = (0..5).map(|x| merge[fine.block_of(x)]).collect();
            let coarse = Partition::from_keys(&coarse_keys).join(&fine);
            prop_assert!(fine.refines(&coarse));
            let refs: Vec<&Continuation> = family.iter().collect();
            let lf = lift_continuations(&states(fine), &refs).unwrap();
            let lc = lift_continuations(&states(coarse), &refs).unwrap();
            prop_assert!(lf.refines(&lc));
        }

        #[test]
        fn related_continuations_agree_on_unions_of_blocks(
            family in arb_family(5),
            keys in prop::collection::vec(0u8..3, 5),
            pick in prop::collection::vec(any::<bool>(), 5),
        ) {
            let e = Partition::from_keys(&keys);
            let refs: Vec<&Continuation> = family.iter().collect();
            let lifted = lift_continuations(&states(e.clone()), &refs).unwrap();
            let union: Vec<Key> = (0..5).filter(|&x| pick[e.block_of(x)]).map(Key::state).collect();
            for b in lifted.blocks() {
                let first = family[b[0]].block_sum(&union);
                for &i in b {
                    prop_assert_eq!(family[i].block_sum(&union), first.clone());
                }
            }
        }
    }
}
