//! Bisimulation for state-to-function transition systems.
//!
//! An equivalence `E` on states is a bisimulation when, for every pair of
//! related states `x`, `y`, every component `i` and label `ℓ`,
//! `θᵢ(x)(ℓ)[C] = θᵢ(y)(ℓ)[C]` for every class `C` of the lifting of `E`
//! one level below `θᵢ`'s values. The coarsest one is computed by
//! signature refinement: split every block by its members' block-sum
//! vectors until nothing splits.

use thiserror::Error;

use crate::continuation::{Key, StateId};
use crate::lifting::{block_sums, lift_chain, BlockSums, LiftChain, LiftError};
use crate::partition::{all_partitions, Partition};
use crate::semiring::SemiringValue;
use crate::system::Futs;

/// Default state cap for [`brute_force_coarsest`] (`Bell(6) = 203`).
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisimError {
    #[error("relation has {found} elements but the system has {expected} states")]
    CarrierMismatch { expected: usize, found: usize },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("{states} states exceed the brute-force cap of {cap}")]
    TooManyStates { states: usize, cap: usize },
    #[error("no unique coarsest bisimulation among the enumerated relations")]
    NoUniqueCoarsest,
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Block sums of every `θᵢ(x)(ℓ)`, indexed `[component][label]`.
pub type Signature = Vec<Vec<BlockSums>>;

/// A failed instance of the transfer condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub left: StateId,
    pub right: StateId,
    /// 0-based component index.
    pub component: usize,
    pub label: usize,
    /// Nesting level of the class members (0 = states).
    pub class_level: usize,
    pub class: Vec<Key>,
    pub left_value: SemiringValue,
    pub right_value: SemiringValue,
}

fn check_carrier(futs: &Futs, e: &Partition) -> Result<(), BisimError> {
    if e.len() != futs.num_states() {
        return Err(BisimError::CarrierMismatch { expected: futs.num_states(), found: e.len() });
    }
    Ok(())
}

fn chains(futs: &Futs, e: &Partition) -> Result<Vec<LiftChain>, BisimError> {
    (0..futs.num_components()).map(|i| lift_chain(e, futs, i).map_err(Into::into)).collect()
}

fn signature_of(futs: &Futs, chains: &[LiftChain], x: StateId) -> Result<Signature, BisimError> {
    let mut sig = Vec::with_capacity(chains.len());
    for (i, chain) in chains.iter().enumerate() {
        let labels = futs.futs_type().components[i].labels.len();
        let mut per_label = Vec::with_capacity(labels);
        for l in 0..labels {
            per_label.push(match futs.theta_ref(i, x, l) {
                Some(c) => block_sums(c, chain.top())?,
                None => Vec::new(),
            });
        }
        sig.push(per_label);
    }
    Ok(sig)
}

/// Signatures of all states with respect to `e`.
pub fn signatures(futs: &Futs, e: &Partition) -> Result<Vec<Signature>, BisimError> {
    check_carrier(futs, e)?;
    let chains = chains(futs, e)?;
    futs.states().map(|x| signature_of(futs, &chains, x)).collect()
}

/// First violation of the transfer condition, comparing every block member
/// against the block's smallest state.
pub fn find_violation(futs: &Futs, e: &Partition) -> Result<Option<Violation>, BisimError> {
    check_carrier(futs, e)?;
    let chains = chains(futs, e)?;
    let sigs: Vec<Signature> = futs.states().map(|x| signature_of(futs, &chains, x)).collect::<Result<_, _>>()?;
    for block in e.blocks() {
        let rep = block[0];
        for &y in &block[1..] {
            if sigs[rep] == sigs[y] {
                continue;
            }
            for (i, chain) in chains.iter().enumerate() {
                for (l, (a, b)) in sigs[rep][i].iter().zip(&sigs[y][i]).enumerate() {
                    if a == b {
                        continue;
                    }
                    let class = first_difference(a, b);
                    let top = chain.top();
                    let value = |sums: &BlockSums| {
                        sums.iter()
                            .find(|(c, _)| *c == class)
                            .map(|(_, v)| v.clone())
                            .unwrap_or_else(|| futs.futs_type().components[i].semirings.last().unwrap().zero())
                    };
                    return Ok(Some(Violation {
                        left: StateId(rep as u32),
                        right: StateId(y as u32),
                        component: i,
                        label: l,
                        class_level: chain.levels.len() - 1,
                        class: top.class_members(class),
                        left_value: value(a),
                        right_value: value(b),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Smallest class id on which two distinct block-sum vectors disagree.
fn first_difference(a: &BlockSums, b: &BlockSums) -> usize {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) => {
                if ca < cb {
                    return *ca;
                }
                if cb < ca {
                    return *cb;
                }
                if va != vb {
                    return *ca;
                }
                i += 1;
                j += 1;
            }
            (Some((ca, _)), None) => return *ca,
            (None, Some((cb, _))) => return *cb,
            (None, None) => unreachable!("vectors are distinct"),
        }
    }
}

pub fn is_bisimulation(futs: &Futs, e: &Partition) -> Result<bool, BisimError> {
    check_carrier(futs, e)?;
    let sigs = signatures(futs, e)?;
    Ok(e.blocks().iter().all(|b| b[1..].iter().all(|&y| sigs[y] == sigs[b[0]])))
}

/// Result of [`refine`]: the fixpoint and the block count after each pass.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub partition: Partition,
    /// Block counts, starting with the initial partition.
    pub block_counts: Vec<usize>,
}

/// Signature refinement from `initial` (one block by default).
///
/// The optional initial partition is an extension for state-labelled
/// variants; the result is the coarsest bisimulation refining it.
pub fn refine(futs: &Futs, initial: Option<&Partition>) -> Result<Refinement, BisimError> {
    let mut current = match initial {
        Some(p) => {
            check_carrier(futs, p)?;
            p.clone()
        }
        None => Partition::single_block(futs.num_states()),
    };
    let mut block_counts = vec![current.num_blocks()];
    loop {
        let sigs = signatures(futs, &current)?;
        let next = current.refine_by(&sigs);
        if next.num_blocks() == current.num_blocks() {
            return Ok(Refinement { partition: current, block_counts });
        }
        block_counts.push(next.num_blocks());
        current = next;
    }
}

pub fn coarsest_bisimulation(futs: &Futs, initial: Option<&Partition>) -> Result<Partition, BisimError> {
    refine(futs, initial).map(|r| r.partition)
}

pub fn bisimilar(futs: &Futs, s: &str, t: &str) -> Result<bool, BisimError> {
    let lookup = |n: &str| futs.state(n).ok_or_else(|| BisimError::UnknownState(n.to_string()));
    let (s, t) = (lookup(s)?, lookup(t)?);
    let p = coarsest_bisimulation(futs, None)?;
    Ok(p.same_block(s.index(), t.index()))
}

/// Enumerates every equivalence relation and keeps the coarsest one that
/// passes [`is_bisimulation`]. Meant as an oracle for small systems.
pub fn brute_force_coarsest(futs: &Futs, cap: usize) -> Result<Partition, BisimError> {
    let n = futs.num_states();
    if n > cap {
        return Err(BisimError::TooManyStates { states: n, cap });
    }
    let mut passing = Vec::new();
    for p in all_partitions(n) {
        if is_bisimulation(futs, &p)? {
            passing.push(p);
        }
    }
    let best = passing.iter().min_by_key(|p| p.num_blocks()).cloned().ok_or(BisimError::NoUniqueCoarsest)?;
    if passing.iter().any(|p| !p.refines(&best)) {
        return Err(BisimError::NoUniqueCoarsest);
    }
    Ok(best)
}
