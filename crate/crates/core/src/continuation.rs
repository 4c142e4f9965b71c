//! Finitely supported functions into a semiring, possibly nested.
//!
//! A level-1 continuation maps states to semiring values. A level-`k`
//! continuation maps level-`(k-1)` continuations to values; those inner
//! continuations are hash-consed in a [`Registry`] so they can be used as
//! keys by id.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::semiring::{SemiringError, SemiringId, SemiringValue};

/// Index of a state in its system's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Id of a continuation in a [`Registry`], assigned in registration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContId(pub u32);

impl ContId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A key of a continuation: a state at level 1, a registered continuation
/// one level down otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    State(StateId),
    Cont(ContId),
}

impl Key {
    pub fn state(i: usize) -> Key {
        Key::State(StateId(i as u32))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContinuationError {
    #[error("duplicate key {0:?}")]
    DuplicateKey(Key),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("key {key:?} is not valid at level {level}")]
    BadLevel { key: Option<Key>, level: usize },
    #[error("key {0:?} has no image under the map")]
    UnmappedKey(Key),
    #[error("continuation id {0:?} is not registered")]
    UnknownContinuation(ContId),
}

/// A canonical finitely supported function: zeros dropped, keys sorted.
///
/// Two continuations are equal iff their canonical forms coincide, which
/// makes the derived `Eq`/`Hash` the extensional equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Continuation {
    semiring: SemiringId,
    level: usize,
    entries: Vec<(Key, SemiringValue)>,
}

impl Continuation {
    /// Builds the canonical form of `pairs`.
    ///
    /// Keys must be states at level 1 and continuation ids above. Inner ids
    /// are not resolved here; [`Registry::intern`] does that.
    pub fn new(
        semiring: SemiringId,
        level: usize,
        pairs: impl IntoIterator<Item = (Key, SemiringValue)>,
    ) -> Result<Self, ContinuationError> {
        if level == 0 {
            return Err(ContinuationError::BadLevel { key: None, level });
        }
        let mut map = BTreeMap::new();
        for (key, value) in pairs {
            let key_ok = matches!((key, level), (Key::State(_), 1)) || matches!((key, level > 1), (Key::Cont(_), true));
            if !key_ok {
                return Err(ContinuationError::BadLevel { key: Some(key), level });
            }
            if value.semiring() != semiring {
                return Err(SemiringError::MixedSemiring(semiring, value.semiring()).into());
            }
            if map.insert(key, value).is_some() {
                return Err(ContinuationError::DuplicateKey(key));
            }
        }
        Ok(Continuation { semiring, level, entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect() })
    }

    /// The zero function of the given semiring and level.
    pub fn zero(semiring: SemiringId, level: usize) -> Self {
        Continuation { semiring, level, entries: Vec::new() }
    }

    /// Sums values of equal keys instead of rejecting them.
    fn from_accumulated(semiring: SemiringId, level: usize, map: BTreeMap<Key, SemiringValue>) -> Self {
        Continuation { semiring, level, entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn semiring(&self) -> SemiringId {
        self.semiring
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Support entries in canonical key order.
    pub fn entries(&self) -> &[(Key, SemiringValue)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = Key> + '_ {
        self.entries.iter().map(|(k, _)| *k)
    }

    pub fn evaluate(&self, key: Key) -> SemiringValue {
        match self.entries.binary_search_by(|(k, _)| k.cmp(&key)) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => self.semiring.zero(),
        }
    }

    /// `φ[A]`: the sum of the values over the keys in `block`.
    pub fn block_sum<'a>(&self, block: impl IntoIterator<Item = &'a Key>) -> SemiringValue {
        let block: BTreeSet<Key> = block.into_iter().copied().collect();
        let mut acc = self.semiring.zero();
        for (key, value) in &self.entries {
            if block.contains(key) {
                acc.accumulate(value).expect("entries share the continuation's semiring");
            }
        }
        acc
    }

    /// Total mass, i.e. the block sum over the whole support.
    pub fn mass(&self) -> SemiringValue {
        let mut acc = self.semiring.zero();
        for (_, value) in &self.entries {
            acc.accumulate(value).expect("entries share the continuation's semiring");
        }
        acc
    }

    /// `FS(f, R)(φ)(y) = Σ_{x ∈ f⁻¹(y)} φ(x)`, applied directly to the keys.
    pub fn pushforward<F>(&self, mut f: F) -> Result<Continuation, ContinuationError>
    where
        F: FnMut(Key) -> Option<Key>,
    {
        let mut map: BTreeMap<Key, SemiringValue> = BTreeMap::new();
        for (key, value) in &self.entries {
            let target = f(*key).ok_or(ContinuationError::UnmappedKey(*key))?;
            match map.get_mut(&target) {
                Some(acc) => acc.accumulate(value)?,
                None => {
                    map.insert(target, value.clone());
                }
            }
        }
        Ok(Continuation::from_accumulated(self.semiring, self.level, map))
    }
}

impl fmt::Debug for Continuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}{{", self.level)?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match k {
                Key::State(s) => write!(f, "s{}:{v}", s.0)?,
                Key::Cont(c) => write!(f, "#{}:{v}", c.0)?,
            }
        }
        f.write_str("}")
    }
}

/// Append-only hash-consing table of continuations.
///
/// Ids are global across levels and follow registration order. Writers
/// need `&mut`, so registrations are serialized by the borrow checker.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    table: Vec<Continuation>,
    index: HashMap<Continuation, ContId>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `c`, returning the existing id if an equal continuation is
    /// already present. Keys of `c` must be registered one level down.
    pub fn intern(&mut self, c: Continuation) -> Result<ContId, ContinuationError> {
        if let Some(&id) = self.index.get(&c) {
            return Ok(id);
        }
        if c.level > 1 {
            for key in c.support() {
                let Key::Cont(id) = key else {
                    return Err(ContinuationError::BadLevel { key: Some(key), level: c.level });
                };
                let inner = self.table.get(id.index()).ok_or(ContinuationError::UnknownContinuation(id))?;
                if inner.level + 1 != c.level {
                    return Err(ContinuationError::BadLevel { key: Some(key), level: c.level });
                }
            }
        }
        let id = ContId(self.table.len() as u32);
        self.table.push(c.clone());
        self.index.insert(c, id);
        Ok(id)
    }

    /// Id of an already registered continuation.
    pub fn lookup(&self, c: &Continuation) -> Option<ContId> {
        self.index.get(c).copied()
    }

    pub fn get(&self, id: ContId) -> Option<&Continuation> {
        self.table.get(id.index())
    }

    /// Like `get`, for ids the caller obtained from this registry.
    pub fn resolve(&self, id: ContId) -> &Continuation {
        &self.table[id.index()]
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ContId, &Continuation)> {
        self.table.iter().enumerate().map(|(i, c)| (ContId(i as u32), c))
    }
}

/// Functor action of `FS(…FS(f, R₁)…, Rₖ)` on a level-`k` continuation.
///
/// Each inner key is pushed forward recursively and registered in
/// `target`; weights of keys that collapse onto the same image are summed.
/// The result is registered in `target` as well.
pub fn nested_pushforward<F>(
    f: &F,
    phi: &Continuation,
    source: &Registry,
    target: &mut Registry,
) -> Result<ContId, ContinuationError>
where
    F: Fn(StateId) -> Option<StateId>,
{
    let mut memo = HashMap::new();
    let pushed = push_rec(f, phi, source, target, &mut memo)?;
    target.intern(pushed)
}

/// Memoizing pushforward for repeated use with one state map, e.g. when
/// building a quotient.
pub struct Pushforward<'a, F> {
    f: F,
    source: &'a Registry,
    memo: HashMap<ContId, ContId>,
}

impl<'a, F> Pushforward<'a, F>
where
    F: Fn(StateId) -> Option<StateId>,
{
    pub fn new(f: F, source: &'a Registry) -> Self {
        Pushforward { f, source, memo: HashMap::new() }
    }

    /// Pushes `phi` forward without registering the top level.
    pub fn apply(&mut self, phi: &Continuation, target: &mut Registry) -> Result<Continuation, ContinuationError> {
        push_rec(&self.f, phi, self.source, target, &mut self.memo)
    }
}

fn push_rec<F>(
    f: &F,
    phi: &Continuation,
    source: &Registry,
    target: &mut Registry,
    memo: &mut HashMap<ContId, ContId>,
) -> Result<Continuation, ContinuationError>
where
    F: Fn(StateId) -> Option<StateId>,
{
    if phi.level == 1 {
        return phi.pushforward(|key| match key {
            Key::State(s) => f(s).map(Key::State),
            Key::Cont(_) => None,
        });
    }
    let mut map: BTreeMap<Key, SemiringValue> = BTreeMap::new();
    for (key, value) in phi.entries() {
        let Key::Cont(id) = *key else {
            return Err(ContinuationError::BadLevel { key: Some(*key), level: phi.level });
        };
        let image = match memo.get(&id) {
            Some(&image) => image,
            None => {
                let inner = source.get(id).ok_or(ContinuationError::UnknownContinuation(id))?;
                let pushed = push_rec(f, inner, source, target, memo)?;
                let image = target.intern(pushed)?;
                memo.insert(id, image);
                image
            }
        };
        match map.get_mut(&Key::Cont(image)) {
            Some(acc) => acc.accumulate(value)?,
            None => {
                map.insert(Key::Cont(image), value.clone());
            }
        }
    }
    Ok(Continuation::from_accumulated(phi.semiring, phi.level, map))
}
