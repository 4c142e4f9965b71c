//! State-to-function transition systems.
//!
//! A system over states `X` has `n` components. Component `i` carries a
//! label set `Lᵢ` and a semiring sequence `R_{i,1} … R_{i,mᵢ}` (innermost
//! first) and maps each `(state, label)` to a level-`mᵢ` continuation.
//! Pairs without an assignment denote the zero continuation.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::continuation::{ContId, Continuation, ContinuationError, Key, Registry, StateId};
use crate::semiring::SemiringId;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentType {
    pub labels: Vec<String>,
    /// `R_{i,1} … R_{i,mᵢ}`, innermost first.
    pub semirings: Vec<SemiringId>,
}

impl ComponentType {
    pub fn new(labels: impl IntoIterator<Item = impl Into<String>>, semirings: Vec<SemiringId>) -> Self {
        ComponentType { labels: labels.into_iter().map(Into::into).collect(), semirings }
    }

    /// Nesting depth `mᵢ`.
    pub fn depth(&self) -> usize {
        self.semirings.len()
    }

    /// Semiring of the continuations at `level` (1-based).
    pub fn semiring_at(&self, level: usize) -> SemiringId {
        self.semirings[level - 1]
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// The type functor of a system: one [`ComponentType`] per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FutsType {
    pub components: Vec<ComponentType>,
}

impl FutsType {
    pub fn new(components: Vec<ComponentType>) -> Result<Self, FutsError> {
        let ty = FutsType { components };
        ty.validate()?;
        Ok(ty)
    }

    pub fn validate(&self) -> Result<(), FutsError> {
        if self.components.is_empty() {
            return Err(FutsError::InvalidType("at least one component is required".into()));
        }
        for (i, c) in self.components.iter().enumerate() {
            if c.semirings.is_empty() {
                return Err(FutsError::InvalidType(format!("component {} has no semiring", i + 1)));
            }
            if c.labels.is_empty() {
                return Err(FutsError::InvalidType(format!("component {} has no labels", i + 1)));
            }
            let mut seen = HashSet::new();
            for l in &c.labels {
                if !seen.insert(l) {
                    return Err(FutsError::InvalidType(format!("component {} declares label `{l}` twice", i + 1)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FutsError {
    #[error("invalid type: {0}")]
    InvalidType(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown label `{label}` in component {component}")]
    UnknownLabel { component: usize, label: String },
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("continuation level {found} does not match expected level {expected}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("semiring {found} does not match expected {expected} at level {level}")]
    SemiringMismatch { level: usize, expected: SemiringId, found: SemiringId },
    #[error("({state}, {label}) of component {component} assigned twice")]
    DuplicateAssignment { component: usize, state: String, label: String },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error(transparent)]
    Continuation(#[from] ContinuationError),
}

/// A validated system. Immutable once built.
#[derive(Debug, Clone)]
pub struct Futs {
    states: Vec<String>,
    ty: FutsType,
    registry: Registry,
    /// `theta[i][state * |Lᵢ| + label]`.
    theta: Vec<Vec<Option<ContId>>>,
}

/// Incremental construction of a [`Futs`]; see [`build_futs`] for the
/// one-shot form.
#[derive(Debug)]
pub struct FutsBuilder {
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    ty: FutsType,
    registry: Registry,
    theta: Vec<Vec<Option<ContId>>>,
}

impl FutsBuilder {
    pub fn new(ty: FutsType, states: impl IntoIterator<Item = impl Into<String>>) -> Result<Self, FutsError> {
        ty.validate()?;
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let mut state_index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if state_index.insert(s.clone(), StateId(i as u32)).is_some() {
                return Err(FutsError::DuplicateState(s.clone()));
            }
        }
        let theta = ty.components.iter().map(|c| vec![None; states.len() * c.labels.len()]).collect();
        Ok(FutsBuilder { states, state_index, ty, registry: Registry::new(), theta })
    }

    /// Starts from an existing registry whose level-1 keys must be states
    /// of the new system.
    pub fn with_registry(
        ty: FutsType,
        states: impl IntoIterator<Item = impl Into<String>>,
        registry: Registry,
    ) -> Result<Self, FutsError> {
        let mut b = Self::new(ty, states)?;
        for (_, c) in registry.iter() {
            if c.level() == 1 {
                b.check_state_keys(c)?;
            }
        }
        b.registry = registry;
        Ok(b)
    }

    pub fn state(&self, name: &str) -> Result<StateId, FutsError> {
        self.state_index.get(name).copied().ok_or_else(|| FutsError::UnknownState(name.to_string()))
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Registers an inner continuation so it can serve as a key one level up.
    pub fn intern(&mut self, c: Continuation) -> Result<ContId, FutsError> {
        if c.level() == 1 {
            self.check_state_keys(&c)?;
        }
        Ok(self.registry.intern(c)?)
    }

    fn check_state_keys(&self, c: &Continuation) -> Result<(), FutsError> {
        for key in c.support() {
            if let Key::State(s) = key {
                if s.index() >= self.states.len() {
                    return Err(FutsError::UnknownState(format!("#{}", s.0)));
                }
            }
        }
        Ok(())
    }

    /// Checks every level of `c` against the component's semiring sequence.
    fn check_shape(&self, component: usize, c: &Continuation) -> Result<(), FutsError> {
        let ct = &self.ty.components[component];
        if c.level() != ct.depth() {
            return Err(FutsError::LevelMismatch { expected: ct.depth(), found: c.level() });
        }
        let mut stack = vec![c];
        while let Some(c) = stack.pop() {
            let expected = ct.semiring_at(c.level());
            if c.semiring() != expected {
                return Err(FutsError::SemiringMismatch { level: c.level(), expected, found: c.semiring() });
            }
            for key in c.support() {
                match key {
                    Key::State(_) => {}
                    Key::Cont(id) => {
                        let inner = self.registry.get(id).ok_or(ContinuationError::UnknownContinuation(id))?;
                        if inner.level() + 1 != c.level() {
                            return Err(FutsError::LevelMismatch { expected: c.level() - 1, found: inner.level() });
                        }
                        stack.push(inner);
                    }
                }
            }
            if c.level() == 1 {
                self.check_state_keys(c)?;
            }
        }
        Ok(())
    }

    /// Sets `θ_component(state)(label) = c`. `component` is 0-based.
    pub fn assign(&mut self, component: usize, state: &str, label: &str, c: Continuation) -> Result<(), FutsError> {
        let sid = self.state(state)?;
        let ct = self
            .ty
            .components
            .get(component)
            .ok_or_else(|| FutsError::IndexOutOfRange(format!("component {}", component + 1)))?;
        let lid = ct
            .label_index(label)
            .ok_or_else(|| FutsError::UnknownLabel { component: component + 1, label: label.to_string() })?;
        self.assign_ids(component, sid, lid, c)
    }

    pub fn assign_ids(
        &mut self,
        component: usize,
        state: StateId,
        label: usize,
        c: Continuation,
    ) -> Result<(), FutsError> {
        let ct = self
            .ty
            .components
            .get(component)
            .ok_or_else(|| FutsError::IndexOutOfRange(format!("component {}", component + 1)))?;
        let width = ct.labels.len();
        if label >= width {
            return Err(FutsError::IndexOutOfRange(format!("label {label}")));
        }
        if state.index() >= self.states.len() {
            return Err(FutsError::UnknownState(format!("#{}", state.0)));
        }
        self.check_shape(component, &c)?;
        let slot = state.index() * width + label;
        if self.theta[component][slot].is_some() {
            return Err(FutsError::DuplicateAssignment {
                component: component + 1,
                state: self.states[state.index()].clone(),
                label: ct.labels[label].clone(),
            });
        }
        // Explicit zeros are stored too so a second assignment is still caught.
        let id = self.registry.intern(c)?;
        self.theta[component][slot] = Some(id);
        Ok(())
    }

    pub fn build(self) -> Futs {
        Futs { states: self.states, ty: self.ty, registry: self.registry, theta: self.theta }
    }
}

/// A `(component, state, label, continuation)` assignment for
/// [`build_futs`]. Components are 0-based.
#[derive(Debug, Clone)]
pub struct Assignment {
    pub component: usize,
    pub state: String,
    pub label: String,
    pub value: Continuation,
}

/// Builds a system whose assignments only use level-1 continuations, or
/// whose inner continuations were registered up front through `inner`.
pub fn build_futs(
    ty: FutsType,
    states: impl IntoIterator<Item = impl Into<String>>,
    inner: impl IntoIterator<Item = Continuation>,
    assignments: impl IntoIterator<Item = Assignment>,
) -> Result<Futs, FutsError> {
    let mut b = FutsBuilder::new(ty, states)?;
    for c in inner {
        b.intern(c)?;
    }
    for a in assignments {
        b.assign(a.component, &a.state, &a.label, a.value)?;
    }
    Ok(b.build())
}

impl Futs {
    pub fn futs_type(&self) -> &FutsType {
        &self.ty
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u32))
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn num_components(&self) -> usize {
        self.ty.components.len()
    }

    pub fn component(&self, i: usize) -> Result<&ComponentType, FutsError> {
        self.ty
            .components
            .get(i)
            .ok_or_else(|| FutsError::IndexOutOfRange(format!("component {} of {}", i + 1, self.ty.components.len())))
    }

    /// Registry id of `θ_component(state)(label)`, `None` for zero.
    pub fn theta_id(&self, component: usize, state: StateId, label: usize) -> Option<ContId> {
        let width = self.ty.components[component].labels.len();
        self.theta[component][state.index() * width + label]
    }

    /// `θ_component(state)(label)`; the zero continuation when unassigned.
    pub fn theta(&self, component: usize, state: StateId, label: usize) -> Result<Continuation, FutsError> {
        let ct = self.component(component)?;
        if state.index() >= self.states.len() {
            return Err(FutsError::IndexOutOfRange(format!("state {}", state.0)));
        }
        if label >= ct.labels.len() {
            return Err(FutsError::IndexOutOfRange(format!("label {label}")));
        }
        Ok(self
            .theta_ref(component, state, label)
            .cloned()
            .unwrap_or_else(|| Continuation::zero(ct.semiring_at(ct.depth()), ct.depth())))
    }

    /// Borrowing variant of [`Futs::theta`] for in-range indices.
    pub fn theta_ref(&self, component: usize, state: StateId, label: usize) -> Option<&Continuation> {
        self.theta_id(component, state, label).map(|id| self.registry.resolve(id))
    }

    /// Level-`level` continuations reachable as keys from the values of
    /// component `component`, in registration order. Requires
    /// `1 <= level < mᵢ`.
    pub fn continuation_universe(&self, component: usize, level: usize) -> Result<Vec<ContId>, FutsError> {
        let ct = self.component(component)?;
        if level == 0 || level >= ct.depth() {
            return Err(FutsError::IndexOutOfRange(format!(
                "level {level} (component {} has depth {})",
                component + 1,
                ct.depth()
            )));
        }
        let mut frontier: BTreeSet<ContId> = self.theta[component].iter().flatten().copied().collect();
        for _ in (level..ct.depth()).rev() {
            let mut next = BTreeSet::new();
            for id in frontier {
                for key in self.registry.resolve(id).support() {
                    if let Key::Cont(inner) = key {
                        next.insert(inner);
                    }
                }
            }
            frontier = next;
        }
        Ok(frontier.into_iter().collect())
    }
}
