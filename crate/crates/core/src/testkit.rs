//! Seeded random models and equivalences for property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::continuation::{Continuation, Key};
use crate::encodings::{CtmcModel, Distribution, ImcModel, LtsModel, MaModel, Model, PaModel, DELTA};
use crate::model_io::{ModelDocument, ModelKind};
use crate::partition::Partition;
use crate::semiring::{NonNegRational, SemiringId, SemiringValue};
use crate::system::{ComponentType, FutsBuilder, FutsType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad generator parameters: {0}")]
pub struct BadParams(pub String);

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub states: usize,
    /// Probability in `[0, 1]` that each candidate transition is emitted.
    pub density: f64,
    pub rate_pool: Vec<NonNegRational>,
    pub actions: Vec<String>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { states: 4, density: 0.3, rate_pool: default_pool(), actions: vec!["a".into(), "b".into()] }
    }
}

impl GenParams {
    pub fn new(states: usize, density: f64) -> Self {
        GenParams { states, density, ..GenParams::default() }
    }

    fn check(&self) -> Result<(), BadParams> {
        if self.states == 0 {
            return Err(BadParams("at least one state is required".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(BadParams(format!("density {} is outside [0, 1]", self.density)));
        }
        if self.rate_pool.is_empty() || self.rate_pool.iter().any(NonNegRational::is_zero) {
            return Err(BadParams("rate pool must be a nonempty set of positive rationals".into()));
        }
        if self.actions.is_empty() {
            return Err(BadParams("at least one action is required".into()));
        }
        Ok(())
    }
}

pub fn default_pool() -> Vec<NonNegRational> {
    vec![NonNegRational::from_ratio(1, 2).unwrap(), NonNegRational::one(), NonNegRational::from_integer(2)]
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    p: &'a GenParams,
}

impl Gen<'_> {
    fn hit(&mut self) -> bool {
        self.rng.gen_bool(self.p.density)
    }

    fn rate(&mut self) -> NonNegRational {
        self.p.rate_pool.choose(&mut self.rng).unwrap().clone()
    }

    fn action_triples(&mut self) -> Vec<(usize, usize, usize)> {
        let n = self.p.states;
        let mut out = Vec::new();
        for s in 0..n {
            for a in 0..self.p.actions.len() {
                for t in 0..n {
                    if self.hit() {
                        out.push((s, a, t));
                    }
                }
            }
        }
        out
    }

    fn rates(&mut self) -> Vec<(usize, NonNegRational, usize)> {
        let n = self.p.states;
        let mut out = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if self.hit() {
                    let r = self.rate();
                    out.push((s, r, t));
                }
            }
        }
        out
    }

    /// Each chosen row is normalised to mass 1.
    fn stochastic(&mut self) -> Vec<(usize, NonNegRational, usize)> {
        let mut out = Vec::new();
        for s in 0..self.p.states {
            let mut row = Vec::new();
            for t in 0..self.p.states {
                if self.hit() {
                    row.push((t, self.rate()));
                }
            }
            let total: NonNegRational = row.iter().map(|(_, w)| w).sum();
            for (t, w) in row {
                out.push((s, w.checked_div(&total).unwrap(), t));
            }
        }
        out
    }

    fn distribution(&mut self) -> Distribution {
        let n = self.p.states;
        let mut support: Vec<usize> = (0..n).filter(|_| self.rng.gen_bool(0.5)).collect();
        if support.is_empty() {
            support.push(self.rng.gen_range(0..n));
        }
        let weights: Vec<NonNegRational> = support.iter().map(|_| self.rate()).collect();
        let total: NonNegRational = weights.iter().sum();
        Distribution::new(support.into_iter().zip(weights.iter().map(|w| w.checked_div(&total).unwrap())))
            .expect("normalised")
    }

    /// Up to two steps per state and action, duplicates dropped.
    fn steps(&mut self) -> Vec<(usize, usize, Distribution)> {
        let mut out: Vec<(usize, usize, Distribution)> = Vec::new();
        for s in 0..self.p.states {
            for a in 0..self.p.actions.len() {
                for _ in 0..2 {
                    if self.hit() {
                        let d = self.distribution();
                        if !out.iter().any(|(s2, a2, d2)| (*s2, *a2) == (s, a) && *d2 == d) {
                            out.push((s, a, d));
                        }
                    }
                }
            }
        }
        out
    }

    fn rational_cont(&mut self, level: usize, keys: &[Key]) -> Continuation {
        let mut pairs = Vec::new();
        for k in keys {
            if self.rng.gen_bool(0.5) {
                pairs.push((*k, SemiringValue::Rat(self.rate())));
            }
        }
        Continuation::new(SemiringId::NonNegRational, level, pairs).expect("distinct keys")
    }

    /// One depth-3 component (`real bool real`, innermost first) and a
    /// delay component.
    fn futs(&mut self, names: Vec<String>) -> Model {
        let n = self.p.states;
        let ty = FutsType::new(vec![
            ComponentType::new(
                self.p.actions.clone(),
                vec![SemiringId::NonNegRational, SemiringId::Boolean, SemiringId::NonNegRational],
            ),
            ComponentType::new([DELTA], vec![SemiringId::NonNegRational]),
        ])
        .expect("valid type");
        let mut b = FutsBuilder::new(ty, names).expect("distinct names");
        let state_keys: Vec<Key> = (0..n).map(Key::state).collect();
        let mut level1 = Vec::new();
        for _ in 0..3 {
            let c = self.rational_cont(1, &state_keys);
            level1.push(Key::Cont(b.intern(c).expect("level-1 continuation")));
        }
        level1.sort();
        level1.dedup();
        let mut level2 = Vec::new();
        for _ in 0..3 {
            let mut pairs = Vec::new();
            for k in &level1 {
                if self.rng.gen_bool(0.5) {
                    pairs.push((*k, SemiringValue::Bool(true)));
                }
            }
            let c = Continuation::new(SemiringId::Boolean, 2, pairs).expect("distinct keys");
            level2.push(Key::Cont(b.intern(c).expect("level-2 continuation")));
        }
        level2.sort();
        level2.dedup();
        for s in 0..n {
            for a in 0..self.p.actions.len() {
                if self.hit() {
                    let c = self.rational_cont(3, &level2);
                    b.assign_ids(0, crate::StateId(s as u32), a, c).expect("fresh assignment");
                }
            }
            let row = self.rational_cont(1, &state_keys);
            if self.hit() {
                b.assign_ids(1, crate::StateId(s as u32), 0, row).expect("fresh assignment");
            }
        }
        Model::Futs(b.build())
    }
}

/// A valid model of `kind` with states `s0 … s(n-1)`; identical for
/// identical arguments.
pub fn random_model(kind: ModelKind, seed: u64, params: &GenParams) -> Result<ModelDocument, BadParams> {
    params.check()?;
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), p: params };
    let states: Vec<String> = (0..params.states).map(|i| format!("s{i}")).collect();
    let actions = params.actions.clone();
    let model = match kind {
        ModelKind::Lts => Model::Lts(LtsModel { states, actions, transitions: g.action_triples() }),
        ModelKind::Ctmc => Model::Ctmc(CtmcModel { states, transitions: g.rates(), dtmc: false }),
        ModelKind::Dtmc => Model::Ctmc(CtmcModel { states, transitions: g.stochastic(), dtmc: true }),
        ModelKind::Imc => {
            let interactive = g.action_triples();
            Model::Imc(ImcModel { states, actions, interactive, markovian: g.rates() })
        }
        ModelKind::Pa => Model::Pa(PaModel { states, actions, steps: g.steps() }),
        ModelKind::Ma => {
            let immediate = g.steps();
            Model::Ma(MaModel { states, actions, immediate, timed: g.rates() })
        }
        ModelKind::Futs => g.futs(states),
    };
    if let Some(bad) = validate(&model) {
        return Err(BadParams(bad));
    }
    Ok(ModelDocument::new(kind, model))
}

fn validate(model: &Model) -> Option<String> {
    let r = match model {
        Model::Lts(m) => m.validate(),
        Model::Ctmc(m) => m.validate(),
        Model::Imc(m) => m.validate(),
        Model::Pa(m) => m.validate(),
        Model::Ma(m) => m.validate(),
        Model::Futs(_) => Ok(()),
    };
    r.err().map(|e| e.to_string())
}

/// Sequential assignment: element `i` joins one of the existing blocks or
/// opens a new one, uniformly.
pub fn random_equivalence(n: usize, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys = Vec::with_capacity(n);
    let mut blocks = 0;
    for _ in 0..n {
        let k = rng.gen_range(0..=blocks);
        if k == blocks {
            blocks += 1;
        }
        keys.push(k);
    }
    Partition::from_keys(&keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_io::{parse_model, serialize_model};
    use proptest::prelude::*;

    #[test]
    fn density_zero_is_transition_free() {
        for kind in ModelKind::ALL {
            let doc = random_model(kind, 3, &GenParams::new(4, 0.0)).unwrap();
            let text = serialize_model(&doc);
            assert!(!text.contains("trans"), "{kind}: {text}");
        }
    }

    #[test]
    fn deterministic() {
        let a = serialize_model(&random_model(ModelKind::Lts, 7, &GenParams::new(4, 0.3)).unwrap());
        let b = serialize_model(&random_model(ModelKind::Lts, 7, &GenParams::new(4, 0.3)).unwrap());
        assert_eq!(a, b);
        assert_eq!(random_equivalence(6, 11), random_equivalence(6, 11));
    }

    #[test]
    fn bad_params() {
        assert!(random_model(ModelKind::Lts, 0, &GenParams::new(0, 0.5)).is_err());
        assert!(random_model(ModelKind::Lts, 0, &GenParams::new(2, 1.5)).is_err());
        let p = GenParams { rate_pool: vec![NonNegRational::zero()], ..GenParams::default() };
        assert!(random_model(ModelKind::Ctmc, 0, &p).is_err());
    }

    #[test]
    fn single_state_equivalence() {
        assert_eq!(random_equivalence(1, 5), Partition::single_block(1));
    }

    proptest! {
        #[test]
        fn generated_models_round_trip(seed in any::<u64>(), n in 1usize..6, d in 0.0f64..1.0, k in 0usize..7) {
            let kind = ModelKind::ALL[k];
            let doc = random_model(kind, seed, &GenParams::new(n, d)).unwrap();
            let text = serialize_model(&doc);
            let back = parse_model(&text).unwrap();
            prop_assert_eq!(serialize_model(&back), text);
            if let Model::Pa(m) = &doc.model {
                for (_, _, pi) in &m.steps {
                    let total: NonNegRational = pi.entries().iter().map(|(_, p)| p).sum();
                    prop_assert!(total.is_one());
                }
            }
        }

        #[test]
        fn equivalences_cover(n in 1usize..10, seed in any::<u64>()) {
            let p = random_equivalence(n, seed);
            prop_assert_eq!(p.len(), n);
            let total: usize = p.blocks().iter().map(Vec::len).sum();
            prop_assert_eq!(total, n);
        }
    }
}
