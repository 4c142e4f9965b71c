use std::collections::HashMap;

use thiserror::Error;

use super::{is_identifier, ModelDocument, ModelKind};
use crate::continuation::{Continuation, Key};
use crate::encodings::{
    is_reserved_label, CtmcModel, Distribution, ImcModel, LtsModel, MaModel, Model, ModelError, PaModel,
};
use crate::semiring::{NonNegRational, SemiringId, SemiringValue};
use crate::system::{ComponentType, FutsBuilder, FutsError, FutsType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("`{0}` is reserved for delay and cannot be an action")]
    ReservedLabel(String),
    #[error("bad rate `{0}`")]
    BadRate(String),
    #[error("{0}")]
    Misplaced(String),
    #[error("`{0}` declared twice")]
    Redeclared(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Futs(#[from] FutsError),
}

/// Positions are 1-based; columns count characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: {error}")]
    Semantic { line: usize, col: usize, error: SemanticError },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. } | ParseError::Semantic { line, col, .. } => (*line, *col),
        }
    }

    pub fn semantic(&self) -> Option<&SemanticError> {
        match self {
            ParseError::Semantic { error, .. } => Some(error),
            ParseError::Syntax { .. } => None,
        }
    }
}

type Pos = (usize, usize);

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line: pos.0, col: pos.1, message: message.into() }
}

fn semantic(pos: Pos, error: impl Into<SemanticError>) -> ParseError {
    ParseError::Semantic { line: pos.0, col: pos.1, error: error.into() }
}

/// Character cursor over one line.
struct Cursor {
    line: usize,
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(line: usize, text: &str) -> Self {
        Cursor { line, chars: text.chars().collect(), pos: 0 }
    }

    fn here(&self) -> Pos {
        (self.line, self.pos + 1)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.here(), format!("expected `{c}`")))
        }
    }

    /// Maximal run of characters satisfying `pred`, after whitespace.
    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> (Pos, String) {
        self.skip_ws();
        let start = self.here();
        let begin = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        (start, self.chars[begin..self.pos].iter().collect())
    }

    fn word(&mut self) -> (Pos, String) {
        self.take_while(|c| c.is_alphanumeric() || c == '_')
    }

    fn identifier(&mut self, what: &str) -> Result<(Pos, String), ParseError> {
        let (pos, w) = self.word();
        if w.is_empty() {
            return Err(syntax(pos, format!("expected {what}")));
        }
        if !is_identifier(&w) {
            return Err(syntax(pos, format!("invalid identifier `{w}`")));
        }
        Ok((pos, w))
    }

    /// `-LABEL->`; returns the label text.
    fn arrow(&mut self) -> Result<(Pos, String), ParseError> {
        self.expect('-')?;
        let start = self.here();
        let begin = self.pos;
        loop {
            match (self.peek(), self.chars.get(self.pos + 1)) {
                (Some('-'), Some('>')) => break,
                (Some(c), _) if !c.is_whitespace() => self.pos += 1,
                _ => return Err(syntax(self.here(), "expected `->`")),
            }
        }
        let label: String = self.chars[begin..self.pos].iter().collect();
        self.pos += 2;
        if label.is_empty() {
            return Err(syntax(start, "empty transition label"));
        }
        Ok((start, label))
    }
}

/// Brace literal before it is checked against a type.
#[derive(Debug)]
struct ContLit {
    pos: Pos,
    entries: Vec<(KeyLit, Pos, String)>,
}

#[derive(Debug)]
enum KeyLit {
    State(Pos, String),
    Nested(ContLit),
}

fn parse_cont(cur: &mut Cursor) -> Result<ContLit, ParseError> {
    cur.skip_ws();
    let pos = cur.here();
    cur.expect('{')?;
    let mut entries = Vec::new();
    cur.skip_ws();
    if cur.peek() == Some('}') {
        cur.pos += 1;
        return Ok(ContLit { pos, entries });
    }
    loop {
        cur.skip_ws();
        let key = if cur.peek() == Some('{') {
            KeyLit::Nested(parse_cont(cur)?)
        } else {
            let (p, name) = cur.identifier("state name")?;
            KeyLit::State(p, name)
        };
        cur.expect(':')?;
        let (vpos, value) = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '/' || c == '.');
        if value.is_empty() {
            return Err(syntax(vpos, "expected value"));
        }
        entries.push((key, vpos, value));
        cur.skip_ws();
        match cur.peek() {
            Some(',') => cur.pos += 1,
            Some('}') => {
                cur.pos += 1;
                return Ok(ContLit { pos, entries });
            }
            _ => return Err(syntax(cur.here(), "expected `,` or `}`")),
        }
    }
}

fn parse_rate(pos: Pos, text: &str) -> Result<NonNegRational, ParseError> {
    let rate: NonNegRational = text.parse().map_err(|_| semantic(pos, SemanticError::BadRate(text.to_string())))?;
    Ok(rate)
}

enum Label {
    Action(usize),
    Rate(NonNegRational),
}

enum Target {
    State(usize),
    Dist(Distribution),
}

#[derive(Default)]
struct Parts {
    lts: Vec<(usize, usize, usize)>,
    rates: Vec<(usize, NonNegRational, usize)>,
    steps: Vec<(usize, usize, Distribution)>,
}

struct DocParser {
    kind: Option<(ModelKind, Pos)>,
    metadata: Vec<(String, String)>,
    states: Option<Vec<String>>,
    state_index: HashMap<String, usize>,
    actions: Option<Vec<String>>,
    components: Vec<ComponentType>,
    futs: Option<FutsBuilder>,
    parts: Parts,
    /// First clause position of every source state, for late errors.
    first_clause: HashMap<usize, Pos>,
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<ModelDocument, ParseError> {
    let mut p = DocParser {
        kind: None,
        metadata: Vec::new(),
        states: None,
        state_index: HashMap::new(),
        actions: None,
        components: Vec::new(),
        futs: None,
        parts: Parts::default(),
        first_clause: HashMap::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        p.line(i + 1, content)?;
    }
    p.finish()
}

impl DocParser {
    fn kind(&self) -> ModelKind {
        self.kind.expect("checked before clauses").0
    }

    fn line(&mut self, line: usize, content: &str) -> Result<(), ParseError> {
        let mut cur = Cursor::new(line, content);
        let (pos, keyword) = cur.word();
        if self.kind.is_none() && keyword != "kind" {
            return Err(syntax(pos, "file must start with `kind`"));
        }
        match keyword.as_str() {
            "kind" => {
                if self.kind.is_some() {
                    return Err(semantic(pos, SemanticError::Redeclared("kind".into())));
                }
                let (kpos, word) = cur.word();
                let kind = word.parse::<ModelKind>().map_err(|m| syntax(kpos, m))?;
                self.kind = Some((kind, pos));
                self.end(&mut cur)
            }
            "meta" => {
                let (kpos, key) = cur.word();
                if key.is_empty() {
                    return Err(syntax(kpos, "expected metadata key"));
                }
                cur.skip_ws();
                let rest: String = cur.chars[cur.pos..].iter().collect();
                self.metadata.push((key, rest.trim_end().to_string()));
                Ok(())
            }
            "states" => {
                if self.states.is_some() {
                    return Err(semantic(pos, SemanticError::Redeclared("states".into())));
                }
                let mut names = Vec::new();
                while !cur.at_end() {
                    let (npos, name) = cur.identifier("state name")?;
                    if self.state_index.insert(name.clone(), names.len()).is_some() {
                        return Err(semantic(npos, SemanticError::Redeclared(name)));
                    }
                    names.push(name);
                }
                if names.is_empty() {
                    return Err(syntax(pos, "at least one state is required"));
                }
                self.states = Some(names);
                Ok(())
            }
            "actions" => {
                if !self.kind().has_actions() {
                    return Err(semantic(
                        pos,
                        SemanticError::Misplaced(format!("{} models have no actions", self.kind())),
                    ));
                }
                if self.actions.is_some() {
                    return Err(semantic(pos, SemanticError::Redeclared("actions".into())));
                }
                let mut names: Vec<String> = Vec::new();
                while !cur.at_end() {
                    let (apos, name) = cur.word();
                    if is_reserved_label(&name) {
                        return Err(semantic(apos, SemanticError::ReservedLabel(name)));
                    }
                    if !is_identifier(&name) {
                        return Err(syntax(apos, format!("invalid identifier `{name}`")));
                    }
                    if names.contains(&name) {
                        return Err(semantic(apos, SemanticError::Redeclared(name)));
                    }
                    names.push(name);
                }
                self.actions = Some(names);
                Ok(())
            }
            "component" => self.component(pos, &mut cur),
            "trans" => self.trans(pos, &mut cur),
            "" => Err(syntax(pos, "expected a keyword")),
            other => Err(syntax(pos, format!("unknown keyword `{other}`"))),
        }
    }

    fn end(&self, cur: &mut Cursor) -> Result<(), ParseError> {
        if cur.at_end() {
            Ok(())
        } else {
            Err(syntax(cur.here(), "unexpected trailing input"))
        }
    }

    fn component(&mut self, pos: Pos, cur: &mut Cursor) -> Result<(), ParseError> {
        if self.kind() != ModelKind::Futs {
            return Err(semantic(pos, SemanticError::Misplaced("components are only declared in futs models".into())));
        }
        if self.futs.is_some() {
            return Err(semantic(pos, SemanticError::Misplaced("components must precede transitions".into())));
        }
        let mut labels = Vec::new();
        loop {
            cur.skip_ws();
            if cur.peek() == Some(':') {
                cur.pos += 1;
                break;
            }
            if cur.at_end() {
                return Err(syntax(cur.here(), "expected `:` before semirings"));
            }
            labels.push(cur.identifier("label")?.1);
        }
        let mut semirings = Vec::new();
        while !cur.at_end() {
            let (spos, word) = cur.word();
            let id = SemiringId::from_keyword(&word)
                .ok_or_else(|| syntax(spos, format!("unknown semiring `{word}` (expected bool or real)")))?;
            semirings.push(id);
        }
        let ct = ComponentType { labels, semirings };
        FutsType { components: vec![ct.clone()] }.validate().map_err(|e| semantic(pos, e))?;
        self.components.push(ct);
        Ok(())
    }

    fn state(&self, pos: Pos, name: &str) -> Result<usize, ParseError> {
        self.state_index.get(name).copied().ok_or_else(|| semantic(pos, SemanticError::UnknownState(name.to_string())))
    }

    fn trans(&mut self, pos: Pos, cur: &mut Cursor) -> Result<(), ParseError> {
        if self.states.is_none() {
            return Err(semantic(pos, SemanticError::Misplaced("`states` must precede transitions".into())));
        }
        let kind = self.kind();
        if kind == ModelKind::Futs {
            return self.futs_trans(pos, cur);
        }
        let (spos, src) = cur.identifier("source state")?;
        let s = self.state(spos, &src)?;
        let (lpos, label_text) = cur.arrow()?;
        let label = if label_text.starts_with(|c: char| c.is_ascii_digit()) {
            if !kind.has_rates() {
                return Err(semantic(lpos, SemanticError::Misplaced(format!("{kind} models have no rates"))));
            }
            Label::Rate(parse_rate(lpos, &label_text)?)
        } else {
            if is_reserved_label(&label_text) {
                return Err(semantic(lpos, SemanticError::ReservedLabel(label_text)));
            }
            if !kind.has_actions() {
                return Err(semantic(
                    lpos,
                    SemanticError::Misplaced(format!("{kind} transitions carry rates, not actions")),
                ));
            }
            if !is_identifier(&label_text) {
                return Err(syntax(lpos, format!("invalid label `{label_text}`")));
            }
            let actions = self.actions.as_deref().unwrap_or(&[]);
            let a = actions
                .iter()
                .position(|x| *x == label_text)
                .ok_or_else(|| semantic(lpos, SemanticError::UnknownAction(label_text.clone())))?;
            Label::Action(a)
        };
        cur.skip_ws();
        let target = if cur.peek() == Some('{') {
            let lit = parse_cont(cur)?;
            Target::Dist(self.distribution(&lit)?)
        } else {
            let (tpos, name) = cur.identifier("target state")?;
            Target::State(self.state(tpos, &name)?)
        };
        self.end(cur)?;
        if let (Label::Rate(r), Target::State(t)) = (&label, &target) {
            if r.is_zero() {
                let to = self.states.as_ref().unwrap()[*t].clone();
                return Err(semantic(lpos, ModelError::NonPositiveRate { from: src, to }));
            }
        }
        self.first_clause.entry(s).or_insert(pos);

        let probabilistic = matches!(kind, ModelKind::Pa | ModelKind::Ma);
        match (label, target) {
            (Label::Rate(r), Target::State(t)) => self.parts.rates.push((s, r, t)),
            (Label::Rate(_), Target::Dist(_)) => {
                return Err(semantic(pos, SemanticError::Misplaced("timed transitions target a single state".into())))
            }
            (Label::Action(a), Target::State(t)) if probabilistic => {
                self.push_step(pos, s, a, Distribution::dirac(t))?
            }
            (Label::Action(a), Target::Dist(d)) if probabilistic => self.push_step(pos, s, a, d)?,
            (Label::Action(_), Target::Dist(_)) => {
                return Err(semantic(pos, SemanticError::Misplaced(format!("{kind} steps target a single state"))))
            }
            (Label::Action(a), Target::State(t)) => {
                if self.parts.lts.contains(&(s, a, t)) {
                    let text =
                        format!("{src} -{}-> {}", self.actions.as_ref().unwrap()[a], self.states.as_ref().unwrap()[t]);
                    return Err(semantic(pos, ModelError::DuplicateTransition(text)));
                }
                self.parts.lts.push((s, a, t));
            }
        }
        Ok(())
    }

    fn push_step(&mut self, pos: Pos, s: usize, a: usize, d: Distribution) -> Result<(), ParseError> {
        if self.parts.steps.iter().any(|(s2, a2, d2)| (*s2, *a2) == (s, a) && *d2 == d) {
            let states = self.states.as_ref().unwrap();
            return Err(semantic(
                pos,
                ModelError::DuplicateTransition(format!(
                    "{} -{}-> {:?}",
                    states[s],
                    self.actions.as_ref().unwrap()[a],
                    d
                )),
            ));
        }
        self.parts.steps.push((s, a, d));
        Ok(())
    }

    fn distribution(&self, lit: &ContLit) -> Result<Distribution, ParseError> {
        let mut pairs = Vec::new();
        for (key, vpos, value) in &lit.entries {
            let KeyLit::State(kpos, name) = key else {
                return Err(syntax(lit.pos, "distributions range over states"));
            };
            let t = self.state(*kpos, name)?;
            if pairs.iter().any(|(u, _)| *u == t) {
                return Err(semantic(*kpos, ModelError::DuplicateSupport(name.clone())));
            }
            pairs.push((t, parse_rate(*vpos, value)?));
        }
        Distribution::new(pairs).map_err(|e| semantic(lit.pos, e))
    }

    fn futs_trans(&mut self, pos: Pos, cur: &mut Cursor) -> Result<(), ParseError> {
        if self.futs.is_none() {
            let ty = FutsType::new(self.components.clone()).map_err(|e| semantic(pos, e))?;
            let builder = FutsBuilder::new(ty, self.states.clone().unwrap()).map_err(|e| semantic(pos, e))?;
            self.futs = Some(builder);
        }
        let (cpos, index) = cur.take_while(|c| c.is_ascii_digit());
        let component = index
            .parse::<usize>()
            .ok()
            .filter(|&k| k >= 1 && k <= self.components.len())
            .ok_or_else(|| syntax(cpos, format!("expected a component index in 1..={}", self.components.len())))?
            - 1;
        let (spos, src) = cur.identifier("source state")?;
        self.state(spos, &src)?;
        let (lpos, label) = cur.arrow()?;
        if !is_identifier(&label) {
            return Err(syntax(lpos, format!("invalid label `{label}`")));
        }
        let lit = parse_cont(cur)?;
        self.end(cur)?;
        let ct = self.components[component].clone();
        let value = self.futs_value(&lit, ct.depth(), &ct)?;
        let builder = self.futs.as_mut().unwrap();
        builder.assign(component, &src, &label, value).map_err(|e| semantic(pos, e))
    }

    fn futs_value(&mut self, lit: &ContLit, level: usize, ct: &ComponentType) -> Result<Continuation, ParseError> {
        let semiring = ct.semiring_at(level);
        let mut pairs = Vec::new();
        for (key, vpos, text) in &lit.entries {
            let key = match (key, level) {
                (KeyLit::State(kpos, name), 1) => Key::state(self.state(*kpos, name)?),
                (KeyLit::Nested(inner), l) if l > 1 => {
                    let c = self.futs_value(inner, l - 1, ct)?;
                    let id = self.futs.as_mut().unwrap().intern(c).map_err(|e| semantic(inner.pos, e))?;
                    Key::Cont(id)
                }
                (KeyLit::State(kpos, _), _) => {
                    return Err(semantic(
                        *kpos,
                        SemanticError::Misplaced(format!("level-{level} keys must be continuations")),
                    ))
                }
                (KeyLit::Nested(inner), _) => {
                    return Err(semantic(inner.pos, SemanticError::Misplaced("level-1 keys must be states".into())))
                }
            };
            let value = match semiring {
                SemiringId::Boolean => match text.as_str() {
                    "true" => SemiringValue::Bool(true),
                    "false" => SemiringValue::Bool(false),
                    _ => {
                        return Err(semantic(
                            *vpos,
                            SemanticError::Misplaced(format!("expected bool value, found `{text}`")),
                        ))
                    }
                },
                SemiringId::NonNegRational => SemiringValue::Rat(parse_rate(*vpos, text)?),
            };
            pairs.push((key, value));
        }
        Continuation::new(semiring, level, pairs)
            .map_err(|e| semantic(lit.pos, SemanticError::Futs(FutsError::Continuation(e))))
    }

    fn finish(self) -> Result<ModelDocument, ParseError> {
        let Some((kind, kind_pos)) = self.kind else {
            return Err(syntax((1, 1), "empty model: expected `kind`"));
        };
        let states = self.states.ok_or_else(|| syntax(kind_pos, "missing `states` line"))?;
        if kind.has_actions() && self.actions.is_none() {
            return Err(syntax(kind_pos, format!("{kind} models need an `actions` line")));
        }
        let actions = self.actions.unwrap_or_default();
        let Parts { lts, rates, steps } = self.parts;
        let model = match kind {
            ModelKind::Lts => Model::Lts(LtsModel { states, actions, transitions: lts }),
            ModelKind::Ctmc | ModelKind::Dtmc => {
                Model::Ctmc(CtmcModel { states, transitions: rates, dtmc: kind == ModelKind::Dtmc })
            }
            ModelKind::Imc => Model::Imc(ImcModel { states, actions, interactive: lts, markovian: rates }),
            ModelKind::Pa => Model::Pa(PaModel { states, actions, steps }),
            ModelKind::Ma => Model::Ma(MaModel { states, actions, immediate: steps, timed: rates }),
            ModelKind::Futs => {
                let builder = match self.futs {
                    Some(b) => b,
                    None => {
                        let ty = FutsType::new(self.components).map_err(|e| semantic(kind_pos, e))?;
                        FutsBuilder::new(ty, states).map_err(|e| semantic(kind_pos, e))?
                    }
                };
                Model::Futs(builder.build())
            }
        };
        let validation = match &model {
            Model::Lts(m) => m.validate(),
            Model::Ctmc(m) => m.validate(),
            Model::Imc(m) => m.validate(),
            Model::Pa(m) => m.validate(),
            Model::Ma(m) => m.validate(),
            Model::Futs(_) => Ok(()),
        };
        if let Err(e) = validation {
            let pos = match &e {
                ModelError::NotStochastic { state, .. } => model
                    .state_names()
                    .iter()
                    .position(|s| s == state)
                    .and_then(|i| self.first_clause.get(&i).copied())
                    .unwrap_or(kind_pos),
                _ => kind_pos,
            };
            return Err(semantic(pos, e));
        }
        Ok(ModelDocument { kind, model, metadata: self.metadata })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ParseError {
        parse_model(text).expect_err("should fail")
    }

    #[test]
    fn lts_example() {
        let doc = parse_model("kind lts\nstates p q\nactions a\ntrans p -a-> q\n").unwrap();
        let Model::Lts(m) = doc.model else { panic!() };
        assert_eq!(m.transitions, vec![(0, 0, 1)]);
    }

    #[test]
    fn zero_rate_is_semantic() {
        let e = err("kind ctmc\nstates s\ntrans s -0-> s");
        assert_eq!(e.position(), (3, 10));
        assert!(matches!(e.semantic(), Some(SemanticError::Model(ModelError::NonPositiveRate { .. }))));
    }

    #[test]
    fn partial_distribution_is_semantic() {
        let e = err("kind pa\nstates s u v\nactions a\ntrans s -a-> {u:1/2, v:1/3}");
        match e.semantic() {
            Some(SemanticError::Model(ModelError::NotADistribution { mass })) => {
                assert_eq!(mass, &NonNegRational::from_ratio(5, 6).unwrap())
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dtmc_stochasticity_points_at_first_clause() {
        let e = err("kind dtmc\nstates s t\ntrans t -1-> s\ntrans s -1/2-> t\n");
        assert_eq!(e.position(), (4, 1));
        assert!(matches!(e.semantic(), Some(SemanticError::Model(ModelError::NotStochastic { .. }))));
        assert!(parse_model("kind dtmc\nstates s t\ntrans s -1/2-> t\ntrans s -0.5-> s\n").is_ok());
    }

    #[test]
    fn repeated_rates_are_kept_and_summed() {
        let doc = parse_model("kind ctmc\nstates s t\ntrans s -1-> t\ntrans s -1-> t\n").unwrap();
        let f = doc.model.encode().unwrap();
        assert_eq!(
            f.theta(0, crate::StateId(0), 0).unwrap().evaluate(Key::state(1)),
            SemiringValue::Rat(NonNegRational::from_integer(2))
        );
        let Model::Ctmc(m) = doc.model else { panic!() };
        assert_eq!(m.transitions.len(), 2);
    }

    #[test]
    fn reserved_labels() {
        let e = err("kind lts\nstates p\nactions a delta\n");
        assert!(matches!(e.semantic(), Some(SemanticError::ReservedLabel(_))));
        let e = err("kind lts\nstates p\nactions δ\n");
        assert!(matches!(e.semantic(), Some(SemanticError::ReservedLabel(_))));
        let e = err("kind imc\nstates p\nactions a\ntrans p -δ-> p\n");
        assert!(matches!(e.semantic(), Some(SemanticError::ReservedLabel(_))));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(err("states p\n").position(), (1, 1));
        assert!(matches!(err("kind zzz\n"), ParseError::Syntax { line: 1, col: 6, .. }));
        assert!(matches!(err("kind lts\nstates p\nactions a\ntrans p -a- p\n"), ParseError::Syntax { line: 4, .. }));
        assert!(matches!(err("kind lts\nstates 1p\n"), ParseError::Syntax { line: 2, col: 8, .. }));
        assert!(matches!(err("kind pa\nstates s\nactions a\ntrans s -a-> {s:1\n"), ParseError::Syntax { .. }));
        assert!(matches!(err("kind lts\nstates p\nactions a\ntrans p -a-> p extra\n"), ParseError::Syntax { .. }));
    }

    #[test]
    fn unknown_names() {
        let e = err("kind lts\nstates p\nactions a\ntrans p -a-> q\n");
        assert_eq!(e.semantic(), Some(&SemanticError::UnknownState("q".into())));
        assert_eq!(e.position(), (4, 14));
        let e = err("kind lts\nstates p\nactions a\ntrans p -b-> p\n");
        assert_eq!(e.semantic(), Some(&SemanticError::UnknownAction("b".into())));
    }

    #[test]
    fn kind_specific_clauses() {
        assert!(matches!(
            err("kind lts\nstates p\nactions a\ntrans p -1-> p\n").semantic(),
            Some(SemanticError::Misplaced(_))
        ));
        assert!(matches!(err("kind ctmc\nstates p\ntrans p -a-> p\n").semantic(), Some(SemanticError::Misplaced(_))));
        assert!(matches!(err("kind ctmc\nstates p\nactions a\n").semantic(), Some(SemanticError::Misplaced(_))));
        assert!(matches!(
            err("kind ma\nstates p\nactions a\ntrans p -1-> {p:1}\n").semantic(),
            Some(SemanticError::Misplaced(_))
        ));
    }

    #[test]
    fn comments_and_metadata() {
        let doc = parse_model("# header\nkind ma\nmeta author someone else\nstates s t # trailing\nactions a\ntrans s -a-> t\ntrans t -0.5-> s\n").unwrap();
        assert_eq!(doc.metadata, vec![("author".to_string(), "someone else".to_string())]);
        let Model::Ma(m) = doc.model else { panic!() };
        assert_eq!(m.immediate, vec![(0, 0, Distribution::dirac(1))]);
        assert_eq!(m.timed, vec![(1, NonNegRational::from_ratio(1, 2).unwrap(), 0)]);
    }

    #[test]
    fn futs_documents() {
        let text = "kind futs\nstates x y\ncomponent a : real bool\ncomponent delta : real\n\
                    trans 1 x -a-> {{x:1/2, y:1/2}:true, {y:1}:true}\ntrans 2 y -delta-> {x:3}\n";
        let doc = parse_model(text).unwrap();
        let Model::Futs(f) = doc.model else { panic!() };
        assert_eq!(f.num_components(), 2);
        assert_eq!(f.theta(0, crate::StateId(0), 0).unwrap().entries().len(), 2);
        assert_eq!(f.continuation_universe(0, 1).unwrap().len(), 2);

        let bad_level = "kind futs\nstates x\ncomponent a : real bool\ntrans 1 x -a-> {x:1}\n";
        assert!(matches!(err(bad_level).semantic(), Some(SemanticError::Misplaced(_))));
        let bad_value = "kind futs\nstates x\ncomponent a : bool\ntrans 1 x -a-> {x:1}\n";
        assert!(matches!(err(bad_value).semantic(), Some(SemanticError::Misplaced(_))));
        let bad_comp = "kind futs\nstates x\ncomponent a : bool\ntrans 2 x -a-> {x:true}\n";
        assert!(matches!(err(bad_comp), ParseError::Syntax { .. }));
        let bad_label = "kind futs\nstates x\ncomponent a : bool\ntrans 1 x -b-> {x:true}\n";
        assert!(matches!(err(bad_label).semantic(), Some(SemanticError::Futs(FutsError::UnknownLabel { .. }))));
        let no_sr = "kind futs\nstates x\ncomponent a :\n";
        assert!(matches!(err(no_sr).semantic(), Some(SemanticError::Futs(FutsError::InvalidType(_)))));
    }
}
