use std::fmt::Write as _;

use super::{ModelDocument, ModelKind};
use crate::continuation::{Continuation, Key, Registry};
use crate::encodings::{Distribution, Model};
use crate::semiring::NonNegRational;
use crate::system::Futs;

/// Renders a continuation in the brace syntax. Entries are ordered by
/// their rendered keys, so the text does not depend on registry ids.
pub fn write_continuation(c: &Continuation, registry: &Registry, states: &[String]) -> String {
    let mut parts: Vec<(String, String)> = c
        .entries()
        .iter()
        .map(|(k, v)| {
            let key = match k {
                Key::State(s) => states[s.index()].clone(),
                Key::Cont(id) => write_continuation(registry.resolve(*id), registry, states),
            };
            (key, v.to_string())
        })
        .collect();
    // Level-1 entries are already in state order.
    if c.level() > 1 {
        parts.sort();
    }
    let body: Vec<String> = parts.into_iter().map(|(k, v)| format!("{k}:{v}")).collect();
    format!("{{{}}}", body.join(", "))
}

fn write_distribution(out: &mut String, d: &Distribution, states: &[String]) {
    let body: Vec<String> = d.entries().iter().map(|(s, p)| format!("{}:{}", states[*s], p)).collect();
    let _ = write!(out, "{{{}}}", body.join(", "));
}

fn header(out: &mut String, kind: ModelKind, metadata: &[(String, String)], states: &[String]) {
    let _ = writeln!(out, "kind {kind}");
    for (k, v) in metadata {
        if v.is_empty() {
            let _ = writeln!(out, "meta {k}");
        } else {
            let _ = writeln!(out, "meta {k} {v}");
        }
    }
    let _ = writeln!(out, "states {}", states.join(" "));
}

fn actions_line(out: &mut String, actions: &[String]) {
    if actions.is_empty() {
        out.push_str("actions\n");
    } else {
        let _ = writeln!(out, "actions {}", actions.join(" "));
    }
}

fn rate_lines(out: &mut String, states: &[String], rates: &[(usize, NonNegRational, usize)]) {
    for (s, r, t) in rates {
        let _ = writeln!(out, "trans {} -{}-> {}", states[*s], r, states[*t]);
    }
}

fn action_lines(out: &mut String, states: &[String], actions: &[String], ts: &[(usize, usize, usize)]) {
    for (s, a, t) in ts {
        let _ = writeln!(out, "trans {} -{}-> {}", states[*s], actions[*a], states[*t]);
    }
}

fn step_lines(out: &mut String, states: &[String], actions: &[String], steps: &[(usize, usize, Distribution)]) {
    for (s, a, d) in steps {
        let _ = write!(out, "trans {} -{}-> ", states[*s], actions[*a]);
        write_distribution(out, d, states);
        out.push('\n');
    }
}

/// Text form accepted by [`super::parse_model`]; clauses keep their stored
/// order.
pub fn serialize_model(doc: &ModelDocument) -> String {
    let mut out = String::new();
    let states = doc.model.state_names();
    header(&mut out, doc.kind, &doc.metadata, states);
    match &doc.model {
        Model::Lts(m) => {
            actions_line(&mut out, &m.actions);
            action_lines(&mut out, states, &m.actions, &m.transitions);
        }
        Model::Ctmc(m) => rate_lines(&mut out, states, &m.transitions),
        Model::Imc(m) => {
            actions_line(&mut out, &m.actions);
            action_lines(&mut out, states, &m.actions, &m.interactive);
            rate_lines(&mut out, states, &m.markovian);
        }
        Model::Pa(m) => {
            actions_line(&mut out, &m.actions);
            step_lines(&mut out, states, &m.actions, &m.steps);
        }
        Model::Ma(m) => {
            actions_line(&mut out, &m.actions);
            step_lines(&mut out, states, &m.actions, &m.immediate);
            rate_lines(&mut out, states, &m.timed);
        }
        Model::Futs(f) => futs_body(&mut out, f),
    }
    out
}

fn futs_body(out: &mut String, f: &Futs) {
    for ct in &f.futs_type().components {
        let semirings: Vec<&str> = ct.semirings.iter().map(|s| s.keyword()).collect();
        let _ = writeln!(out, "component {} : {}", ct.labels.join(" "), semirings.join(" "));
    }
    for (k, ct) in f.futs_type().components.iter().enumerate() {
        for s in f.states() {
            for (l, label) in ct.labels.iter().enumerate() {
                if let Some(c) = f.theta_ref(k, s, l) {
                    if c.is_zero() {
                        continue;
                    }
                    let _ = writeln!(
                        out,
                        "trans {} {} -{}-> {}",
                        k + 1,
                        f.state_name(s),
                        label,
                        write_continuation(c, f.registry(), f.state_names())
                    );
                }
            }
        }
    }
}

/// A system as a `kind futs` document.
pub fn serialize_futs(f: &Futs, metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    header(&mut out, ModelKind::Futs, metadata, f.state_names());
    futs_body(&mut out, f);
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_model;
    use super::*;

    const SAMPLES: &[&str] = &[
        "kind lts\nstates p q\nactions a b\ntrans p -a-> q\ntrans q -b-> p\n",
        "kind ctmc\nmeta origin test\nstates s0 s1\ntrans s0 -2-> s1\ntrans s1 -1/3-> s0\n",
        "kind dtmc\nstates s0 s1\ntrans s0 -1/2-> s1\ntrans s0 -1/2-> s0\ntrans s1 -1-> s1\n",
        "kind imc\nstates p q\nactions a\ntrans p -a-> q\ntrans p -1-> p\n",
        "kind pa\nstates s u v\nactions a\ntrans s -a-> {u:1/2, v:1/2}\ntrans s -a-> {u:1}\n",
        "kind ma\nstates s u\nactions a\ntrans s -a-> {u:1}\ntrans u -3/2-> s\n",
        "kind futs\nstates x y\ncomponent a : real bool\ncomponent delta : real\n\
         trans 1 x -a-> {{x:1/2, y:1/2}:true, {y:1}:true}\ntrans 2 y -delta-> {x:3}\n",
    ];

    #[test]
    fn samples_round_trip_byte_exact() {
        for text in SAMPLES {
            let doc = parse_model(text).unwrap();
            assert_eq!(&serialize_model(&doc), text);
        }
    }

    #[test]
    fn dirac_shorthand_is_normalised() {
        let doc = parse_model("kind pa\nstates s u\nactions a\ntrans s -a-> u\n").unwrap();
        assert_eq!(serialize_model(&doc), "kind pa\nstates s u\nactions a\ntrans s -a-> {u:1}\n");
    }

    #[test]
    fn nested_keys_sorted_by_text() {
        let text = "kind futs\nstates x y\ncomponent a : real bool\ntrans 1 x -a-> {{y:1}:true, {x:1/2, y:1/2}:true}\n";
        let doc = parse_model(text).unwrap();
        assert!(serialize_model(&doc).ends_with("trans 1 x -a-> {{x:1/2, y:1/2}:true, {y:1}:true}\n"));
    }
}
