use std::collections::BTreeSet;

use proptest::prelude::*;

use futs::encodings::Model;
use futs::model_io::{parse_model, parse_relation, serialize_model, serialize_partition, ModelKind};
use futs::partition::all_partitions;
use futs::testkit::{random_model, GenParams};
use futs::{check_homomorphism, coarsest_bisimulation, is_bisimulation, quotient_futs, Partition};

const FIXTURES: [(&str, &str, &str); 5] = [
    ("c1", include_str!("../../../fixtures/c1.ctmc"), "{s0}\n{s1 s2}\n{u}\n"),
    ("l1", include_str!("../../../fixtures/l1.lts"), "{p q}\n{p1 q1 q2}\n"),
    ("i1", include_str!("../../../fixtures/i1.imc"), "{p}\n{q}\n{p1 q1}\n"),
    ("p1", include_str!("../../../fixtures/p1.pa"), "{s t}\n{u v w}\n"),
    ("m1", include_str!("../../../fixtures/m1.ma"), "{s t}\n{u v}\n{w}\n"),
];

#[test]
fn fixtures_minimise_to_known_partitions() {
    for (name, text, expected) in FIXTURES {
        let doc = parse_model(text).unwrap();
        let f = doc.model.encode().unwrap();
        let p = coarsest_bisimulation(&f, None).unwrap();
        assert_eq!(serialize_partition(&p, f.state_names()), expected, "{name}");
        assert_eq!(doc.model.is_concrete_bisimulation(&p).unwrap(), Some(true), "{name}");
        let q = quotient_futs(&f, &p).unwrap();
        assert!(check_homomorphism(&q.epsilon, &f, &q.futs).unwrap());
        assert_eq!(q.futs.num_states(), p.num_blocks());
    }
}

#[test]
fn relation_file_matches_fixture() {
    let doc = parse_model(FIXTURES[0].1).unwrap();
    let names = doc.model.state_names();
    let r = parse_relation(include_str!("../../../fixtures/c1-coarsest.rel"), names).unwrap();
    assert_eq!(serialize_partition(&r, names), FIXTURES[0].2);
    let one = parse_relation(include_str!("../../../fixtures/all-one-block.rel"), names).unwrap();
    assert_eq!(one, Partition::single_block(4));
    assert!(!is_bisimulation(&doc.model.encode().unwrap(), &one).unwrap());
}

fn name_blocks(p: &Partition, names: &[String]) -> BTreeSet<BTreeSet<String>> {
    p.blocks().iter().map(|b| b.iter().map(|&i| names[i].clone()).collect()).collect()
}

fn reorder_states(text: &str, rotate: usize) -> String {
    text.lines()
        .map(|l| match l.strip_prefix("states ") {
            Some(rest) => {
                let mut names: Vec<&str> = rest.split_whitespace().collect();
                let k = rotate % names.len();
                names.rotate_left(k);
                names.reverse();
                format!("states {}\n", names.join(" "))
            }
            None => format!("{l}\n"),
        })
        .collect()
}

const KINDS: [ModelKind; 7] = ModelKind::ALL;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exhaustive_correspondence_on_small_models(seed in any::<u64>(), n in 1usize..5, d in 0.0f64..0.7, k in 0usize..6) {
        let doc = random_model(KINDS[k], seed, &GenParams::new(n, d)).unwrap();
        let f = doc.model.encode().unwrap();
        for r in all_partitions(n) {
            prop_assert_eq!(doc.model.is_concrete_bisimulation(&r).unwrap(), Some(is_bisimulation(&f, &r).unwrap()));
        }
    }

    #[test]
    fn coarsest_is_invariant_under_state_order(seed in any::<u64>(), n in 1usize..7, rot in 0usize..7, k in 0usize..7) {
        let doc = random_model(KINDS[k], seed, &GenParams::new(n, 0.3)).unwrap();
        let text = serialize_model(&doc);
        let other = parse_model(&reorder_states(&text, rot)).unwrap();
        let f = doc.model.encode().unwrap();
        let g = other.model.encode().unwrap();
        let p = coarsest_bisimulation(&f, None).unwrap();
        let q = coarsest_bisimulation(&g, None).unwrap();
        prop_assert_eq!(name_blocks(&p, f.state_names()), name_blocks(&q, g.state_names()));
    }

    #[test]
    fn futs_documents_survive_round_trip(seed in any::<u64>(), n in 1usize..5) {
        let doc = random_model(ModelKind::Futs, seed, &GenParams::new(n, 0.5)).unwrap();
        let back = parse_model(&serialize_model(&doc)).unwrap();
        let (Model::Futs(a), Model::Futs(b)) = (&doc.model, &back.model) else { unreachable!() };
        let p = coarsest_bisimulation(a, None).unwrap();
        prop_assert_eq!(coarsest_bisimulation(b, None).unwrap(), p);
        prop_assert!(check_homomorphism(&(0..n as u32).map(futs::StateId).collect::<Vec<_>>(), a, b).unwrap());
    }
}
