mod common;

use std::collections::BTreeSet;

use ryserlab::canon::weak_canonical_key;
use ryserlab::catalog::catalog_get;
use ryserlab::complement;
use ryserlab::feasibility::{enumerate_tuples, ParameterTuple};
use ryserlab::search::{search_designs, Pruning, SearchSpec, Status};
use ryserlab::Execution;

use common::brute_force_keys;

fn keys(spec: &SearchSpec, exec: Execution) -> (BTreeSet<Vec<u32>>, u64) {
    let r = search_designs(spec, exec).unwrap();
    assert_eq!(r.status, Status::Complete);
    (r.solutions.iter().map(|s| s.key.clone()).collect(), r.nodes)
}

fn small_tuples() -> Vec<ParameterTuple> {
    (2..=3)
        .flat_map(|l| enumerate_tuples(l, false, Execution::Sequential).unwrap())
        .filter(|t| t.v <= 8)
        .collect()
}

#[test]
fn pruned_search_matches_brute_force() {
    let tuples = small_tuples();
    assert!(tuples.iter().any(|t| t.v == 7 && t.lambda == 2));
    for t in tuples {
        let (found, _) = keys(&SearchSpec::new(t.clone()), Execution::Sequential);
        assert_eq!(found, brute_force_keys(&t), "{t}");
    }
}

#[test]
fn relaxed_tuples_match_brute_force() {
    for t in (2..=3)
        .flat_map(|l| enumerate_tuples(l, true, Execution::Sequential).unwrap())
        .filter(|t| t.v <= 8)
    {
        let (found, _) = keys(&SearchSpec::new(t.clone()), Execution::Sequential);
        assert_eq!(found, brute_force_keys(&t), "{t}");
    }
}

#[test]
fn disabling_one_pruning_rule_keeps_solutions() {
    let variants = [
        Pruning { block_sizes: false, ..Pruning::ALL },
        Pruning { tau_split: false, ..Pruning::ALL },
        Pruning { columns: false, ..Pruning::ALL },
    ];
    let tuples = [
        ParameterTuple::from_core(2, 2, 1, 2).unwrap(),
        ParameterTuple::from_core(2, 2, 1, 3).unwrap(),
        ParameterTuple::from_core(3, 3, 2, 2).unwrap(),
    ];
    for t in tuples {
        let full = SearchSpec::new(t.clone());
        let (base, base_nodes) = keys(&full, Execution::Parallel);
        for pruning in variants {
            let spec = SearchSpec { pruning, ..full.clone() };
            let (found, nodes) = keys(&spec, Execution::Parallel);
            assert_eq!(found, base, "{t} {pruning:?}");
            assert!(nodes >= base_nodes, "{t} {pruning:?}");
        }
    }
}

#[test]
fn known_constructions_are_found() {
    for (name, core) in [("fano", (2, 2, 1, 2)), ("biplane11", (3, 3, 2, 2)), ("pg23", (3, 3, 1, 3))] {
        let t = ParameterTuple::from_core(core.0, core.1, core.2, core.3).unwrap();
        let (found, _) = keys(&SearchSpec::new(t), Execution::Parallel);
        let expect = weak_canonical_key(&complement(&catalog_get(name).unwrap().design, 0).unwrap());
        assert!(found.contains(&expect), "{name}");
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let t = ParameterTuple::from_core(3, 2, 1, 4).unwrap();
    let spec = SearchSpec::new(t);
    let a = search_designs(&spec, Execution::Sequential).unwrap();
    let b = search_designs(&spec, Execution::Parallel).unwrap();
    assert_eq!(a.report(), b.report());
}

#[test]
fn max_solutions_truncates_deterministically() {
    let t = ParameterTuple::from_core(2, 2, 1, 2).unwrap();
    let spec = SearchSpec { max_solutions: Some(1), ..SearchSpec::new(t) };
    let a = search_designs(&spec, Execution::Sequential).unwrap();
    let b = search_designs(&spec, Execution::Parallel).unwrap();
    assert_eq!(a.solutions.len(), 1);
    assert_eq!(a.report(), b.report());
}
