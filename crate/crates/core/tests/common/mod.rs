#![allow(dead_code)]

use std::collections::BTreeSet;

use ryserlab::canon::weak_canonical_key;
use ryserlab::catalog::catalog_list;
use ryserlab::design::{classify, near_pencil, replication_profile, DesignClass, IncidenceStructure};
use ryserlab::feasibility::ParameterTuple;
use ryserlab::pointset::PointSet;
use ryserlab::complement;

/// Every Ryser design obtained by complementing a catalog design at one of
/// its blocks, tagged with the source name and block.
pub fn catalog_ryser() -> Vec<(String, usize, IncidenceStructure)> {
    let mut out = Vec::new();
    for e in catalog_list().into_iter().filter(|e| e.complementable) {
        for i in 0..e.v {
            out.push((e.name.to_string(), i, complement(&e.design, i).unwrap()));
        }
    }
    out
}

pub fn near_pencils() -> Vec<IncidenceStructure> {
    (4..=12).map(near_pencil).collect()
}

/// All `v`-sets of blocks of size in `(λ, v)` meeting pairwise in `λ`
/// points, filtered to Ryser designs with the tuple's replication profile.
/// No symmetry breaking, no size lattice, no column bounds.
pub fn brute_force_keys(t: &ParameterTuple) -> BTreeSet<Vec<u32>> {
    let v = t.v as usize;
    let lambda = t.lambda as usize;
    let subsets: Vec<PointSet> = (1u128..(1u128 << v) - 1)
        .map(PointSet::from_bits)
        .filter(|b| b.len() > lambda)
        .collect();
    let mut keys = BTreeSet::new();
    let mut chosen = Vec::new();
    extend(&subsets, lambda, v, 0, &mut chosen, &mut |blocks| {
        let s = IncidenceStructure::from_sets(v, blocks.to_vec()).unwrap();
        if classify(&s) != (DesignClass::Ryser { v, lambda }) {
            return;
        }
        let prof = replication_profile(&s);
        let expect = vec![(t.r1 as usize, t.e1 as usize), (t.r2 as usize, t.e2 as usize)];
        if prof.values == expect {
            keys.insert(weak_canonical_key(&s));
        }
    });
    keys
}

fn extend(
    subsets: &[PointSet],
    lambda: usize,
    v: usize,
    from: usize,
    chosen: &mut Vec<PointSet>,
    emit: &mut dyn FnMut(&[PointSet]),
) {
    if chosen.len() == v {
        emit(chosen);
        return;
    }
    for i in from..subsets.len() {
        let b = subsets[i];
        if chosen.iter().all(|c| c.intersection_len(b) == lambda) {
            chosen.push(b);
            extend(subsets, lambda, v, i + 1, chosen, emit);
            chosen.pop();
        }
    }
}
