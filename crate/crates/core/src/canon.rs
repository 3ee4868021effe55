//! Weak canonical form: colour refinement on the point/block incidence graph.
//!
//! Two isomorphic structures always get the same key. The converse can fail
//! (the refinement may not separate non-isomorphic designs), so counts taken
//! up to this key are counts up to weak equivalence.

use std::collections::BTreeMap;

use crate::design::{replication_profile, IncidenceStructure};

/// Assigns each signature its rank among the distinct signatures, and appends
/// the sorted signature histogram to `key`.
fn rank(sigs: &[Vec<u32>], key: &mut Vec<u32>) -> Vec<u32> {
    let mut hist: BTreeMap<&[u32], u32> = BTreeMap::new();
    for s in sigs {
        *hist.entry(s.as_slice()).or_insert(0) += 1;
    }
    key.push(hist.len() as u32);
    for (s, n) in &hist {
        key.push(*n);
        key.push(s.len() as u32);
        key.extend_from_slice(s);
    }
    let ids: BTreeMap<&[u32], u32> =
        hist.keys().enumerate().map(|(i, s)| (*s, i as u32)).collect();
    sigs.iter().map(|s| ids[s.as_slice()]).collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Final point colours and the refinement transcript.
fn refine(s: &IncidenceStructure) -> (Vec<u32>, Vec<u32>) {
    let v = s.v();
    let mut key = vec![v as u32];
    let mut point_colors: Vec<u32> =
        replication_profile(s).counts.iter().map(|&c| c as u32).collect();
    let mut block_colors: Vec<u32> = s.blocks().iter().map(|b| b.len() as u32).collect();
    let mut classes = (distinct(&point_colors), distinct(&block_colors));

    for _ in 0..=v {
        let block_sigs: Vec<Vec<u32>> = s
            .blocks()
            .iter()
            .zip(&block_colors)
            .map(|(b, &bc)| {
                let mut sig: Vec<u32> = b.iter().map(|p| point_colors[p]).collect();
                sig.sort_unstable();
                sig.insert(0, bc);
                sig
            })
            .collect();
        block_colors = rank(&block_sigs, &mut key);

        let mut point_sigs: Vec<Vec<u32>> = point_colors.iter().map(|&pc| vec![pc]).collect();
        for (b, &bc) in s.blocks().iter().zip(&block_colors) {
            for p in b.iter() {
                point_sigs[p].push(bc);
            }
        }
        for sig in &mut point_sigs {
            sig[1..].sort_unstable();
        }
        point_colors = rank(&point_sigs, &mut key);

        let now = (distinct(&point_colors), distinct(&block_colors));
        if now == classes {
            break;
        }
        classes = now;
    }
    (point_colors, key)
}

/// Isomorphism-invariant key of `s`.
pub fn weak_canonical_key(s: &IncidenceStructure) -> Vec<u32> {
    refine(s).1
}

/// `s` relabeled with points sorted by final colour (ties by old index) and
/// blocks sorted ascending. Not itself an invariant; use the key to compare.
pub fn weak_canonical_form(s: &IncidenceStructure) -> IncidenceStructure {
    let (colors, _) = refine(s);
    let mut order: Vec<usize> = (0..s.v()).collect();
    order.sort_by_key(|&p| (colors[p], p));
    let mut perm = vec![0; s.v()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let identity: Vec<usize> = (0..s.v()).collect();
    let relabeled = s.relabeled(&perm, &identity);
    let mut blocks = relabeled.blocks().to_vec();
    blocks.sort_unstable();
    IncidenceStructure::from_sets(s.v(), blocks).expect("relabeling keeps the structure valid")
}
