//! Block complementation `D*A`: keep `A`, replace every other block `B` by `A △ B`.

use std::fmt;

use thiserror::Error;

use crate::design::{
    classify, replication_pair, replication_profile, DesignClass, IncidenceStructure,
    InvalidReason,
};
use crate::pointset::PointSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplementError {
    #[error("block index {index} out of range for {v} blocks")]
    IndexOutOfRange { index: usize, v: usize },
    #[error("source structure is not a design: {0}")]
    InvalidSource(InvalidReason),
    #[error("source structure is not a Ryser design ({0})")]
    NotRyser(DesignClass),
    #[error("the two blocks must differ (both {0})")]
    SameBlock(usize),
}

fn check_index(s: &IncidenceStructure, index: usize) -> Result<(), ComplementError> {
    if index >= s.v() {
        Err(ComplementError::IndexOutOfRange { index, v: s.v() })
    } else {
        Ok(())
    }
}

/// Raw complementation with no classification of the source. Block `index`
/// stays in place and every other slot holds its symmetric difference with it.
///
/// Fails only if some `A △ B` is empty, i.e. `B == A`.
pub fn complement_unchecked(
    s: &IncidenceStructure,
    index: usize,
) -> Result<IncidenceStructure, crate::design::DesignError> {
    let a = s.block(index);
    let blocks = s
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, &b)| if i == index { a } else { a.symmetric_difference(b) })
        .collect();
    IncidenceStructure::from_sets(s.v(), blocks)
}

/// `D*A` for a symmetric or Ryser source, with `A = s.block(index)`.
///
/// For a symmetric source with `k = 2λ'` the result is again symmetric;
/// the operation still runs and the caller classifies.
pub fn complement(s: &IncidenceStructure, index: usize) -> Result<IncidenceStructure, ComplementError> {
    check_index(s, index)?;
    if let DesignClass::Invalid(reason) = classify(s) {
        return Err(ComplementError::InvalidSource(reason));
    }
    // Distinct blocks of a design never coincide, so no A △ B is empty.
    Ok(complement_unchecked(s, index).expect("design blocks are distinct"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Item {
    Involution,
    ComplementChain,
    ReplicationPreserved,
    IndexShift,
    ClassShift,
    ClassSizeShift,
    SymmetricIffClass,
}

impl Item {
    pub const ALL: [Item; 7] = [
        Item::Involution,
        Item::ComplementChain,
        Item::ReplicationPreserved,
        Item::IndexShift,
        Item::ClassShift,
        Item::ClassSizeShift,
        Item::SymmetricIffClass,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            Item::Involution => "i",
            Item::ComplementChain => "ii",
            Item::ReplicationPreserved => "iii",
            Item::IndexShift => "iv",
            Item::ClassShift => "v",
            Item::ClassSizeShift => "vi",
            Item::SymmetricIffClass => "vii",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemResult {
    pub item: Item,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of checking all seven complementation properties for one `(A, B)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementReport {
    pub a_index: usize,
    pub b_index: usize,
    pub items: Vec<ItemResult>,
}

impl ComplementReport {
    pub fn get(&self, item: Item) -> &ItemResult {
        self.items.iter().find(|r| r.item == item).expect("report covers every item")
    }

    /// True when no applicable item fails.
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|r| r.status != Status::Fails)
    }
}

impl fmt::Display for ComplementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.items {
            let status = match r.status {
                Status::Holds => "PASS",
                Status::Fails => "FAIL",
                Status::NotApplicable => "N/A",
            };
            writeln!(f, "item.{}\t{}\t{}\t{}", r.item.roman(), r.lhs, r.rhs, status)?;
        }
        Ok(())
    }
}

fn result(item: Item, holds: bool, lhs: impl ToString, rhs: impl ToString) -> ItemResult {
    ItemResult {
        item,
        status: if holds { Status::Holds } else { Status::Fails },
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

fn not_applicable(item: Item, why: &str) -> ItemResult {
    ItemResult { item, status: Status::NotApplicable, lhs: why.to_string(), rhs: "-".into() }
}

fn class_label(c: &DesignClass) -> String {
    match c {
        DesignClass::Symmetric { .. } => "symmetric".into(),
        DesignClass::Ryser { .. } => "ryser".into(),
        DesignClass::Invalid(r) => format!("invalid:{}", r.code()),
    }
}

/// Evaluates both sides of each complementation property for blocks
/// `A = s.block(a_index)` and `B = s.block(b_index)`.
///
/// Items (v)-(vii) need the replication classes of a Ryser source and are
/// reported not applicable for a symmetric one. `E1` of the complemented
/// structure is read as the set of points whose replication equals `r1` of
/// the source, which keeps (v) meaningful when `D*A` is symmetric.
pub fn verify_complement_properties(
    s: &IncidenceStructure,
    a_index: usize,
    b_index: usize,
) -> Result<ComplementReport, ComplementError> {
    check_index(s, a_index)?;
    check_index(s, b_index)?;
    if a_index == b_index {
        return Err(ComplementError::SameBlock(a_index));
    }
    let class = classify(s);
    if let DesignClass::Invalid(reason) = class {
        return Err(ComplementError::InvalidSource(reason));
    }
    let a = s.block(a_index);
    let b = s.block(b_index);
    let da = complement(s, a_index)?;
    let da_class = classify(&da);
    let mut items = Vec::with_capacity(7);

    // (i)
    let back = complement_unchecked(&da, a_index);
    items.push(result(
        Item::Involution,
        back.as_ref().map(|t| t == s).unwrap_or(false),
        "(D*A)*A",
        "D",
    ));

    // (ii): located by content; the slot of A△B in D*A is b_index by construction
    let ab = a.symmetric_difference(b);
    let chain_ok = match da.position(ab) {
        Some(pos) => {
            let lhs = complement_unchecked(&da, pos);
            let rhs = complement_unchecked(s, b_index);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) => l.same_blocks_unordered(&r),
                _ => false,
            }
        }
        None => false,
    };
    items.push(result(Item::ComplementChain, chain_ok, "(D*A)*(A^B)", "D*B"));

    // (iii)
    let pair = replication_pair(s, &class);
    let da_pair = replication_pair(&da, &da_class);
    let r1_ok = matches!((pair, da_pair), (Some((r1, _)), Some((s1, _))) if r1 == s1);
    items.push(result(
        Item::ReplicationPreserved,
        r1_ok,
        da_pair.map(|p| p.0.to_string()).unwrap_or_else(|| class_label(&da_class)),
        pair.map(|p| p.0.to_string()).unwrap_or_else(|| "-".into()),
    ));

    // (iv)
    let lambda = class.lambda().expect("source is a design");
    let lhs = da_class.lambda();
    let rhs = a.len() as i64 - lambda as i64;
    items.push(result(
        Item::IndexShift,
        lhs.map(|l| l as i64) == Some(rhs),
        lhs.map(|l| l.to_string()).unwrap_or_else(|| class_label(&da_class)),
        rhs,
    ));

    match class {
        DesignClass::Ryser { .. } => {
            let (r1, r2) = pair.expect("Ryser source has two replication values");
            let prof = replication_profile(s);
            let e1 = prof.class_of(r1);
            let e2 = prof.class_of(r2);
            let da_e1 = replication_profile(&da).class_of(r1);

            // (v)
            let expect = e1.symmetric_difference(a);
            items.push(result(Item::ClassShift, da_e1 == expect, da_e1, expect));

            // (vi)
            let tau1 = a.intersection_len(e1) as i64;
            let tau2 = a.intersection_len(e2) as i64;
            let rhs = e1.len() as i64 - tau1 + tau2;
            items.push(result(Item::ClassSizeShift, da_e1.len() as i64 == rhs, da_e1.len(), rhs));

            // (vii)
            let lhs = da_class.is_symmetric();
            let rhs = a == e1 || a == e2;
            items.push(result(Item::SymmetricIffClass, lhs == rhs, lhs, rhs));
        }
        _ => {
            items.push(not_applicable(Item::ClassShift, "symmetric-source"));
            items.push(not_applicable(Item::ClassSizeShift, "symmetric-source"));
            items.push(not_applicable(Item::SymmetricIffClass, "symmetric-source"));
        }
    }

    Ok(ComplementReport { a_index, b_index, items })
}

/// The first block equal to `E1` or `E2`, together with the (symmetric)
/// class of the design complemented there. `None` when no such block exists.
pub fn type1_witness(s: &IncidenceStructure) -> Result<Option<(usize, DesignClass)>, ComplementError> {
    let class = classify(s);
    if !class.is_ryser() {
        return Err(ComplementError::NotRyser(class));
    }
    let (r1, r2) = replication_pair(s, &class).expect("Ryser design has two replication values");
    let prof = replication_profile(s);
    let e1 = prof.class_of(r1);
    let e2 = prof.class_of(r2);
    for (i, &b) in s.blocks().iter().enumerate() {
        if b == e1 || b == e2 {
            let sym = classify(&complement(s, i)?);
            return Ok(Some((i, sym)));
        }
    }
    Ok(None)
}

/// Points of `s` grouped by replication value (largest first).
pub fn replication_classes(s: &IncidenceStructure) -> Vec<(usize, PointSet)> {
    let prof = replication_profile(s);
    prof.values.iter().map(|&(r, _)| (r, prof.class_of(r))).collect()
}
