//! Small symmetric designs developed from cyclic difference sets.

use thiserror::Error;

use crate::design::{classify, DesignClass, IncidenceStructure};
use crate::pointset::{PointSet, MAX_POINTS};

/// Largest prime accepted by [`paley_design`].
pub const PALEY_BOUND: usize = 127;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("modulus {0} out of range")]
    Modulus(usize),
    #[error("residue {residue} is not reduced mod {v}")]
    Residue { residue: usize, v: usize },
    #[error("declared k = {declared} but the set has {actual} residues")]
    SetSize { declared: usize, actual: usize },
    #[error("difference {difference} occurs {count} times, expected {lambda}")]
    DifferenceCount { difference: usize, count: usize, lambda: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("{0} is not 3 mod 4")]
    WrongResidueClass(usize),
    #[error("{q} exceeds the bound {PALEY_BOUND}")]
    TooLarge { q: usize },
    #[error("input is not a symmetric design ({0})")]
    NotSymmetric(DesignClass),
    #[error("complement would have block intersection {0}")]
    DegenerateComplement(i64),
    #[error("no catalog design named `{0}`")]
    UnknownName(String),
}

/// A residue set `K ⊂ Z_v` with declared parameters `(v, k, λ')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceSet {
    pub v: usize,
    pub residues: Vec<usize>,
    pub k: usize,
    pub lambda: usize,
}

impl DifferenceSet {
    pub fn new(v: usize, residues: &[usize], k: usize, lambda: usize) -> Self {
        DifferenceSet { v, residues: residues.to_vec(), k, lambda }
    }

    /// Counts each nonzero difference and compares with the declared parameters.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let v = self.v;
        if !(2..=MAX_POINTS).contains(&v) {
            return Err(CatalogError::Modulus(v));
        }
        if let Some(&residue) = self.residues.iter().find(|&&r| r >= v) {
            return Err(CatalogError::Residue { residue, v });
        }
        let set: PointSet = self.residues.iter().copied().collect();
        if set.len() != self.k || self.residues.len() != self.k {
            return Err(CatalogError::SetSize { declared: self.k, actual: set.len() });
        }
        let mut counts = vec![0usize; v];
        for &p in &self.residues {
            for &q in &self.residues {
                if p != q {
                    counts[(p + v - q) % v] += 1;
                }
            }
        }
        for (difference, &count) in counts.iter().enumerate().skip(1) {
            if count != self.lambda {
                return Err(CatalogError::DifferenceCount { difference, count, lambda: self.lambda });
            }
        }
        Ok(())
    }
}

/// Blocks `K + i mod v`, `i = 0..v`.
pub fn develop(ds: &DifferenceSet) -> Result<IncidenceStructure, CatalogError> {
    ds.validate()?;
    let v = ds.v;
    let blocks = (0..v).map(|i| ds.residues.iter().map(move |&k| (k + i) % v).collect::<Vec<_>>());
    let s = IncidenceStructure::new(v, blocks).map_err(|_| CatalogError::Modulus(v))?;
    match classify(&s) {
        DesignClass::Symmetric { .. } => Ok(s),
        other => Err(CatalogError::NotSymmetric(other)),
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Quadratic residues mod a prime `q = 3 mod 4`, developed into a
/// `(q, (q-1)/2, (q-3)/4)` design.
pub fn paley_design(q: usize) -> Result<IncidenceStructure, CatalogError> {
    if !is_prime(q) {
        return Err(CatalogError::NotPrime(q));
    }
    if q % 4 != 3 {
        return Err(CatalogError::WrongResidueClass(q));
    }
    if q > PALEY_BOUND {
        return Err(CatalogError::TooLarge { q });
    }
    let mut residues: Vec<usize> = (1..q).map(|x| x * x % q).collect();
    residues.sort_unstable();
    residues.dedup();
    develop(&DifferenceSet::new(q, &residues, (q - 1) / 2, (q - 3) / 4))
}

/// Replaces every block by its complement: `(v, k, λ') -> (v, v-k, v-2k+λ')`.
pub fn set_complement(s: &IncidenceStructure) -> Result<IncidenceStructure, CatalogError> {
    let (v, k, lambda) = match classify(s) {
        DesignClass::Symmetric { v, k, lambda } => (v, k, lambda),
        other => return Err(CatalogError::NotSymmetric(other)),
    };
    let new_lambda = v as i64 - 2 * k as i64 + lambda as i64;
    if new_lambda < 1 || v - k <= new_lambda as usize {
        return Err(CatalogError::DegenerateComplement(new_lambda));
    }
    let blocks = s.blocks().iter().map(|b| b.complement_within(v)).collect();
    IncidenceStructure::from_sets(v, blocks).map_err(|_| CatalogError::DegenerateComplement(new_lambda))
}

/// One named symmetric design.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub design: IncidenceStructure,
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    /// `k != 2λ'`, so complementing at a block gives a Ryser design.
    pub complementable: bool,
}

const FANO: (usize, &[usize], usize, usize) = (7, &[1, 2, 4], 3, 1);
const BIPLANE_11: (usize, &[usize], usize, usize) = (11, &[1, 3, 4, 5, 9], 5, 2);
const PG_2_3: (usize, &[usize], usize, usize) = (13, &[0, 1, 3, 9], 4, 1);
const PG_2_4: (usize, &[usize], usize, usize) = (21, &[3, 6, 7, 12, 14], 5, 1);

fn from_constant((v, set, k, lambda): (usize, &[usize], usize, usize)) -> IncidenceStructure {
    develop(&DifferenceSet::new(v, set, k, lambda)).expect("catalog difference sets are valid")
}

fn entry(name: &'static str, design: IncidenceStructure) -> CatalogEntry {
    let DesignClass::Symmetric { v, k, lambda } = classify(&design) else {
        panic!("catalog entry {name} is not symmetric");
    };
    CatalogEntry { name, design, v, k, lambda, complementable: k != 2 * lambda }
}

/// The built-in designs, smallest first.
pub fn catalog_list() -> Vec<CatalogEntry> {
    let fano = from_constant(FANO);
    let biplane = from_constant(BIPLANE_11);
    let pg23 = from_constant(PG_2_3);
    let pg24 = from_constant(PG_2_4);
    let comp = |s: &IncidenceStructure| set_complement(s).expect("catalog complements are designs");
    vec![
        entry("fano", fano.clone()),
        entry("fano-complement", comp(&fano)),
        entry("biplane11", biplane.clone()),
        entry("biplane11-complement", comp(&biplane)),
        entry("pg23", pg23.clone()),
        entry("pg23-complement", comp(&pg23)),
        entry("paley19", paley_design(19).expect("19 is a Paley prime")),
        entry("pg24", pg24.clone()),
        entry("pg24-complement", comp(&pg24)),
        entry("paley23", paley_design(23).expect("23 is a Paley prime")),
    ]
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry, CatalogError> {
    catalog_list()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::UnknownName(name.to_string()))
}
