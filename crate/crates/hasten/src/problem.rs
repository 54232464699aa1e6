//! EC3 instances: parsing, validation, clause energies, and the brute-force
//! oracle.
//!
//! An instance document is JSON with two fields:
//!
//! ```json
//! {
//!   "n": 4,
//!   "clauses": [[1, 2, 3], [2, 3, 4], [1, 2, 4]]
//! }
//! ```
//!
//! Bit indices are 1-based. Bit 1 is the leftmost character of an assignment
//! string and the most significant bit of the basis-state index, so `0100`
//! over 4 bits is index 4. Duplicate clauses are permitted (they accumulate
//! energy weight); a duplicate bit index inside one clause is rejected.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Enumeration cap for [`Ec3Instance::brute_force_solutions`]; the oracle is
/// exponential by design.
pub const ENUMERATION_CAP: usize = 24;

/// A clause over three distinct 1-based bit indices, satisfied when exactly
/// one of the addressed bits is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Clause {
    bits: [usize; 3],
}

impl Clause {
    /// Validates distinctness and 1-based indexing; the range check against
    /// `n` happens at instance level.
    pub fn new(bits: [usize; 3]) -> Result<Self> {
        for (i, &b) in bits.iter().enumerate() {
            if b == 0 {
                return Err(Error::Validation(format!(
                    "clause {bits:?}: bit indices are 1-based, found 0"
                )));
            }
            if bits[..i].contains(&b) {
                return Err(Error::Validation(format!(
                    "clause {bits:?}: duplicate bit index {b}"
                )));
            }
        }
        Ok(Clause { bits })
    }

    pub fn bits(&self) -> [usize; 3] {
        self.bits
    }

    /// 0 iff exactly one of the three addressed bits is 1.
    pub fn energy(&self, a: &Assignment) -> u32 {
        let ones: u32 = self.bits.iter().map(|&b| a.bit(b)).sum();
        u32::from(ones != 1)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.bits[0], self.bits[1], self.bits[2])
    }
}

/// One of the `2^n` bit assignments, stored as a basis-state index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    index: usize,
    n_bits: usize,
}

impl Assignment {
    pub fn from_index(index: usize, n_bits: usize) -> Result<Self> {
        if index >= 1 << n_bits {
            return Err(Error::Validation(format!(
                "assignment index {index} out of range for {n_bits} bits"
            )));
        }
        Ok(Assignment { index, n_bits })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    /// Value of 1-based bit `i`; bit 1 is the most significant.
    pub fn bit(&self, i: usize) -> u32 {
        debug_assert!(i >= 1 && i <= self.n_bits);
        ((self.index >> (self.n_bits - i)) & 1) as u32
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.index, width = self.n_bits)
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n_bits = s.len();
        if n_bits == 0 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::Parse(format!(
                "assignment string must be non-empty binary, got {s:?}"
            )));
        }
        let index = usize::from_str_radix(s, 2)
            .map_err(|e| Error::Parse(format!("assignment {s:?}: {e}")))?;
        Assignment::from_index(index, n_bits)
    }
}

/// A validated EC3 instance: `n` bits and a non-empty clause list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ec3Instance {
    n_bits: usize,
    clauses: Vec<Clause>,
}

#[derive(Serialize, Deserialize)]
struct Document {
    n: usize,
    clauses: Vec<Vec<usize>>,
}

impl Ec3Instance {
    pub fn new(n_bits: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n_bits == 0 {
            return Err(Error::Validation("instance needs at least 1 bit".into()));
        }
        if clauses.is_empty() {
            return Err(Error::Validation(
                "instance needs at least one clause".into(),
            ));
        }
        for (ci, clause) in clauses.iter().enumerate() {
            for b in clause.bits() {
                if b > n_bits {
                    return Err(Error::Validation(format!(
                        "clause {} ({clause}): bit index {b} exceeds n = {n_bits}",
                        ci + 1
                    )));
                }
            }
        }
        Ok(Ec3Instance { n_bits, clauses })
    }

    /// The built-in four-bit reference instance: clauses {1,2,3}, {2,3,4},
    /// {1,2,4}; unique solution `0100`. The CLI names it `@paper`.
    pub fn reference_instance() -> Self {
        let clauses = vec![
            Clause::new([1, 2, 3]).unwrap(),
            Clause::new([2, 3, 4]).unwrap(),
            Clause::new([1, 2, 4]).unwrap(),
        ];
        Ec3Instance::new(4, clauses).unwrap()
    }

    /// Parses an instance document; syntax errors carry line/column from the
    /// JSON parser, semantic errors name the offending clause.
    pub fn parse_document(text: &str) -> Result<Self> {
        let doc: Document =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut clauses = Vec::with_capacity(doc.clauses.len());
        for (ci, raw) in doc.clauses.iter().enumerate() {
            let bits: [usize; 3] = raw.as_slice().try_into().map_err(|_| {
                Error::Validation(format!(
                    "clause {} ({raw:?}): expected exactly 3 bit indices, got {}",
                    ci + 1,
                    raw.len()
                ))
            })?;
            let clause = Clause::new(bits)
                .map_err(|e| Error::Validation(format!("clause {}: {e}", ci + 1)))?;
            clauses.push(clause);
        }
        Ec3Instance::new(doc.n, clauses)
    }

    /// Canonical serialization; round-trips through [`Self::parse_document`].
    pub fn to_document(&self) -> String {
        let doc = Document {
            n: self.n_bits,
            clauses: self
                .clauses
                .iter()
                .map(|c| c.bits().to_vec())
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("instance serializes");
        text.push('\n');
        text
    }

    /// Resolves `@paper` to the built-in instance, anything else to a file
    /// path.
    pub fn load(source: &str) -> Result<Self> {
        if source == "@paper" {
            return Ok(Self::reference_instance());
        }
        if let Some(name) = source.strip_prefix('@') {
            return Err(Error::Validation(format!(
                "unknown built-in instance @{name}; available: @paper"
            )));
        }
        let text = std::fs::read_to_string(source)?;
        Self::parse_document(&text)
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_bits
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of violated clauses; the diagonal entry of the problem
    /// Hamiltonian at `a`.
    pub fn violated_count(&self, a: &Assignment) -> u32 {
        self.clauses.iter().map(|c| c.energy(a)).sum()
    }

    /// Clause multiplicity of each bit (1-based bit `i` at slot `i - 1`);
    /// these are the mixer weights `w_i`.
    pub fn bit_multiplicities(&self) -> Vec<usize> {
        let mut w = vec![0usize; self.n_bits];
        for clause in &self.clauses {
            for b in clause.bits() {
                w[b - 1] += 1;
            }
        }
        w
    }

    /// Enumerates all `2^n` assignments and returns the minimal violated
    /// count with every assignment attaining it. The range is partitioned
    /// across the current rayon pool; the result is independent of the
    /// partitioning.
    pub fn brute_force_solutions(&self) -> Result<SolveOutcome> {
        if self.n_bits > ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                what: "brute-force enumeration bits",
                limit: ENUMERATION_CAP,
                requested: self.n_bits,
            });
        }
        let dim = self.dimension();
        let (min_energy, mut indices) = (0..dim)
            .into_par_iter()
            .fold(
                || (u32::MAX, Vec::new()),
                |(mut best, mut ids), idx| {
                    let a = Assignment {
                        index: idx,
                        n_bits: self.n_bits,
                    };
                    let e = self.violated_count(&a);
                    if e < best {
                        best = e;
                        ids.clear();
                        ids.push(idx);
                    } else if e == best {
                        ids.push(idx);
                    }
                    (best, ids)
                },
            )
            .reduce(
                || (u32::MAX, Vec::new()),
                |(ea, mut ia), (eb, mut ib)| {
                    if ea < eb {
                        (ea, ia)
                    } else if eb < ea {
                        (eb, ib)
                    } else {
                        ia.append(&mut ib);
                        (ea, ia)
                    }
                },
            );
        indices.sort_unstable();
        let minimizers = indices
            .into_iter()
            .map(|index| Assignment {
                index,
                n_bits: self.n_bits,
            })
            .collect();
        Ok(SolveOutcome {
            min_energy,
            minimizers,
        })
    }
}

/// Result of the brute-force oracle: the instance is satisfiable iff
/// `min_energy == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub min_energy: u32,
    pub minimizers: Vec<Assignment>,
}

impl SolveOutcome {
    pub fn satisfiable(&self) -> bool {
        self.min_energy == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_instance_solution() {
        let inst = Ec3Instance::reference_instance();
        let out = inst.brute_force_solutions().unwrap();
        assert_eq!(out.min_energy, 0);
        assert_eq!(out.minimizers.len(), 1);
        assert_eq!(out.minimizers[0].to_string(), "0100");
        assert_eq!(out.minimizers[0].index(), 4);
    }

    #[test]
    fn clause_energy_cases() {
        let c = Clause::new([1, 2, 3]).unwrap();
        let a = |s: &str| s.parse::<Assignment>().unwrap();
        assert_eq!(c.energy(&a("0100")), 0);
        assert_eq!(c.energy(&a("0000")), 1);
        assert_eq!(c.energy(&a("1110")), 1);
    }

    #[test]
    fn violated_count_extremes() {
        let inst = Ec3Instance::reference_instance();
        let a = |s: &str| s.parse::<Assignment>().unwrap();
        assert_eq!(inst.violated_count(&a("0100")), 0);
        assert_eq!(inst.violated_count(&a("0000")), 3);
        assert_eq!(inst.violated_count(&a("1111")), 3);
    }

    #[test]
    fn multiplicities() {
        let inst = Ec3Instance::reference_instance();
        assert_eq!(inst.bit_multiplicities(), vec![2, 3, 2, 2]);
    }

    #[test]
    fn single_clause_solutions() {
        let inst = Ec3Instance::new(3, vec![Clause::new([1, 2, 3]).unwrap()]).unwrap();
        let out = inst.brute_force_solutions().unwrap();
        assert_eq!(out.min_energy, 0);
        let set: Vec<String> = out.minimizers.iter().map(|a| a.to_string()).collect();
        assert_eq!(set, vec!["001", "010", "100"]);
    }

    #[test]
    fn duplicated_clause_keeps_solutions() {
        let c = Clause::new([1, 2, 3]).unwrap();
        let inst = Ec3Instance::new(3, vec![c, c]).unwrap();
        let out = inst.brute_force_solutions().unwrap();
        assert_eq!(out.min_energy, 0);
        assert_eq!(out.minimizers.len(), 3);
    }

    #[test]
    fn document_roundtrip() {
        let inst = Ec3Instance::reference_instance();
        let text = inst.to_document();
        let back = Ec3Instance::parse_document(&text).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn parse_reports_position() {
        let err = Ec3Instance::parse_document("{\"n\": 4,\n \"clauses\": [[1,2,]]}")
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn duplicate_bit_rejected() {
        let err =
            Ec3Instance::parse_document("{\"n\": 3, \"clauses\": [[1, 1, 2]]}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("clause 1"), "{msg}");
        assert!(msg.contains("duplicate"), "{msg}");
    }

    #[test]
    fn out_of_range_bit_rejected() {
        let err =
            Ec3Instance::parse_document("{\"n\": 3, \"clauses\": [[1, 2, 5]]}").unwrap_err();
        assert!(err.to_string().contains("exceeds n"), "{err}");
    }

    #[test]
    fn wrong_arity_rejected() {
        let err =
            Ec3Instance::parse_document("{\"n\": 3, \"clauses\": [[1, 2]]}").unwrap_err();
        assert!(err.to_string().contains("exactly 3"), "{err}");
    }

    #[test]
    fn enumeration_cap_enforced() {
        let inst = Ec3Instance::new(25, vec![Clause::new([1, 2, 3]).unwrap()]).unwrap();
        assert!(matches!(
            inst.brute_force_solutions(),
            Err(Error::CapExceeded { .. })
        ));
    }
}
