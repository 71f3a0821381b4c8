//! Heterogeneous design spaces.
//!
//! Scalar variables (continuous, integer, binary, discrete-set) live in
//! [`DesignVector::values`] in declaration order; the optional single
//! combinatorial variable lives in [`DesignVector::permutation`].
//!
//! Operators never touch values directly. They work on a [`Genome`], where
//! continuous variables keep their value and every discrete-family variable
//! is represented by its index into the ordered set of admissible values.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VariableSpec {
    Continuous { lower: f64, upper: f64 },
    Integer { lower: i64, upper: i64 },
    Binary,
    DiscreteSet { values: Vec<f64> },
    Combinatorial { length: usize, looping: bool },
}

impl VariableSpec {
    fn check(&self, index: usize) -> Result<()> {
        let fail = |reason: &str| Err(Error::InvalidVariable { index, reason: reason.into() });
        match self {
            VariableSpec::Continuous { lower, upper } => {
                if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                    return fail("continuous bounds must be finite with lower < upper");
                }
            }
            VariableSpec::Integer { lower, upper } => {
                if lower >= upper {
                    return fail("integer bounds must satisfy lower < upper");
                }
            }
            VariableSpec::Binary => {}
            VariableSpec::DiscreteSet { values } => {
                if values.is_empty() {
                    return fail("discrete set is empty");
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return fail("discrete set contains a non-finite value");
                }
                if values.windows(2).any(|w| w[0] >= w[1]) {
                    return fail("discrete set must be strictly ascending");
                }
            }
            VariableSpec::Combinatorial { length, .. } => {
                if *length < 2 {
                    return fail("permutation length must be at least 2");
                }
            }
        }
        Ok(())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            VariableSpec::Continuous { .. } => "continuous",
            VariableSpec::Integer { .. } => "integer",
            VariableSpec::Binary => "binary",
            VariableSpec::DiscreteSet { .. } => "discrete-set",
            VariableSpec::Combinatorial { .. } => "combinatorial",
        }
    }
}

/// Operator-facing view of one scalar variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    Continuous { lower: f64, upper: f64 },
    /// Index in `0..cardinality`.
    Discrete { cardinality: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    variables: Vec<VariableSpec>,
    slots: Vec<Slot>,
    /// Declaration index of each scalar slot.
    slot_variable: Vec<usize>,
    continuous: Vec<usize>,
    discrete: Vec<usize>,
    permutation: Option<(usize, bool)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DesignVector {
    pub values: Vec<f64>,
    pub permutation: Vec<usize>,
}

impl DesignVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values, permutation: Vec::new() }
    }

    pub fn with_permutation(values: Vec<f64>, permutation: Vec<usize>) -> Self {
        Self { values, permutation }
    }

    /// Values followed by the permutation, for error reports and CSV output.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = self.values.clone();
        out.extend(self.permutation.iter().map(|&p| p as f64));
        out
    }
}

/// Index-space representation used by the variation operators.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Genome {
    pub coords: Vec<f64>,
    pub perm: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Declaration index of the offending variable.
    pub index: usize,
    pub reason: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "variable {}: {}", self.index, self.reason)
    }
}

/// Nearest index of `target` in an ascending list; ties go to the lower one.
fn nearest_member(values: &[f64], target: f64) -> usize {
    let pos = values.partition_point(|&v| v < target);
    if pos == 0 {
        0
    } else if pos == values.len() {
        values.len() - 1
    } else if target - values[pos - 1] <= values[pos] - target {
        pos - 1
    } else {
        pos
    }
}

/// Round to nearest, ties toward negative infinity.
pub(crate) fn round_half_down(x: f64) -> f64 {
    (x - 0.5).ceil()
}

pub fn is_permutation(perm: &[usize], len: usize) -> bool {
    if perm.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

impl DesignSpace {
    pub fn new(variables: Vec<VariableSpec>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidSpace("no variables".into()));
        }
        let mut slots = Vec::new();
        let mut slot_variable = Vec::new();
        let mut continuous = Vec::new();
        let mut discrete = Vec::new();
        let mut permutation = None;
        for (index, spec) in variables.iter().enumerate() {
            spec.check(index)?;
            let slot = match spec {
                VariableSpec::Continuous { lower, upper } => {
                    continuous.push(slots.len());
                    Slot::Continuous { lower: *lower, upper: *upper }
                }
                VariableSpec::Integer { lower, upper } => {
                    discrete.push(slots.len());
                    Slot::Discrete { cardinality: (upper - lower) as usize + 1 }
                }
                VariableSpec::Binary => {
                    discrete.push(slots.len());
                    Slot::Discrete { cardinality: 2 }
                }
                VariableSpec::DiscreteSet { values } => {
                    discrete.push(slots.len());
                    Slot::Discrete { cardinality: values.len() }
                }
                VariableSpec::Combinatorial { length, looping } => {
                    if permutation.is_some() {
                        return Err(Error::InvalidSpace(
                            "at most one combinatorial variable is supported".into(),
                        ));
                    }
                    permutation = Some((*length, *looping));
                    continue;
                }
            };
            slots.push(slot);
            slot_variable.push(index);
        }
        Ok(Self { variables, slots, slot_variable, continuous, discrete, permutation })
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn scalar_len(&self) -> usize {
        self.slots.len()
    }

    /// Scalar slots holding continuous variables.
    pub fn continuous_slots(&self) -> &[usize] {
        &self.continuous
    }

    /// Scalar slots holding integer, binary or discrete-set variables.
    pub fn discrete_slots(&self) -> &[usize] {
        &self.discrete
    }

    pub fn permutation_len(&self) -> usize {
        self.permutation.map_or(0, |(len, _)| len)
    }

    pub fn has_permutation(&self) -> bool {
        self.permutation.is_some()
    }

    pub fn permutation_looping(&self) -> bool {
        self.permutation.is_some_and(|(_, looping)| looping)
    }

    /// Design-vector length counting every permutation entry.
    pub fn dimension(&self) -> usize {
        self.scalar_len() + self.permutation_len()
    }

    fn check_len(&self, v: &DesignVector) -> Result<()> {
        if v.values.len() != self.scalar_len() {
            return Err(Error::LengthMismatch { expected: self.scalar_len(), actual: v.values.len() });
        }
        if v.permutation.len() != self.permutation_len() {
            return Err(Error::LengthMismatch {
                expected: self.permutation_len(),
                actual: v.permutation.len(),
            });
        }
        Ok(())
    }

    /// `Ok(None)` when the vector is admissible, otherwise the first violation.
    pub fn validate(&self, v: &DesignVector) -> Result<Option<Violation>> {
        self.check_len(v)?;
        for (slot, &x) in v.values.iter().enumerate() {
            let index = self.slot_variable[slot];
            let bad = |reason: String| Ok(Some(Violation { index, reason }));
            match &self.variables[index] {
                VariableSpec::Continuous { lower, upper } => {
                    if !(x >= *lower && x <= *upper) {
                        return bad(format!("{x} outside [{lower}, {upper}]"));
                    }
                }
                VariableSpec::Integer { lower, upper } => {
                    if x.fract() != 0.0 || x < *lower as f64 || x > *upper as f64 {
                        return bad(format!("{x} is not an integer in [{lower}, {upper}]"));
                    }
                }
                VariableSpec::Binary => {
                    if x != 0.0 && x != 1.0 {
                        return bad(format!("{x} is not binary"));
                    }
                }
                VariableSpec::DiscreteSet { values } => {
                    if !values.contains(&x) {
                        return bad(format!("{x} is not a member of the discrete set"));
                    }
                }
                VariableSpec::Combinatorial { .. } => unreachable!("scalar slot"),
            }
        }
        if let Some((len, _)) = self.permutation {
            if !is_permutation(&v.permutation, len) {
                let index = self
                    .variables
                    .iter()
                    .position(|s| matches!(s, VariableSpec::Combinatorial { .. }))
                    .unwrap_or(0);
                return Ok(Some(Violation {
                    index,
                    reason: format!("not a permutation of 0..{len}"),
                }));
            }
        }
        Ok(None)
    }

    /// Clamps continuous values, rounds and clamps integers, snaps
    /// discrete-set values to the nearest member (ties to the lower one).
    /// Permutations are left untouched.
    pub fn repair_to_bounds(&self, v: &DesignVector) -> Result<DesignVector> {
        self.check_len(v)?;
        let values = v
            .values
            .iter()
            .enumerate()
            .map(|(slot, &x)| match &self.variables[self.slot_variable[slot]] {
                VariableSpec::Continuous { lower, upper } => clamp_nan(x, *lower, *upper),
                VariableSpec::Integer { lower, upper } => {
                    clamp_nan(round_half_down(x), *lower as f64, *upper as f64)
                }
                VariableSpec::Binary => clamp_nan(round_half_down(x), 0.0, 1.0),
                VariableSpec::DiscreteSet { values } => {
                    values[nearest_member(values, if x.is_nan() { values[0] } else { x })]
                }
                VariableSpec::Combinatorial { .. } => unreachable!("scalar slot"),
            })
            .collect();
        Ok(DesignVector { values, permutation: v.permutation.clone() })
    }

    pub fn encode(&self, v: &DesignVector) -> Result<Genome> {
        let repaired = self.repair_to_bounds(v)?;
        let coords = repaired
            .values
            .iter()
            .enumerate()
            .map(|(slot, &x)| match &self.variables[self.slot_variable[slot]] {
                VariableSpec::Continuous { .. } | VariableSpec::Binary => x,
                VariableSpec::Integer { lower, .. } => x - *lower as f64,
                VariableSpec::DiscreteSet { values } => nearest_member(values, x) as f64,
                VariableSpec::Combinatorial { .. } => unreachable!("scalar slot"),
            })
            .collect();
        Ok(Genome { coords, perm: repaired.permutation })
    }

    /// Maps a repaired genome back to design values.
    pub fn decode(&self, g: &Genome) -> DesignVector {
        let values = g
            .coords
            .iter()
            .enumerate()
            .map(|(slot, &c)| match &self.variables[self.slot_variable[slot]] {
                VariableSpec::Continuous { .. } | VariableSpec::Binary => c,
                VariableSpec::Integer { lower, .. } => *lower as f64 + c,
                VariableSpec::DiscreteSet { values } => values[c as usize],
                VariableSpec::Combinatorial { .. } => unreachable!("scalar slot"),
            })
            .collect();
        DesignVector { values, permutation: g.perm.clone() }
    }

    /// Clamps continuous coordinates and rounds discrete indices into range.
    pub fn repair_genome(&self, g: &mut Genome) {
        for (c, slot) in g.coords.iter_mut().zip(&self.slots) {
            *c = match *slot {
                Slot::Continuous { lower, upper } => clamp_nan(*c, lower, upper),
                Slot::Discrete { cardinality } => {
                    clamp_nan(round_half_down(*c), 0.0, (cardinality - 1) as f64)
                }
            };
        }
    }

    /// Latin-hypercube design: every scalar dimension places exactly one
    /// sample in each of `count` equal strata of its (index) range.
    /// Permutations are drawn uniformly at random.
    pub fn lhc_genomes<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Genome> {
        let mut out: Vec<Genome> = (0..count)
            .map(|_| Genome { coords: vec![0.0; self.scalar_len()], perm: Vec::new() })
            .collect();
        let mut strata: Vec<usize> = (0..count).collect();
        for (d, slot) in self.slots.iter().enumerate() {
            strata.shuffle(rng);
            for (g, &stratum) in out.iter_mut().zip(&strata) {
                let u: f64 = rng.random();
                let frac = (stratum as f64 + u) / count as f64;
                g.coords[d] = match *slot {
                    Slot::Continuous { lower, upper } => {
                        (lower + frac * (upper - lower)).clamp(lower, upper)
                    }
                    Slot::Discrete { cardinality } => discrete_stratum(stratum, count, cardinality, u),
                };
            }
        }
        self.fill_permutations(&mut out, rng);
        out
    }

    pub fn uniform_genomes<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Genome> {
        let mut out: Vec<Genome> = (0..count)
            .map(|_| Genome {
                coords: self
                    .slots
                    .iter()
                    .map(|slot| match *slot {
                        Slot::Continuous { lower, upper } => rng.random_range(lower..=upper),
                        Slot::Discrete { cardinality } => rng.random_range(0..cardinality) as f64,
                    })
                    .collect(),
                perm: Vec::new(),
            })
            .collect();
        self.fill_permutations(&mut out, rng);
        out
    }

    fn fill_permutations<R: Rng + ?Sized>(&self, genomes: &mut [Genome], rng: &mut R) {
        if let Some((len, _)) = self.permutation {
            for g in genomes {
                let mut perm: Vec<usize> = (0..len).collect();
                perm.shuffle(rng);
                g.perm = perm;
            }
        }
    }

    pub fn lhc_initialize<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<DesignVector> {
        self.lhc_genomes(count, rng).iter().map(|g| self.decode(g)).collect()
    }
}

/// Index drawn from stratum `k` of `count` over `0..cardinality`. With at
/// least as many indices as strata the strata are disjoint index blocks;
/// otherwise each index is shared by an even share of strata.
fn discrete_stratum(k: usize, count: usize, cardinality: usize, u: f64) -> f64 {
    if cardinality >= count {
        let lo = (k * cardinality).div_ceil(count);
        let hi = ((k + 1) * cardinality).div_ceil(count);
        (lo + ((u * (hi - lo) as f64) as usize).min(hi - lo - 1)) as f64
    } else {
        (k * cardinality / count) as f64
    }
}

fn clamp_nan(x: f64, lower: f64, upper: f64) -> f64 {
    if x.is_nan() {
        lower
    } else {
        x.clamp(lower, upper)
    }
}
