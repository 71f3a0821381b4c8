use rand::Rng;

use super::permutation::{biased_partner, reverse_cyclic, NeighborLists};
use super::{unique_from, Candidate, OperatorFractions, Population};
use crate::error::Result;
use crate::levy::LevySampler;
use crate::space::{DesignSpace, Slot};

const COMPONENT_REDRAW_CAP: usize = 100;

/// Which slices of the design vector a Lévy flight perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevyParts {
    pub continuous: bool,
    pub discrete: bool,
    pub combinatorial: bool,
}

impl LevyParts {
    pub const ALL: Self = Self { continuous: true, discrete: true, combinatorial: true };
}

/// `x + step / beta`, redrawing `step` until the result lands in bounds.
/// After the redraw cap the last proposal is clamped.
pub fn levy_step_component(
    x: f64,
    lower: f64,
    upper: f64,
    beta: f64,
    mut draw: impl FnMut() -> f64,
) -> f64 {
    let mut proposal = x;
    for _ in 0..COMPONENT_REDRAW_CAP {
        proposal = x + draw() / beta;
        if proposal >= lower && proposal <= upper {
            return proposal;
        }
    }
    proposal.clamp(lower, upper)
}

/// Folds an out-of-range index back into `0..cardinality` by reflection.
pub fn reflect_index(mut index: i64, cardinality: usize) -> usize {
    let top = cardinality as i64 - 1;
    if top <= 0 {
        return 0;
    }
    loop {
        if index < 0 {
            index = -index;
        } else if index > top {
            index = 2 * top - index;
        } else {
            return index as usize;
        }
    }
}

/// New index after a truncated-flight step of `round(t * cardinality)` in
/// the given direction.
pub fn discrete_step(index: usize, cardinality: usize, t: f64, positive: bool) -> usize {
    let step = (t * cardinality as f64).round() as i64;
    let moved = if positive { index as i64 + step } else { index as i64 - step };
    reflect_index(moved, cardinality)
}

/// One child per selected parent; `ceil(f_levy * p)` parents are drawn
/// without replacement. Each enabled slice is perturbed in turn.
pub fn levy_flights<R: Rng + ?Sized>(
    pop: &Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    sampler: &LevySampler,
    parts: LevyParts,
    neighbors: Option<&NeighborLists>,
    rng: &mut R,
) -> Result<Vec<Candidate>> {
    let p = pop.len();
    let all: Vec<usize> = (0..p).collect();
    let parents = unique_from(&all, fractions.levy_count(p), rng);
    let mut out = Vec::with_capacity(parents.len());
    for parent in parents {
        let mut genome = pop.get(parent).genome.clone();
        if parts.continuous {
            for &slot in space.continuous_slots() {
                if let Slot::Continuous { lower, upper } = space.slots()[slot] {
                    genome.coords[slot] =
                        levy_step_component(genome.coords[slot], lower, upper, fractions.beta, || {
                            sampler.sample(rng)
                        });
                }
            }
        }
        if parts.discrete {
            for &slot in space.discrete_slots() {
                if let Slot::Discrete { cardinality } = space.slots()[slot] {
                    let t = sampler.sample_truncated(rng)?;
                    let positive = rng.random_bool(0.5);
                    genome.coords[slot] =
                        discrete_step(genome.coords[slot] as usize, cardinality, t, positive) as f64;
                }
            }
        }
        if parts.combinatorial && genome.perm.len() >= 2 {
            let n = genome.perm.len();
            let cut = rng.random_range(0..n);
            let t = sampler.sample_truncated(rng)?;
            let span = match neighbors {
                Some(lists) => biased_partner(&genome.perm, cut, t, lists),
                None => ((t * n as f64).round() as usize).clamp(1, n - 1),
            };
            invert_after(&mut genome.perm, cut, span, space.permutation_looping());
        }
        out.push(Candidate { genome, parent });
    }
    Ok(out)
}

/// Reverses the `span` elements following position `cut`.
pub fn invert_after(perm: &mut [usize], cut: usize, span: usize, looping: bool) {
    let n = perm.len();
    if looping {
        reverse_cyclic(perm, (cut + 1) % n, span.min(n - 1));
    } else {
        let start = cut + 1;
        let end = (cut + span).min(n - 1);
        if start < end {
            perm[start..=end].reverse();
        }
    }
}

pub fn cont_levy_flight<R: Rng + ?Sized>(
    pop: &Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    sampler: &LevySampler,
    rng: &mut R,
) -> Result<Vec<Candidate>> {
    let parts = LevyParts { continuous: true, discrete: false, combinatorial: false };
    levy_flights(pop, space, fractions, sampler, parts, None, rng)
}

pub fn disc_levy_flight<R: Rng + ?Sized>(
    pop: &Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    sampler: &LevySampler,
    rng: &mut R,
) -> Result<Vec<Candidate>> {
    let parts = LevyParts { continuous: false, discrete: true, combinatorial: false };
    levy_flights(pop, space, fractions, sampler, parts, None, rng)
}

pub fn comb_levy_flight<R: Rng + ?Sized>(
    pop: &Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    sampler: &LevySampler,
    rng: &mut R,
) -> Result<Vec<Candidate>> {
    let parts = LevyParts { continuous: false, discrete: false, combinatorial: true };
    levy_flights(pop, space, fractions, sampler, parts, None, rng)
}
