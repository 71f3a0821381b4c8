//! Variation operators and the population-update policy.
//!
//! Operators that produce a batch of independent children return
//! [`Candidate`]s which the caller evaluates and merges with
//! [`population_update`]. The permutation operators that accept children
//! one at a time (3-opt, inversion crossover, 2-opt) evaluate through an
//! [`Evaluator`] and update the population in place.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{better, evaluate, EvalCounter, Evaluation, Problem};
use crate::space::{DesignVector, Genome};

mod levy_flight;
mod permutation;
mod recombine;

pub use levy_flight::{
    comb_levy_flight, cont_levy_flight, disc_levy_flight, discrete_step, invert_after, levy_flights,
    levy_step_component, reflect_index, LevyParts,
};
pub use permutation::{
    inversion_crossover, join_follower, reverse_cyclic, three_opt, three_opt_children, two_opt,
    two_opt_child, NeighborLists,
};
pub use recombine::{
    crossover, golden_child, mutation, mutation_row, scatter_child, scatter_search, GOLDEN_RATIO,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OperatorFractions {
    /// Fraction of parents that take a Lévy flight each generation.
    pub f_levy: f64,
    pub f_elite: f64,
    /// Probability that a rejected Lévy child is tried against another parent.
    pub f_mh: f64,
    /// Probability that a mutation mask entry is zero.
    pub f_mutation: f64,
    /// Lévy step divisor.
    pub beta: f64,
}

impl Default for OperatorFractions {
    fn default() -> Self {
        Self { f_levy: 1.0, f_elite: 0.2, f_mh: 0.2, f_mutation: 0.2, beta: 10.0 }
    }
}

impl OperatorFractions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("f_levy", self.f_levy),
            ("f_elite", self.f_elite),
            ("f_mh", self.f_mh),
            ("f_mutation", self.f_mutation),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidSettings(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidSettings(format!("beta must be positive, got {}", self.beta)));
        }
        Ok(())
    }

    /// `ceil(fraction * p)`, with a small guard against `0.2 * 25 = 5.000000000000001`.
    pub fn count(fraction: f64, p: usize) -> usize {
        ((fraction * p as f64 - 1e-9).ceil().max(0.0) as usize).min(p)
    }

    pub fn elite_count(&self, p: usize) -> usize {
        Self::count(self.f_elite, p)
    }

    pub fn levy_count(&self, p: usize) -> usize {
        Self::count(self.f_levy, p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub genome: Genome,
    pub design: DesignVector,
    pub eval: Evaluation,
}

/// A child genome tagged with the index of the parent it may replace.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub genome: Genome,
    pub parent: usize,
}

#[derive(Debug, Clone)]
pub struct Population {
    members: Vec<Member>,
    best: Member,
    /// Best-so-far evaluations in the order they were found.
    trace: Vec<Evaluation>,
    pub generation: u64,
}

impl Population {
    pub fn new(members: Vec<Member>) -> Self {
        assert!(!members.is_empty(), "population must not be empty");
        let mut pop =
            Self { best: members[0].clone(), trace: Vec::new(), members: Vec::new(), generation: 0 };
        let mut sorted: Vec<&Member> = members.iter().collect();
        sorted.sort_by_key(|m| m.eval.eval_id);
        pop.trace.push(sorted[0].eval);
        pop.best = sorted[0].clone();
        for m in sorted.into_iter().skip(1) {
            pop.observe(m);
        }
        pop.members = members;
        pop
    }

    /// Builds from an already-observed best-so-far record.
    pub fn with_trace(members: Vec<Member>, best: Member, trace: Vec<Evaluation>) -> Self {
        Self { members, best, trace, generation: 0 }
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, i: usize) -> &Member {
        &self.members[i]
    }

    pub fn best(&self) -> &Member {
        &self.best
    }

    pub fn trace(&self) -> &[Evaluation] {
        &self.trace
    }

    /// Records `m` as best-so-far if it beats the current record.
    pub fn observe(&mut self, m: &Member) {
        if better(&m.eval, &self.best.eval) {
            self.best = m.clone();
            self.trace.push(m.eval);
        }
    }

    pub fn replace(&mut self, i: usize, m: Member) {
        self.observe(&m);
        self.members[i] = m;
    }

    /// Replaces member `i` when `m` is strictly better; returns whether it did.
    pub fn offer(&mut self, i: usize, m: Member) -> bool {
        if better(&m.eval, &self.members[i].eval) {
            self.replace(i, m);
            true
        } else {
            false
        }
    }

    /// Member indices from best to worst; ties keep index order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.members.len()).collect();
        idx.sort_by(|&a, &b| compare(&self.members[a].eval, &self.members[b].eval));
        idx
    }

    /// Top `count` members under the feasibility-first order.
    pub fn elite(&self, count: usize) -> Vec<usize> {
        let mut r = self.ranking();
        r.truncate(count);
        r
    }
}

pub fn compare(a: &Evaluation, b: &Evaluation) -> Ordering {
    if better(a, b) {
        Ordering::Less
    } else if better(b, a) {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Decodes and evaluates genomes against one problem and counter.
pub struct Evaluator<'a> {
    pub problem: &'a Problem,
    pub counter: &'a EvalCounter,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem, counter: &'a EvalCounter) -> Self {
        Self { problem, counter }
    }

    pub fn member(&self, genome: Genome) -> Result<Member> {
        let design = self.problem.space.decode(&genome);
        let eval = evaluate(self.problem, &design, self.counter)?;
        Ok(Member { genome, design, eval })
    }

    /// Evaluates candidates in order, skipping children identical to their parent.
    pub fn batch(&self, pop: &Population, candidates: Vec<Candidate>) -> Result<Vec<(usize, Member)>> {
        candidates
            .into_iter()
            .filter(|c| c.genome != pop.get(c.parent).genome)
            .map(|c| Ok((c.parent, self.member(c.genome)?)))
            .collect()
    }
}

/// Children replace their own parent when strictly better. With `mh`, a
/// rejected child is, with probability `f_mh`, tried against one other
/// uniformly chosen parent and replaces it when strictly better.
pub fn population_update<R: Rng + ?Sized>(
    pop: &mut Population,
    children: Vec<(usize, Member)>,
    mh: bool,
    f_mh: f64,
    rng: &mut R,
) {
    let p = pop.len();
    for (parent, child) in children {
        if better(&child.eval, &pop.get(parent).eval) {
            pop.replace(parent, child);
        } else if mh && f_mh > 0.0 && p > 1 && rng.random::<f64>() < f_mh {
            let mut other = rng.random_range(0..p - 1);
            if other >= parent {
                other += 1;
            }
            pop.offer(other, child);
        }
    }
}

/// `count` distinct indices drawn from `pool` without replacement.
pub(crate) fn unique_from<R: Rng + ?Sized>(pool: &[usize], count: usize, rng: &mut R) -> Vec<usize> {
    let count = count.min(pool.len());
    rand::seq::index::sample(rng, pool.len(), count).into_iter().map(|i| pool[i]).collect()
}
