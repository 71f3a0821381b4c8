//! The generation loop and its stopping rules.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{LevyParams, LevySampler};
use crate::operators::{
    crossover, inversion_crossover, levy_flights, mutation, population_update, scatter_search,
    three_opt, two_opt, compare, Candidate, Evaluator, LevyParts, Member, OperatorFractions, Population,
};
use crate::problem::{better, EvalCounter, Evaluation, Problem};
use crate::space::DesignVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitScheme {
    #[default]
    Lhc,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceCriteria {
    pub max_evals: u64,
    pub stall_evals: u64,
    pub stall_tol: f64,
    pub fitness_rel_tol: f64,
    /// Overrides the problem's own known optimum when set.
    pub known_optimum: Option<f64>,
}

impl Default for ConvergenceCriteria {
    fn default() -> Self {
        Self {
            max_evals: 200_000,
            stall_evals: 10_000,
            stall_tol: 1e-6,
            fitness_rel_tol: 0.01,
            known_optimum: None,
        }
    }
}

impl ConvergenceCriteria {
    pub fn validate(&self) -> Result<()> {
        if self.max_evals == 0 || self.stall_evals == 0 {
            return Err(Error::InvalidSettings("max_evals and stall_evals must be positive".into()));
        }
        if !(self.stall_tol > 0.0) {
            return Err(Error::InvalidSettings(format!("stall_tol must be positive, got {}", self.stall_tol)));
        }
        // Zero is allowed: it asks for the optimum itself.
        if !(self.fitness_rel_tol >= 0.0) {
            return Err(Error::InvalidSettings(format!(
                "fitness_rel_tol must be non-negative, got {}",
                self.fitness_rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GnoweeSettings {
    pub population: usize,
    pub init: InitScheme,
    pub levy: LevyParams,
    pub fractions: OperatorFractions,
    pub criteria: ConvergenceCriteria,
    pub seed: u64,
    /// Pick permutation cut partners from each city's nearest neighbours.
    pub tsp_distance_bias: bool,
}

impl Default for GnoweeSettings {
    fn default() -> Self {
        Self {
            population: 25,
            init: InitScheme::Lhc,
            levy: LevyParams::default(),
            fractions: OperatorFractions::default(),
            criteria: ConvergenceCriteria::default(),
            seed: 0,
            tsp_distance_bias: false,
        }
    }
}

impl GnoweeSettings {
    pub fn validate(&self) -> Result<()> {
        if self.population < 3 {
            return Err(Error::InvalidSettings(format!(
                "population must be at least 3, got {}",
                self.population
            )));
        }
        self.levy.validate()?;
        self.fractions.validate()?;
        self.criteria.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    FitnessReached,
    Stalled,
    EvalBudget,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::FitnessReached => "FitnessReached",
            Termination::Stalled => "Stalled",
            Termination::EvalBudget => "EvalBudget",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryPoint {
    pub evals: u64,
    pub best_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_vector: DesignVector,
    pub best_fitness: f64,
    pub best_evaluation: Evaluation,
    pub total_evals: u64,
    pub termination: Termination,
    /// Every feasible improvement of the best-so-far design.
    pub history: Vec<HistoryPoint>,
}

/// Largest fitness that counts as converged. A zero optimum uses `tol` as an
/// absolute margin; otherwise the margin is `tol * |f_opt|` above `f_opt`.
pub fn fitness_threshold(optimum: f64, tol: f64) -> f64 {
    if optimum == 0.0 {
        tol
    } else {
        optimum + optimum.abs() * tol
    }
}

pub fn reached(best: &Evaluation, optimum: f64, tol: f64) -> bool {
    best.feasible && best.objective <= fitness_threshold(optimum, tol)
}

/// `trace` is the best-so-far record in discovery order (each entry beats
/// the previous one) and `evals` the evaluations spent so far.
pub fn check_convergence(
    trace: &[Evaluation],
    evals: u64,
    criteria: &ConvergenceCriteria,
    known_optimum: Option<f64>,
) -> Option<Termination> {
    let now = trace.last()?;
    if let Some(opt) = known_optimum {
        if reached(now, opt, criteria.fitness_rel_tol) {
            return Some(Termination::FitnessReached);
        }
    }
    if evals >= criteria.stall_evals {
        let cutoff = evals - criteria.stall_evals;
        if let Some(then) = trace.iter().rev().find(|e| e.eval_id <= cutoff) {
            let gain = match (then.feasible, now.feasible) {
                (true, true) => then.objective - now.objective,
                (false, false) => then.violation - now.violation,
                (false, true) => f64::INFINITY,
                (true, false) => 0.0,
            };
            if gain < criteria.stall_tol {
                return Some(Termination::Stalled);
            }
        }
    }
    if evals >= criteria.max_evals {
        return Some(Termination::EvalBudget);
    }
    None
}

/// Runs one optimization on RNG stream 0 of `settings.seed`.
pub fn run(problem: &Problem, settings: &GnoweeSettings) -> Result<RunResult> {
    run_with_stream(problem, settings, 0)
}

/// Runs one optimization on an independent stream of `settings.seed`.
pub fn run_with_stream(problem: &Problem, settings: &GnoweeSettings, stream: u64) -> Result<RunResult> {
    settings.validate()?;
    let space = &problem.space;
    if space.dimension() == 0 {
        return Err(Error::InvalidSpace("design space is empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    rng.set_stream(stream);
    let sampler = LevySampler::new(settings.levy)?;
    let counter = EvalCounter::new();
    let eval = Evaluator::new(problem, &counter);
    let criteria = &settings.criteria;
    let optimum = criteria.known_optimum.or(problem.known_optimum);
    let fractions = &settings.fractions;
    let neighbors = if settings.tsp_distance_bias { problem.neighbors.as_deref() } else { None };
    let has_perm = space.has_permutation();
    let has_scalar = space.scalar_len() > 0;
    let parts = LevyParts {
        continuous: !space.continuous_slots().is_empty(),
        discrete: !space.discrete_slots().is_empty(),
        combinatorial: has_perm,
    };

    // Over-sample the initial design and keep the best p.
    let p = settings.population;
    let samples = (2 * p).max(3 * space.dimension());
    let genomes = match settings.init {
        InitScheme::Lhc => space.lhc_genomes(samples, &mut rng),
        InitScheme::Uniform => space.uniform_genomes(samples, &mut rng),
    };
    let mut initial = genomes.into_iter().map(|g| eval.member(g)).collect::<Result<Vec<Member>>>()?;
    // Samples were evaluated in order, so this replays the best-so-far record.
    let mut best = initial[0].clone();
    let mut trace = vec![best.eval];
    for m in &initial[1..] {
        if better(&m.eval, &best.eval) {
            best = m.clone();
            trace.push(m.eval);
        }
    }
    initial.sort_by(|a, b| compare(&a.eval, &b.eval));
    initial.truncate(p);
    let mut pop = Population::with_trace(initial, best, trace);

    macro_rules! check {
        () => {
            if let Some(reason) = check_convergence(pop.trace(), counter.get(), criteria, optimum) {
                return Ok(finish(&pop, counter.get(), reason));
            }
        };
    }
    let merge = |pop: &mut Population, batch: Vec<Candidate>, mh: bool, rng: &mut ChaCha8Rng| -> Result<()> {
        let children = eval.batch(pop, batch)?;
        population_update(pop, children, mh, fractions.f_mh, rng);
        Ok(())
    };

    check!();
    loop {
        let before = counter.get();
        pop.generation += 1;
        if has_perm && space.permutation_len() >= 4 {
            three_opt(&mut pop, &eval, &mut rng)?;
            check!();
        }
        let flights = levy_flights(&pop, space, fractions, &sampler, parts, neighbors, &mut rng)?;
        merge(&mut pop, flights, true, &mut rng)?;
        check!();
        if has_scalar {
            let batch = crossover(&pop, space, fractions, &mut rng);
            merge(&mut pop, batch, false, &mut rng)?;
            check!();
            let batch = scatter_search(&pop, space, fractions, &mut rng);
            merge(&mut pop, batch, false, &mut rng)?;
            check!();
            let batch = mutation(&pop, space, fractions, &mut rng);
            merge(&mut pop, batch, false, &mut rng)?;
            check!();
        }
        if has_perm || space.discrete_slots().len() >= 2 {
            inversion_crossover(&mut pop, space, fractions, &eval, &mut rng)?;
            check!();
        }
        if has_perm {
            two_opt(&mut pop, space, fractions, &sampler, neighbors, &eval, &mut rng)?;
            check!();
        }
        if counter.get() == before {
            // Every operator reproduced its parents: nothing can change any more.
            return Ok(finish(&pop, counter.get(), Termination::Stalled));
        }
    }
}

fn finish(pop: &Population, total_evals: u64, termination: Termination) -> RunResult {
    let best = pop.best();
    let history = pop
        .trace()
        .iter()
        .filter(|e| e.feasible)
        .map(|e| HistoryPoint { evals: e.eval_id, best_fitness: e.objective })
        .collect();
    RunResult {
        best_vector: best.design.clone(),
        best_fitness: best.eval.objective,
        best_evaluation: best.eval,
        total_evals,
        termination,
        history,
    }
}
