//! Objective/constraint contract, feasibility-first ranking and
//! evaluation accounting.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operators::NeighborLists;
use crate::space::{DesignSpace, DesignVector};

pub const DEFAULT_EQ_TOL: f64 = 1e-4;

/// Raw model output for one design.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Response {
    pub objective: f64,
    /// `g_j(x)`, satisfied when `<= 0`.
    pub inequality: Vec<f64>,
    /// `h_k(x)`, satisfied when `|h_k| <= eq_tol`.
    pub equality: Vec<f64>,
}

impl Response {
    pub fn unconstrained(objective: f64) -> Self {
        Self { objective, ..Self::default() }
    }

    pub fn constrained(objective: f64, inequality: Vec<f64>) -> Self {
        Self { objective, inequality, equality: Vec::new() }
    }
}

pub type Model = dyn Fn(&DesignVector) -> std::result::Result<Response, String> + Send + Sync;

#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub space: DesignSpace,
    model: Arc<Model>,
    pub known_optimum: Option<f64>,
    pub eq_tol: f64,
    /// Near-neighbour lists for distance-biased permutation moves.
    pub neighbors: Option<Arc<NeighborLists>>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("known_optimum", &self.known_optimum)
            .field("eq_tol", &self.eq_tol)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new<F>(name: impl Into<String>, space: DesignSpace, model: F) -> Self
    where
        F: Fn(&DesignVector) -> std::result::Result<Response, String> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            space,
            model: Arc::new(model),
            known_optimum: None,
            eq_tol: DEFAULT_EQ_TOL,
            neighbors: None,
        }
    }

    pub fn with_known_optimum(mut self, optimum: Option<f64>) -> Self {
        self.known_optimum = optimum;
        self
    }

    pub fn with_neighbors(mut self, lists: NeighborLists) -> Self {
        self.neighbors = Some(Arc::new(lists));
        self
    }

    pub fn with_eq_tol(mut self, tol: f64) -> Self {
        self.eq_tol = tol;
        self
    }

    pub fn respond(&self, x: &DesignVector) -> std::result::Result<Response, String> {
        (self.model)(x)
    }

    /// Sum of positive inequality parts and equality excess over `eq_tol`.
    pub fn violation(&self, response: &Response) -> f64 {
        let ineq: f64 = response.inequality.iter().map(|g| g.max(0.0)).sum();
        let eq: f64 = response.equality.iter().map(|h| (h.abs() - self.eq_tol).max(0.0)).sum();
        let total = ineq + eq;
        if total.is_nan() {
            f64::INFINITY
        } else {
            total
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub objective: f64,
    pub violation: f64,
    pub feasible: bool,
    pub eval_id: u64,
}

/// Monotone count of objective evaluations.
#[derive(Debug, Default)]
pub struct EvalCounter(AtomicU64);

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::SeqCst)
    }

    fn next(&self) -> u64 {
        self.0.fetch_add(1, Ordering::SeqCst) + 1
    }
}

/// Evaluates one design and bumps the counter by exactly one, feasible or not.
/// A NaN objective is recorded as `+inf` so it never wins a comparison.
pub fn evaluate(problem: &Problem, x: &DesignVector, counter: &EvalCounter) -> Result<Evaluation> {
    let eval_id = counter.next();
    let response = problem
        .respond(x)
        .map_err(|message| Error::Evaluation { vector: x.flatten(), message })?;
    let violation = problem.violation(&response);
    let objective = if response.objective.is_nan() { f64::INFINITY } else { response.objective };
    Ok(Evaluation { objective, violation, feasible: violation == 0.0, eval_id })
}

/// Feasibility-first ordering: feasible beats infeasible, then lower
/// objective among feasible, lower violation among infeasible. Exact ties
/// return `false` so the incumbent is kept.
pub fn better(a: &Evaluation, b: &Evaluation) -> bool {
    match (a.feasible, b.feasible) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => a.objective < b.objective,
        (false, false) => a.violation < b.violation,
    }
}
