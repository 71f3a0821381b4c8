//! Problem-definition files.
//!
//! A definition names a built-in objective and declares the design space it
//! is evaluated on:
//!
//! ```toml
//! name = "my-rastrigin"
//! objective = "rastrigin"
//! known_optimum = 0.0
//!
//! [[variables]]
//! kind = "continuous"
//! lower = -5.12
//! upper = 5.12
//!
//! [[variables]]
//! kind = "integer"
//! lower = -5
//! upper = 5
//! ```
//!
//! Scalar objectives (`ackley`, `de-jong`, `easom`, `griewank`, `rastrigin`,
//! `rosenbrock`) see the decoded values of every scalar variable. The `tsp`
//! objective reads a TSPLIB file given by `tsplib` (relative paths resolve
//! against the definition file) and builds its own permutation variable.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::benchmarks::{analytic, parse_tsplib};
use crate::error::{Error, Result};
use crate::problem::{Problem, Response};
use crate::space::{DesignSpace, VariableSpec};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDefinition {
    pub name: String,
    pub objective: String,
    #[serde(default)]
    pub variables: Vec<VariableSpec>,
    pub known_optimum: Option<f64>,
    pub tsplib: Option<PathBuf>,
}

fn scalar_objective(name: &str) -> Option<fn(&[f64]) -> f64> {
    Some(match name {
        "ackley" => analytic::ackley,
        "de-jong" => analytic::de_jong,
        "easom" => analytic::easom,
        "griewank" => analytic::griewank,
        "rastrigin" => analytic::rastrigin,
        "rosenbrock" => analytic::rosenbrock,
        _ => return None,
    })
}

impl ProblemDefinition {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config { path: path.to_path_buf(), message: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Problem> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config { path: path.to_path_buf(), message: e.to_string() })?;
        Self::from_toml(&text, path)?.into_problem(path.parent())
    }

    /// Builds the problem; `base` resolves a relative `tsplib` path.
    pub fn into_problem(self, base: Option<&Path>) -> Result<Problem> {
        if self.objective == "tsp" {
            let file = self
                .tsplib
                .ok_or_else(|| Error::InvalidSpace("objective `tsp` needs a `tsplib` path".into()))?;
            let file = match base {
                Some(dir) if file.is_relative() => dir.join(file),
                _ => file,
            };
            let mut instance = parse_tsplib(&std::fs::read_to_string(&file)?)?;
            instance.name = self.name;
            instance.best_known = self.known_optimum.map(|v| v.round() as i64);
            return Ok(instance.problem());
        }
        let f = scalar_objective(&self.objective).ok_or_else(|| Error::UnknownProblem(self.objective.clone()))?;
        let space = DesignSpace::new(self.variables)?;
        if space.scalar_len() == 0 {
            return Err(Error::InvalidSpace(format!("objective `{}` needs scalar variables", self.objective)));
        }
        if self.objective == "easom" && space.scalar_len() != 2 {
            return Err(Error::InvalidSpace("easom is two-dimensional".into()));
        }
        Ok(Problem::new(self.name, space, move |x| Ok(Response::unconstrained(f(&x.values))))
            .with_known_optimum(self.known_optimum))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_definition() {
        let text = r#"
name = "demo"
objective = "de-jong"
known_optimum = 0.0

[[variables]]
kind = "continuous"
lower = -1.0
upper = 1.0

[[variables]]
kind = "discrete-set"
values = [-0.5, 0.0, 0.5]
"#;
        let def = ProblemDefinition::from_toml(text, Path::new("demo.toml")).unwrap();
        let p = def.into_problem(None).unwrap();
        assert_eq!(p.space.scalar_len(), 2);
        assert_eq!(p.known_optimum, Some(0.0));
    }

    #[test]
    fn unknown_key_names_file() {
        let err = ProblemDefinition::from_toml("name = 'x'\nobjective = 'ackley'\nbogus = 1\n", Path::new("p.toml"))
            .unwrap_err();
        assert!(matches!(err, Error::Config { path, .. } if path == Path::new("p.toml")));
    }
}
