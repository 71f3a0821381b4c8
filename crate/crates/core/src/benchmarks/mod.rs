//! Registered benchmark problems.
//!
//! Formulas are written out in `BENCHMARKS.md`. Best-known values come from
//! `data/optima.txt`; TSPLIB files from `data/tsplib/`. Both are compiled
//! in, and `GNOWEE_DATA_DIR` points at a directory with the same layout to
//! override them or to supply instances that are not bundled.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::problem::{Problem, Response};
use crate::space::{DesignSpace, VariableSpec};

pub mod analytic;
pub mod engineering;
pub mod tsp;

pub use tsp::{euc_2d, parse_tsplib, tour_length, TspInstance};

pub const DATA_DIR_ENV: &str = "GNOWEE_DATA_DIR";

const BUNDLED_OPTIMA: &str = include_str!("../../data/optima.txt");
const BUNDLED_TSP: [(&str, &str); 2] = [
    ("eil51", include_str!("../../data/tsplib/eil51.tsp")),
    ("st70", include_str!("../../data/tsplib/st70.tsp")),
];

const TSP_NAMES: [&str; 5] = ["bier127", "ch150", "eil51", "pr107", "st70"];

#[derive(Clone, Copy)]
enum Kind {
    Analytic { f: fn(&[f64]) -> f64, dim: usize, bound: (f64, f64), optimum: i8 },
    Engineering,
    Tsp,
    Stub,
}

struct Entry {
    name: &'static str,
    kind: Kind,
}

const fn analytic(name: &'static str, f: fn(&[f64]) -> f64, dim: usize, bound: (f64, f64), optimum: i8) -> Entry {
    Entry { name, kind: Kind::Analytic { f, dim, bound, optimum } }
}

fn entries() -> Vec<Entry> {
    use analytic::*;
    let mut all = vec![
        self::analytic("ackley-3d", ackley, 3, (-32.768, 32.768), 0),
        self::analytic("de-jong-4d", de_jong, 4, (-5.12, 5.12), 0),
        self::analytic("easom-2d", easom, 2, (-100.0, 100.0), -1),
        self::analytic("griewank-6d", griewank, 6, (-600.0, 600.0), 0),
        self::analytic("rastrigin-5d", rastrigin, 5, (-5.12, 5.12), 0),
        self::analytic("rosenbrock-5d", rosenbrock, 5, (-5.0, 5.0), 0),
        Entry { name: "mi-chemical-process", kind: Kind::Stub },
    ];
    for name in ["mi-pressure-vessel", "mi-spring", "pressure-vessel", "speed-reducer", "spring", "welded-beam"] {
        all.push(Entry { name, kind: Kind::Engineering });
    }
    for name in TSP_NAMES {
        all.push(Entry { name, kind: Kind::Tsp });
    }
    all.sort_by_key(|e| e.name);
    all
}

/// Every registered name, sorted.
pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

/// One row of `gnowee list`.
#[derive(Debug, Clone, PartialEq)]
pub struct Listing {
    pub name: &'static str,
    pub kinds: String,
    pub dimension: Option<usize>,
    pub known_optimum: Option<f64>,
    pub implemented: bool,
    /// Set when the problem needs data that is neither bundled nor found.
    pub unavailable: Option<String>,
}

pub fn listing() -> Vec<Listing> {
    entries()
        .into_iter()
        .map(|e| match (e.kind, load(e.name)) {
            (Kind::Stub, _) => Listing {
                name: e.name,
                kinds: "-".into(),
                dimension: None,
                known_optimum: None,
                implemented: false,
                unavailable: None,
            },
            (_, Ok(p)) => Listing {
                name: e.name,
                kinds: describe_kinds(&p.space),
                dimension: Some(p.space.dimension()),
                known_optimum: p.known_optimum,
                implemented: true,
                unavailable: None,
            },
            (_, Err(err)) => Listing {
                name: e.name,
                kinds: "combinatorial".into(),
                dimension: None,
                known_optimum: known_optimum(e.name).ok().flatten(),
                implemented: true,
                unavailable: Some(err.to_string()),
            },
        })
        .collect()
}

fn describe_kinds(space: &DesignSpace) -> String {
    let mut kinds: Vec<&str> = space.variables().iter().map(|v| v.kind_name()).collect();
    kinds.dedup();
    kinds.join("+")
}

fn data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)
}

fn read_data(relative: &str, bundled: Option<&'static str>) -> Result<String> {
    if let Some(dir) = data_dir() {
        let path = dir.join(relative);
        if path.exists() {
            return Ok(std::fs::read_to_string(path)?);
        }
    }
    bundled.map(str::to_string).ok_or_else(|| Error::MissingData {
        name: relative.to_string(),
        hint: format!("set {DATA_DIR_ENV} to a directory containing {relative}"),
    })
}

/// Parses the `name<TAB>value<TAB>source` table; `#` starts a comment line.
pub fn parse_optima(text: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(name), Some(value)) = (fields.next(), fields.next()) else {
            return Err(Error::Schema(format!("optima line {}: expected name<TAB>value<TAB>source", i + 1)));
        };
        let value = value
            .trim()
            .parse()
            .map_err(|_| Error::Schema(format!("optima line {}: bad value `{value}`", i + 1)))?;
        out.push((name.trim().to_string(), value));
    }
    Ok(out)
}

/// Known optimum of a registered problem: analytic minima are built in,
/// the rest come from the optima table.
pub fn known_optimum(name: &str) -> Result<Option<f64>> {
    if let Some(Entry { kind: Kind::Analytic { optimum, .. }, .. }) = entries().into_iter().find(|e| e.name == name) {
        return Ok(Some(optimum as f64));
    }
    tabulated_optimum(name)
}

fn tabulated_optimum(name: &str) -> Result<Option<f64>> {
    let text = read_data("optima.txt", Some(BUNDLED_OPTIMA))?;
    Ok(parse_optima(&text)?.into_iter().find(|(n, _)| n == name).map(|(_, v)| v))
}

pub fn load_tsp(name: &str) -> Result<TspInstance> {
    let bundled = BUNDLED_TSP.iter().find(|(n, _)| *n == name).map(|(_, t)| *t);
    let text = read_data(&format!("tsplib/{name}.tsp"), bundled)?;
    let mut instance = parse_tsplib(&text)?;
    if instance.name.is_empty() {
        instance.name = name.to_string();
    }
    instance.best_known = tabulated_optimum(name)?.map(|v| v as i64);
    Ok(instance)
}

fn continuous(lower: &[f64], upper: &[f64]) -> Vec<VariableSpec> {
    lower.iter().zip(upper).map(|(&lower, &upper)| VariableSpec::Continuous { lower, upper }).collect()
}

fn engineering(name: &str) -> Result<Problem> {
    use engineering::*;
    let (vars, model): (Vec<VariableSpec>, fn(&[f64]) -> Response) = match name {
        "pressure-vessel" => (continuous(&PRESSURE_VESSEL_LOWER, &PRESSURE_VESSEL_UPPER), pressure_vessel),
        "mi-pressure-vessel" => {
            let mut vars = continuous(&PRESSURE_VESSEL_LOWER[..2], &PRESSURE_VESSEL_UPPER[..2]);
            vars.push(VariableSpec::DiscreteSet { values: thickness_values() });
            vars.push(VariableSpec::DiscreteSet { values: thickness_values() });
            (vars, pressure_vessel)
        }
        "spring" => (continuous(&SPRING_LOWER, &SPRING_UPPER), spring),
        "mi-spring" => (
            vec![
                VariableSpec::Integer { lower: 1, upper: 70 },
                VariableSpec::Continuous { lower: 0.6, upper: 3.0 },
                VariableSpec::DiscreteSet { values: MI_SPRING_WIRE.to_vec() },
            ],
            mi_spring,
        ),
        "welded-beam" => (continuous(&WELDED_BEAM_LOWER, &WELDED_BEAM_UPPER), welded_beam),
        "speed-reducer" => (continuous(&SPEED_REDUCER_LOWER, &SPEED_REDUCER_UPPER), speed_reducer),
        _ => return Err(Error::UnknownProblem(name.to_string())),
    };
    let space = DesignSpace::new(vars)?;
    Ok(Problem::new(name, space, move |x| Ok(model(&x.values))).with_known_optimum(tabulated_optimum(name)?))
}

/// Builds a registered problem by name.
pub fn load(name: &str) -> Result<Problem> {
    let entry = entries().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownProblem(name.to_string()))?;
    match entry.kind {
        Kind::Analytic { f, dim, bound, optimum } => {
            let space = DesignSpace::new(continuous(&vec![bound.0; dim], &vec![bound.1; dim]))?;
            Ok(Problem::new(name, space, move |x| Ok(Response::unconstrained(f(&x.values))))
                .with_known_optimum(Some(optimum as f64)))
        }
        Kind::Engineering => engineering(name),
        Kind::Tsp => Ok(load_tsp(name)?.problem()),
        Kind::Stub => Err(Error::NotImplemented(name.to_string())),
    }
}
