//! Symmetric TSP instances in TSPLIB `EUC_2D` form.

use crate::error::{Error, Result};
use crate::operators::NeighborLists;
use crate::problem::{Problem, Response};
use crate::space::{is_permutation, DesignSpace, VariableSpec};

/// Candidate neighbours kept per city for distance-biased moves.
pub const NEIGHBOR_COUNT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    pub name: String,
    pub coords: Vec<(f64, f64)>,
    pub best_known: Option<i64>,
}

/// TSPLIB `nint` of the Euclidean distance.
pub fn euc_2d(a: (f64, f64), b: (f64, f64)) -> i64 {
    ((a.0 - b.0).hypot(a.1 - b.1) + 0.5).floor() as i64
}

pub fn parse_tsplib(text: &str) -> Result<TspInstance> {
    let mut name = String::new();
    let mut dimension: Option<usize> = None;
    let mut coords = Vec::new();
    let mut in_coords = false;
    let mut saw_section = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_coords {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() == 3 {
                let parse = |s: &str| {
                    s.parse::<f64>().map_err(|_| Error::TspParse {
                        line: line_no,
                        message: format!("bad number `{s}`"),
                    })
                };
                let (x, y) = (parse(fields[1])?, parse(fields[2])?);
                if !x.is_finite() || !y.is_finite() {
                    return Err(Error::TspParse { line: line_no, message: "non-finite coordinate".into() });
                }
                coords.push((x, y));
                continue;
            }
            if fields.first().is_some_and(|f| f.parse::<f64>().is_ok()) {
                return Err(Error::TspParse {
                    line: line_no,
                    message: format!("expected `id x y`, got `{line}`"),
                });
            }
            in_coords = false;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            in_coords = true;
            saw_section = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else { continue };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "NAME" => name = value.to_string(),
            "DIMENSION" => {
                dimension = Some(value.parse().map_err(|_| Error::TspParse {
                    line: line_no,
                    message: format!("bad DIMENSION `{value}`"),
                })?)
            }
            "EDGE_WEIGHT_TYPE" if value != "EUC_2D" => {
                return Err(Error::UnsupportedEdgeWeight(value.to_string()))
            }
            _ => {}
        }
    }
    if !saw_section {
        return Err(Error::TspParse { line: text.lines().count(), message: "missing NODE_COORD_SECTION".into() });
    }
    if let Some(n) = dimension {
        if n != coords.len() {
            return Err(Error::TspParse {
                line: text.lines().count(),
                message: format!("DIMENSION is {n} but {} coordinates were read", coords.len()),
            });
        }
    }
    if coords.len() < 3 {
        return Err(Error::TspParse { line: text.lines().count(), message: "need at least 3 nodes".into() });
    }
    Ok(TspInstance { name, coords, best_known: None })
}

impl TspInstance {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn distance_matrix(&self) -> Vec<Vec<i64>> {
        self.coords.iter().map(|&a| self.coords.iter().map(|&b| euc_2d(a, b)).collect()).collect()
    }

    pub fn tour_length(&self, perm: &[usize]) -> Result<i64> {
        if !is_permutation(perm, self.len()) {
            return Err(Error::InvalidPermutation(format!(
                "{perm:?} is not a permutation of 0..{}",
                self.len()
            )));
        }
        Ok(tour_length_unchecked(&self.coords, perm))
    }

    /// A looping permutation problem over the cities, with near-neighbour
    /// lists attached for distance-biased moves.
    pub fn problem(&self) -> Problem {
        let n = self.len();
        let space = DesignSpace::new(vec![VariableSpec::Combinatorial { length: n, looping: true }])
            .expect("a tour of at least 3 cities is a valid space");
        let dist = self.distance_matrix();
        let lists = NeighborLists::from_distances(&dist, NEIGHBOR_COUNT.min(n - 1));
        let name = self.name.clone();
        Problem::new(name, space, move |x| {
            let len: i64 = (0..x.permutation.len())
                .map(|i| dist[x.permutation[i]][x.permutation[(i + 1) % n]])
                .sum();
            Ok(Response::unconstrained(len as f64))
        })
        .with_known_optimum(self.best_known.map(|v| v as f64))
        .with_neighbors(lists)
    }
}

fn tour_length_unchecked(coords: &[(f64, f64)], perm: &[usize]) -> i64 {
    let n = perm.len();
    (0..n).map(|i| euc_2d(coords[perm[i]], coords[perm[(i + 1) % n]])).sum()
}

pub fn tour_length(instance: &TspInstance, perm: &[usize]) -> Result<i64> {
    instance.tour_length(perm)
}
