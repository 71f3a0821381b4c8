//! Multi-trial campaigns, summary statistics and CSV reports.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::engine::{reached, run_with_stream, GnoweeSettings, RunResult};
use crate::error::{Error, Result};
use crate::problem::Problem;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const TRIALS_FILE: &str = "trials.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";

pub const SUMMARY_COLUMNS: [&str; 12] = [
    "name",
    "n_trials",
    "f_avg",
    "f_sigma",
    "n_avg",
    "n_sigma",
    "f_best",
    "n_best",
    "premature_fraction",
    "fom_avg",
    "fom_best",
    "f_opt",
];
pub const TRIAL_COLUMNS: [&str; 5] = ["trial", "seed", "best_fitness", "evals", "termination"];
pub const CONVERGENCE_COLUMNS: [&str; 3] = ["trial", "eval_count", "best_fitness"];

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// Base seed; the trial index selects the RNG stream.
    pub seed: u64,
    pub result: RunResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub name: String,
    pub n_trials: usize,
    pub f_avg: f64,
    pub f_sigma: f64,
    pub n_avg: f64,
    pub n_sigma: f64,
    pub f_best: f64,
    pub n_best: u64,
    pub premature_fraction: f64,
    pub fom_avg: Option<f64>,
    pub fom_best: Option<f64>,
    pub f_opt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub stats: TrialStats,
    pub records: Vec<TrialRecord>,
}

/// `((f_avg - f_opt) / denom) * (n_avg + 3 n_sigma)` with `denom = |f_opt|`,
/// or 1 when the optimum is zero.
pub fn compute_fom(f_avg: f64, f_opt: f64, n_avg: f64, n_sigma: f64) -> f64 {
    let denom = if f_opt.abs() > 1e-12 { f_opt.abs() } else { 1.0 };
    (f_avg - f_opt) / denom * (n_avg + 3.0 * n_sigma)
}

fn mean_sigma(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Aggregates trial records. `tol` is the relative convergence tolerance used
/// to flag premature trials (the same rule as the engine's fitness check).
pub fn aggregate(name: &str, records: &[TrialRecord], f_opt: Option<f64>, tol: f64) -> TrialStats {
    assert!(!records.is_empty(), "at least one trial is required");
    let (f_avg, f_sigma) = mean_sigma(records.iter().map(|r| r.result.best_fitness));
    let (n_avg, n_sigma) = mean_sigma(records.iter().map(|r| r.result.total_evals as f64));
    let best = records
        .iter()
        .reduce(|a, b| {
            if crate::problem::better(&b.result.best_evaluation, &a.result.best_evaluation) {
                b
            } else {
                a
            }
        })
        .expect("non-empty");
    let (f_best, n_best) = (best.result.best_fitness, best.result.total_evals);
    let premature_fraction = match f_opt {
        Some(opt) => {
            let bad = records.iter().filter(|r| !reached(&r.result.best_evaluation, opt, tol)).count();
            bad as f64 / records.len() as f64
        }
        None => 0.0,
    };
    TrialStats {
        name: name.to_string(),
        n_trials: records.len(),
        f_avg,
        f_sigma,
        n_avg,
        n_sigma,
        f_best,
        n_best,
        premature_fraction,
        fom_avg: f_opt.map(|opt| compute_fom(f_avg, opt, n_avg, n_sigma)),
        fom_best: f_opt.map(|opt| compute_fom(f_best, opt, n_best as f64, 0.0)),
        f_opt,
    }
}

/// Runs `n_trials` independent trials, trial `k` on RNG stream `k` of the
/// base seed. `jobs` bounds the worker threads (`None`: one per processor).
pub fn run_trials(
    problem: &Problem,
    settings: &GnoweeSettings,
    n_trials: usize,
    jobs: Option<usize>,
) -> Result<Campaign> {
    if n_trials == 0 {
        return Err(Error::InvalidSettings("n_trials must be at least 1".into()));
    }
    settings.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidSettings(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<TrialRecord>> = pool.install(|| {
        (0..n_trials)
            .into_par_iter()
            .map(|trial| {
                run_with_stream(problem, settings, trial as u64)
                    .map(|result| TrialRecord { trial, seed: settings.seed, result })
                    .map_err(|e| Error::Trial { trial, source: Box::new(e) })
            })
            .collect()
    });
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    let f_opt = settings.criteria.known_optimum.or(problem.known_optimum);
    let stats = aggregate(&problem.name, &records, f_opt, settings.criteria.fitness_rel_tol);
    Ok(Campaign { stats, records })
}

fn opt_field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn summary_row(s: &TrialStats) -> Vec<String> {
    vec![
        s.name.clone(),
        s.n_trials.to_string(),
        s.f_avg.to_string(),
        s.f_sigma.to_string(),
        s.n_avg.to_string(),
        s.n_sigma.to_string(),
        s.f_best.to_string(),
        s.n_best.to_string(),
        s.premature_fraction.to_string(),
        opt_field(s.fom_avg),
        opt_field(s.fom_best),
        opt_field(s.f_opt),
    ]
}

fn write_csv<P: AsRef<Path>>(path: P, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `summary.csv`, `trials.csv` and `convergence.csv` into `dir`,
/// creating it if needed. Rows follow the given order.
pub fn write_report(stats: &[TrialStats], records: &[TrialRecord], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_csv(dir.join(SUMMARY_FILE), &SUMMARY_COLUMNS, stats.iter().map(summary_row))?;
    write_csv(
        dir.join(TRIALS_FILE),
        &TRIAL_COLUMNS,
        records.iter().map(|r| {
            vec![
                r.trial.to_string(),
                r.seed.to_string(),
                r.result.best_fitness.to_string(),
                r.result.total_evals.to_string(),
                r.result.termination.to_string(),
            ]
        }),
    )?;
    write_csv(
        dir.join(CONVERGENCE_FILE),
        &CONVERGENCE_COLUMNS,
        records.iter().flat_map(|r| {
            r.result
                .history
                .iter()
                .map(move |h| vec![r.trial.to_string(), h.evals.to_string(), h.best_fitness.to_string()])
        }),
    )?;
    Ok(())
}

/// One summary row read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub name: String,
    pub f_avg: f64,
    pub n_avg: f64,
    pub n_sigma: f64,
    pub fom_avg: Option<f64>,
    pub f_opt: Option<f64>,
}

/// Reads a summary CSV, requiring the columns the FOM depends on.
pub fn read_summary(text: &str) -> Result<Vec<SummaryRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column `{name}`")))
    };
    let (name_i, f_i, n_i, s_i) = (col("name")?, col("f_avg")?, col("n_avg")?, col("n_sigma")?);
    let fom_i = headers.iter().position(|h| h == "fom_avg");
    let opt_i = headers.iter().position(|h| h == "f_opt");
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let number = |i: usize, column: &str| -> Result<f64> {
            record.get(i).unwrap_or("").trim().parse().map_err(|_| {
                Error::Schema(format!("row {}: column `{column}` is not a number", line + 1))
            })
        };
        let optional = |i: Option<usize>| -> Option<f64> {
            i.and_then(|i| record.get(i)).and_then(|v| v.trim().parse().ok())
        };
        rows.push(SummaryRow {
            name: record.get(name_i).unwrap_or("").to_string(),
            f_avg: number(f_i, "f_avg")?,
            n_avg: number(n_i, "n_avg")?,
            n_sigma: number(s_i, "n_sigma")?,
            fom_avg: optional(fom_i),
            f_opt: optional(opt_i),
        });
    }
    Ok(rows)
}

/// Human-readable one-line summary.
pub fn print_summary<W: Write>(out: &mut W, s: &TrialStats) -> std::io::Result<()> {
    let fom = s.fom_avg.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
    writeln!(
        out,
        "{}: trials {} f_avg {:.6e} (sigma {:.3e}) n_avg {:.1} (sigma {:.1}) f_best {:.6e} premature {:.2} fom {}",
        s.name, s.n_trials, s.f_avg, s.f_sigma, s.n_avg, s.n_sigma, s.f_best, s.premature_fraction, fom
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fom_examples() {
        let fom = compute_fom(0.012763, 0.012665, 4738.0, 1836.0);
        assert!((fom - 79.27).abs() < 0.05, "{fom}");
        assert_eq!(compute_fom(1.0, 1.0, 100.0, 5.0), 0.0);
        assert_eq!(compute_fom(0.5, 0.0, 100.0, 0.0), 50.0);
    }

    #[test]
    fn population_sigma() {
        let (m, s) = mean_sigma([1.0, 3.0].into_iter());
        assert_eq!((m, s), (2.0, 1.0));
    }
}
