use std::fs;
use std::path::Path;
use std::process::Command;

use gnowee::harness::{CONVERGENCE_FILE, SUMMARY_FILE, TRIALS_FILE};
use gnowee_cli::{main_with, resolve, CampaignConfig, ProblemSource, RunArgs, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gnowee").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn list_is_sorted_and_flags_stub() {
    let (code, out, _) = run(&["list"]);
    assert_eq!(code, EXIT_OK);
    let names: Vec<&str> = out.lines().skip(1).map(|l| l.split_whitespace().next().unwrap()).collect();
    for want in ["spring", "pressure-vessel", "ackley-3d", "eil51"] {
        assert!(names.contains(&want), "{want} missing from\n{out}");
    }
    assert!(out.contains("mi-chemical-process (not implemented)"));
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(run(&["list"]).1, out);
}

#[test]
fn run_writes_three_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let (code, stdout, err) = run(&[
        "run", "--problem", "spring", "--trials", "2", "--max-evals", "500", "--seed", "3", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(stdout.contains("spring"));
    for f in [SUMMARY_FILE, TRIALS_FILE, CONVERGENCE_FILE] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let trials = read(&out, TRIALS_FILE);
    let rows: Vec<&str> = trials.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    // 500 evaluations cannot reach the spring optimum
    assert!(rows.iter().all(|r| r.ends_with("EvalBudget")), "{trials}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let go = |name: &str, jobs: &str| {
        let out = dir.path().join(name);
        let args = [
            "run", "--problem", "ackley-3d", "--trials", "4", "--seed", "11", "--jobs", jobs, "--max-evals", "3000",
            "--out", out.to_str().unwrap(),
        ];
        assert_eq!(run(&args).0, EXIT_OK);
        out
    };
    let (a, b) = (go("a", "1"), go("b", "3"));
    for f in [SUMMARY_FILE, TRIALS_FILE, CONVERGENCE_FILE] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn eil51_campaign_completes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run(&[
        "run", "--problem", "eil51", "--trials", "10", "--seed", "1", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(read(dir.path(), TRIALS_FILE).lines().count(), 11);
}

#[test]
fn fom_from_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("summary.csv");
    fs::write(&path, "name,f_avg,n_avg,n_sigma,f_opt\nspring,0.012763,4738,1836,0.012665\nexact,2,100,5,2\n").unwrap();
    let (code, out, _) = run(&["fom", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let values: Vec<f64> = out.lines().map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    assert!((values[0] - 79.3).abs() < 0.1, "{out}");
    assert_eq!(values[1], 0.0);

    // f_opt falls back to the registry
    fs::write(&path, "name,f_avg,n_avg,n_sigma\nackley-3d,0.5,100,0\n").unwrap();
    let (_, out, _) = run(&["fom", path.to_str().unwrap()]);
    assert_eq!(out.trim(), "ackley-3d\t50");

    fs::write(&path, "name,f_avg,n_avg\nspring,1,2\n").unwrap();
    let (code, _, err) = run(&["fom", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_RUNTIME);
    assert!(err.contains("n_sigma"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["run", "--problem", "nope", "--trials", "1"]).0, EXIT_USAGE);
    assert_eq!(run(&["run", "--problem", "spring", "--population", "1"]).0, EXIT_USAGE);
    assert_eq!(run(&["run", "--problem", "mi-chemical-process"]).0, EXIT_USAGE);
    assert_eq!(run(&["fom", "/definitely/not/here.csv"]).0, EXIT_RUNTIME);
    assert_eq!(run(&["--help"]).0, EXIT_OK);

    let bin = env!("CARGO_BIN_EXE_gnowee");
    assert_eq!(Command::new(bin).arg("list").output().unwrap().status.code(), Some(EXIT_OK));
    assert_eq!(Command::new(bin).args(["run", "--problem", "x"]).output().unwrap().status.code(), Some(EXIT_USAGE));
}

#[test]
fn flags_override_file_override_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "problem_file = \"p.toml\"\ntrials = 7\nseed = 5\n\n[settings]\npopulation = 12\nseed = 99\n\n[settings.criteria]\nmax_evals = 1234\n",
    )
    .unwrap();
    let config = CampaignConfig::load(&cfg).unwrap();

    let c = resolve(config.clone(), &RunArgs::default()).unwrap();
    assert_eq!(c.problem, ProblemSource::File(dir.path().join("p.toml")));
    assert_eq!((c.trials, c.settings.seed, c.settings.population), (7, 5, 12));
    assert_eq!(c.settings.criteria.max_evals, 1234);
    assert_eq!(c.out, Path::new("results"));

    let args = RunArgs {
        problem: Some("spring".into()),
        trials: Some(2),
        seed: Some(8),
        max_evals: Some(99),
        ..RunArgs::default()
    };
    let c = resolve(config, &args).unwrap();
    assert_eq!(c.problem, ProblemSource::Registered("spring".into()));
    assert_eq!((c.trials, c.settings.seed, c.settings.population), (2, 8, 12));
    assert_eq!(c.settings.criteria.max_evals, 99);

    let c = resolve(CampaignConfig::default(), &RunArgs { problem: Some("spring".into()), ..RunArgs::default() })
        .unwrap();
    assert_eq!(c.trials, 100);
    assert_eq!(c.settings.population, gnowee::engine::GnoweeSettings::default().population);
}

#[test]
fn problem_file_run() {
    let dir = tempfile::tempdir().unwrap();
    let def = dir.path().join("p.toml");
    fs::write(
        &def,
        "name = \"tiny\"\nobjective = \"de-jong\"\nknown_optimum = 0.0\n\n[[variables]]\nkind = \"continuous\"\nlower = -1.0\nupper = 1.0\n\n[[variables]]\nkind = \"integer\"\nlower = -2\nupper = 2\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let (code, _, err) = run(&[
        "run", "--problem-file", def.to_str().unwrap(), "--trials", "2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(read(&out, SUMMARY_FILE).lines().nth(1).unwrap().starts_with("tiny,2,"));

    fs::write(&def, "name = \"x\"\nobjective = \"ackley\"\nbogus = 1\n").unwrap();
    let (code, _, err) = run(&["run", "--problem-file", def.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("p.toml"), "{err}");
}
