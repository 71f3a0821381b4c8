//! Randomised invariants shared by the `invariants` and `acceptance` targets.

use gnowee::levy::{LevyParams, LevySampler};
use gnowee::operators::*;
use gnowee::problem::{EvalCounter, Problem, Response};
use gnowee::space::{is_permutation, DesignSpace, Slot, VariableSpec};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 1000;

fn perm_strategy() -> impl Strategy<Value = Vec<usize>> {
    (4usize..40).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
}

fn variable() -> impl Strategy<Value = VariableSpec> {
    prop_oneof![
        (-50.0f64..50.0, 0.01f64..100.0).prop_map(|(lower, w)| VariableSpec::Continuous { lower, upper: lower + w }),
        (-20i64..20, 1i64..30).prop_map(|(lower, w)| VariableSpec::Integer { lower, upper: lower + w }),
        Just(VariableSpec::Binary),
        prop::collection::btree_set(-1000i32..1000, 1..12).prop_map(|set| VariableSpec::DiscreteSet {
            values: set.into_iter().map(|v| v as f64 / 8.0).collect()
        }),
    ]
}

fn space_strategy() -> impl Strategy<Value = DesignSpace> {
    (prop::collection::vec(variable(), 1..6), prop::option::of((4usize..12, any::<bool>()))).prop_map(|(mut vars, perm)| {
        if let Some((length, looping)) = perm {
            vars.push(VariableSpec::Combinatorial { length, looping });
        }
        DesignSpace::new(vars).unwrap()
    })
}

/// Objective that depends on every part of the design, with one constraint.
fn problem(space: DesignSpace) -> Problem {
    Problem::new("mix", space, |x| {
        let s: f64 = x.values.iter().map(|v| (v - 0.3).abs()).sum();
        let t: usize = x.permutation.iter().enumerate().map(|(i, &v)| i.abs_diff(v)).sum();
        Ok(Response::constrained(s + t as f64, vec![x.values[0] - 10.0]))
    })
}

fn population(problem: &Problem, counter: &EvalCounter, p: usize, rng: &mut ChaCha8Rng) -> Population {
    let eval = Evaluator::new(problem, counter);
    Population::new(problem.space.uniform_genomes(p, rng).into_iter().map(|g| eval.member(g).unwrap()).collect())
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

pub fn permutation_moves_preserve_elements(cases: u32) -> Result<(), String> {
    let strategy = (perm_strategy(), any::<usize>(), any::<usize>(), any::<usize>(), any::<bool>());
    runner(cases)
        .run(&strategy, |(perm, a, b, c, looping)| {
            let n = perm.len();
            let mut cuts = [a % (n - 1), b % (n - 1), c % (n - 1)];
            cuts.sort_unstable();
            if cuts[0] < cuts[1] && cuts[1] < cuts[2] {
                let (c1, c2) = three_opt_children(&perm, cuts[0], cuts[1], cuts[2]);
                prop_assert!(is_permutation(&c1, n) && is_permutation(&c2, n));
            }
            let (i, j) = (a % n, b % n);
            prop_assert!(is_permutation(&two_opt_child(&perm, i, j, looping), n));
            prop_assert!(is_permutation(&join_follower(&perm, i, j), n));
            let mut inv = perm.clone();
            invert_after(&mut inv, i, 1 + c % (n - 1), looping);
            prop_assert!(is_permutation(&inv, n));
            let mut rc = perm.clone();
            reverse_cyclic(&mut rc, i, c % (n + 1));
            prop_assert!(is_permutation(&rc, n));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn candidates_stay_in_the_space(cases: u32) -> Result<(), String> {
    let strategy = (space_strategy(), 3usize..12, any::<u64>());
    runner(cases)
        .run(&strategy, |(space, p, seed)| {
            let problem = problem(space);
            let counter = EvalCounter::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pop = population(&problem, &counter, p, &mut rng);
            let sampler = LevySampler::new(LevyParams::default()).unwrap();
            let fr = OperatorFractions::default();
            let mut all = levy_flights(&pop, &problem.space, &fr, &sampler, LevyParts::ALL, None, &mut rng).unwrap();
            all.extend(crossover(&pop, &problem.space, &fr, &mut rng));
            all.extend(scatter_search(&pop, &problem.space, &fr, &mut rng));
            all.extend(mutation(&pop, &problem.space, &fr, &mut rng));
            for cand in all {
                let v = problem.space.decode(&cand.genome);
                prop_assert_eq!(problem.space.validate(&v).unwrap(), None);
                prop_assert!(cand.parent < p);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn size_constant_and_best_monotone(cases: u32) -> Result<(), String> {
    let strategy = (space_strategy(), 3usize..10, any::<u64>());
    runner(cases)
        .run(&strategy, |(space, p, seed)| {
            let problem = problem(space);
            let counter = EvalCounter::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pop = population(&problem, &counter, p, &mut rng);
            let eval = Evaluator::new(&problem, &counter);
            let sampler = LevySampler::new(LevyParams::default()).unwrap();
            let fr = OperatorFractions::default();
            let mut best = pop.best().eval;
            let space = problem.space.clone();
            for step in 0..7 {
                match step {
                    0 if space.permutation_len() >= 4 => three_opt(&mut pop, &eval, &mut rng).unwrap(),
                    1 => {
                        let kids = levy_flights(&pop, &space, &fr, &sampler, LevyParts::ALL, None, &mut rng).unwrap();
                        let kids = eval.batch(&pop, kids).unwrap();
                        population_update(&mut pop, kids, true, 1.0, &mut rng);
                    }
                    2 => { let k = crossover(&pop, &space, &fr, &mut rng); let k = eval.batch(&pop, k).unwrap(); population_update(&mut pop, k, false, 0.0, &mut rng); }
                    3 => { let k = scatter_search(&pop, &space, &fr, &mut rng); let k = eval.batch(&pop, k).unwrap(); population_update(&mut pop, k, false, 0.0, &mut rng); }
                    4 => { let k = mutation(&pop, &space, &fr, &mut rng); let k = eval.batch(&pop, k).unwrap(); population_update(&mut pop, k, false, 0.0, &mut rng); }
                    5 => inversion_crossover(&mut pop, &space, &fr, &eval, &mut rng).unwrap(),
                    6 if space.has_permutation() => two_opt(&mut pop, &space, &fr, &sampler, None, &eval, &mut rng).unwrap(),
                    _ => {}
                }
                prop_assert_eq!(pop.len(), p);
                prop_assert!(!gnowee::problem::better(&best, &pop.best().eval));
                best = pop.best().eval;
                for m in pop.members() {
                    prop_assert!(!gnowee::problem::better(&m.eval, &best));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn lhc_fills_every_stratum(cases: u32) -> Result<(), String> {
    let strategy = (space_strategy(), 2usize..40, any::<u64>());
    runner(cases)
        .run(&strategy, |(space, count, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let genomes = space.lhc_genomes(count, &mut rng);
            prop_assert_eq!(genomes.len(), count);
            for (d, slot) in space.slots().iter().enumerate() {
                match *slot {
                    Slot::Continuous { lower, upper } => {
                        let mut hit = vec![0usize; count];
                        for g in &genomes {
                            let k = ((g.coords[d] - lower) / (upper - lower) * count as f64).floor() as usize;
                            hit[k.min(count - 1)] += 1;
                        }
                        prop_assert!(hit.iter().all(|&h| h == 1), "{:?}", hit);
                    }
                    Slot::Discrete { cardinality } => {
                        // Every index is used either floor(count / card) or ceil(count / card)
                        // times when strata outnumber indices, and at most once otherwise.
                        let mut uses = vec![0usize; cardinality];
                        for g in &genomes {
                            uses[g.coords[d] as usize] += 1;
                        }
                        let (lo, hi) = (count / cardinality, count.div_ceil(cardinality));
                        if cardinality >= count {
                            prop_assert!(uses.iter().all(|&u| u <= 1));
                        } else {
                            prop_assert!(uses.iter().all(|&u| u >= lo && u <= hi), "{:?}", uses);
                        }
                    }
                }
            }
            for g in &genomes {
                prop_assert_eq!(space.validate(&space.decode(g)).unwrap(), None);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Every property with its name.
#[allow(dead_code)] // only the acceptance target walks the list
pub const ALL: [(&str, fn(u32) -> Result<(), String>); 4] = [
    ("permutation_moves_preserve_elements", permutation_moves_preserve_elements),
    ("candidates_stay_in_the_space", candidates_stay_in_the_space),
    ("size_constant_and_best_monotone", size_constant_and_best_monotone),
    ("lhc_fills_every_stratum", lhc_fills_every_stratum),
];
