//! Objective and constraint values against an independent Python
//! transcription of the formulas in BENCHMARKS.md.

use gnowee::benchmarks::{self, analytic, engineering, parse_tsplib, TspInstance};
use gnowee::space::DesignVector;

fn assert_close(got: f64, want: f64, rel: f64) {
    assert!((got - want).abs() <= rel * want.abs().max(1.0), "{got} vs {want}");
}

fn assert_all_close(got: &[f64], want: &[f64]) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert_close(*g, *w, 1e-12);
    }
}

#[test]
fn pressure_vessel_fixed_point() {
    let r = engineering::pressure_vessel(&[42.5, 120.25, 1.125, 0.5625]);
    assert_close(r.objective, 6133.220_196_679_686_5, 1e-13);
    assert_all_close(&r.inequality, &[-0.30389999999999995, -0.15705000000000002, 292_086.068_837_470_5, -119.75]);
}

#[test]
fn spring_fixed_points() {
    let r = engineering::spring(&[0.06, 0.5, 9.0]);
    assert_close(r.objective, 0.019_799_999_999_999_998, 1e-13);
    assert_all_close(&r.inequality, &[-0.20924365195452488, -0.13340922398065436, -2.745333333333333, -0.6266666666666667]);
    let best = engineering::spring(&[0.051092, 0.342205, 12.210091]);
    assert!((best.objective - 0.012694).abs() < 1e-5);
}

#[test]
fn welded_beam_fixed_point() {
    let r = engineering::welded_beam(&[0.3, 4.0, 8.5, 0.35]);
    assert_close(r.objective, 2.9739861, 1e-13);
    let want = [
        -4912.55947276581,
        -10069.204152249134,
        -0.04999999999999999,
        -2.4142856000000004,
        -0.175,
        -0.23978709546102178,
        -22354.566278506103,
    ];
    for (g, w) in r.inequality.iter().zip(want) {
        assert!((g - w).abs() <= 1e-9 * w.abs().max(1.0), "{g} vs {w}");
    }
}

#[test]
fn speed_reducer_fixed_point() {
    let r = engineering::speed_reducer(&[3.1, 0.75, 20.0, 7.9, 8.0, 3.3, 5.25]);
    assert_close(r.objective, 3587.821_059_714_750_4, 1e-13);
    assert_all_close(
        &r.inequality,
        &[
            -0.22580645161290325,
            -0.4301075268817204,
            -0.46507663945012623,
            -0.9132840877343631,
            0.04466731819962377,
            0.02084779883523291,
            -0.625,
            0.20967741935483875,
            -0.6555555555555556,
            -0.13291139240506333,
            -0.04062499999999991,
        ],
    );
}

#[test]
fn mi_spring_best_known_point() {
    let r = engineering::mi_spring(&[9.0, 1.223041, 0.283]);
    assert_close(r.objective, 2.658_559_144_310_987_5, 1e-13);
    assert_close(r.inequality[0], -1008.812441175367, 1e-10);
    assert_close(r.inequality[5], -5.464285727378702, 1e-10);
}

#[test]
fn analytic_fixed_points() {
    assert_close(analytic::ackley(&[32.768; 3]), 21.570_311_151_282_485, 1e-13);
    assert_close(analytic::ackley(&[1.5, -2.25, 0.75]), 7.537_281_370_671_550_5, 1e-13);
    assert_close(analytic::griewank(&[100.0, -37.5, 12.25, 400.0, -599.0, 3.0]), 133.603_956_383_239_28, 1e-13);
    assert_close(analytic::rastrigin(&[0.5, -1.25, 2.0, 4.75, -5.0]), 93.375, 1e-13);
    assert_close(analytic::rosenbrock(&[0.5, -1.0, 2.0, 1.5, -0.25]), 1511.75, 1e-13);
    assert_close(analytic::easom(&[3.0, 3.5]), -0.799_143_916_780_536_1, 1e-13);
}

#[test]
fn registered_minimizers_hit_their_optima() {
    let pi = std::f64::consts::PI;
    for (name, x) in [
        ("ackley-3d", vec![0.0; 3]),
        ("de-jong-4d", vec![0.0; 4]),
        ("easom-2d", vec![pi, pi]),
        ("griewank-6d", vec![0.0; 6]),
        ("rastrigin-5d", vec![0.0; 5]),
        ("rosenbrock-5d", vec![1.0; 5]),
    ] {
        let p = benchmarks::load(name).unwrap();
        let r = p.respond(&DesignVector::new(x)).unwrap();
        assert!((r.objective - p.known_optimum.unwrap()).abs() < 1e-9, "{name}");
    }
}

#[test]
fn mi_vessel_agrees_with_continuous() {
    let cont = benchmarks::load("pressure-vessel").unwrap();
    let mi = benchmarks::load("mi-pressure-vessel").unwrap();
    let x = DesignVector::new(vec![45.0, 150.0, 0.875, 0.4375]);
    assert_eq!(cont.respond(&x).unwrap(), mi.respond(&x).unwrap());
    assert!(mi.space.validate(&x).unwrap().is_none());
    let off_grid = DesignVector::new(vec![45.0, 150.0, 0.07, 0.4375]);
    assert!(mi.space.validate(&off_grid).unwrap().is_some());
}

#[test]
fn mi_spring_wire_from_table() {
    let p = benchmarks::load("mi-spring").unwrap();
    let ok = DesignVector::new(vec![9.0, 1.2, 0.283]);
    let bad = DesignVector::new(vec![9.0, 1.2, 0.284]);
    assert!(p.space.validate(&ok).unwrap().is_none());
    assert!(p.space.validate(&bad).unwrap().is_some());
}

fn brute_force(inst: &TspInstance) -> i64 {
    // Fix city 0 first and enumerate the rest.
    fn permute(rest: &mut Vec<usize>, k: usize, tour: &mut Vec<usize>, inst: &TspInstance, best: &mut i64) {
        if k == rest.len() {
            tour.truncate(1);
            tour.extend_from_slice(rest);
            *best = (*best).min(inst.tour_length(tour).unwrap());
            return;
        }
        for i in k..rest.len() {
            rest.swap(k, i);
            permute(rest, k + 1, tour, inst, best);
            rest.swap(k, i);
        }
    }
    let mut rest: Vec<usize> = (1..inst.len()).collect();
    let mut best = i64::MAX;
    permute(&mut rest, 0, &mut vec![0], inst, &mut best);
    best
}

#[test]
fn tour_length_symmetries_and_brute_force() {
    let text = "NAME: eight\nTYPE: TSP\nDIMENSION: 8\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n\
1 0 0\n2 10 0\n3 10 10\n4 0 10\n5 5 -3\n6 13 5\n7 5 13\n8 -3 5\nEOF\n";
    let inst = parse_tsplib(text).unwrap();
    let tour = [0, 4, 1, 5, 2, 6, 3, 7];
    let len = inst.tour_length(&tour).unwrap();
    // Octagon around the square: eight edges of nint(sqrt(34)) = 6.
    assert_eq!(len, 48);
    let mut rotated = tour.to_vec();
    rotated.rotate_left(3);
    assert_eq!(inst.tour_length(&rotated).unwrap(), len);
    let reversed: Vec<usize> = tour.iter().rev().copied().collect();
    assert_eq!(inst.tour_length(&reversed).unwrap(), len);
    assert_eq!(brute_force(&inst), 48);
}

#[test]
fn bundled_tsplib_files() {
    let eil = benchmarks::load_tsp("eil51").unwrap();
    assert_eq!(eil.len(), 51);
    let identity: Vec<usize> = (0..51).collect();
    assert!(eil.tour_length(&identity).unwrap() > 426);
}
