//! Mean-metric checks: the averaged metric against its literal definition,
//! pseudometric laws for random averaging measures, linearity in the
//! measure, and agreement between the direct formula and the kernel.

use ergolab::groups::GroupElement;
use ergolab::meanmetric::{mean_distance, GroupMeasure, MeanKernel, SUPPORT_CAP};
use ergolab::seeds;
use ergolab::systems::{parse_system, DynamicalSystem};
use rand::prelude::IndexedRandom;
use rand::Rng;

/// A few structurally different averaging measures for a system's group.
fn probe_measures(sys: &DynamicalSystem, seed: u64) -> Vec<GroupMeasure> {
    let mut rng = seeds::rng(seed);
    let group = &sys.group;
    let family = group.default_family();
    let mut out = vec![
        GroupMeasure::dirac(group.identity()),
        GroupMeasure::from_window(&group.folner_window(family, 6).unwrap(), None).unwrap(),
    ];
    // A random ball subset with random weights.
    let ball: Vec<GroupElement> = if group.generators.is_empty() {
        (-8..=8)
            .map(|k| GroupElement::real(0.25 * k as f64))
            .collect()
    } else {
        group
            .word_ball(4)
            .unwrap()
            .into_iter()
            .map(|(g, _)| g)
            .collect()
    };
    let support: Vec<GroupElement> = ball
        .choose_multiple(&mut rng, 9.min(ball.len()))
        .cloned()
        .collect();
    let weights: Vec<f64> = (0..support.len())
        .map(|_| rng.random_range(0.1..1.0))
        .collect();
    out.push(GroupMeasure::new(support, weights, "random-ball").unwrap());
    out
}

#[test]
fn mean_distance_equals_the_weighted_sum_of_moved_distances() {
    for name in ["rotation", "skew-product", "bernoulli-shift:Z", "odometer"] {
        let sys = parse_system(name).unwrap();
        let sample = sys.sample(30, 31);
        for measure in probe_measures(&sys, 32) {
            for pair in sample.states.chunks(2) {
                let [x, y] = pair else { continue };
                let mut want = 0.0;
                for (g, w) in measure.support.iter().zip(&measure.weights) {
                    want += w * sys.metric(&sys.apply(g, x).unwrap(), &sys.apply(g, y).unwrap());
                }
                let got = mean_distance(&sys, &measure, x, y).unwrap();
                assert!((got - want).abs() < 1e-12, "{name}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn averaged_metrics_are_pseudometrics_bounded_by_one() {
    for name in ["rotation", "skew-product", "bernoulli-shift:Z", "odometer"] {
        let sys = parse_system(name).unwrap();
        let sample = sys.sample(120, 33);
        for measure in probe_measures(&sys, 34) {
            let mut rng = seeds::rng(35);
            for _ in 0..1000 {
                let x = sample.states.choose(&mut rng).unwrap();
                let y = sample.states.choose(&mut rng).unwrap();
                let z = sample.states.choose(&mut rng).unwrap();
                let dxy = mean_distance(&sys, &measure, x, y).unwrap();
                let dyx = mean_distance(&sys, &measure, y, x).unwrap();
                assert!((dxy - dyx).abs() < 1e-12);
                assert!((0.0..=1.0 + 1e-12).contains(&dxy));
                assert!(mean_distance(&sys, &measure, x, x).unwrap() == 0.0);
                let dxz = mean_distance(&sys, &measure, x, z).unwrap();
                let dzy = mean_distance(&sys, &measure, z, y).unwrap();
                assert!(dxy <= dxz + dzy + 1e-12, "{name}: triangle failed");
            }
        }
    }
}

#[test]
fn mean_distance_is_linear_in_the_measure() {
    for name in ["rotation", "bernoulli-shift:Z"] {
        let sys = parse_system(name).unwrap();
        let measures = probe_measures(&sys, 36);
        let (m1, m2) = (&measures[1], &measures[2]);
        let sample = sys.sample(40, 37);
        for lambda in [0.0, 0.25, 0.7, 1.0] {
            let mix =
                GroupMeasure::mixture(&[(m1.clone(), lambda), (m2.clone(), 1.0 - lambda)]).unwrap();
            for pair in sample.states.chunks(2) {
                let [x, y] = pair else { continue };
                let want = lambda * mean_distance(&sys, m1, x, y).unwrap()
                    + (1.0 - lambda) * mean_distance(&sys, m2, x, y).unwrap();
                let got = mean_distance(&sys, &mix, x, y).unwrap();
                assert!((got - want).abs() < 1e-12, "{name}: not linear");
            }
        }
    }
}

#[test]
fn isometric_systems_make_every_average_collapse_to_the_metric() {
    for name in ["rotation", "torus-rotation", "odometer", "kronecker-flow"] {
        let sys = parse_system(name).unwrap();
        let sample = sys.sample(60, 38);
        for measure in probe_measures(&sys, 39) {
            for pair in sample.states.chunks(2) {
                let [x, y] = pair else { continue };
                let got = mean_distance(&sys, &measure, x, y).unwrap();
                assert!(
                    (got - sys.metric(x, y)).abs() < 1e-12,
                    "{name}: averaging changed an isometry's metric"
                );
            }
        }
    }
}

#[test]
fn right_translated_measures_pull_back_the_mean_metric() {
    for name in [
        "bernoulli-shift:Z",
        "bernoulli-shift:heis3",
        "odometer",
        "rotation",
    ] {
        let sys = parse_system(name).unwrap();
        let mut rng = seeds::rng(40);
        let sample = sys.sample(24, 41);
        let movers: Vec<GroupElement> = (0..6)
            .map(|_| sys.group.random_element(&mut rng, 5))
            .collect();
        for measure in probe_measures(&sys, 42) {
            for h in &movers {
                let translated = measure.right_translate(&sys, h).unwrap();
                for pair in sample.states.chunks(2) {
                    let [x, y] = pair else { continue };
                    let lhs = mean_distance(&sys, &translated, x, y).unwrap();
                    let rhs = mean_distance(
                        &sys,
                        &measure,
                        &sys.apply(h, x).unwrap(),
                        &sys.apply(h, y).unwrap(),
                    )
                    .unwrap();
                    let tol = if name == "rotation" { 1e-9 } else { 0.0 };
                    assert!(
                        (lhs - rhs).abs() <= tol,
                        "{name}: translate relation broke: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }
}

#[test]
fn kernels_agree_with_the_direct_formula_on_both_paths() {
    // Orbit-trace path (rotation, odometer) and shift-mask path (bernoulli).
    for name in [
        "rotation",
        "odometer",
        "bernoulli-shift:Z",
        "bernoulli-shift:Z2",
    ] {
        let sys = parse_system(name).unwrap();
        let sample = sys.sample(80, 43);
        for measure in probe_measures(&sys, 44) {
            let kernel = MeanKernel::build(&sys, &measure, &sample).unwrap();
            assert_eq!(kernel.len(), sample.len());
            let mut rng = seeds::rng(45);
            for _ in 0..600 {
                let j = rng.random_range(0..sample.len());
                let k = rng.random_range(0..sample.len());
                let want =
                    mean_distance(&sys, &measure, &sample.states[j], &sample.states[k]).unwrap();
                let got = kernel.dist(j, k);
                assert!(
                    (got - want).abs() < 1e-12,
                    "{name}/{}: kernel {got} vs direct {want}",
                    measure.label
                );
                for bound in [0.1, 0.3, want] {
                    assert_eq!(kernel.dist_lt(j, k, bound), got < bound);
                }
            }
        }
    }
}

#[test]
fn window_measures_are_uniform_until_thinned() {
    let sys = parse_system("bernoulli-shift:Z").unwrap();
    let small = sys.group.folner_window("intervals", 100).unwrap();
    let m = GroupMeasure::from_window(&small, None).unwrap();
    assert!(!m.thinned);
    assert_eq!(m.len(), 100);
    for w in &m.weights {
        assert_eq!(*w, 0.01);
    }

    let big = sys.group.folner_window("intervals", 5000).unwrap();
    let t = GroupMeasure::from_window(&big, None).unwrap();
    assert!(t.thinned);
    assert!(t.len() <= SUPPORT_CAP);
    let total: f64 = t.weights.iter().sum();
    assert!((total - 1.0).abs() < 1e-9);

    // Flow windows integrate with trapezoid weights that also sum to one.
    let flow = parse_system("kronecker-flow").unwrap();
    let interval = flow.group.folner_window("intervals", 40).unwrap();
    let q = GroupMeasure::from_window(&interval, None).unwrap();
    let total: f64 = q.weights.iter().sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!(q.weights[0] < q.weights[1]);
}
