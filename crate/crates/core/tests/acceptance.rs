//! End-to-end acceptance gate.
//!
//! Runs the ten release criteria in order, prints one verdict line per
//! criterion, and fails at the end if any of them missed. Each criterion is
//! self-contained and seeded, so a failure here reproduces exactly.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use ergolab::complexity::{
    covering_estimate, folner_profile, translate_invariance_check, BoundednessVerdict,
};
use ergolab::groups::{GroupElement, GroupSpec, WindowContent};
use ergolab::meanmetric::{mean_distance, GroupMeasure, MeanKernel};
use ergolab::seeds;
use ergolab::spectrum::{
    cross_validate, dictionary, equicontinuity_in_mean_test, l2_distance, mean_equicontinuity_test,
    CrossValidateOptions, EquicontVerdict, ValidationOutcome,
};
use ergolab::systems::{list_systems, parse_system, DynamicalSystem, GroundTruth};
use rand::prelude::IndexedRandom;
use rand::Rng;

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// A random finitely supported probability measure drawn from a word ball
/// (step multiples for the flow).
fn random_measure(group: &GroupSpec, rng: &mut impl Rng, radius: u32) -> GroupMeasure {
    let ball: Vec<GroupElement> = if group.generators.is_empty() {
        let r = radius as i64;
        (-r..=r)
            .map(|k| GroupElement::real(0.25 * k as f64))
            .collect()
    } else {
        group
            .word_ball(radius)
            .unwrap()
            .into_iter()
            .map(|(g, _)| g)
            .collect()
    };
    let size = rng.random_range(1..=12.min(ball.len()));
    let support: Vec<GroupElement> = ball.choose_multiple(rng, size).cloned().collect();
    let weights: Vec<f64> = (0..support.len())
        .map(|_| rng.random_range(0.1..1.0))
        .collect();
    GroupMeasure::new(support, weights, "random").unwrap()
}

// --- criterion 1 ---

fn circle_covering_oracle() -> Verdict {
    let start = Instant::now();
    let sys = parse_system("rotation").unwrap();
    let sample = sys.sample(10_000, 901);
    let mut rng = seeds::rng(902);
    let mut counts = Vec::new();
    for _ in 0..20 {
        let measure = random_measure(&sys.group, &mut rng, 40);
        let kernel = MeanKernel::build(&sys, &measure, &sample).unwrap();
        let est = covering_estimate(&kernel, 0.1, 903).unwrap();
        counts.push(est.upper_count);
    }
    let elapsed = start.elapsed();
    let in_range = counts.iter().all(|c| (8..=12).contains(c));
    check(
        in_range && elapsed < Duration::from_secs(10),
        format!(
            "20 random averaging measures gave counts {:?} (oracle 10) in {:.2?}",
            counts, elapsed
        ),
    )
}

// --- criterion 2 ---

fn isometry_flatness() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for name in ["rotation", "torus-rotation", "odometer", "kronecker-flow"] {
        let sys = parse_system(name).unwrap();
        let start = Instant::now();
        for eps in [0.05, 0.1, 0.2] {
            let profile =
                folner_profile(&sys, None, &[8, 16, 32, 64, 128, 256], eps, 2000, 904).unwrap();
            let counts = profile.counts();
            let max = *counts.iter().max().unwrap() as f64;
            let min = *counts.iter().min().unwrap() as f64;
            let flat = profile.verdict == BoundednessVerdict::Bounded && max / min <= 1.3;
            if !flat {
                ok = false;
                details.push(format!(
                    "{name} eps={eps}: verdict {:?}, counts {:?}",
                    profile.verdict, counts
                ));
            }
        }
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_secs(120) {
            ok = false;
            details.push(format!("{name}: took {elapsed:.2?}"));
        }
    }
    if details.is_empty() {
        details.push("four isometric systems flat at eps in {0.05, 0.1, 0.2}".into());
    }
    check(ok, details.join("; "))
}

// --- criterion 3 ---

/// Exact greedy cover of `{0,1}^m` under weighted Hamming distance; ties to
/// the lowest configuration.
fn exact_greedy_cover(weights: &[f64], eps: f64) -> usize {
    let m = weights.len();
    let total = 1usize << m;
    let offsets: Vec<usize> = (0..total)
        .filter(|z| {
            let mut s = 0.0;
            for (p, w) in weights.iter().enumerate() {
                if z & (1 << p) != 0 {
                    s += w;
                }
            }
            s < eps
        })
        .collect();
    let mut covered = vec![false; total];
    let mut covered_count = 0usize;
    let mut picks = 0usize;
    while (covered_count as f64) <= (1.0 - eps) * total as f64 {
        let mut best = usize::MAX;
        let mut best_gain = 0usize;
        for c in 0..total {
            let gain = offsets.iter().filter(|z| !covered[c ^ **z]).count();
            if gain > best_gain {
                best_gain = gain;
                best = c;
            }
        }
        for z in &offsets {
            let cell = best ^ z;
            if !covered[cell] {
                covered[cell] = true;
                covered_count += 1;
            }
        }
        picks += 1;
    }
    picks
}

fn factor_weights(n: i64, seq: &ergolab::systems::SeqWindow) -> Vec<f64> {
    let mut by_site: BTreeMap<i64, f64> = BTreeMap::new();
    for b in 0..n {
        for (g, w) in seq.elements.iter().zip(&seq.weights) {
            let GroupElement::Int(e) = g else { panic!() };
            *by_site.entry(e + b).or_insert(0.0) += w / n as f64;
        }
    }
    by_site.into_values().collect()
}

fn positive_entropy_growth() -> Verdict {
    let sys = parse_system("bernoulli-shift:Z,L=6").unwrap();
    let seq = sys.seq_window().unwrap().clone();
    let profile = folner_profile(&sys, None, &[2, 4, 8, 16], 0.2, 1500, 905).unwrap();
    let counts = profile.counts();

    let increasing = counts.windows(2).all(|w| w[0] < w[1]);
    let unbounded = profile.verdict == BoundednessVerdict::Unbounded;
    let mut factor_two = true;
    let mut refs = Vec::new();
    for (i, n) in [2i64, 4].iter().enumerate() {
        let exact = exact_greedy_cover(&factor_weights(*n, &seq), 0.2);
        refs.push(exact);
        if counts[i] > 2 * exact || 2 * counts[i] < exact {
            factor_two = false;
        }
    }
    check(
        increasing && unbounded && factor_two,
        format!(
            "counts {:?} strictly increase, verdict {:?}, exact greedy references {:?}",
            counts, profile.verdict, refs
        ),
    )
}

// --- criterion 4 ---

fn expected_lean(t: GroundTruth) -> BoundednessVerdict {
    match t {
        GroundTruth::DiscreteSpectrum => BoundednessVerdict::Bounded,
        _ => BoundednessVerdict::Unbounded,
    }
}

fn verdict_consistency() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut opts = CrossValidateOptions::quick(906);
    opts.maxmean_budget = 50;
    for desc in list_systems() {
        let sys = parse_system(desc.name).unwrap();
        let report = cross_validate(&sys, &opts).unwrap();
        let want = expected_lean(desc.ground_truth);
        if report.profile.verdict != want
            || report.maxmean.verdict != want
            || report.orbit_net.verdict != want
            || report.outcome == ValidationOutcome::Inconsistent
        {
            bad.push(format!(
                "{}: profile {:?}, maxmean {:?}, orbit {:?}, outcome {:?}",
                desc.name,
                report.profile.verdict,
                report.maxmean.verdict,
                report.orbit_net.verdict,
                report.outcome
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1200) {
        bad.push(format!("took {elapsed:.2?}"));
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "all {} built-ins: three estimators and ground truth agree in {:.2?}",
                list_systems().len(),
                elapsed
            )
        } else {
            bad.join("; ")
        },
    )
}

// --- criterion 5 ---

fn equicontinuity_split() -> Verdict {
    let mut bad = Vec::new();
    for desc in list_systems().iter().filter(|d| d.isometric) {
        let sys = parse_system(desc.name).unwrap();
        let n_max = 256.min(sys.group.window_limit(sys.group.default_family()));
        for report in [
            mean_equicontinuity_test(&sys, None, 0.1, n_max, 400, 907).unwrap(),
            equicontinuity_in_mean_test(&sys, None, 0.1, n_max, 400, 907).unwrap(),
        ] {
            let widest = &report.rows[0];
            if report.verdict != EquicontVerdict::Equicontinuous
                || widest.delta != report.epsilon
                || widest.failing_fraction != 0.0
                || widest.starved
            {
                bad.push(format!("{} {:?}", desc.name, report.mode));
            }
        }
    }
    for name in ["bernoulli-shift:Z", "skew-product"] {
        let sys = parse_system(name).unwrap();
        for report in [
            mean_equicontinuity_test(&sys, None, 0.1, 256, 400, 908).unwrap(),
            equicontinuity_in_mean_test(&sys, None, 0.1, 256, 400, 908).unwrap(),
        ] {
            if report.verdict != EquicontVerdict::NotEquicontinuous {
                bad.push(format!(
                    "{name} {:?} gave {:?}",
                    report.mode, report.verdict
                ));
            }
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "isometries pass both probes at delta = epsilon; shift and skew fail both".into()
        } else {
            bad.join("; ")
        },
    )
}

// --- criterion 6 ---

fn translate_identity() -> Verdict {
    // Two shift variants over the bigger groups exercise the same code path
    // and are left to the cross-validation sweep for runtime reasons.
    let names = [
        "rotation",
        "torus-rotation",
        "kronecker-flow",
        "odometer",
        "sturmian",
        "bernoulli-shift:Z",
        "bernoulli-shift:Z2",
        "skew-product",
    ];
    let mut worst = 0i64;
    let mut bad = Vec::new();
    for name in names {
        let sys = parse_system(name).unwrap();
        let mut rng = seeds::rng(909);
        for round in 0..20 {
            let measure = random_measure(&sys.group, &mut rng, 5);
            let h = if sys.group.generators.is_empty() {
                GroupElement::real(0.25 * f64::from(rng.random_range(-20i32..=20)))
            } else {
                sys.group.random_element(&mut rng, 5)
            };
            let res =
                translate_invariance_check(&sys, &measure, &h, 0.2, 600, 910 + round).unwrap();
            worst = worst.max(res.delta.abs());
            if res.delta.abs() > 2 {
                bad.push(format!("{name}: delta {} at round {round}", res.delta));
            }
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            format!("160 random (measure, translate) pairs, worst count shift {worst}")
        } else {
            bad.join("; ")
        },
    )
}

// --- criterion 7 ---

fn tempering_constants() -> Verdict {
    let z = GroupSpec::integer_line();
    let z2 = GroupSpec::integer_lattice(2);

    let enumerate = |group: &GroupSpec, family: &str, n_max: u32| -> Vec<f64> {
        let windows: Vec<Vec<GroupElement>> = (1..=n_max)
            .map(|n| match group.folner_window(family, n).unwrap().content {
                WindowContent::Discrete(e) => e,
                _ => unreachable!(),
            })
            .collect();
        (2..=n_max as usize)
            .map(|n| {
                let mut union = std::collections::HashSet::new();
                for prefix in &windows[..n - 1] {
                    for x in prefix {
                        let xi = group.inverse(x).unwrap();
                        for y in &windows[n - 1] {
                            union.insert(group.compose(&xi, y).unwrap());
                        }
                    }
                }
                union.len() as f64 / windows[n - 1].len() as f64
            })
            .collect()
    };

    let zr = z.shulman_report("intervals", 10).unwrap();
    let z_oracle = enumerate(&z, "intervals", 10);
    let z_exact = zr
        .rows
        .iter()
        .zip(&z_oracle)
        .all(|(row, want)| row.ratio == *want);
    let z_sup = z.shulman_report("intervals", 32).unwrap().constant;

    let br = z2.shulman_report("boxes", 6).unwrap();
    let b_oracle = enumerate(&z2, "boxes", 6);
    let b_exact = br
        .rows
        .iter()
        .zip(&b_oracle)
        .all(|(row, want)| row.ratio == *want);

    check(
        z_exact && zr.constant == 1.8 && z_sup < 2.0 && b_exact && br.constant < 4.0,
        format!(
            "interval constant {} (sup {:.4} < 2), box constant {:.4} < 4, rows equal enumeration",
            zr.constant, z_sup, br.constant
        ),
    )
}

// --- criterion 8 ---

fn product_lift_preserves_verdicts() -> Verdict {
    let mut bad = Vec::new();
    let mut rotation_note = String::new();
    for desc in list_systems() {
        let sys = parse_system(desc.name).unwrap();
        let windows = ergolab::spectrum::default_profile_windows(sys.group.kind);
        // Radius 0.25: small-window transients of slowly mixing squares stay
        // inside the flatness tolerance while true growth still doubles.
        let base = folner_profile(&sys, None, &windows, 0.25, 2000, 911).unwrap();
        let product = folner_profile(&sys.product_lift(), None, &windows, 0.25, 2000, 911).unwrap();
        if product.verdict != base.verdict {
            bad.push(format!(
                "{}: base {:?} {:?} vs product {:?} {:?}",
                desc.name,
                base.verdict,
                base.counts(),
                product.verdict,
                product.counts()
            ));
        }
        if desc.name == "rotation" {
            let within = base
                .counts()
                .iter()
                .zip(product.counts())
                .all(|(b, p)| p <= (b + 2) * (b + 2));
            rotation_note = format!(
                "rotation counts {:?} -> product {:?}",
                base.counts(),
                product.counts()
            );
            if !within {
                bad.push(format!(
                    "rotation product exceeded the square bound: {rotation_note}"
                ));
            }
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            format!("all built-ins keep their verdict under the diagonal square; {rotation_note}")
        } else {
            bad.join("; ")
        },
    )
}

// --- criterion 9 ---

/// First-fit maximal `delta`-separated subset of the whole sample.
fn greedy_packing(kernel: &MeanKernel, delta: f64) -> usize {
    let mut kept: Vec<usize> = Vec::new();
    for j in 0..kernel.len() {
        if kept.iter().all(|k| !kernel.dist_lt(j, *k, delta)) {
            kept.push(j);
        }
    }
    kept.len()
}

/// Greedy `2ε`-packing restricted to points the cover reaches. A radius-`ε`
/// ball holds at most one point of a `2ε`-separated set, so this never
/// exceeds the ball count; points in the discarded mass tail owe no such
/// bound.
fn covered_packing(kernel: &MeanKernel, centers: &[usize], epsilon: f64) -> usize {
    let mut kept: Vec<usize> = Vec::new();
    for j in 0..kernel.len() {
        if centers.iter().any(|c| kernel.dist_lt(j, *c, epsilon))
            && kept.iter().all(|k| !kernel.dist_lt(j, *k, 2.0 * epsilon))
        {
            kept.push(j);
        }
    }
    kept.len()
}

fn random_case_system(rng: &mut impl Rng) -> DynamicalSystem {
    match rng.random_range(0..5) {
        0 => {
            let alpha = rng.random_range(0.05..0.95);
            parse_system(&format!("rotation:alpha={alpha}")).unwrap()
        }
        1 => parse_system("torus-rotation").unwrap(),
        2 => parse_system("odometer").unwrap(),
        3 => parse_system("bernoulli-shift:Z,L=8").unwrap(),
        _ => parse_system("skew-product").unwrap(),
    }
}

fn estimator_laws() -> Verdict {
    let cases = 1000usize;
    let mut mono_bad = 0usize;
    let mut sandwich_bad = 0usize;
    let mut axiom_bad = 0usize;
    let mut determinism_bad = 0usize;

    let mut rng = seeds::rng(912);
    for case in 0..cases {
        let sys = random_case_system(&mut rng);
        let measure = match rng.random_range(0..3) {
            0 => GroupMeasure::dirac(sys.group.identity()),
            1 => GroupMeasure::from_window(
                &sys.group
                    .folner_window(sys.group.default_family(), rng.random_range(2..=8))
                    .unwrap(),
                None,
            )
            .unwrap(),
            _ => random_measure(&sys.group, &mut rng, 5),
        };
        let sample = sys.sample(900, 5000 + case as u64);
        let kernel = MeanKernel::build(&sys, &measure, &sample).unwrap();

        let lo: f64 = rng.random_range(0.12..0.30);
        let hi: f64 = rng.random_range(lo + 0.05..0.45);
        let seed = 6000 + case as u64;
        let fine = covering_estimate(&kernel, lo, seed).unwrap();
        let coarse = covering_estimate(&kernel, hi, seed).unwrap();
        if coarse.upper_count > fine.upper_count {
            mono_bad += 1;
        }

        if covered_packing(&kernel, &fine.centers, lo) > fine.upper_count
            || fine.upper_count > greedy_packing(&kernel, lo)
        {
            sandwich_bad += 1;
        }

        // Pseudometric axioms for the averaged metric and the translated
        // observable distance, one random triple per case.
        let x = sample.states.choose(&mut rng).unwrap();
        let y = sample.states.choose(&mut rng).unwrap();
        let z = sample.states.choose(&mut rng).unwrap();
        let dxy = mean_distance(&sys, &measure, x, y).unwrap();
        let dxz = mean_distance(&sys, &measure, x, z).unwrap();
        let dzy = mean_distance(&sys, &measure, z, y).unwrap();
        let sym = (dxy - mean_distance(&sys, &measure, y, x).unwrap()).abs() < 1e-12;
        if !sym || dxy > dxz + dzy + 1e-12 || mean_distance(&sys, &measure, x, x).unwrap() != 0.0 {
            axiom_bad += 1;
        }
        let f = &dictionary(&sys)[0];
        let g = sys.group.random_element(&mut rng, 5);
        let h = sys.group.random_element(&mut rng, 5);
        let k = sys.group.random_element(&mut rng, 5);
        let lgh = l2_distance(&sys, f, &g, &h, &sample).unwrap();
        let lgk = l2_distance(&sys, f, &g, &k, &sample).unwrap();
        let lkh = l2_distance(&sys, f, &k, &h, &sample).unwrap();
        let lsym = (lgh - l2_distance(&sys, f, &h, &g, &sample).unwrap()).abs() < 1e-12;
        if !lsym || lgh > lgk + lkh + 1e-12 {
            axiom_bad += 1;
        }

        let again = covering_estimate(&kernel, lo, seed).unwrap();
        if again.upper_count != fine.upper_count
            || again.centers != fine.centers
            || again.covered_fraction.to_bits() != fine.covered_fraction.to_bits()
        {
            determinism_bad += 1;
        }
    }

    check(
        mono_bad == 0 && sandwich_bad == 0 && axiom_bad == 0 && determinism_bad == 0,
        format!(
            "{cases} cases: monotonicity misses {mono_bad}, sandwich misses {sandwich_bad}, \
             axiom misses {axiom_bad}, determinism misses {determinism_bad}"
        ),
    )
}

// --- criterion 10 ---

fn l2_oracle() -> Verdict {
    let alpha = 0.6180339887498949_f64;
    let sys = parse_system(&format!("rotation:alpha={alpha}")).unwrap();
    let f = &dictionary(&sys)[0];
    let sample = sys.sample(10_000, 913);
    let bound = 3.0 / (sample.len() as f64).sqrt();
    let mut rng = seeds::rng(914);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let g = rng.random_range(-60i64..=60);
        let h = rng.random_range(-60i64..=60);
        let got = l2_distance(
            &sys,
            f,
            &GroupElement::int(g),
            &GroupElement::int(h),
            &sample,
        )
        .unwrap();
        let phase = 2.0 * std::f64::consts::PI * (g - h) as f64 * alpha;
        let want = (2.0 - 2.0 * phase.cos()).sqrt();
        worst = worst.max((got - want).abs());
    }
    check(
        worst < bound,
        format!("worst deviation {worst:.2e} over 100 pairs, bound {bound:.2e}"),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

#[test]
fn acceptance_criteria() {
    let criteria: Vec<Criterion> = vec![
        ("circle covering oracle", circle_covering_oracle),
        ("isometry flatness", isometry_flatness),
        ("positive-entropy growth", positive_entropy_growth),
        ("verdict consistency", verdict_consistency),
        ("equicontinuity split", equicontinuity_split),
        ("translate identity", translate_identity),
        ("tempering constants", tempering_constants),
        ("product lift", product_lift_preserves_verdicts),
        ("estimator laws", estimator_laws),
        ("translated observable oracle", l2_oracle),
    ];

    let mut failed = Vec::new();
    for (idx, (label, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        match run() {
            Ok(detail) => {
                println!(
                    "criterion {:2} ({label}): PASS [{:.2?}] {detail}",
                    idx + 1,
                    started.elapsed()
                );
            }
            Err(detail) => {
                println!(
                    "criterion {:2} ({label}): FAIL [{:.2?}] {detail}",
                    idx + 1,
                    started.elapsed()
                );
                failed.push(format!("{} ({label})", idx + 1));
            }
        }
    }
    assert!(failed.is_empty(), "criteria failed: {}", failed.join(", "));
}
