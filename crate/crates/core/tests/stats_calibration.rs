//! Calibration of the uniformity diagnostics on synthetic input with
//! known distribution, plus fingerprint soundness on full tableau sets.

use std::collections::HashSet;

use num_bigint::BigUint;
use taquin_core::{
    chi_square_uniform, enumerate_diagrams, enumerate_tableaux, fingerprint128, gaussian_summary,
    nerve_coverage, run_histogram, sample_pp_tableau, Diagram3, FrequencyHistogram, RandomSource,
    Tableau,
};

/// Chi-square rejection rates on truly uniform draws match the nominal
/// level within 3 sigma of the binomial model, over 600 seeds.
#[test]
fn chi_square_is_calibrated_on_uniform_input() {
    let shape = Diagram3::from_partition(&[3, 2]).unwrap();
    let tableaux = enumerate_tableaux(&shape);
    let dim = tableaux.len(); // 5
    let draws = 600u64;
    let seeds = 600u64;
    let mut rejects_05 = 0u64;
    let mut rejects_10 = 0u64;
    for seed in 0..seeds {
        let mut source = RandomSource::derived(4242, seed);
        let mut h = FrequencyHistogram::new(&shape);
        for _ in 0..draws {
            let idx = (source.unit_f64() * dim as f64) as usize;
            h.tally(tableaux[idx.min(dim - 1)].path()).unwrap();
        }
        let res = chi_square_uniform(&h, &BigUint::from(dim)).unwrap();
        if res.p_value < 0.05 {
            rejects_05 += 1;
        }
        if res.p_value < 0.10 {
            rejects_10 += 1;
        }
    }
    for (alpha, rejects) in [(0.05, rejects_05), (0.10, rejects_10)] {
        let sigma = (alpha * (1.0 - alpha) / seeds as f64).sqrt();
        let rate = rejects as f64 / seeds as f64;
        println!("alpha {alpha}: rejection rate {rate:.4}");
        assert!(
            (rate - alpha).abs() <= 3.0 * sigma,
            "alpha {alpha}: rate {rate}"
        );
    }
}

/// Fingerprints are collision-free on every full tableau set with
/// dimension below 5000 in the working corpus.
#[test]
fn fingerprints_are_sound_on_full_tableau_sets() {
    let mut shapes: Vec<Diagram3> = (1..=7).flat_map(enumerate_diagrams).collect();
    // dim 4630:
    shapes.push(Diagram3::from_rows(vec![vec![2, 2, 1], vec![2, 1], vec![1], vec![1]]).unwrap());
    for shape in shapes {
        let tableaux = enumerate_tableaux(&shape);
        let fps: HashSet<u128> = tableaux.iter().map(|t| fingerprint128(t.path())).collect();
        assert_eq!(fps.len(), tableaux.len(), "{}", shape.to_canonical_json());
    }
}

/// At 1000 expected visits per tableau on the dimension-4630 shape, no
/// tableau stays unseen, which pins the mean count to exactly 1000.
#[test]
fn forced_mean_on_the_4630_shape() {
    let shape = Diagram3::from_rows(vec![vec![2, 2, 1], vec![2, 1], vec![1], vec![1]]).unwrap();
    let run = run_histogram(&shape, 4_630_000, 2, 1, 1).unwrap();
    assert_eq!(run.full.distinct(), 4630);
    let g = gaussian_summary(&run.full).unwrap();
    assert_eq!(g.mean, 1000.0);
}

/// Coverage bookkeeping on a 1000-box pseudo-Plancherel shape: hits stay
/// inside the target set and full coverage is reached within budget. The
/// iteration count is recorded for reference.
#[test]
fn nerve_coverage_on_a_1000_box_shape() {
    let mut source = RandomSource::from_seed(271828);
    let shape = sample_pp_tableau(1000, &mut source).shape();
    let start = Tableau::canonical(&shape);
    let targets = shape.removable_corners().len() as u64;
    let report = nerve_coverage(&start, 200 * targets, 271828).unwrap();
    assert!(report.hits.keys().all(|b| report.targets.contains(b)));
    assert_eq!(report.targets.len() as u64, targets);
    println!(
        "{} corners covered at iteration {:?} of {}",
        targets, report.covered_at, report.iterations
    );
    assert!(
        report.covered_at.is_some(),
        "not covered within {} iterations",
        200 * targets
    );
}
