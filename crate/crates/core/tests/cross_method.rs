use quadrant_ruin::closedform::{ruin, survival};
use quadrant_ruin::inversion::{invert_2d, DEFAULT_M};
use quadrant_ruin::mc::{conditional_survival, simulate_joint_ruin, McConfig};
use quadrant_ruin::model::{ClaimLaw, RiskModel};
use quadrant_ruin::onedim::{ruin_prob_exp, ruin_prob_phasetype};
use quadrant_ruin::{pde, Company};

fn p0() -> RiskModel {
    RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0])
}

fn p1() -> RiskModel {
    RiskModel::exponential(2.0, 1.0, [5.0, 2.2], [1.0, 1.0])
}

fn one_state(m: &RiskModel) -> RiskModel {
    let mu = m.mu().unwrap();
    RiskModel {
        claim: ClaimLaw::PhaseType {
            beta: vec![1.0],
            generator: vec![vec![-mu]],
        },
        ..m.clone()
    }
}

#[test]
fn four_methods_agree() {
    for model in [p0(), p1()] {
        let k = model.exp_constants().unwrap();
        let grid = pde::solve(&model, 0.0, 12.0, 120, 1e-4).unwrap();
        for (x1, x2) in [(0.5, 1.0), (1.0, 3.0), (2.0, 2.5)] {
            let exact = ruin(&k, x1, x2, 1e-10).unwrap().value;
            let inv = 1.0 - invert_2d(&k, x1, x2, DEFAULT_M).unwrap().value;
            assert!((inv - exact).abs() < 2e-3, "inversion at ({x1}, {x2}): {inv} vs {exact}");
            let p = grid.evaluate(x1, x2).unwrap();
            assert!((p - exact).abs() < 1e-3, "pde at ({x1}, {x2}): {p} vs {exact}");
            let mc = conditional_survival(&model, x1, x2, &McConfig::new(100_000, 11)).unwrap();
            assert!(mc.covers(1.0 - exact, 4.0, 0.0), "mc at ({x1}, {x2})");
        }
    }
}

#[test]
fn naive_mc_brackets_ultimate_ruin() {
    let model = p0();
    let k = model.exp_constants().unwrap();
    let exact = ruin(&k, 1.0, 2.0, 1e-10).unwrap().value;
    let est = simulate_joint_ruin(&model, [1.0, 2.0], 50.0, &McConfig::new(200_000, 5)).unwrap();
    let tail = est.meta.tail_bound.unwrap();
    assert!(est.mean - 4.0 * est.standard_error <= exact);
    assert!(exact <= est.mean + tail + 4.0 * est.standard_error);
}

#[test]
fn one_state_phase_type_matches_exponential() {
    for model in [p0(), p1()] {
        let k = model.exp_constants().unwrap();
        let ph = one_state(&model);
        for u in [0.0, 0.7, 3.0] {
            let a = ruin_prob_exp(&k, Company::Two, u).unwrap();
            let b = ruin_prob_phasetype(&ph, u).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let a = conditional_survival(&model, 1.0, 2.0, &McConfig::new(20_000, 9)).unwrap();
        let b = conditional_survival(&ph, 1.0, 2.0, &McConfig::new(20_000, 9)).unwrap();
        assert!((a.mean - b.mean).abs() < 4.0 * a.standard_error.hypot(b.standard_error));
    }
}

#[test]
fn disjoint_streams_are_independent() {
    let model = p0();
    let mut hits = 0;
    for rep in 0..20u64 {
        let base = McConfig::new(5_000, 100 + rep);
        let a = conditional_survival(&model, 1.0, 2.0, &base).unwrap();
        let b = conditional_survival(&model, 1.0, 2.0, &base.with_offset(1 << 32)).unwrap();
        assert_ne!(a.mean, b.mean);
        if (a.mean - b.mean).abs() <= 4.0 * a.standard_error.hypot(b.standard_error) {
            hits += 1;
        }
    }
    assert_eq!(hits, 20);
}

#[test]
fn conditional_estimator_is_unbiased() {
    let model = p1();
    let k = model.exp_constants().unwrap();
    let exact = survival(&k, 1.0, 2.0, 1e-10).unwrap().value;
    let runs: Vec<f64> = (0..50u64)
        .map(|seed| conditional_survival(&model, 1.0, 2.0, &McConfig::new(10_000, seed)).unwrap().mean)
        .collect();
    let mean = runs.iter().sum::<f64>() / 50.0;
    let sd = (runs.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / 49.0).sqrt();
    let t = (mean - exact) / (sd / 50f64.sqrt());
    assert!(t.abs() < 4.0, "t = {t}");
}

#[test]
fn conditioning_reduces_variance() {
    let model = p0();
    let (x1, x2) = (1.0, 2.0);
    let wins = (0..20u64)
        .filter(|&seed| {
            let cfg = McConfig::new(10_000, seed);
            let cond = conditional_survival(&model, x1, x2, &cfg).unwrap();
            let naive = simulate_joint_ruin(&model, [x1, x2], 100.0, &cfg).unwrap();
            cond.standard_error <= naive.standard_error
        })
        .count();
    assert!(wins >= 18, "{wins}/20");
}
