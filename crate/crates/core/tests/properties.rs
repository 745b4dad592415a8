use proptest::prelude::*;
use quadrant_ruin::closedform::survival;
use quadrant_ruin::mc::{fluid_embed, sample_path, ClaimSampler, ClaimStream, McConfig, conditional_survival};
use quadrant_ruin::mc::stats::path_stream;
use quadrant_ruin::onedim::kappa_roots;
use quadrant_ruin::{Company, RiskModel};

// Models with p1 > p2 > rho, in both regimes.
fn model() -> impl Strategy<Value = RiskModel> {
    (0.5..3.0f64, 0.5..2.0f64, 0.1..2.0f64, 0.1..3.0f64, 0.3..3.0f64, 0.3..3.0f64).prop_map(
        |(lambda, mu, gap2, gap1, d1, d2)| {
            let rho = lambda / mu;
            let p2 = rho + gap2;
            let p1 = p2 + gap1;
            RiskModel::exponential(lambda, mu, [p1 * d1, p2 * d2], [d1, d2])
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn survival_is_a_monotone_probability(m in model(), x1 in 0.0..6.0f64, dx in 0.0..6.0f64, step in 0.05..1.0f64) {
        let k = m.exp_constants().unwrap();
        let x2 = x1 + dx;
        let v = survival(&k, x1, x2, 1e-10).unwrap().value;
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&v), "{}", v);
        let up1 = survival(&k, x1 + step, x2, 1e-10).unwrap().value;
        let up2 = survival(&k, x1, x2 + step, 1e-10).unwrap().value;
        prop_assert!(up1 >= v - 1e-8);
        prop_assert!(up2 >= v - 1e-8);
    }

    #[test]
    fn normalization_round_trips(m in model(), u1 in 0.0..50.0f64, u2 in 0.0..50.0f64) {
        let (x1, x2) = m.normalize(u1, u2);
        let (v1, v2) = m.denormalize(x1, x2);
        prop_assert!((v1 - u1).abs() <= 1e-12 * u1.max(1.0));
        prop_assert!((v2 - u2).abs() <= 1e-12 * u2.max(1.0));
        prop_assert_eq!(m.in_upper_cone(u1, u2), x2 >= x1);
    }

    #[test]
    fn kappa_roots_solve_the_exponent(m in model(), s in 0.0..5.0f64) {
        let k = m.exp_constants().unwrap();
        for company in [Company::One, Company::Two] {
            let p = k.p(company);
            let (minus, plus) = kappa_roots(&k, company, s).unwrap();
            prop_assert!(plus >= 0.0 && minus < 0.0 && minus > -k.mu);
            for theta in [plus, minus] {
                let kappa = p * theta - k.lambda * theta / (k.mu + theta);
                prop_assert!((kappa - s).abs() < 1e-9 * (1.0 + s));
            }
        }
    }

    #[test]
    fn fluid_embedding_is_well_formed(m in model(), seed in any::<u64>(), u1 in 0.0..5.0f64, u2 in 0.0..5.0f64) {
        let sampler = ClaimSampler::new(&m.claim).unwrap();
        let stream = ClaimStream::new(&sampler, m.lambda);
        let mut rng = path_stream(seed, 0);
        let events = sample_path(&stream, &mut rng, 20.0);
        let fluid = fluid_embed(&m, [u1, u2], &events);
        prop_assert!(fluid.is_well_formed());
    }

    #[test]
    fn conditional_estimates_are_probabilities(m in model(), x1 in 0.0..3.0f64, dx in 0.0..3.0f64, seed in any::<u64>()) {
        let est = conditional_survival(&m, x1, x1 + dx, &McConfig::new(256, seed)).unwrap();
        prop_assert!((0.0..=1.0).contains(&est.mean));
        prop_assert!(est.standard_error >= 0.0);
    }
}
