//! Monte Carlo estimators of ruin quantities.

use super::fluid::fluid_embed;
use super::paths::{exp_draw, sample_path, walk_stream, ClaimSampler, ClaimStream};
use super::stats::{run_paths, McConfig, McEstimate, Meta};
use crate::error::{Error, Result};
use crate::model::{ClaimLaw, ExpConstants, RiskModel};
use crate::onedim::PhaseTypeRuin;

fn check_run(cfg: &McConfig, horizon: f64) -> Result<()> {
    if cfg.paths == 0 {
        return Err(Error::Domain {
            what: "need at least one path",
            value: 0.0,
        });
    }
    if !(horizon > 0.0) {
        return Err(Error::Domain {
            what: "horizon must be positive",
            value: horizon,
        });
    }
    Ok(())
}

fn prepare(model: &RiskModel) -> Result<ClaimSampler> {
    model.validate().into_result()?;
    ClaimSampler::new(&model.claim)
}

// Per-path bound on ruin after the horizon given the reserves there.
fn tail_bound_fn(model: &RiskModel) -> Option<impl Fn([f64; 2]) -> f64> {
    let k = model.exp_constants().ok()?;
    let delta = model.delta;
    Some(move |r: [f64; 2]| {
        (0..2)
            .map(|i| k.lundberg[i] * (-k.gamma[i] * (r[i] / delta[i]).max(0.0)).exp())
            .sum::<f64>()
            .min(1.0)
    })
}

/// `P(tau <= T)` from raw reserves by direct simulation. Ruin is checked at
/// claim epochs only, which is exact since reserves rise between claims.
///
/// For exponential claims the estimate carries a tail bound: the mean over
/// surviving paths of `C1 e^{-gamma1 x1(T)} + C2 e^{-gamma2 x2(T)}`, which
/// bounds the ultimate-ruin mass the horizon cuts off.
pub fn simulate_joint_ruin(model: &RiskModel, u: [f64; 2], horizon: f64, cfg: &McConfig) -> Result<McEstimate> {
    check_run(cfg, horizon)?;
    let sampler = prepare(model)?;
    let stream = ClaimStream::new(&sampler, model.lambda);
    let tail = tail_bound_fn(model);
    let m = run_paths(cfg, 2, |rng, out| {
        let w = walk_stream(model, u, &stream, rng, horizon);
        if w.ruin_time.is_some() {
            out[0] = 1.0;
        } else if let Some(tb) = &tail {
            out[1] = tb(w.reserves);
        }
    });
    Ok(McEstimate::from_moments(
        &m[0],
        cfg.seed,
        Meta {
            method: "naive",
            target: "ruin_by_horizon",
            horizon: Some(horizon),
            tail_bound: tail.map(|_| m[1].mean),
            stream_offset: cfg.stream_offset,
            ..Default::default()
        },
    ))
}

/// Same estimate as [`simulate_joint_ruin`], with ruin read off the fluid
/// embedding of each recorded path.
pub fn simulate_joint_ruin_fluid(model: &RiskModel, u: [f64; 2], horizon: f64, cfg: &McConfig) -> Result<McEstimate> {
    check_run(cfg, horizon)?;
    let sampler = prepare(model)?;
    let stream = ClaimStream::new(&sampler, model.lambda);
    let m = run_paths(cfg, 1, |rng, out| {
        let events = sample_path(&stream, rng, horizon);
        let f = fluid_embed(model, u, &events);
        if let Some(t) = f.ruin_time() {
            if f.up_clock_at(t) <= horizon {
                out[0] = 1.0;
            }
        }
    });
    Ok(McEstimate::from_moments(
        &m[0],
        cfg.seed,
        Meta {
            method: "fluid",
            target: "ruin_by_horizon",
            horizon: Some(horizon),
            stream_offset: cfg.stream_offset,
            ..Default::default()
        },
    ))
}

/// `E[exp(-s tau) 1{tau <= T}]` from raw reserves. The truncation bias
/// against the untruncated transform is at most `exp(-s T)`, reported in
/// `meta.bias_bound`. With `s = 0` this reproduces [`simulate_joint_ruin`].
pub fn ruin_time_lt(model: &RiskModel, u: [f64; 2], s: f64, horizon: f64, cfg: &McConfig) -> Result<McEstimate> {
    check_run(cfg, horizon)?;
    if !(s >= 0.0) {
        return Err(Error::Domain {
            what: "discount rate must be nonnegative",
            value: s,
        });
    }
    let sampler = prepare(model)?;
    let stream = ClaimStream::new(&sampler, model.lambda);
    let m = run_paths(cfg, 1, |rng, out| {
        if let Some(t) = walk_stream(model, u, &stream, rng, horizon).ruin_time {
            out[0] = if s == 0.0 { 1.0 } else { (-s * t).exp() };
        }
    });
    Ok(McEstimate::from_moments(
        &m[0],
        cfg.seed,
        Meta {
            method: "naive",
            target: "discounted_ruin_by_horizon",
            horizon: Some(horizon),
            bias_bound: Some((-s * horizon).exp()),
            stream_offset: cfg.stream_offset,
            ..Default::default()
        },
    ))
}

enum CompanyTwo {
    Exponential { c2: f64, gamma2: f64 },
    PhaseType { ruin: PhaseTypeRuin, delta2: f64 },
}

impl CompanyTwo {
    fn survival(&self, x: f64) -> f64 {
        match self {
            CompanyTwo::Exponential { c2, gamma2 } => 1.0 - c2 * (-gamma2 * x).exp(),
            CompanyTwo::PhaseType { ruin, delta2 } => 1.0 - ruin.eval(delta2 * x).unwrap_or(1.0),
        }
    }
}

/// Unbiased estimate of the joint survival probability at normalized
/// reserves `x2 >= x1`: company 1 is simulated up to
/// `T = (x2 - x1)/(p1 - p2)`, when the two normalized reserves meet; a
/// surviving path then scores company 2's exact survival probability.
pub fn conditional_survival(model: &RiskModel, x1: f64, x2: f64, cfg: &McConfig) -> Result<McEstimate> {
    check_run(cfg, 1.0)?;
    if !(x1 >= 0.0) {
        return Err(Error::InvalidReserve(x1));
    }
    if !(x2 >= x1) {
        return Err(Error::Domain {
            what: "conditional estimator needs x2 >= x1",
            value: x2,
        });
    }
    let two = match &model.claim {
        ClaimLaw::Exponential { .. } => {
            let k = model.exp_constants()?;
            CompanyTwo::Exponential {
                c2: k.lundberg[1],
                gamma2: k.gamma[1],
            }
        }
        ClaimLaw::PhaseType { .. } => CompanyTwo::PhaseType {
            ruin: PhaseTypeRuin::new(model)?,
            delta2: model.delta[1],
        },
        ClaimLaw::Empirical { .. } => return Err(model.unsupported("exponential or phase-type")),
    };
    let sampler = prepare(model)?;
    let (p1, p2, lambda) = (model.p1(), model.p2(), model.lambda);
    let horizon = (x2 - x1) / (p1 - p2);
    let m = run_paths(cfg, 1, |rng, out| {
        let mut x = x1;
        let mut t = 0.0;
        loop {
            let gap = exp_draw(rng, lambda);
            if t + gap > horizon {
                x += p1 * (horizon - t);
                break;
            }
            t += gap;
            x += p1 * gap;
            x -= sampler.sample(rng) / model.delta[0];
            if x < 0.0 {
                return;
            }
        }
        out[0] = two.survival(x);
    });
    Ok(McEstimate::from_moments(
        &m[0],
        cfg.seed,
        Meta {
            method: "conditional",
            target: "survival",
            horizon: Some(horizon),
            stream_offset: cfg.stream_offset,
            ..Default::default()
        },
    ))
}

/// Killed resolvent of `X1` by exponential killing: per bin `[e_j, e_{j+1})`,
/// the expected time `X1` spends there before an independent `Exp(q)` clock
/// rings or `X1` drops below 0, divided by the bin width.
pub fn resolvent_mc(k: &ExpConstants, q: f64, x1: f64, edges: &[f64], cfg: &McConfig) -> Result<Vec<McEstimate>> {
    check_run(cfg, 1.0)?;
    if !(q > 0.0) {
        return Err(Error::Domain {
            what: "killing rate must be positive",
            value: q,
        });
    }
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain {
            what: "bin edges must increase",
            value: edges.len() as f64,
        });
    }
    let bins = edges.len() - 1;
    let m = run_paths(cfg, bins, |rng, out| {
        let kill = exp_draw(rng, q);
        let mut x = x1;
        let mut t = 0.0;
        loop {
            let gap = exp_draw(rng, k.lambda);
            let stop = (t + gap).min(kill);
            let top = x + k.p1 * (stop - t);
            for (j, o) in out.iter_mut().enumerate() {
                let overlap = top.min(edges[j + 1]) - x.max(edges[j]);
                if overlap > 0.0 {
                    *o += overlap / k.p1;
                }
            }
            if t + gap >= kill {
                break;
            }
            t += gap;
            x = top - exp_draw(rng, k.mu);
            if x < 0.0 {
                break;
            }
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o /= edges[j + 1] - edges[j];
        }
    });
    Ok(m
        .iter()
        .map(|mm| {
            McEstimate::from_moments(
                mm,
                cfg.seed,
                Meta {
                    method: "killed-resolvent",
                    target: "resolvent_density",
                    stream_offset: cfg.stream_offset,
                    ..Default::default()
                },
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform;
    use crate::mc::paths::{barrier_crossing, walk_events};
    use crate::mc::stats::path_stream;
    use crate::onedim;

    fn p0() -> RiskModel {
        RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0])
    }

    #[test]
    fn tiny_horizon_sees_no_ruin() {
        let e = simulate_joint_ruin(&p0(), [0.0, 0.0], 1e-12, &McConfig::new(1000, 1)).unwrap();
        assert_eq!(e.mean, 0.0);
    }

    #[test]
    fn barrier_and_planar_checks_agree() {
        let m = p0();
        let sampler = ClaimSampler::new(&m.claim).unwrap();
        let stream = ClaimStream::new(&sampler, m.lambda);
        for k in 0..2000 {
            let events = sample_path(&stream, &mut path_stream(8, k), 30.0);
            let walk = walk_events(&m, [1.0, 1.5], &events);
            let idx = barrier_crossing(&m, [1.0, 1.5], &events);
            assert_eq!(walk.ruin_time, idx.map(|i| events[i].time));
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = McConfig::new(20_000, 42);
        let a = simulate_joint_ruin(&p0(), [1.0, 2.0], 20.0, &cfg).unwrap();
        let b = simulate_joint_ruin(&p0(), [1.0, 2.0], 20.0, &cfg).unwrap();
        assert_eq!(a, b);
        let c = conditional_survival(&p0(), 1.0, 2.0, &cfg).unwrap();
        assert_eq!(c, conditional_survival(&p0(), 1.0, 2.0, &cfg).unwrap());
    }

    #[test]
    fn fluid_and_naive_estimates_coincide() {
        let cfg = McConfig::new(20_000, 3);
        let a = simulate_joint_ruin(&p0(), [1.0, 2.0], 20.0, &cfg).unwrap();
        let b = simulate_joint_ruin_fluid(&p0(), [1.0, 2.0], 20.0, &cfg).unwrap();
        assert_eq!(a.mean, b.mean);
    }

    #[test]
    fn zero_discount_reproduces_indicator() {
        let cfg = McConfig::new(20_000, 5);
        let a = simulate_joint_ruin(&p0(), [1.0, 1.0], 10.0, &cfg).unwrap();
        let b = ruin_time_lt(&p0(), [1.0, 1.0], 0.0, 10.0, &cfg).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.standard_error, b.standard_error);
    }

    #[test]
    fn discounted_transform_decreases_in_s() {
        let cfg = McConfig::new(20_000, 5);
        let a = ruin_time_lt(&p0(), [1.0, 1.0], 1.0, 50.0, &cfg).unwrap();
        let b = ruin_time_lt(&p0(), [1.0, 1.0], 50.0, 50.0, &cfg).unwrap();
        assert!(b.mean <= a.mean);
    }

    #[test]
    fn diagonal_conditional_estimate_is_exact() {
        let e = conditional_survival(&p0(), 1.0, 1.0, &McConfig::new(100, 1)).unwrap();
        assert!((e.mean - 0.696735).abs() < 1e-6);
        assert_eq!(e.standard_error, 0.0);
    }

    #[test]
    fn conditional_rejects_empirical_claims() {
        let mut m = p0();
        m.claim = ClaimLaw::Empirical { samples: vec![1.0] };
        assert!(matches!(
            conditional_survival(&m, 1.0, 2.0, &McConfig::new(10, 1)),
            Err(Error::UnsupportedClaimLaw { .. })
        ));
    }

    #[test]
    fn conditional_matches_closed_form() {
        let m = p0();
        let k = m.exp_constants().unwrap();
        let e = conditional_survival(&m, 1.0, 2.0, &McConfig::new(200_000, 11)).unwrap();
        let exact = closedform::survival(&k, 1.0, 2.0, 1e-10).unwrap().value;
        assert!(e.covers(exact, 3.5, 0.0), "{} +- {} vs {exact}", e.mean, e.standard_error);
    }

    #[test]
    fn cone_line_matches_one_dimensional_transform() {
        let m = p0();
        let k = m.exp_constants().unwrap();
        let e = ruin_time_lt(&m, [1.0, 1.0], 0.5, 60.0, &McConfig::new(200_000, 2)).unwrap();
        let exact = onedim::ruin_transform_exp(&k, 1.0, 0.5).unwrap();
        assert!(e.covers(exact, 3.5, e.meta.bias_bound.unwrap()));
    }

    #[test]
    fn resolvent_bins_match_formula() {
        let m = p0();
        let k = m.exp_constants().unwrap();
        let edges: Vec<f64> = (0..=10).map(|i| 0.4 * i as f64).collect();
        let est = resolvent_mc(&k, 0.5, 1.0, &edges, &McConfig::new(100_000, 9)).unwrap();
        let sf = onedim::ScaleFunction::new(&k, 0.5).unwrap();
        let mut ok = 0;
        for (j, e) in est.iter().enumerate() {
            let n = 200;
            let h = (edges[j + 1] - edges[j]) / n as f64;
            let avg = (0..n).map(|i| sf.resolvent_density(1.0, edges[j] + (i as f64 + 0.5) * h)).sum::<f64>() / n as f64;
            if e.covers(avg, 3.5, 1e-4) {
                ok += 1;
            }
        }
        assert!(ok >= 9, "{ok}/10 bins");
    }
}
