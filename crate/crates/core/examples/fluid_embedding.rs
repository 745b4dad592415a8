//! Embed a simulated claim path in a two-phase fluid process and check that
//! it sees the same ruin time and minima as the direct walk.

use quadrant_ruin::mc::paths::walk_events;
use quadrant_ruin::mc::stats::path_stream;
use quadrant_ruin::mc::{fluid_embed, sample_path, simulate_joint_ruin, simulate_joint_ruin_fluid, ClaimSampler, ClaimStream, McConfig};
use quadrant_ruin::{Result, RiskModel};

fn main() -> Result<()> {
    let model = RiskModel::exponential(1.0, 1.0, [3.0, 2.0], [1.0, 1.0]);
    let u = [0.5, 1.0];
    let sampler = ClaimSampler::new(&model.claim)?;
    let stream = ClaimStream::new(&sampler, model.lambda);

    let mut rng = path_stream(1, 0);
    let events = sample_path(&stream, &mut rng, 10.0);
    let fluid = fluid_embed(&model, u, &events);
    let walk = walk_events(&model, u, &events);
    println!("{} events, {} fluid segments", events.len(), fluid.phases.len());
    println!("ruin time: walk {:?}, fluid {:?}", walk.ruin_time, fluid.ruin_time());
    println!("minima:    walk {:?}, fluid {:?}", walk.minima, fluid.minima());
    for t in [1.0, 5.0] {
        println!("t = {t}: up clock {:.4}, level {:?}", fluid.up_clock_at(t), fluid.level_at(t));
    }

    let cfg = McConfig::new(50_000, 3);
    let a = simulate_joint_ruin(&model, u, 20.0, &cfg)?;
    let b = simulate_joint_ruin_fluid(&model, u, 20.0, &cfg)?;
    println!("P(ruin by 20): direct {:.6}, fluid {:.6}", a.mean, b.mean);
    Ok(())
}
