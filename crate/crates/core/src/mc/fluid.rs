//! Fluid embedding: each claim becomes a linear descent in direction
//! `(-delta1, -delta2)` lasting as long as the claim is large, so the reserve
//! pair moves continuously while keeping the same extrema.

use serde::Serialize;

use super::paths::{EventKind, PathEvent, Reserves};
use crate::model::RiskModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluidPath {
    /// `S_0 = 0 < S_1 < ...`; the last entry is the end of the path.
    pub switch_times: Vec<f64>,
    /// Phase on `[S_n, S_{n+1})`: `+1` premium inflow, `-1` claim descent.
    pub phases: Vec<i8>,
    /// Up-clock `I(S_n)`.
    pub up_clock: Vec<f64>,
    /// Embedded reserves at `S_n`.
    pub levels: Vec<[f64; 2]>,
    delta: [f64; 2],
    c: [f64; 2],
    u: [f64; 2],
}

/// Embeds a recorded path starting from raw reserves `u`.
pub fn fluid_embed(model: &RiskModel, u: [f64; 2], events: &[PathEvent]) -> FluidPath {
    let mut res = Reserves::new(model, u);
    let mut path = FluidPath {
        switch_times: vec![0.0],
        phases: Vec::new(),
        up_clock: vec![0.0],
        levels: vec![u],
        delta: model.delta,
        c: model.c,
        u,
    };
    let (mut s, mut clock) = (0.0, 0.0);
    for e in events {
        s += e.gap;
        clock += e.gap;
        res.rise(e.gap);
        path.push(1, s, clock, res.level);
        if e.kind == EventKind::Horizon {
            break;
        }
        s += e.claim_size;
        res.pay(e.claim_size);
        path.push(-1, s, clock, res.level);
    }
    path
}

impl FluidPath {
    fn push(&mut self, phase: i8, time: f64, clock: f64, level: [f64; 2]) {
        self.phases.push(phase);
        self.switch_times.push(time);
        self.up_clock.push(clock);
        self.levels.push(level);
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.phases.len();
        self.switch_times.partition_point(|&s| s <= t).saturating_sub(1).min(n.saturating_sub(1))
    }

    /// `I(t)`: time spent in the up phase before `t`.
    pub fn up_clock_at(&self, t: f64) -> f64 {
        if self.phases.is_empty() {
            return 0.0;
        }
        let k = self.segment(t);
        if self.phases[k] > 0 {
            self.up_clock[k] + (t - self.switch_times[k])
        } else {
            self.up_clock[k]
        }
    }

    /// `U~_i(t) = c_i I(t) - delta_i (t - I(t)) + u_i`.
    pub fn level_at(&self, t: f64) -> [f64; 2] {
        let i = self.up_clock_at(t);
        [0, 1].map(|j| self.c[j] * i - self.delta[j] * (t - i) + self.u[j])
    }

    /// First time an embedded reserve goes below 0. Always inside a descent.
    pub fn ruin_time(&self) -> Option<f64> {
        (0..self.phases.len()).find_map(|k| {
            let end = self.levels[k + 1];
            if self.phases[k] < 0 && (end[0] < 0.0 || end[1] < 0.0) {
                let start = self.levels[k];
                let hit = [0, 1]
                    .into_iter()
                    .filter(|&j| end[j] < 0.0)
                    .map(|j| start[j] / self.delta[j])
                    .fold(f64::INFINITY, f64::min);
                Some(self.switch_times[k] + hit.max(0.0))
            } else {
                None
            }
        })
    }

    /// Running minima of both embedded reserves over the whole path.
    pub fn minima(&self) -> [f64; 2] {
        self.levels
            .iter()
            .fold([f64::INFINITY; 2], |m, l| [m[0].min(l[0]), m[1].min(l[1])])
    }

    /// Phases strictly alternate and the up-clock is nondecreasing and 1-Lipschitz.
    pub fn is_well_formed(&self) -> bool {
        let alternates = self.phases.windows(2).all(|w| w[0] == -w[1]) && self.phases.first().is_none_or(|&p| p == 1);
        let clock_ok = (0..self.phases.len()).all(|k| {
            let di = self.up_clock[k + 1] - self.up_clock[k];
            let ds = self.switch_times[k + 1] - self.switch_times[k];
            di >= 0.0 && (if self.phases[k] < 0 { di == 0.0 } else { (di - ds).abs() <= 1e-9 * ds.max(1.0) })
        });
        alternates && clock_ok
    }
}
