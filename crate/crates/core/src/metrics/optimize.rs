use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::random::{rng_from_seed, sub_seed};

/// Settings shared by the quantum-degree and entanglement-capability searches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Number of uniformly seeded simplex starts.
    pub restarts: usize,
    /// Spread of objective values across the simplex that counts as converged.
    pub tolerance: f64,
    /// Iteration cap for a single simplex run.
    pub max_iterations: usize,
    /// Points per angle in the coarse cross-check grid.
    pub grid_points: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, tolerance: 1e-8, max_iterations: 5000, grid_points: 9, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Derivative-free simplex minimization from `x0` with an initial edge of `step`.
///
/// A converged run is restarted once from its best vertex with a smaller
/// simplex so a collapsed simplex cannot stall on a slope.
pub fn nelder_mead(f: &impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, tolerance: f64, max_iterations: usize) -> Minimum {
    let first = simplex_run(f, x0, step, tolerance, max_iterations);
    if !first.converged {
        return first;
    }
    let second = simplex_run(f, &first.x, step * 0.1, tolerance, max_iterations);
    if second.value <= first.value {
        second
    } else {
        first
    }
}

fn simplex_run(f: &impl Fn(&[f64]) -> f64, x0: &[f64], step: f64, tolerance: f64, max_iterations: usize) -> Minimum {
    let n = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for k in 0..n {
        let mut p = x0.to_vec();
        p[k] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let along = |from: &[f64], to: &[f64], t: f64| -> Vec<f64> { from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect() };

    for _ in 0..max_iterations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&k| pts[k].clone()).collect();
        vals = order.iter().map(|&k| vals[k]).collect();

        if vals[n] - vals[0] <= tolerance {
            return Minimum { x: pts.swap_remove(0), value: vals[0], converged: true };
        }

        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let reflected = along(&centroid, &pts[n], -REFLECT);
        let fr = f(&reflected);
        if fr < vals[0] {
            let expanded = along(&centroid, &pts[n], -EXPAND);
            let fe = f(&expanded);
            if fe < fr {
                pts[n] = expanded;
                vals[n] = fe;
            } else {
                pts[n] = reflected;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = reflected;
            vals[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < vals[n] {
            let c = along(&centroid, &reflected, CONTRACT);
            let v = f(&c);
            (c, v)
        } else {
            let c = along(&centroid, &pts[n], CONTRACT);
            let v = f(&c);
            (c, v)
        };
        if fc < vals[n].min(fr) {
            pts[n] = contracted;
            vals[n] = fc;
            continue;
        }
        let best = pts[0].clone();
        for k in 1..=n {
            pts[k] = along(&best, &pts[k], SHRINK);
            vals[k] = f(&pts[k]);
        }
    }
    let k = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    Minimum { x: pts.swap_remove(k), value: vals[k], converged: false }
}

/// Runs `config.restarts` simplex searches from starts drawn uniformly in
/// `[0, upper_k)` per coordinate and returns the best. Start `k` depends only
/// on `(config.seed, k)`, so extra restarts can only improve the result.
pub fn multistart_minimize(f: &(impl Fn(&[f64]) -> f64 + Sync), upper: &[f64], config: &OptimizerConfig) -> Minimum {
    let runs: Vec<Minimum> = (0..config.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_from_seed(sub_seed(config.seed, k as u64));
            let x0: Vec<f64> = upper.iter().map(|&u| rng.random::<f64>() * u).collect();
            nelder_mead(f, &x0, 0.5, config.tolerance, config.max_iterations)
        })
        .collect();
    best_of(runs)
}

/// Lowest-valued entry; ties keep the earliest.
pub fn best_of(runs: impl IntoIterator<Item = Minimum>) -> Minimum {
    runs.into_iter()
        .reduce(|best, m| if m.value < best.value { m } else { best })
        .expect("at least one run")
}

/// Evenly spaced grid points on `[0, upper]`, endpoint included when `closed`.
pub fn grid_axis(upper: f64, points: usize, closed: bool) -> Vec<f64> {
    let points = points.max(1);
    let denom = if closed { (points - 1).max(1) } else { points } as f64;
    (0..points).map(|k| upper * k as f64 / denom).collect()
}
