//! Simplified atavistic differential evolution.
//!
//! Every generation the population doubles: some members are mutated
//! towards a random point or locally perturbed (each with probability
//! `radioactivity`), the remaining new slots are filled by the simplified
//! differential operator `CH_p + CR (CH_q - CH_r)`. A modified tournament
//! then removes the loser of random pairs until the original size is
//! restored; the best member never loses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Bounds, Chromosome, Evaluator, Halt, Population};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SadeConfig {
    pub pop_size: usize,
    pub cr: f64,
    pub radioactivity: f64,
    pub mr: f64,
    /// Local mutation half-width as a fraction of each variable's box width.
    pub local_range: f64,
}

impl SadeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 3 {
            return Err(Error::PopulationTooSmall {
                needed: 3,
                got: self.pop_size,
            });
        }
        if !(0.0..=1.0).contains(&self.radioactivity) {
            return Err(Error::ConfigInvalid(format!(
                "radioactivity = {} outside [0, 1]",
                self.radioactivity
            )));
        }
        if !(self.cr.is_finite() && self.mr.is_finite() && self.local_range >= 0.0) {
            return Err(Error::ConfigInvalid("SADE CR, MR, local range invalid".into()));
        }
        Ok(())
    }
}

/// `CH_p + CR (CH_q - CH_r)`, clamped.
pub fn sade_differential(p: &[f64], q: &[f64], r: &[f64], cr: f64, bounds: &Bounds) -> Chromosome {
    let mut child: Chromosome = p
        .iter()
        .zip(q.iter().zip(r))
        .map(|(a, (b, c))| a + cr * (b - c))
        .collect::<Vec<_>>()
        .into();
    bounds.clamp_in_place(&mut child);
    child
}

/// Convex step `CH + MR (RP - CH)` towards the given random point.
pub fn mutate_towards(c: &[f64], rp: &[f64], mr: f64) -> Chromosome {
    c.iter()
        .zip(rp)
        .map(|(x, t)| x + mr * (t - x))
        .collect::<Vec<_>>()
        .into()
}

/// Mutation towards a uniformly drawn point of the box.
pub fn sade_mutate(c: &[f64], mr: f64, bounds: &Bounds, rng: &mut RngStream) -> Chromosome {
    let rp = bounds.sample(rng);
    let mut child = mutate_towards(c, &rp, mr);
    bounds.clamp_in_place(&mut child);
    child
}

/// Adds `u(-range_j, range_j)` to every coordinate.
pub fn sade_local_mutate(c: &[f64], range: &[f64], bounds: &Bounds, rng: &mut RngStream) -> Chromosome {
    let mut child: Chromosome = c
        .iter()
        .zip(range)
        .map(|(x, r)| x + rng.uniform(-r, *r))
        .collect::<Vec<_>>()
        .into();
    bounds.clamp_in_place(&mut child);
    child
}

/// Shrinks `pool` to `target` members by repeated random pair tournaments.
///
/// Each tournament draws two distinct survivors uniformly and drops the
/// worse one, so a member may fight several times or never. On equal
/// fitness the member holding the global best slot survives, so the best
/// member is never removed.
pub fn sade_select(pool: Population, target: usize, rng: &mut RngStream) -> Population {
    let best = pool.best_index();
    let mut alive: Vec<usize> = (0..pool.len()).collect();
    while alive.len() > target.max(1) {
        let pair = rng.distinct_indices(alive.len(), 2, &[]);
        let (a, b) = (alive[pair[0]], alive[pair[1]]);
        let a_wins = pool.fitness[a] < pool.fitness[b] || (pool.fitness[a] == pool.fitness[b] && a == best);
        alive.swap_remove(if a_wins { pair[1] } else { pair[0] });
    }
    alive.sort_unstable();
    let mut keep = vec![false; pool.len()];
    for i in alive {
        keep[i] = true;
    }
    let mut out = Population::default();
    for (i, (c, f)) in pool.members.into_iter().zip(pool.fitness).enumerate() {
        if keep[i] {
            out.push(c, f);
        }
    }
    out
}

/// Offspring of one generation, before evaluation.
pub fn sade_offspring(
    pop: &Population,
    cfg: &SadeConfig,
    local_range: &[f64],
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Vec<Chromosome> {
    let size = pop.len();
    let mut fresh = Vec::with_capacity(size);
    for c in &pop.members {
        if fresh.len() < size && rng.bernoulli(cfg.radioactivity) {
            fresh.push(sade_mutate(c, cfg.mr, bounds, rng));
        }
        if fresh.len() < size && rng.bernoulli(cfg.radioactivity) {
            fresh.push(sade_local_mutate(c, local_range, bounds, rng));
        }
    }
    while fresh.len() < size {
        let pqr = rng.distinct_indices(size, 3, &[]);
        fresh.push(sade_differential(
            &pop.members[pqr[0]],
            &pop.members[pqr[1]],
            &pop.members[pqr[2]],
            cfg.cr,
            bounds,
        ));
    }
    fresh
}

/// Doubles the population, evaluates the new half and selects back down.
pub fn sade_generation(
    pop: &mut Population,
    cfg: &SadeConfig,
    local_range: &[f64],
    ev: &mut Evaluator<'_>,
    rng: &mut RngStream,
) -> std::result::Result<(), Halt> {
    let size = pop.len();
    let fresh = sade_offspring(pop, cfg, local_range, ev.bounds(), rng);
    let mut pool = std::mem::take(pop);
    for c in fresh {
        let f = match ev.evaluate(&c) {
            Ok(f) => f,
            Err(h) => {
                *pop = pool;
                pop.members.truncate(size);
                pop.fitness.truncate(size);
                return Err(h);
            }
        };
        pool.push(c, f);
    }
    *pop = sade_select(pool, size, rng);
    Ok(())
}

/// Per-variable local mutation half-widths.
pub fn local_ranges(cfg: &SadeConfig, bounds: &Bounds) -> Vec<f64> {
    (0..bounds.dim()).map(|j| cfg.local_range * bounds.width(j)).collect()
}

pub fn optimize(cfg: &SadeConfig, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> Result<()> {
    cfg.validate()?;
    let range = local_ranges(cfg, ev.bounds());
    let Ok(mut pop) = Population::random(cfg.pop_size, ev, rng) else {
        return Ok(());
    };
    while sade_generation(&mut pop, cfg, &range, ev, rng).is_ok() {}
    Ok(())
}
