//! Integer augmented simulated annealing.
//!
//! Variables are mapped to integers `y = [x / p]` with a per-variable
//! precision `p`. Each wave builds `NewSize` children from the old
//! population, by differential crossover with probability `CrossoverProb`
//! and by Gaussian integer mutation otherwise, and lets every child
//! challenge one randomly chosen old member under a logistic acceptance
//! rule. The temperature decays geometrically so that `T_min` is reached
//! after `TminAtCallsRate * MaxCalls` evaluations; below it, the
//! temperature jumps back to `T_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Bounds, Encoding, Evaluator, Halt};
use crate::rng::RngStream;

/// Relative slack absorbing representation error in `x / p`.
const TRUNCATION_SLACK: f64 = 1e-9;

/// Real <-> integer mapping with per-variable precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegerCodec {
    precision: Vec<f64>,
    lower: Vec<i64>,
    upper: Vec<i64>,
}

/// Integer part of `x / p` (truncation toward zero). Quotients within a
/// relative `1e-9` of an integer are taken as that integer, so grid values
/// such as `0.15 / 0.025` encode exactly.
pub fn encode_value(x: f64, p: f64) -> i64 {
    let q = x / p;
    let nearest = q.round();
    if (q - nearest).abs() <= TRUNCATION_SLACK * nearest.abs().max(1.0) {
        nearest as i64
    } else {
        q.trunc() as i64
    }
}

pub fn decode_value(y: i64, p: f64) -> f64 {
    y as f64 * p
}

impl IntegerCodec {
    pub fn new(bounds: &Bounds, precision: Vec<f64>) -> Result<Self> {
        if precision.len() != bounds.dim() {
            return Err(Error::DimensionMismatch {
                expected: bounds.dim(),
                got: precision.len(),
            });
        }
        if precision.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
            return Err(Error::ConfigInvalid("precision must be positive".into()));
        }
        let mut lower = Vec::with_capacity(precision.len());
        let mut upper = Vec::with_capacity(precision.len());
        for (j, &p) in precision.iter().enumerate() {
            let (l, u) = (bounds.lower()[j], bounds.upper()[j]);
            let mut lo = encode_value(l, p);
            if decode_value(lo, p) < l - TRUNCATION_SLACK * p {
                lo += 1;
            }
            let mut hi = encode_value(u, p);
            if decode_value(hi, p) > u + TRUNCATION_SLACK * p {
                hi -= 1;
            }
            if lo > hi {
                return Err(Error::ConfigInvalid(format!("precision {p} too coarse for variable {j}")));
            }
            lower.push(lo);
            upper.push(hi);
        }
        Ok(Self {
            precision,
            lower,
            upper,
        })
    }

    pub fn precision(&self) -> &[f64] {
        &self.precision
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn encode(&self, x: &[f64]) -> Vec<i64> {
        x.iter()
            .zip(&self.precision)
            .map(|(x, p)| encode_value(*x, *p))
            .collect()
    }

    pub fn decode(&self, y: &[i64]) -> Vec<f64> {
        y.iter()
            .zip(&self.precision)
            .map(|(y, p)| decode_value(*y, *p))
            .collect()
    }

    pub fn clamp_in_place(&self, y: &mut [i64]) {
        for ((v, lo), hi) in y.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = (*v).clamp(*lo, *hi);
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Vec<i64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| rng.int_inclusive(*lo, *hi))
            .collect()
    }
}

/// Precision source of the codec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum IasaPrecision {
    Uniform(f64),
    /// The problem's own grid steps.
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IasaConfig {
    pub old_size: usize,
    pub new_size: usize,
    pub t_max: f64,
    pub t_min: f64,
    pub success_max: usize,
    pub counter_max: usize,
    pub tmin_at_calls_rate: f64,
    pub max_calls: u64,
    pub crossover_prob: f64,
    pub cr: f64,
    pub precision: IasaPrecision,
}

impl IasaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.old_size < 3 {
            return Err(Error::PopulationTooSmall {
                needed: 3,
                got: self.old_size,
            });
        }
        if self.new_size == 0 {
            return Err(Error::ConfigInvalid("NewSize must be positive".into()));
        }
        if !(self.t_min > 0.0 && self.t_min <= self.t_max) {
            return Err(Error::ConfigInvalid("need 0 < T_min <= T_max".into()));
        }
        if !(self.tmin_at_calls_rate > 0.0 && self.tmin_at_calls_rate <= 1.0) {
            return Err(Error::ConfigInvalid("TminAtCallsRate outside (0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return Err(Error::ConfigInvalid("CrossoverProb outside [0, 1]".into()));
        }
        if self.max_calls == 0 || self.counter_max == 0 || self.success_max == 0 {
            return Err(Error::ConfigInvalid("MaxCalls, CounterMax, SuccessMax must be positive".into()));
        }
        if !(self.cr >= 0.0 && self.cr.is_finite()) {
            return Err(Error::ConfigInvalid("IASA CR must be non-negative".into()));
        }
        Ok(())
    }

    /// Per-stage cooling factor `(T_min / T_max)^(CounterMax / (TminAtCallsRate MaxCalls))`.
    pub fn cooling_factor(&self) -> f64 {
        let exponent = self.counter_max as f64 / (self.tmin_at_calls_rate * self.max_calls as f64);
        (self.t_min / self.t_max).powf(exponent)
    }
}

/// One cooling step; falls back to `T_max` once the result is at or below `T_min`.
pub fn iasa_cool(t: f64, cfg: &IasaConfig) -> f64 {
    let next = t * cfg.cooling_factor();
    if next <= cfg.t_min && cfg.t_min < cfg.t_max {
        cfg.t_max
    } else {
        next
    }
}

/// Logistic acceptance oriented for minimization: accept iff
/// `u(0, 1) <= 1 / (1 + exp((new - old) / T))`. Equal fitness gives exactly 1/2.
pub fn acceptance_probability(old: f64, new: f64, t: f64) -> f64 {
    1.0 / (1.0 + ((new - old) / t).exp())
}

pub fn iasa_accept(old: f64, new: f64, t: f64, rng: &mut RngStream) -> bool {
    rng.unit() <= acceptance_probability(old, new, t)
}

/// `CH_p + u (CH_q - CH_r)` with the given scalar `u`, rounded and clamped.
pub fn differential_crossover_with(p: &[i64], q: &[i64], r: &[i64], u: f64, codec: &IntegerCodec) -> Vec<i64> {
    let mut child: Vec<i64> = p
        .iter()
        .zip(q.iter().zip(r))
        .map(|(a, (b, c))| (*a as f64 + u * (b - c) as f64).round_ties_even() as i64)
        .collect();
    codec.clamp_in_place(&mut child);
    child
}

/// Differential crossover with `u` drawn once from `u(0, CR)`.
pub fn iasa_differential_crossover(
    p: &[i64],
    q: &[i64],
    r: &[i64],
    cr: f64,
    codec: &IntegerCodec,
    rng: &mut RngStream,
) -> Vec<i64> {
    let u = rng.uniform(0.0, cr);
    differential_crossover_with(p, q, r, u, codec)
}

/// Adds an integer-rounded `N(0, |c_j - partner_j| / 2 + 1)` to every coordinate.
pub fn iasa_mutate(c: &[i64], partner: &[i64], codec: &IntegerCodec, rng: &mut RngStream) -> Vec<i64> {
    let mut child: Vec<i64> = c
        .iter()
        .zip(partner)
        .map(|(a, b)| {
            let sigma = (a - b).abs() as f64 / 2.0 + 1.0;
            a + (sigma * rng.normal()).round_ties_even() as i64
        })
        .collect();
    codec.clamp_in_place(&mut child);
    child
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IasaStats {
    pub crossovers: u64,
    pub mutations: u64,
    pub accepted: u64,
    pub reannealings: u64,
}

fn codec_for(cfg: &IasaConfig, ev: &Evaluator<'_>) -> Result<IntegerCodec> {
    let precision = match &cfg.precision {
        IasaPrecision::Uniform(p) => vec![*p; ev.dimension()],
        IasaPrecision::Grid => match ev.problem().encoding() {
            Encoding::Grid { steps } => steps,
            Encoding::Continuous => {
                return Err(Error::ConfigInvalid("grid precision on a continuous problem".into()))
            }
        },
    };
    IntegerCodec::new(ev.bounds(), precision)
}

struct Pool {
    members: Vec<Vec<i64>>,
    fitness: Vec<f64>,
}

fn wave(
    pool: &mut Pool,
    cfg: &IasaConfig,
    codec: &IntegerCodec,
    t: f64,
    ev: &mut Evaluator<'_>,
    rng: &mut RngStream,
    stats: &mut IasaStats,
) -> std::result::Result<(usize, usize), Halt> {
    let n = pool.members.len();
    let children: Vec<Vec<i64>> = (0..cfg.new_size)
        .map(|_| {
            if rng.unit() < cfg.crossover_prob {
                stats.crossovers += 1;
                let pqr = rng.distinct_indices(n, 3, &[]);
                iasa_differential_crossover(
                    &pool.members[pqr[0]],
                    &pool.members[pqr[1]],
                    &pool.members[pqr[2]],
                    cfg.cr,
                    codec,
                    rng,
                )
            } else {
                stats.mutations += 1;
                let jp = rng.distinct_indices(n, 2, &[]);
                iasa_mutate(&pool.members[jp[0]], &pool.members[jp[1]], codec, rng)
            }
        })
        .collect();
    // parents without replacement, reshuffled whenever the old population runs out
    let mut order: Vec<usize> = Vec::new();
    let (mut evaluated, mut accepted) = (0, 0);
    for child in children {
        if order.is_empty() {
            order = (0..n).collect();
            rng.shuffle(&mut order);
        }
        let parent = order.pop().expect("refilled above");
        let f = ev.evaluate(&codec.decode(&child))?;
        evaluated += 1;
        if iasa_accept(pool.fitness[parent], f, t, rng) {
            pool.members[parent] = child;
            pool.fitness[parent] = f;
            accepted += 1;
            stats.accepted += 1;
        }
    }
    Ok((evaluated, accepted))
}

pub fn optimize_with_stats(cfg: &IasaConfig, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> Result<IasaStats> {
    cfg.validate()?;
    let codec = codec_for(cfg, ev)?;
    let mut stats = IasaStats::default();
    let mut pool = Pool {
        members: Vec::with_capacity(cfg.old_size),
        fitness: Vec::with_capacity(cfg.old_size),
    };
    for _ in 0..cfg.old_size {
        let y = codec.sample(rng);
        let Ok(f) = ev.evaluate(&codec.decode(&y)) else {
            return Ok(stats);
        };
        pool.members.push(y);
        pool.fitness.push(f);
    }
    let mut t = cfg.t_max;
    let (mut counter, mut successes) = (0usize, 0usize);
    loop {
        match wave(&mut pool, cfg, &codec, t, ev, rng, &mut stats) {
            Ok((evaluated, accepted)) => {
                counter += evaluated;
                successes += accepted;
            }
            Err(_) => return Ok(stats),
        }
        if successes >= cfg.success_max || counter >= cfg.counter_max {
            let next = iasa_cool(t, cfg);
            if next > t {
                stats.reannealings += 1;
            }
            t = next;
            counter = 0;
            successes = 0;
        }
    }
}

pub fn optimize(cfg: &IasaConfig, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> Result<()> {
    optimize_with_stats(cfg, ev, rng).map(|_| ())
}
