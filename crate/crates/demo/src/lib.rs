//! Browser bindings: each entry point runs one seeded optimization and
//! returns a JSON document for the page to plot.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use evobench::algo::{self, AlgorithmKind};
use evobench::presets::Presets;
use evobench::problem::{Problem, RunRecord, TracePoint};
use evobench::problems::chebyshev::{chebyshev_coefficients, polynomial, DEFAULT_DEGREE, DEFAULT_RESOLUTION, FLANK_EDGE};
use evobench::problems::{ChebyshevProblem, ProblemKind, PucProblem, Type0Problem};
use evobench::rng::RngStream;

/// Largest budget a single page request may ask for.
pub const MAX_DEMO_CALLS: u64 = 2_000_000;
const CURVE_SAMPLES: usize = 241;

#[derive(Debug, Serialize)]
pub struct Summary {
    pub algorithm: String,
    pub seed: u64,
    pub success: bool,
    pub calls: u64,
    pub best_value: f64,
    pub trace: Vec<TracePoint>,
}

impl Summary {
    fn new(algo: AlgorithmKind, record: &RunRecord) -> Self {
        Self {
            algorithm: algo.to_string(),
            seed: record.seed,
            success: record.success,
            calls: record.calls(),
            best_value: record.best_value,
            trace: record.trace.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ChebyshevFit {
    pub run: Summary,
    pub coefficients: Vec<f64>,
    pub target: Vec<f64>,
    /// `[x, found(x), target(x)]` rows across the fitted interval and its flanks.
    pub curve: Vec<[f64; 3]>,
}

#[derive(Debug, Serialize)]
pub struct PeakClimb {
    pub run: Summary,
    pub dim: usize,
    pub peak: f64,
    pub distance: f64,
}

#[derive(Debug, Serialize)]
pub struct CellReconstruction {
    pub run: Summary,
    pub cell: (f64, f64),
    pub fiber_radius: f64,
    pub reference: Vec<(f64, f64)>,
    pub found: Vec<(f64, f64)>,
    pub radii: Vec<f64>,
    pub k_reference: Vec<f64>,
    pub k_found: Vec<f64>,
}

fn setup(algo: &str, problem: ProblemKind, dim: usize, max_calls: u64) -> Result<(AlgorithmKind, algo::AlgorithmConfig, f64, u64), String> {
    let kind: AlgorithmKind = algo.parse().map_err(|e: evobench::Error| e.to_string())?;
    let presets = Presets::default();
    let cfg = presets.algorithm(kind, problem, dim).map_err(|e| e.to_string())?;
    let term = presets.termination(problem).map_err(|e| e.to_string())?;
    let budget = max_calls.clamp(1, MAX_DEMO_CALLS).min(term.max_calls);
    Ok((kind, cfg, term.threshold, budget))
}

fn solve(problem: &dyn Problem, cfg: &algo::AlgorithmConfig, budget: u64, threshold: f64, rng: &mut RngStream) -> Result<RunRecord, String> {
    algo::run(problem, cfg, budget, threshold, rng).map_err(|e| e.to_string())
}

fn best_genes(record: &RunRecord) -> Vec<f64> {
    record.best_chromosome.as_ref().map(|c| c.genes().to_vec()).unwrap_or_default()
}

/// Fits the degree-8 Chebyshev polynomial.
pub fn chebyshev_fit(algo: &str, seed: u64, max_calls: u64) -> Result<ChebyshevFit, String> {
    let problem = ChebyshevProblem::new(DEFAULT_DEGREE, DEFAULT_RESOLUTION).map_err(|e| e.to_string())?;
    let (kind, cfg, threshold, budget) = setup(algo, ProblemKind::Chebyshev, problem.dimension(), max_calls)?;
    let record = solve(&problem, &cfg, budget, threshold, &mut RngStream::new(seed))?;
    let coefficients = best_genes(&record);
    let target = chebyshev_coefficients(problem.degree());
    let curve = (0..CURVE_SAMPLES)
        .map(|i| {
            let x = -FLANK_EDGE + 2.0 * FLANK_EDGE * i as f64 / (CURVE_SAMPLES - 1) as f64;
            [x, polynomial(&coefficients, x), polynomial(&target, x)]
        })
        .collect();
    Ok(ChebyshevFit {
        run: Summary::new(kind, &record),
        coefficients,
        target,
        curve,
    })
}

/// Climbs one random type-0 peak of dimension `dim`.
pub fn type0_climb(algo: &str, dim: usize, seed: u64, max_calls: u64) -> Result<PeakClimb, String> {
    if !(1..=200).contains(&dim) {
        return Err(format!("dimension {dim} outside 1..=200"));
    }
    let (kind, cfg, threshold, budget) = setup(algo, ProblemKind::Type0, dim, max_calls)?;
    let mut rng = RngStream::new(seed);
    let problem = Type0Problem::random_instance(dim, &mut rng).map_err(|e| e.to_string())?;
    let record = solve(&problem, &cfg, budget, threshold, &mut rng)?;
    let best = best_genes(&record);
    let distance = best
        .iter()
        .zip(problem.x0())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(PeakClimb {
        run: Summary::new(kind, &record),
        dim,
        peak: problem.peak(),
        distance,
    })
}

/// Rebuilds the built-in ten-fiber periodic cell from its K function.
pub fn puc_reconstruct(algo: &str, seed: u64, max_calls: u64) -> Result<CellReconstruction, String> {
    let problem = PucProblem::builtin();
    let (kind, cfg, threshold, budget) = setup(algo, ProblemKind::Puc, problem.dimension(), max_calls)?;
    let record = solve(&problem, &cfg, budget, threshold, &mut RngStream::new(seed))?;
    let genes = best_genes(&record);
    let found = genes.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    let k_found = if genes.is_empty() { Vec::new() } else { problem.k_of(&genes) };
    Ok(CellReconstruction {
        run: Summary::new(kind, &record),
        cell: problem.cell(),
        fiber_radius: problem.fiber_radius(),
        reference: problem.reference().to_vec(),
        found,
        radii: problem.radii().to_vec(),
        k_reference: problem.k0().to_vec(),
        k_found,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = chebyshevFit)]
pub fn chebyshev_fit_js(algo: &str, seed: u32, max_calls: u32) -> Result<String, JsValue> {
    to_js(chebyshev_fit(algo, seed.into(), max_calls.into()))
}

#[wasm_bindgen(js_name = type0Climb)]
pub fn type0_climb_js(algo: &str, dim: u32, seed: u32, max_calls: u32) -> Result<String, JsValue> {
    to_js(type0_climb(algo, dim as usize, seed.into(), max_calls.into()))
}

#[wasm_bindgen(js_name = pucReconstruct)]
pub fn puc_reconstruct_js(algo: &str, seed: u32, max_calls: u32) -> Result<String, JsValue> {
    to_js(puc_reconstruct(algo, seed.into(), max_calls.into()))
}
