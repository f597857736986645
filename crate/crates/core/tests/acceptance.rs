//! Acceptance criteria 1-8, one PASS/FAIL line each.
//!
//! Criteria 6-8 are exact or tightly bounded checks and fail the target.
//! Criteria 1-5 compare seeded campaigns with published call counts; they
//! are reported, and fail the target only with `EVOBENCH_ACCEPTANCE_STRICT=1`.
//!
//! Campaign sizes: `EVOBENCH_ACCEPTANCE_RUNS` (default 20; the full protocol
//! is 100) and `EVOBENCH_ACCEPTANCE_SCALE_RUNS` for the d = 100 scaling
//! campaign (default 2).

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicU64, Ordering};

use evobench::algo::de::{self, DeConfig};
use evobench::algo::iasa::{self, IasaConfig, IasaPrecision, IntegerCodec};
use evobench::algo::rasa::{self, OperatorContext};
use evobench::algo::sade::{self, SadeConfig};
use evobench::algo::AlgorithmKind;
use evobench::harness::{self, BenchmarkReport, BenchmarkSpec};
use evobench::presets::Presets;
use evobench::problem::{self, Bounds, Chromosome, EvaluationBudget, Evaluator, Population, Problem};
use evobench::problems::beam::{self, BeamProblem};
use evobench::problems::chebyshev::chebyshev_coefficients;
use evobench::problems::{ripley_k, ChebyshevProblem, ProblemKind, PucProblem, Type0Problem};
use evobench::rng::RngStream;
use evobench::Error;

const BASE_SEED: u64 = 2002;

fn env_usize(name: &str, default: usize) -> usize {
    std::env::var(name)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(default)
}

struct Verdict {
    id: usize,
    pass: bool,
    hard: bool,
    detail: String,
}

fn campaign(problem: ProblemKind, algo: AlgorithmKind, dim: usize, runs: usize) -> BenchmarkReport {
    let spec = BenchmarkSpec::from_presets(&Presets::default(), problem, algo, dim, runs, BASE_SEED)
        .expect("default presets resolve");
    harness::run_benchmark(&spec, harness::default_workers()).expect("campaign runs")
}

/// Smallest success count meeting `percent` of `runs`.
fn needed(percent: usize, runs: usize) -> usize {
    (percent * runs).div_ceil(100)
}

fn within_factor(avg: Option<f64>, reference: f64, factor: f64) -> bool {
    avg.is_some_and(|a| a <= reference * factor && a >= reference / factor)
}

fn line(r: &BenchmarkReport) -> String {
    format!("{} {}/{} avg {}", r.algorithm, r.successes, r.runs, r.avg_calls_text())
}

fn table_campaigns(problem: ProblemKind, dim: usize, runs: usize) -> Vec<BenchmarkReport> {
    AlgorithmKind::ALL
        .iter()
        .map(|&a| campaign(problem, a, dim, runs))
        .collect()
}

fn published(table: &[(AlgorithmKind, f64)], algo: AlgorithmKind) -> f64 {
    table.iter().find(|(a, _)| *a == algo).expect("listed").1
}

fn criterion_1(runs: usize) -> Verdict {
    let table = [
        (AlgorithmKind::Iasa, 10342.0),
        (AlgorithmKind::Rasa, 47151.0),
        (AlgorithmKind::De, 25910.0),
        (AlgorithmKind::Sade, 24016.0),
    ];
    let reports = table_campaigns(ProblemKind::Chebyshev, 9, runs);
    let mut pass = true;
    for r in &reports {
        if matches!(r.algorithm, AlgorithmKind::De | AlgorithmKind::Sade) && r.successes < needed(95, runs) {
            pass = false;
        }
        if !within_factor(r.avg_calls, published(&table, r.algorithm), 3.0) {
            pass = false;
        }
    }
    Verdict {
        id: 1,
        pass,
        hard: false,
        detail: format!("chebyshev: {}", reports.iter().map(line).collect::<Vec<_>>().join("; ")),
    }
}

fn criterion_2(runs: usize) -> Verdict {
    let reports = table_campaigns(ProblemKind::Type0, 10, runs);
    let mut pass = reports.iter().all(|r| r.successes == runs);
    for r in &reports {
        let reference = match r.algorithm {
            AlgorithmKind::Rasa => 13113.0,
            AlgorithmKind::Iasa => 246120.0,
            _ => continue,
        };
        pass &= within_factor(r.avg_calls, reference, 3.0);
    }
    Verdict {
        id: 2,
        pass,
        hard: false,
        detail: format!("type0 d=10: {}", reports.iter().map(line).collect::<Vec<_>>().join("; ")),
    }
}

fn criterion_3(runs: usize, scale_runs: usize) -> Verdict {
    let d10 = campaign(ProblemKind::Type0, AlgorithmKind::Sade, 10, runs);
    let d100 = campaign(ProblemKind::Type0, AlgorithmKind::Sade, 100, scale_runs);
    let ratio = d10.avg_calls.zip(d100.avg_calls).map(|(a, b)| b / a);
    let de50 = campaign(ProblemKind::Type0, AlgorithmKind::De, 50, 1);
    let row = de50.csv_row();
    let de_reported = if de50.successes == 0 {
        row.contains(",N/A,")
    } else {
        !row.contains("N/A")
    };
    let pass = ratio.is_some_and(|q| (5.0..=30.0).contains(&q)) && de_reported;
    Verdict {
        id: 3,
        pass,
        hard: false,
        detail: format!(
            "sade d=10 {}/{} avg {}, d=100 {}/{} avg {}, ratio {}; de d=50 row `{row}`",
            d10.successes,
            d10.runs,
            d10.avg_calls_text(),
            d100.successes,
            d100.runs,
            d100.avg_calls_text(),
            ratio.map_or("N/A".to_string(), |q| format!("{q:.1}")),
        ),
    }
}

fn criterion_4(runs: usize) -> Verdict {
    let reports = table_campaigns(ProblemKind::Puc, 20, runs);
    let mut pass = reports.iter().all(|r| r.successes >= needed(90, runs));
    for r in &reports {
        let reference = match r.algorithm {
            AlgorithmKind::Rasa => 12919.0,
            AlgorithmKind::Iasa => 13641.0,
            _ => continue,
        };
        pass &= within_factor(r.avg_calls, reference, 5.0);
    }
    Verdict {
        id: 4,
        pass,
        hard: false,
        detail: format!("puc: {}", reports.iter().map(line).collect::<Vec<_>>().join("; ")),
    }
}

fn criterion_5(runs: usize) -> Verdict {
    let reports = table_campaigns(ProblemKind::Beam, 18, runs);
    let bests: Vec<f64> = reports
        .iter()
        .map(|r| r.records.iter().map(|x| x.best_value).fold(f64::INFINITY, f64::min))
        .collect();
    let lo = bests.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = bests.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi / lo - 1.0;
    let pass = reports.iter().all(|r| r.successes >= needed(90, runs)) && spread <= 0.01;
    Verdict {
        id: 5,
        pass,
        hard: false,
        detail: format!(
            "beam: {}; best costs {:?}, spread {:.2}%",
            reports.iter().map(line).collect::<Vec<_>>().join("; "),
            bests.iter().map(|b| (b * 100.0).round() / 100.0).collect::<Vec<_>>(),
            100.0 * spread
        ),
    }
}

/// Pair counts by explicit enumeration of the nine neighbouring images.
fn brute_force_k(points: &[(f64, f64)], h1: f64, h2: f64, radii: &[f64]) -> Vec<f64> {
    let n = points.len();
    radii
        .iter()
        .map(|&r| {
            let mut count = 0u64;
            for (a, pa) in points.iter().enumerate() {
                for (b, pb) in points.iter().enumerate() {
                    if a == b {
                        continue;
                    }
                    let mut nearest = f64::INFINITY;
                    for sx in [-1.0, 0.0, 1.0] {
                        for sy in [-1.0, 0.0, 1.0] {
                            let dx = pb.0 + sx * h1 - pa.0;
                            let dy = pb.1 + sy * h2 - pa.1;
                            nearest = nearest.min(dx * dx + dy * dy);
                        }
                    }
                    if nearest <= r * r {
                        count += 1;
                    }
                }
            }
            h1 * h2 / (n * n) as f64 * count as f64
        })
        .collect()
}

fn criterion_6() -> Verdict {
    let mut rng = RngStream::new(6);
    let mut notes = Vec::new();

    let (h1, h2) = (25.8, 25.8);
    let radii: Vec<f64> = (1..=10).map(|i| 1.29 * i as f64).collect();
    let ripley_ok = (0..50).all(|_| {
        let pts: Vec<(f64, f64)> = (0..10).map(|_| (rng.uniform(0.0, h1), rng.uniform(0.0, h2))).collect();
        ripley_k(&pts, (h1, h2), &radii).unwrap() == brute_force_k(&pts, h1, h2, &radii)
    });
    notes.push(format!("ripley_k exact {ripley_ok}"));

    let (q, size, draws) = (0.04f64, 32, 100_000);
    let q_norm = q / (1.0 - (1.0 - q).powi(size as i32));
    let mut hits = vec![0usize; size];
    for _ in 0..draws {
        hits[rasa::sample_rank(q, size, &mut rng)] += 1;
    }
    let rank_dev = hits
        .iter()
        .enumerate()
        .map(|(i, &h)| (h as f64 / draws as f64 - q_norm * (1.0 - q).powi(i as i32)).abs())
        .fold(0.0, f64::max);
    notes.push(format!("ranking max dev {rank_dev:.4}"));

    let trials = 100_000;
    let metropolis_rate = (0..trials)
        .filter(|_| rasa::metropolis_replace(1.0, 1.5, 0.7, &mut rng))
        .count() as f64
        / trials as f64;
    let metropolis_dev = (metropolis_rate - (-0.5f64 / 0.7).exp()).abs();
    let logistic_rate = (0..trials)
        .filter(|_| iasa::iasa_accept(2.0, 1.8, 0.2, &mut rng))
        .count() as f64
        / trials as f64;
    let logistic_dev = (logistic_rate - 1.0 / (1.0 + (-1.0f64).exp())).abs();
    notes.push(format!("metropolis dev {metropolis_dev:.4}, logistic dev {logistic_dev:.4}"));

    let bounds = Bounds::new(vec![-512.0, 0.0, 0.15, -1.0], vec![512.0, 25.8, 0.85, 1.0]).unwrap();
    let precision = vec![1e-3, 1e-4, 0.025, 1e-6];
    let codec = IntegerCodec::new(&bounds, precision.clone()).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x = bounds.sample(&mut rng);
        let back = codec.decode(&codec.encode(&x));
        for ((a, b), p) in x.iter().zip(&back).zip(&precision) {
            worst = worst.max((a - b).abs() / p);
        }
    }
    notes.push(format!("codec worst error {worst:.3} p"));

    let pass = ripley_ok && rank_dev <= 0.003 && metropolis_dev <= 0.01 && logistic_dev <= 0.01 && worst < 1.0;
    Verdict {
        id: 6,
        pass,
        hard: true,
        detail: notes.join("; "),
    }
}

/// Constant objective on a box; counts its calls.
struct Flat {
    value: f64,
    bounds: Bounds,
    calls: AtomicU64,
}

impl Problem for Flat {
    fn name(&self) -> &str {
        "flat"
    }
    fn dimension(&self) -> usize {
        self.bounds.dim()
    }
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }
    fn objective(&self, _: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.value
    }
    fn default_threshold(&self) -> f64 {
        f64::NEG_INFINITY
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_evobench"))
        .args(args)
        .env_remove(harness::WORKERS_ENV)
        .output()
        .expect("binary runs")
}

fn trivial_examples() -> Vec<(&'static str, bool)> {
    let mut rng = RngStream::new(7);
    let mut checks: Vec<(&'static str, bool)> = Vec::new();
    let b2 = Bounds::uniform(2, -512.0, 512.0).unwrap();
    let cheb = ChebyshevProblem::default();

    // budget accounting
    let mut budget = EvaluationBudget::with_used(10, 9);
    let x9 = vec![0.0; 9];
    checks.push((
        "last call of the budget is served",
        problem::evaluate(&cheb, &x9, &mut budget).is_ok() && budget.calls_used() == 10,
    ));
    checks.push((
        "exhausted budget refuses",
        problem::evaluate(&cheb, &x9, &mut budget) == Err(Error::BudgetExhausted),
    ));
    checks.push((
        "short chromosome is a dimension mismatch",
        matches!(
            problem::evaluate(&cheb, &x9[..8], &mut EvaluationBudget::new(5)),
            Err(Error::DimensionMismatch { .. })
        ),
    ));

    // clamping and snapping
    let clamp = |g: Vec<f64>| problem::clamp(&Chromosome::new(g), &b2).into_genes();
    checks.push(("clamp below", clamp(vec![-600.0, 0.0]) == vec![-512.0, 0.0]));
    checks.push(("clamp identity", clamp(vec![3.5, -7.25]) == vec![3.5, -7.25]));
    checks.push(("clamp both sides", clamp(vec![513.0, -513.0]) == vec![512.0, -512.0]));
    let unit = Bounds::uniform(1, 0.0, 1.0).unwrap();
    let snap = |x: f64| problem::snap_to_grid(&Chromosome::new(vec![x]), &[0.025], &unit)[0];
    checks.push(("snap 0.163 up", (snap(0.163) - 0.175).abs() < 1e-12));
    checks.push(("snap 0.162 down", (snap(0.162) - 0.15).abs() < 1e-12));
    checks.push(("snap exact multiple", (snap(0.45) - 0.45).abs() < 1e-12));
    checks.push((
        "snap either side of the midpoint",
        (snap(0.1624) - 0.15).abs() < 1e-12 && (snap(0.1626) - 0.175).abs() < 1e-12,
    ));
    checks.push((
        "degree-8 Chebyshev polynomial scores zero",
        cheb.objective(&chebyshev_coefficients(8)).abs() < 1e-12,
    ));

    // type-0
    let t0 = Type0Problem::new(vec![1.0, -2.0, 3.0], 20.0, 1.0).unwrap();
    checks.push((
        "type-0 peak value and zero gap",
        (t0.value(&[1.0, -2.0, 3.0]) - 20.0 * PI / 2.0).abs() < 1e-12 && t0.gap(&[1.0, -2.0, 3.0]) == 0.0,
    ));
    checks.push(("type-0 at distance r0", (t0.value(&[2.0, -2.0, 3.0]) - 20.0 * PI / 4.0).abs() < 1e-12));
    let far = t0.value(&[1e12, -2.0, 3.0]);
    checks.push(("type-0 far away tends to zero", far > 0.0 && far < 1e-9));
    let i1 = Type0Problem::random_instance(4, &mut RngStream::new(99)).unwrap();
    let i2 = Type0Problem::random_instance(4, &mut RngStream::new(99)).unwrap();
    checks.push(("type-0 instance is seed-determined", i1.x0() == i2.x0() && i1.y0() == i2.y0()));
    let i3 = Type0Problem::random_instance(1, &mut rng).unwrap();
    checks.push(("type-0 scalar instance inside the box", i3.x0().len() == 1 && i3.x0()[0].abs() <= 400.0));

    // beam
    let beam = BeamProblem::default();
    let mut g = vec![0.0; beam::DIMENSION];
    g[beam::VAR_B] = 0.3;
    g[beam::VAR_H] = 0.55;
    g[beam::VAR_TOP_DIA] = 7.0;
    g[beam::VAR_BOT_DIA] = 7.0;
    g[beam::VAR_TOP_COUNT..beam::VAR_TOP_COUNT + 3].copy_from_slice(&[4.0, 2.0, 4.0]);
    g[beam::VAR_BOT_COUNT..beam::VAR_BOT_COUNT + 3].copy_from_slice(&[2.0, 3.0, 2.0]);
    g[beam::VAR_STIRRUP_DIA] = 2.0;
    g[beam::VAR_SPACING..beam::VAR_SPACING + 3].copy_from_slice(&[0.15, 0.3, 0.15]);
    g[beam::VAR_BEND_LEN..beam::VAR_BEND_LEN + 2].copy_from_slice(&[1.5, 1.5]);
    g[beam::VAR_SHEAR_LEN..beam::VAR_SHEAR_LEN + 2].copy_from_slice(&[1.5, 1.5]);
    let a = beam.assess(&g);
    checks.push((
        "feasible beam costs its materials only",
        a.checks.iter().all(|c| c.ratio <= 1.0) && a.penalty == 0.0 && beam.objective(&g) == a.cost,
    ));
    checks.push(("penalty at twice the limit", beam::penalty(250.0, 2.0) == 1000.0));

    // periodic unit cell
    let lone = ripley_k(&[(3.0, 4.0)], (25.8, 25.8), &[1.0, 5.0, 12.9]).unwrap();
    checks.push(("single point has K = 0", lone.iter().all(|&k| k == 0.0)));
    let puc = PucProblem::builtin();
    checks.push(("reference configuration scores zero", puc.objective(&puc.reference_genes()) == 0.0));
    let expected: f64 = puc
        .k0()
        .iter()
        .zip(puc.radii())
        .map(|(k0, r)| (k0 / (PI * r * r)).powi(2))
        .sum();
    let zero_k = puc.mismatch(&vec![0.0; puc.radii().len()]);
    checks.push(("K = 0 reduces to the reference terms", (zero_k - expected).abs() <= 1e-12 * expected));

    // DE
    let all = vec![true];
    checks.push((
        "DE with F1 = F2 = 0 is the identity",
        de::differential(&[1.5], &[3.0], &[2.0], &[5.0], &all, 0.0, 0.0).genes() == [1.5],
    ));
    checks.push((
        "DE with F1 = 0, F2 = 1 lands on the best",
        de::differential(&[1.5, 2.0], &[3.0, 0.0], &[2.0, 1.0], &[5.0, -1.0], &[true, true], 0.0, 1.0).genes()
            == [5.0, -1.0],
    ));
    checks.push((
        "DE scalar arithmetic",
        (de::differential(&[1.0], &[3.0], &[2.0], &[5.0], &all, 0.85, 0.85)[0] - 5.25).abs() < 1e-12,
    ));
    let de_cfg = DeConfig {
        pop_size: 4,
        f1: 0.85,
        f2: 0.85,
        cr: 1.0,
    };
    for (label, value) in [
        ("worse offspring leave the population unchanged", 100.0),
        ("equal offspring keep the parents", 1.0),
    ] {
        let flat = Flat {
            value,
            bounds: Bounds::uniform(2, -5.0, 5.0).unwrap(),
            calls: AtomicU64::new(0),
        };
        let mut pop = Population::default();
        for i in 0..4 {
            pop.push(vec![i as f64, -(i as f64)].into(), 1.0);
        }
        let before = pop.clone();
        let mut ev = Evaluator::new(&flat, EvaluationBudget::new(100), f64::NEG_INFINITY);
        let ran = de::de_generation(&mut pop, &de_cfg, &mut ev, &mut rng).is_ok();
        checks.push((label, ran && pop.members == before.members && pop.fitness == before.fitness && flat.calls.load(Ordering::Relaxed) == 4));
    }

    // SADE
    let wide = Bounds::uniform(2, -100.0, 100.0).unwrap();
    checks.push((
        "SADE with CR = 0 copies p",
        sade::sade_differential(&[1.0, 2.0], &[5.0, 5.0], &[0.0, 9.0], 0.0, &wide).genes() == [1.0, 2.0],
    ));
    checks.push((
        "SADE with q = r copies p",
        sade::sade_differential(&[1.0, 2.0], &[4.0, 4.0], &[4.0, 4.0], 0.7, &wide).genes() == [1.0, 2.0],
    ));
    checks.push((
        "SADE differential arithmetic",
        close(sade::sade_differential(&[0.0, 0.0], &[1.0, 2.0], &[0.0, 1.0], 0.3, &wide).genes(), &[0.3, 0.3], 1e-12),
    ));
    checks.push(("MR = 0 keeps the chromosome", sade::mutate_towards(&[1.0, 2.0], &[7.0, 8.0], 0.0).genes() == [1.0, 2.0]));
    checks.push(("MR = 1 reaches the random point", sade::mutate_towards(&[1.0, 2.0], &[7.0, 8.0], 1.0).genes() == [7.0, 8.0]));
    checks.push(("MR = 0.5 halves the way", sade::mutate_towards(&[0.0], &[10.0], 0.5).genes() == [5.0]));
    let b1 = Bounds::uniform(1, -100.0, 100.0).unwrap();
    checks.push(("local range 0 is the identity", sade::sade_local_mutate(&[4.0], &[0.0], &b1, &mut rng).genes() == [4.0]));
    checks.push((
        "local mutation stays within its range",
        (0..10_000).all(|_| (sade::sade_local_mutate(&[4.0], &[0.1], &b1, &mut rng)[0] - 4.0).abs() <= 0.1),
    ));
    let moved = sade::sade_local_mutate(&[1.0, 2.0, 3.0], &[0.1; 3], &Bounds::uniform(3, -9.0, 9.0).unwrap(), &mut rng);
    checks.push(("local mutation moves every gene", moved.iter().zip([1.0, 2.0, 3.0]).all(|(a, b)| *a != b)));
    let mut equal = Population::default();
    for i in 0..10 {
        equal.push(vec![i as f64].into(), 2.0);
    }
    checks.push(("selection restores the size", sade::sade_select(equal, 5, &mut rng).len() == 5));
    let sade_cfg = SadeConfig {
        pop_size: 12,
        cr: 1.0,
        radioactivity: 0.0,
        mr: 0.5,
        local_range: 0.01,
    };
    let lattice = Bounds::uniform(3, -1000.0, 1000.0).unwrap();
    let mut pop = Population::default();
    for i in 0..12 {
        let v = i as f64;
        pop.push(vec![v, 2.0 * v - 7.0, 11.0 - v].into(), v);
    }
    let fresh = sade::sade_offspring(&pop, &sade_cfg, &[20.0; 3], &lattice, &mut rng);
    checks.push((
        "radioactivity 0 gives differential offspring only",
        fresh.len() == 12 && fresh.iter().all(|c| c.iter().all(|x| x.fract() == 0.0)),
    ));

    // RASA
    checks.push((
        "rank probabilities sum to one",
        [(0.04, 32), (0.5, 3), (0.9, 10), (0.3, 1)]
            .iter()
            .all(|&(q, n)| (rasa::rank_probabilities(q, n).iter().sum::<f64>() - 1.0).abs() < 1e-12),
    ));
    checks.push((
        "single member is always selected",
        (0..100).all(|_| rasa::geometric_rank_select(&[3.0], 0.04, &mut rng) == 0),
    ));
    let box3 = Bounds::new(vec![-1.0, 2.0, 0.0], vec![1.0, 5.0, 10.0]).unwrap();
    checks.push((
        "boundary mutation below one half hits the lower bound",
        rasa::boundary_mutation_at(&[0.5, 3.0, 7.0], 1, 0.3, &box3).genes() == [0.5, 2.0, 7.0],
    ));
    let cold = OperatorContext {
        bounds: &box3,
        temperature_ratio: 1e-6,
        b: 2.0,
        num_heu_max: 20,
    };
    let cap: Vec<f64> = (0..3).map(|j| box3.width(j) * 1e-12).collect();
    checks.push((
        "non-uniform mutation freezes as T goes to zero",
        (0..1000).all(|_| {
            let c = rasa::non_uniform_mutation(&[0.5, 3.0, 7.0], &cold, &mut rng);
            c.iter().zip([0.5, 3.0, 7.0]).zip(&cap).all(|((a, b), m)| (a - b).abs() <= *m)
        }),
    ));
    let (x, y) = rasa::simple_crossover_at(&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0], 2);
    checks.push(("simple crossover swaps tails", x.genes() == [1.0, 2.0, 2.0] && y.genes() == [2.0, 1.0, 1.0]));
    let (x, y) = rasa::arithmetic_crossover_with(&[1.0, 4.0], &[3.0, 8.0], 0.5, |_| true);
    checks.push(("whole arithmetic crossover at 1/2 gives midpoints", x.genes() == [2.0, 6.0] && y.genes() == [2.0, 6.0]));
    checks.push((
        "Metropolis always accepts improvements and ties",
        (0..1000).all(|_| rasa::metropolis_replace(2.0, 1.0, 1e-9, &mut rng) && rasa::metropolis_replace(2.0, 2.0, 1e-9, &mut rng)),
    ));
    let members: Vec<Chromosome> = vec![vec![1.0, 2.0].into()];
    let p = [1e-4, 1e-4];
    checks.push(("identity guard vetoes a duplicate", rasa::identity_guard(&[1.0, 2.0], &members, &p)));
    checks.push(("identity guard with nobody to compare", !rasa::identity_guard(&[1.0, 2.0], &[], &p)));
    checks.push(("two precisions apart is not a duplicate", !rasa::identity_guard(&[1.0 + 2e-4, 2.0], &members, &p)));
    let presets = Presets::default();
    let zero_budget = AlgorithmKind::ALL.iter().all(|&k| {
        let cfg = presets.algorithm(k, ProblemKind::Chebyshev, 9).unwrap();
        let r = evobench::algo::run(&cheb, &cfg, 0, 1e-5, &mut rng).unwrap();
        !r.success && r.calls_used == 0
    });
    checks.push(("zero budget gives a failure record", zero_budget));

    // IASA
    checks.push(("decode 314159 at 0.001", (iasa::decode_value(314_159, 0.001) - 314.159).abs() < 1e-9));
    checks.push(("encode 0.45 at 0.025", iasa::encode_value(0.45, 0.025) == 18));
    let ic = IntegerCodec::new(&Bounds::uniform(1, -1000.0, 1000.0).unwrap(), vec![1.0]).unwrap();
    checks.push((
        "IASA crossover with CR = 0 copies p",
        (0..100).all(|_| iasa::iasa_differential_crossover(&[10], &[20], &[0], 0.0, &ic, &mut rng) == vec![10]),
    ));
    checks.push((
        "IASA crossover with q = r copies p",
        (0..100).all(|_| iasa::iasa_differential_crossover(&[10], &[7], &[7], 0.9, &ic, &mut rng) == vec![10]),
    ));
    checks.push(("IASA crossover arithmetic", iasa::differential_crossover_with(&[10], &[20], &[0], 0.5, &ic) == vec![20]));
    let big = IntegerCodec::new(&Bounds::uniform(1, -1e6, 1e6).unwrap(), vec![1.0]).unwrap();
    let deltas: Vec<f64> = (0..10_000).map(|_| iasa::iasa_mutate(&[0], &[0], &big, &mut rng)[0] as f64).collect();
    let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
    let sd = (deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / deltas.len() as f64).sqrt();
    checks.push(("identical partner gives unit spread", (sd - 1.0).abs() < 0.1));
    checks.push(("mutation is centred", mean.abs() < 3.0 * sd / 100.0));
    checks.push(("improvement at T -> 0 is accepted", iasa::acceptance_probability(2.0, 1.0, 1e-300) > 1.0 - 1e-12));
    checks.push(("equal fitness survives with probability one half", iasa::acceptance_probability(3.0, 3.0, 0.1) == 0.5));
    let ties = (0..100_000).filter(|_| iasa::iasa_accept(3.0, 3.0, 0.1, &mut rng)).count() as f64 / 1e5;
    checks.push(("equal fitness acceptance is empirically one half", (ties - 0.5).abs() <= 0.01));
    let mut cool = presets.iasa(ProblemKind::Puc, 20).unwrap();
    cool.t_min = cool.t_max;
    checks.push(("T_min = T_max leaves T unchanged", iasa::iasa_cool(cool.t_max, &cool) == cool.t_max));
    let puc_cfg = presets.iasa(ProblemKind::Puc, 20).unwrap();
    checks.push(("cooling below T_min reanneals to T_max", iasa::iasa_cool(puc_cfg.t_min * 1.01, &puc_cfg) == puc_cfg.t_max));
    let only_crossover = IasaConfig {
        crossover_prob: 1.0,
        precision: IasaPrecision::Uniform(1e-3),
        ..presets.iasa(ProblemKind::Chebyshev, 9).unwrap()
    };
    let mut ev = Evaluator::new(&cheb, EvaluationBudget::new(3000), f64::NEG_INFINITY);
    let stats = iasa::optimize_with_stats(&only_crossover, &mut ev, &mut rng).unwrap();
    checks.push(("CrossoverProb = 1 never mutates", stats.mutations == 0 && stats.crossovers > 0));

    // harness
    let one = BenchmarkSpec::from_presets(&presets, ProblemKind::Type0, AlgorithmKind::Rasa, 5, 1, 3)
        .unwrap()
        .with_termination(f64::INFINITY, 1000);
    let r = harness::run_benchmark(&one, 1).unwrap();
    checks.push((
        "single trivially satisfied run",
        r.successes == 1 && r.avg_calls == Some(r.records[0].calls() as f64),
    ));
    let twice = |seed| {
        let s = BenchmarkSpec::from_presets(&presets, ProblemKind::Puc, AlgorithmKind::Iasa, 20, 3, seed)
            .unwrap()
            .with_termination(6e-5, 3000);
        let r = harness::run_benchmark(&s, 1).unwrap();
        (harness::report_csv(std::slice::from_ref(&r)), r.runs_csv())
    };
    checks.push(("same base seed gives the same report", twice(17) == twice(17)));
    checks.push((
        "empty dimension list gives an empty table",
        harness::scaling_study(&presets, AlgorithmKind::Sade, &[], 3, 1, 1).unwrap().is_empty(),
    ));

    // command line
    let out = cli(&["bench", "--problem", "chebyshev", "--algo", "sade", "--runs", "100", "--seed", "7"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let successes = text
        .lines()
        .nth(1)
        .and_then(|row| row.split(',').nth(4))
        .and_then(|s| s.parse::<usize>().ok());
    checks.push(("bench reports at most 100 successes", out.status.success() && successes.is_some_and(|s| s <= 100)));
    let run = || cli(&["run", "--problem", "type0", "--dim", "10", "--algo", "rasa", "--seed", "1"]);
    let (a, b) = (run(), run());
    checks.push(("run is reproducible", a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty()));

    checks
}

fn criterion_7() -> Verdict {
    let checks = trivial_examples();
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    Verdict {
        id: 7,
        pass: failed.is_empty(),
        hard: true,
        detail: if failed.is_empty() {
            format!("{} operator identities hold", checks.len())
        } else {
            format!("{} of {} failed: {}", failed.len(), checks.len(), failed.join(", "))
        },
    }
}

fn criterion_8() -> Verdict {
    let dirs: Vec<tempfile::TempDir> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let outputs: Vec<_> = ["1", "2", "4"]
        .iter()
        .zip(&dirs)
        .map(|(w, d)| {
            let out = cli(&[
                "bench",
                "--problem",
                "puc",
                "--algo",
                "all",
                "--runs",
                "6",
                "--seed",
                "11",
                "--workers",
                w,
                "--out",
                d.path().to_str().unwrap(),
            ]);
            let files: Vec<Vec<u8>> = ["report.csv", "runs.csv", "report.json"]
                .iter()
                .map(|f| std::fs::read(d.path().join(f)).unwrap_or_default())
                .collect();
            (out.status.success(), out.stdout, files)
        })
        .collect();
    let ok = outputs.iter().all(|(s, _, f)| *s && f.iter().all(|b| !b.is_empty()));
    let same = outputs.windows(2).all(|w| w[0].1 == w[1].1 && w[0].2 == w[1].2);
    Verdict {
        id: 8,
        pass: ok && same,
        hard: true,
        detail: format!("workers 1/2/4: completed {ok}, byte-identical report.csv, runs.csv, report.json {same}"),
    }
}

fn main() -> ExitCode {
    let runs = env_usize("EVOBENCH_ACCEPTANCE_RUNS", 20);
    let scale_runs = env_usize("EVOBENCH_ACCEPTANCE_SCALE_RUNS", 2);
    let strict = std::env::var("EVOBENCH_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    println!("acceptance: {runs} runs per campaign, {scale_runs} at d = 100, base seed {BASE_SEED}");

    let criteria: Vec<Box<dyn Fn() -> Verdict>> = vec![
        Box::new(criterion_6),
        Box::new(criterion_7),
        Box::new(criterion_8),
        Box::new(move || criterion_1(runs)),
        Box::new(move || criterion_2(runs)),
        Box::new(move || criterion_3(runs, scale_runs)),
        Box::new(move || criterion_4(runs)),
        Box::new(move || criterion_5(runs)),
    ];
    let mut verdicts: Vec<Verdict> = criteria.iter().map(|c| c()).collect();
    verdicts.sort_by_key(|v| v.id);
    let mut failed = false;
    for v in &verdicts {
        let status = if v.pass { "PASS" } else { "FAIL" };
        let kind = if v.hard { "" } else { " (reported)" };
        println!("criterion {}: {status}{kind} - {}", v.id, v.detail);
        failed |= !v.pass && (v.hard || strict);
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
