use std::sync::atomic::{AtomicU64, Ordering};

use proptest::prelude::*;

use evobench::algo::{self, iasa, sade, AlgorithmKind, IntegerCodec};
use evobench::harness::{self, BenchmarkSpec};
use evobench::presets::Presets;
use evobench::problem::{Bounds, EvaluationBudget, Evaluator, Population, Problem};
use evobench::problems::{BeamProblem, ChebyshevProblem, ProblemKind, PucProblem, Type0Problem};
use evobench::rng::RngStream;

/// Forwards to an inner problem and counts every objective call.
struct Counting<P> {
    inner: P,
    calls: AtomicU64,
}

impl<P: Problem> Problem for Counting<P> {
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }
    fn bounds(&self) -> &Bounds {
        self.inner.bounds()
    }
    fn encoding(&self) -> evobench::problem::Encoding {
        self.inner.encoding()
    }
    fn objective(&self, genes: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.objective(genes)
    }
    fn default_threshold(&self) -> f64 {
        self.inner.default_threshold()
    }
}

fn type0(dim: usize, seed: u64) -> Type0Problem {
    Type0Problem::random_instance(dim, &mut RngStream::new(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_objective_call_is_charged(seed in any::<u64>(), budget in 1u64..3000, which in 0usize..4) {
        let kind = AlgorithmKind::ALL[which];
        let problem = Counting { inner: type0(4, seed), calls: AtomicU64::new(0) };
        let cfg = Presets::default().algorithm(kind, ProblemKind::Type0, 4).unwrap();
        let record = algo::run(&problem, &cfg, budget, -1.0, &mut RngStream::new(seed)).unwrap();
        let counted = problem.calls.load(Ordering::Relaxed);
        prop_assert_eq!(record.calls_used, counted);
        prop_assert!(counted <= budget);
        prop_assert!(!record.success);
        prop_assert_eq!(record.calls(), counted);
    }

    #[test]
    fn runs_replay_from_their_seed(seed in any::<u64>(), which in 0usize..4) {
        let kind = AlgorithmKind::ALL[which];
        let problem = type0(3, 99);
        let cfg = Presets::default().algorithm(kind, ProblemKind::Type0, 3).unwrap();
        let a = algo::run(&problem, &cfg, 2000, 1e-3, &mut RngStream::new(seed)).unwrap();
        let b = algo::run(&problem, &cfg, 2000, 1e-3, &mut RngStream::new(seed)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn success_is_reported_at_the_first_hit(seed in any::<u64>()) {
        let problem = type0(2, seed);
        let cfg = Presets::default().algorithm(AlgorithmKind::Rasa, ProblemKind::Type0, 2).unwrap();
        let record = algo::run(&problem, &cfg, 200_000, 1e-3, &mut RngStream::new(seed)).unwrap();
        if let Some(hit) = record.calls_at_success {
            prop_assert!(record.best_value < 1e-3);
            prop_assert_eq!(record.calls_used, hit);
        }
        for w in record.trace.windows(2) {
            prop_assert!(w[0].calls < w[1].calls && w[1].best < w[0].best);
        }
    }

    #[test]
    fn type0_gap_is_nonnegative_and_zero_at_the_peak(
        seed in any::<u64>(),
        x in proptest::collection::vec(-400.0f64..400.0, 5),
    ) {
        let p = type0(5, seed);
        prop_assert!(p.gap(&x) >= 0.0);
        prop_assert!(p.value(&x) <= p.peak() + 1e-9);
        prop_assert_eq!(p.gap(p.x0()), 0.0);
        prop_assert!((p.objective(&x) - p.gap(&x)).abs() < 1e-9);
    }

    #[test]
    fn chebyshev_objective_is_nonnegative(c in proptest::collection::vec(-512.0f64..512.0, 9)) {
        let p = ChebyshevProblem::new(8, 200).unwrap();
        let v = p.objective(&c);
        prop_assert!(v >= 0.0 && v.is_finite());
    }

    #[test]
    fn puc_objective_ignores_periodic_translation(dx in -60.0f64..60.0, dy in -60.0f64..60.0) {
        let p = PucProblem::builtin();
        let (h1, h2) = p.cell();
        let shifted: Vec<f64> = p
            .reference()
            .iter()
            .flat_map(|&(x, y)| [(x + dx).rem_euclid(h1), (y + dy).rem_euclid(h2)])
            .collect();
        prop_assert!(p.objective(&shifted) < 1e-20);
        prop_assert!(p.objective(&p.reference_genes()) < 1e-20);
    }

    #[test]
    fn beam_objective_dominates_material_cost(seed in any::<u64>()) {
        let beam = BeamProblem::new(Presets::default().beam_params().unwrap(), 0.0).unwrap();
        let genes = beam.bounds().sample(&mut RngStream::new(seed));
        let a = beam.assess(&genes);
        prop_assert!(a.cost >= 0.0 && a.penalty >= 0.0);
        prop_assert!(a.total() >= a.cost);
        let snapped = evobench::problem::snap_to_grid(&genes, beam.steps(), beam.bounds());
        prop_assert!((beam.objective(&snapped) - beam.assess(&snapped).total()).abs() < 1e-9);
    }

    #[test]
    fn iasa_operators_stay_on_the_integer_box(
        seed in any::<u64>(),
        p in 1e-4f64..0.1,
        cr in 0.0f64..1.0,
    ) {
        let bounds = Bounds::new(vec![-3.0, 0.0, 10.0], vec![2.0, 7.5, 10.5]).unwrap();
        let codec = IntegerCodec::new(&bounds, vec![p; 3]).unwrap();
        let mut rng = RngStream::new(seed);
        let (a, b, c) = (codec.sample(&mut rng), codec.sample(&mut rng), codec.sample(&mut rng));
        let inside = |y: &[i64]| y.iter().zip(codec.lower().iter().zip(codec.upper())).all(|(v, (l, u))| l <= v && v <= u);
        prop_assert!(inside(&a) && inside(&b) && inside(&c));
        let child = iasa::iasa_differential_crossover(&a, &b, &c, cr, &codec, &mut rng);
        prop_assert!(inside(&child));
        let mutant = iasa::iasa_mutate(&child, &a, &codec, &mut rng);
        prop_assert!(inside(&mutant));
        prop_assert!(bounds.contains(&codec.decode(&mutant)));
    }

    #[test]
    fn sade_generation_keeps_size_and_best(seed in any::<u64>(), size in 4usize..30) {
        let problem = type0(3, seed);
        let cfg = Presets::default().sade(ProblemKind::Type0, 3).unwrap();
        let mut ev = Evaluator::new(&problem, EvaluationBudget::new(1_000_000), -1.0);
        let mut rng = RngStream::new(seed);
        let mut pop = Population::default();
        for _ in 0..size {
            let c = problem.bounds().sample(&mut rng);
            let f = ev.evaluate(&c).unwrap();
            pop.push(c, f);
        }
        let ranges = sade::local_ranges(&cfg, problem.bounds());
        for _ in 0..5 {
            let best = pop.fitness.iter().cloned().fold(f64::INFINITY, f64::min);
            sade::sade_generation(&mut pop, &cfg, &ranges, &mut ev, &mut rng).unwrap();
            prop_assert_eq!(pop.len(), size);
            prop_assert_eq!(pop.fitness.len(), size);
            let after = pop.fitness.iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assert!(after <= best);
        }
    }
}

#[test]
fn harness_results_do_not_depend_on_workers() {
    let presets = Presets::default();
    for algo in AlgorithmKind::ALL {
        let spec = BenchmarkSpec::from_presets(&presets, ProblemKind::Type0, algo, 3, 6, 21)
            .unwrap()
            .with_termination(1e-3, 20_000);
        let serial = harness::run_benchmark(&spec, 1).unwrap();
        let parallel = harness::run_benchmark(&spec, 3).unwrap();
        assert_eq!(serial.records, parallel.records);
        assert_eq!(serial.csv_row(), parallel.csv_row());
        assert_eq!(serial.runs_csv(), parallel.runs_csv());
        for (i, r) in serial.records.iter().enumerate() {
            assert_eq!(r.seed, spec.seed_of(i));
            assert_eq!(*r, spec.run_one(i));
        }
    }
}

#[test]
fn harness_averages_successful_runs_only() {
    let spec = BenchmarkSpec::from_presets(&Presets::default(), ProblemKind::Type0, AlgorithmKind::De, 3, 8, 5)
        .unwrap()
        .with_termination(1e-3, 3_000);
    let report = harness::run_benchmark(&spec, 2).unwrap();
    let hits: Vec<u64> = report.records.iter().filter(|r| r.success).map(|r| r.calls()).collect();
    assert_eq!(report.successes, hits.len());
    match report.avg_calls {
        None => assert!(hits.is_empty()),
        Some(avg) => assert!((avg - hits.iter().sum::<u64>() as f64 / hits.len() as f64).abs() < 1e-9),
    }
    let row = report.csv_row();
    assert!(row.starts_with("type0,de,3,8,"));
    if hits.is_empty() {
        assert!(row.contains(",N/A,"));
    }
}
