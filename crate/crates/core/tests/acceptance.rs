//! Acceptance gate: one line per criterion, all at the stated tolerances.

use std::time::{Duration, Instant};

use psdmult::harness::config::{
    BochnerSuiteParams, TwoComponentParams, FalsifyParams, LkSuiteParams, NormSuiteParams, SchurSuiteParams,
    PreservationParams,
};
use psdmult::harness::{run, Config, Report, Scenario};

const SEED: u64 = 20240601;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn timed(cfg: &Config) -> (Report, Duration) {
    let start = Instant::now();
    let r = run(cfg).expect("scenario runs");
    (r, start.elapsed())
}

fn value(r: &Report, name: &str) -> f64 {
    r.check(name).and_then(|c| c.value).unwrap_or(f64::NAN)
}

fn passed(r: &Report, name: &str) -> bool {
    r.check(name).is_some_and(|c| c.passed)
}

fn schur() -> Outcome {
    let p = SchurSuiteParams { count: 500, min_size: 2, max_size: 20 };
    let cfg = Config::new(Scenario::SchurSuite(p), SEED);
    let (r, elapsed) = timed(&cfg);
    let trials = r.trials.iter().filter(|t| t.check == "hadamard-psd").count();
    let worst = value(&r, "hadamard-psd");
    Outcome {
        id: 1,
        title: "Schur closure",
        passed: r.passed && trials == 500 && worst >= -1e-10 && cfg.tolerances.schur == 1e-10,
        detail: format!("{trials} pairs, min λ/‖A∘B‖ = {worst:.3e}"),
        elapsed,
        budget: Duration::from_secs(10),
    }
}

fn bochner() -> Outcome {
    let p = BochnerSuiteParams { count: 100, dims: vec![1, 2], ..Default::default() };
    let cfg = Config::new(Scenario::BochnerSuite(p), SEED);
    assert_eq!(cfg.sampling.tol, 1e-9);
    assert_eq!(cfg.sampling.sym_tol, 1e-12);
    assert_eq!(cfg.sampling.bound_tol, 1e-12);
    let (r, elapsed) = timed(&cfg);
    let names = ["scalar-gram", "matrix-gram", "symmetry", "boundedness"];
    let trials = r.trials.iter().filter(|t| t.check == "scalar-gram").count();
    Outcome {
        id: 2,
        title: "Bochner suite",
        passed: r.passed && trials == 100 && names.iter().all(|n| passed(&r, n)),
        detail: format!(
            "{trials} measures, min eig scalar {:.3e} matrix {:.3e}, symmetry {:.1e}, bound excess {:.1e}",
            value(&r, "scalar-gram"),
            value(&r, "matrix-gram"),
            value(&r, "symmetry"),
            value(&r, "boundedness")
        ),
        elapsed,
        budget: Duration::from_secs(30),
    }
}

fn levy_khintchine() -> Outcome {
    let p = LkSuiteParams { count: 10, t: vec![0.1, 1.0, 10.0], ..Default::default() };
    let cfg = Config::new(Scenario::LkSuite(p), SEED);
    assert_eq!(cfg.tolerances.positivity, 1e-8);
    let (r, elapsed) = timed(&cfg);
    let mut ok = r.passed && passed(&r, "cpsd");
    for t in ["0.1", "1", "10"] {
        ok &= passed(&r, &format!("t={t}/semigroup-psd")) && passed(&r, &format!("t={t}/positivity"));
    }
    Outcome {
        id: 3,
        title: "Lévy–Khintchine suite",
        passed: ok,
        detail: format!(
            "cpsd {:.3e}, worst positivity ratio {:.3e}",
            value(&r, "cpsd"),
            r.checks_with_prefix("t=")
                .filter(|c| c.name.ends_with("/positivity"))
                .filter_map(|c| c.value)
                .fold(f64::INFINITY, f64::min)
        ),
        elapsed,
        budget: Duration::from_secs(60),
    }
}

fn preservation_forward() -> Outcome {
    let p = PreservationParams::default();
    assert_eq!((p.ensemble.symbols, p.fields), (20, 20));
    assert_eq!(p.ensemble.m, vec![2, 3]);
    let cfg = Config::new(Scenario::Preservation(p), SEED);
    assert_eq!((cfg.grid.dim(), cfg.grid.samples(), cfg.grid.length()), (1, 1024, 40.0));
    assert_eq!((cfg.tolerances.positivity, cfg.tolerances.oracle), (1e-8, 1e-8));
    let (r, elapsed) = timed(&cfg);
    let trials = r.trials.iter().filter(|t| t.check == "positivity").count();
    Outcome {
        id: 4,
        title: "positivity preservation, forward direction",
        passed: r.passed && trials == 400 && passed(&r, "positivity") && passed(&r, "oracle-match"),
        detail: format!(
            "{trials} trials, min out/‖out‖∞ = {:.3e}, oracle error {:.3e}",
            value(&r, "positivity"),
            value(&r, "oracle-match")
        ),
        elapsed,
        budget: Duration::from_secs(60),
    }
}

fn falsification() -> Outcome {
    let cfg = Config::new(Scenario::Falsify(FalsifyParams::default()), SEED);
    let (r, elapsed) = timed(&cfg);
    let scan = value(&r, "kernel-sign-scan");
    let probe = value(&r, "probe-positivity");
    let gram = value(&r, "probe-gram");
    Outcome {
        id: 5,
        title: "falsification of a bump symbol",
        passed: !r.passed && scan < -1e-3 && probe <= -1e-3 && gram <= -1e-6,
        detail: format!("kernel scan {scan:.3e}, probe {probe:.3e}, Gram eigenvalue {gram:.3e}"),
        elapsed,
        budget: Duration::from_secs(30),
    }
}

fn example() -> Outcome {
    let p = TwoComponentParams::default();
    assert_eq!(p.t, vec![0.1, 1.0, 10.0]);
    assert_eq!(p.b_sweep, vec![0.0, 0.5, 1.0, 2.0]);
    assert_eq!(p.samples, 100);
    let cfg = Config::new(Scenario::TwoComponent(p), SEED);
    assert_eq!((cfg.tolerances.closed_form, cfg.tolerances.eigen), (1e-12, 1e-12));
    let (r, elapsed) = timed(&cfg);
    let six = ["a-cpsd", "mlak-cpsd", "closed-form", "decomposition"];
    let ok = r.passed
        && six.iter().all(|n| passed(&r, n))
        && r.checks_with_prefix("t=").count() == 6
        && passed(&r, "factor-eigenvalues");
    Outcome {
        id: 6,
        title: "two-component example",
        passed: ok,
        detail: format!(
            "closed form {:.3e}, eigenvalues {:.3e}, {} checks",
            value(&r, "closed-form"),
            value(&r, "factor-eigenvalues"),
            r.checks.len()
        ),
        elapsed,
        budget: Duration::from_secs(30),
    }
}

fn norms() -> Outcome {
    let p = NormSuiteParams::default();
    assert_eq!(p.fields, 50);
    let cfg = Config::new(Scenario::NormSuite(p), SEED);
    let t = &cfg.tolerances;
    assert_eq!((t.roundtrip, t.kernel_tv, t.cos_norm, t.parseval), (1e-12, 1e-4, 1e-6, 1e-8));
    let (r, elapsed) = timed(&cfg);
    let names = ["roundtrip", "gaussian-tv", "cos-operator-norm", "parseval-ratio"];
    Outcome {
        id: 7,
        title: "norm witnesses",
        passed: r.passed && names.iter().all(|n| passed(&r, n)),
        detail: format!(
            "roundtrip {:.1e}, Gaussian TV error {:.1e}, cos norm error {:.1e}, Parseval excess {:.3e}",
            value(&r, "roundtrip"),
            value(&r, "gaussian-tv"),
            value(&r, "cos-operator-norm"),
            value(&r, "parseval-ratio")
        ),
        elapsed,
        budget: Duration::from_secs(30),
    }
}

fn determinism() -> Outcome {
    let mut small = PreservationParams::default();
    small.ensemble.symbols = 2;
    small.fields = 4;
    small.eps_sweep = vec![0.5, 0.125];
    let scenarios = vec![
        Scenario::SchurSuite(SchurSuiteParams { count: 100, ..Default::default() }),
        Scenario::BochnerSuite(BochnerSuiteParams { count: 20, ..Default::default() }),
        Scenario::LkSuite(LkSuiteParams::default()),
        Scenario::Preservation(small),
        Scenario::Falsify(FalsifyParams { eps_sweep: vec![0.5], ..Default::default() }),
        Scenario::TwoComponent(TwoComponentParams::default()),
        Scenario::NormSuite(NormSuiteParams::default()),
    ];
    let mut rerun = Duration::ZERO;
    let mut mismatched = vec![];
    for s in scenarios {
        let cfg = Config::new(s, SEED);
        let a = run(&cfg).expect("scenario runs").deterministic_json();
        let start = Instant::now();
        let b = run(&cfg).expect("scenario runs").deterministic_json();
        rerun += start.elapsed();
        if a != b {
            mismatched.push(cfg.scenario.kind());
        }
    }
    Outcome {
        id: 8,
        title: "determinism",
        passed: mismatched.is_empty(),
        detail: if mismatched.is_empty() {
            "7 suites byte-identical on rerun, rerun time shown".into()
        } else {
            format!("reports differ: {mismatched:?}")
        },
        elapsed: rerun,
        budget: Duration::from_secs(5),
    }
}

fn main() {
    let outcomes = [schur(), bochner(), levy_khintchine(), preservation_forward(), falsification(), example(), norms(), determinism()];
    let mut failures = vec![];
    for o in &outcomes {
        let in_budget = o.elapsed <= o.budget;
        let ok = o.passed && in_budget;
        println!(
            "criterion {}: {} {} ({}; {:.2}s of {}s)",
            o.id,
            if ok { "PASS" } else { "FAIL" },
            o.title,
            o.detail,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
        if !ok {
            failures.push(o.id);
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
