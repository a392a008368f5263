//! Scenario-level examples: explicit symbols through the verification runner.

use psdmult::engine::GridSpec;
use psdmult::harness::config::{TwoComponentParams, SemigroupParams, PreservationParams};
use psdmult::harness::{run, Config, MatrixSymbolSpec, Report, Scenario, SymbolSpec};

fn run_preservation(symbol: MatrixSymbolSpec, grid: GridSpec) -> Report {
    let p = PreservationParams {
        symbol: Some(symbol),
        fields: 5,
        eps_sweep: vec![0.5, 0.25, 0.125],
        ..Default::default()
    };
    let mut cfg = Config::new(Scenario::Preservation(p), 3);
    cfg.grid = grid;
    run(&cfg).unwrap()
}

// cos(ξ) shifts by ±1, a whole number of steps only when 1/h is an integer.
#[test]
fn cosine_passes_both_directions() {
    let cos = MatrixSymbolSpec::Scalar { symbol: SymbolSpec::Cosine { freq: vec![1.0] } };
    let r = run_preservation(cos.clone(), GridSpec::new(1, 1024, 32.0).unwrap());
    assert!(r.passed, "{}", r.to_json());
    for name in ["entries-psd", "positivity", "oracle-match", "probe-positivity", "probe-gram"] {
        assert!(r.check(name).is_some_and(|c| c.passed), "{name}");
    }

    // Off the lattice the periodic interpolation of the shift rings below zero.
    let r = run_preservation(cos, GridSpec::new(1, 1024, 40.0).unwrap());
    assert!(r.check("entries-psd").unwrap().passed);
    assert!(!r.check("positivity").unwrap().passed);
}

#[test]
fn bump_entry_is_refuted() {
    let gaussian = SymbolSpec::Gaussian { dim: 1, width: 1.0 };
    let bump = SymbolSpec::Bump { dim: 1, radius: 1.0, plateau: 0.5 };
    let r = run_preservation(MatrixSymbolSpec::Entries {
        entries: vec![vec![bump, gaussian.clone()], vec![gaussian.clone(), gaussian]],
    }, GridSpec::new(1, 1024, 40.0).unwrap());
    assert!(!r.passed);
    let entries = r.check("entries-psd").unwrap();
    assert!(!entries.passed);
    let probe = r.check("probe-gram").unwrap();
    assert!(!probe.passed);
    assert!(probe.value.unwrap() <= -1e-6);
    assert_eq!(probe.witness.as_ref().unwrap()["subject"]["entry"], serde_json::json!([0, 0]));
}

#[test]
fn heat_smoothing_diagonal_semigroup() {
    let p = SemigroupParams {
        symbol: Some(MatrixSymbolSpec::Diagonal {
            diagonal: vec![SymbolSpec::NegQuadratic { dim: 1 }, SymbolSpec::NegQuadratic { dim: 1 }],
        }),
        ..Default::default()
    };
    let r = run(&Config::new(Scenario::DiagonalSemigroup(p), 5)).unwrap();
    assert!(r.passed, "{}", r.to_json());
    assert_eq!(r.checks_with_prefix("t=").filter(|c| c.name.ends_with("/positivity")).count(), 3);
}

#[test]
fn all_semigroup_defaults_pass() {
    for s in [
        Scenario::HadamardSemigroup(SemigroupParams::default()),
        Scenario::DiagonalSemigroup(SemigroupParams::default()),
        Scenario::PsdEntrySemigroup(SemigroupParams::default()),
    ] {
        let r = run(&Config::new(s, 9)).unwrap();
        assert!(r.passed, "{}", r.to_json());
    }
}

#[test]
fn anti_cpsd_example_fails_downstream() {
    let p = TwoComponentParams { a: SymbolSpec::PosQuadratic { dim: 1 }, b: 0.0, ..Default::default() };
    let r = run(&Config::new(Scenario::TwoComponent(p), 7)).unwrap();
    assert!(!r.check("a-cpsd").unwrap().passed);
    assert!(r.checks_with_prefix("t=").any(|c| c.name.ends_with("/positivity") && !c.passed));
}
