//! Scenario implementations and the shared check helpers.

mod example;
mod semigroup;
mod suites;
mod preservation;
mod tools;

use serde_json::{json, Value};

use super::config::{CheckTolerances, Config, Scenario};
use super::fields::{probe_grid, random_nonnegative_field};
use super::report::{Check, TrialRecord};
use crate::engine::{positivity_of, GridField, GridSpec, SampledSymbol};
use crate::psd::{self, FunctionVerdict, SamplingPlan};
use crate::symbol::{MatrixSymbol, ScalarSymbol};
use crate::synth::{basis_test_field_with, Mollifier, MollifierSpec};
use crate::{par, rng, Error, Result};

pub(crate) fn execute(cfg: &Config) -> Result<(Vec<Check>, Vec<TrialRecord>)> {
    let mut ctx = Ctx { cfg, checks: vec![], trials: vec![] };
    match &cfg.scenario {
        Scenario::Preservation(p) => preservation::verify_preservation(&mut ctx, p)?,
        Scenario::HadamardSemigroup(p) => semigroup::verify_semigroup(&mut ctx, semigroup::Flavor::Hadamard, p)?,
        Scenario::DiagonalSemigroup(p) => semigroup::verify_semigroup(&mut ctx, semigroup::Flavor::Diagonal, p)?,
        Scenario::PsdEntrySemigroup(p) => semigroup::verify_semigroup(&mut ctx, semigroup::Flavor::PsdEntries, p)?,
        Scenario::TwoComponent(p) => example::verify_two_component(&mut ctx, p)?,
        Scenario::BochnerSuite(p) => suites::bochner_suite(&mut ctx, p)?,
        Scenario::LkSuite(p) => suites::lk_suite(&mut ctx, p)?,
        Scenario::SchurSuite(p) => suites::schur_suite(&mut ctx, p)?,
        Scenario::NormSuite(p) => suites::norm_suite(&mut ctx, p)?,
        Scenario::Falsify(p) => tools::falsify(&mut ctx, p)?,
        Scenario::TestPsd(p) => tools::test_symbol(&mut ctx, p, false)?,
        Scenario::TestCpsd(p) => tools::test_symbol(&mut ctx, p, true)?,
        Scenario::SynthBochner(p) => tools::synth_bochner(&mut ctx, p)?,
        Scenario::SynthLk(p) => tools::synth_lk(&mut ctx, p)?,
        Scenario::Apply(p) => tools::apply(&mut ctx, p)?,
        Scenario::Norms(p) => tools::norms(&mut ctx, p)?,
    }
    Ok((ctx.checks, ctx.trials))
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a Config,
    checks: Vec<Check>,
    trials: Vec<TrialRecord>,
}

impl<'a> Ctx<'a> {
    pub fn grid(&self) -> &'a GridSpec {
        &self.cfg.grid
    }

    pub fn tol(&self) -> &'a CheckTolerances {
        &self.cfg.tolerances
    }

    /// Child seed for a named sub-task.
    pub fn seed(&self, label: &str) -> u64 {
        rng::derive_seed(self.cfg.seed, label)
    }

    pub fn plan(&self, label: &str) -> SamplingPlan {
        self.cfg.sampling.clone().with_seed(self.seed(label))
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Records `outcome` as a check; hypothesis failures become failed
    /// checks, anything else aborts the scenario.
    pub fn guard(&mut self, name: &str, tol: f64, outcome: Result<Check>) -> Result<()> {
        match outcome {
            Ok(c) => self.push(c),
            Err(e) if e.is_math() => self.push(Check::errored(name, tol, &e)),
            Err(e) => return Err(e),
        }
        Ok(())
    }

    pub fn record(&mut self, check: &str, trial: usize, value: f64) {
        self.trials.push(TrialRecord { check: check.to_string(), trial, value });
    }
}

/// Running aggregate of many sub-results into one check.
pub(crate) struct Agg {
    name: String,
    tol: f64,
    passed: bool,
    value: Option<f64>,
    witness: Option<Value>,
    take_min: bool,
}

impl Agg {
    pub fn min(name: &str, tol: f64) -> Self {
        Self { name: name.into(), tol, passed: true, value: None, witness: None, take_min: true }
    }

    pub fn max(name: &str, tol: f64) -> Self {
        Self { take_min: false, ..Self::min(name, tol) }
    }

    /// Folds one sub-result; the first failure keeps its witness.
    pub fn add(&mut self, passed: bool, value: f64, witness: impl FnOnce() -> Value) {
        let better = match self.value {
            None => true,
            Some(v) if self.take_min => value < v || value.is_nan(),
            Some(v) => value > v || value.is_nan(),
        };
        if better {
            self.value = Some(value);
        }
        if !passed && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }

    pub fn fail(&mut self, witness: Value) {
        if self.passed {
            self.passed = false;
            self.witness = Some(witness);
        }
    }

    pub fn finish(self) -> Check {
        let c = Check::new(self.name, self.passed, self.value.unwrap_or(f64::NAN), self.tol);
        match self.witness {
            Some(w) => c.with_witness(w),
            None => c,
        }
    }
}

/// Folds a sampled (C)PSD verdict; value is the smallest eigenvalue.
pub(crate) fn add_verdict(agg: &mut Agg, label: Value, v: &FunctionVerdict) {
    agg.add(v.verdict.passed, v.verdict.min_eigenvalue, || json!({ "subject": label, "verdict": v }));
}

/// PSD tests of every entry of `g`.
pub(crate) fn entries_psd(agg: &mut Agg, member: Value, g: &MatrixSymbol, plan: &SamplingPlan) -> Result<()> {
    for j in 0..g.size() {
        for k in 0..g.size() {
            let v = psd::test_psd_function(&g.entry(j, k), plan)?;
            add_verdict(agg, json!({ "member": member, "entry": [j, k] }), &v);
        }
    }
    Ok(())
}

pub(crate) struct TrialOutcome {
    pub ratio: f64,
    pub passed: bool,
    pub witness: Value,
    pub oracle_error: Option<f64>,
}

pub(crate) type Oracle<'a> = dyn Fn(&GridField) -> Result<GridField> + Sync + 'a;

/// Applies `g` to seeded random nonnegative fields and checks positivity.
/// `oracle`, when given, recomputes the output independently.
pub(crate) fn positivity_ensemble(
    ctx: &Ctx,
    g: &MatrixSymbol,
    grid: &GridSpec,
    count: usize,
    seed: u64,
    oracle: Option<&Oracle<'_>>,
) -> Result<Vec<TrialOutcome>> {
    let sampled = SampledSymbol::new(g, grid)?;
    let tol = ctx.tol().positivity;
    let results = par::map_range(count, |trial| -> Result<TrialOutcome> {
        let f = random_nonnegative_field(grid, g.size(), seed, trial)?;
        let out = sampled.apply(&f)?;
        let v = positivity_of(&out, tol);
        let sup = v.sup_norm.max(f64::MIN_POSITIVE);
        let oracle_error = match oracle {
            Some(o) => {
                let direct = o(&f)?;
                let diff = out.combine(1.0.into(), &direct, (-1.0).into())?;
                Some(diff.sup_norm() / sup)
            }
            None => None,
        };
        Ok(TrialOutcome {
            ratio: v.min_real / sup,
            passed: v.passed,
            witness: json!({ "trial": trial, "verdict": v }),
            oracle_error,
        })
    });
    results.into_iter().collect()
}

/// Folds ensemble outcomes into a positivity aggregate and an optional
/// oracle aggregate.
pub(crate) fn fold_positivity(
    ctx: &mut Ctx,
    check: &str,
    member: Value,
    outcomes: Vec<TrialOutcome>,
    pos: &mut Agg,
    oracle: Option<&mut Agg>,
) {
    let offset = ctx.trials.iter().filter(|r| r.check == check).count();
    for (i, o) in outcomes.iter().enumerate() {
        ctx.record(check, offset + i, o.ratio);
    }
    let oracle_tol = ctx.tol().oracle;
    if let Some(agg) = oracle {
        for o in &outcomes {
            if let Some(e) = o.oracle_error {
                agg.add(e <= oracle_tol, e, || json!({ "member": member, "trial": o.witness["trial"], "error": e }));
            }
        }
    }
    for o in outcomes {
        let w = o.witness;
        pos.add(o.passed, o.ratio, || json!({ "member": member, "trial": w }));
    }
}

/// Mollifier probe: applies `g` to `φ_{ε,k}` over the sweep and PSD-tests
/// the products `G_{jk}·φ_ε^`. Folds into the two aggregates.
#[allow(clippy::too_many_arguments)]
pub(crate) fn mollifier_probe(
    ctx: &mut Ctx,
    member: Value,
    g: &MatrixSymbol,
    sweep: &[f64],
    plan: &SamplingPlan,
    pos: &mut Agg,
    gram: &mut Agg,
) -> Result<()> {
    let eps_min = sweep.iter().copied().fold(f64::INFINITY, f64::min);
    let pgrid = probe_grid(ctx.grid(), eps_min)?;
    let sampled = SampledSymbol::new(g, &pgrid)?;
    let m = g.size();
    let threshold = ctx.tol().falsify;
    for (s, &eps) in sweep.iter().enumerate() {
        let moll = Mollifier::new(MollifierSpec::new(pgrid.dim(), eps))?;
        let outs = par::map_range(m, |k| -> Result<_> {
            let f = basis_test_field_with(&moll, k, m, &pgrid)?;
            Ok(positivity_of(&sampled.apply(&f)?, threshold))
        });
        for (k, v) in outs.into_iter().enumerate() {
            let v = v?;
            let ratio = v.min_real / v.sup_norm.max(f64::MIN_POSITIVE);
            ctx.record("probe-positivity", s * m + k, ratio);
            pos.add(ratio >= -threshold, ratio, || {
                json!({ "member": member, "eps": eps, "k": k, "verdict": v })
            });
        }
        let (_, phi_hat) = moll.symbols();
        for j in 0..m {
            for k in 0..m {
                let product: ScalarSymbol = g.entry(j, k).product(&phi_hat);
                let v = psd::test_psd_function(&product, plan)?;
                add_verdict(gram, json!({ "member": member, "eps": eps, "entry": [j, k] }), &v);
            }
        }
    }
    Ok(())
}

/// `x` samples uniform in `[-radius, radius]ⁿ`.
pub(crate) fn sample_points(seed: u64, dim: usize, count: usize, radius: f64) -> Vec<Vec<f64>> {
    use rand::Rng;
    let mut r = rng::substream(seed, 0);
    (0..count).map(|_| (0..dim).map(|_| r.random_range(-radius..=radius)).collect()).collect()
}

pub(crate) fn config_error(msg: impl Into<String>) -> Error {
    Error::ConfigInvalid(msg.into())
}
