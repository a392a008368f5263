//! Positivity preservation of matrix multipliers, both directions.

use std::f64::consts::PI;

use serde_json::json;

use super::{entries_psd, fold_positivity, mollifier_probe, positivity_ensemble, Agg, Ctx};
use crate::engine::{convolve_atomic, GridField};
use crate::harness::config::PreservationParams;
use crate::linalg::C64;
use crate::symbol::MatrixSymbol;
use crate::synth::{bochner_scalar, ScalarMeasure};
use crate::{rng, Result};

type Measures = Vec<Vec<ScalarMeasure>>;

/// `out_j = (2π)^{-n/2} Σ_k f_k ∗ μ_{jk}`, computed in direct space.
pub(crate) fn entrywise_convolution(f: &GridField, measures: &Measures) -> Result<GridField> {
    let spec = f.spec().clone();
    let norm = (2.0 * PI).powf(-(spec.dim() as f64) / 2.0);
    let m = f.m();
    let mut components = vec![vec![C64::new(0.0, 0.0); spec.len()]; m];
    for (j, row) in measures.iter().enumerate() {
        for (k, mu) in row.iter().enumerate() {
            let fk = GridField::new(spec.clone(), vec![f.component(k).to_vec()])?;
            let conv = convolve_atomic(&fk, mu)?;
            for (acc, z) in components[j].iter_mut().zip(conv.component(0)) {
                *acc += z * norm;
            }
        }
    }
    GridField::new(spec, components)
}

fn random_member(ctx: &Ctx, p: &PreservationParams, index: usize) -> Result<(MatrixSymbol, Measures)> {
    let grid = ctx.grid();
    let m = p.ensemble.m[index % p.ensemble.m.len()];
    let mut r = rng::substream(ctx.seed("ensemble"), index as u64);
    let measures: Measures = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| {
                    ScalarMeasure::random_nonnegative(
                        &mut r,
                        grid.dim(),
                        p.ensemble.atoms,
                        p.ensemble.spread,
                        Some(grid.spacing()),
                    )
                })
                .collect()
        })
        .collect();
    let entries = measures
        .iter()
        .map(|row| row.iter().map(bochner_scalar).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok((MatrixSymbol::from_entries(entries), measures))
}

/// Synthesis side: PSD entries, grid positivity on a seeded ensemble of
/// nonnegative fields, and agreement with direct atomic convolution when the
/// entries are atomic Bochner transforms. Probe side: the mollifier test
/// fields `φ_{ε,k}` over a dyadic sweep and the sampled Grams of
/// `G_{jk}·φ_ε^`.
pub(crate) fn verify_preservation(ctx: &mut Ctx, p: &PreservationParams) -> Result<()> {
    if p.ensemble.m.is_empty() || p.ensemble.m.contains(&0) {
        return Err(super::config_error("ensemble sizes must be positive"));
    }
    let members: Vec<(MatrixSymbol, Option<Measures>)> = match &p.symbol {
        Some(spec) => vec![(spec.build()?, spec.entry_measures()?)],
        None => (0..p.ensemble.symbols)
            .map(|i| random_member(ctx, p, i).map(|(g, mu)| (g, Some(mu))))
            .collect::<Result<_>>()?,
    };
    if members.iter().any(|(g, _)| g.dim() != ctx.grid().dim()) {
        return Err(super::config_error("symbol and grid dimensions differ"));
    }
    let tol = ctx.tol().clone();

    let plan = ctx.plan("entries-psd");
    let mut psd_agg = Agg::min("entries-psd", plan.tol);
    for (i, (g, _)) in members.iter().enumerate() {
        entries_psd(&mut psd_agg, json!(i), g, &plan)?;
    }
    ctx.push(psd_agg.finish());

    let mut pos = Agg::min("positivity", tol.positivity);
    let mut oracle = Agg::max("oracle-match", tol.oracle);
    let mut any_oracle = false;
    for (i, (g, measures)) in members.iter().enumerate() {
        let seed = rng::derive_seed(ctx.seed("fields"), &i.to_string());
        let outcome = match measures {
            Some(mu) => {
                any_oracle = true;
                let o = |f: &GridField| entrywise_convolution(f, mu);
                positivity_ensemble(ctx, g, ctx.grid(), p.fields, seed, Some(&o))
            }
            None => positivity_ensemble(ctx, g, ctx.grid(), p.fields, seed, None),
        };
        match outcome {
            Ok(outcomes) => fold_positivity(ctx, "positivity", json!(i), outcomes, &mut pos, Some(&mut oracle)),
            Err(e) if e.is_math() => pos.fail(json!({ "member": i, "error": e.to_string() })),
            Err(e) => return Err(e),
        }
    }
    ctx.push(pos.finish());
    if any_oracle {
        ctx.push(oracle.finish());
    }

    if p.probe {
        let plan = ctx
            .plan("probe-gram")
            .with_trials(p.probe_trials.max(1));
        let plan = crate::psd::SamplingPlan { tol: tol.gram_falsify, ..plan };
        let mut probe_pos = Agg::min("probe-positivity", tol.falsify);
        let mut probe_gram = Agg::min("probe-gram", tol.gram_falsify);
        for (i, (g, _)) in members.iter().enumerate() {
            match mollifier_probe(ctx, json!(i), g, &p.eps_sweep, &plan, &mut probe_pos, &mut probe_gram) {
                Ok(()) => {}
                Err(e) if e.is_math() => probe_pos.fail(json!({ "member": i, "error": e.to_string() })),
                Err(e) => return Err(e),
            }
        }
        ctx.push(probe_pos.finish());
        ctx.push(probe_gram.finish());
    }
    Ok(())
}
