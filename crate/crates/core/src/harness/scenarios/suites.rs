//! Seeded property suites: Bochner synthesis, Lévy–Khintchine semigroups,
//! Schur closure, and multiplier norm witnesses.

use std::f64::consts::PI;

use rand::Rng;
use serde_json::json;

use super::{add_verdict, fold_positivity, positivity_ensemble, Agg, Ctx};
use crate::engine::{dft_forward, dft_inverse, kernel_and_tv, l2_norm_bound, GridField};
use crate::harness::config::{BochnerSuiteParams, LkSuiteParams, NormSuiteParams, SchurSuiteParams};
use crate::linalg::{self, C64};
use crate::psd::{self, FailureKind, FunctionVerdict};
use crate::symbol::{MatrixSymbol, ScalarSymbol};
use crate::synth::{bochner_matrix, bochner_scalar, levy_khintchine, random_psd_matrix, LkParams, MatrixMeasure, ScalarMeasure};
use crate::{par, rng, Result};

/// Splits a sampled PSD verdict into the Gram, symmetry and bound aspects.
fn fold_bochner(v: &FunctionVerdict, label: serde_json::Value, gram: &mut Agg, sym: &mut Agg, bound: &mut Agg) {
    let kind = v.verdict.failure;
    let gram_ok = kind != Some(FailureKind::NegativeEigenvalue);
    gram.add(gram_ok, v.verdict.min_eigenvalue, || json!({ "subject": label, "verdict": v }));
    let sym_ok = kind != Some(FailureKind::SymmetryViolation);
    sym.add(sym_ok, v.max_symmetry_defect, || json!({ "subject": label, "verdict": v }));
    let excess = v.max_bound_excess.unwrap_or(0.0);
    let bound_ok = kind != Some(FailureKind::BoundViolation);
    bound.add(bound_ok, excess, || json!({ "subject": label, "verdict": v }));
}

pub(crate) fn bochner_suite(ctx: &mut Ctx, p: &BochnerSuiteParams) -> Result<()> {
    if p.dims.is_empty() || p.max_atoms == 0 || p.max_m < 2 {
        return Err(super::config_error("bochner suite needs dims, max_atoms ≥ 1 and max_m ≥ 2"));
    }
    let plan = ctx.plan("bochner");
    let seed = ctx.seed("measures");
    let results = par::map_range(p.count, |i| -> Result<_> {
        let mut r = rng::substream(seed, i as u64);
        let dim = p.dims[i % p.dims.len()];
        let atoms = r.random_range(1..=p.max_atoms);
        let mu = ScalarMeasure::random_nonnegative(&mut r, dim, atoms, p.spread, None);
        let scalar = psd::test_psd_function(&bochner_scalar(&mu)?, &plan)?;
        let m = r.random_range(2..=p.max_m);
        let atoms = r.random_range(1..=p.max_atoms);
        let mm = MatrixMeasure::random_psd(&mut r, dim, m, atoms, p.spread);
        let matrix = psd::test_psd_matrix_function(&bochner_matrix(&mm)?, &plan)?;
        Ok((scalar, matrix))
    });
    let mut scalar_gram = Agg::min("scalar-gram", plan.tol);
    let mut matrix_gram = Agg::min("matrix-gram", plan.tol);
    let mut sym = Agg::max("symmetry", plan.sym_tol);
    let mut bound = Agg::max("boundedness", plan.bound_tol);
    for (i, r) in results.into_iter().enumerate() {
        let (s, m) = r?;
        ctx.record("scalar-gram", i, s.verdict.min_eigenvalue);
        ctx.record("matrix-gram", i, m.verdict.min_eigenvalue);
        fold_bochner(&s, json!({ "measure": i, "weights": "scalar" }), &mut scalar_gram, &mut sym, &mut bound);
        fold_bochner(&m, json!({ "measure": i, "weights": "matrix" }), &mut matrix_gram, &mut sym, &mut bound);
    }
    for agg in [scalar_gram, matrix_gram, sym, bound] {
        ctx.push(agg.finish());
    }
    Ok(())
}

pub(crate) fn lk_suite(ctx: &mut Ctx, p: &LkSuiteParams) -> Result<()> {
    if p.dim != ctx.grid().dim() {
        return Err(super::config_error("lk-suite dimension must match the grid"));
    }
    let seed = ctx.seed("lk-params");
    let members: Vec<(LkParams, ScalarSymbol)> = (0..p.count)
        .map(|i| {
            let params = LkParams::random(&mut rng::substream(seed, i as u64), p.dim, p.a_min);
            let f = levy_khintchine(&params)?;
            Ok((params, f))
        })
        .collect::<Result<_>>()?;

    let plan = ctx.plan("cpsd");
    let mut cpsd = Agg::min("cpsd", plan.tol);
    for (i, (_, f)) in members.iter().enumerate() {
        add_verdict(&mut cpsd, json!(i), &psd::test_cpsd_function(f, &plan)?);
    }
    ctx.push(cpsd.finish());

    let tol = ctx.tol().positivity;
    for &t in &p.t {
        let name = format!("t={t}/semigroup-psd");
        let plan = ctx.plan(&name);
        let mut agg = Agg::min(&name, plan.tol);
        for (i, (_, f)) in members.iter().enumerate() {
            add_verdict(&mut agg, json!(i), &psd::test_psd_function(&f.exp_scaled(t), &plan)?);
        }
        ctx.push(agg.finish());

        let name = format!("t={t}/positivity");
        let mut pos = Agg::min(&name, tol);
        for (i, (_, f)) in members.iter().enumerate() {
            let g = MatrixSymbol::from_scalar(f.exp_scaled(t));
            let seed = rng::derive_seed(ctx.seed(&name), &i.to_string());
            let outcomes = positivity_ensemble(ctx, &g, ctx.grid(), p.fields, seed, None)?;
            fold_positivity(ctx, &name, json!(i), outcomes, &mut pos, None);
        }
        ctx.push(pos.finish());
    }
    Ok(())
}

pub(crate) fn schur_suite(ctx: &mut Ctx, p: &SchurSuiteParams) -> Result<()> {
    if p.min_size == 0 || p.min_size > p.max_size {
        return Err(super::config_error("schur suite needs 1 ≤ min_size ≤ max_size"));
    }
    let tol = ctx.tol().schur;
    let seed = ctx.seed("schur");
    let results = par::map_range(p.count, |i| -> Result<_> {
        let mut r = rng::substream(seed, i as u64);
        let n = r.random_range(p.min_size..=p.max_size);
        let a = random_psd_matrix(&mut r, n);
        let b = random_psd_matrix(&mut r, n);
        let h = psd::hadamard(&a, &b)?;
        let scale = linalg::operator_norm(&h).max(f64::MIN_POSITIVE);
        Ok((n, psd::hermitian_min_eig(&h)? / scale))
    });
    let mut agg = Agg::min("hadamard-psd", tol);
    for (i, r) in results.into_iter().enumerate() {
        let (n, ratio) = r?;
        ctx.record("hadamard-psd", i, ratio);
        agg.add(ratio >= -tol, ratio, || json!({ "trial": i, "size": n, "relative_min_eigenvalue": ratio }));
    }
    ctx.push(agg.finish());
    Ok(())
}

pub(crate) fn norm_suite(ctx: &mut Ctx, p: &NormSuiteParams) -> Result<()> {
    let grid = ctx.grid().clone();
    let tol = ctx.tol().clone();
    let n = grid.dim();

    // Roundtrip of a seeded random complex field.
    let mut r = rng::substream(ctx.seed("roundtrip"), 0);
    let values = (0..grid.len()).map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
    let f = GridField::new(grid.clone(), vec![values])?;
    let back = dft_inverse(&dft_forward(&f));
    let err = back.combine(1.0.into(), &f, (-1.0).into())?.sup_norm() / f.sup_norm();
    ctx.push(crate::harness::Check::new("roundtrip", err <= tol.roundtrip, err, tol.roundtrip));

    // Gaussian kernel: ∫ e^{-|x|²/2} = (2π)^{n/2}.
    let k = kernel_and_tv(&ScalarSymbol::gaussian(n, 1.0), &grid)?;
    let expected = (2.0 * PI).powf(n as f64 / 2.0);
    let err = (k.tv - expected).abs();
    ctx.push(
        crate::harness::Check::new("gaussian-tv", err <= tol.kernel_tv, err, tol.kernel_tv)
            .with_witness(json!({ "tv": k.tv, "expected": expected })),
    );

    // Constant (2π)^{-n/2} is the transform of δ₀: a discrete delta of unit mass.
    let k = kernel_and_tv(&ScalarSymbol::constant(n, C64::new((2.0 * PI).powf(-(n as f64) / 2.0), 0.0)), &grid)?;
    let err = (k.tv - 1.0).abs();
    ctx.push(
        crate::harness::Check::new("delta-tv", err <= tol.delta_tv, err, tol.delta_tv)
            .with_witness(json!({ "tv": k.tv })),
    );

    // cos(ξ) acts as ½(τ₁ + τ₋₁): unit operator norm on L¹.
    let cg = &p.cos_grid;
    let mut freq = vec![0.0; cg.dim()];
    freq[0] = 1.0;
    let k = kernel_and_tv(&ScalarSymbol::cosine(freq), cg)?;
    let err = (k.l1_operator_norm - 1.0).abs();
    ctx.push(
        crate::harness::Check::new("cos-operator-norm", err <= tol.cos_norm, err, tol.cos_norm)
            .with_witness(json!({ "l1_operator_norm": k.l1_operator_norm, "kernel_tv": k.tv, "grid": cg })),
    );

    // L² norm: Parseval ratio never exceeds the symbol supremum, which never
    // exceeds the L¹ bound.
    let g = MatrixSymbol::from_scalar(ScalarSymbol::gaussian(n, 1.0).product(&ScalarSymbol::cosine(
        std::iter::once(2.0).chain(std::iter::repeat(0.0)).take(n).collect(),
    )));
    let rep = l2_norm_bound(&g, &grid, p.fields, ctx.seed("parseval"))?;
    let excess = rep.parseval_ratio - rep.sup_symbol;
    ctx.push(
        crate::harness::Check::new("parseval-ratio", excess <= tol.parseval, excess, tol.parseval)
            .with_witness(json!(rep)),
    );
    let excess = rep.sup_symbol - rep.tv_estimate;
    ctx.push(
        crate::harness::Check::new("sup-le-tv", excess <= tol.parseval, excess, tol.parseval).with_witness(json!(rep)),
    );
    Ok(())
}
