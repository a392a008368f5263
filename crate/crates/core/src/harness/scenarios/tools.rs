//! Single-purpose commands: sampled (C)PSD tests, synthesis, multiplier
//! application, norm estimates, and the falsification probe.

use std::fs::File;
use std::io::{BufReader, BufWriter};

use serde_json::json;

use super::{add_verdict, mollifier_probe, Agg, Ctx};
use crate::engine::{io, kernel_and_tv, l2_norm_bound, positivity_of, positivity_trial};
use crate::harness::config::{
    FalsifyParams, NormsParams, SymbolTestParams, SynthBochnerParams, SynthLkParams, ApplyParams, MatrixSymbolSpec,
};
use crate::harness::fields::random_nonnegative_field;
use crate::harness::Check;
use crate::linalg;
use crate::psd::{self, SamplingPlan};
use crate::symbol::MatrixSymbol;
use crate::synth::{bochner_scalar, levy_khintchine, ScalarMeasure};
use crate::Result;

fn verdict_check(name: &str, tol: f64, label: serde_json::Value, v: &psd::FunctionVerdict) -> Check {
    let mut agg = Agg::min(name, tol);
    add_verdict(&mut agg, label, v);
    agg.finish()
}

pub(crate) fn test_symbol(ctx: &mut Ctx, p: &SymbolTestParams, conditional: bool) -> Result<()> {
    let name = if conditional { "cpsd" } else { "psd" };
    let plan = ctx.plan(name);
    let r = match (&p.matrix, &p.symbol) {
        (Some(m), _) => {
            let g = m.build()?;
            if conditional {
                psd::test_cpsd_matrix_function(&g, &plan)
            } else {
                psd::test_psd_matrix_function(&g, &plan)
            }
        }
        (None, Some(s)) => {
            let f = s.build()?;
            if conditional {
                psd::test_cpsd_function(&f, &plan)
            } else {
                psd::test_psd_function(&f, &plan)
            }
        }
        (None, None) => return Err(super::config_error("test needs `symbol` or `matrix`")),
    };
    let r = r.map(|v| verdict_check(name, plan.tol, json!("symbol"), &v));
    ctx.guard(name, plan.tol, r)
}

pub(crate) fn synth_bochner(ctx: &mut Ctx, p: &SynthBochnerParams) -> Result<()> {
    let built: Result<MatrixSymbol> = if p.matrix_atoms.is_empty() {
        ScalarMeasure::from_real(p.dim, p.atoms.iter().map(|a| (a.location.clone(), a.weight)))
            .and_then(|mu| bochner_scalar(&mu))
            .map(MatrixSymbol::from_scalar)
    } else {
        let spec = MatrixSymbolSpec::BochnerMatrix { dim: p.dim, atoms: p.matrix_atoms.clone() };
        spec.build()
    };
    let g = match built {
        Ok(g) => g,
        Err(e) if e.is_math() => {
            ctx.push(Check::errored("synthesis", 0.0, &e));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let at_origin = linalg::operator_norm(&g.eval(&vec![0.0; p.dim]));
    ctx.push(Check::new("synthesis", true, at_origin, 0.0).with_witness(json!({ "norm_at_origin": at_origin })));
    let plan = ctx.plan("psd");
    let r = psd::test_psd_matrix_function(&g, &plan).map(|v| verdict_check("psd", plan.tol, json!("F"), &v));
    ctx.guard("psd", plan.tol, r)
}

pub(crate) fn synth_lk(ctx: &mut Ctx, p: &SynthLkParams) -> Result<()> {
    let f = match p.params.build().and_then(|params| levy_khintchine(&params)) {
        Ok(f) => f,
        Err(e) if e.is_math() => {
            ctx.push(Check::errored("synthesis", 0.0, &e));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    ctx.push(Check::new("synthesis", true, f.re_upper().unwrap_or(f64::NAN), 0.0));
    let plan = ctx.plan("cpsd");
    let r = psd::test_cpsd_function(&f, &plan).map(|v| verdict_check("cpsd", plan.tol, json!("F"), &v));
    ctx.guard("cpsd", plan.tol, r)?;
    for &t in &p.t {
        let name = format!("t={t}/semigroup-psd");
        let plan = ctx.plan(&name);
        let r = psd::test_psd_function(&f.exp_scaled(t), &plan).map(|v| verdict_check(&name, plan.tol, json!(t), &v));
        ctx.guard(&name, plan.tol, r)?;
    }
    Ok(())
}

pub(crate) fn apply(ctx: &mut Ctx, p: &ApplyParams) -> Result<()> {
    let g = p.symbol.build()?;
    let f = match &p.input {
        Some(path) => io::read_binary(BufReader::new(File::open(path)?))?,
        None => random_nonnegative_field(ctx.grid(), g.size(), ctx.seed("field"), 0)?,
    };
    if f.m() != g.size() || f.spec().dim() != g.dim() {
        return Err(super::config_error("input field does not match the symbol's size or dimension"));
    }
    let tol = ctx.tol().positivity;
    let out = match crate::engine::apply_multiplier(&g, &f) {
        Ok(out) => out,
        Err(e) if e.is_math() => {
            ctx.push(Check::errored("apply", tol, &e));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    if f.is_nonnegative(tol) {
        let v = positivity_trial(&g, &f, tol)?;
        let ratio = v.min_real / v.sup_norm.max(f64::MIN_POSITIVE);
        let c = Check::new("positivity", v.passed, ratio, tol);
        ctx.push(if v.passed { c } else { c.with_witness(json!(v)) });
    } else {
        let v = positivity_of(&out, tol);
        ctx.push(
            Check::new("apply", true, out.sup_norm(), tol)
                .with_witness(json!({ "input_nonnegative": false, "min_real": v.min_real, "max_imag": v.max_imag })),
        );
    }
    for (j, c) in out.components().iter().enumerate() {
        let min = c.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        ctx.record("component-min", j, min);
    }
    if let Some(path) = &p.output {
        io::write_binary(&out, BufWriter::new(File::create(path)?))?;
    }
    if let Some(path) = &p.output_csv {
        io::write_csv_slice(&out, BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

pub(crate) fn norms(ctx: &mut Ctx, p: &NormsParams) -> Result<()> {
    let g = p.symbol.build()?;
    let tol = ctx.tol().parseval;
    let rep = match l2_norm_bound(&g, ctx.grid(), p.fields, ctx.seed("parseval")) {
        Ok(r) => r,
        Err(e) if e.is_math() => {
            ctx.push(Check::errored("parseval-ratio", tol, &e));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let mut kernel_tv = vec![];
    for j in 0..g.size() {
        for k in 0..g.size() {
            let kt = kernel_and_tv(&g.entry(j, k), ctx.grid())?;
            kernel_tv.push(json!({ "entry": [j, k], "tv": kt.tv, "l1_operator_norm": kt.l1_operator_norm }));
        }
    }
    let witness = json!({ "report": rep, "entries": kernel_tv });
    let excess = rep.parseval_ratio - rep.sup_symbol;
    ctx.push(Check::new("parseval-ratio", excess <= tol, excess, tol).with_witness(witness.clone()));
    let excess = rep.sup_symbol - rep.tv_estimate;
    ctx.push(Check::new("sup-le-tv", excess <= tol, excess, tol).with_witness(witness));
    Ok(())
}

/// Tries to refute positivity preservation of a scalar multiplier: sign
/// scan of its kernel, the mollifier probe, and sampled Grams of `G·φ_ε^`.
pub(crate) fn falsify(ctx: &mut Ctx, p: &FalsifyParams) -> Result<()> {
    let f = p.symbol.build()?;
    if f.dim() != ctx.grid().dim() {
        return Err(super::config_error("symbol and grid dimensions differ"));
    }
    let tol = ctx.tol().clone();

    let scan = kernel_and_tv(&f, ctx.grid()).map(|k| {
        let kernel = k.kernel.component(0);
        let peak = kernel.iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max);
        let (idx, min) = kernel
            .iter()
            .enumerate()
            .map(|(i, z)| (i, z.re))
            .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        let ratio = min / peak;
        let c = Check::new("kernel-sign-scan", ratio >= -tol.falsify, ratio, tol.falsify);
        if ratio >= -tol.falsify {
            c
        } else {
            c.with_witness(json!({ "position": ctx.grid().point(idx), "value": kernel[idx], "peak": peak }))
        }
    });
    ctx.guard("kernel-sign-scan", tol.falsify, scan)?;

    let plan = ctx.plan("probe-gram").with_trials(p.probe_trials.max(1)).with_radius(p.radius);
    let plan = SamplingPlan { tol: tol.gram_falsify, ..plan };
    let g = MatrixSymbol::from_scalar(f);
    let mut pos = Agg::min("probe-positivity", tol.falsify);
    let mut gram = Agg::min("probe-gram", tol.gram_falsify);
    match mollifier_probe(ctx, json!(0), &g, &p.eps_sweep, &plan, &mut pos, &mut gram) {
        Ok(()) => {}
        Err(e) if e.is_math() => pos.fail(json!({ "error": e.to_string() })),
        Err(e) => return Err(e),
    }
    ctx.push(pos.finish());
    ctx.push(gram.finish());
    Ok(())
}

