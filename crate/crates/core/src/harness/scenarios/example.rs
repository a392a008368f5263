//! The 2×2 family `F₀ = [[a, b], [b, a]]`: conditional positivity of `a`,
//! the block (Mlak) condition, the closed-form exponential, block PSD and
//! grid positivity of `exp(tF₀)`, and the quadratic-form decomposition.

use rand::Rng;
use serde_json::json;

use super::{add_verdict, fold_positivity, positivity_ensemble, sample_points, Agg, Ctx};
use crate::harness::config::TwoComponentParams;
use crate::harness::Check;
use crate::linalg::{self, max_abs, C64};
use crate::psd;
use crate::symbol::ScalarSymbol;
use crate::synth::{example_f0, exp_f0_closed_form, hyperbolic_factor, matrix_exp};
use crate::{rng, Error, Result};

pub(crate) fn verify_two_component(ctx: &mut Ctx, p: &TwoComponentParams) -> Result<()> {
    let a = p.a.build()?;
    if a.dim() != ctx.grid().dim() {
        return Err(super::config_error("symbol and grid dimensions differ"));
    }
    let f0 = example_f0(&a, p.b)?;
    let tol = ctx.tol().clone();

    let plan = ctx.plan("a-cpsd");
    let r = psd::test_cpsd_function(&a, &plan).map(|v| {
        let mut agg = Agg::min("a-cpsd", plan.tol);
        add_verdict(&mut agg, json!("a"), &v);
        agg.finish()
    });
    ctx.guard("a-cpsd", plan.tol, r)?;

    let plan = ctx.plan("mlak-cpsd");
    let r = psd::test_cpsd_matrix_function(&f0, &plan).map(|v| {
        let mut agg = Agg::min("mlak-cpsd", plan.tol);
        add_verdict(&mut agg, json!("F0"), &v);
        agg.finish()
    });
    ctx.guard("mlak-cpsd", plan.tol, r)?;

    let mut bs = vec![p.b];
    for &b in &p.b_sweep {
        if !bs.contains(&b) {
            bs.push(b);
        }
    }
    ctx.guard("closed-form", tol.closed_form, closed_form_check(ctx, p, &a, &bs))?;
    ctx.push(eigen_check(p, &bs, tol.eigen));

    for &t in &p.t {
        let name = format!("t={t}/exp-block-psd");
        let plan = ctx.plan(&name);
        let r = matrix_exp(&f0, t).and_then(|e| psd::test_psd_matrix_function(&e, &plan)).map(|v| {
            let mut agg = Agg::min(&name, plan.tol);
            add_verdict(&mut agg, json!({ "t": t }), &v);
            agg.finish()
        });
        ctx.guard(&name, plan.tol, r)?;

        let name = format!("t={t}/positivity");
        let mut pos = Agg::min(&name, tol.positivity);
        let outcomes = matrix_exp(&f0, t)
            .and_then(|e| positivity_ensemble(ctx, &e, ctx.grid(), p.fields, ctx.seed(&name), None));
        match outcomes {
            Ok(o) => fold_positivity(ctx, &name, json!(t), o, &mut pos, None),
            Err(e) if e.is_math() => pos.fail(json!({ "error": e.to_string() })),
            Err(e) => return Err(e),
        }
        ctx.push(pos.finish());
    }

    ctx.guard("decomposition", tol.decomposition, decomposition_check(ctx, &a, p.b))
}

/// `exp(tF₀)` by scaling and squaring against the closed form, relative to
/// the largest closed-form entry over the sampled points.
fn closed_form_check(ctx: &Ctx, p: &TwoComponentParams, a: &ScalarSymbol, bs: &[f64]) -> Result<Check> {
    let tol = ctx.tol().closed_form;
    let xs = sample_points(ctx.seed("closed-form"), a.dim(), p.samples, p.radius);
    let mut agg = Agg::max("closed-form", tol);
    for &b in bs {
        let f0 = example_f0(a, b)?;
        for &t in &p.t {
            let numeric = matrix_exp(&f0, t)?;
            let closed = exp_f0_closed_form(a, b, t)?;
            let pairs: Vec<_> = xs.iter().map(|x| (numeric.eval(x), closed.eval(x))).collect();
            let scale = pairs.iter().map(|(_, c)| max_abs(c)).fold(f64::MIN_POSITIVE, f64::max);
            for (x, (n, c)) in xs.iter().zip(&pairs) {
                linalg::ensure_finite(n, "matrix exponential")?;
                linalg::ensure_finite(c, "closed-form exponential")?;
                let err = max_abs(&(n - c)) / scale;
                agg.add(err <= tol, err, || json!({ "t": t, "b": b, "x": x, "error": err, "scale": scale }));
            }
        }
    }
    Ok(agg.finish())
}

/// Eigenvalues of `[[cosh tb, sinh tb], [sinh tb, cosh tb]]` against `e^{±tb}`.
fn eigen_check(p: &TwoComponentParams, bs: &[f64], tol: f64) -> Check {
    let mut agg = Agg::max("factor-eigenvalues", tol);
    for &b in bs {
        for &t in &p.t {
            let (vals, _) = linalg::hermitian_eigen(&hyperbolic_factor(b, t));
            let expected = [(-t * b).exp(), (t * b).exp()];
            let err = vals.iter().zip(expected).map(|(v, e)| (v - e).abs()).fold(0.0, f64::max)
                / expected[1].max(1.0);
            agg.add(err <= tol && vals.iter().all(|&v| v >= 0.0), err, || {
                json!({ "t": t, "b": b, "eigenvalues": vals, "expected": expected })
            });
        }
    }
    agg.finish()
}

/// For `Σ c_p = 0` the block form of `F₀` equals the scalar form of `a`
/// alone: the constant coupling contributes `b (Σc, J Σc) = 0`.
fn decomposition_check(ctx: &Ctx, a: &ScalarSymbol, b: f64) -> Result<Check> {
    let tol = ctx.tol().decomposition;
    let f0 = example_f0(a, b)?;
    let plan = ctx.plan("decomposition");
    let seed = ctx.seed("decomposition-coefficients");
    let mut agg = Agg::max("decomposition", tol);
    for trial in 0..plan.trials {
        let pts = plan.point_set(a.dim(), trial);
        let n = pts.len();
        let mut r = rng::substream(seed, trial as u64);
        let mut c: Vec<C64> = (0..2 * n).map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
        for comp in 0..2 {
            let mean = (0..n).map(|q| c[2 * q + comp]).sum::<C64>() / n as f64;
            for q in 0..n {
                c[2 * q + comp] -= mean;
            }
        }
        let total = psd::block_quadratic_form(&psd::block_gram(&f0, &pts)?, &c);
        let mut scalar = C64::new(0.0, 0.0);
        for (pi, xp) in pts.points().iter().enumerate() {
            for (qi, xq) in pts.points().iter().enumerate() {
                let d: Vec<f64> = xp.iter().zip(xq).map(|(u, v)| u - v).collect();
                let inner = c[2 * pi].conj() * c[2 * qi] + c[2 * pi + 1].conj() * c[2 * qi + 1];
                scalar += C64::new(a.eval(&d).re, 0.0) * inner;
            }
        }
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::NonFinite("block quadratic form".into()));
        }
        let err = (total - scalar).norm() / scalar.norm().max(1.0);
        agg.add(err <= tol, err, || json!({ "trial": trial, "points": pts, "form": total, "scalar_part": scalar }));
    }
    Ok(agg.finish())
}
