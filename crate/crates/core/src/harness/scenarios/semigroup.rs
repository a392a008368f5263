//! Semigroups generated by matrix symbols: entrywise exponentials of
//! Lévy–Khintchine entries, diagonal generators, and genuine exponentials of
//! symbols with positive semidefinite entries.

use serde_json::json;

use super::{add_verdict, entries_psd, fold_positivity, positivity_ensemble, sample_points, Agg, Ctx};
use crate::harness::config::{LkSpec, MatrixSymbolSpec, SemigroupParams, SymbolSpec};
use crate::linalg::max_abs;
use crate::psd;
use crate::symbol::MatrixSymbol;
use crate::synth::{expm_series, hadamard_exp, matrix_exp};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flavor {
    /// `exp_H(tF)` with conditionally PSD entries bounded above.
    Hadamard,
    /// `exp(tF)` for diagonal `F` with conditionally PSD diagonal.
    Diagonal,
    /// `exp(tF)` for bounded `F` with PSD entries.
    PsdEntries,
}

fn default_symbol(flavor: Flavor, dim: usize) -> MatrixSymbolSpec {
    match flavor {
        Flavor::Hadamard => MatrixSymbolSpec::LkMatrix {
            entries: vec![vec![LkSpec::quadratic(dim, 1.0); 2]; 2],
        },
        Flavor::Diagonal => MatrixSymbolSpec::Diagonal {
            diagonal: vec![
                SymbolSpec::NegQuadratic { dim },
                SymbolSpec::LevyKhintchine(LkSpec::quadratic(dim, 0.5)),
            ],
        },
        Flavor::PsdEntries => MatrixSymbolSpec::Entries {
            entries: vec![
                vec![SymbolSpec::Gaussian { dim, width: 1.0 }, SymbolSpec::Gaussian { dim, width: 2.0 }],
                vec![SymbolSpec::Gaussian { dim, width: 2.0 }, SymbolSpec::Gaussian { dim, width: 1.0 }],
            ],
        },
    }
}

pub(crate) fn verify_semigroup(ctx: &mut Ctx, flavor: Flavor, p: &SemigroupParams) -> Result<()> {
    let spec = p.symbol.clone().unwrap_or_else(|| default_symbol(flavor, ctx.grid().dim()));
    let f = spec.build()?;
    if f.dim() != ctx.grid().dim() {
        return Err(super::config_error("symbol and grid dimensions differ"));
    }
    let m = f.size();

    // Hypotheses on the generator.
    let plan = ctx.plan("hypothesis");
    let mut hyp = Agg::min("hypothesis", plan.tol);
    for j in 0..m {
        for k in 0..m {
            let off_diagonal = j != k;
            let entry = f.entry(j, k);
            let v = match flavor {
                Flavor::Hadamard => psd::test_cpsd_function(&entry, &plan)?,
                Flavor::Diagonal if off_diagonal => {
                    let zero = sample_points(ctx.seed("diagonal"), f.dim(), 20, plan.radius)
                        .iter()
                        .all(|x| entry.eval(x).norm() == 0.0);
                    if !zero {
                        hyp.fail(json!({ "entry": [j, k], "reason": "generator is not diagonal" }));
                    }
                    continue;
                }
                Flavor::Diagonal => psd::test_cpsd_function(&entry, &plan)?,
                Flavor::PsdEntries => psd::test_psd_function(&entry, &plan)?,
            };
            add_verdict(&mut hyp, json!({ "entry": [j, k] }), &v);
        }
    }
    if flavor == Flavor::PsdEntries && f.sup_norm().is_none() {
        hyp.fail(json!({ "reason": "generator is not flagged bounded" }));
    }
    ctx.push(hyp.finish());

    let tol = ctx.tol().clone();
    for &t in &p.t {
        let name = |what: &str| format!("t={t}/{what}");
        let semigroup = match flavor {
            Flavor::Hadamard => hadamard_exp(&f, t)?,
            Flavor::Diagonal | Flavor::PsdEntries => matrix_exp(&f, t)?,
        };

        let plan = ctx.plan(&name("entries-psd"));
        let mut agg = Agg::min(&name("entries-psd"), plan.tol);
        let r = entries_psd(&mut agg, json!(t), &semigroup, &plan).map(|_| agg.finish());
        ctx.guard(&name("entries-psd"), plan.tol, r)?;

        if flavor == Flavor::PsdEntries {
            ctx.guard(&name("series"), tol.series, series_check(ctx, &f, t, &name("series")))?;
        }

        let check = name("positivity");
        let mut pos = Agg::min(&check, tol.positivity);
        match positivity_ensemble(ctx, &semigroup, ctx.grid(), p.fields, ctx.seed(&check), None) {
            Ok(outcomes) => fold_positivity(ctx, &check, json!(t), outcomes, &mut pos, None),
            Err(e) if e.is_math() => pos.fail(json!({ "error": e.to_string() })),
            Err(e) => return Err(e),
        }
        ctx.push(pos.finish());
    }
    Ok(())
}

/// Truncated power series `Σ_ℓ (tF)^ℓ/ℓ!` (at least 60 terms) against scaling-and-squaring
/// at three sampled points. Every partial sum is a sum of products of PSD
/// entries, so agreement also certifies the entries of `exp(tF)`.
fn series_check(ctx: &Ctx, f: &MatrixSymbol, t: f64, label: &str) -> Result<crate::harness::Check> {
    let tol = ctx.tol().series;
    let e = matrix_exp(f, t)?;
    let mut agg = Agg::max(label, tol);
    for x in sample_points(ctx.seed(label), f.dim(), 3, ctx.cfg.sampling.radius) {
        let a = e.eval(&x);
        let tf = f.eval(&x).scale(t);
        let terms = 60 + 3 * (max_abs(&tf) * f.size() as f64).ceil() as usize;
        let b = expm_series(&tf, terms);
        let err = max_abs(&(&a - &b)) / max_abs(&b).max(1.0);
        agg.add(err <= tol, err, || json!({ "x": x, "error": err }));
    }
    Ok(agg.finish())
}
