//! Scenario configuration: JSON with a `version`, a mandatory `seed`, and a
//! `scenario` object tagged by `kind`. Symbols are given by family name plus
//! parameters.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::engine::GridSpec;
use crate::linalg::{C64, CMatrix};
use crate::psd::SamplingPlan;
use crate::symbol::{MatrixSymbol, ScalarSymbol};
use crate::synth::{self, Atom, LkParams, MatrixMeasure, ScalarMeasure};
use crate::{Error, Result};

pub const CONFIG_VERSION: u32 = 1;

fn one() -> usize {
    1
}

fn unit() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

/// A real-weighted atom `w·δ_y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub location: Vec<f64>,
    pub weight: f64,
}

/// A matrix-weighted atom; `weight_im` is the optional imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixAtomSpec {
    pub location: Vec<f64>,
    pub weight: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_im: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LkSpec {
    #[serde(default = "one")]
    pub dim: usize,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    /// Real symmetric `A`; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub nu: Vec<AtomSpec>,
}

impl LkSpec {
    /// `F(x) = -coef·|x|²`.
    pub fn quadratic(dim: usize, coef: f64) -> Self {
        let a = (0..dim).map(|j| (0..dim).map(|k| if j == k { coef } else { 0.0 }).collect()).collect();
        Self { dim, alpha: 0.0, beta: None, a: Some(a), nu: vec![] }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, alpha: 0.0, beta: None, a: None, nu: vec![] }
    }

    pub fn build(&self) -> Result<LkParams> {
        let n = self.dim;
        let beta = self.beta.clone().unwrap_or_else(|| vec![0.0; n]);
        if beta.len() != n {
            return Err(Error::ConfigInvalid(format!("beta has length {}, expected {n}", beta.len())));
        }
        let a = match &self.a {
            Some(rows) => real_matrix(rows, n, "A")?,
            None => CMatrix::zeros(n, n),
        };
        let nu = ScalarMeasure::from_real(n, self.nu.iter().map(|a| (a.location.clone(), a.weight)))?;
        Ok(LkParams { alpha: self.alpha, beta, a, nu })
    }
}

fn real_matrix(rows: &[Vec<f64>], n: usize, what: &str) -> Result<CMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::ConfigInvalid(format!("{what} must be {n}×{n}")));
    }
    Ok(CMatrix::from_fn(n, n, |j, k| C64::new(rows[j][k], 0.0)))
}

/// Scalar symbol by constructor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SymbolSpec {
    /// `exp(-|x|²/(2 width²))`.
    Gaussian {
        #[serde(default = "one")]
        dim: usize,
        #[serde(default = "unit")]
        width: f64,
    },
    /// `cos(freq·x)`.
    Cosine { freq: Vec<f64> },
    /// `sin(freq·x)`.
    Sine { freq: Vec<f64> },
    /// `coef·|x|²`.
    Quadratic {
        #[serde(default = "one")]
        dim: usize,
        coef: f64,
    },
    /// `-|x|²`.
    NegQuadratic {
        #[serde(default = "one")]
        dim: usize,
    },
    /// `+|x|²`.
    PosQuadratic {
        #[serde(default = "one")]
        dim: usize,
    },
    /// `i v·x`.
    Drift { v: Vec<f64> },
    Constant {
        #[serde(default = "one")]
        dim: usize,
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Bump {
        #[serde(default = "one")]
        dim: usize,
        #[serde(default = "unit")]
        radius: f64,
        #[serde(default = "half")]
        plateau: f64,
    },
    Zero {
        #[serde(default = "one")]
        dim: usize,
    },
    /// Transform of `Σ w_j δ_{y_j}`.
    Bochner {
        #[serde(default = "one")]
        dim: usize,
        atoms: Vec<AtomSpec>,
    },
    LevyKhintchine(LkSpec),
    Product { factors: Vec<SymbolSpec> },
}

impl SymbolSpec {
    /// Short family names usable on the command line.
    pub fn from_name(name: &str, dim: usize) -> Result<Self> {
        let unit_vec = || {
            let mut v = vec![0.0; dim];
            v[0] = 1.0;
            v
        };
        Ok(match name {
            "gaussian" => SymbolSpec::Gaussian { dim, width: 1.0 },
            "cos" | "cosine" => SymbolSpec::Cosine { freq: unit_vec() },
            "sin" | "sine" => SymbolSpec::Sine { freq: unit_vec() },
            "neg-quadratic" => SymbolSpec::NegQuadratic { dim },
            "pos-quadratic" => SymbolSpec::PosQuadratic { dim },
            "drift" => SymbolSpec::Drift { v: unit_vec() },
            "bump" => SymbolSpec::Bump { dim, radius: 1.0, plateau: 0.5 },
            "zero" => SymbolSpec::Zero { dim },
            "one" => SymbolSpec::Constant { dim, re: 1.0, im: 0.0 },
            _ => {
                return Err(Error::ConfigInvalid(format!(
                    "unknown symbol family {name:?}; expected one of gaussian, cos, sin, neg-quadratic, \
                     pos-quadratic, drift, bump, zero, one"
                )))
            }
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            SymbolSpec::Gaussian { dim, .. }
            | SymbolSpec::Quadratic { dim, .. }
            | SymbolSpec::NegQuadratic { dim }
            | SymbolSpec::PosQuadratic { dim }
            | SymbolSpec::Constant { dim, .. }
            | SymbolSpec::Bump { dim, .. }
            | SymbolSpec::Zero { dim }
            | SymbolSpec::Bochner { dim, .. } => *dim,
            SymbolSpec::Cosine { freq } | SymbolSpec::Sine { freq } => freq.len(),
            SymbolSpec::Drift { v } => v.len(),
            SymbolSpec::LevyKhintchine(p) => p.dim,
            SymbolSpec::Product { factors } => factors.first().map_or(0, |f| f.dim()),
        }
    }

    pub fn build(&self) -> Result<ScalarSymbol> {
        let dim = self.dim();
        if !(1..=3).contains(&dim) {
            return Err(Error::ConfigInvalid(format!("symbol dimension {dim} not in 1..=3")));
        }
        Ok(match self {
            SymbolSpec::Gaussian { dim, width } => {
                if width.is_nan() || *width <= 0.0 {
                    return Err(Error::ConfigInvalid("gaussian width must be positive".into()));
                }
                ScalarSymbol::gaussian(*dim, *width)
            }
            SymbolSpec::Cosine { freq } => ScalarSymbol::cosine(freq.clone()),
            SymbolSpec::Sine { freq } => ScalarSymbol::sine(freq.clone()),
            SymbolSpec::Quadratic { dim, coef } => ScalarSymbol::quadratic(*dim, *coef),
            SymbolSpec::NegQuadratic { dim } => ScalarSymbol::quadratic(*dim, -1.0),
            SymbolSpec::PosQuadratic { dim } => ScalarSymbol::quadratic(*dim, 1.0),
            SymbolSpec::Drift { v } => ScalarSymbol::drift(v.clone()),
            SymbolSpec::Constant { dim, re, im } => ScalarSymbol::constant(*dim, C64::new(*re, *im)),
            SymbolSpec::Bump { dim, radius, plateau } => {
                if !(*radius > 0.0 && *plateau > 0.0 && *plateau < 1.0) {
                    return Err(Error::ConfigInvalid("bump needs radius > 0 and plateau in (0, 1)".into()));
                }
                ScalarSymbol::bump(*dim, *radius, *plateau)
            }
            SymbolSpec::Zero { dim } => ScalarSymbol::zero(*dim),
            SymbolSpec::Bochner { .. } => synth::bochner_scalar(&self.measure()?.expect("bochner has a measure"))?,
            SymbolSpec::LevyKhintchine(p) => synth::levy_khintchine(&p.build()?)?,
            SymbolSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it.next().ok_or_else(|| Error::ConfigInvalid("empty product".into()))?;
                let mut out = first.build()?;
                for f in it {
                    let g = f.build()?;
                    if g.dim() != out.dim() {
                        return Err(Error::ConfigInvalid("product factors have different dimensions".into()));
                    }
                    out = out.product(&g);
                }
                out
            }
        })
    }

    /// The atomic measure `μ` with `F = (2π)^{-n/2}·Σ w e^{-ix·y}` when the
    /// symbol is an atomic Bochner transform (cosines included).
    pub fn measure(&self) -> Result<Option<ScalarMeasure>> {
        Ok(match self {
            SymbolSpec::Bochner { dim, atoms } => {
                Some(ScalarMeasure::from_real(*dim, atoms.iter().map(|a| (a.location.clone(), a.weight)))?)
            }
            SymbolSpec::Cosine { freq } => {
                // cos(v·x) = (2π)^{n/2}·transform of ½(δ_v + δ_{-v})
                let w = 0.5 * (2.0 * PI).powf(freq.len() as f64 / 2.0);
                let neg: Vec<f64> = freq.iter().map(|v| -v).collect();
                Some(ScalarMeasure::from_real(freq.len(), [(freq.clone(), w), (neg, w)])?)
            }
            SymbolSpec::Constant { dim, re, im } if *im == 0.0 && *re >= 0.0 => {
                let w = re * (2.0 * PI).powf(*dim as f64 / 2.0);
                Some(ScalarMeasure::from_real(*dim, [(vec![0.0; *dim], w)])?)
            }
            SymbolSpec::Zero { dim } => Some(ScalarMeasure::empty(*dim)),
            _ => None,
        })
    }
}

/// Matrix symbol by constructor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MatrixSymbolSpec {
    /// `1×1` wrapper of a scalar symbol.
    Scalar { symbol: SymbolSpec },
    Entries { entries: Vec<Vec<SymbolSpec>> },
    Diagonal { diagonal: Vec<SymbolSpec> },
    BochnerMatrix {
        #[serde(default = "one")]
        dim: usize,
        atoms: Vec<MatrixAtomSpec>,
    },
    LkMatrix { entries: Vec<Vec<LkSpec>> },
    ExampleF0 { a: SymbolSpec, b: f64 },
}

impl MatrixSymbolSpec {
    pub fn build(&self) -> Result<MatrixSymbol> {
        match self {
            MatrixSymbolSpec::Scalar { symbol } => Ok(MatrixSymbol::from_scalar(symbol.build()?)),
            MatrixSymbolSpec::Entries { entries } => {
                let m = entries.len();
                if m == 0 || entries.iter().any(|r| r.len() != m) {
                    return Err(Error::ConfigInvalid("entries must form a nonempty square array".into()));
                }
                let cells = entries
                    .iter()
                    .map(|r| r.iter().map(SymbolSpec::build).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let dim = cells[0][0].dim();
                if cells.iter().flatten().any(|c| c.dim() != dim) {
                    return Err(Error::ConfigInvalid("entries have different dimensions".into()));
                }
                Ok(MatrixSymbol::from_entries(cells))
            }
            MatrixSymbolSpec::Diagonal { diagonal } => {
                if diagonal.is_empty() {
                    return Err(Error::ConfigInvalid("empty diagonal".into()));
                }
                let cells = diagonal.iter().map(SymbolSpec::build).collect::<Result<Vec<_>>>()?;
                if cells.iter().any(|c| c.dim() != cells[0].dim()) {
                    return Err(Error::ConfigInvalid("diagonal entries have different dimensions".into()));
                }
                Ok(MatrixSymbol::diagonal(cells))
            }
            MatrixSymbolSpec::BochnerMatrix { dim, atoms } => {
                let m = atoms.first().map_or(0, |a| a.weight.len());
                let atoms = atoms
                    .iter()
                    .map(|a| {
                        let mut w = real_matrix(&a.weight, m, "matrix weight")?;
                        if let Some(im) = &a.weight_im {
                            w += real_matrix(im, m, "matrix weight")? * C64::new(0.0, 1.0);
                        }
                        Ok(Atom { location: a.location.clone(), weight: w })
                    })
                    .collect::<Result<Vec<_>>>()?;
                synth::bochner_matrix(&MatrixMeasure::new(*dim, atoms)?)
            }
            MatrixSymbolSpec::LkMatrix { entries } => {
                let params = entries
                    .iter()
                    .map(|r| r.iter().map(LkSpec::build).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                synth::lk_matrix(&params)
            }
            MatrixSymbolSpec::ExampleF0 { a, b } => synth::example_f0(&a.build()?, *b),
        }
    }

    /// Entry measures when every entry is an atomic Bochner transform.
    pub fn entry_measures(&self) -> Result<Option<Vec<Vec<ScalarMeasure>>>> {
        let grid: Vec<Vec<SymbolSpec>> = match self {
            MatrixSymbolSpec::Scalar { symbol } => vec![vec![symbol.clone()]],
            MatrixSymbolSpec::Entries { entries } => entries.clone(),
            MatrixSymbolSpec::Diagonal { diagonal } => {
                let dim = diagonal.first().map_or(1, |d| d.dim());
                (0..diagonal.len())
                    .map(|j| {
                        (0..diagonal.len())
                            .map(|k| if j == k { diagonal[j].clone() } else { SymbolSpec::Zero { dim } })
                            .collect()
                    })
                    .collect()
            }
            _ => return Ok(None),
        };
        let mut out = vec![];
        for row in &grid {
            let mut r = vec![];
            for s in row {
                match s.measure()? {
                    Some(mu) => r.push(mu),
                    None => return Ok(None),
                }
            }
            out.push(r);
        }
        Ok(Some(out))
    }
}

/// Dyadic sweep `2^{-1}, …, 2^{-6}`.
pub fn default_eps_sweep() -> Vec<f64> {
    (1..=6).map(|k| 2f64.powi(-k)).collect()
}

fn default_t() -> Vec<f64> {
    vec![0.1, 1.0, 10.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSpec {
    /// Number of random symbols.
    pub symbols: usize,
    /// Matrix sizes, cycled over the ensemble.
    pub m: Vec<usize>,
    /// Atoms per entry measure.
    pub atoms: usize,
    /// Atoms lie in `[-spread, spread]ⁿ`, snapped to the grid lattice.
    pub spread: f64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self { symbols: 20, m: vec![2, 3], atoms: 3, spread: 5.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreservationParams {
    /// Explicit symbol; a random entrywise-Bochner ensemble when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<MatrixSymbolSpec>,
    pub ensemble: EnsembleSpec,
    /// Nonnegative test fields per symbol.
    pub fields: usize,
    /// Run the mollifier probe.
    pub probe: bool,
    pub eps_sweep: Vec<f64>,
    /// Sampled-Gram trials per probe product.
    pub probe_trials: usize,
}

impl Default for PreservationParams {
    fn default() -> Self {
        Self {
            symbol: None,
            ensemble: EnsembleSpec::default(),
            fields: 20,
            probe: true,
            eps_sweep: default_eps_sweep(),
            probe_trials: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SemigroupParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<MatrixSymbolSpec>,
    pub t: Vec<f64>,
    pub fields: usize,
}

impl Default for SemigroupParams {
    fn default() -> Self {
        Self { symbol: None, t: default_t(), fields: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoComponentParams {
    pub a: SymbolSpec,
    pub b: f64,
    pub t: Vec<f64>,
    /// Extra couplings for the closed-form comparison.
    pub b_sweep: Vec<f64>,
    /// Sample points for the closed-form comparison.
    pub samples: usize,
    /// Sample points lie in `[-radius, radius]ⁿ`.
    pub radius: f64,
    pub fields: usize,
}

impl Default for TwoComponentParams {
    fn default() -> Self {
        Self {
            a: SymbolSpec::NegQuadratic { dim: 1 },
            b: 1.0,
            t: default_t(),
            b_sweep: vec![0.0, 0.5, 1.0, 2.0],
            samples: 100,
            radius: 3.0,
            fields: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BochnerSuiteParams {
    pub count: usize,
    pub dims: Vec<usize>,
    pub max_atoms: usize,
    pub max_m: usize,
    pub spread: f64,
}

impl Default for BochnerSuiteParams {
    fn default() -> Self {
        Self { count: 100, dims: vec![1, 2], max_atoms: 5, max_m: 3, spread: 3.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LkSuiteParams {
    pub count: usize,
    pub dim: usize,
    /// Lower bound on `A`, keeping `e^{tF}` smooth on the grid.
    pub a_min: f64,
    pub t: Vec<f64>,
    pub fields: usize,
}

impl Default for LkSuiteParams {
    fn default() -> Self {
        Self { count: 10, dim: 1, a_min: 0.5, t: default_t(), fields: 5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchurSuiteParams {
    pub count: usize,
    pub min_size: usize,
    pub max_size: usize,
}

impl Default for SchurSuiteParams {
    fn default() -> Self {
        Self { count: 500, min_size: 2, max_size: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormSuiteParams {
    pub fields: usize,
    /// Grid for the cosine check; shift 1 must be a lattice multiple.
    pub cos_grid: GridSpec,
}

impl Default for NormSuiteParams {
    fn default() -> Self {
        Self { fields: 50, cos_grid: GridSpec::new(1, 1024, 32.0).expect("valid grid") }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FalsifyParams {
    pub symbol: SymbolSpec,
    pub eps_sweep: Vec<f64>,
    /// Sampling radius for the Gram test on `G·φ_ε^`.
    pub radius: f64,
    pub probe_trials: usize,
}

impl Default for FalsifyParams {
    fn default() -> Self {
        Self {
            symbol: SymbolSpec::Bump { dim: 1, radius: 1.0, plateau: 0.5 },
            eps_sweep: default_eps_sweep(),
            radius: 2.0,
            probe_trials: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymbolTestParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSpec>,
    /// Matrix symbol; takes precedence over `symbol`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSymbolSpec>,
}

impl Default for SymbolTestParams {
    fn default() -> Self {
        Self { symbol: Some(SymbolSpec::Gaussian { dim: 1, width: 1.0 }), matrix: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthBochnerParams {
    pub dim: usize,
    pub atoms: Vec<AtomSpec>,
    /// Matrix-weighted atoms; used instead of `atoms` when nonempty.
    pub matrix_atoms: Vec<MatrixAtomSpec>,
}

impl Default for SynthBochnerParams {
    fn default() -> Self {
        Self {
            dim: 1,
            atoms: vec![AtomSpec { location: vec![1.0], weight: 0.5 }, AtomSpec { location: vec![-1.0], weight: 0.5 }],
            matrix_atoms: vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthLkParams {
    pub params: LkSpec,
    pub t: Vec<f64>,
}

impl Default for SynthLkParams {
    fn default() -> Self {
        Self { params: LkSpec::quadratic(1, 1.0), t: default_t() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApplyParams {
    pub symbol: MatrixSymbolSpec,
    /// Input field in the binary grid format; a random nonnegative field
    /// on the configured grid when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    /// Where to write the output field in the binary grid format.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Where to write the axis-0 slice of the output field as CSV.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_csv: Option<String>,
}

impl Default for ApplyParams {
    fn default() -> Self {
        Self {
            symbol: MatrixSymbolSpec::Scalar { symbol: SymbolSpec::Gaussian { dim: 1, width: 1.0 } },
            input: None,
            output: None,
            output_csv: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormsParams {
    pub symbol: MatrixSymbolSpec,
    pub fields: usize,
}

impl Default for NormsParams {
    fn default() -> Self {
        Self { symbol: MatrixSymbolSpec::Scalar { symbol: SymbolSpec::Gaussian { dim: 1, width: 1.0 } }, fields: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Scenario {
    #[serde(rename = "theorem-2-2")]
    Preservation(PreservationParams),
    #[serde(rename = "corollary-2-3")]
    HadamardSemigroup(SemigroupParams),
    #[serde(rename = "corollary-2-4")]
    DiagonalSemigroup(SemigroupParams),
    #[serde(rename = "corollary-2-5")]
    PsdEntrySemigroup(SemigroupParams),
    #[serde(rename = "example-2-6")]
    TwoComponent(TwoComponentParams),
    #[serde(rename = "bochner-suite")]
    BochnerSuite(BochnerSuiteParams),
    #[serde(rename = "lk-suite")]
    LkSuite(LkSuiteParams),
    #[serde(rename = "schur-suite")]
    SchurSuite(SchurSuiteParams),
    #[serde(rename = "norm-suite")]
    NormSuite(NormSuiteParams),
    #[serde(rename = "falsify")]
    Falsify(FalsifyParams),
    #[serde(rename = "test-psd")]
    TestPsd(SymbolTestParams),
    #[serde(rename = "test-cpsd")]
    TestCpsd(SymbolTestParams),
    #[serde(rename = "synth-bochner")]
    SynthBochner(SynthBochnerParams),
    #[serde(rename = "synth-lk")]
    SynthLk(SynthLkParams),
    #[serde(rename = "apply")]
    Apply(ApplyParams),
    #[serde(rename = "norms")]
    Norms(NormsParams),
}

impl Scenario {
    pub const KINDS: [&'static str; 16] = [
        "theorem-2-2",
        "corollary-2-3",
        "corollary-2-4",
        "corollary-2-5",
        "example-2-6",
        "bochner-suite",
        "lk-suite",
        "schur-suite",
        "norm-suite",
        "falsify",
        "test-psd",
        "test-cpsd",
        "synth-bochner",
        "synth-lk",
        "apply",
        "norms",
    ];

    /// Default parameters for a scenario kind.
    pub fn default_for(kind: &str) -> Result<Self> {
        serde_json::from_value(serde_json::json!({ "kind": kind }))
            .map_err(|_| Error::ConfigInvalid(format!("unknown scenario kind {kind:?}")))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Preservation(_) => "theorem-2-2",
            Scenario::HadamardSemigroup(_) => "corollary-2-3",
            Scenario::DiagonalSemigroup(_) => "corollary-2-4",
            Scenario::PsdEntrySemigroup(_) => "corollary-2-5",
            Scenario::TwoComponent(_) => "example-2-6",
            Scenario::BochnerSuite(_) => "bochner-suite",
            Scenario::LkSuite(_) => "lk-suite",
            Scenario::SchurSuite(_) => "schur-suite",
            Scenario::NormSuite(_) => "norm-suite",
            Scenario::Falsify(_) => "falsify",
            Scenario::TestPsd(_) => "test-psd",
            Scenario::TestCpsd(_) => "test-cpsd",
            Scenario::SynthBochner(_) => "synth-bochner",
            Scenario::SynthLk(_) => "synth-lk",
            Scenario::Apply(_) => "apply",
            Scenario::Norms(_) => "norms",
        }
    }
}

/// Tolerances of the scenario checks. Sampled-Gram tolerances live in the
/// sampling plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckTolerances {
    /// Grid positivity: `min Re ≥ -positivity·‖out‖_∞`.
    pub positivity: f64,
    /// A probe violation counts only below `-falsify·‖out‖_∞`.
    pub falsify: f64,
    /// A probe Gram eigenvalue counts only below `-gram_falsify`.
    pub gram_falsify: f64,
    /// Spectral output vs direct atomic convolution, relative to `‖out‖_∞`.
    pub oracle: f64,
    /// Closed-form exponential vs scaling-and-squaring, relative.
    pub closed_form: f64,
    pub eigen: f64,
    pub decomposition: f64,
    pub series: f64,
    pub roundtrip: f64,
    pub kernel_tv: f64,
    pub delta_tv: f64,
    pub cos_norm: f64,
    pub parseval: f64,
    pub schur: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            positivity: 1e-8,
            falsify: 1e-3,
            gram_falsify: 1e-6,
            oracle: 1e-8,
            closed_form: 1e-12,
            eigen: 1e-12,
            decomposition: 1e-10,
            series: 1e-10,
            roundtrip: 1e-12,
            kernel_tv: 1e-4,
            delta_tv: 1e-10,
            cos_norm: 1e-6,
            parseval: 1e-8,
            schur: 1e-10,
        }
    }
}

fn default_grid() -> GridSpec {
    GridSpec::new(1, 1024, 40.0).expect("valid grid")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub version: u32,
    pub seed: u64,
    pub scenario: Scenario,
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default)]
    pub tolerances: CheckTolerances,
    #[serde(default)]
    pub sampling: SamplingPlan,
}

impl Config {
    pub fn new(scenario: Scenario, seed: u64) -> Self {
        Self {
            version: CONFIG_VERSION,
            seed,
            scenario,
            grid: default_grid(),
            tolerances: CheckTolerances::default(),
            sampling: SamplingPlan::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::ConfigInvalid(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let t = &self.tolerances;
        let all = [
            t.positivity, t.falsify, t.gram_falsify, t.oracle, t.closed_form, t.eigen, t.decomposition, t.series,
            t.roundtrip, t.kernel_tv, t.delta_tv, t.cos_norm, t.parseval, t.schur,
        ];
        if !all.into_iter().all(positive) {
            return Err(Error::ConfigInvalid("tolerances must be positive and finite".into()));
        }
        let ts: &[f64] = match &self.scenario {
            Scenario::HadamardSemigroup(p) | Scenario::DiagonalSemigroup(p) | Scenario::PsdEntrySemigroup(p) => &p.t,
            Scenario::TwoComponent(p) => &p.t,
            Scenario::LkSuite(p) => &p.t,
            Scenario::SynthLk(p) => &p.t,
            _ => &[],
        };
        if ts.iter().any(|&t| !positive(t)) {
            return Err(Error::ConfigInvalid("t values must be positive".into()));
        }
        let sweep: &[f64] = match &self.scenario {
            Scenario::Preservation(p) => &p.eps_sweep,
            Scenario::Falsify(p) => &p.eps_sweep,
            _ => &[],
        };
        if sweep.iter().any(|&e| !(positive(e) && e <= 1.0)) {
            return Err(Error::ConfigInvalid("ε sweep values must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = Config::from_json(r#"{"version":1,"seed":7,"scenario":{"kind":"example-2-6","b":2}}"#).unwrap();
        match &cfg.scenario {
            Scenario::TwoComponent(p) => {
                assert_eq!(p.b, 2.0);
                assert_eq!(p.t, vec![0.1, 1.0, 10.0]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(cfg.grid.samples(), 1024);
    }

    #[test]
    fn seed_is_mandatory() {
        assert!(Config::from_json(r#"{"version":1,"scenario":{"kind":"falsify"}}"#).is_err());
    }

    #[test]
    fn invalid_grid_and_unknown_fields_are_rejected() {
        let bad_grid = r#"{"version":1,"seed":1,"scenario":{"kind":"falsify"},"grid":{"dim":1,"samples":100,"length":4}}"#;
        assert!(Config::from_json(bad_grid).is_err());
        let unknown = r#"{"version":1,"seed":1,"scenario":{"kind":"falsify","bogus":3}}"#;
        assert!(Config::from_json(unknown).is_err());
        let version = r#"{"version":9,"seed":1,"scenario":{"kind":"falsify"}}"#;
        assert!(Config::from_json(version).is_err());
    }

    #[test]
    fn every_kind_has_defaults() {
        for kind in Scenario::KINDS {
            assert_eq!(Scenario::default_for(kind).unwrap().kind(), kind);
        }
        assert!(Scenario::default_for("nope").is_err());
    }

    #[test]
    fn symbol_specs_roundtrip_and_build() {
        let s: SymbolSpec = serde_json::from_str(r#"{"family":"bochner","atoms":[{"location":[1],"weight":0.5}]}"#).unwrap();
        let f = s.build().unwrap();
        assert!((f.eval(&[0.0]).re - 0.5 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let back: SymbolSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(SymbolSpec::from_name("neg-quadratic", 1).unwrap().build().unwrap().re_upper() == Some(0.0));
    }

    #[test]
    fn cosine_measure_reproduces_cosine() {
        let s = SymbolSpec::Cosine { freq: vec![1.5] };
        let mu = s.measure().unwrap().unwrap();
        let f = synth::bochner_scalar(&mu).unwrap();
        for x in [0.0, 0.3, -2.0] {
            assert!((f.eval(&[x]).re - (1.5 * x).cos()).abs() < 1e-14);
        }
    }
}
