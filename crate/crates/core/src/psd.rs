//! Positive semidefiniteness tests for matrices and for sampled functions.
//!
//! A function `F` is tested through its Gram matrices `(F(x_p - x_q))_{p,q}`
//! on seeded random point sets. Matrix-valued `F` use the block Gram matrix.
//! Conditional positivity restricts the quadratic form to coefficient vectors
//! summing to zero, implemented with the projector `Q = I - 𝟙𝟙*/N`.

use nalgebra::DVector;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, C64, CMatrix};
use crate::symbol::{MatrixSymbol, ScalarSymbol};
use crate::{par, rng, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_HSYM_TOL: f64 = 1e-10;

/// Overlap with the constant direction above which an eigenvector of `QMQ`
/// is treated as the projected-out null mode.
const NULL_MODE_OVERLAP: f64 = 0.99;

/// Finite set of points in `ℝⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("point set must be nonempty".into()));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch(format!("all points must have dimension {dim}")));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("point coordinates".into()));
        }
        Ok(Self { dim, points })
    }

    /// One-dimensional point set from scalars.
    pub fn line(xs: &[f64]) -> Result<Self> {
        Self::new(1, xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// All differences `x_p - x_q` in row-major `(p, q)` order.
    pub fn differences(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.points.iter().flat_map(move |p| {
            self.points.iter().map(move |q| p.iter().zip(q).map(|(a, b)| a - b).collect())
        })
    }
}

/// Why a verdict failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    /// `M ≠ M*` or `F(-x) ≠ F(x)*`.
    SymmetryViolation,
    /// A (projected) eigenvalue below the threshold.
    NegativeEigenvalue,
    /// `|F(x)| > |F(0)|` (operator norm for matrix symbols).
    BoundViolation,
}

/// Evidence attached to a failed verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Trial index within a sampling plan, if any.
    pub trial: Option<usize>,
    /// Point set whose Gram matrix failed.
    pub points: Option<PointSet>,
    /// Coefficient vector (eigenvector) realising the negative value.
    pub vector: Vec<C64>,
    /// Location of a pointwise symmetry or bound violation.
    pub location: Option<Vec<f64>>,
    /// The violating value (eigenvalue, asymmetry or bound excess).
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub passed: bool,
    /// Smallest (projected) eigenvalue seen, on the Hermitian part.
    pub min_eigenvalue: f64,
    /// Relative tolerance requested.
    pub tolerance: f64,
    /// Effective threshold the minimum was compared against.
    pub threshold: f64,
    pub failure: Option<FailureKind>,
    pub witness: Option<Witness>,
}

impl PsdVerdict {
    fn pass(min_eigenvalue: f64, tolerance: f64, threshold: f64) -> Self {
        Self { passed: true, min_eigenvalue, tolerance, threshold, failure: None, witness: None }
    }
}

/// Tolerance set for the matrix tests.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative PSD tolerance: pass iff `λ_min ≥ -psd·max(1, spectral scale)`.
    pub psd: f64,
    /// Hermitian gate: `max|M - M*| ≤ hsym·max|M|`.
    pub hsym: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { psd: DEFAULT_TOL, hsym: DEFAULT_HSYM_TOL }
    }
}

fn hermitian_gate(m: &CMatrix, hsym: f64) -> (bool, f64, f64) {
    let dev = linalg::hermitian_deviation(m);
    let limit = hsym * linalg::max_abs(m);
    (dev <= limit, dev, limit)
}

fn validate(m: &CMatrix) -> Result<()> {
    linalg::ensure_square(m)?;
    linalg::ensure_finite(m, "matrix entries")
}

/// Smallest eigenvalue of `(M + M*)/2` for a Hermitian `M`.
pub fn hermitian_min_eig(m: &CMatrix) -> Result<f64> {
    hermitian_min_eig_with(m, DEFAULT_HSYM_TOL)
}

pub fn hermitian_min_eig_with(m: &CMatrix, hsym: f64) -> Result<f64> {
    validate(m)?;
    let (ok, deviation, limit) = hermitian_gate(m, hsym);
    if !ok {
        return Err(Error::NonHermitian { deviation, limit });
    }
    let (vals, _) = linalg::hermitian_eigen(&linalg::hermitian_part(m));
    Ok(vals.first().copied().unwrap_or(0.0))
}

/// Positive semidefiniteness of a matrix, with the default Hermitian gate.
pub fn is_psd(m: &CMatrix, tol: f64) -> Result<PsdVerdict> {
    is_psd_with(m, Tolerances { psd: tol, ..Tolerances::default() })
}

pub fn is_psd_with(m: &CMatrix, tol: Tolerances) -> Result<PsdVerdict> {
    validate(m)?;
    let h = linalg::hermitian_part(m);
    let (vals, vecs) = linalg::hermitian_eigen(&h);
    let Some(&min) = vals.first() else {
        return Ok(PsdVerdict::pass(0.0, tol.psd, 0.0));
    };
    let scale = vals.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let threshold = -tol.psd * scale;
    let (hermitian, deviation, _) = hermitian_gate(m, tol.hsym);
    if !hermitian {
        return Ok(PsdVerdict {
            passed: false,
            min_eigenvalue: min,
            tolerance: tol.psd,
            threshold,
            failure: Some(FailureKind::SymmetryViolation),
            witness: Some(Witness { trial: None, points: None, vector: vec![], location: None, value: deviation }),
        });
    }
    if min >= threshold {
        return Ok(PsdVerdict::pass(min, tol.psd, threshold));
    }
    Ok(PsdVerdict {
        passed: false,
        min_eigenvalue: min,
        tolerance: tol.psd,
        threshold,
        failure: Some(FailureKind::NegativeEigenvalue),
        witness: Some(Witness {
            trial: None,
            points: None,
            vector: vecs.column(0).iter().copied().collect(),
            location: None,
            value: min,
        }),
    })
}

/// Conditional positive semidefiniteness: the form restricted to `Σ c_j = 0`.
pub fn is_cpsd(m: &CMatrix, tol: f64) -> Result<PsdVerdict> {
    is_block_cpsd(m, 1, Tolerances { psd: tol, ..Tolerances::default() })
}

/// Block version for `mN×mN` matrices built from `m×m` blocks: the form is
/// restricted to `c = (c_1, …, c_N)`, `c_p ∈ ℂ^m`, with `Σ_p c_p = 0`.
/// With `block = 1` this is plain conditional positive semidefiniteness.
pub fn is_block_cpsd(m: &CMatrix, block: usize, tol: Tolerances) -> Result<PsdVerdict> {
    validate(m)?;
    let dim = m.nrows();
    if block == 0 || !dim.is_multiple_of(block) {
        return Err(Error::DimensionMismatch(format!("{dim} is not a multiple of block size {block}")));
    }
    let (ok, deviation, limit) = hermitian_gate(m, tol.hsym);
    if !ok {
        return Err(Error::NonHermitian { deviation, limit });
    }
    let n = dim / block;
    if n <= 1 {
        // Only c = 0 satisfies the constraint.
        return Ok(PsdVerdict::pass(0.0, tol.psd, 0.0));
    }
    let proj = zero_sum_projector(n, block);
    let h = linalg::hermitian_part(m);
    let pmp = &proj * h * &proj;
    let pmp = linalg::hermitian_part(&pmp);
    let (vals, vecs) = linalg::hermitian_eigen(&pmp);

    let null_weight = |k: usize| -> f64 {
        let v = vecs.column(k);
        (0..block)
            .map(|i| (0..n).map(|p| v[p * block + i]).sum::<C64>().norm_sqr() / n as f64)
            .sum()
    };
    let mut min = f64::INFINITY;
    let mut arg = None;
    let mut scale = 1.0_f64;
    for (k, &v) in vals.iter().enumerate() {
        if null_weight(k) > NULL_MODE_OVERLAP {
            continue;
        }
        scale = scale.max(v.abs());
        if v < min {
            min = v;
            arg = Some(k);
        }
    }
    let threshold = -tol.psd * scale;
    let Some(k) = arg else {
        return Ok(PsdVerdict::pass(0.0, tol.psd, threshold));
    };
    if min >= threshold {
        return Ok(PsdVerdict::pass(min, tol.psd, threshold));
    }
    Ok(PsdVerdict {
        passed: false,
        min_eigenvalue: min,
        tolerance: tol.psd,
        threshold,
        failure: Some(FailureKind::NegativeEigenvalue),
        witness: Some(Witness {
            trial: None,
            points: None,
            vector: vecs.column(k).iter().copied().collect(),
            location: None,
            value: min,
        }),
    })
}

/// `(I_N - 𝟙𝟙*/N) ⊗ I_block`.
pub fn zero_sum_projector(n: usize, block: usize) -> CMatrix {
    let inv = 1.0 / n as f64;
    CMatrix::from_fn(n * block, n * block, |r, c| {
        let (p, i) = (r / block, r % block);
        let (q, j) = (c / block, c % block);
        if i != j {
            C64::new(0.0, 0.0)
        } else if p == q {
            C64::new(1.0 - inv, 0.0)
        } else {
            C64::new(-inv, 0.0)
        }
    })
}

/// Gram matrix `(F(x_p - x_q))_{p,q}`.
pub fn gram(f: &ScalarSymbol, pts: &PointSet) -> Result<CMatrix> {
    if f.dim() != pts.dim() {
        return Err(Error::DimensionMismatch(format!(
            "symbol dimension {} vs points dimension {}",
            f.dim(),
            pts.dim()
        )));
    }
    let n = pts.len();
    let mut g = CMatrix::zeros(n, n);
    let mut diff = vec![0.0; pts.dim()];
    for (p, xp) in pts.points().iter().enumerate() {
        for (q, xq) in pts.points().iter().enumerate() {
            diff.iter_mut().zip(xp.iter().zip(xq)).for_each(|(d, (a, b))| *d = a - b);
            g[(p, q)] = f.eval(&diff);
        }
    }
    linalg::ensure_finite(&g, "Gram matrix")?;
    Ok(g)
}

/// Block Gram matrix: block `(p, q)` is `F(x_p - x_q)`.
pub fn block_gram(f: &MatrixSymbol, pts: &PointSet) -> Result<CMatrix> {
    if f.dim() != pts.dim() {
        return Err(Error::DimensionMismatch(format!(
            "symbol dimension {} vs points dimension {}",
            f.dim(),
            pts.dim()
        )));
    }
    let (n, m) = (pts.len(), f.size());
    let mut g = CMatrix::zeros(n * m, n * m);
    let mut diff = vec![0.0; pts.dim()];
    for (p, xp) in pts.points().iter().enumerate() {
        for (q, xq) in pts.points().iter().enumerate() {
            diff.iter_mut().zip(xp.iter().zip(xq)).for_each(|(d, (a, b))| *d = a - b);
            let block = f.eval(&diff);
            if block.shape() != (m, m) {
                return Err(Error::DimensionMismatch(format!("symbol returned {:?}, expected ({m}, {m})", block.shape())));
            }
            g.view_mut((p * m, q * m), (m, m)).copy_from(&block);
        }
    }
    linalg::ensure_finite(&g, "block Gram matrix")?;
    Ok(g)
}

/// Entrywise product of two equally sized matrices.
pub fn hadamard(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    linalg::hadamard(a, b)
}

/// How to approximate "for all finite point sets" by a seeded ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingPlan {
    pub trials: usize,
    pub min_points: usize,
    pub max_points: usize,
    /// Points are uniform in `[-radius, radius]ⁿ`.
    pub radius: f64,
    pub seed: u64,
    pub tol: f64,
    pub hsym_tol: f64,
    /// `|F(-x) - F(x)*| ≤ sym_tol·max(1, |F(x)|)`.
    pub sym_tol: f64,
    /// `|F(x)| ≤ |F(0)| + bound_tol·max(1, |F(0)|)`.
    pub bound_tol: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            trials: 50,
            min_points: 2,
            max_points: 12,
            radius: 10.0,
            seed: 0,
            tol: DEFAULT_TOL,
            hsym_tol: DEFAULT_HSYM_TOL,
            sym_tol: 1e-12,
            bound_tol: 1e-12,
        }
    }
}

impl SamplingPlan {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances { psd: self.tol, hsym: self.hsym_tol }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.min_points == 0 || self.min_points > self.max_points {
            return Err(Error::InvalidArgument(format!(
                "sampling plan needs trials ≥ 1 and 1 ≤ min_points ≤ max_points, got {self:?}"
            )));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidArgument("sampling radius must be positive".into()));
        }
        Ok(())
    }

    /// The point set of trial `trial`; depends only on `(seed, trial)`.
    pub fn point_set(&self, dim: usize, trial: usize) -> PointSet {
        let mut r = rng::substream(self.seed, trial as u64);
        let count = r.random_range(self.min_points..=self.max_points);
        let points = (0..count)
            .map(|_| (0..dim).map(|_| r.random_range(-self.radius..=self.radius)).collect())
            .collect();
        PointSet { dim, points }
    }
}

/// Aggregate statistics over all trials, in addition to the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionVerdict {
    #[serde(flatten)]
    pub verdict: PsdVerdict,
    pub trials: usize,
    /// Largest relative symmetry defect seen.
    pub max_symmetry_defect: f64,
    /// Largest `|F(x)| - |F(0)|` seen (PSD tests only).
    pub max_bound_excess: Option<f64>,
}

struct TrialOutcome {
    min_eig: f64,
    threshold: f64,
    symmetry: f64,
    bound_excess: Option<f64>,
    failure: Option<(FailureKind, Witness)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Psd,
    Cpsd,
}

/// Uniform view of scalar and matrix symbols for the sampled tests.
trait Sampled: Sync {
    fn dim(&self) -> usize;
    fn block(&self) -> usize;
    fn value(&self, x: &[f64]) -> CMatrix;
    fn gram(&self, pts: &PointSet) -> Result<CMatrix>;
    /// `|F|` for scalars, operator norm for matrices.
    fn magnitude(&self, v: &CMatrix) -> f64;
}

impl Sampled for ScalarSymbol {
    fn dim(&self) -> usize {
        ScalarSymbol::dim(self)
    }
    fn block(&self) -> usize {
        1
    }
    fn value(&self, x: &[f64]) -> CMatrix {
        CMatrix::from_element(1, 1, self.eval(x))
    }
    fn gram(&self, pts: &PointSet) -> Result<CMatrix> {
        gram(self, pts)
    }
    fn magnitude(&self, v: &CMatrix) -> f64 {
        v[(0, 0)].norm()
    }
}

impl Sampled for MatrixSymbol {
    fn dim(&self) -> usize {
        MatrixSymbol::dim(self)
    }
    fn block(&self) -> usize {
        self.size()
    }
    fn value(&self, x: &[f64]) -> CMatrix {
        self.eval(x)
    }
    fn gram(&self, pts: &PointSet) -> Result<CMatrix> {
        block_gram(self, pts)
    }
    fn magnitude(&self, v: &CMatrix) -> f64 {
        linalg::operator_norm(v)
    }
}

fn run_trial<S: Sampled>(f: &S, plan: &SamplingPlan, mode: Mode, trial: usize, origin: f64) -> Result<TrialOutcome> {
    let pts = plan.point_set(f.dim(), trial);
    let probe: Vec<Vec<f64>> = pts.points().iter().cloned().chain(pts.differences()).collect();

    let mut symmetry: f64 = 0.0;
    let mut bound_excess: Option<f64> = (mode == Mode::Psd).then_some(f64::NEG_INFINITY);
    let mut failure = None;
    for x in &probe {
        let fx = f.value(x);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let fneg = f.value(&neg);
        linalg::ensure_finite(&fx, "symbol value")?;
        linalg::ensure_finite(&fneg, "symbol value")?;
        let mag = f.magnitude(&fx);
        let defect = linalg::max_abs(&(fneg - fx.adjoint())) / mag.max(1.0);
        symmetry = symmetry.max(defect);
        if failure.is_none() && defect > plan.sym_tol {
            failure = Some((
                FailureKind::SymmetryViolation,
                Witness { trial: Some(trial), points: Some(pts.clone()), vector: vec![], location: Some(x.clone()), value: defect },
            ));
        }
        if let Some(excess) = bound_excess.as_mut() {
            let e = mag - origin;
            *excess = excess.max(e);
            if failure.is_none() && e > plan.bound_tol * origin.max(1.0) {
                failure = Some((
                    FailureKind::BoundViolation,
                    Witness { trial: Some(trial), points: Some(pts.clone()), vector: vec![], location: Some(x.clone()), value: e },
                ));
            }
        }
    }

    let g = f.gram(&pts)?;
    let tol = plan.tolerances();
    let verdict = match mode {
        Mode::Psd => is_psd_with(&g, tol)?,
        Mode::Cpsd => {
            // A symmetry failure was already recorded; test the Hermitian part.
            let g = if failure.is_some() { linalg::hermitian_part(&g) } else { g };
            is_block_cpsd(&g, f.block(), tol)?
        }
    };
    if failure.is_none() && !verdict.passed {
        let mut w = verdict.witness.clone().unwrap_or(Witness {
            trial: None,
            points: None,
            vector: vec![],
            location: None,
            value: verdict.min_eigenvalue,
        });
        w.trial = Some(trial);
        w.points = Some(pts.clone());
        failure = Some((verdict.failure.unwrap_or(FailureKind::NegativeEigenvalue), w));
    }
    Ok(TrialOutcome { min_eig: verdict.min_eigenvalue, threshold: verdict.threshold, symmetry, bound_excess, failure })
}

fn run_plan<S: Sampled>(f: &S, plan: &SamplingPlan, mode: Mode) -> Result<FunctionVerdict> {
    plan.validate()?;
    let origin = f.magnitude(&f.value(&vec![0.0; f.dim()]));
    let outcomes = par::map_range(plan.trials, |t| run_trial(f, plan, mode, t, origin));
    let mut min_eig = f64::INFINITY;
    let mut threshold = 0.0_f64;
    let mut symmetry = 0.0_f64;
    let mut bound: Option<f64> = None;
    let mut first_failure = None;
    for o in outcomes {
        let o = o?;
        if o.min_eig < min_eig {
            min_eig = o.min_eig;
            threshold = o.threshold;
        }
        symmetry = symmetry.max(o.symmetry);
        if let Some(b) = o.bound_excess {
            bound = Some(bound.map_or(b, |x: f64| x.max(b)));
        }
        if first_failure.is_none() {
            first_failure = o.failure;
        }
    }
    let verdict = match first_failure {
        None => PsdVerdict::pass(min_eig, plan.tol, threshold),
        Some((kind, witness)) => PsdVerdict {
            passed: false,
            min_eigenvalue: min_eig,
            tolerance: plan.tol,
            threshold,
            failure: Some(kind),
            witness: Some(witness),
        },
    };
    Ok(FunctionVerdict { verdict, trials: plan.trials, max_symmetry_defect: symmetry, max_bound_excess: bound })
}

/// Sampled positive semidefiniteness test of a scalar function, including the
/// necessary conditions `F(-x) = conj F(x)` and `|F(x)| ≤ |F(0)|`.
pub fn test_psd_function(f: &ScalarSymbol, plan: &SamplingPlan) -> Result<FunctionVerdict> {
    run_plan(f, plan, Mode::Psd)
}

/// Block version for matrix-valued functions (`F(-x) = F(x)*`,
/// `‖F(x)‖ ≤ ‖F(0)‖`, block Grams PSD).
pub fn test_psd_matrix_function(f: &MatrixSymbol, plan: &SamplingPlan) -> Result<FunctionVerdict> {
    run_plan(f, plan, Mode::Psd)
}

/// Sampled conditional positive semidefiniteness test of a scalar function.
pub fn test_cpsd_function(f: &ScalarSymbol, plan: &SamplingPlan) -> Result<FunctionVerdict> {
    run_plan(f, plan, Mode::Cpsd)
}

/// Conditional positive semidefiniteness of a matrix function in the block
/// sense: `Σ (c_p, F(x_p - x_q) c_q) ≥ 0` whenever `Σ c_p = 0`.
pub fn test_cpsd_matrix_function(f: &MatrixSymbol, plan: &SamplingPlan) -> Result<FunctionVerdict> {
    run_plan(f, plan, Mode::Cpsd)
}

/// `Σ_{p,q} (c_p, M_{pq} c_q)` for a block matrix and stacked coefficients.
pub fn block_quadratic_form(m: &CMatrix, coeffs: &[C64]) -> C64 {
    linalg::quadratic_form(m, &DVector::from_column_slice(coeffs))
}
