//! Tension field `τ` and conformality operator `κ` as sums of exact jets
//! over an orthonormal family of left-invariant directions.
//!
//! On a compact group with bi-invariant metric `∇_Z Z = ½[Z, Z] = 0` for
//! left-invariant `Z`, so `τ(f)(g) = Σ_Z Z²f(g)` with no correction term.
//! Quotient operators are the same sums restricted to 𝔪.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::algebra::{LieAlgebraBasis, SymmetricPair};
use crate::lie::matrix::{ComplexMatrix, C64, I, ZERO};
use crate::lie::sampling::{sample_dual_point, sample_group_point};
use crate::poly::{CurveJets, Jet2, MatrixPolynomial};

/// Anything whose second-order jet along `g·exp(tX)` can be computed exactly.
pub trait JetFunction: Sync {
    fn shape(&self) -> (usize, usize);

    fn value_at(&self, g: &ComplexMatrix) -> C64;

    fn jet_on(&self, curve: &CurveJets) -> Jet2;

    fn is_constant(&self) -> bool {
        false
    }

    /// Points where this is `false` are outside the domain and get resampled.
    fn admissible(&self, _g: &ComplexMatrix, _floor: f64) -> bool {
        true
    }
}

impl JetFunction for MatrixPolynomial {
    fn shape(&self) -> (usize, usize) {
        MatrixPolynomial::shape(self)
    }

    fn value_at(&self, g: &ComplexMatrix) -> C64 {
        self.eval_unchecked(g)
    }

    fn jet_on(&self, curve: &CurveJets) -> Jet2 {
        MatrixPolynomial::jet_on(self, curve)
    }

    fn is_constant(&self) -> bool {
        MatrixPolynomial::is_constant(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContextLabel {
    Full,
    Horizontal,
    FlagHorizontal,
    Vertical,
    Dual,
}

#[derive(Debug, Clone)]
pub struct OperatorContext {
    pub label: ContextLabel,
    pub directions: Vec<ComplexMatrix>,
}

impl OperatorContext {
    pub fn full(basis: &LieAlgebraBasis) -> Self {
        Self {
            label: ContextLabel::Full,
            directions: basis.elements.clone(),
        }
    }

    /// Directions spanning 𝔪; labelled flag-horizontal for more than two blocks.
    pub fn horizontal(pair: &SymmetricPair) -> Self {
        let label = if pair.block_sizes.len() > 2 {
            ContextLabel::FlagHorizontal
        } else {
            ContextLabel::Horizontal
        };
        Self {
            label,
            directions: pair.m_basis.clone(),
        }
    }

    pub fn vertical(pair: &SymmetricPair) -> Self {
        Self {
            label: ContextLabel::Vertical,
            directions: pair.k_basis.clone(),
        }
    }

    /// `i·M` for every `M` in the 𝔪 basis.
    pub fn dual(pair: &SymmetricPair) -> Self {
        Self {
            label: ContextLabel::Dual,
            directions: pair.m_basis.iter().map(|m| m.scale(I)).collect(),
        }
    }

    pub fn matrix_dim(&self) -> usize {
        self.directions.first().map_or(0, ComplexMatrix::rows)
    }

    pub fn curves(&self, g: &ComplexMatrix) -> Vec<CurveJets> {
        self.directions.iter().map(|x| CurveJets::new(g, x)).collect()
    }

    fn check<F: JetFunction + ?Sized>(&self, f: &F, g: &ComplexMatrix) -> Result<()> {
        let d = self.matrix_dim();
        if f.shape() != g.shape() {
            return Err(Error::ShapeMismatch {
                expected: f.shape(),
                found: g.shape(),
            });
        }
        if g.cols() != d {
            return Err(Error::ShapeMismatch {
                expected: (d, d),
                found: g.shape(),
            });
        }
        Ok(())
    }
}

pub fn tau_at<F: JetFunction + ?Sized>(f: &F, g: &ComplexMatrix, ctx: &OperatorContext) -> Result<C64> {
    ctx.check(f, g)?;
    Ok(ctx
        .directions
        .iter()
        .map(|x| f.jet_on(&CurveJets::new(g, x)).second_derivative())
        .sum())
}

pub fn kappa_at<F: JetFunction + ?Sized, H: JetFunction + ?Sized>(
    f: &F,
    h: &H,
    g: &ComplexMatrix,
    ctx: &OperatorContext,
) -> Result<C64> {
    ctx.check(f, g)?;
    ctx.check(h, g)?;
    Ok(ctx
        .directions
        .iter()
        .map(|x| {
            let curve = CurveJets::new(g, x);
            f.jet_on(&curve).d1 * h.jet_on(&curve).d1
        })
        .sum())
}

/// Values, tensions and directional derivatives of a whole family at one
/// point, so that all pairings share the same summation order.
#[derive(Debug, Clone)]
pub struct PointEvaluation {
    pub values: Vec<C64>,
    pub tau: Vec<C64>,
    /// `grads[f][d]`: first derivative of member `f` along direction `d`.
    pub grads: Vec<Vec<C64>>,
}

impl PointEvaluation {
    pub fn compute<F: JetFunction>(family: &[F], g: &ComplexMatrix, ctx: &OperatorContext) -> Self {
        let curves = ctx.curves(g);
        let mut values = Vec::with_capacity(family.len());
        let mut tau = Vec::with_capacity(family.len());
        let mut grads = Vec::with_capacity(family.len());
        for f in family {
            let mut t = ZERO;
            let mut grad = Vec::with_capacity(curves.len());
            for curve in &curves {
                let jet = f.jet_on(curve);
                t += jet.second_derivative();
                grad.push(jet.d1);
            }
            values.push(f.value_at(g));
            tau.push(t);
            grads.push(grad);
        }
        Self { values, tau, grads }
    }

    pub fn kappa(&self, a: usize, b: usize) -> C64 {
        self.grads[a].iter().zip(&self.grads[b]).map(|(x, y)| x * y).sum()
    }
}

/// Where sample points come from.
#[derive(Debug, Clone, Copy)]
pub enum PointSource<'a> {
    Group(&'a LieAlgebraBasis),
    Dual { pair: &'a SymmetricPair, radius: f64 },
}

impl PointSource<'_> {
    pub fn point(&self, seed: u64, index: u64) -> ComplexMatrix {
        match *self {
            PointSource::Group(basis) => sample_group_point(basis, seed, index),
            PointSource::Dual { pair, radius } => sample_dual_point(pair, seed, index, radius),
        }
    }
}

pub const DEFAULT_FLOOR: f64 = 1e-6;
pub const MAX_RESAMPLE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub seed: u64,
    pub samples: usize,
    /// Lower bound on `|f(g)|` (or `|Q(g)|` for quotients) at accepted points.
    pub floor: f64,
}

impl Sampling {
    pub fn new(seed: u64, samples: usize) -> Self {
        Self {
            seed,
            samples,
            floor: DEFAULT_FLOOR,
        }
    }

    pub fn with_floor(self, floor: f64) -> Self {
        Self { floor, ..self }
    }
}

/// Draws candidate indices 0, 1, 2, ... and keeps the accepted ones.
/// Fails after `MAX_RESAMPLE` consecutive rejections.
pub fn collect_points(
    source: PointSource<'_>,
    sampling: &Sampling,
    accept: impl Fn(&ComplexMatrix) -> bool,
) -> Result<Vec<ComplexMatrix>> {
    let mut points = Vec::with_capacity(sampling.samples);
    let mut index = 0u64;
    let mut misses = 0;
    while points.len() < sampling.samples {
        let g = source.point(sampling.seed, index);
        index += 1;
        if accept(&g) {
            points.push(g);
            misses = 0;
        } else {
            misses += 1;
            if misses >= MAX_RESAMPLE {
                return Err(Error::DegenerateSample(format!(
                    "{MAX_RESAMPLE} consecutive points rejected after {} accepted",
                    points.len()
                )));
            }
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenEstimate {
    pub lambda_mean: C64,
    pub lambda_max_dev: f64,
    pub mu_mean: C64,
    pub mu_max_dev: f64,
    pub samples: usize,
}

impl EigenEstimate {
    pub fn is_eigen(&self, tol: f64) -> bool {
        self.lambda_max_dev < tol && self.mu_max_dev < tol
    }
}

fn mean_and_dev(ratios: &[C64]) -> (C64, f64) {
    let mean = ratios.iter().sum::<C64>() / ratios.len() as f64;
    let dev = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max);
    (mean, dev)
}

/// Pointwise ratios `τ(f)/f` and `κ(f,h)/(f·h)` over the family and the
/// sample points; `λ`, `μ` are their means, deviations their spread.
pub fn estimate_eigenvalues<F: JetFunction>(
    family: &[F],
    ctx: &OperatorContext,
    source: PointSource<'_>,
    sampling: &Sampling,
) -> Result<EigenEstimate> {
    if family.is_empty() {
        return Err(Error::InvalidFamily("empty family".into()));
    }
    if family.iter().any(JetFunction::is_constant) {
        return Err(Error::InvalidFamily(
            "constant members have no well-defined eigenvalue ratio".into(),
        ));
    }
    let floor = sampling.floor;
    let points = collect_points(source, sampling, |g| {
        family
            .iter()
            .all(|f| f.admissible(g, floor) && f.value_at(g).norm() > floor)
    })?;
    let evaluations: Vec<PointEvaluation> = points
        .par_iter()
        .map(|g| PointEvaluation::compute(family, g, ctx))
        .collect();
    let mut lambda_ratios = Vec::new();
    let mut mu_ratios = Vec::new();
    for ev in &evaluations {
        for a in 0..family.len() {
            lambda_ratios.push(ev.tau[a] / ev.values[a]);
            for b in a..family.len() {
                mu_ratios.push(ev.kappa(a, b) / (ev.values[a] * ev.values[b]));
            }
        }
    }
    let (lambda_mean, lambda_max_dev) = mean_and_dev(&lambda_ratios);
    let (mu_mean, mu_max_dev) = mean_and_dev(&mu_ratios);
    Ok(EigenEstimate {
        lambda_mean,
        lambda_max_dev,
        mu_mean,
        mu_max_dev,
        samples: points.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftStatus {
    Descends,
    NotInvariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    /// Max over points and 𝔨 directions of `|K f| / max(1, |f|)`.
    pub k_residual: f64,
    /// Max of `|τ_full − τ_horizontal| / max(1, |f|)`.
    pub gap: f64,
    /// Mean of `(τ_full − τ_horizontal) / f` over points with `|f| > floor`.
    pub vertical_ratio: Option<C64>,
    pub status: LiftStatus,
    pub samples: usize,
    pub tol: f64,
}

/// Compares the group tension with the horizontal (𝔪-only) tension.
/// For a K-invariant `f` both the 𝔨-derivatives and the gap vanish.
pub fn compare_full_vs_horizontal<F: JetFunction>(
    f: &F,
    pair: &SymmetricPair,
    sampling: &Sampling,
    tol: f64,
) -> Result<LiftReport> {
    let full = OperatorContext::full(&pair.ambient);
    let horizontal = OperatorContext::horizontal(pair);
    let vertical = OperatorContext::vertical(pair);
    let floor = sampling.floor;
    let points = collect_points(PointSource::Group(&pair.ambient), sampling, |g| f.admissible(g, floor))?;
    let rows: Vec<Result<(f64, f64, Option<C64>)>> = points
        .par_iter()
        .map(|g| {
            let value = f.value_at(g);
            let scale = value.norm().max(1.0);
            let k_res = vertical
                .directions
                .iter()
                .map(|k| f.jet_on(&CurveJets::new(g, k)).d1.norm() / scale)
                .fold(0.0, f64::max);
            let diff = tau_at(f, g, &full)? - tau_at(f, g, &horizontal)?;
            let ratio = (value.norm() > floor).then(|| diff / value);
            Ok((k_res, diff.norm() / scale, ratio))
        })
        .collect();
    let mut k_residual: f64 = 0.0;
    let mut gap: f64 = 0.0;
    let mut ratios = Vec::new();
    for row in rows {
        let (k, d, r) = row?;
        k_residual = k_residual.max(k);
        gap = gap.max(d);
        ratios.extend(r);
    }
    let vertical_ratio = (!ratios.is_empty()).then(|| ratios.iter().sum::<C64>() / ratios.len() as f64);
    let status = if k_residual < tol {
        LiftStatus::Descends
    } else {
        LiftStatus::NotInvariant
    };
    Ok(LiftReport {
        k_residual,
        gap,
        vertical_ratio,
        status,
        samples: points.len(),
        tol,
    })
}
