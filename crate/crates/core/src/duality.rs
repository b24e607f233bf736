//! Compact/non-compact duality: the same polynomials evaluated at points of
//! the dual group along the directions `i·𝔪`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::algebra::SymmetricPair;
use crate::lie::matrix::ONE;
use crate::lie::sampling::DEFAULT_DUAL_RADIUS;
use crate::pharmonic::{
    build_phi_p, numeric_crosscheck, verify_proper_pharmonic, CrosscheckReport, EigenSpec, PharmonicVerdict, SpecSource,
};
use crate::poly::MatrixPolynomial;
use crate::tension::{estimate_eigenvalues, EigenEstimate, OperatorContext, PointSource, Sampling};

#[derive(Debug, Clone)]
pub struct DualContext<'a> {
    pub pair: &'a SymmetricPair,
    pub ctx: OperatorContext,
    /// Constants measured on the compact side with the 𝔪 directions.
    pub compact_spec: EigenSpec,
    pub radius: f64,
}

impl<'a> DualContext<'a> {
    pub fn new(pair: &'a SymmetricPair, compact_spec: EigenSpec) -> Self {
        Self {
            pair,
            ctx: OperatorContext::dual(pair),
            compact_spec,
            radius: DEFAULT_DUAL_RADIUS,
        }
    }

    pub fn with_radius(self, radius: f64) -> Self {
        Self { radius, ..self }
    }

    pub fn source(&self) -> PointSource<'a> {
        PointSource::Dual {
            pair: self.pair,
            radius: self.radius,
        }
    }
}

/// Horizontal `(λ, μ)` of a family on the compact group.
pub fn measure_compact_horizontal(
    family: &[MatrixPolynomial],
    pair: &SymmetricPair,
    sampling: &Sampling,
) -> Result<(EigenSpec, EigenEstimate)> {
    let est = estimate_eigenvalues(
        family,
        &OperatorContext::horizontal(pair),
        PointSource::Group(&pair.ambient),
        sampling,
    )?;
    let spec = EigenSpec::new(est.lambda_mean, est.mu_mean, SpecSource::Measured)?;
    Ok((spec, est))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualEstimate {
    pub estimate: EigenEstimate,
    pub expected: EigenSpec,
    pub lambda_error: f64,
    pub mu_error: f64,
    pub radius: f64,
}

impl DualEstimate {
    pub fn passes(&self, tol: f64) -> bool {
        self.lambda_error < tol && self.mu_error < tol && self.estimate.is_eigen(tol)
    }
}

/// Estimates `(λ*, μ*)` at dual points and compares with `−(λ, μ)`.
pub fn dual_estimate(family: &[MatrixPolynomial], dual: &DualContext<'_>, sampling: &Sampling) -> Result<DualEstimate> {
    let estimate = estimate_eigenvalues(family, &dual.ctx, dual.source(), sampling)?;
    let expected = dual.compact_spec.flipped();
    Ok(DualEstimate {
        estimate,
        expected,
        lambda_error: (estimate.lambda_mean - expected.lambda).norm(),
        mu_error: (estimate.mu_mean - expected.mu).norm(),
        radius: dual.radius,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPharmonicReport {
    pub flipped: EigenSpec,
    pub symbolic: PharmonicVerdict,
    pub crosscheck: CrosscheckReport,
    /// The same check with the compact constants; should be far off.
    pub control: CrosscheckReport,
    pub tol: f64,
}

impl DualPharmonicReport {
    pub fn passes(&self) -> bool {
        self.symbolic.passes && self.crosscheck.max_deviation < self.tol
    }

    pub fn control_separates(&self) -> bool {
        self.control.max_deviation > self.tol
    }
}

/// Builds `Φ_p` from the flipped constants and checks it symbolically and
/// numerically at dual points.
pub fn dual_pharmonic_verify(
    p: u32,
    dual: &DualContext<'_>,
    phi: &MatrixPolynomial,
    sampling: &Sampling,
    tol: f64,
) -> Result<DualPharmonicReport> {
    if p == 0 {
        return Err(Error::InvalidRange("p must be at least 1".into()));
    }
    let flipped = dual.compact_spec.flipped();
    let f = build_phi_p(p, &flipped, ONE, ONE)?;
    let symbolic = verify_proper_pharmonic(&f, p, &flipped)?;
    let crosscheck = numeric_crosscheck(&f, &flipped, phi, &dual.ctx, dual.source(), sampling)?;
    let control = numeric_crosscheck(&f, &dual.compact_spec, phi, &dual.ctx, dual.source(), sampling)?;
    Ok(DualPharmonicReport {
        flipped,
        symbolic,
        crosscheck,
        control,
        tol,
    })
}
