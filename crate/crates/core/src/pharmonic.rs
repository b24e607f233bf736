//! Log-polynomials `Σ c·z^a·log^b z`, the reduced operator
//! `L f = μ z² f″ + λ z f′`, the functions `Φ_p` and their verification.
//!
//! If `τ(φ) = λφ` and `κ(φ,φ) = μφ²` then `τ(f∘φ) = (L f)∘φ`, so
//! p-harmonicity of `f∘φ` reduces to iterating `L` on the term map.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::expm::matrix_exp;
use crate::lie::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::poly::parse_coeff;
use crate::tension::{collect_points, JetFunction, OperatorContext, PointSource, Sampling};

pub const MAX_LOG_POWER: u32 = 64;
/// Coefficients below this are dropped after every operation.
pub const SWEEP_TOL: f64 = 1e-14;
/// Exponents closer than this are the same exponent; also the case-dispatch tolerance.
pub const EXPONENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogTerm {
    pub exponent: C64,
    pub log_power: u32,
    pub coeff: C64,
}

fn term_order(x: &LogTerm, y: &LogTerm) -> Ordering {
    y.log_power
        .cmp(&x.log_power)
        .then(x.exponent.re.total_cmp(&y.exponent.re))
        .then(x.exponent.im.total_cmp(&y.exponent.im))
}

/// Canonically ordered, merged term list with no negligible coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LogPolynomial {
    terms: Vec<LogTerm>,
}

impl LogPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coeff: C64, exponent: C64, log_power: u32) -> Result<Self> {
        Self::from_terms([LogTerm {
            exponent,
            log_power,
            coeff,
        }])
    }

    pub fn constant(c: C64) -> Self {
        Self::from_terms([LogTerm {
            exponent: ZERO,
            log_power: 0,
            coeff: c,
        }])
        .expect("log power 0 is in range")
    }

    pub fn from_terms(terms: impl IntoIterator<Item = LogTerm>) -> Result<Self> {
        let mut merged: Vec<LogTerm> = Vec::new();
        for t in terms {
            if t.log_power > MAX_LOG_POWER {
                return Err(Error::LogPowerOverflow(t.log_power));
            }
            match merged
                .iter_mut()
                .find(|m| m.log_power == t.log_power && (m.exponent - t.exponent).norm() < EXPONENT_TOL)
            {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff.norm() >= SWEEP_TOL);
        merged.sort_by(term_order);
        Ok(Self { terms: merged })
    }

    pub fn terms(&self) -> &[LogTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_log_power(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.log_power).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied()).expect("inputs are in range")
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| LogTerm {
            coeff: t.coeff * s,
            ..*t
        }))
        .expect("inputs are in range")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    /// Value on the principal branch, `z^a = exp(a·Log z)`.
    pub fn evaluate(&self, z: C64) -> C64 {
        let log = z.ln();
        self.terms
            .iter()
            .map(|t| {
                let power = if t.exponent == ZERO {
                    ONE
                } else {
                    (t.exponent * log).exp()
                };
                t.coeff * power * log.powu(t.log_power)
            })
            .sum()
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        for raw in split_terms(s) {
            let parts: Vec<&str> = raw.split(" * ").map(str::trim).collect();
            let [coeff, power, log] = parts.as_slice() else {
                return Err(Error::Parse(format!("term `{raw}` must have three factors")));
            };
            let exponent = power
                .strip_prefix("z^")
                .ok_or_else(|| Error::Parse(format!("`{power}` must look like z^(re,im)")))
                .and_then(parse_coeff)?;
            let log_power: u32 = log
                .strip_prefix("log^")
                .and_then(|t| t.strip_suffix("(z)"))
                .ok_or_else(|| Error::Parse(format!("`{log}` must look like log^b(z)")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad log power in `{log}`")))?;
            terms.push(LogTerm {
                exponent,
                log_power,
                coeff: parse_coeff(coeff)?,
            });
        }
        Self::from_terms(terms)
    }
}

fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && i > 0 && bytes[i - 1] == b' ' => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(s[start..].trim());
    out
}

impl fmt::Display for LogPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let text = self
            .terms
            .iter()
            .map(|t| {
                format!(
                    "({},{}) * z^({},{}) * log^{}(z)",
                    t.coeff.re, t.coeff.im, t.exponent.re, t.exponent.im, t.log_power
                )
            })
            .join(" + ");
        write!(f, "{text}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecSource {
    Claimed,
    Measured,
}

/// Eigen-constants `(λ, μ) ≠ (0, 0)` of the inner function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSpec {
    pub lambda: C64,
    pub mu: C64,
    pub source: SpecSource,
}

impl EigenSpec {
    pub fn new(lambda: C64, mu: C64, source: SpecSource) -> Result<Self> {
        if lambda == ZERO && mu == ZERO {
            return Err(Error::BothZero);
        }
        Ok(Self { lambda, mu, source })
    }

    pub fn real(lambda: f64, mu: f64, source: SpecSource) -> Result<Self> {
        Self::new(C64::new(lambda, 0.0), C64::new(mu, 0.0), source)
    }

    pub fn flipped(&self) -> Self {
        Self {
            lambda: -self.lambda,
            mu: -self.mu,
            source: self.source,
        }
    }
}

fn snap(x: C64) -> C64 {
    if x.norm() < EXPONENT_TOL {
        ZERO
    } else {
        x
    }
}

/// `L(z^a log^b) = z^a[(μa(a−1)+λa)·log^b + b(μ(2a−1)+λ)·log^{b−1} + μb(b−1)·log^{b−2}]`.
pub fn apply_l(f: &LogPolynomial, spec: &EigenSpec) -> Result<LogPolynomial> {
    let (lambda, mu) = (spec.lambda, spec.mu);
    let mut out = Vec::with_capacity(3 * f.terms.len());
    for t in &f.terms {
        if t.log_power > MAX_LOG_POWER {
            return Err(Error::LogPowerOverflow(t.log_power));
        }
        let a = t.exponent;
        let b = t.log_power;
        let bf = b as f64;
        let mut push = |factor: C64, power: u32| {
            let factor = snap(factor);
            if factor != ZERO {
                out.push(LogTerm {
                    exponent: a,
                    log_power: power,
                    coeff: t.coeff * factor,
                });
            }
        };
        push(mu * a * (a - 1.0) + lambda * a, b);
        if b >= 1 {
            push((mu * (a * 2.0 - 1.0) + lambda) * bf, b - 1);
        }
        if b >= 2 {
            push(mu * (bf * (bf - 1.0)), b - 2);
        }
    }
    LogPolynomial::from_terms(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiCase {
    /// `μ = 0, λ ≠ 0`: `c₁·log^{p−1}`.
    MuZero,
    /// `μ ≠ 0, λ = μ`: `c₁·log^{2p−1} + c₂·log^{2p−2}`.
    LambdaEqualsMu,
    /// `μ ≠ 0, λ ≠ μ`: `c₁·z^{1−λ/μ}·log^{p−1} + c₂·log^{p−1}`.
    Generic,
}

pub fn classify(spec: &EigenSpec) -> PhiCase {
    if spec.mu.norm() < EXPONENT_TOL {
        if spec.mu != ZERO {
            log::warn!("|mu| = {:e} treated as zero", spec.mu.norm());
        }
        PhiCase::MuZero
    } else if (spec.lambda - spec.mu).norm() < EXPONENT_TOL {
        if spec.lambda != spec.mu {
            log::warn!(
                "|lambda - mu| = {:e} treated as lambda = mu",
                (spec.lambda - spec.mu).norm()
            );
        }
        PhiCase::LambdaEqualsMu
    } else {
        PhiCase::Generic
    }
}

pub fn build_phi_p(p: u32, spec: &EigenSpec, c1: C64, c2: C64) -> Result<LogPolynomial> {
    if p == 0 {
        return Err(Error::InvalidRange("p must be at least 1".into()));
    }
    if spec.lambda == ZERO && spec.mu == ZERO {
        return Err(Error::BothZero);
    }
    let term = |coeff, exponent, log_power| LogTerm {
        exponent,
        log_power,
        coeff,
    };
    match classify(spec) {
        PhiCase::MuZero => LogPolynomial::from_terms([term(c1, ZERO, p - 1)]),
        PhiCase::LambdaEqualsMu => LogPolynomial::from_terms([term(c1, ZERO, 2 * p - 1), term(c2, ZERO, 2 * p - 2)]),
        PhiCase::Generic => {
            let a = ONE - spec.lambda / spec.mu;
            LogPolynomial::from_terms([term(c1, a, p - 1), term(c2, ZERO, p - 1)])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PharmonicVerdict {
    pub p: u32,
    pub passes: bool,
    /// `f, Lf, …, L^p f`.
    pub chain: Vec<LogPolynomial>,
}

/// Proper p-harmonic: `L^p f = 0` and `L^{p−1} f ≠ 0`.
pub fn verify_proper_pharmonic(f: &LogPolynomial, p: u32, spec: &EigenSpec) -> Result<PharmonicVerdict> {
    let mut chain = vec![f.clone()];
    for _ in 0..p {
        let next = apply_l(chain.last().expect("chain starts non-empty"), spec)?;
        chain.push(next);
    }
    let passes = p >= 1 && chain[p as usize].is_zero() && !chain[p as usize - 1].is_zero();
    Ok(PharmonicVerdict { p, passes, chain })
}

pub const FD_STEP: f64 = 1e-4;
pub const NESTED_FD_STEP: f64 = 1e-3;
pub const MODULUS_RANGE: (f64, f64) = (1e-3, 1e3);
pub const ARG_MARGIN: f64 = 0.1;

/// Keeps `φ(g)` off the branch cut and away from `0` and `∞`.
pub fn branch_safe(z: C64) -> bool {
    let r = z.norm();
    r >= MODULUS_RANGE.0 && r <= MODULUS_RANGE.1 && z.arg().abs() < std::f64::consts::PI - ARG_MARGIN
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    /// Max of `|τ_fd − (Lf)(φ)| / max(1, |(Lf)(φ)|)`.
    pub max_deviation: f64,
    pub step: f64,
    pub min_modulus: f64,
    pub max_modulus: f64,
    pub samples: usize,
}

/// Central second difference of `t ↦ h(g·exp(tX))` summed over directions.
fn fd_laplacian(h: &dyn Fn(&ComplexMatrix) -> C64, g: &ComplexMatrix, ctx: &OperatorContext, step: f64) -> C64 {
    let centre = h(g);
    ctx.directions
        .iter()
        .map(|x| {
            let plus = h(&(g * &matrix_exp(&x.scale_real(step))));
            let minus = h(&(g * &matrix_exp(&x.scale_real(-step))));
            (plus - centre * 2.0 + minus) / (step * step)
        })
        .sum()
}

/// Numeric `τ(f∘φ)` by central differences against the symbolic `(Lf)(φ)`.
pub fn numeric_crosscheck<P: JetFunction>(
    f: &LogPolynomial,
    spec: &EigenSpec,
    phi: &P,
    ctx: &OperatorContext,
    source: PointSource<'_>,
    sampling: &Sampling,
) -> Result<CrosscheckReport> {
    let lf = apply_l(f, spec)?;
    let floor = sampling.floor;
    let points = collect_points(source, sampling, |g| {
        phi.admissible(g, floor) && branch_safe(phi.value_at(g))
    })?;
    let rows: Vec<(f64, f64)> = points
        .par_iter()
        .map(|g| {
            let z = phi.value_at(g);
            let composed = |m: &ComplexMatrix| f.evaluate(phi.value_at(m));
            let numeric = fd_laplacian(&composed, g, ctx, FD_STEP);
            let symbolic = lf.evaluate(z);
            ((numeric - symbolic).norm() / symbolic.norm().max(1.0), z.norm())
        })
        .collect();
    Ok(CrosscheckReport {
        max_deviation: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        step: FD_STEP,
        min_modulus: rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
        max_modulus: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        samples: points.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedReport {
    /// Max of `|τ²(f∘φ)|` by nested central differences.
    pub max_magnitude: f64,
    /// `ε·max|f∘φ|·(4k)²/h⁴` for `k` directions: the size of rounding noise
    /// the nested stencil can produce.
    pub rounding_scale: f64,
    pub step: f64,
    pub samples: usize,
}

/// Magnitude of the twice-iterated numeric tension.
pub fn nested_tension_check<P: JetFunction>(
    f: &LogPolynomial,
    phi: &P,
    ctx: &OperatorContext,
    source: PointSource<'_>,
    sampling: &Sampling,
) -> Result<NestedReport> {
    let floor = sampling.floor;
    let points = collect_points(source, sampling, |g| {
        phi.admissible(g, floor) && branch_safe(phi.value_at(g))
    })?;
    let rows: Vec<(f64, f64)> = points
        .par_iter()
        .map(|g| {
            let composed = |m: &ComplexMatrix| f.evaluate(phi.value_at(m));
            let inner = |m: &ComplexMatrix| fd_laplacian(&composed, m, ctx, NESTED_FD_STEP);
            (fd_laplacian(&inner, g, ctx, NESTED_FD_STEP).norm(), composed(g).norm())
        })
        .collect();
    let largest = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let k = 4.0 * ctx.directions.len() as f64;
    Ok(NestedReport {
        max_magnitude: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        rounding_scale: f64::EPSILON * largest * k * k / NESTED_FD_STEP.powi(4),
        step: NESTED_FD_STEP,
        samples: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn l_of_z_is_lambda_z() {
        let spec = EigenSpec::real(-3.0, -1.0, SpecSource::Claimed).unwrap();
        let z = LogPolynomial::term(ONE, ONE, 0).unwrap();
        assert_eq!(apply_l(&z, &spec).unwrap(), z.scale(c(-3.0)));
    }

    #[test]
    fn log_is_harmonic_when_lambda_equals_mu() {
        let spec = EigenSpec::real(-1.0, -1.0, SpecSource::Claimed).unwrap();
        let log = LogPolynomial::term(ONE, ZERO, 1).unwrap();
        assert!(apply_l(&log, &spec).unwrap().is_zero());
    }

    #[test]
    fn generic_case_two_steps() {
        let spec = EigenSpec::real(-2.0, -1.0, SpecSource::Claimed).unwrap();
        let f = LogPolynomial::term(ONE, c(-1.0), 1).unwrap();
        let lf = apply_l(&f, &spec).unwrap();
        assert_eq!(lf, LogPolynomial::term(ONE, c(-1.0), 0).unwrap());
        assert!(apply_l(&lf, &spec).unwrap().is_zero());
    }

    #[test]
    fn phi_shapes() {
        let resonant = EigenSpec::real(-1.0, -1.0, SpecSource::Claimed).unwrap();
        let phi = build_phi_p(2, &resonant, ONE, ONE).unwrap();
        assert_eq!(
            phi.to_string(),
            "(1,0) * z^(0,0) * log^3(z) + (1,0) * z^(0,0) * log^2(z)"
        );
        let generic = EigenSpec::real(-2.0, -1.0, SpecSource::Claimed).unwrap();
        let phi = build_phi_p(2, &generic, ONE, ONE).unwrap();
        assert_eq!(
            phi.to_string(),
            "(1,0) * z^(-1,0) * log^1(z) + (1,0) * z^(0,0) * log^1(z)"
        );
        assert_eq!(
            build_phi_p(0, &generic, ONE, ONE),
            Err(Error::InvalidRange("p must be at least 1".into()))
        );
    }

    #[test]
    fn both_zero_rejected() {
        assert_eq!(EigenSpec::real(0.0, 0.0, SpecSource::Claimed), Err(Error::BothZero));
    }

    #[test]
    fn eigenfunction_is_not_harmonic() {
        let spec = EigenSpec::real(-2.0, -1.0, SpecSource::Claimed).unwrap();
        let z = LogPolynomial::term(ONE, ONE, 0).unwrap();
        let verdict = verify_proper_pharmonic(&z, 1, &spec).unwrap();
        assert!(!verdict.passes);
        assert_eq!(verdict.chain.len(), 2);
    }

    #[test]
    fn overflow_guard() {
        assert_eq!(LogPolynomial::term(ONE, ZERO, 65), Err(Error::LogPowerOverflow(65)));
    }

    #[test]
    fn text_round_trip() {
        let f = LogPolynomial::from_terms([
            LogTerm {
                exponent: C64::new(0.5, -1.0),
                log_power: 2,
                coeff: C64::new(1.5, 2.0),
            },
            LogTerm {
                exponent: c(-1.0),
                log_power: 0,
                coeff: c(-3.0),
            },
        ])
        .unwrap();
        assert_eq!(LogPolynomial::parse(&f.to_string()).unwrap(), f);
        assert_eq!(LogPolynomial::parse("0").unwrap(), LogPolynomial::zero());
    }

    #[test]
    fn principal_branch_values() {
        let f = LogPolynomial::term(ONE, C64::new(0.5, 0.0), 0).unwrap();
        let v = f.evaluate(c(-4.0) + C64::new(0.0, 1e-300));
        assert!((v - C64::new(0.0, 2.0)).norm() < 1e-12);
        let g = LogPolynomial::term(ONE, ZERO, 1).unwrap();
        assert!((g.evaluate(C64::new(0.0, 1.0)) - C64::new(0.0, std::f64::consts::FRAC_PI_2)).norm() < 1e-15);
    }
}
