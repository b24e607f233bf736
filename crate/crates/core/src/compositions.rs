//! Polynomial composites of an eigenfamily and rational harmonic morphisms.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::EigenFamily;
use crate::lie::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::poly::{CurveJets, Jet2, MatrixPolynomial};
use crate::tension::{collect_points, kappa_at, tau_at, JetFunction, OperatorContext, PointSource, Sampling};

/// Polynomial in the members of a family; a monomial is the sorted list of
/// member indices (with repetition).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FamilyPolynomial {
    terms: BTreeMap<Vec<usize>, C64>,
}

impl FamilyPolynomial {
    pub fn monomial(indices: &[usize]) -> Self {
        Self::from_terms([(indices.to_vec(), ONE)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<usize>, C64)>) -> Self {
        let mut out = Self::default();
        for (mut m, c) in terms {
            m.sort_unstable();
            *out.terms.entry(m).or_insert(ZERO) += c;
        }
        out.terms.retain(|_, c| *c != ZERO);
        out
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, C64> {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).map(|(m, c)| (m.clone(), *c)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    /// Common degree of all terms, or `None` when the terms disagree or the
    /// polynomial is zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let degrees: Vec<usize> = self.terms.keys().map(Vec::len).dedup().collect();
        match degrees.as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().flatten().copied().max()
    }

    pub fn evaluate(&self, values: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(*c, |acc, &i| acc * values[i]))
            .sum()
    }

    /// Substitutes the member polynomials.
    pub fn expand(&self, members: &[MatrixPolynomial]) -> Result<MatrixPolynomial> {
        let shape = members
            .first()
            .map(MatrixPolynomial::shape)
            .ok_or_else(|| Error::InvalidFamily("empty family".into()))?;
        if let Some(i) = self.max_index().filter(|&i| i >= members.len()) {
            return Err(Error::InvalidFamily(format!(
                "member index {i} out of range for a family of {}",
                members.len()
            )));
        }
        let mut out = MatrixPolynomial::zero(shape);
        for (m, c) in &self.terms {
            let mut term = MatrixPolynomial::constant(shape, *c);
            for &i in m {
                term = term.checked_mul(&members[i])?;
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// All monomials of degree `d` in `count` members, lexicographic.
    pub fn all_monomials(count: usize, d: usize) -> Vec<FamilyPolynomial> {
        (0..count)
            .combinations_with_replacement(d)
            .map(|m| FamilyPolynomial::monomial(&m))
            .collect()
    }
}

impl fmt::Display for FamilyPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let text = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars = m.iter().map(|i| format!("phi[{}]", i + 1)).join("*");
                if vars.is_empty() {
                    format!("({},{})", c.re, c.im)
                } else {
                    format!("({},{}) * {vars}", c.re, c.im)
                }
            })
            .join(" + ");
        write!(f, "{text}")
    }
}

/// `(dλ + d(d−1)μ, d²μ)`.
pub fn derived_constants(d: usize, lambda: C64, mu: C64) -> (C64, C64) {
    let d = d as f64;
    (lambda * d + mu * (d * (d - 1.0)), mu * (d * d))
}

/// Which base constants the derived ones are computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum BaseConstants {
    Claimed,
    Measured { lambda: C64, mu: C64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeFamily {
    pub base: EigenFamily,
    pub degree: usize,
    pub generators: Vec<FamilyPolynomial>,
    pub members: Vec<MatrixPolynomial>,
    pub constants: BaseConstants,
    pub derived_lambda: C64,
    pub derived_mu: C64,
}

pub fn build_composites(
    base: &EigenFamily,
    d: usize,
    generators: &[FamilyPolynomial],
    constants: BaseConstants,
) -> Result<CompositeFamily> {
    if d == 0 {
        return Err(Error::InvalidRange("composite degree must be at least 1".into()));
    }
    let polys = base.polynomials();
    let members = generators
        .iter()
        .enumerate()
        .map(|(index, g)| {
            if g.homogeneous_degree() != Some(d) {
                return Err(Error::NotHomogeneous { index, degree: d });
            }
            g.expand(&polys)
        })
        .collect::<Result<Vec<_>>>()?;
    let (lambda, mu) = match constants {
        BaseConstants::Claimed => (base.claimed_lambda, base.claimed_mu),
        BaseConstants::Measured { lambda, mu } => (lambda, mu),
    };
    let (derived_lambda, derived_mu) = derived_constants(d, lambda, mu);
    Ok(CompositeFamily {
        base: base.clone(),
        degree: d,
        generators: generators.to_vec(),
        members,
        constants,
        derived_lambda,
        derived_mu,
    })
}

/// `g ↦ P(g)/Q(g)`, defined where `Q` is away from zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalMap {
    pub numerator: MatrixPolynomial,
    pub denominator: MatrixPolynomial,
    pub degree: usize,
}

impl RationalMap {
    /// Möbius image `(aP + bQ)/(cP + dQ)`; requires `ad − bc ≠ 0`.
    pub fn mobius(&self, a: C64, b: C64, c: C64, d: C64) -> Result<RationalMap> {
        if (a * d - b * c).norm() < 1e-12 {
            return Err(Error::DependentPair);
        }
        let p = &self.numerator;
        let q = &self.denominator;
        Ok(RationalMap {
            numerator: p.scale(a).checked_add(&q.scale(b))?,
            denominator: p.scale(c).checked_add(&q.scale(d))?,
            degree: self.degree,
        })
    }
}

impl JetFunction for RationalMap {
    fn shape(&self) -> (usize, usize) {
        self.numerator.shape()
    }

    fn value_at(&self, g: &ComplexMatrix) -> C64 {
        self.numerator.eval_unchecked(g) / self.denominator.eval_unchecked(g)
    }

    fn jet_on(&self, curve: &CurveJets) -> Jet2 {
        self.numerator.jet_on(curve) / self.denominator.jet_on(curve)
    }

    fn admissible(&self, g: &ComplexMatrix, floor: f64) -> bool {
        self.denominator.eval_unchecked(g).norm() > floor
    }
}

pub const MORPHISM_FLOOR: f64 = 1e-3;
pub const INDEPENDENCE_SAMPLES: usize = 50;
pub const INDEPENDENCE_SLACK: f64 = 1e-10;

/// Builds `P(φ)/Q(φ)`. `P` and `Q` must be homogeneous of the same degree and
/// their ratio must vary over `INDEPENDENCE_SAMPLES` points of the group.
pub fn build_rational_morphism(
    base: &EigenFamily,
    p: &FamilyPolynomial,
    q: &FamilyPolynomial,
    seed: u64,
) -> Result<RationalMap> {
    let dp = p
        .homogeneous_degree()
        .ok_or(Error::NotHomogeneous { index: 0, degree: 0 })?;
    let dq = q
        .homogeneous_degree()
        .ok_or(Error::NotHomogeneous { index: 1, degree: 0 })?;
    if dp != dq {
        return Err(Error::DegreeMismatch {
            numerator: dp,
            denominator: dq,
        });
    }
    let polys = base.polynomials();
    let map = RationalMap {
        numerator: p.expand(&polys)?,
        denominator: q.expand(&polys)?,
        degree: dp,
    };
    let basis = base.kind.basis();
    let sampling = Sampling::new(seed, INDEPENDENCE_SAMPLES).with_floor(MORPHISM_FLOOR);
    let points = collect_points(PointSource::Group(&basis), &sampling, |g| {
        map.admissible(g, MORPHISM_FLOOR)
    })?;
    let ratios: Vec<C64> = points.iter().map(|g| map.value_at(g)).collect();
    let first = ratios[0];
    let spread = ratios.iter().map(|r| (r - first).norm()).fold(0.0, f64::max);
    if spread <= INDEPENDENCE_SLACK * first.norm().max(1.0) {
        return Err(Error::DependentPair);
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorphismReport {
    /// Max of `|τ(F)| / max(1, |F|²)`.
    pub tau_residual: f64,
    /// Max of `|κ(F,F)| / max(1, |F|²)`.
    pub kappa_residual: f64,
    pub samples: usize,
    pub tol: f64,
}

impl MorphismReport {
    pub fn passes(&self) -> bool {
        self.tau_residual < self.tol && self.kappa_residual < self.tol
    }
}

/// Harmonicity and horizontal conformality residuals of `f`.
pub fn verify_harmonic_morphism<F: JetFunction>(
    f: &F,
    ctx: &OperatorContext,
    source: PointSource<'_>,
    sampling: &Sampling,
    tol: f64,
) -> Result<MorphismReport> {
    let floor = sampling.floor;
    let points = collect_points(source, sampling, |g| f.admissible(g, floor))?;
    let rows: Vec<Result<(f64, f64)>> = points
        .par_iter()
        .map(|g| {
            let scale = f.value_at(g).norm_sqr().max(1.0);
            let t = tau_at(f, g, ctx)?;
            let k = kappa_at(f, f, g, ctx)?;
            Ok((t.norm() / scale, k.norm() / scale))
        })
        .collect();
    let mut tau_residual: f64 = 0.0;
    let mut kappa_residual: f64 = 0.0;
    for row in rows {
        let (t, k) = row?;
        tau_residual = tau_residual.max(t);
        kappa_residual = kappa_residual.max(k);
    }
    Ok(MorphismReport {
        tau_residual,
        kappa_residual,
        samples: points.len(),
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::complex_family;

    #[test]
    fn derived_constant_formula() {
        let (l, m) = derived_constants(2, C64::new(-3.0, 0.0), C64::new(-1.0, 0.0));
        assert_eq!((l, m), (C64::new(-8.0, 0.0), C64::new(-4.0, 0.0)));
        let (l, m) = derived_constants(1, C64::new(-6.0, 0.0), C64::new(-2.0, 0.0));
        assert_eq!((l, m), (C64::new(-6.0, 0.0), C64::new(-2.0, 0.0)));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(FamilyPolynomial::all_monomials(3, 2).len(), 6);
        assert_eq!(FamilyPolynomial::all_monomials(6, 3).len(), 56);
    }

    #[test]
    fn inhomogeneous_generator_rejected() {
        let base = complex_family(1, 2).unwrap();
        let g = FamilyPolynomial::monomial(&[0, 0]).add(&FamilyPolynomial::monomial(&[1]));
        let err = build_composites(&base, 2, &[g], BaseConstants::Claimed).unwrap_err();
        assert_eq!(err, Error::NotHomogeneous { index: 0, degree: 2 });
    }

    #[test]
    fn equal_pair_is_dependent() {
        let base = complex_family(1, 1).unwrap();
        let p = FamilyPolynomial::monomial(&[0]);
        assert_eq!(build_rational_morphism(&base, &p, &p, 42), Err(Error::DependentPair));
        let q = FamilyPolynomial::monomial(&[0, 1]);
        assert!(matches!(
            build_rational_morphism(&base, &p, &q, 42),
            Err(Error::DegreeMismatch {
                numerator: 1,
                denominator: 2
            })
        ));
    }

    #[test]
    fn display_uses_one_based_members() {
        let g = FamilyPolynomial::monomial(&[1, 0]);
        assert_eq!(g.to_string(), "(1,0) * phi[1]*phi[2]");
    }
}
