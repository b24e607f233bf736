//! Minor eigenfamilies on U(p+q) and Sp(p+q).
//!
//! Complex members fix columns `1..p` and vary the rows; quaternionic
//! members fix rows `1..p` and vary the columns over all `2(p+q)` columns
//! of the complex image. The claimed constants are stored next to each
//! family and compared against measurement, never substituted for it.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::algebra::{build_basis, GroupKind, LieAlgebraBasis, SymmetricPair};
use crate::lie::expm::matrix_exp;
use crate::lie::matrix::{ComplexMatrix, C64};
use crate::lie::sampling::{combine, uniform_coefficients, Channel};
use crate::poly::{coefficient_function, minor, MatrixPolynomial};
use crate::tension::{collect_points, kappa_at, tau_at, OperatorContext, PointSource, Sampling};

/// Strictly increasing one-based indices `r₁ < … < r_p ≤ upper_bound`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PermutationIndex {
    pub indices: Vec<usize>,
    pub upper_bound: usize,
}

impl fmt::Display for PermutationIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.indices.iter().join(","))
    }
}

/// All `C(bound, p)` index tuples in lexicographic order.
pub fn enumerate_pi(p: usize, q: usize, bound: usize) -> Result<Vec<PermutationIndex>> {
    if p == 0 || p > q {
        return Err(Error::InvalidRange(format!("need 1 <= p <= q, got p={p}, q={q}")));
    }
    if bound != p + q && bound != 2 * (p + q) {
        return Err(Error::InvalidRange(format!("bound must be p+q or 2(p+q), got {bound}")));
    }
    Ok((1..=bound)
        .combinations(p)
        .map(|indices| PermutationIndex {
            indices,
            upper_bound: bound,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyKind {
    ComplexGrassmannian { p: usize, q: usize },
    QuaternionicGrassmannian { p: usize, q: usize },
}

impl FamilyKind {
    pub fn p(self) -> usize {
        match self {
            FamilyKind::ComplexGrassmannian { p, .. } | FamilyKind::QuaternionicGrassmannian { p, .. } => p,
        }
    }

    pub fn q(self) -> usize {
        match self {
            FamilyKind::ComplexGrassmannian { q, .. } | FamilyKind::QuaternionicGrassmannian { q, .. } => q,
        }
    }

    pub fn group_kind(self) -> GroupKind {
        match self {
            FamilyKind::ComplexGrassmannian { .. } => GroupKind::Unitary,
            FamilyKind::QuaternionicGrassmannian { .. } => GroupKind::Symplectic,
        }
    }

    /// Rank parameter `n = p + q` of U(n) or Sp(n).
    pub fn rank(self) -> usize {
        self.p() + self.q()
    }

    pub fn matrix_dim(self) -> usize {
        self.group_kind().matrix_dim(self.rank())
    }

    pub fn basis(self) -> LieAlgebraBasis {
        build_basis(self.group_kind(), self.rank())
    }

    pub fn block_sizes(self) -> Vec<usize> {
        vec![self.p(), self.q()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub label: PermutationIndex,
    pub polynomial: MatrixPolynomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenFamily {
    pub kind: FamilyKind,
    pub members: Vec<FamilyMember>,
    pub claimed_lambda: C64,
    pub claimed_mu: C64,
}

impl EigenFamily {
    pub fn polynomials(&self) -> Vec<MatrixPolynomial> {
        self.members.iter().map(|m| m.polynomial.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        let d = self.kind.matrix_dim();
        (d, d)
    }
}

/// Minors on rows `π`, columns `1..p` of U(p+q); claimed `λ = −p(q+1)`, `μ = −p`.
pub fn complex_family(p: usize, q: usize) -> Result<EigenFamily> {
    let n = p + q;
    let cols: Vec<usize> = (1..=p).collect();
    let members = enumerate_pi(p, q, n)?
        .into_iter()
        .map(|label| {
            let polynomial = minor((n, n), &label.indices, &cols)?;
            Ok(FamilyMember { label, polynomial })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenFamily {
        kind: FamilyKind::ComplexGrassmannian { p, q },
        members,
        claimed_lambda: C64::new(-((p * (q + 1)) as f64), 0.0),
        claimed_mu: C64::new(-(p as f64), 0.0),
    })
}

/// Minors on rows `1..p`, columns `π` of the 2(p+q)×2(p+q) image of
/// Sp(p+q); claimed `λ = −2pq`, `μ = −p`.
pub fn quaternionic_family(p: usize, q: usize) -> Result<EigenFamily> {
    let n = p + q;
    let d = 2 * n;
    let rows: Vec<usize> = (1..=p).collect();
    let members = enumerate_pi(p, q, d)?
        .into_iter()
        .map(|label| {
            let polynomial = minor((d, d), &rows, &label.indices)?;
            Ok(FamilyMember { label, polynomial })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenFamily {
        kind: FamilyKind::QuaternionicGrassmannian { p, q },
        members,
        claimed_lambda: C64::new(-((2 * p * q) as f64), 0.0),
        claimed_mu: C64::new(-(p as f64), 0.0),
    })
}

pub fn build_family(kind: FamilyKind) -> Result<EigenFamily> {
    match kind {
        FamilyKind::ComplexGrassmannian { p, q } => complex_family(p, q),
        FamilyKind::QuaternionicGrassmannian { p, q } => quaternionic_family(p, q),
    }
}

/// Matrix-coefficient identities on U(n) (`τ = −n·z`, `κ = −z_{jβ}z_{kα}`)
/// or on Sp(n) for the top `n` rows (`τ = −(2n+1)/2·q`, `κ = −½·q_{jβ}q_{kα}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub group: GroupKind,
    pub n: usize,
    pub tau_constant: f64,
    pub kappa_constant: f64,
    pub tau_residual: f64,
    pub kappa_residual: f64,
    pub samples: usize,
}

pub fn coefficient_lemma(group: GroupKind, n: usize, sampling: &Sampling) -> Result<LemmaReport> {
    let basis = build_basis(group, n);
    let d = basis.matrix_dim();
    let (tau_constant, kappa_constant, rows) = match group {
        GroupKind::Unitary => (-(n as f64), -1.0, n),
        GroupKind::Symplectic => (-((2 * n + 1) as f64) / 2.0, -0.5, n),
    };
    let mut coeffs = Vec::new();
    for j in 1..=rows {
        for a in 1..=d {
            coeffs.push(((j - 1, a - 1), coefficient_function((d, d), j, a)?));
        }
    }
    let ctx = OperatorContext::full(&basis);
    let points = collect_points(PointSource::Group(&basis), sampling, |_| true)?;
    let per_point: Vec<Result<(f64, f64)>> = points
        .par_iter()
        .map(|g| {
            let mut tau_res: f64 = 0.0;
            let mut kappa_res: f64 = 0.0;
            for ((j, a), f) in &coeffs {
                let t = tau_at(f, g, &ctx)?;
                tau_res = tau_res.max((t - g[(*j, *a)] * tau_constant).norm());
                for ((k, b), h) in &coeffs {
                    let kap = kappa_at(f, h, g, &ctx)?;
                    let want = g[(*j, *b)] * g[(*k, *a)] * kappa_constant;
                    kappa_res = kappa_res.max((kap - want).norm());
                }
            }
            Ok((tau_res, kappa_res))
        })
        .collect();
    let mut tau_residual: f64 = 0.0;
    let mut kappa_residual: f64 = 0.0;
    for r in per_point {
        let (t, k) = r?;
        tau_residual = tau_residual.max(t);
        kappa_residual = kappa_residual.max(k);
    }
    Ok(LemmaReport {
        group,
        n,
        tau_constant,
        kappa_constant,
        tau_residual,
        kappa_residual,
        samples: points.len(),
    })
}

/// Residuals of the candidate subgroup invariances of a function.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InvarianceResiduals {
    pub left: f64,
    pub right: f64,
    pub left_modulus: f64,
    pub right_modulus: f64,
    pub left_special: f64,
    pub right_special: f64,
    pub left_special_modulus: f64,
    pub right_special_modulus: f64,
}

impl InvarianceResiduals {
    fn named(&self) -> [(&'static str, f64); 8] {
        [
            ("left", self.left),
            ("right", self.right),
            ("left-modulus", self.left_modulus),
            ("right-modulus", self.right_modulus),
            ("left-special", self.left_special),
            ("right-special", self.right_special),
            ("left-special-modulus", self.left_special_modulus),
            ("right-special-modulus", self.right_special_modulus),
        ]
    }

    fn max_with(&self, o: &Self) -> Self {
        Self {
            left: self.left.max(o.left),
            right: self.right.max(o.right),
            left_modulus: self.left_modulus.max(o.left_modulus),
            right_modulus: self.right_modulus.max(o.right_modulus),
            left_special: self.left_special.max(o.left_special),
            right_special: self.right_special.max(o.right_special),
            left_special_modulus: self.left_special_modulus.max(o.left_special_modulus),
            right_special_modulus: self.right_special_modulus.max(o.right_special_modulus),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub residuals: InvarianceResiduals,
    /// Names of the invariances whose residual is below `tol`.
    pub holds: Vec<String>,
    pub samples: usize,
    pub tol: f64,
}

/// Removes the trace of every diagonal block so that `exp` lands in the
/// determinant-one part of the block subgroup.
pub fn remove_block_traces(k: &ComplexMatrix, pair: &SymmetricPair) -> ComplexMatrix {
    if pair.ambient.kind == GroupKind::Symplectic {
        // Sp(n) already sits inside SU(2n) blockwise.
        return k.clone();
    }
    let labels = pair.row_labels();
    let mut out = k.clone();
    for (block, &size) in pair.block_sizes.iter().enumerate() {
        let tr: C64 = (0..labels.len())
            .filter(|&r| labels[r] == block)
            .map(|r| k[(r, r)])
            .sum();
        let shift = tr / size as f64;
        for r in (0..labels.len()).filter(|&r| labels[r] == block) {
            out[(r, r)] -= shift;
        }
    }
    out
}

/// Residuals of `f` at `g` under the subgroup elements `k` and `k_special`.
pub fn invariance_residuals(
    f: &MatrixPolynomial,
    g: &ComplexMatrix,
    k: &ComplexMatrix,
    k_special: &ComplexMatrix,
) -> InvarianceResiduals {
    let base = f.eval_unchecked(g);
    let at = |m: &ComplexMatrix| f.eval_unchecked(m);
    let kl = at(&(k * g));
    let kr = at(&(g * k));
    let sl = at(&(k_special * g));
    let sr = at(&(g * k_special));
    InvarianceResiduals {
        left: (kl - base).norm(),
        right: (kr - base).norm(),
        left_modulus: (kl.norm() - base.norm()).abs(),
        right_modulus: (kr.norm() - base.norm()).abs(),
        left_special: (sl - base).norm(),
        right_special: (sr - base).norm(),
        left_special_modulus: (sl.norm() - base.norm()).abs(),
        right_special_modulus: (sr.norm() - base.norm()).abs(),
    }
}

/// Probes left/right invariance of `f` under the block subgroup of `pair`,
/// exactly and modulo phase, for the full subgroup and its determinant-one part.
pub fn invariance_probe(
    f: &MatrixPolynomial,
    pair: &SymmetricPair,
    sampling: &Sampling,
    tol: f64,
) -> Result<InvarianceReport> {
    let points = collect_points(PointSource::Group(&pair.ambient), sampling, |_| true)?;
    let per_point: Vec<InvarianceResiduals> = points
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let coeffs = uniform_coefficients(sampling.seed, Channel::Subgroup, i as u64, pair.k_dim());
            let gen = combine(&pair.k_basis, &coeffs);
            let k = matrix_exp(&gen);
            let k_special = matrix_exp(&remove_block_traces(&gen, pair));
            invariance_residuals(f, g, &k, &k_special)
        })
        .collect();
    let residuals = per_point
        .iter()
        .fold(InvarianceResiduals::default(), |acc, r| acc.max_with(r));
    let holds = residuals
        .named()
        .iter()
        .filter(|(_, v)| *v < tol)
        .map(|(name, _)| name.to_string())
        .collect();
    Ok(InvarianceReport {
        residuals,
        holds,
        samples: points.len(),
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_small_cases() {
        let pis = enumerate_pi(1, 1, 2).unwrap();
        let got: Vec<Vec<usize>> = pis.iter().map(|p| p.indices.clone()).collect();
        assert_eq!(got, vec![vec![1], vec![2]]);
        let pis = enumerate_pi(2, 1, 3);
        assert!(pis.is_err(), "p > q violates the standing assumption");
        let pis = enumerate_pi(2, 2, 8).unwrap();
        assert_eq!(pis.len(), 28);
        assert_eq!(pis[0].to_string(), "(1,2)");
    }

    #[test]
    fn enumerate_rejects_bad_bounds() {
        assert!(enumerate_pi(0, 2, 2).is_err());
        assert!(enumerate_pi(1, 2, 4).is_err());
    }

    #[test]
    fn family_sizes_and_claims() {
        let f = complex_family(1, 2).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.claimed_lambda, C64::new(-3.0, 0.0));
        assert_eq!(f.claimed_mu, C64::new(-1.0, 0.0));
        let f = complex_family(2, 2).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f
            .members
            .iter()
            .all(|m| m.polynomial.is_homogeneous() && m.polynomial.degree() == 2));
        let f = complex_family(1, 1).unwrap();
        // p = 1: −p(q+1) coincides with the coefficient constant −(p+q).
        assert_eq!(f.claimed_lambda, C64::new(-2.0, 0.0));
        let f = quaternionic_family(1, 1).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.claimed_lambda, C64::new(-2.0, 0.0));
        assert_eq!(quaternionic_family(2, 2).unwrap().len(), 28);
    }

    #[test]
    fn identity_subgroup_element_leaves_everything_fixed() {
        let f = complex_family(1, 1).unwrap().members[0].polynomial.clone();
        let basis = build_basis(GroupKind::Unitary, 2);
        let g = crate::lie::sampling::sample_group_point(&basis, 1, 0);
        let id = ComplexMatrix::identity(2);
        let r = invariance_residuals(&f, &g, &id, &id);
        assert_eq!(r, InvarianceResiduals::default());
    }
}
