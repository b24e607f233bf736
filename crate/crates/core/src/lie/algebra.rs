//! Orthonormal bases of u(n) and sp(n) and their symmetric-pair splits.
//!
//! The metric is `⟨X, Y⟩ = Re trace(X*·Y)` on the defining representation
//! (n×n for u(n), 2n×2n for sp(n)). With this scale the Casimir element
//! `Σ X_i²` equals `−n·I` on u(n) and `−(2n+1)/2·I` on sp(n).

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, I, ONE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    #[serde(alias = "u")]
    Unitary,
    #[serde(alias = "sp")]
    Symplectic,
}

impl GroupKind {
    /// Size of the defining complex representation for rank parameter `n`.
    pub fn matrix_dim(self, n: usize) -> usize {
        match self {
            GroupKind::Unitary => n,
            GroupKind::Symplectic => 2 * n,
        }
    }

    pub fn algebra_dim(self, n: usize) -> usize {
        match self {
            GroupKind::Unitary => n * n,
            GroupKind::Symplectic => n * (2 * n + 1),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieAlgebraBasis {
    pub kind: GroupKind,
    pub n: usize,
    pub elements: Vec<ComplexMatrix>,
    pub metric_name: String,
}

const METRIC_NAME: &str = "re-trace";

pub fn build_unitary_basis(n: usize) -> LieAlgebraBasis {
    assert!(n >= 1, "u(n) needs n >= 1");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in a + 1..n {
            let mut x = ComplexMatrix::zeros(n, n);
            x[(a, b)] = C64::new(s, 0.0);
            x[(b, a)] = C64::new(-s, 0.0);
            elements.push(x);
            let mut y = ComplexMatrix::zeros(n, n);
            y[(a, b)] = C64::new(0.0, s);
            y[(b, a)] = C64::new(0.0, s);
            elements.push(y);
        }
    }
    for a in 0..n {
        elements.push(ComplexMatrix::unit(n, a, a).scale(I));
    }
    LieAlgebraBasis {
        kind: GroupKind::Unitary,
        n,
        elements,
        metric_name: METRIC_NAME.into(),
    }
}

/// Basis of sp(n) = {[[A, B], [−conj(B), conj(A)]] : A ∈ u(n), Bᵀ = B}.
pub fn build_sp_basis(n: usize) -> LieAlgebraBasis {
    assert!(n >= 1, "sp(n) needs n >= 1");
    let dim = 2 * n;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let embed_a = |a: &ComplexMatrix| -> ComplexMatrix {
        let mut x = ComplexMatrix::zeros(dim, dim);
        for r in 0..n {
            for c in 0..n {
                x[(r, c)] = a[(r, c)];
                x[(r + n, c + n)] = a[(r, c)].conj();
            }
        }
        x.scale_real(h)
    };
    let embed_b = |b: &ComplexMatrix| -> ComplexMatrix {
        let mut x = ComplexMatrix::zeros(dim, dim);
        for r in 0..n {
            for c in 0..n {
                x[(r, c + n)] = b[(r, c)];
                x[(r + n, c)] = -b[(r, c)].conj();
            }
        }
        x.scale_real(h)
    };
    let u = build_unitary_basis(n);
    let mut elements: Vec<ComplexMatrix> = u.elements.iter().map(embed_a).collect();
    for a in 0..n {
        for b in a + 1..n {
            let mut sym = ComplexMatrix::zeros(n, n);
            sym[(a, b)] = C64::new(h, 0.0);
            sym[(b, a)] = C64::new(h, 0.0);
            elements.push(embed_b(&sym));
            elements.push(embed_b(&sym.scale(I)));
        }
    }
    for a in 0..n {
        let diag = ComplexMatrix::unit(n, a, a);
        elements.push(embed_b(&diag));
        elements.push(embed_b(&diag.scale(I)));
    }
    LieAlgebraBasis {
        kind: GroupKind::Symplectic,
        n,
        elements,
        metric_name: METRIC_NAME.into(),
    }
}

pub fn build_basis(kind: GroupKind, n: usize) -> LieAlgebraBasis {
    match kind {
        GroupKind::Unitary => build_unitary_basis(n),
        GroupKind::Symplectic => build_sp_basis(n),
    }
}

/// `J = [[0, I_n], [−I_n, 0]]`.
pub fn symplectic_form(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(2 * n, 2 * n, |r, c| {
        if r < n && c == r + n {
            ONE
        } else if r >= n && c + n == r {
            -ONE
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

impl LieAlgebraBasis {
    pub fn matrix_dim(&self) -> usize {
        self.kind.matrix_dim(self.n)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn casimir(&self) -> ComplexMatrix {
        let d = self.matrix_dim();
        self.elements
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, x| &acc + &(x * x))
    }

    /// Scalar `c` with `Σ X_i² ≈ c·I`, and the max entry deviation from `c·I`.
    pub fn casimir_constant(&self) -> (C64, f64) {
        let cas = self.casimir();
        let d = self.matrix_dim();
        let c = cas.trace() / d as f64;
        let dev = cas.max_abs_diff(&ComplexMatrix::identity(d).scale(c));
        (c, dev)
    }

    /// Max of `‖X* + X‖` (and the quaternionic structure residual for sp).
    pub fn structure_residual(&self) -> f64 {
        let d = self.matrix_dim();
        let j = symplectic_form(self.n);
        self.elements
            .iter()
            .map(|x| {
                let ah = (&x.adjoint() + x).max_abs();
                match self.kind {
                    GroupKind::Unitary => ah,
                    GroupKind::Symplectic => {
                        debug_assert_eq!(d, 2 * self.n);
                        let quat = (x + &(&(&j * &x.conj()) * &j)).max_abs();
                        ah.max(quat)
                    }
                }
            })
            .fold(0.0, f64::max)
    }

    /// Max deviation of the Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        gram_residual(&self.elements)
    }

    /// Max over pairs of the distance from `[X_i, X_j]` to the span.
    pub fn bracket_closure_residual(&self) -> f64 {
        bracket_residual(&self.elements, &self.elements, &self.elements)
    }
}

pub(crate) fn gram_residual(elements: &[ComplexMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((x.inner(y) - want).abs());
        }
    }
    worst
}

/// Distance of `m` from the real span of the orthonormal set `onb`.
pub(crate) fn span_residual(m: &ComplexMatrix, onb: &[ComplexMatrix]) -> f64 {
    let mut rest = m.clone();
    for e in onb {
        rest = &rest - &e.scale_real(e.inner(m));
    }
    rest.frobenius_norm()
}

fn bracket_residual(a: &[ComplexMatrix], b: &[ComplexMatrix], target: &[ComplexMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for x in a {
        for y in b {
            worst = worst.max(span_residual(&x.commutator(y), target));
        }
    }
    worst
}

/// Split `𝔤 = 𝔨 ⊕ 𝔪` where 𝔨 is block-diagonal for the given blocks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricPair {
    pub ambient: LieAlgebraBasis,
    pub block_sizes: Vec<usize>,
    pub k_basis: Vec<ComplexMatrix>,
    pub m_basis: Vec<ComplexMatrix>,
}

/// Block label of every row of the defining representation.
fn row_labels(kind: GroupKind, n: usize, blocks: &[usize]) -> Vec<usize> {
    let mut base = Vec::with_capacity(n);
    for (label, &size) in blocks.iter().enumerate() {
        base.extend(std::iter::repeat_n(label, size));
    }
    match kind {
        GroupKind::Unitary => base,
        GroupKind::Symplectic => base.iter().chain(base.iter()).copied().collect(),
    }
}

const GRAM_SCHMIDT_DROP: f64 = 1e-9;

fn gram_schmidt_push(onb: &mut Vec<ComplexMatrix>, v: ComplexMatrix) {
    let mut w = v;
    for _ in 0..2 {
        for e in onb.iter() {
            w = &w - &e.scale_real(e.inner(&w));
        }
    }
    let norm = w.frobenius_norm();
    if norm > GRAM_SCHMIDT_DROP {
        onb.push(w.scale_real(1.0 / norm));
    }
}

pub fn build_symmetric_pair(ambient: &LieAlgebraBasis, block_sizes: &[usize]) -> Result<SymmetricPair> {
    let total: usize = block_sizes.iter().sum();
    if total != ambient.n || block_sizes.len() < 2 || block_sizes.contains(&0) {
        return Err(Error::BlockMismatch {
            blocks: block_sizes.to_vec(),
            expected: ambient.n,
        });
    }
    let labels = row_labels(ambient.kind, ambient.n, block_sizes);
    let d = ambient.matrix_dim();
    let mut k_basis = Vec::new();
    let mut m_basis = Vec::new();
    for x in &ambient.elements {
        let k_part = ComplexMatrix::from_fn(d, d, |r, c| {
            if labels[r] == labels[c] {
                x[(r, c)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let m_part = x - &k_part;
        gram_schmidt_push(&mut k_basis, k_part);
        gram_schmidt_push(&mut m_basis, m_part);
    }
    Ok(SymmetricPair {
        ambient: ambient.clone(),
        block_sizes: block_sizes.to_vec(),
        k_basis,
        m_basis,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PairResiduals {
    pub orthonormality: f64,
    pub kk_in_k: f64,
    pub km_in_m: f64,
    pub mm_in_k: f64,
    pub k_block_diagonal: f64,
}

impl PairResiduals {
    /// Everything except `[𝔪, 𝔪] ⊂ 𝔨`, which fails for flags.
    pub fn max_excluding_mm(&self) -> f64 {
        [self.orthonormality, self.kk_in_k, self.km_in_m, self.k_block_diagonal]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn max(&self) -> f64 {
        [
            self.orthonormality,
            self.kk_in_k,
            self.km_in_m,
            self.mm_in_k,
            self.k_block_diagonal,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl SymmetricPair {
    pub fn k_dim(&self) -> usize {
        self.k_basis.len()
    }

    pub fn m_dim(&self) -> usize {
        self.m_basis.len()
    }

    pub fn row_labels(&self) -> Vec<usize> {
        row_labels(self.ambient.kind, self.ambient.n, &self.block_sizes)
    }

    /// Full orthonormal basis, 𝔨 first.
    pub fn full_basis(&self) -> Vec<ComplexMatrix> {
        self.k_basis.iter().chain(&self.m_basis).cloned().collect()
    }

    pub fn residuals(&self) -> PairResiduals {
        let labels = self.row_labels();
        let off_block = self
            .k_basis
            .iter()
            .map(|x| {
                let d = x.rows();
                let mut worst: f64 = 0.0;
                for r in 0..d {
                    for c in 0..d {
                        if labels[r] != labels[c] {
                            worst = worst.max(x[(r, c)].norm());
                        }
                    }
                }
                worst
            })
            .fold(0.0, f64::max);
        PairResiduals {
            orthonormality: gram_residual(&self.full_basis()),
            kk_in_k: bracket_residual(&self.k_basis, &self.k_basis, &self.k_basis),
            km_in_m: bracket_residual(&self.k_basis, &self.m_basis, &self.m_basis),
            mm_in_k: bracket_residual(&self.m_basis, &self.m_basis, &self.k_basis),
            k_block_diagonal: off_block,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u1_is_single_imaginary_unit() {
        let b = build_unitary_basis(1);
        assert_eq!(b.len(), 1);
        assert_eq!(b.elements[0][(0, 0)], I);
        let (c, dev) = b.casimir_constant();
        assert_eq!(c, C64::new(-1.0, 0.0));
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn sp_dimensions() {
        for n in 1..=4 {
            let b = build_sp_basis(n);
            assert_eq!(b.len(), n * (2 * n + 1));
            assert!(b.structure_residual() < 1e-12);
            assert!(b.orthonormality_residual() < 1e-12);
        }
    }

    #[test]
    fn pair_dimensions() {
        let pair = build_symmetric_pair(&build_unitary_basis(2), &[1, 1]).unwrap();
        assert_eq!((pair.k_dim(), pair.m_dim()), (2, 2));
        let pair = build_symmetric_pair(&build_unitary_basis(5), &[2, 3]).unwrap();
        assert_eq!(pair.m_dim(), 12);
        let flag = build_symmetric_pair(&build_unitary_basis(4), &[1, 1, 2]).unwrap();
        assert_eq!(flag.m_dim(), 10);
        let quat = build_symmetric_pair(&build_sp_basis(3), &[1, 2]).unwrap();
        // sp(1) ⊕ sp(2) has dimension 3 + 10; the quaternionic Grassmannian 4pq.
        assert_eq!((quat.k_dim(), quat.m_dim()), (13, 8));
    }

    #[test]
    fn bad_blocks_rejected() {
        let b = build_unitary_basis(4);
        assert!(matches!(
            build_symmetric_pair(&b, &[1, 2]),
            Err(Error::BlockMismatch { .. })
        ));
        assert!(build_symmetric_pair(&b, &[4]).is_err());
    }
}
