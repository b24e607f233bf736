//! Deterministic sample points on the compact group and on its dual.
//!
//! Every draw is a pure function of `(seed, index)`: the ChaCha stream id
//! is the index, so points can be generated in any order or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::{LieAlgebraBasis, SymmetricPair};
use super::expm::matrix_exp;
use super::matrix::{ComplexMatrix, C64};

/// Independent draw channels so that different consumers of the same
/// `(seed, index)` never share random numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Channel {
    Group = 0,
    Dual = 1,
    Subgroup = 2,
    Scalars = 3,
}

pub fn rng_for(seed: u64, channel: Channel, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((channel as u64) << 56));
    rng.set_stream(index);
    rng
}

/// `count` coefficients uniform in `[−1, 1]`.
pub fn uniform_coefficients(seed: u64, channel: Channel, index: u64, count: usize) -> Vec<f64> {
    let mut rng = rng_for(seed, channel, index);
    (0..count).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

pub fn combine(elements: &[ComplexMatrix], coefficients: &[f64]) -> ComplexMatrix {
    assert_eq!(elements.len(), coefficients.len());
    let (r, c) = elements[0].shape();
    elements
        .iter()
        .zip(coefficients)
        .fold(ComplexMatrix::zeros(r, c), |acc, (x, &t)| &acc + &x.scale_real(t))
}

/// `exp(Σ c_i X_i)` with `c_i` uniform in `[−1, 1]`.
pub fn sample_group_point(basis: &LieAlgebraBasis, seed: u64, index: u64) -> ComplexMatrix {
    let coeffs = uniform_coefficients(seed, Channel::Group, index, basis.len());
    matrix_exp(&combine(&basis.elements, &coeffs))
}

pub const DEFAULT_DUAL_RADIUS: f64 = 0.5;

/// `exp(Σ a_i K_i) · exp(Σ b_j i·M_j)` with `a_i ∈ [−1, 1]` and the
/// coefficient vector `b` of Euclidean norm exactly `radius`.
pub fn sample_dual_point(pair: &SymmetricPair, seed: u64, index: u64, radius: f64) -> ComplexMatrix {
    let mut rng = rng_for(seed, Channel::Dual, index);
    let a: Vec<f64> = (0..pair.k_dim()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let mut b: Vec<f64> = (0..pair.m_dim()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        b.iter_mut().for_each(|x| *x *= radius / norm);
    }
    let k = matrix_exp(&combine(&pair.k_basis, &a));
    let imag_m: Vec<ComplexMatrix> = pair.m_basis.iter().map(|m| m.scale(C64::new(0.0, 1.0))).collect();
    let p = matrix_exp(&combine(&imag_m, &b));
    &k * &p
}

/// Indefinite form `diag(I_p, −I_q, ...)` with +1 on the first block.
pub fn indefinite_form(block_sizes: &[usize]) -> ComplexMatrix {
    let n: usize = block_sizes.iter().sum();
    let first = block_sizes[0];
    ComplexMatrix::from_fn(n, n, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else if r < first {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        }
    })
}
