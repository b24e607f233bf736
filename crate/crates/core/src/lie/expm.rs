//! Matrix exponential by scaling and squaring with a diagonal Padé
//! approximant (Higham 2005). The degree is chosen from the 1-norm.

use super::matrix::{ComplexMatrix, C64};

#[allow(clippy::excessive_precision)]
const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
    (13, 5.371_920_351_148_152e0),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `exp(X)` for a square complex matrix.
pub fn matrix_exp(x: &ComplexMatrix) -> ComplexMatrix {
    assert!(x.is_square(), "matrix_exp requires a square matrix");
    let n = x.rows();
    if n == 0 {
        return x.clone();
    }
    let norm = x.one_norm();
    if norm == 0.0 {
        return ComplexMatrix::identity(n);
    }
    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            return pade_low(x, m);
        }
    }
    let theta13 = THETA[4].1;
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = x.scale_real(2f64.powi(-s));
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn pade_low(a: &ComplexMatrix, m: usize) -> ComplexMatrix {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => unreachable!(),
    };
    let n = a.rows();
    let ident = ComplexMatrix::identity(n);
    let a2 = a * a;
    // Even powers I, A², A⁴, ...
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() < m.div_ceil(2) {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u_inner = ComplexMatrix::zeros(n, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        u_inner = &u_inner + &p.scale_real(b[2 * k + 1]);
        v = &v + &p.scale_real(b[2 * k]);
    }
    let u = a * &u_inner;
    finish(&u, &v)
}

fn pade13(a: &ComplexMatrix) -> ComplexMatrix {
    let b = &B13;
    let n = a.rows();
    let ident = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let lin = |c: [f64; 4]| -> ComplexMatrix {
        let mut out = ident.scale_real(c[0]);
        out = &out + &a2.scale_real(c[1]);
        out = &out + &a4.scale_real(c[2]);
        &out + &a6.scale_real(c[3])
    };
    let u_hi = &a6 * &(&(&a6.scale_real(b[13]) + &a4.scale_real(b[11])) + &a2.scale_real(b[9]));
    let u = a * &(&u_hi + &lin([b[1], b[3], b[5], b[7]]));
    let v_hi = &a6 * &(&(&a6.scale_real(b[12]) + &a4.scale_real(b[10])) + &a2.scale_real(b[8]));
    let v = &v_hi + &lin([b[0], b[2], b[4], b[6]]);
    finish(&u, &v)
}

fn finish(u: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
    let p = v + u;
    let q = v - u;
    q.solve(&p)
        .expect("Padé denominator is nonsingular for norms inside the theta bound")
}

/// Scalar exponential, exposed for symmetry with the matrix routine.
pub fn exp_scalar(z: C64) -> C64 {
    z.exp()
}
