//! C ABI over `ghlab-core`.
//!
//! Every fallible function returns a [`GhlabStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`ghlab_last_error_message`] on the same thread. Objects are opaque and
//! must be released with their `_free` function; strings returned by the
//! library are released with [`ghlab_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ghlab_core::cli::{run, RunConfig};
use ghlab_core::lie::{
    build_basis, build_symmetric_pair, sample_group_point, ComplexMatrix, GroupKind, LieAlgebraBasis, SymmetricPair,
    C64,
};
use ghlab_core::pharmonic::{build_phi_p, verify_proper_pharmonic, EigenSpec, LogPolynomial, SpecSource};
use ghlab_core::poly::{coefficient_function, minor, MatrixPolynomial};
use ghlab_core::tension::{kappa_at, tau_at, OperatorContext};
use ghlab_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    DegenerateSample = 4,
    ComputationError = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhlabGroup {
    Unitary = 0,
    Symplectic = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhlabComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for GhlabComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<GhlabComplex> for C64 {
    fn from(z: GhlabComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Orthonormal basis of u(n) or sp(n).
pub struct GhlabBasis(LieAlgebraBasis);

/// Block split of a basis.
pub struct GhlabPair(SymmetricPair);

/// Polynomial in the entries of a matrix.
pub struct GhlabPolynomial(MatrixPolynomial);

/// Finite sum of `c·z^a·log^b z`.
pub struct GhlabLogPolynomial(LogPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> GhlabStatus {
    match e {
        Error::Parse(_) => GhlabStatus::ParseError,
        Error::DegenerateSample(_) => GhlabStatus::DegenerateSample,
        Error::IndexOutOfRange { .. }
        | Error::DuplicateIndex(_)
        | Error::ShapeMismatch { .. }
        | Error::InvalidRange(_)
        | Error::BlockMismatch { .. }
        | Error::InvalidFamily(_)
        | Error::BothZero
        | Error::Config(_) => GhlabStatus::InvalidArgument,
        _ => GhlabStatus::ComputationError,
    }
}

struct Failure(GhlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GhlabStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(GhlabStatus::InvalidArgument, msg.into())
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GhlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GhlabStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GhlabStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn read_matrix(p: *const GhlabComplex, rows: usize, cols: usize) -> Result<ComplexMatrix, Failure> {
    let entries = read_slice(p, rows * cols, "matrix")?;
    Ok(ComplexMatrix::from_row_major(
        rows,
        cols,
        entries.iter().map(|&z| z.into()).collect(),
    )?)
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| invalid("string contains an interior NUL"))
}

fn group_kind(g: GhlabGroup) -> GroupKind {
    match g {
        GhlabGroup::Unitary => GroupKind::Unitary,
        GhlabGroup::Symplectic => GroupKind::Symplectic,
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ghlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ghlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_basis_new(group: GhlabGroup, n: usize, out: *mut *mut GhlabBasis) -> GhlabStatus {
    guard(|| {
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let basis = Box::new(GhlabBasis(build_basis(group_kind(group), n)));
        write_out(out, Box::into_raw(basis), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_basis_free(basis: *mut GhlabBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_basis_len(basis: *const GhlabBasis, out: *mut usize) -> GhlabStatus {
    guard(|| write_out(out, deref(basis, "basis")?.0.len(), "out"))
}

/// Side length of the matrices of the defining representation.
#[no_mangle]
pub unsafe extern "C" fn ghlab_basis_matrix_dim(basis: *const GhlabBasis, out: *mut usize) -> GhlabStatus {
    guard(|| write_out(out, deref(basis, "basis")?.0.matrix_dim(), "out"))
}

/// Casimir constant `c` with `Σ X² ≈ c·I` and the largest entry deviation.
#[no_mangle]
pub unsafe extern "C" fn ghlab_basis_casimir(
    basis: *const GhlabBasis,
    constant: *mut GhlabComplex,
    deviation: *mut f64,
) -> GhlabStatus {
    guard(|| {
        let (c, dev) = deref(basis, "basis")?.0.casimir_constant();
        write_out(constant, c.into(), "constant")?;
        write_out(deviation, dev, "deviation")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_pair_new(
    basis: *const GhlabBasis,
    blocks: *const usize,
    block_count: usize,
    out: *mut *mut GhlabPair,
) -> GhlabStatus {
    guard(|| {
        let basis = deref(basis, "basis")?;
        let blocks = read_slice(blocks, block_count, "blocks")?;
        let pair = build_symmetric_pair(&basis.0, blocks)?;
        write_out(out, Box::into_raw(Box::new(GhlabPair(pair))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_pair_free(pair: *mut GhlabPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_pair_dims(pair: *const GhlabPair, k_dim: *mut usize, m_dim: *mut usize) -> GhlabStatus {
    guard(|| {
        let pair = deref(pair, "pair")?;
        write_out(k_dim, pair.0.k_dim(), "k_dim")?;
        write_out(m_dim, pair.0.m_dim(), "m_dim")
    })
}

fn new_poly(p: MatrixPolynomial) -> *mut GhlabPolynomial {
    Box::into_raw(Box::new(GhlabPolynomial(p)))
}

/// Coordinate function `z ↦ z[j, alpha]`, one-based indices.
#[no_mangle]
pub unsafe extern "C" fn ghlab_poly_coefficient(
    rows: usize,
    cols: usize,
    j: usize,
    alpha: usize,
    out: *mut *mut GhlabPolynomial,
) -> GhlabStatus {
    guard(|| write_out(out, new_poly(coefficient_function((rows, cols), j, alpha)?), "out"))
}

/// Determinant of the submatrix on the given one-based rows and columns.
#[no_mangle]
pub unsafe extern "C" fn ghlab_poly_minor(
    rows: usize,
    cols: usize,
    row_indices: *const usize,
    col_indices: *const usize,
    size: usize,
    out: *mut *mut GhlabPolynomial,
) -> GhlabStatus {
    guard(|| {
        let r = read_slice(row_indices, size, "row_indices")?;
        let c = read_slice(col_indices, size, "col_indices")?;
        write_out(out, new_poly(minor((rows, cols), r, c)?), "out")
    })
}

/// Parses `(re,im) * z[j,a]*z[k,b] + ...`.
#[no_mangle]
pub unsafe extern "C" fn ghlab_poly_parse(
    rows: usize,
    cols: usize,
    text: *const c_char,
    out: *mut *mut GhlabPolynomial,
) -> GhlabStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        write_out(out, new_poly(MatrixPolynomial::parse((rows, cols), text)?), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_poly_free(poly: *mut GhlabPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Canonical text; release with `ghlab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ghlab_poly_to_string(poly: *const GhlabPolynomial, out: *mut *mut c_char) -> GhlabStatus {
    guard(|| {
        let text = deref(poly, "poly")?.0.to_string();
        write_out(out, into_c_string(text)?, "out")
    })
}

/// Value at a row-major `rows × cols` matrix.
#[no_mangle]
pub unsafe extern "C" fn ghlab_poly_evaluate(
    poly: *const GhlabPolynomial,
    matrix: *const GhlabComplex,
    rows: usize,
    cols: usize,
    out: *mut GhlabComplex,
) -> GhlabStatus {
    guard(|| {
        let poly = deref(poly, "poly")?;
        let g = read_matrix(matrix, rows, cols)?;
        write_out(out, poly.0.evaluate(&g)?.into(), "out")
    })
}

/// Writes the deterministic sample point `(seed, index)` into a row-major
/// buffer of `len = d·d` entries, `d` the matrix dimension.
#[no_mangle]
pub unsafe extern "C" fn ghlab_sample_group_point(
    basis: *const GhlabBasis,
    seed: u64,
    index: u64,
    out: *mut GhlabComplex,
    len: usize,
) -> GhlabStatus {
    guard(|| {
        let basis = deref(basis, "basis")?;
        let d = basis.0.matrix_dim();
        if len != d * d {
            return Err(invalid(format!("buffer holds {len} entries, need {}", d * d)));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let g = sample_group_point(&basis.0, seed, index);
        for (i, z) in g.entries().iter().enumerate() {
            out.add(i).write((*z).into());
        }
        Ok(())
    })
}

/// Tension field over the full basis at a row-major point.
#[no_mangle]
pub unsafe extern "C" fn ghlab_tau_at(
    poly: *const GhlabPolynomial,
    basis: *const GhlabBasis,
    point: *const GhlabComplex,
    dim: usize,
    out: *mut GhlabComplex,
) -> GhlabStatus {
    guard(|| {
        let poly = deref(poly, "poly")?;
        let basis = deref(basis, "basis")?;
        let g = read_matrix(point, dim, dim)?;
        let t = tau_at(&poly.0, &g, &OperatorContext::full(&basis.0))?;
        write_out(out, t.into(), "out")
    })
}

/// Conformality operator over the full basis at a row-major point.
#[no_mangle]
pub unsafe extern "C" fn ghlab_kappa_at(
    f: *const GhlabPolynomial,
    h: *const GhlabPolynomial,
    basis: *const GhlabBasis,
    point: *const GhlabComplex,
    dim: usize,
    out: *mut GhlabComplex,
) -> GhlabStatus {
    guard(|| {
        let f = deref(f, "f")?;
        let h = deref(h, "h")?;
        let basis = deref(basis, "basis")?;
        let g = read_matrix(point, dim, dim)?;
        let k = kappa_at(&f.0, &h.0, &g, &OperatorContext::full(&basis.0))?;
        write_out(out, k.into(), "out")
    })
}

fn spec(lambda: GhlabComplex, mu: GhlabComplex) -> Result<EigenSpec, Failure> {
    Ok(EigenSpec::new(lambda.into(), mu.into(), SpecSource::Claimed)?)
}

/// `Φ_p` for eigen-constants `(lambda, mu)` with coefficients `c1`, `c2`.
#[no_mangle]
pub unsafe extern "C" fn ghlab_logpoly_phi_p(
    p: u32,
    lambda: GhlabComplex,
    mu: GhlabComplex,
    c1: GhlabComplex,
    c2: GhlabComplex,
    out: *mut *mut GhlabLogPolynomial,
) -> GhlabStatus {
    guard(|| {
        let f = build_phi_p(p, &spec(lambda, mu)?, c1.into(), c2.into())?;
        write_out(out, Box::into_raw(Box::new(GhlabLogPolynomial(f))), "out")
    })
}

/// Parses `(re,im) * z^(re,im) * log^b(z) + ...`.
#[no_mangle]
pub unsafe extern "C" fn ghlab_logpoly_parse(text: *const c_char, out: *mut *mut GhlabLogPolynomial) -> GhlabStatus {
    guard(|| {
        let f = LogPolynomial::parse(read_str(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(GhlabLogPolynomial(f))), "out")
    })
}

/// Whether `f` is proper `p`-harmonic for the given constants.
#[no_mangle]
pub unsafe extern "C" fn ghlab_logpoly_verify(
    f: *const GhlabLogPolynomial,
    p: u32,
    lambda: GhlabComplex,
    mu: GhlabComplex,
    passes: *mut bool,
) -> GhlabStatus {
    guard(|| {
        let f = deref(f, "f")?;
        let verdict = verify_proper_pharmonic(&f.0, p, &spec(lambda, mu)?)?;
        write_out(passes, verdict.passes, "passes")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_logpoly_to_string(f: *const GhlabLogPolynomial, out: *mut *mut c_char) -> GhlabStatus {
    guard(|| {
        let text = deref(f, "f")?.0.to_string();
        write_out(out, into_c_string(text)?, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghlab_logpoly_free(f: *mut GhlabLogPolynomial) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Runs a command described by a JSON config and returns the JSON report
/// (release with `ghlab_string_free`) and the exit code the CLI would use.
#[no_mangle]
pub unsafe extern "C" fn ghlab_run_json(
    config_json: *const c_char,
    report_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> GhlabStatus {
    guard(|| {
        let text = read_str(config_json, "config_json")?;
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Failure(GhlabStatus::ParseError, e.to_string()))?;
        let outcome = run(&config);
        write_out(exit_code, outcome.exit_code, "exit_code")?;
        write_out(report_json, into_c_string(outcome.report.to_json())?, "report_json")
    })
}
