//! Sparse polynomials in the entries of a matrix argument.
//!
//! A monomial is a sorted multiset of zero-based entry indices `(j, α)`.
//! Polynomials are holomorphic in the entries; the same polynomial is
//! evaluated at group points and at non-unitary dual points.

use std::collections::{btree_map, BTreeMap};
use std::fmt;
use std::ops::{Add, Div, Mul};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::matrix::{ComplexMatrix, C64, ONE, ZERO};

pub type Entry = (usize, usize);
pub type Monomial = Vec<Entry>;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    shape: (usize, usize),
    terms: BTreeMap<Monomial, C64>,
}

/// Coefficients of `t⁰, t¹, t²` of `f(g·(I + tX + ½t²X²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

impl Jet2 {
    pub const ONE: Jet2 = Jet2 {
        value: ONE,
        d1: ZERO,
        d2: ZERO,
    };
    pub const ZERO: Jet2 = Jet2 {
        value: ZERO,
        d1: ZERO,
        d2: ZERO,
    };

    pub fn constant(c: C64) -> Self {
        Jet2 {
            value: c,
            d1: ZERO,
            d2: ZERO,
        }
    }

    pub fn scale(self, c: C64) -> Jet2 {
        Jet2 {
            value: self.value * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
        }
    }

    /// Second derivative along the curve at `t = 0`.
    pub fn second_derivative(self) -> C64 {
        self.d2 * 2.0
    }
}

impl Add for Jet2 {
    type Output = Jet2;

    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

/// Truncated product of two quadratic series.
impl Mul for Jet2 {
    type Output = Jet2;

    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value * o.value,
            d1: self.value * o.d1 + self.d1 * o.value,
            d2: self.value * o.d2 + self.d1 * o.d1 + self.d2 * o.value,
        }
    }
}

/// Truncated quotient; requires `o.value ≠ 0`.
impl Div for Jet2 {
    type Output = Jet2;

    fn div(self, o: Jet2) -> Jet2 {
        let value = self.value / o.value;
        let d1 = (self.d1 - value * o.d1) / o.value;
        let d2 = (self.d2 - d1 * o.d1 - value * o.d2) / o.value;
        Jet2 { value, d1, d2 }
    }
}

/// Entry-wise jets of the curve `t ↦ g·(I + tX + ½t²X²)`.
#[derive(Debug, Clone)]
pub struct CurveJets {
    g: ComplexMatrix,
    gx: ComplexMatrix,
    gxx_half: ComplexMatrix,
}

impl CurveJets {
    pub fn new(g: &ComplexMatrix, x: &ComplexMatrix) -> Self {
        let gx = g * x;
        let gxx_half = (&gx * x).scale_real(0.5);
        Self {
            g: g.clone(),
            gx,
            gxx_half,
        }
    }

    pub fn point(&self) -> &ComplexMatrix {
        &self.g
    }

    pub fn shape(&self) -> (usize, usize) {
        self.g.shape()
    }

    pub fn entry(&self, (r, c): Entry) -> Jet2 {
        Jet2 {
            value: self.g[(r, c)],
            d1: self.gx[(r, c)],
            d2: self.gxx_half[(r, c)],
        }
    }
}

impl MatrixPolynomial {
    pub fn zero(shape: (usize, usize)) -> Self {
        Self {
            shape,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(shape: (usize, usize), c: C64) -> Self {
        let mut p = Self::zero(shape);
        p.insert(Vec::new(), c);
        p
    }

    /// Builds from raw terms, canonicalising and merging duplicates.
    pub fn from_terms(shape: (usize, usize), terms: impl IntoIterator<Item = (Monomial, C64)>) -> Result<Self> {
        let mut p = Self::zero(shape);
        for (mut mono, c) in terms {
            for &(r, col) in &mono {
                check_entry(shape, r, col)?;
            }
            mono.sort_unstable();
            p.insert(mono, c);
        }
        Ok(p)
    }

    fn insert(&mut self, mono: Monomial, c: C64) {
        match self.terms.entry(mono) {
            btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == ZERO {
                    slot.remove();
                }
            }
            btree_map::Entry::Vacant(slot) => {
                if c != ZERO {
                    slot.insert(c);
                }
            }
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().map(Vec::len).all_equal()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape,
                found: other.shape,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.insert(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(-ONE))
    }

    pub fn scale(&self, s: C64) -> Self {
        if s == ZERO {
            return Self::zero(self.shape);
        }
        Self {
            shape: self.shape,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), c * s))
                .filter(|(_, c)| *c != ZERO)
                .collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.shape);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let mut m: Monomial = ma.iter().chain(mb).copied().collect();
                m.sort_unstable();
                out.insert(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.shape, ONE);
        for _ in 0..k {
            out = out.checked_mul(self).expect("same shape");
        }
        out
    }

    fn check_point(&self, g: &ComplexMatrix) -> Result<()> {
        if g.shape() != self.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape,
                found: g.shape(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, g: &ComplexMatrix) -> Result<C64> {
        self.check_point(g)?;
        Ok(self.eval_unchecked(g))
    }

    pub(crate) fn eval_unchecked(&self, g: &ComplexMatrix) -> C64 {
        self.terms
            .iter()
            .map(|(m, &c)| m.iter().fold(c, |acc, &e| acc * g[e]))
            .sum()
    }

    pub fn jet2(&self, g: &ComplexMatrix, x: &ComplexMatrix) -> Result<Jet2> {
        self.check_point(g)?;
        if x.shape() != (self.shape.1, self.shape.1) {
            return Err(Error::ShapeMismatch {
                expected: (self.shape.1, self.shape.1),
                found: x.shape(),
            });
        }
        Ok(self.jet_on(&CurveJets::new(g, x)))
    }

    /// Jet along a precomputed curve; shapes are assumed to match.
    pub fn jet_on(&self, curve: &CurveJets) -> Jet2 {
        debug_assert_eq!(curve.shape(), self.shape);
        self.terms
            .iter()
            .map(|(m, &c)| m.iter().fold(Jet2::constant(c), |acc, &e| acc * curve.entry(e)))
            .fold(Jet2::ZERO, Jet2::add)
    }
}

fn check_entry(shape: (usize, usize), r: usize, c: usize) -> Result<()> {
    if r >= shape.0 || c >= shape.1 {
        return Err(Error::IndexOutOfRange {
            row: r + 1,
            col: c + 1,
            rows: shape.0,
            cols: shape.1,
        });
    }
    Ok(())
}

/// The matrix coefficient `z ↦ z_{jα}` (one-based indices).
pub fn coefficient_function(shape: (usize, usize), j: usize, alpha: usize) -> Result<MatrixPolynomial> {
    if j == 0 || alpha == 0 {
        return Err(Error::IndexOutOfRange {
            row: j,
            col: alpha,
            rows: shape.0,
            cols: shape.1,
        });
    }
    check_entry(shape, j - 1, alpha - 1)?;
    MatrixPolynomial::from_terms(shape, [(vec![(j - 1, alpha - 1)], ONE)])
}

fn check_indices(indices: &[usize], bound: usize, is_row: bool, shape: (usize, usize)) -> Result<()> {
    for (k, &i) in indices.iter().enumerate() {
        if i == 0 || i > bound {
            let (row, col) = if is_row { (i, 1) } else { (1, i) };
            return Err(Error::IndexOutOfRange {
                row,
                col,
                rows: shape.0,
                cols: shape.1,
            });
        }
        if k > 0 && indices[k - 1] >= i {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

/// Determinant of the submatrix on the given one-based rows and columns,
/// expanded over all `p!` permutations.
pub fn minor(shape: (usize, usize), rows: &[usize], cols: &[usize]) -> Result<MatrixPolynomial> {
    if rows.is_empty() || rows.len() != cols.len() {
        return Err(Error::InvalidRange(format!(
            "minor needs equal non-empty row/column sets, got {} and {}",
            rows.len(),
            cols.len()
        )));
    }
    check_indices(rows, shape.0, true, shape)?;
    check_indices(cols, shape.1, false, shape)?;
    let p = rows.len();
    let mut terms = Vec::new();
    for perm in (0..p).permutations(p) {
        let sign = permutation_sign(&perm);
        let mono: Monomial = (0..p).map(|k| (rows[perm[k]] - 1, cols[k] - 1)).collect();
        terms.push((mono, C64::new(sign, 0.0)));
    }
    MatrixPolynomial::from_terms(shape, terms)
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn fmt_coeff(c: C64) -> String {
    format!("({},{})", c.re, c.im)
}

impl fmt::Display for MatrixPolynomial {
    /// `(re,im) * z[j,a]*z[k,b] + ...` with one-based indices, highest
    /// degree first, then lexicographic in the entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let ordered = self
            .terms
            .iter()
            .sorted_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        for (k, (m, &c)) in ordered.enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", fmt_coeff(c))?;
            if !m.is_empty() {
                let vars = m.iter().map(|(r, c)| format!("z[{},{}]", r + 1, c + 1)).join("*");
                write!(f, " * {vars}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn parse_coeff(s: &str) -> Result<C64> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("coefficient `{s}` must look like (re,im)")))?;
    let (re, im) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("coefficient `{s}` is missing a comma")))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad real part `{re}`")))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad imaginary part `{im}`")))?;
    Ok(C64::new(re, im))
}

fn parse_variable(s: &str) -> Result<Entry> {
    let inner = s
        .trim()
        .strip_prefix("z[")
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("variable `{s}` must look like z[j,a]")))?;
    let (j, a) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("variable `{s}` is missing a comma")))?;
    let j: usize = j.trim().parse().map_err(|_| Error::Parse(format!("bad row `{j}`")))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad column `{a}`")))?;
    if j == 0 || a == 0 {
        return Err(Error::Parse(format!("indices in `{s}` are one-based")));
    }
    Ok((j - 1, a - 1))
}

impl MatrixPolynomial {
    /// Parses the textual form produced by `Display`.
    pub fn parse(shape: (usize, usize), s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(shape));
        }
        let mut terms = Vec::new();
        for term in split_top_level(s, " + ") {
            let (coeff, vars) = match term.split_once(" * ") {
                Some((c, v)) => (c, Some(v)),
                None => (term, None),
            };
            let c = parse_coeff(coeff)?;
            let mono = match vars {
                Some(v) => v.split('*').map(parse_variable).collect::<Result<Monomial>>()?,
                None => Vec::new(),
            };
            terms.push((mono, c));
        }
        Self::from_terms(shape, terms)
    }
}

/// Splits on `sep` outside parentheses and brackets.
pub(crate) fn split_top_level<'a>(s: &'a str, sep: &str) -> Vec<&'a str> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && s[i..].starts_with(sep) {
            out.push(&s[start..i]);
            i += sep.len();
            start = i;
            continue;
        }
        i += 1;
    }
    out.push(&s[start..]);
    out
}

/// Serialized as `{ "rows", "cols", "text" }` using the textual form.
#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    rows: usize,
    cols: usize,
    text: String,
}

impl Serialize for MatrixPolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialRepr {
            rows: self.shape.0,
            cols: self.shape.1,
            text: self.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(deserializer)?;
        MatrixPolynomial::parse((repr.rows, repr.cols), &repr.text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::matrix::I;

    fn z(shape: (usize, usize), j: usize, a: usize) -> MatrixPolynomial {
        coefficient_function(shape, j, a).unwrap()
    }

    #[test]
    fn coefficient_at_identity() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(z((2, 2), 1, 1).evaluate(&id).unwrap(), ONE);
        assert_eq!(z((2, 2), 1, 2).evaluate(&id).unwrap(), ZERO);
    }

    #[test]
    fn coefficient_out_of_range() {
        assert!(matches!(
            coefficient_function((2, 2), 3, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(coefficient_function((2, 2), 0, 1).is_err());
    }

    #[test]
    fn one_by_one_minor_is_coefficient() {
        assert_eq!(minor((3, 3), &[1], &[1]).unwrap(), z((3, 3), 1, 1));
    }

    #[test]
    fn two_by_two_minor_text() {
        let m = minor((3, 3), &[1, 2], &[1, 2]).unwrap();
        assert_eq!(m.to_string(), "(1,0) * z[1,1]*z[2,2] + (-1,0) * z[1,2]*z[2,1]");
        assert_eq!(m.evaluate(&ComplexMatrix::identity(3)).unwrap(), ONE);
        assert_eq!(m.terms().len(), 2);
    }

    #[test]
    fn minor_index_errors() {
        assert!(matches!(minor((3, 3), &[2, 2], &[1, 2]), Err(Error::DuplicateIndex(2))));
        assert!(matches!(minor((3, 3), &[2, 1], &[1, 2]), Err(Error::DuplicateIndex(1))));
        assert!(matches!(
            minor((3, 3), &[1, 4], &[1, 2]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn additive_inverse_is_empty() {
        let f = minor((3, 3), &[1, 3], &[2, 3]).unwrap();
        let zero = f.checked_add(&f.scale(-ONE)).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.to_string(), "0");
    }

    #[test]
    fn product_of_two_coefficients() {
        let p = z((2, 2), 1, 1).checked_mul(&z((2, 2), 2, 2)).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.degree(), 2);
        assert!(p.is_homogeneous());
    }

    #[test]
    fn shape_mismatch() {
        let a = z((2, 2), 1, 1);
        let b = z((3, 3), 1, 1);
        assert!(matches!(a.checked_add(&b), Err(Error::ShapeMismatch { .. })));
        assert!(a.evaluate(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn constant_jet_has_no_derivatives() {
        let c = MatrixPolynomial::constant((2, 2), C64::new(5.0, 0.0));
        let g = ComplexMatrix::identity(2);
        let x = ComplexMatrix::unit(2, 0, 1).scale(I);
        let jet = c.jet2(&g, &x).unwrap();
        assert_eq!(jet.value, C64::new(5.0, 0.0));
        assert_eq!(jet.d1, ZERO);
        assert_eq!(jet.d2, ZERO);
    }

    #[test]
    fn jet_on_circle() {
        // f(e^{it}) = e^{it}: value 1, d1 = i, second derivative −1.
        let f = z((1, 1), 1, 1);
        let g = ComplexMatrix::identity(1);
        let x = ComplexMatrix::from_row_major(1, 1, vec![I]).unwrap();
        let jet = f.jet2(&g, &x).unwrap();
        assert_eq!(jet.value, ONE);
        assert_eq!(jet.d1, I);
        assert_eq!(jet.second_derivative(), -ONE);
    }

    #[test]
    fn parse_print_round_trip() {
        let f = minor((4, 4), &[1, 2, 4], &[1, 2, 3])
            .unwrap()
            .checked_add(&MatrixPolynomial::constant((4, 4), C64::new(0.1, -2.5)))
            .unwrap()
            .scale(C64::new(1.0 / 3.0, 0.25));
        let text = f.to_string();
        let back = MatrixPolynomial::parse((4, 4), &text).unwrap();
        assert_eq!(back, f);
        let json = serde_json::to_string(&f).unwrap();
        let back: MatrixPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(MatrixPolynomial::parse((2, 2), "(1,0) * x[1,1]").is_err());
        assert!(MatrixPolynomial::parse((2, 2), "(1,0) * z[3,1]").is_err());
        assert!(MatrixPolynomial::parse((2, 2), "1 * z[1,1]").is_err());
    }
}
