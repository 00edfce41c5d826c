//! Classical invariants of a knot from a Seifert matrix.
//!
//! Convention: `A(i, j) = lk(a_i⁺, a_j)` for a basis `a_1, …, a_2g` of the
//! Seifert surface. With it the trefoil block `[[1,0],[1,1]]` has
//! `σ(−1) = +2`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclotomic::{CyclotomicField, FieldElement};
use crate::polynomial::cyclotomic_polynomial;
pub use crate::polynomial::IntPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("Seifert matrix must have even size, got {0}")]
    OddSize(usize),
    #[error("det(A - A^T) = {0}, expected 1")]
    InvalidPairing(BigInt),
    #[error("change of basis matrix has determinant {0}, expected ±1")]
    NotUnimodular(BigInt),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid angle {p}/{d}: need 0 < p/d < 1")]
    InvalidAngle { p: i64, d: i64 },
    #[error("exp(2πi·{0}) is a root of the Alexander polynomial {1}; the signature is not defined there")]
    AlexanderRoot(UnitRootAngle, IntPolynomial),
}

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics on ragged rows.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Fraction-free (Bareiss) determinant. Panics on non-square input.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A square integer matrix `A` of even size with `det(A − Aᵀ) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeifertMatrix {
    matrix: IntMatrix,
}

impl SeifertMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self, SeifertError> {
        if !matrix.is_square() {
            return Err(SeifertError::NotSquare {
                rows: matrix.rows,
                cols: matrix.cols,
            });
        }
        if !matrix.rows.is_multiple_of(2) {
            return Err(SeifertError::OddSize(matrix.rows));
        }
        // a skew determinant is a square, so ±1 can only be 1
        let det = matrix.sub(&matrix.transpose()).determinant();
        if !det.is_one() {
            return Err(SeifertError::InvalidPairing(det));
        }
        Ok(SeifertMatrix { matrix })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, SeifertError> {
        Self::new(IntMatrix::from_i64(rows))
    }

    /// The 0×0 matrix of the unknot.
    pub fn unknot() -> Self {
        SeifertMatrix {
            matrix: IntMatrix::zeros(0, 0),
        }
    }

    pub fn trefoil() -> Self {
        Self::from_i64(&[vec![1, 0], vec![1, 1]]).expect("valid")
    }

    pub fn figure_eight() -> Self {
        Self::from_i64(&[vec![-1, 0], vec![1, 1]]).expect("valid")
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows
    }

    /// Genus of the Seifert surface, half the size.
    pub fn genus(&self) -> usize {
        self.matrix.rows / 2
    }
}

impl fmt::Display for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// `ω = exp(2πi p/d)` with `p/d` reduced and strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitRootAngle {
    p: u64,
    d: u64,
}

impl UnitRootAngle {
    /// Reduces `p/d`; rejects values outside `(0, 1)`.
    pub fn new(p: i64, d: i64) -> Result<Self, SeifertError> {
        if d <= 0 || p <= 0 || p >= d {
            return Err(SeifertError::InvalidAngle { p, d });
        }
        let g = p.gcd(&d);
        Ok(UnitRootAngle {
            p: (p / g) as u64,
            d: (d / g) as u64,
        })
    }

    /// `ω = −1`.
    pub fn minus_one() -> Self {
        UnitRootAngle { p: 1, d: 2 }
    }

    pub fn numerator(&self) -> u64 {
        self.p
    }

    pub fn denominator(&self) -> u64 {
        self.d
    }

    /// `ω̄ = exp(2πi (d−p)/d)`.
    pub fn conjugate(&self) -> Self {
        UnitRootAngle {
            p: self.d - self.p,
            d: self.d,
        }
    }

    /// `2π p/d`.
    pub fn radians(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.p as f64 / self.d as f64
    }
}

impl fmt::Display for UnitRootAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.d)
    }
}

impl FromStr for UnitRootAngle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, d) = s
            .split_once('/')
            .ok_or_else(|| format!("angle '{s}' must be written p/d"))?;
        let p: i64 = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in '{s}'"))?;
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in '{s}'"))?;
        UnitRootAngle::new(p, d).map_err(|e| e.to_string())
    }
}

/// `det(A − tAᵀ)`, normalized: no `t^k` factor, lowest coefficient positive.
pub fn alexander(seifert: &SeifertMatrix) -> IntPolynomial {
    let a = &seifert.matrix;
    let n = a.rows;
    let at = a.transpose();
    // det(A − tAᵀ) has degree ≤ n; sample at t = 0..=n and interpolate
    let samples: Vec<BigRational> = (0..=n)
        .map(|t| {
            let t = BigInt::from(t);
            let data = a
                .data
                .iter()
                .zip(&at.data)
                .map(|(x, y)| x - &t * y)
                .collect();
            let m = IntMatrix {
                rows: n,
                cols: n,
                data,
            };
            BigRational::from_integer(m.determinant())
        })
        .collect();
    // Newton divided differences on the nodes 0..=n
    let mut diffs = samples;
    for level in 1..=n {
        for i in (level..=n).rev() {
            let span = BigRational::from_integer(BigInt::from(level));
            diffs[i] = (&diffs[i] - &diffs[i - 1]) / span;
        }
    }
    let mut coeffs = vec![BigRational::zero()];
    for k in (0..=n).rev() {
        // coeffs = coeffs·(t − k) + diffs[k]
        let mut next = vec![BigRational::zero(); coeffs.len() + 1];
        let node = BigRational::from_integer(BigInt::from(k));
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &node;
        }
        next[0] += &diffs[k];
        coeffs = next;
    }
    let ints: Vec<BigInt> = coeffs
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    IntPolynomial::new(ints).normalized()
}

/// Whether `ω` is a root of `Δ`, i.e. `Φ_d | Δ`.
pub fn is_alexander_root(seifert: &SeifertMatrix, angle: UnitRootAngle) -> bool {
    is_root_of(&alexander(seifert), angle)
}

fn is_root_of(delta: &IntPolynomial, angle: UnitRootAngle) -> bool {
    let phi = cyclotomic_polynomial(angle.d as usize);
    delta.div_rem_monic(&phi).1.is_zero()
}

/// `(1−ω)A + (1−ω̄)Aᵀ` over `ℚ(ω)`.
fn hermitian_form(field: &CyclotomicField, a: &IntMatrix) -> Vec<Vec<FieldElement>> {
    let one = field.from_int(1);
    let u = field.sub(&one, &field.omega_pow(1));
    let u_bar = field.conj(&u);
    let n = a.rows;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    field.add(
                        &field.scale_int(&u, a.get(i, j)),
                        &field.scale_int(&u_bar, a.get(j, i)),
                    )
                })
                .collect()
        })
        .collect()
}

/// Inertia `(positive, negative, zero)` of a Hermitian matrix over `ℚ(ω)`,
/// by exact congruence pivoting.
fn hermitian_inertia(
    field: &CyclotomicField,
    mut h: Vec<Vec<FieldElement>>,
) -> (usize, usize, usize) {
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut active: Vec<usize> = (0..h.len()).collect();
    while !active.is_empty() {
        let pivot = active.iter().position(|&i| !h[i][i].is_zero());
        let k = match pivot {
            Some(k) => k,
            None => {
                let found = active.iter().enumerate().find_map(|(ai, &i)| {
                    active
                        .iter()
                        .find(|&&j| j != i && !h[i][j].is_zero())
                        .map(|&j| (ai, i, j))
                });
                let Some((ai, i, j)) = found else {
                    // the remaining block is zero
                    zero += active.len();
                    break;
                };
                // col_i += c·col_j, row_i += c̄·row_j with c = conj(h_ij)
                // makes h_ii = 2|h_ij|² > 0
                let c = field.conj(&h[i][j]);
                let c_bar = h[i][j].clone();
                for &r in &active {
                    let add = field.mul(&c, &h[r][j]);
                    h[r][i] = field.add(&h[r][i], &add);
                }
                for &s in &active {
                    let add = field.mul(&c_bar, &h[j][s]);
                    h[i][s] = field.add(&h[i][s], &add);
                }
                ai
            }
        };
        let p = active.remove(k);
        let pivot = h[p][p].clone();
        match field.real_sign(&pivot) {
            1 => pos += 1,
            -1 => neg += 1,
            _ => unreachable!("pivot is nonzero"),
        }
        let inv = field.inv(&pivot).expect("nonzero pivot");
        for &i in &active {
            if h[i][p].is_zero() {
                continue;
            }
            let factor = field.mul(&h[i][p], &inv);
            for &j in &active {
                if h[p][j].is_zero() {
                    continue;
                }
                let sub = field.mul(&factor, &h[p][j]);
                h[i][j] = field.sub(&h[i][j], &sub);
            }
        }
    }
    (pos, neg, zero)
}

// Leading principal minors of `Pᵀ·xH(x)·P`, with `xH(x) = (x − x²)A + (x − 1)Aᵀ`
// and `P` an integer unimodular matrix chosen along the way so that no
// minor vanishes identically, by Bareiss elimination over ℤ[x]. An integer
// row operation on the active block followed by the same column operation
// is the congruence it is on the original matrix, since every entry of the
// block is a bordered minor, linear in its row and column. `None` if the
// active block ever has zero diagonal that no such operation repairs.
fn leading_minors(a: &IntMatrix) -> Option<Vec<IntPolynomial>> {
    let n = a.rows;
    let mut m: Vec<Vec<IntPolynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (aij, aji) = (a.get(i, j), a.get(j, i));
                    IntPolynomial::new(vec![-aji.clone(), aij + aji, -aij.clone()])
                })
                .collect()
        })
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = IntPolynomial::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(l) = (k + 1..n).find(|&l| !m[l][l].is_zero()) {
                m.swap(k, l);
                for row in m.iter_mut() {
                    row.swap(k, l);
                }
            } else {
                let j = (k + 1..n).find(|&j| !m[k][j].add(&m[j][k]).is_zero())?;
                // row_k += row_j, col_k += col_j
                let row_j = m[j].clone();
                for (x, y) in m[k].iter_mut().zip(&row_j) {
                    *x = x.add(y);
                }
                for row in m.iter_mut() {
                    row[k] = row[k].add(&row[j]);
                }
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = pivot.mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        minors.push(pivot.clone());
        prev = pivot;
    }
    Some(minors)
}

/// The Levine–Tristram signature function `ω ↦ σ_K(ω)` of one Seifert
/// matrix, with the work that does not depend on `ω` done once.
///
/// At each angle the pivots of `H(ω)` are read off the leading principal
/// minors, which are polynomials in `ω` computed up front; if one of them
/// vanishes at `ω`, the signature falls back to congruence pivoting over
/// `ℚ(ω)`.
pub struct SignatureFunction<'a> {
    seifert: &'a SeifertMatrix,
    delta: IntPolynomial,
    minors: Option<Vec<IntPolynomial>>,
}

impl<'a> SignatureFunction<'a> {
    pub fn new(seifert: &'a SeifertMatrix) -> Self {
        SignatureFunction {
            seifert,
            delta: alexander(seifert),
            minors: leading_minors(&seifert.matrix),
        }
    }

    pub fn alexander(&self) -> &IntPolynomial {
        &self.delta
    }

    pub fn is_root(&self, angle: UnitRootAngle) -> bool {
        is_root_of(&self.delta, angle)
    }

    /// `σ(ω)`; an error at roots of `Δ`, where the form is degenerate.
    pub fn at(&self, angle: UnitRootAngle) -> Result<i64, SeifertError> {
        if self.is_root(angle) {
            return Err(SeifertError::AlexanderRoot(angle, self.delta.clone()));
        }
        Ok(self.at_unchecked(angle))
    }

    fn at_unchecked(&self, angle: UnitRootAngle) -> i64 {
        if self.seifert.size() == 0 {
            return 0;
        }
        let field = CyclotomicField::new(angle.p, angle.d);
        if let Some(minors) = &self.minors {
            let mut signs = Vec::with_capacity(minors.len());
            for (k, p) in minors.iter().enumerate() {
                // the k×k minor of H is ω^{−k} times that of xH(x)
                let value = field.from_laurent(p.coeffs(), k as i64 + 1);
                match field.real_sign(&value) {
                    0 => return signature_by_pivoting(&field, &self.seifert.matrix),
                    s => signs.push(s),
                }
            }
            let mut previous = 1;
            let mut signature = 0;
            for s in signs {
                signature += (s * previous) as i64;
                previous = s;
            }
            return signature;
        }
        signature_by_pivoting(&field, &self.seifert.matrix)
    }
}

/// Levine–Tristram signature `σ(ω)`, computed exactly.
pub fn levine_tristram(seifert: &SeifertMatrix, angle: UnitRootAngle) -> Result<i64, SeifertError> {
    SignatureFunction::new(seifert).at(angle)
}

/// `σ(ω)` by congruence pivoting on the full Hermitian form, without the
/// leading-minor shortcut. Errors at roots of `Δ`.
pub fn levine_tristram_pivoting(
    seifert: &SeifertMatrix,
    angle: UnitRootAngle,
) -> Result<i64, SeifertError> {
    let delta = alexander(seifert);
    if is_root_of(&delta, angle) {
        return Err(SeifertError::AlexanderRoot(angle, delta));
    }
    if seifert.size() == 0 {
        return Ok(0);
    }
    let field = CyclotomicField::new(angle.p, angle.d);
    Ok(signature_by_pivoting(&field, &seifert.matrix))
}

fn signature_by_pivoting(field: &CyclotomicField, a: &IntMatrix) -> i64 {
    let h = hermitian_form(field, a);
    let (pos, neg, zero) = hermitian_inertia(field, h);
    debug_assert_eq!(zero, 0, "nonsingular away from Alexander roots");
    pos as i64 - neg as i64
}

/// Floating point signature of `(1−ω)A + (1−ω̄)Aᵀ` at `ω = exp(iθ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatSignature {
    pub signature: i64,
    /// Smallest eigenvalue magnitude; the count is trustworthy only when
    /// this is well away from zero.
    pub min_abs_eigenvalue: f64,
}

/// Eigenvalue oracle: the `2n × 2n` real form `[[X, −Y], [Y, X]]` of
/// `H = X + iY` has every eigenvalue of `H` twice.
pub fn levine_tristram_float(seifert: &SeifertMatrix, theta: f64) -> FloatSignature {
    let n = seifert.size();
    if n == 0 {
        return FloatSignature {
            signature: 0,
            min_abs_eigenvalue: f64::INFINITY,
        };
    }
    let a = |i: usize, j: usize| seifert.matrix.get(i, j).to_f64().expect("finite entry");
    let (c, s) = (1.0 - theta.cos(), theta.sin());
    let real = DMatrix::from_fn(2 * n, 2 * n, |r, col| {
        let (i, j) = (r % n, col % n);
        let x = c * (a(i, j) + a(j, i));
        let y = s * (a(j, i) - a(i, j));
        match (r < n, col < n) {
            (true, true) | (false, false) => x,
            (true, false) => -y,
            (false, true) => y,
        }
    });
    let eig = real.symmetric_eigen().eigenvalues;
    let pos = eig.iter().filter(|&&e| e > 0.0).count() as i64;
    let neg = eig.iter().filter(|&&e| e < 0.0).count() as i64;
    let min = eig.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
    FloatSignature {
        signature: (pos - neg) / 2,
        min_abs_eigenvalue: min,
    }
}

/// Result of scanning `σ` over roots of unity of bounded order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureScan {
    pub max_abs: i64,
    /// First angle attaining the maximum, if any angle was evaluated.
    pub at: Option<UnitRootAngle>,
    /// `d_max > 2 deg Δ`.
    pub saturated: bool,
    pub evaluated: usize,
}

/// `max |σ(p/d)|` over reduced `p/d` with `d ≤ d_max`, skipping Alexander
/// roots. Only `p/d ≤ 1/2` is evaluated since `σ(ω̄) = σ(ω)`.
pub fn max_abs_signature(seifert: &SeifertMatrix, d_max: u64) -> SignatureScan {
    let function = SignatureFunction::new(seifert);
    let degree = function.alexander().degree().unwrap_or(0) as u64;
    let mut scan = SignatureScan {
        max_abs: 0,
        at: None,
        saturated: d_max > 2 * degree,
        evaluated: 0,
    };
    for d in 2..=d_max {
        for p in 1..=d / 2 {
            if p.gcd(&d) != 1 {
                continue;
            }
            let angle = UnitRootAngle { p, d };
            if function.is_root(angle) {
                continue;
            }
            let sigma = function.at_unchecked(angle).abs();
            scan.evaluated += 1;
            if scan.at.is_none() || sigma > scan.max_abs {
                scan.max_abs = sigma;
                scan.at = Some(angle);
            }
        }
    }
    scan
}

/// Arf invariant by the Murasugi congruence: 0 iff `Δ(−1) ≡ ±1 (mod 8)`.
pub fn arf(seifert: &SeifertMatrix) -> u8 {
    let value = alexander(seifert).eval(&BigInt::from(-1)).abs();
    let residue = (value % BigInt::from(8)).to_u8().expect("small residue");
    match residue {
        1 | 7 => 0,
        _ => 1,
    }
}

/// Arf invariant of the mod 2 quadratic form `x ↦ xᵀAx`, computed over a
/// symplectic basis of `A + Aᵀ mod 2`.
pub fn arf_quadratic_form(seifert: &SeifertMatrix) -> u8 {
    let n = seifert.size();
    let a: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| seifert.matrix.get(i, j).is_odd() as u8)
                .collect()
        })
        .collect();
    let bilinear = |x: &[u8], y: &[u8]| -> u8 {
        let mut acc = 0;
        for i in 0..n {
            for j in 0..n {
                acc ^= x[i] & y[j] & (a[i][j] ^ a[j][i]);
            }
        }
        acc
    };
    let quad = |x: &[u8]| -> u8 {
        let mut acc = 0;
        for i in 0..n {
            for j in 0..n {
                acc ^= x[i] & x[j] & a[i][j];
            }
        }
        acc
    };
    let mut pool: Vec<Vec<u8>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as u8).collect())
        .collect();
    let mut total = 0u8;
    while let Some(e) = pool.pop() {
        let Some(fi) = pool.iter().position(|v| bilinear(&e, v) == 1) else {
            // e is in the radical; impossible for a valid Seifert matrix
            continue;
        };
        let f = pool.swap_remove(fi);
        total ^= quad(&e) & quad(&f);
        for v in &mut pool {
            let (ve, vf) = (bilinear(v, &e), bilinear(v, &f));
            for k in 0..n {
                v[k] ^= (vf & e[k]) ^ (ve & f[k]);
            }
        }
    }
    total
}

/// Block diagonal sum, the Seifert matrix of `K # J`.
pub fn connected_sum(a: &SeifertMatrix, b: &SeifertMatrix) -> SeifertMatrix {
    SeifertMatrix {
        matrix: a.matrix.direct_sum(&b.matrix),
    }
}

/// `−Aᵀ`, the Seifert matrix of `−K` (mirror image, reversed orientation).
pub fn mirror_reverse(a: &SeifertMatrix) -> SeifertMatrix {
    SeifertMatrix {
        matrix: a.matrix.transpose().neg(),
    }
}

/// `BᵀAB` for a unimodular `B`.
pub fn change_basis(a: &SeifertMatrix, b: &IntMatrix) -> Result<SeifertMatrix, SeifertError> {
    if !b.is_square() {
        return Err(SeifertError::NotSquare {
            rows: b.rows,
            cols: b.cols,
        });
    }
    if b.rows != a.size() {
        return Err(SeifertError::DimensionMismatch {
            left: a.size(),
            right: b.rows,
        });
    }
    let det = b.determinant();
    if det.abs() != BigInt::one() {
        return Err(SeifertError::NotUnimodular(det));
    }
    Ok(SeifertMatrix {
        matrix: b.transpose().mul(&a.matrix).mul(b),
    })
}
