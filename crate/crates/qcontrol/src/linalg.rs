//! Dense complex matrices and pure states.
//!
//! Storage is row-major `Vec<Complex<T>>`; every register product in this
//! crate stays at dimension 64 or below, so no sparsity or blocking is
//! needed. Shape mismatches panic; value-level violations (norms, unitarity)
//! return typed errors.

use crate::error::{Error, Result};
use crate::scalar::{czero, real, Scalar};
use num_complex::Complex;
use std::ops::{Add, Index, Mul, Sub};

/// Absolute tolerance wrapper so functions cannot silently swap tolerance
/// and data arguments. The default (1e-10) is the crate-wide check scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T: Scalar> {
    pub eps: T,
}

impl<T: Scalar> Tolerance<T> {
    /// A tolerance must be a finite non-negative real.
    pub fn new(eps: T) -> Result<Self> {
        if !eps.is_finite() || eps < T::zero() {
            return Err(Error::InvalidArgument {
                reason: "tolerance must be finite and non-negative",
            });
        }
        Ok(Self { eps })
    }
}

impl<T: Scalar> Default for Tolerance<T> {
    fn default() -> Self {
        Self { eps: real(1e-10) }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Builds a matrix from row-major data. Panics on shape/data mismatch or
    /// zero-sized shapes.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert_eq!(data.len(), rows * cols, "data length must match shape");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![czero(); rows * cols])
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Square matrix with the given diagonal.
    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = e;
        }
        m
    }

    /// Fills entry (r, c) from a closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::new(rows, cols, data)
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let lhs_row = r * other.cols;
                for c in 0..other.cols {
                    out.data[lhs_row + c] += a * other.data[k * other.cols + c];
                }
            }
        }
        out
    }

    /// Applies the matrix to a raw amplitude vector.
    pub fn apply_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        let mut out = vec![czero(); self.rows];
        for r in 0..self.rows {
            let mut acc = czero();
            for c in 0..self.cols {
                acc += self.data[r * self.cols + c] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// Applies the matrix to a pure state. The caller is responsible for the
    /// matrix being an isometry; the output norm is not re-checked.
    pub fn apply(&self, state: &PureState<T>) -> PureState<T> {
        PureState::from_vec_unchecked(self.apply_vec(state.amplitudes()))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c).conj())
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let data = self.data.iter().map(|&z| z * factor).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square(), "trace requires a square matrix");
        let mut acc = czero();
        for i in 0..self.rows {
            acc += self.data[i * self.cols + i];
        }
        acc
    }

    pub fn frobenius_norm(&self) -> T {
        let mut acc = T::zero();
        for z in &self.data {
            acc = acc + z.norm_sqr();
        }
        acc.sqrt()
    }

    /// Largest entry modulus; handy for entrywise comparisons.
    pub fn max_abs_entry(&self) -> T {
        let mut best = T::zero();
        for z in &self.data {
            best = best.max(z.norm());
        }
        best
    }

    /// `‖A − B‖_F`, panicking on shape mismatch.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.rows, other.rows, "row counts must agree");
        assert_eq!(self.cols, other.cols, "column counts must agree");
        let mut acc = T::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            acc = acc + (a - b).norm_sqr();
        }
        acc.sqrt()
    }

    /// Kronecker product; the right factor indexes fastest, so `a.kron(&b)`
    /// is "a on the slow register, b on the fast register".
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.data[ar * self.cols + ac];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for br in 0..other.rows {
                    for bc in 0..other.cols {
                        out.data[(ar * other.rows + br) * cols + (ac * other.cols + bc)] =
                            a * other.data[br * other.cols + bc];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[r * cols + c] = self.data[r * self.cols + c];
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.data[(self.rows + r) * cols + (self.cols + c)] = other.data[r * other.cols + c];
            }
        }
        out
    }

    /// `‖M†M − 1‖_F`; infinite for non-square input.
    pub fn unitarity_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.adjoint()
            .matmul(self)
            .distance(&Self::identity(self.rows))
    }

    /// True iff the matrix is square and `‖M†M − 1‖_F ≤ eps·dim`.
    pub fn is_unitary(&self, tol: Tolerance<T>) -> bool {
        self.is_square() && self.unitarity_residual() <= tol.eps * real(self.rows as f64)
    }

    /// `‖M − M†‖_F`; infinite for non-square input.
    pub fn hermiticity_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.distance(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: Tolerance<T>) -> bool {
        self.is_square() && self.hermiticity_residual() <= tol.eps * real(self.rows as f64)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T: Scalar> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, other: Self) -> ComplexMatrix<T> {
        assert_eq!(self.rows, other.rows, "row counts must agree");
        assert_eq!(self.cols, other.cols, "column counts must agree");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, other: Self) -> ComplexMatrix<T> {
        assert_eq!(self.rows, other.rows, "row counts must agree");
        assert_eq!(self.cols, other.cols, "column counts must agree");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, other: Self) -> ComplexMatrix<T> {
        self.matmul(other)
    }
}

/// Overlap modulus of two equal-shape square maps, `|Tr[A†B]| / dim`.
/// Equals 1 exactly when B = e^{i phi} A for unitary A, B.
pub fn map_overlap<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    assert!(a.is_square() && b.is_square(), "map overlap needs square matrices");
    assert_eq!(a.rows(), b.rows(), "map overlap needs equal dimensions");
    let mut acc: Complex<T> = czero();
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            acc += a.get(r, c).conj() * b.get(r, c);
        }
    }
    acc.norm() / real(a.rows() as f64)
}

/// Normalized pure state on one or more registers.
///
/// The norm-1 invariant is enforced at every public constructor; operators
/// applied through [`ComplexMatrix::apply`] are trusted to be isometries.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Scalar> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> PureState<T> {
    /// Accepts amplitudes already normalized within the default tolerance.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if (norm - T::one()).abs() > Tolerance::default().eps {
            return Err(Error::NotNormalized {
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if !norm.is_finite() || norm < real(1e-12) {
            return Err(Error::NotNormalized {
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
        let inv = T::one() / norm;
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
        })
    }

    /// Computational basis state `|k⟩` in the given dimension.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index must be below the dimension");
        let mut amplitudes = vec![czero(); dim];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub(crate) fn from_vec_unchecked(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> Complex<T> {
        self.amplitudes[i]
    }

    pub fn norm(&self) -> T {
        vec_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩` with the left argument conjugated.
    pub fn overlap(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim(), "overlap needs equal dimensions");
        let mut acc = czero();
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            acc += a.conj() * b;
        }
        acc
    }

    /// Product state `self ⊗ other` (right factor fastest).
    pub fn kron(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }

    /// Column-matrix view (dim x 1).
    pub fn as_column(&self) -> ComplexMatrix<T> {
        ComplexMatrix::new(self.dim(), 1, self.amplitudes.clone())
    }
}

fn vec_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    let mut acc = T::zero();
    for z in v {
        acc = acc + z.norm_sqr();
    }
    acc.sqrt()
}

/// Trace distance between two pure states, `sqrt(1 − |⟨u|v⟩|²)`.
///
/// Evaluated as `‖v − ⟨u|v⟩·u‖`, the norm of the component of v orthogonal
/// to u. The two forms agree for unit vectors, but this one stays accurate
/// when the states nearly coincide, where `1 − |⟨u|v⟩|²` cancels.
pub fn trace_distance_pure<T: Scalar>(u: &PureState<T>, v: &PureState<T>) -> T {
    assert_eq!(u.dim(), v.dim(), "trace distance needs equal dimensions");
    let c = u.overlap(v);
    let mut acc = T::zero();
    for (uk, vk) in u.amplitudes().iter().zip(v.amplitudes()) {
        acc = acc + (*vk - c * uk).norm_sqr();
    }
    acc.sqrt()
}
