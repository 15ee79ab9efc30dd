//! Eigendecompositions used by the laboratory.
//!
//! The worker is a cyclic Jacobi solver for complex Hermitian matrices: each
//! rotation zeroes one off-diagonal pair exactly, sweeps repeat until the
//! off-diagonal Frobenius norm falls below a machine-precision threshold.
//! Quadratic convergence makes this entirely adequate for the dimensions
//! (<= 64) this crate works at, and it has no external dependencies whose
//! internals would be hard to audit.
//!
//! Eigenvectors of a *unitary* U are recovered by diagonalizing the Hermitian
//! part (U + U†)/2 and refining each degenerate cluster with the Hermitian
//! image of the anti-Hermitian part; the two commute, so the refined basis
//! diagonalizes U itself.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState, Tolerance};
use crate::scalar::{czero, real, Scalar};
use num_complex::Complex;

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input may deviate from exact Hermiticity by at most `eps * dim` in
/// Frobenius norm (default tolerance); it is symmetrized before iterating, so
/// that slack never leaks into the result.
pub fn hermitian_eigen<T: Scalar>(h: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            context: "hermitian_eigen input must be square",
            expected: h.rows(),
            got: h.cols(),
        });
    }
    let n = h.rows();
    let residual = h.hermiticity_residual();
    if residual > Tolerance::<T>::default().eps * real(n as f64) {
        return Err(Error::NotHermitian {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }

    // Work on the symmetrized copy (H + H†)/2.
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| {
        (h.get(r, c) + h.get(c, r).conj()).scale(real(0.5))
    });
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    if scale == T::zero() || n == 1 {
        let values = (0..n).map(|i| a.get(i, i).re).collect();
        return Ok(HermitianEigen { values, vectors: v });
    }
    let converged = scale * T::epsilon() * real(n as f64);

    let max_sweeps = 64;
    let mut sweep = 0;
    loop {
        if off_diagonal_norm(&a) <= converged {
            break;
        }
        sweep += 1;
        if sweep > max_sweeps {
            return Err(Error::NoConvergence {
                what: "Jacobi sweep limit",
                residual: off_diagonal_norm(&a).to_f64().unwrap_or(f64::NAN),
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    // Diagonal entries of a Hermitian matrix are real; discard rotation
    // round-off in the imaginary parts.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm<T: Scalar>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc = acc + a.get(p, q).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi step: a unitary 2x2 rotation in the (p, q) plane that zeroes
/// A[p][q]. Factorized as a diagonal phase (turning the pivot real) followed
/// by a real Givens rotation with the textbook stable tangent formula.
fn jacobi_rotate<T: Scalar>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let pivot = a.get(p, q);
    let am = pivot.norm();
    if am == T::zero() {
        return;
    }
    let eiphi = pivot / Complex::new(am, T::zero());
    let alpha = a.get(p, p).re;
    let beta = a.get(q, q).re;
    let tau = (beta - alpha) / (real::<T>(2.0) * am);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    // R[p][p] = c, R[p][q] = s, R[q][p] = -s e^{-i phi}, R[q][q] = c e^{-i phi}.
    let cs = Complex::new(c, T::zero());
    let sp = Complex::new(s, T::zero());
    let m_s_conj = -sp * eiphi.conj();
    let c_conj = cs * eiphi.conj();

    let n = a.rows();
    // Columns: A <- A R, V <- V R.
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * cs + akq * m_s_conj);
        a.set(k, q, akp * sp + akq * c_conj);

        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * cs + vkq * m_s_conj);
        v.set(k, q, vkp * sp + vkq * c_conj);
    }
    // Rows: A <- R† A.
    let m_s_phase = -sp * eiphi;
    let c_phase = cs * eiphi;
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * cs + aqk * m_s_phase);
        a.set(q, k, apk * sp + aqk * c_phase);
    }
    // The rotation annihilates the pivot analytically; pin it to zero and
    // keep the diagonal exactly real so round-off cannot accumulate.
    a.set(p, q, czero());
    a.set(q, p, czero());
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    a.set(p, p, Complex::new(app.re, T::zero()));
    a.set(q, q, Complex::new(aqq.re, T::zero()));
}

/// `exp(iH)` for Hermitian H, via eigendecomposition.
pub fn expi_hermitian<T: Scalar>(h: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eigen(h)?;
    let n = h.rows();
    // (V e^{i diag}) V†
    let scaled = ComplexMatrix::from_fn(n, n, |r, c| {
        eig.vectors.get(r, c) * Complex::from_polar(T::one(), eig.values[c])
    });
    Ok(scaled.matmul(&eig.vectors.adjoint()))
}

/// All eigenpairs of a unitary matrix, each validated to residual 1e-8.
///
/// Returned eigenvalues are normalized to unit modulus; the order is
/// deterministic (ascending real part, ties refined by ascending imaginary
/// part).
pub fn unitary_eigenpairs<T: Scalar>(
    u: &ComplexMatrix<T>,
) -> Result<Vec<(Complex<T>, PureState<T>)>> {
    if !u.is_unitary(Tolerance::default()) {
        return Err(Error::NotUnitary {
            residual: u.unitarity_residual().to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = u.rows();
    let half = Complex::new(real::<T>(0.5), T::zero());
    let m_half_i = Complex::new(T::zero(), -real::<T>(0.5));
    let u_dag = u.adjoint();
    let h1 = (u + &u_dag).scale(half);
    let h2 = (u - &u_dag).scale(m_half_i);

    let eig1 = hermitian_eigen(&h1)?;
    // Cluster H1 eigenvalues; inside a cluster H2 separates the conjugate
    // phases. The gap tolerance is far above eigenvalue round-off and far
    // below any separation that matters to the refinement.
    let gap = real::<T>(1e-7).max(T::epsilon() * real(64.0));
    let mut pairs: Vec<(Complex<T>, PureState<T>)> = Vec::with_capacity(n);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig1.values[end] - eig1.values[end - 1] <= gap {
            end += 1;
        }
        let k = end - start;
        if k == 1 {
            let v: Vec<Complex<T>> = (0..n).map(|r| eig1.vectors.get(r, start)).collect();
            pairs.push(rayleigh_pair(u, v)?);
        } else {
            let basis = ComplexMatrix::from_fn(n, k, |r, c| eig1.vectors.get(r, start + c));
            let small = basis.adjoint().matmul(&h2.matmul(&basis));
            let refine = hermitian_eigen(&small)?;
            for c in 0..k {
                let col = ComplexMatrix::from_fn(k, 1, |r, _| refine.vectors.get(r, c));
                let v = basis.matmul(&col);
                let amps: Vec<Complex<T>> = (0..n).map(|r| v.get(r, 0)).collect();
                pairs.push(rayleigh_pair(u, amps)?);
            }
        }
        start = end;
    }
    Ok(pairs)
}

fn rayleigh_pair<T: Scalar>(
    u: &ComplexMatrix<T>,
    amplitudes: Vec<Complex<T>>,
) -> Result<(Complex<T>, PureState<T>)> {
    let state = PureState::normalized(amplitudes)?;
    let image = u.apply_vec(state.amplitudes());
    let mut lambda = czero();
    for (a, b) in state.amplitudes().iter().zip(&image) {
        lambda += a.conj() * b;
    }
    let modulus = lambda.norm();
    if modulus > T::zero() {
        lambda = lambda / Complex::new(modulus, T::zero());
    }
    let mut residual_sq = T::zero();
    for (a, b) in state.amplitudes().iter().zip(&image) {
        residual_sq = residual_sq + (*b - lambda * a).norm_sqr();
    }
    let residual = residual_sq.sqrt();
    if residual > real(1e-8) {
        return Err(Error::InvalidEigenpair {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((lambda, state))
}

/// Hermitian G with `exp(iG) = U` (principal branch of each eigenphase).
pub fn hermitian_generator<T: Scalar>(u: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = u.rows();
    let pairs = unitary_eigenpairs(u)?;
    let mut g = ComplexMatrix::zeros(n, n);
    for (lambda, v) in &pairs {
        let theta = lambda.im.atan2(lambda.re);
        for r in 0..n {
            for c in 0..n {
                let add = v.amplitude(r) * v.amplitude(c).conj() * Complex::new(theta, T::zero());
                g.set(r, c, g.get(r, c) + add);
            }
        }
    }
    Ok(g)
}
