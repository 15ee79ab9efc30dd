//! The standard single-qubit gates used throughout the laboratory.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Scalar;
use num_complex::Complex;

pub fn pauli_x<T: Scalar>() -> ComplexMatrix<T> {
    let o = T::zero();
    let l = T::one();
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex::new(o, o),
            Complex::new(l, o),
            Complex::new(l, o),
            Complex::new(o, o),
        ],
    )
}

pub fn pauli_y<T: Scalar>() -> ComplexMatrix<T> {
    let o = T::zero();
    let l = T::one();
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex::new(o, o),
            Complex::new(o, -l),
            Complex::new(o, l),
            Complex::new(o, o),
        ],
    )
}

pub fn pauli_z<T: Scalar>() -> ComplexMatrix<T> {
    let o = T::zero();
    let l = T::one();
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex::new(l, o),
            Complex::new(o, o),
            Complex::new(o, o),
            Complex::new(-l, o),
        ],
    )
}

pub fn hadamard<T: Scalar>() -> ComplexMatrix<T> {
    let o = T::zero();
    let s = T::FRAC_1_SQRT_2();
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex::new(s, o),
            Complex::new(s, o),
            Complex::new(s, o),
            Complex::new(-s, o),
        ],
    )
}

/// S = diag(1, i).
pub fn phase_s<T: Scalar>() -> ComplexMatrix<T> {
    let o = T::zero();
    let l = T::one();
    ComplexMatrix::diagonal(&[Complex::new(l, o), Complex::new(o, l)])
}

/// T = diag(1, e^{i pi/4}).
pub fn phase_t<T: Scalar>() -> ComplexMatrix<T> {
    let l = T::one();
    let s = T::FRAC_1_SQRT_2();
    ComplexMatrix::diagonal(&[Complex::new(l, T::zero()), Complex::new(s, s)])
}

/// Looks a gate up by its conventional name (case-insensitive).
pub fn by_name<T: Scalar>(name: &str) -> Result<ComplexMatrix<T>> {
    match name.to_ascii_uppercase().as_str() {
        "X" => Ok(pauli_x()),
        "Y" => Ok(pauli_y()),
        "Z" => Ok(pauli_z()),
        "H" => Ok(hadamard()),
        "S" => Ok(phase_s()),
        "T" => Ok(phase_t()),
        _ => Err(Error::UnknownName {
            name: name.to_string(),
        }),
    }
}

/// Names accepted by [`by_name`], in a fixed order.
pub const NAMED_GATES: [&str; 6] = ["X", "Y", "Z", "H", "S", "T"];
