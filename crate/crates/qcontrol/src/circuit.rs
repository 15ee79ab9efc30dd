//! Single-query circuit model.
//!
//! The most general circuit that queries an unknown gate exactly once is a
//! sandwich: a fixed unitary A, then the query applied to one register, then
//! a fixed unitary B, with an ancilla prepared in |0⟩. Register order is
//! always ancilla ⊗ control ⊗ target (ancilla index slowest), and the
//! control-|0⟩ sector of a controlled gate is the identity sector.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState, Tolerance};
use crate::scalar::Scalar;
use num_complex::Complex;

/// `control_u(U) = 1_d ⊕ U` on control ⊗ target: identity when the control
/// qubit is |0⟩, U when it is |1⟩.
pub fn control_u<T: Scalar>(u: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    assert!(u.is_square(), "controlled gate needs a square matrix");
    ComplexMatrix::identity(u.rows()).direct_sum(u)
}

/// A unitary the circuits may query, optionally carrying one known eigenpair
/// (the piece of classical knowledge the eigenstate-control trick consumes).
#[derive(Debug, Clone)]
pub struct BlackboxGate<T: Scalar> {
    dim: usize,
    matrix: ComplexMatrix<T>,
    eigenpair: Option<(PureState<T>, Complex<T>)>,
}

impl<T: Scalar> BlackboxGate<T> {
    /// Wraps a unitary with no declared eigenpair.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_unitary(Tolerance::default()) {
            return Err(Error::NotUnitary {
                residual: matrix.unitarity_residual().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            dim: matrix.rows(),
            matrix,
            eigenpair: None,
        })
    }

    /// Wraps a unitary together with a known eigenpair, validated to
    /// `‖U e − λ e‖ ≤ 1e-8`.
    pub fn with_eigenpair(
        matrix: ComplexMatrix<T>,
        eigenstate: PureState<T>,
        eigenvalue: Complex<T>,
    ) -> Result<Self> {
        let mut gate = Self::new(matrix)?;
        if eigenstate.dim() != gate.dim {
            return Err(Error::DimensionMismatch {
                context: "eigenstate dimension",
                expected: gate.dim,
                got: eigenstate.dim(),
            });
        }
        let image = gate.matrix.apply_vec(eigenstate.amplitudes());
        let mut residual_sq = T::zero();
        for (got, amp) in image.iter().zip(eigenstate.amplitudes()) {
            residual_sq = residual_sq + (*got - eigenvalue * amp).norm_sqr();
        }
        let residual = residual_sq.sqrt();
        if residual > crate::scalar::real(1e-8) {
            return Err(Error::InvalidEigenpair {
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        gate.eigenpair = Some((eigenstate, eigenvalue));
        Ok(gate)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn eigenpair(&self) -> Option<&(PureState<T>, Complex<T>)> {
        self.eigenpair.as_ref()
    }
}

/// Fixed circuit B (1 ⊗ 1 ⊗ U) A on ancilla ⊗ control ⊗ target, with the
/// ancilla prepared in |0⟩.
#[derive(Debug, Clone)]
pub struct CircuitSandwich<T: Scalar> {
    ancilla_dim: usize,
    target_dim: usize,
    pre: ComplexMatrix<T>,
    post: ComplexMatrix<T>,
}

impl<T: Scalar> CircuitSandwich<T> {
    /// Validates both fixed unitaries against the register layout
    /// `ancilla_dim * 2 * target_dim`.
    pub fn new(
        ancilla_dim: usize,
        target_dim: usize,
        pre: ComplexMatrix<T>,
        post: ComplexMatrix<T>,
    ) -> Result<Self> {
        if ancilla_dim == 0 || target_dim == 0 {
            return Err(Error::InvalidArgument {
                reason: "register dimensions must be positive",
            });
        }
        let total = ancilla_dim * 2 * target_dim;
        for (name, m) in [("pre-circuit", &pre), ("post-circuit", &post)] {
            if m.rows() != total || m.cols() != total {
                return Err(Error::DimensionMismatch {
                    context: if name == "pre-circuit" {
                        "pre-circuit operator dimension"
                    } else {
                        "post-circuit operator dimension"
                    },
                    expected: total,
                    got: m.rows(),
                });
            }
            if !m.is_unitary(Tolerance::default()) {
                return Err(Error::NotUnitary {
                    residual: m.unitarity_residual().to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self {
            ancilla_dim,
            target_dim,
            pre,
            post,
        })
    }

    /// Skips validation; for internal hot paths where the factors are unitary
    /// by construction.
    pub(crate) fn from_parts_unchecked(
        ancilla_dim: usize,
        target_dim: usize,
        pre: ComplexMatrix<T>,
        post: ComplexMatrix<T>,
    ) -> Self {
        Self {
            ancilla_dim,
            target_dim,
            pre,
            post,
        }
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn pre(&self) -> &ComplexMatrix<T> {
        &self.pre
    }

    pub fn post(&self) -> &ComplexMatrix<T> {
        &self.post
    }

    /// Total register dimension `ancilla * 2 * target`.
    pub fn total_dim(&self) -> usize {
        self.ancilla_dim * 2 * self.target_dim
    }
}

/// The isometry `W(U) = B (1 ⊗ 1 ⊗ U) A (|0⟩_a ⊗ 1)`: the circuit as seen
/// from control ⊗ target, with the ancilla rows kept. Shape is
/// `(a·2d) x (2d)`; `W†W = 1` to working precision because A and B are
/// unitary.
pub fn sandwich_operator<T: Scalar>(
    sandwich: &CircuitSandwich<T>,
    u: &ComplexMatrix<T>,
) -> ComplexMatrix<T> {
    let d = sandwich.target_dim;
    assert_eq!(u.rows(), d, "query dimension must match the target register");
    assert!(u.is_square(), "query must be square");
    let query = ComplexMatrix::identity(2 * sandwich.ancilla_dim).kron(u);
    let full = sandwich.post.matmul(&query).matmul(&sandwich.pre);
    // Ancilla is the slowest index, so the |0⟩_a-ancilla columns are exactly
    // the first 2d columns of the full product.
    ComplexMatrix::from_fn(sandwich.total_dim(), 2 * d, |r, c| full.get(r, c))
}

/// Kraus operators of the induced channel on control ⊗ target: block k of
/// rows of the sandwich operator, i.e. `W_k = (⟨k|_a ⊗ 1) W(U)`. They satisfy
/// the completeness relation `Σ W_k† W_k = 1`.
pub fn reduced_channel_kraus<T: Scalar>(
    sandwich: &CircuitSandwich<T>,
    u: &ComplexMatrix<T>,
) -> Vec<ComplexMatrix<T>> {
    let w = sandwich_operator(sandwich, u);
    let block = 2 * sandwich.target_dim;
    (0..sandwich.ancilla_dim)
        .map(|k| ComplexMatrix::from_fn(block, block, |r, c| w.get(k * block + r, c)))
        .collect()
}

/// True iff two states agree up to a global phase: `|⟨u|v⟩| ≥ 1 − eps`.
pub fn global_phase_equivalent<T: Scalar>(
    u: &PureState<T>,
    v: &PureState<T>,
    tol: Tolerance<T>,
) -> bool {
    u.dim() == v.dim() && u.overlap(v).norm() >= T::one() - tol.eps
}

/// The circuit that realizes `control_u(u0)` when the queried gate is the
/// known unitary `u0`: feed the target through the query bare, then undo it
/// and apply the controlled version in the post-circuit. Single ancilla
/// (dimension 1), exactly one query.
pub fn known_unitary_sandwich<T: Scalar>(u0: &ComplexMatrix<T>) -> Result<CircuitSandwich<T>> {
    if !u0.is_unitary(Tolerance::default()) {
        return Err(Error::NotUnitary {
            residual: u0.unitarity_residual().to_f64().unwrap_or(f64::NAN),
        });
    }
    let d = u0.rows();
    let pre = ComplexMatrix::identity(2 * d);
    let undo = ComplexMatrix::identity(2).kron(&u0.adjoint());
    let post = control_u(u0).matmul(&undo);
    Ok(CircuitSandwich::from_parts_unchecked(1, d, pre, post))
}
