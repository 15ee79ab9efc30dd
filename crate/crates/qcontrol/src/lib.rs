//! A desk-scale laboratory for the question "can a circuit control a gate it
//! does not know?".
//!
//! The crate simulates small dense quantum systems well enough to study one
//! sharp phenomenon: a circuit that queries an unknown unitary U exactly once
//! cannot act as control-U, even though controlling a *known* gate is easy,
//! an interferometer can control a gate it routes around, and an eigenstate
//! lets Kitaev's trick control a blackbox. The modules provide:
//!
//! * [`linalg`], [`eig`], [`gates`], [`sample`]: dense complex matrices,
//!   a Jacobi Hermitian eigensolver, named qubit gates, seeded randomness;
//! * [`circuit`]: the single-query circuit form B(1 ⊗ U)A and its reduced
//!   channel;
//! * [`constructions`]: the constructions that *do* work: interferometric
//!   routing, eigenstate (Kitaev) control, classical-permutation control;
//! * [`optim`]: deterministic multistart Nelder-Mead over unitaries;
//! * [`nogo`]: obstruction residuals, phase covariance versus
//!   distinguishability, the phase-optimized process fidelity, and the
//!   adversarial search over surrounding circuits.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64`/`*32` aliases below pick a precision. All documented tolerances
//! assume `f64`.

pub mod circuit;
pub mod constructions;
pub mod eig;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod nogo;
pub mod optim;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, PureState, Tolerance};
pub use scalar::Scalar;

/// Double-precision complex matrix, the working type of the laboratory.
pub type Matrix64 = ComplexMatrix<f64>;
/// Single-precision complex matrix for cheap smoke checks.
pub type Matrix32 = ComplexMatrix<f32>;
/// Double-precision pure state.
pub type State64 = PureState<f64>;
/// Single-precision pure state.
pub type State32 = PureState<f32>;
/// Double-precision single-query circuit.
pub type Sandwich64 = circuit::CircuitSandwich<f64>;
/// Double-precision blackbox gate.
pub type Gate64 = circuit::BlackboxGate<f64>;
