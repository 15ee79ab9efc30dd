//! The three ways around the single-query control obstruction, each built on
//! information the plain circuit model refuses to grant: a physical vacuum
//! extension (the interferometer), a known eigenpair (eigenstate control),
//! and classical basis-state inputs (copy control).

use crate::circuit::{control_u, BlackboxGate, CircuitSandwich};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState, Tolerance};
use crate::scalar::{czero, real, Scalar};
use num_complex::Complex;

/// Photonic register: polarization (2) ⊗ path (2) ⊗ internal (d), with
/// polarization the slowest index. Path 0 is the reference arm `r`, path 1
/// the blocked arm `b` that traverses the gate.
#[derive(Debug, Clone)]
pub struct PhotonState<T: Scalar> {
    internal_dim: usize,
    state: PureState<T>,
}

impl<T: Scalar> PhotonState<T> {
    pub fn new(internal_dim: usize, state: PureState<T>) -> Result<Self> {
        if state.dim() != 4 * internal_dim {
            return Err(Error::DimensionMismatch {
                context: "photon register dimension",
                expected: 4 * internal_dim,
                got: state.dim(),
            });
        }
        Ok(Self { internal_dim, state })
    }

    pub fn internal_dim(&self) -> usize {
        self.internal_dim
    }

    pub fn state(&self) -> &PureState<T> {
        &self.state
    }

    /// Amplitude of |pol, path, j⟩.
    pub fn amplitude(&self, pol: usize, path: usize, j: usize) -> Complex<T> {
        self.state
            .amplitude(pol * 2 * self.internal_dim + path * self.internal_dim + j)
    }
}

/// Polarizing beam splitter on pol ⊗ path ⊗ internal: transmits horizontal
/// polarization, flips the path of vertical polarization.
fn pbs_matrix<T: Scalar>(internal_dim: usize) -> ComplexMatrix<T> {
    let flip = crate::gates::pauli_x::<T>();
    ComplexMatrix::identity(2)
        .direct_sum(&flip)
        .kron(&ComplexMatrix::identity(internal_dim))
}

/// The stage holding the gate, as seen by path ⊗ internal: the reference arm
/// passes untouched, the gate arm picks up U. This is by definition the same
/// matrix as `control_u(U)` with the path qubit as control.
pub fn blackbox_stage_matrix<T: Scalar>(u: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    control_u(u)
}

/// Output of one interferometer pass.
#[derive(Debug, Clone)]
pub struct InterferometerOutcome<T: Scalar> {
    /// State on polarization ⊗ internal after the path register is traced
    /// out in |r⟩.
    pub output: PureState<T>,
    /// Norm left in the b-arm at the output; zero for any unitary gate.
    pub path_residual: T,
}

/// Sends `(alpha |H⟩ + beta |V⟩) ⊗ |r⟩ ⊗ psi` through PBS, gate stage, PBS.
///
/// The vertical component detours through the gate arm and returns, so the
/// result is `alpha |H⟩ ⊗ psi + beta |V⟩ ⊗ U psi`: polarization ends up
/// controlling U even though the gate sits in only one arm.
pub fn interferometer_apply<T: Scalar>(
    u: &ComplexMatrix<T>,
    alpha: Complex<T>,
    beta: Complex<T>,
    psi: &PureState<T>,
) -> Result<InterferometerOutcome<T>> {
    let d = psi.dim();
    if u.rows() != d || !u.is_square() {
        return Err(Error::DimensionMismatch {
            context: "gate dimension vs internal state",
            expected: d,
            got: u.rows(),
        });
    }
    if !u.is_unitary(Tolerance::default()) {
        return Err(Error::NotUnitary {
            residual: u.unitarity_residual().to_f64().unwrap_or(f64::NAN),
        });
    }
    let pol_norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    if (pol_norm - T::one()).abs() > Tolerance::default().eps {
        return Err(Error::NotNormalized {
            norm: pol_norm.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut amps = vec![czero(); 4 * d];
    for (j, &a) in psi.amplitudes().iter().enumerate() {
        amps[j] = alpha * a; // |H, r, j⟩
        amps[2 * d + j] = beta * a; // |V, r, j⟩
    }
    let input = PhotonState::new(d, PureState::from_vec_unchecked(amps))?;

    let pbs = pbs_matrix::<T>(d);
    let stage = ComplexMatrix::identity(2).kron(&blackbox_stage_matrix(u));
    let traversed = pbs.apply(&stage.apply(&pbs.apply(input.state())));
    let out = PhotonState::new(d, traversed)?;

    let mut residual_sq = T::zero();
    for pol in 0..2 {
        for j in 0..d {
            residual_sq = residual_sq + out.amplitude(pol, 1, j).norm_sqr();
        }
    }
    let path_residual = residual_sq.sqrt();
    if path_residual > real(1e-12) {
        return Err(Error::Disentanglement {
            residual: path_residual.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut reduced = vec![czero(); 2 * d];
    for pol in 0..2 {
        for j in 0..d {
            reduced[pol * d + j] = out.amplitude(pol, 0, j);
        }
    }
    Ok(InterferometerOutcome {
        output: PureState::from_vec_unchecked(reduced),
        path_residual,
    })
}

/// The full interferometer as an operator on polarization ⊗ internal,
/// obtained by conjugating the gate stage with the two beam splitters and
/// restricting both path slots to |r⟩. Equals `control_u(U)` exactly.
pub fn interferometer_operator<T: Scalar>(u: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let d = u.rows();
    let pbs = pbs_matrix::<T>(d);
    let stage = ComplexMatrix::identity(2).kron(&blackbox_stage_matrix(u));
    let full = pbs.matmul(&stage).matmul(&pbs);
    ComplexMatrix::from_fn(2 * d, 2 * d, |row, col| {
        let (pol_r, j_r) = (row / d, row % d);
        let (pol_c, j_c) = (col / d, col % d);
        full.get(pol_r * 2 * d + j_r, pol_c * 2 * d + j_c)
    })
}

/// `1_{d'} ⊕ U`: the gate acting on a d'-dimensional extension it leaves
/// alone. `d' = 0` returns U itself. The extension always has the first
/// basis vector as a known fixed point (for d' ≥ 1), which is what makes
/// eigenstate control applicable to arbitrary extended gates.
pub fn extend<T: Scalar>(u: &ComplexMatrix<T>, extra_dim: usize) -> ComplexMatrix<T> {
    assert!(u.is_square(), "extend needs a square matrix");
    if extra_dim == 0 {
        return u.clone();
    }
    ComplexMatrix::identity(extra_dim).direct_sum(u)
}

/// Builds the eigenstate-control circuit on control ⊗ main ⊗ aux
/// (dimensions 2, m, m) for a gate with one declared eigenpair (e, λ):
/// controlled-SWAP main/aux, the gate once on aux, controlled-SWAP back,
/// then λ* on the control-0 sector. The aux register is prepared in |e⟩ by
/// the induced-operator extraction below.
pub fn kitaev_control<T: Scalar>(v: &BlackboxGate<T>) -> Result<ComplexMatrix<T>> {
    let (_, eigenvalue) = v.eigenpair().ok_or(Error::InvalidArgument {
        reason: "eigenstate control requires a gate with a declared eigenpair",
    })?;
    let m = v.dim();
    let dim = 2 * m * m;

    // Controlled swap of main and aux: permutation |1, i, j⟩ -> |1, j, i⟩.
    let mut cswap = ComplexMatrix::zeros(dim, dim);
    for c in 0..2 {
        for i in 0..m {
            for j in 0..m {
                let col = c * m * m + i * m + j;
                let row = if c == 1 { c * m * m + j * m + i } else { col };
                cswap.set(row, col, Complex::new(T::one(), T::zero()));
            }
        }
    }

    let v_on_aux = ComplexMatrix::identity(2 * m).kron(v.matrix());

    // Undo the residual eigenphase on the branch that parked the gate on |e⟩.
    let lam = *eigenvalue;
    let lam_hat = lam / Complex::new(lam.norm(), T::zero());
    let mut phase_fix = ComplexMatrix::identity(dim);
    for idx in 0..m * m {
        phase_fix.set(idx, idx, lam_hat.conj());
    }

    Ok(phase_fix
        .matmul(&cswap)
        .matmul(&v_on_aux)
        .matmul(&cswap))
}

/// The circuit of [`kitaev_control`] compressed onto control ⊗ main.
#[derive(Debug, Clone)]
pub struct InducedControl<T: Scalar> {
    /// Operator on control ⊗ main (2m x 2m).
    pub operator: ComplexMatrix<T>,
    /// Worst-case norm the circuit leaves outside aux = |e⟩.
    pub aux_residual: T,
}

/// Runs the eigenstate-control circuit with aux prepared in |e⟩ and projects
/// aux back onto |e⟩. Errors if any input column leaves aux entangled beyond
/// 1e-10; for a valid eigenpair the construction disentangles exactly.
pub fn kitaev_induced_control<T: Scalar>(v: &BlackboxGate<T>) -> Result<InducedControl<T>> {
    let circuit = kitaev_control(v)?;
    let (eigenstate, _) = v.eigenpair().expect("checked by kitaev_control");
    let m = v.dim();
    let e = eigenstate.amplitudes();

    let mut operator = ComplexMatrix::zeros(2 * m, 2 * m);
    let mut worst = T::zero();
    for col in 0..2 * m {
        let (c, i) = (col / m, col % m);
        let mut input = vec![czero(); 2 * m * m];
        for (j, &ej) in e.iter().enumerate() {
            input[c * m * m + i * m + j] = ej;
        }
        let out = circuit.apply_vec(&input);

        let mut residual_sq = T::zero();
        for row in 0..2 * m {
            let (cp, ip) = (row / m, row % m);
            let mut proj: Complex<T> = czero();
            for (j, &ej) in e.iter().enumerate() {
                proj += ej.conj() * out[cp * m * m + ip * m + j];
            }
            operator.set(row, col, proj);
            for (j, &ej) in e.iter().enumerate() {
                residual_sq = residual_sq + (out[cp * m * m + ip * m + j] - proj * ej).norm_sqr();
            }
        }
        worst = worst.max(residual_sq.sqrt());
    }
    if worst > real(1e-10) {
        return Err(Error::Disentanglement {
            residual: worst.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(InducedControl {
        operator,
        aux_residual: worst,
    })
}

/// Eigenstate control packaged as a circuit sandwich with ancilla dimension
/// equal to the target dimension: both fixed layers are the swap of ancilla
/// and target conditioned on control = 0. For any queried gate that fixes
/// |0⟩ (eigenvalue exactly 1) the sandwich realizes `control_u` on the nose,
/// which makes it the canonical warm start for searches over gate families
/// with a shared known eigenvector.
pub fn kitaev_sandwich<T: Scalar>(d: usize) -> CircuitSandwich<T> {
    assert!(d >= 1, "target dimension must be positive");
    let dim = d * 2 * d;
    let mut swap0 = ComplexMatrix::zeros(dim, dim);
    for k in 0..d {
        for c in 0..2 {
            for t in 0..d {
                let col = k * 2 * d + c * d + t;
                let row = if c == 0 { t * 2 * d + k } else { col };
                swap0.set(row, col, Complex::new(T::one(), T::zero()));
            }
        }
    }
    CircuitSandwich::from_parts_unchecked(d, d, swap0.clone(), swap0)
}

/// Classical gate: a permutation of computational basis labels.
#[derive(Debug, Clone)]
pub struct PermutationGate<T: Scalar> {
    dim: usize,
    perm: Vec<usize>,
    matrix: ComplexMatrix<T>,
}

impl<T: Scalar> PermutationGate<T> {
    /// Builds the gate `|x⟩ -> |perm[x]⟩` from a bijection on 0..d.
    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let dim = perm.len();
        if dim == 0 {
            return Err(Error::NotPermutation {
                reason: "empty label list",
            });
        }
        let mut seen = vec![false; dim];
        for &target in &perm {
            if target >= dim {
                return Err(Error::NotPermutation {
                    reason: "label out of range",
                });
            }
            if seen[target] {
                return Err(Error::NotPermutation {
                    reason: "label repeated",
                });
            }
            seen[target] = true;
        }
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for (x, &target) in perm.iter().enumerate() {
            matrix.set(target, x, Complex::new(T::one(), T::zero()));
        }
        Ok(Self { dim, perm, matrix })
    }

    /// Accepts a matrix whose entries are exactly 0 or 1 (no tolerance) and
    /// which is a permutation of the basis.
    pub fn from_matrix(matrix: &ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotPermutation {
                reason: "matrix is not square",
            });
        }
        let dim = matrix.rows();
        let mut perm = vec![usize::MAX; dim];
        for x in 0..dim {
            let mut target = None;
            for row in 0..dim {
                let z = matrix.get(row, x);
                if z.im != T::zero() || (z.re != T::zero() && z.re != T::one()) {
                    return Err(Error::NotPermutation {
                        reason: "entry is not exactly 0 or 1",
                    });
                }
                if z.re == T::one() {
                    if target.is_some() {
                        return Err(Error::NotPermutation {
                            reason: "column has more than one unit entry",
                        });
                    }
                    target = Some(row);
                }
            }
            perm[x] = target.ok_or(Error::NotPermutation {
                reason: "column has no unit entry",
            })?;
        }
        Self::from_permutation(perm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply_label(&self, x: usize) -> usize {
        self.perm[x]
    }
}

/// Classical control by copying: three wires (control bit, middle loaded
/// with x, bottom prepared 0). A mod-d adder clones the middle onto the
/// bottom before the gate when c = 0 and after it when c = 1; the bottom
/// wire then carries x or gate(x) as the controlled output, while the middle
/// wire keeps gate(x) as garbage in both branches.
pub fn classical_control<T: Scalar>(
    gate: &PermutationGate<T>,
    control: bool,
    x: usize,
) -> Result<(usize, usize)> {
    let d = gate.dim();
    if x >= d {
        return Err(Error::DimensionMismatch {
            context: "classical input label",
            expected: d,
            got: x,
        });
    }
    let mut middle = x;
    let mut bottom = 0usize;
    if !control {
        bottom = (bottom + middle) % d;
    }
    middle = gate.apply_label(middle);
    if control {
        bottom = (bottom + middle) % d;
    }
    Ok((bottom, middle))
}

/// The copy-control circuit as a unitary on control ⊗ middle ⊗ bottom
/// (dimension 2d²). All three layers are basis permutations, so the matrix
/// is exact.
pub fn classical_control_circuit<T: Scalar>(gate: &PermutationGate<T>) -> ComplexMatrix<T> {
    let d = gate.dim();
    let dd = d * d;

    // Mod-d adder on middle ⊗ bottom: |m, b⟩ -> |m, b + m mod d⟩.
    let mut clone = ComplexMatrix::zeros(dd, dd);
    for m in 0..d {
        for b in 0..d {
            clone.set(m * d + (b + m) % d, m * d + b, Complex::new(T::one(), T::zero()));
        }
    }

    let clone_when_0 = clone.direct_sum(&ComplexMatrix::identity(dd));
    let clone_when_1 = ComplexMatrix::identity(dd).direct_sum(&clone);
    let gate_layer =
        ComplexMatrix::identity(2).kron(&gate.matrix().kron(&ComplexMatrix::identity(d)));

    clone_when_1.matmul(&gate_layer).matmul(&clone_when_0)
}

/// Applies the copy-control circuit to a quantum state on
/// control ⊗ middle ⊗ bottom.
pub fn classical_control_quantum<T: Scalar>(
    gate: &PermutationGate<T>,
    state: &PureState<T>,
) -> Result<PureState<T>> {
    let d = gate.dim();
    if state.dim() != 2 * d * d {
        return Err(Error::DimensionMismatch {
            context: "copy-control register dimension",
            expected: 2 * d * d,
            got: state.dim(),
        });
    }
    Ok(classical_control_circuit(gate).apply(state))
}

/// How close the copy-control circuit comes to coherent control on a given
/// input: feeds `control ⊗ psi ⊗ |0⟩` through the circuit and returns the
/// largest overlap modulus with `(control_u(gate) (control ⊗ psi)) ⊗ g` over
/// all garbage states g.
///
/// The maximum over g has a closed form: contracting the actual output with
/// the conjugated ideal state over control and bottom leaves a garbage-space
/// vector whose norm is the answer (Cauchy-Schwarz is tight at g parallel to
/// that vector).
pub fn max_overlap_with_ideal<T: Scalar>(
    gate: &PermutationGate<T>,
    control: &PureState<T>,
    psi: &PureState<T>,
) -> Result<T> {
    let d = gate.dim();
    if control.dim() != 2 {
        return Err(Error::DimensionMismatch {
            context: "control register dimension",
            expected: 2,
            got: control.dim(),
        });
    }
    if psi.dim() != d {
        return Err(Error::DimensionMismatch {
            context: "input state dimension",
            expected: d,
            got: psi.dim(),
        });
    }
    let input = control.kron(psi).kron(&PureState::basis(d, 0));
    let actual = classical_control_quantum(gate, &input)?;
    let ideal = control_u(gate.matrix()).apply(&control.kron(psi));

    let mut norm_sq = T::zero();
    for m in 0..d {
        let mut component = czero();
        for c in 0..2 {
            for b in 0..d {
                component += ideal.amplitude(c * d + b).conj()
                    * actual.amplitude(c * d * d + m * d + b);
            }
        }
        norm_sq = norm_sq + component.norm_sqr();
    }
    Ok(norm_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::sample;
    use num_complex::Complex64;

    type M = ComplexMatrix<f64>;

    #[test]
    fn horizontal_input_passes_untouched() {
        let psi = sample::random_state::<f64>(&mut sample::stream_rng(2, 0), 3);
        let u = sample::haar_unitary::<f64>(&mut sample::stream_rng(2, 1), 3);
        let out = interferometer_apply(&u, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), &psi)
            .unwrap();
        // Expect |H⟩ ⊗ psi.
        for j in 0..3 {
            assert!((out.output.amplitude(j) - psi.amplitude(j)).norm() < 1e-14);
            assert!(out.output.amplitude(3 + j).norm() < 1e-14);
        }
        assert!(out.path_residual <= 1e-12);
    }

    #[test]
    fn identity_gate_returns_the_product_input() {
        let psi = sample::random_state::<f64>(&mut sample::stream_rng(2, 2), 4);
        let (alpha, beta) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let out = interferometer_apply(&M::identity(4), alpha, beta, &psi).unwrap();
        for j in 0..4 {
            assert!((out.output.amplitude(j) - alpha * psi.amplitude(j)).norm() < 1e-14);
            assert!((out.output.amplitude(4 + j) - beta * psi.amplitude(j)).norm() < 1e-14);
        }
    }

    #[test]
    fn vertical_component_picks_up_the_gate() {
        let mut rng = sample::stream_rng(2, 3);
        for d in [2usize, 3, 8] {
            let u = sample::haar_unitary::<f64>(&mut rng, d);
            let psi = sample::random_state::<f64>(&mut rng, d);
            let alpha = Complex64::from_polar(0.3_f64.sqrt(), 0.4);
            let beta = Complex64::from_polar(0.7_f64.sqrt(), -1.1);
            let out = interferometer_apply(&u, alpha, beta, &psi).unwrap();
            let u_psi = u.apply(&psi);
            for j in 0..d {
                assert!((out.output.amplitude(j) - alpha * psi.amplitude(j)).norm() < 1e-12);
                assert!((out.output.amplitude(d + j) - beta * u_psi.amplitude(j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn interferometer_operator_is_exactly_the_controlled_gate() {
        let mut rng = sample::stream_rng(2, 4);
        for d in [2usize, 3, 4, 8] {
            let u = sample::haar_unitary::<f64>(&mut rng, d);
            let op = interferometer_operator(&u);
            assert!(op.distance(&control_u(&u)) == 0.0, "d = {d}");
        }
    }

    #[test]
    fn blackbox_stage_of_x_is_cnot() {
        let stage = blackbox_stage_matrix(&gates::pauli_x::<f64>());
        assert!(stage.distance(&control_u(&gates::pauli_x::<f64>())) == 0.0);
        assert_eq!(stage.get(2, 3), Complex64::new(1.0, 0.0));
        assert_eq!(stage.get(3, 2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn unnormalized_polarization_is_rejected() {
        let psi = PureState::<f64>::basis(2, 0);
        let err = interferometer_apply(
            &M::identity(2),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            &psi,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn extend_of_x_by_one_is_the_three_level_shift() {
        let ext = extend(&gates::pauli_x::<f64>(), 1);
        let expected = M::new(
            3,
            3,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert!(ext.distance(&expected) == 0.0);
    }

    #[test]
    fn extend_by_zero_is_the_gate_itself() {
        let u = sample::haar_unitary::<f64>(&mut sample::stream_rng(2, 5), 3);
        assert_eq!(extend(&u, 0), u);
    }

    #[test]
    fn extension_keeps_first_basis_vector_fixed() {
        let u = sample::haar_unitary::<f64>(&mut sample::stream_rng(2, 6), 4);
        let ext = extend(&u, 2);
        let e0 = PureState::<f64>::basis(6, 0);
        let image = ext.apply(&e0);
        assert!((image.overlap(&e0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenstate_control_of_extended_gates_is_exact() {
        let mut rng = sample::stream_rng(2, 7);
        for d in [2usize, 4, 6] {
            let u = sample::haar_unitary::<f64>(&mut rng, d);
            let v = extend(&u, 1);
            let gate = BlackboxGate::with_eigenpair(
                v.clone(),
                PureState::basis(d + 1, 0),
                Complex64::new(1.0, 0.0),
            )
            .unwrap();
            let induced = kitaev_induced_control(&gate).unwrap();
            assert!(induced.aux_residual <= 1e-10);
            assert!(induced.operator.distance(&control_u(&v)) < 1e-13);
        }
    }

    #[test]
    fn eigenstate_control_of_z_with_either_eigenvector() {
        let z = gates::pauli_z::<f64>();
        let plus = BlackboxGate::with_eigenpair(
            z.clone(),
            PureState::basis(2, 0),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let got = kitaev_induced_control(&plus).unwrap();
        assert!(got.operator.distance(&control_u(&z)) < 1e-13);

        // Eigenvalue -1 exercises the phase correction on the idle branch.
        let minus = BlackboxGate::with_eigenpair(
            z.clone(),
            PureState::basis(2, 1),
            Complex64::new(-1.0, 0.0),
        )
        .unwrap();
        let got = kitaev_induced_control(&minus).unwrap();
        assert!(got.operator.distance(&control_u(&z)) < 1e-13);
    }

    #[test]
    fn eigenstate_control_with_generic_phases_matches_up_to_global_phase() {
        let mut rng = sample::stream_rng(2, 8);
        for trial in 0..10 {
            let m = 2 + (trial % 3);
            let v = sample::haar_unitary::<f64>(&mut rng, m);
            let pairs = crate::eig::unitary_eigenpairs(&v).unwrap();
            let pick = (trial * 7) % pairs.len();
            let (lambda, state) = pairs[pick].clone();
            let gate = BlackboxGate::with_eigenpair(v.clone(), state, lambda).unwrap();
            let induced = kitaev_induced_control(&gate).unwrap();
            assert!(induced.aux_residual <= 1e-10);
            let overlap = crate::linalg::map_overlap(&control_u(&v), &induced.operator);
            assert!(overlap >= 1.0 - 1e-10, "trial {trial}: overlap {overlap}");
        }
    }

    #[test]
    fn kitaev_sandwich_realizes_control_for_gates_fixing_zero() {
        for gate in [gates::pauli_z::<f64>(), gates::phase_s(), gates::phase_t()] {
            let s = kitaev_sandwich::<f64>(2);
            let w = crate::circuit::sandwich_operator(&s, &gate);
            let expected_block = control_u(&gate);
            for r in 0..8 {
                for c in 0..4 {
                    let want = if r < 4 {
                        expected_block.get(r, c)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    assert!((w.get(r, c) - want).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn classical_control_traces_the_documented_branches() {
        let x = PermutationGate::<f64>::from_permutation(vec![1, 0]).unwrap();
        assert_eq!(classical_control(&x, false, 0).unwrap(), (0, 1));
        assert_eq!(classical_control(&x, false, 1).unwrap(), (1, 0));
        assert_eq!(classical_control(&x, true, 0).unwrap(), (1, 1));
        assert_eq!(classical_control(&x, true, 1).unwrap(), (0, 0));
    }

    #[test]
    fn classical_control_contract_holds_for_a_three_cycle() {
        let cycle = PermutationGate::<f64>::from_permutation(vec![1, 2, 0]).unwrap();
        for x in 0..3 {
            let (out0, g0) = classical_control(&cycle, false, x).unwrap();
            assert_eq!(out0, x);
            assert_eq!(g0, cycle.apply_label(x));
            let (out1, g1) = classical_control(&cycle, true, x).unwrap();
            assert_eq!(out1, cycle.apply_label(x));
            assert_eq!(g1, cycle.apply_label(x));
        }
    }

    #[test]
    fn quantum_circuit_agrees_with_classical_traces_on_basis_states() {
        for d in 2..=4usize {
            let perm: Vec<usize> = (0..d).map(|x| (x + 1) % d).collect();
            let gate = PermutationGate::<f64>::from_permutation(perm).unwrap();
            for c in 0..2usize {
                for x in 0..d {
                    let input = PureState::<f64>::basis(2, c)
                        .kron(&PureState::basis(d, x))
                        .kron(&PureState::basis(d, 0));
                    let out = classical_control_quantum(&gate, &input).unwrap();
                    let (bottom, middle) = classical_control(&gate, c == 1, x).unwrap();
                    let expected = PureState::<f64>::basis(2, c)
                        .kron(&PureState::basis(d, middle))
                        .kron(&PureState::basis(d, bottom));
                    assert!((out.overlap(&expected).norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn copy_control_fails_on_superpositions() {
        let x = PermutationGate::<f64>::from_permutation(vec![1, 0]).unwrap();
        let plus_control =
            PureState::normalized(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let plus_input =
            PureState::normalized(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let overlap = max_overlap_with_ideal(&x, &plus_control, &plus_input).unwrap();
        // Exact value for this input is 1/sqrt(2).
        assert!((overlap - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(overlap < 0.95);
    }

    #[test]
    fn copy_control_is_perfect_on_basis_controls() {
        let x = PermutationGate::<f64>::from_permutation(vec![1, 0]).unwrap();
        let psi = PureState::<f64>::basis(2, 1);
        for c in 0..2 {
            let overlap = max_overlap_with_ideal(&x, &PureState::basis(2, c), &psi).unwrap();
            assert!((overlap - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn permutation_matrix_round_trip_and_rejections() {
        let gate = PermutationGate::<f64>::from_permutation(vec![2, 0, 1]).unwrap();
        let again = PermutationGate::from_matrix(gate.matrix()).unwrap();
        assert_eq!(again.permutation(), gate.permutation());

        assert!(PermutationGate::<f64>::from_permutation(vec![0, 0]).is_err());
        assert!(PermutationGate::<f64>::from_permutation(vec![0, 3]).is_err());
        let half = M::diagonal(&[Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(
            PermutationGate::from_matrix(&half),
            Err(Error::NotPermutation { .. })
        ));
        assert!(PermutationGate::from_matrix(&gates::hadamard::<f64>()).is_err());
    }
}
