//! Why a single query cannot control an unknown gate, made quantitative.
//!
//! The question under study: can a fixed circuit B(1 ⊗ U)A, querying an
//! unknown unitary U exactly once, act as control-U on a control qubit? The
//! module measures the failure three ways:
//!
//! * obstruction residuals for the linearity argument on the triple
//!   {X, Z, H} (H is a linear combination of X and Z, but control-H is not
//!   the same combination of control-X and control-Z);
//! * phase covariance of the circuit side versus phase distinguishability of
//!   the control side, which is the physical root of the failure;
//! * a phase-optimized process fidelity, and an adversarial search over the
//!   surrounding circuits A, B that tries to maximize its worst case.
//!
//! Searches report what they found; they never assert impossibility. The
//! reproducible feasible points (known gate, eigenstate control) and the
//! capped obstruction gap are the checkable claims.

use crate::circuit::{
    control_u, reduced_channel_kraus, sandwich_operator, BlackboxGate, CircuitSandwich,
};
use crate::eig::unitary_eigenpairs;
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{trace_distance_pure, ComplexMatrix, PureState};
use crate::optim::{
    multistart_minimize_with_starts, params_to_unitary, unitary_to_params, MinimizerConfig,
    UnitaryParams,
};
use crate::sample::stream_rng;
use crate::scalar::{cone, phase, real, Scalar};
use num_complex::Complex;
use rand::Rng;
use std::time::Instant;

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase<T: Scalar>(t: T) -> T {
    let tau = T::PI() + T::PI();
    let mut w = t % tau;
    if w < T::zero() {
        w += tau;
    }
    if w >= tau {
        w = T::zero();
    }
    w
}

/// A candidate solution of the linearity equation for the triple {X, Z, H}:
/// three ancilla states and three free phases.
#[derive(Debug, Clone)]
pub struct ObstructionPoint<T: Scalar> {
    ancilla_dim: usize,
    vec_x: PureState<T>,
    vec_z: PureState<T>,
    vec_h: PureState<T>,
    x: T,
    z: T,
    h: T,
}

impl<T: Scalar> ObstructionPoint<T> {
    /// Builds a point from three equal-dimension unit states and three
    /// phases; phases are wrapped into `[0, 2π)`.
    pub fn new(
        vec_x: PureState<T>,
        vec_z: PureState<T>,
        vec_h: PureState<T>,
        x: T,
        z: T,
        h: T,
    ) -> Result<Self> {
        let a = vec_x.dim();
        for v in [&vec_z, &vec_h] {
            if v.dim() != a {
                return Err(Error::DimensionMismatch {
                    context: "obstruction ancilla states",
                    expected: a,
                    got: v.dim(),
                });
            }
        }
        Ok(Self {
            ancilla_dim: a,
            vec_x,
            vec_z,
            vec_h,
            x: wrap_phase(x),
            z: wrap_phase(z),
            h: wrap_phase(h),
        })
    }

    /// Decodes raw search coordinates (length 6a + 3: re/im interleaved per
    /// state, then the three phases), normalizing each state.
    pub fn from_params(ancilla_dim: usize, params: &[T]) -> Result<Self> {
        let a = ancilla_dim;
        if params.len() != 6 * a + 3 {
            return Err(Error::DimensionMismatch {
                context: "obstruction parameter vector",
                expected: 6 * a + 3,
                got: params.len(),
            });
        }
        let mut states = Vec::with_capacity(3);
        for s in 0..3 {
            let amps = decode_state(&params[2 * a * s..2 * a * (s + 1)]).ok_or(
                Error::InvalidArgument {
                    reason: "ancilla coordinates too close to the zero vector to normalize",
                },
            )?;
            states.push(PureState::new(amps)?);
        }
        let vec_h = states.pop().expect("three states were pushed");
        let vec_z = states.pop().expect("three states were pushed");
        let vec_x = states.pop().expect("three states were pushed");
        Self::new(
            vec_x,
            vec_z,
            vec_h,
            params[6 * a],
            params[6 * a + 1],
            params[6 * a + 2],
        )
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn vec_x(&self) -> &PureState<T> {
        &self.vec_x
    }

    pub fn vec_z(&self) -> &PureState<T> {
        &self.vec_z
    }

    pub fn vec_h(&self) -> &PureState<T> {
        &self.vec_h
    }

    /// The three phases (x, z, h), each in `[0, 2π)`.
    pub fn phases(&self) -> (T, T, T) {
        (self.x, self.z, self.h)
    }
}

fn decode_state<T: Scalar>(coords: &[T]) -> Option<Vec<Complex<T>>> {
    let mut amps: Vec<Complex<T>> = coords
        .chunks_exact(2)
        .map(|c| Complex::new(c[0], c[1]))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).fold(T::zero(), |s, v| s + v).sqrt();
    if norm < real::<T>(1e-8) {
        return None;
    }
    let inv = T::one() / norm;
    for z in amps.iter_mut() {
        *z = z.scale(inv);
    }
    Some(amps)
}

/// `1_2 ⊕ e^{ip}·g`: the two-block form every term of the linearity
/// equation takes, with the identity block always unphased.
fn phased_control_block<T: Scalar>(g: &ComplexMatrix<T>, p: T) -> ComplexMatrix<T> {
    ComplexMatrix::identity(g.rows()).direct_sum(&g.scale(phase(p)))
}

/// The signed sum of the three stacked blocks; its Frobenius norm is the
/// obstruction residual. Columns `vx`, `vz`, `vh` need not be normalized
/// here; public entry points enforce their own constraints.
fn three_term_sum<T: Scalar>(
    vx: &ComplexMatrix<T>,
    vz: &ComplexMatrix<T>,
    vh: &ComplexMatrix<T>,
    x: T,
    z: T,
    h: T,
) -> ComplexMatrix<T> {
    let inv_sqrt2 = Complex::new(T::one() / real::<T>(2.0).sqrt(), T::zero());
    let bx = vx
        .kron(&phased_control_block(&gates::pauli_x(), x))
        .scale(inv_sqrt2);
    let bz = vz
        .kron(&phased_control_block(&gates::pauli_z(), z))
        .scale(inv_sqrt2);
    let bh = vh.kron(&phased_control_block(&gates::hadamard(), h));
    &(&bx + &bz) - &bh
}

/// Residual of the full linearity equation with ancilla states attached:
/// ‖(1/√2)|X⟩⊗(1⊕e^{ix}X) + (1/√2)|Z⟩⊗(1⊕e^{iz}Z) − |H⟩⊗(1⊕e^{ih}H)‖_F.
pub fn vector_obstruction_residual<T: Scalar>(p: &ObstructionPoint<T>) -> T {
    three_term_sum(
        &p.vec_x.as_column(),
        &p.vec_z.as_column(),
        &p.vec_h.as_column(),
        p.x,
        p.z,
        p.h,
    )
    .frobenius_norm()
}

/// Residual after projecting the ancilla onto |H⟩: cX and cZ stand for
/// ⟨H|X⟩ and ⟨H|Z⟩, so their moduli may not exceed 1.
pub fn projected_obstruction_residual<T: Scalar>(
    c_x: Complex<T>,
    c_z: Complex<T>,
    x: T,
    z: T,
    h: T,
) -> Result<T> {
    // Inner products of unit vectors; allow a sliver of rounding headroom.
    let cap = T::one() + real::<T>(1e-12);
    for c in [c_x, c_z] {
        if c.norm() > cap {
            return Err(Error::ModulusExceeded {
                value: c.norm().to_f64().unwrap_or(f64::NAN),
                cap: 1.0,
            });
        }
    }
    Ok(projected_residual_unchecked(c_x, c_z, x, z, h))
}

fn projected_residual_unchecked<T: Scalar>(
    c_x: Complex<T>,
    c_z: Complex<T>,
    x: T,
    z: T,
    h: T,
) -> T {
    let col = |c: Complex<T>| ComplexMatrix::new(1, 1, vec![c]);
    three_term_sum(&col(c_x), &col(c_z), &col(cone()), x, z, h).frobenius_norm()
}

/// Distance from one circuit's response to an exact ancilla-times-control
/// factorization: ‖W(U) − χ ⊗ (1_d ⊕ e^{iu}U)‖_F.
pub fn exact_realization_residual<T: Scalar>(
    sandwich: &CircuitSandwich<T>,
    gate: &BlackboxGate<T>,
    chi: &PureState<T>,
    u_phase: T,
) -> T {
    assert_eq!(
        chi.dim(),
        sandwich.ancilla_dim(),
        "ancilla state must match the sandwich ancilla dimension"
    );
    let w = sandwich_operator(sandwich, gate.matrix());
    let target = chi
        .as_column()
        .kron(&phased_control_block(gate.matrix(), u_phase));
    w.distance(&target)
}

/// ‖W(e^{iφ}U) − e^{iφ}W(U)‖_F. Linearity of the single query makes this
/// vanish identically; the check is that the code honors it to 1e−12.
pub fn phase_covariance_check<T: Scalar>(
    sandwich: &CircuitSandwich<T>,
    gate: &BlackboxGate<T>,
    phi: T,
) -> T {
    let w = sandwich_operator(sandwich, gate.matrix());
    let rotated = sandwich_operator(sandwich, &gate.matrix().scale(phase(phi)));
    rotated.distance(&w.scale(phase(phi)))
}

/// How distinguishable control-U and control-(e^{iφ}U) are on the probe
/// (|0⟩+|1⟩)/√2 ⊗ λ, λ an eigenvector of U: trace distance, analytically
/// |sin(φ/2)|. States differ while the gates e^{iφ}U are physically
/// identical, which is the asymmetry the whole problem rests on.
pub fn control_phase_distinguishability<T: Scalar>(gate: &BlackboxGate<T>, phi: T) -> Result<T> {
    let pairs = unitary_eigenpairs(gate.matrix())?;
    let (_, lambda) = &pairs[0];
    let inv_sqrt2 = Complex::new(T::one() / real::<T>(2.0).sqrt(), T::zero());
    let plus = PureState::new(vec![inv_sqrt2, inv_sqrt2])?;
    let probe = plus.kron(lambda);
    let plain = control_u(gate.matrix()).apply(&probe);
    let rotated = control_u(&gate.matrix().scale(phase(phi))).apply(&probe);
    Ok(trace_distance_pure(&plain, &rotated))
}

/// Per-Kraus overlap traces with the two blocks of the target: t⁰ against
/// the control-0 projector, t¹ against 0 ⊕ U.
fn block_overlap_traces<T: Scalar>(
    sandwich: &CircuitSandwich<T>,
    gate: &BlackboxGate<T>,
) -> Vec<(Complex<T>, Complex<T>)> {
    let d = sandwich.target_dim();
    reduced_channel_kraus(sandwich, gate.matrix())
        .iter()
        .map(|wk| {
            let mut t0 = Complex::new(T::zero(), T::zero());
            for i in 0..d {
                t0 += wk.get(i, i);
            }
            let mut t1 = Complex::new(T::zero(), T::zero());
            for i in 0..d {
                for j in 0..d {
                    t1 += gate.matrix().get(i, j).conj() * wk.get(d + i, d + j);
                }
            }
            (t0, t1)
        })
        .collect()
}

/// Process fidelity of the circuit's channel against `1_d ⊕ e^{iu}U` at one
/// fixed phase u: (1/(2d)²)·Σ_k |Tr[(1 ⊕ e^{iu}U)† W_k]|².
pub fn process_fidelity_fixed_phase<T: Scalar>(
    sandwich: &CircuitSandwich<T>,
    gate: &BlackboxGate<T>,
    u_phase: T,
) -> T {
    let e = phase(-u_phase);
    let total: T = block_overlap_traces(sandwich, gate)
        .iter()
        .map(|&(t0, t1)| (t0 + e * t1).norm_sqr())
        .fold(T::zero(), |s, v| s + v);
    normalize_fidelity(sandwich, total)
}

/// Process fidelity maximized over the free phase u, in closed form:
/// (Σ_k |t⁰_k|² + |t¹_k|² + 2|Σ_k conj(t¹_k)·t⁰_k|)/(2d)². Equal to 1
/// exactly when the circuit realizes ancilla ⊗ (1 ⊕ e^{iu}U) for some u.
pub fn phase_opt_process_fidelity<T: Scalar>(
    sandwich: &CircuitSandwich<T>,
    gate: &BlackboxGate<T>,
) -> T {
    let traces = block_overlap_traces(sandwich, gate);
    let diag: T = traces
        .iter()
        .map(|&(t0, t1)| t0.norm_sqr() + t1.norm_sqr())
        .fold(T::zero(), |s, v| s + v);
    let cross = traces
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |s, &(t0, t1)| {
            s + t1.conj() * t0
        });
    normalize_fidelity(sandwich, diag + (cross.norm() + cross.norm()))
}

/// The phase achieving [`phase_opt_process_fidelity`], in `[0, 2π)`.
pub fn optimal_realization_phase<T: Scalar>(
    sandwich: &CircuitSandwich<T>,
    gate: &BlackboxGate<T>,
) -> T {
    let cross = block_overlap_traces(sandwich, gate)
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |s, &(t0, t1)| {
            s + t0.conj() * t1
        });
    if cross.norm() <= T::epsilon() {
        return T::zero();
    }
    wrap_phase(cross.arg())
}

fn normalize_fidelity<T: Scalar>(sandwich: &CircuitSandwich<T>, raw: T) -> T {
    let two_d = real::<T>(2.0 * sandwich.target_dim() as f64);
    (raw / (two_d * two_d)).max(T::zero()).min(T::one())
}

/// Outcome of a seeded landscape search. `best_value` is always the
/// minimized objective, so it equals the minimum of `restarts_summary`; for
/// adversarial runs the objective is 1 − worst-case fidelity and the
/// fidelity itself is recovered by [`SearchReport::worst_case_fidelity`].
#[derive(Debug, Clone)]
pub struct SearchReport<T: Scalar> {
    /// Smallest objective value found across all restarts.
    pub best_value: T,
    /// Raw optimizer coordinates achieving `best_value`.
    pub best_params: Vec<T>,
    /// Labeled per-gate fidelities at the argmin (adversarial runs only).
    pub per_gate: Vec<(String, T)>,
    /// Best value per restart, failed restarts recorded as +inf.
    pub restarts_summary: Vec<T>,
    /// Master seed the run was keyed on.
    pub seed: u64,
    /// Wall-clock duration of the search in seconds. The only field that is
    /// not a deterministic function of the inputs.
    pub wall_time_s: f64,
}

impl<T: Scalar> SearchReport<T> {
    /// `1 − best_value`: the worst-case fidelity of an adversarial run.
    pub fn worst_case_fidelity(&self) -> T {
        T::one() - self.best_value
    }
}

/// Minimizes an obstruction residual over all free parameters. With
/// `projected` set, the ancilla dimension is irrelevant (the equation is
/// already projected onto |H⟩) and the two coefficients range over the full
/// unit disc; otherwise the landscape has 6a + 3 coordinates decoded by
/// [`ObstructionPoint::from_params`]. The squared residual is what descends
/// (smooth at a zero minimum); all reported values are residuals.
pub fn minimize_obstruction<T: Scalar>(
    ancilla_dim: usize,
    cfg: &MinimizerConfig<T>,
    projected: bool,
) -> SearchReport<T> {
    if projected {
        return minimize_obstruction_capped(T::one(), cfg)
            .expect("the full unit disc is a valid cap");
    }
    assert!(ancilla_dim >= 1, "ancilla dimension must be positive");
    let started = Instant::now();
    let a = ancilla_dim;
    let objective = move |p: &[T]| -> T {
        match obstruction_residual_from_params(a, p) {
            Some(r) => r * r,
            // Finite plateau: keeps the restart alive but repels it.
            None => real::<T>(1e3),
        }
    };
    let report = multistart_minimize_with_starts(objective, 6 * a + 3, cfg, &[]);
    sqrt_report(report, started)
}

/// Evaluates the vector-form residual at one raw coordinate vector (the
/// same decoding the search uses). `None` when a state block is too short
/// to normalize, which the search treats as a penalty plateau.
pub fn obstruction_residual_from_params<T: Scalar>(a: usize, p: &[T]) -> Option<T> {
    let mut columns = Vec::with_capacity(3);
    for s in 0..3 {
        let amps = decode_state(&p[2 * a * s..2 * a * (s + 1)])?;
        columns.push(ComplexMatrix::new(a, 1, amps));
    }
    Some(
        three_term_sum(
            &columns[0],
            &columns[1],
            &columns[2],
            p[6 * a],
            p[6 * a + 1],
            p[6 * a + 2],
        )
        .frobenius_norm(),
    )
}

/// Projected-landscape search with both coefficient moduli confined to
/// `cap` (radial clamp inside the objective, so every iterate is feasible).
/// `cap = 1` is the unconstrained projected problem; smaller caps exclude
/// the parallel-ancilla solutions and open a provable gap.
pub fn minimize_obstruction_capped<T: Scalar>(
    cap: T,
    cfg: &MinimizerConfig<T>,
) -> Result<SearchReport<T>> {
    if !(cap > T::zero() && cap <= T::one()) {
        return Err(Error::InvalidArgument {
            reason: "modulus cap must lie in (0, 1]",
        });
    }
    let started = Instant::now();
    let objective = move |p: &[T]| -> T {
        let (c_x, c_z, x, z, h) = projected_point_from_params(p, cap);
        let r = projected_residual_unchecked(c_x, c_z, x, z, h);
        r * r
    };
    let report = multistart_minimize_with_starts(objective, 7, cfg, &[]);
    Ok(sqrt_report(report, started))
}

/// Decodes the 7 projected-search coordinates into (cX, cZ, x, z, h),
/// applying the radial clamp at `cap` and wrapping the phases.
pub fn projected_point_from_params<T: Scalar>(
    p: &[T],
    cap: T,
) -> (Complex<T>, Complex<T>, T, T, T) {
    assert_eq!(p.len(), 7, "projected landscape has 7 coordinates");
    let clamp = |c: Complex<T>| -> Complex<T> {
        let m = c.norm();
        if m > cap {
            c.scale(cap / m)
        } else {
            c
        }
    };
    (
        clamp(Complex::new(p[0], p[1])),
        clamp(Complex::new(p[2], p[3])),
        wrap_phase(p[4]),
        wrap_phase(p[5]),
        wrap_phase(p[6]),
    )
}

fn sqrt_report<T: Scalar>(
    report: crate::optim::MultistartReport<T>,
    started: Instant,
) -> SearchReport<T> {
    // The optimizer descended the squared residual; sqrt is monotone, so
    // the per-restart minima and the overall argmin carry over unchanged.
    SearchReport {
        best_value: report.best_value.sqrt(),
        best_params: report.best_params,
        per_gate: Vec::new(),
        restarts_summary: report.restart_values.iter().map(|v| v.sqrt()).collect(),
        seed: report.seed,
        wall_time_s: started.elapsed().as_secs_f64(),
    }
}

/// Builds the sandwich encoded by one adversarial-search coordinate vector:
/// two packed Hermitian generators of side 2ad, A first, B second.
pub fn sandwich_from_params<T: Scalar>(
    ancilla_dim: usize,
    target_dim: usize,
    params: &[T],
) -> CircuitSandwich<T> {
    let n = 2 * ancilla_dim * target_dim;
    assert_eq!(params.len(), 2 * n * n, "expected two packed generators");
    let pre = params_to_unitary(
        &UnitaryParams::new(n, params[..n * n].to_vec()).expect("length checked above"),
    );
    let post = params_to_unitary(
        &UnitaryParams::new(n, params[n * n..].to_vec()).expect("length checked above"),
    );
    CircuitSandwich::from_parts_unchecked(ancilla_dim, target_dim, pre, post)
}

/// Inverse of [`sandwich_from_params`]: packs an existing sandwich into
/// warm-start coordinates via the principal-branch generators.
pub fn sandwich_to_params<T: Scalar>(sandwich: &CircuitSandwich<T>) -> Result<Vec<T>> {
    let mut out = unitary_to_params(sandwich.pre())?.theta().to_vec();
    out.extend_from_slice(unitary_to_params(sandwich.post())?.theta());
    Ok(out)
}

/// Re-embeds adversarial coordinates from ancilla dimension `a_from` to
/// `a_to ≥ a_from`; the embedded circuit acts identically on the original
/// sector, so its objective value is preserved.
pub fn embed_search_params<T: Scalar>(
    params: &[T],
    a_from: usize,
    a_to: usize,
    target_dim: usize,
) -> Result<Vec<T>> {
    let n1 = 2 * a_from * target_dim;
    let n2 = 2 * a_to * target_dim;
    if params.len() != 2 * n1 * n1 {
        return Err(Error::DimensionMismatch {
            context: "adversarial parameter vector",
            expected: 2 * n1 * n1,
            got: params.len(),
        });
    }
    let grow = |theta: &[T]| -> Result<Vec<T>> {
        Ok(UnitaryParams::new(n1, theta.to_vec())?
            .embed(n2)?
            .theta()
            .to_vec())
    };
    let mut out = grow(&params[..n1 * n1])?;
    out.extend(grow(&params[n1 * n1..])?);
    Ok(out)
}

/// Searches over all single-query circuits (A, B) for the one whose
/// worst-case phase-optimized fidelity across the gate set is highest.
/// The minimized objective is 1 − min over gates of the fidelity.
pub fn adversarial_search<T: Scalar>(
    gate_set: &[(String, BlackboxGate<T>)],
    ancilla_dim: usize,
    target_dim: usize,
    cfg: &MinimizerConfig<T>,
) -> Result<SearchReport<T>> {
    adversarial_search_with_starts(gate_set, ancilla_dim, target_dim, cfg, &[])
}

/// [`adversarial_search`] with injected warm starts. Feasible points (the
/// known-gate circuit, eigenstate control) enter here; the best-ever
/// bookkeeping guarantees the report is at least as good as every start.
pub fn adversarial_search_with_starts<T: Scalar>(
    gate_set: &[(String, BlackboxGate<T>)],
    ancilla_dim: usize,
    target_dim: usize,
    cfg: &MinimizerConfig<T>,
    extra_starts: &[Vec<T>],
) -> Result<SearchReport<T>> {
    if gate_set.is_empty() {
        return Err(Error::EmptyGateSet);
    }
    if ancilla_dim < 1 || target_dim < 1 {
        return Err(Error::InvalidArgument {
            reason: "ancilla and target dimensions must be positive",
        });
    }
    for (_, gate) in gate_set {
        if gate.dim() != target_dim {
            return Err(Error::DimensionMismatch {
                context: "adversarial gate dimension",
                expected: target_dim,
                got: gate.dim(),
            });
        }
    }
    let n = 2 * ancilla_dim * target_dim;
    let dim = 2 * n * n;
    for start in extra_starts {
        if start.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "adversarial warm start",
                expected: dim,
                got: start.len(),
            });
        }
    }

    let started = Instant::now();
    let objective = |p: &[T]| -> T {
        let sandwich = sandwich_from_params(ancilla_dim, target_dim, p);
        let worst = gate_set
            .iter()
            .map(|(_, gate)| phase_opt_process_fidelity(&sandwich, gate))
            .fold(T::infinity(), T::min);
        T::one() - worst
    };
    let report = multistart_minimize_with_starts(objective, dim, cfg, extra_starts);

    let argmin = sandwich_from_params(ancilla_dim, target_dim, &report.best_params);
    let per_gate = gate_set
        .iter()
        .map(|(label, gate)| (label.clone(), phase_opt_process_fidelity(&argmin, gate)))
        .collect();
    Ok(SearchReport {
        best_value: report.best_value,
        best_params: report.best_params,
        per_gate,
        restarts_summary: report.restart_values,
        seed: report.seed,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

/// Runs the adversarial search at every ancilla dimension from 1 to
/// `max_ancilla_dim`, warm-starting each run with the embedded argmin of
/// the previous one, so reported fidelities never decrease with a.
/// `initial_starts` (ancilla dimension 1 coordinates) seed the first run.
pub fn adversarial_search_protocol<T: Scalar>(
    gate_set: &[(String, BlackboxGate<T>)],
    max_ancilla_dim: usize,
    target_dim: usize,
    cfg: &MinimizerConfig<T>,
    initial_starts: &[Vec<T>],
) -> Result<Vec<SearchReport<T>>> {
    if max_ancilla_dim < 1 {
        return Err(Error::InvalidArgument {
            reason: "the ancilla protocol needs at least dimension 1",
        });
    }
    let mut reports = Vec::with_capacity(max_ancilla_dim);
    let mut carried: Vec<Vec<T>> = initial_starts.to_vec();
    for a in 1..=max_ancilla_dim {
        let report = adversarial_search_with_starts(gate_set, a, target_dim, cfg, &carried)?;
        if a < max_ancilla_dim {
            carried = vec![embed_search_params(
                &report.best_params,
                a,
                a + 1,
                target_dim,
            )?];
        }
        reports.push(report);
    }
    Ok(reports)
}

/// Builds one of the named test gate sets at the requested dimension.
///
/// * `xzh`: the proof triple {X, Z, H} (dimension 2 only);
/// * `haar:<n>`: n seeded Haar-random gates;
/// * `diagonal` or `diagonal:<n>`: n (default 3) seeded diagonal gates
///   whose first entry is 1, so they share the eigenvector |0⟩;
/// * `singleton:<name>`: one named qubit gate (X, Y, Z, H, S, T).
pub fn gate_preset<T: Scalar>(
    preset: &str,
    target_dim: usize,
    seed: u64,
) -> Result<Vec<(String, BlackboxGate<T>)>> {
    if target_dim < 1 {
        return Err(Error::InvalidArgument {
            reason: "target dimension must be positive",
        });
    }
    if preset == "xzh" {
        if target_dim != 2 {
            return Err(Error::InvalidArgument {
                reason: "the xzh preset is defined at target dimension 2",
            });
        }
        return Ok(vec![
            ("X".to_string(), BlackboxGate::new(gates::pauli_x())?),
            ("Z".to_string(), BlackboxGate::new(gates::pauli_z())?),
            ("H".to_string(), BlackboxGate::new(gates::hadamard())?),
        ]);
    }
    if let Some(count) = preset.strip_prefix("haar:") {
        let count: usize = count.parse().map_err(|_| Error::UnknownName {
            name: preset.to_string(),
        })?;
        if count == 0 {
            return Err(Error::InvalidArgument {
                reason: "haar preset needs at least one gate",
            });
        }
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let mut rng = stream_rng(seed, 1_000 + i as u64);
            let u = crate::sample::haar_unitary::<T>(&mut rng, target_dim);
            out.push((format!("haar{i}"), BlackboxGate::new(u)?));
        }
        return Ok(out);
    }
    if preset == "diagonal" || preset.starts_with("diagonal:") {
        let count: usize = match preset.strip_prefix("diagonal:") {
            None => 3,
            Some(c) => c.parse().map_err(|_| Error::UnknownName {
                name: preset.to_string(),
            })?,
        };
        if count == 0 {
            return Err(Error::InvalidArgument {
                reason: "diagonal preset needs at least one gate",
            });
        }
        let tau = 2.0 * std::f64::consts::PI;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let mut rng = stream_rng(seed, 2_000 + i as u64);
            let mut entries = vec![cone::<T>()];
            for _ in 1..target_dim {
                entries.push(phase(real::<T>(rng.random::<f64>() * tau)));
            }
            let gate = BlackboxGate::with_eigenpair(
                ComplexMatrix::diagonal(&entries),
                PureState::basis(target_dim, 0),
                cone(),
            )?;
            out.push((format!("diag{i}"), gate));
        }
        return Ok(out);
    }
    if let Some(name) = preset.strip_prefix("singleton:") {
        if target_dim != 2 {
            return Err(Error::InvalidArgument {
                reason: "singleton presets name qubit gates, so target dimension must be 2",
            });
        }
        let gate = BlackboxGate::new(gates::by_name(name)?)?;
        return Ok(vec![(name.to_uppercase(), gate)]);
    }
    Err(Error::UnknownName {
        name: preset.to_string(),
    })
}
