//! Cross-module invariants checked against independent oracles: algebraic
//! laws by property testing, a power-series oracle for the exponential, an
//! entrywise optics oracle for the interferometer, exhaustive enumeration
//! for the copy-control contract, and grid oracles for the landscape
//! minima and phase-optimized fidelities.

use itertools::Itertools;
use num_complex::Complex;
use proptest::prelude::*;
use qcontrol::circuit::{control_u, reduced_channel_kraus, CircuitSandwich};
use qcontrol::circuit::BlackboxGate;
use qcontrol::constructions::{
    classical_control, classical_control_circuit, classical_control_quantum, extend,
    interferometer_apply, interferometer_operator, kitaev_induced_control,
    max_overlap_with_ideal, PermutationGate,
};
use qcontrol::eig::{expi_hermitian, hermitian_eigen, unitary_eigenpairs};
use qcontrol::nogo::{
    minimize_obstruction_capped, phase_opt_process_fidelity, process_fidelity_fixed_phase,
    projected_obstruction_residual, optimal_realization_phase,
};
use qcontrol::optim::MinimizerConfig;
use qcontrol::sample::{gaussian_vector, haar_unitary, random_hermitian, random_state, stream_rng};
use qcontrol::{Matrix64, State64};
use rand::Rng;
use std::f64::consts::{PI, SQRT_2};

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = Matrix64> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |entries| {
        Matrix64::new(
            n,
            n,
            entries.into_iter().map(|(re, im)| c(re, im)).collect(),
        )
    })
}

fn hermitian_strategy(n: usize) -> impl Strategy<Value = Matrix64> {
    matrix_strategy(n).prop_map(|m| (&m + &m.adjoint()).scale(c(0.5, 0.0)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn kron_satisfies_the_mixed_product_law(
        a in matrix_strategy(2), b in matrix_strategy(3),
        p in matrix_strategy(2), q in matrix_strategy(3),
    ) {
        let lhs = a.kron(&b).matmul(&p.kron(&q));
        let rhs = a.matmul(&p).kron(&b.matmul(&q));
        prop_assert!(lhs.distance(&rhs) <= 1e-12 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn kron_is_linear_in_the_left_factor(
        a in matrix_strategy(2), a2 in matrix_strategy(2), b in matrix_strategy(3),
        re in -2.0f64..2.0, im in -2.0f64..2.0,
    ) {
        let s = c(re, im);
        let lhs = (&a.scale(s) + &a2).kron(&b);
        let rhs = &a.kron(&b).scale(s) + &a2.kron(&b);
        prop_assert!(lhs.distance(&rhs) <= 1e-12 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn kron_is_associative(
        a in matrix_strategy(2), b in matrix_strategy(2), m in matrix_strategy(3),
    ) {
        let lhs = a.kron(&b).kron(&m);
        let rhs = a.kron(&b.kron(&m));
        prop_assert!(lhs.distance(&rhs) <= 1e-13 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn direct_sum_multiplies_blockwise(
        a in matrix_strategy(2), b in matrix_strategy(3),
        p in matrix_strategy(2), q in matrix_strategy(3),
    ) {
        let lhs = a.direct_sum(&b).matmul(&p.direct_sum(&q));
        let rhs = a.matmul(&p).direct_sum(&b.matmul(&q));
        prop_assert!(lhs.distance(&rhs) <= 1e-12 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn expi_is_unitary_and_inverts_under_negation(h in hermitian_strategy(4)) {
        let u = expi_hermitian(&h).unwrap();
        prop_assert!(u.unitarity_residual() <= 1e-11);
        let v = expi_hermitian(&h.scale(c(-1.0, 0.0))).unwrap();
        prop_assert!(u.matmul(&v).distance(&Matrix64::identity(4)) <= 1e-11);
    }

    #[test]
    fn controlled_unitary_has_exact_block_structure(h in hermitian_strategy(3)) {
        let u = expi_hermitian(&h).unwrap();
        let cu = control_u(&u);
        prop_assert!(cu.unitarity_residual() <= 1e-11);
        for r in 0..3 {
            for col in 0..3 {
                let id = if r == col { c(1.0, 0.0) } else { c(0.0, 0.0) };
                prop_assert_eq!(cu.get(r, col), id);
                prop_assert_eq!(cu.get(r, 3 + col), c(0.0, 0.0));
                prop_assert_eq!(cu.get(3 + r, col), c(0.0, 0.0));
                prop_assert_eq!(cu.get(3 + r, 3 + col), u.get(r, col));
            }
        }
    }
}

fn exp_series(m: &Matrix64, terms: usize) -> Matrix64 {
    let n = m.rows();
    let mut acc = Matrix64::identity(n);
    let mut pow = Matrix64::identity(n);
    for k in 1..=terms {
        pow = pow.matmul(m).scale(c(1.0 / k as f64, 0.0));
        acc = &acc + &pow;
    }
    acc
}

#[test]
fn matrix_exponential_matches_the_power_series() {
    for trial in 0..50u64 {
        let mut rng = stream_rng(0xE1, trial);
        let n = 2 + (trial % 4) as usize;
        let mut h = random_hermitian::<f64>(&mut rng, n);
        let norm = h.frobenius_norm();
        if norm > 1.0 {
            h = h.scale(c(1.0 / norm, 0.0));
        }
        let series = exp_series(&h.scale(c(0.0, 1.0)), 30);
        let fast = expi_hermitian(&h).unwrap();
        assert!(
            series.distance(&fast) <= 1e-13,
            "trial {trial}: series and eigendecomposition disagree by {}",
            series.distance(&fast)
        );
    }
}

#[test]
fn hermitian_eigen_reconstructs_pairs_and_the_trace() {
    for trial in 0..40u64 {
        let mut rng = stream_rng(0xE2, trial);
        let n = 2 + (trial % 7) as usize;
        let h = random_hermitian::<f64>(&mut rng, n);
        let eig = hermitian_eigen(&h).unwrap();
        assert!(eig.vectors.unitarity_residual() <= 1e-12 * n as f64);
        let scale = 1.0 + h.frobenius_norm();
        for k in 0..n {
            let mut residual_sq = 0.0;
            for r in 0..n {
                let mut hv = c(0.0, 0.0);
                for j in 0..n {
                    hv += h.get(r, j) * eig.vectors.get(j, k);
                }
                residual_sq += (hv - eig.vectors.get(r, k).scale(eig.values[k])).norm_sqr();
            }
            assert!(
                residual_sq.sqrt() <= 1e-12 * scale,
                "trial {trial}: eigenpair {k} residual {}",
                residual_sq.sqrt()
            );
        }
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - h.trace().re).abs() <= 1e-11 * scale);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

/// The interferometer assembled entrywise from scratch on polarization ⊗
/// path ⊗ internal: an explicit beam-splitter permutation and a gate stage
/// that touches only the blocked arm, multiplied out as dense matrices.
fn optics_oracle(u: &Matrix64) -> Matrix64 {
    let d = u.rows();
    let dim = 4 * d;
    let split = |idx: usize| (idx / (2 * d), (idx / d) % 2, idx % d);
    let pbs = Matrix64::from_fn(dim, dim, |r, col| {
        let (pr, ar, jr) = split(r);
        let (pc, ac, jc) = split(col);
        let out_arm = if pc == 0 { ac } else { 1 - ac };
        if pr == pc && ar == out_arm && jr == jc {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let stage = Matrix64::from_fn(dim, dim, |r, col| {
        let (pr, ar, jr) = split(r);
        let (pc, ac, jc) = split(col);
        if pr != pc || ar != ac {
            c(0.0, 0.0)
        } else if ac == 0 {
            if jr == jc {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        } else {
            u.get(jr, jc)
        }
    });
    pbs.matmul(&stage).matmul(&pbs)
}

#[test]
fn interferometer_matches_the_entrywise_optics_oracle() {
    for (t, &d) in [2usize, 3, 4, 8].iter().enumerate() {
        for trial in 0..8u64 {
            let mut rng = stream_rng(0xE3, t as u64 * 100 + trial);
            let u = haar_unitary::<f64>(&mut rng, d);
            let psi = random_state::<f64>(&mut rng, d);
            let g = gaussian_vector::<f64>(&mut rng, 4);
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]).sqrt();
            let alpha = c(g[0] / norm, g[1] / norm);
            let beta = c(g[2] / norm, g[3] / norm);

            let outcome = interferometer_apply(&u, alpha, beta, &psi).unwrap();

            let mut amps = vec![c(0.0, 0.0); 4 * d];
            for (j, &aj) in psi.amplitudes().iter().enumerate() {
                amps[j] = alpha * aj;
                amps[2 * d + j] = beta * aj;
            }
            let pushed = optics_oracle(&u).apply_vec(&amps);
            for pol in 0..2 {
                for j in 0..d {
                    let kept = pushed[pol * 2 * d + j];
                    let leaked = pushed[pol * 2 * d + d + j];
                    assert!((kept - outcome.output.amplitude(pol * d + j)).norm() <= 1e-13);
                    assert!(leaked.norm() <= 1e-13, "amplitude left in the blocked arm");
                }
            }
            assert!(interferometer_operator(&u).distance(&control_u(&u)) <= 1e-13);
        }
    }
}

#[test]
fn eigenstate_control_works_on_solver_supplied_eigenpairs() {
    for trial in 0..50u64 {
        let mut rng = stream_rng(0xE4, trial);
        let m = 2 + (trial % 5) as usize;
        let v = haar_unitary::<f64>(&mut rng, m);
        let pairs = unitary_eigenpairs(&v).unwrap();
        let idx = trial as usize % pairs.len();
        let (lam, vec) = pairs[idx].clone();
        let gate = BlackboxGate::with_eigenpair(v.clone(), vec, lam).unwrap();
        let induced = kitaev_induced_control(&gate).unwrap();
        assert!(induced.aux_residual <= 1e-10);
        let deficit = 1.0 - qcontrol::linalg::map_overlap(&induced.operator, &control_u(&v));
        assert!(
            deficit <= 1e-8,
            "trial {trial} (m = {m}): induced control off by {deficit}"
        );
    }
}

#[test]
fn extension_keeps_the_original_action_and_a_known_fixed_point() {
    let mut rng = stream_rng(0xE5, 0);
    for d in 2..=5usize {
        let u = haar_unitary::<f64>(&mut rng, d);
        let ext = extend(&u, 2);
        assert_eq!(ext.rows(), d + 2);
        for r in 0..2 {
            for col in 0..d + 2 {
                let expected = if r == col { c(1.0, 0.0) } else { c(0.0, 0.0) };
                assert_eq!(ext.get(r, col), expected);
                assert_eq!(ext.get(col, r), expected);
            }
        }
        for r in 0..d {
            for col in 0..d {
                assert_eq!(ext.get(2 + r, 2 + col), u.get(r, col));
            }
        }
    }
}

#[test]
fn copy_control_circuit_agrees_with_the_label_contract_exhaustively() {
    for d in 2..=5usize {
        for perm in (0..d).permutations(d) {
            let gate = PermutationGate::<f64>::from_permutation(perm.clone()).unwrap();
            let circuit = classical_control_circuit(&gate);
            for control in 0..2usize {
                for x in 0..d {
                    let (bottom, middle) = classical_control(&gate, control == 1, x).unwrap();
                    let mut input = vec![c(0.0, 0.0); 2 * d * d];
                    input[control * d * d + x * d] = c(1.0, 0.0);
                    let out = circuit.apply_vec(&input);
                    for (i, amp) in out.iter().enumerate() {
                        let expected = if i == control * d * d + middle * d + bottom {
                            c(1.0, 0.0)
                        } else {
                            c(0.0, 0.0)
                        };
                        assert_eq!(
                            *amp, expected,
                            "perm {perm:?}, control {control}, x {x}, slot {i}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn cloning_witness_matches_a_garbage_state_grid_search() {
    let gate = PermutationGate::<f64>::from_permutation(vec![1, 0]).unwrap();
    let control = State64::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let psi = State64::new(vec![c(0.3f64.cos(), 0.0), c(0.3f64.sin(), 0.0)]).unwrap();
    let reported = max_overlap_with_ideal(&gate, &control, &psi).unwrap();
    assert!(reported < 0.95, "superposed input must break copy control");

    let zero_bottom = State64::basis(2, 0);
    let actual = classical_control_quantum(&gate, &control.kron(&psi).kron(&zero_bottom)).unwrap();
    // The coherent result lives on control ⊗ bottom; the middle register
    // keeps the leftover copy, so that is where the free garbage state goes.
    let ideal_cb = control_u(gate.matrix()).apply(&control.kron(&psi));

    let d = 2usize;
    let mut best = 0.0f64;
    let steps = 600;
    for ti in 0..=steps {
        let theta = 0.5 * PI * ti as f64 / steps as f64;
        for pi_ in 0..steps {
            let phi = 2.0 * PI * pi_ as f64 / steps as f64;
            let g = [
                c(theta.cos(), 0.0),
                c(theta.sin() * phi.cos(), theta.sin() * phi.sin()),
            ];
            let mut candidate = vec![c(0.0, 0.0); 2 * d * d];
            for ctl in 0..2 {
                for m in 0..d {
                    for b in 0..d {
                        candidate[ctl * d * d + m * d + b] =
                            ideal_cb.amplitude(ctl * d + b) * g[m];
                    }
                }
            }
            let overlap = State64::new(candidate)
                .unwrap()
                .overlap(&actual)
                .norm();
            best = best.max(overlap);
        }
    }
    assert!(
        (best - reported).abs() <= 5e-5,
        "grid search {best} vs closed form {reported}"
    );
}

/// Maximizes `f` over the circle by a coarse grid followed by ternary
/// refinement of the best bracket.
fn refined_circle_max(f: impl Fn(f64) -> f64) -> f64 {
    let n = 1024;
    let step = 2.0 * PI / n as f64;
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let v = f(k as f64 * step);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let mut lo = (best_k as f64 - 1.0) * step;
    let mut hi = (best_k as f64 + 1.0) * step;
    for _ in 0..80 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(f(0.5 * (lo + hi)))
}

#[test]
fn phase_optimized_fidelity_matches_a_refined_phase_grid() {
    for trial in 0..100u64 {
        let mut rng = stream_rng(0xE6, trial);
        let d = 2 + (trial % 3) as usize;
        let a = 1 + (trial % 2) as usize;
        let n = 2 * a * d;
        let sandwich = CircuitSandwich::new(
            a,
            d,
            haar_unitary::<f64>(&mut rng, n),
            haar_unitary::<f64>(&mut rng, n),
        )
        .unwrap();
        let gate = BlackboxGate::new(haar_unitary::<f64>(&mut rng, d)).unwrap();

        let closed = phase_opt_process_fidelity(&sandwich, &gate);
        let grid = refined_circle_max(|u| process_fidelity_fixed_phase(&sandwich, &gate, u));
        assert!(
            (closed - grid).abs() <= 1e-9,
            "trial {trial}: closed form {closed} vs refined grid {grid}"
        );
        assert!(closed >= grid - 1e-12, "closed form must dominate the grid");

        let at_opt =
            process_fidelity_fixed_phase(&sandwich, &gate, optimal_realization_phase(&sandwich, &gate));
        assert!((at_opt - closed).abs() <= 1e-11);
    }
}

/// Inner minimum of the squared projected residual over the three circuit
/// phases and both coefficient arguments at fixed coefficient moduli. The
/// Frobenius norm splits into the control-0 block, which sees only
/// `(cX + cZ)/√2 − 1`, and the control-1 block, where each coefficient can
/// be phase-aligned with the H term independently.
fn inner_min_sq(r1: f64, r2: f64) -> f64 {
    let gap = (1.0 - (r1 + r2) / SQRT_2).max(0.0);
    (1.0 - r1).powi(2) + (1.0 - r2).powi(2) + 2.0 * gap * gap
}

/// A feasible point attaining [`inner_min_sq`] at the given moduli.
fn attaining_point(r1: f64, r2: f64) -> (C, C, f64, f64, f64) {
    if (r1 + r2) / SQRT_2 <= 1.0 {
        return (c(r1, 0.0), c(r2, 0.0), 0.0, 0.0, 0.0);
    }
    // Triangle construction: pick cX on the circle of radius r1 such that
    // √2 − cX has modulus exactly r2; the control-0 block then vanishes.
    let p_re = (2.0 + r1 * r1 - r2 * r2) / (2.0 * SQRT_2);
    let p_im = (r1 * r1 - p_re * p_re).max(0.0).sqrt();
    let cx = c(p_re, p_im);
    let cz = c(SQRT_2 - p_re, -p_im);
    let x = 2.0 * PI - cx.arg().rem_euclid(2.0 * PI);
    let z = 2.0 * PI - cz.arg().rem_euclid(2.0 * PI);
    (cx, cz, x % (2.0 * PI), z % (2.0 * PI), 0.0)
}

#[test]
fn reduced_inner_minimum_bounds_the_full_landscape_and_is_attained() {
    let mut rng = stream_rng(0xE7, 0);
    for _ in 0..2000 {
        let r1 = rng.random::<f64>();
        let r2 = rng.random::<f64>();
        let a1 = rng.random::<f64>() * 2.0 * PI;
        let a2 = rng.random::<f64>() * 2.0 * PI;
        let x = rng.random::<f64>() * 2.0 * PI;
        let z = rng.random::<f64>() * 2.0 * PI;
        let h = rng.random::<f64>() * 2.0 * PI;
        let cx = c(r1 * a1.cos(), r1 * a1.sin());
        let cz = c(r2 * a2.cos(), r2 * a2.sin());
        let r = projected_obstruction_residual(cx, cz, x, z, h).unwrap();
        assert!(
            r * r >= inner_min_sq(r1, r2) - 1e-12,
            "full landscape dipped below the phase-minimized bound"
        );
    }
    let n = 33;
    for i in 0..n {
        for j in 0..n {
            let r1 = i as f64 / (n - 1) as f64;
            let r2 = j as f64 / (n - 1) as f64;
            let (cx, cz, x, z, h) = attaining_point(r1, r2);
            assert!((cx.norm() - r1).abs() <= 1e-12);
            assert!((cz.norm() - r2).abs() <= 1e-12);
            let r = projected_obstruction_residual(cx, cz, x, z, h).unwrap();
            assert!(
                (r * r - inner_min_sq(r1, r2)).abs() <= 1e-10,
                "bound not attained at moduli ({r1}, {r2}): {} vs {}",
                r * r,
                inner_min_sq(r1, r2)
            );
        }
    }
}

#[test]
fn capped_search_matches_the_reduced_grid_oracle() {
    let mut floors = Vec::new();
    for &delta in &[0.05f64, 0.1, 0.2] {
        let cap = 1.0 - delta;
        let n = 257;
        let mut grid_min = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let r1 = cap * i as f64 / (n - 1) as f64;
                let r2 = cap * j as f64 / (n - 1) as f64;
                grid_min = grid_min.min(inner_min_sq(r1, r2));
            }
        }
        let floor = grid_min.sqrt();
        let cfg = MinimizerConfig::<f64> {
            restarts: 32,
            ..MinimizerConfig::default()
        };
        let report = minimize_obstruction_capped(cap, &cfg).unwrap();
        assert!(
            report.best_value >= floor - 1e-9,
            "cap {cap}: optimizer beat the landscape floor ({} < {floor})",
            report.best_value
        );
        assert!(
            report.best_value <= floor + 2e-3,
            "cap {cap}: optimizer failed to reach the floor ({} vs {floor})",
            report.best_value
        );
        assert!((floor - SQRT_2 * delta).abs() <= 1e-12);
        floors.push(report.best_value);
    }
    assert!(floors[0] < floors[1] && floors[1] < floors[2]);
}

#[test]
fn capped_floor_survives_a_direct_coarse_scan() {
    let cap = 0.9;
    let cfg = MinimizerConfig::<f64> {
        restarts: 16,
        ..MinimizerConfig::default()
    };
    let report = minimize_obstruction_capped(cap, &cfg).unwrap();

    let phases = 8usize;
    let moduli = 4usize;
    let mut scan_min = f64::INFINITY;
    for i1 in 0..=moduli {
        for i2 in 0..=moduli {
            let r1 = cap * i1 as f64 / moduli as f64;
            let r2 = cap * i2 as f64 / moduli as f64;
            for a1 in 0..phases {
                for a2 in 0..phases {
                    let t1 = 2.0 * PI * a1 as f64 / phases as f64;
                    let t2 = 2.0 * PI * a2 as f64 / phases as f64;
                    let cx = c(r1 * t1.cos(), r1 * t1.sin());
                    let cz = c(r2 * t2.cos(), r2 * t2.sin());
                    for xi in 0..phases {
                        for zi in 0..phases {
                            for hi in 0..phases {
                                let x = 2.0 * PI * xi as f64 / phases as f64;
                                let z = 2.0 * PI * zi as f64 / phases as f64;
                                let h = 2.0 * PI * hi as f64 / phases as f64;
                                let r =
                                    projected_obstruction_residual(cx, cz, x, z, h).unwrap();
                                scan_min = scan_min.min(r);
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(
        scan_min >= report.best_value - 1e-9,
        "coarse scan found a point below the reported minimum"
    );
    assert!(scan_min <= 0.5, "coarse scan should land near the floor");
}

#[test]
fn sandwich_kraus_blocks_form_a_complete_channel() {
    for trial in 0..30u64 {
        let mut rng = stream_rng(0xE8, trial);
        let a = 1 + (trial % 3) as usize;
        let d = 2 + (trial % 2) as usize;
        let n = 2 * a * d;
        let sandwich = CircuitSandwich::new(
            a,
            d,
            haar_unitary::<f64>(&mut rng, n),
            haar_unitary::<f64>(&mut rng, n),
        )
        .unwrap();
        let u = haar_unitary::<f64>(&mut rng, d);
        let kraus = reduced_channel_kraus(&sandwich, &u);
        assert_eq!(kraus.len(), a);
        let mut acc = Matrix64::zeros(2 * d, 2 * d);
        for wk in &kraus {
            acc = &acc + &wk.adjoint().matmul(wk);
        }
        assert!(
            acc.distance(&Matrix64::identity(2 * d)) <= 1e-12 * n as f64,
            "completeness relation violated at trial {trial}"
        );
    }
}
