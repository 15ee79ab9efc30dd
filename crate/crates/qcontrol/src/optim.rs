//! Derivative-free minimization over unitary matrices.
//!
//! Unitaries are parametrized through their Hermitian generator, `U =
//! exp(iG)`: n real diagonal entries, then the real and imaginary parts of
//! the strict upper triangle, n² reals in total. The chart is surjective,
//! smooth, and unconstrained, which is exactly what a simplex method wants.
//!
//! The searcher is multistart Nelder-Mead with the standard reflection,
//! expansion, contraction and shrink coefficients (1, 2, 1/2, 1/2). Every
//! restart draws its Gaussian starting point from a counter-derived seed, so
//! restarts can run on any number of threads in any order and the report is
//! still bit-for-bit reproducible.

use crate::eig::{expi_hermitian, hermitian_generator};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::sample::{gaussian_vector, stream_rng};
use crate::scalar::{real, Scalar};
use num_complex::Complex;
use rayon::prelude::*;

/// Coordinates of one unitary: the packed Hermitian generator.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParams<T: Scalar> {
    n: usize,
    theta: Vec<T>,
}

impl<T: Scalar> UnitaryParams<T> {
    /// Wraps a coordinate vector; the length must be exactly n².
    pub fn new(n: usize, theta: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument {
                reason: "unitary dimension must be positive",
            });
        }
        if theta.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "parameter vector length",
                expected: n * n,
                got: theta.len(),
            });
        }
        Ok(Self { n, theta })
    }

    /// The origin of the chart, mapping to the identity.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            theta: vec![T::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    fn pair_index(n: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < n);
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    /// The Hermitian generator G encoded by these coordinates.
    pub fn generator(&self) -> ComplexMatrix<T> {
        let n = self.n;
        let pairs = n * (n - 1) / 2;
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            g.set(i, i, Complex::new(self.theta[i], T::zero()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let k = Self::pair_index(n, i, j);
                let z = Complex::new(self.theta[n + k], self.theta[n + pairs + k]);
                g.set(i, j, z);
                g.set(j, i, z.conj());
            }
        }
        g
    }

    /// Re-embeds the generator into a larger matrix dimension, padding with
    /// zeros: the grown unitary acts as before on the original sector and as
    /// the identity on the new one.
    pub fn embed(&self, new_n: usize) -> Result<Self> {
        if new_n < self.n {
            return Err(Error::DimensionMismatch {
                context: "embedding target dimension",
                expected: self.n,
                got: new_n,
            });
        }
        let n1 = self.n;
        let n2 = new_n;
        let pairs1 = n1 * (n1 - 1) / 2;
        let pairs2 = n2 * (n2 - 1) / 2;
        let mut theta = vec![T::zero(); n2 * n2];
        theta[..n1].copy_from_slice(&self.theta[..n1]);
        for i in 0..n1 {
            for j in i + 1..n1 {
                let k1 = Self::pair_index(n1, i, j);
                let k2 = Self::pair_index(n2, i, j);
                theta[n2 + k2] = self.theta[n1 + k1];
                theta[n2 + pairs2 + k2] = self.theta[n1 + pairs1 + k1];
            }
        }
        Self::new(n2, theta)
    }
}

/// `exp(i G(theta))`: always unitary, to eigensolver precision.
pub fn params_to_unitary<T: Scalar>(params: &UnitaryParams<T>) -> ComplexMatrix<T> {
    expi_hermitian(&params.generator()).expect("packed generator is Hermitian by construction")
}

/// Inverse chart: principal-branch generator of a unitary, packed.
pub fn unitary_to_params<T: Scalar>(u: &ComplexMatrix<T>) -> Result<UnitaryParams<T>> {
    let g = hermitian_generator(u)?;
    let n = u.rows();
    let pairs = n * (n - 1) / 2;
    let mut theta = vec![T::zero(); n * n];
    for i in 0..n {
        theta[i] = g.get(i, i).re;
    }
    for i in 0..n {
        for j in i + 1..n {
            let k = UnitaryParams::<T>::pair_index(n, i, j);
            theta[n + k] = g.get(i, j).re;
            theta[n + pairs + k] = g.get(i, j).im;
        }
    }
    UnitaryParams::new(n, theta)
}

/// Knobs of the multistart search.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerConfig<T: Scalar> {
    /// Independent Nelder-Mead descents from seeded Gaussian starts.
    pub restarts: usize,
    /// Iteration cap per descent.
    pub max_iters: usize,
    /// Standard deviation of the Gaussian starts, and initial simplex step.
    pub init_scale: T,
    /// Relative f-spread at which a descent stops early.
    pub eps: T,
    /// Master seed; restart k uses the counter-derived stream k.
    pub seed: u64,
}

impl<T: Scalar> Default for MinimizerConfig<T> {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            init_scale: real(0.5),
            eps: real(1e-9),
            seed: 42,
        }
    }
}

/// Everything a multistart run did, merged by restart index.
#[derive(Debug, Clone, PartialEq)]
pub struct MultistartReport<T: Scalar> {
    /// Smallest value any restart ever evaluated.
    pub best_value: T,
    /// The point achieving `best_value`.
    pub best_params: Vec<T>,
    /// Best-ever value per restart (infinite for aborted restarts); injected
    /// starting points occupy the trailing indices.
    pub restart_values: Vec<T>,
    /// Iterations each restart spent.
    pub restart_iters: Vec<usize>,
    /// Indices of restarts aborted by a non-finite objective value.
    pub failed_restarts: Vec<usize>,
    /// The master seed the run was keyed on.
    pub seed: u64,
}

struct RestartOutcome<T: Scalar> {
    value: T,
    point: Vec<T>,
    iters: usize,
    failed: bool,
}

/// Minimizes `f` over `R^dim` with `cfg.restarts` seeded descents.
pub fn multistart_minimize<T, F>(f: F, dim: usize, cfg: &MinimizerConfig<T>) -> MultistartReport<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    multistart_minimize_with_starts(f, dim, cfg, &[])
}

/// Same as [`multistart_minimize`], with extra deterministic starting points
/// appended after the random restarts (warm starts). A warm start is
/// evaluated before any simplex move, so its value is an upper bound on the
/// report's best value: injecting a previous argmin can never lose ground.
pub fn multistart_minimize_with_starts<T, F>(
    f: F,
    dim: usize,
    cfg: &MinimizerConfig<T>,
    extra_starts: &[Vec<T>],
) -> MultistartReport<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    assert!(dim >= 1, "objective dimension must be positive");
    for start in extra_starts {
        assert_eq!(start.len(), dim, "warm start length must match dimension");
    }
    let total = cfg.restarts + extra_starts.len();
    assert!(total >= 1, "need at least one restart or warm start");

    let outcomes: Vec<RestartOutcome<T>> = (0..total)
        .into_par_iter()
        .map(|index| {
            let x0 = if index < cfg.restarts {
                let mut rng = stream_rng(cfg.seed, index as u64);
                gaussian_vector::<T>(&mut rng, dim)
                    .into_iter()
                    .map(|g| g * cfg.init_scale)
                    .collect()
            } else {
                extra_starts[index - cfg.restarts].clone()
            };
            nelder_mead(&f, x0, cfg.init_scale, cfg.max_iters, cfg.eps)
        })
        .collect();

    let mut best_index = 0usize;
    for (i, outcome) in outcomes.iter().enumerate() {
        if outcome.value < outcomes[best_index].value {
            best_index = i;
        }
    }
    MultistartReport {
        best_value: outcomes[best_index].value,
        best_params: outcomes[best_index].point.clone(),
        restart_values: outcomes.iter().map(|o| o.value).collect(),
        restart_iters: outcomes.iter().map(|o| o.iters).collect(),
        failed_restarts: outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| o.failed)
            .map(|(i, _)| i)
            .collect(),
        seed: cfg.seed,
    }
}

/// One Nelder-Mead descent with best-ever tracking. A non-finite objective
/// value aborts the descent immediately and marks it failed (value +inf), so
/// a pathological region cannot poison the merged report.
fn nelder_mead<T, F>(f: &F, x0: Vec<T>, step: T, max_iters: usize, eps: T) -> RestartOutcome<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    let dim = x0.len();
    let mut best_point = x0.clone();
    let mut best_value = T::infinity();
    let evaluate = |x: &[T], best_point: &mut Vec<T>, best_value: &mut T| -> Option<T> {
        let v = f(x);
        if !v.is_finite() {
            return None;
        }
        if v < *best_value {
            *best_value = v;
            best_point.clear();
            best_point.extend_from_slice(x);
        }
        Some(v)
    };

    let failed = |iters: usize, x0: Vec<T>| RestartOutcome {
        value: T::infinity(),
        point: x0,
        iters,
        failed: true,
    };

    // Initial simplex: the start plus one axis step per coordinate.
    let mut simplex: Vec<Vec<T>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.clone());
    for i in 0..dim {
        let mut v = x0.clone();
        v[i] = v[i] + step;
        simplex.push(v);
    }
    let mut values = Vec::with_capacity(dim + 1);
    for v in &simplex {
        match evaluate(v, &mut best_point, &mut best_value) {
            Some(val) => values.push(val),
            None => return failed(0, x0),
        }
    }

    let half = real::<T>(0.5);
    let two = real::<T>(2.0);
    let mut iters = 0usize;
    while iters < max_iters {
        iters += 1;

        // Order the simplex: ties broken by index so the walk is stable.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
        let best = order[0];
        let second_worst = order[dim - 1];
        let worst = order[dim];

        let spread = (values[worst] - values[best]).abs() * two;
        let denom = values[worst].abs() + values[best].abs() + T::min_positive_value();
        if spread / denom <= eps {
            break;
        }

        let mut centroid = vec![T::zero(); dim];
        for &idx in order.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c = *c + *x;
            }
        }
        let inv = T::one() / real::<T>(dim as f64);
        for c in centroid.iter_mut() {
            *c = *c * inv;
        }

        let blend = |a: &[T], b: &[T], t: T| -> Vec<T> {
            a.iter().zip(b).map(|(&p, &q)| p + (q - p) * t).collect()
        };
        // Reflection x_r = c + (c - x_worst).
        let reflected = blend(&centroid, &simplex[worst], -T::one());
        let fr = match evaluate(&reflected, &mut best_point, &mut best_value) {
            Some(v) => v,
            None => return failed(iters, x0),
        };

        if fr < values[best] {
            let expanded = blend(&centroid, &simplex[worst], -two);
            let fe = match evaluate(&expanded, &mut best_point, &mut best_value) {
                Some(v) => v,
                None => return failed(iters, x0),
            };
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }

        let contracted_accepted = if fr < values[worst] {
            // Outside contraction, halfway from centroid toward x_r.
            let contracted = blend(&centroid, &reflected, half);
            let fc = match evaluate(&contracted, &mut best_point, &mut best_value) {
                Some(v) => v,
                None => return failed(iters, x0),
            };
            if fc <= fr {
                simplex[worst] = contracted;
                values[worst] = fc;
                true
            } else {
                false
            }
        } else {
            // Inside contraction, halfway from centroid toward x_worst.
            let contracted = blend(&centroid, &simplex[worst], half);
            let fc = match evaluate(&contracted, &mut best_point, &mut best_value) {
                Some(v) => v,
                None => return failed(iters, x0),
            };
            if fc < values[worst] {
                simplex[worst] = contracted;
                values[worst] = fc;
                true
            } else {
                false
            }
        };

        if !contracted_accepted {
            // Shrink everything toward the best vertex.
            let anchor = simplex[best].clone();
            for idx in 0..=dim {
                if idx == best {
                    continue;
                }
                let shrunk = blend(&anchor, &simplex[idx], half);
                match evaluate(&shrunk, &mut best_point, &mut best_value) {
                    Some(v) => {
                        simplex[idx] = shrunk;
                        values[idx] = v;
                    }
                    None => return failed(iters, x0),
                }
            }
        }
    }

    RestartOutcome {
        value: best_value,
        point: best_point,
        iters,
        failed: false,
    }
}
