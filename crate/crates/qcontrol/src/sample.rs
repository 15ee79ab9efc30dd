//! Seeded random objects: everything in the crate that draws randomness goes
//! through a master `u64` seed plus a counter, so independent draws can run
//! concurrently yet reproduce bit-for-bit in any execution order.

use crate::eig::expi_hermitian;
use crate::linalg::{ComplexMatrix, PureState};
use crate::scalar::{czero, real, Scalar};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_distr::StandardNormal;

pub use rand_chacha::ChaCha8Rng;

/// Order-independent sub-seed: a SplitMix64-style finalizer over
/// `master + (index+1) * golden`, so stream `index` never depends on how many
/// other streams were drawn before it.
pub fn counter_seed(master: u64, index: u64) -> u64 {
    let z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic RNG for one derived stream.
pub fn stream_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(counter_seed(master, index))
}

/// Standard-normal real vector.
pub fn gaussian_vector<T: Scalar>(rng: &mut ChaCha8Rng, len: usize) -> Vec<T> {
    (0..len)
        .map(|_| real(rng.sample::<f64, _>(StandardNormal)))
        .collect()
}

fn gaussian_complex<T: Scalar>(rng: &mut ChaCha8Rng) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(real(re), real(im))
}

/// Random Hermitian matrix with O(1) entries.
pub fn random_hermitian<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        let d: f64 = rng.sample(StandardNormal);
        m.set(r, r, Complex::new(real(d), T::zero()));
        for c in r + 1..dim {
            let z = gaussian_complex::<T>(rng).scale(real(std::f64::consts::FRAC_1_SQRT_2));
            m.set(r, c, z);
            m.set(c, r, z.conj());
        }
    }
    m
}

/// Random unitary as `exp(iH)` of a random Hermitian. Not Haar-distributed,
/// but cheap, smooth in its seed, and unitary to solver precision.
pub fn random_unitary_expi<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix<T> {
    expi_hermitian(&random_hermitian(rng, dim)).expect("random Hermitian matrix must diagonalize")
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix via twice-applied
/// modified Gram-Schmidt (the second pass removes the orthogonality loss of
/// the first; R keeps a positive diagonal, which is exactly the Haar fix).
pub fn haar_unitary<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix<T> {
    let mut cols: Vec<Vec<Complex<T>>> = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian_complex::<T>(rng)).collect())
        .collect();
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj: Complex<T> = czero();
                for r in 0..dim {
                    proj += cols[k][r].conj() * cols[j][r];
                }
                for r in 0..dim {
                    let sub = proj * cols[k][r];
                    cols[j][r] = cols[j][r] - sub;
                }
            }
        }
        let mut norm_sq = T::zero();
        for r in 0..dim {
            norm_sq = norm_sq + cols[j][r].norm_sqr();
        }
        let inv = T::one() / norm_sq.sqrt();
        for r in 0..dim {
            cols[j][r] = cols[j][r].scale(inv);
        }
    }
    ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

/// Random pure state (uniform on the sphere).
pub fn random_state<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> PureState<T> {
    let amps: Vec<Complex<T>> = (0..dim).map(|_| gaussian_complex::<T>(rng)).collect();
    PureState::normalized(amps).expect("Gaussian amplitudes are almost surely non-zero")
}
