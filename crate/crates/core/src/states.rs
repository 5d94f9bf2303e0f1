//! Two-qubit density matrices and the initial states used by the channel
//! models.
//!
//! Subsystem A is the left tensor factor and is the one probed by the local
//! observables; subsystem B is the right factor. The measure definitions work
//! for any 2 ⊗ d split, but every state here is 2 ⊗ 2 so `DensityMatrix` fixes
//! dim = 4.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, pauli, ComplexMatrix, EigenSystem, HERMITIAN_TOL};

pub const STATE_DIM: usize = 4;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;
const TETRAHEDRON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != STATE_DIM {
            return Err(Error::DimensionMismatch {
                expected: STATE_DIM,
                actual: matrix.dim(),
            });
        }
        let deviation = matrix.hermiticity_error();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.values[STATE_DIM - 1];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that is valid by construction. Only the cheap
    /// Hermiticity check is kept in debug builds.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), STATE_DIM);
        debug_assert!(matrix.is_hermitian(HERMITIAN_TOL));
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eig(&self) -> Result<EigenSystem> {
        hermitian_eig(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Reduced state of A (trace over the right factor).
    pub fn partial_trace_b(&self) -> ComplexMatrix {
        let m = &self.matrix;
        ComplexMatrix::from_fn(2, |i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)])
    }

    /// (U_A ⊗ U_B) ρ (U_A ⊗ U_B)†.
    pub fn local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Self {
        let u = kron(ua, ub);
        Self::from_trusted(self.matrix.conjugate_by(&u))
    }
}

/// Correlation coefficients of the Bell-diagonal family
/// ρ = (I⊗I + Σ r_i σ_i⊗σ_i)/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTriple {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl CorrelationTriple {
    /// Checks the box constraint |r_i| ≤ 1. Membership in the physical
    /// tetrahedron is checked by [`x_state`].
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        for r in [r1, r2, r3] {
            if !r.is_finite() || r.abs() > 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "correlation coefficient {r} outside [-1, 1]"
                )));
            }
        }
        Ok(Self { r1, r2, r3 })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            r1: self.r1 * factor,
            r2: self.r2 * factor,
            r3: self.r3 * factor,
        }
    }

    /// Eigenvalues of the Bell-diagonal state in the order
    /// (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).
    pub fn bell_weights(&self) -> [f64; 4] {
        let [r1, r2, r3] = self.as_array();
        [
            (1.0 + r1 - r2 + r3) / 4.0,
            (1.0 - r1 + r2 + r3) / 4.0,
            (1.0 + r1 + r2 - r3) / 4.0,
            (1.0 - r1 - r2 - r3) / 4.0,
        ]
    }

    pub fn is_physical(&self) -> bool {
        self.bell_weights().iter().all(|&w| w >= -TETRAHEDRON_TOL)
    }

    /// Ordering |r1| ≥ |r2| assumed by the closed-form depolarizing results.
    pub fn is_canonical(&self) -> bool {
        self.r1.abs() >= self.r2.abs()
    }
}

/// |Φ⁺⟩⟨Φ⁺| with |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell_phi_plus() -> DensityMatrix {
    let h = Complex64::new(0.5, 0.0);
    let mut m = ComplexMatrix::zeros(STATE_DIM);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = h;
    }
    DensityMatrix::from_trusted(m)
}

/// (I⊗I + Σ r_i σ_i⊗σ_i)/4 without any physicality check.
pub fn x_state_matrix(r: &CorrelationTriple) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(STATE_DIM);
    for (k, rk) in [(1, r.r1), (2, r.r2), (3, r.r3)] {
        let s = pauli(k).expect("k in 1..=3");
        m = &m + &kron(&s, &s).scale_real(rk);
    }
    m.scale_real(0.25)
}

/// Bell-diagonal X-state. Errors with [`Error::Unphysical`] outside the
/// tetrahedron of valid correlation triples.
pub fn x_state(r: &CorrelationTriple) -> Result<DensityMatrix> {
    let min = r.bell_weights().into_iter().fold(f64::INFINITY, f64::min);
    if min < -TETRAHEDRON_TOL {
        return Err(Error::Unphysical { min_eigenvalue: min });
    }
    Ok(DensityMatrix::from_trusted(x_state_matrix(r)))
}

/// GG†/Tr(GG†) for a seeded 4×4 complex Ginibre matrix G.
pub fn random_state(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(STATE_DIM, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let ggd = &g * &g.adjoint();
    let tr = ggd.trace().re;
    // exact Hermitian symmetrization of the product
    let m = ComplexMatrix::from_fn(STATE_DIM, |i, j| 0.5 * (ggd[(i, j)] + ggd[(j, i)].conj()) / tr);
    DensityMatrix::from_trusted(m)
}

/// Haar-distributed 2×2 unitary from a seeded RNG (QR of a Ginibre draw).
pub fn random_unitary_2(rng: &mut impl rand::Rng) -> ComplexMatrix {
    let mut draw = || {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    };
    let a = [draw(), draw()];
    let b = [draw(), draw()];
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let e0 = [a[0] / na, a[1] / na];
    let proj = e0[0].conj() * b[0] + e0[1].conj() * b[1];
    let c = [b[0] - proj * e0[0], b[1] - proj * e0[1]];
    let nc = (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
    let e1 = [c[0] / nc, c[1] / nc];
    ComplexMatrix::from_row_major(vec![e0[0], e1[0], e0[1], e1[1]]).expect("2x2")
}
