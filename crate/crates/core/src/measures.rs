//! Local quantum Fisher information (LQFI) and local quantum uncertainty (LQU).
//!
//! Both are minima over local observables L = (σ⃗·n⃗) ⊗ I on subsystem A of a
//! per-observable kernel:
//!
//! * QFI:  F(ρ, L) = ½ Σ_{m,n} (h_m − h_n)² / (h_m + h_n) |⟨φ_m|L|φ_n⟩|²
//! * skew: I(ρ, L) = ½ Σ_{m,n} (√h_m − √h_n)² |⟨φ_m|L|φ_n⟩|²
//!
//! Because Tr(ρL²) = 1 for every unit n⃗, each kernel is 1 − n⃗ᵀMn⃗ for a real
//! symmetric 3×3 matrix M (S for the QFI, B for the skew information), and the
//! minimum over n⃗ is 1 − λ_max(M).
//!
//! The S-sum runs over *all* ordered pairs (m, n), diagonal included. Summing
//! only m ≠ n is basis dependent inside a degenerate eigenspace and breaks the
//! identity F = 1 − n⃗ᵀSn⃗; with the diagonal terms the identity is exact since
//! ½(h_m − h_n)²/(h_m + h_n) = ½(h_m + h_n) − 2h_m h_n/(h_m + h_n).
//!
//! The measures themselves are evaluated as λ_min of I − S and I − B, built
//! directly from the kernel weights. This equals 1 − λ_max but keeps relative
//! accuracy when Q or U is tiny, where 1 − λ_max would cancel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, local_paulis, pauli, psd_sqrt, ComplexMatrix, EigenSystem, Sym3};
use crate::states::DensityMatrix;

/// Pairs whose total weight is at or below this are skipped.
pub const SPECTRAL_FLOOR: f64 = 1e-12;

pub type CorrelationMatrix3 = Sym3;

/// Unit direction n⃗ defining the local observable σ⃗·n⃗.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    /// Normalizes (x, y, z); fails on the zero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::InvalidParameter(
                "Bloch vector must be nonzero and finite".into(),
            ));
        }
        Ok(Self([x / norm, y / norm, z / norm]))
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self([st * cp, st * sp, ct])
    }

    pub const fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub const fn y() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub const fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    /// (σ⃗·n⃗) ⊗ I₂.
    pub fn observable(&self) -> ComplexMatrix {
        let mut sn = ComplexMatrix::zeros(2);
        for (k, &nk) in self.0.iter().enumerate() {
            sn = &sn + &pauli(k + 1).expect("k in 1..=3").scale_real(nk);
        }
        kron(&sn, &ComplexMatrix::identity(2))
    }
}

/// Which per-observable kernel to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Qfi,
    Skew,
}

/// Eigendecomposition of ρ together with σ_k ⊗ I expressed in its eigenbasis.
/// Computing this once lets every measure and every direction reuse it.
#[derive(Debug, Clone)]
pub struct LocalSpectrum {
    weights: Vec<f64>,
    sqrt_weights: Vec<f64>,
    local_ops: [ComplexMatrix; 3],
}

impl LocalSpectrum {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        Ok(Self::from_eig(&rho.eig()?))
    }

    pub fn from_eig(eig: &EigenSystem) -> Self {
        let weights: Vec<f64> = eig.values.iter().map(|&h| h.max(0.0)).collect();
        let sqrt_weights = weights.iter().map(|h| h.sqrt()).collect();
        let local_ops = local_paulis().map(|op| eig.to_eigenbasis(&op));
        Self {
            weights,
            sqrt_weights,
            local_ops,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn observable_element(&self, n: &BlochVector, m: usize, k: usize) -> Complex64 {
        let c = n.components();
        self.local_ops[0][(m, k)] * c[0]
            + self.local_ops[1][(m, k)] * c[1]
            + self.local_ops[2][(m, k)] * c[2]
    }

    /// F(ρ, (σ⃗·n⃗)⊗I) from the spectral sum.
    pub fn qfi(&self, n: &BlochVector) -> f64 {
        let h = &self.weights;
        let mut acc = 0.0;
        for m in 0..h.len() {
            for k in 0..h.len() {
                let sum = h[m] + h[k];
                if sum <= SPECTRAL_FLOOR {
                    continue;
                }
                let diff = h[m] - h[k];
                acc += diff * diff / sum * self.observable_element(n, m, k).norm_sqr();
            }
        }
        0.5 * acc
    }

    /// I(ρ, (σ⃗·n⃗)⊗I) from the spectral sum.
    pub fn skew_info(&self, n: &BlochVector) -> f64 {
        let r = &self.sqrt_weights;
        let mut acc = 0.0;
        for m in 0..r.len() {
            for k in 0..r.len() {
                let diff = r[m] - r[k];
                acc += diff * diff * self.observable_element(n, m, k).norm_sqr();
            }
        }
        0.5 * acc
    }

    pub fn kernel(&self, kind: Kernel, n: &BlochVector) -> f64 {
        match kind {
            Kernel::Qfi => self.qfi(n),
            Kernel::Skew => self.skew_info(n),
        }
    }

    /// S_kl = Σ_{m,n} 2h_m h_n/(h_m + h_n) ⟨φ_m|σ_k⊗I|φ_n⟩⟨φ_n|σ_l⊗I|φ_m⟩.
    pub fn s_matrix(&self) -> CorrelationMatrix3 {
        let h = &self.weights;
        self.pair_sum(|m, k| {
            let sum = h[m] + h[k];
            if sum <= SPECTRAL_FLOOR {
                0.0
            } else {
                2.0 * h[m] * h[k] / sum
            }
        })
    }

    /// B_ij = Σ_{m,n} √h_m √h_n ⟨φ_m|σ_i⊗I|φ_n⟩⟨φ_n|σ_j⊗I|φ_m⟩, the spectral
    /// form of Tr(√ρ σ_i √ρ σ_j).
    pub fn b_matrix(&self) -> CorrelationMatrix3 {
        let r = &self.sqrt_weights;
        self.pair_sum(|m, k| r[m] * r[k])
    }

    fn pair_sum(&self, weight: impl Fn(usize, usize) -> f64) -> CorrelationMatrix3 {
        let dim = self.weights.len();
        let mut out = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in a..3 {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..dim {
                    for k in 0..dim {
                        let w = weight(m, k);
                        if w == 0.0 {
                            continue;
                        }
                        acc += self.local_ops[a][(m, k)] * self.local_ops[b][(k, m)] * w;
                    }
                }
                out[a][b] = acc.re;
                out[b][a] = acc.re;
            }
        }
        Sym3(out)
    }

    /// I − S, so that F(ρ, L) = n⃗ᵀ(I − S)n⃗.
    pub fn fisher_matrix(&self) -> CorrelationMatrix3 {
        let h = &self.weights;
        self.pair_sum(|m, k| {
            let sum = h[m] + h[k];
            if sum <= SPECTRAL_FLOOR {
                0.0
            } else {
                let diff = h[m] - h[k];
                0.5 * diff * diff / sum
            }
        })
    }

    /// I − B, so that I(ρ, L) = n⃗ᵀ(I − B)n⃗.
    pub fn skew_matrix(&self) -> CorrelationMatrix3 {
        let r = &self.sqrt_weights;
        self.pair_sum(|m, k| {
            let diff = r[m] - r[k];
            0.5 * diff * diff
        })
    }

    /// Q = 1 − λ_max(S), evaluated as λ_min(I − S).
    pub fn lqfi(&self) -> f64 {
        self.fisher_matrix().min_eigenvalue()
    }

    /// U = 1 − λ_max(B), evaluated as λ_min(I − B).
    pub fn lqu(&self) -> f64 {
        self.skew_matrix().min_eigenvalue()
    }
}

/// Quantum Fisher information of ρ for the local observable (σ⃗·n⃗)⊗I.
pub fn qfi(rho: &DensityMatrix, n: &BlochVector) -> Result<f64> {
    Ok(LocalSpectrum::new(rho)?.qfi(n))
}

/// Wigner–Yanase skew information of ρ for (σ⃗·n⃗)⊗I, spectral form.
pub fn skew_info(rho: &DensityMatrix, n: &BlochVector) -> Result<f64> {
    Ok(LocalSpectrum::new(rho)?.skew_info(n))
}

/// −½ Tr([√ρ, L]²), the commutator form of the skew information.
pub fn skew_info_commutator(rho: &DensityMatrix, n: &BlochVector) -> Result<f64> {
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let l = n.observable();
    let comm = &(&sqrt_rho * &l) - &(&l * &sqrt_rho);
    Ok(-0.5 * (&comm * &comm).trace().re)
}

pub fn s_matrix(rho: &DensityMatrix) -> Result<CorrelationMatrix3> {
    Ok(LocalSpectrum::new(rho)?.s_matrix())
}

/// B_ij = Tr(√ρ (σ_i⊗I) √ρ (σ_j⊗I)), evaluated with the explicit matrix
/// square root.
pub fn b_matrix(rho: &DensityMatrix) -> Result<CorrelationMatrix3> {
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let sandwiched: Vec<ComplexMatrix> = local_paulis()
        .iter()
        .map(|op| &sqrt_rho * op)
        .collect();
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = (&sandwiched[i] * &sandwiched[j]).trace().re;
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    Ok(Sym3(out))
}

/// Q(ρ) = 1 − λ_max(S).
pub fn lqfi(rho: &DensityMatrix) -> Result<f64> {
    Ok(LocalSpectrum::new(rho)?.lqfi())
}

/// U(ρ) = 1 − λ_max(B).
pub fn lqu(rho: &DensityMatrix) -> Result<f64> {
    Ok(LocalSpectrum::new(rho)?.lqu())
}

/// LQFI and LQU sharing one eigendecomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurePair {
    pub lqfi: f64,
    pub lqu: f64,
}

pub fn measure_pair(rho: &DensityMatrix) -> Result<MeasurePair> {
    let spec = LocalSpectrum::new(rho)?;
    Ok(MeasurePair {
        lqfi: spec.lqfi(),
        lqu: spec.lqu(),
    })
}

/// Grid-and-refine minimization of a kernel over the Bloch sphere.
///
/// The coarse stage evaluates `coarse_resolution²` directions on a Fibonacci
/// sphere; the best one is refined by coordinate descent in (θ, φ) with step
/// halving until the step drops below 1e-7. Only the spectral kernel is used,
/// never S or B, so this is an independent check of the eigenvalue formulas.
pub fn brute_force_min(
    rho: &DensityMatrix,
    kind: Kernel,
    coarse_resolution: usize,
) -> Result<(f64, BlochVector)> {
    if coarse_resolution < 32 {
        return Err(Error::InvalidParameter(format!(
            "coarse_resolution must be at least 32, got {coarse_resolution}"
        )));
    }
    let spec = LocalSpectrum::new(rho)?;
    Ok(minimize_kernel(&spec, kind, coarse_resolution))
}

pub(crate) fn minimize_kernel(
    spec: &LocalSpectrum,
    kind: Kernel,
    coarse_resolution: usize,
) -> (f64, BlochVector) {
    let count = coarse_resolution * coarse_resolution;
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());

    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..count {
        let z = 1.0 - (2 * i + 1) as f64 / count as f64;
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = (i as f64 * golden) % std::f64::consts::TAU;
        let v = spec.kernel(kind, &BlochVector::from_angles(theta, phi));
        if v < best.0 {
            best = (v, theta, phi);
        }
    }

    let (mut value, mut theta, mut phi) = best;
    let mut step = (4.0 * std::f64::consts::PI / count as f64).sqrt();
    let mut iterations = 0;
    while step >= 1e-7 && iterations < 100_000 {
        iterations += 1;
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let v = spec.kernel(kind, &BlochVector::from_angles(theta + dt, phi + dp));
            if v < value {
                value = v;
                theta += dt;
                phi += dp;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (value, BlochVector::from_angles(theta, phi))
}
