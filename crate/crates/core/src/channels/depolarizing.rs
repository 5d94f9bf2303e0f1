//! Isotropic random-telegraph-noise depolarizing channel acting on both
//! qubits, in dimensionless time ν = t/2τ.
//!
//! Each qubit sees the Pauli channel ρ ↦ Σ_k p_k σ_k ρ σ_k with
//! p₀ = (1 + 3Υ)/4 and p₁ = p₂ = p₃ = (1 − Υ)/4, where
//! Υ(ν) = e^{−ν}(cos μν + sin μν / μ). The single-qubit Bloch vector contracts
//! by Υ, so the correlations of a Bell-diagonal state contract by Υ².
//!
//! Υ dips below −1/3 around ν = π/μ whenever e^{−π/μ} > 1/3 (μ > π/ln 3);
//! there p₀ < 0 and the single-qubit map is not completely positive even
//! though its action on Bell-diagonal states stays physical.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, ComplexMatrix};
use crate::states::{x_state, CorrelationTriple, DensityMatrix};

const CP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizingParams {
    /// Oscillation parameter μ = √((4κτ)² − 1).
    pub mu: f64,
    /// Initial correlations of the Bell-diagonal probe state.
    pub r: CorrelationTriple,
}

impl DepolarizingParams {
    /// Fails if μ ≤ 0 or `r` lies outside the physical tetrahedron.
    pub fn new(mu: f64, r: CorrelationTriple) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be > 0, got {mu}")));
        }
        x_state(&r)?;
        Ok(Self { mu, r })
    }
}

/// Υ(ν) = e^{−ν}(cos μν + sin μν / μ).
pub fn depol_memory(nu: f64, mu: f64) -> f64 {
    let (s, c) = (mu * nu).sin_cos();
    (-nu).exp() * (c + s / mu)
}

/// Υ continued to imaginary μ = i·m (0 < m < 1), i.e. 4κτ < 1:
/// e^{−ν}(cosh mν + sinh mν / m). Positive and monotonically decreasing,
/// the memoryless reference regime.
pub fn depol_memory_overdamped(nu: f64, m: f64) -> f64 {
    (-nu).exp() * ((m * nu).cosh() + (m * nu).sinh() / m)
}

/// Pauli weights (p₀, p₁, p₂, p₃) for a given Υ, without positivity check.
pub fn pauli_weights(upsilon: f64) -> [f64; 4] {
    let side = (1.0 - upsilon) / 4.0;
    [(1.0 + 3.0 * upsilon) / 4.0, side, side, side]
}

fn checked_weights(upsilon: f64) -> Result<[f64; 4]> {
    let p = pauli_weights(upsilon);
    if let Some(&w) = p.iter().find(|&&w| w < -CP_TOL) {
        return Err(Error::NotCompletelyPositive { weight: w });
    }
    Ok(p)
}

/// Kraus weights at time ν. Errors when Υ(ν) < −1/3.
pub fn depol_probs(nu: f64, mu: f64) -> Result<[f64; 4]> {
    checked_weights(depol_memory(nu, mu))
}

fn pauli_products() -> Vec<((usize, usize), ComplexMatrix)> {
    let paulis: Vec<ComplexMatrix> = (0..4).map(|k| pauli(k).expect("k < 4")).collect();
    let mut out = Vec::with_capacity(16);
    for k in 0..4 {
        for l in 0..4 {
            out.push(((k, l), kron(&paulis[k], &paulis[l])));
        }
    }
    out
}

/// ρ(ν) = Σ_{k,l} (E_k⊗E_l)† ρ₀ (E_k⊗E_l) with E_k = √p_k σ_k for a given Υ.
pub fn depol_apply_with_memory(rho0: &DensityMatrix, upsilon: f64) -> Result<DensityMatrix> {
    let p = checked_weights(upsilon)?;
    let amps = p.map(|w| w.max(0.0).sqrt());
    let mut out = ComplexMatrix::zeros(4);
    for ((k, l), sigma) in pauli_products() {
        let e = sigma.scale_real(amps[k] * amps[l]);
        let term = &(&e.adjoint() * rho0.matrix()) * &e;
        out = &out + &term;
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// Kraus evolution of ρ₀ to time ν. Errors with
/// [`Error::NotCompletelyPositive`] where Υ(ν) < −1/3.
pub fn depol_apply(rho0: &DensityMatrix, nu: f64, mu: f64) -> Result<DensityMatrix> {
    depol_apply_with_memory(rho0, depol_memory(nu, mu))
}

/// The same two-qubit map written as the signed Pauli sum
/// Σ_{k,l} p_k p_l (σ_k⊗σ_l) ρ₀ (σ_k⊗σ_l). Identical to [`depol_apply`]
/// wherever all p_k ≥ 0 and defined for every ν. The output is validated as a
/// density matrix since positivity is no longer guaranteed by the map.
pub fn depol_apply_pauli_sum(rho0: &DensityMatrix, nu: f64, mu: f64) -> Result<DensityMatrix> {
    let p = pauli_weights(depol_memory(nu, mu));
    let mut out = ComplexMatrix::zeros(4);
    for ((k, l), sigma) in pauli_products() {
        let term = &(&sigma * rho0.matrix()) * &sigma;
        out = &out + &term.scale_real(p[k] * p[l]);
    }
    DensityMatrix::new(out)
}

/// Closed-form evolved X-state: diagonal ϑ± = (1 ± r₃Υ²)/4 and anti-diagonal
/// w± = (r₁ ± r₂)Υ²/4, i.e. the Bell-diagonal state with correlations r_iΥ².
pub fn depol_state_closed(nu: f64, p: &DepolarizingParams) -> DensityMatrix {
    let u2 = depol_memory(nu, p.mu).powi(2);
    let [r1, r2, r3] = p.r.as_array();
    let theta_plus = (1.0 + r3 * u2) / 4.0;
    let theta_minus = (1.0 - r3 * u2) / 4.0;
    let w_plus = (r1 + r2) * u2 / 4.0;
    let w_minus = (r1 - r2) * u2 / 4.0;
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = c(theta_plus);
    m[(3, 3)] = c(theta_plus);
    m[(1, 1)] = c(theta_minus);
    m[(2, 2)] = c(theta_minus);
    m[(0, 3)] = c(w_minus);
    m[(3, 0)] = c(w_minus);
    m[(1, 2)] = c(w_plus);
    m[(2, 1)] = c(w_plus);
    DensityMatrix::from_trusted(m)
}

/// Diagonal of S for the evolved X-state in closed form:
/// S_ii = (1 − Θ)/(1 − r_i²Υ⁴) with Θ = (r₁² + r₂² + r₃²)Υ⁴ + 2r₁r₂r₃Υ⁶.
/// S is diagonal for Bell-diagonal states. Returns `None` on a pure
/// state (some |r_i|Υ² = 1), where the expression is 0/0.
pub fn depol_s_closed(nu: f64, p: &DepolarizingParams) -> Option<[f64; 3]> {
    let u2 = depol_memory(nu, p.mu).powi(2);
    let c = p.r.as_array().map(|r| r * u2);
    let theta = c.iter().map(|x| x * x).sum::<f64>() + 2.0 * c[0] * c[1] * c[2];
    let mut out = [0.0; 3];
    for (o, ci) in out.iter_mut().zip(c) {
        let den = 1.0 - ci * ci;
        if den.abs() < 1e-14 {
            return None;
        }
        *o = (1.0 - theta) / den;
    }
    Some(out)
}

/// 1 − max{S₁₁, S₂₂, S₃₃} from [`depol_s_closed`]; for |r₁| ≥ |r₂| the
/// maximum is S₁₁ or S₃₃.
pub fn depol_lqfi_closed(nu: f64, p: &DepolarizingParams) -> Option<f64> {
    depol_s_closed(nu, p).map(|s| 1.0 - s[0].max(s[1]).max(s[2]))
}
