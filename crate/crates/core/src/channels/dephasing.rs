use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quadrature::adaptive_simpson;
use crate::special::gamma;
use crate::states::DensityMatrix;

/// Relative tolerance for Λ(t) = ∫₀ᵗ γ.
pub const DECAY_INTEGRAL_RTOL: f64 = 1e-10;
pub const DECAY_INTEGRAL_MAX_EVALS: usize = 1_000_000;

/// Zero-temperature reservoir with spectral density (ω/ω_c)^s e^{−ω/ω_c}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingParams {
    s: f64,
    omega_c: f64,
    gamma_s: f64,
}

impl DephasingParams {
    pub fn new(s: f64, omega_c: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("ohmicity s must be > 0, got {s}")));
        }
        if !(omega_c > 0.0 && omega_c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cutoff omega_c must be > 0, got {omega_c}"
            )));
        }
        Ok(Self {
            s,
            omega_c,
            gamma_s: gamma(s),
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }
}

/// γ(t) = ω_c Γ(s) sin(s·arctan(ω_c t)) / (1 + (ω_c t)²)^{s/2}.
///
/// The factor s inside the sine is what makes the rate go negative for s > 2;
/// without it γ would be non-negative for every s.
pub fn dephasing_rate(t: f64, p: &DephasingParams) -> f64 {
    let x = p.omega_c * t;
    p.omega_c * p.gamma_s * (p.s * x.atan()).sin() / (1.0 + x * x).powf(0.5 * p.s)
}

/// Λ(t) = ∫₀ᵗ γ(v) dv by adaptive quadrature.
pub fn dephasing_decay_integral(t: f64, p: &DephasingParams) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    adaptive_simpson(
        |v| dephasing_rate(v, p),
        0.0,
        t,
        DECAY_INTEGRAL_RTOL,
        DECAY_INTEGRAL_MAX_EVALS,
    )
}

/// P(t) = exp(−2Λ(t)).
pub fn dephasing_coherence(t: f64, p: &DephasingParams) -> Result<f64> {
    Ok((-2.0 * dephasing_decay_integral(t, p)?).exp())
}

fn state_from_coherence(coherence: f64) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(0.5, 0.0);
    m[(3, 3)] = Complex64::new(0.5, 0.0);
    m[(0, 3)] = Complex64::new(0.5 * coherence, 0.0);
    m[(3, 0)] = Complex64::new(0.5 * coherence, 0.0);
    DensityMatrix::from_trusted(m)
}

/// Bell state after local dephasing of qubit B: populations ½ at |00⟩, |11⟩
/// and coherence P(t)/2.
pub fn dephasing_state(t: f64, p: &DephasingParams) -> Result<DensityMatrix> {
    Ok(state_from_coherence(dephasing_coherence(t, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Λ(t) in closed form, from Im ∫₀ᵗ ω_cΓ(s)(1 − iω_c v)^{−s} dv:
    /// Λ = Γ(s)/(1 − s)·[(1 + x²)^{(1−s)/2} cos((s − 1) arctan x) − 1], x = ω_c t,
    /// and ½ln(1 + x²) at s = 1.
    fn decay_integral_exact(t: f64, p: &DephasingParams) -> f64 {
        let x = p.omega_c() * t;
        let s = p.s();
        if (s - 1.0).abs() < 1e-12 {
            0.5 * (1.0 + x * x).ln()
        } else {
            gamma(s) / (1.0 - s)
                * ((1.0 + x * x).powf(0.5 * (1.0 - s)) * ((s - 1.0) * x.atan()).cos() - 1.0)
        }
    }

    #[test]
    fn rate_examples() {
        let p = DephasingParams::new(1.0, 1.0).unwrap();
        assert!((dephasing_rate(1.0, &p) - 0.5).abs() < 1e-15);
        for s in [0.5, 1.0, 4.0] {
            let p = DephasingParams::new(s, 2.0).unwrap();
            assert_eq!(dephasing_rate(0.0, &p), 0.0);
        }
        // s = 1 reduces to ω_c² t/(1 + ω_c² t²)
        let p = DephasingParams::new(1.0, 2.5).unwrap();
        for t in [0.1, 0.7, 3.0] {
            let x = 2.5 * t;
            assert!((dephasing_rate(t, &p) - 2.5 * x / (1.0 + x * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn super_ohmic_rate_turns_negative() {
        let p = DephasingParams::new(4.0, 1.0).unwrap();
        let min = (0..=2000)
            .map(|i| dephasing_rate(i as f64 * 0.01, &p))
            .fold(f64::INFINITY, f64::min);
        assert!(min < 0.0);
        // s ≤ 2 keeps s·arctan below π
        let p = DephasingParams::new(2.0, 1.0).unwrap();
        assert!((1..=2000).all(|i| dephasing_rate(i as f64 * 0.01, &p) > 0.0));
    }

    #[test]
    fn coherence_matches_analytic_integral() {
        let p = DephasingParams::new(1.0, 1.0).unwrap();
        assert_eq!(dephasing_coherence(0.0, &p).unwrap(), 1.0);
        assert!((dephasing_coherence(1.0, &p).unwrap() - 0.5).abs() < 1e-10);
        for i in 1..=40 {
            let t = i as f64 * 0.5;
            let exact = 1.0 / (1.0 + t * t);
            assert!((dephasing_coherence(t, &p).unwrap() - exact).abs() < 1e-9, "t = {t}");
        }
        for s in [0.5, 2.0, 3.5, 4.0, 6.0] {
            let p = DephasingParams::new(s, 1.3).unwrap();
            for i in 1..=30 {
                let t = i as f64;
                let exact = decay_integral_exact(t, &p);
                let got = dephasing_decay_integral(t, &p).unwrap();
                assert!(
                    (got - exact).abs() <= 1e-9 * exact.abs().max(1.0),
                    "s = {s}, t = {t}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn state_examples() {
        let p = DephasingParams::new(1.0, 1.0).unwrap();
        let rho = dephasing_state(0.0, &p).unwrap();
        assert!(rho.matrix().max_abs_diff(crate::states::bell_phi_plus().matrix()) < 1e-15);
        let rho = dephasing_state(1.0, &p).unwrap();
        assert!((rho.matrix()[(0, 3)].re - 0.25).abs() < 1e-10);
        DensityMatrix::new(rho.matrix().clone()).unwrap();
        // eigenvalues (1 ± P)/2, 0, 0
        let coh = dephasing_coherence(2.0, &p).unwrap();
        let eig = dephasing_state(2.0, &p).unwrap().eig().unwrap();
        let expected = [(1.0 + coh) / 2.0, (1.0 - coh) / 2.0, 0.0, 0.0];
        for (v, e) in eig.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(DephasingParams::new(0.0, 1.0).is_err());
        assert!(DephasingParams::new(1.0, -1.0).is_err());
        let p = DephasingParams::new(1.0, 1.0).unwrap();
        assert!(dephasing_decay_integral(-1.0, &p).is_err());
    }
}
