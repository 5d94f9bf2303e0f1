//! Amplitude damping of qubit B into a zero-temperature Lorentzian reservoir.
//!
//! The excited-state amplitude R(t) solves the memory equation
//!
//! ```text
//! Ṙ(t) = −∫₀ᵗ g(t − t₁) R(t₁) dt₁,   R(0) = 1,
//! g(τ) = (γ₀λ/2) e^{−(λ − iΔ)τ},
//! ```
//!
//! whose solution is
//!
//! ```text
//! R(t) = e^{−(λ−iΔ)t/2} [cosh(Ωt/2) + ((λ−iΔ)/Ω) sinh(Ωt/2)],
//! Ω = √((λ − iΔ)² − 2γ₀λ).
//! ```
//!
//! [`ad_amplitude_oracle`] integrates the memory equation directly and is
//! the check on the closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;

const DEGENERATE_OMEGA: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeDampingParams {
    /// Lorentzian width λ.
    pub lambda: f64,
    /// Coupling strength γ₀.
    pub gamma0: f64,
    /// Detuning Δ = ω₀ − ω_c.
    pub delta: f64,
}

impl AmplitudeDampingParams {
    pub fn new(lambda: f64, gamma0: f64, delta: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
        }
        if !(gamma0 > 0.0 && gamma0.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma0 must be > 0, got {gamma0}")));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParameter("delta must be finite".into()));
        }
        Ok(Self {
            lambda,
            gamma0,
            delta,
        })
    }

    /// λ − iΔ.
    fn damping(&self) -> Complex64 {
        Complex64::new(self.lambda, -self.delta)
    }

    /// Ω = √((λ − iΔ)² − 2γ₀λ). Either branch gives the same R(t).
    pub fn omega(&self) -> Complex64 {
        let a = self.damping();
        (a * a - 2.0 * self.gamma0 * self.lambda).sqrt()
    }

    /// Largest rate in the problem; sets the oracle's step bound.
    pub fn max_rate(&self) -> f64 {
        self.lambda.max(self.gamma0).max(self.delta.abs())
    }
}

/// Closed-form R(t).
pub fn ad_amplitude(t: f64, p: &AmplitudeDampingParams) -> Complex64 {
    let a = p.damping();
    let omega = p.omega();
    if omega.norm() < DEGENERATE_OMEGA {
        return (-a * t / 2.0).exp() * (1.0 + a * t / 2.0);
    }
    // ½(1 + a/Ω)e^{(Ω−a)t/2} + ½(1 − a/Ω)e^{−(Ω+a)t/2}: same as the cosh/sinh
    // form but without overflow for large real Ωt.
    let ratio = a / omega;
    0.5 * (1.0 + ratio) * ((omega - a) * t / 2.0).exp()
        + 0.5 * (1.0 - ratio) * (-(omega + a) * t / 2.0).exp()
}

/// R(t) with the sinh coefficient (λ − iΔ)/2 in place of (λ − iΔ)/Ω.
/// Only agrees with [`ad_amplitude`] when Ω = 2; kept as a negative control
/// for the memory-equation oracle.
pub fn ad_amplitude_half_coefficient(t: f64, p: &AmplitudeDampingParams) -> Complex64 {
    let a = p.damping();
    let omega = p.omega();
    let half = omega * t / 2.0;
    (-a * t / 2.0).exp() * (half.cosh() + a / 2.0 * half.sinh())
}

/// Reservoir correlation function g(τ) of the Lorentzian spectral density.
pub fn lorentzian_kernel(tau: f64, p: &AmplitudeDampingParams) -> Complex64 {
    0.5 * p.gamma0 * p.lambda * (-p.damping() * tau).exp()
}

/// A memory kernel g(τ) for Ṙ = −∫₀ᵗ g(t − s)R(s) ds.
pub trait MemoryKernel {
    fn eval(&self, tau: f64) -> Complex64;

    /// c such that g(τ + dt) = c·g(τ) for all τ, if the kernel is a single
    /// exponential. Enables an O(1) history update.
    fn shift_factor(&self, _dt: f64) -> Option<Complex64> {
        None
    }
}

/// g(τ) = (γ₀λ/2) e^{−(λ − iΔ)τ}.
#[derive(Debug, Clone, Copy)]
pub struct LorentzianKernel(pub AmplitudeDampingParams);

impl MemoryKernel for LorentzianKernel {
    fn eval(&self, tau: f64) -> Complex64 {
        lorentzian_kernel(tau, &self.0)
    }

    fn shift_factor(&self, dt: f64) -> Option<Complex64> {
        Some((-self.0.damping() * dt).exp())
    }
}

/// Uniformly sampled complex trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSamples {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl AmplitudeSamples {
    /// max_n |values[n] − f(times[n])|.
    pub fn max_deviation(&self, f: impl Fn(f64) -> Complex64) -> f64 {
        self.times
            .iter()
            .zip(&self.values)
            .map(|(&t, &v)| (v - f(t)).norm())
            .fold(0.0, f64::max)
    }
}

/// Solves Ṙ(t) = −∫₀ᵗ g(t − s)R(s) ds, R(0) = 1, on a uniform grid.
///
/// The history integral uses the product trapezoid rule over all past grid
/// points; each step is an Euler predictor followed by one trapezoidal
/// corrector pass. For kernels exposing a shift factor the trapezoid sum is
/// updated recursively, otherwise it is rebuilt at each step in O(n).
pub fn solve_memory_equation<K: MemoryKernel>(
    kernel: &K,
    t_max: f64,
    dt: f64,
) -> AmplitudeSamples {
    let steps = (t_max / dt).ceil().max(0.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    times.push(0.0);
    values.push(Complex64::new(1.0, 0.0));

    let g0 = kernel.eval(0.0);
    let g_dt = kernel.eval(dt);
    let shift = kernel.shift_factor(dt);

    // dt·[½g(t_n)R_0 + Σ_{j=1}^{n−1} g(t_n − t_j)R_j]; the endpoint term
    // ½dt·g(0)R_n is added separately so the corrector can vary R_n.
    let mut lagged = Complex64::new(0.0, 0.0);
    let mut derivative = Complex64::new(0.0, 0.0); // Ṙ(0) = 0

    for n in 0..steps {
        let r_n = values[n];
        let next_lagged = match shift {
            Some(c) => {
                let w = if n == 0 { 0.5 } else { 1.0 };
                c * lagged + dt * w * g_dt * r_n
            }
            None => {
                let t_next = (n + 1) as f64 * dt;
                let mut acc = 0.5 * kernel.eval(t_next) * values[0];
                for (j, &r_j) in values.iter().enumerate().skip(1) {
                    acc += kernel.eval(t_next - j as f64 * dt) * r_j;
                }
                dt * acc
            }
        };
        let history = |r_next: Complex64| next_lagged + 0.5 * dt * g0 * r_next;

        let predicted = r_n + dt * derivative;
        let d_pred = -history(predicted);
        let corrected = r_n + 0.5 * dt * (derivative + d_pred);

        derivative = -history(corrected);
        lagged = next_lagged;
        values.push(corrected);
        times.push((n + 1) as f64 * dt);
    }
    AmplitudeSamples { times, values }
}

/// Direct numerical solution of the memory equation for the Lorentzian
/// reservoir. Requires dt ≤ 1e-3 / max(λ, γ₀, |Δ|).
pub fn ad_amplitude_oracle(
    t_max: f64,
    p: &AmplitudeDampingParams,
    dt: f64,
) -> Result<AmplitudeSamples> {
    let bound = 1e-3 / p.max_rate();
    if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { step: dt, bound });
    }
    Ok(solve_memory_equation(&LorentzianKernel(*p), t_max, dt))
}

/// Bell state after amplitude damping of qubit B:
///
/// ```text
/// ½ [[1, 0, 0,        R*  ],
///    [0, 0, 0,        0   ],
///    [0, 0, 1 − |R|², 0   ],
///    [R, 0, 0,        |R|²]]
/// ```
pub fn ad_state_from_amplitude(r: Complex64) -> DensityMatrix {
    let pop = r.norm_sqr();
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(0.5, 0.0);
    m[(2, 2)] = Complex64::new(0.5 * (1.0 - pop), 0.0);
    m[(3, 3)] = Complex64::new(0.5 * pop, 0.0);
    m[(0, 3)] = 0.5 * r.conj();
    m[(3, 0)] = 0.5 * r;
    DensityMatrix::from_trusted(m)
}

pub fn ad_state(t: f64, p: &AmplitudeDampingParams) -> DensityMatrix {
    ad_state_from_amplitude(ad_amplitude(t, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(lambda: f64, delta: f64) -> AmplitudeDampingParams {
        AmplitudeDampingParams::new(lambda, 1.0, delta).unwrap()
    }

    #[test]
    fn amplitude_starts_at_one_with_zero_slope() {
        for (l, d) in [(0.3, 0.0), (2.0, 0.0), (5.0, 0.0), (1.0, 0.5)] {
            let p = params(l, d);
            assert!((ad_amplitude(0.0, &p) - 1.0).norm() < 1e-15);
            let h = 1e-5;
            let slope = (ad_amplitude(h, &p) - ad_amplitude(0.0, &p)) / h;
            // R(h) − 1 = O(h²) since Ṙ(0) = 0
            assert!(slope.norm() < 1e-4, "λ = {l}: slope {slope}");
        }
    }

    #[test]
    fn degenerate_root_limit() {
        let p = params(2.0, 0.0);
        assert!(p.omega().norm() < 1e-12);
        for t in [0.0f64, 0.5, 1.0, 3.0, 10.0] {
            let exact = (-t).exp() * (1.0 + t);
            assert!((ad_amplitude(t, &p) - exact).norm() < 1e-14);
        }
        // nearby non-degenerate parameters agree with the limit
        let q = params(2.0 + 1e-7, 0.0);
        assert!((ad_amplitude(1.0, &q) - ad_amplitude(1.0, &p)).norm() < 1e-6);
    }

    #[test]
    fn weak_coupling_amplitude_has_zeros_and_revivals() {
        let p = params(0.3, 0.0);
        let samples: Vec<f64> = (0..=2500).map(|i| ad_amplitude(i as f64 * 0.01, &p).re).collect();
        let sign_changes = samples.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
        assert!(sign_changes >= 2);
        let abs: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
        assert!(abs.windows(2).any(|w| w[1] > w[0]));
    }

    #[test]
    fn amplitude_is_bounded() {
        for (l, d) in [(0.3, 0.0), (2.0, 0.0), (5.0, 0.0), (1.0, 0.5), (0.1, -2.0)] {
            let p = params(l, d);
            for i in 0..=500 {
                assert!(ad_amplitude(i as f64 * 0.05, &p).norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn oracle_matches_degenerate_closed_form() {
        let p = params(2.0, 0.0);
        let dt = 1e-3 / p.max_rate();
        let sol = ad_amplitude_oracle(1.0, &p, dt).unwrap();
        assert_eq!(sol.values[0], Complex64::new(1.0, 0.0));
        let last = *sol.values.last().unwrap();
        assert!((sol.times.last().unwrap() - 1.0).abs() < 1e-12);
        assert!((last.re - 0.735_758_9).abs() < 1e-5, "{last}");
    }

    #[test]
    fn oracle_strong_damping_is_monotone() {
        let p = params(5.0, 0.0);
        let sol = ad_amplitude_oracle(10.0, &p, 1e-3 / 5.0).unwrap();
        assert!(sol.values.windows(2).all(|w| w[1].norm() <= w[0].norm() + 1e-15));
    }

    #[test]
    fn recursive_and_direct_history_agree() {
        struct Plain(AmplitudeDampingParams);
        impl MemoryKernel for Plain {
            fn eval(&self, tau: f64) -> Complex64 {
                lorentzian_kernel(tau, &self.0)
            }
        }
        let p = params(0.7, 0.3);
        let fast = solve_memory_equation(&LorentzianKernel(p), 2.0, 1e-3);
        let slow = solve_memory_equation(&Plain(p), 2.0, 1e-3);
        assert_eq!(fast.times.len(), slow.times.len());
        for (a, b) in fast.values.iter().zip(&slow.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_rejects_large_step() {
        let p = params(5.0, 0.0);
        assert!(matches!(
            ad_amplitude_oracle(1.0, &p, 1e-3),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn state_examples() {
        let p = params(0.3, 0.0);
        let rho = ad_state(0.0, &p);
        assert!(rho.matrix().max_abs_diff(crate::states::bell_phi_plus().matrix()) < 1e-15);

        let rho = ad_state_from_amplitude(Complex64::new(0.5f64.sqrt(), 0.0));
        let diag: Vec<f64> = (0..4).map(|i| rho.matrix()[(i, i)].re).collect();
        let expected = [0.5, 0.0, 0.25, 0.25];
        for (d, e) in diag.iter().zip(expected) {
            assert!((d - e).abs() < 1e-15);
        }
        for i in 0..40 {
            let rho = ad_state(i as f64 * 0.6, &params(1.0, 0.5));
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
            DensityMatrix::new(rho.matrix().clone()).unwrap();
        }
    }
}
