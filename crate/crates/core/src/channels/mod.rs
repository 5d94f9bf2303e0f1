//! Time-evolved two-qubit states under local noise on qubit B.
//!
//! All three families are given in solved form; nothing here integrates a
//! master equation except the amplitude-damping oracle.

pub mod amplitude;
pub mod dephasing;
pub mod depolarizing;

pub use amplitude::{
    ad_amplitude, ad_amplitude_half_coefficient, ad_amplitude_oracle, ad_state,
    AmplitudeDampingParams, AmplitudeSamples,
};
pub use dephasing::{
    dephasing_coherence, dephasing_decay_integral, dephasing_rate, dephasing_state,
    DephasingParams,
};
pub use depolarizing::{
    depol_apply, depol_apply_pauli_sum, depol_apply_with_memory, depol_lqfi_closed,
    depol_memory, depol_memory_overdamped, depol_probs, depol_s_closed, depol_state_closed,
    DepolarizingParams,
};

use crate::error::{Error, Result};
use crate::nonmarkov::Window;
use crate::states::{bell_phi_plus, x_state, DensityMatrix};

/// A channel family with its parameters. The probe state is implied: the
/// Bell state Φ⁺ for dephasing and amplitude damping, the X-state built from
/// `r` for depolarizing noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    Dephasing(DephasingParams),
    AmplitudeDamping(AmplitudeDampingParams),
    Depolarizing(DepolarizingParams),
}

impl ChannelSpec {
    pub fn initial_state(&self) -> DensityMatrix {
        match self {
            ChannelSpec::Dephasing(_) | ChannelSpec::AmplitudeDamping(_) => bell_phi_plus(),
            ChannelSpec::Depolarizing(p) => {
                x_state(&p.r).expect("DepolarizingParams validates r")
            }
        }
    }

    /// Default observation window: 30/ω_c for dephasing, 25/γ₀ for
    /// amplitude damping and ν ∈ [0, 10] for depolarizing noise. The
    /// envelopes have decayed far enough by then that the truncated tail
    /// cannot add a measurable increase.
    pub fn default_window(&self) -> Window {
        let end = match self {
            ChannelSpec::Dephasing(p) => 30.0 / p.omega_c(),
            ChannelSpec::AmplitudeDamping(p) => 25.0 / p.gamma0,
            ChannelSpec::Depolarizing(_) => 10.0,
        };
        Window::new(0.0, end).expect("positive window")
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Dephasing(_) => "dephasing",
            ChannelSpec::AmplitudeDamping(_) => "amplitude",
            ChannelSpec::Depolarizing(_) => "depolarizing",
        }
    }
}

/// ρ^{AB}(t) for the given channel. For depolarizing noise `t` is the
/// dimensionless time ν.
pub fn evolve(spec: &ChannelSpec, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    match spec {
        ChannelSpec::Dephasing(p) => dephasing_state(t, p),
        ChannelSpec::AmplitudeDamping(p) => Ok(ad_state(t, p)),
        ChannelSpec::Depolarizing(p) => Ok(depol_state_closed(t, p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::CorrelationTriple;

    #[test]
    fn evolve_dispatch() {
        let deph = ChannelSpec::Dephasing(DephasingParams::new(1.0, 1.0).unwrap());
        let rho = evolve(&deph, 0.0).unwrap();
        assert!(rho.matrix().max_abs_diff(bell_phi_plus().matrix()) < 1e-15);

        let amp = ChannelSpec::AmplitudeDamping(AmplitudeDampingParams::new(2.0, 1.0, 0.0).unwrap());
        let rho = evolve(&amp, 1.0).unwrap();
        let pop = 2.0 * rho.matrix()[(3, 3)].re;
        assert!((pop - (2.0 / std::f64::consts::E).powi(2)).abs() < 1e-12);
        assert!((pop - 0.5413).abs() < 1e-4);

        let r = CorrelationTriple::new(0.6, -0.4, 0.2).unwrap();
        let dep = ChannelSpec::Depolarizing(DepolarizingParams::new(3.0, r).unwrap());
        let rho = evolve(&dep, 0.0).unwrap();
        assert!(rho.matrix().max_abs_diff(x_state(&r).unwrap().matrix()) < 1e-15);
        assert_eq!(dep.initial_state(), x_state(&r).unwrap());

        assert!(evolve(&deph, -1.0).is_err());
    }
}
