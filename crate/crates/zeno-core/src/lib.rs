//! Quantum Zeno / inverse-Zeno phenomenology of an unstable level coupled
//! to a structured continuum, at desk scale.
//!
//! The crate computes survival probabilities and effective decay rates of
//! an initial state |a> decaying into a continuum with a Lorentzian form
//! factor, under three kinds of monitoring:
//!
//! * pulsed projective measurements with period tau,
//! * continuous irreversible monitoring with response time 1/Gamma,
//! * reversible "Rabi" monitoring with response time 1/K,
//!
//! together with the transition points (tau*, Gamma*, K*) separating
//! hindered (QZE) from accelerated (IZE) decay, and a brute-force
//! discretized-bath oracle that validates the closed forms by exact
//! diagonalization of the single-excitation Hamiltonian.
//!
//! All quantities are dimensionless in units of the bandwidth Lambda.

pub mod error;
pub mod measurement;
pub mod oracle;
pub mod quad;
pub mod resolvent;
pub mod spectral;
pub mod transition;

pub use error::{Result, ZenoError};
pub use measurement::{
    effective_rate_continuous, effective_rate_pulsed, effective_rate_rabi, survival_after_n,
    sweep, DecayRateCurve, MeasurementScheme, Regime, SchemeFamily, SweepPoint, REGIME_EPSILON,
};
pub use oracle::{
    build_hamiltonian, discretize, empirical_gamma_eff, evolve_survival, evolve_survival_rk45,
    pulsed_run, DiscretizedBath, OracleHamiltonian, OracleKind,
};
pub use resolvent::{
    find_pole, quadratic_poles, self_energy, survival_amplitude, survival_probability,
    ComplexEnergy, PoleResult, Sheet,
};
pub use spectral::{FormFactor, SystemParams};
pub use transition::{
    classify, find_transition_continuous, find_transition_pulsed, find_transition_rabi,
    TransitionResult,
};
