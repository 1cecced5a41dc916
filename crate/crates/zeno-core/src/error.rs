//! Error taxonomy shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, ZenoError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ZenoError {
    /// An argument is outside the operation's domain (negative time,
    /// zero mode count, non-positive measurement period, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A frequency lies outside a tabulated form factor's sample range.
    #[error("omega = {omega} outside tabulated range [{min}, {max}]")]
    OutOfDomain { omega: f64, min: f64, max: f64 },

    /// An iterative scheme did not reach its tolerance.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The interaction carries no weight, so no Zeno time exists.
    #[error("degenerate system: integral of the form factor is zero or not finite")]
    DegenerateSystem,

    /// Second-sheet continuation is only available in closed form.
    #[error("second-sheet continuation is unsupported for tabulated form factors")]
    UnsupportedContinuation,

    /// The second-sheet self-energy has a pole at E = -i*Lambda.
    #[error("self-energy singularity at E = -i*Lambda")]
    SelfEnergySingularity,

    /// The located resolvent root does not describe a decaying state.
    #[error("model regime error: pole with non-negative imaginary part at nonzero coupling")]
    ModelRegime,

    /// The operation requires the Lorentzian closed forms.
    #[error("operation requires a Lorentzian form factor")]
    LorentzianRequired,

    /// The survival probability underflowed to zero, so the effective
    /// rate is unbounded.
    #[error("infinite effective rate: survival probability underflowed at tau = {tau}")]
    InfiniteRate { tau: f64 },

    /// No crossing of the natural decay rate inside the search window.
    #[error("no QZE/IZE transition found: {0}")]
    NoTransition(String),

    /// Requested evolution times exceed the discretized bath's trusted
    /// horizon.
    #[error("requested time {requested} beyond recurrence guard {max_trusted}")]
    RecurrenceGuard { requested: f64, max_trusted: f64 },

    /// A sweep point failed; carries the offending control value.
    #[error("sweep failed at control value {control}: {source}")]
    SweepPoint {
        control: f64,
        #[source]
        source: Box<ZenoError>,
    },

    /// Malformed tabulated form-factor data (CSV or constructor input).
    #[error("invalid form factor data: {0}")]
    InvalidFormFactor(String),
}
