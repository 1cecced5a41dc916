//! Effective decay rates under the three measurement schemes -- pulsed
//! (period tau), continuous (response 1/Gamma), and Rabi (response 1/K) --
//! and the sweep curves over the measurement control parameter.

use crate::error::{Result, ZenoError};
use crate::resolvent::survival_probability;
use crate::spectral::{FormFactor, SystemParams};

/// A single measurement configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementScheme {
    /// Instantaneous projective checks every `tau` (> 0).
    Pulsed { tau: f64 },
    /// Irreversible monitoring of the decay product with response time
    /// 1/Gamma (Gamma > 0).
    Continuous { big_gamma: f64 },
    /// Reversible Rabi coupling of the decay product to an auxiliary
    /// level with frequency `k` (>= 0; 0 is the no-measurement limit).
    Rabi { k: f64 },
}

/// Scheme family for sweeps, without a control value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeFamily {
    Pulsed,
    Continuous,
    Rabi,
}

impl SchemeFamily {
    /// Fig.-3 abscissa convention: tau, 4/Gamma, or 1/K. A zero Rabi
    /// control maps to +infinity (the no-measurement end of the axis).
    pub fn abscissa(self, control: f64) -> f64 {
        match self {
            SchemeFamily::Pulsed => control,
            SchemeFamily::Continuous => 4.0 / control,
            SchemeFamily::Rabi => {
                if control == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / control
                }
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SchemeFamily::Pulsed => "pulsed",
            SchemeFamily::Continuous => "continuous",
            SchemeFamily::Rabi => "rabi",
        }
    }

    /// Abscissa column label for serialized curves.
    pub fn abscissa_label(self) -> &'static str {
        match self {
            SchemeFamily::Pulsed => "tau",
            SchemeFamily::Continuous => "4/Gamma",
            SchemeFamily::Rabi => "1/K",
        }
    }
}

/// Relative tolerance separating genuine QZE/IZE crossings from roundoff.
pub const REGIME_EPSILON: f64 = 1e-9;

/// Decay regime relative to the natural golden-rule rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// gamma_eff < gamma: measurement hinders decay.
    Qze,
    /// gamma_eff > gamma: measurement accelerates decay.
    Ize,
    /// gamma_eff = gamma within tolerance.
    Natural,
}

impl Regime {
    pub fn tag(gamma_eff: f64, gamma: f64) -> Regime {
        if gamma_eff < gamma * (1.0 - REGIME_EPSILON) {
            Regime::Qze
        } else if gamma_eff > gamma * (1.0 + REGIME_EPSILON) {
            Regime::Ize
        } else {
            Regime::Natural
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Qze => "QZE",
            Regime::Ize => "IZE",
            Regime::Natural => "NATURAL",
        }
    }
}

/// One sweep point: raw control value, converted abscissa, the effective
/// rate, its ratio to the natural rate, and the regime tag. `clamped`
/// marks points where the survival probability underflowed and was
/// clamped to 1e-300 before taking the log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub control: f64,
    pub abscissa: f64,
    pub gamma_eff: f64,
    pub ratio: f64,
    pub regime: Regime,
    pub clamped: bool,
}

/// Effective decay rate sampled against a measurement control parameter,
/// stored in order of strictly increasing abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRateCurve {
    pub family: SchemeFamily,
    pub points: Vec<SweepPoint>,
}

/// gamma_eff(tau) = -log P(tau) / tau for pulsed measurements.
pub fn effective_rate_pulsed(params: &SystemParams, tau: f64) -> Result<f64> {
    let (rate, clamped) = pulsed_rate_clamped(params, tau)?;
    if clamped {
        return Err(ZenoError::InfiniteRate { tau });
    }
    Ok(rate)
}

/// Pulsed rate with the deep-IZE clamp: P below 1e-300 is clamped before
/// the log and reported through the flag instead of an error.
fn pulsed_rate_clamped(params: &SystemParams, tau: f64) -> Result<(f64, bool)> {
    if tau <= 0.0 || tau.is_nan() {
        return Err(ZenoError::Domain(format!(
            "measurement period must be positive, got {tau}"
        )));
    }
    let p = survival_probability(params, tau)?;
    let clamped = p < 1e-300;
    let rate = -(p.max(1e-300)).ln() / tau;
    Ok((rate.max(0.0), clamped))
}

/// Survival after n pulsed measurements: P(tau)^n.
pub fn survival_after_n(params: &SystemParams, tau: f64, n: u32) -> Result<f64> {
    if tau <= 0.0 || tau.is_nan() {
        return Err(ZenoError::Domain(format!(
            "measurement period must be positive, got {tau}"
        )));
    }
    if n < 1 {
        return Err(ZenoError::Domain("need at least one measurement".into()));
    }
    Ok(survival_probability(params, tau)?.powi(n as i32))
}

/// gamma_eff(Gamma) for continuous monitoring: the Lorentzian-kernel
/// average int kappa(omega) Gamma / ((omega - omega_a)^2 + Gamma^2/4)
/// d omega.
///
/// For the Lorentzian form factor the two Lorentzians convolve in closed
/// form, 2 lambda^2 (Lambda + Gamma/2) / (omega_a^2 + (Lambda + Gamma/2)^2);
/// tabulated data is integrated exactly segment by segment.
pub fn effective_rate_continuous(params: &SystemParams, big_gamma: f64) -> Result<f64> {
    if big_gamma <= 0.0 || !big_gamma.is_finite() {
        return Err(ZenoError::Domain(format!(
            "detector decay rate must be positive and finite, got {big_gamma}"
        )));
    }
    match &params.form_factor {
        FormFactor::Lorentzian { lambda, big_lambda } => {
            let u = big_lambda + 0.5 * big_gamma;
            Ok(2.0 * lambda * lambda * u / (params.omega_a * params.omega_a + u * u))
        }
        FormFactor::Tabulated { samples } => {
            let wa = params.omega_a;
            let g = 0.5 * big_gamma;
            let mut sum = 0.0;
            for pair in samples.windows(2) {
                let (x0, k0) = pair[0];
                let (x1, k1) = pair[1];
                let b = (k1 - k0) / (x1 - x0);
                let d = k0 + b * (wa - x0);
                let (v0, v1) = (x0 - wa, x1 - wa);
                sum += d / g * ((v1 / g).atan() - (v0 / g).atan())
                    + 0.5 * b * ((v1 * v1 + g * g).ln() - (v0 * v0 + g * g).ln());
            }
            let rate = big_gamma * sum;
            if !rate.is_finite() {
                return Err(ZenoError::NumericalFailure(
                    "continuous-rate quadrature produced a non-finite value".into(),
                ));
            }
            Ok(rate.max(0.0))
        }
    }
}

/// gamma_eff(K) for Rabi monitoring: pi [kappa(omega_a + K) +
/// kappa(omega_a - K)], symmetric under K -> -K.
pub fn effective_rate_rabi(params: &SystemParams, k: f64) -> Result<f64> {
    if k < 0.0 || !k.is_finite() {
        return Err(ZenoError::Domain(format!(
            "Rabi frequency must be nonnegative and finite, got {k}"
        )));
    }
    let up = params.kappa(params.omega_a + k)?;
    let down = params.kappa(params.omega_a - k)?;
    Ok(std::f64::consts::PI * (up + down))
}

/// Evaluate a whole decay-rate curve over a strictly increasing grid of
/// control values in the scheme's domain. Points are assembled in order
/// of strictly increasing Fig.-3 abscissa, which reverses the grid for
/// the continuous and Rabi families.
pub fn sweep(params: &SystemParams, family: SchemeFamily, grid: &[f64]) -> Result<DecayRateCurve> {
    if grid.is_empty() {
        return Err(ZenoError::Domain("sweep grid must be nonempty".into()));
    }
    if grid.windows(2).any(|p| p[0].is_nan() || p[1].is_nan() || p[0] >= p[1]) {
        return Err(ZenoError::Domain(
            "sweep grid must be strictly increasing".into(),
        ));
    }
    let gamma = params.golden_rule_gamma()?;
    if gamma <= 0.0 || gamma.is_nan() {
        return Err(ZenoError::Domain(
            "sweep needs a positive natural decay rate".into(),
        ));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &control in grid {
        let wrap = |e: ZenoError| ZenoError::SweepPoint {
            control,
            source: Box::new(e),
        };
        let (gamma_eff, clamped) = match family {
            SchemeFamily::Pulsed => pulsed_rate_clamped(params, control).map_err(wrap)?,
            SchemeFamily::Continuous => {
                (effective_rate_continuous(params, control).map_err(wrap)?, false)
            }
            SchemeFamily::Rabi => (effective_rate_rabi(params, control).map_err(wrap)?, false),
        };
        points.push(SweepPoint {
            control,
            abscissa: family.abscissa(control),
            gamma_eff,
            ratio: gamma_eff / gamma,
            regime: Regime::tag(gamma_eff, gamma),
            clamped,
        });
    }
    match family {
        SchemeFamily::Pulsed => {}
        SchemeFamily::Continuous | SchemeFamily::Rabi => points.reverse(),
    }
    Ok(DecayRateCurve { family, points })
}
