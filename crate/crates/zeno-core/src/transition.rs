//! QZE/IZE transition points: the measurement response scale at which the
//! effective decay rate equals the natural golden-rule rate.

use crate::error::{Result, ZenoError};
use crate::measurement::{
    effective_rate_continuous, effective_rate_pulsed, effective_rate_rabi, MeasurementScheme,
    Regime, SchemeFamily,
};
use crate::resolvent::survival_probability;
use crate::spectral::{FormFactor, SystemParams};

/// A located crossing gamma_eff(star) = gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionResult {
    pub family: SchemeFamily,
    /// Control value at the crossing: tau*, Gamma*, or K*.
    pub star_value: f64,
    /// |gamma_eff(star) - gamma|.
    pub residual: f64,
    /// First-order prediction: tau_Z^2 gamma for pulsed, 4/(tau_Z^2 gamma)
    /// for continuous, the scan-bracket midpoint for Rabi.
    pub estimate: f64,
}

fn positive_gamma(params: &SystemParams) -> Result<f64> {
    let gamma = params.golden_rule_gamma()?;
    if gamma <= 0.0 || gamma.is_nan() {
        return Err(ZenoError::Domain(
            "transition search needs a positive natural decay rate".into(),
        ));
    }
    Ok(gamma)
}

fn require_lorentzian(params: &SystemParams) -> Result<(f64, f64)> {
    match params.form_factor {
        FormFactor::Lorentzian { lambda, big_lambda } => Ok((lambda, big_lambda)),
        FormFactor::Tabulated { .. } => Err(ZenoError::LorentzianRequired),
    }
}

/// Smallest tau > 0 with P(tau) = e^{-gamma tau}.
///
/// Brackets by doubling from the seed tau_0 = tau_Z^2 gamma, starting at
/// tau_0/64 to exclude the trivial root at tau = 0, then bisects to
/// relative 1e-10. No sign change up to 100/gamma means the survival
/// probability never drops below the natural exponential (the paper ties
/// existence of a crossing to Z < 1).
pub fn find_transition_pulsed(params: &SystemParams) -> Result<TransitionResult> {
    require_lorentzian(params)?;
    let gamma = positive_gamma(params)?;
    let tz = params.zeno_time()?;
    let estimate = tz * tz * gamma;
    let f = |tau: f64| -> Result<f64> {
        Ok(survival_probability(params, tau)? - (-gamma * tau).exp())
    };

    let mut lo = estimate / 64.0;
    // expand downward if even the small end starts on the wrong side
    let mut f_lo = f(lo)?;
    let mut guard = 0;
    while f_lo <= 0.0 && guard < 60 {
        lo /= 2.0;
        f_lo = f(lo)?;
        guard += 1;
    }
    if f_lo <= 0.0 {
        return Err(ZenoError::NoTransition(
            "survival probability starts below the natural exponential".into(),
        ));
    }
    // expand upward by doubling until the sign flips
    let limit = 100.0 / gamma;
    let mut hi = lo;
    let mut f_hi = f_lo;
    while f_hi > 0.0 {
        let next = hi * 2.0;
        if next > limit {
            return Err(ZenoError::NoTransition(format!(
                "no sign change of P(tau) - exp(-gamma tau) up to tau = {limit}"
            )));
        }
        hi = next;
        f_hi = f(hi)?;
    }
    let mut a = hi / 2.0;
    let mut b = hi;
    while b - a > 1e-10 * b {
        let mid = 0.5 * (a + b);
        if f(mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let star = 0.5 * (a + b);
    let residual = (effective_rate_pulsed(params, star)? - gamma).abs();
    Ok(TransitionResult {
        family: SchemeFamily::Pulsed,
        star_value: star,
        residual,
        estimate,
    })
}

/// Gamma* with gamma_eff(Gamma*) = gamma: closed form
/// 2 (omega_a^2 - Lambda^2)/Lambda, verified against bisection.
pub fn find_transition_continuous(params: &SystemParams) -> Result<TransitionResult> {
    let (_, big_lambda) = require_lorentzian(params)?;
    let gamma = positive_gamma(params)?;
    let wa = params.omega_a;
    if wa <= big_lambda {
        return Err(ZenoError::NoTransition(format!(
            "omega_a = {wa} <= Lambda = {big_lambda}: gamma_eff stays below gamma for all Gamma"
        )));
    }
    let star = 2.0 * (wa * wa - big_lambda * big_lambda) / big_lambda;
    // independent bisection on the same crossing
    let h = |g: f64| -> Result<f64> { Ok(effective_rate_continuous(params, g)? - gamma) };
    let (mut a, mut b) = (star / 2.0, star * 2.0);
    if h(a)? <= 0.0 || h(b)? >= 0.0 {
        return Err(ZenoError::NumericalFailure(
            "continuous transition bracket does not straddle the crossing".into(),
        ));
    }
    while b - a > 1e-12 * b {
        let mid = 0.5 * (a + b);
        if h(mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let bisected = 0.5 * (a + b);
    if (bisected - star).abs() > 1e-10 * star {
        return Err(ZenoError::NumericalFailure(format!(
            "closed-form Gamma* = {star} disagrees with bisection {bisected}"
        )));
    }
    let residual = (effective_rate_continuous(params, star)? - gamma).abs();
    let tz = params.zeno_time()?;
    Ok(TransitionResult {
        family: SchemeFamily::Continuous,
        star_value: star,
        residual,
        estimate: 4.0 / (tz * tz * gamma),
    })
}

/// Largest K* > 0 with gamma_eff(K*) = gamma, bisected inside a bracket
/// found by scanning K upward from omega_a until gamma_eff drops below
/// gamma.
pub fn find_transition_rabi(params: &SystemParams) -> Result<TransitionResult> {
    let (_, big_lambda) = require_lorentzian(params)?;
    let gamma = positive_gamma(params)?;
    let limit = 1e3 * params.omega_a.abs().max(big_lambda);
    let step = 0.5 * big_lambda;
    // phase 1: an accelerated point to anchor the bracket's lower edge
    let mut prev = params.omega_a.abs();
    while effective_rate_rabi(params, prev)? < gamma {
        prev += step;
        if prev > limit {
            return Err(ZenoError::NoTransition(format!(
                "gamma_eff(K) never exceeds gamma up to K = {limit}"
            )));
        }
    }
    // phase 2: keep scanning until the rate drops below gamma
    let mut k = prev;
    loop {
        if effective_rate_rabi(params, k)? < gamma {
            break;
        }
        prev = k;
        k += step;
        if k > limit {
            return Err(ZenoError::NoTransition(format!(
                "gamma_eff(K) never drops below gamma up to K = {limit}"
            )));
        }
    }
    let estimate = 0.5 * (prev + k);
    let (mut a, mut b) = (prev, k);
    while b - a > 1e-12 * b {
        let mid = 0.5 * (a + b);
        if effective_rate_rabi(params, mid)? >= gamma {
            a = mid;
        } else {
            b = mid;
        }
    }
    let star = 0.5 * (a + b);
    let residual = (effective_rate_rabi(params, star)? - gamma).abs();
    Ok(TransitionResult {
        family: SchemeFamily::Rabi,
        star_value: star,
        residual,
        estimate,
    })
}

/// Classify a single measurement configuration against the natural rate.
pub fn classify(params: &SystemParams, scheme: MeasurementScheme) -> Result<Regime> {
    let gamma = positive_gamma(params)?;
    let gamma_eff = match scheme {
        MeasurementScheme::Pulsed { tau } => effective_rate_pulsed(params, tau)?,
        MeasurementScheme::Continuous { big_gamma } => {
            effective_rate_continuous(params, big_gamma)?
        }
        MeasurementScheme::Rabi { k } => effective_rate_rabi(params, k)?,
    };
    Ok(Regime::tag(gamma_eff, gamma))
}
