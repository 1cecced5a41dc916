//! Self-energy on both Riemann sheets, the decay pole, and the survival
//! amplitude of the unstable state.
//!
//! For the Lorentzian form factor the resolvent denominator is the
//! quadratic (E - omega_a)(E + i Lambda) - lambda^2, so the "pole + cut"
//! split degenerates into exactly two poles and the survival amplitude
//! has the closed two-pole form. Newton root finding is kept as the
//! generic path and cross-checked against the quadratic in tests.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};
use crate::spectral::{FormFactor, SystemParams};

/// Complex energy argument of the resolvent.
pub type ComplexEnergy = Complex64;

/// Determination of the self-energy below the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    /// Boundary values reached from the physical (upper) half plane, with
    /// the Schwarz reflection below the axis.
    First,
    /// Analytic continuation from above across the cut, where the decay
    /// pole lives.
    Second,
}

/// Decay pole of the resolvent and the quantities derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleResult {
    /// Second-sheet root of E - omega_a - Sigma_II(E).
    pub e_pole: ComplexEnergy,
    /// Re E_pole - omega_a.
    pub delta_omega: f64,
    /// -2 Im E_pole.
    pub gamma_pole: f64,
    /// Wave-function renormalization |1 - Sigma_II'(E_pole)|^-2, the
    /// intercept of the asymptotic exponential.
    pub z_renorm: f64,
    /// Residue prefactor (E_pole + i Lambda)/(E_pole - E_other) of the
    /// amplitude's pole term; |residue|^2 == z_renorm.
    pub residue: Complex64,
}

/// Imaginary offset used for boundary values on the real axis (the i0+
/// prescription).
pub const REAL_AXIS_OFFSET: f64 = 1e-8;

fn lorentzian_params(params: &SystemParams) -> Result<(f64, f64)> {
    match params.form_factor {
        FormFactor::Lorentzian { lambda, big_lambda } => Ok((lambda, big_lambda)),
        FormFactor::Tabulated { .. } => Err(ZenoError::LorentzianRequired),
    }
}

/// Self-energy Sigma_a(E) = int kappa(omega)/(E - omega) d omega on the
/// requested sheet.
///
/// Lorentzian closed forms: lambda^2/(E + i Lambda) above the axis (and on
/// it, as the limit from above), lambda^2/(E - i Lambda) below on the
/// first sheet; the second sheet continues lambda^2/(E + i Lambda)
/// everywhere except its pole at E = -i Lambda. Tabulated form factors
/// support the first sheet only, integrating the interpolant exactly
/// segment by segment.
pub fn self_energy(params: &SystemParams, e: ComplexEnergy, sheet: Sheet) -> Result<Complex64> {
    if !e.re.is_finite() || !e.im.is_finite() {
        return Err(ZenoError::Domain(format!("energy must be finite, got {e}")));
    }
    match &params.form_factor {
        FormFactor::Lorentzian { lambda, big_lambda } => {
            let l2 = lambda * lambda;
            let il = Complex64::new(0.0, *big_lambda);
            match sheet {
                Sheet::First => {
                    if e.im >= 0.0 {
                        Ok(l2 / (e + il))
                    } else {
                        Ok(l2 / (e - il))
                    }
                }
                Sheet::Second => {
                    let den = e + il;
                    if den == Complex64::new(0.0, 0.0) {
                        return Err(ZenoError::SelfEnergySingularity);
                    }
                    Ok(l2 / den)
                }
            }
        }
        FormFactor::Tabulated { samples } => {
            if sheet == Sheet::Second {
                return Err(ZenoError::UnsupportedContinuation);
            }
            let e = if e.im == 0.0 {
                e + Complex64::new(0.0, REAL_AXIS_OFFSET)
            } else {
                e
            };
            // per-segment closed form for linear kappa over 1/(E - omega)
            let mut sum = Complex64::new(0.0, 0.0);
            for pair in samples.windows(2) {
                let (x0, k0) = pair[0];
                let (x1, k1) = pair[1];
                let b = (k1 - k0) / (x1 - x0);
                let c = Complex64::new(k0, 0.0) + b * (e - x0);
                sum += c * ((e - x0).ln() - (e - x1).ln()) - b * (x1 - x0);
            }
            Ok(sum)
        }
    }
}

/// Derivative of the second-sheet Lorentzian self-energy,
/// Sigma_II'(E) = -lambda^2/(E + i Lambda)^2.
fn self_energy_second_derivative(lambda: f64, big_lambda: f64, e: ComplexEnergy) -> Complex64 {
    let den = e + Complex64::new(0.0, big_lambda);
    -lambda * lambda / (den * den)
}

/// Both roots of (E - omega_a)(E + i Lambda) - lambda^2 = 0, ordered as
/// (decay pole, companion). The decay pole is the root closer to omega_a.
pub fn quadratic_poles(params: &SystemParams) -> Result<(ComplexEnergy, ComplexEnergy)> {
    let (lambda, big_lambda) = lorentzian_params(params)?;
    let wa = params.omega_a;
    let s = (Complex64::new(wa, big_lambda).powi(2) + 4.0 * lambda * lambda).sqrt();
    let b = Complex64::new(wa, -big_lambda);
    // larger-magnitude root by direct formula, companion via the product
    // of roots to avoid cancellation
    let r_big = if (b + s).norm_sqr() >= (b - s).norm_sqr() {
        (b + s) / 2.0
    } else {
        (b - s) / 2.0
    };
    let product = Complex64::new(-lambda * lambda, -wa * big_lambda);
    let r_small = product / r_big;
    if (r_big - wa).norm() <= (r_small - wa).norm() {
        Ok((r_big, r_small))
    } else {
        Ok((r_small, r_big))
    }
}

/// Residues of the two-pole survival amplitude: A(t) = R_a e^{-i E_a t}
/// + R_b e^{-i E_b t} with R = (E + i Lambda)/(E - E_other).
fn pole_residues(
    big_lambda: f64,
    e_a: ComplexEnergy,
    e_b: ComplexEnergy,
) -> (Complex64, Complex64) {
    let il = Complex64::new(0.0, big_lambda);
    ((e_a + il) / (e_a - e_b), (e_b + il) / (e_b - e_a))
}

/// Locate the decay pole by Newton iteration on the second sheet and
/// derive the shift, rate, renormalization, and residue.
///
/// The seed is omega_a + Sigma_II(omega_a + i 1e-8); convergence requires
/// |dE| < 1e-13 within 100 iterations.
pub fn find_pole(params: &SystemParams) -> Result<PoleResult> {
    let (lambda, big_lambda) = lorentzian_params(params)?;
    let wa = params.omega_a;
    let seed_arg = Complex64::new(wa, REAL_AXIS_OFFSET);
    let mut e = Complex64::new(wa, 0.0) + self_energy(params, seed_arg, Sheet::Second)?;
    let mut converged = false;
    for _ in 0..100 {
        let sigma = self_energy(params, e, Sheet::Second)?;
        let f = e - wa - sigma;
        let fp = Complex64::new(1.0, 0.0) - self_energy_second_derivative(lambda, big_lambda, e);
        let de = f / fp;
        e -= de;
        if de.norm() < 1e-13 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(ZenoError::NumericalFailure(
            "pole Newton iteration did not converge within 100 steps".into(),
        ));
    }
    if e.im >= 0.0 && lambda > 0.0 {
        return Err(ZenoError::ModelRegime);
    }
    // companion root from the exact root sum omega_a - i Lambda
    let e_other = Complex64::new(wa, -big_lambda) - e;
    let (residue, _) = pole_residues(big_lambda, e, e_other);
    let one_minus = Complex64::new(1.0, 0.0) - self_energy_second_derivative(lambda, big_lambda, e);
    let z_renorm = 1.0 / one_minus.norm_sqr();
    Ok(PoleResult {
        e_pole: e,
        delta_omega: e.re - wa,
        gamma_pole: -2.0 * e.im,
        z_renorm,
        residue,
    })
}

/// Survival amplitude A(t) = <a| e^{-iHt} |a> from the exact two-pole
/// formula of the Lorentzian model.
pub fn survival_amplitude(params: &SystemParams, t: f64) -> Result<Complex64> {
    if t < 0.0 || t.is_nan() {
        return Err(ZenoError::Domain(format!("time must be nonnegative, got {t}")));
    }
    let (_, big_lambda) = lorentzian_params(params)?;
    let (e_a, e_b) = quadratic_poles(params)?;
    let (r_a, r_b) = pole_residues(big_lambda, e_a, e_b);
    let phase = |e: ComplexEnergy| (Complex64::new(0.0, -t) * e).exp();
    Ok(r_a * phase(e_a) + r_b * phase(e_b))
}

/// Survival probability P(t) = |A(t)|^2, clamped to [0, 1] against
/// roundoff at the boundary.
pub fn survival_probability(params: &SystemParams, t: f64) -> Result<f64> {
    let p = survival_amplitude(params, t)?.norm_sqr();
    Ok(p.clamp(0.0, 1.0))
}
