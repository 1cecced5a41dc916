//! The unstable system and its form factor: kappa_a(omega), the golden-rule
//! rate, the second-order energy shift, and the Zeno time.
//!
//! Everything is expressed in units of the bandwidth Lambda; the reference
//! configuration is omega_a = 3, lambda = 0.1, Lambda = 1.

use std::io::BufRead;

use crate::error::{Result, ZenoError};

/// Spectral density kappa_a(omega) of the system-continuum coupling.
///
/// The Lorentzian variant is
///   kappa_a(omega) = lambda^2 Lambda / (pi (omega^2 + Lambda^2))
/// on the full real line; the tabulated variant interpolates ordered
/// `(omega, kappa)` samples piecewise linearly and integrates the
/// interpolant exactly segment by segment.
#[derive(Debug, Clone, PartialEq)]
pub enum FormFactor {
    Lorentzian { lambda: f64, big_lambda: f64 },
    Tabulated { samples: Vec<(f64, f64)> },
}

impl FormFactor {
    /// Lorentzian form factor with coupling `lambda` and bandwidth
    /// `big_lambda`. `lambda = 0` is accepted as the decoupled limit;
    /// operations that need nonzero total weight report it themselves.
    pub fn lorentzian(lambda: f64, big_lambda: f64) -> Result<Self> {
        if lambda < 0.0 || !lambda.is_finite() {
            return Err(ZenoError::Domain(format!(
                "lambda must be nonnegative and finite, got {lambda}"
            )));
        }
        if big_lambda <= 0.0 || !big_lambda.is_finite() {
            return Err(ZenoError::Domain(format!(
                "big_lambda must be positive and finite, got {big_lambda}"
            )));
        }
        Ok(FormFactor::Lorentzian { lambda, big_lambda })
    }

    /// Tabulated form factor from samples strictly increasing in omega
    /// with kappa >= 0 everywhere. At least two samples are required.
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(ZenoError::InvalidFormFactor(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        for pair in samples.windows(2) {
            if pair[0].0.is_nan() || pair[1].0.is_nan() || pair[0].0 >= pair[1].0 {
                return Err(ZenoError::InvalidFormFactor(format!(
                    "omega samples must be strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        for &(omega, kappa) in &samples {
            if !omega.is_finite() || !kappa.is_finite() || kappa < 0.0 {
                return Err(ZenoError::InvalidFormFactor(format!(
                    "bad sample ({omega}, {kappa}): kappa must be finite and nonnegative"
                )));
            }
        }
        Ok(FormFactor::Tabulated { samples })
    }

    /// Load a tabulated form factor from two-column CSV: `omega,kappa`
    /// per line, `#`-prefixed comment lines and blank lines ignored.
    pub fn tabulated_from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut samples = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| {
                ZenoError::InvalidFormFactor(format!("read error on line {}: {e}", idx + 1))
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut cols = trimmed.split(',');
            let omega = cols
                .next()
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| {
                    ZenoError::InvalidFormFactor(format!("line {}: bad omega column", idx + 1))
                })?;
            let kappa = cols
                .next()
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| {
                    ZenoError::InvalidFormFactor(format!("line {}: bad kappa column", idx + 1))
                })?;
            if cols.next().is_some() {
                return Err(ZenoError::InvalidFormFactor(format!(
                    "line {}: expected exactly two columns",
                    idx + 1
                )));
            }
            samples.push((omega, kappa));
        }
        Self::tabulated(samples)
    }

    /// kappa_a(omega). Lorentzian uses the closed form; tabulated uses
    /// monotone piecewise-linear interpolation and rejects omega outside
    /// the sample range.
    pub fn kappa(&self, omega: f64) -> Result<f64> {
        match self {
            FormFactor::Lorentzian { lambda, big_lambda } => Ok(lambda * lambda * big_lambda
                / (std::f64::consts::PI * (omega * omega + big_lambda * big_lambda))),
            FormFactor::Tabulated { samples } => {
                let (min, max) = (samples[0].0, samples[samples.len() - 1].0);
                if omega < min || omega > max {
                    return Err(ZenoError::OutOfDomain { omega, min, max });
                }
                let j = match samples.binary_search_by(|&(x, _)| x.partial_cmp(&omega).unwrap()) {
                    Ok(exact) => return Ok(samples[exact].1),
                    Err(j) => j, // first sample above omega; j >= 1 here
                };
                let (x0, k0) = samples[j - 1];
                let (x1, k1) = samples[j];
                Ok(k0 + (k1 - k0) * (omega - x0) / (x1 - x0))
            }
        }
    }

    /// Integral of kappa over its support: exactly lambda^2 for the
    /// Lorentzian, exact trapezoid of the interpolant for tabulated data.
    pub fn total_weight(&self) -> f64 {
        match self {
            FormFactor::Lorentzian { lambda, .. } => lambda * lambda,
            FormFactor::Tabulated { samples } => samples
                .windows(2)
                .map(|p| 0.5 * (p[0].1 + p[1].1) * (p[1].0 - p[0].0))
                .sum(),
        }
    }

    /// Support of the spectral density: `None` encodes the full real line.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            FormFactor::Lorentzian { .. } => None,
            FormFactor::Tabulated { samples } => {
                Some((samples[0].0, samples[samples.len() - 1].0))
            }
        }
    }
}

/// The unstable system: initial-state energy plus the form factor.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub omega_a: f64,
    pub form_factor: FormFactor,
}

impl SystemParams {
    pub fn new(omega_a: f64, form_factor: FormFactor) -> Result<Self> {
        if !omega_a.is_finite() {
            return Err(ZenoError::Domain(format!(
                "omega_a must be finite, got {omega_a}"
            )));
        }
        Ok(SystemParams {
            omega_a,
            form_factor,
        })
    }

    /// Lorentzian system with the given parameters.
    pub fn lorentzian(omega_a: f64, lambda: f64, big_lambda: f64) -> Result<Self> {
        Self::new(omega_a, FormFactor::lorentzian(lambda, big_lambda)?)
    }

    /// The configuration used throughout as the worked example:
    /// omega_a = 3, lambda = 0.1, Lambda = 1.
    pub fn reference() -> Self {
        Self::lorentzian(3.0, 0.1, 1.0).expect("reference parameters are valid")
    }

    pub fn kappa(&self, omega: f64) -> Result<f64> {
        self.form_factor.kappa(omega)
    }

    /// Fermi golden rule: gamma = 2 pi kappa_a(omega_a).
    pub fn golden_rule_gamma(&self) -> Result<f64> {
        Ok(2.0 * std::f64::consts::PI * self.kappa(self.omega_a)?)
    }

    /// Second-order energy shift, the principal-value integral
    /// P int kappa(omega) / (omega_a - omega) d omega.
    ///
    /// Lorentzian: closed form lambda^2 omega_a / (omega_a^2 + Lambda^2).
    /// Tabulated: symmetric-subtraction scheme, exact on the interpolant --
    /// the subtracted integrand is rational per segment and the log term
    /// of the subtracted constant is analytic.
    pub fn energy_shift(&self) -> Result<f64> {
        match &self.form_factor {
            FormFactor::Lorentzian { lambda, big_lambda } => Ok(lambda * lambda * self.omega_a
                / (self.omega_a * self.omega_a + big_lambda * big_lambda)),
            FormFactor::Tabulated { samples } => {
                let wa = self.omega_a;
                let (min, max) = (samples[0].0, samples[samples.len() - 1].0);
                if wa <= min || wa >= max {
                    return Err(ZenoError::OutOfDomain {
                        omega: wa,
                        min,
                        max,
                    });
                }
                let kappa_a = self.kappa(wa)?;
                let mut shift = 0.0;
                for pair in samples.windows(2) {
                    let (x0, k0) = pair[0];
                    let (x1, k1) = pair[1];
                    let b = (k1 - k0) / (x1 - x0);
                    // integrand (kappa(w) - kappa_a)/(wa - w) with linear
                    // kappa = C + b (w - wa), C = extension value at wa
                    // minus kappa_a: integral = -C ln|w - wa| - b (x1-x0)
                    let c = k0 + b * (wa - x0) - kappa_a;
                    shift -= b * (x1 - x0);
                    if c != 0.0 {
                        shift -= c * ((x1 - wa).abs().ln() - (x0 - wa).abs().ln());
                    }
                }
                shift += kappa_a * ((wa - min) / (max - wa)).ln();
                Ok(shift)
            }
        }
    }

    /// Zeno time tau_Z = (int kappa)^(-1/2); the initial decay is
    /// quadratic, P ~ 1 - t^2 / tau_Z^2.
    pub fn zeno_time(&self) -> Result<f64> {
        let total = self.form_factor.total_weight();
        if total <= 0.0 || !total.is_finite() {
            return Err(ZenoError::DegenerateSystem);
        }
        Ok(1.0 / total.sqrt())
    }
}

/// Densely tabulated copy of the reference Lorentzian for quadrature
/// cross-checks: uniform grid on |omega| <= 10, geometric continuation
/// out to |omega| = 1e6.
#[cfg(test)]
pub(crate) fn tabulated_reference_copy() -> FormFactor {
    let lor = FormFactor::lorentzian(0.1, 1.0).unwrap();
    let mut grid = Vec::new();
    let n_core = 40_000usize;
    for i in 0..=n_core {
        grid.push(-10.0 + 20.0 * i as f64 / n_core as f64);
    }
    let mut tail = Vec::new();
    let mut x = 10.0_f64;
    while x < 1.0e6 {
        x *= 1.005;
        tail.push(x.min(1.0e6));
    }
    for &t in tail.iter() {
        grid.push(t);
        grid.push(-t);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    let samples: Vec<(f64, f64)> = grid
        .into_iter()
        .map(|w| (w, lor.kappa(w).unwrap()))
        .collect();
    FormFactor::tabulated(samples).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_real_line;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn reference() -> SystemParams {
        SystemParams::reference()
    }

    #[test]
    fn kappa_at_reference_energy() {
        let k = reference().kappa(3.0).unwrap();
        assert_relative_eq!(k, 1.0 / (1000.0 * std::f64::consts::PI), max_relative = 1e-15);
        assert_abs_diff_eq!(k, 3.1831e-4, epsilon = 1e-8);
    }

    #[test]
    fn lorentzian_normalization_by_quadrature() {
        // independent check of total_weight against the tangent-map rule
        let ff = reference().form_factor;
        let q = integrate_real_line(4001, 1.0, |w| ff.kappa(w).unwrap());
        assert_abs_diff_eq!(q, 0.01, epsilon = 1e-6);
        assert_relative_eq!(ff.total_weight(), 0.01, max_relative = 1e-15);
    }

    #[test]
    fn golden_rule_reference_value() {
        let g = reference().golden_rule_gamma().unwrap();
        assert_relative_eq!(g, 0.002, max_relative = 1e-14);
        // identical to the defining expression
        let k = reference().kappa(3.0).unwrap();
        assert_eq!(g, 2.0 * std::f64::consts::PI * k);
    }

    #[test]
    fn golden_rule_at_zero_detuning() {
        let p = SystemParams::lorentzian(0.0, 0.1, 1.0).unwrap();
        assert_relative_eq!(p.golden_rule_gamma().unwrap(), 0.02, max_relative = 1e-14);
    }

    #[test]
    fn energy_shift_closed_form_and_odd_symmetry() {
        assert_relative_eq!(reference().energy_shift().unwrap(), 0.003, max_relative = 1e-14);
        let sym = SystemParams::lorentzian(0.0, 0.1, 1.0).unwrap();
        assert_eq!(sym.energy_shift().unwrap(), 0.0);
    }

    #[test]
    fn energy_shift_against_pv_quadrature() {
        // independent oracle: symmetrized principal value
        //   int_0^inf (kappa(wa-u) - kappa(wa+u))/u du
        // with the half-line tangent map u = tan(v).
        let p = reference();
        let wa = p.omega_a;
        let ff = &p.form_factor;
        let (x, w) = crate::quad::gauss_legendre(4001);
        let half_pi = std::f64::consts::FRAC_PI_2;
        let mut pv = 0.0;
        for i in 0..x.len() {
            let v = half_pi * 0.5 * (x[i] + 1.0);
            let u = v.tan();
            let jac = half_pi * 0.5 * w[i] / (v.cos() * v.cos());
            let num = ff.kappa(wa - u).unwrap() - ff.kappa(wa + u).unwrap();
            pv += jac * num / u;
        }
        assert_relative_eq!(pv, p.energy_shift().unwrap(), max_relative = 1e-8);
    }

    #[test]
    fn zeno_time_values() {
        assert_relative_eq!(reference().zeno_time().unwrap(), 10.0, max_relative = 1e-14);
        let p = SystemParams::lorentzian(3.0, 0.2, 1.0).unwrap();
        assert_relative_eq!(p.zeno_time().unwrap(), 5.0, max_relative = 1e-14);
        // tau_Z involves only the interaction, not omega_a
        let q = SystemParams::lorentzian(-7.5, 0.1, 1.0).unwrap();
        assert_eq!(
            q.zeno_time().unwrap(),
            reference().zeno_time().unwrap()
        );
    }

    #[test]
    fn coupling_scaling_laws() {
        let base = reference();
        let g0 = base.golden_rule_gamma().unwrap();
        let t0 = base.zeno_time().unwrap();
        for c in [0.5, 2.0] {
            let scaled = SystemParams::lorentzian(3.0, 0.1 * c, 1.0).unwrap();
            assert_relative_eq!(
                scaled.golden_rule_gamma().unwrap(),
                c * c * g0,
                max_relative = 1e-12
            );
            assert_relative_eq!(scaled.zeno_time().unwrap(), t0 / c, max_relative = 1e-12);
        }
    }

    #[test]
    fn gamma_tau_z_squared_matches_transition_estimate() {
        let p = reference();
        let tz = p.zeno_time().unwrap();
        let g = p.golden_rule_gamma().unwrap();
        assert_relative_eq!(g * tz * tz, 0.2, max_relative = 1e-12);
    }

    #[test]
    fn tabulated_copy_tracks_closed_forms() {
        let tab = SystemParams::new(3.0, super::tabulated_reference_copy()).unwrap();
        let lor = reference();
        assert_relative_eq!(
            tab.kappa(3.0).unwrap(),
            lor.kappa(3.0).unwrap(),
            max_relative = 1e-6
        );
        assert_relative_eq!(
            tab.golden_rule_gamma().unwrap(),
            lor.golden_rule_gamma().unwrap(),
            max_relative = 1e-6
        );
        assert_relative_eq!(
            tab.energy_shift().unwrap(),
            lor.energy_shift().unwrap(),
            max_relative = 1e-6
        );
        assert_relative_eq!(
            tab.zeno_time().unwrap(),
            lor.zeno_time().unwrap(),
            max_relative = 1e-6
        );
    }

    #[test]
    fn tabulated_rejects_out_of_range_and_bad_data() {
        let ff = FormFactor::tabulated(vec![(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert!(matches!(
            ff.kappa(1.5),
            Err(ZenoError::OutOfDomain { .. })
        ));
        assert!(FormFactor::tabulated(vec![(0.0, 1.0)]).is_err());
        assert!(FormFactor::tabulated(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(FormFactor::tabulated(vec![(0.0, 1.0), (1.0, -2.0)]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let text = "# comment line\n0.0, 0.5\n1.0,0.25\n\n2.5, 0.1\n";
        let ff = FormFactor::tabulated_from_csv(text.as_bytes()).unwrap();
        assert_eq!(ff.kappa(1.0).unwrap(), 0.25);
        assert_relative_eq!(ff.kappa(0.5).unwrap(), 0.375, max_relative = 1e-15);
        assert!(FormFactor::tabulated_from_csv("0.0,a\n1.0,2.0\n".as_bytes()).is_err());
        assert!(FormFactor::tabulated_from_csv("0.0,1.0,9\n1.0,2.0\n".as_bytes()).is_err());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(FormFactor::lorentzian(-0.1, 1.0).is_err());
        assert!(FormFactor::lorentzian(0.1, -1.0).is_err());
        assert!(FormFactor::lorentzian(f64::INFINITY, 1.0).is_err());
        assert!(SystemParams::lorentzian(f64::NAN, 0.1, 1.0).is_err());
    }

    #[test]
    fn decoupled_limit() {
        let p = SystemParams::lorentzian(3.0, 0.0, 1.0).unwrap();
        assert_eq!(p.golden_rule_gamma().unwrap(), 0.0);
        assert_eq!(p.energy_shift().unwrap(), 0.0);
        assert_eq!(p.zeno_time(), Err(ZenoError::DegenerateSystem));
    }

    proptest! {
        #[test]
        fn kappa_is_nonnegative_and_even(omega in -1e4f64..1e4) {
            let ff = FormFactor::lorentzian(0.1, 1.0).unwrap();
            let k = ff.kappa(omega).unwrap();
            prop_assert!(k >= 0.0);
            prop_assert_eq!(k, ff.kappa(-omega).unwrap());
        }

        #[test]
        fn tabulated_kappa_nonnegative(omega in 0.0f64..2.5) {
            let ff = FormFactor::tabulated(
                vec![(0.0, 0.5), (1.0, 0.25), (2.5, 0.1)]).unwrap();
            prop_assert!(ff.kappa(omega).unwrap() >= 0.0);
        }
    }
}
