//! Brute-force validator: discretizes the continuum into a finite bath,
//! builds the single-excitation Hamiltonian with the requested monitoring
//! couplings, evolves it exactly, and reproduces survival probabilities
//! and effective rates independently of the resolvent closed forms.

mod arrowhead;
mod rk45;

pub use arrowhead::{complex_head_eigen, merge_sorted_modes, real_eigen, ComplexArrowheadEigen};
pub use rk45::evolve_survival_rk45;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, ZenoError};
use crate::measurement::MeasurementScheme;
use crate::quad::{gauss_legendre, tangent_rule};
use crate::spectral::{FormFactor, SystemParams};

/// Finite-mode approximation of the continuum: ascending frequencies
/// omega_k with couplings phi_k = sqrt(kappa(omega_k) w_k) from a
/// quadrature rule, so that sum phi_k^2 approximates int kappa.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedBath {
    /// (omega_k, phi_k), ascending in omega, phi_k >= 0.
    pub modes: Vec<(f64, f64)>,
}

impl DiscretizedBath {
    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// Sum of squared couplings; converges to int kappa = tau_Z^-2.
    pub fn sum_phi_squared(&self) -> f64 {
        self.modes.iter().map(|&(_, p)| p * p).sum()
    }

    /// First spectral moment sum phi_k^2 omega_k.
    pub fn first_moment(&self) -> f64 {
        self.modes.iter().map(|&(w, p)| p * p * w).sum()
    }

    /// Smallest gap between adjacent mode frequencies.
    pub fn min_spacing(&self) -> Option<f64> {
        self.modes
            .windows(2)
            .map(|p| p[1].0 - p[0].0)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    /// Half the smallest-spacing recurrence scale 2 pi / min d omega; the
    /// oracle refuses evolution times beyond this.
    pub fn trusted_horizon(&self) -> f64 {
        match self.min_spacing() {
            Some(gap) if gap > 0.0 => std::f64::consts::PI / gap,
            _ => f64::INFINITY,
        }
    }

    /// Local mode spacing at frequency `omega` (gap of the enclosing or
    /// nearest mode pair).
    pub fn local_spacing(&self, omega: f64) -> f64 {
        let n = self.modes.len();
        if n < 2 {
            return f64::INFINITY;
        }
        let idx = self
            .modes
            .partition_point(|&(w, _)| w < omega)
            .clamp(1, n - 1);
        self.modes[idx].0 - self.modes[idx - 1].0
    }
}

/// Monitoring variant of the oracle Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleKind {
    /// Eq. of motion of the bare decay, single excitation shared between
    /// |a> and |b, 1_k>.
    Bare,
    /// Each decay product |b, 1_k> Rabi-coupled to a detector level
    /// |M, 1_k> with frequency k.
    Rabi { k: f64 },
    /// Flat detector continuum eliminated exactly into -i Gamma/2 on
    /// every |b, 1_k> diagonal.
    Continuous { big_gamma: f64 },
}

/// Single-excitation-sector Hamiltonian in structured (arrowhead) form.
/// `to_dense` materializes the full matrix for inspection and small-size
/// cross-checks; the evolution operations work on the structure directly.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleHamiltonian {
    pub kind: OracleKind,
    pub omega_a: f64,
    /// Bath modes (omega_k, phi_k) in ascending omega order.
    pub modes: Vec<(f64, f64)>,
}

impl OracleHamiltonian {
    /// Basis dimension: 1 + N for BARE/CONTINUOUS, 1 + 2N for RABI
    /// (ordering |a>, |b,1_1> .. |b,1_N>, then |M,1_1> .. |M,1_N>).
    pub fn dim(&self) -> usize {
        match self.kind {
            OracleKind::Rabi { .. } => 1 + 2 * self.modes.len(),
            _ => 1 + self.modes.len(),
        }
    }

    /// Row-major dense matrix in the basis above.
    pub fn to_dense(&self) -> (usize, Vec<Complex64>) {
        let n = self.modes.len();
        let dim = self.dim();
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        m[0] = Complex64::new(self.omega_a, 0.0);
        for (k, &(w, phi)) in self.modes.iter().enumerate() {
            let b = 1 + k;
            m[b * dim + b] = Complex64::new(w, 0.0);
            m[b] = Complex64::new(phi, 0.0);
            m[b * dim] = Complex64::new(phi, 0.0);
        }
        match self.kind {
            OracleKind::Bare => {}
            OracleKind::Continuous { big_gamma } => {
                for k in 0..n {
                    let b = 1 + k;
                    m[b * dim + b] += Complex64::new(0.0, -0.5 * big_gamma);
                }
            }
            OracleKind::Rabi { k: rabi } => {
                for (k, &(w, _)) in self.modes.iter().enumerate() {
                    let b = 1 + k;
                    let d = 1 + n + k;
                    m[d * dim + d] = Complex64::new(w, 0.0);
                    m[b * dim + d] = Complex64::new(rabi, 0.0);
                    m[d * dim + b] = Complex64::new(rabi, 0.0);
                }
            }
        }
        (dim, m)
    }

    /// out = H y in the structured basis.
    pub(crate) fn apply(&self, y: &[Complex64], out: &mut [Complex64]) {
        let n = self.modes.len();
        let mut head = Complex64::new(self.omega_a, 0.0) * y[0];
        for (k, &(w, phi)) in self.modes.iter().enumerate() {
            let b = 1 + k;
            head += phi * y[b];
            out[b] = w * y[b] + phi * y[0];
        }
        out[0] = head;
        match self.kind {
            OracleKind::Bare => {}
            OracleKind::Continuous { big_gamma } => {
                let shift = Complex64::new(0.0, -0.5 * big_gamma);
                for k in 0..n {
                    out[1 + k] += shift * y[1 + k];
                }
            }
            OracleKind::Rabi { k: rabi } => {
                for (k, &(w, _)) in self.modes.iter().enumerate() {
                    let b = 1 + k;
                    let d = 1 + n + k;
                    out[b] += rabi * y[d];
                    out[d] = w * y[d] + rabi * y[b];
                }
            }
        }
    }

    /// Largest |diagonal| entry; sets the fastest phase for integrators.
    pub(crate) fn max_diagonal_frequency(&self) -> f64 {
        self.modes
            .iter()
            .map(|&(w, _)| w.abs())
            .fold(self.omega_a.abs(), f64::max)
    }

    /// The effective head-plus-modes problem whose secular roots carry the
    /// survival amplitude: BARE is the bath itself; RABI splits every mode
    /// into omega_k -+ k with half the squared coupling. Exactly
    /// decoupled modes (phi = 0) never mix with the head and are dropped;
    /// the secular solver requires strictly positive couplings.
    fn effective_real_modes(&self) -> (Vec<f64>, Vec<f64>) {
        match self.kind {
            OracleKind::Rabi { k } => {
                let n = self.modes.len();
                let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(2 * n);
                for &(w, phi) in &self.modes {
                    if phi == 0.0 {
                        continue;
                    }
                    let p2 = 0.5 * phi * phi;
                    pairs.push((w - k, p2));
                    pairs.push((w + k, p2));
                }
                pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let d: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                let p2: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                merge_sorted_modes(&d, &p2)
            }
            _ => {
                let coupled: Vec<(f64, f64)> = self
                    .modes
                    .iter()
                    .filter(|&&(_, p)| p != 0.0)
                    .map(|&(w, p)| (w, p * p))
                    .collect();
                let d: Vec<f64> = coupled.iter().map(|p| p.0).collect();
                let p2: Vec<f64> = coupled.iter().map(|p| p.1).collect();
                merge_sorted_modes(&d, &p2)
            }
        }
    }

    fn bath(&self) -> DiscretizedBath {
        DiscretizedBath {
            modes: self.modes.clone(),
        }
    }
}

/// Discretize a form factor into `n_modes` bath modes.
///
/// The Lorentzian lives on the whole real line, so nodes come from the
/// tangent map omega = Lambda tan(theta) with Gauss-Legendre nodes in
/// theta; the constant integrand in theta makes sum phi^2 = lambda^2
/// exact at every order. Tabulated form factors use composite
/// Gauss-Legendre panels over their support.
pub fn discretize(ff: &FormFactor, n_modes: usize) -> Result<DiscretizedBath> {
    if n_modes == 0 {
        return Err(ZenoError::Domain("n_modes must be at least 1".into()));
    }
    let nodes: Vec<(f64, f64)> = match ff {
        FormFactor::Lorentzian { big_lambda, .. } => tangent_rule(n_modes, *big_lambda),
        FormFactor::Tabulated { samples } => {
            let (a, b) = (samples[0].0, samples[samples.len() - 1].0);
            let per = n_modes.min(16);
            let panels = n_modes.div_ceil(per);
            let base = n_modes / panels;
            let extra = n_modes % panels;
            let h = (b - a) / panels as f64;
            let mut out = Vec::with_capacity(n_modes);
            for p in 0..panels {
                let count = if p < extra { base + 1 } else { base };
                if count == 0 {
                    continue;
                }
                let (x, w) = gauss_legendre(count);
                let lo = a + p as f64 * h;
                let mid = lo + 0.5 * h;
                for i in 0..count {
                    out.push((mid + 0.5 * h * x[i], 0.5 * h * w[i]));
                }
            }
            out
        }
    };
    let mut modes = Vec::with_capacity(nodes.len());
    for (w, wt) in nodes {
        let kappa = ff.kappa(w)?;
        modes.push((w, (kappa * wt).sqrt()));
    }
    Ok(DiscretizedBath { modes })
}

/// Assemble the oracle Hamiltonian for the requested monitoring kind.
pub fn build_hamiltonian(
    params: &SystemParams,
    kind: OracleKind,
    bath: &DiscretizedBath,
) -> Result<OracleHamiltonian> {
    if bath.modes.is_empty() {
        return Err(ZenoError::Domain("bath has no modes".into()));
    }
    match kind {
        OracleKind::Rabi { k } if k < 0.0 || !k.is_finite() => {
            return Err(ZenoError::Domain(format!(
                "Rabi frequency must be nonnegative and finite, got {k}"
            )));
        }
        OracleKind::Continuous { big_gamma } if big_gamma < 0.0 || !big_gamma.is_finite() => {
            return Err(ZenoError::Domain(format!(
                "detector rate must be nonnegative and finite, got {big_gamma}"
            )));
        }
        _ => {}
    }
    Ok(OracleHamiltonian {
        kind,
        omega_a: params.omega_a,
        modes: bath.modes.clone(),
    })
}

pub(crate) fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(ZenoError::Domain("need at least one time".into()));
    }
    if times[0] < 0.0 {
        return Err(ZenoError::Domain(format!(
            "times must be nonnegative, got {}",
            times[0]
        )));
    }
    if times.windows(2).any(|p| p[0].is_nan() || p[1].is_nan() || p[0] >= p[1]) {
        return Err(ZenoError::Domain("times must be increasing".into()));
    }
    Ok(())
}

fn check_guard(h: &OracleHamiltonian, times: &[f64]) -> Result<()> {
    let horizon = h.bath().trusted_horizon();
    let last = *times.last().unwrap();
    if last > horizon {
        return Err(ZenoError::RecurrenceGuard {
            requested: last,
            max_trusted: horizon,
        });
    }
    Ok(())
}

/// Survival amplitudes <a| e^{-iHt} |a> at the requested times.
///
/// Hermitian kinds go through the arrowhead eigendecomposition,
/// A(t) = sum_n |<a|n>|^2 e^{-i E_n t}; the continuous (non-Hermitian)
/// kind through the resolvent residues of the complex-head arrowhead.
/// Times beyond the bath's trusted horizon are refused.
pub fn evolve_survival(h: &OracleHamiltonian, times: &[f64]) -> Result<Vec<Complex64>> {
    validate_times(times)?;
    check_guard(h, times)?;
    match h.kind {
        OracleKind::Continuous { big_gamma } if big_gamma > 0.0 => {
            let coupled: Vec<(f64, f64)> = h
                .modes
                .iter()
                .filter(|&&(_, p)| p != 0.0)
                .map(|&(w, p)| (w, p * p))
                .collect();
            let d: Vec<f64> = coupled.iter().map(|p| p.0).collect();
            let p2: Vec<f64> = coupled.iter().map(|p| p.1).collect();
            let (d, p2) = merge_sorted_modes(&d, &p2);
            if d.is_empty() {
                let z = Complex64::new(h.omega_a, 0.0);
                return Ok(times
                    .iter()
                    .map(|&t| (z * Complex64::new(0.0, -t)).exp())
                    .collect());
            }
            let head = Complex64::new(h.omega_a, 0.5 * big_gamma);
            let eig = complex_head_eigen(head, &d, &p2)?;
            let shift = Complex64::new(0.0, -0.5 * big_gamma);
            let amps: Vec<Complex64> = times
                .par_iter()
                .map(|&t| {
                    let mut a = eig.head_residue
                        * ((eig.head_root + shift) * Complex64::new(0.0, -t)).exp();
                    for &(dm, delta, c) in &eig.bath {
                        let z = (Complex64::new(dm, 0.0) + delta) + shift;
                        a += c * (z * Complex64::new(0.0, -t)).exp();
                    }
                    a
                })
                .collect();
            Ok(amps)
        }
        _ => {
            let (d, p2) = h.effective_real_modes();
            let (evals, weights) = real_eigen(h.omega_a, &d, &p2)?;
            let amps: Vec<Complex64> = times
                .par_iter()
                .map(|&t| {
                    let mut a = Complex64::new(0.0, 0.0);
                    for (&e, &c) in evals.iter().zip(&weights) {
                        let (s, co) = (e * t).sin_cos();
                        a += c * Complex64::new(co, -s);
                    }
                    a
                })
                .collect();
            Ok(amps)
        }
    }
}

/// n cycles of (evolve from |a> by tau, project onto |a>): the explicit
/// projection loop, checked against |A(tau)|^{2n}, which it must equal
/// identically for projective measurements.
///
/// The single-cycle evolution computes the full state vector once; the
/// head component is also used for an internal norm-conservation check.
pub fn pulsed_run(
    params: &SystemParams,
    bath: &DiscretizedBath,
    tau: f64,
    n: u32,
) -> Result<f64> {
    if tau <= 0.0 || tau.is_nan() {
        return Err(ZenoError::Domain(format!(
            "measurement period must be positive, got {tau}"
        )));
    }
    if n < 1 {
        return Err(ZenoError::Domain("need at least one cycle".into()));
    }
    let h = build_hamiltonian(params, OracleKind::Bare, bath)?;
    check_guard(&h, &[tau])?;
    let (dm, p2m) = h.effective_real_modes();
    let (evals, weights) = real_eigen(h.omega_a, &dm, &p2m)?;
    let phases: Vec<Complex64> = evals
        .iter()
        .map(|&e| {
            let (s, c) = (e * tau).sin_cos();
            Complex64::new(c, -s)
        })
        .collect();

    // full state after one cycle from |a>:
    //   psi_a = sum_n c_n e^{-i E_n tau}
    //   psi_k = phi_k sum_n c_n e^{-i E_n tau} / (E_n - d_k)
    let psi_a: Complex64 = weights
        .iter()
        .zip(&phases)
        .map(|(&c, &ph)| c * ph)
        .sum();
    let mode_norm: f64 = dm
        .par_iter()
        .zip(&p2m)
        .map(|(&dk, &p2k)| {
            let mut amp = Complex64::new(0.0, 0.0);
            for ((&e, &c), &ph) in evals.iter().zip(&weights).zip(&phases) {
                let diff = e - dk;
                if diff != 0.0 && c != 0.0 {
                    amp += c * ph / diff;
                }
            }
            p2k * amp.norm_sqr()
        })
        .sum();
    let norm = psi_a.norm_sqr() + mode_norm;
    if (norm - 1.0).abs() > 1e-8 {
        return Err(ZenoError::NumericalFailure(format!(
            "single-cycle state norm {norm} deviates from 1"
        )));
    }

    // projection loop: each projection resets the state to |a> times the
    // head amplitude
    let mut alpha = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        alpha *= psi_a;
    }
    let p_loop = alpha.norm_sqr();
    let p_power = psi_a.norm_sqr().powi(n as i32);
    if (p_loop - p_power).abs() > 1e-10 {
        return Err(ZenoError::NumericalFailure(format!(
            "projection loop {p_loop} disagrees with power formula {p_power}"
        )));
    }
    Ok(p_loop)
}

/// Effective decay rate extracted from oracle data alone.
///
/// Pulsed: -log of the single-cycle survival over tau. Continuous and
/// Rabi: least-squares slope of -log P(t) over t in [2/control,
/// min(1/gamma, horizon)], where the horizon also respects the local
/// mode spacing at the Rabi-shifted resonances omega_a -+ K (each
/// shifted channel decoheres past half its own recurrence scale; the
/// Gamma broadening of the continuous kind smooths the spectrum on the
/// detector linewidth, so only the global guard applies there).
pub fn empirical_gamma_eff(
    params: &SystemParams,
    bath: &DiscretizedBath,
    scheme: MeasurementScheme,
) -> Result<f64> {
    let gamma = params.golden_rule_gamma()?;
    if gamma <= 0.0 || gamma.is_nan() {
        return Err(ZenoError::Domain(
            "empirical rate needs a positive natural decay rate".into(),
        ));
    }
    match scheme {
        MeasurementScheme::Pulsed { tau } => {
            if tau <= 0.0 || tau.is_nan() {
                return Err(ZenoError::Domain(format!(
                    "measurement period must be positive, got {tau}"
                )));
            }
            let h = build_hamiltonian(params, OracleKind::Bare, bath)?;
            let amp = evolve_survival(&h, &[tau])?;
            let p = amp[0].norm_sqr();
            if p <= 0.0 {
                return Err(ZenoError::NumericalFailure(
                    "single-cycle survival underflowed".into(),
                ));
            }
            Ok(-p.ln() / tau)
        }
        MeasurementScheme::Continuous { big_gamma } => {
            if big_gamma <= 0.0 || big_gamma.is_nan() {
                return Err(ZenoError::Domain(format!(
                    "detector rate must be positive, got {big_gamma}"
                )));
            }
            let h = build_hamiltonian(params, OracleKind::Continuous { big_gamma }, bath)?;
            let start = 2.0 / big_gamma;
            let end = (1.0 / gamma).min(bath.trusted_horizon());
            fit_log_slope(&h, start, end)
        }
        MeasurementScheme::Rabi { k } => {
            if k <= 0.0 || k.is_nan() {
                return Err(ZenoError::NumericalFailure(
                    "fit window empty: Rabi frequency must be positive".into(),
                ));
            }
            let h = build_hamiltonian(params, OracleKind::Rabi { k }, bath)?;
            let start = 2.0 / k;
            let channel_gap = bath
                .local_spacing(params.omega_a - k)
                .max(bath.local_spacing(params.omega_a + k));
            let channel_horizon = std::f64::consts::PI / channel_gap;
            let end = (1.0 / gamma)
                .min(channel_horizon)
                .min(bath.trusted_horizon());
            fit_log_slope(&h, start, end)
        }
    }
}

const FIT_SAMPLES: usize = 256;

fn fit_log_slope(h: &OracleHamiltonian, start: f64, end: f64) -> Result<f64> {
    if start.is_nan() || end.is_nan() || start >= end {
        return Err(ZenoError::NumericalFailure(format!(
            "fit window [{start}, {end}] is empty"
        )));
    }
    let times: Vec<f64> = (0..FIT_SAMPLES)
        .map(|i| start + (end - start) * i as f64 / (FIT_SAMPLES - 1) as f64)
        .collect();
    let amps = evolve_survival(h, &times)?;
    let mut logs = Vec::with_capacity(times.len());
    for a in &amps {
        let p = a.norm_sqr();
        if p <= 0.0 {
            return Err(ZenoError::NumericalFailure(
                "survival probability underflowed inside the fit window".into(),
            ));
        }
        logs.push(p.ln());
    }
    let t_mean = times.iter().sum::<f64>() / times.len() as f64;
    let l_mean = logs.iter().sum::<f64>() / logs.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, l) in times.iter().zip(&logs) {
        let dt = t - t_mean;
        num += dt * (l - l_mean);
        den += dt * dt;
    }
    Ok(-num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn reference() -> SystemParams {
        SystemParams::reference()
    }

    #[test]
    fn discretize_zeroth_and_first_moments() {
        let p = reference();
        let bath = discretize(&p.form_factor, 2000).unwrap();
        assert_relative_eq!(bath.sum_phi_squared(), 0.01, max_relative = 1e-6);
        // antisymmetric nodes cancel the first moment
        assert_abs_diff_eq!(bath.first_moment(), 0.0, epsilon = 1e-12);
        assert!(bath.modes.iter().all(|&(_, p)| p >= 0.0));
        assert!(bath.modes.windows(2).all(|m| m[0].0 < m[1].0));
    }

    #[test]
    fn discretize_single_mode_sits_at_zero() {
        let bath = discretize(&reference().form_factor, 1).unwrap();
        assert_eq!(bath.n_modes(), 1);
        assert_eq!(bath.modes[0].0, 0.0);
        assert_eq!(discretize(&reference().form_factor, 0), Err(ZenoError::Domain("n_modes must be at least 1".into())));
    }

    #[test]
    fn discretize_tabulated_covers_support() {
        let ff = FormFactor::tabulated(vec![(-2.0, 0.1), (0.0, 0.3), (2.0, 0.1)]).unwrap();
        let bath = discretize(&ff, 100).unwrap();
        assert_eq!(bath.n_modes(), 100);
        assert!(bath.modes.first().unwrap().0 > -2.0);
        assert!(bath.modes.last().unwrap().0 < 2.0);
        // trapezoid integral of the interpolant is 0.8; the composite
        // rule is not kink-exact, so allow the quadrature remainder
        assert_relative_eq!(bath.sum_phi_squared(), 0.8, max_relative = 1e-3);
        let fine = discretize(&ff, 1600).unwrap();
        let coarse_err = (bath.sum_phi_squared() - 0.8_f64).abs();
        let fine_err = (fine.sum_phi_squared() - 0.8_f64).abs();
        assert!(fine_err < coarse_err);
    }

    #[test]
    fn guard_scales_with_mode_count() {
        let p = reference();
        let b500 = discretize(&p.form_factor, 500).unwrap();
        let b1000 = discretize(&p.form_factor, 1000).unwrap();
        assert_abs_diff_eq!(b500.trusted_horizon(), 318.6, epsilon = 0.5);
        assert_abs_diff_eq!(b1000.trusted_horizon(), 636.9, epsilon = 1.0);
        let h = build_hamiltonian(&p, OracleKind::Bare, &b500).unwrap();
        assert!(matches!(
            evolve_survival(&h, &[0.0, 400.0]),
            Err(ZenoError::RecurrenceGuard { .. })
        ));
    }

    #[test]
    fn evolution_starts_at_unity() {
        let p = reference();
        let bath = discretize(&p.form_factor, 64).unwrap();
        for kind in [
            OracleKind::Bare,
            OracleKind::Rabi { k: 2.0 },
            OracleKind::Continuous { big_gamma: 1.5 },
        ] {
            let h = build_hamiltonian(&p, kind, &bath).unwrap();
            let a = evolve_survival(&h, &[0.0]).unwrap();
            assert!((a[0] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn decoupled_system_never_decays() {
        let p = SystemParams::lorentzian(3.0, 0.0, 1.0).unwrap();
        let bath = discretize(&p.form_factor, 32).unwrap();
        let h = build_hamiltonian(&p, OracleKind::Bare, &bath).unwrap();
        let amps = evolve_survival(&h, &[1.0, 5.0, 20.0]).unwrap();
        for a in amps {
            assert_abs_diff_eq!(a.norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn continuous_zero_width_equals_bare() {
        let p = reference();
        let bath = discretize(&p.form_factor, 24).unwrap();
        let bare = build_hamiltonian(&p, OracleKind::Bare, &bath).unwrap();
        let cont =
            build_hamiltonian(&p, OracleKind::Continuous { big_gamma: 0.0 }, &bath).unwrap();
        assert_eq!(bare.to_dense().1, cont.to_dense().1);
        let t = [0.5, 2.0, 7.0];
        let a = evolve_survival(&bare, &t).unwrap();
        let b = evolve_survival(&cont, &t).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn bare_tracks_two_pole_formula_at_moderate_size() {
        let p = reference();
        let bath = discretize(&p.form_factor, 1000).unwrap();
        let h = build_hamiltonian(&p, OracleKind::Bare, &bath).unwrap();
        let times: Vec<f64> = (1..=60).map(|i| i as f64 * 0.5).collect();
        let amps = evolve_survival(&h, &times).unwrap();
        for (t, a) in times.iter().zip(&amps) {
            let exact = crate::resolvent::survival_probability(&p, *t).unwrap();
            assert_abs_diff_eq!(a.norm_sqr(), exact, epsilon = 5e-4);
        }
    }

    #[test]
    fn continuous_solver_matches_rk45_at_small_size() {
        let p = reference();
        let bath = discretize(&p.form_factor, 64).unwrap();
        let h = build_hamiltonian(&p, OracleKind::Continuous { big_gamma: 2.0 }, &bath).unwrap();
        let times = [1.0, 5.0, 10.0, 20.0];
        let residues = evolve_survival(&h, &times).unwrap();
        let stepped = evolve_survival_rk45(&h, &times, 1e-10).unwrap();
        for (r, s) in residues.iter().zip(&stepped) {
            assert!((r - s).norm() < 1e-7, "residue {r} vs rk45 {s}");
        }
        // frozen value from the independent offline solver
        assert_abs_diff_eq!(residues[0].re, -0.9883627326432, epsilon = 1e-9);
        assert_abs_diff_eq!(residues[0].im, -0.1393770638091, epsilon = 1e-9);
    }

    #[test]
    fn rabi_solver_matches_rk45_at_small_size() {
        let p = reference();
        let bath = discretize(&p.form_factor, 48).unwrap();
        let h = build_hamiltonian(&p, OracleKind::Rabi { k: 3.0 }, &bath).unwrap();
        let times = [0.7, 3.0, 9.0];
        let eig = evolve_survival(&h, &times).unwrap();
        let stepped = evolve_survival_rk45(&h, &times, 1e-10).unwrap();
        for (r, s) in eig.iter().zip(&stepped) {
            assert!((r - s).norm() < 1e-7);
        }
    }

    #[test]
    fn pulsed_run_hinders_and_accelerates() {
        let p = reference();
        let bath = discretize(&p.form_factor, 400).unwrap();
        let watched = pulsed_run(&p, &bath, 0.05, 100).unwrap();
        let h = build_hamiltonian(&p, OracleKind::Bare, &bath).unwrap();
        let free = evolve_survival(&h, &[5.0]).unwrap()[0].norm_sqr();
        assert!(watched > free, "QZE expected: {watched} vs {free}");
        let accelerated = pulsed_run(&p, &bath, 1.0, 5).unwrap();
        assert!(accelerated < free, "IZE expected: {accelerated} vs {free}");
        // single cycle is the single-shot survival
        let one = pulsed_run(&p, &bath, 0.7, 1).unwrap();
        let direct = evolve_survival(&h, &[0.7]).unwrap()[0].norm_sqr();
        assert_abs_diff_eq!(one, direct, epsilon = 1e-12);
    }

    #[test]
    fn empirical_rates_converge_to_closed_forms_at_moderate_size() {
        let p = reference();
        let bath = discretize(&p.form_factor, 1500).unwrap();
        let cont = empirical_gamma_eff(
            &p,
            &bath,
            MeasurementScheme::Continuous { big_gamma: 2.0 },
        )
        .unwrap();
        assert_relative_eq!(
            cont,
            crate::measurement::effective_rate_continuous(&p, 2.0).unwrap(),
            max_relative = 0.02
        );
        let pulsed =
            empirical_gamma_eff(&p, &bath, MeasurementScheme::Pulsed { tau: 0.01 }).unwrap();
        assert_relative_eq!(
            pulsed,
            crate::measurement::effective_rate_pulsed(&p, 0.01).unwrap(),
            max_relative = 0.02
        );
    }

    #[test]
    fn rabi_empirical_window_requires_positive_k() {
        let p = reference();
        let bath = discretize(&p.form_factor, 64).unwrap();
        assert!(matches!(
            empirical_gamma_eff(&p, &bath, MeasurementScheme::Rabi { k: 0.0 }),
            Err(ZenoError::NumericalFailure(_))
        ));
    }

    #[test]
    fn times_validation() {
        let p = reference();
        let bath = discretize(&p.form_factor, 16).unwrap();
        let h = build_hamiltonian(&p, OracleKind::Bare, &bath).unwrap();
        assert!(evolve_survival(&h, &[]).is_err());
        assert!(evolve_survival(&h, &[-1.0]).is_err());
        assert!(evolve_survival(&h, &[1.0, 1.0]).is_err());
        assert!(evolve_survival(&h, &[2.0, 1.0]).is_err());
    }
}
