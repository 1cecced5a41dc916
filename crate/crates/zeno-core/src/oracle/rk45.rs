//! Adaptive Dormand-Prince 5(4) integration of i d/dt psi = H psi for the
//! structured oracle Hamiltonians. Used as the independent time-stepping
//! route against the eigendecomposition path at small mode counts.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};

use super::OracleHamiltonian;

const MAX_STEPS: usize = 20_000_000;

// Dormand-Prince Butcher tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 4th-order embedded weights (include the FSAL stage k7).
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;

fn axpy(out: &mut [Complex64], y: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) {
    for i in 0..out.len() {
        let mut acc = y[i];
        for &(c, k) in terms {
            acc += h * c * k[i];
        }
        out[i] = acc;
    }
}

/// Survival amplitudes <a|psi(t)> at the requested times from adaptive
/// explicit integration with local error `tol_per_unit_time * h` per
/// step, starting from psi(0) = |a>.
pub fn evolve_survival_rk45(
    h_op: &OracleHamiltonian,
    times: &[f64],
    tol_per_unit_time: f64,
) -> Result<Vec<Complex64>> {
    super::validate_times(times)?;
    if tol_per_unit_time <= 0.0 || tol_per_unit_time.is_nan() {
        return Err(ZenoError::Domain("tolerance must be positive".into()));
    }
    let dim = h_op.dim();
    let mut psi: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); dim];
    psi[0] = Complex64::new(1.0, 0.0);

    let rhs = |y: &[Complex64], out: &mut [Complex64]| {
        h_op.apply(y, out);
        for v in out.iter_mut() {
            *v *= Complex64::new(0.0, -1.0); // i psi' = H psi
        }
    };

    let mut k1 = vec![Complex64::new(0.0, 0.0); dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut k5 = k1.clone();
    let mut k6 = k1.clone();
    let mut k7 = k1.clone();
    let mut stage = k1.clone();
    let mut y5 = k1.clone();

    let mut t = 0.0_f64;
    let mut out = Vec::with_capacity(times.len());
    if times[0] == 0.0 {
        out.push(psi[0]);
    }
    let targets: Vec<f64> = times.iter().copied().filter(|&x| x > 0.0).collect();

    // conservative first step against the fastest diagonal frequency
    let mut h = 0.5 / (1.0 + h_op.max_diagonal_frequency());
    rhs(&psi, &mut k1);
    let mut steps = 0usize;

    for &target in &targets {
        while t < target {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(ZenoError::NumericalFailure(format!(
                    "rk45 exceeded {MAX_STEPS} steps at t = {t}"
                )));
            }
            let mut hs = h.min(target - t);
            loop {
                axpy(&mut stage, &psi, hs, &[(A21, &k1)]);
                rhs(&stage, &mut k2);
                axpy(&mut stage, &psi, hs, &[(A31, &k1), (A32, &k2)]);
                rhs(&stage, &mut k3);
                axpy(&mut stage, &psi, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
                rhs(&stage, &mut k4);
                axpy(
                    &mut stage,
                    &psi,
                    hs,
                    &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
                );
                rhs(&stage, &mut k5);
                axpy(
                    &mut stage,
                    &psi,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                );
                rhs(&stage, &mut k6);
                axpy(
                    &mut y5,
                    &psi,
                    hs,
                    &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
                );
                rhs(&y5, &mut k7); // FSAL
                let mut err = 0.0_f64;
                for i in 0..dim {
                    let e4 = psi[i]
                        + hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                            + E6 * k6[i]
                            + E7 * k7[i]);
                    err = err.max((y5[i] - e4).norm());
                }
                let tol = tol_per_unit_time * hs;
                if err <= tol || hs <= 1e-14 {
                    t += hs;
                    psi.copy_from_slice(&y5);
                    k1.copy_from_slice(&k7);
                    let grow = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
                    };
                    h = hs * grow;
                    break;
                }
                hs *= (0.9 * (tol / err).powf(0.2)).clamp(0.2, 0.9);
            }
        }
        out.push(psi[0]);
    }
    Ok(out)
}
