//! Eigensolvers for arrowhead matrices: a head level coupled to a sorted
//! diagonal of bath modes.
//!
//! The survival amplitude only needs the eigenvalues and the head
//! component of each eigenvector. Both come from the secular function
//!   f(E) = E - head - sum_k phi_k^2 / (E - d_k),
//! whose roots interlace the diagonal entries: bisection per interval is
//! monotone and cannot miss a root. The head weight of root E_n is
//! 1/f'(E_n).
//!
//! Far-tail roots hug their poles closer than one ulp of the pole
//! position; their weights are below 1e-17 and the solver deliberately
//! lets them collapse onto the pole (weight 0) rather than chase digits
//! that f64 cannot hold. The complex-head variant used for the monitored
//! (non-Hermitian) Hamiltonian therefore solves for the root *offset*
//! from its pole instead, which keeps every residue finite.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, ZenoError};

/// Merge exactly coincident diagonal entries, summing their squared
/// couplings. Input must be sorted ascending.
pub fn merge_sorted_modes(d: &[f64], phi2: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut dm: Vec<f64> = Vec::with_capacity(d.len());
    let mut pm: Vec<f64> = Vec::with_capacity(d.len());
    for (&di, &pi) in d.iter().zip(phi2) {
        if let Some(last) = dm.last() {
            if *last == di {
                *pm.last_mut().unwrap() += pi;
                continue;
            }
        }
        dm.push(di);
        pm.push(pi);
    }
    (dm, pm)
}

fn secular(head: f64, d: &[f64], phi2: &[f64], e: f64) -> f64 {
    let mut s = 0.0;
    for (&dk, &pk) in d.iter().zip(phi2) {
        s += pk / (e - dk);
    }
    e - head - s
}

fn head_weight(d: &[f64], phi2: &[f64], e: f64) -> f64 {
    let mut s = 1.0;
    for (&dk, &pk) in d.iter().zip(phi2) {
        let diff = e - dk;
        s += pk / (diff * diff);
    }
    1.0 / s
}

/// Eigenvalues and head weights |<a|n>|^2 of the real symmetric arrowhead
/// with the given head energy and sorted, deduplicated modes.
///
/// Returns ascending eigenvalues. The weights sum to 1; deviation beyond
/// 1e-8 is reported as a numerical failure.
pub fn real_eigen(head: f64, d: &[f64], phi2: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    if n == 0 {
        // no bath: the head is the only level
        return Ok((vec![head], vec![1.0]));
    }
    debug_assert!(d.windows(2).all(|p| p[0] < p[1]), "modes must be sorted");
    let radius: f64 = phi2.iter().map(|p| p.sqrt()).sum::<f64>() + 1.0;
    let lo0 = d[0].min(head) - radius;
    let hi_last = d[n - 1].max(head) + radius;

    let roots: Vec<(f64, f64)> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let (mut a, mut b) = match i {
                0 => (lo0, d[0]),
                _ if i == n => (d[n - 1], hi_last),
                _ => (d[i - 1], d[i]),
            };
            // f is -inf at the lower end and +inf at the upper end of
            // every interior interval, and strictly increasing.
            for _ in 0..130 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if secular(head, d, phi2, mid) < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
                if (b - a) <= f64::EPSILON * a.abs().max(b.abs()) {
                    break;
                }
            }
            let e = 0.5 * (a + b);
            (e, head_weight(d, phi2, e))
        })
        .collect();

    let (evals, weights): (Vec<f64>, Vec<f64>) = roots.into_iter().unzip();
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(ZenoError::NumericalFailure(format!(
            "arrowhead head weights sum to {total}, expected 1"
        )));
    }
    Ok((evals, weights))
}

/// Eigen-decomposition data for the arrowhead with a *complex* head
/// energy (real modes): the resolvent poles w_n of
///   g(w) = w - head - sum phi^2/(w - d)
/// and their residues 1/g'(w_n). Bath-like roots are solved in offset
/// coordinates delta = w - d_m.
///
/// Returns (pole, residue) pairs; bath poles are reported as
/// (d_m, delta_m, residue) so callers can keep full precision, and the
/// lone head root in absolute coordinates.
pub struct ComplexArrowheadEigen {
    /// Per bath mode: (pole base d_m, offset delta_m, residue c_m).
    pub bath: Vec<(f64, Complex64, Complex64)>,
    /// Head-dominated root.
    pub head_root: Complex64,
    /// Residue at the head root.
    pub head_residue: Complex64,
}

pub fn complex_head_eigen(
    head: Complex64,
    d: &[f64],
    phi2: &[f64],
) -> Result<ComplexArrowheadEigen> {
    let n = d.len();
    debug_assert!(d.windows(2).all(|p| p[0] < p[1]), "modes must be sorted");

    let bath: Vec<(f64, Complex64, Complex64)> = (0..n)
        .into_par_iter()
        .map(|m| -> Result<(f64, Complex64, Complex64)> {
            let dm = d[m];
            let pm = phi2[m];
            // rest-sum at the pole for the seed
            let mut rest = Complex64::new(0.0, 0.0);
            for (k, (&dk, &pk)) in d.iter().zip(phi2).enumerate() {
                if k != m {
                    rest += pk / Complex64::new(dm - dk, 0.0);
                }
            }
            let mut delta = pm / (Complex64::new(dm, 0.0) - head - rest);
            let mut ok = false;
            for _ in 0..60 {
                // h(delta) and h'(delta) in one pass
                let mut s = Complex64::new(0.0, 0.0);
                let mut sp = Complex64::new(0.0, 0.0);
                for (k, (&dk, &pk)) in d.iter().zip(phi2).enumerate() {
                    if k != m {
                        let diff = (dm - dk) + delta;
                        let t = pk / diff;
                        s += t;
                        sp += t / diff;
                    }
                }
                let h = dm + delta - head - pm / delta - s;
                let hp = Complex64::new(1.0, 0.0) + pm / (delta * delta) + sp;
                let step = h / hp;
                delta -= step;
                if step.norm() <= 1e-14 * delta.norm() {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Err(ZenoError::NumericalFailure(format!(
                    "complex arrowhead offset Newton stalled at mode {m}"
                )));
            }
            // residue 1/g'(w) evaluated in offset form
            let mut sp = Complex64::new(0.0, 0.0);
            for (k, (&dk, &pk)) in d.iter().zip(phi2).enumerate() {
                if k != m {
                    let diff = (dm - dk) + delta;
                    sp += pk / (diff * diff);
                }
            }
            let gp = Complex64::new(1.0, 0.0) + pm / (delta * delta) + sp;
            Ok((dm, delta, 1.0 / gp))
        })
        .collect::<Result<_>>()?;

    // head root in absolute coordinates
    let sigma_at = |w: Complex64| -> (Complex64, Complex64) {
        let mut s = Complex64::new(0.0, 0.0);
        let mut sp = Complex64::new(0.0, 0.0);
        for (&dk, &pk) in d.iter().zip(phi2) {
            let diff = w - dk;
            let t = pk / diff;
            s += t;
            sp += t / diff;
        }
        (s, sp)
    };
    let mut w = head + sigma_at(head).0;
    let mut ok = false;
    for _ in 0..60 {
        let (s, sp) = sigma_at(w);
        let g = w - head - s;
        let gp = Complex64::new(1.0, 0.0) + sp;
        let step = g / gp;
        w -= step;
        if step.norm() <= 1e-15 * w.norm().max(1.0) {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(ZenoError::NumericalFailure(
            "complex arrowhead head-root Newton stalled".into(),
        ));
    }
    let (_, sp) = sigma_at(w);
    let head_residue = 1.0 / (Complex64::new(1.0, 0.0) + sp);

    let total: Complex64 =
        head_residue + bath.iter().map(|&(_, _, c)| c).sum::<Complex64>();
    if (total - Complex64::new(1.0, 0.0)).norm() > 1e-8 {
        return Err(ZenoError::NumericalFailure(format!(
            "complex arrowhead residues sum to {total}, expected 1"
        )));
    }
    Ok(ComplexArrowheadEigen {
        bath,
        head_root: w,
        head_residue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_by_two_against_closed_form() {
        // head 1 coupled to a single mode at 3 with phi = 0.5:
        // eigenvalues (4 +- sqrt(5))/2
        let (e, w) = real_eigen(1.0, &[3.0], &[0.25]).unwrap();
        let s = 5.0_f64.sqrt();
        assert_abs_diff_eq!(e[0], (4.0 - s) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e[1], (4.0 + s) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[0] + w[1], 1.0, epsilon = 1e-14);
        // weight of the lower root: |<a|n>|^2 = 1/(1 + phi^2/(e-d)^2)
        let expected = 1.0 / (1.0 + 0.25 / (e[0] - 3.0).powi(2));
        assert_abs_diff_eq!(w[0], expected, epsilon = 1e-14);
    }

    #[test]
    fn interlacing_and_completeness() {
        let d = [-2.0, -0.5, 0.1, 1.0, 4.0];
        let phi2 = [0.01, 0.02, 0.03, 0.01, 0.05];
        let (e, w) = real_eigen(0.3, &d, &phi2).unwrap();
        assert_eq!(e.len(), 6);
        assert!(e.windows(2).all(|p| p[0] < p[1]));
        for i in 0..d.len() {
            assert!(e[i] < d[i] && d[i] < e[i + 1]);
        }
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn merge_collapses_exact_duplicates() {
        let (d, p) = merge_sorted_modes(&[1.0, 1.0, 2.0], &[0.1, 0.2, 0.3]);
        assert_eq!(d, vec![1.0, 2.0]);
        assert_eq!(p, vec![0.30000000000000004, 0.3]);
    }

    #[test]
    fn complex_head_reduces_to_real_case() {
        let d = [-1.0, 0.5, 2.0];
        let phi2 = [0.02, 0.01, 0.04];
        let eig = complex_head_eigen(Complex64::new(0.8, 0.0), &d, &phi2).unwrap();
        let (e_real, w_real) = real_eigen(0.8, &d, &phi2).unwrap();
        // the head root is the one closest to the head energy
        let mut all: Vec<(Complex64, Complex64)> = eig
            .bath
            .iter()
            .map(|&(dm, delta, c)| (Complex64::new(dm, 0.0) + delta, c))
            .collect();
        all.push((eig.head_root, eig.head_residue));
        all.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
        for (i, (z, c)) in all.iter().enumerate() {
            assert_abs_diff_eq!(z.re, e_real[i], epsilon = 1e-10);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(c.re, w_real[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn complex_head_roots_sit_in_the_expected_strip() {
        // head + i*G/2 pushes every root into 0 < Im w <= G/2
        let d: Vec<f64> = (0..40).map(|i| -2.0 + 0.1 * i as f64).collect();
        let phi2 = vec![2.5e-4; 40];
        let g = 0.8;
        let eig = complex_head_eigen(Complex64::new(1.0, g / 2.0), &d, &phi2).unwrap();
        for &(_, delta, _) in &eig.bath {
            assert!(delta.im > 0.0 && delta.im <= g / 2.0 + 1e-12);
        }
        assert!(eig.head_root.im > 0.0 && eig.head_root.im <= g / 2.0);
    }
}
