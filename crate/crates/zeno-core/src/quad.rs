//! Gauss-Legendre rules and the tangent map used to cover the real line.

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes are ascending and exactly antisymmetric: the lower half is
/// computed by Newton iteration on P_n and mirrored, so x[i] == -x[n-1-i]
/// bit for bit and the weights match pairwise.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre: need at least one node");
    let mut x = vec![0.0_f64; n];
    let mut w = vec![0.0_f64; n];
    let m = n / 2;
    for i in 0..m {
        // Tricomi-style initial guess for the i-th positive-side root,
        // counted from the upper end.
        let mut xi = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, xi);
            dp = d;
            let dx = p / d;
            xi -= dx;
            if dx.abs() <= 1e-15 * (1.0 + xi.abs()) {
                let (_, d2) = legendre_and_derivative(n, xi);
                dp = d2;
                break;
            }
        }
        let wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
        x[n - 1 - i] = xi;
        w[n - 1 - i] = wi;
        x[i] = -xi;
        w[i] = wi;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_and_derivative(n, 0.0);
        x[m] = 0.0;
        w[m] = 2.0 / (d * d);
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0_f64;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // derivative from the standard identity; at |x| = 1 the identity
    // degenerates but Newton never lands there.
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Quadrature rule for integrals over the whole real line, built from the
/// substitution omega = scale * tan(theta) with Gauss-Legendre nodes in
/// theta on (-pi/2, pi/2).
///
/// Returns ascending `(omega, weight)` pairs; the rule is exactly
/// antisymmetric because the underlying Legendre nodes are mirrored.
pub fn tangent_rule(n: usize, scale: f64) -> Vec<(f64, f64)> {
    assert!(scale > 0.0, "tangent_rule: scale must be positive");
    let (x, w) = gauss_legendre(n);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let m = n / 2;
    let mut out = vec![(0.0_f64, 0.0_f64); n];
    for i in (0..m).rev() {
        let theta = half_pi * x[n - 1 - i];
        let c = theta.cos();
        let omega = scale * theta.tan();
        let weight = half_pi * w[n - 1 - i] * scale / (c * c);
        out[n - 1 - i] = (omega, weight);
        out[i] = (-omega, weight);
    }
    if n % 2 == 1 {
        // theta = 0 exactly
        out[m] = (0.0, half_pi * w[m] * scale);
    }
    out
}

/// Integrate `f` over the real line with an n-point tangent-map rule.
pub fn integrate_real_line<F: Fn(f64) -> f64>(n: usize, scale: f64, f: F) -> f64 {
    tangent_rule(n, scale).iter().map(|&(x, w)| w * f(x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_order_rules_match_known_values() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3.0_f64.sqrt();
        assert_relative_eq!(x[1], r, max_relative = 1e-15);
        assert_relative_eq!(x[0], -r, max_relative = 1e-15);
        assert_relative_eq!(w[0], 1.0, max_relative = 1e-15);

        let (x, w) = gauss_legendre(3);
        assert_eq!(x[1], 0.0);
        assert_relative_eq!(x[2], (0.6_f64).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(w[1], 8.0 / 9.0, max_relative = 1e-14);
        assert_relative_eq!(w[0], 5.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // degree 2n-1 exactness
        let (x, w) = gauss_legendre(8);
        let integral: f64 = x
            .iter()
            .zip(&w)
            .map(|(&xi, &wi)| wi * (xi.powi(14) + 3.0 * xi.powi(7) + 1.0))
            .sum();
        assert_relative_eq!(integral, 2.0 / 15.0 + 2.0, max_relative = 1e-13);
    }

    #[test]
    fn weights_sum_to_two_at_high_order() {
        for n in [1, 7, 64, 501, 2000] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert_relative_eq!(s, 2.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn nodes_are_mirrored_bitwise() {
        let (x, w) = gauss_legendre(100);
        for i in 0..50 {
            assert_eq!(x[i], -x[99 - i]);
            assert_eq!(w[i], w[99 - i]);
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn tangent_rule_integrates_lorentzian_tails() {
        // integral of 1/(pi (1+x^2)) over R is 1; the map makes the
        // integrand constant in theta, so even small n is exact.
        let s = integrate_real_line(16, 1.0, |x| 1.0 / (std::f64::consts::PI * (1.0 + x * x)));
        assert_relative_eq!(s, 1.0, max_relative = 1e-14);
        // a gaussian needs genuine resolution
        let g = integrate_real_line(400, 1.0, |x| (-x * x).exp());
        assert_relative_eq!(g, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn tangent_rule_single_node_sits_at_zero() {
        let r = tangent_rule(1, 1.0);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, 0.0);
    }
}
