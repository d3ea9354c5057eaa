//! Scalar special functions: exponential integral E1 and the one-sided
//! stable density in its standardized form (Laplace transform exp(-lambda^alpha)).
//!
//! The stable density is evaluated by three routes depending on the argument:
//! the closed form for alpha = 1/2, a single-integral representation over
//! (0, pi) for small arguments, and the convergent large-argument power series
//! elsewhere. The routes are cross-checked in the tests.

use crate::quad::gauss_legendre;
use statrs::function::gamma::{gamma, ln_gamma};
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.5772156649015329;

/// Exponential integral E1(x) = int_x^inf e^(-t)/t dt for x > 0.
pub fn exp_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 requires a positive argument");
    if x <= 1.0 {
        // Power series around 0.
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..=60 {
            let kf = k as f64;
            term *= -x / kf;
            let contrib = -term / kf;
            sum += contrib;
            if contrib.abs() < 1e-18 * (1.0 + sum.abs()) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // Continued fraction (modified Lentz).
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for k in 1..200 {
            let a = -(k as f64) * (k as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x).exp() * h
    }
}

/// Zolotarev kernel A(phi) on a log scale; returns ln A(phi).
fn zolotarev_ln_a(alpha: f64, phi: f64) -> f64 {
    let ratio = alpha / (1.0 - alpha);
    ratio * (alpha * phi).sin().ln() + ((1.0 - alpha) * phi).sin().ln()
        - (1.0 / (1.0 - alpha)) * phi.sin().ln()
}

/// Value of A(0+) = alpha^(alpha/(1-alpha)) * (1-alpha), the minimum of the
/// kernel, which controls the super-exponential decay of the density at 0.
pub fn zolotarev_a_min(alpha: f64) -> f64 {
    alpha.powf(alpha / (1.0 - alpha)) * (1.0 - alpha)
}

fn stable_pdf_zolotarev(alpha: f64, x: f64, nodes: usize) -> f64 {
    let c = x.powf(-alpha / (1.0 - alpha));
    let (gx, gw) = gauss_legendre(nodes);
    let half = 0.5 * PI;
    let mut integral = 0.0;
    for (t, w) in gx.iter().zip(gw.iter()) {
        let phi = half + half * t;
        let ln_a = zolotarev_ln_a(alpha, phi);
        // Skip contributions that underflow to zero.
        if ln_a > 700.0 {
            continue;
        }
        let a = ln_a.exp();
        let e = -c * a;
        if e < -745.0 {
            continue;
        }
        integral += w * a * e.exp();
    }
    integral *= half;
    (alpha / (1.0 - alpha)) * x.powf(-1.0 / (1.0 - alpha)) * integral / PI
}

fn stable_pdf_series(alpha: f64, x: f64) -> f64 {
    let lx = x.ln();
    let mut sum = 0.0;
    for k in 1..=220 {
        let kf = k as f64;
        let ln_mag = ln_gamma(alpha * kf + 1.0) - ln_gamma(kf + 1.0) - (alpha * kf + 1.0) * lx;
        let s = (PI * kf * alpha).sin();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * s * ln_mag.exp();
        sum += term;
        if ln_mag < -40.0 && term.abs() < 1e-17 * (1.0 + sum.abs()) {
            break;
        }
    }
    sum / PI
}

/// Standardized one-sided stable density f_alpha(x): the density of the
/// positive random variable with E[e^(-lambda S)] = e^(-lambda^alpha),
/// 0 < alpha < 1. For the subordination time t, the measure nu_t is the law
/// of t^(1/alpha) S, handled by the caller through the scaling
/// f_t(u) = t^(-1/alpha) f_alpha(u t^(-1/alpha)).
pub fn stable_pdf_std(alpha: f64, x: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must be in (0,1)");
    if x <= 0.0 {
        return 0.0;
    }
    if (alpha - 0.5).abs() < 1e-14 {
        // (1/(2 sqrt(pi))) x^(-3/2) e^(-1/(4x))
        let e = -1.0 / (4.0 * x);
        if e < -745.0 {
            return 0.0;
        }
        return 0.5 / PI.sqrt() * x.powf(-1.5) * e.exp();
    }
    if x >= 1.0 {
        stable_pdf_series(alpha, x)
    } else {
        stable_pdf_zolotarev(alpha, x, 64)
    }
}

/// Leading-order tail of the standardized stable law:
/// P(S > x) ~ x^(-alpha) / Gamma(1 - alpha).
pub fn stable_tail_asymptotic(alpha: f64, x: f64) -> f64 {
    x.powf(-alpha) / gamma(1.0 - alpha)
}

/// Smallest standardized argument below which the density is negligible
/// (kernel exponent exceeds `cut`, so f < e^(-cut) times a bounded factor).
pub fn stable_left_cut(alpha: f64, cut: f64) -> f64 {
    (zolotarev_a_min(alpha) / cut).powf((1.0 - alpha) / alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_log_panels;
    use approx::assert_abs_diff_eq;

    #[test]
    fn e1_reference_values() {
        // Abramowitz & Stegun 5.1.
        assert_abs_diff_eq!(exp_integral_e1(1.0), 0.21938393439552026, epsilon = 1e-14);
        assert_abs_diff_eq!(exp_integral_e1(0.5), 0.5597735947761609, epsilon = 1e-13);
        assert_abs_diff_eq!(exp_integral_e1(2.0), 0.04890051070806112, epsilon = 1e-15);
        assert_abs_diff_eq!(exp_integral_e1(10.0), 4.156968929685325e-6, epsilon = 1e-18);
    }

    #[test]
    fn stable_half_matches_integral_and_series() {
        for &x in &[0.05f64, 0.2, 0.8] {
            let closed = 0.5 / PI.sqrt() * x.powf(-1.5) * (-1.0 / (4.0 * x)).exp();
            let integral = stable_pdf_zolotarev(0.5, x, 64);
            assert_abs_diff_eq!(integral, closed, epsilon = 1e-12 * (1.0 + closed));
        }
        for &x in &[1.0f64, 2.5, 40.0] {
            let closed = 0.5 / PI.sqrt() * x.powf(-1.5) * (-1.0 / (4.0 * x)).exp();
            let series = stable_pdf_series(0.5, x);
            assert_abs_diff_eq!(series, closed, epsilon = 1e-13 * (1.0 + closed));
        }
    }

    #[test]
    fn stable_routes_agree_at_switch() {
        for &alpha in &[0.25, 0.4, 0.6, 0.75] {
            for &x in &[0.7, 0.85, 1.0] {
                let a = stable_pdf_zolotarev(alpha, x, 64);
                let b = stable_pdf_series(alpha, x);
                assert!(
                    (a - b).abs() <= 5e-10 * (1.0 + a.abs()),
                    "alpha={alpha} x={x}: zolotarev {a} vs series {b}"
                );
            }
        }
    }

    #[test]
    fn stable_density_normalizes() {
        for &alpha in &[0.25, 0.5, 0.75] {
            let lo = stable_left_cut(alpha, 46.0).max(1e-10);
            let hi = 1e12f64;
            let mass = integrate_log_panels(lo, hi, 60, 20, |x| stable_pdf_std(alpha, x));
            let tail = stable_tail_asymptotic(alpha, hi);
            assert!(
                (mass + tail - 1.0).abs() < 1e-6,
                "alpha={alpha}: mass {mass} tail {tail}"
            );
        }
    }

    #[test]
    fn stable_laplace_transform_matches_exponent() {
        // int e^(-lambda x) f(x) dx = e^(-lambda^alpha).
        for &alpha in &[0.25, 0.75] {
            for &lambda in &[0.5f64, 1.0, 3.0] {
                let lo = stable_left_cut(alpha, 46.0).max(1e-12);
                let hi = 1e9f64;
                let val = integrate_log_panels(lo, hi, 70, 20, |x| {
                    (-lambda * x).exp() * stable_pdf_std(alpha, x)
                });
                let exact = (-lambda.powf(alpha)).exp();
                assert!(
                    (val - exact).abs() < 1e-9,
                    "alpha={alpha} lambda={lambda}: {val} vs {exact}"
                );
            }
        }
    }
}
