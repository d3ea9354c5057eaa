//! Quadrature building blocks: Gauss-Legendre rules, log-spaced panelization
//! of (0, infinity), and the scheme descriptor shared by all improper
//! integrals in the calculus.

use crate::error::{Error, Result};

/// Discretization policy for the improper integrals of the calculus.
///
/// `split_radius` separates the near-origin treatment (analytic first-order
/// correction below a derived epsilon) from panel integration; `far_truncation`
/// overrides the automatic tail cutoff chosen from the Levy tail mass; `tol`
/// is the target absolute accuracy per applied vector, per unit norm.
#[derive(Debug, Clone)]
pub struct QuadratureScheme {
    pub split_radius: f64,
    pub far_truncation: Option<f64>,
    pub nodes_per_panel: usize,
    pub panels: usize,
    pub tol: f64,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        QuadratureScheme {
            split_radius: 1.0,
            far_truncation: None,
            nodes_per_panel: 16,
            panels: 24,
            tol: 1e-8,
        }
    }
}

impl QuadratureScheme {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_radius > 0.0) {
            return Err(Error::domain("split_radius must be positive"));
        }
        if let Some(r) = self.far_truncation {
            if !(r > 0.0) {
                return Err(Error::domain("far_truncation must be positive"));
            }
        }
        if self.nodes_per_panel < 2 || self.panels < 1 {
            return Err(Error::domain(
                "quadrature needs at least 2 nodes per panel and 1 panel",
            ));
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain("quadrature tolerance must be positive"));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Quadrature nodes and weights for integrals over [a, b] with 0 < a < b,
/// using `panels` log-spaced panels of `nodes_per_panel` Gauss-Legendre
/// nodes each. The log spacing clusters nodes near a, matching integrands
/// with power-law behavior at the origin.
pub fn log_panel_rule(a: f64, b: f64, panels: usize, nodes_per_panel: usize) -> Vec<(f64, f64)> {
    assert!(a > 0.0 && b > a);
    let (gx, gw) = gauss_legendre(nodes_per_panel);
    let la = a.ln();
    let lb = b.ln();
    let h = (lb - la) / panels as f64;
    let mut rule = Vec::with_capacity(panels * nodes_per_panel);
    for p in 0..panels {
        let lo = la + h * p as f64;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in gx.iter().zip(gw.iter()) {
            let ly = mid + half * x;
            let y = ly.exp();
            // d(e^ly) = y d(ly): the Jacobian folds into the weight.
            rule.push((y, w * half * y));
        }
    }
    rule
}

/// Integrate f over [a, b] with the log-panel rule.
pub fn integrate_log_panels<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    panels: usize,
    nodes_per_panel: usize,
    mut f: F,
) -> f64 {
    log_panel_rule(a, b, panels, nodes_per_panel)
        .into_iter()
        .map(|(x, w)| w * f(x))
        .sum()
}

/// Log-spaced grid of `count` points in [lo, hi], endpoints included.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (ll, lh) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (ll + (lh - ll) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
