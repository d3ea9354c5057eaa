//! Multidimensional Bernstein functions: nonpositive smooth functions on the
//! open negative orthant whose first-order partials are absolutely monotone.
//! Every such function has the integral representation
//!
//!   psi(s) = c0 + c1 . s + int (e^(s.u) - 1) d mu(u)
//!
//! with c0 <= 0, drift c1 in the nonnegative orthant and a positive measure mu
//! on R+^n \ {0}. This module holds the closed-form families, the explicit
//! triple representation, ray-sum composites, evaluation, and the
//! finite-difference class-membership checker.

use crate::error::{Error, Result};
use crate::quad::{log_panel_rule, QuadratureScheme};
use crate::special::exp_integral_e1;
use statrs::function::gamma::gamma;

/// A point mass of the Levy measure: strictly positive weight at a nonzero
/// location in the closed nonnegative orthant.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub location: Vec<f64>,
    pub weight: f64,
}

/// Supported scalar Levy densities along a ray, rho(r) on (0, inf).
#[derive(Debug, Clone, PartialEq)]
pub enum RayKind {
    /// rho(r) = alpha / Gamma(1-alpha) * r^(-1-alpha); generates -(-s)^alpha.
    StablePower { alpha: f64 },
    /// rho(r) = r^(-1) e^(-r); generates -log(1 - s).
    ExpGamma,
}

/// A scalar density pushed forward along a direction of the nonnegative
/// orthant, scaled by `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct RayDensity {
    pub direction: Vec<f64>,
    pub weight: f64,
    pub kind: RayKind,
}

/// The Levy triple (c0, c1, mu) of the integral representation. The measure
/// is split into a finite atom list and scalar densities along rays; this
/// covers the fractional powers, the logarithm, compound Poisson functions
/// and all their ray-sum composites while keeping every quadrature
/// one-dimensional.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyTriple {
    pub c0: f64,
    pub c1: Vec<f64>,
    pub atoms: Vec<Atom>,
    pub rays: Vec<RayDensity>,
}

/// One term of a ray-sum composite: a one-dimensional Bernstein function
/// evaluated along a direction, psi(s) = sum_i phi_i(c_i . s).
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub direction: Vec<f64>,
    pub inner: Box<BernsteinSpec>,
}

/// A Bernstein function of the class handled by this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum BernsteinSpec {
    /// psi(s) = -(-s)^alpha, 0 < alpha < 1, one-dimensional.
    FractionalPower { alpha: f64 },
    /// psi(s) = -log(1 - s), one-dimensional.
    Log,
    /// psi(s) = sum_k w_k (e^(s.u_k) - 1).
    CompoundPoisson { dimension: usize, atoms: Vec<Atom> },
    /// psi(s) = c0 + c1 . s with c0 <= 0 and c1 in the nonnegative orthant.
    Linear { c0: f64, c1: Vec<f64> },
    /// Explicit Levy triple.
    Triple(LevyTriple),
    /// Sum of one-dimensional functions along rays.
    RaySum { dimension: usize, rays: Vec<Ray> },
}

impl RayKind {
    /// Density value at r > 0 for the unit-weight kind.
    pub fn density(&self, r: f64) -> f64 {
        match self {
            RayKind::StablePower { alpha } => {
                alpha / gamma(1.0 - alpha) * r.powf(-1.0 - alpha)
            }
            RayKind::ExpGamma => (-r).exp() / r,
        }
    }

    /// Tail mass int_R^inf rho(r) dr of the unit-weight kind.
    pub fn tail_mass(&self, r: f64) -> f64 {
        match self {
            RayKind::StablePower { alpha } => r.powf(-alpha) / gamma(1.0 - alpha),
            RayKind::ExpGamma => exp_integral_e1(r),
        }
    }

    /// Partial first moment int_0^eps r rho(r) dr of the unit-weight kind.
    pub fn partial_first_moment(&self, eps: f64) -> f64 {
        match self {
            RayKind::StablePower { alpha } => {
                alpha / gamma(1.0 - alpha) * eps.powf(1.0 - alpha) / (1.0 - alpha)
            }
            RayKind::ExpGamma => 1.0 - (-eps).exp(),
        }
    }

    /// Partial second moment int_0^eps r^2 rho(r) dr of the unit-weight kind.
    pub fn partial_second_moment(&self, eps: f64) -> f64 {
        match self {
            RayKind::StablePower { alpha } => {
                alpha / gamma(1.0 - alpha) * eps.powf(2.0 - alpha) / (2.0 - alpha)
            }
            RayKind::ExpGamma => 1.0 - (-eps).exp() * (1.0 + eps),
        }
    }

    /// Near-origin cut below which the first-order Taylor correction of
    /// int (e^(-lambda r) - 1) rho dr is accurate to `err_budget`.
    fn origin_cut(&self, lambda: f64, err_budget: f64) -> f64 {
        debug_assert!(lambda > 0.0 && err_budget > 0.0);
        // Solve (lambda^2 / 2) * m2(eps) = err_budget via the closed forms.
        let eps = match self {
            RayKind::StablePower { alpha } => {
                let coef = alpha / gamma(1.0 - alpha) / (2.0 - alpha);
                (2.0 * err_budget / (lambda * lambda * coef)).powf(1.0 / (2.0 - alpha))
            }
            // m2(eps) ~ eps^2 / 2 near zero.
            RayKind::ExpGamma => 2.0 * (err_budget.sqrt() / lambda),
        };
        eps.clamp(1e-90, 0.5)
    }

    /// Far cut beyond which replacing the integrand by its limit -rho(r)
    /// leaves an error below `err_budget`.
    fn far_cut(&self, lambda: f64, err_budget: f64) -> f64 {
        debug_assert!(lambda > 0.0 && err_budget > 0.0);
        let mut r = 1.0f64;
        // The dropped piece is bounded by e^(-lambda R) * tail(R).
        for _ in 0..120 {
            if (-lambda * r).exp() * self.tail_mass(r) <= err_budget {
                return r;
            }
            r *= 1.5;
        }
        r
    }

    /// int_0^inf (e^(-lambda r) - 1) rho(r) dr for the unit-weight kind,
    /// with a certified absolute error bound. lambda >= 0.
    pub fn levy_integral(&self, lambda: f64, quad: &QuadratureScheme) -> (f64, f64) {
        if lambda == 0.0 {
            return (0.0, 0.0);
        }
        let budget = quad.tol / 8.0;
        let eps = self.origin_cut(lambda, budget);
        let far = self.far_cut(lambda, budget).max(4.0 * eps);

        // Near-origin first-order correction: integrand ~ -lambda r rho(r).
        let near = -lambda * self.partial_first_moment(eps);
        let near_err = 0.5 * lambda * lambda * self.partial_second_moment(eps);

        // Far correction: integrand ~ -rho(r) beyond the cut.
        let far_term = -self.tail_mass(far);
        let far_err = (-lambda * far).exp() * self.tail_mass(far);

        // Panels across the bulk, with an embedded error estimate from a
        // lower-order pass.
        let f = |r: f64| ((-lambda * r).exp() - 1.0) * self.density(r);
        let hi: f64 = log_panel_rule(eps, far, quad.panels, quad.nodes_per_panel)
            .into_iter()
            .map(|(r, w)| w * f(r))
            .sum();
        let lo: f64 = log_panel_rule(eps, far, quad.panels, (quad.nodes_per_panel / 2).max(4))
            .into_iter()
            .map(|(r, w)| w * f(r))
            .sum();
        let quad_err = (hi - lo).abs();

        (near + hi + far_term, near_err + far_err + quad_err)
    }
}

impl RayDensity {
    pub fn validate(&self, dimension: usize) -> Result<()> {
        validate_direction(&self.direction, dimension)?;
        if !(self.weight > 0.0) {
            return Err(Error::domain("ray density weight must be positive"));
        }
        if let RayKind::StablePower { alpha } = self.kind {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::domain(format!(
                    "stable exponent alpha must lie in (0,1), got {alpha}"
                )));
            }
        }
        Ok(())
    }

    /// Contribution of this ray to psi(s): weight * int (e^(s.c r) - 1) rho dr.
    pub fn eval(&self, s: &[f64], quad: &QuadratureScheme) -> (f64, f64) {
        let lambda = -dot(&self.direction, s);
        let (v, e) = self.kind.levy_integral(lambda, quad);
        (self.weight * v, self.weight * e)
    }
}

fn validate_direction(direction: &[f64], dimension: usize) -> Result<()> {
    if direction.len() != dimension {
        return Err(Error::shape(format!(
            "direction has length {} but the ambient dimension is {}",
            direction.len(),
            dimension
        )));
    }
    if direction.iter().any(|&c| c < 0.0) || direction.iter().all(|&c| c == 0.0) {
        return Err(Error::domain(
            "ray directions must be nonzero with nonnegative components",
        ));
    }
    Ok(())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

impl LevyTriple {
    pub fn dimension(&self) -> usize {
        self.c1.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dimension();
        if n == 0 {
            return Err(Error::shape("Levy triple needs dimension >= 1"));
        }
        if self.c0 > 0.0 {
            return Err(Error::domain(format!("c0 must be <= 0, got {}", self.c0)));
        }
        if self.c1.iter().any(|&c| c < 0.0) {
            return Err(Error::domain("drift c1 must be componentwise nonnegative"));
        }
        for a in &self.atoms {
            if a.location.len() != n {
                return Err(Error::shape("atom location dimension mismatch"));
            }
            if !(a.weight > 0.0) {
                return Err(Error::domain("atom weights must be strictly positive"));
            }
            if a.location.iter().any(|&u| u < 0.0) || l1_norm(&a.location) == 0.0 {
                return Err(Error::domain(
                    "atom locations must be nonzero points of the nonnegative orthant",
                ));
            }
        }
        for ray in &self.rays {
            ray.validate(n)?;
        }
        Ok(())
    }

    /// The standing integrability certificate int min(1, |u|_1) d mu. Finite
    /// for every constructible triple; returned so callers can record it.
    pub fn integrability_bound(&self) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| a.weight * l1_norm(&a.location).min(1.0))
            .sum();
        let rays: f64 = self
            .rays
            .iter()
            .map(|ray| {
                let scale = l1_norm(&ray.direction);
                // int min(1, scale r) rho(r) dr = scale * m1(1/scale) + tail(1/scale)
                let cut = 1.0 / scale;
                ray.weight
                    * (scale * ray.kind.partial_first_moment(cut) + ray.kind.tail_mass(cut))
            })
            .sum();
        atoms + rays
    }

    /// Total mass of the atomic part plus the (finite or infinite) density
    /// mass is not meaningful for unbounded densities; this returns only the
    /// atomic mass, which bounds compound Poisson operators.
    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn scaled(&self, a: f64) -> LevyTriple {
        LevyTriple {
            c0: a * self.c0,
            c1: self.c1.iter().map(|&c| a * c).collect(),
            atoms: self
                .atoms
                .iter()
                .map(|at| Atom {
                    location: at.location.clone(),
                    weight: a * at.weight,
                })
                .collect(),
            rays: self
                .rays
                .iter()
                .map(|r| RayDensity {
                    direction: r.direction.clone(),
                    weight: a * r.weight,
                    kind: r.kind.clone(),
                })
                .collect(),
        }
    }

    pub fn plus(&self, other: &LevyTriple) -> Result<LevyTriple> {
        if self.dimension() != other.dimension() {
            return Err(Error::shape("cannot add triples of different dimension"));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        Ok(LevyTriple {
            c0: self.c0 + other.c0,
            c1: self
                .c1
                .iter()
                .zip(&other.c1)
                .map(|(a, b)| a + b)
                .collect(),
            atoms,
            rays,
        })
    }

    /// Evaluate the integral representation at s in the open negative orthant.
    pub fn eval(&self, s: &[f64], quad: &QuadratureScheme) -> Result<f64> {
        check_negative_orthant(s, self.dimension())?;
        let mut value = self.c0 + dot(&self.c1, s);
        let mut err = 0.0;
        for a in &self.atoms {
            value += a.weight * ((dot(&a.location, s)).exp() - 1.0);
        }
        for ray in &self.rays {
            let (v, e) = ray.eval(s, quad);
            value += v;
            err += e;
        }
        if err > quad.tol * (1.0 + value.abs()) {
            return Err(Error::accuracy(
                "Levy integral quadrature did not meet the tolerance",
                err,
            ));
        }
        Ok(value)
    }
}

fn check_negative_orthant(s: &[f64], dimension: usize) -> Result<()> {
    if s.len() != dimension {
        return Err(Error::shape(format!(
            "argument has dimension {} but the function has dimension {}",
            s.len(),
            dimension
        )));
    }
    if s.iter().any(|&x| x >= 0.0 || !x.is_finite()) {
        return Err(Error::domain(
            "arguments must lie strictly inside the negative orthant",
        ));
    }
    Ok(())
}

impl BernsteinSpec {
    pub fn dimension(&self) -> usize {
        match self {
            BernsteinSpec::FractionalPower { .. } | BernsteinSpec::Log => 1,
            BernsteinSpec::CompoundPoisson { dimension, .. } => *dimension,
            BernsteinSpec::Linear { c1, .. } => c1.len(),
            BernsteinSpec::Triple(t) => t.dimension(),
            BernsteinSpec::RaySum { dimension, .. } => *dimension,
        }
    }

    pub fn family_tag(&self) -> &'static str {
        match self {
            BernsteinSpec::FractionalPower { .. } => "frac",
            BernsteinSpec::Log => "log",
            BernsteinSpec::CompoundPoisson { .. } => "cpois",
            BernsteinSpec::Linear { .. } => "linear",
            BernsteinSpec::Triple(_) => "triple",
            BernsteinSpec::RaySum { .. } => "raysum",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BernsteinSpec::FractionalPower { alpha } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::domain(format!(
                        "fractional power needs alpha in (0,1), got {alpha}"
                    )));
                }
                Ok(())
            }
            BernsteinSpec::Log => Ok(()),
            BernsteinSpec::CompoundPoisson { dimension, atoms } => {
                if atoms.is_empty() {
                    return Err(Error::domain("compound Poisson needs at least one atom"));
                }
                let t = LevyTriple {
                    c0: 0.0,
                    c1: vec![0.0; *dimension],
                    atoms: atoms.clone(),
                    rays: vec![],
                };
                t.validate()
            }
            BernsteinSpec::Linear { c0, c1 } => {
                if c1.is_empty() {
                    return Err(Error::shape("linear family needs dimension >= 1"));
                }
                if *c0 > 0.0 {
                    return Err(Error::domain("linear constant c0 must be <= 0"));
                }
                if c1.iter().any(|&c| c < 0.0) {
                    return Err(Error::domain("linear drift must be nonnegative"));
                }
                Ok(())
            }
            BernsteinSpec::Triple(t) => t.validate(),
            BernsteinSpec::RaySum { dimension, rays } => {
                if rays.is_empty() {
                    return Err(Error::domain("ray sum needs at least one ray"));
                }
                for ray in rays {
                    validate_direction(&ray.direction, *dimension)?;
                    if ray.inner.dimension() != 1 {
                        return Err(Error::shape(
                            "ray-sum inner functions must be one-dimensional",
                        ));
                    }
                    ray.inner.validate()?;
                }
                Ok(())
            }
        }
    }

    /// psi(-0) = lim_{s -> -0} psi(s), exact for every variant.
    pub fn limit_at_zero(&self) -> f64 {
        match self {
            BernsteinSpec::FractionalPower { .. } | BernsteinSpec::Log => 0.0,
            BernsteinSpec::CompoundPoisson { .. } => 0.0,
            BernsteinSpec::Linear { c0, .. } => *c0,
            BernsteinSpec::Triple(t) => t.c0,
            BernsteinSpec::RaySum { rays, .. } => {
                rays.iter().map(|r| r.inner.limit_at_zero()).sum()
            }
        }
    }

    /// Whether psi is bounded on the negative orthant (needed by the
    /// boundedness corollary): true exactly when the representation carries
    /// no drift and no density rays.
    pub fn is_bounded(&self) -> bool {
        match self {
            BernsteinSpec::FractionalPower { .. } | BernsteinSpec::Log => false,
            BernsteinSpec::CompoundPoisson { .. } => true,
            BernsteinSpec::Linear { c1, .. } => c1.iter().all(|&c| c == 0.0),
            BernsteinSpec::Triple(t) => t.rays.is_empty() && t.c1.iter().all(|&c| c == 0.0),
            BernsteinSpec::RaySum { rays, .. } => rays.iter().all(|r| r.inner.is_bounded()),
        }
    }

    /// Evaluate psi at a point of the open negative orthant. Closed forms are
    /// used where available; the Triple variant goes through quadrature.
    pub fn eval(&self, s: &[f64], quad: &QuadratureScheme) -> Result<f64> {
        check_negative_orthant(s, self.dimension())?;
        match self {
            BernsteinSpec::FractionalPower { alpha } => Ok(-((-s[0]).powf(*alpha))),
            BernsteinSpec::Log => Ok(-(1.0 - s[0]).ln()),
            BernsteinSpec::CompoundPoisson { atoms, .. } => Ok(atoms
                .iter()
                .map(|a| a.weight * ((dot(&a.location, s)).exp() - 1.0))
                .sum()),
            BernsteinSpec::Linear { c0, c1 } => Ok(c0 + dot(c1, s)),
            BernsteinSpec::Triple(t) => t.eval(s, quad),
            BernsteinSpec::RaySum { rays, .. } => {
                let mut total = 0.0;
                for ray in rays {
                    let proj = dot(&ray.direction, s);
                    total += ray.inner.eval(&[proj], quad)?;
                }
                Ok(total)
            }
        }
    }

    /// The explicit Levy triple of this function.
    pub fn to_levy_triple(&self) -> Result<LevyTriple> {
        let n = self.dimension();
        match self {
            BernsteinSpec::FractionalPower { alpha } => Ok(LevyTriple {
                c0: 0.0,
                c1: vec![0.0],
                atoms: vec![],
                rays: vec![RayDensity {
                    direction: vec![1.0],
                    weight: 1.0,
                    kind: RayKind::StablePower { alpha: *alpha },
                }],
            }),
            BernsteinSpec::Log => Ok(LevyTriple {
                c0: 0.0,
                c1: vec![0.0],
                atoms: vec![],
                rays: vec![RayDensity {
                    direction: vec![1.0],
                    weight: 1.0,
                    kind: RayKind::ExpGamma,
                }],
            }),
            BernsteinSpec::CompoundPoisson { atoms, .. } => Ok(LevyTriple {
                c0: 0.0,
                c1: vec![0.0; n],
                atoms: atoms.clone(),
                rays: vec![],
            }),
            BernsteinSpec::Linear { c0, c1 } => Ok(LevyTriple {
                c0: *c0,
                c1: c1.clone(),
                atoms: vec![],
                rays: vec![],
            }),
            BernsteinSpec::Triple(t) => Ok(t.clone()),
            BernsteinSpec::RaySum { dimension, rays } => {
                let mut out = LevyTriple {
                    c0: 0.0,
                    c1: vec![0.0; *dimension],
                    atoms: vec![],
                    rays: vec![],
                };
                for ray in rays {
                    let inner = ray.inner.to_levy_triple()?;
                    out.c0 += inner.c0;
                    for (o, c) in out.c1.iter_mut().zip(&ray.direction) {
                        *o += inner.c1[0] * c;
                    }
                    for a in &inner.atoms {
                        out.atoms.push(Atom {
                            location: ray.direction.iter().map(|&c| c * a.location[0]).collect(),
                            weight: a.weight,
                        });
                    }
                    for rd in &inner.rays {
                        let gamma_scale = rd.direction[0];
                        out.rays.push(RayDensity {
                            direction: ray
                                .direction
                                .iter()
                                .map(|&c| c * gamma_scale)
                                .collect(),
                            weight: rd.weight,
                            kind: rd.kind.clone(),
                        });
                    }
                }
                Ok(out)
            }
        }
    }

    /// Conic combination a * psi1 + b * psi2 as an explicit triple.
    pub fn combine(a: f64, s1: &BernsteinSpec, b: f64, s2: &BernsteinSpec) -> Result<BernsteinSpec> {
        if a < 0.0 || b < 0.0 {
            return Err(Error::domain("conic coefficients must be nonnegative"));
        }
        let t1 = s1.to_levy_triple()?.scaled(a);
        let t2 = s2.to_levy_triple()?.scaled(b);
        let sum = t1.plus(&t2)?;
        // Scaling by zero may leave weightless atoms/rays behind; drop them.
        let cleaned = LevyTriple {
            c0: sum.c0,
            c1: sum.c1,
            atoms: sum.atoms.into_iter().filter(|at| at.weight > 0.0).collect(),
            rays: sum.rays.into_iter().filter(|r| r.weight > 0.0).collect(),
        };
        Ok(BernsteinSpec::Triple(cleaned))
    }
}

// ---------------------------------------------------------------------------
// Class-membership checking by forward differences.
// ---------------------------------------------------------------------------

/// Tensor-product sampling grid strictly inside the open negative orthant.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    pub coords: Vec<Vec<f64>>,
}

impl SampleGrid {
    /// Log-spaced grid with `count` points per coordinate in [-hi, -lo].
    pub fn log_spaced(dimension: usize, lo: f64, hi: f64, count: usize) -> SampleGrid {
        let axis: Vec<f64> = crate::quad::log_grid(lo, hi, count)
            .into_iter()
            .map(|x| -x)
            .collect();
        SampleGrid {
            coords: vec![axis; dimension],
        }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut pts: Vec<Vec<f64>> = vec![vec![]];
        for axis in &self.coords {
            let mut next = Vec::with_capacity(pts.len() * axis.len());
            for p in &pts {
                for &v in axis {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            pts = next;
        }
        pts
    }

    pub fn validate(&self) -> Result<()> {
        if self.coords.is_empty() || self.coords.iter().any(|a| a.is_empty()) {
            return Err(Error::shape("sampling grid must be nonempty"));
        }
        if self
            .coords
            .iter()
            .any(|axis| axis.iter().any(|&v| v >= 0.0))
        {
            return Err(Error::domain(
                "sampling grid touches the boundary of the negative orthant",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MembershipEntry {
    pub multi_index: Vec<usize>,
    pub min_estimate: f64,
    pub worst_margin: f64,
}

#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub max_order: usize,
    pub nonpositive: bool,
    pub max_psi: f64,
    pub entries: Vec<MembershipEntry>,
    pub pass: bool,
}

impl MembershipReport {
    /// The first failing order, if any.
    pub fn failing_order(&self) -> Option<usize> {
        self.entries
            .iter()
            .filter(|e| e.worst_margin < 0.0)
            .map(|e| e.multi_index.iter().sum())
            .min()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1.0f64;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

fn multi_indices(dimension: usize, max_order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![0usize; dimension];
    fn rec(cur: &mut Vec<usize>, pos: usize, remaining: usize, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() {
            if cur.iter().sum::<usize>() >= 1 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=remaining {
            cur[pos] = v;
            rec(cur, pos + 1, remaining - v, out);
        }
        cur[pos] = 0;
    }
    rec(&mut cur, 0, max_order, &mut out);
    out.sort_by_key(|a| (a.iter().sum::<usize>(), a.clone()));
    out
}

const MEMBERSHIP_STEP_FRACTION: f64 = 0.05;
const MEMBERSHIP_TOL_BASE: f64 = 1e-6;

/// Forward-difference estimate of the partial derivative of order
/// `multi_index` at `s`, with relative steps h_j = 0.05 |s_j|.
fn forward_difference<F: Fn(&[f64]) -> Result<f64>>(
    f: &F,
    s: &[f64],
    multi_index: &[usize],
) -> Result<f64> {
    let h: Vec<f64> = s.iter().map(|&x| MEMBERSHIP_STEP_FRACTION * x.abs()).collect();
    let mut total = 0.0;
    // Iterate over all k with 0 <= k_j <= alpha_j.
    let mut k = vec![0usize; s.len()];
    loop {
        let mut coeff = 1.0;
        let mut point = s.to_vec();
        let mut parity = 0usize;
        for j in 0..s.len() {
            coeff *= binomial(multi_index[j], k[j]);
            parity += multi_index[j] - k[j];
            point[j] += k[j] as f64 * h[j];
        }
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * coeff * f(&point)?;
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == s.len() {
                let denom: f64 = h
                    .iter()
                    .zip(multi_index)
                    .map(|(&hj, &aj)| hj.powi(aj as i32))
                    .product();
                return Ok(total / denom);
            }
            if k[pos] < multi_index[pos] {
                k[pos] += 1;
                break;
            }
            k[pos] = 0;
            pos += 1;
        }
    }
}

/// Membership check for an arbitrary scalar function on the grid; the public
/// entry point for specs delegates here. This lets the tests drive the checker
/// with analytic counterexamples that are not representable as specs.
pub fn check_membership_fn<F: Fn(&[f64]) -> Result<f64>>(
    f: F,
    grid: &SampleGrid,
    max_order: usize,
) -> Result<MembershipReport> {
    if max_order < 2 {
        return Err(Error::domain("membership checking needs max_order >= 2"));
    }
    grid.validate()?;
    let points = grid.points();
    let n = grid.dimension();

    let mut max_psi = f64::NEG_INFINITY;
    let mut nonpositive = true;
    let mut tol_at: Vec<f64> = Vec::with_capacity(points.len());
    for p in &points {
        let v = f(p)?;
        max_psi = max_psi.max(v);
        let tol = MEMBERSHIP_TOL_BASE * (1.0 + v.abs());
        if v > tol {
            nonpositive = false;
        }
        tol_at.push(tol);
    }

    let mut entries = vec![];
    let mut pass = nonpositive;
    for alpha in multi_indices(n, max_order) {
        let mut min_estimate = f64::INFINITY;
        let mut worst_margin = f64::INFINITY;
        for (p, &tol) in points.iter().zip(&tol_at) {
            let est = forward_difference(&f, p, &alpha)?;
            min_estimate = min_estimate.min(est);
            worst_margin = worst_margin.min(est + tol);
        }
        if worst_margin < 0.0 {
            pass = false;
        }
        entries.push(MembershipEntry {
            multi_index: alpha,
            min_estimate,
            worst_margin,
        });
    }

    Ok(MembershipReport {
        max_order,
        nonpositive,
        max_psi,
        entries,
        pass,
    })
}

/// Test class membership of a spec by sampling psi and its forward
/// differences over the grid. PASS requires psi <= 0 on the grid and every
/// difference estimate of order 1..max_order to be nonnegative within the
/// finite-difference tolerance.
pub fn check_membership(
    spec: &BernsteinSpec,
    grid: &SampleGrid,
    max_order: usize,
) -> Result<MembershipReport> {
    spec.validate()?;
    if grid.dimension() != spec.dimension() {
        return Err(Error::shape("grid dimension does not match the function"));
    }
    let quad = QuadratureScheme::default();
    check_membership_fn(|s| spec.eval(s, &quad), grid, max_order)
}
