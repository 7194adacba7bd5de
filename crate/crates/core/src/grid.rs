//! Uniform time grids, fractional Adams quadrature weights, and the
//! product-trapezoid fractional integral.
//!
//! The predictor-corrector scheme for D^α h = F(h) advances on a uniform
//! grid t_k = k Δ using two weight families. With p = α + 1, the corrector
//! row targeting node k+1 is
//!
//! ```text
//! a_{0,k+1}   = Δ^α/Γ(α+2) · (k^p - (k-α)(k+1)^α)
//! a_{j,k+1}   = Δ^α/Γ(α+2) · ((k-j+2)^p + (k-j)^p - 2(k-j+1)^p),  1 ≤ j ≤ k
//! a_{k+1,k+1} = Δ^α/Γ(α+2)
//! ```
//!
//! and the predictor row is b_{j,k+1} = Δ^α/Γ(α+1) · ((k+1-j)^α - (k-j)^α).
//! Both rows sum to Δ^α (k+1)^α / Γ(α+1) exactly, which makes a sharp
//! internal consistency check. At α = 1 the corrector row collapses to the
//! trapezoid rule and the predictor to the left rectangle rule.
//!
//! Away from the row ends the weights depend only on the distance m = k - j,
//! so a row of any length is assembled from O(n) stored values. The raw
//! power differences cancel badly for large m (three ~m^p terms combining to
//! O(m^{p-2})), so beyond m = 32 they are evaluated through expm1/log1p
//! forms that subtract nothing large.
//!
//! The same weights with exponent r in place of α give the product-trapezoid
//! discretization of the Riemann-Liouville integral
//! I^r g(t) = (1/Γ(r)) ∫_0^t (t-s)^{r-1} g(s) ds, exact for piecewise-linear
//! integrands. One routine therefore serves both I^1 h and I^{1-α} h in the
//! characteristic function assembly.

use num_complex::Complex64;

use crate::error::{domain, Error};
use crate::special::gamma;

/// Uniform grid on [0, t_max] with n_steps panels, nodes t_k = k·t_max/n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self, Error> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(domain(format!("TimeGrid: t_max = {t_max} must be positive and finite")));
        }
        if n_steps == 0 {
            return Err(domain("TimeGrid: need at least one step"));
        }
        Ok(Self { t_max, n_steps })
    }

    /// Grid whose step is as close to `dt` as an integer panel count allows
    /// (rounded when t_max/dt is within 1e-9 of an integer, ceiled otherwise,
    /// so the step never exceeds the request).
    pub fn with_step(t_max: f64, dt: f64) -> Result<Self, Error> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(domain(format!("TimeGrid: dt = {dt} must be positive and finite")));
        }
        let raw = t_max / dt;
        let n = if (raw - raw.round()).abs() <= 1e-9 * raw.max(1.0) {
            raw.round() as usize
        } else {
            raw.ceil() as usize
        };
        Self::new(t_max, n.max(1))
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn n_nodes(&self) -> usize {
        self.n_steps + 1
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    /// Node t_k, computed so that the last node is exactly t_max.
    pub fn node(&self, k: usize) -> f64 {
        self.t_max * (k as f64 / self.n_steps as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.node(k))
    }

    /// Index of the node equal to `t` up to 1e-9 relative slack, if any.
    pub fn index_at(&self, t: f64) -> Option<usize> {
        let k = (t / self.dt()).round();
        if k < 0.0 || k > self.n_steps as f64 {
            return None;
        }
        let k = k as usize;
        if (self.node(k) - t).abs() <= 1e-9 * t.abs().max(1.0) {
            Some(k)
        } else {
            None
        }
    }
}

/// (m+1)^p + (m-1)^p - 2 m^p for p = r + 1, the interior corrector factor at
/// distance m ≥ 1.
fn interior_factor(r: f64, m: f64) -> f64 {
    let p = r + 1.0;
    if m < 32.0 {
        (m + 1.0).powf(p) + (m - 1.0).powf(p) - 2.0 * m.powf(p)
    } else {
        let base = m - 1.0;
        base.powf(p)
            * (libm::expm1(p * libm::log1p(2.0 / base))
                - 2.0 * libm::expm1(p * libm::log1p(1.0 / base)))
    }
}

/// k^{r+1} - (k-r)(k+1)^r, the left-boundary corrector factor of the row
/// targeting node k+1. At k = 0 this is r.
fn boundary_factor(r: f64, k: f64) -> f64 {
    if k < 32.0 {
        k.powf(r + 1.0) - (k - r) * (k + 1.0).powf(r)
    } else {
        k.powf(r) * (r - (k - r) * libm::expm1(r * libm::log1p(1.0 / k)))
    }
}

/// (m+1)^r - m^r, the predictor factor at distance m ≥ 0.
fn first_diff_factor(r: f64, m: f64) -> f64 {
    if m == 0.0 {
        1.0
    } else if m < 32.0 {
        (m + 1.0).powf(r) - m.powf(r)
    } else {
        m.powf(r) * libm::expm1(r * libm::log1p(1.0 / m))
    }
}

/// Precomputed fractional Adams weights for a fixed order and step, valid
/// for every row up to `n_steps`. Storage is O(n): interior and predictor
/// weights are stationary in the distance m = target - j, only the left
/// boundary column varies with the row.
#[derive(Debug, Clone)]
pub struct AdamsWeights {
    alpha: f64,
    dt: f64,
    diag: f64,
    /// interior[m] is the corrector weight at distance m, valid for m ≥ 1.
    interior: Vec<f64>,
    /// boundary[k] is the j = 0 corrector weight of the row targeting k+1.
    boundary: Vec<f64>,
    /// predictor[m] is the predictor weight at distance m = target-1-j.
    predictor: Vec<f64>,
    /// Test hook: a deliberate multiplicative corruption of every corrector
    /// weight, 1.0 in real use. The negative control of the validation suite
    /// sets it off 1 and expects the scheme to degrade visibly.
    pub(crate) corruption: f64,
}

impl AdamsWeights {
    pub fn new(alpha: f64, dt: f64, n_steps: usize) -> Result<Self, Error> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!("AdamsWeights: alpha = {alpha} not in (0, 1]")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(domain(format!("AdamsWeights: dt = {dt} must be positive and finite")));
        }
        if n_steps == 0 {
            return Err(domain("AdamsWeights: need at least one step"));
        }
        let corr_scale = dt.powf(alpha) / gamma(alpha + 2.0);
        let pred_scale = dt.powf(alpha) / gamma(alpha + 1.0);
        let mut interior = vec![0.0; n_steps + 1];
        for (m, w) in interior.iter_mut().enumerate().skip(1) {
            *w = corr_scale * interior_factor(alpha, m as f64);
        }
        let boundary = (0..n_steps)
            .map(|k| corr_scale * boundary_factor(alpha, k as f64))
            .collect();
        let predictor = (0..n_steps)
            .map(|m| pred_scale * first_diff_factor(alpha, m as f64))
            .collect();
        Ok(Self {
            alpha,
            dt,
            diag: corr_scale,
            interior,
            boundary,
            predictor,
            corruption: 1.0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn max_target(&self) -> usize {
        self.boundary.len()
    }

    /// Corrector weight a_{j,target}, target ≥ 1, j ≤ target.
    pub fn corrector(&self, j: usize, target: usize) -> f64 {
        debug_assert!(target >= 1 && target <= self.max_target() && j <= target);
        let w = if j == target {
            self.diag
        } else if j == 0 {
            self.boundary[target - 1]
        } else {
            self.interior[target - j]
        };
        w * self.corruption
    }

    /// Predictor weight b_{j,target}, target ≥ 1, j < target.
    pub fn predictor(&self, j: usize, target: usize) -> f64 {
        debug_assert!(target >= 1 && target <= self.max_target() && j < target);
        self.predictor[target - 1 - j]
    }

    /// Exact value of both row sums: Δ^α target^α / Γ(α+1), which is
    /// I^α[1](t_target).
    pub fn row_sum_identity(&self, target: usize) -> f64 {
        self.dt.powf(self.alpha) * (target as f64).powf(self.alpha) / gamma(self.alpha + 1.0)
    }
}

fn check_integral_args(r: f64, g: &[Complex64]) -> Result<(), Error> {
    if !(r >= 0.0 && r <= 1.0) {
        return Err(domain(format!("frac_integral: order r = {r} not in [0, 1]")));
    }
    if g.is_empty() {
        return Err(domain("frac_integral: empty sample vector"));
    }
    Ok(())
}

/// Riemann-Liouville integral I^r g on the whole grid by product-trapezoid
/// quadrature: `g` holds samples at the nodes of a uniform grid with step
/// `dt` and the result has the same layout. Exact for piecewise-linear g;
/// r = 1 reduces to the trapezoid rule and r = 0 to the identity.
pub fn frac_integral_on_grid(r: f64, g: &[Complex64], dt: f64) -> Result<Vec<Complex64>, Error> {
    check_integral_args(r, g)?;
    if r == 0.0 {
        return Ok(g.to_vec());
    }
    let n = g.len() - 1;
    let scale = dt.powf(r) / gamma(r + 2.0);
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    let interior: Vec<f64> = (0..=n).map(|m| interior_factor(r, m as f64)).collect();
    for target in 1..=n {
        let mut acc = g[0] * boundary_factor(r, (target - 1) as f64);
        for j in 1..target {
            acc += g[j] * interior[target - j];
        }
        acc += g[target];
        out[target] = acc * scale;
    }
    Ok(out)
}

/// I^r g at the last grid node only, in O(n).
pub fn frac_integral_endpoint(r: f64, g: &[Complex64], dt: f64) -> Result<Complex64, Error> {
    check_integral_args(r, g)?;
    if r == 0.0 {
        return Ok(*g.last().unwrap());
    }
    let n = g.len() - 1;
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let scale = dt.powf(r) / gamma(r + 2.0);
    let mut acc = g[0] * boundary_factor(r, (n - 1) as f64);
    for j in 1..n {
        acc += g[j] * interior_factor(r, (n - j) as f64);
    }
    acc += g[n];
    Ok(acc * scale)
}
