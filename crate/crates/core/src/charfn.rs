//! Log-price characteristic function of the rough Heston model.
//!
//! With h(a, ·) the fractional Riccati kernel of [`crate::riccati`], the
//! characteristic function of the log price X_t (started at 0, zero rates)
//! is
//!
//! ```text
//! E[e^{ia X_t}] = exp( θλ · I¹h(a,t) + V₀ · I^{1-α}h(a,t) ),
//! ```
//!
//! where I^r is the Riemann-Liouville integral of order r. Both integrals
//! run through the same product-trapezoid routine; at α = 1 the second one
//! degenerates to the identity and the expression collapses onto the
//! classical Heston exponent θλ∫h + V₀h.
//!
//! Structural identities that hold exactly, not just to solver tolerance:
//! a = 0 and a = -i zero out the inhomogeneous Riccati coefficient, so
//! h ≡ 0 and the characteristic function is 1 (normalization and the
//! martingale property of e^X); and a ↦ -ā conjugates every quantity in
//! the pipeline, giving Hermitian symmetry bit for bit.

use num_complex::Complex64;

use crate::error::Error;
use crate::grid::{frac_integral_endpoint, frac_integral_on_grid, AdamsWeights, TimeGrid};
use crate::riccati::{solve_riccati, solve_riccati_with_weights, RiccatiSolution, RoughHestonParams};

/// Log of the characteristic function at every node of `grid`.
pub fn log_cf_curve(
    params: &RoughHestonParams,
    a: Complex64,
    grid: TimeGrid,
) -> Result<Vec<Complex64>, Error> {
    let sol = solve_riccati(params, a, grid)?;
    assemble_curve(params, &sol)
}

/// Combines a Riccati solution into the log characteristic function curve.
pub fn assemble_curve(
    params: &RoughHestonParams,
    sol: &RiccatiSolution,
) -> Result<Vec<Complex64>, Error> {
    let dt = sol.grid.dt();
    let i1 = frac_integral_on_grid(1.0, &sol.h, dt)?;
    let i1ma = frac_integral_on_grid(1.0 - params.alpha, &sol.h, dt)?;
    Ok(i1
        .iter()
        .zip(&i1ma)
        .map(|(a1, a2)| *a1 * (params.theta * params.lambda) + *a2 * params.v0)
        .collect())
}

/// Log characteristic function at the grid endpoint only.
pub fn log_cf(
    params: &RoughHestonParams,
    a: Complex64,
    grid: TimeGrid,
) -> Result<Complex64, Error> {
    let weights = AdamsWeights::new(params.alpha, grid.dt(), grid.n_steps())?;
    log_cf_with_weights(params, a, grid, &weights)
}

/// Endpoint log characteristic function reusing a precomputed weight table,
/// for callers that sweep many transform arguments on one grid.
pub(crate) fn log_cf_with_weights(
    params: &RoughHestonParams,
    a: Complex64,
    grid: TimeGrid,
    weights: &AdamsWeights,
) -> Result<Complex64, Error> {
    let sol = solve_riccati_with_weights(params, a, grid, weights)?;
    let dt = sol.grid.dt();
    let i1 = frac_integral_endpoint(1.0, &sol.h, dt)?;
    let i1ma = frac_integral_endpoint(1.0 - params.alpha, &sol.h, dt)?;
    Ok(i1 * (params.theta * params.lambda) + i1ma * params.v0)
}

/// Characteristic function E[e^{ia X_{t_max}}] on a grid with `n_steps`
/// panels.
pub fn cf(
    params: &RoughHestonParams,
    a: Complex64,
    t_max: f64,
    n_steps: usize,
) -> Result<Complex64, Error> {
    let grid = TimeGrid::new(t_max, n_steps)?;
    Ok(log_cf(params, a, grid)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk(alpha: f64) -> RoughHestonParams {
        RoughHestonParams::new(alpha, 2.0, -0.5, 0.05, 0.04, 0.4).unwrap()
    }

    #[test]
    fn normalization_and_martingale_are_exact() {
        let p = desk(0.6);
        for a in [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)] {
            let v = cf(&p, a, 1.0, 300).unwrap();
            assert_eq!(v, Complex64::new(1.0, 0.0), "a = {a}");
        }
    }

    #[test]
    fn hermitian_symmetry_is_exact() {
        let p = desk(0.6);
        let grid = TimeGrid::new(0.7, 140).unwrap();
        for u in [0.5, 2.0, 11.0] {
            let plus = log_cf(&p, Complex64::new(u, 0.0), grid).unwrap();
            let minus = log_cf(&p, Complex64::new(-u, 0.0), grid).unwrap();
            assert_eq!(minus, plus.conj());
        }
    }

    #[test]
    fn classical_limit_matches_closed_form() {
        let p = desk(1.0);
        let closed = p.classical_limit();
        let grid = TimeGrid::with_step(1.0, 1e-3).unwrap();
        for a in [Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0), Complex64::new(1.0, -0.5)] {
            let got = log_cf(&p, a, grid).unwrap();
            let want = closed.log_cf(a, 1.0);
            assert!((got - want).norm() < 1e-5, "a = {a}: {got} vs {want}");
        }
    }

    #[test]
    fn curve_endpoint_agrees_with_single_evaluation() {
        let p = desk(0.6);
        let grid = TimeGrid::new(1.0, 250).unwrap();
        let a = Complex64::new(1.5, -0.5);
        let curve = log_cf_curve(&p, a, grid).unwrap();
        let single = log_cf(&p, a, grid).unwrap();
        assert!((curve[250] - single).norm() < 1e-15);
        assert_eq!(curve[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn modulus_stays_within_unit_disk_on_the_real_axis() {
        let p = desk(0.6);
        for u in [0.3, 1.0, 3.0, 8.0] {
            let v = cf(&p, Complex64::new(u, 0.0), 1.0, 400).unwrap();
            assert!(v.norm() <= 1.0 + 1e-12, "u = {u}: |cf| = {}", v.norm());
        }
    }

    #[test]
    fn short_time_exponent_follows_the_fractional_power_law() {
        // As t -> 0, h(a,t) = c0 t^α/Γ(α+1) + O(t^{2α}) and the exponent is
        // dominated by the V0 I^{1-α}h = V0 c0 t + O(t^{1+α}) term, so
        // log cf(t)/t tends to V0 c0. Both scalings pin the α-dependence of
        // the assembly.
        let p = desk(0.6);
        let a = Complex64::new(2.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let c0 = -(a * a + i * a) * 0.5;
        // The next correction is |c1| t^α Γ(α+1)/Γ(2α+1) relative, about
        // 0.7% at t = 1e-4 for these parameters.
        let t = 1e-4;
        let grid = TimeGrid::new(t, 50).unwrap();
        let sol = crate::riccati::solve_riccati(&p, a, grid).unwrap();
        let lead = c0 * t.powf(p.alpha) / crate::special::gamma(p.alpha + 1.0);
        assert!((sol.h[50] - lead).norm() < 0.02 * lead.norm());
        let lc = log_cf(&p, a, grid).unwrap();
        assert!((lc / t - c0 * p.v0).norm() < 0.05 * (c0 * p.v0).norm());
    }
}
