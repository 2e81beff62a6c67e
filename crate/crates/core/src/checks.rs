//! The regression checks run by `torical verify-all`.
//!
//! Each check recomputes its quantities from scratch and compares them with
//! closed-form or tabulated values at a fixed tolerance.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::extremal::{
    integrate_riccati, max_band_width, BandSpec, BandWidth, Direction, ScalarBound,
};
use crate::hypersurface::{gauss_scalar_curvature, Ambient, PrincipalCurvatures};
use crate::profiles::{uniform_grid, Interval, Profile};
use crate::smoothing::{fit_inverse_epsilon, quadratic_decay_profile, rounding_tube, RoundingProblem};
use crate::torus::{
    brute_force_focal_radius, crossover_vs_classical, embed_and_sample, focal_radius_table, lipschitz_lower_bound,
    TorusConstruction,
};
use crate::warped::WarpedBandMetric;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    /// Worst deviation (or the measured quantity) that decided the outcome.
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(id: usize, name: &'static str, measured: f64, tolerance: f64, pass: bool, detail: String) -> Self {
        CheckResult {
            id,
            name,
            measured,
            tolerance,
            pass,
            detail,
        }
    }

    /// `PASS`/`FAIL` line for logs.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: measured {:.3e} (tol {:.1e}) {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.tolerance,
            self.detail
        )
    }
}

fn failed(id: usize, name: &'static str, tolerance: f64, err: crate::Error) -> CheckResult {
    CheckResult::new(id, name, f64::NAN, tolerance, false, format!("error: {err}"))
}

fn wrap(id: usize, name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    f().unwrap_or_else(|e| failed(id, name, tolerance, e))
}

/// Blow-up interval of the Riccati equation at `σ ≡ n(n−1)` is `2π/n`.
pub fn extremal_width() -> CheckResult {
    let (id, name, tol) = (1, "extremal width 2π/n for n = 2..10", 1e-6);
    wrap(id, name, tol, || {
        let mut worst: f64 = 0.0;
        for n in 2..=10 {
            let spec = BandSpec::unconstrained(n, (n * (n - 1)) as f64)?;
            let sol = integrate_riccati(&spec, f64::INFINITY, 0.0, Direction::Forward)?;
            let err = sol.blow_up().map_or(f64::INFINITY, |t| (t - 2.0 * PI / n as f64).abs());
            worst = worst.max(err);
        }
        Ok(CheckResult::new(id, name, worst, tol, worst < tol, "max |blow-up − 2π/n|".into()))
    })
}

/// `Sc ≡ n(n−1)` on the `cos(nt/2)^{2/n}` band.
pub fn extremal_curvature() -> CheckResult {
    let (id, name, tol) = (2, "extremal band Sc = n(n−1)", 1e-8);
    wrap(id, name, tol, || {
        let mut worst: f64 = 0.0;
        for n in 2..=10 {
            let half = PI / n as f64;
            let grid: Vec<f64> = uniform_grid(-half, half, 1003)[1..1002].to_vec();
            let g = WarpedBandMetric::extremal(n, Interval::new(grid[0], grid[grid.len() - 1])?)?;
            let target = (n * (n - 1)) as f64;
            for &t in &grid {
                worst = worst.max((g.scalar_curvature(t)? - target).abs());
            }
        }
        Ok(CheckResult::new(id, name, worst, tol, worst < tol, "1001 interior points, n = 2..10".into()))
    })
}

/// Curvatures of the hyperbolic band `e^{2t} g_Eu + dt²`.
pub fn hyperbolic_model() -> CheckResult {
    let (id, name, tol) = (3, "hyperbolic model Sc, mean curvature, Ricci", 1e-10);
    wrap(id, name, tol, || {
        let mut worst: f64 = 0.0;
        for n in 2..=10 {
            let interval = Interval::symmetric(3.0)?;
            let g = WarpedBandMetric::hyperbolic(n, interval)?;
            let k = (n - 1) as f64;
            for t in uniform_grid(-3.0, 3.0, 61) {
                worst = worst
                    .max((g.scalar_curvature(t)? + n as f64 * k).abs())
                    .max((g.mean_curvature(t)? - k).abs())
                    .max((g.ricci_normal(t)? + k).abs());
            }
        }
        Ok(CheckResult::new(id, name, worst, tol, worst < tol, "n = 2..10, t ∈ [−3, 3]".into()))
    })
}

/// Strictly perturbed hyperbolic boundary data admit no band; the equality
/// case is the degenerate fixed point `f ≡ 1`.
pub fn hyperbolic_rigidity() -> CheckResult {
    let (id, name, tol) = (4, "hyperbolic rigidity", 0.0);
    wrap(id, name, tol, || {
        let mut bad = Vec::new();
        for n in 2..=10 {
            let k = (n - 1) as f64;
            let sigma = ScalarBound::constant(-((n * (n - 1)) as f64));
            let strict = max_band_width(&BandSpec::new(n, sigma.clone(), -k - 0.1, k + 0.1)?)?;
            if strict != BandWidth::Infeasible {
                bad.push(format!("n={n} perturbed: {strict:?}"));
            }
            let equal = max_band_width(&BandSpec::new(n, sigma, -k, k)?)?;
            if equal != (BandWidth::Unbounded { stationary: Some(1.0) }) {
                bad.push(format!("n={n} equality: {equal:?}"));
            }
        }
        let detail = if bad.is_empty() {
            "perturbed: infeasible; equality: degenerate f ≡ 1, n = 2..10".into()
        } else {
            bad.join("; ")
        };
        Ok(CheckResult::new(id, name, bad.len() as f64, tol, bad.is_empty(), detail))
    })
}

/// Printed values of the focal-radius recursion.
pub fn torus_table() -> CheckResult {
    let (id, name, tol) = (5, "torus focal-radius table", 1e-12);
    wrap(id, name, tol, || {
        let table = focal_radius_table(1024)?;
        let r4 = table.get(4).unwrap_or(f64::NAN);
        let r8 = table.get(8).unwrap_or(f64::NAN);
        let err4 = (r4 - 1.0 / (1.0 + 2.0 * 2f64.sqrt())).abs();
        let r8_ok = (r8 - 0.0845).abs() < 5e-5 && r8 > 1.0 / 13.0;
        let third = (2..=1024).all(|n| table.scaled(n).is_some_and(|s| s > 1.0 / 3.0));
        let powers = (1..=10).all(|i| table.scaled(1 << i).is_some_and(|s| s > 1.0));
        let pass = err4 < tol && r8_ok && third && powers;
        let detail = format!(
            "r(4) = {r4:.12}, r(8) = {r8:.6}, r(n)n^1.5 > 1/3: {third}, > 1 at powers of two: {powers}"
        );
        Ok(CheckResult::new(id, name, err4, tol, pass, detail))
    })
}

/// Lipschitz constant at `n = 3, σ = 6, d = π/2` and the crossover with the
/// classical bound.
pub fn lipschitz() -> CheckResult {
    let (id, name, tol) = (6, "Lipschitz bound 3/4 and crossover n = 6", 1e-15);
    wrap(id, name, tol, || {
        let lip = lipschitz_lower_bound(3, 6.0, FRAC_PI_2)?;
        let err = (lip - 0.75).abs();
        let cross = crossover_vs_classical(2..=64);
        let pass = err < tol && cross == Some(6);
        Ok(CheckResult::new(id, name, err, tol, pass, format!("Lip = {lip}, crossover = {cross:?}")))
    })
}

/// Brute-force normal injectivity radius against exact values.
pub fn focal_oracle() -> CheckResult {
    let (id, name) = (7, "focal-radius oracle at resolution 128");
    let tol = 1.0;
    wrap(id, name, tol, || {
        let start = Instant::now();
        let circle = TorusConstruction::circle();
        let product = TorusConstruction::pair(TorusConstruction::circle(), TorusConstruction::circle())?;
        let y4 = TorusConstruction::build(4)?;
        let cases = [
            ("circle", &circle, 1.0, 0.01),
            ("product torus", &product, FRAC_1_SQRT_2, 0.02),
            ("Y(4)", &y4, y4.focal_radius(), 0.05),
        ];
        let mut worst_ratio: f64 = 0.0;
        let mut parts = Vec::new();
        for (label, c, exact, rel) in cases {
            let est = brute_force_focal_radius(&embed_and_sample(c, 128)?)?;
            let err = (est.radius - exact).abs() / exact;
            worst_ratio = worst_ratio.max(err / rel);
            parts.push(format!("{label} {:.6} vs {:.6}", est.radius, exact));
        }
        let secs = start.elapsed().as_secs_f64();
        let pass = worst_ratio < 1.0 && secs < 60.0;
        parts.push(format!("{secs:.1} s"));
        Ok(CheckResult::new(id, name, worst_ratio, tol, pass, format!("error/tolerance; {}", parts.join(", "))))
    })
}

/// Gauss equation on Clifford and umbilic data.
pub fn gauss() -> CheckResult {
    let (id, name, tol) = (8, "Gauss equation: Clifford and distance spheres", 1e-10);
    wrap(id, name, tol, || {
        let clifford = gauss_scalar_curvature(&PrincipalCurvatures::new(vec![1.0, -1.0], Ambient::Sphere(3))?);
        let mut worst: f64 = 0.0;
        for n in 3..=8 {
            for i in 1..=10 {
                let rho = i as f64 / 10.0;
                let lam = (1.0 - rho * rho).sqrt() / rho;
                let sc = gauss_scalar_curvature(&PrincipalCurvatures::umbilic(lam, Ambient::Sphere(n))?);
                let intrinsic = ((n - 1) * (n - 2)) as f64 / (rho * rho);
                worst = worst.max((sc - intrinsic).abs() / intrinsic.max(1.0));
            }
        }
        let pass = clifford == 0.0 && worst < tol;
        Ok(CheckResult::new(id, name, worst, tol, pass, format!("Clifford Sc = {clifford}")))
    })
}

/// Fitted `1/ε` coefficient of the bending family.
pub fn bending() -> CheckResult {
    let (id, name, tol) = (9, "bending law: 1/ε coefficient −1", 1e-2);
    wrap(id, name, tol, || {
        let fit = fit_inverse_epsilon(&[1.0; 3], &[0.0; 3], &[1.0, 0.0, 0.0], &[1e-2, 1e-3, 1e-4], 0.5)?;
        let err = (fit.coefficient + 1.0).abs();
        Ok(CheckResult::new(
            id,
            name,
            err,
            tol,
            err < tol,
            format!("coefficient {:.8}", fit.coefficient),
        ))
    })
}

/// Edge-rounding tube asymptotics for the unit ball in `ℝ³`.
pub fn rounding() -> CheckResult {
    let (id, name, tol) = (10, "rounding law: ε·λ_n = 1, ε·Sc → 4", 1e-2);
    wrap(id, name, tol, || {
        let eps = 1e-4;
        let front = rounding_tube(&RoundingProblem::new(3, 1.0, eps, 0.0)?);
        let side = rounding_tube(&RoundingProblem::new(3, 1.0, eps, FRAC_PI_2)?);
        let exact_n = eps * front.lambda_n == 1.0;
        let rel = (eps * front.sc - 4.0).abs() / 4.0;
        let side_term = (eps * side.sc).abs();
        let pass = exact_n && rel < tol && side_term < 1e-8;
        Ok(CheckResult::new(
            id,
            name,
            rel,
            tol,
            pass,
            format!("ε·λ_n = 1: {exact_n}, ε·Sc(θ=0) = {:.8}, ε·Sc(θ=π/2) = {side_term:.1e}", eps * front.sc),
        ))
    })
}

/// Minimum scalar curvature of `dt² + t^{2α}dθ²` on `B(R)`.
pub fn quadratic_decay() -> CheckResult {
    let (id, name, tol) = (11, "quadratic decay min Sc = 2α(1−α)/R²", 1e-8);
    wrap(id, name, tol, || {
        let mut worst: f64 = 0.0;
        let mut bound_ok = true;
        let mut count = 0;
        for i in 1..20 {
            let alpha = i as f64 / 20.0;
            for radius in [1.01, 1.5, 2.0, 5.0, 10.0, 100.0] {
                let q = quadratic_decay_profile(alpha, radius)?;
                worst = worst.max((q.min_sc - q.expected).abs());
                bound_ok &= q.bound_holds();
                count += 1;
            }
        }
        Ok(CheckResult::new(
            id,
            name,
            worst,
            tol,
            worst < tol && bound_ok,
            format!("{count} (α, R) pairs, min Sc ≤ 4π²/R²: {bound_ok}"),
        ))
    })
}

/// Deterministic-grid versions of the structural properties.
pub fn property_suites() -> CheckResult {
    let (id, name, tol) = (12, "property suites on deterministic grids", 1e-6);
    wrap(id, name, tol, || {
        let mut worst: f64 = 0.0;
        let mut failures = Vec::new();

        // Scaling covariance: Sc(λ²g)(λt) = λ⁻² Sc(g)(t).
        for i in 0..24 {
            let lambda = 0.3 + 0.15 * i as f64;
            let n = 2 + i % 6;
            let g = WarpedBandMetric::extremal(n, Interval::symmetric(0.5 * PI / n as f64)?)?;
            let gl = g.rescaled(lambda)?;
            for t in uniform_grid(-0.4 * PI / n as f64, 0.4 * PI / n as f64, 9) {
                let a = gl.scalar_curvature(lambda * t)?;
                let b = g.scalar_curvature(t)? / (lambda * lambda);
                worst = worst.max((a - b).abs() / b.abs().max(1.0));
            }
        }

        // Finite differences against analytic jets on closed-form metrics.
        let mut fd_worst: f64 = 0.0;
        for i in 0..20 {
            let n = 2 + i % 5;
            let a = 0.2 + 0.05 * i as f64;
            let metrics = [
                WarpedBandMetric::hyperbolic(n, Interval::symmetric(a)?)?,
                WarpedBandMetric::extremal(n, Interval::symmetric(a.min(0.8) * PI / n as f64)?)?,
                WarpedBandMetric::uniform(Profile::power(0.3 + 0.02 * i as f64, Interval::new(1.0, 1.0 + a)?)?, n, Interval::new(1.0, 1.0 + a)?)?,
            ];
            for m in &metrics {
                fd_worst = fd_worst.max(m.cross_validate_uniform(1001)?.residual_max);
            }
        }
        worst = worst.max(fd_worst);
        if fd_worst >= tol {
            failures.push(format!("finite-difference residual {fd_worst:.2e}"));
        }

        // Width is non-increasing in σ and in M₊.
        for n in [2, 3, 4, 5] {
            let mut prev = f64::INFINITY;
            for i in 0..20 {
                let sigma = 0.5 + 0.75 * i as f64;
                let w = max_band_width(&BandSpec::unconstrained(n, sigma)?)?.width().unwrap_or(0.0);
                if w > prev * (1.0 + 1e-9) {
                    failures.push(format!("width not monotone in σ at n={n}, σ={sigma}"));
                }
                prev = w;
            }
            let mut prev = f64::INFINITY;
            for i in 0..20 {
                let m_plus = -3.0 + 0.3 * i as f64;
                let spec = BandSpec::new(n, ScalarBound::constant((n * (n - 1)) as f64), -1.0, m_plus)?;
                let w = max_band_width(&spec)?.width().unwrap_or(0.0);
                if w > prev * (1.0 + 1e-9) + 1e-12 {
                    failures.push(format!("width not monotone in M₊ at n={n}, M₊={m_plus}"));
                }
                prev = w;
            }
        }

        // Even σ: the solution through f(0) = 0 is odd.
        let mut sym_worst: f64 = 0.0;
        for i in 0..20 {
            let n = 2 + i % 4;
            let inner = 1.0 + 0.5 * i as f64;
            let sigma = ScalarBound::plateau(inner, 0.1 + 0.02 * i as f64, -0.5)?;
            let spec = BandSpec::new(n, sigma, f64::NEG_INFINITY, f64::NEG_INFINITY)?;
            let fwd = integrate_riccati(&spec, 0.0, 0.0, Direction::Forward)?;
            let bwd = integrate_riccati(&spec, 0.0, 0.0, Direction::Backward)?;
            let reach = fwd.blow_up().unwrap_or(2.0).min(2.0) * 0.9;
            for t in uniform_grid(0.0, reach, 17) {
                if let (Some(a), Some(b)) = (fwd.interpolate(t), bwd.interpolate(-t)) {
                    sym_worst = sym_worst.max((a + b).abs() / a.abs().max(1.0));
                }
            }
        }
        worst = worst.max(sym_worst);
        if sym_worst >= tol {
            failures.push(format!("symmetry defect {sym_worst:.2e}"));
        }

        let pass = worst < tol && failures.is_empty();
        let detail = if failures.is_empty() {
            "scaling, finite differences, monotonicity, symmetry: ≥ 20 draws each".into()
        } else {
            failures.join("; ")
        };
        Ok(CheckResult::new(id, name, worst, tol, pass, detail))
    })
}

/// All checks in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        extremal_width(),
        extremal_curvature(),
        hyperbolic_model(),
        hyperbolic_rigidity(),
        torus_table(),
        lipschitz(),
        focal_oracle(),
        gauss(),
        bending(),
        rounding(),
        quadratic_decay(),
        property_suites(),
    ]
}
