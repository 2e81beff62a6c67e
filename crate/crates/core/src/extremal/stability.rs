use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::warped::WarpedBandMetric;

/// Default number of grid points on the circle.
pub const DEFAULT_GRID: usize = 256;

const MIN_GRID: usize = 16;

/// Curvature data of a hypersurface `Y ⊂ V` sampled on the circle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceCurvatures {
    /// Intrinsic `Sc(Y)`.
    pub sc_y: Vec<f64>,
    /// Ambient `Sc(V)` restricted to `Y`.
    pub sc_ambient: Vec<f64>,
    /// Squared norm of the second fundamental form of `Y`.
    pub curv_sq: Vec<f64>,
}

/// Second-variation operator `L = −Δ + V` on a circle of circumference
/// `circumference`, discretized on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityProblem {
    circumference: f64,
    potential: Vec<f64>,
    slice: Option<SliceCurvatures>,
}

impl StabilityProblem {
    pub fn from_potential(circumference: f64, potential: Vec<f64>) -> Result<Self> {
        if !(circumference > 0.0) || !circumference.is_finite() {
            return Err(Error::invalid("circumference must be positive"));
        }
        if potential.len() < MIN_GRID {
            return Err(Error::invalid(format!("grid needs at least {MIN_GRID} points")));
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("potential must be finite"));
        }
        Ok(StabilityProblem {
            circumference,
            potential,
            slice: None,
        })
    }

    /// Samples `potential(y)` at `y = i·L/points`.
    pub fn from_fn(circumference: f64, points: usize, potential: impl Fn(f64) -> f64) -> Result<Self> {
        let h = circumference / points as f64;
        StabilityProblem::from_potential(circumference, (0..points).map(|i| potential(i as f64 * h)).collect())
    }

    /// Potential `½(Sc(Y) − Sc(V|Y) − ‖curv‖²)`.
    pub fn from_slice_curvatures(circumference: f64, slice: SliceCurvatures) -> Result<Self> {
        let len = slice.sc_y.len();
        if slice.sc_ambient.len() != len || slice.curv_sq.len() != len {
            return Err(Error::invalid("slice curvature arrays differ in length"));
        }
        let potential = (0..len)
            .map(|i| 0.5 * (slice.sc_y[i] - slice.sc_ambient[i] - slice.curv_sq[i]))
            .collect();
        let mut p = StabilityProblem::from_potential(circumference, potential)?;
        p.slice = Some(slice);
        Ok(p)
    }

    /// The slice `{t} × T^{n−1}` of a warped band. Its first fiber circle
    /// (length `2π·φ₁(t)`) carries the grid; the slice is flat and has
    /// principal curvatures `φᵢ′/φᵢ`.
    pub fn band_slice(metric: &WarpedBandMetric, t: f64, points: usize) -> Result<Self> {
        let jets = metric.jets(t)?;
        let sc = crate::warped::scalar_curvature_of_jets(&jets);
        let curv_sq: f64 = jets.iter().map(|j| j.log_slope().powi(2)).sum();
        let slice = SliceCurvatures {
            sc_y: vec![0.0; points],
            sc_ambient: vec![sc; points],
            curv_sq: vec![curv_sq; points],
        };
        StabilityProblem::from_slice_curvatures(2.0 * std::f64::consts::PI * jets[0].value, slice)
    }

    pub fn circumference(&self) -> f64 {
        self.circumference
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn slice(&self) -> Option<&SliceCurvatures> {
        self.slice.as_ref()
    }

    pub fn step(&self) -> f64 {
        self.circumference / self.potential.len() as f64
    }

    fn operator(&self) -> DMatrix<f64> {
        let m = self.potential.len();
        let inv_h2 = 1.0 / (self.step() * self.step());
        let mut a = DMatrix::zeros(m, m);
        for i in 0..m {
            a[(i, i)] = 2.0 * inv_h2 + self.potential[i];
            let j = (i + 1) % m;
            a[(i, j)] -= inv_h2;
            a[(j, i)] -= inv_h2;
        }
        a
    }
}

/// Lowest eigenpair of the discretized operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityOutcome {
    pub lambda0: f64,
    /// Grid positions `y_i`.
    pub ys: Vec<f64>,
    /// Positive eigenfunction with `max = 1`.
    pub phi: Vec<f64>,
}

/// Lowest eigenvalue and positive eigenfunction of `L`.
pub fn stability_step(problem: &StabilityProblem) -> Result<StabilityOutcome> {
    let eig = SymmetricEigen::new(problem.operator());
    let (idx, &lambda0) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Numerical("empty spectrum".into()))?;
    let v = eig.eigenvectors.column(idx);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let max = v.iter().map(|x| sign * x).fold(f64::NEG_INFINITY, f64::max);
    let phi: Vec<f64> = v.iter().map(|x| sign * x / max).collect();
    if phi.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::Numerical("ground state is not positive".into()));
    }
    let h = problem.step();
    Ok(StabilityOutcome {
        lambda0,
        ys: (0..phi.len()).map(|i| i as f64 * h).collect(),
        phi,
    })
}

/// Lowest eigenvalue only; much cheaper than [`stability_step`] on fine grids.
pub fn lowest_eigenvalue(problem: &StabilityProblem) -> f64 {
    problem.operator().symmetric_eigenvalues().min()
}

/// Curvature bookkeeping for the symmetrized metric `g_Y + φ(y)²dt²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetrizationReport {
    pub lambda0: f64,
    /// `λ₀ ≥ 0` up to tolerance, i.e. the slice is stable.
    pub stable: bool,
    /// `Sc(Y) − 2Δφ/φ` on the grid.
    pub sc_new: Vec<f64>,
    pub min_sc_new: f64,
    /// `max |Sc_new − (2λ₀ + Sc(V|Y) + ‖curv‖²)|`.
    pub identity_residual: f64,
    /// `min Sc_new ≥ σ − tol`.
    pub bound_holds: bool,
}

/// Evaluates the scalar curvature after one symmetrization step and checks
/// it against the lower bound `sigma`.
pub fn verify_symmetrization_invariant(
    problem: &StabilityProblem,
    outcome: &StabilityOutcome,
    sigma: f64,
    tol: f64,
) -> Result<SymmetrizationReport> {
    let m = outcome.phi.len();
    if m != problem.potential.len() {
        return Err(Error::invalid("eigenfunction and problem grids differ"));
    }
    let inv_h2 = 1.0 / (problem.step() * problem.step());
    let phi = &outcome.phi;
    let zeros = vec![0.0; m];
    let (sc_y, sc_amb, curv_sq) = match &problem.slice {
        Some(s) => (&s.sc_y, &s.sc_ambient, &s.curv_sq),
        None => (&zeros, &zeros, &zeros),
    };
    let mut sc_new = Vec::with_capacity(m);
    let mut residual: f64 = 0.0;
    for i in 0..m {
        let lap = (phi[(i + 1) % m] - 2.0 * phi[i] + phi[(i + m - 1) % m]) * inv_h2;
        let sc = sc_y[i] - 2.0 * lap / phi[i];
        let expected = match problem.slice {
            Some(_) => 2.0 * outcome.lambda0 + sc_amb[i] + curv_sq[i],
            None => 2.0 * (outcome.lambda0 - problem.potential[i]),
        };
        residual = residual.max((sc - expected).abs());
        sc_new.push(sc);
    }
    let min_sc_new = sc_new.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SymmetrizationReport {
        lambda0: outcome.lambda0,
        stable: outcome.lambda0 >= -tol,
        sc_new,
        min_sc_new,
        identity_residual: residual,
        bound_holds: min_sc_new >= sigma - tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::Interval;
    use std::f64::consts::PI;

    fn lowest(potential: impl Fn(f64) -> f64, points: usize) -> StabilityOutcome {
        stability_step(&StabilityProblem::from_fn(2.0 * PI, points, potential).unwrap()).unwrap()
    }

    #[test]
    fn zero_and_constant_potentials() {
        for c in [0.0, 0.7, -2.5] {
            let out = lowest(|_| c, 64);
            assert!((out.lambda0 - c).abs() < 1e-10);
            assert!(out.phi.iter().all(|p| (p - 1.0).abs() < 1e-8));
        }
    }

    /// Ground state of `−φ″ + (1 + cos y)φ` from a truncated cosine-series
    /// (Hill) matrix, spectrally accurate.
    fn hill_lambda0() -> f64 {
        let k = 40;
        let mut m = DMatrix::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = (i * i) as f64 + 1.0;
            if i + 1 < k {
                let off = if i == 0 { std::f64::consts::FRAC_1_SQRT_2 } else { 0.5 };
                m[(i, i + 1)] = off;
                m[(i + 1, i)] = off;
            }
        }
        m.symmetric_eigenvalues().min()
    }

    #[test]
    fn cosine_potential_converges() {
        let oracle = hill_lambda0();
        // Mathieu a₀(q = 2) = −1.513956885...
        assert!((oracle - (1.0 - 1.513956885 / 4.0)).abs() < 1e-9);
        let l = |points| lowest_eigenvalue(&StabilityProblem::from_fn(2.0 * PI, points, |y| 1.0 + y.cos()).unwrap());
        let (coarse, fine) = (l(1024), l(2048));
        assert!((coarse - fine).abs() < 1e-6, "{coarse} vs {fine}");
        assert!((fine - oracle).abs() < 1e-6);
        // Second-order convergence.
        let ratio = (l(256) - oracle) / (l(512) - oracle);
        assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn eigenfunction_is_positive_and_normalized() {
        let out = lowest(|y| 3.0 * y.sin(), DEFAULT_GRID);
        let max = out.phi.iter().copied().fold(0.0, f64::max);
        assert_eq!(max, 1.0);
        assert!(out.phi.iter().all(|&p| p > 0.0));
    }

    #[test]
    fn flat_slice() {
        let metric = WarpedBandMetric::flat(3, Interval::symmetric(1.0).unwrap()).unwrap();
        let p = StabilityProblem::band_slice(&metric, 0.0, 64).unwrap();
        let out = stability_step(&p).unwrap();
        let r = verify_symmetrization_invariant(&p, &out, 0.0, 1e-9).unwrap();
        assert!(r.stable && r.bound_holds);
        assert!(r.min_sc_new.abs() < 1e-9);
    }

    #[test]
    fn hyperbolic_slice_keeps_the_bound() {
        let n = 3;
        let metric = WarpedBandMetric::hyperbolic(n, Interval::symmetric(1.0).unwrap()).unwrap();
        let p = StabilityProblem::band_slice(&metric, 0.3, 64).unwrap();
        let out = stability_step(&p).unwrap();
        let r = verify_symmetrization_invariant(&p, &out, -6.0, 1e-9).unwrap();
        // V = ½(0 + 6 − 2) = 2.
        assert!((r.lambda0 - 2.0).abs() < 1e-9);
        assert!(r.stable && r.bound_holds);
        assert!(r.identity_residual < 1e-6);
    }

    #[test]
    fn extremal_slice_satisfies_identity_but_is_unstable() {
        let n = 2;
        let metric = WarpedBandMetric::extremal(n, Interval::symmetric(1.0).unwrap()).unwrap();
        let p = StabilityProblem::band_slice(&metric, 0.0, 64).unwrap();
        let out = stability_step(&p).unwrap();
        let r = verify_symmetrization_invariant(&p, &out, 2.0, 1e-9).unwrap();
        assert!((r.lambda0 + 1.0).abs() < 1e-9);
        assert!(r.identity_residual < 1e-6);
        assert!(!r.stable);
    }

    #[test]
    fn identity_holds_for_varying_potential() {
        let p = StabilityProblem::from_fn(3.0, 128, |y| (2.0 * PI * y / 3.0).cos()).unwrap();
        let out = stability_step(&p).unwrap();
        let r = verify_symmetrization_invariant(&p, &out, -10.0, 1e-9).unwrap();
        assert!(r.identity_residual < 1e-6);
    }
}
