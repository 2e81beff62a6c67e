//! Curvature of torical warped products `g = dt² + Σᵢ φᵢ(t)² dτᵢ²`.
//!
//! All quantities depend on `t` only. The slice shape operator is taken as
//! `S = ½ h⁻¹ dh/dt` for the fiber metric `h = diag(φᵢ²)`, so its
//! eigenvalues are the logarithmic slopes `sᵢ = φᵢ′/φᵢ`. Mean curvatures are
//! measured with respect to `+∂t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profiles::{uniform_grid, DerivativeBundle, Interval, Profile};

/// `Sc = −2 Σ φᵢ″/φᵢ − 2 Σ_{i<j} sᵢ sⱼ` from the jets of the warping functions.
pub fn scalar_curvature_of_jets(jets: &[DerivativeBundle]) -> f64 {
    let mut second = 0.0;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for j in jets {
        let s = j.log_slope();
        second += j.relative_d2();
        sum += s;
        sum_sq += s * s;
    }
    -2.0 * second - (sum * sum - sum_sq)
}

/// Mean curvature `Σ sᵢ` of the slice `{t} × T^{n−1}`.
pub fn mean_curvature_of_jets(jets: &[DerivativeBundle]) -> f64 {
    jets.iter().map(DerivativeBundle::log_slope).sum()
}

/// `Ricci(∂t, ∂t) = −Σ (sᵢ′ + sᵢ²) = −Σ φᵢ″/φᵢ`.
pub fn ricci_normal_of_jets(jets: &[DerivativeBundle]) -> f64 {
    // sᵢ′ = φᵢ″/φᵢ − sᵢ², so each term collapses to φᵢ″/φᵢ.
    -jets.iter().map(DerivativeBundle::relative_d2).sum::<f64>()
}

/// Warped product over a flat `(n−1)`-torus.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedBandMetric {
    profiles: Vec<Profile>,
    interval: Interval,
}

impl WarpedBandMetric {
    /// Builds the metric; every profile must cover `interval`.
    pub fn new(profiles: Vec<Profile>, interval: Interval) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::invalid("a band of dimension n ≥ 2 needs n − 1 ≥ 1 profiles"));
        }
        for p in &profiles {
            let d = p.domain();
            if d.lo > interval.lo || d.hi < interval.hi {
                return Err(Error::invalid(format!(
                    "profile domain [{}, {}] does not cover the band [{}, {}]",
                    d.lo, d.hi, interval.lo, interval.hi
                )));
            }
        }
        Ok(WarpedBandMetric { profiles, interval })
    }

    /// `n − 1` copies of the same profile.
    pub fn uniform(profile: Profile, n: usize, interval: Interval) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("dimension must be at least 2"));
        }
        WarpedBandMetric::new(vec![profile; n - 1], interval)
    }

    /// Hyperbolic space in horospherical coordinates, `e^{2t} g_Eu + dt²`.
    pub fn hyperbolic(n: usize, interval: Interval) -> Result<Self> {
        WarpedBandMetric::uniform(Profile::exponential(interval), n, interval)
    }

    /// The extremal band with all `φᵢ = cos(nt/2)^{2/n}` on `interval ⊂ [−π/n, π/n]`.
    pub fn extremal(n: usize, interval: Interval) -> Result<Self> {
        WarpedBandMetric::uniform(Profile::cos_power(n, interval)?, n, interval)
    }

    /// Flat band, all `φᵢ` constant.
    pub fn flat(n: usize, interval: Interval) -> Result<Self> {
        WarpedBandMetric::uniform(Profile::constant(1.0, interval)?, n, interval)
    }

    pub fn dimension(&self) -> usize {
        self.profiles.len() + 1
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    /// The metric scaled by `λ²`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        let profiles = self
            .profiles
            .iter()
            .map(|p| p.rescaled(lambda))
            .collect::<Result<Vec<_>>>()?;
        let interval = Interval::new(self.interval.lo * lambda, self.interval.hi * lambda)?;
        WarpedBandMetric::new(profiles, interval)
    }

    pub fn jets(&self, t: f64) -> Result<Vec<DerivativeBundle>> {
        self.interval.check(t)?;
        self.profiles.iter().map(|p| p.eval(t)).collect()
    }

    pub fn scalar_curvature(&self, t: f64) -> Result<f64> {
        Ok(scalar_curvature_of_jets(&self.jets(t)?))
    }

    pub fn mean_curvature(&self, t: f64) -> Result<f64> {
        Ok(mean_curvature_of_jets(&self.jets(t)?))
    }

    pub fn ricci_normal(&self, t: f64) -> Result<f64> {
        Ok(ricci_normal_of_jets(&self.jets(t)?))
    }

    /// Compares the analytic scalar curvature with the one obtained from
    /// sampled copies of every profile on `grid` (finite differences).
    ///
    /// Curvatures are reported at the grid nodes that are at least two steps
    /// from either end of `grid`.
    pub fn cross_validate(&self, grid: &[f64]) -> Result<CurvatureReport> {
        if grid.len() < crate::profiles::MIN_SAMPLES {
            return Err(Error::invalid("cross-validation grid too short"));
        }
        for &t in grid {
            self.interval.check(t)?;
        }
        let sampled = self
            .profiles
            .iter()
            .map(|p| p.sample(grid))
            .collect::<Result<Vec<_>>>()?;
        let fd_metric = WarpedBandMetric {
            profiles: sampled,
            interval: self.interval,
        };
        let ts: Vec<f64> = grid[2..grid.len() - 2].to_vec();
        let mut report = CurvatureReport {
            ts: Vec::with_capacity(ts.len()),
            sc: Vec::with_capacity(ts.len()),
            mean_curv: Vec::with_capacity(ts.len()),
            ricci_tt: Vec::with_capacity(ts.len()),
            residual_max: 0.0,
        };
        for t in ts {
            let jets = self.jets(t)?;
            let fd_jets = fd_metric.jets(t)?;
            let sc = scalar_curvature_of_jets(&jets);
            let sc_fd = scalar_curvature_of_jets(&fd_jets);
            report.residual_max = report.residual_max.max((sc - sc_fd).abs());
            report.ts.push(t);
            report.sc.push(sc);
            report.mean_curv.push(mean_curvature_of_jets(&jets));
            report.ricci_tt.push(ricci_normal_of_jets(&jets));
        }
        Ok(report)
    }

    /// [`cross_validate`](Self::cross_validate) on a uniform grid of `count`
    /// points spanning the band's interval.
    pub fn cross_validate_uniform(&self, count: usize) -> Result<CurvatureReport> {
        self.cross_validate(&uniform_grid(self.interval.lo, self.interval.hi, count))
    }
}

/// Scalar curvature of `dt² + φ(t)² g_{T^{n−1}}` with a single warping function:
/// `−2(n−1)φ″/φ − (n−1)(n−2)(φ′/φ)²`.
pub fn scalar_curvature_single_warp(phi: &Profile, n: usize, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    let j = phi.eval(t)?;
    let k = (n - 1) as f64;
    let s = j.log_slope();
    Ok(-2.0 * k * j.relative_d2() - k * (k - 1.0) * s * s)
}

/// Scalar curvature `−2φ″/φ` of the surface `dt² + φ(t)² dθ²` at radius `t > 0`.
pub fn radial_scalar_curvature(phi: &Profile, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("radius must be positive, got {t}")));
    }
    Ok(-2.0 * phi.eval(t)?.relative_d2())
}

/// Sampled curvature quantities of a warped band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub ts: Vec<f64>,
    pub sc: Vec<f64>,
    pub mean_curv: Vec<f64>,
    pub ricci_tt: Vec<f64>,
    /// Largest `|Sc_analytic − Sc_finite_difference|` over `ts`.
    pub residual_max: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    #[test]
    fn flat_band_has_zero_curvatures() {
        let g = WarpedBandMetric::flat(4, Interval::symmetric(1.0).unwrap()).unwrap();
        assert_eq!(g.scalar_curvature(0.3).unwrap(), 0.0);
        assert_eq!(g.mean_curvature(0.3).unwrap(), 0.0);
        assert_eq!(g.ricci_normal(0.3).unwrap(), 0.0);
    }

    #[test]
    fn hyperbolic_sign_conventions() {
        for n in 2..8 {
            let g = WarpedBandMetric::hyperbolic(n, Interval::symmetric(2.0).unwrap()).unwrap();
            let k = (n - 1) as f64;
            for &t in &[-1.5, 0.0, 0.7] {
                assert!(rel(g.scalar_curvature(t).unwrap(), -(n as f64) * k) < 1e-12);
                assert!(rel(g.mean_curvature(t).unwrap(), k) < 1e-12);
                assert!(rel(g.ricci_normal(t).unwrap(), -k) < 1e-12);
            }
        }
    }

    #[test]
    fn extremal_band_has_constant_scalar_curvature() {
        for n in 2..9 {
            let edge = PI / n as f64;
            let g = WarpedBandMetric::extremal(n, Interval::symmetric(0.95 * edge).unwrap()).unwrap();
            for i in 0..21 {
                let t = -0.9 * edge + 0.09 * edge * i as f64;
                let sc = g.scalar_curvature(t).unwrap();
                assert!(rel(sc, (n * (n - 1)) as f64) < 1e-10, "n={n} t={t} sc={sc}");
            }
        }
    }

    #[test]
    fn extremal_slice_mean_curvature() {
        let n = 5;
        let g = WarpedBandMetric::extremal(n, Interval::symmetric(0.5).unwrap()).unwrap();
        let t = 0.3;
        let expected = -4.0 * (2.5_f64 * t).tan();
        assert!(rel(g.mean_curvature(t).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn single_warp_matches_band() {
        let phi = Profile::cos_power(4, Interval::symmetric(0.7).unwrap()).unwrap();
        let g = WarpedBandMetric::uniform(phi.clone(), 6, Interval::symmetric(0.7).unwrap()).unwrap();
        for &t in &[-0.6, -0.1, 0.0, 0.4] {
            let a = g.scalar_curvature(t).unwrap();
            let b = scalar_curvature_single_warp(&phi, 6, t).unwrap();
            assert!(rel(a, b) < 1e-12);
        }
        let e = Profile::exponential(Interval::symmetric(1.0).unwrap());
        assert!(rel(scalar_curvature_single_warp(&e, 5, 0.2).unwrap(), -20.0) < 1e-13);
    }

    #[test]
    fn radial_examples() {
        let dom = Interval::new(0.0, 10.0).unwrap();
        let plane = Profile::power(1.0, dom).unwrap();
        assert_eq!(radial_scalar_curvature(&plane, 2.0).unwrap(), 0.0);
        let alpha = 0.3;
        let cone = Profile::power(alpha, dom).unwrap();
        let t = 1.7;
        assert!(rel(
            radial_scalar_curvature(&cone, t).unwrap(),
            2.0 * alpha * (1.0 - alpha) / (t * t)
        ) < 1e-13);
        // sin t on (0, π) is the round unit sphere: cos-power(2) shifted by π/2.
        let sphere = Profile::cos_power(2, Interval::symmetric(PI / 2.0).unwrap()).unwrap();
        assert!(rel(-2.0 * sphere.eval(0.4).unwrap().relative_d2(), 2.0) < 1e-14);
        assert!(radial_scalar_curvature(&plane, 0.0).is_err());
    }

    #[test]
    fn ricci_for_power_profile() {
        let alpha = 0.4;
        let n = 3;
        let dom = Interval::new(0.5, 2.0).unwrap();
        let g = WarpedBandMetric::uniform(Profile::power(alpha, dom).unwrap(), n, dom).unwrap();
        let t = 1.3;
        // s = α/t, s′ + s² = α(α − 1)/t²
        let expected = -((n - 1) as f64) * alpha * (alpha - 1.0) / (t * t);
        assert!(rel(g.ricci_normal(t).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn evaluation_outside_interval_fails() {
        let g = WarpedBandMetric::hyperbolic(3, Interval::symmetric(1.0).unwrap()).unwrap();
        assert!(matches!(g.scalar_curvature(1.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn profiles_must_cover_interval() {
        let p = Profile::exponential(Interval::new(0.0, 1.0).unwrap());
        assert!(WarpedBandMetric::new(vec![p], Interval::new(-1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn cross_validation_residuals() {
        let hyp = WarpedBandMetric::hyperbolic(4, Interval::symmetric(1.0).unwrap()).unwrap();
        assert!(hyp.cross_validate_uniform(1001).unwrap().residual_max < 1e-6);
        let flat = WarpedBandMetric::flat(4, Interval::symmetric(1.0).unwrap()).unwrap();
        assert!(flat.cross_validate_uniform(1001).unwrap().residual_max < 1e-12);
        let ext = WarpedBandMetric::extremal(3, Interval::symmetric(0.5).unwrap()).unwrap();
        let r = ext.cross_validate_uniform(1001).unwrap();
        assert!(r.residual_max < 1e-6, "{}", r.residual_max);
        assert_eq!(r.ts.len(), 997);
    }
}
