//! Bending families of fiber metrics, the ε-tube that rounds an edge, and
//! warped surfaces with quadratic curvature decay.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::profiles::{uniform_grid, DerivativeBundle, Interval, Profile};
use crate::shape::{second_fundamental_form_with_steps, sphere_point, DEFAULT_STEP};
use crate::warped::{radial_scalar_curvature, ricci_normal_of_jets, scalar_curvature_of_jets};

/// `h_ε(t) = h + t·A_new + (t²/2ε)(A_old − A_new)` with diagonal `h`, `A_new`,
/// `A_old`, for `t ∈ [0, ε]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BendingFamily {
    h: Vec<f64>,
    a_new: Vec<f64>,
    a_old: Vec<f64>,
    epsilon: f64,
}

impl BendingFamily {
    pub fn new(h: Vec<f64>, a_new: Vec<f64>, a_old: Vec<f64>, epsilon: f64) -> Result<Self> {
        if h.is_empty() || h.len() != a_new.len() || h.len() != a_old.len() {
            return Err(Error::invalid("h, a_new and a_old must be non-empty and of equal length"));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        if h.iter().chain(&a_new).chain(&a_old).any(|x| !x.is_finite()) {
            return Err(Error::invalid("metric data must be finite"));
        }
        let fam = BendingFamily { h, a_new, a_old, epsilon };
        // Each h_ii is a quadratic in t; its minimum on [0, ε] is at an end
        // point or at the vertex.
        for i in 0..fam.h.len() {
            let curv = (fam.a_old[i] - fam.a_new[i]) / fam.epsilon;
            let mut candidates = vec![0.0, fam.epsilon];
            if curv != 0.0 {
                let vertex = -fam.a_new[i] / curv;
                if vertex > 0.0 && vertex < fam.epsilon {
                    candidates.push(vertex);
                }
            }
            for t in candidates {
                let v = fam.component(i, t).0;
                if !(v > 0.0) {
                    return Err(Error::NonPositive { t, value: v });
                }
            }
        }
        Ok(fam)
    }

    /// Identity fiber metric of dimension `m`.
    pub fn flat(m: usize, a_new: Vec<f64>, a_old: Vec<f64>, epsilon: f64) -> Result<Self> {
        BendingFamily::new(vec![1.0; m], a_new, a_old, epsilon)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn fiber_dim(&self) -> usize {
        self.h.len()
    }

    /// `trace(A_old − A_new)`.
    pub fn trace_jump(&self) -> f64 {
        self.a_old.iter().zip(&self.a_new).map(|(o, n)| o - n).sum()
    }

    /// `(h_ii, h_ii′, h_ii″)` at `t`.
    fn component(&self, i: usize, t: f64) -> (f64, f64, f64) {
        let jump = self.a_old[i] - self.a_new[i];
        let s = t / self.epsilon;
        let value = self.h[i] + t * self.a_new[i] + 0.5 * t * s * jump;
        // (1 − s)·A_new + s·A_old reproduces both end values exactly.
        let d1 = (1.0 - s) * self.a_new[i] + s * self.a_old[i];
        (value, d1, jump / self.epsilon)
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(0.0..=self.epsilon).contains(&t) {
            return Err(Error::OutOfDomain {
                t,
                lo: 0.0,
                hi: self.epsilon,
            });
        }
        Ok(())
    }

    /// `h_ii(t)`.
    pub fn metric(&self, t: f64) -> Result<Vec<f64>> {
        self.check_t(t)?;
        Ok((0..self.h.len()).map(|i| self.component(i, t).0).collect())
    }

    /// `dh_ii/dt`.
    pub fn metric_derivative(&self, t: f64) -> Result<Vec<f64>> {
        self.check_t(t)?;
        Ok((0..self.h.len()).map(|i| self.component(i, t).1).collect())
    }

    /// Jets of `φᵢ = √h_ii`.
    pub fn jets(&self, t: f64) -> Result<Vec<DerivativeBundle>> {
        self.check_t(t)?;
        (0..self.h.len())
            .map(|i| {
                let (h, dh, ddh) = self.component(i, t);
                if !(h > 0.0) {
                    return Err(Error::NonPositive { t, value: h });
                }
                let phi = h.sqrt();
                let d1 = dh / (2.0 * phi);
                let d2 = ddh / (2.0 * phi) - dh * dh / (4.0 * h * phi);
                Ok(DerivativeBundle::new(phi, d1, d2))
            })
            .collect()
    }

    /// Scalar curvature of `dt² + Σ h_ii(t) dτᵢ²`.
    pub fn scalar_curvature(&self, t: f64) -> Result<f64> {
        Ok(scalar_curvature_of_jets(&self.jets(t)?))
    }

    /// `Ricci(∂t, ∂t)` by the Weyl formula and through the warping jets.
    pub fn weyl_ricci(&self, t: f64) -> Result<WeylCheck> {
        self.check_t(t)?;
        let (mut h, mut dh, mut ddh) = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..self.h.len() {
            let (a, b, c) = self.component(i, t);
            h.push(a);
            dh.push(b);
            ddh.push(c);
        }
        let weyl = weyl_ricci(&h, &dh, &ddh)?;
        let warped = ricci_normal_of_jets(&self.jets(t)?);
        Ok(WeylCheck {
            weyl,
            warped,
            residual: (weyl - warped).abs(),
        })
    }

    /// `sup |ε·Sc(t) + trace(A_old − A_new)|` over `samples` points of
    /// `[ε/10, 9ε/10]`.
    pub fn leading_term_defect(&self, samples: usize) -> Result<f64> {
        let e = self.epsilon;
        let jump = self.trace_jump();
        uniform_grid(0.1 * e, 0.9 * e, samples.max(2))
            .into_iter()
            .map(|t| Ok((e * self.scalar_curvature(t)? + jump).abs()))
            .try_fold(0.0_f64, |m, d: Result<f64>| Ok(m.max(d?)))
    }
}

/// Both evaluations of `Ricci(∂t, ∂t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylCheck {
    pub weyl: f64,
    pub warped: f64,
    pub residual: f64,
}

/// `−trace(dA*/dt + (A*)²)` with `A* = ½ h⁻¹ dh/dt`, for diagonal `h`.
pub fn weyl_ricci(h: &[f64], dh: &[f64], ddh: &[f64]) -> Result<f64> {
    if h.len() != dh.len() || h.len() != ddh.len() {
        return Err(Error::invalid("metric jets must have equal length"));
    }
    let mut trace = 0.0;
    for ((&h, &d1), &d2) in h.iter().zip(dh).zip(ddh) {
        if !(h > 0.0) {
            return Err(Error::invalid("fiber metric must be positive"));
        }
        let a = 0.5 * d1 / h;
        let da = 0.5 * d2 / h - 0.5 * d1 * d1 / (h * h);
        trace += da + a * a;
    }
    Ok(-trace)
}

/// Least-squares fit `Sc(t_ε) ≈ c/ε + d` over an ε-ladder, with `t_ε` at the
/// given fraction of `[0, ε]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseEpsilonFit {
    pub epsilons: Vec<f64>,
    pub sc: Vec<f64>,
    /// Coefficient of `1/ε`.
    pub coefficient: f64,
    pub intercept: f64,
}

pub fn fit_inverse_epsilon(
    h: &[f64],
    a_new: &[f64],
    a_old: &[f64],
    epsilons: &[f64],
    fraction: f64,
) -> Result<InverseEpsilonFit> {
    if epsilons.len() < 2 {
        return Err(Error::invalid("need at least two values of epsilon"));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::invalid("sample fraction must lie in (0, 1)"));
    }
    let sc = epsilons
        .par_iter()
        .map(|&e| {
            let fam = BendingFamily::new(h.to_vec(), a_new.to_vec(), a_old.to_vec(), e)?;
            fam.scalar_curvature(fraction * e)
        })
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = epsilons.iter().map(|e| 1.0 / e).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = sc.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&sc).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("epsilon values must be distinct"));
    }
    let coefficient = sxy / sxx;
    Ok(InverseEpsilonFit {
        epsilons: epsilons.to_vec(),
        sc,
        coefficient,
        intercept: my - coefficient * mx,
    })
}

/// Corner of `V × ℝ` rounded by an ε-tube, for the round ball `V = B(ρ) ⊂ ℝ^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundingProblem {
    pub m: usize,
    pub rho: f64,
    pub epsilon: f64,
    pub theta: f64,
}

impl RoundingProblem {
    pub fn new(m: usize, rho: f64, epsilon: f64, theta: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid("V must have dimension at least 2"));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::invalid(format!("rho must be positive, got {rho}")));
        }
        if !(epsilon > 0.0 && epsilon < rho / 4.0) {
            return Err(Error::invalid(format!("epsilon must lie in (0, rho/4), got {epsilon}")));
        }
        if !(theta.abs() <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid(format!("theta must lie in [-pi/2, pi/2], got {theta}")));
        }
        Ok(RoundingProblem { m, rho, epsilon, theta })
    }

    /// Mean curvature `(m−1)/ρ` of `∂V`.
    pub fn boundary_mean_curvature(&self) -> f64 {
        (self.m - 1) as f64 / self.rho
    }

    /// Rim point `((ρ − ε + ε cos θ)ω, ε sin θ)` for `ω` in hyperspherical
    /// angles; the last entry of `u` is the arc length `εθ` along the tube
    /// circle.
    pub fn parametrization(&self, u: &[f64]) -> Vec<f64> {
        let (angles, arc) = u.split_at(self.m - 1);
        let (s, c) = (arc[0] / self.epsilon).sin_cos();
        let r = self.rho - self.epsilon + self.epsilon * c;
        let mut p = sphere_point(r, angles);
        p.push(self.epsilon * s);
        p
    }
}

/// Principal curvatures and scalar curvature of the rounded corner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingCurvatures {
    /// Curvatures along `∂V` (`m − 1` equal values).
    pub lambdas: Vec<f64>,
    /// Curvature of the tube circle.
    pub lambda_n: f64,
    pub sc: f64,
}

pub fn rounding_tube(prob: &RoundingProblem) -> RoundingCurvatures {
    let c = prob.theta.cos();
    let lam = c / (prob.rho - prob.epsilon + prob.epsilon * c);
    let lambdas = vec![lam; prob.m - 1];
    let lambda_n = 1.0 / prob.epsilon;
    let sum: f64 = lambdas.iter().sum::<f64>() + lambda_n;
    let sq: f64 = lambdas.iter().map(|l| l * l).sum::<f64>() + lambda_n * lambda_n;
    RoundingCurvatures {
        lambdas,
        lambda_n,
        sc: sum * sum - sq,
    }
}

/// Closed-form against finite-difference principal curvatures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingCheck {
    pub closed_form: Vec<f64>,
    pub finite_difference: Vec<f64>,
    /// `max |λ − λ_fd| / max(1, |λ|)`.
    pub max_residual: f64,
}

/// Recomputes the tube curvatures from the explicit parametrization,
/// oriented by the inward normal `−(cos θ ω, sin θ)`.
pub fn rounding_tube_fd(prob: &RoundingProblem) -> Result<RoundingCheck> {
    let u: Vec<f64> = (0..prob.m - 1)
        .map(|i| 0.8 + 0.41 * i as f64)
        .chain([prob.epsilon * prob.theta])
        .collect();
    // The tube circle needs a step well below ε; ∂V directions do not.
    let mut steps = vec![DEFAULT_STEP; prob.m];
    steps[prob.m - 1] = 0.05 * prob.epsilon;
    let sff = second_fundamental_form_with_steps(|x| prob.parametrization(x), &u, &steps)?;
    let (s, c) = prob.theta.sin_cos();
    let mut inward: Vec<f64> = sphere_point(1.0, &u[..prob.m - 1]).iter().map(|w| -c * w).collect();
    inward.push(-s);
    // ⟨∂²X, ν⟩ with ν inward is positive on convex pieces.
    let fd = sff.principal_curvatures_along(&inward)?;
    let closed = rounding_tube(prob);
    let mut closed_form = closed.lambdas.clone();
    closed_form.push(closed.lambda_n);
    closed_form.sort_by(f64::total_cmp);
    let max_residual = closed_form
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok(RoundingCheck {
        closed_form,
        finite_difference: fd,
        max_residual,
    })
}

/// `dt² + t^{2α} dθ²` on the ball of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticDecay {
    pub alpha: f64,
    pub radius: f64,
    /// Minimum of the sampled scalar curvature over `(0, R]`.
    pub min_sc: f64,
    /// `2α(1−α)/R²`.
    pub expected: f64,
    /// `4π²/R²`.
    pub bound: f64,
}

impl QuadraticDecay {
    pub fn bound_holds(&self) -> bool {
        self.min_sc <= self.bound
    }
}

/// Grid size used to sample the radial curvature.
pub const DECAY_SAMPLES: usize = 1001;

pub fn quadratic_decay_profile(alpha: f64, radius: f64) -> Result<QuadraticDecay> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(radius > 1.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("R must exceed 1, got {radius}")));
    }
    let lo = radius * 1e-3;
    let phi = Profile::power(alpha, Interval::new(lo, radius)?)?;
    let min_sc = uniform_grid(lo, radius, DECAY_SAMPLES)
        .into_iter()
        .map(|t| radial_scalar_curvature(&phi, t))
        .try_fold(f64::INFINITY, |m, s: Result<f64>| Ok::<f64, Error>(m.min(s?)))?;
    Ok(QuadraticDecay {
        alpha,
        radius,
        min_sc,
        expected: 2.0 * alpha * (1.0 - alpha) / (radius * radius),
        bound: 4.0 * std::f64::consts::PI.powi(2) / (radius * radius),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_identities() {
        let fam = BendingFamily::new(vec![1.0, 2.0, 0.5], vec![0.1, -0.3, 0.7], vec![0.3, 0.2, -0.1], 1e-3).unwrap();
        assert_eq!(fam.metric(0.0).unwrap(), vec![1.0, 2.0, 0.5]);
        assert_eq!(fam.metric_derivative(0.0).unwrap(), vec![0.1, -0.3, 0.7]);
        assert_eq!(fam.metric_derivative(1e-3).unwrap(), vec![0.3, 0.2, -0.1]);
        assert!(fam.metric(2e-3).is_err());
    }

    #[test]
    fn equal_forms_give_linear_family() {
        let a = vec![0.4, -0.2];
        let fam = BendingFamily::new(vec![1.0, 1.0], a.clone(), a, 0.5).unwrap();
        let m = fam.metric(0.25).unwrap();
        assert!((m[0] - 1.1).abs() < 1e-15 && (m[1] - 0.95).abs() < 1e-15);
    }

    #[test]
    fn non_positive_metric_rejected() {
        assert!(BendingFamily::new(vec![0.01], vec![-1.0], vec![-1.0], 0.1).is_err());
        // Vertex of the quadratic inside [0, ε].
        assert!(BendingFamily::new(vec![0.01], vec![-1.0], vec![1.0], 0.1).is_err());
    }

    #[test]
    fn bending_law() {
        let fit =
            fit_inverse_epsilon(&[1.0; 3], &[0.0; 3], &[1.0, 0.0, 0.0], &[1e-2, 1e-3, 1e-4], 0.5).unwrap();
        assert!((fit.coefficient + 1.0).abs() < 1e-2, "{fit:?}");
        let fam = BendingFamily::flat(3, vec![0.0; 3], vec![1.0, 0.0, 0.0], 1e-4).unwrap();
        assert!((1e-4 * fam.scalar_curvature(0.5e-4).unwrap() + 1.0).abs() < 1e-2);
        // Envelope shrinks along the ladder.
        let defects: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| {
                BendingFamily::flat(3, vec![0.2, 0.0, -0.1], vec![1.0, 0.5, 0.0], e)
                    .unwrap()
                    .leading_term_defect(33)
                    .unwrap()
            })
            .collect();
        assert!(defects[0] > defects[1] && defects[1] > defects[2], "{defects:?}");
    }

    #[test]
    fn weyl_formula() {
        let stat = BendingFamily::flat(3, vec![0.0; 3], vec![0.0; 3], 0.1).unwrap();
        assert_eq!(stat.weyl_ricci(0.05).unwrap().weyl, 0.0);
        let fam = BendingFamily::new(vec![1.0, 2.0], vec![0.3, -0.5], vec![-0.2, 0.4], 0.01).unwrap();
        for k in 0..=10 {
            let c = fam.weyl_ricci(0.001 * k as f64).unwrap();
            assert!(c.residual < 1e-8 * (1.0 + c.weyl.abs()), "{c:?}");
        }
        // h = e^{2t} on m fibers: Ricci(∂t, ∂t) = −m.
        let m = 4;
        for t in [-1.0, 0.0, 0.7] {
            let e = (2.0_f64 * t).exp();
            let r = weyl_ricci(&vec![e; m], &vec![2.0 * e; m], &vec![4.0 * e; m]).unwrap();
            assert!((r + m as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn rounding_round_ball() {
        let p = RoundingProblem::new(3, 1.0, 1e-4, 0.0).unwrap();
        let c = rounding_tube(&p);
        assert_eq!(p.epsilon * c.lambda_n, 1.0);
        assert!((p.epsilon * c.sc - 4.0).abs() < 0.04);
        let side = rounding_tube(&RoundingProblem::new(3, 1.0, 1e-4, std::f64::consts::FRAC_PI_2).unwrap());
        assert!(side.sc.abs() < 1e-8);
        assert!(RoundingProblem::new(3, 1.0, 0.3, 0.0).is_err());
        assert!(RoundingProblem::new(3, 1.0, 0.1, 2.0).is_err());
    }

    #[test]
    fn rounding_finite_differences() {
        for m in [2, 3, 4] {
            for theta in [-1.2, -0.4, 0.0, 0.5, 1.3] {
                let p = RoundingProblem::new(m, 1.3, 0.2, theta).unwrap();
                let chk = rounding_tube_fd(&p).unwrap();
                assert!(chk.max_residual < 1e-6, "{m} {theta} {chk:?}");
            }
        }
        for eps in [1e-2, 1e-3, 1e-4] {
            let chk = rounding_tube_fd(&RoundingProblem::new(3, 1.0, eps, 0.3).unwrap()).unwrap();
            assert!(chk.max_residual < 1e-6, "{eps} {chk:?}");
        }
    }

    #[test]
    fn quadratic_decay() {
        let q = quadratic_decay_profile(0.5, 3.0).unwrap();
        assert!((q.min_sc - 1.0 / 18.0).abs() < 1e-12);
        assert!(q.bound_holds());
        assert!(quadratic_decay_profile(1.0, 3.0).is_err());
        assert!(quadratic_decay_profile(0.5, 0.5).is_err());
    }
}
