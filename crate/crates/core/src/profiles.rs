//! One-variable warping profiles and their first two derivatives.

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]`. Infinite endpoints are allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::invalid(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn symmetric(half_width: f64) -> Result<Self> {
        Interval::new(-half_width, half_width)
    }

    pub fn real_line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub(crate) fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                t,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

/// Value and first two derivatives of a profile at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBundle {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl DerivativeBundle {
    pub fn new(value: f64, d1: f64, d2: f64) -> Self {
        DerivativeBundle { value, d1, d2 }
    }

    /// Logarithmic derivative `φ′/φ`.
    pub fn log_slope(&self) -> f64 {
        self.d1 / self.value
    }

    /// `φ″/φ`.
    pub fn relative_d2(&self) -> f64 {
        self.d2 / self.value
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

/// Tabulated profile: strictly increasing grid, values, and the second
/// derivatives of the natural cubic spline through them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledData {
    ts: Vec<f64>,
    vs: Vec<f64>,
    spline_m: Vec<f64>,
}

impl SampledData {
    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn values(&self) -> &[f64] {
        &self.vs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Constant(f64),
    /// `t^α`
    Power(f64),
    /// `e^t`
    Exponential,
    /// `cos(nt/2)^{2/n}`, the extremal torical warping function.
    CosPower(usize),
    Sampled(SampledData),
    /// `λ·φ(t/λ)`: the warping function of `φ` after the metric is scaled by `λ²`.
    Rescaled { inner: Box<Profile>, lambda: f64 },
}

/// A positive warping function on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    kind: ProfileKind,
    domain: Interval,
}

/// Minimum number of samples in a tabulated profile.
pub const MIN_SAMPLES: usize = 5;

impl Profile {
    pub fn constant(c: f64, domain: Interval) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::invalid(format!("constant profile must be positive, got {c}")));
        }
        Ok(Profile {
            kind: ProfileKind::Constant(c),
            domain,
        })
    }

    pub fn power(alpha: f64, domain: Interval) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::invalid("power exponent must be finite"));
        }
        if domain.lo < 0.0 {
            return Err(Error::invalid("power profile t^α needs a domain in t ≥ 0"));
        }
        Ok(Profile {
            kind: ProfileKind::Power(alpha),
            domain,
        })
    }

    pub fn exponential(domain: Interval) -> Self {
        Profile {
            kind: ProfileKind::Exponential,
            domain,
        }
    }

    /// `cos(nt/2)^{2/n}` on a sub-interval of `[-π/n, π/n]`.
    pub fn cos_power(n: usize, domain: Interval) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cos-power profile needs n ≥ 1"));
        }
        let edge = std::f64::consts::PI / n as f64;
        if domain.lo < -edge || domain.hi > edge {
            return Err(Error::invalid(format!(
                "cos-power({n}) is only defined on [-π/{n}, π/{n}]"
            )));
        }
        Ok(Profile {
            kind: ProfileKind::CosPower(n),
            domain,
        })
    }

    /// The full extremal interval `[-π/n, π/n]` of `cos(nt/2)^{2/n}`.
    pub fn extremal(n: usize) -> Result<Self> {
        let edge = std::f64::consts::PI / n.max(1) as f64;
        Profile::cos_power(n, Interval::symmetric(edge)?)
    }

    /// Tabulated profile with natural cubic spline interpolation.
    pub fn sampled(ts: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        if ts.len() != vs.len() {
            return Err(Error::invalid("grid and values differ in length"));
        }
        if ts.len() < MIN_SAMPLES {
            return Err(Error::invalid(format!(
                "sampled profiles need at least {MIN_SAMPLES} points, got {}",
                ts.len()
            )));
        }
        if ts.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("sample grid must be strictly increasing"));
        }
        if let Some((t, v)) = ts.iter().zip(&vs).find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::NonPositive { t: *t, value: *v });
        }
        let spline_m = natural_spline_moments(&ts, &vs);
        let domain = Interval::new(ts[0], ts[ts.len() - 1])?;
        Ok(Profile {
            kind: ProfileKind::Sampled(SampledData { ts, vs, spline_m }),
            domain,
        })
    }

    /// Profile of the metric scaled by `λ²`: `t ↦ λ φ(t/λ)` on `λ·domain`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!("scale factor must be positive, got {lambda}")));
        }
        let domain = Interval::new(self.domain.lo * lambda, self.domain.hi * lambda)?;
        Ok(Profile {
            kind: ProfileKind::Rescaled {
                inner: Box::new(self.clone()),
                lambda,
            },
            domain,
        })
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Same profile with a narrower (or equal) domain.
    pub fn restricted(&self, domain: Interval) -> Result<Self> {
        if domain.lo < self.domain.lo || domain.hi > self.domain.hi {
            return Err(Error::invalid("restriction must lie inside the current domain"));
        }
        if let ProfileKind::Sampled(_) = self.kind {
            return Err(Error::invalid("sampled profiles keep their grid as domain"));
        }
        Ok(Profile {
            kind: self.kind.clone(),
            domain,
        })
    }

    /// Value and first two derivatives at `t`.
    ///
    /// Closed-form kinds are differentiated analytically. Tabulated profiles
    /// use five-point central differences of the spline with the local grid
    /// step, so `t` must sit at least two grid steps inside the ends.
    pub fn eval(&self, t: f64) -> Result<DerivativeBundle> {
        self.domain.check(t)?;
        let jet = match &self.kind {
            ProfileKind::Constant(c) => DerivativeBundle::new(*c, 0.0, 0.0),
            ProfileKind::Power(alpha) => {
                let a = *alpha;
                DerivativeBundle::new(
                    t.powf(a),
                    a * t.powf(a - 1.0),
                    a * (a - 1.0) * t.powf(a - 2.0),
                )
            }
            ProfileKind::Exponential => {
                let e = t.exp();
                DerivativeBundle::new(e, e, e)
            }
            ProfileKind::CosPower(n) => cos_power_jet(*n, t),
            ProfileKind::Sampled(data) => sampled_jet(data, t)?,
            ProfileKind::Rescaled { inner, lambda } => {
                let j = inner.eval(t / lambda)?;
                DerivativeBundle::new(lambda * j.value, j.d1, j.d2 / lambda)
            }
        };
        if !(jet.value > 0.0) {
            return Err(Error::NonPositive {
                t,
                value: jet.value,
            });
        }
        Ok(jet)
    }

    /// Profile value only.
    pub fn value(&self, t: f64) -> Result<f64> {
        self.domain.check(t)?;
        let v = match &self.kind {
            ProfileKind::Sampled(data) => spline_value(data, t),
            _ => return self.eval(t).map(|j| j.value),
        };
        if !(v > 0.0) {
            return Err(Error::NonPositive { t, value: v });
        }
        Ok(v)
    }

    /// Tabulate the profile on `grid`; the result reproduces the source
    /// exactly at the grid points.
    pub fn sample(&self, grid: &[f64]) -> Result<Profile> {
        for &t in grid {
            self.domain.check(t)?;
        }
        let vs = grid.iter().map(|&t| self.value(t)).collect::<Result<Vec<_>>>()?;
        Profile::sampled(grid.to_vec(), vs)
    }
}

fn cos_power_jet(n: usize, t: f64) -> DerivativeBundle {
    let nf = n as f64;
    let x = 0.5 * nf * t;
    // cos(x) at the edge x = ±π/2 only rounds to a tiny positive number.
    let value = if x.abs() >= std::f64::consts::FRAC_PI_2 * (1.0 - 1e-14) {
        0.0
    } else {
        x.cos().powf(2.0 / nf)
    };
    // φ′/φ = −tan(nt/2) and (φ′/φ)′ = −(n/2)(1 + tan²)
    let f = -x.tan();
    let df = -0.5 * nf * (1.0 + f * f);
    DerivativeBundle::new(value, value * f, value * (df + f * f))
}

/// Uniform grid of `count` points spanning `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { hi } else { lo + h * i as f64 })
                .collect()
        }
    }
}

fn natural_spline_moments(ts: &[f64], vs: &[f64]) -> Vec<f64> {
    let n = ts.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations, M₀ = M_{n-1} = 0.
    let k = n - 2;
    let mut diag = vec![0.0; k];
    let mut upper = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for i in 1..n - 1 {
        let h0 = ts[i] - ts[i - 1];
        let h1 = ts[i + 1] - ts[i];
        diag[i - 1] = 2.0 * (h0 + h1);
        upper[i - 1] = h1;
        rhs[i - 1] = 6.0 * ((vs[i + 1] - vs[i]) / h1 - (vs[i] - vs[i - 1]) / h0);
    }
    for i in 1..k {
        let lower = ts[i + 1] - ts[i];
        let w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m[k] = rhs[k - 1] / diag[k - 1];
    for i in (0..k - 1).rev() {
        m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
    }
    m
}

fn locate(ts: &[f64], t: f64) -> usize {
    match ts.binary_search_by(|x| x.partial_cmp(&t).expect("finite grid")) {
        Ok(i) => i.min(ts.len() - 2),
        Err(i) => i.saturating_sub(1).min(ts.len() - 2),
    }
}

fn spline_value(data: &SampledData, t: f64) -> f64 {
    let (ts, vs, m) = (&data.ts, &data.vs, &data.spline_m);
    let i = locate(ts, t);
    if t == ts[i] {
        return vs[i];
    }
    if t == ts[i + 1] {
        return vs[i + 1];
    }
    let h = ts[i + 1] - ts[i];
    let a = (ts[i + 1] - t) / h;
    let b = (t - ts[i]) / h;
    a * vs[i] + b * vs[i + 1] + ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0
}

fn sampled_jet(data: &SampledData, t: f64) -> Result<DerivativeBundle> {
    let ts = &data.ts;
    let i = locate(ts, t);
    let h = ts[i + 1] - ts[i];
    let lo = ts[0];
    let hi = ts[ts.len() - 1];
    // A small slack keeps grid nodes exactly two steps from the end usable.
    let slack = 1e-9 * h;
    if t - 2.0 * h < lo - slack || t + 2.0 * h > hi + slack {
        return Err(Error::OutOfDomain {
            t,
            lo: lo + 2.0 * h,
            hi: hi - 2.0 * h,
        });
    }
    let at = |x: f64| spline_value(data, x.clamp(lo, hi));
    let (fm2, fm1, f0, fp1, fp2) = (at(t - 2.0 * h), at(t - h), at(t), at(t + h), at(t + 2.0 * h));
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    Ok(DerivativeBundle::new(f0, d1, d2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn exponential_at_zero() {
        let p = Profile::exponential(Interval::new(-1.0, 1.0).unwrap());
        assert_eq!(p.eval(0.0).unwrap(), DerivativeBundle::new(1.0, 1.0, 1.0));
    }

    #[test]
    fn square_root_at_four() {
        let p = Profile::power(0.5, Interval::new(0.0, 10.0).unwrap()).unwrap();
        let j = p.eval(4.0).unwrap();
        assert!(close(j.value, 2.0, 1e-15));
        assert!(close(j.d1, 0.25, 1e-15));
        assert!(close(j.d2, -1.0 / 32.0, 1e-15));
    }

    #[test]
    fn cos_power_two_at_zero() {
        let p = Profile::extremal(2).unwrap();
        let j = p.eval(0.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (1.0, 0.0, -1.0));
    }

    #[test]
    fn cos_power_vanishes_at_edge() {
        let p = Profile::extremal(3).unwrap();
        assert!(matches!(p.eval(PI / 3.0), Err(Error::NonPositive { .. })));
    }

    #[test]
    fn power_at_origin_is_domain_edge() {
        let p = Profile::power(0.5, Interval::new(0.0, 1.0).unwrap()).unwrap();
        assert!(matches!(p.eval(0.0), Err(Error::NonPositive { .. })));
    }

    #[test]
    fn out_of_domain_rejected() {
        let p = Profile::exponential(Interval::new(0.0, 1.0).unwrap());
        assert!(matches!(p.eval(1.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn sampling_constant_gives_constant_values() {
        let p = Profile::constant(3.0, Interval::new(-2.0, 2.0).unwrap()).unwrap();
        let s = p.sample(&uniform_grid(-1.0, 1.0, 9)).unwrap();
        match s.kind() {
            ProfileKind::Sampled(d) => assert!(d.values().iter().all(|&v| v == 3.0)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn sampling_exponential_is_exact_at_nodes() {
        let p = Profile::exponential(Interval::new(0.0, 1.0).unwrap());
        let grid = uniform_grid(0.0, 1.0, 101);
        let s = p.sample(&grid).unwrap();
        for &t in &grid {
            assert_eq!(s.value(t).unwrap(), t.exp());
        }
    }

    #[test]
    fn sampled_cos_power_is_positive() {
        let p = Profile::cos_power(4, Interval::symmetric(PI / 4.0).unwrap()).unwrap();
        let s = p.sample(&uniform_grid(-PI / 8.0, PI / 8.0, 41)).unwrap();
        match s.kind() {
            ProfileKind::Sampled(d) => assert!(d.values().iter().all(|&v| v > 0.0)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn sampling_outside_domain_fails() {
        let p = Profile::exponential(Interval::new(0.0, 1.0).unwrap());
        assert!(p.sample(&uniform_grid(-0.5, 0.5, 11)).is_err());
    }

    #[test]
    fn sampled_rejects_short_or_unsorted_grids() {
        assert!(Profile::sampled(vec![0.0, 1.0, 2.0], vec![1.0; 3]).is_err());
        assert!(Profile::sampled(vec![0.0, 1.0, 1.0, 2.0, 3.0], vec![1.0; 5]).is_err());
        assert!(Profile::sampled(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![1.0, 1.0, 0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn sampled_derivatives_need_two_steps_of_margin() {
        let p = Profile::exponential(Interval::new(0.0, 1.0).unwrap());
        let s = p.sample(&uniform_grid(0.0, 1.0, 11)).unwrap();
        assert!(s.eval(0.2).is_ok());
        assert!(matches!(s.eval(0.1), Err(Error::OutOfDomain { .. })));
        assert!(matches!(s.eval(0.95), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn spline_matches_smooth_function_between_nodes() {
        let p = Profile::exponential(Interval::new(0.0, 1.0).unwrap());
        let s = p.sample(&uniform_grid(0.0, 1.0, 1001)).unwrap();
        let t = 0.4567;
        assert!(close(s.value(t).unwrap(), t.exp(), 1e-12));
        let j = s.eval(t).unwrap();
        assert!(close(j.d1, t.exp(), 1e-8));
        assert!(close(j.d2, t.exp(), 1e-6));
    }

    #[test]
    fn rescaled_profile_derivatives() {
        let p = Profile::exponential(Interval::new(-1.0, 1.0).unwrap());
        let q = p.rescaled(2.0).unwrap();
        let j = q.eval(1.0).unwrap();
        let e = 0.5f64.exp();
        assert!(close(j.value, 2.0 * e, 1e-15));
        assert!(close(j.d1, e, 1e-15));
        assert!(close(j.d2, e / 2.0, 1e-15));
        assert_eq!(q.domain(), Interval::new(-2.0, 2.0).unwrap());
    }

    #[test]
    fn eval_is_bitwise_deterministic() {
        let p = Profile::cos_power(5, Interval::symmetric(0.5).unwrap()).unwrap();
        for i in 0..50 {
            let t = -0.5 + 0.02 * i as f64;
            assert_eq!(p.eval(t).unwrap(), p.eval(t).unwrap());
        }
    }
}
