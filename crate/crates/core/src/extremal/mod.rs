//! Extremal torical bands: width constants, the Riccati profile equation
//! `−2f′ − nf² = σ/(n−1)` for `f = φ′/φ`, boundary-value feasibility, and
//! the one-step symmetrization toy on a circle.

mod feasibility;
mod riccati;
mod stability;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::profiles::Interval;

pub use feasibility::{
    extremal_profile, max_band_width, max_band_width_with, symmetrization_corollary_bound,
    BandWidth, CorollaryBound, WidthSearch,
};
pub use riccati::{
    integrate_riccati, integrate_riccati_with, Direction, RiccatiOptions, RiccatiSolution,
    DIVERGENCE_THRESHOLD,
};
pub use stability::{
    lowest_eigenvalue, stability_step, verify_symmetrization_invariant, SliceCurvatures, StabilityOutcome,
    StabilityProblem, SymmetrizationReport, DEFAULT_GRID,
};

/// Topological width classes and their proven width constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandClass {
    Overtorical,
    IsoEnlargeable,
    IsoEnlargeableCompact,
    Sys,
    Syse,
}

impl BandClass {
    pub const ALL: [BandClass; 5] = [
        BandClass::Overtorical,
        BandClass::IsoEnlargeable,
        BandClass::IsoEnlargeableCompact,
        BandClass::Sys,
        BandClass::Syse,
    ];

    /// Multiplier `k` in `width ≤ k·π·√((n−1)/(σn))`.
    pub fn pi_multiple(self) -> f64 {
        match self {
            BandClass::Overtorical | BandClass::IsoEnlargeableCompact => 2.0,
            BandClass::IsoEnlargeable | BandClass::Sys => 4.0,
            BandClass::Syse => 8.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BandClass::Overtorical => "overtorical",
            BandClass::IsoEnlargeable => "iso-enlargeable",
            BandClass::IsoEnlargeableCompact => "iso-enlargeable-compact",
            BandClass::Sys => "SYS",
            BandClass::Syse => "SYSE",
        }
    }
}

impl fmt::Display for BandClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BandClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BandClass::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown band class '{s}'")))
    }
}

/// Upper bound on the width of a band of the given class with `Sc ≥ σ > 0`.
pub fn width_bound(class: BandClass, n: usize, sigma: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::invalid(format!("σ must be positive, got {sigma}")));
    }
    let nf = n as f64;
    Ok(class.pi_multiple() * std::f64::consts::PI * ((nf - 1.0) / (sigma * nf)).sqrt())
}

/// Lower bound `σ(t)` for the scalar curvature, as a function of the signed
/// distance to the separating hypersurface.
#[derive(Clone)]
pub struct ScalarBound {
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: Interval,
    breakpoints: Vec<f64>,
    label: String,
}

impl fmt::Debug for ScalarBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarBound")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl ScalarBound {
    pub fn constant(c: f64) -> Self {
        ScalarBound {
            func: Arc::new(move |_| c),
            domain: Interval::real_line(),
            breakpoints: Vec::new(),
            label: format!("constant({c})"),
        }
    }

    /// `inner` on `[−half_width, half_width]`, `outer` elsewhere.
    pub fn plateau(inner: f64, half_width: f64, outer: f64) -> Result<Self> {
        if !(half_width >= 0.0) {
            return Err(Error::invalid("plateau half-width must be non-negative"));
        }
        let breakpoints = if half_width > 0.0 {
            vec![-half_width, half_width]
        } else {
            Vec::new()
        };
        Ok(ScalarBound {
            func: Arc::new(move |t: f64| if t.abs() <= half_width && half_width > 0.0 { inner } else { outer }),
            domain: Interval::real_line(),
            breakpoints,
            label: format!("plateau({inner} on ±{half_width}, {outer} outside)"),
        })
    }

    /// Arbitrary piecewise-continuous bound; `breakpoints` lists the jumps.
    pub fn from_fn<F>(func: F, domain: Interval, mut breakpoints: Vec<f64>, label: impl Into<String>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        breakpoints.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        breakpoints.dedup();
        ScalarBound {
            func: Arc::new(func),
            domain,
            breakpoints,
            label: label.into(),
        }
    }

    /// Bound for the metric scaled by `λ²`: `t ↦ σ(t/λ)/λ²`.
    pub fn rescaled(&self, lambda: f64) -> Self {
        let inner = self.func.clone();
        ScalarBound {
            func: Arc::new(move |t| inner(t / lambda) / (lambda * lambda)),
            domain: Interval {
                lo: self.domain.lo * lambda,
                hi: self.domain.hi * lambda,
            },
            breakpoints: self.breakpoints.iter().map(|b| b * lambda).collect(),
            label: format!("{} scaled by {lambda}", self.label),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.func)(t)
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Data of a band problem: dimension, curvature bound and lower bounds `M∓`
/// for the boundary mean curvatures (outward normals). `M∓ = −∞` means no
/// constraint at that end.
#[derive(Debug, Clone)]
pub struct BandSpec {
    n: usize,
    sigma: ScalarBound,
    m_minus: f64,
    m_plus: f64,
}

impl BandSpec {
    pub fn new(n: usize, sigma: ScalarBound, m_minus: f64, m_plus: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("dimension must be at least 2"));
        }
        if m_minus.is_nan() || m_plus.is_nan() {
            return Err(Error::invalid("mean-curvature bounds must not be NaN"));
        }
        Ok(BandSpec {
            n,
            sigma,
            m_minus,
            m_plus,
        })
    }

    /// Constant curvature bound with no boundary constraint.
    pub fn unconstrained(n: usize, sigma: f64) -> Result<Self> {
        BandSpec::new(n, ScalarBound::constant(sigma), f64::NEG_INFINITY, f64::NEG_INFINITY)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &ScalarBound {
        &self.sigma
    }

    pub fn m_minus(&self) -> f64 {
        self.m_minus
    }

    pub fn m_plus(&self) -> f64 {
        self.m_plus
    }

    /// The same problem for the metric scaled by `λ²`.
    pub fn rescaled(&self, lambda: f64) -> Self {
        BandSpec {
            n: self.n,
            sigma: self.sigma.rescaled(lambda),
            m_minus: self.m_minus / lambda,
            m_plus: self.m_plus / lambda,
        }
    }

    /// Largest admissible `f(−l) = −M₋/(n−1)`.
    pub fn start_value(&self) -> f64 {
        -self.m_minus / (self.n - 1) as f64
    }

    /// Required `f(l) ≥ M₊/(n−1)`.
    pub fn target_value(&self) -> f64 {
        self.m_plus / (self.n - 1) as f64
    }

    /// Right-hand side of `f′ = −(σ(t)/(n−1) + n f²)/2`.
    pub fn riccati_rhs(&self, t: f64, f: f64) -> f64 {
        let k = (self.n - 1) as f64;
        -0.5 * (self.sigma.eval(t) / k + self.n as f64 * f * f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn overtorical_at_round_sphere_curvature() {
        for n in 2..12 {
            let w = width_bound(BandClass::Overtorical, n, (n * (n - 1)) as f64).unwrap();
            assert!((w - 2.0 * PI / n as f64).abs() < 1e-14);
        }
        assert!((width_bound(BandClass::Overtorical, 2, 2.0).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn class_ratios() {
        for n in 2..8 {
            let base = width_bound(BandClass::Overtorical, n, 3.7).unwrap();
            let syse = width_bound(BandClass::Syse, n, 3.7).unwrap();
            let ie = width_bound(BandClass::IsoEnlargeable, n, 3.7).unwrap();
            let iec = width_bound(BandClass::IsoEnlargeableCompact, n, 3.7).unwrap();
            assert!((syse - 4.0 * base).abs() < 1e-14);
            assert!((ie - 2.0 * base).abs() < 1e-14);
            assert_eq!(iec, base);
        }
    }

    #[test]
    fn non_positive_sigma_rejected() {
        assert!(width_bound(BandClass::Sys, 3, 0.0).is_err());
        assert!(width_bound(BandClass::Sys, 3, -1.0).is_err());
    }

    #[test]
    fn class_parsing() {
        assert_eq!("syse".parse::<BandClass>().unwrap(), BandClass::Syse);
        assert_eq!("iso-enlargeable-compact".parse::<BandClass>().unwrap(), BandClass::IsoEnlargeableCompact);
        assert!("torical".parse::<BandClass>().is_err());
    }

    #[test]
    fn plateau_bound() {
        let s = ScalarBound::plateau(6.0, 0.5, -0.1).unwrap();
        assert_eq!(s.eval(0.5), 6.0);
        assert_eq!(s.eval(0.51), -0.1);
        assert_eq!(s.breakpoints(), &[-0.5, 0.5]);
        let r = s.rescaled(2.0);
        assert_eq!(r.eval(0.9), 1.5);
        assert_eq!(r.breakpoints(), &[-1.0, 1.0]);
    }
}
