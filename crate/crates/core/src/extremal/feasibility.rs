use serde::Serialize;

use crate::error::{Error, Result};

use super::riccati::{drive, integrate_riccati_with, Direction, RiccatiOptions, RiccatiSolution};
use super::{BandSpec, ScalarBound};

/// Outcome of the boundary-value feasibility search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BandWidth {
    /// Supremum `2l` of admissible widths.
    Finite { width: f64 },
    /// Admissible profiles exist on arbitrarily long intervals. When the
    /// most permissive profile is a fixed point `f ≡ c` (the rigid equality
    /// case) `stationary` carries `c`.
    Unbounded { stationary: Option<f64> },
    /// No interval of positive length admits a profile.
    Infeasible,
}

impl BandWidth {
    pub fn width(&self) -> Option<f64> {
        match *self {
            BandWidth::Finite { width } => Some(width),
            BandWidth::Unbounded { .. } => Some(f64::INFINITY),
            BandWidth::Infeasible => None,
        }
    }
}

/// Knobs of the width search.
#[derive(Debug, Clone, Copy)]
pub struct WidthSearch {
    /// Half-widths above this count as unbounded.
    pub max_half_width: f64,
    /// Geometric step of the coarse scan.
    pub scan_factor: f64,
    /// Smallest positive half-width tried by the scan.
    pub min_half_width: f64,
    /// Bisection stops when the bracket is this narrow.
    pub bisection_tol: f64,
    pub riccati: RiccatiOptions,
}

impl Default for WidthSearch {
    fn default() -> Self {
        WidthSearch {
            max_half_width: 500.0,
            scan_factor: 1.05,
            min_half_width: 1e-4,
            bisection_tol: 1e-10,
            riccati: RiccatiOptions::default(),
        }
    }
}

/// Supremum of `2l` such that some `f` on `[−l, l]` satisfies
/// `−2f′ − nf² ≥ σ/(n−1)`, `f(−l) ≤ −M₋/(n−1)` and `f(l) ≥ M₊/(n−1)`.
///
/// By comparison it suffices to shoot the equality from the largest allowed
/// start value and test the end condition.
pub fn max_band_width(spec: &BandSpec) -> Result<BandWidth> {
    max_band_width_with(spec, &WidthSearch::default())
}

pub fn max_band_width_with(spec: &BandSpec, search: &WidthSearch) -> Result<BandWidth> {
    let domain = spec.sigma().domain();
    let cap = search.max_half_width.min(-domain.lo).min(domain.hi);
    if !(cap > 0.0) {
        return Err(Error::invalid("σ must be defined on a neighbourhood of 0"));
    }
    if !(search.scan_factor > 1.0) {
        return Err(Error::invalid("scan factor must exceed 1"));
    }
    let start = spec.start_value();
    let target = spec.target_value();

    let probe = shoot(spec, cap, &search.riccati)?;
    if probe.ok(target) {
        let stationary = (start.is_finite() && probe.fs.iter().all(|f| (f - start).abs() <= 1e-12 * start.abs().max(1.0)))
            .then_some(start);
        return Ok(BandWidth::Unbounded { stationary });
    }

    let mut hi = cap;
    let mut l = cap / search.scan_factor;
    let mut lo = None;
    while l >= search.min_half_width {
        if shoot(spec, l, &search.riccati)?.ok(target) {
            lo = Some(l);
            break;
        }
        hi = l;
        l /= search.scan_factor;
    }
    let mut lo = match lo {
        Some(l) => l,
        None => {
            let degenerate = start >= target;
            if !degenerate {
                return Ok(BandWidth::Infeasible);
            }
            // Tiny bands; refine from zero.
            hi = hi.min(search.min_half_width * search.scan_factor);
            0.0
        }
    };
    while hi - lo > search.bisection_tol {
        let mid = 0.5 * (lo + hi);
        if shoot(spec, mid, &search.riccati)?.ok(target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0.0 {
        // Only the zero-length band passes; a band needs positive width.
        return Ok(BandWidth::Infeasible);
    }
    Ok(BandWidth::Finite { width: lo + hi })
}

struct Shot {
    fs: Vec<f64>,
    end: Option<f64>,
}

impl Shot {
    fn ok(&self, target: f64) -> bool {
        match self.end {
            Some(f) => target == f64::NEG_INFINITY || f >= target - 1e-12 * target.abs().max(1.0),
            None => false,
        }
    }
}

fn shoot(spec: &BandSpec, l: f64, opts: &RiccatiOptions) -> Result<Shot> {
    let run = drive(spec, spec.start_value(), -l, l, opts)?;
    let end = match run.blow_up {
        Some(_) => None,
        // A +∞ start over a zero-length band never records a value.
        None => Some(run.fs.last().copied().unwrap_or(spec.start_value())),
    };
    Ok(Shot { fs: run.fs, end })
}

/// The most permissive profile `f = φ′/φ` on `[−l, l]`, where `2l = width`.
pub fn extremal_profile(spec: &BandSpec, width: f64) -> Result<RiccatiSolution> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::invalid(format!("width must be positive and finite, got {width}")));
    }
    let l = 0.5 * width;
    let opts = RiccatiOptions {
        t_end: Some(l),
        ..RiccatiOptions::default()
    };
    integrate_riccati_with(spec, spec.start_value(), -l, Direction::Forward, &opts)
}

/// Distance bound from the core hypersurface to the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorollaryBound {
    Finite { distance: f64 },
    Unbounded,
}

/// `C_n(σ₀, δ₀)` for `Sc ≥ σ₀` on the `δ₀`-neighbourhood of the core and
/// `Sc ≥ −ε` elsewhere, with no boundary constraint.
pub fn symmetrization_corollary_bound(n: usize, sigma0: f64, delta0: f64, eps: f64) -> Result<CorollaryBound> {
    if !(sigma0 > 0.0) || !(delta0 >= 0.0) || !(eps >= 0.0) {
        return Err(Error::invalid("need σ₀ > 0, δ₀ ≥ 0 and ε ≥ 0"));
    }
    let sigma = ScalarBound::plateau(sigma0, delta0, -eps)?;
    let spec = BandSpec::new(n, sigma, f64::NEG_INFINITY, f64::NEG_INFINITY)?;
    Ok(match max_band_width(&spec)? {
        BandWidth::Finite { width } => CorollaryBound::Finite { distance: 0.5 * width },
        BandWidth::Unbounded { .. } => CorollaryBound::Unbounded,
        // Unreachable with M± = −∞: a zero-length band is always admissible.
        BandWidth::Infeasible => return Err(Error::Numerical("unconstrained band reported infeasible".into())),
    })
}
