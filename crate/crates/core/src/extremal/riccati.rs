use crate::error::{Error, Result};
use crate::ode::{dopri_step, initial_step, Tolerances};

use super::BandSpec;

/// `|f|` above this value counts as blow-up.
pub const DIVERGENCE_THRESHOLD: f64 = 1e8;

/// Default integration horizon (length units) when σ is defined on the whole line.
const DEFAULT_HORIZON: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RiccatiOptions {
    pub tol: Tolerances,
    pub divergence: f64,
    /// Where to stop if no blow-up happens. `None` means the end of σ's
    /// domain, capped at 10³ length units from the start.
    pub t_end: Option<f64>,
}

impl Default for RiccatiOptions {
    fn default() -> Self {
        RiccatiOptions {
            tol: Tolerances::default(),
            divergence: DIVERGENCE_THRESHOLD,
            t_end: None,
        }
    }
}

/// Trajectory of `f = φ′/φ` together with any blow-up point.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSolution {
    /// Accepted step points, in integration order.
    pub ts: Vec<f64>,
    pub fs: Vec<f64>,
    dfs: Vec<f64>,
    /// Blow-up when integrating backward (smallest `t` reached).
    pub blow_up_low: Option<f64>,
    /// Blow-up when integrating forward.
    pub blow_up_high: Option<f64>,
    /// `true` when the run reached its end point without blowing up.
    pub reached_end: bool,
}

impl RiccatiSolution {
    pub fn blow_up(&self) -> Option<f64> {
        self.blow_up_high.or(self.blow_up_low)
    }

    /// Last recorded value of `f`.
    pub fn final_value(&self) -> Option<f64> {
        self.fs.last().copied()
    }

    /// Cubic Hermite interpolation of `f` inside the recorded range.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        if self.ts.len() < 2 {
            return (self.ts.first() == Some(&t)).then(|| self.fs[0]);
        }
        let forward = self.ts[self.ts.len() - 1] >= self.ts[0];
        let idx = self.ts.windows(2).position(|w| {
            let (a, b) = if forward { (w[0], w[1]) } else { (w[1], w[0]) };
            t >= a && t <= b
        })?;
        let (t0, t1) = (self.ts[idx], self.ts[idx + 1]);
        let (f0, f1) = (self.fs[idx], self.fs[idx + 1]);
        let (d0, d1) = (self.dfs[idx], self.dfs[idx + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        Some(h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1)
    }
}

/// Integrates `f′ = −(σ(t)/(n−1) + n f²)/2` from `f(t0) = f0`.
///
/// `f0` may be `±∞` (start at a blow-up point). Near blow-up the solver works
/// with `g = 1/f`, which crosses zero transversally, so the blow-up point is
/// located by root finding instead of being chased with shrinking steps.
pub fn integrate_riccati(spec: &BandSpec, f0: f64, t0: f64, direction: Direction) -> Result<RiccatiSolution> {
    integrate_riccati_with(spec, f0, t0, direction, &RiccatiOptions::default())
}

pub fn integrate_riccati_with(
    spec: &BandSpec,
    f0: f64,
    t0: f64,
    direction: Direction,
    opts: &RiccatiOptions,
) -> Result<RiccatiSolution> {
    if f0.is_nan() {
        return Err(Error::invalid("initial value is NaN"));
    }
    let domain = spec.sigma().domain();
    domain.check(t0)?;
    let dir = direction.sign();
    let t_end = match opts.t_end {
        Some(t) => {
            domain.check(t)?;
            if (t - t0) * dir < 0.0 {
                return Err(Error::invalid("end point lies behind the start for this direction"));
            }
            t
        }
        None => {
            let edge = if dir > 0.0 { domain.hi } else { domain.lo };
            if edge.is_finite() {
                edge
            } else {
                t0 + dir * DEFAULT_HORIZON
            }
        }
    };
    let run = drive(spec, f0, t0, t_end, opts)?;
    let (blow_up_low, blow_up_high) = match run.blow_up {
        Some(b) if dir > 0.0 => (None, Some(b)),
        Some(b) => (Some(b), None),
        None => (None, None),
    };
    Ok(RiccatiSolution {
        ts: run.ts,
        fs: run.fs,
        dfs: run.dfs,
        blow_up_low,
        blow_up_high,
        reached_end: run.blow_up.is_none(),
    })
}

pub(super) struct Run {
    pub ts: Vec<f64>,
    pub fs: Vec<f64>,
    pub dfs: Vec<f64>,
    pub blow_up: Option<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Var {
    /// Integrating `f` directly.
    Direct,
    /// Integrating `g = 1/f`.
    Inverse,
}

/// Moves `t` off a segment boundary into the open segment so one-sided
/// limits of a piecewise σ are used.
fn inside(t: f64, a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let eta = 1e-12 * t.abs().max(1.0);
    if hi - lo <= 2.0 * eta {
        return 0.5 * (lo + hi);
    }
    t.clamp(lo + eta, hi - eta)
}

pub(super) fn drive(spec: &BandSpec, f0: f64, t0: f64, t_end: f64, opts: &RiccatiOptions) -> Result<Run> {
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let k = (spec.n() - 1) as f64;
    let nf = spec.n() as f64;
    let sigma = spec.sigma();
    let tol = opts.tol;
    let switch_to_inverse = 2.0;
    let switch_to_direct = 2.0;

    let mut cuts: Vec<f64> = sigma
        .breakpoints()
        .iter()
        .copied()
        .filter(|&b| (b - t0) * dir > 0.0 && (t_end - b) * dir > 0.0)
        .collect();
    cuts.sort_by(|a, b| (dir * a).partial_cmp(&(dir * b)).expect("finite"));
    cuts.push(t_end);

    let mut run = Run {
        ts: Vec::new(),
        fs: Vec::new(),
        dfs: Vec::new(),
        blow_up: None,
    };

    let (mut var, mut y) = if f0.is_infinite() {
        (Var::Inverse, if f0 > 0.0 { 0.0 } else { -0.0 })
    } else if f0.abs() > switch_to_inverse {
        (Var::Inverse, 1.0 / f0)
    } else {
        (Var::Direct, f0)
    };
    // Sign of f just after an infinite start, used to catch an immediate blow-up.
    let start_sign = if f0.is_infinite() { f0.signum() } else { 0.0 };

    let mut t = t0;
    let mut seg_start = t0;
    let mut h = f64::NAN;

    let record = |run: &mut Run, t: f64, f: f64, df: f64| {
        if f.is_finite() && f.abs() <= opts.divergence {
            run.ts.push(t);
            run.fs.push(f);
            run.dfs.push(df);
        }
    };

    for &seg_end in &cuts {
        let sig = |s: f64| sigma.eval(inside(s, seg_start, seg_end));
        let rhs_direct = |s: f64, f: f64| -0.5 * (sig(s) / k + nf * f * f);
        let rhs_inverse = |s: f64, g: f64| 0.5 * (sig(s) / k * g * g + nf);
        let slope = |var: Var, s: f64, y: f64| match var {
            Var::Direct => rhs_direct(s, y),
            Var::Inverse => rhs_inverse(s, y),
        };

        let mut dy = slope(var, t, y);
        if run.ts.is_empty() {
            let f = if var == Var::Direct { y } else { 1.0 / y };
            record(&mut run, t, f, rhs_direct(t, f));
        }
        if h.is_nan() {
            h = initial_step(&tol, y, dy, t_end - t0).max(1e-8);
        }

        while dir * (seg_end - t) > 0.0 {
            if var == Var::Direct && y.abs() > switch_to_inverse {
                var = Var::Inverse;
                y = 1.0 / y;
                dy = slope(var, t, y);
            } else if var == Var::Inverse && y.abs() > switch_to_direct {
                var = Var::Direct;
                y = 1.0 / y;
                dy = slope(var, t, y);
            }

            let remaining = (seg_end - t).abs();
            let step = h.min(remaining);
            let trial = match var {
                Var::Direct => dopri_step(&rhs_direct, t, y, dy, dir * step),
                Var::Inverse => dopri_step(&rhs_inverse, t, y, dy, dir * step),
            };
            let norm = tol.error_norm(y, &trial);
            if !trial.y.is_finite() || !(norm <= 1.0) {
                h = tol.next_step(step, if norm.is_finite() { norm } else { 1e10 });
                if tol.underflows(t, h) {
                    return Err(Error::StepUnderflow { t, step: h });
                }
                continue;
            }

            if var == Var::Inverse {
                let g_old = y;
                let g_new = trial.y;
                if g_old == 0.0 {
                    // Leaving an infinite start: the side must match its sign.
                    if start_sign != 0.0 && g_new.signum() != start_sign {
                        run.blow_up = Some(t);
                        return Ok(run);
                    }
                } else if g_new == 0.0
                    || g_new.signum() != g_old.signum()
                    || g_new.abs() < 1.0 / opts.divergence
                {
                    let tau = locate_zero(&rhs_inverse, t, g_old, dy, dir, step);
                    run.blow_up = Some(t + dir * tau);
                    return Ok(run);
                }
            }

            t = if step == remaining { seg_end } else { t + dir * step };
            y = trial.y;
            dy = trial.dy;
            h = tol.next_step(step, norm);
            let f = if var == Var::Direct { y } else { 1.0 / y };
            record(&mut run, t, f, rhs_direct(t, f));
        }
        seg_start = seg_end;
    }
    Ok(run)
}

/// Zero of `g` within (or just past) an accepted step of length `step`,
/// refined by Newton iterations on single steps from `(t, g)`.
fn locate_zero<F: Fn(f64, f64) -> f64>(rhs: &F, t: f64, g: f64, dg: f64, dir: f64, step: f64) -> f64 {
    // dg is d g/dt; along the integration direction the slope is dir·dg.
    let mut tau = if dg != 0.0 { (-g / (dir * dg)).clamp(0.0, 1.5 * step) } else { step };
    for _ in 0..12 {
        let tr = dopri_step(rhs, t, g, dg, dir * tau);
        let along = dir * tr.dy;
        if along == 0.0 {
            break;
        }
        let delta = tr.y / along;
        tau = (tau - delta).clamp(0.0, 2.0 * step);
        if delta.abs() <= 1e-15 * step.max(1e-300) {
            break;
        }
    }
    tau
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{BandSpec, ScalarBound};
    use std::f64::consts::PI;

    fn spec(n: usize, sigma: f64) -> BandSpec {
        BandSpec::unconstrained(n, sigma).unwrap()
    }

    #[test]
    fn tangent_profile_blows_up_at_pi_over_n() {
        for n in 2..=10 {
            let s = spec(n, (n * (n - 1)) as f64);
            let fwd = integrate_riccati(&s, 0.0, 0.0, Direction::Forward).unwrap();
            let bwd = integrate_riccati(&s, 0.0, 0.0, Direction::Backward).unwrap();
            let edge = PI / n as f64;
            assert!((fwd.blow_up_high.unwrap() - edge).abs() < 1e-9, "n={n}");
            assert!((bwd.blow_up_low.unwrap() + edge).abs() < 1e-9, "n={n}");
            // Compare angles: near the pole tan amplifies tiny phase errors.
            for (&t, &f) in fwd.ts.iter().zip(&fwd.fs) {
                assert!((f.atan() + 0.5 * n as f64 * t).abs() < 1e-9, "t={t} f={f}");
            }
        }
    }

    #[test]
    fn hyperbolic_tangent_profile_does_not_blow_up() {
        let n = 4;
        let s = spec(n, -((n * (n - 1)) as f64));
        let opts = RiccatiOptions {
            t_end: Some(5.0),
            ..RiccatiOptions::default()
        };
        let sol = integrate_riccati_with(&s, 0.0, 0.0, Direction::Forward, &opts).unwrap();
        assert!(sol.reached_end && sol.blow_up().is_none());
        for (&t, &f) in sol.ts.iter().zip(&sol.fs) {
            assert!((f - (2.0 * t).tanh()).abs() < 1e-9);
        }
    }

    #[test]
    fn flat_riccati_one_over_one_plus_t() {
        let s = spec(2, 0.0);
        let opts = RiccatiOptions {
            t_end: Some(3.0),
            ..RiccatiOptions::default()
        };
        let fwd = integrate_riccati_with(&s, 1.0, 0.0, Direction::Forward, &opts).unwrap();
        assert!(fwd.reached_end);
        for (&t, &f) in fwd.ts.iter().zip(&fwd.fs) {
            assert!((f - 1.0 / (1.0 + t)).abs() < 1e-10);
        }
        let bwd = integrate_riccati(&s, 1.0, 0.0, Direction::Backward).unwrap();
        assert!((bwd.blow_up_low.unwrap() + 1.0).abs() < 1e-10);
    }

    #[test]
    fn infinite_start_runs_the_full_extremal_interval() {
        let n = 3;
        let s = spec(n, 6.0);
        let sol = integrate_riccati(&s, f64::INFINITY, -1.0, Direction::Forward).unwrap();
        assert!((sol.blow_up_high.unwrap() - (-1.0 + 2.0 * PI / 3.0)).abs() < 1e-9);
        // Backward from +∞ blows up immediately.
        let back = integrate_riccati(&s, f64::INFINITY, -1.0, Direction::Backward).unwrap();
        assert_eq!(back.blow_up_low, Some(-1.0));
    }

    #[test]
    fn recorded_values_stay_below_threshold() {
        let s = spec(5, 20.0);
        let sol = integrate_riccati(&s, 0.0, 0.0, Direction::Forward).unwrap();
        assert!(sol.fs.iter().all(|f| f.is_finite() && f.abs() <= DIVERGENCE_THRESHOLD));
    }

    #[test]
    fn piecewise_sigma_is_integrated_segment_by_segment() {
        // σ = 2 on [−1, 1], 0 outside, n = 2: f′ = −(1 + f²)... then f′ = −f².
        let sigma = ScalarBound::plateau(2.0, 1.0, 0.0).unwrap();
        let s = BandSpec::new(2, sigma, f64::NEG_INFINITY, f64::NEG_INFINITY).unwrap();
        let opts = RiccatiOptions {
            t_end: Some(0.5),
            ..RiccatiOptions::default()
        };
        // Start at t = −2 with f = 0.5: f = 1/(t + 4) until t = −1.
        let sol = integrate_riccati_with(&s, 0.5, -2.0, Direction::Forward, &opts).unwrap();
        let f_at_m1: f64 = 1.0 / 3.0;
        // Inside the plateau f′ = −(1 + f²)/2·... for n=2, k=1: f′ = −(2 + 2f²)/2 = −(1 + f²).
        let exact = (f_at_m1.atan() - 1.5).tan();
        assert!((sol.final_value().unwrap() - exact).abs() < 1e-9);
    }

    #[test]
    fn hermite_interpolation_tracks_solution() {
        let s = spec(3, 6.0);
        let sol = integrate_riccati(&s, 0.0, 0.0, Direction::Forward).unwrap();
        let t = 0.5;
        assert!((sol.interpolate(t).unwrap() + (1.5 * t).tan()).abs() < 1e-7);
    }
}
