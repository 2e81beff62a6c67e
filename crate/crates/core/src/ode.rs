//! Embedded Dormand–Prince 5(4) stepping for scalar ODEs `y′ = F(t, y)`.
//!
//! Only the single-step kernel and the step-size controller live here; the
//! drivers (with event handling and variable changes) are in the modules
//! that need them.

/// Absolute/relative tolerances and the step floor of an adaptive run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Steps below `min_step · max(1, |t|)` count as underflow.
    pub min_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-10,
            atol: 1e-12,
            min_step: 1e-14,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-order minus 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Result of one trial step.
#[derive(Debug, Clone, Copy)]
pub struct Trial {
    pub y: f64,
    /// Slope at the new point (first stage of the next step).
    pub dy: f64,
    /// Local error estimate.
    pub err: f64,
}

/// One Dormand–Prince step of (signed) size `h` from `(t, y)` with slope `dy0`.
pub fn dopri_step<F: Fn(f64, f64) -> f64>(rhs: &F, t: f64, y: f64, dy0: f64, h: f64) -> Trial {
    let k1 = dy0;
    let k2 = rhs(t + C2 * h, y + h * A21 * k1);
    let k3 = rhs(t + C3 * h, y + h * (A31 * k1 + A32 * k2));
    let k4 = rhs(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
    let k5 = rhs(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
    let k6 = rhs(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
    let y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    let k7 = rhs(t + h, y_new);
    let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    Trial {
        y: y_new,
        dy: k7,
        err,
    }
}

impl Tolerances {
    /// Scaled error norm of a trial; `≤ 1` means accept.
    pub fn error_norm(&self, y_old: f64, trial: &Trial) -> f64 {
        let scale = self.atol + self.rtol * y_old.abs().max(trial.y.abs());
        (trial.err / scale).abs()
    }

    /// Next step magnitude after a trial with error norm `norm`.
    pub fn next_step(&self, h: f64, norm: f64) -> f64 {
        let factor = if norm == 0.0 {
            5.0
        } else {
            (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h.abs() * factor
    }

    pub fn underflows(&self, t: f64, h: f64) -> bool {
        h.abs() < self.min_step * t.abs().max(1.0)
    }
}

/// Initial step guess from the slope.
pub fn initial_step(tol: &Tolerances, y: f64, dy: f64, span: f64) -> f64 {
    let scale = tol.atol + tol.rtol * y.abs();
    let guess = if dy == 0.0 {
        1e-2
    } else {
        0.01 * (scale / dy.abs()).powf(0.2).max(1e-6) * (1.0 + y.abs()).min(1e3)
    };
    guess.min(span.abs()).max(1e-10_f64.min(span.abs()))
}

/// Integrate a smooth scalar ODE from `t0` to `t1` (either direction) and
/// return the final value. Used where no events are needed.
pub fn integrate_to<F: Fn(f64, f64) -> f64>(
    rhs: &F,
    t0: f64,
    y0: f64,
    t1: f64,
    tol: &Tolerances,
) -> Option<f64> {
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut dy = rhs(t, y);
    let mut h = initial_step(tol, y, dy, t1 - t0);
    while dir * (t1 - t) > 0.0 {
        let step = h.min((t1 - t).abs());
        let trial = dopri_step(rhs, t, y, dy, dir * step);
        let norm = tol.error_norm(y, &trial);
        if !trial.y.is_finite() || norm > 1.0 {
            h = tol.next_step(step, if norm.is_finite() { norm } else { 1e10 });
            if tol.underflows(t, h) {
                return None;
            }
            continue;
        }
        t = if step == (t1 - t).abs() { t1 } else { t + dir * step };
        y = trial.y;
        dy = trial.dy;
        h = tol.next_step(step, norm);
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let tol = Tolerances::default();
        let y = integrate_to(&|_t, y| y, 0.0, 1.0, 2.0, &tol).unwrap();
        assert!((y - 2f64.exp()).abs() < 1e-9 * 2f64.exp());
    }

    #[test]
    fn backward_integration() {
        let tol = Tolerances::default();
        let y = integrate_to(&|t, _y| t.cos(), 1.0, 1f64.sin(), -1.0, &tol).unwrap();
        assert!((y - (-1f64).sin()).abs() < 1e-10);
    }

    #[test]
    fn single_step_order() {
        // Local error of a 5th-order step on y' = y scales like h^6.
        let e = |h: f64| {
            let tr = dopri_step(&|_t, y| y, 0.0, 1.0, 1.0, h);
            (tr.y - h.exp()).abs()
        };
        let ratio = e(0.1) / e(0.05);
        assert!(ratio > 40.0 && ratio < 90.0, "{ratio}");
    }
}
