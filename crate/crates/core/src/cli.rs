//! Command-line front end of the `torical` binary.
//!
//! Every subcommand builds a [`Report`] and prints it as CSV (default) or
//! JSON, either to stdout or atomically to `--out`. Exit status is 0 on
//! success, 2 for invalid input and 3 for numerical failures.

use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks;
use crate::error::Error;
use crate::extremal::{
    integrate_riccati, max_band_width, width_bound, BandClass, BandSpec, BandWidth, Direction, ScalarBound,
};
use crate::hypersurface::{
    curvature_lower_bound, gauss_scalar_curvature, sphere_product_curvature, Ambient, PrincipalCurvatures,
};
use crate::profiles::uniform_grid;
use crate::report::{Cell, Report};
use crate::smoothing::{
    fit_inverse_epsilon, quadratic_decay_profile, rounding_tube, rounding_tube_fd, BendingFamily, RoundingProblem,
};
use crate::torus::{
    brute_force_focal_radius, crossover_vs_classical, embed_and_sample, focal_radius_table, lipschitz_lower_bound,
    spherical_width_lower_bound, TorusConstruction,
};

/// Exit status for invalid input.
pub const EXIT_INVALID: i32 = 2;
/// Exit status for numerical failures.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "torical",
    version,
    about = "Scalar-curvature band widths, extremal profiles, focal radii of tori and smoothing asymptotics",
    after_help = "Every subcommand prints one table. JSON output has the keys command, params, rows \
                  (each with paper_ref naming the formula evaluated) and paper_refs.\n\
                  Exit status: 0 success, 2 invalid input, 3 numerical failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Write the report to this file (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Width bounds k·π·√((n−1)/(σn)) of the topological band classes.
    #[command(after_help = "Columns:\n  class   band class\n  n       dimension\n  sigma   lower bound on Sc\n  \
                            k       multiple of π in the bound\n  bound   k·π·√((n−1)/(σn)); 2π/n at σ = n(n−1) for overtorical bands")]
    Width(WidthArgs),
    /// Trajectory of f = φ′/φ under −2f′ − nf² = σ/(n−1), with its blow-up.
    #[command(after_help = "Columns:\n  t       position\n  f       φ′/φ at t (−inf/inf at a blow-up)\n  \
                            event   step, sample, end or blow_up")]
    Riccati(RiccatiArgs),
    /// Largest width 2l admitting f on [−l, l] with −2f′ − nf² ≥ σ/(n−1),
    /// f(−l) ≤ −M₋/(n−1), f(l) ≥ M₊/(n−1).
    #[command(after_help = "Columns:\n  n, sigma, m_minus, m_plus   the problem\n  \
                            outcome     finite | unbounded | degenerate (rigid fixed point) | infeasible\n  \
                            width       supremum of admissible widths (inf if unbounded, nan if infeasible)\n  \
                            stationary  value of the constant profile in the degenerate case, else nan\n  \
                            two_pi_over_n  2π/n for comparison")]
    Band(BandArgs),
    /// Focal radii r(n) of the recursive tori, or a brute-force estimate.
    #[command(after_help = "Table columns:\n  n           dimension of the ball\n  r           focal radius r(n)\n  \
                            r_scaled    r(n)·n^{3/2}\n\
                            Oracle columns (--resolution):\n  shape, ambient_dim, resolution, points, probes\n  \
                            estimate    brute-force normal injectivity radius\n  exact       r(n) (or 1/√2 for the product torus)\n  \
                            rel_error   |estimate − exact|/exact")]
    Torus(TorusArgs),
    /// Lipschitz lower bound (d/2π)·√(σn/(n−1)) and related constants.
    #[command(after_help = "Columns:\n  quantity   lipschitz_lower_bound | spherical_width_lower_bound | crossover_n\n  \
                            n          dimension\n  value      the quantity")]
    Lipschitz(LipschitzArgs),
    /// Gauss equation Sc = Sc(ambient slice) + (Σc)² − Σc² and curvature bounds.
    #[command(after_help = "Columns depend on the mode:\n  default    n, ambient, sc\n  \
                            --rho      rho, lambda = √(1−ρ²)/ρ, sc, intrinsic = (n−1)(n−2)/ρ²\n  \
                            --bounds   n, k, bound = √(n−k−1)/k\n  \
                            --product  factors, euclidean (√k), euclidean_fd, in_sphere (√(k−1)), in_sphere_fd")]
    Gauss(GaussArgs),
    /// Scalar curvature of the bending family h + tA_new + (t²/2ε)(A_old − A_new).
    #[command(after_help = "Columns:\n  eps, t\n  sc            Sc of dt² + Σ h_ii(t)dτᵢ²\n  \
                            eps_sc        ε·Sc, close to −trace(A_old − A_new)\n  \
                            ricci_weyl    −trace(dA*/dt + A*²)\n  ricci_warped  −Σ φᵢ″/φᵢ\n\
                            With --fit: coefficient and intercept of Sc ≈ c/ε + d at t = ε/2, expected = −trace(A_old − A_new)")]
    Bend(BendArgs),
    /// Principal and scalar curvature of the ε-tube rounding the edge of B(ρ) × ℝ.
    #[command(after_help = "Columns:\n  eps, theta\n  lambda_i     cos θ/(ρ − ε + ε cos θ)\n  lambda_n     1/ε\n  \
                            sc           (Σλ)² − Σλ²\n  eps_sc       ε·sc, tends to 2(m−1)cos θ/ρ\n  \
                            fd_residual  relative gap to finite-difference principal curvatures")]
    Round(RoundArgs),
    /// Minimum scalar curvature of dt² + t^{2α}dθ² on B(R) against 4π²/R².
    #[command(after_help = "Columns:\n  alpha, radius\n  min_sc      sampled minimum of −2φ″/φ\n  \
                            expected    2α(1−α)/R²\n  bound       4π²/R²\n  holds       min_sc ≤ bound")]
    Decay(DecayArgs),
    /// Run every regression check; exit 3 if any fails.
    #[command(after_help = "Columns:\n  id, criterion\n  measured    worst deviation\n  tolerance\n  pass\n  detail")]
    VerifyAll,
}

#[derive(Debug, Args)]
pub struct WidthArgs {
    /// Band class (overtorical, iso-enlargeable, iso-enlargeable-compact, SYS, SYSE); all if omitted.
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub n: usize,
    /// Default n(n−1).
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RiccatiArgs {
    #[arg(long)]
    pub n: usize,
    /// Constant σ; default n(n−1).
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Initial value (inf allowed).
    #[arg(long, default_value = "inf", allow_hyphen_values = true)]
    pub f0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    /// Integrate toward smaller t.
    #[arg(long)]
    pub backward: bool,
    /// Resample the trajectory at N equally spaced points instead of the
    /// accepted steps.
    #[arg(long, value_name = "N")]
    pub table: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BandArgs {
    #[arg(long)]
    pub n: usize,
    /// Lower bound on Sc; default n(n−1). With --delta0 this is the value on
    /// the plateau |t| ≤ δ₀.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    #[arg(long, default_value = "-inf", allow_hyphen_values = true)]
    pub m_minus: f64,
    #[arg(long, default_value = "-inf", allow_hyphen_values = true)]
    pub m_plus: f64,
    /// Plateau half-width; outside it the bound is −eps.
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    /// Tabulate r(n) for n = 2..=N.
    #[arg(long, value_name = "N")]
    pub table: Option<usize>,
    /// Sample the torus with K points per angle and run the brute-force oracle.
    #[arg(long, value_name = "K")]
    pub resolution: Option<usize>,
    /// Dimension of the ball for the oracle (2 = circle, 4 = Y(4)).
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Use the product of two circles in ℝ⁴ instead of Y(n).
    #[arg(long)]
    pub product: bool,
    /// Also write the sampled points and normals as CSV.
    #[arg(long, value_name = "PATH")]
    pub cloud: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LipschitzArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Default n(n−1).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Band width; default π/2.
    #[arg(long)]
    pub d: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AmbientKind {
    Sphere,
    Euclidean,
}

#[derive(Debug, Args)]
pub struct GaussArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Principal curvatures c₁,…,c_{n−1}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,-1")]
    pub curvatures: Vec<f64>,
    #[arg(long, value_enum, default_value = "sphere")]
    pub ambient: AmbientKind,
    /// Distance spheres of these radii (umbilic, λ = √(1−ρ²)/ρ).
    #[arg(long, value_delimiter = ',')]
    pub rho: Option<Vec<f64>>,
    /// Tabulate √(n−k−1)/k for k = 1..n−1.
    #[arg(long)]
    pub bounds: bool,
    /// Factor dimensions of a balanced product of spheres.
    #[arg(long, value_delimiter = ',')]
    pub product: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct BendArgs {
    /// Initial diagonal fiber metric.
    #[arg(long, value_delimiter = ',', default_value = "1,1,1")]
    pub h: Vec<f64>,
    /// Diagonal of A_new; zeros if omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a_new: Option<Vec<f64>>,
    /// Diagonal of A_old; (1, 0, …) if omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a_old: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.001,0.0001")]
    pub eps: Vec<f64>,
    /// Points per ε on [ε/10, 9ε/10].
    #[arg(long, default_value_t = 9)]
    pub samples: usize,
    /// Fit the coefficient of 1/ε instead of listing samples.
    #[arg(long)]
    pub fit: bool,
}

#[derive(Debug, Args)]
pub struct RoundArgs {
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.001,0.0001")]
    pub eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub theta: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub alpha: Vec<f64>,
    /// Ball radii R > 1.
    #[arg(long, value_delimiter = ',', default_value = "2,10")]
    pub radius: Vec<f64>,
}

/// Error of a CLI run, already mapped to an exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INVALID },
            message: e.to_string(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: msg.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Builds the report for a parsed command. The second value is `false`
/// when a verification failed (exit 3 after printing).
pub fn build_report(command: &Command) -> CliResult<(Report, bool)> {
    let report = match command {
        Command::Width(a) => width(a)?,
        Command::Riccati(a) => riccati(a)?,
        Command::Band(a) => band(a)?,
        Command::Torus(a) => torus(a)?,
        Command::Lipschitz(a) => lipschitz(a)?,
        Command::Gauss(a) => gauss(a)?,
        Command::Bend(a) => bend(a)?,
        Command::Round(a) => round(a)?,
        Command::Decay(a) => decay(a)?,
        Command::VerifyAll => return Ok(verify_all()),
    };
    Ok((report, true))
}

fn default_sigma(n: usize, sigma: Option<f64>) -> f64 {
    sigma.unwrap_or((n * n.saturating_sub(1)) as f64)
}

fn width(a: &WidthArgs) -> CliResult<Report> {
    let sigma = default_sigma(a.n, a.sigma);
    let classes = match &a.class {
        Some(c) => vec![c.parse::<BandClass>()?],
        None => BandClass::ALL.to_vec(),
    };
    let mut r = Report::new("width", &["class", "n", "sigma", "k", "bound"]).param("n", a.n).param("sigma", sigma);
    if let Some(c) = &a.class {
        r = r.param("class", c.as_str());
    }
    for c in classes {
        let b = width_bound(c, a.n, sigma)?;
        r.push(
            vec![c.label().into(), a.n.into(), sigma.into(), c.pi_multiple().into(), b.into()],
            "width <= k*pi*sqrt((n-1)/(sigma*n))",
        );
    }
    Ok(r)
}

fn riccati(a: &RiccatiArgs) -> CliResult<Report> {
    let sigma = default_sigma(a.n, a.sigma);
    let spec = BandSpec::unconstrained(a.n, sigma)?;
    let dir = if a.backward { Direction::Backward } else { Direction::Forward };
    let sol = integrate_riccati(&spec, a.f0, a.t0, dir)?;
    let mut r = Report::new("riccati", &["t", "f", "event"])
        .param("n", a.n)
        .param("sigma", sigma)
        .param("f0", a.f0)
        .param("t0", a.t0)
        .param("direction", if a.backward { "backward" } else { "forward" });
    let formula = "-2f' - n f^2 = sigma/(n-1)";
    let blow = sol.blow_up();
    match a.table {
        Some(count) => {
            if count < 2 {
                return Err(invalid("--table needs at least 2 points"));
            }
            let last = *sol.ts.last().ok_or_else(|| Failure::from(Error::Numerical("empty trajectory".into())))?;
            let end = blow.unwrap_or(last);
            for (i, t) in uniform_grid(a.t0, end, count).into_iter().enumerate() {
                // The blow-up point itself is reported separately.
                if blow.is_some() && i + 1 == count {
                    break;
                }
                let f = match sol.interpolate(t) {
                    Some(f) => f,
                    None if i == 0 => a.f0,
                    None => return Err(Error::Numerical(format!("no solution value at t = {t}")).into()),
                };
                r.push(vec![t.into(), f.into(), "sample".into()], formula);
            }
        }
        None => {
            for (&t, &f) in sol.ts.iter().zip(&sol.fs) {
                r.push(vec![t.into(), f.into(), "step".into()], formula);
            }
        }
    }
    match blow {
        Some(t) => {
            let f = if a.backward { f64::INFINITY } else { f64::NEG_INFINITY };
            r.push(vec![t.into(), f.into(), "blow_up".into()], formula);
        }
        None => {
            if let (Some(&t), Some(&f)) = (sol.ts.last(), sol.fs.last()) {
                r.push(vec![t.into(), f.into(), "end".into()], formula);
            }
        }
    }
    Ok(r)
}

fn band(a: &BandArgs) -> CliResult<Report> {
    let sigma = default_sigma(a.n, a.sigma);
    let bound = match a.delta0 {
        Some(d) => ScalarBound::plateau(sigma, d, -a.eps)?,
        None => ScalarBound::constant(sigma),
    };
    let spec = BandSpec::new(a.n, bound, a.m_minus, a.m_plus)?;
    let mut r = Report::new(
        "band",
        &["n", "sigma", "m_minus", "m_plus", "outcome", "width", "stationary", "two_pi_over_n"],
    )
    .param("n", a.n)
    .param("sigma", sigma)
    .param("m_minus", a.m_minus)
    .param("m_plus", a.m_plus);
    if let Some(d) = a.delta0 {
        r = r.param("delta0", d).param("eps", a.eps);
    }
    let (outcome, width, stationary) = match max_band_width(&spec)? {
        BandWidth::Finite { width } => ("finite", width, f64::NAN),
        BandWidth::Unbounded { stationary: Some(c) } => ("degenerate", f64::INFINITY, c),
        BandWidth::Unbounded { stationary: None } => ("unbounded", f64::INFINITY, f64::NAN),
        BandWidth::Infeasible => ("infeasible", f64::NAN, f64::NAN),
    };
    r.push(
        vec![
            a.n.into(),
            sigma.into(),
            a.m_minus.into(),
            a.m_plus.into(),
            outcome.into(),
            width.into(),
            stationary.into(),
            (2.0 * PI / a.n as f64).into(),
        ],
        "-2f' - n f^2 >= sigma/(n-1), f(-l) <= -M-/(n-1), f(l) >= M+/(n-1)",
    );
    Ok(r)
}

fn torus(a: &TorusArgs) -> CliResult<Report> {
    if let Some(k) = a.resolution {
        let (shape, construction, exact) = if a.product {
            let c = TorusConstruction::pair(TorusConstruction::circle(), TorusConstruction::circle())?;
            ("product", c, std::f64::consts::FRAC_1_SQRT_2)
        } else {
            let c = TorusConstruction::build(a.n)?;
            let exact = c.focal_radius();
            (if a.n == 2 { "circle" } else { "recursive" }, c, exact)
        };
        let cloud = embed_and_sample(&construction, k)?;
        if let Some(path) = &a.cloud {
            let mut buf = Vec::new();
            cloud.write_csv(&mut buf).map_err(|e| invalid(e.to_string()))?;
            write_atomic(path, &buf)?;
        }
        let est = brute_force_focal_radius(&cloud)?;
        let mut r = Report::new(
            "torus",
            &["shape", "ambient_dim", "resolution", "points", "probes", "estimate", "exact", "rel_error"],
        )
        .param("resolution", k)
        .param("n", a.n)
        .param("product", a.product);
        r.push(
            vec![
                shape.into(),
                construction.ambient_dim().into(),
                k.into(),
                est.points.into(),
                est.probes.into(),
                est.radius.into(),
                exact.into(),
                ((est.radius - exact).abs() / exact).into(),
            ],
            "largest r with every tangent ball of radius r free of samples",
        );
        return Ok(r);
    }
    if a.cloud.is_some() {
        return Err(invalid("--cloud needs --resolution"));
    }
    let n_max = a.table.unwrap_or(64);
    let table = focal_radius_table(n_max)?;
    let mut r = Report::new("torus", &["n", "r", "r_scaled"]).param("table", n_max);
    for (n, radius) in table.iter() {
        let formula = match n {
            2 => "r(2) = 1",
            3 => "r(3) = pi/4",
            _ => "r(n) from r(floor(n/2)), r(ceil(n/2)) by pairing and offset",
        };
        r.push(vec![n.into(), radius.into(), (radius * (n as f64).powf(1.5)).into()], formula);
    }
    Ok(r)
}

fn lipschitz(a: &LipschitzArgs) -> CliResult<Report> {
    let sigma = default_sigma(a.n, a.sigma);
    let d = a.d.unwrap_or(FRAC_PI_2);
    let mut r = Report::new("lipschitz", &["quantity", "n", "value"])
        .param("n", a.n)
        .param("sigma", sigma)
        .param("d", d);
    r.push(
        vec!["lipschitz_lower_bound".into(), a.n.into(), lipschitz_lower_bound(a.n, sigma, d)?.into()],
        "Lip >= (d/(2 pi)) sqrt(sigma n/(n-1))",
    );
    r.push(
        vec!["spherical_width_lower_bound".into(), a.n.into(), spherical_width_lower_bound(a.n.max(2))?.into()],
        "width(S^n) >= 2 r(n)",
    );
    let cross = crossover_vs_classical(2..=1024).ok_or_else(|| invalid("no crossover below 1024"))?;
    r.push(
        vec!["crossover_n".into(), cross.into(), (cross as f64).into()],
        "first n with (1/3)/(pi sqrt(n)) > n/(2^n pi)",
    );
    Ok(r)
}

fn gauss(a: &GaussArgs) -> CliResult<Report> {
    if let Some(dims) = &a.product {
        let c = sphere_product_curvature(dims)?;
        let label: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
        let mut r = Report::new("gauss", &["factors", "euclidean", "euclidean_fd", "in_sphere", "in_sphere_fd"])
            .param("product", label.join(","));
        r.push(
            vec![
                c.factors.into(),
                c.euclidean.into(),
                c.euclidean_fd.into(),
                c.in_sphere.into(),
                c.in_sphere_fd.into(),
            ],
            "max |II(X,X)| of S^n1(1/sqrt k) x ... x S^nk(1/sqrt k): sqrt k in R^N, sqrt(k-1) in S^(N-1)",
        );
        return Ok(r);
    }
    if a.bounds {
        let mut r = Report::new("gauss", &["n", "k", "bound"]).param("n", a.n).param("bounds", true);
        for k in 1..a.n {
            r.push(
                vec![a.n.into(), k.into(), curvature_lower_bound(a.n, k)?.into()],
                "sup |c_ij| >= sqrt(n-k-1)/k",
            );
        }
        if r.is_empty() {
            return Err(invalid("--bounds needs n ≥ 2"));
        }
        return Ok(r);
    }
    let ambient = match a.ambient {
        AmbientKind::Sphere => Ambient::Sphere(a.n),
        AmbientKind::Euclidean => Ambient::Euclidean(a.n),
    };
    let ambient_label = match a.ambient {
        AmbientKind::Sphere => "sphere",
        AmbientKind::Euclidean => "euclidean",
    };
    let formula = "Sc = Sc(S^(n-1)) + (sum c)^2 - sum c^2";
    if let Some(rhos) = &a.rho {
        let mut r = Report::new("gauss", &["rho", "lambda", "sc", "intrinsic"])
            .param("n", a.n)
            .param("ambient", ambient_label);
        for &rho in rhos {
            if !(rho > 0.0 && rho <= 1.0) {
                return Err(invalid(format!("rho must lie in (0, 1], got {rho}")));
            }
            let lam = (1.0 - rho * rho).sqrt() / rho;
            let sc = gauss_scalar_curvature(&PrincipalCurvatures::umbilic(lam, ambient)?);
            let intrinsic = ((a.n - 1) * a.n.saturating_sub(2)) as f64 / (rho * rho);
            r.push(vec![rho.into(), lam.into(), sc.into(), intrinsic.into()], formula);
        }
        return Ok(r);
    }
    let pc = PrincipalCurvatures::new(a.curvatures.clone(), ambient)?;
    let label: Vec<String> = a.curvatures.iter().map(|c| crate::report::fmt_num(*c)).collect();
    let mut r = Report::new("gauss", &["n", "ambient", "sc"])
        .param("n", a.n)
        .param("ambient", ambient_label)
        .param("curvatures", label.join(","));
    r.push(vec![a.n.into(), ambient_label.into(), gauss_scalar_curvature(&pc).into()], formula);
    Ok(r)
}

fn bend(a: &BendArgs) -> CliResult<Report> {
    let m = a.h.len();
    let a_new = a.a_new.clone().unwrap_or_else(|| vec![0.0; m]);
    let a_old = a.a_old.clone().unwrap_or_else(|| {
        let mut v = vec![0.0; m];
        if let Some(x) = v.first_mut() {
            *x = 1.0;
        }
        v
    });
    let list = |v: &[f64]| v.iter().map(|x| crate::report::fmt_num(*x)).collect::<Vec<_>>().join(",");
    if a.fit {
        let fit = fit_inverse_epsilon(&a.h, &a_new, &a_old, &a.eps, 0.5)?;
        let jump: f64 = a_old.iter().zip(&a_new).map(|(o, n)| o - n).sum();
        let mut r = Report::new("bend", &["coefficient", "intercept", "expected"])
            .param("h", list(&a.h))
            .param("a_new", list(&a_new))
            .param("a_old", list(&a_old))
            .param("eps", list(&a.eps))
            .param("fit", true);
        r.push(
            vec![fit.coefficient.into(), fit.intercept.into(), (-jump).into()],
            "Sc = -(1/eps) trace(A_old - A_new) + O(1)",
        );
        return Ok(r);
    }
    if a.samples < 2 {
        return Err(invalid("--samples must be at least 2"));
    }
    let mut r = Report::new("bend", &["eps", "t", "sc", "eps_sc", "ricci_weyl", "ricci_warped"])
        .param("h", list(&a.h))
        .param("a_new", list(&a_new))
        .param("a_old", list(&a_old))
        .param("eps", list(&a.eps));
    for &e in &a.eps {
        let fam = BendingFamily::new(a.h.clone(), a_new.clone(), a_old.clone(), e)?;
        for t in uniform_grid(0.1 * e, 0.9 * e, a.samples) {
            let sc = fam.scalar_curvature(t)?;
            let w = fam.weyl_ricci(t)?;
            r.push(
                vec![e.into(), t.into(), sc.into(), (e * sc).into(), w.weyl.into(), w.warped.into()],
                "h(t) = h + t A_new + (t^2/2eps)(A_old - A_new); Ricci = -trace(dA*/dt + A*^2)",
            );
        }
    }
    Ok(r)
}

fn round(a: &RoundArgs) -> CliResult<Report> {
    let list = |v: &[f64]| v.iter().map(|x| crate::report::fmt_num(*x)).collect::<Vec<_>>().join(",");
    let mut r = Report::new("round", &["eps", "theta", "lambda_i", "lambda_n", "sc", "eps_sc", "fd_residual"])
        .param("m", a.m)
        .param("rho", a.rho)
        .param("eps", list(&a.eps))
        .param("theta", list(&a.theta));
    for &e in &a.eps {
        for &theta in &a.theta {
            let p = RoundingProblem::new(a.m, a.rho, e, theta)?;
            let c = rounding_tube(&p);
            let fd = rounding_tube_fd(&p)?;
            r.push(
                vec![
                    e.into(),
                    theta.into(),
                    c.lambdas[0].into(),
                    c.lambda_n.into(),
                    c.sc.into(),
                    (e * c.sc).into(),
                    fd.max_residual.into(),
                ],
                "lambda_i = cos(theta)/(rho - eps + eps cos(theta)), lambda_n = 1/eps, sc = (sum lambda)^2 - sum lambda^2",
            );
        }
    }
    Ok(r)
}

fn decay(a: &DecayArgs) -> CliResult<Report> {
    let list = |v: &[f64]| v.iter().map(|x| crate::report::fmt_num(*x)).collect::<Vec<_>>().join(",");
    let mut r = Report::new("decay", &["alpha", "radius", "min_sc", "expected", "bound", "holds"])
        .param("alpha", list(&a.alpha))
        .param("radius", list(&a.radius));
    for &alpha in &a.alpha {
        for &radius in &a.radius {
            let q = quadratic_decay_profile(alpha, radius)?;
            r.push(
                vec![
                    alpha.into(),
                    radius.into(),
                    q.min_sc.into(),
                    q.expected.into(),
                    q.bound.into(),
                    q.bound_holds().into(),
                ],
                "min Sc of dt^2 + t^(2 alpha) dtheta^2 on B(R) = 2 alpha (1 - alpha)/R^2 <= 4 pi^2/R^2",
            );
        }
    }
    Ok(r)
}

fn verify_all() -> (Report, bool) {
    let results = checks::run_all();
    let mut r = Report::new("verify-all", &["id", "criterion", "measured", "tolerance", "pass", "detail"]);
    for c in &results {
        r.push(
            vec![
                c.id.into(),
                c.name.into(),
                Cell::Num(c.measured),
                Cell::Num(c.tolerance),
                c.pass.into(),
                c.detail.clone().into(),
            ],
            c.name,
        );
    }
    let ok = results.iter().all(|c| c.pass);
    (r, ok)
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| invalid(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = dir.join(tmp_name);
    let result = std::fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(bytes)?;
            f.sync_all()
        })
        .and_then(|_| std::fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(invalid(format!("cannot write {}: {e}", path.display())));
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (report, ok) = match build_report(&cli.command) {
        Ok(x) => x,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return f.code;
        }
    };
    let text = match cli.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(f) = write_atomic(path, text.as_bytes()) {
                eprintln!("error: {}", f.message);
                return f.code;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return EXIT_INVALID;
            }
        }
    }
    if ok {
        0
    } else {
        eprintln!("error: at least one check failed");
        EXIT_NUMERICAL
    }
}

/// Entry point of the binary.
pub fn main_from_env() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::Numerical("x".into())).code, EXIT_NUMERICAL);
        assert_eq!(Failure::from(Error::StepUnderflow { t: 0.0, step: 1e-300 }).code, EXIT_NUMERICAL);
        assert_eq!(Failure::from(Error::invalid("x")).code, EXIT_INVALID);
        assert_eq!(run(["torical", "nope"]), EXIT_INVALID);
        assert_eq!(run(["torical", "decay", "--alpha", "-1"]), EXIT_INVALID);
    }
}
