//! Finite-difference second fundamental form of a parametrized submanifold
//! `X: ℝᵏ → ℝᴺ`. Used as an independent check of closed-form curvatures.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Tangent frame, normal basis and `II` at one parameter value.
/// `II(∂ᵢ, ∂ⱼ)·ν = ⟨∂ᵢ∂ⱼX, ν⟩`.
#[derive(Debug, Clone)]
pub struct SecondFundamentalForm {
    pub point: DVector<f64>,
    pub tangents: Vec<DVector<f64>>,
    /// Orthonormal basis of the normal space.
    pub normals: Vec<DVector<f64>>,
    /// First fundamental form.
    pub metric: DMatrix<f64>,
    /// `⟨∂ᵢ∂ⱼX, ν_a⟩` for each normal `ν_a`.
    pub forms: Vec<DMatrix<f64>>,
}

fn eval<F: Fn(&[f64]) -> Vec<f64>>(f: &F, u: &[f64]) -> DVector<f64> {
    DVector::from_vec(f(u))
}

fn shifted(u: &[f64], dir: &[f64], s: f64) -> Vec<f64> {
    u.iter().zip(dir).map(|(a, d)| a + s * d).collect()
}

/// Fourth-order first and second directional derivatives along `dir`.
fn directional<F: Fn(&[f64]) -> Vec<f64>>(f: &F, u: &[f64], dir: &[f64], h: f64) -> (DVector<f64>, DVector<f64>) {
    let p2 = eval(f, &shifted(u, dir, 2.0 * h));
    let p1 = eval(f, &shifted(u, dir, h));
    let m1 = eval(f, &shifted(u, dir, -h));
    let m2 = eval(f, &shifted(u, dir, -2.0 * h));
    let c = eval(f, u);
    let d1 = (&m2 - &p2 + (&p1 - &m1) * 8.0) / (12.0 * h);
    let d2 = ((&p1 + &m1) * 16.0 - &p2 - &m2 - c * 30.0) / (12.0 * h * h);
    (d1, d2)
}

/// Completes an orthonormal basis of the complement of `span`.
fn normal_basis(tangents: &[DVector<f64>], dim: usize) -> Result<Vec<DVector<f64>>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for t in tangents {
        let mut v = t.clone();
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let n = v.norm();
        if n < 1e-8 {
            return Err(Error::Degenerate("tangent vectors are linearly dependent".into()));
        }
        basis.push(v / n);
    }
    let k = basis.len();
    for j in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = DVector::zeros(dim);
        v[j] = 1.0;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let n = v.norm();
        if n > 1e-6 {
            basis.push(v / n);
        }
    }
    Ok(basis.split_off(k))
}

/// Second fundamental form of `f` at `u` with step `h`.
pub fn second_fundamental_form<F>(f: F, u: &[f64], h: f64) -> Result<SecondFundamentalForm>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    second_fundamental_form_with_steps(f, u, &vec![h; u.len()])
}

/// As [`second_fundamental_form`] with one step per parameter, for
/// parametrizations whose directions live on very different scales.
pub fn second_fundamental_form_with_steps<F>(f: F, u: &[f64], steps: &[f64]) -> Result<SecondFundamentalForm>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let k = u.len();
    if k == 0 {
        return Err(Error::invalid("need at least one parameter"));
    }
    if steps.len() != k || steps.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::invalid("need one positive step per parameter"));
    }
    let point = eval(&f, u);
    let n = point.len();
    if n <= k {
        return Err(Error::invalid("ambient dimension must exceed the parameter count"));
    }
    let scaled = |i: usize| {
        let mut e = vec![0.0; k];
        e[i] = steps[i];
        e
    };
    let mut tangents = Vec::with_capacity(k);
    let mut pure = Vec::with_capacity(k);
    for (i, &h) in steps.iter().enumerate() {
        let (d1, d2) = directional(&f, u, &scaled(i), 1.0);
        tangents.push(d1 / h);
        pure.push(d2 / (h * h));
    }
    // ∂ᵢ∂ⱼ by polarization of the second derivative along hᵢeᵢ + hⱼeⱼ.
    let mut second = vec![vec![DVector::zeros(n); k]; k];
    for i in 0..k {
        second[i][i] = pure[i].clone();
        for j in i + 1..k {
            let mut dir = scaled(i);
            dir[j] = steps[j];
            let (_, dd) = directional(&f, u, &dir, 1.0);
            let (hi, hj) = (steps[i], steps[j]);
            let mixed = (dd - &pure[i] * (hi * hi) - &pure[j] * (hj * hj)) / (2.0 * hi * hj);
            second[i][j] = mixed.clone();
            second[j][i] = mixed;
        }
    }
    let normals = normal_basis(&tangents, n)?;
    let metric = DMatrix::from_fn(k, k, |i, j| tangents[i].dot(&tangents[j]));
    let forms = normals
        .iter()
        .map(|nu| DMatrix::from_fn(k, k, |i, j| second[i][j].dot(nu)))
        .collect();
    Ok(SecondFundamentalForm {
        point,
        tangents,
        normals,
        metric,
        forms,
    })
}

impl SecondFundamentalForm {
    /// Form `⟨∂ᵢ∂ⱼX, ν⟩` for an arbitrary vector `ν` projected to the normal
    /// space and normalized.
    pub fn form_along(&self, nu: &[f64]) -> Result<DMatrix<f64>> {
        let v = DVector::from_column_slice(nu);
        let coeffs: Vec<f64> = self.normals.iter().map(|b| b.dot(&v)).collect();
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::Degenerate("vector has no normal component".into()));
        }
        let k = self.metric.nrows();
        let mut b = DMatrix::zeros(k, k);
        for (c, form) in coeffs.iter().zip(&self.forms) {
            b += form * (c / norm);
        }
        Ok(b)
    }

    /// Eigenvalues of the shape operator `g⁻¹B`, ascending.
    pub fn principal_curvatures(&self, form: &DMatrix<f64>) -> Result<Vec<f64>> {
        let chol = self
            .metric
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Degenerate("metric is not positive definite".into()))?;
        let l_inv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("singular metric".into()))?;
        let s = &l_inv * form * l_inv.transpose();
        let sym = (&s + s.transpose()) * 0.5;
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// Principal curvatures along `ν`.
    pub fn principal_curvatures_along(&self, nu: &[f64]) -> Result<Vec<f64>> {
        self.principal_curvatures(&self.form_along(nu)?)
    }

    /// The same data with the normal space cut down to the orthogonal
    /// complement of `v` (e.g. the position vector of a submanifold of a
    /// sphere, to get curvatures inside the sphere).
    pub fn without_normal(&self, v: &[f64]) -> Result<SecondFundamentalForm> {
        let v = DVector::from_column_slice(v);
        let coeffs: Vec<f64> = self.normals.iter().map(|b| b.dot(&v)).collect();
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Ok(self.clone());
        }
        let m = self.normals.len();
        // Rotate the basis so the first vector is the normalized projection of v.
        let c = DMatrix::from_fn(m, 1, |i, _| coeffs[i] / norm);
        let mut frame = vec![c.column(0).into_owned()];
        for j in 0..m {
            let mut e = DVector::zeros(m);
            e[j] = 1.0;
            for f in &frame {
                e -= f * f.dot(&e);
            }
            let n = e.norm();
            if n > 1e-6 && frame.len() < m {
                frame.push(e / n);
            }
        }
        let mut out = self.clone();
        out.normals = frame[1..]
            .iter()
            .map(|w| {
                self.normals
                    .iter()
                    .zip(w.iter())
                    .fold(DVector::zeros(self.point.len()), |acc, (b, &x)| acc + b * x)
            })
            .collect();
        out.forms = frame[1..]
            .iter()
            .map(|w| {
                self.forms
                    .iter()
                    .zip(w.iter())
                    .fold(DMatrix::zeros(self.metric.nrows(), self.metric.nrows()), |acc, (f, &x)| acc + f * x)
            })
            .collect();
        Ok(out)
    }

    /// `max |II(X, X)|` over unit tangent `X` (the norm of the vector-valued
    /// form), by alternating maximization over `X` and the normal direction.
    pub fn max_normal_curvature(&self) -> Result<f64> {
        if self.forms.is_empty() {
            return Ok(0.0);
        }
        let m = self.forms.len();
        let mut best: f64 = 0.0;
        for start in 0..m {
            let mut coeffs = vec![0.0; m];
            coeffs[start] = 1.0;
            let mut value = 0.0;
            for _ in 0..200 {
                let k = self.metric.nrows();
                let mut b = DMatrix::zeros(k, k);
                for (c, f) in coeffs.iter().zip(&self.forms) {
                    b += f * *c;
                }
                let chol = self
                    .metric
                    .clone()
                    .cholesky()
                    .ok_or_else(|| Error::Degenerate("metric is not positive definite".into()))?;
                let l_inv = chol.l().try_inverse().expect("triangular factor is invertible");
                let s = &l_inv * &b * l_inv.transpose();
                let eig = ((&s + s.transpose()) * 0.5).symmetric_eigen();
                let (idx, _) = eig
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                    .expect("non-empty");
                // Unit tangent X = L⁻ᵀ w in parameter coordinates.
                let w = eig.eigenvectors.column(idx).into_owned();
                let x = l_inv.transpose() * w;
                let vals: Vec<f64> = self.forms.iter().map(|f| (x.transpose() * f * &x)[(0, 0)]).collect();
                let norm = vals.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    break;
                }
                coeffs = vals.iter().map(|v| v / norm).collect();
                if (norm - value).abs() <= 1e-14 * norm {
                    value = norm;
                    break;
                }
                value = norm;
            }
            best = best.max(value);
        }
        Ok(best)
    }
}

/// Point of the round sphere `S^m(ρ) ⊂ ℝ^{m+1}` in hyperspherical angles
/// `(α₁, …, α_m)`.
pub fn sphere_point(rho: f64, angles: &[f64]) -> Vec<f64> {
    let m = angles.len();
    let mut out = Vec::with_capacity(m + 1);
    let mut prod = rho;
    for (i, &a) in angles.iter().enumerate() {
        if i + 1 == m {
            out.push(prod * a.cos());
            out.push(prod * a.sin());
        } else {
            out.push(prod * a.cos());
            prod *= a.sin();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere() {
        let rho = 0.7;
        let sff = second_fundamental_form(|u| sphere_point(rho, u), &[1.1, 0.4], DEFAULT_STEP).unwrap();
        assert_eq!(sff.normals.len(), 1);
        let p: Vec<f64> = sff.point.iter().copied().collect();
        let kappa = sff.principal_curvatures_along(&p).unwrap();
        for k in kappa {
            assert!((k + 1.0 / rho).abs() < 1e-8, "{k}");
        }
        assert!((sff.max_normal_curvature().unwrap() - 1.0 / rho).abs() < 1e-8);
    }

    #[test]
    fn cylinder() {
        let f = |u: &[f64]| vec![2.0 * u[0].cos(), 2.0 * u[0].sin(), u[1]];
        let sff = second_fundamental_form(f, &[0.3, 0.5], DEFAULT_STEP).unwrap();
        let p: Vec<f64> = sff.point.iter().copied().collect();
        let k = sff.principal_curvatures_along(&[p[0], p[1], 0.0]).unwrap();
        assert!((k[0] + 0.5).abs() < 1e-8 && k[1].abs() < 1e-8);
    }

    #[test]
    fn clifford_torus_inside_s3() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f = |u: &[f64]| vec![s * u[0].cos(), s * u[0].sin(), s * u[1].cos(), s * u[1].sin()];
        let sff = second_fundamental_form(f, &[0.2, 1.3], DEFAULT_STEP).unwrap();
        let p: Vec<f64> = sff.point.iter().copied().collect();
        assert!((sff.max_normal_curvature().unwrap() - 2f64.sqrt()).abs() < 1e-8);
        let inner = sff.without_normal(&p).unwrap();
        assert_eq!(inner.normals.len(), 1);
        let mut k = inner.principal_curvatures(&inner.forms[0]).unwrap();
        k.iter_mut().for_each(|x| *x = x.abs());
        assert!(k.iter().all(|x| (x - 1.0).abs() < 1e-8), "{k:?}");
    }
}
