//! Gauss-equation bookkeeping for hypersurfaces and the principal-curvature
//! lower bounds for submanifolds of the unit sphere.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shape::{second_fundamental_form, sphere_point, DEFAULT_STEP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    /// Unit sphere `Sⁿ`.
    Sphere(usize),
    /// `ℝⁿ`.
    Euclidean(usize),
}

impl Ambient {
    pub fn dim(self) -> usize {
        match self {
            Ambient::Sphere(n) | Ambient::Euclidean(n) => n,
        }
    }
}

/// Principal curvatures `c₁ … c_{n−1}` of a hypersurface at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipalCurvatures {
    values: Vec<f64>,
    ambient: Ambient,
}

impl PrincipalCurvatures {
    pub fn new(values: Vec<f64>, ambient: Ambient) -> Result<Self> {
        let n = ambient.dim();
        if n < 2 {
            return Err(Error::invalid("ambient dimension must be at least 2"));
        }
        if values.len() != n - 1 {
            return Err(Error::invalid(format!(
                "a hypersurface in dimension {n} has {} principal curvatures, got {}",
                n - 1,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("principal curvatures must be finite"));
        }
        Ok(PrincipalCurvatures { values, ambient })
    }

    /// All curvatures equal to `lambda`.
    pub fn umbilic(lambda: f64, ambient: Ambient) -> Result<Self> {
        PrincipalCurvatures::new(vec![lambda; ambient.dim().saturating_sub(1)], ambient)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }
}

/// `Sc(Y) = Sc(S^{n−1}) + (Σcᵢ)² − Σcᵢ²` (without the first term in `ℝⁿ`).
pub fn gauss_scalar_curvature(pc: &PrincipalCurvatures) -> f64 {
    let sum: f64 = pc.values.iter().sum();
    let sq: f64 = pc.values.iter().map(|c| c * c).sum();
    let base = match pc.ambient {
        Ambient::Sphere(n) => ((n - 1) * (n.saturating_sub(2))) as f64,
        Ambient::Euclidean(_) => 0.0,
    };
    base + sum * sum - sq
}

/// `√(n−k−1)/k`: lower bound on `sup |c_{ij}|` for codimension-`k`
/// submanifolds of `Sⁿ` admitting no metric with `Sc > 0`. Vacuous (zero)
/// at `k = n − 1`.
pub fn curvature_lower_bound(n: usize, k: usize) -> Result<f64> {
    if k < 1 || k + 1 > n {
        return Err(Error::invalid(format!("codimension k = {k} must satisfy 1 ≤ k ≤ n − 1 (n = {n})")));
    }
    Ok(((n - k - 1) as f64).sqrt() / k as f64)
}

/// Curvature of the balanced product `S^{n₁}(1/√k) × … × S^{n_k}(1/√k)` in
/// the unit sphere of `ℝ^{Σ(nᵢ+1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereProductCurvature {
    /// Number of factors.
    pub factors: usize,
    /// `max |II(X, X)|` in Euclidean space (closed form `√k`).
    pub euclidean: f64,
    /// Same with the radial normal removed, i.e. inside the sphere (`√(k−1)`).
    pub in_sphere: f64,
    /// Finite-difference values of the two quantities.
    pub euclidean_fd: f64,
    pub in_sphere_fd: f64,
}

/// Largest total dimension handled by the finite-difference check.
const MAX_PRODUCT_AMBIENT: usize = 16;

pub fn sphere_product_curvature(factor_dims: &[usize]) -> Result<SphereProductCurvature> {
    let k = factor_dims.len();
    if k == 0 {
        return Err(Error::invalid("need at least one factor"));
    }
    if factor_dims.contains(&0) {
        return Err(Error::invalid("factor spheres must have dimension ≥ 1"));
    }
    let ambient: usize = factor_dims.iter().map(|d| d + 1).sum();
    if ambient > MAX_PRODUCT_AMBIENT {
        return Err(Error::invalid(format!("ambient dimension {ambient} exceeds {MAX_PRODUCT_AMBIENT}")));
    }
    let rho = 1.0 / (k as f64).sqrt();
    let dims = factor_dims.to_vec();
    let embed = move |u: &[f64]| {
        let mut out = Vec::with_capacity(ambient);
        let mut offset = 0;
        for &d in &dims {
            out.extend(sphere_point(rho, &u[offset..offset + d]));
            offset += d;
        }
        out
    };
    // A generic point away from the coordinate poles.
    let params: usize = factor_dims.iter().sum();
    let u: Vec<f64> = (0..params).map(|i| 0.9 + 0.37 * i as f64).collect();
    let sff = second_fundamental_form(&embed, &u, DEFAULT_STEP)?;
    let position: Vec<f64> = sff.point.iter().copied().collect();
    let euclidean_fd = sff.max_normal_curvature()?;
    let in_sphere_fd = sff.without_normal(&position)?.max_normal_curvature()?;
    Ok(SphereProductCurvature {
        factors: k,
        euclidean: (k as f64).sqrt(),
        in_sphere: ((k - 1) as f64).sqrt(),
        euclidean_fd,
        in_sphere_fd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_examples() {
        for n in 2..8 {
            let pc = PrincipalCurvatures::umbilic(0.0, Ambient::Sphere(n)).unwrap();
            assert_eq!(gauss_scalar_curvature(&pc), ((n - 1) * (n - 2)) as f64);
        }
        let clifford = PrincipalCurvatures::new(vec![1.0, -1.0], Ambient::Sphere(3)).unwrap();
        assert_eq!(gauss_scalar_curvature(&clifford), 0.0);
        let n = 5;
        let lam = 0.8;
        let pc = PrincipalCurvatures::umbilic(lam, Ambient::Sphere(n)).unwrap();
        let expected = ((n - 1) * (n - 2)) as f64 * (1.0 + lam * lam);
        assert!((gauss_scalar_curvature(&pc) - expected).abs() < 1e-12);
        assert!(PrincipalCurvatures::new(vec![1.0], Ambient::Sphere(3)).is_err());
    }

    #[test]
    fn distance_sphere_consistency() {
        for n in 3..7 {
            for i in 1..=10 {
                let rho = 0.1 * i as f64;
                let lam = (1.0 - rho * rho).sqrt() / rho;
                let pc = PrincipalCurvatures::umbilic(lam, Ambient::Sphere(n)).unwrap();
                let intrinsic = ((n - 1) * (n - 2)) as f64 / (rho * rho);
                assert!((gauss_scalar_curvature(&pc) - intrinsic).abs() < 1e-10 * intrinsic);
            }
        }
    }

    #[test]
    fn lower_bounds() {
        for n in 3..10 {
            assert!((curvature_lower_bound(n, 1).unwrap() - ((n - 2) as f64).sqrt()).abs() < 1e-15);
            assert_eq!(curvature_lower_bound(n, n - 1).unwrap(), 0.0);
        }
        assert!(curvature_lower_bound(5, 0).is_err());
        assert!(curvature_lower_bound(5, 5).is_err());
    }

    #[test]
    fn sphere_products() {
        let one = sphere_product_curvature(&[2]).unwrap();
        assert_eq!(one.euclidean, 1.0);
        assert!((one.euclidean_fd - 1.0).abs() < 1e-6);
        assert!(one.in_sphere_fd.abs() < 1e-6);
        for dims in [vec![1, 1], vec![1, 2], vec![2, 2], vec![1, 1, 1], vec![1, 1, 1, 1]] {
            let c = sphere_product_curvature(&dims).unwrap();
            assert!((c.euclidean_fd - c.euclidean).abs() < 1e-6, "{dims:?} {c:?}");
            assert!((c.in_sphere_fd - c.in_sphere).abs() < 1e-6, "{dims:?} {c:?}");
        }
        assert!(sphere_product_curvature(&[]).is_err());
    }
}
