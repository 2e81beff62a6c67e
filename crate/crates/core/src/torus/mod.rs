//! Codimension-one tori `Y(n) ⊂ Bⁿ` built by scaled products and tube
//! offsets, their focal radii, and the width/Lipschitz bounds they imply.

mod embed;
mod oracle;

use std::f64::consts::{PI, SQRT_2};
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};

pub use embed::{embed_and_sample, PointCloud, MAX_AMBIENT_DIM, MIN_RESOLUTION};
pub use oracle::{brute_force_focal_radius, brute_force_focal_radius_with, FocalEstimate, OracleOptions};

/// Scale factors and focal radius of `c₁Y₁ × c₂Y₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub r_cross: f64,
}

fn check_radius(r: f64, what: &str) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must lie in (0, 1], got {r}")))
    }
}

/// Solves `c₁² + c₂² = 1`, `c₁r₁ = c₂r₂`.
pub fn combine_pair(r1: f64, r2: f64) -> Result<PairCoefficients> {
    check_radius(r1, "focal radius")?;
    check_radius(r2, "focal radius")?;
    let norm = r1.hypot(r2);
    Ok(PairCoefficients {
        c1: r2 / norm,
        c2: r1 / norm,
        r_cross: r1 * r2 / norm,
    })
}

/// Focal radius of the rescaled boundary of the `r×/2`-tube.
pub fn offset_radius(r_cross: f64) -> Result<f64> {
    check_radius(r_cross, "product focal radius")?;
    Ok(r_cross / (2.0 + r_cross))
}

/// `r(n)` for `2 ≤ n ≤ n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FocalRadiusTable {
    radii: Vec<f64>,
}

impl FocalRadiusTable {
    pub fn n_max(&self) -> usize {
        self.radii.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        (n >= 2).then(|| self.radii.get(n).copied()).flatten()
    }

    /// `(n, r(n))` rows.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.radii.iter().copied().enumerate().skip(2)
    }

    /// `r(n)·n^{3/2}`.
    pub fn scaled(&self, n: usize) -> Option<f64> {
        self.get(n).map(|r| r * (n as f64).powf(1.5))
    }
}

/// Focal radii of `Y(n)`: `r(2) = 1`, `r(3) = π/4` (the Clifford torus in
/// `S³`), and `Y(n)` for `n ≥ 4` from `Y(⌊n/2⌋) × Y(⌈n/2⌉)` followed by the
/// tube offset. For even `n` this is `r(n) = r(n/2)/(2√2 + r(n/2))`.
pub fn focal_radius_table(n_max: usize) -> Result<FocalRadiusTable> {
    if n_max < 2 {
        return Err(Error::invalid("table needs n_max ≥ 2"));
    }
    let mut radii = vec![f64::NAN; n_max + 1];
    radii[2] = 1.0;
    if n_max >= 3 {
        radii[3] = PI / 4.0;
    }
    for n in 4..=n_max {
        radii[n] = if n % 2 == 0 {
            let r = radii[n / 2];
            r / (2.0 * SQRT_2 + r)
        } else {
            offset_radius(combine_pair(radii[n / 2], radii[n / 2 + 1])?.r_cross)?
        };
    }
    Ok(FocalRadiusTable { radii })
}

/// Lower bound `2r(n)` for the torical width of the unit sphere `Sⁿ`
/// (`π/2` at `n = 3` from the Clifford torus).
pub fn spherical_width_lower_bound(n: usize) -> Result<f64> {
    let table = focal_radius_table(n.max(3))?;
    table
        .get(n)
        .map(|r| 2.0 * r)
        .ok_or_else(|| Error::invalid("dimension must be at least 2"))
}

/// `Lip(f) ≥ (d/2π)·√(σn/(n−1))` for maps of a band of width `d` with
/// `Sc ≥ σ` to a torus.
pub fn lipschitz_lower_bound(n: usize, sigma: f64, d: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    if !(sigma > 0.0) || !(d > 0.0) {
        return Err(Error::invalid("σ and d must be positive"));
    }
    let nf = n as f64;
    Ok(d / (2.0 * PI) * (sigma * nf / (nf - 1.0)).sqrt())
}

/// First `n` in `range` at which `(1/3)/(π√n)` exceeds the classical
/// `n/(2ⁿπ)`.
pub fn crossover_vs_classical(range: RangeInclusive<usize>) -> Option<usize> {
    range.into_iter().find(|&n| {
        let nf = n as f64;
        (1.0 / 3.0) / (PI * nf.sqrt()) > nf / (2f64.powi(n as i32) * PI)
    })
}

/// Focal radius and curvature of the round `S^m(ρ)` inside the unit `Sⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsphereData {
    pub focal_radius: f64,
    pub curvature: f64,
}

pub fn subsphere_data(rho: f64) -> Result<SubsphereData> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::invalid(format!("ρ must lie in (0, 1], got {rho}")));
    }
    Ok(SubsphereData {
        focal_radius: rho.asin(),
        curvature: (1.0 - rho * rho).sqrt() / rho,
    })
}

/// One node of the recursive construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Unit circle in `ℝ²`.
    Circle,
    /// `c₁·left × c₂·right`, codimension two.
    Pair {
        left: Box<TorusConstruction>,
        right: Box<TorusConstruction>,
        c1: f64,
        c2: f64,
    },
    /// Boundary of the `delta`-tube around a pair, scaled by `rescale`.
    Offset {
        inner: Box<TorusConstruction>,
        delta: f64,
        rescale: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusConstruction {
    node: Node,
    ambient_dim: usize,
    focal_radius: f64,
}

impl TorusConstruction {
    pub fn circle() -> Self {
        TorusConstruction {
            node: Node::Circle,
            ambient_dim: 2,
            focal_radius: 1.0,
        }
    }

    /// Scaled product of two hypersurface nodes.
    pub fn pair(left: TorusConstruction, right: TorusConstruction) -> Result<Self> {
        if left.codimension() != 1 || right.codimension() != 1 {
            return Err(Error::invalid("pair factors must be hypersurfaces"));
        }
        let pc = combine_pair(left.focal_radius, right.focal_radius)?;
        Ok(TorusConstruction {
            ambient_dim: left.ambient_dim + right.ambient_dim,
            focal_radius: pc.r_cross,
            node: Node::Pair {
                left: Box::new(left),
                right: Box::new(right),
                c1: pc.c1,
                c2: pc.c2,
            },
        })
    }

    /// Tube of radius `r×/2` around a pair, rescaled into the unit ball.
    pub fn offset(inner: TorusConstruction) -> Result<Self> {
        if !matches!(inner.node, Node::Pair { .. }) {
            return Err(Error::invalid("only pair nodes can be offset"));
        }
        let delta = 0.5 * inner.focal_radius;
        Ok(TorusConstruction {
            ambient_dim: inner.ambient_dim,
            focal_radius: offset_radius(inner.focal_radius)?,
            node: Node::Offset {
                inner: Box::new(inner),
                delta,
                rescale: 1.0 / (1.0 + delta),
            },
        })
    }

    /// `Y(n)`. Only dimensions whose halving never reaches 3 are realizable
    /// in Euclidean space (the 3-dimensional entry of the table is the
    /// spherical Clifford torus).
    pub fn build(n: usize) -> Result<Self> {
        match n {
            0 | 1 => Err(Error::invalid("dimension must be at least 2")),
            2 => Ok(TorusConstruction::circle()),
            3 => Err(Error::invalid(
                "Y(3) is the Clifford torus in S³; it has no Euclidean realization in this recursion",
            )),
            _ => {
                let left = TorusConstruction::build(n / 2)?;
                let right = TorusConstruction::build(n - n / 2)?;
                TorusConstruction::offset(TorusConstruction::pair(left, right)?)
            }
        }
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn focal_radius(&self) -> f64 {
        self.focal_radius
    }

    pub fn codimension(&self) -> usize {
        match self.node {
            Node::Pair { .. } => 2,
            _ => 1,
        }
    }

    /// Number of angle parameters (the torus dimension).
    pub fn angles(&self) -> usize {
        self.ambient_dim - self.codimension()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_examples() {
        let p = combine_pair(1.0, 1.0).unwrap();
        let s = 1.0 / SQRT_2;
        assert!((p.c1 - s).abs() < 1e-15 && (p.c2 - s).abs() < 1e-15 && (p.r_cross - s).abs() < 1e-15);
        let p = combine_pair(1.0, 0.5).unwrap();
        let s5 = 5f64.sqrt();
        assert!((p.c1 - 1.0 / s5).abs() < 1e-15);
        assert!((p.c2 - 2.0 / s5).abs() < 1e-15);
        assert!((p.r_cross - 1.0 / s5).abs() < 1e-15);
        assert!(combine_pair(0.0, 1.0).is_err());
    }

    #[test]
    fn pair_invariants() {
        for &(a, b) in &[(1.0, 0.3), (0.2, 0.9), (0.05, 0.05)] {
            let p = combine_pair(a, b).unwrap();
            assert!((p.c1 * p.c1 + p.c2 * p.c2 - 1.0).abs() < 1e-12);
            assert!((p.c1 * a - p.c2 * b).abs() < 1e-12);
        }
    }

    #[test]
    fn offset_examples() {
        assert!((offset_radius(1.0 / SQRT_2).unwrap() - 1.0 / (2.0 * SQRT_2 + 1.0)).abs() < 1e-15);
        assert!((offset_radius(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(offset_radius(-0.1).is_err());
    }

    #[test]
    fn table_values() {
        let t = focal_radius_table(1024).unwrap();
        let r4 = 1.0 / (1.0 + 2.0 * SQRT_2);
        assert!((t.get(4).unwrap() - r4).abs() < 1e-15);
        assert!((t.get(4).unwrap() - 0.2612038749637414).abs() < 1e-15);
        assert!((t.get(8).unwrap() - 0.08454209418155902).abs() < 1e-15);
        assert!(t.get(8).unwrap() > 1.0 / 13.0);
        for (n, _) in t.iter() {
            assert!(t.scaled(n).unwrap() > 1.0 / 3.0, "n={n}");
            if n.is_power_of_two() && n >= 4 {
                assert!(t.scaled(n).unwrap() > 1.0, "n={n}");
            }
        }
        assert!(focal_radius_table(1).is_err());
    }

    #[test]
    fn widths_and_lipschitz() {
        assert_eq!(spherical_width_lower_bound(2).unwrap(), 2.0);
        assert!((spherical_width_lower_bound(3).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((spherical_width_lower_bound(4).unwrap() - 2.0 / (2.0 * SQRT_2 + 1.0)).abs() < 1e-15);
        assert!((lipschitz_lower_bound(3, 6.0, PI / 2.0).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(crossover_vs_classical(2..=20), Some(6));
    }

    #[test]
    fn subspheres() {
        let d = subsphere_data(1.0).unwrap();
        assert_eq!((d.focal_radius, d.curvature), (PI / 2.0, 0.0));
        let d = subsphere_data(1.0 / SQRT_2).unwrap();
        assert!((d.focal_radius - PI / 4.0).abs() < 1e-15 && (d.curvature - 1.0).abs() < 1e-15);
        assert!(subsphere_data(1.2).is_err());
    }

    #[test]
    fn construction_matches_table() {
        let t = focal_radius_table(16).unwrap();
        for n in [2, 4, 8, 16] {
            let y = TorusConstruction::build(n).unwrap();
            assert_eq!(y.ambient_dim(), n);
            assert!((y.focal_radius() - t.get(n).unwrap()).abs() < 1e-15);
        }
        assert!(TorusConstruction::build(3).is_err());
        assert!(TorusConstruction::build(6).is_err());
    }
}
