//! Brute-force normal injectivity radius of a sampled submanifold.
//!
//! A radius `r` is admissible at `(p, u)` (`u` a unit normal) when the open
//! ball of radius `r` centred at `p + r·u` contains no other sample. The
//! estimate is the largest `r` admissible at every sampled pair; admissibility
//! is monotone in `r`, so each pair is resolved by bisection.

use std::f64::consts::TAU;

use kiddo::{ImmutableKdTree, SquaredEuclidean};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

use super::embed::PointCloud;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Normal directions sampled per point in codimension two.
    pub directions: usize,
    /// Bisection stops at this relative bracket width.
    pub rel_tol: f64,
    /// A sample at squared distance below `r²·(1 − contact)` from the ball
    /// centre counts as inside.
    pub contact: f64,
    /// Test balls at every point even when the cloud carries orbit
    /// representatives.
    pub exhaustive: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            directions: 64,
            rel_tol: 1e-7,
            contact: 1e-9,
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FocalEstimate {
    pub radius: f64,
    pub points: usize,
    /// Points at which tangent balls were tested.
    pub probes: usize,
    pub directions_per_point: usize,
    /// `true` when no ball up to the bounding-box diagonal was obstructed.
    pub capped: bool,
}

pub fn brute_force_focal_radius(cloud: &PointCloud) -> Result<FocalEstimate> {
    brute_force_focal_radius_with(cloud, &OracleOptions::default())
}

pub fn brute_force_focal_radius_with(cloud: &PointCloud, opts: &OracleOptions) -> Result<FocalEstimate> {
    if cloud.len() < 3 {
        return Err(Error::Degenerate("need at least three points".into()));
    }
    if cloud.codim() > 2 {
        return Err(Error::invalid("only codimension one and two are supported"));
    }
    if cloud.codim() == 2 && opts.directions < 4 {
        return Err(Error::invalid("need at least four normal directions"));
    }
    match cloud.dim() {
        2 => run::<2>(cloud, opts),
        3 => run::<3>(cloud, opts),
        4 => run::<4>(cloud, opts),
        5 => run::<5>(cloud, opts),
        d => Err(Error::invalid(format!("unsupported ambient dimension {d}"))),
    }
}

fn check_duplicates<const K: usize>(pts: &[[f64; K]]) -> Result<()> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        pts[a]
            .iter()
            .zip(&pts[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for w in order.windows(2) {
        let d2: f64 = pts[w[0]].iter().zip(&pts[w[1]]).map(|(x, y)| (x - y).powi(2)).sum();
        if d2 < 1e-24 {
            return Err(Error::Degenerate(format!("points {} and {} coincide", w[0], w[1])));
        }
    }
    Ok(())
}

/// Fixed orthogonal map (a Householder reflection) applied to the cloud
/// before indexing. Distances are unchanged, but coordinates of grid-sampled
/// tori stop coinciding along the tree's split axes.
fn householder<const K: usize>() -> impl Fn(&[f64]) -> [f64; K] {
    let mut v = [0.0; K];
    for (j, x) in v.iter_mut().enumerate() {
        *x = 1.0 + 0.29 * (j as f64 + 1.0).sqrt();
    }
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    move |x: &[f64]| {
        let dot: f64 = x.iter().zip(&v).map(|(a, b)| a * b).sum();
        let mut out = [0.0; K];
        for j in 0..K {
            out[j] = x[j] - 2.0 * dot / norm2 * v[j];
        }
        out
    }
}

/// Clouds below this size are scanned linearly: kiddo's immutable tree
/// returns wrong neighbours when everything fits in a single leaf.
const MIN_TREE_POINTS: usize = 64;

enum Nearest<'a, const K: usize> {
    Tree(ImmutableKdTree<f64, K>),
    Scan(&'a [[f64; K]]),
}

impl<'a, const K: usize> Nearest<'a, K> {
    fn new(pts: &'a [[f64; K]]) -> Self {
        if pts.len() < MIN_TREE_POINTS {
            Nearest::Scan(pts)
        } else {
            Nearest::Tree(ImmutableKdTree::new_from_slice(pts))
        }
    }

    /// Index and squared distance of the sample closest to `q`.
    fn nearest(&self, q: &[f64; K]) -> (usize, f64) {
        match self {
            Nearest::Tree(tree) => {
                let nn = tree.nearest_one::<SquaredEuclidean>(q);
                (nn.item as usize, nn.distance)
            }
            Nearest::Scan(pts) => pts
                .iter()
                .enumerate()
                .map(|(i, p)| (i, p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()))
                .fold((usize::MAX, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best }),
        }
    }
}

fn run<const K: usize>(cloud: &PointCloud, opts: &OracleOptions) -> Result<FocalEstimate> {
    let reflect = householder::<K>();
    let pts: Vec<[f64; K]> = (0..cloud.len()).map(|i| reflect(cloud.point(i))).collect();
    let normals: Vec<[f64; K]> = (0..cloud.len())
        .flat_map(|i| (0..cloud.codim()).map(move |k| (i, k)))
        .map(|(i, k)| reflect(cloud.normal(i, k)))
        .collect();
    check_duplicates(&pts)?;
    let index = Nearest::new(&pts);

    let diameter = (0..K)
        .map(|j| {
            let (lo, hi) = pts
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[j]), hi.max(p[j])));
            (hi - lo).powi(2)
        })
        .sum::<f64>()
        .sqrt();

    let dirs: Vec<(f64, f64)> = if cloud.codim() == 1 {
        vec![(1.0, 0.0), (-1.0, 0.0)]
    } else {
        (0..opts.directions)
            .map(|j| {
                let (s, c) = (TAU * j as f64 / opts.directions as f64).sin_cos();
                (c, s)
            })
            .collect()
    };

    let obstructed = |i: usize, u: &[f64; K], r: f64| -> bool {
        let p = &pts[i];
        let mut centre = [0.0; K];
        for j in 0..K {
            centre[j] = p[j] + r * u[j];
        }
        let limit = r * r * (1.0 - opts.contact);
        // p itself sits at distance r, so any strictly closer sample wins.
        let (item, distance) = index.nearest(&centre);
        item != i && distance < limit
    };

    // Largest admissible radius at point i, or `best` if that is admissible.
    let point_radius = |i: usize, best: f64| -> f64 {
        let codim = cloud.codim();
        let n0 = &normals[i * codim];
        let n1 = (codim == 2).then(|| &normals[i * codim + 1]);
        let mut r_i = best;
        for &(a, b) in &dirs {
            let mut u = [0.0; K];
            for j in 0..K {
                u[j] = a * n0[j] + n1.map_or(0.0, |n| b * n[j]);
            }
            if !obstructed(i, &u, r_i) {
                continue;
            }
            let (mut lo, mut hi) = (0.0, r_i);
            while hi - lo > opts.rel_tol * hi {
                let mid = 0.5 * (lo + hi);
                if obstructed(i, &u, mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            r_i = lo;
        }
        r_i
    };

    let all: Vec<usize>;
    let probes = match cloud.probes() {
        Some(p) if !opts.exhaustive => p,
        _ => {
            all = (0..pts.len()).collect();
            &all
        }
    };
    const CHUNK: usize = 8192;
    let mut best = diameter;
    for chunk in probes.chunks(CHUNK) {
        let snapshot = best;
        let chunk_min = chunk
            .par_iter()
            .map(|&i| point_radius(i, snapshot))
            .reduce(|| snapshot, f64::min);
        best = best.min(chunk_min);
    }

    Ok(FocalEstimate {
        radius: best,
        points: pts.len(),
        probes: probes.len(),
        directions_per_point: dirs.len(),
        capped: best >= diameter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{embed_and_sample, TorusConstruction};

    #[test]
    fn unit_circle() {
        let cloud = embed_and_sample(&TorusConstruction::circle(), 128).unwrap();
        let est = brute_force_focal_radius(&cloud).unwrap();
        assert!((est.radius - 1.0).abs() < 1e-3, "{est:?}");
        assert!(!est.capped);
    }

    #[test]
    fn coarse_circles() {
        for m in [16, 17, 24, 31, 32, 63, 64, 65] {
            let cloud = embed_and_sample(&TorusConstruction::circle(), m).unwrap();
            let est = brute_force_focal_radius(&cloud).unwrap();
            // Odd counts have no antipodal sample, so the radius may exceed 1 slightly.
            assert!((est.radius - 1.0).abs() < 0.01, "{m}: {est:?}");
        }
    }

    #[test]
    fn ellipse_reach_is_min_curvature_radius() {
        // x = 2cos t, y = sin t: smallest radius of curvature b²/a = 1/2.
        let m = 2000;
        let mut pts = Vec::new();
        let mut nrm = Vec::new();
        for k in 0..m {
            let t = TAU * k as f64 / m as f64;
            pts.extend([2.0 * t.cos(), t.sin()]);
            let (nx, ny) = (t.cos(), 2.0 * t.sin());
            let l = nx.hypot(ny);
            nrm.extend([nx / l, ny / l]);
        }
        let cloud = PointCloud::new(2, 1, pts, nrm).unwrap();
        let est = brute_force_focal_radius(&cloud).unwrap();
        assert!((est.radius - 0.5).abs() < 5e-3, "{est:?}");
    }

    #[test]
    fn product_torus_small_resolution() {
        let pair = TorusConstruction::pair(TorusConstruction::circle(), TorusConstruction::circle()).unwrap();
        let cloud = embed_and_sample(&pair, 64).unwrap();
        let est = brute_force_focal_radius(&cloud).unwrap();
        assert!((est.radius / std::f64::consts::FRAC_1_SQRT_2 - 1.0).abs() < 0.02, "{est:?}");
    }

    #[test]
    fn orbit_probes_match_exhaustive_search() {
        let y4 = TorusConstruction::build(4).unwrap();
        let cloud = embed_and_sample(&y4, 20).unwrap();
        let fast = brute_force_focal_radius(&cloud).unwrap();
        let opts = OracleOptions {
            exhaustive: true,
            ..OracleOptions::default()
        };
        let slow = brute_force_focal_radius_with(&cloud, &opts).unwrap();
        assert_eq!(fast.probes, 20);
        assert_eq!(slow.probes, 8000);
        assert!((fast.radius - slow.radius).abs() <= 1e-6 * slow.radius, "{fast:?} {slow:?}");
    }

    #[test]
    fn duplicates_are_degenerate() {
        let cloud = PointCloud::new(
            2,
            1,
            vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0, -1.0, 0.0],
            vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0, -1.0, 0.0],
        )
        .unwrap();
        assert!(matches!(brute_force_focal_radius(&cloud), Err(Error::Degenerate(_))));
    }
}
