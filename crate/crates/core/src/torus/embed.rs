use std::f64::consts::TAU;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::report::fmt_num;

use super::{Node, TorusConstruction};

/// Largest ambient dimension that is sampled.
pub const MAX_AMBIENT_DIM: usize = 5;
/// Smallest number of samples per angle.
pub const MIN_RESOLUTION: usize = 16;

/// Sampled points with an orthonormal normal frame at each point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    codim: usize,
    points: Vec<f64>,
    normals: Vec<f64>,
    probes: Option<Vec<usize>>,
}

impl PointCloud {
    /// Builds a cloud from flat arrays (`points.len() = N·dim`,
    /// `normals.len() = N·codim·dim`).
    pub fn new(dim: usize, codim: usize, points: Vec<f64>, normals: Vec<f64>) -> Result<Self> {
        if dim == 0 || codim == 0 || codim >= dim {
            return Err(Error::invalid("need 0 < codimension < dimension"));
        }
        if !points.len().is_multiple_of(dim) || normals.len() != points.len() * codim {
            return Err(Error::invalid("point and normal arrays are inconsistent"));
        }
        let cloud = PointCloud {
            dim,
            codim,
            points,
            normals,
            probes: None,
        };
        for i in 0..cloud.len() {
            for k in 0..codim {
                let norm: f64 = cloud.normal(i, k).iter().map(|x| x * x).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-10 {
                    return Err(Error::invalid(format!("normal {k} at point {i} is not unit")));
                }
            }
        }
        Ok(cloud)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// `k`-th normal at point `i`.
    pub fn normal(&self, i: usize, k: usize) -> &[f64] {
        let start = (i * self.codim + k) * self.dim;
        &self.normals[start..start + self.dim]
    }

    /// One point per orbit of a symmetry group of the cloud, if known.
    pub fn probes(&self) -> Option<&[usize]> {
        self.probes.as_deref()
    }

    /// Declares `probes` as orbit representatives: the cloud (points and
    /// normal frames) must be invariant under isometries that act
    /// transitively on each orbit.
    pub fn with_probes(mut self, probes: Vec<usize>) -> Result<Self> {
        if probes.is_empty() || probes.iter().any(|&i| i >= self.len()) {
            return Err(Error::invalid("probe indices out of range"));
        }
        self.probes = Some(probes);
        Ok(self)
    }

    pub fn max_norm(&self) -> f64 {
        (0..self.len())
            .map(|i| self.point(i).iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// One row per point: coordinates, then normal components.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut header: Vec<String> = (1..=self.dim).map(|j| format!("x{j}")).collect();
        for k in 1..=self.codim {
            for j in 1..=self.dim {
                header.push(if self.codim == 1 { format!("n{j}") } else { format!("n{k}_{j}") });
            }
        }
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.len() {
            let mut row: Vec<String> = self.point(i).iter().map(|&x| fmt_num(x)).collect();
            for k in 0..self.codim {
                row.extend(self.normal(i, k).iter().map(|&x| fmt_num(x)));
            }
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Point and normal frame at the given angles.
fn realize(node: &TorusConstruction, angles: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    match node.node() {
        Node::Circle => {
            let (s, c) = angles[0].sin_cos();
            (vec![c, s], vec![vec![c, s]])
        }
        Node::Pair { left, right, c1, c2 } => {
            let (la, ra) = angles.split_at(left.angles());
            let (pl, nl) = realize(left, la);
            let (pr, nr) = realize(right, ra);
            let d = node.ambient_dim();
            let mut p = Vec::with_capacity(d);
            p.extend(pl.iter().map(|x| c1 * x));
            p.extend(pr.iter().map(|x| c2 * x));
            let mut n1 = nl[0].clone();
            n1.resize(d, 0.0);
            let mut n2 = vec![0.0; left.ambient_dim()];
            n2.extend_from_slice(&nr[0]);
            (p, vec![n1, n2])
        }
        Node::Offset { inner, delta, rescale } => {
            let (ia, psi) = angles.split_at(inner.angles());
            let (p, frame) = realize(inner, ia);
            let (s, c) = psi[0].sin_cos();
            let u: Vec<f64> = frame[0].iter().zip(&frame[1]).map(|(a, b)| c * a + s * b).collect();
            let q = p.iter().zip(&u).map(|(x, v)| (x + delta * v) * rescale).collect();
            (q, vec![u])
        }
    }
}

/// Which angles belong to circle leaves (as opposed to tube angles).
fn leaf_mask(node: &TorusConstruction, out: &mut Vec<bool>) {
    match node.node() {
        Node::Circle => out.push(true),
        Node::Pair { left, right, .. } => {
            leaf_mask(left, out);
            leaf_mask(right, out);
        }
        Node::Offset { inner, .. } => {
            leaf_mask(inner, out);
            out.push(false);
        }
    }
}

/// Samples `resolution` equally spaced values of every angle.
///
/// Rotating any circle leaf by one grid step rotates one coordinate plane
/// and maps the sample (with its normals) onto itself, so the points whose
/// leaf angles are all zero are attached as orbit representatives.
pub fn embed_and_sample(construction: &TorusConstruction, resolution: usize) -> Result<PointCloud> {
    let dim = construction.ambient_dim();
    if dim > MAX_AMBIENT_DIM {
        return Err(Error::invalid(format!(
            "ambient dimension {dim} exceeds the sampling limit {MAX_AMBIENT_DIM}"
        )));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::invalid(format!("resolution must be at least {MIN_RESOLUTION}")));
    }
    let k = construction.angles();
    let codim = construction.codimension();
    let count = resolution.pow(k as u32);
    let mut points = Vec::with_capacity(count * dim);
    let mut normals = Vec::with_capacity(count * dim * codim);
    let step = TAU / resolution as f64;
    let mut mask = Vec::with_capacity(k);
    leaf_mask(construction, &mut mask);
    let mut probes = Vec::new();
    let mut angles = vec![0.0; k];
    for idx in 0..count {
        let mut rest = idx;
        let mut on_slice = true;
        for (a, &leaf) in angles.iter_mut().zip(&mask).rev() {
            let j = rest % resolution;
            *a = j as f64 * step;
            on_slice &= !leaf || j == 0;
            rest /= resolution;
        }
        if on_slice {
            probes.push(idx);
        }
        let (p, frame) = realize(construction, &angles);
        points.extend(p);
        for n in frame {
            normals.extend(n);
        }
    }
    PointCloud::new(dim, codim, points, normals)?.with_probes(probes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_samples() {
        let cloud = embed_and_sample(&TorusConstruction::circle(), 256).unwrap();
        assert_eq!(cloud.len(), 256);
        for i in 0..cloud.len() {
            let p = cloud.point(i);
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-15);
            assert_eq!(p, cloud.normal(i, 0));
        }
    }

    #[test]
    fn y4_lies_in_unit_ball() {
        let y4 = TorusConstruction::build(4).unwrap();
        let cloud = embed_and_sample(&y4, 24).unwrap();
        assert_eq!(cloud.len(), 24 * 24 * 24);
        assert_eq!(cloud.probes().unwrap().len(), 24);
        assert_eq!(cloud.dim(), 4);
        assert!(cloud.max_norm() <= 1.0 + 1e-10);
        // Normals are orthogonal to the two tangent circles of the core.
        let product = TorusConstruction::pair(TorusConstruction::circle(), TorusConstruction::circle()).unwrap();
        let pc = embed_and_sample(&product, 32).unwrap();
        assert_eq!(pc.codim(), 2);
        for i in 0..pc.len() {
            let dot: f64 = pc.normal(i, 0).iter().zip(pc.normal(i, 1)).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-15);
        }
    }

    #[test]
    fn limits() {
        assert!(embed_and_sample(&TorusConstruction::circle(), 8).is_err());
        assert!(embed_and_sample(&TorusConstruction::build(8).unwrap(), 16).is_err());
    }

    #[test]
    fn csv_layout() {
        let cloud = embed_and_sample(&TorusConstruction::circle(), 16).unwrap();
        let mut buf = Vec::new();
        cloud.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x1,x2,n1,n2"));
        assert_eq!(lines.next(), Some("1,0,1,0"));
        assert_eq!(text.lines().count(), 17);
    }
}
