//! Newton polytopes: support, hull vertices, coordinate widths and lattice
//! point enumeration of dilates.
//!
//! Dimensions one and two use exact integer geometry. Higher dimensions fall
//! back to LP-based hull membership.

use super::{ExponentVector, LaurentPolynomial};
use crate::error::{Error, Result};
use crate::lp::in_convex_hull;

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Interval { lo: i64, hi: i64 },
    /// Hull vertices in counter-clockwise order (1 or 2 vertices for
    /// degenerate hulls).
    Polygon(Vec<[i64; 2]>),
    General,
}

/// Newton polytope data of a nonzero Laurent polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolytope {
    support: Vec<ExponentVector>,
    vertices: Vec<ExponentVector>,
    mins: Vec<i64>,
    widths: Vec<i64>,
    shape: Shape,
}

/// Newton polytope of `f`.
pub fn newton_polytope(f: &LaurentPolynomial) -> Result<NewtonPolytope> {
    f.require_nonzero()?;
    NewtonPolytope::from_support(f.exponents().cloned().collect())
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Andrew's monotone chain; collinear points are dropped.
fn hull_2d(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl NewtonPolytope {
    pub fn from_support(mut support: Vec<ExponentVector>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        support.sort();
        support.dedup();
        let r = support[0].len();
        if support.iter().any(|e| e.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, found: 0 });
        }
        let mins: Vec<i64> = (0..r).map(|i| support.iter().map(|e| e[i]).min().unwrap()).collect();
        let maxs: Vec<i64> = (0..r).map(|i| support.iter().map(|e| e[i]).max().unwrap()).collect();
        let widths = maxs.iter().zip(&mins).map(|(hi, lo)| hi - lo).collect();

        let (shape, vertices) = match r {
            1 => {
                let (lo, hi) = (mins[0], maxs[0]);
                let mut v = vec![ExponentVector::new(vec![lo])];
                if hi != lo {
                    v.push(ExponentVector::new(vec![hi]));
                }
                (Shape::Interval { lo, hi }, v)
            }
            2 => {
                let pts: Vec<[i64; 2]> = support.iter().map(|e| [e[0], e[1]]).collect();
                let hull = hull_2d(&pts);
                let mut v: Vec<ExponentVector> =
                    hull.iter().map(|p| ExponentVector::new(p.to_vec())).collect();
                v.sort();
                (Shape::Polygon(hull), v)
            }
            _ => {
                let mut v = Vec::new();
                for (i, p) in support.iter().enumerate() {
                    let others: Vec<Vec<f64>> = support
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i)
                        .map(|(_, q)| q.iter().map(|&x| x as f64).collect())
                        .collect();
                    let pf: Vec<f64> = p.iter().map(|&x| x as f64).collect();
                    if !in_convex_hull(&others, &pf)? {
                        v.push(p.clone());
                    }
                }
                (Shape::General, v)
            }
        };
        Ok(Self { support, vertices, mins, widths, shape })
    }

    pub fn dim(&self) -> usize {
        self.mins.len()
    }

    pub fn support(&self) -> &[ExponentVector] {
        &self.support
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    /// Coordinate widths `max x_i - min x_i` over the polytope.
    pub fn widths(&self) -> &[i64] {
        &self.widths
    }

    /// The largest coordinate width.
    pub fn max_width(&self) -> i64 {
        self.widths.iter().copied().max().unwrap_or(0)
    }

    /// Number of lattice points in the bounding box of `m * Delta`.
    pub fn box_count(&self, m: i64) -> f64 {
        self.widths.iter().map(|&w| (m * w + 1) as f64).product()
    }

    /// Whether the integer point `p` lies in the dilate `m * Delta`.
    pub fn contains_dilated(&self, m: i64, p: &[i64]) -> Result<bool> {
        match &self.shape {
            Shape::Interval { lo, hi } => Ok(p[0] >= m * lo && p[0] <= m * hi),
            Shape::Polygon(hull) => {
                let q = [p[0], p[1]];
                let v: Vec<[i64; 2]> = hull.iter().map(|h| [h[0] * m, h[1] * m]).collect();
                Ok(match v.len() {
                    1 => q == v[0],
                    2 => {
                        cross(v[0], v[1], q) == 0
                            && q[0] >= v[0][0].min(v[1][0])
                            && q[0] <= v[0][0].max(v[1][0])
                            && q[1] >= v[0][1].min(v[1][1])
                            && q[1] <= v[0][1].max(v[1][1])
                    }
                    k => (0..k).all(|i| cross(v[i], v[(i + 1) % k], q) >= 0),
                })
            }
            Shape::General => {
                let pts: Vec<Vec<f64>> = self
                    .vertices
                    .iter()
                    .map(|v| v.iter().map(|&x| (x * m) as f64).collect())
                    .collect();
                let pf: Vec<f64> = p.iter().map(|&x| x as f64).collect();
                in_convex_hull(&pts, &pf)
            }
        }
    }

    /// All lattice points of `m * Delta`, in lexicographic order. Fails when
    /// the bounding box has more than `limit` points.
    pub fn lattice_points_dilated(&self, m: i64, limit: f64) -> Result<Vec<ExponentVector>> {
        let total = self.box_count(m);
        if total > limit {
            return Err(Error::EnumerationOverflow { points: total });
        }
        let r = self.dim();
        let lo: Vec<i64> = self.mins.iter().map(|&x| x * m).collect();
        let hi: Vec<i64> = self.mins.iter().zip(&self.widths).map(|(&x, &w)| (x + w) * m).collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains_dilated(m, &cur)? {
                out.push(ExponentVector::new(cur.clone()));
            }
            // odometer, last coordinate fastest
            let mut i = r;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    cur[i + 1..r].copy_from_slice(&lo[i + 1..r]);
                    break;
                }
            }
        }
    }

    /// Lattice points of the polytope itself.
    pub fn lattice_points(&self) -> Result<Vec<ExponentVector>> {
        self.lattice_points_dilated(1, f64::INFINITY)
    }
}
