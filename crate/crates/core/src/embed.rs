//! Grid diagrams realized as polygonal knots inside finite sponge stages.
//!
//! Columns become vertical segments on the front face `z = 0`, rows become
//! horizontal segments on the back face `z = 1`, and matching endpoints are
//! joined by full-depth connectors. Every coordinate in the front and back
//! faces is a Cantor endpoint, so each segment lies in the sponge.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{fmt_rat, int, third_pow, Point3, Rational};
use crate::grid::GridDiagram;
use crate::invariants::is_simple;
use crate::polyline::ClosedPolyline3;
use crate::ternary::{cantor_endpoints, point_in_sponge_stage, segment_in_stage, AxisSegment, Space};

/// Label of the straight segment reserved for connected sums.
pub const SPLICE_MARK: &str = "splice";

/// Smallest `k` with `2^(k+1) ≥ n`.
pub fn stage_for(n: usize) -> u32 {
    assert!(n >= 1, "stage_for needs n >= 1");
    let mut k = 0;
    while (1usize << (k + 1)) < n {
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub stage: u32,
    #[serde(serialize_with = "ser_rats")]
    pub endpoints: Vec<Rational>,
    pub segments_in_stage: Vec<bool>,
    pub simple: bool,
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rat))
}

impl EmbeddingReport {
    pub fn ok(&self) -> bool {
        self.simple && self.segments_in_stage.iter().all(|&b| b)
    }
}

/// Per-segment exact containment in `M_k`; `false` for non-axis segments.
pub fn containment(p: &ClosedPolyline3, k: usize) -> Vec<bool> {
    let segs: Vec<_> = p.segments().collect();
    segs.par_iter()
        .map(|(a, b)| {
            AxisSegment::from_points(a, b)
                .map(|s| segment_in_stage(&s, k, Space::Sponge))
                .unwrap_or(false)
        })
        .collect()
}

/// Unit-cube embedding of `d`. The walk starts at the connector under the
/// first point of row 1; the vertical on column 1 (on the cube edge
/// `x = 0, z = 0`) carries the splice mark.
pub fn embed_grid(d: &GridDiagram, k: Option<u32>) -> Result<(ClosedPolyline3, EmbeddingReport)> {
    d.validate()?;
    let k = k.unwrap_or_else(|| stage_for(d.n));
    let ends = cantor_endpoints(k);
    if ends.len() < d.n {
        return Err(Error::StageTooSmall {
            stage: k,
            available: ends.len(),
            needed: d.n,
        });
    }
    let p = &ends[..d.n];
    let (zero, one) = (int(0), int(1));
    let mut vertices = Vec::with_capacity(4 * d.n);
    let mut mark = None;
    for r in d.row_order() {
        let [a, b] = d.pairs[r];
        let y = &p[r];
        let (xa, xb) = (&p[a - 1], &p[b - 1]);
        vertices.push(Point3::new(xa.clone(), y.clone(), zero.clone()));
        vertices.push(Point3::new(xa.clone(), y.clone(), one.clone()));
        vertices.push(Point3::new(xb.clone(), y.clone(), one.clone()));
        vertices.push(Point3::new(xb.clone(), y.clone(), zero.clone()));
        if b == 1 {
            mark = Some(vertices.len() - 1);
        }
    }
    let poly = ClosedPolyline3::new(vertices)?.with_mark(SPLICE_MARK, mark.expect("column 1 is used"));
    let report = EmbeddingReport {
        stage: k,
        endpoints: p.to_vec(),
        segments_in_stage: containment(&poly, k as usize),
        simple: is_simple(&poly)?,
    };
    Ok((poly, report))
}

/// Orientation-preserving similarity from the unit cube onto a cube of side
/// `3^-level`: local `(x, y, z)` maps to `origin + side·(x·u + y·v + z·w)`,
/// where `u, v, w` are signed coordinate axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub origin: Point3,
    pub level: u32,
    pub u: [i8; 3],
    pub v: [i8; 3],
    pub w: [i8; 3],
}

fn is_axis(a: &[i8; 3]) -> bool {
    a.iter().filter(|&&c| c != 0).count() == 1 && a.iter().all(|&c| (-1..=1).contains(&c))
}

fn det3(u: &[i8; 3], v: &[i8; 3], w: &[i8; 3]) -> i32 {
    let (u, v, w) = (u.map(i32::from), v.map(i32::from), w.map(i32::from));
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
}

impl Frame {
    pub fn identity() -> Self {
        Frame {
            origin: Point3::origin(),
            level: 0,
            u: [1, 0, 0],
            v: [0, 1, 0],
            w: [0, 0, 1],
        }
    }

    /// Axis-aligned placement with the identity orientation.
    pub fn translate(origin: Point3, level: u32) -> Self {
        Frame {
            origin,
            level,
            ..Frame::identity()
        }
    }

    pub fn side(&self) -> Rational {
        third_pow(self.level)
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        let s = self.side();
        let axis = |a: &[i8; 3]| Point3::new(int(a[0] as i64), int(a[1] as i64), int(a[2] as i64));
        let off = &(&axis(&self.u).scale(&p[0]) + &axis(&self.v).scale(&p[1])) + &axis(&self.w).scale(&p[2]);
        &self.origin + &off.scale(&s)
    }

    /// `(min corner, max corner)` of the image cube.
    pub fn cube(&self) -> (Point3, Point3) {
        let corners: Vec<Point3> = (0..8)
            .map(|m| {
                let c = |b: usize| if m >> b & 1 == 1 { int(1) } else { int(0) };
                self.apply(&Point3::new(c(0), c(1), c(2)))
            })
            .collect();
        crate::geom::bbox3(&corners).expect("eight corners")
    }

    /// Checks orientation and that the image is a surviving cell of
    /// `M_level`.
    pub fn check(&self) -> Result<()> {
        if !(is_axis(&self.u) && is_axis(&self.v) && is_axis(&self.w)) {
            return Err(Error::NotSurvivingCube("frame axes are not signed unit axes".into()));
        }
        if det3(&self.u, &self.v, &self.w) != 1 {
            return Err(Error::NotSurvivingCube("frame is not orientation preserving".into()));
        }
        let (lo, hi) = self.cube();
        let side = self.side();
        for i in 0..3 {
            if lo[i].is_negative() || hi[i] > Rational::one() {
                return Err(Error::NotSurvivingCube(format!("{lo:?} leaves the unit cube")));
            }
            if !(&lo[i] / &side).is_integer() {
                return Err(Error::NotSurvivingCube(format!("{lo:?} is not on the 3^-{} grid", self.level)));
            }
        }
        let center = Point3::lerp(&lo, &hi, &Rational::new(1.into(), 2.into()));
        if !point_in_sponge_stage(&center, self.level as usize)? {
            return Err(Error::NotSurvivingCube(format!(
                "cell at {lo:?} is removed by stage {}",
                self.level
            )));
        }
        Ok(())
    }
}

/// Knot placed in a sub-cube, with containment checked in `M_(level + k)`.
#[derive(Clone, Debug)]
pub struct CubeEmbedding {
    pub polyline: ClosedPolyline3,
    pub frame: Frame,
    pub stage: u32,
    pub segments_in_stage: Vec<bool>,
}

impl CubeEmbedding {
    pub fn ok(&self) -> bool {
        self.segments_in_stage.iter().all(|&b| b)
    }
}

pub fn embed_into_cube(d: &GridDiagram, frame: &Frame, k: Option<u32>) -> Result<CubeEmbedding> {
    frame.check()?;
    let (unit, report) = embed_grid(d, k)?;
    let polyline = unit.map(|p| frame.apply(p));
    let stage = frame.level + report.stage;
    let segments_in_stage = containment(&polyline, stage as usize);
    Ok(CubeEmbedding {
        polyline,
        frame: frame.clone(),
        stage,
        segments_in_stage,
    })
}

/// The marked segment of a polyline as an axis segment.
pub fn mark_segment(p: &ClosedPolyline3, label: &str) -> Option<AxisSegment> {
    let i = p.mark(label)?;
    let (a, b) = p.segment(i);
    AxisSegment::from_points(a, b)
}

/// True when every coordinate of every vertex is zero or has a
/// denominator dividing `3^k`.
pub fn on_grid(p: &ClosedPolyline3, k: u32) -> bool {
    let den = crate::geom::pow3(k);
    p.vertices()
        .iter()
        .all(|v| (0..3).all(|i| v[i].is_zero() || (&den % v[i].denom()).is_zero()))
}
