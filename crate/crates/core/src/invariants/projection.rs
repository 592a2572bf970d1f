use num_traits::Zero;

use super::diagram::{KnotDiagram, Source};
use crate::error::{Error, Result};
use crate::geom::{rat, Point2, Point3, Rational};
use crate::polyline::ClosedPolyline3;

/// Orthonormal-up-to-scale basis `(u, v)` of the plane orthogonal to `d`,
/// with `v = d × u`.
fn basis(d: &Point3) -> (Point3, Point3) {
    let z = Rational::zero();
    let u = if !d[2].is_zero() {
        Point3::new(d[2].clone(), z.clone(), -d[0].clone())
    } else if !d[1].is_zero() {
        Point3::new(d[1].clone(), -d[0].clone(), z)
    } else {
        Point3::new(z.clone(), Rational::from_integer(1.into()), z)
    };
    let v = d.cross(&u);
    (u, v)
}

fn to_plane(p: &Point3, u: &Point3, v: &Point3) -> Point2 {
    Point2::new(p.dot(u), p.dot(v))
}

fn build(p: &ClosedPolyline3, dir: &Point3, collapse: bool) -> Result<KnotDiagram> {
    if dir.is_zero() {
        return Err(Error::NonGeneric("zero projection direction".into()));
    }
    p.check()?;
    let (u, v) = basis(dir);
    let mut kept: Vec<(&Point3, &Point3)> = Vec::with_capacity(p.len());
    for (i, (a, b)) in p.segments().enumerate() {
        if (b - a).cross(dir).is_zero() {
            if collapse {
                continue;
            }
            return Err(Error::NonGeneric(format!(
                "edge {i} is parallel to the projection direction"
            )));
        }
        kept.push((a, b));
    }
    if kept.len() < 3 {
        return Err(Error::NonGeneric(format!(
            "only {} edges survive projection",
            kept.len()
        )));
    }
    let pts: Vec<Point2> = kept.iter().map(|(a, _)| to_plane(a, &u, &v)).collect();
    KnotDiagram::from_planar(
        &pts,
        |seg, t| {
            let (a, b) = kept[seg];
            Point3::lerp(a, b, t).dot(dir)
        },
        Source::Projection,
    )
}

/// Orthogonal projection along `dir`; points with smaller `p·dir` pass over.
/// Fails if any edge is parallel to `dir` or the projection is not generic.
pub fn project(p: &ClosedPolyline3, dir: &Point3) -> Result<KnotDiagram> {
    build(p, dir, false)
}

/// Like [`project`], but edges parallel to `dir` collapse to points and are
/// dropped. Suited to axis projections of grid-like curves whose connectors
/// run along the viewing axis.
pub fn project_collapsing(p: &ClosedPolyline3, dir: &Point3) -> Result<KnotDiagram> {
    build(p, dir, true)
}

fn primes() -> impl Iterator<Item = i64> {
    (2i64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Deterministic sequence of directions `(1, 1/p, 1/q)` over primes `p < q`,
/// ordered by `q` and then `p`.
pub fn generic_directions() -> impl Iterator<Item = Point3> {
    primes().flat_map(|q| {
        primes()
            .take_while(move |&p| p < q)
            .map(move |p| Point3::new(rat(1, 1), rat(1, p), rat(1, q)))
            .collect::<Vec<_>>()
    })
}

/// First of the `tries` directions of [`generic_directions`] giving a
/// generic projection.
pub fn project_generic(p: &ClosedPolyline3, tries: usize) -> Result<(Point3, KnotDiagram)> {
    let mut last = Error::NonGeneric("no direction tried".into());
    for d in generic_directions().take(tries) {
        match project(p, &d) {
            Ok(k) => return Ok((d, k)),
            Err(e @ Error::NonGeneric(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(i64, i64, i64)]) -> ClosedPolyline3 {
        ClosedPolyline3::new(
            pts.iter()
                .map(|&(x, y, z)| Point3::from_ratios([(x, 1), (y, 1), (z, 1)]))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn directions_start_with_small_primes() {
        let d: Vec<Point3> = generic_directions().take(3).collect();
        assert_eq!(d[0], Point3::from_ratios([(1, 1), (1, 2), (1, 3)]));
        assert_eq!(d[1], Point3::from_ratios([(1, 1), (1, 2), (1, 5)]));
        assert_eq!(d[2], Point3::from_ratios([(1, 1), (1, 3), (1, 5)]));
    }

    #[test]
    fn planar_curve_along_normal_has_no_crossings() {
        let p = poly(&[(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]);
        let d = project(&p, &Point3::from_ratios([(0, 1), (0, 1), (1, 1)])).unwrap();
        assert_eq!(d.crossing_count(), 0);
    }

    #[test]
    fn parallel_edge_is_rejected() {
        let p = poly(&[(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]);
        let r = project(&p, &Point3::from_ratios([(1, 1), (0, 1), (0, 1)]));
        assert!(matches!(r, Err(Error::NonGeneric(_))));
    }

    #[test]
    fn basis_is_orthogonal() {
        for d in generic_directions().take(10) {
            let (u, v) = basis(&d);
            assert!(u.dot(&d).is_zero() && v.dot(&d).is_zero() && u.dot(&v).is_zero());
        }
    }
}
