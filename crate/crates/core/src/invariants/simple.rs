use rayon::prelude::*;

use crate::error::Result;
use crate::geom::{bbox3, intersect3, Hit, Point3, Rational};
use crate::polyline::ClosedPolyline3;

use num_traits::{One, Zero};

struct Boxed<'a> {
    index: usize,
    a: &'a Point3,
    b: &'a Point3,
    lo: Point3,
    hi: Point3,
}

fn boxes_overlap(p: &Boxed<'_>, q: &Boxed<'_>) -> bool {
    (0..3).all(|i| p.lo[i] <= q.hi[i] && q.lo[i] <= p.hi[i])
}

/// Whether the intersection of segments `i < j` is allowed in a simple
/// closed polyline with `n` edges.
fn allowed(i: usize, j: usize, n: usize, hit: &Hit) -> bool {
    let (one, zero) = (Rational::one(), Rational::zero());
    if j == i + 1 {
        matches!(hit, Hit::Point { t, s } if *t == one && *s == zero)
    } else if i == 0 && j == n - 1 {
        matches!(hit, Hit::Point { t, s } if *t == zero && *s == one)
    } else {
        *hit == Hit::None
    }
}

/// The first pair of edges `(i, j)` whose intersection violates simplicity,
/// or `None` for a simple curve. Errors on zero-length edges.
///
/// Candidate pairs come from a sweep over x-extents; every candidate is then
/// decided by an exact segment–segment test.
pub fn first_self_intersection(p: &ClosedPolyline3) -> Result<Option<(usize, usize)>> {
    p.check()?;
    let n = p.len();
    let mut boxes: Vec<Boxed<'_>> = (0..n)
        .map(|index| {
            let (a, b) = p.segment(index);
            let (lo, hi) = bbox3([a, b]).expect("two points");
            Boxed { index, a, b, lo, hi }
        })
        .collect();
    boxes.sort_by(|p, q| p.lo[0].cmp(&q.lo[0]));
    let found = (0..n)
        .into_par_iter()
        .filter_map(|k| {
            let p = &boxes[k];
            boxes[k + 1..]
                .iter()
                .take_while(|q| q.lo[0] <= p.hi[0])
                .filter(|q| boxes_overlap(p, q))
                .find_map(|q| {
                    let (i, j, si, sj) = if p.index < q.index {
                        (p.index, q.index, p, q)
                    } else {
                        (q.index, p.index, q, p)
                    };
                    let hit = intersect3(si.a, si.b, sj.a, sj.b);
                    (!allowed(i, j, n, &hit)).then_some((i, j))
                })
        })
        .min();
    if found.is_some() {
        return Ok(found);
    }
    // Adjacent edges always overlap in their boxes, so a missing shared vertex
    // cannot slip through; the sweep is complete.
    Ok(None)
}

/// True iff the closed polyline is embedded: non-adjacent edges are disjoint
/// and adjacent edges meet only in their shared vertex.
pub fn is_simple(p: &ClosedPolyline3) -> Result<bool> {
    Ok(first_self_intersection(p)?.is_none())
}
