//! Squareflake curves: the boundary of the unit square on `z = 0`, with the
//! middle thirds of the right edge recursively pushed into the face.

use std::collections::BTreeSet;

use crate::geom::{int, third_pow, Point3, Rational};
use crate::polyline::ClosedPolyline3;
use crate::ternary::{Axis, AxisSegment};

/// One middle-third replacement: the removed open interval on the right edge
/// and the three-segment path (four points, top to bottom) replacing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detour {
    pub stage: u32,
    pub removed: AxisSegment,
    pub path: [Point3; 4],
}

impl Detour {
    /// Lower `y` of the replaced interval.
    pub fn bottom(&self) -> &Rational {
        &self.removed.lo
    }

    /// Side length of the square bounded by the detour and the edge.
    pub fn size(&self) -> Rational {
        self.removed.length()
    }
}

#[derive(Clone, Debug)]
pub struct SquareflakeStage {
    pub m: u32,
    pub polyline: ClosedPolyline3,
    /// All detours of stages `1..=m`, ordered by stage and then by `y`.
    pub replaced: Vec<Detour>,
}

impl SquareflakeStage {
    pub fn detours_at(&self, stage: u32) -> impl Iterator<Item = &Detour> + '_ {
        self.replaced.iter().filter(move |d| d.stage == stage)
    }
}

fn pt(x: Rational, y: Rational) -> Point3 {
    Point3::new(x, y, int(0))
}

/// Emits the right edge on `[a, a + len]` from top to bottom, detouring
/// middle thirds at levels `level..=m`.
fn right_edge(a: &Rational, len: &Rational, level: u32, m: u32, out: &mut Vec<Point3>, det: &mut Vec<Detour>) {
    if level > m {
        return;
    }
    let third = len / int(3);
    let lo = a + &third;
    let hi = &lo + &third;
    right_edge(&hi, &third, level + 1, m, out, det);
    let inner = int(1) - third_pow(level);
    let path = [
        pt(int(1), hi.clone()),
        pt(inner.clone(), hi.clone()),
        pt(inner, lo.clone()),
        pt(int(1), lo.clone()),
    ];
    out.extend(path.iter().cloned());
    det.push(Detour {
        stage: level,
        removed: AxisSegment::new(Axis::Y, [int(1), int(0)], lo, hi),
        path,
    });
    right_edge(a, &third, level + 1, m, out, det);
}

pub fn squareflake(m: u32) -> SquareflakeStage {
    let mut v = vec![pt(int(0), int(0)), pt(int(0), int(1)), pt(int(1), int(1))];
    let mut replaced = Vec::new();
    right_edge(&int(0), &int(1), 1, m, &mut v, &mut replaced);
    v.push(pt(int(1), int(0)));
    replaced.sort_by(|p, q| (p.stage, &p.removed.lo).cmp(&(q.stage, &q.removed.lo)));
    SquareflakeStage {
        m,
        polyline: ClosedPolyline3::new(v).expect("squareflake vertices are distinct"),
        replaced,
    }
}

/// Number of middle thirds replaced at stage `m ≥ 1`.
pub fn replaced_count(m: u32) -> u64 {
    assert!(m >= 1);
    1 << (m - 1)
}

pub fn vertex_count(m: u32) -> usize {
    4 + 4 * ((1usize << m) - 1)
}

type Seg = (Point3, Point3);

fn normalized(a: &Point3, b: &Point3) -> Seg {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Segments of `S_(m-1)` with the open stage-`m` middle thirds removed, and
/// segments of `S_m` outside the stage-`m` detours. Equal sets mean the two
/// stages coincide away from the replaced intervals.
pub fn unchanged_segments(m: u32) -> (BTreeSet<Seg>, BTreeSet<Seg>) {
    assert!(m >= 1);
    let prev = squareflake(m - 1);
    let cur = squareflake(m);
    let holes: Vec<&AxisSegment> = cur.detours_at(m).map(|d| &d.removed).collect();

    let mut before = BTreeSet::new();
    for (a, b) in prev.polyline.segments() {
        let Some(s) = AxisSegment::from_points(a, b).filter(|s| s.axis == Axis::Y && s.fixed == [int(1), int(0)])
        else {
            before.insert(normalized(a, b));
            continue;
        };
        let mut lo = s.lo.clone();
        let mut inside: Vec<&&AxisSegment> = holes.iter().filter(|h| s.contains(h)).collect();
        inside.sort_by(|p, q| p.lo.cmp(&q.lo));
        for h in inside {
            before.insert(normalized(&s.point_at(&lo), &s.point_at(&h.lo)));
            lo = h.hi.clone();
        }
        before.insert(normalized(&s.point_at(&lo), &s.point_at(&s.hi)));
    }

    let detour_segments: BTreeSet<Seg> = cur
        .detours_at(m)
        .flat_map(|d| (0..3).map(move |i| normalized(&d.path[i], &d.path[i + 1])))
        .collect();
    let after = cur
        .polyline
        .segments()
        .map(|(a, b)| normalized(a, b))
        .filter(|s| !detour_segments.contains(s))
        .collect();
    (before, after)
}
