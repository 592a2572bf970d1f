//! Staged connected sums along the squareflake curve.
//!
//! Every square added to the squareflake at stage `m` offers three splice
//! sites, the middle thirds of its bottom, left and top sides. A site's cube
//! has side `3^-(m+1)`, lies inside the square and has the site segment as an
//! edge.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;

use crate::embed::{containment, embed_into_cube, mark_segment, stage_for, Frame, SPLICE_MARK};
use crate::error::{Error, Result};
use crate::geom::{bbox3, int, intersect3, point_on_segment, third_pow, Hit, Point3, Rational};
use crate::grid::{catalog, GridDiagram};
use crate::invariants::is_simple;
use crate::polyline::ClosedPolyline3;
use crate::squareflake::squareflake;
use crate::ternary::{expansions, Axis, AxisSegment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Bottom,
    Left,
    Top,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceSite {
    pub stage: u32,
    /// 0-based position within the stage: squares by increasing `y`, then
    /// bottom, left, top.
    pub index: usize,
    pub side: Side,
    pub segment: AxisSegment,
    pub frame: Frame,
}

impl SpliceSite {
    pub fn cube(&self) -> (Point3, Point3) {
        self.frame.cube()
    }
}

/// The three sites of the stage-`m` square `[1 − 3^-m, 1] × [c, c + 3^-m]`.
fn square_sites(m: u32, c: &Rational, first_index: usize) -> [SpliceSite; 3] {
    let l = third_pow(m);
    let t = third_pow(m + 1);
    let one = int(1);
    let x_in = &one - &l;
    let (x1, x2) = (&one - &t - &t, &one - &t);
    let z = int(0);
    let bottom = SpliceSite {
        stage: m,
        index: first_index,
        side: Side::Bottom,
        segment: AxisSegment::new(Axis::X, [c.clone(), z.clone()], x1.clone(), x2.clone()),
        frame: Frame {
            origin: Point3::new(x2.clone(), c.clone(), z.clone()),
            level: m + 1,
            u: [0, 1, 0],
            v: [-1, 0, 0],
            w: [0, 0, 1],
        },
    };
    let left = SpliceSite {
        stage: m,
        index: first_index + 1,
        side: Side::Left,
        segment: AxisSegment::new(Axis::Y, [x_in.clone(), z.clone()], c + &t, c + &t + &t),
        frame: Frame {
            origin: Point3::new(x_in, c + &t, z.clone()),
            level: m + 1,
            u: [1, 0, 0],
            v: [0, 1, 0],
            w: [0, 0, 1],
        },
    };
    let top_y = c + &l;
    let top = SpliceSite {
        stage: m,
        index: first_index + 2,
        side: Side::Top,
        segment: AxisSegment::new(Axis::X, [top_y.clone(), z.clone()], x1.clone(), x2),
        frame: Frame {
            origin: Point3::new(x1, top_y, z),
            level: m + 1,
            u: [0, -1, 0],
            v: [1, 0, 0],
            w: [0, 0, 1],
        },
    };
    [bottom, left, top]
}

/// Splice sites of stage `m ≥ 1`: `3·2^(m−1)` of them.
pub fn sites(m: u32) -> Vec<SpliceSite> {
    assert!(m >= 1, "sites start at stage 1");
    let s = squareflake(m);
    s.detours_at(m)
        .enumerate()
        .flat_map(|(k, d)| square_sites(m, d.bottom(), 3 * k))
        .collect()
}

pub fn site_count(m: u32) -> u64 {
    3 << (m - 1)
}

/// The middle third of the left edge, with a cube of `M_1` inside the square.
pub fn base_site() -> SpliceSite {
    let (a, b) = (third_pow(1), int(2) * third_pow(1));
    SpliceSite {
        stage: 0,
        index: 0,
        side: Side::Left,
        segment: AxisSegment::new(Axis::Y, [int(0), int(0)], a.clone(), b),
        frame: Frame::translate(Point3::new(int(0), a, int(0)), 1),
    }
}

/// Flat unknotted rectangle in local coordinates, marked on its edge along
/// the site segment.
pub fn trivial_summand(frame: &Frame) -> ClosedPolyline3 {
    let r = |x: i64, y: i64| Point3::new(Rational::new(x.into(), 3.into()), Rational::new(y.into(), 3.into()), int(0));
    let local = ClosedPolyline3::new(vec![r(0, 1), r(1, 1), r(1, 2), r(0, 2)])
        .expect("rectangle")
        .with_mark(SPLICE_MARK, 3);
    local.map(|p| frame.apply(p))
}

fn overlap_on(m: (&Point3, &Point3), hit: &Hit, a: &Point3, b: &Point3) -> bool {
    match hit {
        Hit::None => true,
        Hit::Point { t, .. } => point_on_segment(&Point3::lerp(a, b, t), m.0, m.1),
        Hit::Overlap { t0, t1 } => {
            point_on_segment(&Point3::lerp(a, b, t0), m.0, m.1) && point_on_segment(&Point3::lerp(a, b, t1), m.0, m.1)
        }
    }
}

/// Connected sum of `base` with `summand` along the summand's marked
/// segment, which must lie inside `site` and on one edge of `base`. The
/// result follows `base`'s orientation and carries no marks.
pub fn splice(base: &ClosedPolyline3, site: &AxisSegment, summand: &ClosedPolyline3) -> Result<ClosedPolyline3> {
    let mi = summand
        .mark(SPLICE_MARK)
        .ok_or_else(|| Error::Splice("summand has no splice mark".into()))?;
    let mark = mark_segment(summand, SPLICE_MARK).ok_or_else(|| Error::Splice("mark is not axis-aligned".into()))?;
    if !site.contains(&mark) {
        return Err(Error::Splice(format!("mark {mark:?} not inside site {site:?}")));
    }
    let (t0, t1) = site.endpoints();
    let e = base
        .segments()
        .position(|(a, b)| point_on_segment(&t0, a, b) && point_on_segment(&t1, a, b))
        .ok_or_else(|| Error::Splice(format!("site {site:?} is not on the base curve")))?;
    let (m0, m1) = summand.segment(mi);

    let (slo, shi) = bbox3(summand.vertices()).expect("nonempty");
    let bad = base.segments().enumerate().find_map(|(i, (a, b))| {
        let (lo, hi) = bbox3([a, b]).expect("two points");
        if (0..3).any(|k| hi[k] < slo[k] || shi[k] < lo[k]) {
            return None;
        }
        summand.segments().find_map(|(c, d)| {
            let hit = intersect3(a, b, c, d);
            (!overlap_on((m0, m1), &hit, a, b)).then_some(i)
        })
    });
    if let Some(i) = bad {
        return Err(Error::Splice(format!("summand meets base edge {i} outside the mark")));
    }

    let (a, b) = base.segment(e);
    // order the mark endpoints along a → b
    let toward_b = (m1 - m0).dot(&(b - a)) > Rational::zero();
    let n = summand.len();
    let path: Vec<Point3> = if toward_b {
        // enter at m0, leave at m1: walk m0, m0-1, …, m1
        (0..n).map(|k| summand.vertices()[(mi + n - k) % n].clone()).collect()
    } else {
        // enter at m1, leave at m0: walk m1, m1+1, …, m0
        (0..n).map(|k| summand.vertices()[(mi + 1 + k) % n].clone()).collect()
    };
    let mut v: Vec<Point3> = base.vertices()[..=e].to_vec();
    for p in path {
        if v.last() != Some(&p) {
            v.push(p);
        }
    }
    let rest = &base.vertices()[e + 1..];
    if rest.first().is_some_and(|q| v.last() == Some(q)) {
        v.extend_from_slice(&rest[1..]);
    } else {
        v.extend_from_slice(rest);
    }
    if v.last() == v.first() {
        v.pop();
    }
    ClosedPolyline3::new(v)
}

/// A knot placed at a site, or the unknot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summand {
    Trivial,
    Knot {
        name: String,
        grid: GridDiagram,
        mirrored: bool,
    },
}

impl Summand {
    pub fn named(name: &str) -> Result<Self> {
        if name == "trivial" {
            return Ok(Summand::Trivial);
        }
        Ok(Summand::Knot {
            name: name.to_string(),
            grid: catalog(name)?,
            mirrored: false,
        })
    }

    pub fn mirror(&self) -> Self {
        match self {
            Summand::Trivial => Summand::Trivial,
            Summand::Knot { name, grid, mirrored } => Summand::Knot {
                name: name.clone(),
                grid: grid.mirror(),
                mirrored: !mirrored,
            },
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Summand::Trivial)
    }

    pub fn label(&self) -> String {
        match self {
            Summand::Trivial => "trivial".into(),
            Summand::Knot { name, mirrored: false, .. } => name.clone(),
            Summand::Knot { name, mirrored: true, .. } => format!("{name}*"),
        }
    }
}

/// Knot choice for every site of stages `1..=m`, plus an optional summand on
/// the base site of the left edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotAssignment {
    pub m: u32,
    pub base: Option<Summand>,
    pub sites: BTreeMap<(u32, usize), Summand>,
}

impl KnotAssignment {
    pub fn uniform(m: u32, s: &Summand) -> Self {
        let sites = (1..=m)
            .flat_map(|q| (0..site_count(q) as usize).map(move |i| (q, i)))
            .map(|key| (key, s.clone()))
            .collect();
        KnotAssignment { m, base: None, sites }
    }

    pub fn trivial(m: u32) -> Self {
        Self::uniform(m, &Summand::Trivial)
    }

    pub fn get(&self, stage: u32, index: usize) -> Result<&Summand> {
        self.sites
            .get(&(stage, index))
            .ok_or_else(|| Error::Splice(format!("no assignment for site ({stage}, {index})")))
    }

    pub fn nontrivial_sites(&self) -> BTreeSet<(u32, usize)> {
        self.sites
            .iter()
            .filter(|(_, s)| !s.is_trivial())
            .map(|(&k, _)| k)
            .collect()
    }
}

/// The Cantor-set digits (0 or 2) of `y` from the expansion avoiding 1.
fn cantor_digits(y: &Rational, m: u32) -> Result<Vec<u8>> {
    let e = expansions(y)?
        .into_iter()
        .find(|e| !e.has_one())
        .ok_or_else(|| Error::TargetNotInCantor(crate::geom::fmt_rat(y)))?;
    Ok((0..m as usize).map(|i| e.digit(i)).collect())
}

/// The stage-`q` site adjacent to the stage-`q` Cantor interval of the
/// target with digits `d`.
fn adjacent_site(d: &[u8], q: u32) -> usize {
    let rank = d[..q as usize - 1]
        .iter()
        .fold(0usize, |acc, &x| 2 * acc + usize::from(x == 2));
    3 * rank + if d[q as usize - 1] == 0 { 0 } else { 2 }
}

/// Assignment with `knot` at every site adjacent to the Cantor interval of
/// a target, at every stage `1..=m`, and trivial elsewhere. Targets are
/// `y`-coordinates on the right edge `x = 1, z = 0`.
pub fn wild_set_plan(targets: &[Rational], knot: &Summand, m: u32) -> Result<KnotAssignment> {
    let mut plan = KnotAssignment::trivial(m);
    for y in targets {
        let d = cantor_digits(y, m)?;
        for q in 1..=m {
            plan.sites.insert((q, adjacent_site(&d, q)), knot.clone());
        }
    }
    Ok(plan)
}

/// Assignment matching a necklace iteration: `knot` on the base site, its
/// mirror at odd stages and `knot` again at even stages.
pub fn parity_plan(knot: &Summand, m: u32) -> KnotAssignment {
    let mut plan = KnotAssignment::trivial(m);
    plan.base = Some(knot.clone());
    for ((q, _), s) in plan.sites.iter_mut() {
        *s = if q % 2 == 1 { knot.mirror() } else { knot.clone() };
    }
    plan
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandRecord {
    pub stage: u32,
    pub index: usize,
    pub knot: String,
    pub nontrivial: bool,
    pub mirrored: bool,
    pub spliced: bool,
    pub cube: (Point3, Point3),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct BuildOptions {
    /// Splice flat unknots at trivial sites instead of skipping them.
    pub splice_trivial: bool,
}

#[derive(Clone, Debug)]
pub struct Approximant {
    pub m: u32,
    pub polyline: ClosedPolyline3,
    /// One record per site (all stages), including skipped trivial ones.
    pub ledger: Vec<SummandRecord>,
    /// Sponge stage containing every segment.
    pub stage: u32,
}

struct Placed {
    site: SpliceSite,
    summand: Summand,
    curve: Option<(ClosedPolyline3, u32)>,
}

fn place(site: SpliceSite, summand: Summand, opts: BuildOptions) -> Result<Placed> {
    let curve = match &summand {
        Summand::Knot { grid, .. } => {
            let k = stage_for(grid.n + 1);
            let e = embed_into_cube(grid, &site.frame, Some(k))?;
            Some((e.polyline, e.stage))
        }
        Summand::Trivial if opts.splice_trivial => {
            site.frame.check()?;
            Some((trivial_summand(&site.frame), site.frame.level + 1))
        }
        Summand::Trivial => None,
    };
    Ok(Placed { site, summand, curve })
}

pub fn approximant(assign: &KnotAssignment, m: u32, opts: BuildOptions) -> Result<Approximant> {
    if assign.m < m {
        return Err(Error::Splice(format!("assignment covers stages up to {}, need {m}", assign.m)));
    }
    let mut jobs: Vec<(SpliceSite, Summand)> = Vec::new();
    if let Some(b) = &assign.base {
        jobs.push((base_site(), b.clone()));
    }
    for q in 1..=m {
        for s in sites(q) {
            let summand = assign.get(q, s.index)?.clone();
            jobs.push((s, summand));
        }
    }
    let placed: Vec<Placed> = jobs
        .into_par_iter()
        .map(|(s, k)| place(s, k, opts))
        .collect::<Result<_>>()?;

    let mut curve = squareflake(m).polyline;
    let mut stage = m;
    let mut ledger = Vec::with_capacity(placed.len());
    for p in placed {
        if let Some((summand, k)) = &p.curve {
            curve = splice(&curve, &p.site.segment, summand)?;
            stage = stage.max(*k);
        }
        let mirrored = matches!(p.summand, Summand::Knot { mirrored: true, .. });
        ledger.push(SummandRecord {
            stage: p.site.stage,
            index: p.site.index,
            knot: p.summand.label(),
            nontrivial: !p.summand.is_trivial(),
            mirrored,
            spliced: p.curve.is_some(),
            cube: p.site.cube(),
        });
    }
    Ok(Approximant {
        m,
        polyline: curve,
        ledger,
        stage,
    })
}

impl Approximant {
    pub fn is_simple(&self) -> Result<bool> {
        is_simple(&self.polyline)
    }

    pub fn containment(&self) -> Vec<bool> {
        containment(&self.polyline, self.stage as usize)
    }

    pub fn nontrivial_count(&self) -> usize {
        self.ledger.iter().filter(|r| r.nontrivial).count()
    }

    /// Number of ledger entries per stage `0..=m`.
    pub fn stage_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.m as usize + 1];
        for r in &self.ledger {
            c[r.stage as usize] += 1;
        }
        c
    }
}

fn box_dist_sq(p: &Point3, lo: &Point3, hi: &Point3) -> Rational {
    (0..3)
        .map(|i| {
            if p[i] < lo[i] {
                let d = &lo[i] - &p[i];
                &d * &d
            } else if p[i] > hi[i] {
                let d = &p[i] - &hi[i];
                &d * &d
            } else {
                Rational::zero()
            }
        })
        .fold(Rational::zero(), |a, b| a + b)
}

fn corners<'a>(lo: &'a Point3, hi: &'a Point3) -> impl Iterator<Item = Point3> + 'a {
    (0..8).map(move |m| {
        let pick = |i: usize| if m >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() };
        Point3::new(pick(0), pick(1), pick(2))
    })
}

/// Nontrivial summands whose cube lies inside the open ball of radius `r`
/// around `p`; decided exactly on squared distances.
pub fn neighborhood_census(a: &Approximant, p: &Point3, r: &Rational) -> usize {
    let r2 = r * r;
    a.ledger
        .iter()
        .filter(|rec| rec.nontrivial)
        .filter(|rec| corners(&rec.cube.0, &rec.cube.1).all(|c| c.dist_sq(p) < r2))
        .count()
}

/// Squared distance from `p` to the nearest nontrivial summand cube.
pub fn clearance_sq(a: &Approximant, p: &Point3) -> Option<Rational> {
    a.ledger
        .iter()
        .filter(|rec| rec.nontrivial)
        .map(|rec| box_dist_sq(p, &rec.cube.0, &rec.cube.1))
        .min()
}

/// Interiors of two closed boxes are disjoint.
pub fn interiors_disjoint(a: &(Point3, Point3), b: &(Point3, Point3)) -> bool {
    (0..3).any(|i| a.1[i] <= b.0[i] || b.1[i] <= a.0[i])
}
