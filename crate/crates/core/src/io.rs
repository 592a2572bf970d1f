//! Versioned JSON documents, viewer exports and re-verification of stored
//! artifacts.
//!
//! Rationals are written as `"num/den"` strings. OBJ and PLY carry decimal
//! approximations and say so in a banner comment.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::embed::containment;
use crate::error::{Error, Result};
use crate::geom::{fmt_rat, to_f64, Point3, Rational};
use crate::grid::GridDiagram;
use crate::invariants::{is_simple, project_collapsing};
use crate::necklace::{disjoint, pearl_count, strictly_inside, Necklace, Pearl};
use crate::polyline::{ClosedPolyline3, Mark};
use crate::wildknot::{site_count, SummandRecord};

pub const SCHEMA: &str = "v1";

pub type RatStr = String;

pub fn parse_rat(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Schema(format!("bad rational `{s}`")))
}

fn point_json(p: &Point3) -> [RatStr; 3] {
    [fmt_rat(&p[0]), fmt_rat(&p[1]), fmt_rat(&p[2])]
}

fn point_from(p: &[RatStr; 3]) -> Result<Point3> {
    Ok(Point3::new(parse_rat(&p[0])?, parse_rat(&p[1])?, parse_rat(&p[2])?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolylineJson {
    pub vertices: Vec<[RatStr; 3]>,
    #[serde(default)]
    pub marks: BTreeMap<String, usize>,
}

impl PolylineJson {
    pub fn from_polyline(p: &ClosedPolyline3) -> Self {
        PolylineJson {
            vertices: p.vertices().iter().map(point_json).collect(),
            marks: p.marks().iter().map(|m| (m.label.clone(), m.segment)).collect(),
        }
    }

    /// Parses without structural validation so that checks can name defects.
    pub fn to_polyline(&self) -> Result<ClosedPolyline3> {
        let v = self.vertices.iter().map(point_from).collect::<Result<Vec<_>>>()?;
        let n = v.len();
        let mut p = ClosedPolyline3::new_unchecked(v);
        let marks = self
            .marks
            .iter()
            .map(|(label, &segment)| {
                if segment >= n {
                    return Err(Error::Schema(format!("mark `{label}` on missing edge {segment}")));
                }
                Ok(Mark {
                    label: label.clone(),
                    segment,
                })
            })
            .collect::<Result<_>>()?;
        p.set_marks(marks);
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PearlJson {
    pub center: [RatStr; 3],
    pub radius_sq: RatStr,
    pub word: Vec<usize>,
}

impl PearlJson {
    pub fn from_pearl(p: &Pearl) -> Self {
        PearlJson {
            center: point_json(&p.center),
            radius_sq: fmt_rat(&p.radius_sq),
            word: p.word.clone(),
        }
    }

    pub fn to_pearl(&self) -> Result<Pearl> {
        if self.word.is_empty() {
            return Err(Error::Schema("pearl with empty word".into()));
        }
        Ok(Pearl {
            center: point_from(&self.center)?,
            radius_sq: parse_rat(&self.radius_sq)?,
            word: self.word.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerJson {
    pub stage: u32,
    pub index: usize,
    pub knot: String,
    pub nontrivial: bool,
    pub mirrored: bool,
    pub spliced: bool,
    pub cube: [[RatStr; 3]; 2],
}

impl LedgerJson {
    pub fn from_record(r: &SummandRecord) -> Self {
        LedgerJson {
            stage: r.stage,
            index: r.index,
            knot: r.knot.clone(),
            nontrivial: r.nontrivial,
            mirrored: r.mirrored,
            spliced: r.spliced,
            cube: [point_json(&r.cube.0), point_json(&r.cube.1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Polyline {
        polyline: PolylineJson,
    },
    Embed {
        knot: String,
        grid: GridDiagram,
        stage: u32,
        polyline: PolylineJson,
    },
    Squareflake {
        m: u32,
        polyline: PolylineJson,
    },
    Wildknot {
        m: u32,
        stage: u32,
        ledger: Vec<LedgerJson>,
        polyline: PolylineJson,
    },
    Necklace {
        n: usize,
        generation: usize,
        knot: PolylineJson,
        /// All pearls of generations `0..=generation`, ordered by
        /// generation and then word.
        pearls: Vec<PearlJson>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    #[serde(flatten)]
    pub body: Body,
}

impl Document {
    pub fn new(body: Body) -> Self {
        Document {
            schema: SCHEMA.to_string(),
            body,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Document = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        if d.schema != SCHEMA {
            return Err(Error::Schema(format!("unsupported schema `{}`", d.schema)));
        }
        Ok(d)
    }
}

/// Wavefront OBJ: one vertex record per vertex and a closed line element.
pub fn to_obj(p: &ClosedPolyline3) -> String {
    let mut s = String::from("# lossy: decimal approximations of exact rational coordinates\n");
    for v in p.vertices() {
        let _ = writeln!(s, "v {} {} {}", to_f64(&v[0]), to_f64(&v[1]), to_f64(&v[2]));
    }
    s.push('l');
    for i in 1..=p.len() {
        let _ = write!(s, " {i}");
    }
    s.push_str(" 1\n");
    s
}

/// ASCII PLY point cloud.
pub fn to_ply(points: &[Point3]) -> String {
    let mut s = String::from("ply\nformat ascii 1.0\ncomment lossy: decimal approximations of exact rational coordinates\n");
    let _ = writeln!(s, "element vertex {}", points.len());
    s.push_str("property double x\nproperty double y\nproperty double z\nend_header\n");
    for v in points {
        let _ = writeln!(s, "{} {} {}", to_f64(&v[0]), to_f64(&v[1]), to_f64(&v[2]));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Outcome of re-running the checks that apply to a document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub kind: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

fn simplicity(p: &ClosedPolyline3) -> Check {
    match is_simple(p) {
        Ok(true) => Check::new("simplicity", true, "simple"),
        Ok(false) => {
            let pair = crate::invariants::first_self_intersection(p).ok().flatten();
            Check::new("simplicity", false, format!("edges {pair:?} intersect"))
        }
        Err(e) => Check::new("simplicity", false, e.to_string()),
    }
}

fn contained(p: &ClosedPolyline3, k: u32) -> Check {
    if p.check().is_err() {
        return Check::new("containment", false, "polyline is degenerate");
    }
    let bad: Vec<usize> = containment(p, k as usize)
        .iter()
        .enumerate()
        .filter(|(_, &ok)| !ok)
        .map(|(i, _)| i)
        .collect();
    let detail = if bad.is_empty() {
        format!("all {} edges in M_{k}", p.len())
    } else {
        format!("edges {bad:?} leave M_{k}")
    };
    Check::new("containment", bad.is_empty(), detail)
}

fn necklace_checks(n: usize, generation: usize, knot: &ClosedPolyline3, pearls: &[Pearl]) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut levels: Vec<Vec<&Pearl>> = vec![Vec::new(); generation + 1];
    for p in pearls {
        if p.generation() <= generation {
            levels[p.generation()].push(p);
        }
    }
    let counts_ok = levels
        .iter()
        .enumerate()
        .all(|(g, l)| l.len() as u64 == pearl_count(n as u64, g as u32))
        && levels.iter().map(Vec::len).sum::<usize>() == pearls.len();
    checks.push(Check::new(
        "pearl count",
        counts_ok,
        format!("{:?}", levels.iter().map(Vec::len).collect::<Vec<_>>()),
    ));
    let base = Necklace {
        n,
        pearls: levels[0].iter().map(|&p| p.clone()).collect(),
        knot: knot.clone(),
    };
    checks.push(match base.validate() {
        Ok(()) => Check::new("generation 0", true, "disjoint pearls centered on the knot"),
        Err(e) => Check::new("generation 0", false, e.to_string()),
    });
    let by_word: HashMap<&[usize], &Pearl> = pearls.iter().map(|p| (p.word.as_slice(), p)).collect();
    let nest_fail = pearls.iter().find(|p| {
        p.parent_word()
            .is_some_and(|w| by_word.get(w).is_none_or(|parent| !strictly_inside(p, parent)))
    });
    checks.push(Check::new(
        "nesting",
        nest_fail.is_none(),
        match nest_fail {
            None => "every pearl strictly inside its parent".to_string(),
            Some(p) => format!("pearl {:?} not strictly inside its parent", p.word),
        },
    ));
    let mut families: HashMap<&[usize], Vec<&Pearl>> = HashMap::new();
    for p in pearls {
        if let Some(w) = p.parent_word() {
            families.entry(w).or_default().push(p);
        }
    }
    let sib_fail = families.values().find_map(|f| {
        f.iter().enumerate().find_map(|(i, a)| {
            f[i + 1..]
                .iter()
                .find(|b| !disjoint(a, b))
                .map(|b| (a.word.clone(), b.word.clone()))
        })
    });
    checks.push(Check::new(
        "sibling disjointness",
        sib_fail.is_none(),
        match sib_fail {
            None => "siblings pairwise disjoint".to_string(),
            Some((a, b)) => format!("pearls {a:?} and {b:?} intersect"),
        },
    ));
    checks
}

/// Re-runs all checks applicable to the document.
pub fn verify(doc: &Document) -> Result<Report> {
    let (kind, checks) = match &doc.body {
        Body::Polyline { polyline } => {
            let p = polyline.to_polyline()?;
            ("polyline", vec![simplicity(&p)])
        }
        Body::Squareflake { m, polyline } => {
            let p = polyline.to_polyline()?;
            let expect = crate::squareflake::vertex_count(*m);
            (
                "squareflake",
                vec![
                    simplicity(&p),
                    contained(&p, *m),
                    Check::new(
                        "vertex count",
                        p.len() == expect,
                        format!("{} vertices, expected {expect}", p.len()),
                    ),
                ],
            )
        }
        Body::Embed {
            grid, stage, polyline, ..
        } => {
            let p = polyline.to_polyline()?;
            let mut checks = vec![simplicity(&p), contained(&p, *stage)];
            let want = grid.to_planar().knot_diagram().and_then(|d| d.determinant());
            let dir = Point3::from_ratios([(0, 1), (0, 1), (1, 1)]);
            let got = if checks[0].pass {
                project_collapsing(&p, &dir).and_then(|d| d.determinant())
            } else {
                Err(Error::NotAKnot("not simple".into()))
            };
            checks.push(match (want, got) {
                (Ok(w), Ok(g)) => Check::new("determinant", w == g, format!("projection {g}, grid {w}")),
                (w, g) => Check::new("determinant", false, format!("grid {w:?}, projection {g:?}")),
            });
            ("embed", checks)
        }
        Body::Wildknot {
            m,
            stage,
            ledger,
            polyline,
        } => {
            let p = polyline.to_polyline()?;
            let mut per_stage = vec![0u64; *m as usize + 1];
            for r in ledger {
                if r.stage <= *m {
                    per_stage[r.stage as usize] += 1;
                }
            }
            let counts_ok = (1..=*m).all(|q| per_stage[q as usize] == site_count(q));
            (
                "wildknot",
                vec![
                    simplicity(&p),
                    contained(&p, *stage),
                    Check::new("ledger", counts_ok, format!("summands per stage {per_stage:?}")),
                ],
            )
        }
        Body::Necklace {
            n,
            generation,
            knot,
            pearls,
        } => {
            let k = knot.to_polyline()?;
            let pearls = pearls.iter().map(PearlJson::to_pearl).collect::<Result<Vec<_>>>()?;
            ("necklace", necklace_checks(*n, *generation, &k, &pearls))
        }
    };
    Ok(Report {
        kind: kind.to_string(),
        checks,
    })
}

/// Flattens iterated generations into the document order.
pub fn necklace_document(t: &Necklace, levels: &[Vec<Pearl>]) -> Document {
    Document::new(Body::Necklace {
        n: t.n,
        generation: levels.len().saturating_sub(1),
        knot: PolylineJson::from_polyline(&t.knot),
        pearls: levels.iter().flatten().map(PearlJson::from_pearl).collect(),
    })
}

/// True when `s` parses to a positive rational.
pub fn positive_rat(s: &str) -> Result<Rational> {
    let q = parse_rat(s)?;
    if q <= Rational::zero() {
        return Err(Error::Schema(format!("`{s}` is not positive")));
    }
    Ok(q)
}
