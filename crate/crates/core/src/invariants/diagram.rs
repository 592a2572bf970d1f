use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::linalg::{abs_det, rank_mod};
use crate::error::{Error, Result};
use crate::geom::{intersect2, Hit, Point2, Rational};

/// Where a diagram came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Grid,
    Projection,
    Combinatorial,
}

/// A crossing between two passages of the Gauss code. `sign` is the sign of
/// `over_direction × under_direction` in the plane of the diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub over: usize,
    pub under: usize,
    pub sign: i8,
    pub point: Option<Point2>,
}

/// One passage of the knot through a crossing, in traversal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

/// Planar knot diagram stored as a signed Gauss code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotDiagram {
    crossings: Vec<Crossing>,
    gauss: Vec<Passage>,
    source: Source,
}

/// Which colour class of the checkerboard colouring is shaded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shading {
    Smaller,
    Larger,
}

/// Segment pair, parameters along each, and the crossing point.
type RawCrossing = (usize, usize, Rational, Rational, Point2);

impl KnotDiagram {
    pub fn unknot() -> Self {
        KnotDiagram {
            crossings: Vec::new(),
            gauss: Vec::new(),
            source: Source::Combinatorial,
        }
    }

    /// Builds a diagram from a signed Gauss code: `code` lists
    /// `(crossing, is_over)` in traversal order and `signs[c]` is the sign of
    /// crossing `c`.
    pub fn from_gauss(code: &[(usize, bool)], signs: &[i8]) -> Result<Self> {
        let c = signs.len();
        if code.len() != 2 * c {
            return Err(Error::NotAKnot(format!(
                "{} passages for {} crossings",
                code.len(),
                c
            )));
        }
        let mut over = vec![None; c];
        let mut under = vec![None; c];
        for (i, &(x, is_over)) in code.iter().enumerate() {
            if x >= c {
                return Err(Error::NotAKnot(format!("crossing {x} out of range")));
            }
            let slot = if is_over { &mut over[x] } else { &mut under[x] };
            if slot.replace(i).is_some() {
                return Err(Error::NotAKnot(format!("crossing {x} repeated")));
            }
        }
        let crossings = (0..c)
            .map(|x| {
                let (Some(o), Some(u)) = (over[x], under[x]) else {
                    return Err(Error::NotAKnot(format!("crossing {x} incomplete")));
                };
                if signs[x] == 0 {
                    return Err(Error::NotAKnot(format!("crossing {x} has sign 0")));
                }
                Ok(Crossing {
                    over: o,
                    under: u,
                    sign: signs[x].signum(),
                    point: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let gauss = code
            .iter()
            .map(|&(crossing, over)| Passage { crossing, over })
            .collect();
        let d = KnotDiagram {
            crossings,
            gauss,
            source: Source::Combinatorial,
        };
        d.faces()?;
        Ok(d)
    }

    /// Diagram of the closed planar polyline `pts`, where `depth(seg, t)` is
    /// the depth of the point at parameter `t` of edge `seg`; the smaller
    /// depth passes over.
    ///
    /// Non-adjacent edges may only cross transversally at interior points,
    /// adjacent edges may only share their common vertex, and no point of the
    /// plane may carry more than one crossing.
    pub fn from_planar<F>(pts: &[Point2], depth: F, source: Source) -> Result<Self>
    where
        F: Fn(usize, &Rational) -> Rational + Sync,
    {
        let n = pts.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        let seg = |i: usize| (&pts[i], &pts[(i + 1) % n]);
        for i in 0..n {
            let (a, b) = seg(i);
            if a == b {
                return Err(Error::DegenerateSegment(i));
            }
        }
        let boxes: Vec<(Rational, Rational, Rational, Rational)> = (0..n)
            .map(|i| {
                let (a, b) = seg(i);
                (
                    a[0].clone().min(b[0].clone()),
                    a[0].clone().max(b[0].clone()),
                    a[1].clone().min(b[1].clone()),
                    a[1].clone().max(b[1].clone()),
                )
            })
            .collect();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let found: Vec<Result<Option<RawCrossing>>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (bi, bj) = (&boxes[i], &boxes[j]);
                if bi.1 < bj.0 || bj.1 < bi.0 || bi.3 < bj.2 || bj.3 < bi.2 {
                    return Ok(None);
                }
                let (a, b) = seg(i);
                let (c, d) = seg(j);
                let hit = intersect2(a, b, c, d);
                let adjacent_next = j == i + 1;
                let adjacent_wrap = i == 0 && j == n - 1;
                match hit {
                    Hit::None => Ok(None),
                    Hit::Overlap { .. } => Err(Error::NonGeneric(format!(
                        "edges {i} and {j} overlap in projection"
                    ))),
                    Hit::Point { t, s } => {
                        let zero = Rational::zero();
                        let one: Rational = Rational::from_integer(1.into());
                        if adjacent_next && t == one && s == zero {
                            return Ok(None);
                        }
                        if adjacent_wrap && t == zero && s == one {
                            return Ok(None);
                        }
                        if adjacent_next || adjacent_wrap {
                            return Err(Error::NonGeneric(format!(
                                "adjacent edges {i} and {j} meet away from their common vertex"
                            )));
                        }
                        if t == zero || t == one || s == zero || s == one {
                            return Err(Error::NonGeneric(format!(
                                "a vertex of edge {i} or {j} projects onto the other edge"
                            )));
                        }
                        Ok(Some((i, j, t.clone(), s, Point2::lerp(a, b, &t))))
                    }
                }
            })
            .collect();
        let mut raw = Vec::new();
        for f in found {
            if let Some(x) = f? {
                raw.push(x);
            }
        }
        let mut seen: HashMap<&Point2, (usize, usize)> = HashMap::new();
        for (i, j, _, _, p) in &raw {
            if let Some((a, b)) = seen.insert(p, (*i, *j)) {
                return Err(Error::NonGeneric(format!(
                    "triple point: edges {a},{b} and {i},{j} cross at {p:?}"
                )));
            }
        }

        // passages: (segment, t, crossing, over)
        let mut passages: Vec<(usize, Rational, usize, bool)> = Vec::with_capacity(2 * raw.len());
        let mut crossings = Vec::with_capacity(raw.len());
        for (x, (i, j, t, s, p)) in raw.into_iter().enumerate() {
            let di = depth(i, &t);
            let dj = depth(j, &s);
            if di == dj {
                return Err(Error::NonGeneric(format!(
                    "edges {i} and {j} intersect in space at {p:?}"
                )));
            }
            let i_over = di < dj;
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            let ui = b - a;
            let uj = d - c;
            let (o, u) = if i_over { (&ui, &uj) } else { (&uj, &ui) };
            let sign = if o.cross(u).is_positive() { 1 } else { -1 };
            passages.push((i, t, x, i_over));
            passages.push((j, s, x, !i_over));
            crossings.push(Crossing {
                over: 0,
                under: 0,
                sign,
                point: Some(p),
            });
        }
        passages.sort_by(|p, q| (p.0, &p.1).cmp(&(q.0, &q.1)));
        let mut gauss = Vec::with_capacity(passages.len());
        for (k, (_, _, x, over)) in passages.into_iter().enumerate() {
            if over {
                crossings[x].over = k;
            } else {
                crossings[x].under = k;
            }
            gauss.push(Passage { crossing: x, over });
        }
        let d = KnotDiagram {
            crossings,
            gauss,
            source,
        };
        d.faces()?;
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn gauss(&self) -> &[Passage] {
        &self.gauss
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Signed Gauss code as `(crossing, is_over)` pairs.
    pub fn gauss_code(&self) -> Vec<(usize, bool)> {
        self.gauss.iter().map(|p| (p.crossing, p.over)).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.crossings.iter().map(|c| c.sign).collect()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// Mirror image: every crossing switched.
    pub fn mirror(&self) -> Self {
        let code: Vec<(usize, bool)> = self.gauss_code().into_iter().map(|(x, o)| (x, !o)).collect();
        let signs: Vec<i8> = self.signs().into_iter().map(|s| -s).collect();
        let mut d = Self::from_gauss(&code, &signs).expect("mirror of a valid diagram");
        d.source = self.source;
        d
    }

    /// Diagrammatic connected sum, joining the two codes at their base points.
    pub fn connected_sum(&self, other: &KnotDiagram) -> Self {
        let off = self.crossing_count();
        let mut code = self.gauss_code();
        code.extend(other.gauss_code().into_iter().map(|(x, o)| (x + off, o)));
        let mut signs = self.signs();
        signs.extend(other.signs());
        Self::from_gauss(&code, &signs).expect("sum of valid diagrams")
    }

    /// Arcs (over-strands between consecutive undercrossings). Returns for
    /// each crossing `(over_arc, incoming_arc, outgoing_arc)`.
    pub fn arcs(&self) -> Vec<(usize, usize, usize)> {
        let c = self.crossing_count();
        let len = self.gauss.len();
        let mut out = vec![(0, 0, 0); c];
        let Some(first) = self.gauss.iter().position(|p| !p.over) else {
            return out;
        };
        let mut arc = 0;
        for k in 1..=len {
            let p = self.gauss[(first + k) % len];
            if p.over {
                out[p.crossing].0 = arc;
            } else {
                out[p.crossing].1 = arc;
                out[p.crossing].2 = (arc + 1) % c;
                arc += 1;
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.crossing_count().max(1)
    }

    /// Darts are numbered `2e` (along the orientation) and `2e + 1` (against)
    /// for the edge `e` running from passage `e` to passage `e + 1`. Returns
    /// the counterclockwise rotation of outgoing darts at each crossing.
    fn rotations(&self) -> Vec<[usize; 4]> {
        let len = self.gauss.len();
        let fwd = |p: usize| 2 * p;
        let bwd = |p: usize| 2 * ((p + len - 1) % len) + 1;
        self.crossings
            .iter()
            .map(|x| {
                let (o, u) = (x.over, x.under);
                if x.sign > 0 {
                    [fwd(o), fwd(u), bwd(o), bwd(u)]
                } else {
                    [fwd(o), bwd(u), bwd(o), fwd(u)]
                }
            })
            .collect()
    }

    /// Face index of every dart; the face of a dart lies on its left.
    fn faces(&self) -> Result<(Vec<usize>, usize)> {
        let c = self.crossing_count();
        if c == 0 {
            return Ok((Vec::new(), 2));
        }
        let rot = self.rotations();
        let darts = 4 * c;
        let mut prev = vec![usize::MAX; darts];
        for r in &rot {
            for k in 0..4 {
                prev[r[(k + 1) % 4]] = r[k];
            }
        }
        let mut face = vec![usize::MAX; darts];
        let mut count = 0;
        for start in 0..darts {
            if face[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while face[d] == usize::MAX {
                face[d] = count;
                d = prev[d ^ 1];
            }
            count += 1;
        }
        if count != c + 2 {
            return Err(Error::NotAKnot(format!(
                "Gauss code is not planar: {count} faces for {c} crossings"
            )));
        }
        Ok((face, count))
    }

    /// Checkerboard colouring of the faces.
    fn face_colours(&self, face: &[usize], count: usize) -> Result<Vec<bool>> {
        let mut adj = vec![Vec::new(); count];
        for d in 0..face.len() {
            adj[face[d]].push(face[d ^ 1]);
        }
        let mut colour: Vec<Option<bool>> = vec![None; count];
        colour[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(f) = queue.pop_front() {
            let cf = colour[f].expect("queued faces are coloured");
            for &g in &adj[f] {
                match colour[g] {
                    None => {
                        colour[g] = Some(!cf);
                        queue.push_back(g);
                    }
                    Some(cg) if cg == cf => {
                        return Err(Error::NotAKnot("faces are not 2-colourable".into()))
                    }
                    _ => {}
                }
            }
        }
        colour
            .into_iter()
            .map(|c| c.ok_or_else(|| Error::NotAKnot("disconnected diagram".into())))
            .collect()
    }

    /// Goeritz matrix of the chosen shading, indexed by shaded regions.
    pub fn goeritz(&self, shading: Shading) -> Result<Vec<Vec<BigInt>>> {
        let c = self.crossing_count();
        if c == 0 {
            return Ok(vec![vec![BigInt::zero()]]);
        }
        let (face, count) = self.faces()?;
        let colour = self.face_colours(&face, count)?;
        let dark = colour.iter().filter(|&&b| b).count();
        let shade_true = match shading {
            Shading::Smaller => dark <= count - dark,
            Shading::Larger => dark > count - dark,
        };
        let shaded: Vec<usize> = (0..count).filter(|&f| colour[f] == shade_true).collect();
        let index: HashMap<usize, usize> = shaded.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut g = vec![vec![BigInt::zero(); shaded.len()]; shaded.len()];
        for r in self.rotations() {
            let f = |k: usize| face[r[k]];
            let (eta, a, b) = if colour[f(0)] == shade_true {
                (1, f(0), f(2))
            } else {
                (-1, f(1), f(3))
            };
            if a == b {
                continue;
            }
            let (a, b) = (index[&a], index[&b]);
            g[a][b] -= eta;
            g[b][a] -= eta;
            g[a][a] += eta;
            g[b][b] += eta;
        }
        Ok(g)
    }

    /// |det| of a reduced Goeritz matrix.
    pub fn determinant_with(&self, shading: Shading) -> Result<BigInt> {
        if self.crossing_count() == 0 {
            return Ok(BigInt::from(1));
        }
        let g = self.goeritz(shading)?;
        Ok(abs_det(minor(g)))
    }

    pub fn determinant(&self) -> Result<BigInt> {
        self.determinant_with(Shading::Smaller)
    }

    /// Fox colouring matrix: one row per crossing, one column per arc, with
    /// entries `2·over − in − out`.
    pub fn fox_matrix(&self) -> Vec<Vec<i64>> {
        let c = self.crossing_count();
        self.arcs()
            .into_iter()
            .map(|(o, i, u)| {
                let mut row = vec![0i64; c];
                row[o] += 2;
                row[i] -= 1;
                row[u] -= 1;
                row
            })
            .collect()
    }

    /// |first minor| of the Fox matrix; equals the determinant, computed
    /// without reference to faces.
    pub fn determinant_fox(&self) -> BigInt {
        if self.crossing_count() == 0 {
            return BigInt::from(1);
        }
        let m = self
            .fox_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(BigInt::from).collect())
            .collect();
        abs_det(minor(m))
    }

    /// Number of Fox 3-colourings.
    pub fn tricolorings(&self) -> BigInt {
        let c = self.crossing_count();
        if c == 0 {
            return BigInt::from(3);
        }
        let rank = rank_mod(&self.fox_matrix(), 3);
        num_traits::pow(BigInt::from(3), c - rank)
    }
}

/// Drops the first row and column.
fn minor(m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    m.into_iter()
        .skip(1)
        .map(|row| row.into_iter().skip(1).collect())
        .collect()
}

/// Standard small diagrams used as references.
pub mod standard {
    use super::KnotDiagram;

    pub fn trefoil() -> KnotDiagram {
        KnotDiagram::from_gauss(
            &[(0, true), (1, false), (2, true), (0, false), (1, true), (2, false)],
            &[1, 1, 1],
        )
        .expect("trefoil")
    }

    pub fn figure_eight() -> KnotDiagram {
        KnotDiagram::from_gauss(
            &[
                (0, true),
                (1, false),
                (2, true),
                (3, false),
                (1, true),
                (0, false),
                (3, true),
                (2, false),
            ],
            &[-1, -1, 1, 1],
        )
        .expect("figure-eight")
    }
}
