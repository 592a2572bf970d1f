//! Arc presentations in grid form.
//!
//! Row `i` (1-based) carries a horizontal segment from column `a_i` to
//! column `b_i`; each column carries a vertical segment joining its two
//! marked points, drawn over every horizontal it crosses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{int, Point2};
use crate::invariants::{KnotDiagram, Source};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDiagram {
    pub n: usize,
    pub pairs: Vec<[usize; 2]>,
}

impl fmt::Debug for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid(n={}, {:?})", self.n, self.pairs)
    }
}

/// Which column a walk visits next, as a permutation of rows.
fn successor_rows(pairs: &[[usize; 2]]) -> Vec<usize> {
    let n = pairs.len();
    let mut row_of_a = vec![0; n + 1];
    for (i, p) in pairs.iter().enumerate() {
        row_of_a[p[0]] = i;
    }
    pairs.iter().map(|p| row_of_a[p[1]]).collect()
}

impl GridDiagram {
    pub fn new(pairs: Vec<[usize; 2]>) -> Result<Self> {
        let d = GridDiagram {
            n: pairs.len(),
            pairs,
        };
        d.validate()?;
        Ok(d)
    }

    /// Checks the permutation conditions and that the diagram has a single
    /// component. Reports the first violation.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidGrid(format!("n = {n} < 2")));
        }
        if self.pairs.len() != n {
            return Err(Error::InvalidGrid(format!(
                "n = {n} but {} pairs",
                self.pairs.len()
            )));
        }
        for (i, p) in self.pairs.iter().enumerate() {
            for &v in p {
                if v < 1 || v > n {
                    return Err(Error::InvalidGrid(format!(
                        "row {}: value {v} outside 1..{n}",
                        i + 1
                    )));
                }
            }
        }
        for (side, name) in [(0, "a"), (1, "b")] {
            let mut first = vec![0; n + 1];
            for (i, p) in self.pairs.iter().enumerate() {
                let v = p[side];
                if first[v] != 0 {
                    return Err(Error::InvalidGrid(format!(
                        "{name} not a permutation: {name}_{} = {name}_{} = {v}",
                        first[v],
                        i + 1
                    )));
                }
                first[v] = i + 1;
            }
        }
        if let Some(i) = self.pairs.iter().position(|p| p[0] == p[1]) {
            return Err(Error::InvalidGrid(format!(
                "a_{0} = b_{0} = {1}",
                i + 1,
                self.pairs[i][0]
            )));
        }
        let next = successor_rows(&self.pairs);
        let mut row = 0;
        for steps in 1..=n {
            row = next[row];
            if row == 0 && steps < n {
                return Err(Error::InvalidGrid(format!(
                    "not a knot: the walk from row 1 closes after {steps} of {n} rows"
                )));
            }
        }
        Ok(())
    }

    /// Rows in walk order, starting at row 1 (0-based indices).
    pub fn row_order(&self) -> Vec<usize> {
        let next = successor_rows(&self.pairs);
        let mut out = Vec::with_capacity(self.n);
        let mut r = 0;
        for _ in 0..self.n {
            out.push(r);
            r = next[r];
        }
        out
    }

    /// The 2n marked points `(column, row)` in walk order: along row `i` from
    /// `a_i` to `b_i`, then along column `b_i` to the next row.
    pub fn walk(&self) -> Vec<(usize, usize)> {
        self.row_order()
            .into_iter()
            .flat_map(|r| {
                let [a, b] = self.pairs[r];
                [(a, r + 1), (b, r + 1)]
            })
            .collect()
    }

    /// Mirror image: columns reflected `j ↦ n + 1 − j`.
    pub fn mirror(&self) -> Self {
        let n = self.n;
        GridDiagram {
            n,
            pairs: self
                .pairs
                .iter()
                .map(|&[a, b]| [n + 1 - a, n + 1 - b])
                .collect(),
        }
    }

    /// Cyclic row shift by `k`: row `i` moves to row `i + k (mod n)`.
    pub fn rotate_rows(&self, k: usize) -> Self {
        let mut pairs = self.pairs.clone();
        pairs.rotate_right(k % self.n);
        GridDiagram { n: self.n, pairs }
    }

    pub fn to_planar(&self) -> PlanarDiagram {
        let walk = self.walk();
        let m = walk.len();
        let arcs: Vec<PlanarArc> = (0..m)
            .map(|k| {
                let (p, q) = (walk[k], walk[(k + 1) % m]);
                PlanarArc {
                    from: p,
                    to: q,
                    vertical: k % 2 == 1,
                }
            })
            .collect();
        let mut crossings = Vec::new();
        for (vi, v) in arcs.iter().enumerate().filter(|(_, a)| a.vertical) {
            let x = v.from.0;
            let (y0, y1) = (v.from.1.min(v.to.1), v.from.1.max(v.to.1));
            for (hi, h) in arcs.iter().enumerate().filter(|(_, a)| !a.vertical) {
                let y = h.from.1;
                let (x0, x1) = (h.from.0.min(h.to.0), h.from.0.max(h.to.0));
                if x0 < x && x < x1 && y0 < y && y < y1 {
                    crossings.push(PlanarCrossing {
                        vertical: vi,
                        horizontal: hi,
                        point: (x, y),
                    });
                }
            }
        }
        PlanarDiagram { arcs, crossings }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanarArc {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub vertical: bool,
}

/// A crossing at grid point `(column, row)`; the vertical arc is over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlanarCrossing {
    pub vertical: usize,
    pub horizontal: usize,
    pub point: (usize, usize),
}

/// Rendered grid diagram: arcs alternate horizontal, vertical along the walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDiagram {
    pub arcs: Vec<PlanarArc>,
    pub crossings: Vec<PlanarCrossing>,
}

impl PlanarDiagram {
    /// Number of marked points on each column `1..=n`.
    pub fn column_marks(&self, n: usize) -> Vec<usize> {
        let mut count = vec![0; n + 1];
        for a in self.arcs.iter().filter(|a| a.vertical) {
            count[a.from.0] += 1;
            count[a.to.0] += 1;
        }
        // each marked point is an endpoint of exactly one vertical
        count.remove(0);
        count
    }

    pub fn knot_diagram(&self) -> Result<KnotDiagram> {
        let pts: Vec<Point2> = self
            .arcs
            .iter()
            .map(|a| Point2::new(int(a.from.0 as i64), int(a.from.1 as i64)))
            .collect();
        let arcs = &self.arcs;
        KnotDiagram::from_planar(
            &pts,
            |seg, _| if arcs[seg].vertical { int(0) } else { int(1) },
            Source::Grid,
        )
    }
}

pub const CATALOG: [&str; 3] = ["unknot", "trefoil", "figure-eight"];

/// Reference diagrams, found by exhaustive search over small grids and
/// frozen here.
pub fn catalog(name: &str) -> Result<GridDiagram> {
    let pairs: Vec<[usize; 2]> = match name {
        "unknot" => vec![[1, 2], [2, 1]],
        "trefoil" => vec![[1, 3], [2, 4], [3, 5], [4, 1], [5, 2]],
        "figure-eight" => vec![[1, 3], [2, 6], [4, 1], [3, 5], [6, 4], [5, 2]],
        _ => return Err(Error::UnknownKnot(name.to_string())),
    };
    GridDiagram::new(pairs)
}

/// Exhaustive search over `n × n` grid diagrams for one whose determinant and
/// 3-colouring count match. Ordering is lexicographic in `(a, b)`.
pub fn search(n: usize, det: u64, colorings: u64) -> Option<GridDiagram> {
    let perms = permutations(n);
    for a in &perms {
        for b in &perms {
            if a.iter().zip(b).any(|(x, y)| x == y) {
                continue;
            }
            let pairs: Vec<[usize; 2]> = a.iter().zip(b).map(|(&x, &y)| [x, y]).collect();
            let d = GridDiagram { n, pairs };
            if d.validate().is_err() {
                continue;
            }
            let Ok(k) = d.to_planar().knot_diagram() else {
                continue;
            };
            if k.determinant().ok() == Some(det.into()) && k.tricolorings() == colorings.into() {
                return Some(d);
            }
        }
    }
    None
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    heap(&mut cur, n, &mut out);
    out.sort();
    out
}

fn heap(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(v.clone());
        return;
    }
    for i in 0..k {
        heap(v, k - 1, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        v.swap(j, k - 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn smallest_diagram_is_valid() {
        assert!(GridDiagram::new(vec![[1, 2], [2, 1]]).is_ok());
    }

    #[test]
    fn repeated_a_is_reported() {
        let e = GridDiagram::new(vec![[1, 2], [1, 3], [3, 1]]).unwrap_err();
        assert!(e.to_string().contains("a not a permutation"), "{e}");
    }

    #[test]
    fn equal_pair_is_reported() {
        let e = GridDiagram::new(vec![[1, 1], [2, 2]]).unwrap_err();
        assert!(e.to_string().contains("a_1 = b_1"), "{e}");
    }

    #[test]
    fn two_component_link_is_rejected() {
        let e = GridDiagram::new(vec![[1, 2], [2, 1], [3, 4], [4, 3]]).unwrap_err();
        assert!(e.to_string().contains("not a knot"), "{e}");
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[0], vec![1, 2, 3]);
    }

    #[test]
    fn catalog_invariants() {
        for (name, det, col) in [("unknot", 1, 3), ("trefoil", 3, 9), ("figure-eight", 5, 3)] {
            let g = catalog(name).unwrap();
            let k = g.to_planar().knot_diagram().unwrap();
            assert_eq!(k.determinant().unwrap(), BigInt::from(det), "{name}");
            assert_eq!(k.determinant_fox(), BigInt::from(det), "{name}");
            assert_eq!(k.tricolorings(), BigInt::from(col), "{name}");
        }
        assert_eq!(catalog("trefoil").unwrap().n, 5);
        assert_eq!(catalog("figure-eight").unwrap().n, 6);
        assert!(matches!(catalog("hopf"), Err(Error::UnknownKnot(_))));
    }

    #[test]
    fn unknot_has_no_crossings() {
        assert!(catalog("unknot").unwrap().to_planar().crossings.is_empty());
    }
}
