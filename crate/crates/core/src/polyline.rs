use crate::error::{Error, Result};
use crate::geom::Point3;

/// A labeled edge of a polyline; `segment` is the index of the edge from
/// vertex `segment` to vertex `segment + 1` (cyclically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mark {
    pub label: String,
    pub segment: usize,
}

/// Closed polygonal curve with exact rational vertices.
///
/// Construction checks only the structural invariants (at least three
/// vertices, no zero-length edge). Simplicity is a property checked by
/// [`crate::invariants::is_simple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPolyline3 {
    vertices: Vec<Point3>,
    marks: Vec<Mark>,
}

impl ClosedPolyline3 {
    pub fn new(vertices: Vec<Point3>) -> Result<Self> {
        let p = Self::new_unchecked(vertices);
        p.check()?;
        Ok(p)
    }

    /// Builds without validation; used when reading possibly-corrupt files so
    /// that the verifier can name the failure.
    pub fn new_unchecked(vertices: Vec<Point3>) -> Self {
        ClosedPolyline3 {
            vertices,
            marks: Vec::new(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.vertices.len() < 3 {
            return Err(Error::TooFewVertices(self.vertices.len()));
        }
        for i in 0..self.len() {
            let (a, b) = self.segment(i);
            if a == b {
                return Err(Error::DegenerateSegment(i));
            }
        }
        Ok(())
    }

    pub fn with_mark(mut self, label: impl Into<String>, segment: usize) -> Self {
        assert!(segment < self.vertices.len());
        self.marks.push(Mark {
            label: label.into(),
            segment,
        });
        self
    }

    pub fn set_marks(&mut self, marks: Vec<Mark>) {
        self.marks = marks;
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn mark(&self, label: &str) -> Option<usize> {
        self.marks
            .iter()
            .find(|m| m.label == label)
            .map(|m| m.segment)
    }

    /// Number of edges (equal to the number of vertices).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn segment(&self, i: usize) -> (&Point3, &Point3) {
        let n = self.vertices.len();
        (&self.vertices[i], &self.vertices[(i + 1) % n])
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Point3, &Point3)> + '_ {
        (0..self.len()).map(move |i| self.segment(i))
    }

    /// Applies `f` to every vertex, keeping marks.
    pub fn map(&self, f: impl Fn(&Point3) -> Point3) -> Self {
        ClosedPolyline3 {
            vertices: self.vertices.iter().map(f).collect(),
            marks: self.marks.clone(),
        }
    }
}
