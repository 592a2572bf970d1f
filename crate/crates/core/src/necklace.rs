//! Pearl chain necklaces and their images under the group generated by
//! inversions in the pearl boundaries.
//!
//! A pearl's word `[j_1, …, j_g, b]` names the ball `I_{j_1} ∘ … ∘ I_{j_g}(B_b)`;
//! its generation is `g`, one less than the word length.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{int, point_segment_dist_sq, Point3, Rational};
use crate::polyline::ClosedPolyline3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pearl {
    pub center: Point3,
    pub radius_sq: Rational,
    pub word: Vec<usize>,
}

impl Pearl {
    pub fn generation(&self) -> usize {
        self.word.len() - 1
    }

    /// The word with its last letter dropped; `None` at generation 0.
    pub fn parent_word(&self) -> Option<&[usize]> {
        (self.word.len() > 1).then(|| &self.word[..self.word.len() - 1])
    }
}

/// `c + r²(x − c)/|x − c|²`.
pub fn invert_point(ball: &Pearl, x: &Point3) -> Result<Point3> {
    let d = x - &ball.center;
    let n = d.norm_sq();
    if n.is_zero() {
        return Err(Error::InversionPole);
    }
    Ok(&ball.center + &d.scale(&(&ball.radius_sq / n)))
}

/// Image of `b` under inversion in `ball`, with generator `j` prepended to
/// the word. The image is a ball only when the center of `ball` lies outside
/// `b`.
pub fn invert_pearl(j: usize, ball: &Pearl, b: &Pearl) -> Result<Pearl> {
    let d = &b.center - &ball.center;
    let den = d.norm_sq() - &b.radius_sq;
    if !den.is_positive() {
        return Err(Error::HalfSpaceImage);
    }
    let center = &ball.center + &d.scale(&(&ball.radius_sq / &den));
    let radius_sq = &ball.radius_sq * &ball.radius_sq * &b.radius_sq / (&den * &den);
    let mut word = Vec::with_capacity(b.word.len() + 1);
    word.push(j);
    word.extend_from_slice(&b.word);
    Ok(Pearl {
        center,
        radius_sq,
        word,
    })
}

/// Closed balls are disjoint: `|c₁ − c₂| > r₁ + r₂`, squared twice.
pub fn disjoint(a: &Pearl, b: &Pearl) -> bool {
    let s = a.center.dist_sq(&b.center) - &a.radius_sq - &b.radius_sq;
    s.is_positive() && &s * &s > int(4) * &a.radius_sq * &b.radius_sq
}

/// `inner` lies in the interior of `outer`: `|c₁ − c₂| < r_out − r_in`.
pub fn strictly_inside(inner: &Pearl, outer: &Pearl) -> bool {
    if inner.radius_sq >= outer.radius_sq {
        return false;
    }
    let s = &outer.radius_sq + &inner.radius_sq - outer.center.dist_sq(&inner.center);
    s.is_positive() && &s * &s > int(4) * &outer.radius_sq * &inner.radius_sq
}

#[derive(Clone, Debug)]
pub struct Necklace {
    pub n: usize,
    pub pearls: Vec<Pearl>,
    pub knot: ClosedPolyline3,
}

impl Necklace {
    /// Checks pairwise disjointness of the pearls and that every center lies
    /// on the knot.
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 || self.pearls.len() != self.n {
            return Err(Error::Necklace(format!(
                "need n >= 3 pearls, got n = {} with {} pearls",
                self.n,
                self.pearls.len()
            )));
        }
        for (i, p) in self.pearls.iter().enumerate() {
            if p.word != [i] || !p.radius_sq.is_positive() {
                return Err(Error::Necklace(format!("pearl {i} is malformed")));
            }
            if !self.knot.segments().any(|(a, b)| point_segment_dist_sq(&p.center, a, b).is_zero()) {
                return Err(Error::Necklace(format!("pearl {i} is not centered on the knot")));
            }
            for (j, q) in self.pearls.iter().enumerate().skip(i + 1) {
                if !disjoint(p, q) {
                    return Err(Error::Necklace(format!("pearls {i} and {j} intersect")));
                }
            }
        }
        Ok(())
    }

    /// Generations `0..=m`, each sorted by word.
    pub fn iterate(&self, m: usize) -> Result<Vec<Vec<Pearl>>> {
        self.validate()?;
        let mut levels = vec![self.pearls.clone()];
        for _ in 0..m {
            let prev = levels.last().expect("generation 0");
            let mut next: Vec<Pearl> = prev
                .par_iter()
                .flat_map_iter(|p| {
                    (0..self.n)
                        .filter(move |&j| j != p.word[0])
                        .map(move |j| invert_pearl(j, &self.pearls[j], p))
                })
                .collect::<Result<_>>()?;
            next.sort_by(|a, b| a.word.cmp(&b.word));
            levels.push(next);
        }
        Ok(levels)
    }

    /// Pearl of a reduced word; its center approximates a limit point to
    /// within the returned squared radius.
    pub fn limit_point(&self, word: &[usize]) -> Result<(Point3, Rational)> {
        let p = self.pearl(word)?;
        Ok((p.center, p.radius_sq))
    }

    pub fn pearl(&self, word: &[usize]) -> Result<Pearl> {
        let reduced = !word.is_empty()
            && word.iter().all(|&j| j < self.n)
            && word.windows(2).all(|w| w[0] != w[1]);
        if !reduced {
            return Err(Error::NonReducedWord(word.to_vec()));
        }
        let (&last, rest) = word.split_last().expect("nonempty");
        let mut p = self.pearls[last].clone();
        for &j in rest.iter().rev() {
            p = invert_pearl(j, &self.pearls[j], &p)?;
        }
        Ok(p)
    }
}

/// Generation-`m` pearl count `n(n − 1)^m`.
pub fn pearl_count(n: u64, m: u32) -> u64 {
    n * (n - 1).pow(m)
}

/// Places `n` pearls at midpoints of evenly spread edges, with a common
/// radius a third of the smallest clearance, so that pearls are disjoint and
/// each meets the knot in a straight piece of its own edge.
pub fn make_necklace(knot: &ClosedPolyline3, n: usize) -> Result<Necklace> {
    let edges = knot.len();
    if n < 3 {
        return Err(Error::Necklace(format!("need at least 3 pearls, got {n}")));
    }
    if n > edges {
        return Err(Error::Necklace(format!("{n} pearls on a knot with {edges} edges")));
    }
    let half = Rational::new(1.into(), 2.into());
    let chosen: Vec<usize> = (0..n).map(|i| i * edges / n).collect();
    let centers: Vec<Point3> = chosen
        .iter()
        .map(|&e| {
            let (a, b) = knot.segment(e);
            Point3::lerp(a, b, &half)
        })
        .collect();
    let mut delta: Option<Rational> = None;
    for (i, c) in centers.iter().enumerate() {
        for (e, (a, b)) in knot.segments().enumerate() {
            if e != chosen[i] {
                let d = point_segment_dist_sq(c, a, b);
                delta = Some(delta.map_or(d.clone(), |x| x.min(d)));
            }
        }
        for c2 in &centers[i + 1..] {
            let d = c.dist_sq(c2);
            delta = Some(delta.map_or(d.clone(), |x| x.min(d)));
        }
    }
    let delta = delta.expect("at least three edges");
    if !delta.is_positive() {
        return Err(Error::Necklace("knot touches a pearl center away from its edge".into()));
    }
    let radius_sq = delta / int(9);
    let pearls = centers
        .into_iter()
        .enumerate()
        .map(|(i, center)| Pearl {
            center,
            radius_sq: radius_sq.clone(),
            word: vec![i],
        })
        .collect();
    let t = Necklace {
        n,
        pearls,
        knot: knot.clone(),
    };
    t.validate()?;
    Ok(t)
}

/// Copies of `K` and of its mirror added at each stage, and running totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandLedger {
    pub n: u64,
    /// `(K, K̄)` added at stages `0..=m`.
    pub stages: Vec<(u64, u64)>,
}

impl SummandLedger {
    pub fn totals(&self) -> (u64, u64) {
        self.stages
            .iter()
            .fold((0, 0), |(k, b), &(dk, db)| (k + dk, b + db))
    }

    pub fn increment(&self, q: usize) -> u64 {
        let (k, b) = self.stages[q];
        k + b
    }
}

/// Stage 0 is the knot itself; stage `q ≥ 1` adds one strand per
/// generation-`(q − 1)` pearl, of the mirror type when the pearl's word
/// length `q` is odd.
pub fn summand_ledger(n: u64, m: u32) -> SummandLedger {
    assert!(n >= 3);
    let mut stages = vec![(1, 0)];
    for q in 1..=m {
        let c = pearl_count(n, q - 1);
        stages.push(if q % 2 == 1 { (0, c) } else { (c, 0) });
    }
    SummandLedger { n, stages }
}
