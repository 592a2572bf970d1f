//! Ternary expansions and membership in the Cantor set, the Sierpiński
//! carpet, the Menger sponge and the Sierpiński 2-dimensional carpet.
//!
//! Every prefractal here is a union of *closed* cells, so a triadic rational
//! (one with two infinite ternary expansions) belongs to a set as soon as one
//! of its expansions qualifies. The predicates quantify existentially over all
//! expansions of every coordinate.
//!
//! Limit-set predicates never truncate: rational expansions are eventually
//! periodic, and the "some position carries digit 1 in several coordinates"
//! question for periodic tails reduces to a system of congruences, which is
//! solvable exactly when it is pairwise solvable.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geom::{fmt_rat, pow3, Point3, Rational};

/// The four self-similar sets handled by this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// Middle-thirds Cantor set in `[0, 1]`.
    Cantor,
    /// Sierpiński carpet in the unit square (keeps 8 of 9 subsquares).
    CarpetFace,
    /// Menger sponge (keeps 20 of 27 subcubes).
    Sponge,
    /// Sierpiński 2-dimensional carpet (keeps 26 of 27 subcubes).
    Carpet2,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::Cantor => 1,
            Space::CarpetFace => 2,
            Space::Sponge | Space::Carpet2 => 3,
        }
    }

    /// Whether a cell whose per-axis digits at one level are `column`
    /// survives that level.
    fn column_kept(self, column: &[u8]) -> bool {
        let ones = column.iter().filter(|&&d| d == 1).count();
        match self {
            Space::Cantor | Space::CarpetFace | Space::Carpet2 => ones < column.len(),
            Space::Sponge => ones <= 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::Cantor => "cantor",
            Space::CarpetFace => "carpet-face",
            Space::Sponge => "sponge",
            Space::Carpet2 => "carpet2",
        }
    }
}

/// One infinite base-3 expansion `0.(preperiod)(period)(period)...`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryExpansion {
    pub preperiod: Vec<u8>,
    pub period: Vec<u8>,
}

impl TernaryExpansion {
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, k: usize) -> Vec<u8> {
        (0..k).map(|i| self.digit(i)).collect()
    }

    /// Exact value of the expansion.
    pub fn value(&self) -> Rational {
        let a = self.preperiod.len() as u32;
        let l = self.period.len() as u32;
        let digits_value = |ds: &[u8]| {
            ds.iter()
                .fold(BigInt::zero(), |acc, &d| acc * 3 + BigInt::from(d))
        };
        let pre = Rational::new(digits_value(&self.preperiod), pow3(a));
        let per = Rational::new(
            digits_value(&self.period),
            pow3(a) * (pow3(l) - BigInt::one()),
        );
        pre + per
    }

    pub fn has_one(&self) -> bool {
        self.preperiod.contains(&1) || self.period.contains(&1)
    }
}

impl fmt::Display for TernaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0.")?;
        for d in &self.preperiod {
            write!(f, "{d}")?;
        }
        write!(f, "(")?;
        for d in &self.period {
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for TernaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_unit(x: &Rational) -> Result<()> {
    if x.is_negative() || *x > Rational::one() {
        Err(Error::OutOfRange(fmt_rat(x)))
    } else {
        Ok(())
    }
}

/// True iff the reduced denominator of `x` is a power of three.
pub fn is_triadic(x: &Rational) -> bool {
    let mut d = x.denom().clone();
    let three = BigInt::from(3);
    while (&d % &three).is_zero() {
        d /= &three;
    }
    d.is_one()
}

/// All infinite ternary expansions of `x ∈ [0, 1]`: two for triadic
/// `x ∈ (0, 1)` (terminating form first), one otherwise. `0` is `0.(0)` and
/// `1` is `0.(2)`.
pub fn expansions(x: &Rational) -> Result<Vec<TernaryExpansion>> {
    check_unit(x)?;
    if x.is_zero() {
        return Ok(vec![TernaryExpansion {
            preperiod: vec![],
            period: vec![0],
        }]);
    }
    if x.is_one() {
        return Ok(vec![TernaryExpansion {
            preperiod: vec![],
            period: vec![2],
        }]);
    }
    let q = x.denom().clone();
    let mut r = x.numer().clone();
    let mut digits = Vec::new();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    loop {
        if r.is_zero() {
            let mut upper = digits.clone();
            let last = upper.len() - 1;
            upper[last] -= 1;
            return Ok(vec![
                TernaryExpansion {
                    preperiod: digits,
                    period: vec![0],
                },
                TernaryExpansion {
                    preperiod: upper,
                    period: vec![2],
                },
            ]);
        }
        if let Some(&start) = seen.get(&r) {
            let period = digits.split_off(start);
            return Ok(vec![TernaryExpansion {
                preperiod: digits,
                period,
            }]);
        }
        seen.insert(r.clone(), digits.len());
        let (d, rem) = (r * BigInt::from(3)).div_rem(&q);
        digits.push(d.to_u8().expect("digit < 3"));
        r = rem;
    }
}

/// All distinct length-`k` digit prefixes of the expansions of `x`, read
/// off `⌊3^k x⌋` without expanding the full period.
pub fn ternary_digits(x: &Rational, k: usize) -> Result<Vec<Vec<u8>>> {
    check_unit(x)?;
    let scale = pow3(k as u32);
    let (n, rem) = (x.numer() * &scale).div_rem(x.denom());
    let to_digits = |mut v: BigInt| {
        let mut ds = vec![0u8; k];
        for d in ds.iter_mut().rev() {
            let (q, r) = v.div_rem(&BigInt::from(3));
            *d = r.to_u8().expect("digit < 3");
            v = q;
        }
        ds
    };
    Ok(if !rem.is_zero() || n.is_zero() {
        vec![to_digits(n)]
    } else if n == scale {
        vec![to_digits(n - 1)]
    } else {
        let lower = to_digits(&n - 1);
        let upper = to_digits(n);
        if upper == lower {
            vec![upper]
        } else {
            vec![upper, lower]
        }
    })
}

/// Whether some position carries digit 1 in *every* expansion of `exps`
/// simultaneously.
fn ones_coincide(exps: &[&TernaryExpansion]) -> bool {
    let start = exps.iter().map(|e| e.preperiod.len()).max().unwrap_or(0);
    if (0..start).any(|i| exps.iter().all(|e| e.digit(i) == 1)) {
        return true;
    }
    // Past `start`, expansion e has digit 1 at i iff i mod L_e lies in R_e.
    let residues: Vec<(u64, Vec<u64>)> = exps
        .iter()
        .map(|e| {
            let l = e.period.len();
            let r = (start..start + l)
                .filter(|&i| e.digit(i) == 1)
                .map(|i| (i % l) as u64)
                .collect();
            (l as u64, r)
        })
        .collect();
    if residues.iter().any(|(_, r)| r.is_empty()) {
        return false;
    }
    match residues.as_slice() {
        [(_, r)] => !r.is_empty(),
        [(lx, rx), (ly, ry)] => {
            let g = lx.gcd(ly);
            let bucket: HashSet<u64> = ry.iter().map(|r| r % g).collect();
            rx.iter().any(|r| bucket.contains(&(r % g)))
        }
        [(lx, rx), (ly, ry), (lz, rz)] => {
            let gxy = lx.gcd(ly);
            let gxz = lx.gcd(lz);
            let gyz = ly.gcd(lz);
            let mut by_y: HashMap<u64, Vec<u64>> = HashMap::new();
            for &r in ry {
                by_y.entry(r % gxy).or_default().push(r);
            }
            let z_keys: HashSet<(u64, u64)> = rz.iter().map(|r| (r % gxz, r % gyz)).collect();
            rx.iter().any(|&a| {
                by_y.get(&(a % gxy)).is_some_and(|bs| {
                    bs.iter()
                        .any(|&b| z_keys.contains(&(a % gxz, b % gyz)))
                })
            })
        }
        _ => unreachable!("at most three coordinates"),
    }
}

fn tuple_kept(space: Space, exps: &[&TernaryExpansion]) -> bool {
    match space {
        Space::Cantor | Space::CarpetFace | Space::Carpet2 => !ones_coincide(exps),
        Space::Sponge => {
            !ones_coincide(&[exps[0], exps[1]])
                && !ones_coincide(&[exps[1], exps[2]])
                && !ones_coincide(&[exps[0], exps[2]])
        }
    }
}

fn product<T: Clone>(sets: &[Vec<T>]) -> Vec<Vec<T>> {
    sets.iter().fold(vec![vec![]], |acc, set| {
        acc.into_iter()
            .flat_map(|prefix| {
                set.iter().map(move |item| {
                    let mut v = prefix.clone();
                    v.push(item.clone());
                    v
                })
            })
            .collect()
    })
}

fn check_dim(space: Space, coords: &[Rational]) {
    assert_eq!(
        coords.len(),
        space.dim(),
        "{} takes {} coordinates",
        space.name(),
        space.dim()
    );
}

/// An expansion tuple witnessing membership in the limit set, if any.
pub fn witness(space: Space, coords: &[Rational]) -> Result<Option<Vec<TernaryExpansion>>> {
    check_dim(space, coords);
    let sets = coords
        .iter()
        .map(expansions)
        .collect::<Result<Vec<_>>>()?;
    Ok(product(&sets).into_iter().find(|tuple| {
        let refs: Vec<&TernaryExpansion> = tuple.iter().collect();
        tuple_kept(space, &refs)
    }))
}

/// Membership in the limit set of `space`.
pub fn in_space(space: Space, coords: &[Rational]) -> Result<bool> {
    Ok(witness(space, coords)?.is_some())
}

/// Membership in the stage-`k` prefractal (stage 0 is the whole cube).
pub fn in_stage(space: Space, coords: &[Rational], k: usize) -> Result<bool> {
    check_dim(space, coords);
    let sets = coords
        .iter()
        .map(|c| ternary_digits(c, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(product(&sets).iter().any(|tuple| {
        (0..k).all(|i| {
            let column: Vec<u8> = tuple.iter().map(|ds| ds[i]).collect();
            space.column_kept(&column)
        })
    }))
}

pub fn in_cantor(x: &Rational) -> Result<bool> {
    in_space(Space::Cantor, std::slice::from_ref(x))
}

pub fn in_carpet_face(x: &Rational, y: &Rational) -> Result<bool> {
    in_space(Space::CarpetFace, &[x.clone(), y.clone()])
}

pub fn in_sponge(x: &Rational, y: &Rational, z: &Rational) -> Result<bool> {
    in_space(Space::Sponge, &[x.clone(), y.clone(), z.clone()])
}

pub fn in_sponge_stage(x: &Rational, y: &Rational, z: &Rational, k: usize) -> Result<bool> {
    in_stage(Space::Sponge, &[x.clone(), y.clone(), z.clone()], k)
}

pub fn in_carpet2(x: &Rational, y: &Rational, z: &Rational) -> Result<bool> {
    in_space(Space::Carpet2, &[x.clone(), y.clone(), z.clone()])
}

pub fn point_in_sponge_stage(p: &Point3, k: usize) -> Result<bool> {
    in_stage(Space::Sponge, &p.0, k)
}

/// Closed box `[lo, hi]` per coordinate.
pub type Cell = Vec<(Rational, Rational)>;

/// Refutation of limit membership: the first stage `k` at which the point
/// falls out, together with the removed level-`k` cells containing it (one
/// `[lo, hi]` interval per axis). Returns `None` for members, and also when
/// no refuting stage exists up to `max_stage`.
pub fn refutation(
    space: Space,
    coords: &[Rational],
    max_stage: usize,
) -> Result<Option<(usize, Vec<Cell>)>> {
    if in_space(space, coords)? {
        return Ok(None);
    }
    for k in 1..=max_stage {
        if !in_stage(space, coords, k)? {
            let side = Rational::new(BigInt::one(), pow3(k as u32));
            let axes = coords
                .iter()
                .map(|c| {
                    ternary_digits(c, k).map(|prefixes| {
                        prefixes
                            .iter()
                            .map(|ds| {
                                let idx = ds
                                    .iter()
                                    .fold(BigInt::zero(), |a, &d| a * 3 + BigInt::from(d));
                                let lo = Rational::from_integer(idx) * &side;
                                let hi = &lo + &side;
                                (lo, hi)
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Some((k, product(&axes))));
        }
    }
    Ok(None)
}

/// The `2^{k+1}` endpoints of the stage-`k` Cantor intervals, increasing.
pub fn cantor_endpoints(k: u32) -> Vec<Rational> {
    let mut intervals = vec![(Rational::zero(), Rational::one())];
    for _ in 0..k {
        intervals = intervals
            .into_iter()
            .flat_map(|(a, b)| {
                let third = (&b - &a) / BigInt::from(3);
                let a1 = &a + &third;
                let b0 = &b - &third;
                [(a, a1), (b0, b)]
            })
            .collect();
    }
    intervals.into_iter().flat_map(|(a, b)| [a, b]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The two other axes, in increasing order.
    pub fn others(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }
}

/// Closed segment parallel to a coordinate axis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AxisSegment {
    pub axis: Axis,
    /// Coordinates along `axis.others()`, in that order.
    pub fixed: [Rational; 2],
    pub lo: Rational,
    pub hi: Rational,
}

impl AxisSegment {
    pub fn new(axis: Axis, fixed: [Rational; 2], lo: Rational, hi: Rational) -> Self {
        assert!(lo < hi, "axis segment needs lo < hi");
        AxisSegment { axis, fixed, lo, hi }
    }

    /// The axis-parallel segment between two points, if they differ in exactly
    /// one coordinate.
    pub fn from_points(a: &Point3, b: &Point3) -> Option<AxisSegment> {
        let differing: Vec<Axis> = Axis::ALL.into_iter().filter(|ax| a[ax.index()] != b[ax.index()]).collect();
        let [axis] = differing.as_slice() else {
            return None;
        };
        let [u, v] = axis.others();
        let (lo, hi) = if a[axis.index()] < b[axis.index()] {
            (a[axis.index()].clone(), b[axis.index()].clone())
        } else {
            (b[axis.index()].clone(), a[axis.index()].clone())
        };
        Some(AxisSegment::new(
            *axis,
            [a[u.index()].clone(), a[v.index()].clone()],
            lo,
            hi,
        ))
    }

    pub fn point_at(&self, t: &Rational) -> Point3 {
        let mut c = [Rational::zero(), Rational::zero(), Rational::zero()];
        let [u, v] = self.axis.others();
        c[u.index()] = self.fixed[0].clone();
        c[v.index()] = self.fixed[1].clone();
        c[self.axis.index()] = t.clone();
        Point3(c)
    }

    pub fn endpoints(&self) -> (Point3, Point3) {
        (self.point_at(&self.lo), self.point_at(&self.hi))
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Whether `other` is a subsegment of `self`.
    pub fn contains(&self, other: &AxisSegment) -> bool {
        self.axis == other.axis
            && self.fixed == other.fixed
            && self.lo <= other.lo
            && other.hi <= self.hi
    }
}

impl fmt::Debug for AxisSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Axis::ALL
            .iter()
            .map(|&ax| {
                if ax == self.axis {
                    format!("[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
                } else {
                    let [u, _] = self.axis.others();
                    let i = if ax == u { 0 } else { 1 };
                    format!("{{{}}}", fmt_rat(&self.fixed[i]))
                }
            })
            .collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// Level-`k` cell indices (along one axis) whose closed cell contains `c`.
fn cell_indices(c: &Rational, scale: &BigInt, cells: u64) -> Vec<u64> {
    let t = c * Rational::from_integer(scale.clone());
    let f = t.floor().to_integer().to_u64().expect("cell index fits u64");
    if t.is_integer() {
        [f.checked_sub(1), Some(f)]
            .into_iter()
            .flatten()
            .filter(|&i| i < cells)
            .collect()
    } else {
        vec![f]
    }
}

fn digits_of(mut idx: u64, k: usize) -> Vec<u8> {
    let mut d = vec![0u8; k];
    for slot in d.iter_mut().rev() {
        *slot = (idx % 3) as u8;
        idx /= 3;
    }
    d
}

/// Whether the level-`k` cell with integer indices `idx` survives.
pub fn cell_kept(space: Space, idx: &[u64], k: usize) -> bool {
    let digits: Vec<Vec<u8>> = idx.iter().map(|&i| digits_of(i, k)).collect();
    (0..k).all(|level| {
        let column: Vec<u8> = digits.iter().map(|d| d[level]).collect();
        space.column_kept(&column)
    })
}

/// Exact test that every point of `s` lies in the stage-`k` prefractal of
/// `space` (sponge or 2-dimensional carpet).
///
/// The segment is cut by the level-`k` grid planes into open pieces; a piece
/// is covered iff some surviving closed cell contains it, and closedness of
/// cells then covers the cut points as well.
pub fn segment_in_stage(s: &AxisSegment, k: usize, space: Space) -> bool {
    assert_eq!(space.dim(), 3, "segment containment is for 3D spaces");
    assert!(k <= 40, "stage {k} too deep for 64-bit cell indices");
    let unit = Rational::one();
    if s.lo.is_negative() || s.hi > unit || s.fixed.iter().any(|f| f.is_negative() || *f > unit) {
        return false;
    }
    let scale = pow3(k as u32);
    let cells = 3u64.pow(k as u32);
    let fu = cell_indices(&s.fixed[0], &scale, cells);
    let fv = cell_indices(&s.fixed[1], &scale, cells);
    let scale_q = Rational::from_integer(scale.clone());
    let first = (&s.lo * &scale_q).floor().to_integer().to_u64().unwrap();
    let last = ((&s.hi * &scale_q).ceil().to_integer().to_u64().unwrap())
        .saturating_sub(1)
        .min(cells - 1);
    let [u, v] = s.axis.others();
    (first..=last).all(|j| {
        fu.iter().any(|&iu| {
            fv.iter().any(|&iv| {
                let mut idx = [0u64; 3];
                idx[s.axis.index()] = j;
                idx[u.index()] = iu;
                idx[v.index()] = iv;
                cell_kept(space, &idx, k)
            })
        })
    })
}

/// Reference membership by literal recursive subdivision, independent of
/// digit expansions: descend into every closed child cell containing the
/// point and discard the removed children.
pub mod oracle {
    use super::Space;
    use crate::geom::Rational;
    use num_traits::{One, Signed};

    fn removed(space: Space, child: &[u8]) -> bool {
        match space {
            Space::Cantor => child == [1],
            Space::CarpetFace => child == [1, 1],
            Space::Carpet2 => child == [1, 1, 1],
            Space::Sponge => {
                let central = child == [1, 1, 1];
                let face_center = child.iter().filter(|&&c| c == 1).count() == 2;
                central || face_center
            }
        }
    }

    fn candidates(c: &Rational) -> Vec<(u8, Rational)> {
        let t = c * Rational::from_integer(3.into());
        (0u8..3)
            .filter_map(|i| {
                let local = &t - Rational::from_integer(i.into());
                (!local.is_negative() && local <= Rational::one()).then_some((i, local))
            })
            .collect()
    }

    fn descend(space: Space, coords: &[Rational], levels: usize) -> bool {
        if levels == 0 {
            return true;
        }
        let per_axis: Vec<Vec<(u8, Rational)>> = coords.iter().map(candidates).collect();
        let mut stack: Vec<(Vec<u8>, Vec<Rational>)> = vec![(vec![], vec![])];
        for axis in &per_axis {
            stack = stack
                .into_iter()
                .flat_map(|(idx, local)| {
                    axis.iter().map(move |(i, l)| {
                        let mut idx = idx.clone();
                        let mut local = local.clone();
                        idx.push(*i);
                        local.push(l.clone());
                        (idx, local)
                    })
                })
                .collect();
        }
        stack
            .into_iter()
            .any(|(idx, local)| !removed(space, &idx) && descend(space, &local, levels - 1))
    }

    /// Membership of `coords` in the stage-`k` prefractal of `space`.
    pub fn subdivision_oracle(space: Space, coords: &[Rational], k: usize) -> bool {
        assert_eq!(coords.len(), space.dim());
        if coords.iter().any(|c| c.is_negative() || *c > Rational::one()) {
            return false;
        }
        descend(space, coords, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, rat};

    fn d(ds: &[&[u8]]) -> Vec<Vec<u8>> {
        ds.iter().map(|x| x.to_vec()).collect()
    }

    #[test]
    fn digits_examples() {
        assert_eq!(ternary_digits(&int(0), 3).unwrap(), d(&[&[0, 0, 0]]));
        assert_eq!(
            ternary_digits(&rat(1, 3), 3).unwrap(),
            d(&[&[1, 0, 0], &[0, 2, 2]])
        );
        assert_eq!(ternary_digits(&rat(1, 4), 4).unwrap(), d(&[&[0, 2, 0, 2]]));
        assert_eq!(ternary_digits(&int(1), 3).unwrap(), d(&[&[2, 2, 2]]));
        assert!(matches!(
            ternary_digits(&rat(3, 2), 2),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn one_quarter_is_zero_two_repeating() {
        // long division oracle: 1/4 = sum 2/9^j = (2/9)/(1 - 1/9)
        let e = &expansions(&rat(1, 4)).unwrap()[0];
        assert_eq!(e.preperiod, Vec::<u8>::new());
        assert_eq!(e.period, vec![0, 2]);
        assert_eq!(e.value(), rat(1, 4));
    }

    #[test]
    fn triadic_has_two_expansions_both_exact() {
        for x in [rat(1, 3), rat(2, 3), rat(5, 27), rat(1, 9)] {
            let es = expansions(&x).unwrap();
            assert_eq!(es.len(), 2);
            for e in es {
                assert_eq!(e.value(), x);
            }
        }
        assert_eq!(expansions(&rat(1, 7)).unwrap().len(), 1);
    }

    #[test]
    fn cantor_examples() {
        assert!(in_cantor(&int(0)).unwrap());
        assert!(!in_cantor(&rat(1, 2)).unwrap());
        assert!(in_cantor(&rat(1, 4)).unwrap());
        assert!(in_cantor(&rat(1, 3)).unwrap());
        assert!(in_cantor(&int(1)).unwrap());
    }

    #[test]
    fn carpet_face_examples() {
        assert!(in_carpet_face(&int(0), &int(0)).unwrap());
        assert!(!in_carpet_face(&rat(1, 2), &rat(1, 2)).unwrap());
        assert!(in_carpet_face(&rat(1, 2), &rat(2, 3)).unwrap());
    }

    #[test]
    fn sponge_examples() {
        assert!(in_sponge(&int(0), &int(0), &int(0)).unwrap());
        assert!(!in_sponge_stage(&rat(1, 2), &rat(1, 2), &rat(1, 2), 1).unwrap());
        assert!(in_sponge_stage(&rat(1, 2), &rat(1, 2), &rat(1, 2), 0).unwrap());
        assert!(in_sponge(&rat(1, 3), &rat(2, 3), &rat(1, 2)).unwrap());
    }

    #[test]
    fn carpet2_examples() {
        assert!(!in_carpet2(&rat(1, 2), &rat(1, 2), &rat(1, 2)).unwrap());
        assert!(in_carpet2(&rat(1, 2), &rat(1, 2), &int(0)).unwrap());
    }

    #[test]
    fn periodic_tail_conflict_found_by_congruence() {
        // 1/8 = 0.(01) and 1/80 = 0.(0001) first share a digit 1 at position 3
        let a = rat(1, 8);
        let b = rat(1, 80);
        assert!(!in_carpet_face(&a, &b).unwrap());
        assert_eq!(
            in_carpet_face(&a, &b).unwrap(),
            oracle::subdivision_oracle(Space::CarpetFace, &[a, b], 8)
        );
    }

    #[test]
    fn segment_examples() {
        let vertical = AxisSegment::new(Axis::Y, [int(0), int(0)], int(0), int(1));
        assert!(segment_in_stage(&vertical, 3, Space::Sponge));
        let depth = AxisSegment::new(Axis::Z, [rat(1, 3), rat(1, 3)], int(0), int(1));
        assert!(segment_in_stage(&depth, 4, Space::Sponge));
        let through_hole = AxisSegment::new(Axis::X, [rat(1, 2), int(0)], int(0), int(1));
        assert!(!segment_in_stage(&through_hole, 1, Space::Sponge));
        assert!(segment_in_stage(&through_hole, 1, Space::Carpet2));
        let center = AxisSegment::new(Axis::X, [rat(1, 2), rat(1, 2)], int(0), int(1));
        assert!(!segment_in_stage(&center, 1, Space::Carpet2));
    }

    #[test]
    fn cantor_endpoint_examples() {
        assert_eq!(cantor_endpoints(0), vec![int(0), int(1)]);
        assert_eq!(
            cantor_endpoints(1),
            vec![int(0), rat(1, 3), rat(2, 3), int(1)]
        );
        let e2 = cantor_endpoints(2);
        assert_eq!(e2.len(), 8);
        assert!(e2.windows(2).all(|w| w[0] < w[1]));
        assert!(e2.iter().all(|x| in_cantor(x).unwrap()));
        assert!(e2
            .iter()
            .all(|x| (x * Rational::from_integer(9.into())).is_integer()));
    }

    #[test]
    fn oracle_examples() {
        let c = [rat(1, 2), rat(1, 2), rat(1, 2)];
        assert!(oracle::subdivision_oracle(Space::Sponge, &c, 0));
        assert!(!oracle::subdivision_oracle(Space::Sponge, &c, 1));
    }

    #[test]
    fn refutation_of_half_is_middle_third() {
        let (k, cells) = refutation(Space::Cantor, &[rat(1, 2)], 10)
            .unwrap()
            .unwrap();
        assert_eq!(k, 1);
        assert_eq!(cells, vec![vec![(rat(1, 3), rat(2, 3))]]);
    }

    #[test]
    fn axis_segment_from_points() {
        let a = Point3::from_ratios([(1, 3), (0, 1), (1, 1)]);
        let b = Point3::from_ratios([(1, 3), (2, 3), (1, 1)]);
        let s = AxisSegment::from_points(&b, &a).unwrap();
        assert_eq!(s.axis, Axis::Y);
        assert_eq!(s.fixed, [rat(1, 3), int(1)]);
        assert_eq!(s.endpoints(), (a.clone(), b));
        let diag = Point3::from_ratios([(1, 1), (1, 1), (1, 1)]);
        assert!(AxisSegment::from_points(&a, &diag).is_none());
    }
}
