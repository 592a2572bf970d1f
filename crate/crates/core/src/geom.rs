//! Exact rational points and segment predicates in two and three dimensions.
//!
//! Every quantity is a [`Rational`]; no predicate in this module rounds.

use std::fmt;
use std::ops::{Add, Index, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow3(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(3), k as usize)
}

/// `3^-k` as a rational.
pub fn third_pow(k: u32) -> Rational {
    Rational::new(BigInt::one(), pow3(k))
}

/// Formats a rational as `num/den` (or `num` for integers).
pub fn fmt_rat(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Lossy conversion used only for viewer formats.
pub fn to_f64(q: &Rational) -> f64 {
    let n: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    // Huge numerators/denominators: shift both down to a comparable size.
    let bits = q.numer().bits().max(q.denom().bits());
    let shift = bits.saturating_sub(1000) as usize;
    let n: f64 = (q.numer() >> shift).to_string().parse().unwrap_or(0.0);
    let d: f64 = (q.denom() >> shift).to_string().parse().unwrap_or(1.0);
    n / d
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point3(pub [Rational; 3]);

impl Point3 {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Point3([x, y, z])
    }

    pub fn origin() -> Self {
        Point3([Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn from_ratios(c: [(i64, i64); 3]) -> Self {
        Point3(c.map(|(n, d)| rat(n, d)))
    }

    pub fn dot(&self, other: &Point3) -> Rational {
        &self[0] * &other[0] + &self[1] * &other[1] + &self[2] * &other[2]
    }

    pub fn cross(&self, o: &Point3) -> Point3 {
        Point3([
            &self[1] * &o[2] - &self[2] * &o[1],
            &self[2] * &o[0] - &self[0] * &o[2],
            &self[0] * &o[1] - &self[1] * &o[0],
        ])
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, k: &Rational) -> Point3 {
        Point3([&self[0] * k, &self[1] * k, &self[2] * k])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `a + t (b - a)`.
    pub fn lerp(a: &Point3, b: &Point3, t: &Rational) -> Point3 {
        a + &(b - a).scale(t)
    }

    pub fn dist_sq(&self, other: &Point3) -> Rational {
        (self - other).norm_sq()
    }
}

impl Index<usize> for Point3 {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Sub for &Point3 {
    type Output = Point3;
    fn sub(self, o: &Point3) -> Point3 {
        Point3([&self[0] - &o[0], &self[1] - &o[1], &self[2] - &o[2]])
    }
}

impl Add for &Point3 {
    type Output = Point3;
    fn add(self, o: &Point3) -> Point3 {
        Point3([&self[0] + &o[0], &self[1] + &o[1], &self[2] + &o[2]])
    }
}

impl fmt::Debug for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            fmt_rat(&self[0]),
            fmt_rat(&self[1]),
            fmt_rat(&self[2])
        )
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2(pub [Rational; 2]);

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2([x, y])
    }

    pub fn cross(&self, o: &Point2) -> Rational {
        &self[0] * &o[1] - &self[1] * &o[0]
    }

    pub fn dot(&self, o: &Point2) -> Rational {
        &self[0] * &o[0] + &self[1] * &o[1]
    }

    pub fn scale(&self, k: &Rational) -> Point2 {
        Point2([&self[0] * k, &self[1] * k])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn lerp(a: &Point2, b: &Point2, t: &Rational) -> Point2 {
        a + &(b - a).scale(t)
    }
}

impl Index<usize> for Point2 {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Sub for &Point2 {
    type Output = Point2;
    fn sub(self, o: &Point2) -> Point2 {
        Point2([&self[0] - &o[0], &self[1] - &o[1]])
    }
}

impl Add for &Point2 {
    type Output = Point2;
    fn add(self, o: &Point2) -> Point2 {
        Point2([&self[0] + &o[0], &self[1] + &o[1]])
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rat(&self[0]), fmt_rat(&self[1]))
    }
}

/// Intersection of two closed segments `p0p1` and `q0q1`, expressed in the
/// parameters `t` (along `p`) and `s` (along `q`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hit {
    None,
    Point { t: Rational, s: Rational },
    /// Collinear overlap of positive length; `t` range along `p`.
    Overlap { t0: Rational, t1: Rational },
}

fn unit_interval(t: &Rational) -> bool {
    !t.is_negative() && *t <= Rational::one()
}

/// Collinear case shared by 2D and 3D: `q0`, `q1` have parameters `a`, `b`
/// along `p`, and `p` has length parameter 1.
fn collinear_hit(a: Rational, b: Rational) -> Hit {
    let (lo, hi) = if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let t0 = lo.max(Rational::zero());
    let t1 = hi.min(Rational::one());
    if t0 > t1 {
        return Hit::None;
    }
    if t0 == t1 {
        // single touching point; recover s from q's parametrization
        let s = if a == b {
            Rational::zero()
        } else {
            (&t0 - &a) / (&b - &a)
        };
        return Hit::Point { t: t0, s };
    }
    Hit::Overlap { t0, t1 }
}

pub fn intersect2(p0: &Point2, p1: &Point2, q0: &Point2, q1: &Point2) -> Hit {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let w = q0 - p0;
    let den = d1.cross(&d2);
    if !den.is_zero() {
        let t = w.cross(&d2) / &den;
        let s = w.cross(&d1) / &den;
        if unit_interval(&t) && unit_interval(&s) {
            Hit::Point { t, s }
        } else {
            Hit::None
        }
    } else if !w.cross(&d1).is_zero() {
        Hit::None
    } else {
        let len = d1.dot(&d1);
        let a = w.dot(&d1) / &len;
        let b = (q1 - p0).dot(&d1) / &len;
        collinear_hit(a, b)
    }
}

pub fn intersect3(p0: &Point3, p1: &Point3, q0: &Point3, q1: &Point3) -> Hit {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let w = q0 - p0;
    let n = d1.cross(&d2);
    if !n.is_zero() {
        if !w.dot(&n).is_zero() {
            return Hit::None;
        }
        let nn = n.norm_sq();
        let t = w.cross(&d2).dot(&n) / &nn;
        let s = w.cross(&d1).dot(&n) / &nn;
        if unit_interval(&t) && unit_interval(&s) {
            Hit::Point { t, s }
        } else {
            Hit::None
        }
    } else if !w.cross(&d1).is_zero() {
        Hit::None
    } else {
        let len = d1.norm_sq();
        let a = w.dot(&d1) / &len;
        let b = (q1 - p0).dot(&d1) / &len;
        collinear_hit(a, b)
    }
}

/// Squared distance from `p` to the closed segment `ab`.
pub fn point_segment_dist_sq(p: &Point3, a: &Point3, b: &Point3) -> Rational {
    let d = b - a;
    let len = d.norm_sq();
    if len.is_zero() {
        return p.dist_sq(a);
    }
    let t = (p - a).dot(&d) / &len;
    let t = t.max(Rational::zero()).min(Rational::one());
    p.dist_sq(&Point3::lerp(a, b, &t))
}

pub fn point_on_segment(p: &Point3, a: &Point3, b: &Point3) -> bool {
    point_segment_dist_sq(p, a, b).is_zero()
}

/// Axis-aligned bounding box as `(min, max)` per coordinate.
pub fn bbox3<'a>(pts: impl IntoIterator<Item = &'a Point3>) -> Option<(Point3, Point3)> {
    let mut it = pts.into_iter();
    let first = it.next()?;
    let mut lo = first.clone();
    let mut hi = first.clone();
    for p in it {
        for i in 0..3 {
            if p[i] < lo[i] {
                lo.0[i] = p[i].clone();
            }
            if p[i] > hi[i] {
                hi.0[i] = p[i].clone();
            }
        }
    }
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: i64, y: i64) -> Point2 {
        Point2::new(int(x), int(y))
    }

    #[test]
    fn proper_crossing_2d() {
        let h = intersect2(&p2(0, 0), &p2(2, 2), &p2(0, 2), &p2(2, 0));
        assert_eq!(
            h,
            Hit::Point {
                t: rat(1, 2),
                s: rat(1, 2)
            }
        );
    }

    #[test]
    fn collinear_cases_2d() {
        let h = intersect2(&p2(0, 0), &p2(2, 0), &p2(1, 0), &p2(3, 0));
        assert_eq!(
            h,
            Hit::Overlap {
                t0: rat(1, 2),
                t1: int(1)
            }
        );
        let touch = intersect2(&p2(0, 0), &p2(2, 0), &p2(2, 0), &p2(3, 0));
        assert_eq!(
            touch,
            Hit::Point {
                t: int(1),
                s: int(0)
            }
        );
        let apart = intersect2(&p2(0, 0), &p2(1, 0), &p2(2, 0), &p2(3, 0));
        assert_eq!(apart, Hit::None);
        let parallel = intersect2(&p2(0, 0), &p2(1, 0), &p2(0, 1), &p2(1, 1));
        assert_eq!(parallel, Hit::None);
    }

    #[test]
    fn skew_and_touching_3d() {
        let a = Point3::from_ratios([(0, 1), (0, 1), (0, 1)]);
        let b = Point3::from_ratios([(1, 1), (0, 1), (0, 1)]);
        let c = Point3::from_ratios([(1, 2), (-1, 1), (1, 1)]);
        let d = Point3::from_ratios([(1, 2), (1, 1), (1, 1)]);
        assert_eq!(intersect3(&a, &b, &c, &d), Hit::None);
        let c0 = Point3::from_ratios([(1, 2), (-1, 1), (0, 1)]);
        let d0 = Point3::from_ratios([(1, 2), (1, 1), (0, 1)]);
        assert_eq!(
            intersect3(&a, &b, &c0, &d0),
            Hit::Point {
                t: rat(1, 2),
                s: rat(1, 2)
            }
        );
    }

    #[test]
    fn distance_to_segment() {
        let a = Point3::from_ratios([(0, 1), (0, 1), (0, 1)]);
        let b = Point3::from_ratios([(2, 1), (0, 1), (0, 1)]);
        let p = Point3::from_ratios([(1, 1), (1, 1), (0, 1)]);
        assert_eq!(point_segment_dist_sq(&p, &a, &b), int(1));
        let q = Point3::from_ratios([(3, 1), (0, 1), (0, 1)]);
        assert_eq!(point_segment_dist_sq(&q, &a, &b), int(1));
        assert!(point_on_segment(
            &Point3::from_ratios([(1, 3), (0, 1), (0, 1)]),
            &a,
            &b
        ));
    }
}
