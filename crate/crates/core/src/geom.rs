//! Exact planar primitives: points, orientation, hulls, angular order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{self, Exact};
use crate::Error;

pub type Rational = BigRational;

/// Point with integer coordinates.
///
/// A small-coordinate copy is cached so that orientation tests on typical
/// inputs never allocate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(BigInt, BigInt)", into = "(BigInt, BigInt)")]
pub struct Point {
    pub x: BigInt,
    pub y: BigInt,
    small: Option<(i64, i64)>,
}

impl From<(BigInt, BigInt)> for Point {
    fn from((x, y): (BigInt, BigInt)) -> Self {
        Point::new(x, y)
    }
}

impl From<Point> for (BigInt, BigInt) {
    fn from(p: Point) -> Self {
        (p.x, p.y)
    }
}

impl Point {
    pub fn new(x: BigInt, y: BigInt) -> Self {
        let small = match (x.to_i64(), y.to_i64()) {
            (Some(a), Some(b)) if a.unsigned_abs() < 1 << 61 && b.unsigned_abs() < 1 << 61 => {
                Some((a, b))
            }
            _ => None,
        };
        Point { x, y, small }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Point::new(BigInt::from(x), BigInt::from(y))
    }

    pub fn small(&self) -> Option<(i64, i64)> {
        self.small
    }

    pub fn to_rational(&self) -> RationalPoint {
        RationalPoint::from_ints(self.x.clone(), self.y.clone())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Point with exact rational coordinates. Arises as arrangement-cell samples
/// and as six-partition centers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        RationalPoint { x, y }
    }

    pub fn from_ints(x: BigInt, y: BigInt) -> Self {
        RationalPoint {
            x: Rational::from_integer(x),
            y: Rational::from_integer(y),
        }
    }

    /// Homogeneous form `(X, Y, W)` with `W > 0` and `x = X/W`, `y = Y/W`.
    pub fn homogeneous(&self) -> (BigInt, BigInt, BigInt) {
        let w = self.x.denom().lcm(self.y.denom());
        let xs = self.x.numer() * (&w / self.x.denom());
        let ys = self.y.numer() * (&w / self.y.denom());
        (xs, ys, w)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Renders a rational as `num/den` (denominator always present).
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

impl Orientation {
    pub fn from_sign(s: i8) -> Self {
        match s.cmp(&0) {
            Ordering::Greater => Orientation::CounterClockwise,
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Anything that can be written in homogeneous coordinates with positive weight.
pub trait Homogeneous {
    fn homogeneous(&self) -> (BigInt, BigInt, BigInt);
}

impl Homogeneous for Point {
    fn homogeneous(&self) -> (BigInt, BigInt, BigInt) {
        (self.x.clone(), self.y.clone(), BigInt::one())
    }
}

impl Homogeneous for RationalPoint {
    fn homogeneous(&self) -> (BigInt, BigInt, BigInt) {
        RationalPoint::homogeneous(self)
    }
}

/// Sign of `(b - a) x (c - a)` for integer points.
pub fn orient_sign(a: &Point, b: &Point, c: &Point) -> i8 {
    if let (Some(a), Some(b), Some(c)) = (a.small, b.small, c.small) {
        let v = (b.0 as i128 - a.0 as i128) * (c.1 as i128 - a.1 as i128)
            - (b.1 as i128 - a.1 as i128) * (c.0 as i128 - a.0 as i128);
        return v.signum() as i8;
    }
    let v = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    scalar::sign(&v)
}

/// Orientation of three points given in any mix of integer and rational form.
pub fn orient<A: Homogeneous, B: Homogeneous, C: Homogeneous>(a: &A, b: &B, c: &C) -> Orientation {
    let (xa, ya, wa) = a.homogeneous();
    let (xb, yb, wb) = b.homogeneous();
    let (xc, yc, wc) = c.homogeneous();
    // All weights are positive, so the determinant sign is the orientation.
    let det = &xa * (&yb * &wc - &yc * &wb) - &ya * (&xb * &wc - &xc * &wb)
        + &wa * (&xb * &yc - &xc * &yb);
    Orientation::from_sign(scalar::sign(&det))
}

/// Convex polygon in counterclockwise order. Sizes 0, 1 and 2 stand for the
/// empty set, a point and a segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolygon {
    /// Indices into the slice the hull was computed from.
    pub indices: Vec<usize>,
    pub vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Closed containment.
    pub fn contains(&self, q: &Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == q,
            2 => on_segment(&self.vertices[0], &self.vertices[1], q),
            m => {
                (0..m).all(|i| orient_sign(&self.vertices[i], &self.vertices[(i + 1) % m], q) >= 0)
            }
        }
    }
}

fn on_segment(a: &Point, b: &Point, q: &Point) -> bool {
    orient_sign(a, b, q) == 0
        && q.x >= a.x.clone().min(b.x.clone())
        && q.x <= a.x.clone().max(b.x.clone())
        && q.y >= a.y.clone().min(b.y.clone())
        && q.y <= a.y.clone().max(b.y.clone())
}

/// Andrew's monotone chain. Collinear boundary points are dropped.
pub fn convex_hull(pts: &[Point]) -> ConvexPolygon {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| (&pts[i].x, &pts[i].y).cmp(&(&pts[j].x, &pts[j].y)));
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() <= 2 {
        return ConvexPolygon {
            vertices: idx.iter().map(|&i| pts[i].clone()).collect(),
            indices: idx,
        };
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && orient_sign(
                    &pts[hull[hull.len() - 2]],
                    &pts[hull[hull.len() - 1]],
                    &pts[i],
                ) <= 0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    ConvexPolygon {
        vertices: hull.iter().map(|&i| pts[i].clone()).collect(),
        indices: hull,
    }
}

/// Exact squared Euclidean distance from `q` to the closed region of `hull`.
pub fn squared_distance_to_hull(q: &Point, hull: &ConvexPolygon) -> Result<Rational, Error> {
    let m = hull.len();
    if m == 0 {
        return Err(Error::EmptyHull);
    }
    if hull.contains(q) {
        return Ok(Rational::zero());
    }
    let v = &hull.vertices;
    let mut best = point_dist2(q, &v[0]);
    if m >= 2 {
        let edges = if m == 2 { 1 } else { m };
        for i in 0..edges {
            let d = segment_dist2(q, &v[i], &v[(i + 1) % m]);
            if d < best {
                best = d;
            }
        }
    }
    Ok(best)
}

fn point_dist2(a: &Point, b: &Point) -> Rational {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    Rational::from_integer(&dx * &dx + &dy * &dy)
}

fn segment_dist2(q: &Point, a: &Point, b: &Point) -> Rational {
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    let wx = &q.x - &a.x;
    let wy = &q.y - &a.y;
    let t = &wx * &dx + &wy * &dy;
    let len2 = &dx * &dx + &dy * &dy;
    if !t.is_positive() {
        return point_dist2(q, a);
    }
    if t >= len2 {
        return point_dist2(q, b);
    }
    let c = &dx * &wy - &dy * &wx;
    Rational::new(&c * &c, len2)
}

/// `ceil(alpha * m)` in exact integer arithmetic, for `alpha` in `[0, 1/2]`.
pub fn ceil_scale(alpha: &Rational, m: usize) -> Result<usize, Error> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if alpha.is_negative() || alpha > &half {
        return Err(Error::AlphaOutOfRange(rational_to_string(alpha)));
    }
    let num = alpha.numer() * BigInt::from(m);
    let v = num.div_ceil(alpha.denom());
    Ok(v.to_usize().expect("ceil_scale result bounded by m"))
}

/// Points seen from a rational apex, as integer vectors `W * (p - apex)`.
///
/// Every angular predicate around the apex reduces to signs of cross and dot
/// products of these vectors.
#[derive(Clone, Debug)]
pub struct ApexFrame {
    lane: Lane,
}

#[derive(Clone, Debug)]
enum Lane {
    Small(Vec<[i128; 2]>),
    Big(Vec<[BigInt; 2]>),
}

macro_rules! on_lane {
    ($self:expr, $v:ident => $body:expr) => {
        match &$self.lane {
            Lane::Small($v) => $body,
            Lane::Big($v) => $body,
        }
    };
}

impl ApexFrame {
    pub fn new(apex: &RationalPoint, pts: &[Point]) -> Self {
        let (ax, ay, w) = apex.homogeneous();
        let vecs: Vec<[BigInt; 2]> = pts
            .iter()
            .map(|p| [&p.x * &w - &ax, &p.y * &w - &ay])
            .collect();
        let lane = scalar::with_lane(
            &vecs,
            |s| Lane::Small(s.to_vec()),
            |b| Lane::Big(b.to_vec()),
        );
        ApexFrame { lane }
    }

    pub fn len(&self) -> usize {
        on_lane!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sign of `orient(apex, p_i, p_j)`.
    pub fn cross_sign(&self, i: usize, j: usize) -> i8 {
        on_lane!(self, v => scalar::sign(&scalar::cross(&v[i][0], &v[i][1], &v[j][0], &v[j][1])))
    }

    pub fn dot_sign(&self, i: usize, j: usize) -> i8 {
        on_lane!(self, v => scalar::sign(&scalar::dot(&v[i][0], &v[i][1], &v[j][0], &v[j][1])))
    }

    pub fn is_apex(&self, i: usize) -> bool {
        on_lane!(self, v => v[i][0].is_zero() && v[i][1].is_zero())
    }

    /// Clockwise order starting from the westward ray. Fails when the apex
    /// coincides with a point or two points share a direction.
    pub fn clockwise_order(&self) -> Result<Vec<usize>, Error> {
        on_lane!(self, v => clockwise_order_lane(v))
    }

    /// Checks that the apex lies on no line through two of the points.
    pub fn check_off_lines(&self) -> Result<(), Error> {
        on_lane!(self, v => check_off_lines_lane(v))
    }

    /// Projective order: points sorted by the angle of their direction modulo
    /// a half-turn, each tagged with whether its true direction lies in the
    /// lower half (`true`) or the upper half (`false`).
    pub fn projective_order(&self) -> Result<Vec<(usize, bool)>, Error> {
        on_lane!(self, v => projective_order_lane(v))
    }

    /// Vector of point `i` relative to the apex.
    pub fn vector(&self, i: usize) -> [BigInt; 2] {
        on_lane!(self, v => [v[i][0].to_big(), v[i][1].to_big()])
    }
}

fn cw_half<T: Exact>(v: &[T; 2]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_negative()) {
        0
    } else {
        1
    }
}

pub(crate) fn cw_cmp<T: Exact>(a: &[T; 2], b: &[T; 2]) -> Ordering {
    cw_half(a).cmp(&cw_half(b)).then_with(|| {
        // b clockwise of a  <=>  cross(a, b) < 0
        let c = scalar::cross(&a[0], &a[1], &b[0], &b[1]);
        scalar::sign(&c).cmp(&0)
    })
}

fn clockwise_order_lane<T: Exact>(v: &[[T; 2]]) -> Result<Vec<usize>, Error> {
    if let Some(i) = v.iter().position(|p| p[0].is_zero() && p[1].is_zero()) {
        return Err(Error::ApexAtPoint(i));
    }
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| cw_cmp(&v[i], &v[j]).then(i.cmp(&j)));
    for w in 0..idx.len().saturating_sub(1) {
        let (i, j) = (idx[w], idx[w + 1]);
        if cw_cmp(&v[i], &v[j]) == Ordering::Equal {
            return Err(Error::ApexOnLine(i.min(j), i.max(j)));
        }
    }
    Ok(idx)
}

fn upper<T: Exact>(v: &[T; 2]) -> ([T; 2], bool) {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        (v.clone(), false)
    } else {
        ([-v[0].clone(), -v[1].clone()], true)
    }
}

fn projective_order_lane<T: Exact>(v: &[[T; 2]]) -> Result<Vec<(usize, bool)>, Error> {
    if let Some(i) = v.iter().position(|p| p[0].is_zero() && p[1].is_zero()) {
        return Err(Error::ApexAtPoint(i));
    }
    let ups: Vec<([T; 2], bool)> = v.iter().map(upper).collect();
    let mut idx: Vec<usize> = (0..v.len()).collect();
    // Within the upper half-turn, a precedes b iff b is counterclockwise of a.
    let cmp = |i: usize, j: usize| {
        let (a, b) = (&ups[i].0, &ups[j].0);
        let c = scalar::cross(&a[0], &a[1], &b[0], &b[1]);
        scalar::sign(&c).cmp(&0).reverse()
    };
    idx.sort_by(|&i, &j| cmp(i, j).then(i.cmp(&j)));
    for w in 0..idx.len().saturating_sub(1) {
        let (i, j) = (idx[w], idx[w + 1]);
        if cmp(i, j) == Ordering::Equal {
            return Err(Error::ApexOnLine(i.min(j), i.max(j)));
        }
    }
    Ok(idx.into_iter().map(|i| (i, ups[i].1)).collect())
}

fn check_off_lines_lane<T: Exact>(v: &[[T; 2]]) -> Result<(), Error> {
    projective_order_lane(v).map(|_| ())
}

/// Clockwise circular order of `pts` around `apex`.
pub fn angular_order(apex: &RationalPoint, pts: &[Point]) -> Result<Vec<usize>, Error> {
    ApexFrame::new(apex, pts).clockwise_order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_i64(x, y)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn orient_examples() {
        assert_eq!(
            orient(&p(0, 0), &p(1, 0), &p(0, 1)),
            Orientation::CounterClockwise
        );
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(2, 2)), Orientation::Collinear);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 1)), Orientation::Clockwise);
    }

    #[test]
    fn orient_mixes_rational_and_integer_points() {
        let r = RationalPoint::new(q(1, 2), q(1, 3));
        assert_eq!(
            orient(&p(0, 0), &p(1, 0), &r),
            Orientation::CounterClockwise
        );
        let on = RationalPoint::new(q(1, 2), q(1, 2));
        assert_eq!(orient(&p(0, 0), &p(1, 1), &on), Orientation::Collinear);
    }

    #[test]
    fn big_coordinates_take_the_slow_path() {
        let big = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 40);
        let a = Point::new(big.clone(), BigInt::zero());
        let b = Point::new(big.clone(), big.clone());
        assert!(a.small().is_none());
        assert_eq!(orient_sign(&p(0, 0), &a, &b), 1);
    }

    #[test]
    fn hull_examples() {
        let tri = [p(0, 0), p(4, 0), p(2, 3)];
        let h = convex_hull(&tri);
        assert_eq!(h.indices, vec![0, 1, 2]);

        let quad = [p(0, 0), p(4, 0), p(2, 1), p(2, 3)];
        let h = convex_hull(&quad);
        assert_eq!(h.len(), 3);
        assert!(!h.indices.contains(&2));

        let single = convex_hull(&[p(0, 0)]);
        assert_eq!(single.len(), 1);
        assert!(convex_hull(&[]).is_empty());
    }

    #[test]
    fn hull_of_collinear_points_is_a_segment() {
        let h = convex_hull(&[p(0, 0), p(1, 1), p(3, 3), p(2, 2)]);
        assert_eq!(h.vertices, vec![p(0, 0), p(3, 3)]);
        assert!(h.contains(&p(1, 1)));
        assert!(!h.contains(&p(4, 4)));
    }

    #[test]
    fn angular_order_example() {
        let pts = [p(0, 0), p(4, 0), p(2, 3), p(2, -3)];
        let order = angular_order(&p(2, 0).to_rational(), &pts).unwrap();
        // clockwise: north, east, south, west, up to rotation
        let start = order.iter().position(|&i| i == 2).unwrap();
        let rotated: Vec<usize> = (0..4).map(|s| order[(start + s) % 4]).collect();
        assert_eq!(rotated, vec![2, 1, 3, 0]);
    }

    #[test]
    fn angular_order_rejects_shared_direction() {
        let pts = [p(1, 1), p(2, 2), p(5, 0)];
        let err = angular_order(&p(0, 0).to_rational(), &pts).unwrap_err();
        assert_eq!(err, Error::ApexOnLine(0, 1));
    }

    #[test]
    fn angular_order_inside_triangle_is_clockwise() {
        let pts = [p(0, 0), p(4, 0), p(2, 3)];
        let apex = RationalPoint::new(q(2, 1), q(1, 1));
        let order = angular_order(&apex, &pts).unwrap();
        for w in 0..3 {
            let (a, b) = (order[w], order[(w + 1) % 3]);
            assert_eq!(orient(&apex, &pts[a], &pts[b]), Orientation::Clockwise);
        }
    }

    #[test]
    fn distance_examples() {
        let tri = convex_hull(&[p(0, 0), p(4, 0), p(2, 3)]);
        assert_eq!(
            squared_distance_to_hull(&p(2, 1), &tri).unwrap(),
            Rational::zero()
        );
        assert_eq!(squared_distance_to_hull(&p(2, 4), &tri).unwrap(), q(1, 1));
        let seg = convex_hull(&[p(0, 0), p(4, 0)]);
        assert_eq!(squared_distance_to_hull(&p(5, 0), &seg).unwrap(), q(1, 1));
        // perpendicular foot inside an edge
        assert_eq!(squared_distance_to_hull(&p(2, -2), &tri).unwrap(), q(4, 1));
        assert_eq!(
            squared_distance_to_hull(&p(0, 0), &convex_hull(&[])),
            Err(Error::EmptyHull)
        );
    }

    #[test]
    fn ceil_scale_examples() {
        assert_eq!(ceil_scale(&q(1, 3), 9).unwrap(), 3);
        assert_eq!(ceil_scale(&q(0, 1), 7).unwrap(), 0);
        assert_eq!(ceil_scale(&q(2, 5), 7).unwrap(), 3);
        assert!(matches!(
            ceil_scale(&q(3, 5), 7),
            Err(Error::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            ceil_scale(&q(-1, 5), 7),
            Err(Error::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn rational_strings_round_trip() {
        let r = q(-6, 4);
        assert_eq!(rational_to_string(&r), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(r));
        assert_eq!(parse_rational("5"), Some(q(5, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
