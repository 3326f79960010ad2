//! Validated bicolored point sets.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::geom::{orient_sign, Point};
use crate::scalar::{self, COMPACT_BITS};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn letter(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub fn from_letter(c: &str) -> Option<Color> {
        match c {
            "R" | "r" => Some(Color::Red),
            "B" | "b" => Some(Color::Blue),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredPoint {
    pub id: usize,
    pub point: Point,
    pub color: Color,
}

impl ColoredPoint {
    pub fn x(&self) -> &BigInt {
        &self.point.x
    }

    pub fn y(&self) -> &BigInt {
        &self.point.y
    }
}

/// Point set with dense ids `0..n` and no three points collinear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredPointSet {
    points: Vec<ColoredPoint>,
    positions: Vec<Point>,
    r: usize,
    b: usize,
}

impl ColoredPointSet {
    /// Builds and validates a point set.
    pub fn new(items: Vec<(Point, Color)>) -> Result<Self> {
        let set = Self::new_unchecked(items);
        set.validate_general_position()?;
        Ok(set)
    }

    /// Builds a point set without the general-position check.
    pub fn new_unchecked(items: Vec<(Point, Color)>) -> Self {
        let points: Vec<ColoredPoint> = items
            .into_iter()
            .enumerate()
            .map(|(id, (point, color))| ColoredPoint { id, point, color })
            .collect();
        let positions = points.iter().map(|p| p.point.clone()).collect();
        let r = points.iter().filter(|p| p.color == Color::Red).count();
        let b = points.len() - r;
        ColoredPointSet {
            points,
            positions,
            r,
            b,
        }
    }

    pub fn from_i64(items: &[(i64, i64, Color)]) -> Result<Self> {
        Self::new(
            items
                .iter()
                .map(|&(x, y, c)| (Point::from_i64(x, y), c))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn points(&self) -> &[ColoredPoint] {
        &self.points
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn point(&self, id: usize) -> &Point {
        &self.positions[id]
    }

    pub fn color(&self, id: usize) -> Color {
        self.points[id].color
    }

    pub fn is_red(&self, id: usize) -> bool {
        self.points[id].color == Color::Red
    }

    /// Every coordinate is bounded by `2^COMPACT_BITS`.
    pub fn is_compact(&self) -> bool {
        self.positions
            .iter()
            .all(|p| scalar::fits_bits(&p.x, COMPACT_BITS) && scalar::fits_bits(&p.y, COMPACT_BITS))
    }

    /// Checks distinctness and that no three points are collinear. Exhaustive
    /// over triples up to 200 points, sort-based beyond.
    pub fn validate_general_position(&self) -> Result<()> {
        if self.n() <= 200 {
            validate_exhaustive(&self.positions)
        } else {
            validate_sorted(&self.positions)
        }
    }
}

fn validate_exhaustive(pts: &[Point]) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            if pts[i] == pts[j] {
                return Err(Error::DuplicatePoint(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient_sign(&pts[i], &pts[j], &pts[k]) == 0 {
                    return Err(Error::CollinearTriple(i, j, k));
                }
            }
        }
    }
    Ok(())
}

/// Around each point, sorts the directions to later points modulo a half-turn;
/// a collinear triple shows up as two equal neighbours in some sort.
fn validate_sorted(pts: &[Point]) -> Result<()> {
    let n = pts.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| (&pts[i].x, &pts[i].y).cmp(&(&pts[j].x, &pts[j].y)));
    for w in idx.windows(2) {
        if pts[w[0]] == pts[w[1]] {
            return Err(Error::DuplicatePoint(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let mut worst: Option<(usize, usize, usize)> = None;
    for i in 0..n {
        let dirs: Vec<(usize, [BigInt; 2])> = (0..n)
            .filter(|&j| j != i)
            .map(|j| {
                let dx = &pts[j].x - &pts[i].x;
                let dy = &pts[j].y - &pts[i].y;
                let up = dy > BigInt::from(0) || (dy == BigInt::from(0) && dx > BigInt::from(0));
                (j, if up { [dx, dy] } else { [-dx, -dy] })
            })
            .collect();
        let cmp = |a: &[BigInt; 2], b: &[BigInt; 2]| -> Ordering {
            let c = &a[0] * &b[1] - &a[1] * &b[0];
            BigInt::from(0).cmp(&c)
        };
        let mut order: Vec<usize> = (0..dirs.len()).collect();
        order.sort_by(|&a, &b| cmp(&dirs[a].1, &dirs[b].1));
        for w in order.windows(2) {
            if cmp(&dirs[w[0]].1, &dirs[w[1]].1) == Ordering::Equal {
                let mut t = [i, dirs[w[0]].0, dirs[w[1]].0];
                t.sort_unstable();
                let t = (t[0], t[1], t[2]);
                if worst.is_none_or(|cur| t < cur) {
                    worst = Some(t);
                }
            }
        }
    }
    match worst {
        Some((a, b, c)) => Err(Error::CollinearTriple(a, b, c)),
        None => Ok(()),
    }
}
