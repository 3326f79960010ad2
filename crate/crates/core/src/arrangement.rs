//! Arrangement of all lines through two input points, as a half-edge
//! structure with one face per cell.
//!
//! Line `L` through `p_i`, `p_j` (`i < j`) is parameterised as
//! `p_i + t (p_j - p_i)`. Its vertices are the distinct parameters at which
//! other lines cross it; edge `e` runs from vertex `e - 1` to vertex `e`, with
//! edge `0` and edge `G_L` unbounded. Half-edge `base[L] + 2e + dir` walks edge
//! `e` forwards (`dir = 0`) or backwards (`dir = 1`) and bounds the face on its
//! left.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::geom::{Point, Rational, RationalPoint};
use crate::points::ColoredPointSet;
use crate::scalar::{self, Exact};
use crate::{Error, Result};

const NONE: u32 = u32::MAX;

/// Line through two input points, `a x + b y + c = 0`, with `gcd(a, b, c) = 1`
/// and the first nonzero of `a`, `b` positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementLine {
    pub i: usize,
    pub j: usize,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl ArrangementLine {
    fn through(i: usize, j: usize, p: &Point, q: &Point) -> Self {
        let mut a = &p.y - &q.y;
        let mut b = &q.x - &p.x;
        let mut c = &p.x * &q.y - &p.y * &q.x;
        let g = a.gcd(&b).gcd(&c);
        if !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
        }
        ArrangementLine { i, j, a, b, c }
    }

    /// Sign of `a x + b y + c` at a rational point.
    pub fn side(&self, p: &RationalPoint) -> i8 {
        let (x, y, w) = p.homogeneous();
        scalar::sign(&(&self.a * x + &self.b * y + &self.c * w))
    }
}

/// How the circular order around an apex changes when the apex crosses the
/// line through `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    /// Crossing outside segment `ab`: `a` and `b` are angularly adjacent and
    /// trade places.
    Transpose { a: usize, b: usize },
    /// Crossing inside segment `ab`: the order is unchanged, only the
    /// orientation of the pair flips.
    Antipodal { a: usize, b: usize },
}

#[derive(Clone, Debug)]
pub struct LineArrangement {
    n: usize,
    pts: Vec<Point>,
    lines: Vec<ArrangementLine>,
    /// Number of vertices on each line.
    groups: Vec<u32>,
    /// Vertex index of `p_i` and `p_j` on each line.
    ga: Vec<u32>,
    gb: Vec<u32>,
    /// Half-edge offset of each line; `base[m]` is the total.
    base: Vec<u32>,
    /// Crossing lines of each line sorted by parameter, flattened.
    sorted: Vec<u32>,
    sorted_off: Vec<u32>,
    /// Start of each vertex group within `sorted`, flattened per line.
    group_start: Vec<u32>,
    group_off: Vec<u32>,
    next: Vec<u32>,
    face_of: Vec<u32>,
    face_rep: Vec<u32>,
}

/// Index of the line through `i < j` among the `n (n - 1) / 2` pair lines.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl LineArrangement {
    pub fn build(set: &ColoredPointSet) -> Result<Self> {
        let n = set.n();
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        let pts = set.positions().to_vec();
        if set.is_compact() {
            let v: Vec<[i128; 2]> = pts
                .iter()
                .map(|p| [i128::from_big(&p.x), i128::from_big(&p.y)])
                .collect();
            Ok(build_lane(&v, pts))
        } else {
            let v: Vec<[BigInt; 2]> = pts.iter().map(|p| [p.x.clone(), p.y.clone()]).collect();
            Ok(build_lane(&v, pts))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lines(&self) -> &[ArrangementLine] {
        &self.lines
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_faces(&self) -> usize {
        self.face_rep.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.next.len()
    }

    pub fn line_of(&self, h: u32) -> usize {
        self.base.partition_point(|&b| b <= h) - 1
    }

    /// `(line, edge, dir)` of a half-edge.
    pub fn decode(&self, h: u32) -> (usize, u32, u32) {
        let l = self.line_of(h);
        let off = h - self.base[l];
        (l, off / 2, off & 1)
    }

    pub fn twin(&self, h: u32) -> u32 {
        h ^ 1
    }

    pub fn next(&self, h: u32) -> u32 {
        self.next[h as usize]
    }

    pub fn face(&self, h: u32) -> usize {
        self.face_of[h as usize] as usize
    }

    /// Half-edges bounding face `f`, in boundary order.
    pub fn face_cycle(&self, f: usize) -> FaceCycle<'_> {
        let start = self.face_rep[f];
        FaceCycle {
            arr: self,
            start,
            cur: Some(start),
        }
    }

    /// Neighbouring cells of `f` with the half-edge crossed to reach them.
    pub fn neighbors(&self, f: usize) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.face_cycle(f).map(move |h| (h, self.face(h ^ 1)))
    }

    pub fn crossing(&self, h: u32) -> Crossing {
        let (l, e, _) = self.decode(h);
        let line = &self.lines[l];
        let (a, b) = (line.i, line.j);
        if self.groups[l] == 0 || (e > self.ga[l] && e <= self.gb[l]) {
            Crossing::Antipodal { a, b }
        } else {
            Crossing::Transpose { a, b }
        }
    }

    fn dest_group(&self, l: usize, e: u32, dir: u32) -> Option<u32> {
        if dir == 0 {
            (e < self.groups[l]).then_some(e)
        } else {
            if e >= 1 {
                Some(e - 1)
            } else {
                None
            }
        }
    }

    fn direction(&self, l: usize, dir: u32) -> [BigInt; 2] {
        let line = &self.lines[l];
        let (p, q) = (&self.pts[line.i], &self.pts[line.j]);
        let d = [&q.x - &p.x, &q.y - &p.y];
        if dir == 0 {
            d
        } else {
            [-&d[0], -&d[1]]
        }
    }

    /// Coordinates of vertex `g` on line `l`.
    pub fn vertex(&self, l: usize, g: u32) -> RationalPoint {
        let s = self.group_off[l] as usize;
        let first =
            self.sorted[self.sorted_off[l] as usize + self.group_start[s + g as usize] as usize];
        let line = &self.lines[l];
        let other = &self.lines[first as usize];
        let (p, q) = (&self.pts[line.i], &self.pts[line.j]);
        let (u, v) = (&self.pts[other.i], &self.pts[other.j]);
        let d = [&q.x - &p.x, &q.y - &p.y];
        let e = [&v.x - &u.x, &v.y - &u.y];
        let num = -(&e[0] * (&p.y - &u.y) - &e[1] * (&p.x - &u.x));
        let den = &e[0] * &d[1] - &e[1] * &d[0];
        let t = Rational::new(num, den);
        RationalPoint::new(
            Rational::from_integer(p.x.clone()) + &t * Rational::from_integer(d[0].clone()),
            Rational::from_integer(p.y.clone()) + &t * Rational::from_integer(d[1].clone()),
        )
    }

    /// Number of lines through vertex `g` of line `l`, including `l`.
    pub fn vertex_degree(&self, l: usize, g: u32) -> usize {
        let s = self.group_off[l] as usize + g as usize;
        (self.group_start[s + 1] - self.group_start[s]) as usize + 1
    }

    /// `1 + m + sum over vertices of (degree - 1)`: the number of cells of
    /// any arrangement with these lines and vertex degrees.
    pub fn expected_faces(&self) -> usize {
        let m = self.lines.len();
        let mut total = 1 + m;
        for l in 0..m {
            for g in 0..self.groups[l] {
                let s = self.group_off[l] as usize + g as usize;
                let range = self.sorted_off[l] as usize + self.group_start[s] as usize
                    ..self.sorted_off[l] as usize + self.group_start[s + 1] as usize;
                let members = &self.sorted[range];
                if members.iter().all(|&mm| mm as usize > l) {
                    total += members.len();
                }
            }
        }
        total
    }

    /// A point strictly inside cell `f`.
    pub fn sample(&self, f: usize) -> RationalPoint {
        let corner = self.face_cycle(f).find(|&h| {
            let (l, e, dir) = self.decode(h);
            self.dest_group(l, e, dir).is_some()
        });
        let h = match corner {
            Some(h) => h,
            None => {
                // Only parallel lines: the cell is a slab or half-plane.
                let h = self.face_rep[f];
                let (l, _, dir) = self.decode(h);
                let d = self.direction(l, dir);
                let p = &self.pts[self.lines[l].i];
                let two = BigInt::from(2);
                let x = Rational::new(&p.x * &two - &d[1], two.clone());
                let y = Rational::new(&p.y * &two + &d[0], two);
                return RationalPoint::new(x, y);
            }
        };
        let (l, e, dir) = self.decode(h);
        let v = self.vertex(l, self.dest_group(l, e, dir).unwrap());
        let a = self.endpoint_or_step(h, &v, true);
        let h2 = self.next(h);
        let c = self.endpoint_or_step(h2, &v, false);
        let three = Rational::from_integer(BigInt::from(3));
        RationalPoint::new((&a.x + &v.x + &c.x) / &three, (&a.y + &v.y + &c.y) / &three)
    }

    /// The source (`back`) or destination of `h`, or one direction step from
    /// `v` along `h` when that end is at infinity.
    fn endpoint_or_step(&self, h: u32, v: &RationalPoint, back: bool) -> RationalPoint {
        let (l, e, dir) = self.decode(h);
        let (l2, e2, dir2) = if back {
            self.decode(h ^ 1)
        } else {
            (l, e, dir)
        };
        if let Some(g) = self.dest_group(l2, e2, dir2) {
            return self.vertex(l2, g);
        }
        let d = self.direction(l, dir);
        let s = if back { -BigInt::one() } else { BigInt::one() };
        RationalPoint::new(
            &v.x + Rational::from_integer(&s * &d[0]),
            &v.y + Rational::from_integer(&s * &d[1]),
        )
    }

    /// Side bits of a point: bit `pair_index(i, j)` is set iff
    /// `orient(p_i, p_j, x) > 0`.
    pub fn side_bits(&self, x: &RationalPoint) -> Result<SideBits> {
        let mut bits = SideBits::new(self.lines.len());
        for (idx, line) in self.lines.iter().enumerate() {
            let s = crate::geom::orient(&self.pts[line.i], &self.pts[line.j], x);
            match s {
                crate::geom::Orientation::CounterClockwise => bits.set(idx, true),
                crate::geom::Orientation::Clockwise => {}
                crate::geom::Orientation::Collinear => {
                    return Err(Error::ApexOnLine(line.i, line.j))
                }
            }
        }
        Ok(bits)
    }
}

pub struct FaceCycle<'a> {
    arr: &'a LineArrangement,
    start: u32,
    cur: Option<u32>,
}

impl Iterator for FaceCycle<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let h = self.cur?;
        let nx = self.arr.next[h as usize];
        self.cur = (nx != self.start).then_some(nx);
        Some(h)
    }
}

/// Bitset of orientation signs of an apex against every pair line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SideBits {
    words: Vec<u64>,
}

impl SideBits {
    pub fn new(m: usize) -> Self {
        SideBits {
            words: vec![0; m.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }
}

fn ccw_half<T: Exact>(v: &[T; 2]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

fn build_lane<T: Exact>(v: &[[T; 2]], pts: Vec<Point>) -> LineArrangement {
    let n = v.len();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let m = pairs.len();
    let dirs: Vec<[T; 2]> = pairs
        .iter()
        .map(|&(i, j)| {
            [
                v[j][0].clone() - v[i][0].clone(),
                v[j][1].clone() - v[i][1].clone(),
            ]
        })
        .collect();

    let mut rank = vec![NONE; m * m];
    let mut sorted: Vec<u32> = Vec::with_capacity(m * m.saturating_sub(1));
    let mut sorted_off = Vec::with_capacity(m + 1);
    let mut group_start: Vec<u32> = Vec::new();
    let mut group_off = Vec::with_capacity(m + 1);
    let mut groups = vec![0u32; m];
    let mut ga = vec![NONE; m];
    let mut gb = vec![NONE; m];

    let mut keys: Vec<(T, T, u32)> = Vec::with_capacity(m);
    for l in 0..m {
        let (i, _) = pairs[l];
        let d = &dirs[l];
        keys.clear();
        for mm in 0..m {
            if mm == l {
                continue;
            }
            let e = &dirs[mm];
            let den = scalar::cross(&e[0], &e[1], &d[0], &d[1]);
            if den.is_zero() {
                continue;
            }
            let (i2, _) = pairs[mm];
            let wx = v[i][0].clone() - v[i2][0].clone();
            let wy = v[i][1].clone() - v[i2][1].clone();
            let o = scalar::cross(&e[0], &e[1], &wx, &wy);
            let (num, den) = if den.is_negative() {
                (o, -den)
            } else {
                (-o, den)
            };
            keys.push((num, den, mm as u32));
        }
        let cmp = |a: &(T, T, u32), b: &(T, T, u32)| {
            (a.0.clone() * b.1.clone()).cmp(&(b.0.clone() * a.1.clone()))
        };
        keys.sort_by(|a, b| cmp(a, b).then(a.2.cmp(&b.2)));
        sorted_off.push(sorted.len() as u32);
        group_off.push(group_start.len() as u32);
        let mut g = 0u32;
        for (idx, key) in keys.iter().enumerate() {
            if idx == 0 || cmp(&keys[idx - 1], key) != Ordering::Equal {
                if idx > 0 {
                    g += 1;
                }
                group_start.push(idx as u32);
                if key.0.is_zero() {
                    ga[l] = g;
                } else if key.0 == key.1 {
                    gb[l] = g;
                }
            }
            rank[l * m + key.2 as usize] = g;
            sorted.push(key.2);
        }
        groups[l] = if keys.is_empty() { 0 } else { g + 1 };
        group_start.push(keys.len() as u32);
    }
    sorted_off.push(sorted.len() as u32);
    group_off.push(group_start.len() as u32);

    let mut base = Vec::with_capacity(m + 1);
    let mut total = 0u32;
    for &g in &groups {
        base.push(total);
        total += 2 * (g + 1);
    }
    base.push(total);

    let mut next = vec![NONE; total as usize];
    for l in 0..m {
        let gl = groups[l];
        for e in 0..=gl {
            for dir in 0..2u32 {
                let dest = if dir == 0 {
                    (e < gl).then_some(e)
                } else {
                    if e >= 1 {
                        Some(e - 1)
                    } else {
                        None
                    }
                };
                let Some(g) = dest else { continue };
                // Reference direction: back along the arriving half-edge.
                let r = if dir == 0 {
                    [-dirs[l][0].clone(), -dirs[l][1].clone()]
                } else {
                    dirs[l].clone()
                };
                let so = sorted_off[l] as usize;
                let gs = group_off[l] as usize + g as usize;
                let members =
                    &sorted[so + group_start[gs] as usize..so + group_start[gs + 1] as usize];
                let mut best: Option<([T; 2], u32, bool)> = None;
                for &mm in members {
                    let d = &dirs[mm as usize];
                    let forward = scalar::cross(&r[0], &r[1], &d[0], &d[1]).is_negative();
                    let cand = if forward {
                        d.clone()
                    } else {
                        [-d[0].clone(), -d[1].clone()]
                    };
                    let better = match &best {
                        None => true,
                        Some((b, _, _)) => {
                            scalar::cross(&cand[0], &cand[1], &b[0], &b[1]).is_negative()
                        }
                    };
                    if better {
                        best = Some((cand, mm, forward));
                    }
                }
                let (_, mm, forward) = best.expect("vertex has a second line");
                let mm = mm as usize;
                let gm = rank[mm * m + l];
                let out = if forward {
                    base[mm] + 2 * (gm + 1)
                } else {
                    base[mm] + 2 * gm + 1
                };
                next[(base[l] + 2 * e + dir) as usize] = out;
            }
        }
    }

    // Unbounded ends, counterclockwise; parallel ends ordered right to left.
    struct End<T> {
        dir: [T; 2],
        point: usize,
        outward: u32,
        inward: u32,
    }
    let mut ends: Vec<End<T>> = Vec::with_capacity(2 * m);
    for l in 0..m {
        let gl = groups[l];
        let (i, _) = pairs[l];
        ends.push(End {
            dir: dirs[l].clone(),
            point: i,
            outward: base[l] + 2 * gl,
            inward: base[l] + 2 * gl + 1,
        });
        ends.push(End {
            dir: [-dirs[l][0].clone(), -dirs[l][1].clone()],
            point: i,
            outward: base[l] + 1,
            inward: base[l],
        });
    }
    ends.sort_by(|a, b| {
        ccw_half(&a.dir)
            .cmp(&ccw_half(&b.dir))
            .then_with(|| {
                let c = scalar::cross(&a.dir[0], &a.dir[1], &b.dir[0], &b.dir[1]);
                0i8.cmp(&scalar::sign(&c))
            })
            .then_with(|| {
                let w = [
                    v[b.point][0].clone() - v[a.point][0].clone(),
                    v[b.point][1].clone() - v[a.point][1].clone(),
                ];
                let c = scalar::cross(&a.dir[0], &a.dir[1], &w[0], &w[1]);
                0i8.cmp(&scalar::sign(&c))
            })
    });
    for k in 0..ends.len() {
        let nx = &ends[(k + 1) % ends.len()];
        next[ends[k].outward as usize] = nx.inward;
    }

    let mut face_of = vec![NONE; total as usize];
    let mut face_rep = Vec::new();
    for h in 0..total {
        if face_of[h as usize] != NONE {
            continue;
        }
        let f = face_rep.len() as u32;
        face_rep.push(h);
        let mut cur = h;
        loop {
            face_of[cur as usize] = f;
            cur = next[cur as usize];
            if cur == h {
                break;
            }
            debug_assert_eq!(face_of[cur as usize], NONE, "half-edge in two faces");
        }
    }

    let lines = pairs
        .iter()
        .map(|&(i, j)| ArrangementLine::through(i, j, &pts[i], &pts[j]))
        .collect();
    LineArrangement {
        n,
        pts,
        lines,
        groups,
        ga,
        gb,
        base,
        sorted,
        sorted_off,
        group_start,
        group_off,
        next,
        face_of,
        face_rep,
    }
}
