//! Six-partition points: a center with three concurrent lines whose six open
//! regions each hold at least `n/6 - 1` points.
//!
//! Candidates come from a floating-point Buck–Buck style construction (two
//! halving lines meeting in a sixth of the points, a third line halving the
//! opposite thirds), refined by jitter and, for small inputs, by scanning
//! arrangement cells. Floating point only proposes candidates; acceptance is
//! decided by an exact test that chooses the best three lines at the center.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::LineArrangement;
use crate::geom::{ApexFrame, Rational, RationalPoint};
use crate::points::ColoredPointSet;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixPartition {
    #[serde(with = "crate::record::rational_point")]
    pub center: RationalPoint,
    /// Directions of the three lines, as integer vectors.
    #[serde(with = "directions_serde")]
    pub directions: [[BigInt; 2]; 3],
    /// Points in each open region, counterclockwise from the ray along the
    /// first direction.
    pub counts: [usize; 6],
}

mod directions_serde {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(d: &[[BigInt; 2]; 3], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[String; 2]> = d
            .iter()
            .map(|[x, y]| [x.to_string(), y.to_string()])
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[[BigInt; 2]; 3], D::Error> {
        let v = <Vec<[String; 2]>>::deserialize(d)?;
        let parse = |s: &str| s.parse::<BigInt>().map_err(D::Error::custom);
        if v.len() != 3 {
            return Err(D::Error::custom("expected three directions"));
        }
        Ok([
            [parse(&v[0][0])?, parse(&v[0][1])?],
            [parse(&v[1][0])?, parse(&v[1][1])?],
            [parse(&v[2][0])?, parse(&v[2][1])?],
        ])
    }
}

/// Smallest count every region must reach: the least integer `c` with
/// `6 c >= n - 6`.
pub fn required_per_region(n: usize) -> usize {
    n.saturating_sub(6).div_ceil(6)
}

/// Counts points per open region and checks the six-region invariant.
/// Returns `None` when a point lies on one of the lines, the center lies on a
/// pair line, or some region is short.
pub fn verify_six_partition(set: &ColoredPointSet, sp: &SixPartition) -> Option<[usize; 6]> {
    let frame = ApexFrame::new(&sp.center, set.positions());
    frame.check_off_lines().ok()?;
    let counts = region_counts(&frame, set.n(), &sp.directions)?;
    let q = required_per_region(set.n());
    counts.iter().all(|&c| c >= q).then_some(counts)
}

fn region_counts(frame: &ApexFrame, n: usize, dirs: &[[BigInt; 2]; 3]) -> Option<[usize; 6]> {
    // Six rays sorted counterclockwise starting at dirs[0].
    let mut rays: Vec<[BigInt; 2]> = Vec::with_capacity(6);
    for d in dirs {
        rays.push(d.clone());
        rays.push([-&d[0], -&d[1]]);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let c = &dirs[i][0] * &dirs[j][1] - &dirs[i][1] * &dirs[j][0];
            if c.is_zero() {
                return None;
            }
        }
    }
    let base = rays[0].clone();
    let half = |v: &[BigInt; 2]| {
        let c = &base[0] * &v[1] - &base[1] * &v[0];
        let d = &base[0] * &v[0] + &base[1] * &v[1];
        if c > BigInt::zero() || (c.is_zero() && d > BigInt::zero()) {
            0
        } else {
            1
        }
    };
    rays.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let c = &a[0] * &b[1] - &a[1] * &b[0];
            BigInt::zero().cmp(&c)
        })
    });
    let pattern = |v: &[BigInt; 2]| -> Option<u8> {
        let mut m = 0u8;
        for (k, d) in dirs.iter().enumerate() {
            let c = &d[0] * &v[1] - &d[1] * &v[0];
            if c.is_zero() {
                return None;
            }
            if c > BigInt::zero() {
                m |= 1 << k;
            }
        }
        Some(m)
    };
    let mut sector_pattern = [0u8; 6];
    for s in 0..6 {
        let (a, b) = (&rays[s], &rays[(s + 1) % 6]);
        let mid = [&a[0] + &b[0], &a[1] + &b[1]];
        sector_pattern[s] = pattern(&mid)?;
    }
    let mut counts = [0usize; 6];
    for i in 0..n {
        let v = frame.vector(i);
        let p = pattern(&v)?;
        let s = sector_pattern.iter().position(|&sp| sp == p)?;
        counts[s] += 1;
    }
    Some(counts)
}

/// Exact test at a fixed center: finds three lines through `p` meeting the
/// six-region bound if any exist. `O(n log n)`.
pub fn six_partition_at(set: &ColoredPointSet, p: &RationalPoint) -> Result<Option<SixPartition>> {
    let n = set.n();
    let frame = ApexFrame::new(p, set.positions());
    let proj = frame.projective_order()?;
    let q = required_per_region(n);
    let upper = |idx: usize| -> [BigInt; 2] {
        let (id, lower) = proj[idx];
        let v = frame.vector(id);
        if lower {
            [-&v[0], -&v[1]]
        } else {
            v
        }
    };
    let gap_dir = |c: usize| -> [BigInt; 2] {
        if c == 0 {
            let (a, b) = (upper(n - 1), upper(0));
            [&a[0] - &b[0], &a[1] - &b[1]]
        } else {
            let (a, b) = (upper(c - 1), upper(c));
            [&a[0] + &b[0], &a[1] + &b[1]]
        }
    };
    let directions = if n < 3 {
        let mut picked = Vec::new();
        for cand in [
            (1, 0),
            (0, 1),
            (1, 1),
            (1, -1),
            (2, 1),
            (1, 2),
            (2, -1),
            (1, -2),
            (3, 1),
            (1, 3),
        ] {
            let d = [BigInt::from(cand.0), BigInt::from(cand.1)];
            let clear = (0..n).all(|i| {
                let v = frame.vector(i);
                !(&d[0] * &v[1] - &d[1] * &v[0]).is_zero()
            });
            if clear {
                picked.push(d);
            }
            if picked.len() == 3 {
                break;
            }
        }
        [picked[0].clone(), picked[1].clone(), picked[2].clone()]
    } else {
        let Some((c1, c2, c3)) = choose_cuts(&proj.iter().map(|&(_, l)| l).collect::<Vec<_>>(), q)
        else {
            return Ok(None);
        };
        [gap_dir(c1), gap_dir(c2), gap_dir(c3)]
    };
    let Some(counts) = region_counts(&frame, n, &directions) else {
        return Ok(None);
    };
    if counts.iter().any(|&c| c < q) {
        return Err(Error::InternalAssertion(format!(
            "six-partition cut counts {counts:?} below {q}"
        )));
    }
    Ok(Some(SixPartition {
        center: p.clone(),
        directions,
        counts,
    }))
}

/// Greedy choice of three gaps `c1 < c2 < c3` in the projective order (gap
/// `c` sits just before position `c`) such that all six sectors reach `q`.
fn choose_cuts(lower: &[bool], q: usize) -> Option<(usize, usize, usize)> {
    let n = lower.len();
    let mut p0 = vec![0usize; n + 1];
    let mut p1 = vec![0usize; n + 1];
    for i in 0..n {
        p0[i + 1] = p0[i] + !lower[i] as usize;
        p1[i + 1] = p1[i] + lower[i] as usize;
    }
    // Smallest c in (from, limit] with both side counts of [from, c) >= q.
    let first_cut = |from: usize, limit: usize| -> Option<usize> {
        let ok = |c: usize| p0[c] - p0[from] >= q && p1[c] - p1[from] >= q;
        let (mut lo, mut hi) = (from + 1, limit);
        if lo > hi || !ok(hi) {
            return None;
        }
        while lo < hi {
            let mid = (lo + hi) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    };
    for c1 in 0..n {
        let Some(c2) = first_cut(c1, n - 2) else {
            continue;
        };
        let Some(c3) = first_cut(c2, n - 1) else {
            continue;
        };
        let wrap0 = (p0[n] - p0[c3]) + p1[c1];
        let wrap1 = (p1[n] - p1[c3]) + p0[c1];
        if wrap0 >= q && wrap1 >= q {
            return Some((c1, c2, c3));
        }
    }
    None
}

/// Finds a verified six-partition point.
pub fn ceder_point(set: &ColoredPointSet) -> Result<SixPartition> {
    let n = set.n();
    let pts: Vec<(f64, f64)> = set
        .positions()
        .iter()
        .map(|p| (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0)))
        .collect();
    let span = bounding_span(&pts);
    let attempt = |x: f64, y: f64| -> Result<Option<SixPartition>> {
        if n >= 3 && !float_feasible(&pts, x, y) {
            return Ok(None);
        }
        let p = to_rational(x, y, span);
        exact_with_nudge(set, &p, span)
    };

    let mut seeds: Vec<(f64, f64)> = buck_buck_candidates(&pts);
    if seeds.is_empty() {
        let (cx, cy) = centroid(&pts);
        seeds.push((cx, cy));
    }
    for &(x, y) in &seeds {
        if let Some(sp) = attempt(x, y)? {
            return Ok(sp);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (bx, by) = seeds[0];
    for scale_exp in 3..40 {
        let scale = span * 0.5f64.powi(scale_exp / 2);
        for _ in 0..8 {
            let x = bx + rng.gen_range(-1.0..1.0) * scale;
            let y = by + rng.gen_range(-1.0..1.0) * scale;
            if let Some(sp) = attempt(x, y)? {
                return Ok(sp);
            }
        }
    }
    if (2..=30).contains(&n) {
        let arr = LineArrangement::build(set)?;
        for f in 0..arr.num_faces() {
            if let Some(sp) = six_partition_at(set, &arr.sample(f))? {
                return Ok(sp);
            }
        }
    }
    if n < 2 {
        let p = to_rational(seeds[0].0 + 1.0, seeds[0].1 + 0.5, span);
        if let Some(sp) = six_partition_at(set, &p)? {
            return Ok(sp);
        }
    }
    Err(Error::CederNotFound)
}

fn exact_with_nudge(
    set: &ColoredPointSet,
    p: &RationalPoint,
    span: f64,
) -> Result<Option<SixPartition>> {
    let unit =
        Rational::new(BigInt::from(1), BigInt::from(1u64 << 20)) * float_rational(span.max(1.0));
    let mut cur = p.clone();
    for step in 0..8i64 {
        match six_partition_at(set, &cur) {
            Ok(found) => return Ok(found),
            Err(Error::ApexOnLine(..)) | Err(Error::ApexAtPoint(_)) => {
                let dx = Rational::from_integer(BigInt::from(2 * step + 1)) * &unit
                    / Rational::from_integer(BigInt::from(7));
                let dy = Rational::from_integer(BigInt::from(3 * step + 2)) * &unit
                    / Rational::from_integer(BigInt::from(11));
                cur = RationalPoint::new(&p.x + dx, &p.y + dy);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

fn float_rational(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(|| Rational::from_integer(BigInt::from(1)))
}

/// Rounds to a dyadic grid fine relative to the point spread.
fn to_rational(x: f64, y: f64, span: f64) -> RationalPoint {
    let bits = span.max(1.0).log2().ceil() as i32;
    let k = (36 - bits).clamp(0, 60);
    let scale = 2f64.powi(k);
    let den = BigInt::from(1u64) << k as usize;
    let conv = |v: f64| {
        let num = BigInt::from((v * scale).round() as i128);
        Rational::new(num, den.clone())
    };
    RationalPoint::new(conv(x), conv(y))
}

fn bounding_span(pts: &[(f64, f64)]) -> f64 {
    if pts.is_empty() {
        return 1.0;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    (x1 - x0).max(y1 - y0).max(1.0)
}

fn centroid(pts: &[(f64, f64)]) -> (f64, f64) {
    if pts.is_empty() {
        return (0.5, 0.5);
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    (sx / n + 0.25, sy / n + 0.125)
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Offset `c` of the line `cross(u, x) = c` with `n - n/2` points on its left.
fn halving_offset(u: (f64, f64), pts: &[(f64, f64)], keys: &mut Vec<f64>) -> f64 {
    keys.clear();
    keys.extend(pts.iter().map(|&x| cross(u, x)));
    keys.sort_by(|a, b| a.total_cmp(b));
    let h = pts.len() / 2;
    if h == 0 {
        keys[0] - 1.0
    } else {
        0.5 * (keys[h - 1] + keys[h])
    }
}

struct Config {
    center: (f64, f64),
    imbalance: i64,
}

/// Halving line at `theta`, a second halving line turned so that the sector
/// between their positive rays holds a sixth of the points, and the
/// imbalance of the opposite third across the line halving the adjacent one.
fn configure(pts: &[(f64, f64)], theta: f64, keys: &mut Vec<f64>) -> Option<Config> {
    let n = pts.len();
    let target = n.div_ceil(6);
    let u1 = (theta.cos(), theta.sin());
    let c1 = halving_offset(u1, pts, keys);
    let left1: Vec<bool> = pts.iter().map(|&x| cross(u1, x) > c1).collect();
    let eval = |psi: f64, keys: &mut Vec<f64>| {
        let u2 = ((theta + psi).cos(), (theta + psi).sin());
        let c2 = halving_offset(u2, pts, keys);
        let a = pts
            .iter()
            .zip(&left1)
            .filter(|&(&x, &l)| l && cross(u2, x) < c2)
            .count();
        (a, u2, c2)
    };
    let (mut lo, mut hi) = (1e-9, std::f64::consts::PI - 1e-9);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if eval(mid, keys).0 >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (_, u2, c2) = eval(hi, keys);
    let det = cross(u1, u2);
    if det.abs() < 1e-12 {
        return None;
    }
    let px = (c1 * u2.0 - u1.0 * c2) / det;
    let py = (u2.1 * c1 - u1.1 * c2) / det;
    let p = (px, py);
    let mut b_dirs: Vec<(f64, f64)> = Vec::new();
    let mut d_dirs: Vec<(f64, f64)> = Vec::new();
    for (&x, &l1) in pts.iter().zip(&left1) {
        let v = (x.0 - p.0, x.1 - p.1);
        let l2 = cross(u2, x) > c2;
        if l1 && l2 {
            b_dirs.push(v);
        } else if !l1 && !l2 {
            d_dirs.push(v);
        }
    }
    if b_dirs.len() < 2 {
        return Some(Config {
            center: p,
            imbalance: 0,
        });
    }
    let ang = |v: &(f64, f64)| {
        // Angle measured from u1, in [0, 2pi).
        let a = cross(u1, *v).atan2(u1.0 * v.0 + u1.1 * v.1);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    };
    b_dirs.sort_by(|a, b| ang(a).total_cmp(&ang(b)));
    let m = b_dirs.len() / 2;
    let (a, b) = (b_dirs[m - 1], b_dirs[m]);
    let na = a.0.hypot(a.1).max(1e-300);
    let nb = b.0.hypot(b.1).max(1e-300);
    let v3 = (a.0 / na + b.0 / nb, a.1 / na + b.1 / nb);
    let left3 = d_dirs.iter().filter(|&&v| cross(v3, v) > 0.0).count() as i64;
    let right3 = d_dirs.len() as i64 - left3;
    Some(Config {
        center: p,
        imbalance: left3 - right3,
    })
}

/// Centers from the configurations along a half-turn of `theta`, refined by
/// bisection where the imbalance changes sign. Best candidates first.
fn buck_buck_candidates(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = pts.len();
    if n < 6 {
        return Vec::new();
    }
    let mut keys = Vec::with_capacity(n);
    let samples = 24;
    let step = std::f64::consts::PI / samples as f64;
    let mut grid: Vec<(f64, Config)> = Vec::new();
    for s in 0..=samples {
        let theta = 0.1 + s as f64 * step;
        if let Some(c) = configure(pts, theta, &mut keys) {
            grid.push((theta, c));
        }
    }
    let mut found: Vec<(i64, (f64, f64))> = Vec::new();
    for w in grid.windows(2) {
        let (t0, c0) = (&w[0].0, &w[0].1);
        let (t1, c1) = (&w[1].0, &w[1].1);
        found.push((c0.imbalance.abs(), c0.center));
        if c0.imbalance.signum() * c1.imbalance.signum() <= 0 {
            let (mut lo, mut hi) = (*t0, *t1);
            let mut lo_sign = c0.imbalance.signum();
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                let Some(cm) = configure(pts, mid, &mut keys) else {
                    break;
                };
                found.push((cm.imbalance.abs(), cm.center));
                if cm.imbalance == 0 {
                    break;
                }
                if cm.imbalance.signum() == lo_sign {
                    lo = mid;
                    lo_sign = cm.imbalance.signum();
                } else {
                    hi = mid;
                }
            }
        }
    }
    found.sort_by_key(|a| a.0);
    found.into_iter().map(|(_, c)| c).collect()
}

/// Floating-point version of the exact test, used to skip hopeless candidates.
fn float_feasible(pts: &[(f64, f64)], x: f64, y: f64) -> bool {
    let n = pts.len();
    let mut items: Vec<(f64, bool)> = pts
        .iter()
        .map(|&(px, py)| {
            let (vx, vy) = (px - x, py - y);
            let lower = vy < 0.0 || (vy == 0.0 && vx < 0.0);
            let (ux, uy) = if lower { (-vx, -vy) } else { (vx, vy) };
            (uy.atan2(ux), lower)
        })
        .collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let lower: Vec<bool> = items.iter().map(|&(_, l)| l).collect();
    choose_cuts(&lower, required_per_region(n)).is_some()
}

/// Projective-order side bits of the exact frame; exposed for tests.
pub fn projective_sides(set: &ColoredPointSet, p: &RationalPoint) -> Result<Vec<bool>> {
    Ok(ApexFrame::new(p, set.positions())
        .projective_order()?
        .into_iter()
        .map(|(_, l)| l)
        .collect())
}
