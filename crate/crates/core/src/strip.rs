//! Strip search: a rotating sweep of the projection direction through all
//! pair events, maintaining the linear `k`-windows of the projection order.
//!
//! The direction `d` turns counterclockwise from `+x` through a half-turn.
//! Points are ordered by `<x, d>`, ties broken by `<x, perp(d)>` with
//! `perp(d) = (-d.y, d.x)`, which is the order at a direction infinitesimally
//! past `d`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::oracle::{Island, TargetCounts};
use crate::points::ColoredPointSet;
use crate::scalar::{self, Exact};
use crate::{Error, Result};

/// Closed region between the lines through `u` and `w` orthogonal to
/// `direction`. `bounds = None` is the empty strip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strip {
    #[serde(with = "direction_serde")]
    pub direction: [BigInt; 2],
    pub bounds: Option<(usize, usize)>,
}

mod direction_serde {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(d: &[BigInt; 2], s: S) -> Result<S::Ok, S::Error> {
        [d[0].to_string(), d[1].to_string()].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[BigInt; 2], D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let parse = |v: &str| v.parse::<BigInt>().map_err(serde::de::Error::custom);
        Ok([parse(&x)?, parse(&y)?])
    }
}

impl Strip {
    fn project(&self, set: &ColoredPointSet, id: usize) -> BigInt {
        let p = set.point(id);
        &p.x * &self.direction[0] + &p.y * &self.direction[1]
    }

    pub fn members(&self, set: &ColoredPointSet) -> Vec<usize> {
        let Some((u, w)) = self.bounds else {
            return Vec::new();
        };
        let (lo, hi) = (self.project(set, u), self.project(set, w));
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        (0..set.n())
            .filter(|&x| {
                let v = self.project(set, x);
                v >= lo && v <= hi
            })
            .collect()
    }
}

pub fn strip_to_island(set: &ColoredPointSet, s: &Strip) -> Island {
    Island::from_ids(set, s.members(set)).expect("strip members are valid ids")
}

/// Linear order of projections with the red count of each window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionOrder {
    k: usize,
    order: Vec<usize>,
    pos: Vec<usize>,
    red: Vec<bool>,
    reds: Vec<usize>,
}

impl ProjectionOrder {
    fn from_order(set: &ColoredPointSet, order: Vec<usize>, k: usize) -> Self {
        let n = order.len();
        let mut pos = vec![0; n];
        for (p, &id) in order.iter().enumerate() {
            pos[id] = p;
        }
        let red: Vec<bool> = (0..n).map(|i| set.is_red(i)).collect();
        let windows = if k == 0 { 0 } else { n + 1 - k };
        let mut reds = Vec::with_capacity(windows);
        if windows > 0 {
            let mut acc: usize = order[..k].iter().filter(|&&i| red[i]).count();
            for s in 0..windows {
                reds.push(acc);
                if s + k < n {
                    acc = acc + red[order[s + k]] as usize - red[order[s]] as usize;
                }
            }
        }
        ProjectionOrder {
            k,
            order,
            pos,
            red,
            reds,
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn window_reds(&self) -> &[usize] {
        &self.reds
    }

    pub fn window(&self, s: usize) -> (usize, usize) {
        (self.order[s], self.order[s + self.k - 1])
    }

    /// Swaps the adjacent pair `(a, b)` and returns the starts of windows
    /// whose red count changed.
    pub fn advance(&mut self, a: usize, b: usize) -> Result<Vec<usize>> {
        let mut changed = Vec::new();
        self.advance_into(a, b, &mut changed)?;
        Ok(changed)
    }

    /// As [`advance`](Self::advance), appending changed windows to `changed`.
    pub fn advance_into(&mut self, a: usize, b: usize, changed: &mut Vec<usize>) -> Result<()> {
        let (pa, pb) = (self.pos[a], self.pos[b]);
        let i = pa.min(pb);
        if pa.abs_diff(pb) != 1 {
            return Err(Error::NonAdjacentSwap(a, b));
        }
        let j = i + 1;
        let (x, y) = (self.order[i], self.order[j]);
        self.order.swap(i, j);
        self.pos[x] = j;
        self.pos[y] = i;
        if self.red[x] != self.red[y] && self.k > 0 {
            let windows = self.reds.len();
            let d = self.red[y] as isize - self.red[x] as isize;
            if i + 1 >= self.k && i + 1 - self.k < windows {
                let s = i + 1 - self.k;
                self.reds[s] = (self.reds[s] as isize + d) as usize;
                changed.push(s);
            }
            if j < windows {
                self.reds[j] = (self.reds[j] as isize - d) as usize;
                changed.push(j);
            }
        }
        Ok(())
    }
}

/// Sort along `d` with the counterclockwise tie-break, from scratch.
pub fn initial_order(set: &ColoredPointSet, d: &[BigInt; 2], k: usize) -> ProjectionOrder {
    let perp = [-&d[1], d[0].clone()];
    let key = |i: usize| {
        let p = set.point(i);
        (
            &p.x * &d[0] + &p.y * &d[1],
            &p.x * &perp[0] + &p.y * &perp[1],
        )
    };
    let keys: Vec<(BigInt, BigInt)> = (0..set.n()).map(key).collect();
    let mut order: Vec<usize> = (0..set.n()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    ProjectionOrder::from_order(set, order, k)
}

/// One slope event: the direction at which `i` and `j` project equally.
#[derive(Clone, Debug)]
struct Event<T> {
    dir: [T; 2],
    i: usize,
    j: usize,
}

/// Counterclockwise angle order on the half-turn `(0, pi]`.
fn event_cmp<T: Exact>(a: &[T; 2], b: &[T; 2]) -> Ordering {
    let c = scalar::cross(&a[0], &a[1], &b[0], &b[1]);
    0i8.cmp(&scalar::sign(&c))
}

fn events_lane<T: Exact>(v: &[[T; 2]]) -> Vec<Event<T>> {
    let n = v.len();
    let mut events = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let dx = v[j][0].clone() - v[i][0].clone();
            let dy = v[j][1].clone() - v[i][1].clone();
            let mut e = [-dy, dx];
            if !(e[1].is_positive() || (e[1].is_zero() && e[0].is_negative())) {
                e = [-e[0].clone(), -e[1].clone()];
            }
            events.push(Event { dir: e, i, j });
        }
    }
    events.sort_by(|a, b| event_cmp(&a.dir, &b.dir).then((a.i, a.j).cmp(&(b.i, b.j))));
    events
}

/// State reported to sweep visitors after each group of parallel events
/// (and once before the first).
pub struct SweepStep<'a> {
    pub group: usize,
    pub direction: [BigInt; 2],
    pub order: &'a ProjectionOrder,
    /// Windows whose red count changed in this group; every window for the
    /// initial step.
    pub changed: &'a [usize],
}

/// Runs the full half-turn sweep, calling `visit` on the initial order and
/// after every tie group. Stops when `visit` returns `false`.
pub fn sweep(
    set: &ColoredPointSet,
    k: usize,
    mut visit: impl FnMut(&SweepStep<'_>) -> bool,
) -> Result<()> {
    let vecs: Vec<[BigInt; 2]> = set
        .positions()
        .iter()
        .map(|p| [p.x.clone(), p.y.clone()])
        .collect();
    let visit: &mut dyn FnMut(&SweepStep<'_>) -> bool = &mut visit;
    let fits = vecs.iter().all(|[x, y]| {
        scalar::fits_bits(x, scalar::LANE_BITS) && scalar::fits_bits(y, scalar::LANE_BITS)
    });
    if fits {
        let small: Vec<[i128; 2]> = vecs
            .iter()
            .map(|[x, y]| [i128::from_big(x), i128::from_big(y)])
            .collect();
        sweep_lane(set, &small, k, visit)
    } else {
        sweep_lane(set, &vecs, k, visit)
    }
}

fn sweep_lane<T: Exact>(
    set: &ColoredPointSet,
    v: &[[T; 2]],
    k: usize,
    visit: &mut dyn FnMut(&SweepStep<'_>) -> bool,
) -> Result<()> {
    let events = events_lane(v);
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for (idx, e) in events.iter().enumerate() {
        if idx == 0 || event_cmp(&events[idx - 1].dir, &e.dir) != Ordering::Equal {
            groups.push((idx, idx + 1));
        } else {
            groups.last_mut().expect("group started").1 = idx + 1;
        }
    }
    let big = |d: &[T; 2]| [d[0].to_big(), d[1].to_big()];
    let between = |g: usize| -> [BigInt; 2] {
        // Strictly between the directions of group g and group g + 1, where
        // the group after the last is the first one turned by a half-turn.
        let a = big(&events[groups[g].0].dir);
        let b = if g + 1 < groups.len() {
            big(&events[groups[g + 1].0].dir)
        } else {
            let f = big(&events[0].dir);
            [-&f[0], -&f[1]]
        };
        [&a[0] + &b[0], &a[1] + &b[1]]
    };
    let start_dir = match events.first() {
        None => [BigInt::from(1), BigInt::zero()],
        Some(e) => {
            let e = big(&e.dir);
            if e[1].is_zero() {
                [BigInt::zero(), BigInt::from(1)]
            } else {
                [e[0].clone() + 1, e[1].clone()]
            }
        }
    };
    let mut order = initial_order(set, &[BigInt::from(1), BigInt::zero()], k);
    let mut changed: Vec<usize> = (0..order.reds.len()).collect();
    let first = SweepStep {
        group: 0,
        direction: start_dir,
        order: &order,
        changed: &changed,
    };
    if !visit(&first) {
        return Ok(());
    }
    for (g, &(lo, hi)) in groups.iter().enumerate() {
        changed.clear();
        for e in &events[lo..hi] {
            order.advance_into(e.i, e.j, &mut changed)?;
        }
        let step = SweepStep {
            group: g + 1,
            direction: between(g),
            order: &order,
            changed: &changed,
        };
        if !visit(&step) {
            return Ok(());
        }
    }
    Ok(())
}

/// Finds a strip holding exactly the target counts.
pub fn strip_search(set: &ColoredPointSet, t: TargetCounts) -> Result<Option<Strip>> {
    t.check_against(set)?;
    let k = t.k();
    if k == 0 {
        return Ok(Some(Strip {
            direction: [BigInt::from(1), BigInt::zero()],
            bounds: None,
        }));
    }
    let mut found = None;
    sweep(set, k, |step| {
        let reds = step.order.window_reds();
        match step
            .changed
            .iter()
            .copied()
            .find(|&s| reds[s] == t.r_target)
        {
            Some(s) => {
                found = Some(Strip {
                    direction: step.direction.clone(),
                    bounds: Some(step.order.window(s)),
                });
                false
            }
            None => true,
        }
    })?;
    if let Some(s) = &found {
        let island = strip_to_island(set, s);
        if island.counts() != t {
            return Err(Error::InternalAssertion(format!(
                "strip certificate holds {:?} instead of {:?}",
                island.counts(),
                t
            )));
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::is_island;
    use crate::points::Color::{Blue as B, Red as R};

    fn alternating() -> ColoredPointSet {
        ColoredPointSet::from_i64(&[
            (0, 0, R),
            (1, 3, B),
            (2, 1, R),
            (3, 6, B),
            (4, 4, R),
            (5, 8, B),
        ])
        .unwrap()
    }

    #[test]
    fn initial_window_scan_finds_vertical_strip() {
        let s = alternating();
        let strip = strip_search(&s, TargetCounts::new(2, 1)).unwrap().unwrap();
        assert_eq!(strip.bounds, Some((0, 2)));
        let isl = strip_to_island(&s, &strip);
        assert_eq!(isl.members, vec![0, 1, 2]);
        assert!(is_island(&s, &isl.members).unwrap());
    }

    #[test]
    fn full_strip_for_everything() {
        let s = alternating();
        let strip = strip_search(&s, TargetCounts::new(3, 3)).unwrap().unwrap();
        assert_eq!(strip_to_island(&s, &strip).len(), 6);
    }

    #[test]
    fn initial_order_tie_break_and_reversal() {
        let s = ColoredPointSet::from_i64(&[(0, 5, R), (0, 1, B), (3, 2, R)]).unwrap();
        let o = initial_order(&s, &[BigInt::from(1), BigInt::zero()], 1);
        assert_eq!(o.order(), &[1, 0, 2]);
        let d = [BigInt::from(3), BigInt::from(7)];
        let fwd = initial_order(&s, &d, 1);
        let back = initial_order(&s, &[-&d[0], -&d[1]], 1);
        let mut rev = back.order().to_vec();
        rev.reverse();
        assert_eq!(fwd.order(), &rev[..]);
    }

    #[test]
    fn advance_bookkeeping() {
        let s = alternating();
        let mut o = initial_order(&s, &[BigInt::from(1), BigInt::zero()], 3);
        assert_eq!(o.window_reds(), &[2, 1, 2, 1]);
        // R at position 2, B at position 3
        let changed = o.advance(2, 3).unwrap();
        assert_eq!(changed, vec![0, 3]);
        assert_eq!(o.window_reds(), &[1, 1, 2, 2]);
        assert_eq!(o.advance(0, 5), Err(Error::NonAdjacentSwap(0, 5)));
        // order is now 0 1 3 2 4 5; ids 2 and 4 are both red
        let before = o.window_reds().to_vec();
        assert!(o.advance(2, 4).unwrap().is_empty());
        assert_eq!(before, o.window_reds());
    }

    #[test]
    fn full_sweep_reverses_and_matches_scratch() {
        let s = ColoredPointSet::from_i64(&[
            (0, 0, R),
            (9, 1, B),
            (4, 7, R),
            (6, 3, B),
            (1, 8, B),
            (11, 9, R),
            (3, 2, R),
            (4, -5, B),
        ])
        .unwrap();
        let first = initial_order(&s, &[BigInt::from(1), BigInt::zero()], 3);
        let mut last = None;
        sweep(&s, 3, |step| {
            let scratch = initial_order(&s, &step.direction, 3);
            assert_eq!(step.order, &scratch, "group {}", step.group);
            last = Some(step.order.order().to_vec());
            true
        })
        .unwrap();
        let mut rev = first.order().to_vec();
        rev.reverse();
        assert_eq!(last.unwrap(), rev);
    }

    #[test]
    fn parallel_pairs_and_shared_x_are_handled() {
        // (0,0)-(2,1) is parallel to (1,3)-(3,4); (0,0) and (0,7) share x.
        let s = ColoredPointSet::from_i64(&[(0, 0, R), (2, 1, B), (1, 3, R), (3, 4, B), (0, 7, R)])
            .unwrap();
        sweep(&s, 2, |step| {
            assert_eq!(step.order, &initial_order(&s, &step.direction, 2));
            true
        })
        .unwrap();
    }
}
