//! Convex-wedge search: depth-first traversal of the arrangement cells while
//! maintaining the circular `k`-windows around the current apex.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::{pair_index, Crossing, LineArrangement, SideBits};
use crate::geom::{ApexFrame, Rational, RationalPoint};
use crate::oracle::{Island, TargetCounts};
use crate::points::ColoredPointSet;
use crate::{Error, Result};

/// Closed region swept clockwise from ray `apex -> first` to ray
/// `apex -> last`. `bounds = None` is the empty wedge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wedge {
    #[serde(with = "crate::record::rational_point")]
    pub apex: RationalPoint,
    pub bounds: Option<(usize, usize)>,
}

impl Wedge {
    pub fn empty(apex: RationalPoint) -> Self {
        Wedge { apex, bounds: None }
    }

    /// Extent strictly below a half-turn.
    pub fn is_convex(&self, set: &ColoredPointSet) -> bool {
        match self.bounds {
            None => true,
            Some((u, w)) if u == w => true,
            Some((u, w)) => ApexFrame::new(&self.apex, set.positions()).cross_sign(u, w) < 0,
        }
    }

    /// Ids of the points in the closed wedge. Assumes a convex wedge.
    pub fn members(&self, set: &ColoredPointSet) -> Vec<usize> {
        let Some((u, w)) = self.bounds else {
            return Vec::new();
        };
        let frame = ApexFrame::new(&self.apex, set.positions());
        (0..set.n())
            .filter(|&x| {
                if u == w {
                    x == u || (frame.cross_sign(u, x) == 0 && frame.dot_sign(u, x) > 0)
                } else {
                    frame.cross_sign(u, x) <= 0 && frame.cross_sign(x, w) <= 0
                }
            })
            .collect()
    }
}

pub fn wedge_to_island(set: &ColoredPointSet, w: &Wedge) -> Island {
    Island::from_ids(set, w.members(set)).expect("wedge members are valid ids")
}

/// Circular order around an apex with the red count and convexity of every
/// window of `k` consecutive points. Window `s` covers positions
/// `s, s + 1, ..., s + k - 1` (mod `n`).
#[derive(Clone, Debug)]
pub struct AngularState {
    k: usize,
    order: Vec<usize>,
    pos: Vec<usize>,
    red: Vec<bool>,
    reds: Vec<usize>,
    convex: Vec<bool>,
    target: Option<usize>,
    matches: usize,
}

/// Order rotated to start at point 0, with window data rotated to match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalState {
    pub order: Vec<usize>,
    pub reds: Vec<usize>,
    pub convex: Vec<bool>,
}

/// Builds the angular state from scratch in `O(n log n)`.
pub fn init_state(apex: &RationalPoint, set: &ColoredPointSet, k: usize) -> Result<AngularState> {
    let n = set.n();
    if k == 0 || k > n {
        return Err(Error::WindowSize { k, n });
    }
    let frame = ApexFrame::new(apex, set.positions());
    frame.check_off_lines()?;
    let order = frame.clockwise_order()?;
    let mut pos = vec![0; n];
    for (p, &id) in order.iter().enumerate() {
        pos[id] = p;
    }
    let red: Vec<bool> = (0..n).map(|i| set.is_red(i)).collect();
    let mut reds = vec![0; n];
    let mut acc: usize = (0..k).filter(|&p| red[order[p]]).count();
    for s in 0..n {
        reds[s] = acc;
        acc = acc + red[order[(s + k) % n]] as usize - red[order[s]] as usize;
    }
    let convex = (0..n)
        .map(|s| k == 1 || frame.cross_sign(order[s], order[(s + k - 1) % n]) < 0)
        .collect();
    Ok(AngularState {
        k,
        order,
        pos,
        red,
        reds,
        convex,
        target: None,
        matches: 0,
    })
}

impl AngularState {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Position of point `id` in the circular order.
    pub fn position(&self, id: usize) -> usize {
        self.pos[id]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn window_reds(&self) -> &[usize] {
        &self.reds
    }

    pub fn convex_flags(&self) -> &[bool] {
        &self.convex
    }

    pub fn convex_count(&self) -> usize {
        self.convex.iter().filter(|&&c| c).count()
    }

    /// First and last point of window `s`.
    pub fn window(&self, s: usize) -> (usize, usize) {
        let n = self.n();
        (self.order[s], self.order[(s + self.k - 1) % n])
    }

    /// Ids of window `s` in clockwise order.
    pub fn window_members(&self, s: usize) -> Vec<usize> {
        let n = self.n();
        (0..self.k).map(|d| self.order[(s + d) % n]).collect()
    }

    /// Tracks the number of convex windows with exactly `target` reds.
    pub fn set_target(&mut self, target: Option<usize>) {
        self.target = target;
        self.matches = (0..self.n()).filter(|&s| self.is_match(s)).count();
    }

    fn is_match(&self, s: usize) -> bool {
        self.convex[s] && Some(self.reds[s]) == self.target
    }

    /// A convex window with the target red count, if any.
    pub fn matching_window(&self) -> Option<usize> {
        if self.matches == 0 {
            None
        } else {
            (0..self.n()).find(|&s| self.is_match(s))
        }
    }

    pub fn canonical(&self) -> CanonicalState {
        let n = self.n();
        let r = self.pos[0];
        CanonicalState {
            order: (0..n).map(|d| self.order[(r + d) % n]).collect(),
            reds: (0..n).map(|d| self.reds[(r + d) % n]).collect(),
            convex: (0..n).map(|d| self.convex[(r + d) % n]).collect(),
        }
    }

    fn convex_from_bits(&self, s: usize, side: &SideBits) -> bool {
        if self.k == 1 {
            return true;
        }
        let (u, w) = self.window(s);
        let n = self.n();
        if u < w {
            !side.get(pair_index(n, u, w))
        } else {
            side.get(pair_index(n, w, u))
        }
    }

    fn refresh(&mut self, starts: &[usize], side: &SideBits) {
        for (idx, &s) in starts.iter().enumerate() {
            if starts[..idx].contains(&s) {
                continue;
            }
            let before = self.is_match(s);
            self.convex[s] = self.convex_from_bits(s, side);
            let after = self.is_match(s);
            self.matches = self.matches + after as usize - before as usize;
        }
    }

    fn add_reds(&mut self, s: usize, delta: isize) {
        if delta == 0 {
            return;
        }
        let before = self.is_match(s);
        self.reds[s] = (self.reds[s] as isize + delta) as usize;
        let after = self.is_match(s);
        self.matches = self.matches + after as usize - before as usize;
    }

    /// Applies the change caused by the apex crossing a pair line. `side`
    /// must already describe the apex after the crossing.
    pub fn cross_line(&mut self, crossing: Crossing, side: &SideBits) -> Result<()> {
        let n = self.n();
        let k = self.k;
        match crossing {
            Crossing::Transpose { a, b } => {
                let (pa, pb) = (self.pos[a], self.pos[b]);
                let i = if (pa + 1) % n == pb {
                    pa
                } else if (pb + 1) % n == pa {
                    pb
                } else {
                    return Err(Error::NonAdjacentSwap(a, b));
                };
                let j = (i + 1) % n;
                let (x, y) = (self.order[i], self.order[j]);
                self.order.swap(i, j);
                self.pos[x] = j;
                self.pos[y] = i;
                if k < n && self.red[x] != self.red[y] {
                    // The window ending at i now holds y instead of x; the one
                    // starting at j holds x instead of y.
                    let d = self.red[y] as isize - self.red[x] as isize;
                    self.add_reds((i + n + 1 - k) % n, d);
                    self.add_reds(j, -d);
                }
                let starts = [i, j, (i + n + 1 - k) % n, (i + n + 2 - k) % n];
                self.refresh(&starts, side);
            }
            Crossing::Antipodal { a, b } => {
                let starts = [self.pos[a], self.pos[b]];
                self.refresh(&starts, side);
            }
        }
        Ok(())
    }
}

/// Walks every cell of the arrangement depth-first, updating the state by
/// one crossing per step, and calls `visit` at each cell (including the
/// first). Stops early when `visit` breaks; returns the cell where it did.
pub fn walk_cells(
    set: &ColoredPointSet,
    arr: &LineArrangement,
    k: usize,
    target: Option<usize>,
    mut visit: impl FnMut(usize, &AngularState) -> ControlFlow<()>,
) -> Result<Option<(usize, AngularState)>> {
    let root = 0;
    let apex = arr.sample(root);
    let mut state = init_state(&apex, set, k)?;
    state.set_target(target);
    let mut side = arr.side_bits(&apex)?;
    let mut visited = vec![false; arr.num_faces()];
    visited[root] = true;
    if visit(root, &state).is_break() {
        return Ok(Some((root, state)));
    }
    struct Frame {
        face: usize,
        start: u32,
        cur: Option<u32>,
        entered: Option<u32>,
    }
    let first = arr.face_cycle(root).next().expect("faces are non-empty");
    let mut stack = vec![Frame {
        face: root,
        start: first,
        cur: Some(first),
        entered: None,
    }];
    while let Some(top) = stack.last_mut() {
        let mut step = None;
        while let Some(h) = top.cur {
            let nx = arr.next(h);
            top.cur = (nx != top.start).then_some(nx);
            let g = arr.face(h ^ 1);
            if !visited[g] {
                step = Some((h, g));
                break;
            }
        }
        match step {
            Some((h, g)) => {
                visited[g] = true;
                side.flip(arr.line_of(h));
                state.cross_line(arr.crossing(h), &side)?;
                if visit(g, &state).is_break() {
                    return Ok(Some((g, state)));
                }
                let start = h ^ 1;
                stack.push(Frame {
                    face: g,
                    start,
                    cur: Some(start),
                    entered: Some(h),
                });
            }
            None => {
                let done = stack.pop().expect("non-empty stack");
                debug_assert!(visited[done.face]);
                if let Some(h) = done.entered {
                    side.flip(arr.line_of(h));
                    state.cross_line(arr.crossing(h), &side)?;
                }
            }
        }
    }
    Ok(None)
}

/// Statistics of the last search, for benchmarking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WedgeStats {
    pub cells: usize,
    pub visited: usize,
}

/// Searches all cells for a convex wedge with exactly the target counts.
pub fn wedge_search(set: &ColoredPointSet, t: TargetCounts) -> Result<Option<Wedge>> {
    wedge_search_with_stats(set, t).map(|(w, _)| w)
}

pub fn wedge_search_with_stats(
    set: &ColoredPointSet,
    t: TargetCounts,
) -> Result<(Option<Wedge>, WedgeStats)> {
    t.check_against(set)?;
    let k = t.k();
    let n = set.n();
    if k == 0 {
        let apex = far_apex(set);
        return Ok((Some(Wedge::empty(apex)), WedgeStats::default()));
    }
    if n == 1 {
        let p = set.point(0);
        let apex = RationalPoint::from_ints(&p.x + 1, p.y.clone());
        let w = Wedge {
            apex,
            bounds: Some((0, 0)),
        };
        return Ok((
            Some(w),
            WedgeStats {
                cells: 1,
                visited: 1,
            },
        ));
    }
    let arr = LineArrangement::build(set)?;
    let mut visited = 0;
    let hit = walk_cells(set, &arr, k, Some(t.r_target), |_, st| {
        visited += 1;
        if st.matching_window().is_some() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    let stats = WedgeStats {
        cells: arr.num_faces(),
        visited,
    };
    let Some((face, state)) = hit else {
        return Ok((None, stats));
    };
    let s = state.matching_window().expect("break only on a match");
    let wedge = Wedge {
        apex: arr.sample(face),
        bounds: Some(state.window(s)),
    };
    let island = wedge_to_island(set, &wedge);
    if !wedge.is_convex(set) || island.counts() != t {
        return Err(Error::InternalAssertion(format!(
            "wedge certificate holds {:?} instead of {:?}",
            island.counts(),
            t
        )));
    }
    Ok((Some(wedge), stats))
}

/// From-scratch check of every cell: returns a cell and window start of a
/// convex wedge with the target counts.
pub fn exhaustive_cell_scan(
    set: &ColoredPointSet,
    arr: &LineArrangement,
    t: TargetCounts,
) -> Result<Option<(usize, usize)>> {
    let k = t.k();
    for f in 0..arr.num_faces() {
        let mut st = init_state(&arr.sample(f), set, k)?;
        st.set_target(Some(t.r_target));
        if let Some(s) = st.matching_window() {
            return Ok(Some((f, s)));
        }
    }
    Ok(None)
}

/// A point to the left of every input point; used as the apex of empty wedges.
fn far_apex(set: &ColoredPointSet) -> RationalPoint {
    let min_x = set
        .positions()
        .iter()
        .map(|p| p.x.clone())
        .min()
        .unwrap_or_else(BigInt::zero);
    let y = BigInt::zero();
    let x = if min_x.is_positive() {
        BigInt::zero()
    } else {
        min_x - 1
    };
    RationalPoint::new(Rational::from_integer(x), Rational::from_integer(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{is_island, oracle_find};
    use crate::points::Color::{Blue as B, Red as R};

    fn four() -> ColoredPointSet {
        ColoredPointSet::from_i64(&[(0, 0, R), (4, 0, R), (2, 3, B), (2, -3, B)]).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn init_state_examples() {
        let s = four();
        let apex = RationalPoint::new(q(17, 8), q(1, 7));
        let full = init_state(&apex, &s, 4).unwrap();
        assert!(full.window_reds().iter().all(|&r| r == 2));
        let single = init_state(&apex, &s, 1).unwrap();
        assert!(single.convex_flags().iter().all(|&c| c));
        let pairs = init_state(&apex, &s, 2).unwrap();
        // clockwise from the west: north, east, south, then (0,0) just below west
        assert_eq!(pairs.order(), &[2, 1, 3, 0]);
        assert_eq!(pairs.window_reds(), &[1, 1, 1, 1]);
        assert_eq!(pairs.convex_flags(), &[true, true, true, true]);
        assert_eq!(pairs.window_reds().iter().sum::<usize>(), 2 * s.r());
        assert_eq!(
            init_state(&RationalPoint::new(q(2, 1), q(1, 7)), &s, 2).unwrap_err(),
            Error::ApexOnLine(2, 3)
        );
    }

    #[test]
    fn wedge_search_examples() {
        let s = four();
        let w = wedge_search(&s, TargetCounts::new(1, 1)).unwrap().unwrap();
        let isl = wedge_to_island(&s, &w);
        assert_eq!((isl.red, isl.blue), (1, 1));
        assert!(is_island(&s, &isl.members).unwrap());
        let empty = wedge_search(&s, TargetCounts::new(0, 0)).unwrap().unwrap();
        assert!(wedge_to_island(&s, &empty).is_empty());
    }

    #[test]
    fn far_apex_sees_the_whole_hexagon() {
        let s = ColoredPointSet::from_i64(&[
            (10, 0, R),
            (5, 9, B),
            (-5, 9, R),
            (-10, 0, B),
            (-5, -9, R),
            (5, -8, B),
        ])
        .unwrap();
        let w = wedge_search(&s, TargetCounts::new(3, 3)).unwrap().unwrap();
        assert_eq!(wedge_to_island(&s, &w).members, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn trapped_center_blocks_the_blue_square() {
        let s =
            ColoredPointSet::from_i64(&[(0, 0, B), (10, 1, B), (11, 11, B), (1, 10, B), (6, 4, R)])
                .unwrap();
        let t = TargetCounts::new(0, 4);
        assert_eq!(wedge_search(&s, t).unwrap(), None);
        let arr = LineArrangement::build(&s).unwrap();
        assert_eq!(exhaustive_cell_scan(&s, &arr, t).unwrap(), None);
        assert_eq!(oracle_find(&s, t).unwrap(), None);
    }

    #[test]
    fn walk_matches_scratch_on_every_cell() {
        let s = ColoredPointSet::from_i64(&[
            (0, 0, R),
            (9, 1, B),
            (4, 7, R),
            (6, 3, B),
            (1, 8, B),
            (11, 9, R),
        ])
        .unwrap();
        let arr = LineArrangement::build(&s).unwrap();
        for k in 1..=6 {
            let mut count = 0;
            walk_cells(&s, &arr, k, None, |f, st| {
                let scratch = init_state(&arr.sample(f), &s, k).unwrap();
                assert_eq!(st.canonical(), scratch.canonical(), "cell {f}, k {k}");
                count += 1;
                ControlFlow::Continue(())
            })
            .unwrap();
            assert_eq!(count, arr.num_faces());
        }
    }

    #[test]
    fn wedge_results_agree_with_oracle_when_found() {
        let s = ColoredPointSet::from_i64(&[
            (0, 0, R),
            (9, 1, B),
            (4, 7, R),
            (6, 3, B),
            (1, 8, B),
            (11, 9, R),
            (3, 2, R),
        ])
        .unwrap();
        let arr = LineArrangement::build(&s).unwrap();
        for rt in 0..=4 {
            for bt in 0..=3 {
                let t = TargetCounts::new(rt, bt);
                let w = wedge_search(&s, t).unwrap();
                if t.k() > 0 {
                    assert_eq!(
                        w.is_some(),
                        exhaustive_cell_scan(&s, &arr, t).unwrap().is_some()
                    );
                }
                if let Some(w) = w {
                    assert!(oracle_find(&s, t).unwrap().is_some());
                    assert_eq!(wedge_to_island(&s, &w).counts(), t);
                }
            }
        }
    }
}
