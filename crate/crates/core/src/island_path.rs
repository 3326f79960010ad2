//! Paths of equal-size islands where consecutive islands differ by swapping
//! one point out and one point in.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::geom::{squared_distance_to_hull, Rational};
use crate::oracle::{island_holds, Island};
use crate::points::ColoredPointSet;
use crate::{Error, Result};

/// Points sorted by `(x, y)`, with the inverse permutation.
#[derive(Clone, Debug)]
pub struct XOrder {
    pub order: Vec<usize>,
    pub rank: Vec<usize>,
}

impl XOrder {
    pub fn new(set: &ColoredPointSet) -> Self {
        let mut order: Vec<usize> = (0..set.n()).collect();
        order.sort_by(|&a, &b| {
            let (p, q) = (set.point(a), set.point(b));
            (&p.x, &p.y).cmp(&(&q.x, &q.y))
        });
        let mut rank = vec![0; order.len()];
        for (r, &id) in order.iter().enumerate() {
            rank[id] = r;
        }
        XOrder { order, rank }
    }
}

/// `k` consecutive points of the x-order starting at `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XWindow {
    pub start: usize,
    pub k: usize,
}

impl XWindow {
    pub fn members(&self, xo: &XOrder) -> Vec<usize> {
        xo.order[self.start..self.start + self.k].to_vec()
    }
}

/// All `n - k + 1` windows of `k` consecutive points in x-order.
pub fn x_windows(set: &ColoredPointSet, k: usize) -> Vec<XWindow> {
    let n = set.n();
    if k > n {
        return Vec::new();
    }
    (0..=n - k).map(|start| XWindow { start, k }).collect()
}

/// Island sequence stored as a start island and one `(out, in)` swap per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IslandPath {
    pub start: Island,
    pub steps: Vec<(usize, usize)>,
}

impl IslandPath {
    pub fn len(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Materialises every island along the path.
    pub fn islands(&self, set: &ColoredPointSet) -> Vec<Island> {
        let mut cur: BTreeSet<usize> = self.start.members.iter().copied().collect();
        let mut out = vec![self.start.clone()];
        for &(o, i) in &self.steps {
            cur.remove(&o);
            cur.insert(i);
            out.push(Island::from_ids(set, cur.iter().copied()).expect("path ids are valid"));
        }
        out
    }

    /// Red count of every island along the path, without materialising them.
    pub fn red_counts(&self, set: &ColoredPointSet) -> Vec<usize> {
        let mut red = self.start.red;
        let mut out = Vec::with_capacity(self.len());
        out.push(red);
        for &(o, i) in &self.steps {
            red = red + set.is_red(i) as usize - set.is_red(o) as usize;
            out.push(red);
        }
        out
    }

    /// The island after `steps` swaps.
    pub fn island_at(&self, set: &ColoredPointSet, steps: usize) -> Island {
        let mut cur: BTreeSet<usize> = self.start.members.iter().copied().collect();
        for &(o, i) in &self.steps[..steps] {
            cur.remove(&o);
            cur.insert(i);
        }
        Island::from_ids(set, cur).expect("path ids are valid")
    }
}

/// Swaps leading from `island` to an x-window, and the start of that window.
///
/// Each step drops the current rightmost member and adds the point left of it
/// that is closest to the hull of the original island. Distances are keyed
/// once against that original hull.
pub fn walk_to_window(
    set: &ColoredPointSet,
    xo: &XOrder,
    island: &Island,
) -> Result<(Vec<(usize, usize)>, usize)> {
    if !island_holds(set, island) {
        return Err(Error::NotAnIsland(island.members.clone()));
    }
    let k = island.len();
    if k == 0 {
        return Ok((Vec::new(), 0));
    }
    let mut ranks: BTreeSet<usize> = island.members.iter().map(|&i| xo.rank[i]).collect();
    let lo = *ranks.first().expect("non-empty");
    let hi = *ranks.last().expect("non-empty");
    let hull = island.hull(set);
    let mut queue = BinaryHeap::new();
    for r in lo + 1..hi {
        if ranks.contains(&r) {
            continue;
        }
        let id = xo.order[r];
        let d: Rational = squared_distance_to_hull(set.point(id), &hull)?;
        queue.push(Reverse((d, r)));
    }
    let mut steps = Vec::new();
    loop {
        let right = *ranks.last().expect("non-empty");
        let mut pick = None;
        while let Some(Reverse((_, r))) = queue.pop() {
            if r < right {
                pick = Some(r);
                break;
            }
        }
        let Some(q) = pick else { break };
        ranks.remove(&right);
        ranks.insert(q);
        steps.push((xo.order[right], xo.order[q]));
    }
    let start = *ranks.first().expect("non-empty");
    debug_assert_eq!(*ranks.last().unwrap(), start + k - 1);
    Ok((steps, start))
}

/// Path from `from` to `to` through the x-windows.
pub fn island_path(set: &ColoredPointSet, from: &Island, to: &Island) -> Result<IslandPath> {
    if from.len() != to.len() {
        return Err(Error::SizeMismatch(from.len(), to.len()));
    }
    for isl in [from, to] {
        if !island_holds(set, isl) {
            return Err(Error::NotAnIsland(isl.members.clone()));
        }
    }
    if from == to {
        return Ok(IslandPath {
            start: from.clone(),
            steps: Vec::new(),
        });
    }
    let xo = XOrder::new(set);
    let k = from.len();
    let (mut steps, s1) = walk_to_window(set, &xo, from)?;
    let (back, s2) = walk_to_window(set, &xo, to)?;
    let mut s = s1;
    while s < s2 {
        steps.push((xo.order[s], xo.order[s + k]));
        s += 1;
    }
    while s > s2 {
        steps.push((xo.order[s + k - 1], xo.order[s - 1]));
        s -= 1;
    }
    steps.extend(back.iter().rev().map(|&(o, i)| (i, o)));
    Ok(IslandPath {
        start: from.clone(),
        steps,
    })
}
