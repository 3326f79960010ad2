//! Brute-force island enumeration: the ground truth for every search.

use serde::{Deserialize, Serialize};

use crate::geom::{convex_hull, ConvexPolygon, Point};
use crate::points::ColoredPointSet;
use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 16;

/// Subset of a point set, stored as sorted ids with cached color counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Island {
    pub members: Vec<usize>,
    pub red: usize,
    pub blue: usize,
}

impl Island {
    pub fn empty() -> Self {
        Island {
            members: Vec::new(),
            red: 0,
            blue: 0,
        }
    }

    /// Sorts and deduplicates `ids` and counts colors. Does not check the
    /// island property.
    pub fn from_ids(set: &ColoredPointSet, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = ids.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&i| i >= set.n()) {
            return Err(Error::UnknownId(bad));
        }
        let red = members.iter().filter(|&&i| set.is_red(i)).count();
        let blue = members.len() - red;
        Ok(Island { members, red, blue })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn counts(&self) -> TargetCounts {
        TargetCounts::new(self.red, self.blue)
    }

    pub fn hull(&self, set: &ColoredPointSet) -> ConvexPolygon {
        let pts: Vec<Point> = self.members.iter().map(|&i| set.point(i).clone()).collect();
        let mut h = convex_hull(&pts);
        for idx in &mut h.indices {
            *idx = self.members[*idx];
        }
        h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TargetCounts {
    pub r_target: usize,
    pub b_target: usize,
}

impl TargetCounts {
    pub fn new(r_target: usize, b_target: usize) -> Self {
        TargetCounts { r_target, b_target }
    }

    pub fn k(&self) -> usize {
        self.r_target + self.b_target
    }

    pub fn check_against(&self, set: &ColoredPointSet) -> Result<()> {
        if self.r_target > set.r() || self.b_target > set.b() {
            return Err(Error::TargetOutOfRange {
                r_target: self.r_target,
                b_target: self.b_target,
                r: set.r(),
                b: set.b(),
            });
        }
        Ok(())
    }
}

/// True iff no point outside `ids` lies in the closed convex hull of `ids`.
pub fn is_island(set: &ColoredPointSet, ids: &[usize]) -> Result<bool> {
    let island = Island::from_ids(set, ids.iter().copied())?;
    Ok(island_holds(set, &island))
}

pub(crate) fn island_holds(set: &ColoredPointSet, island: &Island) -> bool {
    if island.len() <= 1 {
        return true;
    }
    let hull = island.hull(set);
    (0..set.n()).all(|i| island.contains(i) || !hull.contains(set.point(i)))
}

/// Lexicographically smallest island with exactly the target counts.
pub fn oracle_find(set: &ColoredPointSet, t: TargetCounts) -> Result<Option<Island>> {
    oracle_find_with_cap(set, t, DEFAULT_CAP)
}

pub fn oracle_find_with_cap(
    set: &ColoredPointSet,
    t: TargetCounts,
    cap: usize,
) -> Result<Option<Island>> {
    let mut found = None;
    enumerate(set, t, cap, &mut |isl| {
        found = Some(isl);
        false
    })?;
    Ok(found)
}

/// All islands with exactly the target counts, in lexicographic order.
pub fn oracle_enumerate(set: &ColoredPointSet, t: TargetCounts) -> Result<Vec<Island>> {
    oracle_enumerate_with_cap(set, t, DEFAULT_CAP)
}

pub fn oracle_enumerate_with_cap(
    set: &ColoredPointSet,
    t: TargetCounts,
    cap: usize,
) -> Result<Vec<Island>> {
    let mut all = Vec::new();
    enumerate(set, t, cap, &mut |isl| {
        all.push(isl);
        true
    })?;
    Ok(all)
}

/// Include-first depth-first enumeration over ids, which visits member sets
/// in lexicographic order. A branch dies as soon as an excluded point falls
/// inside the hull of the chosen prefix.
fn enumerate(
    set: &ColoredPointSet,
    t: TargetCounts,
    cap: usize,
    emit: &mut dyn FnMut(Island) -> bool,
) -> Result<()> {
    if set.n() > cap {
        return Err(Error::TooLarge { n: set.n(), cap });
    }
    if t.r_target > set.r() || t.b_target > set.b() {
        return Ok(());
    }
    let mut search = Enumeration {
        set,
        t,
        chosen: Vec::new(),
        excluded: Vec::new(),
        hull: convex_hull(&[]),
        red_left: set.r(),
        blue_left: set.b(),
    };
    search.run(0, 0, 0, emit);
    Ok(())
}

struct Enumeration<'a> {
    set: &'a ColoredPointSet,
    t: TargetCounts,
    chosen: Vec<usize>,
    excluded: Vec<usize>,
    hull: ConvexPolygon,
    red_left: usize,
    blue_left: usize,
}

impl Enumeration<'_> {
    /// Returns false once `emit` asks to stop.
    fn run(
        &mut self,
        id: usize,
        reds: usize,
        blues: usize,
        emit: &mut dyn FnMut(Island) -> bool,
    ) -> bool {
        if reds + self.red_left < self.t.r_target || blues + self.blue_left < self.t.b_target {
            return true;
        }
        if id == self.set.n() {
            let island = Island {
                members: self.chosen.clone(),
                red: reds,
                blue: blues,
            };
            return emit(island);
        }
        let red = self.set.is_red(id);
        if red {
            self.red_left -= 1;
        } else {
            self.blue_left -= 1;
        }
        let mut go_on = true;
        let room = if red {
            reds < self.t.r_target
        } else {
            blues < self.t.b_target
        };
        if room {
            self.chosen.push(id);
            let fresh = self.chosen_hull();
            let saved = std::mem::replace(&mut self.hull, fresh);
            if self
                .excluded
                .iter()
                .all(|&e| !self.hull.contains(self.set.point(e)))
            {
                let (nr, nb) = if red {
                    (reds + 1, blues)
                } else {
                    (reds, blues + 1)
                };
                go_on = self.run(id + 1, nr, nb, emit);
            }
            self.hull = saved;
            self.chosen.pop();
        }
        if go_on && !self.hull.contains(self.set.point(id)) {
            self.excluded.push(id);
            go_on = self.run(id + 1, reds, blues, emit);
            self.excluded.pop();
        }
        if red {
            self.red_left += 1;
        } else {
            self.blue_left += 1;
        }
        go_on
    }

    fn chosen_hull(&self) -> ConvexPolygon {
        let pts: Vec<Point> = self
            .chosen
            .iter()
            .map(|&i| self.set.point(i).clone())
            .collect();
        convex_hull(&pts)
    }
}
