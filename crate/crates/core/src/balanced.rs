//! Wedge fans, the fast balanced-island algorithm and the top-level
//! orchestrator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::ceder::ceder_point;
use crate::geom::{ceil_scale, Rational, RationalPoint};
use crate::island_path::island_path;
use crate::oracle::{island_holds, oracle_find, Island, TargetCounts};
use crate::points::ColoredPointSet;
use crate::strip::{strip_search, strip_to_island, Strip};
use crate::wedge::{init_state, wedge_search, wedge_to_island, AngularState, Wedge};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Auto,
    Wedge,
    Strip,
    Fast,
    Brute,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "wedge" => Ok(Algorithm::Wedge),
            "strip" => Ok(Algorithm::Strip),
            "fast" => Ok(Algorithm::Fast),
            "brute" => Ok(Algorithm::Brute),
            other => Err(Error::Invalid(format!("unknown algorithm `{other}`"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Auto => "auto",
            Algorithm::Wedge => "wedge",
            Algorithm::Strip => "strip",
            Algorithm::Fast => "fast",
            Algorithm::Brute => "brute",
        })
    }
}

/// Which balanced target is requested: `One` asks for
/// `(ceil(alpha r), ceil(alpha b))`, `Two` for `(ceil((r+1)/2), ceil((b+1)/2))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Case::One),
            "2" => Ok(Case::Two),
            other => Err(Error::Invalid(format!(
                "case must be 1 or 2, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::One => "1",
            Case::Two => "2",
        })
    }
}

/// Geometric witness for an island.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Certificate {
    Wedge(Wedge),
    Strip(Strip),
    /// The island reached after `steps` swaps along the path between the
    /// windows `from` and `to` of the fan around `center`.
    Path {
        #[serde(with = "crate::record::rational_point")]
        center: RationalPoint,
        k: usize,
        from: (usize, usize),
        to: (usize, usize),
        steps: usize,
    },
    Oracle,
}

impl Certificate {
    pub fn family(&self) -> &'static str {
        match self {
            Certificate::Wedge(_) => "wedge",
            Certificate::Strip(_) => "strip",
            Certificate::Path { .. } => "path",
            Certificate::Oracle => "oracle",
        }
    }

    /// Rebuilds the island described by the certificate; `None` for oracle
    /// certificates, which carry no geometry.
    pub fn island(&self, set: &ColoredPointSet) -> Result<Option<Island>> {
        Ok(Some(match self {
            Certificate::Wedge(w) => {
                if !w.is_convex(set) {
                    return Err(Error::InternalAssertion(
                        "wedge certificate is not convex".into(),
                    ));
                }
                wedge_to_island(set, w)
            }
            Certificate::Strip(s) => strip_to_island(set, s),
            Certificate::Path {
                center,
                k,
                from,
                to,
                steps,
            } => {
                let fan = init_state(center, set, *k)?;
                let start_of = |(u, _): (usize, usize)| fan.window_members(fan.position(u));
                let a = Island::from_ids(set, start_of(*from))?;
                let b = Island::from_ids(set, start_of(*to))?;
                let path = island_path(set, &a, &b)?;
                if *steps >= path.len() {
                    return Err(Error::InternalAssertion(
                        "path certificate step out of range".into(),
                    ));
                }
                path.island_at(set, *steps)
            }
            Certificate::Oracle => return Ok(None),
        }))
    }
}

/// An island with exact target counts and the witness that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub targets: TargetCounts,
    pub island: Island,
    pub certificate: Certificate,
    /// Set when the fast algorithm gave up and the exact search took over.
    pub diagnostics: Vec<String>,
}

impl Solution {
    /// Re-checks island property, counts and certificate.
    pub fn verify(&self, set: &ColoredPointSet) -> bool {
        if !island_holds(set, &self.island) || self.island.counts() != self.targets {
            return false;
        }
        match self.certificate.island(set) {
            Ok(Some(i)) => i == self.island,
            Ok(None) => true,
            Err(_) => false,
        }
    }
}

/// Targets of the chosen case. Case 2 ignores `alpha`.
pub fn case_targets(set: &ColoredPointSet, alpha: &Rational, case: Case) -> Result<TargetCounts> {
    let t = match case {
        Case::One => TargetCounts::new(ceil_scale(alpha, set.r())?, ceil_scale(alpha, set.b())?),
        Case::Two => TargetCounts::new((set.r() + 2) / 2, (set.b() + 2) / 2),
    };
    t.check_against(set)?;
    Ok(t)
}

/// The gate of the fast algorithm,
/// `k < n/3 + (2/3) sqrt(n + r b_t - b r_t) - 4/3`, decided exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FastPrecondition {
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub b: usize,
    pub r_target: usize,
    pub b_target: usize,
    pub satisfied: bool,
}

impl FastPrecondition {
    pub fn evaluate(set: &ColoredPointSet, t: TargetCounts) -> Self {
        let (n, r, b) = (set.n(), set.r(), set.b());
        let k = t.k();
        let radicand = Self::radicand_of(n, r, b, t);
        let lhs: BigInt = BigInt::from(3 * k) - BigInt::from(n) + 4;
        let satisfied = if radicand.is_negative() {
            false
        } else if lhs.is_negative() {
            true
        } else {
            &lhs * &lhs < radicand * 4
        };
        FastPrecondition {
            k,
            n,
            r,
            b,
            r_target: t.r_target,
            b_target: t.b_target,
            satisfied,
        }
    }

    fn radicand_of(n: usize, r: usize, b: usize, t: TargetCounts) -> BigInt {
        BigInt::from(n) + BigInt::from(r) * t.b_target - BigInt::from(b) * t.r_target
    }

    pub fn radicand(&self) -> BigInt {
        Self::radicand_of(
            self.n,
            self.r,
            self.b,
            TargetCounts::new(self.r_target, self.b_target),
        )
    }

    /// The right-hand side, exact form followed by a decimal approximation.
    pub fn bound(&self) -> String {
        let rad = self.radicand();
        let approx = match rad.to_f64() {
            Some(v) if v >= 0.0 => format!(
                "{:.6}",
                self.n as f64 / 3.0 + 2.0 / 3.0 * v.sqrt() - 4.0 / 3.0
            ),
            _ => "undefined (negative radicand)".to_string(),
        };
        format!("{}/3 + (2/3)*sqrt({}) - 4/3 = {}", self.n, rad, approx)
    }
}

/// The `n` circular `k`-windows around a center, with red counts and
/// convexity flags.
#[derive(Clone, Debug)]
pub struct WedgeFan {
    pub center: RationalPoint,
    pub state: AngularState,
}

impl WedgeFan {
    pub fn convex_count(&self) -> usize {
        self.state.convex_count()
    }

    /// `sum over windows of (reds * b - blues * r)`; zero whenever every
    /// point lies in exactly `k` windows.
    pub fn weighted_sum(&self, set: &ColoredPointSet) -> i128 {
        let k = self.state.k() as i128;
        let (r, b) = (set.r() as i128, set.b() as i128);
        self.state
            .window_reds()
            .iter()
            .map(|&a| a as i128 * b - (k - a as i128) * r)
            .sum()
    }

    /// Lower bound on convex windows at a six-partition center: all `n` when
    /// `k < n/3`, else `2n - 3k - 3` when `k < 5n/12`.
    pub fn convex_lower_bound(n: usize, k: usize) -> Option<usize> {
        if 3 * k < n {
            Some(n)
        } else if 12 * k < 5 * n {
            Some((2 * n).saturating_sub(3 * k + 3))
        } else {
            None
        }
    }
}

pub fn wedge_fan(center: &RationalPoint, set: &ColoredPointSet, k: usize) -> Result<WedgeFan> {
    Ok(WedgeFan {
        center: center.clone(),
        state: init_state(center, set, k)?,
    })
}

/// Result of the fan and path stages of the fast algorithm.
#[derive(Clone, Debug)]
pub enum FastOutcome {
    Found {
        island: Island,
        certificate: Certificate,
    },
    /// A guarantee of the fast algorithm did not hold; the reason is recorded.
    Fallback(String),
}

/// Fan and path stages for a given fan: an exact convex window, or a path
/// between the fullest-red and emptiest-red convex windows.
pub fn fast_from_fan(
    set: &ColoredPointSet,
    t: TargetCounts,
    fan: &WedgeFan,
) -> Result<FastOutcome> {
    let st = &fan.state;
    let n = st.n();
    let convex: Vec<usize> = (0..n).filter(|&s| st.convex_flags()[s]).collect();
    let reds = st.window_reds();
    let window_island = |s: usize| Island::from_ids(set, st.window_members(s));
    if let Some(&s) = convex.iter().find(|&&s| reds[s] == t.r_target) {
        let wedge = Wedge {
            apex: fan.center.clone(),
            bounds: Some(st.window(s)),
        };
        return Ok(FastOutcome::Found {
            island: window_island(s)?,
            certificate: Certificate::Wedge(wedge),
        });
    }
    let hi = convex
        .iter()
        .copied()
        .filter(|&s| reds[s] > t.r_target)
        .max_by_key(|&s| (reds[s], std::cmp::Reverse(s)));
    let lo = convex
        .iter()
        .copied()
        .filter(|&s| reds[s] < t.r_target)
        .min_by_key(|&s| (reds[s], s));
    let (Some(hi), Some(lo)) = (hi, lo) else {
        return Ok(FastOutcome::Fallback(format!(
            "no {} convex window around the center (k = {}, red target = {}, convex windows = {})",
            if hi.is_none() { "positive" } else { "negative" },
            t.k(),
            t.r_target,
            convex.len()
        )));
    };
    let (a, b) = (window_island(hi)?, window_island(lo)?);
    let path = island_path(set, &a, &b)?;
    let Some(steps) = path.red_counts(set).iter().position(|&c| c == t.r_target) else {
        return Ok(FastOutcome::Fallback(
            "island path skips the red target".into(),
        ));
    };
    Ok(FastOutcome::Found {
        island: path.island_at(set, steps),
        certificate: Certificate::Path {
            center: fan.center.clone(),
            k: t.k(),
            from: st.window(hi),
            to: st.window(lo),
            steps,
        },
    })
}

/// Fast algorithm for explicit targets. `Ok(Fallback)` reports a failed
/// guarantee; callers decide whether to run the exact search.
pub fn fast_attempt(set: &ColoredPointSet, t: TargetCounts) -> Result<FastOutcome> {
    t.check_against(set)?;
    let pre = FastPrecondition::evaluate(set, t);
    if !pre.satisfied {
        return Err(Error::PreconditionFailed {
            k: t.k(),
            bound: pre.bound(),
        });
    }
    if t.k() == 0 {
        let w = wedge_search(set, t)?.expect("empty wedge always exists");
        return Ok(FastOutcome::Found {
            island: Island::empty(),
            certificate: Certificate::Wedge(w),
        });
    }
    let sp = ceder_point(set)?;
    let fan = wedge_fan(&sp.center, set, t.k())?;
    fast_from_fan(set, t, &fan)
}

/// The fast algorithm for case-1 targets. A failed guarantee surfaces as
/// `InternalAssertion`.
pub fn fast_balanced_island(set: &ColoredPointSet, alpha: &Rational) -> Result<Island> {
    let t = case_targets(set, alpha, Case::One)?;
    match fast_attempt(set, t)? {
        FastOutcome::Found { island, .. } => Ok(island),
        FastOutcome::Fallback(reason) => Err(Error::InternalAssertion(reason)),
    }
}

fn wedge_solution(set: &ColoredPointSet, t: TargetCounts) -> Result<Option<(Island, Certificate)>> {
    Ok(wedge_search(set, t)?.map(|w| (wedge_to_island(set, &w), Certificate::Wedge(w))))
}

fn strip_solution(set: &ColoredPointSet, t: TargetCounts) -> Result<Option<(Island, Certificate)>> {
    Ok(strip_search(set, t)?.map(|s| (strip_to_island(set, &s), Certificate::Strip(s))))
}

type Search = fn(&ColoredPointSet, TargetCounts) -> Result<Option<(Island, Certificate)>>;

fn first_of(
    set: &ColoredPointSet,
    t: TargetCounts,
    searches: &[Search],
) -> Result<Option<(Island, Certificate)>> {
    for search in searches {
        if let Some(found) = search(set, t)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Searches for an island with arbitrary targets. `Ok(None)` means the chosen
/// method found nothing: for `brute` that is a proof of infeasibility, for
/// `wedge` and `strip` only that this family has no witness.
pub fn find_island(
    set: &ColoredPointSet,
    t: TargetCounts,
    algorithm: Algorithm,
) -> Result<Option<Solution>> {
    t.check_against(set)?;
    let mut diagnostics = Vec::new();
    let found = match algorithm {
        Algorithm::Brute => oracle_find(set, t)?.map(|i| (i, Certificate::Oracle)),
        Algorithm::Wedge => wedge_solution(set, t)?,
        Algorithm::Strip => strip_solution(set, t)?,
        Algorithm::Fast | Algorithm::Auto => {
            let gated =
                algorithm == Algorithm::Auto && !FastPrecondition::evaluate(set, t).satisfied;
            let fast = if gated {
                None
            } else {
                Some(fast_attempt(set, t)?)
            };
            match fast {
                Some(FastOutcome::Found {
                    island,
                    certificate,
                }) => Some((island, certificate)),
                other => {
                    if let Some(FastOutcome::Fallback(reason)) = other {
                        diagnostics.push(format!(
                            "fast algorithm fell back to exact search: {reason}"
                        ));
                    }
                    first_of(set, t, &[wedge_solution, strip_solution])?
                }
            }
        }
    };
    let Some((island, certificate)) = found else {
        return Ok(None);
    };
    let sol = Solution {
        targets: t,
        island,
        certificate,
        diagnostics,
    };
    if !sol.verify(set) {
        return Err(Error::InternalAssertion(format!(
            "{} certificate failed verification for {:?}",
            sol.certificate.family(),
            t
        )));
    }
    Ok(Some(sol))
}

/// Balanced island for the targets of `case`. Such an island always exists,
/// so a failed search is reported as `TheoremViolation`.
///
/// Case 1 with `wedge` or `strip` runs that family first and the other one
/// after it; case 2 uses the strip sweep unless `brute` is requested.
pub fn balanced_island(
    set: &ColoredPointSet,
    alpha: &Rational,
    case: Case,
    algorithm: Algorithm,
) -> Result<Solution> {
    let t = case_targets(set, alpha, case)?;
    let found = match (case, algorithm) {
        (_, Algorithm::Brute) => find_island(set, t, Algorithm::Brute)?,
        (Case::Two, _) => find_island(set, t, Algorithm::Strip)?,
        (Case::One, Algorithm::Wedge) => match find_island(set, t, Algorithm::Wedge)? {
            Some(s) => Some(s),
            None => find_island(set, t, Algorithm::Strip)?,
        },
        (Case::One, Algorithm::Strip) => match find_island(set, t, Algorithm::Strip)? {
            Some(s) => Some(s),
            None => find_island(set, t, Algorithm::Wedge)?,
        },
        (Case::One, a) => find_island(set, t, a)?,
    };
    found.ok_or_else(|| {
        Error::TheoremViolation(format!(
            "no island with {} red and {} blue points (case {case}, {algorithm})",
            t.r_target, t.b_target
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ceder::ceder_point;
    use crate::generate::{generate, Distribution};
    use crate::oracle::is_island;

    fn frac(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn precondition_examples() {
        let s = generate(60, &frac(1, 2), Distribution::Uniform, 1).unwrap();
        let t = case_targets(&s, &frac(1, 5), Case::One).unwrap();
        assert_eq!(t, TargetCounts::new(6, 6));
        let pre = FastPrecondition::evaluate(&s, t);
        assert!(pre.satisfied);
        assert_eq!(pre.radicand(), BigInt::from(60));
        let big = FastPrecondition::evaluate(&s, TargetCounts::new(15, 15));
        assert!(!big.satisfied);
        assert!(big
            .bound()
            .starts_with("60/3 + (2/3)*sqrt(60) - 4/3 = 23.830"));
        let s8 = generate(8, &frac(1, 2), Distribution::Uniform, 2).unwrap();
        assert!(FastPrecondition::evaluate(&s8, TargetCounts::new(0, 0)).satisfied);
    }

    #[test]
    fn precondition_matches_float_evaluation() {
        for n in 1..40usize {
            for r in 0..=n {
                let b = n - r;
                let items: Vec<_> = (0..n as i64)
                    .map(|i| {
                        (
                            i,
                            i * i,
                            if (i as usize) < r {
                                crate::Color::Red
                            } else {
                                crate::Color::Blue
                            },
                        )
                    })
                    .collect();
                let s = ColoredPointSet::from_i64(&items).unwrap();
                for rt in 0..=r {
                    for bt in 0..=b {
                        let pre = FastPrecondition::evaluate(&s, TargetCounts::new(rt, bt));
                        let rad = (n + r * bt) as f64 - (b * rt) as f64;
                        let lhs = 3.0 * (rt + bt) as f64 - n as f64 + 4.0;
                        if rad < 0.0 {
                            assert!(!pre.satisfied);
                            continue;
                        }
                        let diff = 2.0 * rad.sqrt() - lhs;
                        if diff.abs() > 1e-9 {
                            assert_eq!(pre.satisfied, diff > 0.0, "n={n} r={r} t=({rt},{bt})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fast_sixty_points() {
        let s = generate(60, &frac(1, 2), Distribution::Uniform, 11).unwrap();
        let island = fast_balanced_island(&s, &frac(1, 5)).unwrap();
        assert_eq!((island.red, island.blue), (6, 6));
        assert!(is_island(&s, &island.members).unwrap());
        assert_eq!(
            fast_balanced_island(&s, &frac(0, 1)).unwrap(),
            Island::empty()
        );
    }

    #[test]
    fn fan_invariants_at_ceder_center() {
        for seed in 0..4 {
            let s = generate(12, &frac(1, 2), Distribution::Uniform, seed).unwrap();
            let sp = ceder_point(&s).unwrap();
            for k in 1..=12 {
                let fan = wedge_fan(&sp.center, &s, k).unwrap();
                assert_eq!(fan.weighted_sum(&s), 0);
                if let Some(lb) = WedgeFan::convex_lower_bound(12, k) {
                    assert!(fan.convex_count() >= lb, "k={k}");
                }
            }
            let fan5 = wedge_fan(&sp.center, &s, 5).unwrap();
            assert!(fan5.convex_count() >= 6);
        }
    }

    #[test]
    fn orchestrator_examples() {
        let s = generate(12, &frac(1, 2), Distribution::Uniform, 7).unwrap();
        for alg in [
            Algorithm::Auto,
            Algorithm::Wedge,
            Algorithm::Strip,
            Algorithm::Fast,
            Algorithm::Brute,
        ] {
            let sol = balanced_island(&s, &frac(1, 3), Case::One, alg);
            if alg == Algorithm::Fast {
                if let Err(Error::PreconditionFailed { .. }) = sol {
                    continue;
                }
            }
            let sol = sol.unwrap();
            assert_eq!((sol.island.red, sol.island.blue), (2, 2), "{alg}");
            assert!(sol.verify(&s));
        }
        let trap = generate(9, &frac(1, 2), Distribution::PolygonTrap, 0).unwrap();
        let sol = balanced_island(&trap, &frac(0, 1), Case::Two, Algorithm::Auto).unwrap();
        assert_eq!((sol.island.red, sol.island.blue), (3, 3));
        assert_eq!(sol.certificate.family(), "strip");
        let tiny = generate(4, &frac(1, 2), Distribution::Uniform, 3).unwrap();
        let sol = balanced_island(&tiny, &frac(1, 2), Case::One, Algorithm::Auto).unwrap();
        assert_eq!((sol.island.red, sol.island.blue), (1, 1));
    }

    #[test]
    fn brute_infeasible_is_none() {
        let trap = generate(9, &frac(1, 2), Distribution::PolygonTrap, 0).unwrap();
        assert!(
            find_island(&trap, TargetCounts::new(4, 0), Algorithm::Brute)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn parse_names() {
        for a in [
            Algorithm::Auto,
            Algorithm::Wedge,
            Algorithm::Strip,
            Algorithm::Fast,
            Algorithm::Brute,
        ] {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("2".parse::<Case>().unwrap(), Case::Two);
        assert!("3".parse::<Case>().is_err());
    }

    #[test]
    fn certificate_round_trip_through_json() {
        let s = generate(60, &frac(1, 2), Distribution::Uniform, 5).unwrap();
        let t = case_targets(&s, &frac(1, 5), Case::One).unwrap();
        let sol = find_island(&s, t, Algorithm::Fast).unwrap().unwrap();
        let json = serde_json::to_string(&sol).unwrap();
        let back: Solution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sol);
        assert!(back.verify(&s));
    }
}
