//! Seeded generators of general-position colored point sets.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Point, Rational};
use crate::points::{Color, ColoredPointSet};
use crate::{Error, Result};

/// Coordinate bound for uniform and clustered sets.
pub const UNIFORM_RANGE: i64 = 1 << 24;
/// Circumradius of the polygon in the trap construction.
pub const TRAP_RADIUS: f64 = 1.0e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distribution {
    Uniform,
    PolygonTrap,
    Clusters,
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "polygon-trap" => Ok(Distribution::PolygonTrap),
            "clusters" => Ok(Distribution::Clusters),
            other => Err(Error::Invalid(format!("unknown distribution `{other}`"))),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::Uniform => "uniform",
            Distribution::PolygonTrap => "polygon-trap",
            Distribution::Clusters => "clusters",
        })
    }
}

/// Number of red points for `n` points at the given fraction: `ceil(n f)`.
pub fn red_count(n: usize, fraction: &Rational) -> Result<usize> {
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if *fraction < zero || *fraction > one {
        return Err(Error::Invalid(format!(
            "red fraction {fraction} outside [0, 1]"
        )));
    }
    let scaled = fraction * Rational::from_integer(BigInt::from(n));
    let c = scaled.numer().div_ceil(scaled.denom());
    c.to_usize()
        .ok_or_else(|| Error::Invalid("red count overflow".into()))
}

/// Generates `n` points with `ceil(n * red_fraction)` reds. Output is fully
/// determined by the seed and always in general position.
pub fn generate(
    n: usize,
    red_fraction: &Rational,
    dist: Distribution,
    seed: u64,
) -> Result<ColoredPointSet> {
    let r = red_count(n, red_fraction)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match dist {
        Distribution::Uniform => {
            let mut colors: Vec<Color> = (0..n)
                .map(|i| if i < r { Color::Red } else { Color::Blue })
                .collect();
            colors.shuffle(&mut rng);
            let sample = |rng: &mut ChaCha8Rng, _: usize| {
                (
                    rng.gen_range(-UNIFORM_RANGE..=UNIFORM_RANGE),
                    rng.gen_range(-UNIFORM_RANGE..=UNIFORM_RANGE),
                )
            };
            resample_until_valid(&mut rng, colors, sample, |_| true)
        }
        Distribution::Clusters => {
            let clusters = rng.gen_range(3..=6usize);
            let spread = UNIFORM_RANGE / 16;
            let centers: Vec<(i64, i64)> = (0..clusters)
                .map(|_| {
                    let lim = UNIFORM_RANGE - spread;
                    (rng.gen_range(-lim..=lim), rng.gen_range(-lim..=lim))
                })
                .collect();
            let mut colors: Vec<Color> = (0..n)
                .map(|i| if i < r { Color::Red } else { Color::Blue })
                .collect();
            colors.shuffle(&mut rng);
            let sample = move |rng: &mut ChaCha8Rng, i: usize| {
                let (cx, cy) = centers[i % centers.len()];
                let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let d: f64 = rng.gen_range(0.0f64..1.0).sqrt() * spread as f64;
                (cx + (d * a.cos()) as i64, cy + (d * a.sin()) as i64)
            };
            resample_until_valid(&mut rng, colors, sample, |_| true)
        }
        Distribution::PolygonTrap => {
            if r < 3 {
                return Err(Error::Invalid(format!(
                    "polygon trap needs at least 3 reds, got {r}"
                )));
            }
            let colors: Vec<Color> = (0..n)
                .map(|i| if i < r { Color::Red } else { Color::Blue })
                .collect();
            let inner = TRAP_RADIUS * (std::f64::consts::PI / r as f64).cos().powi(2) * 0.02;
            let sample = move |rng: &mut ChaCha8Rng, i: usize| {
                if i < r {
                    let a =
                        std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * i as f64 / r as f64;
                    let jitter = |rng: &mut ChaCha8Rng| rng.gen_range(-2i64..=2);
                    (
                        (TRAP_RADIUS * a.cos()).round() as i64 + jitter(rng),
                        (TRAP_RADIUS * a.sin()).round() as i64 + jitter(rng),
                    )
                } else {
                    let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    let d: f64 = rng.gen_range(0.1f64..1.0).sqrt() * inner;
                    ((d * a.cos()).round() as i64, (d * a.sin()).round() as i64)
                }
            };
            // Reds are resampled only by jitter; blues anywhere in the core.
            resample_until_valid(&mut rng, colors, sample, |i| i >= r)
        }
    }
}

/// Draws every point, then redraws the offending point until the set passes
/// validation. Points for which `prefer` holds are redrawn first.
fn resample_until_valid(
    rng: &mut ChaCha8Rng,
    colors: Vec<Color>,
    sample: impl Fn(&mut ChaCha8Rng, usize) -> (i64, i64),
    prefer: impl Fn(usize) -> bool,
) -> Result<ColoredPointSet> {
    let n = colors.len();
    let mut coords: Vec<(i64, i64)> = (0..n).map(|i| sample(rng, i)).collect();
    for _ in 0..10 * n + 100 {
        let items: Vec<(Point, Color)> = coords
            .iter()
            .zip(&colors)
            .map(|(&(x, y), &c)| (Point::from_i64(x, y), c))
            .collect();
        let set = ColoredPointSet::new_unchecked(items);
        let culprit = match set.validate_general_position() {
            Ok(()) => return Ok(set),
            Err(Error::DuplicatePoint(i, j)) => pick(&[i, j], &prefer),
            Err(Error::CollinearTriple(i, j, k)) => pick(&[i, j, k], &prefer),
            Err(e) => return Err(e),
        };
        coords[culprit] = sample(rng, culprit);
    }
    Err(Error::Invalid("could not reach general position".into()))
}

fn pick(ids: &[usize], prefer: &impl Fn(usize) -> bool) -> usize {
    ids.iter()
        .rev()
        .copied()
        .find(|&i| prefer(i))
        .unwrap_or(ids[ids.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_find, TargetCounts};

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn red_counts() {
        assert_eq!(red_count(18, &half()).unwrap(), 9);
        assert_eq!(red_count(9, &half()).unwrap(), 5);
        assert_eq!(red_count(7, &Rational::new(1.into(), 3.into())).unwrap(), 3);
        assert!(red_count(7, &Rational::new(3.into(), 2.into())).is_err());
    }

    #[test]
    fn uniform_is_valid_and_deterministic() {
        let a = generate(18, &half(), Distribution::Uniform, 7).unwrap();
        assert_eq!((a.r(), a.b()), (9, 9));
        a.validate_general_position().unwrap();
        let b = generate(18, &half(), Distribution::Uniform, 7).unwrap();
        assert_eq!(a.points(), b.points());
        let c = generate(18, &half(), Distribution::Uniform, 8).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn clusters_are_valid() {
        let s = generate(
            80,
            &Rational::new(1.into(), 4.into()),
            Distribution::Clusters,
            3,
        )
        .unwrap();
        assert_eq!((s.r(), s.b()), (20, 60));
        s.validate_general_position().unwrap();
    }

    #[test]
    fn pentagon_trap_shape() {
        for seed in 0..5 {
            let s = generate(9, &half(), Distribution::PolygonTrap, seed).unwrap();
            assert_eq!((s.r(), s.b()), (5, 4));
            s.validate_general_position().unwrap();
            assert_eq!(oracle_find(&s, TargetCounts::new(4, 0)).unwrap(), None);
            assert!(oracle_find(&s, TargetCounts::new(3, 3)).unwrap().is_some());
        }
        assert!(generate(4, &half(), Distribution::PolygonTrap, 0).is_err());
    }

    #[test]
    fn parse_distribution() {
        for d in [
            Distribution::Uniform,
            Distribution::PolygonTrap,
            Distribution::Clusters,
        ] {
            assert_eq!(d.to_string().parse::<Distribution>().unwrap(), d);
        }
        assert!("gauss".parse::<Distribution>().is_err());
    }
}
