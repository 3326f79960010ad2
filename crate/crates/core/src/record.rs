//! Serialization helpers: exact rationals travel as `"num/den"` strings.

pub mod rational {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::geom::{parse_rational, rational_to_string, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }
}

pub mod rational_point {
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    use crate::geom::{parse_rational, rational_to_string, RationalPoint};

    pub fn serialize<S: Serializer>(p: &RationalPoint, s: S) -> Result<S::Ok, S::Error> {
        [rational_to_string(&p.x), rational_to_string(&p.y)].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RationalPoint, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let px =
            parse_rational(&x).ok_or_else(|| D::Error::custom(format!("bad rational {x:?}")))?;
        let py =
            parse_rational(&y).ok_or_else(|| D::Error::custom(format!("bad rational {y:?}")))?;
        Ok(RationalPoint::new(px, py))
    }
}

pub mod integer {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| D::Error::custom(format!("bad integer {s:?}")))
    }
}

use serde::{Deserialize, Serialize};

use crate::balanced::{Algorithm, Case, Certificate, Solution};
use crate::geom::{rational_to_string, Rational};
use crate::oracle::{island_holds, Island, TargetCounts};
use crate::points::ColoredPointSet;
use crate::{Error, Result};

/// What was asked: targets, and the parameters that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub r_target: usize,
    pub b_target: usize,
    /// `"num/den"`, absent when the targets were given explicitly.
    pub alpha: Option<String>,
    pub case: Option<Case>,
    pub algorithm: Algorithm,
}

impl Query {
    pub fn new(
        t: TargetCounts,
        alpha: Option<&Rational>,
        case: Option<Case>,
        algorithm: Algorithm,
    ) -> Self {
        Query {
            r_target: t.r_target,
            b_target: t.b_target,
            alpha: alpha.map(rational_to_string),
            case,
            algorithm,
        }
    }

    pub fn targets(&self) -> TargetCounts {
        TargetCounts::new(self.r_target, self.b_target)
    }
}

/// Machine-readable outcome of a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub query: Query,
    pub found: bool,
    pub certificate: Option<Certificate>,
    pub island: Vec<usize>,
    pub red: usize,
    pub blue: usize,
    pub diagnostics: Vec<String>,
    /// Wall time in milliseconds, when measured.
    pub timing_ms: Option<u64>,
}

impl ResultRecord {
    pub fn new(query: Query, solution: Option<Solution>, timing_ms: Option<u64>) -> Self {
        match solution {
            Some(s) => ResultRecord {
                query,
                found: true,
                island: s.island.members,
                red: s.island.red,
                blue: s.island.blue,
                certificate: Some(s.certificate),
                diagnostics: s.diagnostics,
                timing_ms,
            },
            None => ResultRecord {
                query,
                found: false,
                certificate: None,
                island: Vec::new(),
                red: 0,
                blue: 0,
                diagnostics: Vec::new(),
                timing_ms,
            },
        }
    }

    /// Re-checks the recorded island against `set`: ids, colors, island
    /// property, target counts and the certificate.
    pub fn verify(&self, set: &ColoredPointSet) -> Result<()> {
        let island = Island::from_ids(set, self.island.iter().copied())?;
        if !self.found {
            return Ok(());
        }
        if island.members != self.island || (island.red, island.blue) != (self.red, self.blue) {
            return Err(Error::Invalid(
                "record colors do not match the point file".into(),
            ));
        }
        if island.counts() != self.query.targets() {
            return Err(Error::Invalid("record island misses its targets".into()));
        }
        if !island_holds(set, &island) {
            return Err(Error::NotAnIsland(island.members));
        }
        let cert = self
            .certificate
            .as_ref()
            .ok_or_else(|| Error::Invalid("found record without certificate".into()))?;
        match cert.island(set)? {
            Some(rebuilt) if rebuilt != island => Err(Error::Invalid(
                "certificate describes a different island".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balanced::balanced_island;
    use crate::generate::{generate, Distribution};

    #[test]
    fn record_round_trip_and_verify() {
        let set = generate(
            18,
            &Rational::new(1.into(), 2.into()),
            Distribution::Uniform,
            7,
        )
        .unwrap();
        let alpha = Rational::new(1.into(), 3.into());
        for alg in [Algorithm::Auto, Algorithm::Strip, Algorithm::Wedge] {
            let sol = balanced_island(&set, &alpha, Case::One, alg).unwrap();
            let rec = ResultRecord::new(
                Query::new(sol.targets, Some(&alpha), Some(Case::One), alg),
                Some(sol),
                Some(3),
            );
            let json = serde_json::to_string(&rec).unwrap();
            assert!(json.contains("\"alpha\":\"1/3\""));
            let back: ResultRecord = serde_json::from_str(&json).unwrap();
            assert_eq!(back, rec);
            back.verify(&set).unwrap();
            let mut bad = back.clone();
            bad.island.pop();
            assert!(bad.verify(&set).is_err());
        }
    }
}
