//! Text point files: one `x y color` line per point, `color` in `{R, B}`.
//! Lines starting with `#` and blank lines are ignored; CRLF is accepted.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::geom::Point;
use crate::points::{Color, ColoredPointSet};
use crate::{Error, Result};

/// Parses a point file and validates general position.
pub fn parse_points(text: &str) -> Result<ColoredPointSet> {
    ColoredPointSet::new(parse_items(text)?)
}

/// Parses without the general-position check.
pub fn parse_items(text: &str) -> Result<Vec<(Point, Color)>> {
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(format!(
                "expected `x y color`, found {} fields",
                fields.len()
            )));
        }
        let coord = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| err(format!("`{s}` is not an integer")))
        };
        let x = coord(fields[0])?;
        let y = coord(fields[1])?;
        let color = Color::from_letter(fields[2])
            .ok_or_else(|| err(format!("`{}` is not a color (R or B)", fields[2])))?;
        items.push((Point::new(x, y), color));
    }
    Ok(items)
}

/// Writes a point file; parsing the output yields the same set.
pub fn write_points(set: &ColoredPointSet, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for p in set.points() {
        let _ = writeln!(out, "{} {} {}", p.x(), p.y(), p.color.letter());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_blank_and_crlf() {
        let s = parse_points("# header\r\n0 0 R\r\n\r\n5 1 B\n  2 7 r  \n").unwrap();
        assert_eq!((s.n(), s.r(), s.b()), (3, 2, 1));
        assert_eq!(s.point(1), &Point::from_i64(5, 1));
    }

    #[test]
    fn line_numbers_in_errors() {
        assert_eq!(
            parse_points("0 0 R\n# c\n1 x B\n").unwrap_err(),
            Error::Parse {
                line: 3,
                msg: "`x` is not an integer".into()
            }
        );
        assert!(matches!(
            parse_points("0 0 G\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_points("0 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(
            parse_points("0 0 R\n1 1 B\n2 2 R\n").unwrap_err(),
            Error::CollinearTriple(0, 1, 2)
        );
    }

    #[test]
    fn round_trip() {
        let s = parse_points("123456789012345 -3 B\n0 0 R\n-7 99 R\n").unwrap();
        let text = write_points(&s, Some("seed 1"));
        assert!(text.starts_with("# seed 1\n"));
        assert_eq!(parse_points(&text).unwrap().points(), s.points());
    }
}
