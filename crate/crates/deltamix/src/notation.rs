//! Text notation for words, unions, tuples, points and distances.
//!
//! A union is its words joined by `,` (`0,10`); a tuple is its unions joined
//! by ` | `. A point is `pre(period)`, `(period)`, or a bare finite word.

use deltamix_core::point::{Distance, PointGen};
use deltamix_core::{CylinderUnion, SubshiftSpec, Word};

use crate::error::{CliError, Result};

pub fn parse_word(spec: &SubshiftSpec, s: &str) -> Result<Word> {
    let s = s.trim();
    if s.is_empty() {
        return Err(CliError::Usage("empty word".into()));
    }
    spec.parse_word(s).map_err(|e| CliError::Usage(format!("word `{s}`: {e}")))
}

pub fn parse_union(spec: &SubshiftSpec, s: &str) -> Result<CylinderUnion> {
    let words = s.split(',').map(|w| parse_word(spec, w)).collect::<Result<Vec<_>>>()?;
    Ok(CylinderUnion::new(words))
}

pub fn parse_tuple(spec: &SubshiftSpec, s: &str) -> Result<Vec<CylinderUnion>> {
    s.split('|').map(|u| parse_union(spec, u)).collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("`{t}` is not a nonnegative integer")))
        })
        .collect()
}

/// `r,s` or `a,b`.
pub fn parse_pair(s: &str) -> Result<(usize, usize)> {
    match parse_usize_list(s)?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(CliError::Usage(format!("`{s}` is not a pair `a,b`"))),
    }
}

pub fn render_union(spec: &SubshiftSpec, u: &CylinderUnion) -> String {
    u.words().iter().map(|w| spec.render(w)).collect::<Vec<_>>().join(",")
}

pub fn render_tuple(spec: &SubshiftSpec, us: &[CylinderUnion]) -> String {
    us.iter().map(|u| render_union(spec, u)).collect::<Vec<_>>().join(" | ")
}

pub fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn parse_point(spec: &SubshiftSpec, s: &str) -> Result<PointGen> {
    let s = s.trim();
    match s.find('(') {
        None => Ok(PointGen::explicit(parse_word(spec, s)?)),
        Some(open) => {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| CliError::Usage(format!("point `{s}` is missing `)`")))?;
            let pre = if open == 0 {
                Word::default()
            } else {
                parse_word(spec, &s[..open])?
            };
            let period = parse_word(spec, inner)?;
            Ok(PointGen::eventually_periodic(&pre, &period))
        }
    }
}

/// `2^-k` for an exact distance, `<=2^-w` when the window agreed throughout.
pub fn render_distance(d: Distance) -> String {
    match d {
        Distance::Differ(k) => format!("2^-{k}"),
        Distance::AgreeOn(w) => format!("<=2^-{w}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples() {
        let gm = SubshiftSpec::golden_mean();
        let t = parse_tuple(&gm, "10,0|1").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(render_tuple(&gm, &t), "0,10 | 1");
        assert!(parse_tuple(&gm, "0|2").is_err());
        assert!(parse_tuple(&gm, "0|").is_err());
    }

    #[test]
    fn points() {
        let gm = SubshiftSpec::golden_mean();
        let x = parse_point(&gm, "1(0)").unwrap();
        assert_eq!(x.window(0, 4).unwrap(), vec![1, 0, 0, 0]);
        let y = parse_point(&gm, "(01)").unwrap();
        assert_eq!(y.window(3, 3).unwrap(), vec![1, 0, 1]);
        let z = parse_point(&gm, "0100").unwrap();
        assert_eq!(z.horizon(), 3);
        assert!(parse_point(&gm, "1(0").is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(render_distance(Distance::Differ(0)), "2^-0");
        assert_eq!(render_distance(Distance::AgreeOn(11)), "<=2^-11");
        assert_eq!(parse_pair("2,3").unwrap(), (2, 3));
        assert!(parse_pair("2").is_err());
    }
}
