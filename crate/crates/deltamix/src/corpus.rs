//! The hitting-set query corpus and its brute-force comparison.
//!
//! One query per line: `<spec-name> <horizon> <tuple>`, where the tuple is
//! written without spaces (`0,10|1`). Spec names resolve to `<name>.spec`
//! next to the corpus file.

use std::collections::BTreeMap;
use std::path::Path;

use deltamix_core::hitting::generalized_hitting_set;
use deltamix_core::oracle::brute_hitting;
use deltamix_core::{language, CylinderUnion, Limits, SubshiftSpec};
use serde::Serialize;

use crate::artifact::Body;
use crate::error::{read_file, CliError, Result};
use crate::notation::{join, parse_tuple, render_union};
use crate::spec_file::load_spec;

/// Specs the generator draws from, all shipped in `data/`.
pub const CORPUS_SPECS: [&str; 6] = ["full-2", "full-3", "golden-mean", "no-111", "abc", "cycle-3"];
pub const CORPUS_SIZE: usize = 240;
/// Bound on `(d - 1) * horizon + longest word`.
pub const MAX_TOTAL_LENGTH: usize = 20;
pub const HEADER: &str = "# deltamix hitting-set query corpus: <spec> <horizon> <tuple>\n";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub spec: String,
    pub horizon: usize,
    pub tuple: String,
}

impl Query {
    pub fn line(&self) -> String {
        format!("{} {} {}", self.spec, self.horizon, self.tuple)
    }
}

/// A fixed arithmetic sweep over specs, arities, word lengths and union sizes.
pub fn generate(specs: &[SubshiftSpec], count: usize) -> Result<Vec<Query>> {
    let limits = Limits::default();
    let pools = specs
        .iter()
        .map(|s| {
            let mut pool = Vec::new();
            for len in 1..=3 {
                pool.extend(language(s, len, &limits)?);
            }
            Ok(pool)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(count);
    for q in 0..count {
        let si = q % specs.len();
        let (spec, pool) = (&specs[si], &pools[si]);
        let d = 2 + (q / specs.len()) % 3;
        let tuple: Vec<CylinderUnion> = (0..d)
            .map(|i| {
                let size = 1 + usize::from((q + i) % 3 == 0);
                CylinderUnion::new((0..size).map(|t| pool[(q * 31 + i * 17 + t * 7) % pool.len()].clone()).collect())
            })
            .collect();
        let longest = tuple.iter().map(|u| u.max_len()).max().unwrap_or(1);
        let horizon = ((MAX_TOTAL_LENGTH - longest) / (d - 1)).min(12);
        out.push(Query {
            spec: spec.name().to_string(),
            horizon,
            tuple: tuple.iter().map(|u| render_union(spec, u)).collect::<Vec<_>>().join("|"),
        });
    }
    Ok(out)
}

pub fn render(queries: &[Query]) -> String {
    let mut s = HEADER.to_string();
    for q in queries {
        s.push_str(&q.line());
        s.push('\n');
    }
    s
}

pub fn parse(what: &str, text: &str) -> Result<Vec<Query>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                [spec, h, tuple] => Ok(Query {
                    spec: spec.to_string(),
                    horizon: h
                        .parse()
                        .map_err(|_| CliError::parse(what, i + 1, format!("bad horizon `{h}`")))?,
                    tuple: tuple.to_string(),
                }),
                _ => Err(CliError::parse(what, i + 1, "expected `<spec> <horizon> <tuple>`")),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryResult {
    pub index: usize,
    pub query: String,
    pub fast: Vec<usize>,
    pub brute: Vec<usize>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffReport {
    pub queries: usize,
    pub mismatches: usize,
    pub results: Vec<QueryResult>,
}

impl Body for DiffReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            if r.agree {
                s.push_str(&format!("query {} ok {} members {}\n", r.index, r.query, join(&r.fast, " ")));
            } else {
                s.push_str(&format!(
                    "query {} MISMATCH {} fast {} brute {}\n",
                    r.index,
                    r.query,
                    join(&r.fast, " "),
                    join(&r.brute, " ")
                ));
            }
        }
        s.push_str(&format!("queries {} mismatches {}\n", self.queries, self.mismatches));
        s
    }
}

/// Run every query through both paths. Specs load once per name.
pub fn oracle_diff(path: &Path) -> Result<DiffReport> {
    let what = path.display().to_string();
    let queries = parse(&what, &read_file(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut specs: BTreeMap<String, SubshiftSpec> = BTreeMap::new();
    let mut results = Vec::with_capacity(queries.len());
    for (index, q) in queries.iter().enumerate() {
        if !specs.contains_key(&q.spec) {
            specs.insert(q.spec.clone(), load_spec(&dir.join(format!("{}.spec", q.spec)))?);
        }
        let spec = &specs[&q.spec];
        let us = parse_tuple(spec, &q.tuple)?;
        let fast = generalized_hitting_set(spec, &us, q.horizon)?.members;
        let brute = brute_hitting(spec, &us, q.horizon)?;
        results.push(QueryResult {
            index,
            query: q.line(),
            agree: fast == brute,
            fast,
            brute,
        });
    }
    let mismatches = results.iter().filter(|r| !r.agree).count();
    Ok(DiffReport {
        queries: results.len(),
        mismatches,
        results,
    })
}
