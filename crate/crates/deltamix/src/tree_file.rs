//! Versioned text documents for construction trees.
//!
//! ```text
//! deltamix-tree 1
//! tool 0.1.0
//! config horizon=512 ...
//! spec 5
//! <the spec file, 5 lines>
//! horizon 512
//! depth 3
//! seeds 0 10
//! level 1
//! step 0
//! ap-start 0
//! ap-source progression
//! ap-digest -
//! j 0 2 4 6
//! digest <hex>
//! sets 2
//! set 0 0 0
//! set 1 1 10
//! level 2
//! ...
//! checksum <sha256 of every preceding byte>
//! ```
//!
//! `set <index> <parents> <word>` lists parent indices comma-separated.

use deltamix_core::construction::{ApSource, ConstructionTree, Level, TreeSet};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::notation::join;
use crate::spec_file::SpecFile;

pub const MAGIC: &str = "deltamix-tree";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDoc {
    pub parents: Vec<usize>,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub k: usize,
    pub step: usize,
    pub ap_start: usize,
    pub ap_source: String,
    pub ap_digest: String,
    pub j: Vec<usize>,
    pub digest: String,
    pub sets: Vec<SetDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDoc {
    pub format: String,
    pub format_version: u32,
    pub tool_version: String,
    pub config: String,
    pub spec: String,
    pub horizon: usize,
    pub depth: usize,
    pub seeds: Vec<String>,
    pub levels: Vec<LevelDoc>,
    pub checksum: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl TreeDoc {
    pub fn from_tree(tree: &ConstructionTree, config_line: &str) -> Self {
        let spec = &tree.spec;
        let mut doc = TreeDoc {
            format: MAGIC.into(),
            format_version: FORMAT_VERSION,
            tool_version: crate::artifact::VERSION.into(),
            config: config_line.into(),
            spec: SpecFile::from_spec(spec).render(),
            horizon: tree.horizon,
            depth: tree.depth,
            seeds: tree.seeds.iter().map(|w| spec.render(w)).collect(),
            levels: tree
                .levels
                .iter()
                .map(|l| LevelDoc {
                    k: l.k,
                    step: l.step,
                    ap_start: l.ap_start,
                    ap_source: l.ap_source.name().into(),
                    ap_digest: l.ap_digest.clone(),
                    j: l.j.clone(),
                    digest: l.digest.clone(),
                    sets: l
                        .sets
                        .iter()
                        .map(|s| SetDoc {
                            parents: s.parents.clone(),
                            word: spec.render(&s.word),
                        })
                        .collect(),
                })
                .collect(),
            checksum: String::new(),
        };
        doc.checksum = sha256_hex(doc.body().as_bytes());
        doc
    }

    /// Everything before the checksum line.
    fn body(&self) -> String {
        let mut out = format!("{} {}\ntool {}\nconfig {}\n", self.format, self.format_version, self.tool_version, self.config);
        out.push_str(&format!("spec {}\n{}", self.spec.lines().count(), self.spec));
        out.push_str(&format!("horizon {}\ndepth {}\nseeds {}\n", self.horizon, self.depth, self.seeds.join(" ")));
        for l in &self.levels {
            let dash = |s: &str| if s.is_empty() { "-".to_string() } else { s.to_string() };
            out.push_str(&format!(
                "level {}\nstep {}\nap-start {}\nap-source {}\nap-digest {}\nj {}\ndigest {}\nsets {}\n",
                l.k,
                l.step,
                l.ap_start,
                l.ap_source,
                dash(&l.ap_digest),
                join(&l.j, " "),
                dash(&l.digest),
                l.sets.len()
            ));
            for (i, s) in l.sets.iter().enumerate() {
                out.push_str(&format!("set {i} {} {}\n", join(&s.parents, ","), s.word));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        format!("{}checksum {}\n", self.body(), self.checksum)
    }

    pub fn parse_text(what: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut last = 0;
        let mut next = |key: &str| -> Result<(usize, String)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| CliError::parse(what, last + 1, format!("expected `{key}`, found end of file")))?;
            last = no;
            Ok((no, line.to_string()))
        };
        let field = |no: usize, line: &str, key: &str| -> Result<String> {
            match line.split_once(' ') {
                Some((k, v)) if k == key => Ok(v.to_string()),
                _ if line == key => Ok(String::new()),
                _ => Err(CliError::parse(what, no, format!("expected `{key}`"))),
            }
        };
        let num = |no: usize, v: &str| -> Result<usize> {
            v.parse()
                .map_err(|_| CliError::parse(what, no, format!("`{v}` is not a nonnegative integer")))
        };
        let list = |no: usize, v: &str, sep: char| -> Result<Vec<usize>> {
            if v.is_empty() {
                return Ok(Vec::new());
            }
            v.split(sep).map(|t| num(no, t)).collect()
        };
        let undash = |v: String| if v == "-" { String::new() } else { v };

        let (no, l) = next(MAGIC)?;
        let version = field(no, &l, MAGIC)?;
        if version != FORMAT_VERSION.to_string() {
            return Err(CliError::parse(what, no, format!("unsupported tree format version `{version}`")));
        }
        let (no, l) = next("tool")?;
        let tool_version = field(no, &l, "tool")?;
        let (no, l) = next("config")?;
        let config = field(no, &l, "config")?;
        let (no, l) = next("spec")?;
        let spec_lines = num(no, &field(no, &l, "spec")?)?;
        let mut spec = String::new();
        for _ in 0..spec_lines {
            let (_, l) = next("spec line")?;
            spec.push_str(&l);
            spec.push('\n');
        }
        let (no, l) = next("horizon")?;
        let horizon = num(no, &field(no, &l, "horizon")?)?;
        let (no, l) = next("depth")?;
        let depth = num(no, &field(no, &l, "depth")?)?;
        let (no, l) = next("seeds")?;
        let seeds: Vec<String> = field(no, &l, "seeds")?.split(' ').map(str::to_string).collect();
        let mut levels = Vec::new();
        let checksum = loop {
            let (no, l) = next("level")?;
            if let Ok(sum) = field(no, &l, "checksum") {
                break sum;
            }
            let k = num(no, &field(no, &l, "level")?)?;
            let (no, l) = next("step")?;
            let step = num(no, &field(no, &l, "step")?)?;
            let (no, l) = next("ap-start")?;
            let ap_start = num(no, &field(no, &l, "ap-start")?)?;
            let (no, l) = next("ap-source")?;
            let ap_source = field(no, &l, "ap-source")?;
            let (no, l) = next("ap-digest")?;
            let ap_digest = undash(field(no, &l, "ap-digest")?);
            let (no, l) = next("j")?;
            let j = list(no, &field(no, &l, "j")?, ' ')?;
            let (no, l) = next("digest")?;
            let digest = undash(field(no, &l, "digest")?);
            let (no, l) = next("sets")?;
            let count = num(no, &field(no, &l, "sets")?)?;
            let mut sets = Vec::with_capacity(count.min(1 << 16));
            for i in 0..count {
                let (no, l) = next("set")?;
                let v = field(no, &l, "set")?;
                let parts: Vec<&str> = v.split(' ').collect();
                if parts.len() != 3 || parts[0] != i.to_string() {
                    return Err(CliError::parse(what, no, format!("expected `set {i} <parents> <word>`")));
                }
                sets.push(SetDoc {
                    parents: list(no, parts[1], ',')?,
                    word: parts[2].to_string(),
                });
            }
            levels.push(LevelDoc {
                k,
                step,
                ap_start,
                ap_source,
                ap_digest,
                j,
                digest,
                sets,
            });
        };
        if let Some((no, _)) = lines.next() {
            return Err(CliError::parse(what, no, "trailing content after checksum"));
        }
        Ok(TreeDoc {
            format: MAGIC.into(),
            format_version: FORMAT_VERSION,
            tool_version,
            config,
            spec,
            horizon,
            depth,
            seeds,
            levels,
            checksum,
        })
    }

    /// Text or JSON, told apart by the first non-blank character.
    pub fn parse(what: &str, text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let doc: TreeDoc =
                serde_json::from_str(text).map_err(|e| CliError::parse(what, e.line(), e.to_string()))?;
            if doc.format != MAGIC || doc.format_version != FORMAT_VERSION {
                return Err(CliError::parse(what, 1, "not a version 1 tree document"));
            }
            Ok(doc)
        } else {
            Self::parse_text(what, text)
        }
    }

    pub fn checksum_ok(&self) -> bool {
        sha256_hex(self.body().as_bytes()) == self.checksum
    }

    /// Rebuild the tree. Symbols outside the alphabet are parse errors; every
    /// structural property is left to `verify_tree`.
    pub fn to_tree(&self, what: &str) -> Result<ConstructionTree> {
        let spec = SpecFile::parse(what, &self.spec)?.to_spec("tree")?;
        let word = |s: &str| {
            spec.parse_word(s)
                .map_err(|e| CliError::parse(what, 0, format!("word `{s}`: {e}")))
        };
        let seeds = self.seeds.iter().map(|s| word(s)).collect::<Result<Vec<_>>>()?;
        let mut levels = Vec::with_capacity(self.levels.len());
        for l in &self.levels {
            let ap_source = match l.ap_source.as_str() {
                "progression" => ApSource::Progression,
                "direct" => ApSource::DirectSearch,
                other => return Err(CliError::parse(what, 0, format!("unknown ap-source `{other}`"))),
            };
            let sets = l
                .sets
                .iter()
                .map(|s| {
                    Ok(TreeSet {
                        parents: s.parents.clone(),
                        word: word(&s.word)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            levels.push(Level {
                k: l.k,
                step: l.step,
                ap_start: l.ap_start,
                ap_source,
                ap_digest: l.ap_digest.clone(),
                j: l.j.clone(),
                digest: l.digest.clone(),
                sets,
            });
        }
        Ok(ConstructionTree {
            spec,
            depth: self.depth,
            horizon: self.horizon,
            seeds,
            levels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use deltamix_core::construction::theorem_b_construct;
    use deltamix_core::{Limits, SubshiftSpec, Word};

    fn small() -> ConstructionTree {
        let gm = SubshiftSpec::golden_mean();
        theorem_b_construct(&gm, &[Word::from(&[0u8][..]), Word::from(&[1u8, 0][..])], 2, 64, &Limits::default()).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let doc = TreeDoc::from_tree(&small(), "horizon=64");
        let text = doc.to_text();
        let back = TreeDoc::parse("t", &text).unwrap();
        assert_eq!(back, doc);
        assert!(back.checksum_ok());
        assert_eq!(back.to_text(), text);
        assert_eq!(back.to_tree("t").unwrap(), small());
    }

    #[test]
    fn json_round_trip() {
        let doc = TreeDoc::from_tree(&small(), "horizon=64");
        let json = serde_json::to_string_pretty(&doc).unwrap();
        assert_eq!(TreeDoc::parse("t", &json).unwrap(), doc);
    }

    #[test]
    fn truncated_and_trailing_are_rejected() {
        let text = TreeDoc::from_tree(&small(), "horizon=64").to_text();
        let cut: String = text.lines().take(12).map(|l| format!("{l}\n")).collect();
        assert!(matches!(TreeDoc::parse("t", &cut), Err(CliError::Parse { .. })));
        assert!(TreeDoc::parse("t", &format!("{text}extra\n")).is_err());
        assert!(TreeDoc::parse("t", &text.replacen("deltamix-tree 1", "deltamix-tree 2", 1)).is_err());
    }

    #[test]
    fn checksum_detects_edits() {
        let text = TreeDoc::from_tree(&small(), "horizon=64").to_text();
        let edited = TreeDoc::parse("t", &text.replacen("ap-source progression", "ap-source direct", 1)).unwrap();
        assert!(!edited.checksum_ok());
    }
}
