//! Subshift spec files.
//!
//! ```text
//! # comments and blank lines are ignored
//! name: golden-mean
//! alphabet: 0 1
//! transitions:
//!   1 1
//!   1 0
//! ```
//!
//! The body is either `transitions:` followed by one indented row of `0`/`1`
//! entries per symbol, or a single line `forbidden_words: w1 w2 ...` where
//! each word is its symbols written without separators. `name` is optional
//! and comes first when present; symbols are single characters other than
//! whitespace and `, ; | # ( )`. [`SpecFile::render`] writes the canonical
//! form, which parses back to the same value, and a canonical file renders
//! back to the same bytes.

use std::path::Path;

use deltamix_core::{Origin, SubshiftSpec, Word};

use crate::error::{read_file, CliError, Result};

pub const RESERVED: &[char] = &[',', ';', '|', '#', '(', ')'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Transitions(Vec<Vec<bool>>),
    ForbiddenWords(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub name: Option<String>,
    pub alphabet: Vec<char>,
    pub body: Body,
}

fn symbol_ok(c: char) -> bool {
    !c.is_whitespace() && !RESERVED.contains(&c)
}

impl SpecFile {
    pub fn parse(what: &str, text: &str) -> Result<Self> {
        let err = |line: usize, msg: &str| CliError::parse(what, line, msg);
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .peekable();
        let mut name = None;
        let mut alphabet = None;
        let mut body = None;
        while let Some((no, line)) = lines.next() {
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(no, "expected `key: value`"))?;
            let value = value.trim();
            match key.trim() {
                "name" if name.is_none() && alphabet.is_none() => {
                    if value.is_empty() {
                        return Err(err(no, "empty name"));
                    }
                    name = Some(value.to_string());
                }
                "alphabet" if alphabet.is_none() => {
                    let mut syms = Vec::new();
                    for tok in value.split_whitespace() {
                        let mut cs = tok.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) if symbol_ok(c) => {
                                if syms.contains(&c) {
                                    return Err(err(no, &format!("duplicate symbol '{c}'")));
                                }
                                syms.push(c);
                            }
                            _ => return Err(err(no, &format!("symbol `{tok}` must be one non-reserved character"))),
                        }
                    }
                    if syms.is_empty() {
                        return Err(err(no, "empty alphabet"));
                    }
                    alphabet = Some(syms);
                }
                "transitions" if body.is_none() => {
                    let k = alphabet.as_ref().ok_or_else(|| err(no, "alphabet must come first"))?.len();
                    if !value.is_empty() {
                        return Err(err(no, "matrix rows go on the following lines"));
                    }
                    let mut rows = Vec::with_capacity(k);
                    for _ in 0..k {
                        let (rno, row) = lines.next().ok_or_else(|| err(no, "missing matrix rows"))?;
                        if !row.starts_with(char::is_whitespace) {
                            return Err(err(rno, "matrix rows must be indented"));
                        }
                        let entries = row
                            .split_whitespace()
                            .map(|t| match t {
                                "0" => Ok(false),
                                "1" => Ok(true),
                                _ => Err(err(rno, &format!("matrix entry `{t}` is not 0 or 1"))),
                            })
                            .collect::<Result<Vec<bool>>>()?;
                        if entries.len() != k {
                            return Err(err(rno, &format!("row has {} entries, expected {k}", entries.len())));
                        }
                        rows.push(entries);
                    }
                    body = Some(Body::Transitions(rows));
                }
                "forbidden_words" if body.is_none() => {
                    let syms = alphabet.as_ref().ok_or_else(|| err(no, "alphabet must come first"))?;
                    let words: Vec<String> = value.split_whitespace().map(str::to_string).collect();
                    if let Some(bad) = words.iter().flat_map(|w| w.chars()).find(|c| !syms.contains(c)) {
                        return Err(err(no, &format!("unknown symbol '{bad}'")));
                    }
                    body = Some(Body::ForbiddenWords(words));
                }
                "name" | "alphabet" | "transitions" | "forbidden_words" => {
                    return Err(err(no, &format!("`{}` is repeated or out of order", key.trim())));
                }
                other => return Err(err(no, &format!("unknown field `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| err(0, "missing `alphabet`"))?;
        let body = body.ok_or_else(|| err(0, "missing `transitions` or `forbidden_words`"))?;
        Ok(SpecFile { name, alphabet, body })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&path.display().to_string(), &read_file(path)?)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("name: {n}\n"));
        }
        let syms: Vec<String> = self.alphabet.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("alphabet: {}\n", syms.join(" ")));
        match &self.body {
            Body::Transitions(rows) => {
                out.push_str("transitions:\n");
                for row in rows {
                    let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
                    out.push_str(&format!("  {}\n", cells.join(" ")));
                }
            }
            Body::ForbiddenWords(ws) => {
                if ws.is_empty() {
                    out.push_str("forbidden_words:\n");
                } else {
                    out.push_str(&format!("forbidden_words: {}\n", ws.join(" ")));
                }
            }
        }
        out
    }

    /// The name used when the file has none.
    pub fn to_spec(&self, fallback_name: &str) -> Result<SubshiftSpec> {
        let name = self.name.as_deref().unwrap_or(fallback_name);
        let spec = match &self.body {
            Body::Transitions(rows) => SubshiftSpec::from_matrix(name, self.alphabet.clone(), rows.clone())?,
            Body::ForbiddenWords(ws) => {
                let words = ws
                    .iter()
                    .map(|w| {
                        Word::new(
                            w.chars()
                                .map(|c| self.alphabet.iter().position(|&a| a == c).unwrap() as u8)
                                .collect(),
                        )
                    })
                    .collect();
                SubshiftSpec::from_forbidden_words(name, self.alphabet.clone(), words)?
            }
        };
        Ok(spec)
    }

    pub fn from_spec(spec: &SubshiftSpec) -> Self {
        let body = match spec.origin() {
            Origin::Matrix(m) => Body::Transitions(m.clone()),
            Origin::ForbiddenWords(ws) => Body::ForbiddenWords(ws.iter().map(|w| spec.render(w)).collect()),
        };
        SpecFile {
            name: Some(spec.name().to_string()),
            alphabet: spec.symbols().to_vec(),
            body,
        }
    }
}

/// Load a spec file, naming the system after the file stem if the file does not.
pub fn load_spec(path: &Path) -> Result<SubshiftSpec> {
    let file = SpecFile::load(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("spec");
    file.to_spec(stem)
}
