//! Golden-file cases shared by the golden test and the acceptance suite.

use std::path::{Path, PathBuf};
use std::process::Command;

pub const CASES: &[(&str, &[&str])] = &[
    ("entropy-golden-mean", &["entropy", "data/golden-mean.spec"]),
    ("entropy-full-3", &["entropy", "data/full-3.spec"]),
    ("entropy-no-111-word-count", &["entropy", "data/no-111.spec", "--method", "word-count", "--n", "12"]),
    ("entropy-abc-json", &["entropy", "data/abc.spec", "--format", "json"]),
    ("entropy-config", &["entropy", "data/golden-mean.spec", "--config", "data/example.toml"]),
    ("hitting-golden-mean", &["hitting", "data/golden-mean.spec", "--sets", "1", "--sets", "1", "--horizon", "16", "--witnesses", "--block", "4"]),
    ("hitting-diagonal-d3", &["hitting", "data/full-2.spec", "--sets", "01", "--d", "3", "--horizon", "8", "--witnesses"]),
    ("hitting-cycle-3", &["hitting", "data/cycle-3.spec", "--sets", "0", "--sets", "1", "--horizon", "20"]),
    ("hitting-filter-base", &["hitting", "data/full-2.spec", "--sets", "0", "--sets", "1", "--horizon", "16", "--against", "01|10"]),
    ("hitting-json", &["hitting", "data/golden-mean.spec", "--sets", "0,10|1", "--horizon", "8", "--witnesses", "--format", "json"]),
    ("independence-full-2", &["independence", "data/full-2.spec", "--tuple", "0", "--tuple", "1", "--J", "0,1,2"]),
    ("independence-refuted", &["independence", "data/golden-mean.spec", "--tuple", "1|0", "--J", "0,1"]),
    ("independence-extend", &["independence", "data/golden-mean.spec", "--tuple", "0|1", "--extend", "6", "--horizon", "32"]),
    ("independence-within", &["independence", "data/full-2.spec", "--tuple", "0|1", "--J", "0,2", "--within", "01,11"]),
    ("delta-transitive", &["delta-certify", "data/golden-mean.spec", "--sets", "1", "--sets", "1", "--sets", "1", "--horizon", "16"]),
    ("delta-transitive-set", &["delta-certify", "data/full-2.spec", "--sets", "0|1", "--relative-cylinders", "00", "--horizon", "16"]),
    ("delta-wm-subshift", &["delta-certify", "data/full-2.spec", "--kind", "wm", "--sets", "0|1", "--relative-spec", "data/golden-mean.spec", "--horizon", "16"]),
    ("delta-wm-cylinders-json", &["delta-certify", "data/full-2.spec", "--kind", "wm", "--sets", "01|00|01", "--relative-cylinders", "0", "--horizon", "16", "--format", "json"]),
    ("delta-system", &["delta-certify", "data/golden-mean.spec", "--kind", "system", "--d", "2", "--max-len", "2", "--horizon", "16"]),
    ("delta-spread-no-witness", &["delta-certify", "data/full-2.spec", "--kind", "spread", "--z", "0", "--targets", "1", "--horizon", "16"]),
    ("am-check-golden-mean", &["am-check", "data/golden-mean.spec", "--m", "2", "--set", "0,1", "--horizon", "16"]),
    ("am-check-full-2", &["am-check", "data/full-2.spec", "--m", "1", "--set", "0,1", "--horizon", "16"]),
    ("construct-golden-mean", &["construct", "data/golden-mean.spec", "--seeds", "0", "10", "--depth", "3"]),
    ("construct-full-2-json", &["construct", "data/full-2.spec", "--seeds", "0", "1", "--depth", "2", "--horizon", "64", "--format", "json"]),
    ("construct-cycle-refused", &["construct", "data/cycle-2.spec", "--seeds", "0", "1", "--depth", "3"]),
    ("verify-golden-mean", &["verify", "tests/golden/construct-golden-mean.out"]),
    ("verify-json", &["verify", "tests/golden/construct-full-2-json.out", "--format", "json"]),
    ("scan-tree", &["scan", "--tree", "tests/golden/construct-golden-mean.out", "--branch", "0,1", "--branch", "2,3"]),
    ("scan-pairs", &["scan", "data/golden-mean.spec", "--pairs", "data/pairs.txt", "--horizon", "200"]),
    ("scan-pairs-json", &["scan", "data/golden-mean.spec", "--pairs", "data/pairs.txt", "--horizon", "64", "--rs", "1,1", "--max-k", "2", "--format", "json"]),
    ("oracle-diff", &["oracle-diff", "data/queries.txt"]),
    ("parse-error", &["entropy", "tests/fixtures/bad-entry.spec"]),
];

pub fn root() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

/// stdout, then the exit code and stderr when either is not the quiet default.
pub fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_deltamix"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs");
    let mut s = String::from_utf8(out.stdout).unwrap();
    let code = out.status.code().unwrap_or(-1);
    let err = String::from_utf8(out.stderr).unwrap();
    if code != 0 || !err.is_empty() {
        s.push_str(&format!("--- exit {code}\n{err}"));
    }
    s
}

pub fn golden(name: &str) -> PathBuf {
    root().join("tests/golden").join(format!("{name}.out"))
}
