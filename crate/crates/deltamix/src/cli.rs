//! Command-line surface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltamix_core::chaos::{branch_pair, replay_events, scrambled_report, subsample_identity, SubsampleCheck};
use deltamix_core::construction::{theorem_b_construct, verify_tree, ConstructionTree};
use deltamix_core::entropy::{sft_entropy, word_count_entropy};
use deltamix_core::hitting::{filter_base_witness, generalized_hitting_set, thickness_certificate};
use deltamix_core::independence::{independence_check, independence_extend, IndependenceOutcome};
use deltamix_core::mixing::{
    a_m_membership, delta_transitive_certificate, delta_transitive_set_certificate, delta_transitive_system,
    delta_wm_certificate, replay_a_m, spread_witness, Relative,
};
use deltamix_core::point::PointGen;
use deltamix_core::{CylinderUnion, Error as DomainError, Limits, SubshiftSpec, Word};

use crate::artifact::{self, Format};
use crate::config::RunConfig;
use crate::corpus;
use crate::error::{read_file, CliError, Result};
use crate::notation::{parse_pair, parse_point, parse_tuple, parse_union, parse_usize_list, parse_word};
use crate::spec_file::load_spec;
use crate::tree_file::TreeDoc;
use crate::views::*;

#[derive(Debug, Parser)]
#[command(name = "deltamix", version, about = "Finite certificates for hitting sets, independence and mixing on SFTs")]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured horizon.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Write the artifact here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topological entropy.
    Entropy(EntropyArgs),
    /// Generalized hitting-time set N(U_1, ..., U_d).
    Hitting(HittingArgs),
    /// Check or grow an independence set.
    Independence(IndependenceArgs),
    /// Delta-transitivity, Delta-weak-mixing and spread certificates.
    DeltaCertify(DeltaArgs),
    /// Membership in A_m(X, T).
    AmCheck(AmArgs),
    /// Build a construction tree.
    Construct(ConstructArgs),
    /// Replay every invariant of a tree file.
    Verify(VerifyArgs),
    /// Proximal/asymptotic scan of point pairs.
    Scan(ScanArgs),
    /// Compare the fast hitting-set path with brute force on a query corpus.
    OracleDiff(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntropyMethod {
    Perron,
    WordCount,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value_t = EntropyMethod::Perron)]
    pub method: EntropyMethod,
    /// Longest word for `word-count`.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct HittingArgs {
    pub spec: PathBuf,
    /// One cylinder union per set, words comma-separated. Give one set with
    /// `--d` for the diagonal tuple.
    #[arg(long = "sets", required = true, num_args = 1..)]
    pub sets: Vec<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub witnesses: bool,
    /// Look for a run of this many consecutive members.
    #[arg(long)]
    pub block: Option<usize>,
    /// A second tuple, `|`-separated, for a filter-base witness.
    #[arg(long)]
    pub against: Option<String>,
}

#[derive(Debug, Args)]
pub struct IndependenceArgs {
    pub spec: PathBuf,
    #[arg(long = "tuple", required = true, num_args = 1..)]
    pub tuple: Vec<String>,
    /// Comma-separated times; the seed when `--extend` is given.
    #[arg(long = "J", default_value = "")]
    pub j: String,
    /// Points must also start in this union.
    #[arg(long)]
    pub within: Option<String>,
    /// Grow J greedily up to the horizon until it has this many elements.
    #[arg(long)]
    pub extend: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeltaKind {
    Transitive,
    Wm,
    System,
    Spread,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value_t = DeltaKind::Transitive)]
    pub kind: DeltaKind,
    #[arg(long = "sets", num_args = 1..)]
    pub sets: Vec<String>,
    /// Relativize to points starting in this union.
    #[arg(long, conflicts_with = "relative_spec")]
    pub relative_cylinders: Option<String>,
    /// Relativize to a subsystem given by a spec file.
    #[arg(long)]
    pub relative_spec: Option<PathBuf>,
    /// Arity for `system`.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Longest cylinder word for `system`.
    #[arg(long, default_value_t = 2)]
    pub max_len: usize,
    /// Base words for `spread`.
    #[arg(long = "z", num_args = 1..)]
    pub zs: Vec<String>,
    /// Target words for `spread`, one comma-separated list per base word.
    #[arg(long = "targets", num_args = 1..)]
    pub targets: Vec<String>,
}

#[derive(Debug, Args)]
pub struct AmArgs {
    pub spec: PathBuf,
    #[arg(long)]
    pub m: usize,
    /// The set E as a cylinder union.
    #[arg(long)]
    pub set: String,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    pub spec: PathBuf,
    #[arg(long = "seeds", required = true, num_args = 2..)]
    pub seeds: Vec<String>,
    #[arg(long)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub tree: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Needed with `--pairs`; a tree file carries its own.
    pub spec: Option<PathBuf>,
    #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
    pub pairs: Option<PathBuf>,
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Deepest-level set indices `a,b`, one per branch pair.
    #[arg(long = "branch", num_args = 1..)]
    pub branches: Vec<String>,
    #[arg(long = "rs", num_args = 1.., default_values_t = ["1,1".to_string(), "1,2".to_string(), "2,3".to_string()])]
    pub rs: Vec<String>,
    #[arg(long, default_value_t = 4)]
    pub max_k: usize,
    /// Write one trace file per report here.
    #[arg(long)]
    pub trace_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub queries: PathBuf,
}

/// What a command produced: the artifact, its destination and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub artifact: String,
    pub destination: Option<PathBuf>,
    pub extra_files: Vec<(PathBuf, String)>,
    pub code: i32,
}

struct Ctx {
    format: Format,
    config: RunConfig,
    inputs: Vec<(String, String)>,
}

impl Ctx {
    fn emit<B: artifact::Body>(&self, command: &str, body: &B) -> String {
        artifact::render(self.format, command, &self.config, &self.inputs, body)
    }

    fn input(&mut self, key: &str, value: impl Into<String>) {
        self.inputs.push((key.into(), value.into()));
    }

    fn spec(&mut self, path: &Path) -> Result<SubshiftSpec> {
        self.input("spec", path.display().to_string());
        load_spec(path)
    }
}

fn tuple_from(spec: &SubshiftSpec, sets: &[String]) -> Result<Vec<CylinderUnion>> {
    let mut out = Vec::new();
    for s in sets {
        out.extend(parse_tuple(spec, s)?);
    }
    Ok(out)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(h) = cli.horizon {
        config.horizon = h;
    }
    if let Some(o) = &cli.output {
        config.outputs.artifact = Some(o.clone());
    }
    if let Command::Scan(a) = &cli.command {
        if let Some(t) = &a.trace_dir {
            config.outputs.trace_dir = Some(t.clone());
        }
    }
    config.validate()?;
    let mut ctx = Ctx {
        format: cli.format,
        config,
        inputs: Vec::new(),
    };
    let mut extra_files = Vec::new();
    let mut code = 0;
    let artifact = match &cli.command {
        Command::Entropy(a) => entropy(&mut ctx, a)?,
        Command::Hitting(a) => hitting(&mut ctx, a)?,
        Command::Independence(a) => independence(&mut ctx, a)?,
        Command::DeltaCertify(a) => delta(&mut ctx, a)?,
        Command::AmCheck(a) => am_check(&mut ctx, a)?,
        Command::Construct(a) => construct(&mut ctx, a)?,
        Command::Verify(a) => verify(&mut ctx, a)?,
        Command::Scan(a) => scan(&mut ctx, a, &mut extra_files)?,
        Command::OracleDiff(a) => {
            ctx.input("queries", a.queries.display().to_string());
            let report = corpus::oracle_diff(&a.queries)?;
            if report.mismatches > 0 {
                code = 1;
            }
            ctx.emit("oracle-diff", &report)
        }
    };
    Ok(Outcome {
        artifact,
        destination: ctx.config.outputs.artifact.clone(),
        extra_files,
        code,
    })
}

fn entropy(ctx: &mut Ctx, a: &EntropyArgs) -> Result<String> {
    let spec = ctx.spec(&a.spec)?;
    let report = match a.method {
        EntropyMethod::Perron => sft_entropy(&spec, ctx.config.thresholds.entropy_tol)?,
        EntropyMethod::WordCount => word_count_entropy(&spec, a.n, &ctx.config.limits())?,
    };
    Ok(ctx.emit("entropy", &EntropyView::new(&spec, &report)))
}

fn hitting(ctx: &mut Ctx, a: &HittingArgs) -> Result<String> {
    let spec = ctx.spec(&a.spec)?;
    let mut us = tuple_from(&spec, &a.sets)?;
    if let Some(d) = a.d {
        if us.len() == 1 {
            us = vec![us[0].clone(); d];
        } else if us.len() != d {
            return Err(CliError::Usage(format!("--d {d} but {} sets given", us.len())));
        }
    }
    let horizon = ctx.config.horizon;
    let t = generalized_hitting_set(&spec, &us, horizon)?;
    let mut view = HittingView::new(&spec, &us, &t, a.witnesses);
    if let Some(block) = a.block {
        view.thickness = Some(Thick {
            block,
            start: thickness_certificate(&t, block)?,
        });
    }
    if let Some(other) = &a.against {
        let vs = parse_tuple(&spec, other)?;
        let f = filter_base_witness(&spec, &us, &vs, horizon, &ctx.config.limits())?;
        view.filter_base = Some(FilterView::new(&spec, &vs, &f));
    }
    Ok(ctx.emit("hitting", &view))
}

fn independence(ctx: &mut Ctx, a: &IndependenceArgs) -> Result<String> {
    let spec = ctx.spec(&a.spec)?;
    let tuple = tuple_from(&spec, &a.tuple)?;
    let within = a.within.as_deref().map(|w| parse_union(&spec, w)).transpose()?;
    let j = if a.j.trim().is_empty() { Vec::new() } else { parse_usize_list(&a.j)? };
    let limits = ctx.config.limits();
    let view = match a.extend {
        None => {
            let out = independence_check(&spec, &tuple, &j, within.as_ref(), &limits)?;
            if let IndependenceOutcome::Certified(c) = &out {
                c.replay(&spec, &limits)?;
            }
            IndependenceView::new(&spec, &tuple, within.as_ref(), &j, &out)
        }
        Some(target) => {
            let ext = independence_extend(&spec, &tuple, &j, ctx.config.horizon, target, within.as_ref(), &limits)?;
            ext.cert.replay(&spec, &limits)?;
            let mut v = IndependenceView::new(
                &spec,
                &tuple,
                within.as_ref(),
                &ext.cert.j,
                &IndependenceOutcome::Certified(ext.cert.clone()),
            );
            v.density = Some((&ext.density).into());
            v
        }
    };
    Ok(ctx.emit("independence", &view))
}

fn relative(ctx: &mut Ctx, spec: &SubshiftSpec, a: &DeltaArgs) -> Result<Relative> {
    Ok(match (&a.relative_cylinders, &a.relative_spec) {
        (Some(c), _) => Relative::Cylinders(parse_union(spec, c)?),
        (None, Some(p)) => {
            ctx.input("relative", p.display().to_string());
            Relative::SubShift(load_spec(p)?)
        }
        (None, None) => Relative::Whole,
    })
}

fn delta(ctx: &mut Ctx, a: &DeltaArgs) -> Result<String> {
    let spec = ctx.spec(&a.spec)?;
    let rel = relative(ctx, &spec, a)?;
    let horizon = ctx.config.horizon;
    let limits = ctx.config.limits();
    match a.kind {
        DeltaKind::Transitive => {
            let us = tuple_from(&spec, &a.sets)?;
            let c = match &rel {
                Relative::Whole => delta_transitive_certificate(&spec, &us, horizon)?,
                _ => delta_transitive_set_certificate(&spec, &rel, &us, horizon)?,
            };
            Ok(ctx.emit("delta-certify", &DeltaView::new(&spec, &c)))
        }
        DeltaKind::Wm => {
            let us = tuple_from(&spec, &a.sets)?;
            let c = delta_wm_certificate(&spec, &rel, &us, horizon, &limits)?;
            if let (Some(cert), Relative::SubShift(sub)) = (&c.independence, &rel) {
                cert.replay(sub, &limits)?;
            } else if let Some(cert) = &c.independence {
                cert.replay(&spec, &limits)?;
            }
            Ok(ctx.emit("delta-certify", &DeltaView::new(&spec, &c)))
        }
        DeltaKind::System => {
            let r = delta_transitive_system(&spec, a.d, a.max_len, horizon, &limits)?;
            Ok(ctx.emit("delta-certify", &SystemView::new(&spec, &r)))
        }
        DeltaKind::Spread => {
            let zs = a.zs.iter().map(|z| parse_word(&spec, z)).collect::<Result<Vec<Word>>>()?;
            let targets = a
                .targets
                .iter()
                .map(|t| t.split(',').map(|g| parse_word(&spec, g)).collect())
                .collect::<Result<Vec<Vec<Word>>>>()?;
            let w = spread_witness(&spec, &rel, &zs, &targets, horizon, &limits)?;
            Ok(ctx.emit("delta-certify", &SpreadView::new(&spec, &w)))
        }
    }
}

fn am_check(ctx: &mut Ctx, a: &AmArgs) -> Result<String> {
    let spec = ctx.spec(&a.spec)?;
    let e = parse_union(&spec, &a.set)?;
    let c = a_m_membership(&spec, &e, a.m, ctx.config.horizon, &ctx.config.limits())?;
    replay_a_m(&spec, &c)?;
    Ok(ctx.emit("am-check", &DeltaView::new(&spec, &c)))
}

fn construct(ctx: &mut Ctx, a: &ConstructArgs) -> Result<String> {
    let spec = ctx.spec(&a.spec)?;
    let seeds = a.seeds.iter().map(|s| parse_word(&spec, s)).collect::<Result<Vec<_>>>()?;
    let tree = theorem_b_construct(&spec, &seeds, a.depth, ctx.config.horizon, &ctx.config.limits())?;
    let doc = TreeDoc::from_tree(&tree, &ctx.config.to_line());
    Ok(match ctx.format {
        Format::Text => doc.to_text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("tree serializes");
            s.push('\n');
            s
        }
    })
}

/// Parse a tree document and replay it: invariants first, then the checksum.
pub fn verify_document(what: &str, text: &str, limits: &Limits) -> Result<(TreeDoc, ConstructionTree)> {
    let doc = TreeDoc::parse(what, text)?;
    let tree = doc.to_tree(what)?;
    verify_tree(&tree, limits)?;
    if !doc.checksum_ok() {
        return Err(DomainError::InvariantViolated {
            invariant: "checksum",
            detail: "document checksum does not match its contents".into(),
        }
        .into());
    }
    Ok((doc, tree))
}

fn verify(ctx: &mut Ctx, a: &VerifyArgs) -> Result<String> {
    let what = a.tree.display().to_string();
    ctx.input("tree", what.clone());
    let (doc, tree) = verify_document(&what, &read_file(&a.tree)?, &ctx.config.limits())?;
    let view = VerifyView {
        spec: tree.spec.name().into(),
        depth: tree.depth,
        horizon: tree.horizon,
        checksum: doc.checksum.clone(),
        levels: tree
            .levels
            .iter()
            .map(|l| LevelSummary {
                k: l.k,
                step: l.step,
                ap_source: l.ap_source.name().into(),
                sets: l.sets.len(),
                word_length: l.sets.iter().map(|s| s.word.len()).max().unwrap_or(0),
                j: l.j.clone(),
            })
            .collect(),
        verdict: "ok".into(),
    };
    Ok(ctx.emit("verify", &view))
}

fn read_pairs(spec: &SubshiftSpec, path: &Path) -> Result<Vec<(PointGen, PointGen)>> {
    let what = path.display().to_string();
    let text = read_file(path)?;
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [x, y] = parts.as_slice() else {
            return Err(CliError::parse(&what, i + 1, "expected `<x> <y>`"));
        };
        let p = |s: &str| parse_point(spec, s).map_err(|e| CliError::parse(&what, i + 1, e.to_string()));
        out.push((p(x)?, p(y)?));
    }
    Ok(out)
}

fn scan(ctx: &mut Ctx, a: &ScanArgs, files: &mut Vec<(PathBuf, String)>) -> Result<String> {
    let rs = a.rs.iter().map(|s| parse_pair(s)).collect::<Result<Vec<_>>>()?;
    if rs.iter().any(|&(r, s)| r == 0 || s == 0) {
        return Err(CliError::Usage("r and s must be positive".into()));
    }
    let th = ctx.config.thresholds();
    let window = ctx.config.thresholds.window;
    let keep = ctx.config.outputs.trace_dir.is_some();
    let (spec, pairs, mut view, horizon) = if let Some(tree_path) = &a.tree {
        let what = tree_path.display().to_string();
        ctx.input("tree", what.clone());
        let (_, tree) = verify_document(&what, &read_file(tree_path)?, &ctx.config.limits())?;
        let horizon = tree.horizon;
        let branches = if a.branches.is_empty() {
            vec![(0, 1)]
        } else {
            a.branches.iter().map(|b| parse_pair(b)).collect::<Result<Vec<_>>>()?
        };
        let mut view = ScanView {
            spec: tree.spec.name().into(),
            source: "tree".into(),
            rows: Vec::new(),
            subsample: Vec::new(),
            branches: Vec::new(),
            events: Vec::new(),
        };
        let mut pairs = Vec::new();
        for (i, &(x, y)) in branches.iter().enumerate() {
            let b = branch_pair(&tree, x, y, &rs, horizon, window, &th)?;
            replay_events(&b, window, &th)?;
            view.add_branch(i, &b);
            pairs.push(b.points());
        }
        (tree.spec.clone(), pairs, view, horizon)
    } else {
        let spec_path = a
            .spec
            .as_ref()
            .ok_or_else(|| CliError::Usage("scan --pairs needs a spec file".into()))?;
        let spec = ctx.spec(spec_path)?;
        let pairs_path = a.pairs.as_ref().expect("clap requires --pairs or --tree");
        ctx.input("pairs", pairs_path.display().to_string());
        let pairs = read_pairs(&spec, pairs_path)?;
        let view = ScanView {
            spec: spec.name().into(),
            source: "pairs".into(),
            rows: Vec::new(),
            subsample: Vec::new(),
            branches: Vec::new(),
            events: Vec::new(),
        };
        (spec, pairs, view, ctx.config.horizon)
    };
    let reach = rs.iter().map(|&(r, s)| r.max(s)).max().unwrap_or(1).max(a.max_k);
    for (i, (x, y)) in pairs.iter().enumerate() {
        for p in [x, y] {
            if !p.is_allowed_upto(&spec, reach * horizon + window - 1)? {
                return Err(DomainError::Precondition(format!("pair {i} leaves {}", spec.name())).into());
            }
        }
        for &(r, s) in &rs {
            let rep = scrambled_report(i, x, y, r, s, horizon, window, &th, keep)?;
            if let (Some(dir), Some(trace)) = (&ctx.config.outputs.trace_dir, &rep.trace) {
                files.push((dir.join(format!("trace-{i}-{r}-{s}.txt")), trace_text(trace)));
            }
            view.rows.push((&rep).into());
        }
        for k in 1..=a.max_k {
            view.subsample.push(SubsampleCheck {
                pair: i,
                k,
                holds: subsample_identity(x, y, k, horizon, window)?,
            });
        }
    }
    Ok(ctx.emit("scan", &view))
}
