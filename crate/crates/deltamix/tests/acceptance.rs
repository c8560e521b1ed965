//! One PASS/FAIL line per acceptance criterion. Tolerances and time limits
//! are the constants below.

#[path = "support/golden_cases.rs"]
mod cases;

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use deltamix::cli::verify_document;
use deltamix::corpus::oracle_diff;
use deltamix::tree_file::TreeDoc;
use deltamix_core::chaos::{branch_pair, scrambled_report, subsample_identity, Verdict};
use deltamix_core::construction::{theorem_b_construct, verify_tree, ConstructionTree};
use deltamix_core::density::find_ap;
use deltamix_core::entropy::sft_entropy;
use deltamix_core::hitting::{filter_base_witness, generalized_hitting_set, thickness_certificate};
use deltamix_core::independence::{independence_check, independence_extend, selector_at};
use deltamix_core::mixing::{delta_wm_certificate, Relative};
use deltamix_core::oracle::brute_ap;
use deltamix_core::{language, CylinderUnion, Error, Limits, SubshiftSpec, Thresholds, Word};

const ENTROPY_FULL_TOL: f64 = 1e-9;
const ENTROPY_GOLDEN_TOL: f64 = 1e-6;
const P_MIN: u32 = 10;
const EPS_MIN: f64 = 0.25;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    format!("{}: {err}", err.name())
}

fn cyl(w: &[u8]) -> CylinderUnion {
    CylinderUnion::single(Word::from(w))
}

/// Largest root of `x^2 - x - 1` by bisection on `[1, 2]`.
fn golden_root() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if mid * mid - mid - 1.0 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / 2.0
}

fn entropy_exactness() -> Check {
    let mut worst: f64 = 0.0;
    for k in 2..=4 {
        let r = sft_entropy(&SubshiftSpec::full_shift(k), 1e-12).map_err(e)?;
        let err = (r.value - (k as f64).ln()).abs();
        ensure(err < ENTROPY_FULL_TOL, || format!("full-{k}: error {err:e}"))?;
        worst = worst.max(err);
    }
    let g = sft_entropy(&SubshiftSpec::golden_mean(), 1e-12).map_err(e)?;
    let err = (g.value - golden_root().ln()).abs();
    ensure(err < ENTROPY_GOLDEN_TOL, || format!("golden mean: error {err:e}"))?;
    Ok(format!("full-k max error {worst:.1e}, golden-mean error {err:.1e}"))
}

fn oracle_equivalence() -> Check {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/queries.txt");
    let r = oracle_diff(&path).map_err(|err| err.to_string())?;
    ensure(r.queries >= 200, || format!("only {} queries", r.queries))?;
    ensure(r.mismatches == 0, || format!("{} mismatches", r.mismatches))?;
    Ok(format!("{} queries, 0 mismatches", r.queries))
}

fn prop_3_2() -> Check {
    let spec = SubshiftSpec::full_shift(2);
    let limits = Limits::default();
    let (horizon, block) = (64, 16);
    let mut words = Vec::new();
    for len in 1..=3 {
        words.extend(language(&spec, len, &limits).map_err(e)?);
    }
    let mut tuples = 0;
    for d in 2..=3 {
        let total = words.len().pow(d as u32);
        for idx in 0..total {
            let pick = |i: usize| -> Vec<CylinderUnion> {
                selector_at(words.len(), d, i).iter().map(|&w| cyl(&words[w])).collect()
            };
            let us = pick(idx);
            let vs = pick((idx * 7 + 3) % total);
            let t = generalized_hitting_set(&spec, &us, horizon).map_err(e)?;
            ensure(!t.is_empty(), || format!("empty N for tuple {idx}, d = {d}"))?;
            ensure(thickness_certificate(&t, block).map_err(e)?.is_some(), || format!("no block of {block} for tuple {idx}"))?;
            let f = filter_base_witness(&spec, &us, &vs, horizon, &limits).map_err(e)?;
            let nw = generalized_hitting_set(&spec, &f.ws, horizon).map_err(e)?;
            let nv = generalized_hitting_set(&spec, &vs, horizon).map_err(e)?;
            let inside = nw.members.iter().all(|&n| t.contains(n) && nv.contains(n));
            ensure(inside && nw.members == f.checked, || format!("inclusion fails for tuple {idx}, d = {d}"))?;
            tuples += 1;
        }
    }
    Ok(format!("{tuples} tuples at horizon {horizon}, block {block}"))
}

fn prop_3_8() -> Check {
    let limits = Limits::default();
    let gm = SubshiftSpec::golden_mean();
    let no111 = SubshiftSpec::from_forbidden_words("no-111", vec!['0', '1'], vec![Word::from(&[1u8, 1, 1][..])]).map_err(e)?;
    let cases: Vec<(SubshiftSpec, Relative)> = vec![
        (SubshiftSpec::full_shift(2), Relative::Whole),
        (SubshiftSpec::full_shift(2), Relative::Cylinders(cyl(&[0]))),
        (SubshiftSpec::full_shift(2), Relative::SubShift(gm.clone())),
        (SubshiftSpec::full_shift(2), Relative::SubShift(no111.clone())),
        (SubshiftSpec::full_shift(3), Relative::Whole),
        (SubshiftSpec::full_shift(3), Relative::Cylinders(CylinderUnion::from_symbols(&[&[0], &[2]]))),
        (gm.clone(), Relative::Whole),
        (gm.clone(), Relative::Cylinders(cyl(&[0]))),
        (no111.clone(), Relative::Whole),
    ];
    let mut certs = 0;
    for (spec, rel) in &cases {
        let (space, within) = match rel {
            Relative::Whole => (spec.clone(), None),
            Relative::Cylinders(c) => (spec.clone(), Some(c.clone())),
            Relative::SubShift(s) => (s.clone(), None),
        };
        let symbols = (0..spec.alphabet_size() as u8).map(|a| cyl(&[a]));
        let mut pool: Vec<CylinderUnion> = symbols.collect();
        pool.extend(language(&space, 2, &limits).map_err(e)?.iter().map(|w| cyl(w)));
        for d in 2..=3 {
            for idx in 0..pool.len().pow(d as u32) {
                let us: Vec<CylinderUnion> = selector_at(pool.len(), d, idx).iter().map(|&i| pool[i].clone()).collect();
                let c = match delta_wm_certificate(spec, rel, &us, 16, &limits) {
                    Ok(c) => c,
                    Err(Error::EmptyOpenSet) | Err(Error::CapExceeded { .. }) => continue,
                    Err(err) => return Err(format!("{}: {}", spec.name(), e(err))),
                };
                let mut sets = us.clone();
                if let Some(a) = &within {
                    sets[0] = sets[0].intersect(a);
                }
                let t = generalized_hitting_set(&space, &sets, c.n).map_err(e)?;
                ensure(t.contains(c.n), || format!("{}: n = {} not in N", spec.name(), c.n))?;
                let cert = c.independence.as_ref().ok_or("certificate without independence")?;
                cert.replay(&space, &limits).map_err(e)?;
                certs += 1;
            }
        }
    }
    ensure(certs >= 100, || format!("only {certs} certificates"))?;
    Ok(format!("{certs} certificates replayed"))
}

fn theorem_b() -> Result<(String, ConstructionTree), String> {
    let limits = Limits::default();
    let seeds = [Word::from(&[0u8][..]), Word::from(&[1u8, 0][..])];
    let tree = theorem_b_construct(&SubshiftSpec::golden_mean(), &seeds, 3, 512, &limits).map_err(e)?;
    verify_tree(&tree, &limits).map_err(e)?;
    let text = TreeDoc::from_tree(&tree, "horizon=512").to_text();
    let (_, back) = verify_document("tree", &text, &limits).map_err(|err| err.to_string())?;
    ensure(back == tree, || "tree document does not round-trip".into())?;
    let refused = theorem_b_construct(&SubshiftSpec::cycle(2), &[Word::from(&[0u8][..]), Word::from(&[1u8][..])], 3, 512, &limits);
    ensure(refused == Err(Error::EntropyZero), || format!("2-cycle gave {refused:?}"))?;
    let steps: Vec<String> = tree.levels.iter().map(|l| l.step.to_string()).collect();
    let sizes: Vec<String> = tree.levels.iter().map(|l| l.sets.len().to_string()).collect();
    Ok((format!("steps {} sets {}, 2-cycle refused", steps.join(","), sizes.join(",")), tree))
}

fn theorem_6_2(tree: &ConstructionTree) -> Check {
    let th = Thresholds {
        p_min: P_MIN,
        eps_min: EPS_MIN,
        ..Thresholds::default()
    };
    let rs = [(1, 1), (1, 2), (2, 3)];
    let window = P_MIN as usize + 1;
    let horizon = tree.horizon;
    let mut reports = 0;
    for (a, b) in [(0, 1), (2, 3)] {
        let pair = branch_pair(tree, a, b, &rs, horizon, window, &th).map_err(e)?;
        let (x, y) = pair.points();
        for &(r, s) in &rs {
            let rep = scrambled_report(0, &x, &y, r, s, horizon, window, &th, false).map_err(e)?;
            let min_ok = rep.min_tail.upper_bound() <= (-(P_MIN as f64)).exp2();
            let max_ok = rep.max_tail.value() >= EPS_MIN;
            ensure(rep.verdict == Verdict::ScrambledEvidence && min_ok && max_ok, || {
                format!("branches ({a},{b}) at ({r},{s}): {:?} {:?} {:?}", rep.verdict, rep.min_tail, rep.max_tail)
            })?;
            reports += 1;
        }
        for k in 1..=4 {
            ensure(subsample_identity(&x, &y, k, horizon, window).map_err(e)?, || format!("subsampling fails at k = {k}"))?;
        }
    }
    Ok(format!("{reports} scrambled reports, subsampling exact for k <= 4"))
}

fn hereditary_and_ap() -> Check {
    let limits = Limits::default();
    let bases = [
        (SubshiftSpec::full_shift(2), vec![cyl(&[0]), cyl(&[1])]),
        (SubshiftSpec::golden_mean(), vec![cyl(&[0]), cyl(&[1])]),
        (SubshiftSpec::full_shift(3), vec![cyl(&[0]), cyl(&[1, 2])]),
    ];
    let mut certs = Vec::new();
    for (spec, tuple) in &bases {
        let ext = independence_extend(spec, tuple, &[], 24, 8, None, &limits).map_err(e)?;
        certs.push((spec, tuple, ext.cert.j));
    }
    let mut checks = 0;
    for i in 0..100usize {
        let (spec, tuple, j) = &certs[i % certs.len()];
        let mask = (i * 37 + 11) % (1 << j.len());
        let sub: Vec<usize> = j.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &t)| t).collect();
        let shift = (i * 5) % 9;
        let moved: Vec<usize> = sub.iter().map(|t| t + shift).collect();
        for candidate in [&sub, &moved] {
            let out = independence_check(spec, tuple, candidate, None, &limits).map_err(e)?;
            ensure(out.is_certified(), || format!("check {i}: {candidate:?} not independent in {}", spec.name()))?;
        }
        checks += 1;
    }
    let mut sets = 0;
    for i in 0..400usize {
        let m = 40 + i % 90;
        let (a, b) = (i * 13 + 7, i * 29 + 3);
        let f: Vec<usize> = (0..m).filter(|&x| (x * a + b) % 97 < 20 + i % 40).take(64).collect();
        for d in 2..=5 {
            let got = find_ap(&f, d).map_err(e)?;
            ensure(got == brute_ap(&f, d), || format!("find_ap disagrees on set {i}, d = {d}"))?;
        }
        sets += 1;
    }
    Ok(format!("{checks} sub/translate checks, find_ap on {sets} sets x 4 lengths"))
}

fn determinism() -> Check {
    let mut same = 0;
    for (name, args) in cases::CASES {
        let first = cases::run(args);
        ensure(first == cases::run(args), || format!("{name} differs between runs"))?;
        let committed = std::fs::read_to_string(cases::golden(name)).unwrap_or_default();
        ensure(first == committed, || format!("{name} differs from its golden file"))?;
        same += 1;
    }
    ensure(same >= 20, || format!("only {same} golden files"))?;
    Ok(format!("{same} golden files byte-identical"))
}

fn report(id: u32, title: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let (ok, detail) = match out {
        Ok(d) if took <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took longer than {limit:?}")),
        Err(d) => (false, d),
    };
    println!("{} {id} {title}: {detail} ({:.2}s)", if ok { "PASS" } else { "FAIL" }, took.as_secs_f64());
    ok
}

fn main() -> ExitCode {
    let mut all = true;
    all &= report(1, "entropy exactness", Duration::from_secs(1), entropy_exactness);
    all &= report(2, "oracle equivalence", Duration::from_secs(30), oracle_equivalence);
    all &= report(3, "hitting sets, thickness and filter bases on the full 2-shift", Duration::from_secs(60), prop_3_2);
    all &= report(4, "weak-mixing certificates replay", Duration::from_secs(60), prop_3_8);
    let mut tree = None;
    all &= report(5, "depth-3 construction tree", Duration::from_secs(120), || {
        theorem_b().map(|(d, t)| {
            tree = Some(t);
            d
        })
    });
    all &= report(6, "scrambled branch pairs", Duration::from_secs(60), || match &tree {
        Some(t) => theorem_6_2(t),
        None => Err("no tree from criterion 5".into()),
    });
    all &= report(7, "hereditary, translation and progression checks", Duration::from_secs(60), hereditary_and_ap);
    all &= report(8, "determinism", Duration::from_secs(120), determinism);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
