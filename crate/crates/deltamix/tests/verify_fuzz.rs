//! Every single-field edit of a constructed tree must be rejected by `verify`.

use deltamix::cli::verify_document;
use deltamix::tree_file::TreeDoc;
use deltamix::CliError;
use deltamix_core::construction::theorem_b_construct;
use deltamix_core::{Error, Limits, SubshiftSpec, Word};

fn tree_text() -> String {
    let seeds = [Word::from(&[0u8][..]), Word::from(&[1u8, 0][..])];
    let tree = theorem_b_construct(&SubshiftSpec::golden_mean(), &seeds, 3, 512, &Limits::default()).unwrap();
    TreeDoc::from_tree(&tree, "horizon=512").to_text()
}

/// Change one token: bump a number, flip a binary symbol, or alter a hex digit.
fn mutate_token(tok: &str, variant: usize) -> Option<String> {
    if tok.len() == 64 && tok.chars().all(|c| c.is_ascii_hexdigit()) {
        let i = variant % 64;
        let c = tok.as_bytes()[i];
        let swapped = if c == b'0' { '1' } else { '0' };
        return Some(format!("{}{}{}", &tok[..i], swapped, &tok[i + 1..]));
    }
    if tok.chars().all(|c| c == '0' || c == '1') && tok.len() > 1 {
        let i = variant % tok.len();
        let flipped = if tok.as_bytes()[i] == b'0' { '1' } else { '0' };
        return Some(format!("{}{}{}", &tok[..i], flipped, &tok[i + 1..]));
    }
    if let Ok(n) = tok.parse::<usize>() {
        let m = match (variant % 2, n) {
            (0, _) => n + 1,
            (_, 0) => 2,
            _ => n - 1,
        };
        return Some(m.to_string());
    }
    if tok.contains(',') {
        let parts: Vec<&str> = tok.split(',').collect();
        let i = variant % parts.len();
        let bumped: Vec<String> = parts
            .iter()
            .enumerate()
            .map(|(k, p)| if k == i { (p.parse::<usize>().unwrap() + 1).to_string() } else { p.to_string() })
            .collect();
        return Some(bumped.join(","));
    }
    match tok {
        "progression" => Some("direct".into()),
        "direct" => Some("progression".into()),
        _ => None,
    }
}

/// Mutations spread over every line and field of the document.
fn mutations(text: &str) -> Vec<(usize, String)> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    for (li, line) in lines.iter().enumerate() {
        let toks: Vec<&str> = line.split(' ').collect();
        for ti in 1..toks.len() {
            for variant in [li, li + 7] {
                if let Some(m) = mutate_token(toks[ti], variant) {
                    let mut t = toks.clone();
                    t[ti] = &m;
                    let mut all = lines.clone();
                    let new_line = t.join(" ");
                    all[li] = &new_line;
                    let doc: String = all.iter().map(|l| format!("{l}\n")).collect();
                    if doc != text {
                        out.push((li + 1, doc));
                    }
                }
            }
        }
    }
    out.dedup_by(|a, b| a.1 == b.1);
    out
}

#[test]
fn original_is_accepted() {
    verify_document("t", &tree_text(), &Limits::default()).unwrap();
}

#[test]
fn every_mutation_is_rejected() {
    let text = tree_text();
    let muts = mutations(&text);
    assert!(muts.len() >= 100, "only {} mutations", muts.len());
    eprintln!("{} mutations", muts.len());
    let limits = Limits::default();
    for (line, doc) in &muts {
        assert!(verify_document("t", doc, &limits).is_err(), "mutation on line {line} accepted");
    }
}

#[test]
fn flipped_cylinder_symbol_names_nesting() {
    let text = tree_text();
    let last = text.lines().rfind(|l| l.starts_with("set ")).unwrap().to_string();
    let (head, word) = last.rsplit_once(' ').unwrap();
    let flipped: String = word
        .chars()
        .enumerate()
        .map(|(i, c)| if i == word.len() - 1 { if c == '0' { '1' } else { '0' } } else { c })
        .collect();
    let doc = text.replace(&last, &format!("{head} {flipped}"));
    match verify_document("t", &doc, &Limits::default()) {
        Err(CliError::Domain(Error::InvariantViolated { invariant, .. })) => assert_eq!(invariant, "nesting"),
        other => panic!("expected a nesting violation, got {other:?}"),
    }
}

#[test]
fn checksum_is_checked_after_invariants() {
    let text = tree_text();
    let doc = text.replacen("ap-source progression", "ap-source direct", 1);
    match verify_document("t", &doc, &Limits::default()) {
        Err(CliError::Domain(Error::InvariantViolated { invariant, .. })) => assert_eq!(invariant, "checksum"),
        other => panic!("expected a checksum violation, got {other:?}"),
    }
}
