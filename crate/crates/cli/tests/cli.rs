//! Golden tests against the built binary: stable text output and the
//! exit-code contract (0 success, 1 semantic no, 2 usage, 3 cap).

use std::io::Write;
use std::process::{Command, Stdio};

use lmonoid::variety::{enumerate_words, WordFilter};
use lmonoid::{compose, SumWord};

fn lmonoid(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lmonoid"));
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    let mut child = cmd.spawn().expect("spawn lmonoid");
    if let Some(input) = stdin {
        child
            .stdin
            .take()
            .expect("stdin piped")
            .write_all(input.as_bytes())
            .expect("write stdin");
    }
    let out = child.wait_with_output().expect("wait for lmonoid");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn word_of(text: &str) -> SumWord {
    text.parse().expect("test word")
}

#[test]
fn compose_then_decompose_round_trips_every_word_of_size_at_most_six() {
    for size in 1..=6 {
        for word in enumerate_words(size, WordFilter::All).unwrap() {
            let text = word.to_string();
            let (code, table, _) = lmonoid(&["compose", &text], None);
            assert_eq!(code, 0, "compose {text}");
            assert!(table.ends_with('\n'));
            let (code, round, _) = lmonoid(&["decompose", "-"], Some(&table));
            assert_eq!(code, 0, "decompose {text}");
            assert_eq!(round, format!("{text}\n"));
        }
    }
}

#[test]
fn counts_is_headerless_tsv_with_exact_columns() {
    let (code, out, _) = lmonoid(&["counts", "--up-to", "5"], None);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "1\t1\t1\t1");
    assert_eq!(lines[4], "5\t44\t22\t16");
}

#[test]
fn equation_failure_prints_the_witness_and_exits_one() {
    let algebra = compose(&word_of("C2d")).to_text();
    let (code, out, _) = lmonoid(&["check", "-", "x1 <= e"], Some(&algebra));
    assert_eq!(code, 1);
    assert_eq!(out, "x1=1\n");
    let (code, out, _) = lmonoid(&["check", "-", "e <= x1"], Some(&algebra));
    assert_eq!(code, 0);
    assert_eq!(out, "holds\n");
}

#[test]
fn embedding_query_prints_positions_or_none() {
    let (code, out, _) = lmonoid(&["embed", "C2d", "C2+C2d"], None);
    assert_eq!((code, out.as_str()), (0, "1\n"));
    let (code, out, _) = lmonoid(&["embed", "G3", "D3"], None);
    assert_eq!((code, out.as_str()), (1, "none\n"));
}

#[test]
fn subdirect_irreducibility_reports_the_monolith() {
    let c3 = compose(&word_of("C2+C2d")).to_text();
    let (code, out, _) = lmonoid(&["sdi", "-"], Some(&c3));
    assert_eq!((code, out.as_str()), (0, "yes 0-0;1-2\n"));
    let reducible = compose(&word_of("C2+C2")).to_text();
    let (code, out, _) = lmonoid(&["sdi", "-"], Some(&reducible));
    assert_eq!((code, out.as_str()), (1, "no\n"));
}

#[test]
fn congruence_listing_covers_the_whole_lattice() {
    let c3 = compose(&word_of("C2+C2d")).to_text();
    let (code, out, _) = lmonoid(&["congruences", "-"], Some(&c3));
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.contains(&"0-0;1-1;2-2"));
    assert!(lines.contains(&"0-2"));
}

#[test]
fn extension_property_splits_the_three_and_four_chains() {
    let c3 = compose(&word_of("C2+C2d")).to_text();
    let (code, out, _) = lmonoid(&["cep", "-"], Some(&c3));
    assert_eq!((code, out.as_str()), (0, "yes\n"));
    let c4 = compose(&word_of("C2+C2d+C2")).to_text();
    let (code, out, _) = lmonoid(&["cep", "-"], Some(&c4));
    assert_eq!((code, out.as_str()), (1, "no\n"));
}

#[test]
fn membership_answers_with_the_exit_code() {
    let (code, out, _) = lmonoid(&["member", "C2", "--gens", "C2+C2d"], None);
    assert_eq!((code, out.as_str()), (0, "yes\n"));
    let (code, out, _) = lmonoid(&["member", "G3", "--gens", "C2+C2d"], None);
    assert_eq!((code, out.as_str()), (1, "no\n"));
}

#[test]
fn axiom_families_print_the_expected_equations() {
    let cases = [
        (&["axiom", "sigma", "2"][..], "x1 <= e\n"),
        (&["axiom", "sigma", "3"][..], "x1 <= e v x1*x2\n"),
        (&["axiom", "sigma-dual", "2"][..], "e <= x1\n"),
        (&["axiom", "gamma", "3"][..], "x1*(e ^ x3*x4) <= (e v x1*x2)*x3\n"),
        (&["axiom", "--gens", "C2"][..], "x1 <= e\n"),
        (&["axiom", "--gens", "0"][..], "x1 = e\n"),
    ];
    for (args, expected) in cases {
        let (code, out, _) = lmonoid(args, None);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(out, expected, "{args:?}");
    }
    let (code, _, _) = lmonoid(&["axiom", "gamma", "2"], None);
    assert_eq!(code, 2);
}

#[test]
fn amalgamation_merges_the_known_span() {
    let (code, out, _) = lmonoid(
        &["amalgamate", "--base", "C2d", "--left", "G3", "--f", "0", "--right", "C2d+C2", "--g", "0"],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(out, "G3+C2\nleft: 0\nright: 0,1\nstrong: yes\n");
}

#[test]
fn element_image_witnesses_match_position_witnesses() {
    let dir = std::env::temp_dir().join(format!("lmonoid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g3.alg");
    std::fs::write(&path, compose(&word_of("G3")).to_text()).unwrap();
    let path = path.to_str().unwrap();
    let (code, out, _) = lmonoid(
        &["amalgamate", "--base", "C2d", "--left", path, "--f", "e:1,2", "--right", "C2d+C2", "--g", "0"],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(out, "G3+C2\nleft: 0\nright: 0,1\nstrong: yes\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn incompatible_spans_report_the_certificate_position() {
    let span: &[&str] = &["--base", "C2", "--left", "G3", "--f", "0", "--right", "D3", "--g", "0"];
    let (code, out, _) = lmonoid(&[&["amalgamate"][..], span].concat(), None);
    assert_eq!((code, out.as_str()), (1, "incompatible 0\n"));
    let (code, out, _) = lmonoid(&[&["search-amalgam"][..], span].concat(), None);
    assert_eq!((code, out.as_str()), (1, "none\n"));
}

#[test]
fn variety_status_covers_generated_and_symbolic_queries() {
    let cases = [
        (&["variety-status", "--gens", "G3"][..], 0, "yes\n"),
        (&["variety-status", "--gens", "G3,D3"][..], 1, "no\n"),
        (&["variety-status", "--gens", "C2+C2d,C2d+C2"][..], 1, "no\n"),
        (&["variety-status", "--symbolic", "cid"][..], 0, "open\n"),
        (&["variety-status", "--symbolic", "g-chains"][..], 0, "open\n"),
        (&["variety-status", "--symbolic", "d-chains"][..], 0, "open\n"),
        (&["variety-status", "--symbolic", "full"][..], 1, "no\n"),
    ];
    for (args, expected_code, expected_out) in cases {
        let (code, out, _) = lmonoid(args, None);
        assert_eq!((code, out.as_str()), (expected_code, expected_out), "{args:?}");
    }
}

#[test]
fn usage_errors_exit_two_and_caps_exit_three() {
    let (code, _, _) = lmonoid(&["frobnicate"], None);
    assert_eq!(code, 2);
    let (code, _, stderr) = lmonoid(&["compose", "BOGUS"], None);
    assert_eq!(code, 2);
    assert!(stderr.contains("BOGUS"));
    let (code, _, _) = lmonoid(&["enumerate", "--size", "15"], None);
    assert_eq!(code, 3);
    let span: &[&str] = &["--base", "C2", "--left", "G3", "--f", "0", "--right", "D3", "--g", "0"];
    let (code, _, _) = lmonoid(&[&["search-amalgam"][..], span, &["--cap", "9"][..]].concat(), None);
    assert_eq!(code, 3);
}

#[test]
fn json_mode_emits_one_parseable_object_per_call() {
    let c3 = compose(&word_of("C2+C2d")).to_text();
    let (code, out, _) = lmonoid(&["--json", "sdi", "-"], Some(&c3));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sdi"], serde_json::json!(true));
    assert_eq!(v["monolith"], serde_json::json!("0-0;1-2"));

    let (code, out, _) = lmonoid(&["counts", "--up-to", "3", "--json"], None);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][2]["all"], serde_json::json!("6"));

    let (code, out, _) = lmonoid(&["--json", "check", "-", "x1 <= e"], Some(&compose(&word_of("C2d")).to_text()));
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["holds"], serde_json::json!(false));
    assert_eq!(v["witness"], serde_json::json!([1]));
}
