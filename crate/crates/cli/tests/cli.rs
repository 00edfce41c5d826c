mod support;

use std::fs;
use std::path::PathBuf;

use grope_norm::format::parse_grope;
use grope_norm_cli::{run, run_in, Outcome, EXIT_DOMAIN, EXIT_OK, EXIT_PARSE};
use support::fixtures;

fn cli(args: &str) -> Outcome {
    run_in(
        std::iter::once("grope-norm").chain(args.split_whitespace()),
        &fixtures(),
    )
}

fn ok(args: &str) -> String {
    let out = cli(args);
    assert_eq!(out.code, EXIT_OK, "{args}: {}", out.stderr);
    out.stdout
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn three_branch_length() {
    assert_eq!(
        ok("length --q 1 three_branch.grope"),
        "83/36 (≈ 2.305556)\n"
    );
    assert_eq!(
        ok("length three_branch.grope --q 2"),
        "109/72 (≈ 1.513889)\n"
    );
}

#[test]
fn family_kn_summary() {
    let out = ok("family kn --n 2 --m 3 --q 1");
    assert!(out.contains("witness length: 1/2 (≈ 0.500000)"), "{out}");
    assert!(
        out.contains("window: [1/8 (≈ 0.125000), 1/2 (≈ 0.500000)]"),
        "{out}"
    );
    assert!(out.contains("flag: K_2^3 is not in G_5"), "{out}");
    assert_eq!(cli("family kn --n 2 --m 2").code, EXIT_DOMAIN);
}

#[test]
fn trefoil_figure_eight_distance() {
    let out = ok("distance --k trefoil.sm --j fig8.sm --q 1 --evidence tref_fig8.ev");
    assert_eq!(
        out.lines().next(),
        Some("[1/2 (≈ 0.500000), 1 (≈ 1.000000)]")
    );
    let out = ok("distance --k trefoil.sm --j fig8.sm --q 4 --evidence tref_fig8.ev");
    assert_eq!(
        out.lines().next(),
        Some("[1/8 (≈ 0.125000), 27/64 (≈ 0.421875)]")
    );
    let same = ok("distance --k trefoil.sm --j trefoil.sm --q 3");
    assert!(same.starts_with("[0 (≈ 0.000000), inf]"), "{same}");
}

#[test]
fn split_full_reproduces_split_right() {
    let out = ok("split --full split_left.grope");
    let right = fs::read_to_string(fixtures().join("split_right.grope")).unwrap();
    assert_eq!(parse_grope(&out).unwrap(), parse_grope(&right).unwrap());
    let one = ok("split split_left.grope --branch 0 --side left");
    assert_eq!(parse_grope(&one).unwrap(), parse_grope(&right).unwrap());
    assert_eq!(
        cli("split split_left.grope --branch 0 --side right").code,
        EXIT_DOMAIN
    );
}

#[test]
fn glue_adds_lengths() {
    let a = scratch(
        "conc.grope",
        "grope v1\ncomponent concordance\nbranch (1) (1)\n",
    );
    let glued = ok(&format!("glue {} {}", a.display(), a.display()));
    assert_eq!(
        glued,
        "grope v1\ncomponent concordance\nbranch (1) (1) *2\n"
    );
}

#[test]
fn infect_k0_gives_k1() {
    let out = ok("infect --operator kn.op k0.grope");
    let g = parse_grope(&out).unwrap();
    assert_eq!(g.branch_count(), 2);
    let path = scratch("k1.grope", &out);
    assert_eq!(
        ok(&format!("length {}", path.display())),
        "1/2 (≈ 0.500000)\n"
    );
    let zero = cli("infect --operator kn.op k0.grope --multiplicity 0");
    assert_eq!(zero.code, EXIT_DOMAIN);
    assert!(zero.stderr.contains("multiplicity 0"), "{}", zero.stderr);
}

#[test]
fn contraction_constant() {
    assert_eq!(
        ok("contraction --operator two_slot.op --q 3"),
        "N = 2\ndelta = N/q = 2/3 (≈ 0.666667)\n"
    );
    let out = cli("contraction --operator two_slot.op --q 2");
    assert_eq!(out.code, EXIT_DOMAIN);
    assert!(
        out.stderr.contains("not certified contractive"),
        "{}",
        out.stderr
    );
}

#[test]
fn quasi_isometry() {
    let out = ok("qiso --a 1 --b 0");
    assert!(out.starts_with("m = 2\nn = 2\n"), "{out}");
    let out = ok("qiso --a 2 --b 1");
    assert!(
        out.contains("m/A - B = 3/2") && out.contains("m/2^n = 5/8"),
        "{out}"
    );
}

#[test]
fn seifert_invariants() {
    assert!(ok("signature trefoil.sm --angle 1/2 --float")
        .starts_with("signature at 1/2: 2\nfloat oracle: 2"));
    let scan = ok("signature fig8.sm --d-max 12");
    assert!(scan.starts_with("max |signature|: 0"), "{scan}");
    let root = cli("signature trefoil.sm --angle 1/6");
    assert_eq!(root.code, EXIT_DOMAIN);
    assert_eq!(ok("alexander trefoil.sm"), "1 - t + t^2\n");
    assert_eq!(ok("arf fig8.sm"), "1\n");
    assert!(ok("arf trefoil.sm --cross-check").starts_with("1 (Murasugi"));
}

#[test]
fn bounds_and_report() {
    let out = ok("bounds --evidence tref_fig8.ev --q 2");
    assert!(
        out.starts_with("[0 (≈ 0.000000), 27/32 (≈ 0.843750)]"),
        "{out}"
    );
    let report = ok("report --k trefoil.sm --j fig8.sm --evidence tref_fig8.ev --q 1");
    assert!(
        report.starts_with("interval at q = 1: [1/2 (≈ 0.500000), 1 (≈ 1.000000)]"),
        "{report}"
    );
    assert!(report.contains("| provenance"), "{report}");
    assert!(report.contains("genus one surface"), "{report}");
    assert!(
        report.contains("lower 1/2 (≈ 0.500000) from #1"),
        "{report}"
    );
    assert!(report.contains("upper 1 (≈ 1.000000) from #3"), "{report}");
    assert_eq!(cli("report --q 1").code, EXIT_PARSE);
}

#[test]
fn inconsistent_evidence_is_a_domain_error() {
    let ev = scratch(
        "bad.ev",
        "evidence v1\nfiltration 2 | claims not in G_2\nslice_genus 0 | slice\n",
    );
    let out = cli(&format!("bounds --evidence {}", ev.display()));
    assert_eq!(out.code, EXIT_DOMAIN);
    assert!(
        out.stderr.contains("inconsistent") || out.stderr.contains("exceeds"),
        "{}",
        out.stderr
    );
}

#[test]
fn exit_codes() {
    let missing = cli("length nowhere.grope");
    assert_eq!(missing.code, EXIT_PARSE);
    assert!(missing.stderr.contains("nowhere.grope"));

    let bad = scratch(
        "bad.grope",
        "grope v1\ncomponent knot\nbranch (1 (1)) (1)\nbranch ((\n",
    );
    let out = cli(&format!("length {}", bad.display()));
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.stderr.contains("bad.grope: line 4"), "{}", out.stderr);

    let invalid = scratch(
        "invalid.grope",
        "grope v1\ncomponent knot\nbranch (1 (1)) (1)\n",
    );
    let out = cli(&format!("validate {}", invalid.display()));
    assert_eq!(out.code, EXIT_DOMAIN, "{}", out.stderr);

    assert_eq!(cli("length three_branch.grope --q 1/2").code, EXIT_DOMAIN);
    assert_eq!(cli("length three_branch.grope --q x").code, EXIT_PARSE);
    assert_eq!(cli("frobnicate").code, EXIT_PARSE);
    let help = run(["grope-norm", "--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("length"));
}

#[test]
fn batch_runs_in_manifest_order() {
    let out = cli("batch kn_windows.manifest");
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert_eq!(out.stdout.matches("witness in window: yes").count(), 11);
    let heads: Vec<&str> = out
        .stdout
        .lines()
        .filter(|l| l.starts_with("== ["))
        .collect();
    assert_eq!(heads.len(), 11);
    for (n, head) in heads.iter().enumerate() {
        assert!(
            head.ends_with(&format!("family kn --n {n} --m 3 --q 1")),
            "{head}"
        );
    }
    assert!(out.stdout.ends_with("== 11 ok, 0 failed\n"));
}

#[test]
fn batch_edge_cases() {
    let empty = scratch("empty.manifest", "# nothing here\n\n");
    let out = cli(&format!("batch {}", empty.display()));
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, ""));

    let three_branch = fixtures().join("three_branch.grope");
    let mixed = scratch(
        "mixed.manifest",
        &format!(
            "length {}\nlength missing.grope\nfamily whitehead --m 4 --n 2\n",
            three_branch.display()
        ),
    );
    let out = cli(&format!("batch {}", mixed.display()));
    assert_eq!(out.code, EXIT_DOMAIN);
    assert!(out.stdout.contains("== [1] length"));
    assert!(out.stdout.contains("83/36 (≈ 2.305556)"));
    assert!(
        out.stdout.contains("error: missing.grope"),
        "{}",
        out.stdout
    );
    assert!(out.stdout.contains("witness length: 1 (≈ 1.000000)"));
    assert!(out.stdout.ends_with("== 2 ok, 1 failed\n"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        "batch kn_windows.manifest",
        "report --k trefoil.sm --j fig8.sm --evidence tref_fig8.ev --q 3/2",
        "infect --operator kn.op k0.grope",
    ] {
        assert_eq!(cli(args), cli(args));
    }
}
