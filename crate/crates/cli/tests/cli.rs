use hopfcert_cli::{run_command, Outcome, EXIT_FAIL, EXIT_PASS, EXIT_REFUSED, EXIT_USAGE};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus");

fn run(args: &str) -> Outcome {
    let argv: Vec<String> = args.split_whitespace().map(|a| a.replace("@", CORPUS)).collect();
    run_command(&argv)
}

#[test]
fn check_hopf_h1() {
    let o = run("check-hopf @/h1.hopf --degree 3 --seed 7");
    assert_eq!(o.code, EXIT_PASS, "{}", o.output);
}

#[test]
fn negative_fixture_exits_one_with_witness() {
    let o = run("check-hopf @/negative/h2_bad_comul.hopf --degree 2 --samples 10");
    assert_eq!(o.code, EXIT_FAIL);
    assert!(o.output.contains("witness:"), "{}", o.output);
}

#[test]
fn ext_h1_zero() {
    let o = run("ext @/h1.hopf --i 0 --window 6");
    assert_eq!(o.code, EXIT_PASS);
    assert!(o.output.contains("ZeroOnWindow"), "{}", o.output);
}

#[test]
fn ext_window_forms() {
    let a = run("ext @/kz.hopf --i 1 --window 0..6 --format kv");
    let b = run("ext @/kz.hopf --i 1 --window 6 --format kv");
    assert_eq!(a, b);
    assert!(a.output.contains("verdict=OneDimensional"));
    assert!(a.output.contains("nakayama.g=g"));
}

#[test]
fn ext_without_resolution_refuses() {
    let o = run("ext @/g_q2.hopf --i 0");
    assert_eq!(o.code, EXIT_REFUSED, "{}", o.output);
    assert!(o.output.starts_with("refused:"));
}

#[test]
fn usage_errors() {
    assert_eq!(run("").code, EXIT_USAGE);
    assert_eq!(run("frobnicate").code, EXIT_USAGE);
    assert_eq!(run("ext @/kz.hopf").code, EXIT_USAGE);
    assert_eq!(run("ext @/kz.hopf --i 1 --window 5..2").code, EXIT_USAGE);
    assert_eq!(run("basis @/nope.hopf").code, EXIT_USAGE);
    assert_eq!(run("verify-chain @/seq_kz_h2_h1.seq adjoint --corrupt").code, EXIT_USAGE);
    assert_eq!(run("--help").code, EXIT_PASS);
}

#[test]
fn complete_prints_rules() {
    let o = run("complete @/kz.hopf");
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.output, "order: deglex g < ginv\nstatus: confluent\nrules: 2\ng*ginv -> 1\nginv*g -> 1\n");
}

#[test]
fn basis_counts() {
    let o = run("basis @/kz.hopf --degree 3 --format kv");
    assert_eq!(o.output, "algebra=kZ\ndegree.0=1\ndegree.1=2\ndegree.2=2\ndegree.3=2\ntotal=7\n");
}

#[test]
fn embedded_corpus_fallback() {
    let disk = run("basis @/h2.hopf --degree 2");
    let embedded = run_command(&["basis", "corpus/h2.hopf", "--degree", "2"]);
    assert_eq!(disk, embedded);
    assert_eq!(run_command(&["basis", "/nowhere/corpus/h2.hopf", "--degree", "2"]), disk);
}

#[test]
fn check_exact_codes() {
    assert_eq!(run("check-exact @/seq_kz_g_b.seq --samples 10").code, EXIT_PASS);
    let bad = run("check-exact @/negative/seq_bad_projection.seq --samples 10");
    assert_eq!(bad.code, EXIT_FAIL, "{}", bad.output);
}

#[test]
fn verify_chain_pairs() {
    for id in ["star", "harpoon", "phi", "uv", "tor0"] {
        let good = run(&format!("verify-chain @/seq_kz_h2_h1.seq {id} --samples 8"));
        assert_eq!(good.code, EXIT_PASS, "{id}\n{}", good.output);
        let bad = run(&format!("verify-chain @/seq_kz_h2_h1.seq {id} --samples 8 --corrupt"));
        assert_eq!(bad.code, EXIT_FAIL, "{id}\n{}", bad.output);
    }
}

#[test]
fn duality_derive_and_ledger() {
    let dir = std::env::temp_dir().join(format!("hopfcert-ledger-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ledger = dir.join("ledger.tsv");
    let o = run(&format!("duality derive @/manifest.txt --ledger {}", ledger.display()));
    assert_eq!(o.code, EXIT_PASS, "{}", o.output);
    assert!(o.output.contains("dim(H2)=2") && o.output.contains("dim(G_q2)=4"));
    let text = std::fs::read_to_string(&ledger).unwrap();
    assert!(text.lines().all(|l| l.split('\t').count() == 4));
    assert!(text.contains("G_q2\t4\tTwistedCY\textension(kZ-G-B: kZ + B_q2)\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn duality_explain_unknown() {
    let o = run("duality explain Nope --manifest @/manifest.txt");
    assert_eq!(o.code, EXIT_FAIL);
}

#[test]
fn coaction_codes() {
    assert_eq!(run("coaction-check @/kxy_coaction.hopf --degree 4").code, EXIT_PASS);
    let bad = run("coaction-check @/negative/kxy_coaction_noncentral.hopf --degree 2");
    assert_eq!(bad.code, EXIT_FAIL, "{}", bad.output);
    assert_eq!(run("coaction-check @/kz.hopf").code, EXIT_REFUSED);
}
