use std::sync::Arc;

use hopfcert::duality::{derive, parse_manifest, Flavor};
use hopfcert::dsl::{parse_file, parse_presentation, parse_presentation_unchecked};
use hopfcert::exactseq::{certify, SequenceFile, SequenceSpec};
use hopfcert::hopf::{check_hopf_axioms, SweedlerContext};

const ROOT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/");

fn read(rel: &str) -> String {
    std::fs::read_to_string(format!("{ROOT}{rel}")).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn sequence(rel: &str) -> SequenceSpec {
    let sf = SequenceFile::parse(&read(rel)).unwrap();
    let dir = rel.rfind('/').map(|i| &rel[..=i]).unwrap_or("");
    sf.build(&mut |name| {
        let text = read(&format!("{dir}{name}"));
        let p = if sf.checked { parse_presentation(&text)? } else { parse_presentation_unchecked(&text)? };
        Ok(Arc::new(p.hopf))
    })
    .unwrap()
}

const POSITIVE: [&str; 9] = [
    "kz.hopf",
    "kz_f7.hopf",
    "h1.hopf",
    "h2.hopf",
    "b_q2.hopf",
    "b_q3_f7.hopf",
    "g_q2.hopf",
    "g_q3_f7.hopf",
    "kxy_coaction.hopf",
];

#[test]
fn round_trip_whole_corpus() {
    let negatives = [
        "negative/h1_bad_antipode.hopf",
        "negative/kz_bad_counit.hopf",
        "negative/h2_bad_comul.hopf",
        "negative/b_bad_antipode.hopf",
        "negative/g_bad_antipode.hopf",
        "negative/kxy_coaction_noncentral.hopf",
    ];
    for f in POSITIVE.iter().chain(negatives.iter()) {
        let once = parse_file(&read(f)).unwrap();
        let twice = parse_file(&once.to_text()).unwrap();
        assert_eq!(once, twice, "{f}");
    }
}

#[test]
fn h1_shape() {
    let p = parse_presentation(&read("h1.hopf")).unwrap();
    assert_eq!(p.hopf.alphabet().len(), 3);
    assert_eq!(p.file.all_relations().len(), 2);
}

#[test]
fn positive_algebras_are_hopf() {
    let ctx = SweedlerContext::new(3, 7).with_samples(25);
    for f in POSITIVE {
        let a = parse_presentation(&read(f)).unwrap().hopf;
        let rep = check_hopf_axioms(&a, &ctx).unwrap();
        assert!(rep.passed(), "{f}\n{}", rep.render_text());
    }
}

#[test]
fn negative_algebras_fail_with_witness() {
    let ctx = SweedlerContext::new(3, 7).with_samples(25);
    for f in [
        "negative/h1_bad_antipode.hopf",
        "negative/kz_bad_counit.hopf",
        "negative/h2_bad_comul.hopf",
        "negative/b_bad_antipode.hopf",
        "negative/g_bad_antipode.hopf",
    ] {
        let a = parse_presentation_unchecked(&read(f)).unwrap().hopf;
        let rep = check_hopf_axioms(&a, &ctx).unwrap();
        assert!(!rep.passed(), "{f}");
        assert!(rep.failures().all(|c| c.witness.is_some()), "{f}");
    }
}

#[test]
fn sequences_certify() {
    let ctx = SweedlerContext::new(3, 7).with_samples(25);
    for f in ["seq_kz_h2_h1.seq", "seq_kz_g_b.seq", "seq_kz_g_b_f7.seq"] {
        let s = sequence(f);
        let rep = certify(&s, s.degree, s.default_slack(), &ctx).unwrap();
        assert!(rep.passed(), "{f}\n{}", rep.render_text());
    }
    for f in ["negative/seq_bad_inclusion.seq", "negative/seq_bad_projection.seq"] {
        let s = sequence(f);
        assert!(!certify(&s, 3, s.default_slack(), &ctx).unwrap().passed(), "{f}");
    }
}

#[test]
fn expected_duality_facts() {
    let entries = parse_manifest(&read("manifest.txt")).unwrap();
    let mut load = |f: &str| parse_presentation(&read(f));
    let mut text = |f: &str| Ok(read(f));
    let (store, ledgers) = derive(&entries, &mut load, &mut text, 7).unwrap();
    let expect = [
        ("kZ", 1, "CY"),
        ("kZ_F7", 1, "CY"),
        ("H1", 1, "Duality"),
        ("H2", 2, "Duality"),
        ("B_q2", 3, "TwistedCY"),
        ("B_q3_F7", 3, "TwistedCY"),
        ("G_q2", 4, "TwistedCY"),
        ("G_q3_F7", 4, "TwistedCY"),
    ];
    for (id, dim, flavor) in expect {
        let f = store.get(id).unwrap_or_else(|| panic!("{id}"));
        assert_eq!((f.dimension(), f.flavor().label()), (dim, flavor), "{id}");
    }
    assert_eq!(store.get("B_q2").unwrap().flavor(), &Flavor::TwistedCY(None));
    assert!(ledgers.iter().all(|l| l.exactness.is_some() && l.freeness.is_some() && l.bijective_antipodes));
}
