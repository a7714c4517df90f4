use std::sync::Arc;

use hopfcert::chain::{star_action_check, Variant};
use hopfcert::dsl::parse_presentation;
use hopfcert::exactseq::SequenceFile;
use hopfcert::homcalc::{ext_certificate, verify_resolution, ExtVerdict, Resolution};
use hopfcert::hopf::SweedlerContext;

const ROOT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/");

fn read(rel: &str) -> String {
    std::fs::read_to_string(format!("{ROOT}{rel}")).unwrap()
}

fn resolution(rel: &str) -> Resolution {
    let p = parse_presentation(&read(rel)).unwrap();
    Resolution::from_spec(Arc::new(p.hopf), p.file.resolution.as_ref().unwrap()).unwrap()
}

#[test]
fn shipped_resolutions_verify() {
    for (f, w) in [("kz.hopf", 6), ("kz_f7.hopf", 6), ("h1.hopf", 5), ("h2.hopf", 4)] {
        let rep = verify_resolution(&resolution(f), w, 1).unwrap();
        assert!(rep.passed(), "{f}\n{}", rep.render_text());
    }
}

#[test]
fn kz_ext_pattern() {
    let r = resolution("kz.hopf");
    let cx = r.hom_complex();
    assert_eq!(ext_certificate(&cx, 0, 0, 6, 1).unwrap().verdict, ExtVerdict::ZeroOnWindow);
    let one = ext_certificate(&cx, 1, 0, 6, 1).unwrap();
    assert_eq!(one.totals, vec![1, 1, 1]);
    assert!(matches!(one.verdict, ExtVerdict::OneDimensional(_)));
}

#[test]
fn h1_ext_one_grows() {
    let r = resolution("h1.hopf");
    let cx = r.hom_complex();
    assert_eq!(ext_certificate(&cx, 0, 0, 6, 1).unwrap().verdict, ExtVerdict::ZeroOnWindow);
    let one = ext_certificate(&cx, 1, 0, 4, 1).unwrap();
    assert_eq!(one.verdict, ExtVerdict::NonVanishing);
    assert!(one.totals.windows(2).all(|p| p[0] < p[1]), "{:?}", one.totals);
}

#[test]
fn star_on_corpus_sequence() {
    let sf = SequenceFile::parse(&read("seq_kz_h2_h1.seq")).unwrap();
    let h2 = parse_presentation(&read("h2.hopf")).unwrap();
    let a = Arc::new(h2.hopf);
    let seq = sf
        .build(&mut |name| {
            if name == "h2.hopf" {
                Ok(a.clone())
            } else {
                Ok(Arc::new(parse_presentation(&read(name))?.hopf))
            }
        })
        .unwrap();
    let res = Resolution::from_spec(a.clone(), h2.file.resolution.as_ref().unwrap()).unwrap();
    let ctx = SweedlerContext::new(2, 5).with_samples(10);
    assert!(star_action_check(&seq, &res, 1, &ctx, Variant::Faithful).unwrap().passed());
    assert!(!star_action_check(&seq, &res, 1, &ctx, Variant::Corrupted).unwrap().passed());
}
